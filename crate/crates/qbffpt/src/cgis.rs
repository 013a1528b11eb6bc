//! The k-partite d-clause graph: one part per disjunct of a tautology-test
//! instance, one vertex per clause, edges given implicitly by clashing
//! labels. A one-per-part independent set exists iff the disjunction is not
//! a tautology.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::error::CgisError;
use crate::expansion::TautInstance;
use crate::formula::{Assignment, Clause, Literal, Var};

/// A clause-labelled multipartite graph. Labels all have exactly `d`
/// literals and are injective within each part; adjacency is derived from
/// the clash relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseGraph {
    universe: BTreeSet<Var>,
    pads: Vec<Var>,
    parts: Vec<Vec<Clause>>,
    d: usize,
}

/// One vertex index per part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Selection(pub Vec<usize>);

impl ClauseGraph {
    /// Assembles a graph from already-uniform parts, re-validating the label
    /// width and per-part injectivity. Used by the dump parser.
    pub fn from_parts(
        universe: BTreeSet<Var>,
        pads: Vec<Var>,
        parts: Vec<Vec<Clause>>,
        d: usize,
    ) -> Result<ClauseGraph, CgisError> {
        for (i, part) in parts.iter().enumerate() {
            let mut seen = HashSet::with_capacity(part.len());
            for label in part {
                if label.len() != d {
                    return Err(CgisError::ClauseTooWide {
                        size: label.len(),
                        width: d,
                    });
                }
                if !seen.insert(label.clone()) {
                    return Err(CgisError::DuplicateLabel(i));
                }
            }
        }
        Ok(ClauseGraph {
            universe,
            pads,
            parts,
            d,
        })
    }

    pub fn universe(&self) -> &BTreeSet<Var> {
        &self.universe
    }

    pub fn pads(&self) -> &[Var] {
        &self.pads
    }

    pub fn parts(&self) -> &[Vec<Clause>] {
        &self.parts
    }

    pub fn part_sizes(&self) -> Vec<usize> {
        self.parts.iter().map(Vec::len).collect()
    }

    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn label(&self, part: usize, vertex: usize) -> Result<&Clause, CgisError> {
        let p = self
            .parts
            .get(part)
            .ok_or(CgisError::PartOutOfRange(part))?;
        p.get(vertex)
            .ok_or(CgisError::VertexOutOfRange { part, vertex })
    }

    /// Vertices in distinct parts are adjacent iff their labels clash.
    pub fn adjacent(
        &self,
        a: (usize, usize),
        b: (usize, usize),
    ) -> Result<bool, CgisError> {
        if a.0 == b.0 {
            return Ok(false);
        }
        Ok(self.label(a.0, a.1)?.clash(self.label(b.0, b.1)?))
    }

    /// Replaces one part, keeping everything else.
    pub(crate) fn with_part(&self, part: usize, labels: Vec<Clause>) -> ClauseGraph {
        let mut parts = self.parts.clone();
        parts[part] = labels;
        ClauseGraph {
            universe: self.universe.clone(),
            pads: self.pads.clone(),
            parts,
            d: self.d,
        }
    }

    pub(crate) fn with_parts(&self, parts: Vec<Vec<Clause>>) -> ClauseGraph {
        ClauseGraph {
            universe: self.universe.clone(),
            pads: self.pads.clone(),
            parts,
            d: self.d,
        }
    }

    /// True iff the selection picks one vertex per part and no chosen pair
    /// clashes.
    pub fn is_independent(&self, s: &Selection) -> Result<bool, CgisError> {
        let chosen = self.chosen_labels(s)?;
        for i in 0..chosen.len() {
            for j in i + 1..chosen.len() {
                if chosen[i].clash(chosen[j]) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn chosen_labels(&self, s: &Selection) -> Result<Vec<&Clause>, CgisError> {
        if s.0.len() != self.parts.len() {
            return Err(CgisError::SelectionArity {
                got: s.0.len(),
                expected: self.parts.len(),
            });
        }
        s.0.iter()
            .enumerate()
            .map(|(part, &vertex)| self.label(part, vertex))
            .collect()
    }

    /// Literals forced false by an independent selection: every literal of
    /// every chosen label, negated.
    pub fn selection_forced(&self, s: &Selection) -> Result<BTreeMap<Var, bool>, CgisError> {
        let chosen = self.chosen_labels(s)?;
        let mut forced: BTreeMap<Var, bool> = BTreeMap::new();
        for (i, label) in chosen.iter().enumerate() {
            for lit in label.literals() {
                let value = !lit.is_positive();
                if let Some(prev) = forced.get(&lit.var()) {
                    if *prev != value {
                        // Opposite literals across chosen labels: not
                        // independent.
                        let j = chosen
                            .iter()
                            .position(|c| c.contains(lit.negated()))
                            .unwrap_or(i);
                        return Err(CgisError::NotIndependent(j, i));
                    }
                } else {
                    forced.insert(lit.var(), value);
                }
            }
        }
        Ok(forced)
    }

    /// A total assignment over the universe falsifying every chosen label
    /// (and hence every source formula); unconstrained variables default to
    /// false.
    pub fn extract_countermodel(&self, s: &Selection) -> Result<Assignment, CgisError> {
        let forced = self.selection_forced(s)?;
        let mut out = Assignment::new();
        for &v in &self.universe {
            out.set(v, forced.get(&v).copied().unwrap_or(false));
        }
        Ok(out)
    }
}

/// Pads a clause to exactly `d` literals with positive occurrences of the
/// first reserved pad variables. Pads occur only positively, so the clash
/// relation is unchanged.
pub fn pad_clause(c: &Clause, d: usize, pads: &[Var]) -> Result<Clause, CgisError> {
    if c.len() > d {
        return Err(CgisError::ClauseTooWide {
            size: c.len(),
            width: d,
        });
    }
    let deficit = d - c.len();
    debug_assert!(pads.len() >= deficit, "pad pool too small");
    let mut lits: Vec<Literal> = c.literals().to_vec();
    lits.extend(pads[..deficit].iter().map(|&p| Literal::pos(p)));
    Ok(Clause::new(lits).expect("pads are fresh variables"))
}

/// Builds the clause graph: one part per formula, one vertex per clause,
/// labels padded to uniform width and deduplicated within each part.
pub fn build_cgis(t: &TautInstance) -> ClauseGraph {
    let d = t.width();
    // d - 1 pads suffice when clauses are nonempty; an empty clause (a
    // constant-false disjunct kept by no-prune mode) needs d.
    let min_len = t
        .formulas()
        .iter()
        .flat_map(|m| m.clauses().iter().map(Clause::len))
        .min()
        .unwrap_or(d);
    let pool = d.saturating_sub(min_len);
    let mut next = t.universe().iter().map(|v| v.id()).max().unwrap_or(0) + 1;
    let mut pads = Vec::with_capacity(pool);
    for _ in 0..pool {
        pads.push(Var::of(next));
        next += 1;
    }

    let mut universe = t.universe().clone();
    universe.extend(pads.iter().copied());

    let parts = t
        .formulas()
        .iter()
        .map(|m| {
            let mut seen = HashSet::with_capacity(m.len());
            let mut labels = Vec::with_capacity(m.len());
            for c in m.clauses() {
                let padded = pad_clause(c, d, &pads).expect("width is the maximum clause size");
                // Padding can collide (e.g. (x1) and (x1∨p1) both pad to
                // (x1∨p1∨p2)); identical labels are falsified together, so
                // merging them preserves selections.
                if seen.insert(padded.clone()) {
                    labels.push(padded);
                }
            }
            labels
        })
        .collect();

    ClauseGraph {
        universe,
        pads,
        parts,
        d,
    }
}
