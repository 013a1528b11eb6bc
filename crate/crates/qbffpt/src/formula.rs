//! Literals, clauses, CNF matrices and prenex quantifier prefixes.
//!
//! Everything here is an immutable value; operations return fresh values and
//! are safe to share across threads.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use crate::error::FormulaError;

/// A propositional variable, identified by a positive integer.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Var(u32);

impl Var {
    pub fn new(id: u32) -> Result<Var, FormulaError> {
        if id == 0 {
            return Err(FormulaError::ZeroVariable);
        }
        Ok(Var(id))
    }

    /// Shorthand for trusted (compile-time) identifiers; panics on 0.
    pub fn of(id: u32) -> Var {
        Var::new(id).expect("variable identifiers start at 1")
    }

    pub fn id(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Literal {
    var: Var,
    positive: bool,
}

impl Literal {
    pub fn new(var: Var, positive: bool) -> Literal {
        Literal { var, positive }
    }

    pub fn pos(var: Var) -> Literal {
        Literal::new(var, true)
    }

    pub fn neg(var: Var) -> Literal {
        Literal::new(var, false)
    }

    pub fn var(self) -> Var {
        self.var
    }

    pub fn is_positive(self) -> bool {
        self.positive
    }

    pub fn negated(self) -> Literal {
        Literal::new(self.var, !self.positive)
    }

    /// Signed DIMACS encoding: `v` for a positive, `-v` for a negated literal.
    pub fn to_dimacs(self) -> i64 {
        let v = i64::from(self.var.id());
        if self.positive {
            v
        } else {
            -v
        }
    }

    pub fn from_dimacs(code: i64) -> Result<Literal, FormulaError> {
        if code == 0 || code.unsigned_abs() > u64::from(u32::MAX) {
            return Err(FormulaError::LiteralOutOfRange(code));
        }
        Ok(Literal::new(Var::of(code.unsigned_abs() as u32), code > 0))
    }

    /// True under an assignment of its variable.
    pub fn satisfied_by(self, value: bool) -> bool {
        self.positive == value
    }
}

// Canonical order: by variable, positive before negative.
impl Ord for Literal {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.var, !self.positive).cmp(&(other.var, !other.positive))
    }
}

impl PartialOrd for Literal {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            write!(f, "¬")?;
        }
        write!(f, "{}", self.var)
    }
}

/// A clause: a canonically ordered set of literals with no variable repeated.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Clause {
    lits: Vec<Literal>,
}

impl Clause {
    pub fn new(mut lits: Vec<Literal>) -> Result<Clause, FormulaError> {
        lits.sort();
        for pair in lits.windows(2) {
            if pair[0] == pair[1] {
                return Err(FormulaError::DuplicateLiteral(pair[0].to_dimacs()));
            }
            if pair[0].var() == pair[1].var() {
                return Err(FormulaError::OppositeLiterals(pair[0].var().id()));
            }
        }
        Ok(Clause { lits })
    }

    pub fn empty() -> Clause {
        Clause { lits: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn literals(&self) -> &[Literal] {
        &self.lits
    }

    pub fn contains(&self, lit: Literal) -> bool {
        self.lits.binary_search(&lit).is_ok()
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.lits.binary_search_by_key(&v, |l| l.var()).is_ok()
    }

    pub fn literal_set(&self) -> BTreeSet<Literal> {
        self.lits.iter().copied().collect()
    }

    /// Two clauses clash when some variable occurs with opposite polarity.
    pub fn clash(&self, other: &Clause) -> bool {
        // Both literal lists are sorted by variable; a single merge pass
        // suffices.
        let (mut i, mut j) = (0, 0);
        while i < self.lits.len() && j < other.lits.len() {
            let (a, b) = (self.lits[i], other.lits[j]);
            match a.var().cmp(&b.var()) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    if a.is_positive() != b.is_positive() {
                        return true;
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        false
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lits.is_empty() {
            return write!(f, "⊥");
        }
        let parts: Vec<String> = self.lits.iter().map(|l| l.to_string()).collect();
        write!(f, "({})", parts.join("∨"))
    }
}

/// A CNF matrix: an ordered, duplicate-free list of clauses.
///
/// The empty matrix is constant true; a matrix holding the empty clause is
/// constant false.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CnfMatrix {
    clauses: Vec<Clause>,
}

impl CnfMatrix {
    /// Builds a matrix, silently dropping repeated clauses (first
    /// occurrence wins). Returns the number of dropped duplicates so parsers
    /// can warn.
    pub fn from_clauses(clauses: Vec<Clause>) -> (CnfMatrix, usize) {
        let mut seen = HashSet::with_capacity(clauses.len());
        let mut out = Vec::with_capacity(clauses.len());
        let mut dropped = 0;
        for c in clauses {
            if seen.insert(c.clone()) {
                out.push(c);
            } else {
                dropped += 1;
            }
        }
        (CnfMatrix { clauses: out }, dropped)
    }

    pub fn empty() -> CnfMatrix {
        CnfMatrix {
            clauses: Vec::new(),
        }
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Maximum clause size.
    pub fn width(&self) -> usize {
        self.clauses.iter().map(Clause::len).max().unwrap_or(0)
    }

    /// Constant true: the empty conjunction.
    pub fn is_constant_true(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Constant false: some clause is the empty disjunction.
    pub fn has_empty_clause(&self) -> bool {
        self.clauses.iter().any(Clause::is_empty)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.clauses
            .iter()
            .flat_map(|c| c.literals().iter().map(|l| l.var()))
            .collect()
    }

    /// φ[v = b]: drop satisfied clauses, strip the falsified literal from the
    /// rest.
    pub fn assign(&self, v: Var, b: bool) -> CnfMatrix {
        let satisfied = Literal::new(v, b);
        let falsified = satisfied.negated();
        let mut out = Vec::with_capacity(self.clauses.len());
        for c in &self.clauses {
            if c.contains(satisfied) {
                continue;
            }
            if c.contains(falsified) {
                let lits: Vec<Literal> = c
                    .literals()
                    .iter()
                    .copied()
                    .filter(|l| *l != falsified)
                    .collect();
                out.push(Clause { lits });
            } else {
                out.push(c.clone());
            }
        }
        // Stripping a literal can merge two clauses into one.
        CnfMatrix::from_clauses(out).0
    }

    /// Evaluates under a total assignment; partial assignments are rejected.
    pub fn evaluate(&self, a: &Assignment) -> Result<bool, FormulaError> {
        for c in &self.clauses {
            let mut sat = false;
            for l in c.literals() {
                let value = a
                    .get(l.var())
                    .ok_or(FormulaError::PartialAssignment(l.var().id()))?;
                if l.satisfied_by(value) {
                    sat = true;
                }
            }
            if !sat {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A total or partial truth assignment.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Assignment {
    values: BTreeMap<Var, bool>,
}

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn from_map(values: BTreeMap<Var, bool>) -> Assignment {
        Assignment { values }
    }

    pub fn set(&mut self, v: Var, b: bool) {
        self.values.insert(v, b);
    }

    pub fn get(&self, v: Var) -> Option<bool> {
        self.values.get(&v).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, bool)> + '_ {
        self.values.iter().map(|(v, b)| (*v, *b))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Quantifier {
    Forall,
    Exists,
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantifier::Forall => write!(f, "∀"),
            Quantifier::Exists => write!(f, "∃"),
        }
    }
}

/// The quantifier prefix Q₁x₁…Qₙxₙ; variables are pairwise distinct.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuantPrefix {
    entries: Vec<(Quantifier, Var)>,
}

impl QuantPrefix {
    pub fn new(entries: Vec<(Quantifier, Var)>) -> Result<QuantPrefix, FormulaError> {
        let mut seen = HashSet::with_capacity(entries.len());
        for (_, v) in &entries {
            if !seen.insert(*v) {
                return Err(FormulaError::DuplicateQuantifier(v.id()));
            }
        }
        Ok(QuantPrefix { entries })
    }

    pub fn empty() -> QuantPrefix {
        QuantPrefix {
            entries: Vec::new(),
        }
    }

    pub fn entries(&self) -> &[(Quantifier, Var)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.entries.iter().map(|(_, v)| *v).collect()
    }

    pub fn exists_count(&self) -> usize {
        self.entries
            .iter()
            .filter(|(q, _)| *q == Quantifier::Exists)
            .count()
    }

    /// Index of the last existential entry, if any.
    pub fn last_exists(&self) -> Option<usize> {
        self.entries
            .iter()
            .rposition(|(q, _)| *q == Quantifier::Exists)
    }
}

/// A prenex QBF: prefix plus CNF matrix, with every matrix variable
/// quantified exactly once.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QbfInstance {
    prefix: QuantPrefix,
    matrix: CnfMatrix,
}

impl QbfInstance {
    pub fn new(prefix: QuantPrefix, matrix: CnfMatrix) -> Result<QbfInstance, FormulaError> {
        let quantified = prefix.vars();
        for v in matrix.vars() {
            if !quantified.contains(&v) {
                return Err(FormulaError::UnquantifiedVariable(v.id()));
            }
        }
        Ok(QbfInstance { prefix, matrix })
    }

    pub fn prefix(&self) -> &QuantPrefix {
        &self.prefix
    }

    pub fn matrix(&self) -> &CnfMatrix {
        &self.matrix
    }

    /// Number of existentially quantified variables.
    pub fn k(&self) -> usize {
        self.prefix.exists_count()
    }

    /// Maximum clause size of the matrix.
    pub fn width(&self) -> usize {
        self.matrix.width()
    }

    /// Total number of quantified variables.
    pub fn n(&self) -> usize {
        self.prefix.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clause(lits: &[i64]) -> Clause {
        Clause::new(
            lits.iter()
                .map(|&l| Literal::from_dimacs(l).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn clause_rejects_duplicates_and_opposites() {
        let a = Literal::pos(Var::of(1));
        assert!(Clause::new(vec![a, a]).is_err());
        assert!(Clause::new(vec![a, a.negated()]).is_err());
    }

    #[test]
    fn clash_figure1_pairs() {
        // Figure 1, edge u1–v1 and non-edge u1–v2.
        let u1 = clause(&[1, 2, 3]);
        let v1 = clause(&[2, -3, -6]);
        let v2 = clause(&[-4, -5, 6]);
        assert!(u1.clash(&v1));
        assert!(!u1.clash(&v2));
        assert!(!u1.clash(&u1));
    }

    #[test]
    fn clash_is_symmetric() {
        let a = clause(&[1, -2, 4]);
        let b = clause(&[2, 3]);
        assert_eq!(a.clash(&b), b.clash(&a));
        assert!(a.clash(&b));
    }

    #[test]
    fn assign_simplifies() {
        let (m, _) = CnfMatrix::from_clauses(vec![clause(&[1, 2]), clause(&[-1, -2])]);
        let pos = m.assign(Var::of(1), true);
        assert_eq!(pos.clauses(), &[clause(&[-2])]);
        let neg = m.assign(Var::of(1), false);
        assert_eq!(neg.clauses(), &[clause(&[2])]);
    }

    #[test]
    fn assign_falsified_unit_leaves_empty_clause() {
        let (m, _) = CnfMatrix::from_clauses(vec![clause(&[1])]);
        let out = m.assign(Var::of(1), false);
        assert!(out.has_empty_clause());
    }

    #[test]
    fn assign_never_mentions_assigned_var() {
        let (m, _) = CnfMatrix::from_clauses(vec![clause(&[1, 2, 3]), clause(&[-1, 2]), clause(&[3])]);
        for b in [false, true] {
            let out = m.assign(Var::of(1), b);
            assert!(!out.vars().contains(&Var::of(1)));
        }
    }

    #[test]
    fn evaluate_edge_cases() {
        let a = Assignment::new();
        assert!(CnfMatrix::empty().evaluate(&a).unwrap());
        let (falsum, _) = CnfMatrix::from_clauses(vec![Clause::empty()]);
        assert!(!falsum.evaluate(&a).unwrap());
        // Partial assignments are rejected.
        let (m, _) = CnfMatrix::from_clauses(vec![clause(&[1])]);
        assert!(m.evaluate(&a).is_err());
    }

    #[test]
    fn evaluate_figure1_assignment() {
        // Figure 1 caption: α(x1)=α(x2)=α(x6)=1, rest 0 falsifies every φ_i.
        let phis = crate::test_util::figure1_formulas();
        let mut a = Assignment::new();
        for (v, b) in [(1, true), (2, true), (3, false), (4, false), (5, false), (6, true)] {
            a.set(Var::of(v), b);
        }
        for phi in &phis {
            assert!(!phi.evaluate(&a).unwrap());
        }
    }

    #[test]
    fn prefix_rejects_repeats() {
        assert!(QuantPrefix::new(vec![
            (Quantifier::Exists, Var::of(1)),
            (Quantifier::Forall, Var::of(1)),
        ])
        .is_err());
    }

    #[test]
    fn instance_rejects_free_variables() {
        let prefix = QuantPrefix::new(vec![(Quantifier::Exists, Var::of(1))]).unwrap();
        let (m, _) = CnfMatrix::from_clauses(vec![clause(&[1, 2])]);
        assert!(QbfInstance::new(prefix, m).is_err());
    }
}
