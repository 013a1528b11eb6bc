//! Deciding instances three ways: the recursive semantic oracle, XP brute
//! force on the clause graph, and the full kernelized pipeline.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use crate::cgis::{build_cgis, ClauseGraph, Selection};
use crate::error::SolveError;
use crate::expansion::{expand_all, Expansion, TautInstance};
use crate::formula::{CnfMatrix, QbfInstance, Quantifier, Var};
use crate::kernel::{kernelize, KernelMode, KernelReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Fpt,
    Xp,
    Oracle,
    Auto,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Fpt => "fpt",
            Method::Xp => "xp",
            Method::Oracle => "oracle",
            Method::Auto => "auto",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Budgets {
    pub max_parts: usize,
    pub max_clauses: usize,
}

impl Default for Budgets {
    fn default() -> Budgets {
        Budgets {
            max_parts: 1 << 20,
            max_clauses: 1 << 26,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub kernel_mode: KernelMode,
    pub budgets: Budgets,
    pub prune: bool,
}

impl Default for SolveOptions {
    fn default() -> SolveOptions {
        SolveOptions {
            kernel_mode: KernelMode::Safe,
            budgets: Budgets::default(),
            prune: true,
        }
    }
}

/// Run statistics; timing fields are wall-clock and vary between runs.
#[derive(Clone, Debug, Default)]
pub struct SolveStats {
    pub method: String,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub clauses: usize,
    pub parts: usize,
    pub part_sizes_pre: Vec<usize>,
    pub part_sizes_post: Vec<usize>,
    pub kernel: Option<KernelReport>,
    pub expand_time: Duration,
    pub kernel_time: Duration,
    pub search_time: Duration,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub answer: bool,
    /// A single assignment to the original universal variables certifying
    /// falsity, when one exists: substituting it leaves an unsatisfiable
    /// existential residual. Interleaved prefixes may require the universal
    /// player to react to existential choices, in which case no static
    /// witness exists and this is `None`.
    pub witness: Option<BTreeMap<Var, bool>>,
    pub stats: SolveStats,
}

/// Recursive truth evaluation straight from the semantics; exponential in
/// the total variable count.
pub fn oracle_eval(inst: &QbfInstance) -> bool {
    fn recurse(entries: &[(Quantifier, Var)], matrix: &CnfMatrix) -> bool {
        if matrix.is_constant_true() {
            return true;
        }
        if matrix.has_empty_clause() {
            return false;
        }
        match entries.split_first() {
            None => {
                // All variables assigned and no empty clause: any remaining
                // clause still has literals over unquantified variables,
                // which a valid instance rules out.
                debug_assert!(matrix.is_empty());
                true
            }
            Some((&(q, v), rest)) => {
                let zero = recurse(rest, &matrix.assign(v, false));
                match (q, zero) {
                    (Quantifier::Exists, true) => true,
                    (Quantifier::Forall, false) => false,
                    _ => recurse(rest, &matrix.assign(v, true)),
                }
            }
        }
    }
    recurse(inst.prefix().entries(), inst.matrix())
}

/// Backtracking enumeration of one-per-part tuples with incremental clash
/// checks. Parts are visited smallest-first (stable on the original order);
/// the returned selection is reported in original part order. Deterministic.
pub fn cgis_brute_force(g: &ClauseGraph) -> Option<Selection> {
    let num_parts = g.num_parts();
    if g.parts().iter().any(Vec::is_empty) {
        return None;
    }
    let mut order: Vec<usize> = (0..num_parts).collect();
    order.sort_by_key(|&i| (g.parts()[i].len(), i));

    let mut chosen: Vec<usize> = Vec::with_capacity(num_parts);
    fn backtrack(g: &ClauseGraph, order: &[usize], chosen: &mut Vec<usize>) -> bool {
        let depth = chosen.len();
        if depth == order.len() {
            return true;
        }
        let part = order[depth];
        for v in 0..g.parts()[part].len() {
            let label = &g.parts()[part][v];
            let ok = chosen
                .iter()
                .enumerate()
                .all(|(lvl, &u)| !label.clash(&g.parts()[order[lvl]][u]));
            if ok {
                chosen.push(v);
                if backtrack(g, order, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }

    if backtrack(g, &order, &mut chosen) {
        let mut sel = vec![0usize; num_parts];
        for (lvl, &part) in order.iter().enumerate() {
            sel[part] = chosen[lvl];
        }
        Some(Selection(sel))
    } else {
        None
    }
}

/// Pulls the clause-graph countermodel back to the original universal
/// variables. Every copied universal must receive a consistent value across
/// branches; otherwise no static countermodel exists.
fn build_witness(
    inst: &QbfInstance,
    taut: &TautInstance,
    graph: &ClauseGraph,
    sel: &Selection,
) -> Option<BTreeMap<Var, bool>> {
    let forced = graph.selection_forced(sel).ok()?;
    let mut witness: BTreeMap<Var, bool> = BTreeMap::new();
    for (v, value) in forced {
        // Pads carry no meaning and are absent from the origin table.
        let Some(&orig) = taut.origin().get(&v) else {
            continue;
        };
        match witness.get(&orig) {
            Some(&prev) if prev != value => return None,
            _ => {
                witness.insert(orig, value);
            }
        }
    }
    for (q, v) in inst.prefix().entries() {
        if *q == Quantifier::Forall {
            witness.entry(*v).or_insert(false);
        }
    }
    Some(witness)
}

fn universal_default_witness(inst: &QbfInstance) -> BTreeMap<Var, bool> {
    inst.prefix()
        .entries()
        .iter()
        .filter(|(q, _)| *q == Quantifier::Forall)
        .map(|(_, v)| (*v, false))
        .collect()
}

/// Decides an instance. `fpt` runs expand → reduce → kernelize → search,
/// `xp` skips the kernel, `oracle` evaluates the semantics directly, and
/// `auto` picks the oracle for small variable counts.
pub fn solve(
    inst: &QbfInstance,
    method: Method,
    opts: &SolveOptions,
) -> Result<Verdict, SolveError> {
    let method = match method {
        Method::Auto if inst.n() <= 20 => Method::Oracle,
        Method::Auto => Method::Fpt,
        other => other,
    };
    let mut stats = SolveStats {
        method: method.name().to_string(),
        n: inst.n(),
        k: inst.k(),
        d: inst.width(),
        clauses: inst.matrix().len(),
        ..SolveStats::default()
    };

    if method == Method::Oracle {
        let t0 = Instant::now();
        let answer = oracle_eval(inst);
        stats.search_time = t0.elapsed();
        return Ok(Verdict {
            answer,
            witness: None,
            stats,
        });
    }

    // Budget check up front: the expansion produces 2^k parts.
    let parts = 1usize
        .checked_shl(inst.k().min(usize::BITS as usize - 1) as u32)
        .unwrap_or(usize::MAX);
    if inst.k() >= usize::BITS as usize || parts > opts.budgets.max_parts {
        return Err(SolveError::Budget {
            which: "parts",
            limit: opts.budgets.max_parts,
            needed: parts,
        });
    }
    let clause_need = parts.saturating_mul(inst.matrix().len());
    if clause_need > opts.budgets.max_clauses {
        return Err(SolveError::Budget {
            which: "clauses",
            limit: opts.budgets.max_clauses,
            needed: clause_need,
        });
    }

    let t0 = Instant::now();
    let expansion = expand_all(inst, opts.prune);
    stats.expand_time = t0.elapsed();

    let taut = match expansion {
        Expansion::Decided(true) => {
            return Ok(Verdict {
                answer: true,
                witness: None,
                stats,
            });
        }
        Expansion::Decided(false) => {
            // Every branch formula collapsed to constant false: some purely
            // existential clause is falsified on every branch, so any
            // universal assignment witnesses falsity.
            return Ok(Verdict {
                answer: false,
                witness: Some(universal_default_witness(inst)),
                stats,
            });
        }
        Expansion::Open(t) => t,
    };

    let graph = build_cgis(&taut);
    stats.parts = graph.num_parts();
    stats.part_sizes_pre = graph.part_sizes();

    let graph = if method == Method::Fpt {
        let t1 = Instant::now();
        let (reduced, report) = kernelize(&graph, opts.kernel_mode);
        stats.kernel_time = t1.elapsed();
        stats.kernel = Some(report);
        reduced
    } else {
        graph
    };
    stats.part_sizes_post = graph.part_sizes();

    let t2 = Instant::now();
    let selection = cgis_brute_force(&graph);
    stats.search_time = t2.elapsed();

    match selection {
        // An independent selection falsifies the disjunction: the QBF is
        // false.
        Some(sel) => {
            let witness = build_witness(inst, &taut, &graph, &sel);
            Ok(Verdict {
                answer: false,
                witness,
                stats,
            })
        }
        None => Ok(Verdict {
            answer: true,
            witness: None,
            stats,
        }),
    }
}

/// Checks a falsity witness: substituting it must leave an existential
/// residual that no assignment of the remaining variables satisfies.
pub fn check_witness(inst: &QbfInstance, witness: &BTreeMap<Var, bool>) -> bool {
    let mut matrix = inst.matrix().clone();
    for (q, v) in inst.prefix().entries() {
        if *q == Quantifier::Forall {
            let Some(&b) = witness.get(v) else {
                return false;
            };
            matrix = matrix.assign(*v, b);
        }
    }
    let existentials: Vec<Var> = inst
        .prefix()
        .entries()
        .iter()
        .filter(|(q, _)| *q == Quantifier::Exists)
        .map(|(_, v)| *v)
        .collect();
    fn sat(matrix: &CnfMatrix, vars: &[Var]) -> bool {
        if matrix.is_constant_true() {
            return true;
        }
        if matrix.has_empty_clause() {
            return false;
        }
        match vars.split_first() {
            None => {
                debug_assert!(matrix.is_empty());
                true
            }
            Some((&v, rest)) => {
                sat(&matrix.assign(v, false), rest) || sat(&matrix.assign(v, true), rest)
            }
        }
    }
    !sat(&matrix, &existentials)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_util::qbf;

    #[test]
    fn oracle_unit_cases() {
        assert!(oracle_eval(&qbf(&[('e', 1)], &[&[1]])));
        assert!(!oracle_eval(&qbf(&[('a', 1)], &[&[1]])));
        // n = 0 with an empty (true) matrix.
        assert!(oracle_eval(&qbf(&[], &[])));
    }

    #[test]
    fn oracle_alternation() {
        assert!(oracle_eval(&qbf(
            &[('a', 1), ('e', 2)],
            &[&[1, 2], &[-1, -2]]
        )));
        assert!(!oracle_eval(&qbf(
            &[('e', 1), ('a', 2)],
            &[&[1, 2], &[-1, -2]]
        )));
    }

    #[test]
    fn brute_force_figure1() {
        use crate::cgis::build_cgis;
        use crate::expansion::TautInstance;
        use crate::test_util::figure1_formulas;
        use std::collections::{BTreeMap, BTreeSet};
        let formulas = figure1_formulas();
        let universe: BTreeSet<Var> = formulas.iter().flat_map(|m| m.vars()).collect();
        let origin: BTreeMap<Var, Var> = universe.iter().map(|v| (*v, *v)).collect();
        let prov = formulas.iter().map(|_| Vec::new()).collect();
        let g = build_cgis(&TautInstance::new(universe, formulas, prov, origin));
        let sel = cgis_brute_force(&g).expect("an independent selection exists");
        assert!(g.is_independent(&sel).unwrap());
    }

    #[test]
    fn brute_force_trivial_graphs() {
        use crate::cgis::build_cgis;
        use crate::expansion::{expand_all, Expansion};
        // ∀x1∃x2 example reduces to the clashing 2-part unit graph.
        let inst = qbf(&[('a', 1), ('e', 2)], &[&[1, 2], &[-1, -2]]);
        let Expansion::Open(t) = expand_all(&inst, true) else {
            panic!("open expected");
        };
        let g = build_cgis(&t);
        assert_eq!(cgis_brute_force(&g), None);
    }

    #[test]
    fn solve_methods_agree_on_examples() {
        let cases = [
            qbf(&[('a', 1), ('e', 2)], &[&[1, 2], &[-1, -2]]),
            qbf(&[('e', 1), ('a', 2)], &[&[1, 2], &[-1, -2]]),
            qbf(&[('e', 1)], &[&[1]]),
            qbf(&[('a', 1)], &[&[1]]),
        ];
        let opts = SolveOptions::default();
        for inst in &cases {
            let oracle = solve(inst, Method::Oracle, &opts).unwrap().answer;
            let xp = solve(inst, Method::Xp, &opts).unwrap().answer;
            let fpt = solve(inst, Method::Fpt, &opts).unwrap().answer;
            assert_eq!(oracle, xp);
            assert_eq!(oracle, fpt);
        }
    }

    #[test]
    fn false_verdict_carries_checkable_witness() {
        let inst = qbf(&[('e', 1), ('a', 2)], &[&[1, 2], &[-1, -2]]);
        let v = solve(&inst, Method::Fpt, &SolveOptions::default()).unwrap();
        assert!(!v.answer);
        // x2 is quantified after x1: the universal response depends on the
        // existential choice, so no static witness exists.
        assert!(v.witness.is_none());

        // ∀-prefixed false instance: a static witness must exist and check.
        let ae = qbf(&[('a', 1), ('a', 2), ('e', 3)], &[&[1], &[2, 3]]);
        let v = solve(&ae, Method::Fpt, &SolveOptions::default()).unwrap();
        assert!(!v.answer);
        let w = v.witness.expect("forall-exists instances have witnesses");
        assert!(check_witness(&ae, &w));
    }

    #[test]
    fn budget_exhaustion_is_a_refusal() {
        let inst = qbf(&[('e', 1), ('e', 2), ('e', 3)], &[&[1, 2]]);
        let opts = SolveOptions {
            budgets: Budgets {
                max_parts: 4,
                max_clauses: 1 << 20,
            },
            ..SolveOptions::default()
        };
        assert!(matches!(
            solve(&inst, Method::Fpt, &opts),
            Err(SolveError::Budget { which: "parts", .. })
        ));
    }

    #[test]
    fn auto_uses_oracle_for_small_instances() {
        let inst = qbf(&[('a', 1), ('e', 2)], &[&[1, 2]]);
        let v = solve(&inst, Method::Auto, &SolveOptions::default()).unwrap();
        assert_eq!(v.stats.method, "oracle");
    }
}
