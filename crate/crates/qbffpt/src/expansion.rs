//! Existential elimination: rewrite a QBF into a disjunction of
//! all-universal d-CNF formulas, one per assignment of the eliminated
//! existentials.
//!
//! Each step removes the *last* existential quantifier: the trailing
//! universal block is duplicated into fresh 0/1 copies and every formula is
//! split into its `x=0` and `x=1` branch. After `k` steps the prefix is
//! all-universal and the original formula holds iff the disjunction of the
//! produced formulas is a tautology.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::error::ExpansionError;
use crate::formula::{CnfMatrix, QbfInstance, QuantPrefix, Quantifier, Var};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// A tautology-test instance: is the disjunction of `formulas` over
/// `universe` a tautology?
#[derive(Clone, Debug)]
pub struct TautInstance {
    universe: BTreeSet<Var>,
    formulas: Vec<CnfMatrix>,
    /// Per formula, the 0/1 choices of the eliminated existentials, in
    /// elimination order (last existential first).
    provenance: Vec<Vec<bool>>,
    /// Maps every universe variable back to the original variable it copies
    /// (identity for variables that were never duplicated).
    origin: BTreeMap<Var, Var>,
}

impl TautInstance {
    pub fn new(
        universe: BTreeSet<Var>,
        formulas: Vec<CnfMatrix>,
        provenance: Vec<Vec<bool>>,
        origin: BTreeMap<Var, Var>,
    ) -> TautInstance {
        assert_eq!(formulas.len(), provenance.len());
        TautInstance {
            universe,
            formulas,
            provenance,
            origin,
        }
    }

    pub fn universe(&self) -> &BTreeSet<Var> {
        &self.universe
    }

    pub fn formulas(&self) -> &[CnfMatrix] {
        &self.formulas
    }

    pub fn provenance(&self) -> &[Vec<bool>] {
        &self.provenance
    }

    pub fn origin(&self) -> &BTreeMap<Var, Var> {
        &self.origin
    }

    pub fn width(&self) -> usize {
        self.formulas.iter().map(CnfMatrix::width).max().unwrap_or(0)
    }
}

/// Outcome of full expansion: either decided outright by a constant
/// disjunct, or an open tautology question.
#[derive(Clone, Debug)]
pub enum Expansion {
    Decided(bool),
    Open(TautInstance),
}

/// Working state of the elimination loop; exposed so single steps can be
/// driven and inspected directly.
#[derive(Clone, Debug)]
pub struct ExpansionState {
    prefix: QuantPrefix,
    formulas: Vec<(CnfMatrix, Vec<bool>)>,
    next_var: u32,
    origin: BTreeMap<Var, Var>,
}

impl ExpansionState {
    pub fn start(inst: &QbfInstance) -> ExpansionState {
        let next_var = inst
            .prefix()
            .entries()
            .iter()
            .map(|(_, v)| v.id())
            .max()
            .unwrap_or(0)
            + 1;
        let origin = inst
            .prefix()
            .entries()
            .iter()
            .map(|(_, v)| (*v, *v))
            .collect();
        ExpansionState {
            prefix: inst.prefix().clone(),
            formulas: vec![(inst.matrix().clone(), Vec::new())],
            next_var,
            origin,
        }
    }

    pub fn prefix(&self) -> &QuantPrefix {
        &self.prefix
    }

    pub fn formulas(&self) -> &[(CnfMatrix, Vec<bool>)] {
        &self.formulas
    }

    /// Eliminates the last existential quantifier. The trailing universals
    /// are duplicated into fresh copies x⁰ and x¹; each formula splits into
    /// its substituted-then-renamed 0- and 1-branch.
    pub fn eliminate_last_existential(&mut self) -> Result<(), ExpansionError> {
        let i = self
            .prefix
            .last_exists()
            .ok_or(ExpansionError::NoExistential)?;
        let entries = self.prefix.entries();
        let (exists_q, pivot) = entries[i];
        debug_assert_eq!(exists_q, Quantifier::Exists);
        let old_exists = self.prefix.exists_count();
        let trailing: Vec<Var> = entries[i + 1..].iter().map(|(_, v)| *v).collect();
        debug_assert!(entries[i + 1..]
            .iter()
            .all(|(q, _)| *q == Quantifier::Forall));

        // Fresh copies of the trailing universal block, branch 0 then 1.
        let mut renames: [BTreeMap<Var, Var>; 2] = [BTreeMap::new(), BTreeMap::new()];
        for branch in 0..2 {
            for &v in &trailing {
                let fresh = Var::of(self.next_var);
                self.next_var += 1;
                renames[branch].insert(v, fresh);
                let orig = self.origin[&v];
                self.origin.insert(fresh, orig);
            }
        }

        let mut new_entries: Vec<(Quantifier, Var)> = entries[..i].to_vec();
        for rename in &renames {
            for &v in &trailing {
                new_entries.push((Quantifier::Forall, rename[&v]));
            }
        }
        let old_prefix_len = entries.len();
        self.prefix = QuantPrefix::new(new_entries).expect("fresh variables are distinct");

        let branch = |matrix: &CnfMatrix, bits: &[bool], b: bool| {
            let rename = &renames[usize::from(b)];
            let mut substituted = matrix.assign(pivot, b);
            for &v in &trailing {
                substituted = rename_var(&substituted, v, rename[&v]);
            }
            let mut prov = bits.to_vec();
            prov.push(b);
            (substituted, prov)
        };

        // Fork only when the work amortizes the dispatch overhead.
        let work: usize = self.formulas.iter().map(|(m, _)| m.len()).sum();
        #[cfg(feature = "parallel")]
        let new_formulas: Vec<(CnfMatrix, Vec<bool>)> = if work >= 4096 {
            self.formulas
                .par_iter()
                .flat_map_iter(|(m, bits)| [branch(m, bits, false), branch(m, bits, true)])
                .collect()
        } else {
            self.formulas
                .iter()
                .flat_map(|(m, bits)| [branch(m, bits, false), branch(m, bits, true)])
                .collect()
        };
        #[cfg(not(feature = "parallel"))]
        let new_formulas: Vec<(CnfMatrix, Vec<bool>)> = {
            let _ = work;
            self.formulas
                .iter()
                .flat_map(|(m, bits)| [branch(m, bits, false), branch(m, bits, true)])
                .collect()
        };

        // Per-step guarantees of the elimination procedure.
        assert!(self.prefix.len() <= 2 * old_prefix_len);
        assert!(new_formulas.len() <= 2 * self.formulas.len());
        let old_max = self.formulas.iter().map(|(m, _)| m.len()).max().unwrap_or(0);
        assert!(new_formulas.iter().all(|(m, _)| m.len() <= old_max));
        assert_eq!(self.prefix.exists_count() + 1, old_exists);

        self.formulas = new_formulas;
        Ok(())
    }

    /// Drops constant-false disjuncts; reports whether a constant-true
    /// disjunct was seen.
    fn prune(&mut self) -> bool {
        if self.formulas.iter().any(|(m, _)| m.is_constant_true()) {
            return true;
        }
        self.formulas.retain(|(m, _)| !m.has_empty_clause());
        false
    }

    fn into_taut(self) -> TautInstance {
        let universe = self.prefix.vars();
        let mut origin = self.origin;
        origin.retain(|v, _| universe.contains(v));
        let (formulas, provenance) = self.formulas.into_iter().unzip();
        TautInstance::new(universe, formulas, provenance, origin)
    }
}

/// Replaces every occurrence of `from` by `to` (same polarity).
fn rename_var(m: &CnfMatrix, from: Var, to: Var) -> CnfMatrix {
    use crate::formula::{Clause, Literal};
    let clauses: Vec<Clause> = m
        .clauses()
        .iter()
        .map(|c| {
            let lits: Vec<Literal> = c
                .literals()
                .iter()
                .map(|l| {
                    if l.var() == from {
                        Literal::new(to, l.is_positive())
                    } else {
                        *l
                    }
                })
                .collect();
            Clause::new(lits).expect("renaming preserves clause validity")
        })
        .collect();
    CnfMatrix::from_clauses(clauses).0
}

/// Eliminates every existential quantifier. With `prune`, constant
/// disjuncts short-circuit: a constant-true formula decides the instance
/// TRUE, and if all formulas become constant-false the instance is FALSE.
pub fn expand_all(inst: &QbfInstance, prune: bool) -> Expansion {
    let mut state = ExpansionState::start(inst);
    if prune {
        if state.prune() {
            return Expansion::Decided(true);
        }
        if state.formulas.is_empty() {
            return Expansion::Decided(false);
        }
    }
    let k = inst.k();
    for _ in 0..k {
        state
            .eliminate_last_existential()
            .expect("loop is bounded by the existential count");
        if prune {
            if state.prune() {
                return Expansion::Decided(true);
            }
            if state.formulas.is_empty() {
                return Expansion::Decided(false);
            }
        }
    }
    debug_assert!(state.formulas.len() <= 1usize << k.min(63));
    Expansion::Open(state.into_taut())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_util::{matrix, qbf};

    #[test]
    fn eliminate_last_existential_splits_and_renames() {
        // ∃x1∀x2.(x1∨x2)∧(¬x1∨¬x2) → ∀x2⁰∀x2¹.{(x2⁰), (¬x2¹)}
        let inst = qbf(&[('e', 1), ('a', 2)], &[&[1, 2], &[-1, -2]]);
        let mut state = ExpansionState::start(&inst);
        state.eliminate_last_existential().unwrap();
        assert_eq!(state.prefix().exists_count(), 0);
        assert_eq!(state.prefix().len(), 2);
        let vars: Vec<u32> = state
            .prefix()
            .entries()
            .iter()
            .map(|(_, v)| v.id())
            .collect();
        // Fresh copies allocated past the original maximum id.
        assert_eq!(vars, vec![3, 4]);
        // Branch 0: (x1∨x2)[x1=0]=(x2), (¬x1∨¬x2)[x1=0] satisfied.
        assert_eq!(state.formulas()[0].0, matrix(&[&[3]]));
        // Branch 1: only (¬x2) survives.
        assert_eq!(state.formulas()[1].0, matrix(&[&[-4]]));
        assert_eq!(state.formulas()[0].1, vec![false]);
        assert_eq!(state.formulas()[1].1, vec![true]);
    }

    #[test]
    fn eliminate_without_existential_fails() {
        let inst = qbf(&[('a', 1)], &[&[1]]);
        let mut state = ExpansionState::start(&inst);
        assert!(matches!(
            state.eliminate_last_existential(),
            Err(ExpansionError::NoExistential)
        ));
    }

    #[test]
    fn eliminate_no_trailing_universals() {
        // ∃x1.(x1) → branches are the empty matrix and the empty clause.
        let inst = qbf(&[('e', 1)], &[&[1]]);
        let mut state = ExpansionState::start(&inst);
        state.eliminate_last_existential().unwrap();
        assert!(state.prefix().is_empty());
        assert!(state.formulas()[1].0.is_constant_true());
        assert!(state.formulas()[0].0.has_empty_clause());
    }

    #[test]
    fn expand_all_universal_is_identity() {
        let inst = qbf(&[('a', 1), ('a', 2)], &[&[1, 2]]);
        match expand_all(&inst, true) {
            Expansion::Open(t) => {
                assert_eq!(t.formulas().len(), 1);
                assert_eq!(t.formulas()[0], matrix(&[&[1, 2]]));
                assert_eq!(t.provenance()[0], Vec::<bool>::new());
            }
            Expansion::Decided(_) => panic!("k = 0 must stay open"),
        }
    }

    #[test]
    fn expand_all_forall_exists_example() {
        // ∀x1∃x2.(x1∨x2)∧(¬x1∨¬x2): formulas {(x1),(¬x1)}, a tautology.
        let inst = qbf(&[('a', 1), ('e', 2)], &[&[1, 2], &[-1, -2]]);
        match expand_all(&inst, true) {
            Expansion::Open(t) => {
                assert_eq!(t.formulas().len(), 2);
                assert_eq!(t.formulas()[0], matrix(&[&[1]]));
                assert_eq!(t.formulas()[1], matrix(&[&[-1]]));
                // No trailing universals, so no copies were made.
                assert_eq!(t.origin().get(&crate::formula::Var::of(1)).unwrap().id(), 1);
            }
            Expansion::Decided(_) => panic!("expected an open tautology question"),
        }
    }

    #[test]
    fn expand_all_short_circuits_constant_true() {
        // ∃x1.(x1): branch x1=1 leaves the empty matrix.
        let inst = qbf(&[('e', 1)], &[&[1]]);
        assert!(matches!(expand_all(&inst, true), Expansion::Decided(true)));
        // Without pruning both constant branches are carried along.
        match expand_all(&inst, false) {
            Expansion::Open(t) => assert_eq!(t.formulas().len(), 2),
            Expansion::Decided(_) => panic!("no-prune mode never decides"),
        }
    }

    #[test]
    fn expand_all_short_circuits_all_false() {
        // ∃x1.(x1)∧(¬x1): both branches contain the empty clause.
        let inst = qbf(&[('e', 1)], &[&[1], &[-1]]);
        assert!(matches!(expand_all(&inst, true), Expansion::Decided(false)));
    }

    #[test]
    fn formula_count_and_width_bounds() {
        let inst = qbf(
            &[('e', 1), ('a', 2), ('e', 3), ('a', 4)],
            &[&[1, 2], &[3, -4], &[-1, -3]],
        );
        match expand_all(&inst, false) {
            Expansion::Open(t) => {
                assert!(t.formulas().len() <= 1 << inst.k());
                assert!(t.width() <= inst.width());
                for m in t.formulas() {
                    assert!(m.vars().iter().all(|v| t.universe().contains(v)));
                }
            }
            Expansion::Decided(_) => panic!("no-prune mode never decides"),
        }
    }
}
