//! Shared fixtures for the test-suite: clause builders and the worked
//! four-formula example used by the golden tests.

use crate::formula::{Clause, CnfMatrix, Literal, QbfInstance, QuantPrefix, Quantifier, Var};

pub fn lit(code: i64) -> Literal {
    Literal::from_dimacs(code).expect("nonzero literal")
}

pub fn clause(codes: &[i64]) -> Clause {
    Clause::new(codes.iter().map(|&c| lit(c)).collect()).expect("valid clause")
}

pub fn matrix(clauses: &[&[i64]]) -> CnfMatrix {
    CnfMatrix::from_clauses(clauses.iter().map(|c| clause(c)).collect()).0
}

/// Builds an instance from `(quantifier, var)` pairs ('a'/'e') and clause
/// literal lists.
pub fn qbf(prefix: &[(char, u32)], clauses: &[&[i64]]) -> QbfInstance {
    let entries = prefix
        .iter()
        .map(|&(q, v)| {
            let quant = match q {
                'a' => Quantifier::Forall,
                'e' => Quantifier::Exists,
                _ => panic!("quantifier must be 'a' or 'e'"),
            };
            (quant, Var::of(v))
        })
        .collect();
    let prefix = QuantPrefix::new(entries).expect("distinct prefix variables");
    QbfInstance::new(prefix, matrix(clauses)).expect("well-formed instance")
}

/// The four 3-CNF formulas over x1..x6 from the worked clause-graph example.
/// Parts have 4, 3, 3 and 4 clauses (vertices u1..u4, v1..v3, w1..w3,
/// z1..z4).
pub fn figure1_formulas() -> Vec<CnfMatrix> {
    vec![
        matrix(&[&[1, 2, 3], &[-1, 2, 4], &[-1, 5, -6], &[-3, 2, 5]]),
        matrix(&[&[2, -3, -6], &[-4, -5, 6], &[-2, 3, -6]]),
        matrix(&[&[-2, 3, 4], &[-2, -4, 5], &[3, 4, -5]]),
        matrix(&[&[1, -2, 5], &[-3, 4, 6], &[3, 4, -6], &[-4, -5, 6]]),
    ]
}
