//! Quantified CSP front-end: finite-domain instances with tabulated
//! relations, compiled to QBF through a per-variable bit encoding.
//!
//! Every CSP variable gets the same code width `w`, the maximum of
//! `⌈log₂|Dᵢ|⌉` over all domains. Codes at or beyond `|Dᵢ|` decode to the
//! domain's first value, so decoding is total and no separate domain clauses
//! are needed. Bit 1 is the most significant.

use std::collections::BTreeSet;

use crate::error::QcspError;
use crate::formula::{
    Clause, CnfMatrix, Literal, QbfInstance, QuantPrefix, Quantifier, Var,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QcspVar {
    pub name: String,
    pub quant: Quantifier,
    pub domain: Vec<String>,
}

/// A constraint: a scope of variable indices plus the allowed value tuples,
/// stored as indices into the scoped variables' domains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub scope: Vec<usize>,
    pub tuples: BTreeSet<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QcspInstance {
    vars: Vec<QcspVar>,
    constraints: Vec<Constraint>,
}

impl QcspInstance {
    pub fn new(vars: Vec<QcspVar>, constraints: Vec<Constraint>) -> Result<QcspInstance, QcspError> {
        for (i, v) in vars.iter().enumerate() {
            if v.domain.is_empty() {
                return Err(QcspError::EmptyDomain(i));
            }
        }
        for (ci, c) in constraints.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for &vi in &c.scope {
                if vi >= vars.len() {
                    return Err(QcspError::UnknownVariable {
                        constraint: ci,
                        var: vi,
                    });
                }
                if !seen.insert(vi) {
                    return Err(QcspError::RepeatedScopeVariable(ci));
                }
            }
            for t in &c.tuples {
                if t.len() != c.scope.len() {
                    return Err(QcspError::TupleArity {
                        constraint: ci,
                        got: t.len(),
                        expected: c.scope.len(),
                    });
                }
                for (&vi, &val) in c.scope.iter().zip(t) {
                    if val >= vars[vi].domain.len() {
                        return Err(QcspError::TupleValue { constraint: ci });
                    }
                }
            }
        }
        Ok(QcspInstance { vars, constraints })
    }

    pub fn vars(&self) -> &[QcspVar] {
        &self.vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Shared code width: `max ⌈log₂|Dᵢ|⌉`, zero when every domain is a
    /// singleton.
    pub fn code_width(&self) -> usize {
        self.vars
            .iter()
            .map(|v| {
                let mut w = 0usize;
                while (1usize << w) < v.domain.len() {
                    w += 1;
                }
                w
            })
            .max()
            .unwrap_or(0)
    }

    /// Decodes a `code_width`-bit code to a value index of variable `vi`.
    pub fn decode(&self, vi: usize, code: usize) -> usize {
        if code < self.vars[vi].domain.len() {
            code
        } else {
            0
        }
    }
}

/// Boolean variable carrying bit `bit` (0-based, MSB first) of CSP variable
/// `vi` under code width `w`.
fn bit_var(vi: usize, bit: usize, w: usize) -> Var {
    Var::of((vi * w + bit + 1) as u32)
}

/// Blocking clauses for one constraint: one clause per joint bit code whose
/// decoded value tuple is not in the table.
pub fn encode_relation(inst: &QcspInstance, constraint: &Constraint) -> Vec<Clause> {
    let w = inst.code_width();
    let r = constraint.scope.len();
    if constraint.tuples.is_empty() {
        return vec![Clause::empty()];
    }
    let mut clauses = Vec::new();
    let mut codes = vec![0usize; r];
    loop {
        let decoded: Vec<usize> = constraint
            .scope
            .iter()
            .zip(&codes)
            .map(|(&vi, &c)| inst.decode(vi, c))
            .collect();
        if !constraint.tuples.contains(&decoded) {
            let mut lits = Vec::with_capacity(w * r);
            for (&vi, &code) in constraint.scope.iter().zip(&codes) {
                for bit in 0..w {
                    let set = (code >> (w - 1 - bit)) & 1 == 1;
                    let v = bit_var(vi, bit, w);
                    lits.push(if set { Literal::neg(v) } else { Literal::pos(v) });
                }
            }
            clauses.push(Clause::new(lits).expect("bit variables are distinct"));
        }
        // Odometer over r code registers of w bits each.
        let mut pos = r;
        loop {
            if pos == 0 {
                return clauses;
            }
            pos -= 1;
            codes[pos] += 1;
            if codes[pos] < (1usize << w) {
                break;
            }
            codes[pos] = 0;
        }
    }
}

/// Compiles to a QBF over `code_width` Boolean variables per CSP variable,
/// each carrying its variable's quantifier, in the original order.
pub fn qcsp_to_qbf(inst: &QcspInstance) -> QbfInstance {
    let w = inst.code_width();
    let mut entries = Vec::new();
    for (vi, v) in inst.vars().iter().enumerate() {
        for bit in 0..w {
            entries.push((v.quant, bit_var(vi, bit, w)));
        }
    }
    let mut clauses = Vec::new();
    for c in inst.constraints() {
        clauses.extend(encode_relation(inst, c));
    }
    let prefix = QuantPrefix::new(entries).expect("bit variables are distinct");
    let (matrix, _) = CnfMatrix::from_clauses(clauses);
    QbfInstance::new(prefix, matrix).expect("prefix covers every bit variable")
}

/// Recursive semantic evaluation over the domains; refuses instances whose
/// assignment space exceeds about a million.
pub fn qcsp_oracle(inst: &QcspInstance) -> Result<bool, QcspError> {
    let space: u128 = inst
        .vars()
        .iter()
        .map(|v| v.domain.len() as u128)
        .product();
    if space > 1_000_000 {
        return Err(QcspError::TooLarge(space));
    }

    fn satisfied(inst: &QcspInstance, values: &[usize]) -> bool {
        inst.constraints().iter().all(|c| {
            let t: Vec<usize> = c.scope.iter().map(|&vi| values[vi]).collect();
            c.tuples.contains(&t)
        })
    }

    fn go(inst: &QcspInstance, values: &mut Vec<usize>) -> bool {
        let vi = values.len();
        if vi == inst.vars().len() {
            return satisfied(inst, values);
        }
        let v = &inst.vars()[vi];
        let mut results = (0..v.domain.len()).map(|val| {
            values.push(val);
            let r = go(inst, values);
            values.pop();
            r
        });
        match v.quant {
            Quantifier::Exists => results.any(|r| r),
            Quantifier::Forall => results.all(|r| r),
        }
    }

    Ok(go(inst, &mut Vec::new()))
}
