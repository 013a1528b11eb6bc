//! QDIMACS reader and writer.
//!
//! Grammar (bit-exact for output):
//!   - optional comment lines `c ...`
//!   - header `p cnf <nvars> <nclauses>`
//!   - quantifier lines `a <v>... 0` / `e <v>... 0`, prefix order
//!   - clause lines: nonzero integers terminated by `0`
//!
//! Free variables are an error (the existential parameterization must be
//! exact); duplicate clauses are dropped with a warning; a clause-count
//! mismatch is a warning. Output normalizes the prefix to maximal
//! alternating blocks.

use crate::error::{ParseDiagnostic, ParseError};
use crate::formula::{
    Clause, CnfMatrix, Literal, QbfInstance, QuantPrefix, Quantifier, Var,
};

use super::{parse_int, Tokens};

fn strip_comments(text: &str) -> String {
    text.lines()
        .map(|l| {
            let t = l.trim_start();
            if t == "c" || t.starts_with("c ") || t.starts_with("c\t") {
                ""
            } else {
                l
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Parses QDIMACS; returns the instance plus non-fatal warnings.
pub fn parse_qdimacs(text: &str) -> Result<(QbfInstance, Vec<ParseDiagnostic>), ParseError> {
    let stripped = strip_comments(text);
    let mut toks = Tokens::new(&stripped);
    let mut warnings = Vec::new();

    let p = toks.expect("`p cnf` header")?;
    if p.2 != "p" {
        return Err(ParseError::at(p.0, p.1, format!("expected `p`, found `{}`", p.2)));
    }
    let cnf = toks.expect("`cnf`")?;
    if cnf.2 != "cnf" {
        return Err(ParseError::at(cnf.0, cnf.1, format!("expected `cnf`, found `{}`", cnf.2)));
    }
    let nvars: u32 = parse_int(toks.expect("variable count")?, "variable count")?;
    let nclauses: usize = parse_int(toks.expect("clause count")?, "clause count")?;

    // Quantifier lines.
    let mut entries: Vec<(Quantifier, Var)> = Vec::new();
    let mut quantified: Vec<bool> = vec![false; nvars as usize + 1];
    let mut seen_clause = false;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut clause_set: std::collections::HashSet<Clause> = std::collections::HashSet::new();
    let mut dropped = 0usize;

    while let Some(tok) = toks.peek() {
        match tok.2 {
            "a" | "e" => {
                toks.next();
                if seen_clause {
                    return Err(ParseError::at(
                        tok.0,
                        tok.1,
                        "quantifier line after the first clause",
                    ));
                }
                let quant = if tok.2 == "a" {
                    Quantifier::Forall
                } else {
                    Quantifier::Exists
                };
                loop {
                    let vt = toks.expect("variable or terminating 0")?;
                    let id: i64 = parse_int(vt, "variable")?;
                    if id == 0 {
                        break;
                    }
                    if id < 0 {
                        return Err(ParseError::at(vt.0, vt.1, "negative variable in prefix"));
                    }
                    if id as u64 > u64::from(nvars) {
                        return Err(ParseError::at(
                            vt.0,
                            vt.1,
                            format!("variable {id} exceeds declared count {nvars}"),
                        ));
                    }
                    let v = Var::of(id as u32);
                    if quantified[id as usize] {
                        return Err(ParseError::at(
                            vt.0,
                            vt.1,
                            format!("variable {id} quantified twice"),
                        ));
                    }
                    quantified[id as usize] = true;
                    entries.push((quant, v));
                }
            }
            _ => {
                seen_clause = true;
                let mut lits: Vec<Literal> = Vec::new();
                let (mut line, mut col);
                loop {
                    let lt = toks.expect("literal or terminating 0")?;
                    (line, col) = (lt.0, lt.1);
                    let code: i64 = parse_int(lt, "literal")?;
                    if code == 0 {
                        break;
                    }
                    if code.unsigned_abs() > u64::from(nvars) {
                        return Err(ParseError::at(
                            lt.0,
                            lt.1,
                            format!("literal {code} out of range (declared {nvars} variables)"),
                        ));
                    }
                    let lit = Literal::from_dimacs(code)?;
                    if !quantified[lit.var().id() as usize] {
                        return Err(ParseError::at(
                            lt.0,
                            lt.1,
                            format!("variable {} is not quantified", lit.var().id()),
                        ));
                    }
                    lits.push(lit);
                }
                let clause = Clause::new(lits)
                    .map_err(|e| ParseError::at(line, col, e.to_string()))?;
                if clause_set.insert(clause.clone()) {
                    clauses.push(clause);
                } else {
                    dropped += 1;
                    warnings.push(ParseDiagnostic::new(line, col, "duplicate clause dropped"));
                }
            }
        }
    }

    if clauses.len() + dropped != nclauses {
        warnings.push(ParseDiagnostic::new(
            toks.last_line(),
            1,
            format!(
                "header declares {nclauses} clauses, found {}",
                clauses.len() + dropped
            ),
        ));
    }

    let prefix = QuantPrefix::new(entries).map_err(ParseError::Formula)?;
    let (matrix, _) = CnfMatrix::from_clauses(clauses);
    let inst = QbfInstance::new(prefix, matrix).map_err(ParseError::Formula)?;
    Ok((inst, warnings))
}

/// Serializes to QDIMACS with the prefix normalized to maximal alternating
/// blocks. Parsing the output yields a structurally equal instance.
pub fn serialize_qdimacs(inst: &QbfInstance) -> String {
    let nvars = inst
        .prefix()
        .entries()
        .iter()
        .map(|(_, v)| v.id())
        .max()
        .unwrap_or(0);
    let mut out = String::new();
    out.push_str(&format!("p cnf {} {}\n", nvars, inst.matrix().len()));

    let mut block: Vec<u32> = Vec::new();
    let mut block_q: Option<Quantifier> = None;
    let flush = |out: &mut String, q: Option<Quantifier>, block: &mut Vec<u32>| {
        if let Some(q) = q {
            if !block.is_empty() {
                let tag = if q == Quantifier::Forall { "a" } else { "e" };
                let vars: Vec<String> = block.iter().map(u32::to_string).collect();
                out.push_str(&format!("{} {} 0\n", tag, vars.join(" ")));
                block.clear();
            }
        }
    };
    for (q, v) in inst.prefix().entries() {
        if block_q != Some(*q) {
            flush(&mut out, block_q, &mut block);
            block_q = Some(*q);
        }
        block.push(v.id());
    }
    flush(&mut out, block_q, &mut block);

    for clause in inst.matrix().clauses() {
        let lits: Vec<String> = clause
            .literals()
            .iter()
            .map(|l| l.to_dimacs().to_string())
            .collect();
        if lits.is_empty() {
            out.push_str("0\n");
        } else {
            out.push_str(&format!("{} 0\n", lits.join(" ")));
        }
    }
    out
}
