//! Versioned line-oriented dumps for tautology-test instances and clause
//! graphs.
//!
//! CGIS (`format cgis 1`): `part <i>` headers followed by one 0-terminated
//! DIMACS literal list per vertex; the labeling is positional and re-checked
//! for per-part injectivity on parse.
//!
//! TAUT (`format taut 1`): `universe <v>... 0`, `origin <copy> <original>`
//! lines, then `formula <bits|->` headers each followed by clause lines.

use std::collections::{BTreeMap, BTreeSet};

use crate::cgis::ClauseGraph;
use crate::error::{CgisError, ParseError};
use crate::expansion::TautInstance;
use crate::formula::{Clause, CnfMatrix, Literal, Var};

use super::{parse_int, Tokens};

pub fn dump_cgis(g: &ClauseGraph) -> String {
    let mut out = String::from("format cgis 1\n");
    out.push_str(&var_list_line("universe", g.universe().iter()));
    out.push_str(&var_list_line("pads", g.pads().iter()));
    for (i, part) in g.parts().iter().enumerate() {
        out.push_str(&format!("part {}\n", i + 1));
        for label in part {
            out.push_str(&clause_line(label));
        }
    }
    out
}

pub fn parse_cgis(text: &str) -> Result<ClauseGraph, ParseError> {
    let mut toks = Tokens::new(text);
    expect_header(&mut toks, "cgis")?;

    let kw = toks.expect("`universe`")?;
    if kw.2 != "universe" {
        return Err(ParseError::at(kw.0, kw.1, "expected `universe`"));
    }
    let universe: BTreeSet<Var> = read_vars(&mut toks)?.into_iter().collect();
    let kw = toks.expect("`pads`")?;
    if kw.2 != "pads" {
        return Err(ParseError::at(kw.0, kw.1, "expected `pads`"));
    }
    let pads = read_vars(&mut toks)?;

    let mut parts: Vec<Vec<Clause>> = Vec::new();
    while let Some(tok) = toks.peek() {
        if tok.2 == "part" {
            toks.next();
            let idx: usize = parse_int(toks.expect("part index")?, "part index")?;
            if idx != parts.len() + 1 {
                return Err(ParseError::at(
                    tok.0,
                    tok.1,
                    format!("part {idx} out of order, expected {}", parts.len() + 1),
                ));
            }
            parts.push(Vec::new());
        } else {
            let part = parts.last_mut().ok_or_else(|| {
                ParseError::at(tok.0, tok.1, "clause before the first `part` header")
            })?;
            part.push(read_clause(&mut toks)?);
        }
    }

    let d = parts
        .iter()
        .flat_map(|p| p.iter().map(Clause::len))
        .max()
        .unwrap_or(0);
    for part in &parts {
        for label in part {
            if label.len() != d {
                return Err(ParseError::at(
                    1,
                    1,
                    format!("label of size {} in a width-{d} graph", label.len()),
                ));
            }
        }
    }
    ClauseGraph::from_parts(universe, pads, parts, d).map_err(|e| match e {
        CgisError::DuplicateLabel(i) => {
            ParseError::at(1, 1, format!("duplicate clause within part {}", i + 1))
        }
        other => ParseError::at(1, 1, other.to_string()),
    })
}

pub fn dump_taut(t: &TautInstance) -> String {
    let mut out = String::from("format taut 1\n");
    out.push_str(&var_list_line("universe", t.universe().iter()));
    for (copy, orig) in t.origin() {
        if copy != orig {
            out.push_str(&format!("origin {} {}\n", copy.id(), orig.id()));
        }
    }
    for (m, bits) in t.formulas().iter().zip(t.provenance()) {
        let tag = if bits.is_empty() {
            "-".to_string()
        } else {
            bits.iter().map(|b| if *b { '1' } else { '0' }).collect()
        };
        out.push_str(&format!("formula {tag}\n"));
        for c in m.clauses() {
            out.push_str(&clause_line(c));
        }
    }
    out
}

pub fn parse_taut(text: &str) -> Result<TautInstance, ParseError> {
    let mut toks = Tokens::new(text);
    expect_header(&mut toks, "taut")?;

    let kw = toks.expect("`universe`")?;
    if kw.2 != "universe" {
        return Err(ParseError::at(kw.0, kw.1, "expected `universe`"));
    }
    let universe: BTreeSet<Var> = read_vars(&mut toks)?.into_iter().collect();

    let mut origin: BTreeMap<Var, Var> = universe.iter().map(|v| (*v, *v)).collect();
    let mut formulas: Vec<Vec<Clause>> = Vec::new();
    let mut provenance: Vec<Vec<bool>> = Vec::new();

    while let Some(tok) = toks.peek() {
        match tok.2 {
            "origin" => {
                toks.next();
                let copy: u32 = parse_int(toks.expect("copy variable")?, "variable")?;
                let orig: u32 = parse_int(toks.expect("original variable")?, "variable")?;
                if copy == 0 || orig == 0 {
                    return Err(ParseError::at(tok.0, tok.1, "variables start at 1"));
                }
                origin.insert(Var::of(copy), Var::of(orig));
            }
            "formula" => {
                toks.next();
                let bits_tok = toks.expect("provenance bits")?;
                let bits = if bits_tok.2 == "-" {
                    Vec::new()
                } else {
                    bits_tok
                        .2
                        .chars()
                        .map(|c| match c {
                            '0' => Ok(false),
                            '1' => Ok(true),
                            _ => Err(ParseError::at(
                                bits_tok.0,
                                bits_tok.1,
                                "provenance must be a 0/1 string or `-`",
                            )),
                        })
                        .collect::<Result<Vec<bool>, ParseError>>()?
                };
                formulas.push(Vec::new());
                provenance.push(bits);
            }
            _ => {
                let formula = formulas.last_mut().ok_or_else(|| {
                    ParseError::at(tok.0, tok.1, "clause before the first `formula` header")
                })?;
                formula.push(read_clause(&mut toks)?);
            }
        }
    }

    let formulas: Vec<CnfMatrix> = formulas
        .into_iter()
        .map(|cs| CnfMatrix::from_clauses(cs).0)
        .collect();
    for m in &formulas {
        for v in m.vars() {
            if !universe.contains(&v) {
                return Err(ParseError::at(
                    1,
                    1,
                    format!("variable {} outside the declared universe", v.id()),
                ));
            }
        }
    }
    origin.retain(|v, _| universe.contains(v));
    Ok(TautInstance::new(universe, formulas, provenance, origin))
}

fn expect_header(toks: &mut Tokens<'_>, name: &str) -> Result<(), ParseError> {
    let f = toks.expect("`format` header")?;
    if f.2 != "format" {
        return Err(ParseError::at(f.0, f.1, "expected `format` header"));
    }
    let n = toks.expect("format name")?;
    if n.2 != name {
        return Err(ParseError::at(
            n.0,
            n.1,
            format!("expected format `{name}`, found `{}`", n.2),
        ));
    }
    let v = toks.expect("format version")?;
    if v.2 != "1" {
        return Err(ParseError::at(v.0, v.1, format!("unsupported version `{}`", v.2)));
    }
    Ok(())
}

fn var_list_line<'a>(keyword: &str, vars: impl Iterator<Item = &'a Var>) -> String {
    let mut line = keyword.to_string();
    for v in vars {
        line.push_str(&format!(" {}", v.id()));
    }
    line.push_str(" 0\n");
    line
}

fn clause_line(c: &Clause) -> String {
    let lits: Vec<String> = c.literals().iter().map(|l| l.to_dimacs().to_string()).collect();
    if lits.is_empty() {
        "0\n".to_string()
    } else {
        format!("{} 0\n", lits.join(" "))
    }
}

fn read_vars(toks: &mut Tokens<'_>) -> Result<Vec<Var>, ParseError> {
    let mut out = Vec::new();
    loop {
        let t = toks.expect("variable or terminating 0")?;
        let id: i64 = parse_int(t, "variable")?;
        if id == 0 {
            return Ok(out);
        }
        if id < 0 {
            return Err(ParseError::at(t.0, t.1, "variables are positive"));
        }
        out.push(Var::of(id as u32));
    }
}

fn read_clause(toks: &mut Tokens<'_>) -> Result<Clause, ParseError> {
    let mut lits = Vec::new();
    let mut at;
    loop {
        let t = toks.expect("literal or terminating 0")?;
        at = (t.0, t.1);
        let code: i64 = parse_int(t, "literal")?;
        if code == 0 {
            break;
        }
        lits.push(Literal::from_dimacs(code).map_err(|e| ParseError::at(t.0, t.1, e.to_string()))?);
    }
    Clause::new(lits).map_err(|e| ParseError::at(at.0, at.1, e.to_string()))
}
