//! QCSP text format.
//!
//! Layout:
//!   - header `qcsp <nvars>`
//!   - one `var <name> <a|e> <v1> <v2> ...` line per variable
//!   - per constraint: `rel <arity> <scope...>` (scope by variable name),
//!     one value tuple per line, then `end`

use std::collections::BTreeMap;

use crate::error::ParseError;
use crate::formula::Quantifier;
use crate::qcsp::{Constraint, QcspInstance, QcspVar};

pub fn dump_qcsp(inst: &QcspInstance) -> String {
    let mut out = format!("qcsp {}\n", inst.vars().len());
    for v in inst.vars() {
        let q = if v.quant == Quantifier::Forall { "a" } else { "e" };
        out.push_str(&format!("var {} {} {}\n", v.name, q, v.domain.join(" ")));
    }
    for c in inst.constraints() {
        let scope: Vec<&str> = c.scope.iter().map(|&vi| inst.vars()[vi].name.as_str()).collect();
        out.push_str(&format!("rel {} {}\n", c.scope.len(), scope.join(" ")));
        for t in &c.tuples {
            let values: Vec<&str> = c
                .scope
                .iter()
                .zip(t)
                .map(|(&vi, &val)| inst.vars()[vi].domain[val].as_str())
                .collect();
            out.push_str(&format!("{}\n", values.join(" ")));
        }
        out.push_str("end\n");
    }
    out
}

pub fn parse_qcsp(text: &str) -> Result<QcspInstance, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (lineno, header) = lines
        .next()
        .ok_or_else(|| ParseError::at(1, 1, "expected `qcsp <nvars>` header"))?;
    let nvars: usize = header
        .strip_prefix("qcsp")
        .and_then(|rest| rest.trim().parse().ok())
        .ok_or_else(|| ParseError::at(lineno, 1, "expected `qcsp <nvars>` header"))?;

    let mut vars: Vec<QcspVar> = Vec::new();
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    let mut constraints: Vec<Constraint> = Vec::new();
    let mut last_line = lineno;

    while let Some((lineno, line)) = lines.next() {
        last_line = lineno;
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[0] {
            "var" => {
                if !constraints.is_empty() {
                    return Err(ParseError::at(lineno, 1, "var line after a rel block"));
                }
                if fields.len() < 4 {
                    return Err(ParseError::at(
                        lineno,
                        1,
                        "var line needs `var <name> <a|e> <v1> ...`",
                    ));
                }
                let name = fields[1].to_string();
                let quant = match fields[2] {
                    "a" => Quantifier::Forall,
                    "e" => Quantifier::Exists,
                    other => {
                        return Err(ParseError::at(
                            lineno,
                            1,
                            format!("quantifier must be `a` or `e`, found `{other}`"),
                        ))
                    }
                };
                let domain: Vec<String> = fields[3..].iter().map(|s| s.to_string()).collect();
                if index.insert(name.clone(), vars.len()).is_some() {
                    return Err(ParseError::at(lineno, 1, format!("duplicate variable `{name}`")));
                }
                vars.push(QcspVar { name, quant, domain });
            }
            "rel" => {
                if fields.len() < 2 {
                    return Err(ParseError::at(lineno, 1, "rel line needs an arity"));
                }
                let arity: usize = fields[1].parse().map_err(|_| {
                    ParseError::at(lineno, 1, format!("bad arity `{}`", fields[1]))
                })?;
                if fields.len() != 2 + arity {
                    return Err(ParseError::at(
                        lineno,
                        1,
                        format!("rel declares arity {arity} but lists {} scope variables", fields.len() - 2),
                    ));
                }
                let scope: Vec<usize> = fields[2..]
                    .iter()
                    .map(|name| {
                        index.get(*name).copied().ok_or_else(|| {
                            ParseError::at(lineno, 1, format!("unknown variable `{name}`"))
                        })
                    })
                    .collect::<Result<Vec<usize>, ParseError>>()?;
                let mut tuples = std::collections::BTreeSet::new();
                let mut closed = false;
                for (lineno, line) in lines.by_ref() {
                    last_line = lineno;
                    if line == "end" {
                        closed = true;
                        break;
                    }
                    let values: Vec<&str> = line.split_whitespace().collect();
                    if values.len() != arity {
                        return Err(ParseError::at(
                            lineno,
                            1,
                            format!("tuple has {} values, expected {arity}", values.len()),
                        ));
                    }
                    let tuple: Vec<usize> = scope
                        .iter()
                        .zip(&values)
                        .map(|(&vi, value)| {
                            vars[vi].domain.iter().position(|d| d == value).ok_or_else(|| {
                                ParseError::at(
                                    lineno,
                                    1,
                                    format!(
                                        "value `{value}` is not in the domain of `{}`",
                                        vars[vi].name
                                    ),
                                )
                            })
                        })
                        .collect::<Result<Vec<usize>, ParseError>>()?;
                    tuples.insert(tuple);
                }
                if !closed {
                    return Err(ParseError::at(last_line, 1, "rel block is missing `end`"));
                }
                constraints.push(Constraint { scope, tuples });
            }
            other => {
                return Err(ParseError::at(
                    lineno,
                    1,
                    format!("expected `var` or `rel`, found `{other}`"),
                ))
            }
        }
    }

    if vars.len() != nvars {
        return Err(ParseError::at(
            last_line,
            1,
            format!("header declares {nvars} variables, found {}", vars.len()),
        ));
    }
    QcspInstance::new(vars, constraints).map_err(|e| ParseError::at(last_line, 1, e.to_string()))
}
