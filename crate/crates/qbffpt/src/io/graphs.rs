//! Edge-list text formats for the generator's graph inputs.
//!
//! Multipartite: `part <i>: <v>...` headers followed by `edge <u> <v>` lines.
//! Simple graph: `graph <n>` followed by `edge <u> <v>` lines.

use crate::error::ParseError;
use crate::forge::{MultipartiteGraph, SimpleGraph};

use super::{parse_int, Tokens};

pub fn dump_multipartite(g: &MultipartiteGraph) -> String {
    let mut out = String::new();
    for (i, part) in g.parts().iter().enumerate() {
        out.push_str(&format!("part {}:", i + 1));
        for v in part {
            out.push_str(&format!(" {v}"));
        }
        out.push('\n');
    }
    for (u, v) in g.edges() {
        out.push_str(&format!("edge {u} {v}\n"));
    }
    out
}

pub fn parse_multipartite(text: &str) -> Result<MultipartiteGraph, ParseError> {
    let mut parts: Vec<Vec<u32>> = Vec::new();
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut in_edges = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("part") {
            if in_edges {
                return Err(ParseError::at(lineno + 1, 1, "part header after edges"));
            }
            let (idx_text, vs) = rest.split_once(':').ok_or_else(|| {
                ParseError::at(lineno + 1, 1, "part header needs `part <i>: <v>...`")
            })?;
            let idx: usize = idx_text.trim().parse().map_err(|_| {
                ParseError::at(lineno + 1, 1, format!("bad part index `{}`", idx_text.trim()))
            })?;
            if idx != parts.len() + 1 {
                return Err(ParseError::at(
                    lineno + 1,
                    1,
                    format!("part {idx} out of order, expected {}", parts.len() + 1),
                ));
            }
            let vertices = vs
                .split_whitespace()
                .map(|t| {
                    t.parse::<u32>().map_err(|_| {
                        ParseError::at(lineno + 1, 1, format!("bad vertex id `{t}`"))
                    })
                })
                .collect::<Result<Vec<u32>, ParseError>>()?;
            parts.push(vertices);
        } else if let Some(rest) = line.strip_prefix("edge") {
            in_edges = true;
            edges.push(parse_edge(rest, lineno + 1)?);
        } else {
            return Err(ParseError::at(
                lineno + 1,
                1,
                format!("expected `part` or `edge`, found `{line}`"),
            ));
        }
    }
    MultipartiteGraph::new(parts, edges)
        .map_err(|e| ParseError::at(text.lines().count().max(1), 1, e.to_string()))
}

pub fn parse_simple_graph(text: &str) -> Result<SimpleGraph, ParseError> {
    let mut toks = Tokens::new(text);
    let head = toks.expect("`graph <n>` header")?;
    if head.2 != "graph" {
        return Err(ParseError::at(head.0, head.1, "expected `graph` header"));
    }
    let n: u32 = parse_int(toks.expect("vertex count")?, "vertex count")?;
    let mut edges = Vec::new();
    while let Some(tok) = toks.next() {
        if tok.2 != "edge" {
            return Err(ParseError::at(tok.0, tok.1, "expected `edge`"));
        }
        let u: u32 = parse_int(toks.expect("edge endpoint")?, "vertex id")?;
        let v: u32 = parse_int(toks.expect("edge endpoint")?, "vertex id")?;
        edges.push((u, v));
    }
    SimpleGraph::new(n, edges).map_err(|e| ParseError::at(toks.last_line(), 1, e.to_string()))
}

fn parse_edge(rest: &str, lineno: usize) -> Result<(u32, u32), ParseError> {
    let fields: Vec<&str> = rest.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(ParseError::at(lineno, 1, "edge line needs `edge <u> <v>`"));
    }
    let u = fields[0]
        .parse::<u32>()
        .map_err(|_| ParseError::at(lineno, 1, format!("bad vertex id `{}`", fields[0])))?;
    let v = fields[1]
        .parse::<u32>()
        .map_err(|_| ParseError::at(lineno, 1, format!("bad vertex id `{}`", fields[1])))?;
    Ok((u, v))
}
