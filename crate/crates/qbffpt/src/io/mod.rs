//! Text formats: QDIMACS for QBF instances plus line-oriented dump formats
//! for tautology-test instances, clause graphs, QCSP instances and the
//! generator's graph inputs.
//!
//! All parsers are total on arbitrary input: they return diagnostics with
//! line/column positions instead of panicking.

mod dumps;
mod graphs;
mod qcsp_text;
mod qdimacs;

pub use dumps::{dump_cgis, dump_taut, parse_cgis, parse_taut};
pub use graphs::{dump_multipartite, parse_multipartite, parse_simple_graph};
pub use qcsp_text::{dump_qcsp, parse_qcsp};
pub use qdimacs::{parse_qdimacs, serialize_qdimacs};

use crate::error::ParseError;

/// Whitespace tokenizer that remembers source positions for diagnostics.
pub(crate) struct Tokens<'a> {
    items: Vec<(usize, usize, &'a str)>,
    pos: usize,
}

impl<'a> Tokens<'a> {
    pub(crate) fn new(text: &'a str) -> Tokens<'a> {
        let mut items = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let mut col = 0;
            for tok in line.split_whitespace() {
                // Column of the token within the line, 1-based.
                let at = line[col..].find(tok).map(|o| col + o).unwrap_or(col);
                items.push((lineno + 1, at + 1, tok));
                col = at + tok.len();
            }
        }
        Tokens { items, pos: 0 }
    }

    pub(crate) fn peek(&self) -> Option<(usize, usize, &'a str)> {
        self.items.get(self.pos).copied()
    }

    pub(crate) fn next(&mut self) -> Option<(usize, usize, &'a str)> {
        let t = self.items.get(self.pos).copied();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn expect(&mut self, what: &str) -> Result<(usize, usize, &'a str), ParseError> {
        self.next()
            .ok_or_else(|| ParseError::at(self.last_line(), 1, format!("expected {what}, found end of input")))
    }

    pub(crate) fn last_line(&self) -> usize {
        self.items.last().map(|(l, _, _)| *l).unwrap_or(1)
    }
}

pub(crate) fn parse_int<T: std::str::FromStr>(
    tok: (usize, usize, &str),
    what: &str,
) -> Result<T, ParseError> {
    tok.2
        .parse()
        .map_err(|_| ParseError::at(tok.0, tok.1, format!("expected {what}, found `{}`", tok.2)))
}
