//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("variable identifiers must be positive")]
    ZeroVariable,
    #[error("literal {0} out of range")]
    LiteralOutOfRange(i64),
    #[error("literal {0} occurs twice in a clause")]
    DuplicateLiteral(i64),
    #[error("variable {0} occurs with both polarities in a clause")]
    OppositeLiterals(u32),
    #[error("variable {0} is quantified more than once")]
    DuplicateQuantifier(u32),
    #[error("variable {0} occurs in the matrix but is not quantified")]
    UnquantifiedVariable(u32),
    #[error("assignment does not cover variable {0}")]
    PartialAssignment(u32),
}

/// A parse problem, either fatal (error) or advisory (warning).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseDiagnostic {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> ParseDiagnostic {
        ParseDiagnostic {
            line,
            column,
            message: message.into(),
        }
    }
}

impl std::fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("{0}")]
    Syntax(ParseDiagnostic),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

impl ParseError {
    pub fn at(line: usize, column: usize, message: impl Into<String>) -> ParseError {
        ParseError::Syntax(ParseDiagnostic::new(line, column, message))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CgisError {
    #[error("clause of size {size} cannot be padded to width {width}")]
    ClauseTooWide { size: usize, width: usize },
    #[error("part index {0} out of range")]
    PartOutOfRange(usize),
    #[error("vertex index {vertex} out of range in part {part}")]
    VertexOutOfRange { part: usize, vertex: usize },
    #[error("selection has {got} entries but the graph has {expected} parts")]
    SelectionArity { got: usize, expected: usize },
    #[error("selection is not independent: parts {0} and {1} clash")]
    NotIndependent(usize, usize),
    #[error("duplicate clause label within part {0}")]
    DuplicateLabel(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KernelError {
    #[error("sunflower search requires sets of equal size ({0} vs {1})")]
    UnequalSetSizes(usize, usize),
    #[error("sunflower threshold must be at least 2, got {0}")]
    ThresholdTooSmall(usize),
    #[error(transparent)]
    Cgis(#[from] CgisError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExpansionError {
    #[error("no existential quantifier to eliminate")]
    NoExistential,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("budget exceeded: {which} (limit {limit}, needed {needed})")]
    Budget {
        which: &'static str,
        limit: usize,
        needed: usize,
    },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QcspError {
    #[error("domain of variable {0} is empty")]
    EmptyDomain(usize),
    #[error("constraint {constraint} scope refers to unknown variable {var}")]
    UnknownVariable { constraint: usize, var: usize },
    #[error("constraint {0} repeats a variable in its scope")]
    RepeatedScopeVariable(usize),
    #[error("constraint {constraint} has a tuple of arity {got}, expected {expected}")]
    TupleArity {
        constraint: usize,
        got: usize,
        expected: usize,
    },
    #[error("constraint {constraint} has a tuple value outside its domain")]
    TupleValue { constraint: usize },
    #[error("instance too large for the brute-force oracle ({0} assignments)")]
    TooLarge(u128),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ForgeError {
    #[error("part count must be at least 1")]
    NoParts,
    #[error("edge {0}-{1} is inside a single part")]
    IntraPartEdge(u32, u32),
    #[error("edge endpoint {0} is not a vertex of the graph")]
    UnknownVertex(u32),
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(u32),
    #[error("cannot generate {requested} distinct clauses: only {available} exist")]
    InfeasibleClauseCount { requested: u64, available: u64 },
    #[error("clause width must be at least 1")]
    ZeroWidth,
}
