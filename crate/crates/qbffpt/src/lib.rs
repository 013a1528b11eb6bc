//! FPT toolkit for quantified Boolean formulas: expansion of existential
//! quantifiers, reduction to independent-set search on a clause graph,
//! sunflower kernelization, brute-force search, a QCSP front-end and
//! instance generators.

pub mod cgis;
pub mod error;
pub mod expansion;
pub mod forge;
pub mod formula;
pub mod io;
pub mod kernel;
pub mod qcsp;
pub mod search;

#[doc(hidden)]
pub mod test_util;
