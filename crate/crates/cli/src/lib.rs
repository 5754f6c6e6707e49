//! Standard-library companion to `stratum-core`: the `.strat` format, the
//! fixture corpus, verification suites and the command layer behind the
//! `stratum` binary.

pub mod atoms;
pub mod commands;
pub mod corpus;
pub mod format;
pub mod oracles;
pub mod report;
pub mod suites;
