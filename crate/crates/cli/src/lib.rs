//! Std companion to `coarse-core`: JSON and CSV formats, seeded instance
//! generators, scenario runners and the `coarse` command line.

pub mod cli;
pub mod format;
pub mod generate;
pub mod scenario;
