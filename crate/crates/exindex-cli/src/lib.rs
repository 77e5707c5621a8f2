//! Support library for the `exindex` command-line tool: argument grammar,
//! CSV ingestion, experiment plans, replicated benchmark execution, and
//! report emission. The binary in `main.rs` is a thin dispatcher over these
//! modules; everything here is usable programmatically as well.

pub mod cli;
pub mod ingest;
pub mod plan;
pub mod report;
pub mod runner;
pub mod stats;
