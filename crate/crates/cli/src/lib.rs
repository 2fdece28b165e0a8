//! Command-line front end: JSONL ingest, TOML configuration, parallel
//! experiment runs and deterministic reports.

pub mod app;
pub mod config;
pub mod data;
pub mod experiment;
pub mod parallel;

pub use app::run;
