//! Library surface of the batch front end: configuration, execution, and
//! result-file types. The binary in `main.rs` is a thin argument parser over
//! these.

pub mod config;
pub mod output;
pub mod runner;
pub mod selftest;

pub use config::{Mode, RunConfig};
pub use output::{ResultFile, ResultPayload};
pub use runner::{execute, execute_verify, run_lie_basis, RunOutcome};
