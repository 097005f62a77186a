//! Model files, bundled benchmarks, run reports and the command line.

pub mod cli;
pub mod models;
pub mod parser;
pub mod report;

pub use parser::{parse_model, ModelFile};
