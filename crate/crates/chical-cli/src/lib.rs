//! Expression parser, command dispatch, seeded random instance generation,
//! verification-suite runner and machine-readable reporting for the chiral
//! Cartan calculus engine.

pub mod commands;
pub mod gen;
pub mod parse;
pub mod report;
pub mod suites;

pub use commands::{run, CliError};
pub use report::{CheckLine, Report};
