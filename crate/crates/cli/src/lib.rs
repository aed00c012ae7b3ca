//! The `sumkit` command line: sequence, weight and matrix literals, the
//! subcommands, and the JSON/CSV reports they emit.

pub mod command;
pub mod error;
pub mod expr;
pub mod literal;
pub mod matrix;
pub mod report;

pub use command::{invoke, Invocation};
pub use error::CliError;
pub use report::{Outcome, ReportDocument};
