//! File format, numeric formatting, plotting and subcommand dispatch for the
//! `ncx` command-line tool.

pub mod model;
pub mod parse;
pub mod serialize;

pub use model::{ParametricDef, ProblemFile, SetDef};
pub use parse::{parse_expr, parse_problem_file, FileError, ParseError};
pub use serialize::{expr_source, serialize_problem_file};
pub mod numfmt;
pub mod plot;
pub mod config;
pub mod error;
pub mod commands;

pub use commands::{run_cli, run_subcommand, Cli, Outcome};
pub use config::{OutputFormat, RunConfig};
pub use error::CliError;
