//! Document checker: parse, resolve, run and report.

pub mod model;
pub mod report;
pub mod run;
pub mod syntax;

use thiserror::Error;

pub use model::{build, Model, DEFAULT_MAX_DEGREE};
pub use report::Report;
pub use syntax::{parse, Document};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("syntax error at {0}")]
    Syntax(#[from] syntax::SyntaxError),
    #[error("invalid document at {0}")]
    Model(#[from] model::ModelError),
}

/// Parses, validates and runs a document.
pub fn check_source(text: &str, seed: u64, max_degree: u32) -> Result<Report, LoadError> {
    let doc = parse(text)?;
    let model = build(&doc, seed, max_degree)?;
    Ok(run::run(&model, seed))
}
