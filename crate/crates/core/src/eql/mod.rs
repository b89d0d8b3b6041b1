//! EQL: textual queries made of edge patterns and connecting tree patterns.
//!
//! ```text
//! (?x, ?w) :- (?x[type="entrepreneur"], "citizenOf", "USA"), (?x, ?y, TREE ?w) MAX 4
//! ```
//!
//! A bare string term such as `"USA"` is shorthand for a fresh hidden
//! variable constrained by `label = "USA"`.

pub mod ast;
mod lexer;
mod parser;
mod print;
mod validate;

pub use parser::parse_query;
pub use validate::{validate_query, Occurrence, ValidatedQuery, ValidationError};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum QueryError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("invalid query: {0}")]
    Invalid(#[from] ValidationError),
}

/// Parses and validates in one step.
pub fn compile(text: &str) -> Result<ValidatedQuery, QueryError> {
    let ast = parse_query(text)?;
    Ok(validate_query(&ast)?)
}
