use alloc::string::String;
use alloc::vec::Vec;

use crate::text::Span;
use crate::types::Violation;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("syntax error at {span}: {message}")]
    Syntax { span: Span, message: String },
    #[error("invalid theory: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("theory is not ground")]
    NotGround,
    #[error("{0}")]
    Precondition(String),
    #[error("{0}")]
    Input(String),
}

fn join_violations(v: &[Violation]) -> String {
    let parts: Vec<String> = v.iter().map(|x| alloc::format!("{x}")).collect();
    parts.join("; ")
}
