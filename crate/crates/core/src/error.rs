use thiserror::Error;

use crate::digraph::ArcId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate vertex name `{0}`")]
    DuplicateVertex(String),
    #[error("arc {arc} has an endpoint that is not a vertex")]
    UnknownEndpoint { arc: ArcId },
    #[error("arc {arc} is a loop at `{vertex}`")]
    Loop { arc: ArcId, vertex: String },
    #[error("opposite arcs between `{tail}` and `{head}`")]
    OppositeArcs { tail: String, head: String },
    #[error("input has {actual} elements, limit is {limit}")]
    SizeCap { limit: usize, actual: usize },
    #[error("coloring covers {got} elements, graph has {expected}")]
    PartialColoring { expected: usize, got: usize },
    #[error("color {color} outside 1..={count}")]
    ColorOutOfRange { color: u32, count: u32 },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExprError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{0} leaf in {1} expression")]
    FlavorMismatch(&'static str, &'static str),
    #[error("vertex name `{0}` occurs twice in msp expression")]
    DuplicateLeaf(String),
    #[error("vertex names disagree after identification: {0}")]
    NameMismatch(String),
    #[error("malformed expression tree: {0}")]
    Malformed(String),
    #[error("invalid generator parameter: {0}")]
    Parameter(String),
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EncodingError {
    #[error("{actual} variables exceed the enumeration limit of {limit}")]
    TooManyVariables { limit: usize, actual: usize },
    #[error("malformed DIMACS input at line {line}: {message}")]
    Dimacs { line: usize, message: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("({0},{1}) is not an arc of QR7")]
pub struct NotAnArc(pub u8, pub u8);
