use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown {kind} `{name}`")]
    Dangling { line: usize, kind: &'static str, name: String },
    #[error("triangle `{tri}`: {msg}")]
    NonSimplicial { tri: String, msg: String },
    #[error("invalid complex: {0}")]
    Complex(String),
    #[error("invalid pattern: {0}")]
    Pattern(String),
    #[error("cocycle: {0}")]
    Cocycle(String),
    #[error("cover: {0}")]
    Cover(String),
    #[error("shear given for edge `{0}`, which lies in fewer than two triangles")]
    FreeShear(String),
    #[error("pattern is one-sided")]
    OneSided,
    #[error("pattern carries no transverse orientation")]
    Unoriented,
    #[error("pattern touches the frontier")]
    TouchesFrontier,
    #[error("not transverse: {0}")]
    NotTransverse(String),
    #[error("malformed curve: {0}")]
    Curve(String),
    #[error("precondition: {0}")]
    Precondition(String),
    #[error("axis: {0}")]
    Axis(String),
    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
