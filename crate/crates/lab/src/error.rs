use std::fmt;

pub type Result<T> = std::result::Result<T, LabError>;

/// Where an expression sits in a scene document.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Location {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.col)
    }
}

fn at(loc: &Option<Location>) -> String {
    loc.map(|l| format!(" at {l}")).unwrap_or_default()
}

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("cannot access {path}: {message}")]
    Io { path: String, message: String },
    #[error("scene format error in `{path}`: {message}")]
    SceneFormat { path: String, message: String },
    #[error("bad expression in `{field}`{}: {source}", at(.location))]
    Expr { field: String, location: Option<Location>, source: rcgeom_core::Error },
    #[error("scene validation failed: {0}")]
    Geometry(#[from] rcgeom_core::Error),
    #[error("unknown scene `{0}`")]
    UnknownScene(String),
    #[error("undefined field `{0}`")]
    UndefinedField(String),
    #[error("{0}")]
    Config(String),
}

impl LabError {
    pub fn io(path: impl fmt::Display, e: impl fmt::Display) -> LabError {
        LabError::Io { path: path.to_string(), message: e.to_string() }
    }

    pub fn format(path: impl Into<String>, message: impl Into<String>) -> LabError {
        LabError::SceneFormat { path: path.into(), message: message.into() }
    }
}
