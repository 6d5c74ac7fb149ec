use thiserror::Error;

use crate::color::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A distance-based metric was requested for a palette that only
    /// carries its size.
    #[error("palette `{0}` is sized-only; its colors are unknown")]
    SizedOnlyPalette(String),

    #[error("palette `{name}` has {n} color(s); at least 2 are required")]
    TooFewColors { name: String, n: usize },

    #[error("unknown palette `{0}`")]
    UnknownPalette(String),

    #[error("parse error{}: {message}", location(*.line, *.column, .field.as_deref()))]
    Parse {
        line: Option<usize>,
        column: Option<usize>,
        field: Option<String>,
        message: String,
    },

    #[error("invalid palette `{name}`: {}", join_violations(.violations))]
    InvalidPalette {
        name: String,
        violations: Vec<Violation>,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("comparison {p2} vs {p1} needs a supplied accuracy cost: at least one palette is sized-only")]
    MissingAccuracy { p2: String, p1: String },

    #[error("exhaustive search over {subsets} subsets exceeds the limit of {limit}")]
    TooLarge { subsets: u128, limit: u128 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse_field(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            line: None,
            column: None,
            field: Some(field.into()),
            message: message.into(),
        }
    }
}

fn location(line: Option<usize>, column: Option<usize>, field: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(line) = line {
        out.push_str(&format!(" at line {line}"));
        if let Some(column) = column {
            out.push_str(&format!(", column {column}"));
        }
    }
    if let Some(field) = field {
        out.push_str(&format!(" in `{field}`"));
    }
    out
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
