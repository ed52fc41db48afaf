use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The graph or the source document violates a structural rule
    /// (dangling reference, duplicate id, bad length, open outline...).
    #[error("structural error: {0}")]
    Structural(String),

    #[error("way {way} references missing node(s) {}", join_ids(.missing))]
    DanglingNodeRefs { way: i64, missing: Vec<i64> },

    #[error("malformed XML at line {line}, column {column}: {message}")]
    Xml {
        line: u32,
        column: u32,
        message: String,
    },

    #[error("unsupported level value {value:?}{}", element_suffix(.element))]
    UnsupportedLevel {
        value: String,
        element: Option<String>,
    },

    #[error("unknown characteristic {0:?}")]
    UnknownCharacteristic(String),

    #[error("unknown preference level {0:?}")]
    UnknownLevel(String),

    #[error("unknown place {0:?}")]
    UnknownPlace(String),

    #[error("{query:?} matches several rooms: {}", .candidates.join(", "))]
    AmbiguousRoom {
        query: String,
        candidates: Vec<String>,
    },

    #[error("origin and destination are the same")]
    DegenerateRoute,

    #[error("unsupported graph schema version {0}")]
    SchemaVersion(u32),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by the content of a map or graph file rather
    /// than by I/O or caller input.
    pub fn is_structural(&self) -> bool {
        matches!(
            self,
            Error::Structural(_)
                | Error::DanglingNodeRefs { .. }
                | Error::Xml { .. }
                | Error::UnsupportedLevel { .. }
                | Error::UnknownCharacteristic(_)
                | Error::SchemaVersion(_)
                | Error::Json(_)
        )
    }
}

fn join_ids(ids: &[i64]) -> String {
    ids.iter()
        .map(|id| id.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn element_suffix(element: &Option<String>) -> String {
    match element {
        Some(e) => format!(" on {e}"),
        None => String::new(),
    }
}
