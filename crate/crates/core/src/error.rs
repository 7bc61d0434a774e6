//! Crate-level error taxonomy.
//!
//! Errors fall into three classes that callers (notably the CLI) map to
//! distinct exit codes: validation of inputs, numerical failures during
//! integration or estimation, and I/O.

use thiserror::Error;

/// A single field-level problem found while validating structured input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Issue {
    /// Dotted path to the offending field, e.g. `support_u.radius`.
    pub path: String,
    pub message: String,
}

impl Issue {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl std::fmt::Display for Issue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    /// Structured input failed to parse at all.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// Input parsed but violates semantic constraints; all problems reported.
    #[error("invalid input:\n{}", format_issues(.0))]
    Invalid(Vec<Issue>),

    /// The two initial supports overlap on the grid.
    #[error("supports overlap: U and V share cell ({i}, {j}); U and V must be disjoint")]
    SupportsOverlap { i: usize, j: usize },

    /// A field left the finite range during time integration.
    #[error("non-finite value at cell ({i}, {j}) in field {field} at t = {time}")]
    NonFinite {
        i: usize,
        j: usize,
        field: &'static str,
        time: f64,
    },

    /// Grid-refinement pair disagreed beyond the acceptance threshold.
    #[error(
        "front-speed estimate did not converge: coarse {coarse}, fine {fine}, \
         spread {spread} exceeds {limit}"
    )]
    NoConvergence {
        coarse: f64,
        fine: f64,
        spread: f64,
        limit: f64,
    },

    /// A tracked front ran into the edge of the computational domain.
    #[error("front reached the domain boundary at t = {time} (position {position}); enlarge the domain")]
    FrontAtBoundary { time: f64, position: f64 },

    /// The configured bracket does not straddle the invasion threshold.
    #[error("calibration bracket invalid: {0}")]
    Bracket(String),

    /// Not enough valid data points to fit a speed.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// A cached artifact belongs to a different scenario.
    #[error("cache mismatch: {path} was produced for scenario {found}, expected {expected}")]
    CacheMismatch {
        path: String,
        found: String,
        expected: String,
    },

    #[error("malformed snapshot {path}: {message}")]
    MalformedSnapshot { path: String, message: String },

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }

    pub fn invalid_one(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Invalid(vec![Issue::new(path, message)])
    }

    /// True for errors caused by bad input rather than failed computation.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::Invalid(_)
                | Error::SupportsOverlap { .. }
                | Error::Bracket(_)
                | Error::CacheMismatch { .. }
        )
    }
}

fn format_issues(issues: &[Issue]) -> String {
    let mut out = String::new();
    for (k, issue) in issues.iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        out.push_str("  - ");
        out.push_str(&issue.to_string());
    }
    out
}

pub type Result<T> = std::result::Result<T, Error>;
