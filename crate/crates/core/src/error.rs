use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the function it was passed to.
    #[error("domain error: {0}")]
    Domain(String),

    /// The contrast ratio is identically 1 for p = 0 and p = 1.
    #[error("contrast ratio is degenerate for p = {0} (ratio is identically 1)")]
    DegenerateContrast(f64),

    #[error("no risk-seeking crossover for p = {p}, rho = {rho}: {reason}")]
    NoCrossover { p: f64, rho: f64, reason: String },

    /// |CR_dB| never reaches the threshold on the admissible range of x.
    #[error("|CR_dB| stays below {threshold_db} dB up to the domain edge x = {edge}")]
    BoundaryAtDomainEdge { threshold_db: f64, edge: f64 },

    #[error("no sign change of the bracketed function on [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },

    #[error("parse error at line {line}{}: {message}", column.map(|c| format!(", column {c}")).unwrap_or_default())]
    Parse {
        line: u64,
        column: Option<usize>,
        message: String,
    },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for I/O failures, false for every model, parse or validation error.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. })
    }
}
