use thiserror::Error;

/// Errors raised by the design and analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("impedance {target} ohm is unreachable on this substrate (achievable {min:.3}..{max:.3} ohm)")]
    UnreachableImpedance { target: f64, min: f64, max: f64 },

    #[error("model validity: {0}")]
    ModelValidity(String),

    #[error("interdigital geometry: {0}")]
    Geometry(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("cannot cascade two-ports at {0} Hz and {1} Hz")]
    FrequencyMismatch(f64, f64),

    #[error("singular network: {0}")]
    Singular(String),

    #[error("no resonance in band: {0}")]
    NoResonance(String),

    #[error("no point of the sweep reaches -10 dB")]
    NoBand,

    #[error("configuration: {0}")]
    Config(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("at {freq} Hz: {source}")]
    AtFrequency {
        freq: f64,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{name} must be positive and finite, got {value}"
        )))
    }
}
