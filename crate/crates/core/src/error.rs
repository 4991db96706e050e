use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the toolkit.
///
/// Scalar payloads are stored as `f64` regardless of the working precision so
/// that messages stay readable.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid value for `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("{what} = {value} lies outside the open domain (-{bound}, {bound})")]
    Domain { what: &'static str, value: f64, bound: f64 },

    #[error("chirp rate is zero; the chirp degenerates to a rectangular pulse")]
    DegenerateChirp,

    #[error("sample rate {given} Hz is below the required minimum of {required} Hz")]
    Undersampled { given: f64, required: f64 },

    #[error("no zero crossing of the autocorrelation found in (0, {limit}) s")]
    NoZeroCrossing { limit: f64 },

    #[error("sidelobe region is empty (T_delta = {t_delta} s, support = {support} s)")]
    EmptySidelobes { t_delta: f64, support: f64 },

    #[error("repetition interval {delta_t_p} s is shorter than the pulse ({pulse} s)")]
    NegativeRange { delta_t_p: f64, pulse: f64 },

    #[error(
        "frequency grid too coarse: echoes up to {delay} s need a grid spacing of at most {required_spacing} Hz (have {spacing} Hz)"
    )]
    Aliasing {
        delay: f64,
        spacing: f64,
        required_spacing: f64,
    },

    #[error("singular evaluation: {0}")]
    Singular(String),

    #[error("sample rate mismatch: {left} Hz vs {right} Hz")]
    RateMismatch { left: f64, right: f64 },

    #[error("reflectogram axes do not match: {0}")]
    AxisMismatch(String),

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }

    /// Numerical-guard errors (aliasing, singularities) as opposed to bad input.
    pub fn is_numerical_guard(&self) -> bool {
        matches!(self, Error::Aliasing { .. } | Error::Singular(_))
    }
}
