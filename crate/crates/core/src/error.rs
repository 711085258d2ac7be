use alloc::string::String;

/// Errors raised by the algebraic core.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("invalid prime modulus {0}: must be a prime below 2^31")]
    InvalidModulus(u64),
    #[error("ambient dimension mismatch: expected P^{expected}, found P^{found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("twist mismatch: {0}")]
    TwistMismatch(String),
    #[error("entry ({row}, {col}) has degree {found}, expected {expected}")]
    EntryDegree {
        row: usize,
        col: usize,
        expected: i64,
        found: i64,
    },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("polynomial is not homogeneous of degree {0}")]
    NotHomogeneous(i64),
    #[error("index {0} out of range")]
    OutOfRange(String),
    #[error("not polynomial of claimed degree {0}")]
    NotPolynomial(usize),
    #[error("need at least {needed} values, got {got}")]
    TooFewValues { needed: usize, got: usize },
    #[error("invalid monad: {0}")]
    InvalidMonad(String),
    #[error("window disagreement: {0}")]
    WindowDisagreement(String),
    #[error("not an automorphism")]
    NotAutomorphism,
    #[error("malformed point: {0}")]
    MalformedPoint(String),
    #[error("exhausted max_tries ({0})")]
    ExhaustedTries(usize),
    #[error("unsupported field for this operation: {0}")]
    UnsupportedField(String),
}

impl Error {
    /// Stable machine-readable code used in JSON error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "division_by_zero",
            Error::FieldMismatch(..) => "field_mismatch",
            Error::InvalidModulus(_) => "invalid_modulus",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::TwistMismatch(_) => "twist_mismatch",
            Error::EntryDegree { .. } => "entry_degree",
            Error::Shape(_) => "shape_mismatch",
            Error::NotHomogeneous(_) => "not_homogeneous",
            Error::OutOfRange(_) => "out_of_range",
            Error::NotPolynomial(_) => "not_polynomial",
            Error::TooFewValues { .. } => "too_few_values",
            Error::InvalidMonad(_) => "invalid_monad",
            Error::WindowDisagreement(_) => "window_disagreement",
            Error::NotAutomorphism => "not_automorphism",
            Error::MalformedPoint(_) => "malformed_point",
            Error::ExhaustedTries(_) => "exhausted_max_tries",
            Error::UnsupportedField(_) => "unsupported_field",
        }
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
