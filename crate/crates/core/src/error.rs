use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid factor specification: {0}")]
    InvalidFactor(String),

    #[error("sign indeterminate within precision: {0}")]
    IndeterminateSign(String),

    #[error("element outside the generated monoid: {0}")]
    NotInMonoid(String),

    #[error("operator norm {norm} of {what} exceeds 1 + {tol}")]
    NormExceeded { what: String, norm: f64, tol: f64 },

    #[error("generators do not commute: {0}")]
    NonCommuting(String),

    #[error("block entries of the two matrices do not commute (max commutator {defect:e})")]
    NonCommutingEntries { defect: f64 },

    #[error("gram matrix not positive semidefinite: min eigenvalue {min_eigenvalue:e} < -{tol:e}")]
    GramNotPsd { min_eigenvalue: f64, tol: f64 },

    #[error("matrix not hermitian: asymmetry {defect:e}")]
    NotHermitian { defect: f64 },

    #[error("size cap exceeded: {what} needs {size}, cap is {cap}")]
    CapExceeded { what: String, size: usize, cap: usize },

    #[error("matrix is not in the algebra (residual {residual:e})")]
    NotInAlgebra { residual: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("sampler exhausted after {attempts} attempts ({accepted} accepted)")]
    SamplerExhausted { attempts: usize, accepted: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable kind name used in reports and by the C ABI.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::InvalidFactor(_) => "InvalidFactor",
            Error::IndeterminateSign(_) => "IndeterminateSign",
            Error::NotInMonoid(_) => "NotInMonoid",
            Error::NormExceeded { .. } => "NormExceeded",
            Error::NonCommuting(_) => "NonCommuting",
            Error::NonCommutingEntries { .. } => "NonCommutingEntries",
            Error::GramNotPsd { .. } => "GramNotPSD",
            Error::NotHermitian { .. } => "NotHermitian",
            Error::CapExceeded { .. } => "CapExceeded",
            Error::NotInAlgebra { .. } => "NotInAlgebra",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::SamplerExhausted { .. } => "SamplerExhausted",
            Error::Parse(_) => "Parse",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
