use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CasimirError {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested model is singular for this operation (e.g. zero relaxation frequency).
    #[error("singular model: {0}")]
    SingularModel(String),

    /// A dielectric function was asked of an impedance model, or the reverse.
    #[error("wrong model: {0}")]
    WrongModel(String),

    /// ε(iζ) diverges at ζ = 0 for Drude/plasma media; the n = 0 term needs a prescription.
    #[error("permittivity diverges at zero frequency; use an n=0 prescription")]
    DivergentPermittivity,

    /// The ζ → 0 limit of the impedance reflection coefficients is 0/0.
    #[error("indeterminate zero-frequency limit; resolve it with an n=0 prescription")]
    IndeterminateLimit,

    /// `Auto` could not pick an n = 0 prescription for the model.
    #[error("n=0 prescription is ambiguous for the {0} model; set it explicitly")]
    UnresolvedPrescription(&'static str),

    /// Input data failed validation.
    #[error("validation error: {0}")]
    Validation(String),

    /// A quadrature or series failed to reach the requested tolerance.
    #[error("no convergence: {what} (partial estimate {partial:e}, error {error:e})")]
    Convergence { what: String, partial: f64, error: f64 },
}

pub type Result<T> = std::result::Result<T, CasimirError>;

pub(crate) fn domain(msg: impl Into<String>) -> CasimirError {
    CasimirError::Domain(msg.into())
}
