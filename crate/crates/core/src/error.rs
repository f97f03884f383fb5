use thiserror::Error;

/// Errors produced by the solver, quadrature, and analysis layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParams {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// The integration consumed its step budget before the potential reached
    /// the cutoff. Usually means `u_cut` was set out of reach.
    #[error(
        "blow-up not reached within {max_steps} steps (U = {u_reached:.6e}, cutoff {u_cut:.6e})"
    )]
    MaxStepsExceeded {
        max_steps: usize,
        u_reached: f64,
        u_cut: f64,
    },

    /// The adaptive step size underflowed before the cutoff was reached.
    #[error("step size underflow at r = {r:.12e} (h = {h:.3e}) before U reached {u_cut:.6e}")]
    ToleranceFailure { r: f64, h: f64, u_cut: f64 },

    #[error("radius {r} lies outside the support [0, {r_m})")]
    OutOfSupport { r: f64, r_m: f64 },

    #[error("quadrature did not converge: {context}")]
    QuadratureFailure { context: String },

    #[error("insufficient data: {context}")]
    InsufficientData { context: String },

    /// A finite-difference derivative was too small to invert safely.
    #[error("degenerate derivative {name} = {value:.3e} (threshold {threshold:.3e})")]
    DegenerateDerivative {
        name: &'static str,
        value: f64,
        threshold: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Short bare-word code used for the `status` column of state tables.
    pub fn status_code(&self) -> &'static str {
        match self {
            Error::InvalidParams { .. } => "invalid",
            Error::MaxStepsExceeded { .. } => "max_steps",
            Error::ToleranceFailure { .. } => "tolerance",
            Error::OutOfSupport { .. } => "out_of_support",
            Error::QuadratureFailure { .. } => "quadrature",
            Error::InsufficientData { .. } => "insufficient_data",
            Error::DegenerateDerivative { .. } => "degenerate_derivative",
        }
    }
}
