//! Shared numerical kernel: gamma function, uniform grids, product
//! integration against the singular weight, RK4 stepping, bracketing root
//! finding and convergence-order estimation.

mod gamma;
mod grid;
mod ode;
pub(crate) mod quad;
pub(crate) mod root;

use alloc::string::String;

pub use gamma::gamma;
pub use grid::{FieldNd, Grid1D, GridFunction, GridNd};
pub use ode::rk4_step;
pub use quad::{cell_moments, product_weights, weighted_integral, weighted_integral_range};
pub use root::{find_root, observed_order};

/// Failures of the low-level numerical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumError {
    #[error("gamma function has a pole at x = {0}")]
    GammaPole(f64),
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("non-finite derivative evaluation in RK4 step at tau = {tau}")]
    StepFailure { tau: f64 },
    #[error("no sign change of g on [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },
    #[error("invalid argument: {0}")]
    Argument(String),
}

/// Checks that a fractional order lies strictly inside (0, 1).
pub(crate) fn check_order(name: &str, value: f64) -> Result<(), NumError> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(NumError::Domain(alloc::format!("order {name} = {value} must lie strictly inside (0, 1)")))
    }
}
