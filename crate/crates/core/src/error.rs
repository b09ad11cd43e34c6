use alloc::string::String;

use crate::exprdsl::{EvalError, ParseError, SlotError};
use crate::numcore::NumError;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors of the fractional operators, actions and Euler-Lagrange routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Slot(#[from] SlotError),
    #[error("evaluation failed at node {node}: {source}")]
    Eval { node: usize, source: EvalError },
    #[error("unsupported dimension {0}; 1 to 3 axes are supported")]
    UnsupportedDimension(usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("node at tau = {tau} coincides with the observer time")]
    SingularNode { tau: f64 },
    #[error("degenerate Lagrangian: d2L/dqdot2 = 0 at tau = {tau}")]
    SingularLagrangian { tau: f64 },
    #[error("no shooting slope brackets the boundary value after scanning {scanned} slopes in [{lo}, {hi}]")]
    NoShootingBracket { scanned: usize, lo: f64, hi: f64 },
}

impl Error {
    pub(crate) fn at(node: usize) -> impl FnOnce(EvalError) -> Error {
        move |source| Error::Eval { node, source }
    }
}
