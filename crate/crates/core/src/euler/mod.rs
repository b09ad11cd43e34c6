//! Fractional Euler-Lagrange equations: residual evaluation for the plain
//! weighted action, its Cresson-derivative variant and the 2D/ND field
//! versions; the fractional Rayleigh dissipation function; shooting
//! solvers for the 1D extremal; and a direct minimizer of the discrete
//! action used as an independent check on the shooting route.
//!
//! The damping coefficient `(1 - alpha)/(t - tau)` diverges at the observer
//! time, so every residual leaves out the nodes within `epsilon` of it and
//! the IVP integration stops at `t - epsilon`.

mod minimize;
mod residual;
mod solve;

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::numcore::{Grid1D, GridNd};

pub use minimize::{direct_minimize, direct_minimize_from, MinimizeResult, MAX_NCG_ITERATIONS, NCG_GRADIENT_TOL};
pub use residual::{
    el_residual_1d, el_residual_1d_at, el_residual_1d_cresson, el_residual_2d, el_residual_nd, rayleigh,
};
pub use solve::{ivp_margin, solve_el_bvp, solve_el_ivp, BvpSolution, IvpSolution, SHOOTING_SCAN};

/// Fixed endpoint data `q(a) = qa`, `q(t) = qb`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryData1D {
    pub a: f64,
    pub t: f64,
    pub qa: f64,
    pub qb: f64,
}

impl BoundaryData1D {
    pub fn new(a: f64, t: f64, qa: f64, qb: f64) -> crate::Result<Self> {
        Grid1D::new(a, t, 2)?;
        Ok(Self { a, t, qa, qb })
    }
}

/// Per-node Euler-Lagrange residual. Nodes on the boundary, inside the
/// observer-time margin, or touched by an operator singularity are
/// excluded and hold whatever the computation produced (often NaN).
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualField {
    pub grid: GridNd,
    pub values: Vec<Complex64>,
    pub included: Vec<bool>,
    /// Excluded width below the observer time, per axis.
    pub epsilon_margin: Vec<f64>,
    /// `max |residual|` over included nodes.
    pub sup_norm: f64,
}

impl ResidualField {
    fn new(grid: GridNd, values: Vec<Complex64>, included: Vec<bool>, epsilon_margin: Vec<f64>) -> Self {
        let sup_norm = values.iter().zip(&included).filter(|(_, &inc)| inc).map(|(v, _)| v.norm()).fold(0.0, f64::max);
        Self { grid, values, included, epsilon_margin, sup_norm }
    }

    /// Sup norm over included nodes whose coordinates satisfy `keep`.
    pub fn sup_norm_where(&self, keep: impl Fn(&[f64]) -> bool) -> f64 {
        (0..self.values.len())
            .filter(|&k| self.included[k] && keep(&self.grid.coords(k)))
            .map(|k| self.values[k].norm())
            .fold(0.0, f64::max)
    }

    pub fn included_count(&self) -> usize {
        self.included.iter().filter(|&&b| b).count()
    }
}

/// `max(0.05 (t - a), 2 h)`, the excluded width below the observer time.
pub fn residual_margin(axis: &Grid1D, observer: f64) -> f64 {
    f64::max(0.05 * (observer - axis.lower()), 2.0 * axis.spacing())
}
