use alloc::vec::Vec;

use num_complex::Complex64;

use crate::numcore::{check_order, NumError};

/// How an axis' order pair `(alpha_i, delta_i)` feeds Cresson's operator.
///
/// With [`PairConvention::WeightLeft`] the forward operator on axis `i` is
/// `D^{alpha_i, delta_i}` (left order `alpha_i`); [`PairConvention::WeightRight`]
/// uses `D^{delta_i, alpha_i}`. The adjoint in the Euler-Lagrange equation
/// always swaps the forward pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PairConvention {
    #[default]
    WeightLeft,
    WeightRight,
}

impl PairConvention {
    pub fn label(self) -> &'static str {
        match self {
            PairConvention::WeightLeft => "forward=(alpha,delta)",
            PairConvention::WeightRight => "forward=(delta,alpha)",
        }
    }
}

/// Fractional orders and the complex weight of Cresson's operator.
///
/// `alpha[i]` is the order of the action weight on axis `i` and `delta[i]`
/// the companion order. In 1D these are `(alpha, beta)`; in 2D
/// `alpha = [alpha, beta]`, `delta = [delta, chi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderSet {
    alpha: Vec<f64>,
    delta: Vec<f64>,
    gamma: Complex64,
    convention: PairConvention,
}

impl OrderSet {
    pub fn nd(alpha: Vec<f64>, delta: Vec<f64>, gamma: Complex64) -> Result<Self, NumError> {
        if alpha.is_empty() || alpha.len() != delta.len() {
            return Err(NumError::Argument(alloc::format!(
                "need matching non-empty order lists, got {} and {}",
                alpha.len(),
                delta.len()
            )));
        }
        for (&a, &d) in alpha.iter().zip(&delta) {
            check_order("alpha", a)?;
            check_order("delta", d)?;
        }
        if !gamma.is_finite() {
            return Err(NumError::Domain("gamma weight must be finite".into()));
        }
        Ok(Self { alpha, delta, gamma, convention: PairConvention::default() })
    }

    pub fn one_d(alpha: f64, beta: f64, gamma: Complex64) -> Result<Self, NumError> {
        Self::nd(alloc::vec![alpha], alloc::vec![beta], gamma)
    }

    pub fn two_d(alpha: f64, beta: f64, delta: f64, chi: f64, gamma: Complex64) -> Result<Self, NumError> {
        Self::nd(alloc::vec![alpha, beta], alloc::vec![delta, chi], gamma)
    }

    /// Uniform orders on `dim` axes.
    pub fn uniform(dim: usize, order: f64, gamma: Complex64) -> Result<Self, NumError> {
        Self::nd(alloc::vec![order; dim], alloc::vec![order; dim], gamma)
    }

    pub fn with_convention(mut self, convention: PairConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self, axis: usize) -> f64 {
        self.alpha[axis]
    }

    pub fn delta(&self, axis: usize) -> f64 {
        self.delta[axis]
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alpha
    }

    pub fn deltas(&self) -> &[f64] {
        &self.delta
    }

    pub fn gamma(&self) -> Complex64 {
        self.gamma
    }

    pub fn convention(&self) -> PairConvention {
        self.convention
    }

    /// (left order, right order) of the forward operator on `axis`.
    pub fn forward_pair(&self, axis: usize) -> (f64, f64) {
        match self.convention {
            PairConvention::WeightLeft => (self.alpha[axis], self.delta[axis]),
            PairConvention::WeightRight => (self.delta[axis], self.alpha[axis]),
        }
    }

    /// (left order, right order) of the adjoint operator on `axis`.
    pub fn adjoint_pair(&self, axis: usize) -> (f64, f64) {
        let (l, r) = self.forward_pair(axis);
        (r, l)
    }
}
