//! Product integration of `f(tau) (t - tau)^(alpha - 1)` over a uniform grid.
//!
//! `f` is replaced by its piecewise-linear interpolant and the moments of
//! the weight over every cell are taken in closed form, so the endpoint
//! singularity at `tau = t` is integrated exactly.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::{check_order, Grid1D, GridFunction, NumError};

/// `(k + 1)^p - k^p` without cancellation for large `k`.
pub(crate) fn pow_step(k: f64, p: f64) -> f64 {
    if k == 0.0 {
        1.0
    } else {
        libm::pow(k, p) * libm::expm1(p * libm::log1p(1.0 / k))
    }
}

/// Moments of `s^(alpha-1)` on `[k, k+1]` against `1` and against `s - k`,
/// in units where the spacing is one.
fn unit_cell(k: f64, alpha: f64) -> (f64, f64) {
    let m0 = pow_step(k, alpha) / alpha;
    let m1 = pow_step(k, alpha + 1.0) / (alpha + 1.0) - k * m0;
    (m0, m1)
}

/// Quadrature weights for `int_{tau_lo}^{tau_hi} f(tau) (t - tau)^(alpha-1) dtau`
/// with `t` the grid's upper bound; entry `i` multiplies `f(tau_{lo+i})`.
pub fn product_weights(grid: &Grid1D, lo: usize, hi: usize, alpha: f64) -> Result<Vec<f64>, NumError> {
    check_order("alpha", alpha)?;
    let n = grid.intervals();
    if lo >= hi || hi > n {
        return Err(NumError::Argument(alloc::format!("bad node range {lo}..={hi}")));
    }
    let scale = libm::pow(grid.spacing(), alpha);
    let mut w = alloc::vec![0.0; hi - lo + 1];
    for j in lo..hi {
        // the cell [tau_j, tau_{j+1}] sits at distance k..k+1 spacings from t
        let k = (n - j - 1) as f64;
        let (m0, m1) = unit_cell(k, alpha);
        // s = k + 1 at tau_j, so tau_j carries the moment against (s - k)
        w[j - lo] += scale * m1;
        w[j + 1 - lo] += scale * (m0 - m1);
    }
    Ok(w)
}

/// Exact moments `int_{tau_j}^{tau_{j+1}} (t - tau)^(alpha-1) dtau` for every cell.
pub fn cell_moments(grid: &Grid1D, alpha: f64) -> Result<Vec<f64>, NumError> {
    check_order("alpha", alpha)?;
    let n = grid.intervals();
    let scale = libm::pow(grid.spacing(), alpha);
    Ok((0..n).map(|j| scale * unit_cell((n - j - 1) as f64, alpha).0).collect())
}

/// `int_a^t f(tau) (t - tau)^(alpha-1) dtau` without the `1/Gamma(alpha)` factor.
pub fn weighted_integral(f: &GridFunction, alpha: f64) -> Result<Complex64, NumError> {
    weighted_integral_range(f, 0, f.grid().intervals(), alpha)
}

/// Same as [`weighted_integral`] restricted to nodes `lo..=hi`.
pub fn weighted_integral_range(f: &GridFunction, lo: usize, hi: usize, alpha: f64) -> Result<Complex64, NumError> {
    let w = product_weights(f.grid(), lo, hi, alpha)?;
    Ok(w.iter().zip(&f.values()[lo..=hi]).fold(Complex64::new(0.0, 0.0), |acc, (&wi, &fi)| acc + fi * wi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::gamma;

    fn unit(n: usize) -> Grid1D {
        Grid1D::new(0.0, 1.0, n).unwrap()
    }

    #[test]
    fn constant_on_unit_interval() {
        let f = GridFunction::from_fn(unit(16), |_| 1.0).unwrap();
        let v = weighted_integral(&f, 0.5).unwrap();
        assert!((v.re - 2.0).abs() < 1e-14);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn linear_is_a_beta_integral() {
        // int_0^1 tau (1 - tau)^(-1/2) = B(2, 1/2) = Gamma(2) Gamma(1/2) / Gamma(5/2)
        let exact = gamma(2.0).unwrap() * gamma(0.5).unwrap() / gamma(2.5).unwrap();
        let f = GridFunction::from_fn(unit(8), |x| x).unwrap();
        let v = weighted_integral(&f, 0.5).unwrap();
        assert!((v.re - exact).abs() < 1e-14, "{} vs {exact}", v.re);
        assert!((exact - 4.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn zero_integrand() {
        let v = weighted_integral(&GridFunction::zeros(unit(5)), 0.3).unwrap();
        assert_eq!(v, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn constant_closed_form_for_several_orders() {
        let grid = Grid1D::new(-0.5, 2.0, 300).unwrap();
        for alpha in [0.1, 0.5, 0.9] {
            let f = GridFunction::from_fn(grid, |_| 3.5).unwrap();
            let v = weighted_integral(&f, alpha).unwrap().re;
            let exact = 3.5 * libm::pow(2.5, alpha) / alpha;
            assert!(((v - exact) / exact).abs() < 1e-12, "alpha {alpha}");
        }
    }

    #[test]
    fn rejects_orders_outside_unit_interval() {
        let f = GridFunction::zeros(unit(4));
        for alpha in [0.0, 1.0, -0.2, 1.5] {
            assert!(weighted_integral(&f, alpha).is_err());
        }
    }

    #[test]
    fn cell_moments_sum_to_total() {
        let grid = Grid1D::new(0.0, 2.0, 50).unwrap();
        let total: f64 = cell_moments(&grid, 0.3).unwrap().iter().sum();
        assert!((total - libm::pow(2.0, 0.3) / 0.3).abs() < 1e-13);
    }
}
