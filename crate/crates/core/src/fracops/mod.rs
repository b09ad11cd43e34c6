//! Left/right Riemann-Liouville derivatives on uniform grids and Cresson's
//! complex combination
//!
//! `D_gamma^{a,b} = (D_left^a - D_right^b)/2 + i gamma (D_left^a + D_right^b)/2`,
//!
//! in one dimension and along one axis of a rectangular field.
//!
//! The left derivative is the boundary term `f(a) (theta - a)^-alpha / Gamma(1-alpha)`
//! plus the Caputo-form integral of `f'`, with `f'` the slopes of the
//! piecewise-linear interpolant integrated exactly against the kernel. It
//! is exact for affine `f`. The right derivative is the left one applied to
//! the reflected samples. Where a boundary term blows up (`f(a) != 0` at
//! `theta = a`) the node is flagged singular and holds NaN.

mod orders;

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::numcore::{check_order, gamma, quad::pow_step, FieldNd, Grid1D, GridFunction, NumError};
use crate::{Error, Result};

pub use orders::{OrderSet, PairConvention};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const NAN: Complex64 = Complex64::new(f64::NAN, f64::NAN);

fn require_finite(f: &GridFunction) -> Result<()> {
    match f.values().iter().position(|v| !v.is_finite()) {
        Some(j) => Err(NumError::Domain(alloc::format!("operand has a non-finite sample at node {j}")).into()),
        None => Ok(()),
    }
}

/// Left Riemann-Liouville derivative `D_{a+}^alpha f` at every node.
pub fn rl_left(f: &GridFunction, alpha: f64) -> Result<GridFunction> {
    check_order("alpha", alpha)?;
    require_finite(f)?;
    let grid = *f.grid();
    let n = grid.intervals();
    let h = grid.spacing();
    let values = f.values();

    let boundary = 1.0 / gamma(1.0 - alpha)?;
    let memory = libm::pow(h, -alpha) / gamma(2.0 - alpha)?;
    let kernel: Vec<f64> = (0..n).map(|k| pow_step(k as f64, 1.0 - alpha)).collect();
    let diffs: Vec<Complex64> = values.windows(2).map(|w| w[1] - w[0]).collect();

    let f0 = values[0];
    let singular = f0 != ZERO;
    let mut out = Vec::with_capacity(n + 1);
    out.push(if singular { NAN } else { ZERO });
    for m in 1..=n {
        let mut acc = ZERO;
        for (j, d) in diffs[..m].iter().enumerate() {
            acc += d * kernel[m - 1 - j];
        }
        let head = if singular { f0 * (libm::pow(m as f64 * h, -alpha) * boundary) } else { ZERO };
        out.push(head + acc * memory);
    }
    Ok(GridFunction::with_flags(grid, out, singular, false))
}

/// Right Riemann-Liouville derivative `D_{t-}^beta f`, the mirror image of
/// [`rl_left`] about the midpoint of the interval.
pub fn rl_right(f: &GridFunction, beta: f64) -> Result<GridFunction> {
    Ok(rl_left(&f.reflected(), beta)?.reflected())
}

/// Cresson's operator with explicit left order, right order and weight.
///
/// Operands whose coefficient vanishes exactly (`gamma = -i` drops the
/// right derivative, `gamma = i` the left) are not evaluated, so their
/// endpoint singularities do not leak into the result.
pub fn cresson_pair(f: &GridFunction, left: f64, right: f64, gamma_w: Complex64) -> Result<GridFunction> {
    check_order("left order", left)?;
    check_order("right order", right)?;
    if !gamma_w.is_finite() {
        return Err(NumError::Domain("gamma weight must be finite".into()).into());
    }
    let i_gamma = Complex64::i() * gamma_w;
    let c_left = (Complex64::new(1.0, 0.0) + i_gamma) * 0.5;
    let c_right = (i_gamma - Complex64::new(1.0, 0.0)) * 0.5;

    let grid = *f.grid();
    let mut out = alloc::vec![ZERO; grid.len()];
    let (mut sing_lo, mut sing_hi) = (false, false);
    for (coef, op) in [(c_left, Side::Left), (c_right, Side::Right)] {
        if coef == ZERO {
            continue;
        }
        let d = match op {
            Side::Left => rl_left(f, left)?,
            Side::Right => rl_right(f, right)?,
        };
        sing_lo |= d.singular_lower();
        sing_hi |= d.singular_upper();
        for (o, v) in out.iter_mut().zip(d.values()) {
            *o += coef * v;
        }
    }
    if sing_lo {
        out[0] = NAN;
    }
    if sing_hi {
        out[grid.intervals()] = NAN;
    }
    Ok(GridFunction::with_flags(grid, out, sing_lo, sing_hi))
}

#[derive(Clone, Copy)]
enum Side {
    Left,
    Right,
}

/// Cresson's operator `D_gamma^{alpha,beta}` for a one-dimensional order set.
pub fn cresson(f: &GridFunction, orders: &OrderSet) -> Result<GridFunction> {
    if orders.dim() != 1 {
        return Err(Error::Shape(alloc::format!("1D operator given a {}-axis order set", orders.dim())));
    }
    let (left, right) = orders.forward_pair(0);
    cresson_pair(f, left, right, orders.gamma())
}

/// Applies [`cresson_pair`] to every line of `field` parallel to `axis`.
pub fn axis_cresson_pair(field: &FieldNd, axis: usize, left: f64, right: f64, gamma_w: Complex64) -> Result<FieldNd> {
    let grid = field.grid();
    if axis >= grid.dim() {
        return Err(Error::Shape(alloc::format!("axis {axis} out of range for {} axes", grid.dim())));
    }
    let ax: Grid1D = *grid.axis(axis);
    let stride = grid.stride(axis);
    let mut values = alloc::vec![ZERO; grid.len()];
    let mut singular = alloc::vec![false; grid.len()];
    for start in grid.line_starts(axis) {
        let line = GridFunction::new(ax, field.line(axis, start))?;
        let d = cresson_pair(&line, left, right, gamma_w)?;
        for (j, v) in d.values().iter().enumerate() {
            values[start + j * stride] = *v;
            singular[start + j * stride] = d.is_singular(j);
        }
    }
    Ok(FieldNd::with_flags(grid.clone(), values, singular))
}

/// Cresson's operator along `axis` with that axis' orders from `orders`.
pub fn axis_cresson(field: &FieldNd, axis: usize, orders: &OrderSet) -> Result<FieldNd> {
    if orders.dim() != field.grid().dim() {
        return Err(Error::Shape(alloc::format!(
            "order set has {} axes, field has {}",
            orders.dim(),
            field.grid().dim()
        )));
    }
    let (left, right) = orders.forward_pair(axis);
    axis_cresson_pair(field, axis, left, right, orders.gamma())
}
