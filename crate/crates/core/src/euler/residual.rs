use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{residual_margin, ResidualField};
use crate::action::{check_dim, qdot_samples, require_real, slot_point, slots_nd, QdotSource, SLOTS_1D, SLOTS_2D};
use crate::exprdsl::{LagrangianExpr, Scalar};
use crate::fracops::{axis_cresson, cresson_pair, OrderSet};
use crate::numcore::{check_order, FieldNd, Grid1D, GridFunction, GridNd, NumError};
use crate::{Error, Result};

const NAN: Complex64 = Complex64::new(f64::NAN, f64::NAN);

/// Fractional Rayleigh dissipation `R = (1 - alpha) L / (t - tau)` at every node.
///
/// `alpha` may equal 1, which gives `R = 0`. Every node must lie strictly
/// below the observer time `t`.
pub fn rayleigh(l: &LagrangianExpr, qdot: &GridFunction, q: &GridFunction, alpha: f64, t: f64) -> Result<GridFunction> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(NumError::Domain(format!("order alpha = {alpha} must lie in (0, 1]")).into());
    }
    if qdot.grid() != q.grid() {
        return Err(Error::Shape("qdot and q live on different grids".into()));
    }
    let bound = l.bind_slots(&SLOTS_1D)?;
    let real = q.is_real() && qdot.is_real();
    let grid = *q.grid();
    let values = grid
        .nodes()
        .enumerate()
        .map(|(j, tau)| {
            if tau >= t {
                return Err(Error::SingularNode { tau });
            }
            let lag = if real {
                bound.value(&[qdot.value(j).re, q.value(j).re, tau]).map(Complex64::from_f64)
            } else {
                bound.value(&[qdot.value(j), q.value(j), Complex64::from_f64(tau)])
            }
            .map_err(Error::at(j))?;
            Ok(lag * ((1.0 - alpha) / (t - tau)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GridFunction::new(grid, values)?)
}

/// Residual `dL/dq - d/dtau dL/dqdot - (1 - alpha)/(t - tau) dL/dqdot` with
/// the observer time at the end of the grid.
pub fn el_residual_1d(l: &LagrangianExpr, q: &GridFunction, alpha: f64, qdot: &QdotSource) -> Result<ResidualField> {
    el_residual_1d_at(l, q, alpha, qdot, q.grid().upper())
}

/// [`el_residual_1d`] for an observer time at or beyond the last node, e.g.
/// for paths produced by [`super::solve_el_ivp`] which stop short of `t`.
pub fn el_residual_1d_at(
    l: &LagrangianExpr,
    q: &GridFunction,
    alpha: f64,
    qdot: &QdotSource,
    observer: f64,
) -> Result<ResidualField> {
    check_order("alpha", alpha)?;
    require_real(q)?;
    let grid = *q.grid();
    if observer < grid.upper() {
        return Err(Error::Shape(format!("observer time {observer} lies before the end of the grid {}", grid.upper())));
    }
    let bound = l.bind_slots(&SLOTS_1D)?;
    let v = qdot_samples(q, qdot)?;
    let n = grid.intervals();
    let h = grid.spacing();

    let mut p_qdot = Vec::with_capacity(n + 1);
    let mut p_q = Vec::with_capacity(n + 1);
    for (j, tau) in grid.nodes().enumerate() {
        let (_, g) = bound.gradient(&[v[j], q.value(j).re, tau]).map_err(Error::at(j))?;
        p_qdot.push(g[0]);
        p_q.push(g[1]);
    }

    let eps = residual_margin(&Grid1D::new(grid.lower(), observer, n)?, observer).max(2.0 * h);
    let cutoff = observer - eps + 1e-12 * (observer - grid.lower());
    let mut values = alloc::vec![NAN; n + 1];
    let mut included = alloc::vec![false; n + 1];
    for j in 1..n {
        let tau = grid.node(j);
        let r = p_q[j] - (p_qdot[j + 1] - p_qdot[j - 1]) / (2.0 * h) - (1.0 - alpha) / (observer - tau) * p_qdot[j];
        values[j] = Complex64::new(r, 0.0);
        included[j] = tau <= cutoff && r.is_finite();
    }
    let grid_nd = GridNd::new(alloc::vec![grid])?;
    Ok(ResidualField::new(grid_nd, values, included, alloc::vec![eps]))
}

/// Residual of the Cresson-derivative equation
/// `dL/dq - D_{-gamma}^{beta,alpha}(dL/dqdot) - (1 - alpha)/(t - tau) dL/dqdot`,
/// partials taken at `(D_gamma^{alpha,beta} q, q, tau)`.
///
/// This is the negative of the ND residual at `N = 1`, computed by the same
/// kernel and negated, so the two agree bit for bit up to sign.
pub fn el_residual_1d_cresson(l: &LagrangianExpr, q: &GridFunction, orders: &OrderSet) -> Result<ResidualField> {
    if orders.dim() != 1 {
        return Err(Error::Shape(format!("1D residual given a {}-axis order set", orders.dim())));
    }
    let mut r = field_residual(l, &SLOTS_1D, &FieldNd::from_grid_function(q), orders)?;
    for v in &mut r.values {
        *v = -*v;
    }
    Ok(r)
}

/// Double-weighted residual
/// `D_{-gamma;x}(dL/dqx) + (1-alpha)/(xi-x) dL/dqx + D_{-gamma;y}(dL/dqy) + (1-beta)/(lambda-y) dL/dqy - dL/dq`.
pub fn el_residual_2d(l: &LagrangianExpr, q: &FieldNd, orders: &OrderSet) -> Result<ResidualField> {
    if q.grid().dim() != 2 {
        return Err(Error::Shape(format!("2D residual given a {}-axis field", q.grid().dim())));
    }
    field_residual(l, &SLOTS_2D, q, orders)
}

/// N-dimensional residual
/// `sum_i [D_{-gamma;x_i}^{delta_i,alpha_i}(dL/dq_{x_i}) + (1-alpha_i)/(xi_i-x_i) dL/dq_{x_i}] - dL/dq`.
pub fn el_residual_nd(l: &LagrangianExpr, q: &FieldNd, orders: &OrderSet) -> Result<ResidualField> {
    let names = slots_nd(q.grid().dim());
    let slots: Vec<&str> = names.iter().map(alloc::string::String::as_str).collect();
    field_residual(l, &slots, q, orders)
}

/// Applies the adjoint Cresson operator along one line, restricted to the
/// span of finite samples (a non-finite endpoint sample drops one cell).
fn adjoint_line(
    values: &[Complex64],
    axis: &Grid1D,
    left: f64,
    right: f64,
    gamma_w: Complex64,
) -> Result<Vec<Complex64>> {
    let n = axis.intervals();
    let lo = usize::from(!values[0].is_finite());
    let hi = if values[n].is_finite() { n } else { n - 1 };
    let mut out = alloc::vec![NAN; n + 1];
    if hi < lo + 2 {
        return Ok(out);
    }
    // a line with interior gaps lies on a singular face; it stays NaN
    if values[lo..=hi].iter().any(|v| !v.is_finite()) {
        return Ok(out);
    }
    let segment = GridFunction::new(axis.sub(lo, hi)?, values[lo..=hi].to_vec())?;
    let d = cresson_pair(&segment, left, right, gamma_w)?;
    out[lo..=hi].copy_from_slice(d.values());
    Ok(out)
}

fn field_residual(l: &LagrangianExpr, slots: &[&str], q: &FieldNd, orders: &OrderSet) -> Result<ResidualField> {
    let dim = check_dim(q, orders)?;
    let bound = l.bind_slots(slots)?;
    let grid = q.grid();
    let len = grid.len();
    let derivs = (0..dim).map(|i| axis_cresson(q, i, orders)).collect::<Result<Vec<_>>>()?;

    // partials[i] = dL/dq_{x_i}; partials[dim] = dL/dq
    let mut partials = alloc::vec![alloc::vec![NAN; len]; dim + 1];
    for flat in 0..len {
        let point = slot_point(q, &derivs, flat);
        if point.iter().any(|v| !v.is_finite()) {
            continue;
        }
        let (_, g) = bound.gradient(&point).map_err(Error::at(flat))?;
        for (k, p) in partials.iter_mut().enumerate() {
            p[flat] = g[k];
        }
    }

    let observer = grid.upper();
    let neg_gamma = -orders.gamma();
    let mut values = alloc::vec![Complex64::new(0.0, 0.0); len];
    for i in 0..dim {
        let axis = grid.axis(i);
        let stride = grid.stride(i);
        let (left, right) = orders.adjoint_pair(i);
        let mut adjoint = alloc::vec![NAN; len];
        for start in grid.line_starts(i) {
            let line: Vec<Complex64> = (0..axis.len()).map(|j| partials[i][start + j * stride]).collect();
            for (j, v) in adjoint_line(&line, axis, left, right, neg_gamma)?.into_iter().enumerate() {
                adjoint[start + j * stride] = v;
            }
        }
        let damping = 1.0 - orders.alpha(i);
        for (flat, acc) in values.iter_mut().enumerate() {
            let x = grid.coords(flat)[i];
            *acc += adjoint[flat] + partials[i][flat] * (damping / (observer[i] - x));
        }
    }
    for (acc, pq) in values.iter_mut().zip(&partials[dim]) {
        *acc -= pq;
    }

    let margins: Vec<f64> = (0..dim).map(|i| residual_margin(grid.axis(i), observer[i])).collect();
    let included = (0..len)
        .map(|flat| {
            let idx = grid.index_of(flat);
            let interior = idx.iter().zip(grid.axes()).all(|(&j, ax)| j >= 1 && j < ax.intervals());
            let clear = (0..dim).all(|i| {
                grid.axis(i).node(idx[i]) <= observer[i] - margins[i] + 1e-12 * (observer[i] - grid.axis(i).lower())
            });
            interior && clear && values[flat].is_finite()
        })
        .collect();
    Ok(ResidualField::new(grid.clone(), values, included, margins))
}
