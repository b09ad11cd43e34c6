use alloc::vec::Vec;

use super::BoundaryData1D;
use crate::action::SLOTS_1D;
use crate::exprdsl::{LagrangianExpr, SlotLagrangian};
use crate::numcore::{cell_moments, check_order, gamma, Grid1D, GridFunction, NumError};
use crate::{Error, Result};

/// Stop once `max |dS/dq_j|` over interior nodes drops below this.
pub const NCG_GRADIENT_TOL: f64 = 1e-9;
pub const MAX_NCG_ITERATIONS: usize = 10_000;

/// Minimizer of the discrete weighted action with fixed endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct MinimizeResult {
    pub q: GridFunction,
    /// Discrete action at `q`.
    pub action: f64,
    pub iterations: usize,
    pub gradient_norm: f64,
    pub converged: bool,
}

/// Discrete action `(1/Gamma(alpha)) sum_j M_j L(dq_j/h, qbar_j, taubar_j)`
/// with `M_j` the exact cell moments of the weight and midpoint values of
/// `q` and `tau` on each cell.
struct Objective<'a> {
    bound: SlotLagrangian<'a>,
    grid: Grid1D,
    moments: Vec<f64>,
    inv_gamma: f64,
    qa: f64,
    qb: f64,
}

impl Objective<'_> {
    fn full_path(&self, interior: &[f64]) -> Vec<f64> {
        let mut q = Vec::with_capacity(interior.len() + 2);
        q.push(self.qa);
        q.extend_from_slice(interior);
        q.push(self.qb);
        q
    }

    /// Cell weights `M_j |L_vv| / (Gamma(alpha) h^2)` at `interior`, with
    /// `|L_vv|` replaced by 1 where it vanishes or is not finite.
    fn preconditioner(&self, interior: &[f64]) -> Tridiagonal {
        let q = self.full_path(interior);
        let h = self.grid.spacing();
        let w: Vec<f64> = self
            .moments
            .iter()
            .enumerate()
            .map(|(j, &m)| {
                let v = (q[j + 1] - q[j]) / h;
                let mid = 0.5 * (q[j] + q[j + 1]);
                let tau = 0.5 * (self.grid.node(j) + self.grid.node(j + 1));
                let c = self.bound.second_partial(&[v, mid, tau], 0, 0).map(f64::abs).unwrap_or(0.0);
                let c = if c > 0.0 && c.is_finite() { c } else { 1.0 };
                m * c * self.inv_gamma / (h * h)
            })
            .collect();
        Tridiagonal::from_cell_weights(&w)
    }

    /// Value and gradient with respect to the interior nodes.
    fn eval(&self, interior: &[f64]) -> Result<(f64, Vec<f64>)> {
        let q = self.full_path(interior);
        let h = self.grid.spacing();
        let mut value = 0.0;
        let mut grad = alloc::vec![0.0; q.len()];
        for (j, &m) in self.moments.iter().enumerate() {
            let v = (q[j + 1] - q[j]) / h;
            let mid = 0.5 * (q[j] + q[j + 1]);
            let tau = 0.5 * (self.grid.node(j) + self.grid.node(j + 1));
            let (l, g) = self.bound.gradient(&[v, mid, tau]).map_err(Error::at(j))?;
            value += m * l;
            grad[j] += m * (0.5 * g[1] - g[0] / h);
            grad[j + 1] += m * (0.5 * g[1] + g[0] / h);
        }
        let n = q.len() - 1;
        Ok((value * self.inv_gamma, grad[1..n].iter().map(|g| g * self.inv_gamma).collect()))
    }
}

/// Symmetric positive definite tridiagonal matrix over the interior nodes,
/// `sum_j w_j (e_{j+1} - e_j)(e_{j+1} - e_j)^T` with Dirichlet ends.
struct Tridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl Tridiagonal {
    fn from_cell_weights(w: &[f64]) -> Self {
        let k = w.len() - 1;
        let diag = (0..k).map(|i| w[i] + w[i + 1]).collect();
        let off = (1..k).map(|i| -w[i]).collect();
        Self { diag, off }
    }

    /// Thomas algorithm.
    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let k = rhs.len();
        let mut c = alloc::vec![0.0; k];
        let mut x = alloc::vec![0.0; k];
        let mut denom = self.diag[0];
        x[0] = rhs[0] / denom;
        for i in 1..k {
            c[i - 1] = self.off[i - 1] / denom;
            denom = self.diag[i] - self.off[i - 1] * c[i - 1];
            x[i] = (rhs[i] - self.off[i - 1] * x[i - 1]) / denom;
        }
        for i in (0..k - 1).rev() {
            x[i] -= c[i] * x[i + 1];
        }
        x
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sup(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| f64::max(m, x.abs()))
}

/// Minimizes the discrete action from the linear interpolant of the
/// boundary data on `n` cells.
pub fn direct_minimize(l: &LagrangianExpr, bd: &BoundaryData1D, alpha: f64, n: usize) -> Result<MinimizeResult> {
    let grid = Grid1D::new(bd.a, bd.t, n)?;
    let start: Vec<f64> = grid.nodes().map(|tau| bd.qa + (bd.qb - bd.qa) * (tau - bd.a) / (bd.t - bd.a)).collect();
    direct_minimize_from(l, bd, alpha, &start)
}

/// Minimizes the discrete action starting from `initial` (node values on
/// the uniform grid over `[a, t]`; its endpoints are replaced by `qa`, `qb`).
///
/// Polak-Ribiere+ nonlinear conjugate gradients, preconditioned by the
/// discrete weighted Laplacian scaled by `|L_vv|` at the start, with a secant line search
/// on the directional derivative. Runs out of iterations with
/// `converged: false` rather than failing.
pub fn direct_minimize_from(
    l: &LagrangianExpr,
    bd: &BoundaryData1D,
    alpha: f64,
    initial: &[f64],
) -> Result<MinimizeResult> {
    check_order("alpha", alpha)?;
    if initial.len() < 3 {
        return Err(NumError::InvalidGrid("direct minimization needs at least 2 cells".into()).into());
    }
    if initial.iter().any(|x| !x.is_finite()) {
        return Err(NumError::Argument("initial guess must be finite".into()).into());
    }
    let n = initial.len() - 1;
    let grid = Grid1D::new(bd.a, bd.t, n)?;
    let obj = Objective {
        bound: l.bind_slots(&SLOTS_1D)?,
        grid,
        moments: cell_moments(&grid, alpha)?,
        inv_gamma: 1.0 / gamma(alpha)?,
        qa: bd.qa,
        qb: bd.qb,
    };

    let mut x = initial[1..n].to_vec();
    let precond = obj.preconditioner(&x);
    let (mut f, mut g) = obj.eval(&x)?;
    let mut z = precond.solve(&g);
    let mut d: Vec<f64> = z.iter().map(|v| -v).collect();
    let mut step = 1.0;
    let mut prev_slope = None;
    let mut iterations = 0;
    let mut converged = sup(&g) < NCG_GRADIENT_TOL;
    while !converged && iterations < MAX_NCG_ITERATIONS {
        iterations += 1;
        let mut slope = dot(&g, &d);
        if slope >= 0.0 {
            d = z.iter().map(|v| -v).collect();
            slope = dot(&g, &d);
        }
        if let Some(prev) = prev_slope {
            step = f64::min(step * prev / slope, 1.0);
        }
        let along = |s: f64| -> Result<Trial> {
            let y: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + s * di).collect();
            let (fy, gy) = obj.eval(&y)?;
            Ok((fy, dot(&gy, &d), y, gy))
        };
        let Some((s, fy, y, gy)) = line_search(along, f, slope, step)? else {
            // no decrease along d: retry once along the preconditioned gradient
            if prev_slope.is_none() {
                break;
            }
            d = z.iter().map(|v| -v).collect();
            prev_slope = None;
            step = 1.0;
            continue;
        };
        step = s;
        prev_slope = Some(slope);
        let zy = precond.solve(&gy);
        let beta = if iterations % x.len().max(1) == 0 {
            0.0
        } else {
            f64::max(0.0, (dot(&zy, &gy) - dot(&zy, &g)) / dot(&z, &g))
        };
        x = y;
        f = fy;
        g = gy;
        z = zy;
        d = z.iter().zip(&d).map(|(zi, di)| -zi + beta * di).collect();
        converged = sup(&g) < NCG_GRADIENT_TOL;
    }

    let q = obj.full_path(&x);
    Ok(MinimizeResult {
        q: GridFunction::from_real(grid, &q)?,
        action: f,
        iterations,
        gradient_norm: sup(&g),
        converged,
    })
}

/// `(phi(s), phi'(s), point, gradient)` at a trial step.
type Trial = (f64, f64, Vec<f64>, Vec<f64>);
/// `(s, phi(s), point, gradient)` at an accepted step.
type Accepted = (f64, f64, Vec<f64>, Vec<f64>);

/// Step `s > 0` with sufficient decrease and `|phi'(s)| <= 0.01 |phi'(0)|`,
/// found by secant steps on `phi'` inside an expanding then shrinking
/// bracket. Returns the best decreasing step seen if the tolerance is not
/// met, or `None` when no decrease was found.
fn line_search(mut along: impl FnMut(f64) -> Result<Trial>, f0: f64, slope0: f64, s0: f64) -> Result<Option<Accepted>> {
    // the slack keeps the decrease test meaningful once changes in f reach rounding level
    let accept = |s: f64, f: f64| f <= f0 + 1e-4 * s * slope0 + 1e-10 * f0.abs();
    let (mut lo, mut dlo) = (0.0, slope0);
    let mut hi: Option<(f64, f64)> = None;
    let mut best: Option<Accepted> = None;
    let mut s = s0;
    for _ in 0..80 {
        let (f, ds, y, gy) = along(s)?;
        if !f.is_finite() || !ds.is_finite() {
            hi = Some((s, f64::INFINITY));
        } else if accept(s, f) && ds.abs() <= 0.01 * slope0.abs() {
            return Ok(Some((s, f, y, gy)));
        } else {
            if accept(s, f) && best.as_ref().is_none_or(|b| f < b.1) {
                best = Some((s, f, y, gy));
            }
            if ds < 0.0 && accept(s, f) {
                let (plo, pdlo) = (lo, dlo);
                lo = s;
                dlo = ds;
                if hi.is_none() {
                    let cand = secant(plo, pdlo, lo, dlo);
                    s = if cand.is_finite() && cand > lo && cand < 10.0 * lo { cand } else { 4.0 * lo };
                    continue;
                }
            } else {
                hi = Some((s, ds));
            }
        }
        let (h, dh) = hi.expect("upper bracket set above");
        let width = h - lo;
        if width <= 1e-14 * h {
            break;
        }
        let cand = if dh.is_finite() { secant(lo, dlo, h, dh) } else { f64::NAN };
        s = if cand.is_finite() && cand > lo + 0.01 * width && cand < h - 0.01 * width {
            cand
        } else {
            lo + 0.5 * width
        };
    }
    Ok(best)
}

/// Zero of the line through `(a, da)` and `(b, db)`.
fn secant(a: f64, da: f64, b: f64, db: f64) -> f64 {
    b - db * (b - a) / (db - da)
}
