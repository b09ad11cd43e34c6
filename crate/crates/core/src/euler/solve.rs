use alloc::vec::Vec;

use super::BoundaryData1D;
use crate::action::SLOTS_1D;
use crate::exprdsl::{LagrangianExpr, SlotLagrangian};
use crate::numcore::root::find_root_fallible;
use crate::numcore::{check_order, rk4_step, Grid1D, GridFunction, NumError};
use crate::{Error, Result};

/// Number of trial slopes scanned when looking for a shooting bracket.
pub const SHOOTING_SCAN: usize = 32;

/// Extremal from initial data, integrated up to `t - epsilon`.
#[derive(Debug, Clone, PartialEq)]
pub struct IvpSolution {
    pub q: GridFunction,
    pub qdot: GridFunction,
    pub observer: f64,
    pub epsilon: f64,
}

/// Boundary-value extremal found by shooting.
#[derive(Debug, Clone, PartialEq)]
pub struct BvpSolution {
    pub q: GridFunction,
    pub qdot: GridFunction,
    pub observer: f64,
    pub epsilon: f64,
    /// Initial slope `qdot(a)` of the accepted trajectory.
    pub slope: f64,
    /// Extrapolated `q(t) - qb` of the accepted trajectory.
    pub endpoint_defect: f64,
}

/// `max(0.02 (t - a), 2 (t - a)/n)`, where the IVP integration stops.
pub fn ivp_margin(a: f64, t: f64, n: usize) -> f64 {
    f64::max(0.02 * (t - a), 2.0 * (t - a) / n as f64)
}

fn acceleration(bound: &SlotLagrangian<'_>, alpha: f64, t: f64, state: &[f64], tau: f64, node: usize) -> Result<f64> {
    let (q, v) = (state[0], state[1]);
    let p = [v, q, tau];
    let l_vv = bound.second_partial(&p, 0, 0).map_err(Error::at(node))?;
    if l_vv == 0.0 || !l_vv.is_finite() {
        return Err(Error::SingularLagrangian { tau });
    }
    let l_vq = bound.second_partial(&p, 0, 1).map_err(Error::at(node))?;
    let l_vt = bound.second_partial(&p, 0, 2).map_err(Error::at(node))?;
    let (_, g) = bound.gradient(&p).map_err(Error::at(node))?;
    Ok((g[1] - (1.0 - alpha) / (t - tau) * g[0] - l_vq * v - l_vt) / l_vv)
}

/// Integrates the weighted Euler-Lagrange equation
/// `L_vv q'' = L_q - (1 - alpha)/(t - tau) L_v - L_vq q' - L_vtau`
/// with RK4 on the uniform `n`-cell grid over `[a, t]`, stopping at the
/// last node no later than `t - epsilon`.
pub fn solve_el_ivp(l: &LagrangianExpr, a: f64, t: f64, q0: f64, v0: f64, alpha: f64, n: usize) -> Result<IvpSolution> {
    check_order("alpha", alpha)?;
    if !(q0.is_finite() && v0.is_finite()) {
        return Err(NumError::Argument("initial data must be finite".into()).into());
    }
    let grid = Grid1D::new(a, t, n)?;
    let bound = l.bind_slots(&SLOTS_1D)?;
    let epsilon = ivp_margin(a, t, n);
    let h = grid.spacing();
    let m = libm::floor((t - a - epsilon) / h + 1e-9) as usize;
    if m < 2 {
        return Err(NumError::InvalidGrid(alloc::format!(
            "{n} cells leave fewer than 2 steps below the observer margin"
        ))
        .into());
    }

    let mut qs = Vec::with_capacity(m + 1);
    let mut vs = Vec::with_capacity(m + 1);
    let mut state = alloc::vec![q0, v0];
    qs.push(q0);
    vs.push(v0);
    for j in 0..m {
        let tau = grid.node(j);
        state = rk4_step(
            &state,
            |x: &[f64], s: f64| -> Result<Vec<f64>> {
                let acc = acceleration(&bound, alpha, t, x, s, j)?;
                Ok(alloc::vec![x[1], acc])
            },
            tau,
            h,
        )?;
        qs.push(state[0]);
        vs.push(state[1]);
    }
    let truncated = Grid1D::new(a, grid.node(m), m)?;
    Ok(IvpSolution {
        q: GridFunction::from_real(truncated, &qs)?,
        qdot: GridFunction::from_real(truncated, &vs)?,
        observer: t,
        epsilon,
    })
}

/// Endpoint estimate from the last integrated node. Near the observer the
/// extremal behaves like `c0 + c1 (t - tau)^(2 - alpha)`, so the remaining
/// increment is `qdot (t - tau_m) / (2 - alpha)`.
fn extrapolated_end(sol: &IvpSolution, alpha: f64) -> f64 {
    let m = sol.q.grid().intervals();
    let gap = sol.observer - sol.q.grid().upper();
    sol.q.value(m).re + sol.qdot.value(m).re * gap / (2.0 - alpha)
}

/// Shooting on the initial slope so that the extrapolated endpoint hits `qb`.
///
/// Scans [`SHOOTING_SCAN`] slopes across `[-10, 10]` times the chord slope
/// (or `max(1, |qa|)/(t - a)` when the chord is flat) and refines the first
/// sign change with Illinois regula falsi.
pub fn solve_el_bvp(l: &LagrangianExpr, bd: &BoundaryData1D, alpha: f64, n: usize) -> Result<BvpSolution> {
    check_order("alpha", alpha)?;
    let BoundaryData1D { a, t, qa, qb } = *bd;
    let chord = (qb - qa) / (t - a);
    let scale = if chord != 0.0 { chord } else { f64::max(1.0, qa.abs()) / (t - a) };
    let defect = |v0: f64| -> Result<f64> {
        let sol = solve_el_ivp(l, a, t, qa, v0, alpha, n)?;
        Ok(extrapolated_end(&sol, alpha) - qb)
    };
    // failures during the scan (blow-up, singular L_vv) count as no sample
    let slopes: Vec<f64> =
        (0..SHOOTING_SCAN).map(|k| scale * (-10.0 + 20.0 * k as f64 / (SHOOTING_SCAN - 1) as f64)).collect();
    let mut first_err = None;
    let samples: Vec<Option<f64>> = slopes
        .iter()
        .map(|&s| match defect(s) {
            Ok(g) if g.is_finite() => Some(g),
            Ok(_) => None,
            Err(e) => {
                first_err.get_or_insert(e);
                None
            }
        })
        .collect();
    if samples.iter().all(Option::is_none) {
        if let Some(e) = first_err {
            return Err(e);
        }
    }

    let tol = 1e-13 * f64::max(1.0, qb.abs());
    let mut slope = None;
    for k in 0..SHOOTING_SCAN {
        let Some(gk) = samples[k] else { continue };
        if gk == 0.0 {
            slope = Some(slopes[k]);
            break;
        }
        if k + 1 < SHOOTING_SCAN {
            if let Some(gn) = samples[k + 1] {
                if (gk < 0.0) != (gn < 0.0) {
                    slope = Some(find_root_fallible(defect, slopes[k], slopes[k + 1], tol)?);
                    break;
                }
            }
        }
    }
    let Some(slope) = slope else {
        let (lo, hi) = (slopes[0].min(slopes[SHOOTING_SCAN - 1]), slopes[0].max(slopes[SHOOTING_SCAN - 1]));
        return Err(Error::NoShootingBracket { scanned: SHOOTING_SCAN, lo, hi });
    };
    let sol = solve_el_ivp(l, a, t, qa, slope, alpha, n)?;
    let endpoint_defect = extrapolated_end(&sol, alpha) - qb;
    Ok(BvpSolution { q: sol.q, qdot: sol.qdot, observer: t, epsilon: sol.epsilon, slope, endpoint_defect })
}
