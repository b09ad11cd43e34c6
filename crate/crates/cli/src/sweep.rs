//! One run of the target kind per alpha, reduced to a scalar per row and
//! compared against the classical (alpha -> 1) reference.
//!
//! Row values: the action for `action`, the residual sup norm for
//! `residual`, `q` at the last integrated node for `solve-ivp`, the
//! shooting slope for `solve-bvp` and the discrete action for `minimize`.
//! The classical reference is the unweighted trapezoidal action for
//! `action` and the same quantity at alpha = 1 - 1e-9 otherwise.

use falva_core::Complex64;

use crate::csv_out::{complex_cells, num, CsvTable};
use crate::run::{action_value, bvp_solution, classical_action, ivp_solution, minimizer, residual_field};
use crate::spec::{Kind, ProblemSpec};
use crate::CliError;

pub const CLASSICAL_ALPHA: f64 = 1.0 - 1e-9;

/// Worker threads from `FALVA_THREADS` (default 1).
pub fn thread_count() -> Result<usize, CliError> {
    match std::env::var("FALVA_THREADS") {
        Err(_) => Ok(1),
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&t| t >= 1)
            .ok_or_else(|| CliError::validation(format!("FALVA_THREADS=`{s}` is not a positive integer"))),
    }
}

fn scalar(spec: &ProblemSpec) -> Result<Complex64, CliError> {
    let real = |x: f64| Complex64::new(x, 0.0);
    match spec.kind {
        Kind::Action => Ok(action_value(spec)?.0.value),
        Kind::Residual => Ok(real(residual_field(spec)?.0.sup_norm)),
        Kind::SolveIvp => {
            let sol = ivp_solution(spec)?;
            Ok(sol.q.value(sol.q.grid().intervals()))
        }
        Kind::SolveBvp => Ok(real(bvp_solution(spec)?.slope)),
        Kind::Minimize => {
            let m = minimizer(spec)?;
            if !m.converged {
                return Err(CliError::NotConverged { iterations: m.iterations, gradient_norm: m.gradient_norm });
            }
            Ok(real(m.action))
        }
        Kind::Deriv | Kind::Sweep => Err(CliError::validation(format!("{} cannot be swept", spec.kind))),
    }
}

fn classical(spec: &ProblemSpec) -> Result<Complex64, CliError> {
    let at = spec.at_alpha(CLASSICAL_ALPHA);
    match at.kind {
        Kind::Action => classical_action(&at),
        _ => scalar(&at),
    }
}

fn status(e: &CliError) -> String {
    e.diagnostic().replace(',', ";")
}

pub fn sweep(spec: &ProblemSpec) -> Result<String, CliError> {
    let target = spec.target();
    let threads = thread_count()?.min(spec.alpha.len());
    let alphas = spec.alpha.clone();
    let mut results: Vec<Option<Result<Complex64, CliError>>> = (0..alphas.len()).map(|_| None).collect();
    if threads <= 1 {
        for (slot, &a) in results.iter_mut().zip(&alphas) {
            *slot = Some(scalar(&spec.at_alpha(a)));
        }
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..threads)
                .map(|w| {
                    let alphas = &alphas;
                    s.spawn(move || {
                        (w..alphas.len())
                            .step_by(threads)
                            .map(|i| (i, scalar(&spec.at_alpha(alphas[i]))))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            for h in handles {
                for (i, r) in h.join().expect("sweep worker panicked") {
                    results[i] = Some(r);
                }
            }
        });
    }
    let reference = classical(spec);

    let mut t = CsvTable::new(Kind::Sweep.name(), &[("of", target.name().to_string())]);
    t.comment("classical_alpha", num(CLASSICAL_ALPHA));
    if let Err(e) = &reference {
        t.comment("classical_error", status(e));
    }
    t.columns(&["alpha", "kind", "value_re", "value_im", "classical_re", "classical_im", "rel_gap", "status"]);
    let nan = Complex64::new(f64::NAN, f64::NAN);
    let c = reference.as_ref().copied().unwrap_or(nan);
    for (a, r) in alphas.iter().zip(results) {
        let r = r.expect("every alpha evaluated");
        let (v, st) = match &r {
            Ok(v) => (*v, "ok".to_string()),
            Err(e) => (nan, status(e)),
        };
        let diff = (v - c).norm();
        let gap = if c.norm() > 0.0 { diff / c.norm() } else { diff };
        let mut row = vec![num(*a), target.name().to_string()];
        row.extend(complex_cells(v));
        row.extend(complex_cells(c));
        row.push(num(gap));
        row.push(st);
        t.row(&row);
    }
    Ok(t.into_string())
}
