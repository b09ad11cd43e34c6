use alloc::vec::Vec;

use super::NumError;

/// One classical fourth-order Runge-Kutta step of `dx/dtau = field(x, tau)`.
///
/// A non-finite stage derivative aborts the step with
/// [`NumError::StepFailure`] carrying the stage time.
pub fn rk4_step<F, E>(state: &[f64], mut field: F, tau: f64, h: f64) -> Result<Vec<f64>, E>
where
    F: FnMut(&[f64], f64) -> Result<Vec<f64>, E>,
    E: From<NumError>,
{
    let mut stage = |x: &[f64], at: f64| -> Result<Vec<f64>, E> {
        let d = field(x, at)?;
        if d.iter().all(|v| v.is_finite()) {
            Ok(d)
        } else {
            Err(NumError::StepFailure { tau: at }.into())
        }
    };
    let shifted = |k: &[f64], c: f64| -> Vec<f64> { state.iter().zip(k).map(|(x, d)| x + c * d).collect() };

    let k1 = stage(state, tau)?;
    let k2 = stage(&shifted(&k1, 0.5 * h), tau + 0.5 * h)?;
    let k3 = stage(&shifted(&k2, 0.5 * h), tau + 0.5 * h)?;
    let k4 = stage(&shifted(&k3, h), tau + h)?;
    Ok(state.iter().enumerate().map(|(i, x)| x + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])).collect())
}
