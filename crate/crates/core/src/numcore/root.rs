use super::NumError;

/// Root of `g` inside a sign-changing bracket.
///
/// Illinois-modified regula falsi, falling back to bisection whenever the
/// secant iterate stalls. Stops once `|g(x)| <= tol` or the bracket is
/// narrower than `tol`.
pub fn find_root<F>(mut g: F, lo: f64, hi: f64, tol: f64) -> Result<f64, NumError>
where
    F: FnMut(f64) -> f64,
{
    find_root_fallible(|x| Ok::<_, NumError>(g(x)), lo, hi, tol)
}

/// [`find_root`] for functions whose evaluation can fail.
pub(crate) fn find_root_fallible<F, E>(mut g: F, lo: f64, hi: f64, tol: f64) -> Result<f64, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<NumError>,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut ga = g(a)?;
    let mut gb = g(b)?;
    if ga.is_nan() || gb.is_nan() || ga * gb > 0.0 {
        return Err(NumError::NoBracket { lo: a, hi: b }.into());
    }
    if ga.abs() <= tol {
        return Ok(a);
    }
    if gb.abs() <= tol {
        return Ok(b);
    }
    // side of the bracket retained on the previous step: -1 left, 1 right
    let mut side = 0i8;
    for _ in 0..400 {
        if (b - a).abs() <= tol {
            break;
        }
        let mut x = (a * gb - b * ga) / (gb - ga);
        let width = b - a;
        if !x.is_finite() || x <= a + 0.01 * width || x >= b - 0.01 * width {
            x = 0.5 * (a + b);
        }
        let gx = g(x)?;
        if gx.is_nan() {
            return Err(NumError::Domain(alloc::format!("g is NaN at {x}")).into());
        }
        if gx.abs() <= tol {
            return Ok(x);
        }
        if (gx < 0.0) == (ga < 0.0) {
            a = x;
            ga = gx;
            if side == -1 {
                gb *= 0.5;
            }
            side = -1;
        } else {
            b = x;
            gb = gx;
            if side == 1 {
                ga *= 0.5;
            }
            side = 1;
        }
    }
    Ok(0.5 * (a + b))
}

/// Least-squares slope of `ln err` against `ln h`.
pub fn observed_order(samples: &[(f64, f64)]) -> Result<f64, NumError> {
    if samples.len() < 2 {
        return Err(NumError::Argument(alloc::format!("need at least 2 (h, err) pairs, got {}", samples.len())));
    }
    for w in samples.windows(2) {
        if w[1].0 >= w[0].0 {
            return Err(NumError::Argument("h must be strictly decreasing".into()));
        }
    }
    if let Some(&(h, e)) = samples.iter().find(|(h, e)| !(*h > 0.0 && *e > 0.0)) {
        return Err(NumError::Argument(alloc::format!("non-positive entry (h={h}, err={e})")));
    }
    let m = samples.len() as f64;
    let xs = samples.iter().map(|(h, _)| libm::log(*h));
    let ys = samples.iter().map(|(_, e)| libm::log(*e));
    let mx = xs.clone().sum::<f64>() / m;
    let my = ys.clone().sum::<f64>() / m;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in xs.zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_2, SQRT_2};

    #[test]
    fn linear_root() {
        let x = find_root(|x| x - 2.0, 0.0, 5.0, 1e-14).unwrap();
        assert!((x - 2.0).abs() < 1e-12);
    }

    #[test]
    fn sqrt_two() {
        let x = find_root(|x| x * x - 2.0, 0.0, 2.0, 1e-12).unwrap();
        assert!((x - SQRT_2).abs() < 1e-11);
    }

    #[test]
    fn half_pi() {
        let x = find_root(libm::cos, 1.0, 2.0, 1e-13).unwrap();
        assert!((x - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn no_sign_change() {
        assert!(matches!(find_root(|x| x * x + 1.0, -1.0, 1.0, 1e-10), Err(NumError::NoBracket { .. })));
    }

    #[test]
    fn orders() {
        assert!((observed_order(&[(0.1, 0.01), (0.05, 0.0025)]).unwrap() - 2.0).abs() < 1e-12);
        assert!((observed_order(&[(0.1, 1e-1), (0.01, 1e-2)]).unwrap() - 1.0).abs() < 1e-12);
        assert!(observed_order(&[(0.1, 0.01)]).is_err());
        assert!(observed_order(&[(0.1, 0.01), (0.2, 0.001)]).is_err());
        assert!(observed_order(&[(0.1, 0.01), (0.05, 0.0)]).is_err());
    }
}
