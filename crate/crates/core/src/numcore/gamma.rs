use core::f64::consts::PI;

use super::NumError;

// Lanczos approximation, g = 7, nine terms.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Euler's gamma function.
///
/// Lanczos approximation for `x >= 0.5`, reflection formula below that.
/// Non-positive integers are poles and are reported as errors.
pub fn gamma(x: f64) -> Result<f64, NumError> {
    if !x.is_finite() {
        return Err(NumError::Domain(alloc::format!("gamma of non-finite {x}")));
    }
    if x <= 0.0 && libm::floor(x) == x {
        return Err(NumError::GammaPole(x));
    }
    if (1.0..=23.0).contains(&x) && libm::floor(x) == x {
        // (x-1)! is exactly representable up to 22!
        return Ok((2..x as u64).fold(1.0, |acc, k| acc * k as f64));
    }
    Ok(gamma_unchecked(x))
}

fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        PI / (sin_pi(x) * gamma_unchecked(1.0 - x))
    } else {
        let z = x - 1.0;
        let mut sum = LANCZOS_COEFFS[0];
        for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
            sum += c / (z + i as f64);
        }
        let w = z + LANCZOS_G + 0.5;
        // w^(z+1/2) split in two halves so large arguments do not overflow early
        let half = libm::pow(w, 0.5 * (z + 0.5));
        libm::sqrt(2.0 * PI) * half * libm::exp(-w) * half * sum
    }
}

/// sin(pi x) with the argument reduced to [-1, 1] first.
fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * libm::round(0.5 * x);
    libm::sin(PI * r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn factorials() {
        assert_eq!(gamma(1.0).unwrap(), 1.0);
        assert!(rel(gamma(4.0).unwrap(), 6.0) < 1e-14);
        assert!(rel(gamma(11.0).unwrap(), 3_628_800.0) < 1e-13);
    }

    #[test]
    fn half_is_sqrt_pi() {
        assert!(rel(gamma(0.5).unwrap(), PI.sqrt()) < 1e-14);
        // reflection: Gamma(-1/2) = -2 sqrt(pi)
        assert!(rel(gamma(-0.5).unwrap(), -2.0 * PI.sqrt()) < 1e-13);
    }

    #[test]
    fn poles_are_errors() {
        for p in [0.0, -1.0, -2.0, -17.0] {
            assert_eq!(gamma(p), Err(NumError::GammaPole(p)));
        }
        assert!(matches!(gamma(f64::NAN), Err(NumError::Domain(_))));
    }

    #[test]
    fn agrees_with_libm_on_unit_to_thirty() {
        let mut x = 0.013;
        while x <= 30.0 {
            let reference = libm::tgamma(x);
            assert!(rel(gamma(x).unwrap(), reference) < 1e-12, "x = {x}");
            x += 0.173;
        }
    }

    #[test]
    fn recurrence() {
        for k in 0..100 {
            let x = 0.1 + 19.9 * (k as f64 + 0.5) / 100.0;
            let lhs = gamma(x + 1.0).unwrap();
            let rhs = x * gamma(x).unwrap();
            assert!(rel(lhs, rhs) < 1e-12, "x = {x}");
        }
    }
}
