//! Number types the evaluator runs over: `f64` (real mode), `Complex64`
//! (complex mode, principal branches) and forward-mode [`Dual`] numbers
//! over either, nestable for second derivatives.

use core::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use super::EvalError;

pub trait Scalar:
    Copy
    + core::fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(x: f64) -> Self;

    /// Exact zero test on every component.
    fn is_zero(&self) -> bool;

    /// Whether the (primal) value is an exact zero, i.e. unusable as a divisor.
    fn is_singular_divisor(&self) -> bool;

    /// Integer value of the primal part, if it has one and is real.
    fn integer_value(&self) -> Option<i64>;

    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Result<Self, EvalError>;
    fn sqrt(self) -> Result<Self, EvalError>;
    fn abs(self) -> Self;
    /// `x / |x|`, zero at zero.
    fn sign(self) -> Self;
    /// General power with principal branch (complex) or real-domain checks.
    fn pow(self, exponent: Self) -> Result<Self, EvalError>;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn one() -> Self {
        Self::from_f64(1.0)
    }

    fn checked_div(self, rhs: Self) -> Result<Self, EvalError> {
        if rhs.is_singular_divisor() {
            Err(EvalError::DivisionByZero)
        } else {
            Ok(self / rhs)
        }
    }

    /// Integer power by repeated squaring.
    fn powi(self, n: i64) -> Result<Self, EvalError> {
        let mut base = self;
        let mut k = n.unsigned_abs();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            k >>= 1;
            if k > 0 {
                base = base * base;
            }
        }
        if n < 0 {
            Self::one().checked_div(acc)
        } else {
            Ok(acc)
        }
    }
}

impl Scalar for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn is_singular_divisor(&self) -> bool {
        *self == 0.0
    }

    fn integer_value(&self) -> Option<i64> {
        (libm::trunc(*self) == *self && self.abs() < 9.0e15).then_some(*self as i64)
    }

    fn sin(self) -> Self {
        libm::sin(self)
    }

    fn cos(self) -> Self {
        libm::cos(self)
    }

    fn exp(self) -> Self {
        libm::exp(self)
    }

    fn ln(self) -> Result<Self, EvalError> {
        if self > 0.0 {
            Ok(libm::log(self))
        } else {
            Err(EvalError::Domain { func: "log", detail: "argument must be positive in real mode" })
        }
    }

    fn sqrt(self) -> Result<Self, EvalError> {
        if self >= 0.0 {
            Ok(libm::sqrt(self))
        } else {
            Err(EvalError::Domain { func: "sqrt", detail: "argument must be non-negative in real mode" })
        }
    }

    fn abs(self) -> Self {
        libm::fabs(self)
    }

    fn sign(self) -> Self {
        if self == 0.0 {
            0.0
        } else {
            libm::copysign(1.0, self)
        }
    }

    fn pow(self, exponent: Self) -> Result<Self, EvalError> {
        if let Some(k) = exponent.integer_value() {
            if k.unsigned_abs() <= 1 << 20 {
                return Scalar::powi(self, k);
            }
        }
        if self > 0.0 {
            Ok(libm::pow(self, exponent))
        } else if self == 0.0 {
            if exponent > 0.0 {
                Ok(0.0)
            } else {
                Err(EvalError::DivisionByZero)
            }
        } else {
            Err(EvalError::Domain { func: "^", detail: "negative base with non-integer exponent in real mode" })
        }
    }
}

impl Scalar for Complex64 {
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn is_singular_divisor(&self) -> bool {
        self.is_zero()
    }

    fn integer_value(&self) -> Option<i64> {
        if self.im == 0.0 {
            self.re.integer_value()
        } else {
            None
        }
    }

    fn sin(self) -> Self {
        Complex64::sin(self)
    }

    fn cos(self) -> Self {
        Complex64::cos(self)
    }

    fn exp(self) -> Self {
        Complex64::exp(self)
    }

    fn ln(self) -> Result<Self, EvalError> {
        if self.is_zero() {
            Err(EvalError::Domain { func: "log", detail: "logarithm of zero" })
        } else {
            Ok(Complex64::ln(self))
        }
    }

    fn sqrt(self) -> Result<Self, EvalError> {
        Ok(Complex64::sqrt(self))
    }

    fn abs(self) -> Self {
        Complex64::new(self.norm(), 0.0)
    }

    fn sign(self) -> Self {
        if self.is_zero() {
            self
        } else {
            self / self.norm()
        }
    }

    fn pow(self, exponent: Self) -> Result<Self, EvalError> {
        if self.is_zero() {
            return if exponent.re > 0.0 { Ok(self) } else { Err(EvalError::DivisionByZero) };
        }
        Ok((exponent * Complex64::ln(self)).exp())
    }
}

/// First-order dual number `re + eps * e`, `e^2 = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual<T> {
    pub re: T,
    pub eps: T,
}

impl<T: Scalar> Dual<T> {
    pub fn new(re: T, eps: T) -> Self {
        Self { re, eps }
    }

    pub fn constant(re: T) -> Self {
        Self { re, eps: T::zero() }
    }

    pub fn variable(re: T) -> Self {
        Self { re, eps: T::one() }
    }

    /// `f(re) + f'(re) eps`, skipping the derivative when `eps` is zero so
    /// that unseeded evaluation never trips on the derivative's domain.
    fn chain(self, value: T, derivative: impl FnOnce() -> Result<T, EvalError>) -> Result<Self, EvalError> {
        let eps = if self.eps.is_zero() { T::zero() } else { derivative()? * self.eps };
        Ok(Self { re: value, eps })
    }
}

impl<T: Scalar> Add for Dual<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self { re: self.re + rhs.re, eps: self.eps + rhs.eps }
    }
}

impl<T: Scalar> Sub for Dual<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self { re: self.re - rhs.re, eps: self.eps - rhs.eps }
    }
}

impl<T: Scalar> Mul for Dual<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self { re: self.re * rhs.re, eps: self.re * rhs.eps + self.eps * rhs.re }
    }
}

impl<T: Scalar> Div for Dual<T> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let re = self.re / rhs.re;
        Self { re, eps: (self.eps - re * rhs.eps) / rhs.re }
    }
}

impl<T: Scalar> Neg for Dual<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { re: -self.re, eps: -self.eps }
    }
}

impl<T: Scalar> Scalar for Dual<T> {
    fn from_f64(x: f64) -> Self {
        Self::constant(T::from_f64(x))
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.eps.is_zero()
    }

    fn is_singular_divisor(&self) -> bool {
        self.re.is_singular_divisor()
    }

    fn integer_value(&self) -> Option<i64> {
        if self.eps.is_zero() {
            self.re.integer_value()
        } else {
            None
        }
    }

    fn sin(self) -> Self {
        Self { re: self.re.sin(), eps: self.eps * self.re.cos() }
    }

    fn cos(self) -> Self {
        Self { re: self.re.cos(), eps: -(self.eps * self.re.sin()) }
    }

    fn exp(self) -> Self {
        let e = self.re.exp();
        Self { re: e, eps: self.eps * e }
    }

    fn ln(self) -> Result<Self, EvalError> {
        let re = self.re;
        self.chain(re.ln()?, || T::one().checked_div(re))
    }

    fn sqrt(self) -> Result<Self, EvalError> {
        let root = self.re.sqrt()?;
        self.chain(root, || T::one().checked_div(T::from_f64(2.0) * root))
    }

    fn abs(self) -> Self {
        Self { re: self.re.abs(), eps: self.eps * self.re.sign() }
    }

    fn sign(self) -> Self {
        Self::constant(self.re.sign())
    }

    fn pow(self, exponent: Self) -> Result<Self, EvalError> {
        let value = self.re.pow(exponent.re)?;
        let mut eps = T::zero();
        if !self.eps.is_zero() {
            // b a^(b-1) da
            let lowered = self.re.pow(exponent.re - T::one())?;
            eps = eps + exponent.re * lowered * self.eps;
        }
        if !exponent.eps.is_zero() {
            // a^b ln(a) db
            eps = eps + value * self.re.ln()? * exponent.eps;
        }
        Ok(Self { re: value, eps })
    }
}
