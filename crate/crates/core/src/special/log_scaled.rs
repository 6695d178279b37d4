//! Sign and log-magnitude representation of real numbers.
//!
//! The transformation function contains factors like `exp(z^2)` with `z^2`
//! in the thousands. Carrying `ln|v|` instead of `v` keeps every product and
//! quotient finite; only sums need a rescaling step.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(x: f64) -> Self {
        match x.partial_cmp(&0.0) {
            Some(Ordering::Greater) => Sign::Positive,
            Some(Ordering::Less) => Sign::Negative,
            _ => Sign::Zero,
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Negative => -1.0,
            Sign::Zero => 0.0,
            Sign::Positive => 1.0,
        }
    }

    fn product(self, other: Sign) -> Sign {
        match (self, other) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Positive,
            _ => Sign::Negative,
        }
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

/// `sign * exp(log_mag)`; `log_mag` is `-inf` exactly when `sign` is zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogScaledValue {
    sign: Sign,
    log_mag: f64,
}

impl LogScaledValue {
    pub const ZERO: Self = Self {
        sign: Sign::Zero,
        log_mag: f64::NEG_INFINITY,
    };

    pub const ONE: Self = Self {
        sign: Sign::Positive,
        log_mag: 0.0,
    };

    /// Builds a value from its parts. A zero sign forces `log_mag = -inf`,
    /// and a `-inf` magnitude forces a zero sign.
    pub fn from_parts(sign: Sign, log_mag: f64) -> Self {
        if sign == Sign::Zero || log_mag == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            Self { sign, log_mag }
        }
    }

    pub fn from_f64(x: f64) -> Self {
        Self::from_parts(Sign::of(x), x.abs().ln())
    }

    /// `exp(x)`, which is always representable.
    pub fn exp(x: f64) -> Self {
        Self::from_parts(Sign::Positive, x)
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn log_mag(&self) -> f64 {
        self.log_mag
    }

    pub fn is_zero(&self) -> bool {
        self.sign == Sign::Zero
    }

    /// Converts back to `f64`; saturates to `±inf` or `0` outside the f64 range.
    pub fn to_f64(&self) -> f64 {
        self.sign.as_f64() * self.log_mag.exp()
    }

    /// Multiplies by `exp(x)`.
    pub fn scale_exp(self, x: f64) -> Self {
        Self::from_parts(self.sign, self.log_mag + x)
    }

    pub fn mul_f64(self, x: f64) -> Self {
        self * Self::from_f64(x)
    }

    pub fn recip(self) -> Self {
        Self::from_parts(self.sign, -self.log_mag)
    }

    pub fn abs(self) -> Self {
        Self::from_parts(self.sign.product(self.sign), self.log_mag)
    }

    /// `self / other` as a plain float. Fine whenever the quotient itself is
    /// representable, even if neither operand is.
    pub fn ratio(&self, other: &Self) -> f64 {
        (*self / *other).to_f64()
    }
}

impl Default for LogScaledValue {
    fn default() -> Self {
        Self::ZERO
    }
}

impl Mul for LogScaledValue {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        Self::from_parts(self.sign.product(rhs.sign), self.log_mag + rhs.log_mag)
    }
}

impl Div for LogScaledValue {
    type Output = Self;

    /// Division by zero yields a value with infinite log-magnitude.
    fn div(self, rhs: Self) -> Self {
        if rhs.is_zero() {
            return Self {
                sign: if self.is_zero() {
                    Sign::Zero
                } else {
                    self.sign
                },
                log_mag: f64::INFINITY,
            };
        }
        Self::from_parts(self.sign.product(rhs.sign), self.log_mag - rhs.log_mag)
    }
}

impl Neg for LogScaledValue {
    type Output = Self;

    fn neg(self) -> Self {
        Self::from_parts(-self.sign, self.log_mag)
    }
}

impl Add for LogScaledValue {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let top = self.log_mag.max(rhs.log_mag);
        let sum = self.sign.as_f64() * (self.log_mag - top).exp()
            + rhs.sign.as_f64() * (rhs.log_mag - top).exp();
        Self::from_f64(sum).scale_exp(top)
    }
}

impl Sub for LogScaledValue {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl fmt::Display for LogScaledValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::Zero => write!(f, "0"),
            s => write!(
                f,
                "{}exp({})",
                if s == Sign::Negative { "-" } else { "" },
                self.log_mag
            ),
        }
    }
}
