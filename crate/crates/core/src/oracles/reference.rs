//! Extended-precision reference values.
//!
//! Numbers are big integers with a fixed count of fractional bits. The
//! inputs are `f64`, hence exact dyadic rationals, so every series term is
//! formed from exact integers and only the per-term division truncates (by
//! at most one unit in the last place). This path shares nothing with the
//! production evaluators: no asymptotics, no gamma function, no f64 sums.

use std::cmp::Ordering;
use std::f64::consts::{LN_2, LOG2_10};

use num_bigint::{BigInt, Sign as BigSign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::special::LogScaledValue;

pub const MAX_DIGITS: u32 = 60;
pub const MAX_TERMS: usize = 10_000;
const GUARD_BITS: u64 = 96;

/// `mant * 2^-frac_bits`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefValue {
    mant: BigInt,
    frac_bits: u64,
}

/// An `f64` as `num / 2^shift`, exactly.
fn dyadic(x: f64) -> (BigInt, u64) {
    assert!(x.is_finite(), "dyadic: non-finite input");
    if x == 0.0 {
        return (BigInt::zero(), 0);
    }
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (m, e) = if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    };
    let mut num = BigInt::from(m);
    if x < 0.0 {
        num = -num;
    }
    if e >= 0 {
        (num << e as usize, 0)
    } else {
        (num, (-e) as u64)
    }
}

impl RefValue {
    pub fn zero(frac_bits: u64) -> Self {
        Self {
            mant: BigInt::zero(),
            frac_bits,
        }
    }

    pub fn one(frac_bits: u64) -> Self {
        Self {
            mant: BigInt::one() << frac_bits as usize,
            frac_bits,
        }
    }

    pub fn from_f64(x: f64, frac_bits: u64) -> Self {
        let (num, shift) = dyadic(x);
        let mant = match shift.cmp(&frac_bits) {
            Ordering::Less | Ordering::Equal => num << (frac_bits - shift) as usize,
            Ordering::Greater => num >> (shift - frac_bits) as usize,
        };
        Self { mant, frac_bits }
    }

    pub fn frac_bits(&self) -> u64 {
        self.frac_bits
    }

    /// Same value with a different number of fractional bits.
    pub fn rebits(&self, frac_bits: u64) -> Self {
        let mant = if frac_bits >= self.frac_bits {
            &self.mant << (frac_bits - self.frac_bits) as usize
        } else {
            &self.mant >> (self.frac_bits - frac_bits) as usize
        };
        Self { mant, frac_bits }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.sign() == BigSign::Minus
    }

    fn with_mant(&self, mant: BigInt) -> Self {
        Self {
            mant,
            frac_bits: self.frac_bits,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.frac_bits, other.frac_bits);
        self.with_mant(&self.mant + &other.mant)
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.frac_bits, other.frac_bits);
        self.with_mant(&self.mant - &other.mant)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.frac_bits, other.frac_bits);
        self.with_mant((&self.mant * &other.mant) >> self.frac_bits as usize)
    }

    pub fn div(&self, other: &Self) -> Self {
        assert_eq!(self.frac_bits, other.frac_bits);
        self.with_mant((&self.mant << self.frac_bits as usize) / &other.mant)
    }

    /// Multiplies by the exact rational `num / den`.
    fn scale(&self, num: &BigInt, den: &BigInt) -> Self {
        self.with_mant((&self.mant * num) / den)
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "sqrt of a negative reference value");
        self.with_mant((&self.mant << self.frac_bits as usize).sqrt())
    }

    /// Natural log of the magnitude, accurate to a few units of 1e-16 absolute.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let mag = self.mant.abs();
        let bits = mag.bits();
        let keep = 64.min(bits);
        let top = (&mag >> (bits - keep) as usize)
            .to_f64()
            .unwrap_or(f64::NAN);
        let shift = bits as i64 - keep as i64 - self.frac_bits as i64;
        top.ln() + shift as f64 * LN_2
    }

    pub fn to_f64(&self) -> f64 {
        let s = if self.is_negative() { -1.0 } else { 1.0 };
        s * self.ln_abs().exp()
    }

    pub fn to_log_scaled(&self) -> LogScaledValue {
        if self.is_zero() {
            return LogScaledValue::ZERO;
        }
        let s = if self.is_negative() { -1.0 } else { 1.0 };
        LogScaledValue::from_f64(s).scale_exp(self.ln_abs())
    }

    /// `|x - self| / |self|` for a production value `x`.
    pub fn relative_error_of(&self, x: &LogScaledValue) -> f64 {
        if self.is_zero() {
            return if x.is_zero() { 0.0 } else { f64::INFINITY };
        }
        let r = x.ratio(&self.to_log_scaled());
        (r - 1.0).abs()
    }

    /// Decimal rendering with `digits` digits after the point.
    pub fn to_decimal(&self, digits: usize) -> String {
        let ten_pow = num_traits::pow(BigInt::from(10), digits);
        let scaled = (&self.mant.abs() * &ten_pow) >> self.frac_bits as usize;
        let s = scaled.to_string();
        let s = format!("{s:0>width$}", width = digits + 1);
        let (int, frac) = s.split_at(s.len() - digits);
        format!(
            "{}{}.{}",
            if self.is_negative() { "-" } else { "" },
            int,
            frac
        )
    }
}

fn working_bits(digits: u32, extra: f64) -> Result<u64> {
    if digits == 0 || digits > MAX_DIGITS {
        return Err(Error::domain(
            "reference",
            format!("digits must be in 1..={MAX_DIGITS}, got {digits}"),
        ));
    }
    Ok((digits as f64 * LOG2_10).ceil() as u64 + extra.ceil() as u64 + GUARD_BITS)
}

/// ₁F₁(alpha; beta; w) by exact-integer series summation.
///
/// Any real `alpha`, positive `beta`, `|w| ≤ 2000`. The working precision
/// adds `|w|/ln 2` bits when `w < 0` so the alternating series keeps the
/// requested digits after cancellation. Error bound: one unit of
/// `2^-frac_bits` per term from truncating divisions, plus a geometric tail
/// bound once consecutive term ratios fall below 1/2.
pub fn hyp1f1_reference(alpha: f64, beta: f64, w: f64, digits: u32) -> Result<RefValue> {
    if !(w.abs() <= 2000.0) || !alpha.is_finite() || !(beta > 0.0) {
        return Err(Error::domain(
            "hyp1f1_reference",
            format!("need finite alpha, beta > 0, |w| <= 2000; got ({alpha}, {beta}, {w})"),
        ));
    }
    let extra = if w < 0.0 { 2.0 * w.abs() / LN_2 } else { 0.0 };
    let bits = working_bits(digits, extra + 12.0)?;

    let (a_num, a_sh) = dyadic(alpha);
    let (b_num, b_sh) = dyadic(beta);
    let (w_num, w_sh) = dyadic(w);
    let a_one = BigInt::one() << a_sh as usize;
    let b_one = BigInt::one() << b_sh as usize;

    let mut term = RefValue::one(bits);
    let mut sum = term.clone();
    for k in 0..MAX_TERMS {
        let kb = BigInt::from(k);
        // (alpha + k) w / ((beta + k)(k + 1))
        let num = ((&a_num + &kb * &a_one) * &w_num) << b_sh as usize;
        let den = ((&b_num + &kb * &b_one) * (&kb + 1u32)) << (a_sh + w_sh) as usize;
        term = term.scale(&num, &den);
        sum = sum.add(&term);
        if num.is_zero() {
            return Ok(sum);
        }
        let kf = k as f64 + 1.0;
        let ratio = ((alpha + kf) * w / ((beta + kf) * (kf + 1.0))).abs();
        if kf > -alpha && ratio < 0.5 && term.mant.bits() <= 1 {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence {
        what: "hyp1f1_reference series",
        terms: MAX_TERMS,
    })
}

/// `exp(w)`, by the series of `exp(|w|)` and a reciprocal for negative `w`.
pub fn exp_reference(w: f64, digits: u32) -> Result<RefValue> {
    let bits = working_bits(digits, 2.0 * w.abs() / LN_2)?;
    let (w_num, w_sh) = dyadic(w.abs());
    let mut term = RefValue::one(bits);
    let mut sum = term.clone();
    for k in 1..MAX_TERMS {
        let den = BigInt::from(k) << w_sh as usize;
        term = term.scale(&w_num, &den);
        sum = sum.add(&term);
        if (k as f64) > 2.0 * w.abs() && term.mant.bits() <= 1 {
            return Ok(if w < 0.0 {
                RefValue::one(bits).div(&sum)
            } else {
                sum
            });
        }
    }
    Err(Error::NonConvergence {
        what: "exp_reference series",
        terms: MAX_TERMS,
    })
}

/// `arctan(1/k)` for integer `k ≥ 2`.
fn arctan_recip(k: u32, bits: u64) -> RefValue {
    let k2 = BigInt::from(k) * BigInt::from(k);
    let one = BigInt::one();
    let mut power = RefValue::one(bits).scale(&one, &BigInt::from(k)); // k^-(2n+1)
    let mut sum = power.clone();
    let mut n = 0u64;
    while !power.is_zero() {
        n += 1;
        power = power.scale(&one, &k2);
        let t = power.scale(&one, &BigInt::from(2 * n + 1));
        sum = if n % 2 == 1 { sum.sub(&t) } else { sum.add(&t) };
    }
    sum
}

/// π by Machin's formula.
pub fn pi_reference(bits: u64) -> RefValue {
    let a = arctan_recip(5, bits).scale(&BigInt::from(16), &BigInt::one());
    let b = arctan_recip(239, bits).scale(&BigInt::from(4), &BigInt::one());
    a.sub(&b)
}

/// erf(x) from its Maclaurin series `(2/√π) Σ (-1)^n x^{2n+1} / (n!(2n+1))`.
pub fn erf_reference(x: f64, digits: u32) -> RefValue {
    let bits = working_bits(digits.clamp(1, MAX_DIGITS), 2.0 * x * x / LN_2 + 8.0)
        .expect("digits clamped");
    let (x_num, x_sh) = dyadic(x);
    let x2_num = &x_num * &x_num;
    let x2_den_shift = 2 * x_sh as usize;
    let mut power = RefValue::from_f64(x, bits); // x^{2n+1}/n!
    let mut sum = power.clone();
    let mut n = 0u64;
    loop {
        n += 1;
        power = power.scale(&x2_num, &(BigInt::from(n) << x2_den_shift));
        if power.is_zero() && n as f64 > x * x {
            break;
        }
        let t = power.scale(&BigInt::one(), &BigInt::from(2 * n + 1));
        sum = if n % 2 == 1 { sum.sub(&t) } else { sum.add(&t) };
    }
    let two = RefValue::from_f64(2.0, bits);
    two.div(&pi_reference(bits).sqrt()).mul(&sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    const E_30: &str = "2.718281828459045235360287471352";
    const PI_40: &str = "3.1415926535897932384626433832795028841971";

    #[test]
    fn dyadic_is_exact() {
        for x in [0.5, -0.3, 1300.0, 2.0e-7, 1.0e20] {
            let (n, s) = dyadic(x);
            assert_eq!(n.to_f64().unwrap() / 2f64.powi(s as i32), x);
        }
    }

    #[test]
    fn e_to_thirty_digits() {
        let v = hyp1f1_reference(0.5, 0.5, 1.0, 30).unwrap();
        assert_eq!(&v.to_decimal(30), E_30);
        assert_eq!(&exp_reference(1.0, 30).unwrap().to_decimal(30), E_30);
    }

    #[test]
    fn pi_digits() {
        let bits = working_bits(40, 0.0).unwrap();
        assert_eq!(&pi_reference(bits).to_decimal(40), PI_40);
    }

    #[test]
    fn erf_one() {
        // erf(1) = 0.84270079294971486934122063508260925929606699796630
        let v = erf_reference(1.0, 40);
        assert_eq!(
            &v.to_decimal(40),
            "0.8427007929497148693412206350826092592960"
        );
    }

    #[test]
    fn kummer_transformation_at_high_precision() {
        let (a, b, w) = (2.0, 0.5, 5.0);
        let lhs = hyp1f1_reference(a, b, w, 30).unwrap();
        let rhs = hyp1f1_reference(b - a, b, -w, 30).unwrap();
        let bits = rhs.frac_bits();
        let ew = RefValue::from_f64(1.0, bits).mul(&exp_reference(w, 30).unwrap().rebits(bits));
        let rhs = ew.mul(&rhs);
        let lhs = lhs.rebits(bits);
        let diff = lhs.sub(&rhs);
        assert!(diff.ln_abs() - lhs.ln_abs() < -30.0 * std::f64::consts::LN_10);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(hyp1f1_reference(1.0, 0.5, 2500.0, 30).is_err());
        assert!(hyp1f1_reference(1.0, 0.5, 1.0, 61).is_err());
        assert!(hyp1f1_reference(1.0, -0.5, 1.0, 30).is_err());
    }

    #[test]
    fn terminating_series() {
        let v = hyp1f1_reference(-2.0, 0.5, 3.0, 30).unwrap();
        // 1 - 4*3 + 4*9/3 = 1
        assert_eq!(v.to_decimal(20), "1.00000000000000000000");
    }
}
