//! Kummer's confluent hypergeometric function ₁F₁(a; b; w) for real `a`,
//! half-integer `b` and non-negative `w`.
//!
//! Small arguments use the Taylor series with compensated summation. Past
//! [`SERIES_LIMIT`] the dominant large-`w` expansion
//!
//! ```text
//! ₁F₁(a; b; w) ~ Γ(b)/Γ(a) · e^w · w^(a-b) · Σ_k (b-a)_k (1-a)_k / (k! w^k)
//! ```
//!
//! is evaluated directly in log form, so results never overflow. The
//! recessive `w^(-a)` branch is dropped; relative to the dominant one it is
//! of size `e^(-w) w^(b-2a)`, below double precision for `w > 40` and
//! moderate `|a|`.

use crate::error::{Error, Result};

use super::gamma::gamma;
use super::log_scaled::{LogScaledValue, Sign};

/// Arguments above this use the asymptotic expansion.
pub const SERIES_LIMIT: f64 = 40.0;
pub const MAX_SERIES_TERMS: usize = 500;
pub const MAX_ASYMPTOTIC_TERMS: usize = 200;
/// The truncated asymptotic sum is accepted once the first omitted term,
/// which bounds its error, is below this fraction of the sum.
pub const ASYMPTOTIC_TOLERANCE: f64 = 1e-13;
/// Largest argument accepted by the public entry points.
pub const MAX_ARGUMENT: f64 = 2000.0;

const SUPPORTED_BETAS: [f64; 3] = [0.5, 1.5, 2.5];

fn check_args(function: &'static str, alpha: f64, beta: f64, w: f64, betas: &[f64]) -> Result<()> {
    if !alpha.is_finite() {
        return Err(Error::domain(
            function,
            format!("alpha must be finite, got {alpha}"),
        ));
    }
    if !betas.contains(&beta) {
        return Err(Error::domain(
            function,
            format!("beta must be one of {betas:?}, got {beta}"),
        ));
    }
    if !(0.0..=MAX_ARGUMENT).contains(&w) {
        return Err(Error::domain(
            function,
            format!("w must lie in [0, {MAX_ARGUMENT}], got {w}"),
        ));
    }
    Ok(())
}

/// ₁F₁(alpha; beta; w) for `beta ∈ {1/2, 3/2, 5/2}` and `0 ≤ w ≤ 2000`.
pub fn hyp1f1(alpha: f64, beta: f64, w: f64) -> Result<LogScaledValue> {
    check_args("hyp1f1", alpha, beta, w, &SUPPORTED_BETAS)?;
    Ok(hyp1f1_exp_scaled(alpha, beta, w)?.scale_exp(w))
}

/// d/dw ₁F₁(alpha; beta; w) = (alpha/beta) ₁F₁(alpha+1; beta+1; w).
pub fn hyp1f1_dw(alpha: f64, beta: f64, w: f64) -> Result<LogScaledValue> {
    check_args("hyp1f1_dw", alpha, beta, w, &SUPPORTED_BETAS[..2])?;
    Ok(hyp1f1(alpha + 1.0, beta + 1.0, w)?.mul_f64(alpha / beta))
}

/// `e^(-w) ₁F₁(alpha; beta; w)` for any finite `w ≥ 0` and `beta > 0`.
///
/// Factoring out `e^w` keeps the log-magnitude small, so ratios of several
/// such values (as in logarithmic derivatives) do not lose the absolute
/// precision that a log-magnitude of order `w` would cost.
pub(crate) fn hyp1f1_exp_scaled(alpha: f64, beta: f64, w: f64) -> Result<LogScaledValue> {
    debug_assert!(beta > 0.0 && w >= 0.0 && w.is_finite());
    if w == 0.0 {
        return Ok(LogScaledValue::ONE);
    }
    if alpha == beta {
        return Ok(LogScaledValue::ONE);
    }
    if alpha <= 0.0 && alpha.fract() == 0.0 {
        return Ok(terminating_sum(alpha, beta, w).scale_exp(-w));
    }
    if w <= SERIES_LIMIT {
        Ok(LogScaledValue::from_f64(taylor_series(alpha, beta, w)?).scale_exp(-w))
    } else {
        asymptotic_exp_scaled(alpha, beta, w)
    }
}

/// Neumaier-compensated running sum.
#[derive(Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

fn taylor_series(alpha: f64, beta: f64, w: f64) -> Result<f64> {
    let mut acc = CompensatedSum::default();
    let mut term = 1.0;
    acc.add(term);
    for k in 0..MAX_SERIES_TERMS {
        let kf = k as f64;
        term *= (alpha + kf) / ((beta + kf) * (kf + 1.0)) * w;
        acc.add(term);
        // past k > -alpha the terms keep one sign and eventually shrink geometrically
        let settled = kf + 1.0 > -alpha && (alpha + kf + 1.0) * w < (beta + kf + 1.0) * (kf + 2.0);
        if settled && term.abs() <= 0.5 * f64::EPSILON * acc.value().abs() {
            return Ok(acc.value());
        }
    }
    Err(Error::NonConvergence {
        what: "hyp1f1 Taylor series",
        terms: MAX_SERIES_TERMS,
    })
}

/// Finite sum for `alpha = -m`, accumulated in log form so large `w` is safe.
fn terminating_sum(alpha: f64, beta: f64, w: f64) -> LogScaledValue {
    let m = (-alpha) as usize;
    let mut term = LogScaledValue::ONE;
    let mut sum = LogScaledValue::ONE;
    for k in 0..m {
        let kf = k as f64;
        term = term.mul_f64((alpha + kf) / ((beta + kf) * (kf + 1.0)) * w);
        sum = sum + term;
    }
    sum
}

fn asymptotic_exp_scaled(alpha: f64, beta: f64, w: f64) -> Result<LogScaledValue> {
    let mut acc = CompensatedSum::default();
    let mut term = 1.0;
    acc.add(term);
    let mut omitted = f64::INFINITY;
    for k in 0..MAX_ASYMPTOTIC_TERMS {
        let kf = k as f64;
        let next = term * (beta - alpha + kf) * (1.0 - alpha + kf) / ((kf + 1.0) * w);
        if next.abs() > term.abs() {
            break;
        }
        term = next;
        acc.add(term);
        omitted =
            (term * (beta - alpha + kf + 1.0) * (1.0 - alpha + kf + 1.0) / ((kf + 2.0) * w)).abs();
        if omitted <= 0.5 * f64::EPSILON * acc.value().abs() {
            break;
        }
    }
    if omitted > ASYMPTOTIC_TOLERANCE * acc.value().abs() {
        return Err(Error::NonConvergence {
            what: "hyp1f1 asymptotic expansion",
            terms: MAX_ASYMPTOTIC_TERMS,
        });
    }
    let prefactor = gamma(beta) / gamma(alpha);
    debug_assert!(prefactor.sign() != Sign::Zero);
    Ok((prefactor * LogScaledValue::from_f64(acc.value())).scale_exp((alpha - beta) * w.ln()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::reference::hyp1f1_reference;
    use crate::special::erf::erf;
    use std::f64::consts::{E, PI};

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn value_at_origin_is_one() {
        for a in [-2.5, -0.3, 0.5, 2.0, 7.25] {
            for b in SUPPORTED_BETAS {
                assert_eq!(hyp1f1(a, b, 0.0).unwrap(), LogScaledValue::ONE);
            }
        }
    }

    #[test]
    fn equal_parameters_give_exponential() {
        let v = hyp1f1(0.5, 0.5, 1.0).unwrap().to_f64();
        assert!(rel(v, E) < 1e-15);
        let big = hyp1f1(1.5, 1.5, 1500.0).unwrap();
        assert_eq!(big.log_mag(), 1500.0);
    }

    #[test]
    fn erf_closed_form_at_one() {
        // ₁F₁(1; 3/2; z²) = √π e^{z²} erf(z) / (2z)
        let want = PI.sqrt() * erf(1.0) * E / 2.0;
        let got = hyp1f1(1.0, 1.5, 1.0).unwrap().to_f64();
        assert!(rel(got, want) < 1e-14, "{got} vs {want}");
        assert!((got - 2.030_078_469_3).abs() < 1e-10);
    }

    #[test]
    fn pinned_value_from_reference() {
        let got = hyp1f1(2.0, 0.5, 1.0).unwrap().to_f64();
        let want = hyp1f1_reference(2.0, 0.5, 1.0, 30).unwrap().to_f64();
        assert!(rel(got, want) < 1e-14);
        assert!((got - 12.15039).abs() < 1e-4);
    }

    #[test]
    fn terminating_cases_are_polynomials() {
        // ₁F₁(-1; b; w) = 1 - w/b,  ₁F₁(-2; 1/2; w) = 1 - 4w + 4w²/3
        for w in [0.3, 12.0, 90.0, 1800.0] {
            let v = hyp1f1(-1.0, 1.5, w).unwrap().to_f64();
            assert!(rel(v, 1.0 - w / 1.5) < 1e-13);
            let v = hyp1f1(-2.0, 0.5, w).unwrap().to_f64();
            assert!(rel(v, 1.0 - 4.0 * w + 4.0 * w * w / 3.0) < 1e-13);
        }
    }

    #[test]
    fn derivative_examples() {
        for (a, b) in [(0.7, 0.5), (-0.3, 1.5), (2.0, 0.5)] {
            let d = hyp1f1_dw(a, b, 0.0).unwrap().to_f64();
            assert!(rel(d, a / b) < 1e-15);
        }
        for w in [0.5, 10.0, 60.0] {
            let d = hyp1f1_dw(0.5, 0.5, w).unwrap();
            assert!((d.log_mag() - w).abs() < 1e-15);
        }
        let d = hyp1f1_dw(2.0, 0.5, 1.0).unwrap().to_f64();
        let want = 4.0 * hyp1f1_reference(3.0, 1.5, 1.0, 30).unwrap().to_f64();
        assert!(rel(d, want) < 1e-14);
    }

    #[test]
    fn derivative_matches_central_difference() {
        for w in [0.8f64, 25.0, 39.0, 41.0, 300.0] {
            let h = 1e-5;
            let up = hyp1f1(2.0, 0.5, w + h).unwrap();
            let dn = hyp1f1(2.0, 0.5, w - h).unwrap();
            let fd = (up - dn).ratio(&LogScaledValue::from_f64(2.0 * h));
            let d = hyp1f1_dw(2.0, 0.5, w).unwrap().to_f64();
            let d = if d.is_finite() { d } else { continue };
            assert!(rel(fd, d) < 1e-6, "w = {w}: {fd} vs {d}");
        }
    }

    #[test]
    fn rejects_out_of_domain() {
        assert!(matches!(hyp1f1(1.0, 1.0, 1.0), Err(Error::Domain { .. })));
        assert!(matches!(hyp1f1(1.0, 0.5, -1.0), Err(Error::Domain { .. })));
        assert!(matches!(
            hyp1f1(1.0, 0.5, 2000.5),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            hyp1f1(f64::NAN, 0.5, 1.0),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            hyp1f1_dw(1.0, 2.5, 1.0),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn continuous_across_the_switch() {
        for (a, b) in [(2.0, 0.5), (-0.3, 0.5), (0.2, 1.5), (1.2, 2.5), (0.7, 1.5)] {
            let below = taylor_series(a, b, SERIES_LIMIT).unwrap().abs().ln() - SERIES_LIMIT;
            let above = asymptotic_exp_scaled(a, b, SERIES_LIMIT).unwrap();
            assert!(
                (below - above.log_mag()).abs() < 1e-12,
                "a = {a}, b = {b}: {:e}",
                below - above.log_mag()
            );
        }
    }

    #[test]
    fn matches_reference_across_regimes() {
        for (a, b) in [
            (2.0, 0.5),
            (2.5, 1.5),
            (3.0, 1.5),
            (3.5, 2.5),
            (-0.3, 0.5),
            (0.2, 1.5),
            (0.7, 1.5),
            (1.2, 2.5),
        ] {
            for w in [0.01, 1.0, 7.5, 33.0, 40.0, 40.5, 97.0, 640.0, 1300.0] {
                let got = hyp1f1(a, b, w).unwrap();
                let want = hyp1f1_reference(a, b, w, 30).unwrap();
                let err = want.relative_error_of(&got);
                assert!(err < 1e-11, "1F1({a}; {b}; {w}): rel err {err:e}");
            }
        }
    }
}
