//! Error function.
//!
//! For `|x| ≤ 3` the all-positive series
//! `erf x = (2/√π) x e^{-x²} Σ (2x²)^n / (2n+1)!!` is summed; it has no
//! cancellation. Beyond that `erfc` comes from its continued fraction.

use std::f64::consts::FRAC_2_SQRT_PI;

pub const SERIES_LIMIT: f64 = 3.0;
const MAX_TERMS: usize = 200;

pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let ax = x.abs();
    let v = if ax <= SERIES_LIMIT {
        positive_series(ax)
    } else {
        1.0 - erfc_continued_fraction(ax)
    };
    v.copysign(x)
}

/// Complementary error function for `x ≥ 0`.
pub fn erfc(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x <= SERIES_LIMIT {
        1.0 - positive_series(x)
    } else {
        erfc_continued_fraction(x)
    }
}

fn positive_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 1..MAX_TERMS {
        term *= 2.0 * x2 / (2 * n + 1) as f64;
        sum += term;
        if term < f64::EPSILON * sum * 0.25 {
            break;
        }
    }
    FRAC_2_SQRT_PI * x * (-x2).exp() * sum
}

/// `erfc x = e^{-x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))`, via modified Lentz.
fn erfc_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for n in 1..MAX_TERMS {
        let a = n as f64 * 0.5;
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < f64::EPSILON {
            break;
        }
    }
    0.5 * FRAC_2_SQRT_PI * (-x * x).exp() / f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::reference::erf_reference;
    use proptest::prelude::*;

    #[test]
    fn basic_values() {
        assert_eq!(erf(0.0), 0.0);
        assert_eq!(erf(-0.7), -erf(0.7));
        assert!((erf(1.0) - 0.842_700_792_9).abs() < 1e-10);
        assert_eq!(erf(40.0), 1.0);
    }

    #[test]
    fn against_high_precision_reference() {
        let mut x = -6.0;
        while x <= 6.0 {
            let want = erf_reference(x, 40).to_f64();
            assert!(
                (erf(x) - want).abs() <= 1e-14,
                "erf({x}) = {} vs {want}",
                erf(x)
            );
            x += 0.0625;
        }
    }

    #[test]
    fn branches_meet_at_the_switch() {
        let b = SERIES_LIMIT;
        let series = positive_series(b);
        let cf = 1.0 - erfc_continued_fraction(b);
        assert!((series - cf).abs() < 1e-12);
        let small_tail = erfc_continued_fraction(b);
        assert!(((1.0 - positive_series(b)) - small_tail).abs() / small_tail < 1e-8);
    }

    #[test]
    fn erfc_tail() {
        // erfc(5) = 1.5374597944280348502e-12
        assert!((erfc(5.0) / 1.537_459_794_428_034_9e-12 - 1.0).abs() < 1e-13);
        assert!((erfc(-1.0) - (1.0 + erf(1.0))).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn odd_and_bounded(x in -50.0f64..50.0) {
            prop_assert_eq!(erf(-x), -erf(x));
            prop_assert!(erf(x) >= -1.0 && erf(x) <= 1.0);
        }
    }
}
