use crate::error::{Error, Result};

pub const MAX_HERMITE_DEGREE: usize = 50;

/// Physicists' Hermite polynomial `H_n(x)` by the three-term recurrence.
pub fn hermite(n: usize, x: f64) -> Result<f64> {
    if n > MAX_HERMITE_DEGREE {
        return Err(Error::domain(
            "hermite",
            format!("degree must be at most {MAX_HERMITE_DEGREE}, got {n}"),
        ));
    }
    Ok(hermite_unchecked(n, x))
}

pub(crate) fn hermite_unchecked(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn low_orders() {
        assert_eq!(hermite(0, 3.7).unwrap(), 1.0);
        assert_eq!(hermite(2, 1.0).unwrap(), 2.0);
        assert!(hermite(51, 0.0).is_err());
    }

    #[test]
    fn fifth_order_expansion() {
        // H_5 = 32x^5 - 160x^3 + 120x
        let x: f64 = 0.3;
        let direct = 32.0 * x.powi(5) - 160.0 * x.powi(3) + 120.0 * x;
        assert!((hermite(5, x).unwrap() - direct).abs() < 1e-13);
    }

    #[test]
    fn integer_points_are_exact() {
        // H_n(1) is an integer; exact in f64 for small n
        let want = [1.0, 2.0, 2.0, -4.0, -20.0, -8.0, 184.0, 464.0];
        for (n, w) in want.iter().enumerate() {
            assert_eq!(hermite(n, 1.0).unwrap(), *w);
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(hermite(n, -1.0).unwrap(), sign * w);
        }
    }

    proptest! {
        #[test]
        fn parity(n in 0usize..=50, x in -6.0f64..6.0) {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let (a, b) = (hermite(n, -x).unwrap(), hermite(n, x).unwrap());
            prop_assert!((a - sign * b).abs() <= 1e-12 * b.abs().max(1.0));
        }
    }
}
