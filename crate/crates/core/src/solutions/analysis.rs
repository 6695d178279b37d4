//! Norms and zero censuses of sampled states.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

use super::grid::GridField;

pub const DEFAULT_ZERO_THRESHOLD: f64 = 1e-6;

/// Composite Simpson rule for samples `y` with spacing `dx`. An odd number
/// of intervals closes with the 3/8 rule on the last three.
pub fn simpson(y: &[f64], dx: f64) -> Result<f64> {
    let n = y.len();
    if n < 4 || !(dx > 0.0) {
        return Err(Error::DegenerateGrid(format!(
            "Simpson needs at least 4 points and dx > 0, got {n}, {dx}"
        )));
    }
    let intervals = n - 1;
    let simpson_end = if intervals.is_multiple_of(2) {
        n - 1
    } else {
        n - 4
    };
    let mut total = 0.0;
    for j in (0..simpson_end).step_by(2) {
        total += y[j] + 4.0 * y[j + 1] + y[j + 2];
    }
    total *= dx / 3.0;
    if intervals % 2 == 1 {
        let k = simpson_end;
        total += 3.0 * dx / 8.0 * (y[k] + 3.0 * y[k + 1] + 3.0 * y[k + 2] + y[k + 3]);
    }
    Ok(total)
}

/// `sqrt(∫|ψ|² dx)` by composite Simpson.
pub fn norm_l2(field: &GridField<Complex64>) -> Result<f64> {
    let abs2: Vec<f64> = field.values.iter().map(|v| v.norm_sqr()).collect();
    Ok(simpson(&abs2, field.dx)?.sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroCensus {
    /// Interior minima of `|ψ|²` below `threshold`.
    pub count: usize,
    pub locations: Vec<f64>,
    /// Sign changes, reported only when every sample is real.
    pub sign_changes: Option<usize>,
    /// Interior maxima of `|ψ|²` above `threshold`.
    pub maxima: Vec<f64>,
    /// Absolute threshold: `rel_threshold · max|ψ|²`.
    pub threshold: f64,
}

/// Vertex of the parabola through three equally spaced samples, as an offset
/// from the middle one in units of the spacing.
fn parabolic_offset(left: f64, mid: f64, right: f64) -> f64 {
    let curvature = left - 2.0 * mid + right;
    if curvature == 0.0 {
        0.0
    } else {
        (0.5 * (left - right) / curvature).clamp(-0.5, 0.5)
    }
}

/// Minimum of `|q(s)|²` over `s ∈ [-1, 1]`, where `q` is the complex
/// quadratic through three equally spaced samples. Interpolating `ψ` rather
/// than `|ψ|²` resolves a zero that falls between grid points.
fn interpolated_minimum(l: Complex64, m: Complex64, r: Complex64) -> (f64, f64) {
    let slope = 0.5 * (r - l);
    let curve = 0.5 * (l - 2.0 * m + r);
    let q = |s: f64| (m + s * slope + s * s * curve).norm_sqr();
    let golden = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (-1.0, 1.0);
    for _ in 0..80 {
        let c = b - golden * (b - a);
        let d = a + golden * (b - a);
        if q(c) < q(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let s = 0.5 * (a + b);
    (s, q(s))
}

/// Counts zeros of `|ψ|²`: interior local minima whose interpolated value
/// is below `rel_threshold` times the maximum. Only minima lying between
/// the first and last above-threshold samples count, so decaying tails
/// contribute none.
pub fn zero_census(field: &GridField<Complex64>, rel_threshold: f64) -> ZeroCensus {
    let v = &field.values;
    let a: Vec<f64> = v.iter().map(|v| v.norm_sqr()).collect();
    let max = a.iter().copied().fold(0.0, f64::max);
    let threshold = rel_threshold * max;
    let first = a.iter().position(|&x| x > threshold).unwrap_or(a.len());
    let last = a.iter().rposition(|&x| x > threshold).unwrap_or(0);
    let mut locations = Vec::new();
    let mut maxima = Vec::new();
    for j in 1..a.len().saturating_sub(1) {
        let (l, m, r) = (a[j - 1], a[j], a[j + 1]);
        let x = |off: f64| field.x0 + field.dx * (j as f64 + off);
        if m < l && m <= r && j > first && j < last {
            let (s, value) = interpolated_minimum(v[j - 1], v[j], v[j + 1]);
            if value < threshold {
                locations.push(x(s));
            }
        } else if m > l && m >= r && m > threshold {
            maxima.push(x(parabolic_offset(l, m, r)));
        }
    }
    let sign_changes = v.iter().all(|v| v.im == 0.0).then(|| {
        let signs: Vec<f64> = v.iter().map(|v| v.re).filter(|&v| v != 0.0).collect();
        signs
            .windows(2)
            .filter(|w| (w[0] < 0.0) != (w[1] < 0.0))
            .count()
    });
    ZeroCensus {
        count: locations.len(),
        locations,
        sign_changes,
        maxima,
        threshold,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solutions::grid::{grid_eval_state, GridSpec};
    use crate::solutions::states::StateKind;
    use crate::special::erf;
    use crate::transform::{BssParams, BssTransform};

    fn trivial() -> BssTransform {
        BssTransform::new(BssParams {
            c0: 1.0,
            c1: 1.0,
            c2: 0.0,
            k_a: 1.0,
            k_b: 0.0,
            nu: 0.5,
        })
        .unwrap()
    }

    #[test]
    fn oscillator_states_are_normalized() {
        let tr = trivial();
        for n in [0, 3] {
            let f = grid_eval_state(&tr, StateKind::Phi(n), &GridSpec::default(), 0.7).unwrap();
            assert!((norm_l2(&f).unwrap() - 1.0).abs() < 1e-8, "n = {n}");
        }
        let f = grid_eval_state(&tr, StateKind::Phi(2), &GridSpec::default(), 0.0).unwrap();
        let doubled = f.map(|v| 2.0 * v);
        assert!((norm_l2(&doubled).unwrap() - 2.0 * norm_l2(&f).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn simpson_converges_at_fourth_order() {
        // ∫ |φ₀|² over [-1, 1.5] = (erf(1.5) + erf(1)) / 2
        let exact = 0.5 * (erf(1.5) + erf(1.0));
        let tr = trivial();
        let errors: Vec<f64> = [401, 801, 1601]
            .iter()
            .map(|&n| {
                let f = grid_eval_state(
                    &tr,
                    StateKind::Phi(0),
                    &GridSpec::new(-1.0, 1.5, n).unwrap(),
                    0.0,
                )
                .unwrap();
                (norm_l2(&f).unwrap().powi(2) - exact).abs()
            })
            .collect();
        for pair in errors.windows(2) {
            let order = (pair[0] / pair[1]).log2();
            assert!(order >= 3.9, "observed order {order} from {errors:?}");
        }
    }

    #[test]
    fn odd_interval_counts_are_exact_for_cubics() {
        let dx = 0.1;
        let y: Vec<f64> = (0..8).map(|j| (j as f64 * dx).powi(3)).collect();
        let exact = (0.7f64).powi(4) / 4.0;
        assert!((simpson(&y, dx).unwrap() - exact).abs() < 1e-15);
        assert!(simpson(&y[..3], dx).is_err());
    }

    #[test]
    fn census_counts_oscillator_nodes() {
        let tr = trivial();
        for n in 0..5 {
            let f = grid_eval_state(&tr, StateKind::Phi(n), &GridSpec::default(), 0.0).unwrap();
            let c = zero_census(&f, DEFAULT_ZERO_THRESHOLD);
            assert_eq!(c.count, n);
            assert_eq!(c.sign_changes, Some(n));
            assert_eq!(c.maxima.len(), n + 1);
        }
        // φ₁ vanishes at the origin
        let f = grid_eval_state(
            &tr,
            StateKind::Phi(1),
            &GridSpec::new(-8.0, 8.0, 1600).unwrap(),
            0.0,
        )
        .unwrap();
        let c = zero_census(&f, DEFAULT_ZERO_THRESHOLD);
        assert!(c.locations[0].abs() < 1e-6, "{:?}", c.locations);
        // a lifted minimum is not a zero
        let lifted = f.map(|v| v + Complex64::new(0.0, 0.01));
        assert_eq!(zero_census(&lifted, DEFAULT_ZERO_THRESHOLD).count, 0);
        let shifted = grid_eval_state(&tr, StateKind::Phi(1), &GridSpec::default(), 0.3).unwrap();
        assert_eq!(
            zero_census(&shifted, DEFAULT_ZERO_THRESHOLD).sign_changes,
            None
        );
    }

    #[test]
    fn missing_state_has_no_zeros() {
        let tr = BssTransform::new(BssParams {
            c0: 1.0,
            c1: 10.0,
            c2: 0.0,
            k_a: 2.0,
            k_b: 5.0,
            nu: 2.0,
        })
        .unwrap();
        for &t in &[0.0, 0.3, 0.785] {
            let f = grid_eval_state(&tr, StateKind::Missing, &GridSpec::default(), t).unwrap();
            assert_eq!(zero_census(&f, DEFAULT_ZERO_THRESHOLD).count, 0);
            assert!(f.values.iter().all(|v| v.norm() > 0.0));
        }
    }
}
