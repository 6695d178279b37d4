//! `ln|Γ(x)|` with sign, just enough for the asymptotic ₁F₁ prefactor.

use std::f64::consts::PI;

use super::log_scaled::{LogScaledValue, Sign};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `Γ(x)` in log-scaled form. Poles (non-positive integers) map to an
/// infinite magnitude, so `1/Γ` comes out as an exact zero.
pub(crate) fn gamma(x: f64) -> LogScaledValue {
    if x <= 0.0 && x.fract() == 0.0 {
        return LogScaledValue::from_parts(Sign::Positive, f64::INFINITY);
    }
    if x < 0.5 {
        // reflection: Γ(x) Γ(1-x) = π / sin(πx)
        let s = (PI * x).sin();
        return LogScaledValue::from_f64(PI / s) / gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    let ln = 0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + acc.ln();
    LogScaledValue::exp(ln)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        let sqrt_pi = PI.sqrt();
        let cases = [
            (0.5, sqrt_pi),
            (1.0, 1.0),
            (1.5, 0.5 * sqrt_pi),
            (2.5, 0.75 * sqrt_pi),
            (5.0, 24.0),
            (-0.5, -2.0 * sqrt_pi),
            (-1.5, 4.0 / 3.0 * sqrt_pi),
        ];
        for (x, want) in cases {
            let got = gamma(x).to_f64();
            assert!(
                ((got - want) / want).abs() < 2e-15,
                "Γ({x}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn poles_give_zero_reciprocal() {
        for x in [0.0, -1.0, -4.0] {
            assert!(gamma(x).recip().is_zero());
        }
    }

    #[test]
    fn large_argument_in_log_form() {
        // ln Γ(171.5) exceeds the f64 range of Γ itself
        let g = gamma(200.0);
        let stirling =
            199.0 * 199f64.ln() - 199.0 + 0.5 * (2.0 * PI * 199.0).ln() + 1.0 / (12.0 * 199.0);
        assert!((g.log_mag() - stirling).abs() < 1e-9);
    }
}
