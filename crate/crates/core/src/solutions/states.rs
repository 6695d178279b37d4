//! The oscillator states `φₙ`, their images `Lφₖ` under the intertwining
//! operator `L = ℓ(t)[β + ∂ₓ]`, and the missing state `1/(ℓ u*)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transform::{BssTransform, TimeFactors};

pub const MAX_PHI_INDEX: usize = 40;

fn check_index(n: usize) -> Result<()> {
    if n > MAX_PHI_INDEX {
        return Err(Error::domain(
            "phi",
            format!("n must be at most {MAX_PHI_INDEX}, got {n}"),
        ));
    }
    Ok(())
}

/// Real Hermite functions `h₀(x), …, h_n(x)` via the normalized recurrence
/// `h_{k+1} = sqrt(2/(k+1)) x h_k - sqrt(k/(k+1)) h_{k-1}`, which never
/// forms the large `Hₙ` or `2ⁿ n!` separately.
fn hermite_functions(n: usize, x: f64) -> Vec<f64> {
    let mut h = Vec::with_capacity(n + 1);
    h.push(PI.powf(-0.25) * (-0.5 * x * x).exp());
    if n >= 1 {
        h.push(2f64.sqrt() * x * h[0]);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * h[k] - (kf / (kf + 1.0)).sqrt() * h[k - 1];
        h.push(next);
    }
    h
}

fn oscillator_phase(n: usize, t: f64) -> Complex64 {
    Complex64::from_polar(1.0, -((2 * n + 1) as f64) * t)
}

/// `φₙ(x, t) = e^{-x²/2 - i(2n+1)t} Hₙ(x) / sqrt(2ⁿ n! √π)`.
pub fn phi(n: usize, x: f64, t: f64) -> Result<Complex64> {
    check_index(n)?;
    Ok(oscillator_phase(n, t) * hermite_functions(n, x)[n])
}

/// `∂ₓφₙ = sqrt(2n) φ_{n-1} e^{-2it} - x φₙ`, the phase shift coming from
/// the different energies of `φₙ` and `φ_{n-1}`.
pub fn phi_dx(n: usize, x: f64, t: f64) -> Result<Complex64> {
    check_index(n)?;
    let h = hermite_functions(n, x);
    let lower = if n == 0 {
        0.0
    } else {
        (2.0 * n as f64).sqrt() * h[n - 1]
    };
    Ok(oscillator_phase(n, t) * (lower - x * h[n]))
}

/// `L φ_k = ℓ (β φ_k + ∂ₓφ_k)` for any `k ≥ 0`.
pub fn intertwined(transform: &BssTransform, k: usize, x: f64, t: f64) -> Result<Complex64> {
    let f = transform.time_factors(t);
    intertwined_with(transform, &f, k, x)
}

pub(crate) fn intertwined_with(
    transform: &BssTransform,
    f: &TimeFactors,
    k: usize,
    x: f64,
) -> Result<Complex64> {
    let beta = transform.beta_with(f, x)?;
    Ok(f.ell * (beta * phi(k, x, f.t)? + phi_dx(k, x, f.t)?))
}

/// `ψₙ = L φ_{n+1}`, `n ≥ 0`.
pub fn psi(transform: &BssTransform, n: usize, x: f64, t: f64) -> Result<Complex64> {
    intertwined(transform, n + 1, x, t)
}

/// `1/(ℓ u*)`, formed from `ln|u|` so it underflows gracefully where `|u|` is huge.
pub fn missing_state(transform: &BssTransform, x: f64, t: f64) -> Result<Complex64> {
    let f = transform.time_factors(t);
    missing_state_with(transform, &f, x)
}

pub(crate) fn missing_state_with(
    transform: &BssTransform,
    f: &TimeFactors,
    x: f64,
) -> Result<Complex64> {
    let (u, _) = transform.u_with(f, x)?;
    Ok(Complex64::from_polar((-u.log_mag).exp() / f.ell, u.phase))
}

/// Which solution to sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "index", rename_all = "snake_case")]
pub enum StateKind {
    /// Oscillator state `φₙ` of the undeformed equation.
    Phi(usize),
    /// `L φₖ`, a solution of the deformed equation.
    Intertwined(usize),
    /// `1/(ℓ u*)`.
    Missing,
}

impl StateKind {
    pub fn eval(&self, transform: &BssTransform, x: f64, t: f64) -> Result<Complex64> {
        match *self {
            StateKind::Phi(n) => phi(n, x, t),
            StateKind::Intertwined(k) => intertwined(transform, k, x, t),
            StateKind::Missing => missing_state(transform, x, t),
        }
    }

    pub(crate) fn eval_with(
        &self,
        transform: &BssTransform,
        f: &TimeFactors,
        x: f64,
    ) -> Result<Complex64> {
        match *self {
            StateKind::Phi(n) => phi(n, x, f.t),
            StateKind::Intertwined(k) => intertwined_with(transform, f, k, x),
            StateKind::Missing => missing_state_with(transform, f, x),
        }
    }

    /// Whether the state solves the deformed equation (with `V₁`) rather
    /// than the oscillator one.
    pub fn is_deformed(&self) -> bool {
        !matches!(self, StateKind::Phi(_))
    }

    pub fn label(&self) -> String {
        match self {
            StateKind::Phi(n) => format!("phi{n}"),
            StateKind::Intertwined(k) => format!("L_phi{k}"),
            StateKind::Missing => "missing".to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::hermite;
    use crate::transform::BssParams;
    use proptest::prelude::*;

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

    fn factorial(n: usize) -> f64 {
        (1..=n).map(|k| k as f64).product()
    }

    #[test]
    fn phi_examples() {
        assert!((phi(0, 0.0, 0.0).unwrap().re - 0.751_125_544_464_942_5).abs() < 1e-15);
        for &t in &[0.0, 0.4, 2.0] {
            assert_eq!(phi(1, 0.0, t).unwrap().norm(), 0.0);
        }
        assert!(phi(41, 0.0, 0.0).is_err());
        let d = phi_dx(1, 0.0, 0.0).unwrap();
        assert!((d.re - 2.0 / (2.0 * PI.sqrt()).sqrt()).abs() < 1e-15);
        assert_eq!(phi_dx(0, 0.0, 0.0).unwrap().norm(), 0.0);
    }

    #[test]
    fn recurrence_matches_hermite_formula() {
        for n in [0, 1, 2, 5, 12, 25] {
            for &x in &[-3.1, -0.4, 0.0, 1.7, 4.2] {
                let norm = (2f64.powi(n as i32) * factorial(n) * PI.sqrt()).sqrt();
                let exact = (-0.5f64 * x * x).exp() * hermite(n, x).unwrap() / norm;
                let got = phi(n, x, 0.0).unwrap().re;
                assert!(
                    (got - exact).abs() <= 1e-12 * (1.0 + exact.abs()),
                    "n = {n}, x = {x}"
                );
            }
        }
    }

    #[test]
    fn derivative_matches_richardson_differences() {
        let (n, x, t) = (4, 0.7, 0.3);
        let central = |h: f64| (phi(n, x + h, t).unwrap() - phi(n, x - h, t).unwrap()) / (2.0 * h);
        let fd = (4.0 * central(1e-3) - central(2e-3)) / 3.0;
        assert!((fd - phi_dx(n, x, t).unwrap()).norm() < 1e-8);
    }

    #[test]
    fn trivial_limit_states() {
        let tr = trivial();
        for &t in &[0.0, 0.5] {
            for &x in &[-1.5, 0.0, 0.8, 2.2] {
                // β = -x, so L = -(x - ∂ₓ) = -sqrt(2) a† and Lφₙ = -sqrt(2(n+1)) φ_{n+1} up to a phase
                for n in 0..3 {
                    let l_phi = intertwined(&tr, n, x, t).unwrap();
                    let expected = -x * phi(n, x, t).unwrap() + phi_dx(n, x, t).unwrap();
                    assert!((l_phi - expected).norm() < 1e-13);
                    let raised = phi(n + 1, x, 0.0).unwrap().re * -(2.0 * (n + 1) as f64).sqrt();
                    assert!((l_phi.norm() - raised.abs()).abs() < 1e-12);
                }
                let m = missing_state(&tr, x, t).unwrap();
                let expected = Complex64::from_polar((-0.5 * x * x).exp(), t);
                assert!((m - expected).norm() < 1e-14);
            }
        }
        let at_origin = psi(&tr, 0, 0.0, 0.0).unwrap();
        assert!((at_origin - phi_dx(1, 0.0, 0.0).unwrap()).norm() < 1e-15);
    }

    proptest! {
        #[test]
        fn phi_modulus_is_time_independent(n in 0usize..=40, x in -8.0f64..8.0, t in -5.0f64..5.0) {
            let a = phi(n, x, t).unwrap().norm();
            let b = phi(n, x, 0.0).unwrap().norm();
            prop_assert!((a - b).abs() <= 1e-12);
        }

        #[test]
        fn intertwining_is_linear(x in -4.0f64..4.0, t in 0.0f64..1.0, k in 0usize..5) {
            let tr = BssTransform::new(BssParams { c0: 1.0, c1: 10.0, c2: 0.0, k_a: 2.0, k_b: 5.0, nu: 2.0 }).unwrap();
            let f = tr.time_factors(t);
            let beta = tr.beta(x, t).unwrap();
            let doubled = f.ell * (beta * 2.0 * phi(k, x, t).unwrap() + 2.0 * phi_dx(k, x, t).unwrap());
            let direct = intertwined(&tr, k, x, t).unwrap();
            prop_assert!((doubled - 2.0 * direct).norm() <= 1e-12 * (1.0 + direct.norm()));
        }
    }
}
