use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The six constants that pick one deformation of the oscillator.
///
/// `c0, c1, c2` fix the time modulation `b(t) = c0 / sqrt(c1 + γ cos(4t + c2))`,
/// `k_a, k_b` weight the even and odd ₁F₁ branches, and `nu` is the
/// ₁F₁ parameter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BssParams {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub k_a: f64,
    pub k_b: f64,
    pub nu: f64,
}

impl BssParams {
    /// Checks everything except node-freedom, which needs ₁F₁ evaluations.
    pub fn validate(&self) -> Result<()> {
        for (field, v) in [
            ("c0", self.c0),
            ("c1", self.c1),
            ("c2", self.c2),
            ("k_a", self.k_a),
            ("k_b", self.k_b),
            ("nu", self.nu),
        ] {
            if !v.is_finite() {
                return Err(Error::invalid(field, format!("must be finite, got {v}")));
            }
        }
        if self.c0 == 0.0 {
            return Err(Error::invalid("c0", "must be non-zero"));
        }
        let c0_sq = self.c0 * self.c0;
        if self.c1 < c0_sq {
            return Err(Error::invalid(
                "c1",
                format!("need c1 >= c0^2 = {c0_sq}, got {}", self.c1),
            ));
        }
        if self.k_a == 0.0 && self.k_b == 0.0 {
            return Err(Error::invalid("k_a", "k_a and k_b cannot both vanish"));
        }
        Ok(())
    }
}

/// Constants implied by [`BssParams`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DerivedConstants {
    /// `γ = sqrt(c1² - c0⁴) ≥ 0`, the modulation amplitude.
    pub gamma: f64,
    /// `κ = sqrt((c1-γ)/(c1+γ)) = c0²/(c1+γ)`.
    pub kappa: f64,
    /// `λ` with `λ² = (c1-γ)/(2γ)`; absent in the static limit `γ = 0`.
    pub lambda: Option<f64>,
    /// `μ = 1 - 4ν`, the constant in `f'' = (z² - μ) f`.
    pub mu: f64,
    /// `c1 - γ`, formed without cancellation as `c0⁴/(c1+γ)`.
    pub(crate) c1_minus_gamma: f64,
}

/// Derives `γ, κ, λ, μ`. Differences like `c1 - γ` are rewritten as
/// `c0⁴/(c1 + γ)` so nothing cancels when `γ` is close to `c1`.
pub fn derive_constants(p: &BssParams) -> Result<DerivedConstants> {
    p.validate()?;
    let c0_sq = p.c0 * p.c0;
    let gamma = ((p.c1 - c0_sq) * (p.c1 + c0_sq)).sqrt();
    let c0_4 = c0_sq * c0_sq;
    let c1_minus_gamma = c0_4 / (p.c1 + gamma);
    let kappa = c0_sq / (p.c1 + gamma);
    let lambda = (gamma > 0.0).then(|| (c1_minus_gamma / (2.0 * gamma)).sqrt());
    Ok(DerivedConstants {
        gamma,
        kappa,
        lambda,
        mu: 1.0 - 4.0 * p.nu,
        c1_minus_gamma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn fig1a() -> BssParams {
        BssParams {
            c0: 1.0,
            c1: 10.0,
            c2: 0.0,
            k_a: 2.0,
            k_b: 5.0,
            nu: 2.0,
        }
    }

    #[test]
    fn generic_constants() {
        let d = derive_constants(&fig1a()).unwrap();
        assert!((d.gamma - 9.949_874_371_066_2).abs() < 1e-12);
        assert!((d.gamma * d.gamma - 99.0).abs() < 1e-12);
        let lambda = d.lambda.unwrap();
        assert!((lambda * lambda - 0.002_518_9).abs() < 1e-7);
        // γ λ sqrt(1 + λ²) = c0²/2
        assert!((d.gamma * lambda * (1.0 + lambda * lambda).sqrt() - 0.5).abs() < 1e-13);
        assert!((d.kappa - lambda / (1.0 + lambda * lambda).sqrt()).abs() < 1e-12 * d.kappa);
        let direct = ((10.0 - d.gamma) / (10.0 + d.gamma)).sqrt();
        assert!((d.kappa - direct).abs() < 1e-12 * d.kappa);
        assert_eq!(d.mu, -7.0);
    }

    #[test]
    fn static_boundary() {
        let p = BssParams {
            c0: 1.0,
            c1: 1.0,
            ..fig1a()
        };
        let d = derive_constants(&p).unwrap();
        assert_eq!(d.gamma, 0.0);
        assert_eq!(d.kappa, 1.0);
        assert_eq!(d.lambda, None);
    }

    #[test]
    fn rejects_invalid() {
        let bad_c1 = BssParams { c1: 0.5, ..fig1a() };
        assert!(matches!(
            derive_constants(&bad_c1),
            Err(Error::InvalidParams { field: "c1", .. })
        ));
        let bad_c0 = BssParams { c0: 0.0, ..fig1a() };
        assert!(matches!(
            derive_constants(&bad_c0),
            Err(Error::InvalidParams { field: "c0", .. })
        ));
        let no_weights = BssParams {
            k_a: 0.0,
            k_b: 0.0,
            ..fig1a()
        };
        assert!(no_weights.validate().is_err());
        let nan = BssParams {
            nu: f64::NAN,
            ..fig1a()
        };
        assert!(matches!(
            nan.validate(),
            Err(Error::InvalidParams { field: "nu", .. })
        ));
    }
}
