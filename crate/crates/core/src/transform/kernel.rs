//! The transformation function `u = B(t) e^{a x²} e^{-z²/2} w(z)`, `z = b x`,
//! and what is built from it: the superpotential `β = -(ln u)_x` and the
//! deformed potential `V₁ = x² - (ln|u|²)_xx`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::special::{erf, gamma, hyp1f1_exp_scaled, LogScaledValue, Sign, SQRT_PI};

use super::params::{derive_constants, BssParams, DerivedConstants};
use super::time::{Modulation, SeparationResiduals, TimeDerivatives, TimeFactors, TimeLaw};

pub const DEFAULT_NODE_Z_MAX: f64 = 12.0;
pub const DEFAULT_NODE_SAMPLES: usize = 4096;
/// `|w|` below this fraction of its two branches' magnitudes counts as a node.
pub const NODE_RELATIVE_FLOOR: f64 = 1e-12;

/// `w(z)` and its logarithmic derivatives.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WCombo {
    pub w: LogScaledValue,
    /// `w'/w`
    pub r1: f64,
    /// `w''/w`, equal to `2z r1 + 4ν` by the Hermite equation.
    pub r2: f64,
    /// `r1 - 2z`, computed directly rather than by subtraction.
    pub excess: f64,
}

impl WCombo {
    /// `(ln w)'' = r2 - r1² = 4ν - r1 (r1 - 2z)`, free of the `4z²` cancellation.
    pub fn log_second_derivative(&self, nu: f64) -> f64 {
        4.0 * nu - self.r1 * self.excess
    }
}

/// A complex number stored as `exp(log_mag + i phase)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LogComplex {
    pub log_mag: f64,
    pub phase: f64,
}

impl LogComplex {
    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(self.log_mag.exp(), self.phase)
    }

    pub fn conj(self) -> Self {
        Self {
            log_mag: self.log_mag,
            phase: -self.phase,
        }
    }

    pub fn recip(self) -> Self {
        Self {
            log_mag: -self.log_mag,
            phase: -self.phase,
        }
    }

    pub fn mul(self, other: Self) -> Self {
        Self {
            log_mag: self.log_mag + other.log_mag,
            phase: self.phase + other.phase,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum NodeCheck {
    Pass,
    Fail { z: f64 },
}

impl NodeCheck {
    pub fn passed(&self) -> bool {
        matches!(self, NodeCheck::Pass)
    }
}

/// The pieces of `e^{-z²} w(z)` that both the value and its derivative use.
struct ScaledBranches {
    /// `k_a e^{-z²} ₁F₁(ν; 1/2; z²)`
    even: LogScaledValue,
    /// `k_b z e^{-z²} ₁F₁(ν+1/2; 3/2; z²)`
    odd: LogScaledValue,
}

impl ScaledBranches {
    fn new(p: &BssParams, z: f64) -> Result<Self> {
        let w = z * z;
        Ok(Self {
            even: hyp1f1_exp_scaled(p.nu, 0.5, w)?.mul_f64(p.k_a),
            odd: hyp1f1_exp_scaled(p.nu + 0.5, 1.5, w)?.mul_f64(p.k_b * z),
        })
    }

    fn value(&self) -> LogScaledValue {
        self.even + self.odd
    }

    fn scale(&self) -> LogScaledValue {
        self.even.abs() + self.odd.abs()
    }
}

/// `e^{-z²}(w' - 2z w)`. Kummer's transformation turns each branch of
/// `e^{-z²} w` into a ₁F₁ at `-z²`, whose derivative is again of the same
/// exponential size as `e^{-z²} w`, so no large terms cancel.
fn scaled_excess_numerator(p: &BssParams, z: f64) -> Result<LogScaledValue> {
    let w = z * z;
    let nu = p.nu;
    let mut total = LogScaledValue::ZERO;
    if p.k_a != 0.0 && nu != 0.5 {
        total = total + hyp1f1_exp_scaled(nu, 1.5, w)?.mul_f64(-2.0 * z * (1.0 - 2.0 * nu) * p.k_a);
    }
    if p.k_b != 0.0 {
        let lead = hyp1f1_exp_scaled(nu + 0.5, 1.5, w)?;
        let tail = hyp1f1_exp_scaled(nu + 0.5, 2.5, w)?.mul_f64(-(4.0 / 3.0) * (1.0 - nu) * w);
        total = total + (lead + tail).mul_f64(p.k_b);
    }
    Ok(total)
}

pub(crate) fn w_combo_unchecked(p: &BssParams, z: f64) -> Result<WCombo> {
    if !z.is_finite() {
        return Err(Error::domain(
            "w_combo",
            format!("z = {z}; b(t) is undefined where the time modulation is not positive"),
        ));
    }
    let branches = ScaledBranches::new(p, z)?;
    let scaled = branches.value();
    if scaled.is_zero() || scaled.ratio(&branches.scale()).abs() <= NODE_RELATIVE_FLOOR {
        return Err(Error::Node { z });
    }
    let excess = scaled_excess_numerator(p, z)?.ratio(&scaled);
    let r1 = excess + 2.0 * z;
    Ok(WCombo {
        w: scaled.scale_exp(z * z),
        r1,
        r2: 2.0 * z * r1 + 4.0 * p.nu,
        excess,
    })
}

/// Leading coefficients of `w(z) e^{-z²} |z|^{1-2ν}` as `z → ±∞`.
fn asymptotic_coefficients(p: &BssParams) -> (f64, f64) {
    let even = p.k_a * SQRT_PI * gamma(p.nu).recip().to_f64();
    let odd = p.k_b * 0.5 * SQRT_PI * gamma(p.nu + 0.5).recip().to_f64();
    (even - odd, even + odd)
}

/// Scans `w` on `[-z_max, z_max]` for a sign change or a near-zero, then
/// checks the sign of `w` beyond the scan from its asymptotics.
pub fn node_check(p: &BssParams, z_max: f64, n_samples: usize) -> Result<NodeCheck> {
    p.validate()?;
    if !(z_max >= 10.0 && z_max.is_finite()) {
        return Err(Error::invalid(
            "z_max",
            format!("need z_max >= 10, got {z_max}"),
        ));
    }
    if n_samples < 1000 {
        return Err(Error::invalid(
            "n_samples",
            format!("need at least 1000 samples, got {n_samples}"),
        ));
    }
    let sample = |z: f64| -> Result<(LogScaledValue, f64)> {
        let br = ScaledBranches::new(p, z)?;
        let v = br.value();
        Ok((v, v.ratio(&br.scale()).abs()))
    };
    let step = 2.0 * z_max / (n_samples - 1) as f64;
    let mut reference = Sign::Zero;
    let mut prev_z = -z_max;
    let mut prev_sign = Sign::Zero;
    let mut weakest = (f64::INFINITY, 0.0);
    for i in 0..n_samples {
        let z = -z_max + step * i as f64;
        let (v, rel) = sample(z)?;
        if rel < weakest.0 {
            weakest = (rel, z);
        }
        let sign = v.sign();
        if sign == Sign::Zero {
            return Ok(NodeCheck::Fail { z });
        }
        if i > 0 && sign != prev_sign {
            return Ok(NodeCheck::Fail {
                z: bisect_sign_change(p, prev_z, z, prev_sign)?,
            });
        }
        reference = sign;
        prev_sign = sign;
        prev_z = z;
    }
    if weakest.0 <= NODE_RELATIVE_FLOOR {
        return Ok(NodeCheck::Fail { z: weakest.1 });
    }
    let (minus, plus) = asymptotic_coefficients(p);
    for (coeff, edge) in [(minus, -z_max), (plus, z_max)] {
        let s = Sign::of(coeff);
        if s != Sign::Zero && s != reference {
            return Ok(NodeCheck::Fail { z: edge });
        }
    }
    Ok(NodeCheck::Pass)
}

fn bisect_sign_change(p: &BssParams, mut lo: f64, mut hi: f64, lo_sign: Sign) -> Result<f64> {
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let s = ScaledBranches::new(p, mid)?.value().sign();
        if s == Sign::Zero {
            return Ok(mid);
        }
        if s == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// A validated parameter set with its derived constants and time law.
/// Immutable after construction and cheap to copy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BssTransform {
    params: BssParams,
    constants: DerivedConstants,
    law: TimeLaw,
}

impl BssTransform {
    /// Validates `params` and rejects combinations whose `w` has a real node.
    pub fn new(params: BssParams) -> Result<Self> {
        let t = Self::without_node_check(params)?;
        match node_check(&params, DEFAULT_NODE_Z_MAX, DEFAULT_NODE_SAMPLES)? {
            NodeCheck::Pass => Ok(t),
            NodeCheck::Fail { z } => Err(Error::Node { z }),
        }
    }

    /// Validates everything except node-freedom; evaluations that hit a
    /// node return [`Error::Node`].
    pub fn without_node_check(params: BssParams) -> Result<Self> {
        let constants = derive_constants(&params)?;
        Ok(Self {
            params,
            constants,
            law: TimeLaw::new(&params, &constants),
        })
    }

    /// Scales `γ` in `b(t)` only, leaving `a(t)`, `ℓ(t)` and `B(t)` intact.
    /// A negative control: the `b` equation no longer holds.
    pub fn with_scaled_amplitude(&self, factor: f64) -> Self {
        Self {
            law: self.law.with_amplitude(self.scaled_modulation(factor)),
            ..*self
        }
    }

    /// Scales `γ` everywhere, so `γ² = c1² - c0⁴` fails and with it the
    /// Riccati equation for `a(t)`.
    pub fn with_scaled_gamma(&self, factor: f64) -> Self {
        Self {
            law: self.law.with_modulation(self.scaled_modulation(factor)),
            ..*self
        }
    }

    fn scaled_modulation(&self, factor: f64) -> Modulation {
        let g = self.constants.gamma * factor;
        Modulation::new(self.params.c1, g, self.params.c1 - g)
    }

    pub fn params(&self) -> &BssParams {
        &self.params
    }

    pub fn constants(&self) -> &DerivedConstants {
        &self.constants
    }

    pub fn time_factors(&self, t: f64) -> TimeFactors {
        self.law.factors(t)
    }

    pub fn time_derivatives(&self, t: f64) -> TimeDerivatives {
        self.law.derivatives(t)
    }

    pub fn separation_residuals(&self, t: f64) -> SeparationResiduals {
        self.law.residuals(t)
    }

    pub fn w_combo(&self, z: f64) -> Result<WCombo> {
        w_combo_unchecked(&self.params, z)
    }

    pub fn transformation_u(&self, x: f64, t: f64) -> Result<LogComplex> {
        let f = self.time_factors(t);
        Ok(self.u_with(&f, x)?.0)
    }

    /// `u` together with its `w` data, for callers that need both.
    pub(crate) fn u_with(&self, f: &TimeFactors, x: f64) -> Result<(LogComplex, WCombo)> {
        let z = f.b * x;
        let wc = self.w_combo(z)?;
        let mut phase = f.theta + f.alpha * x * x;
        if wc.w.sign() == Sign::Negative {
            phase += std::f64::consts::PI;
        }
        let log_mag = f.log_b_mag - 0.5 * z * z + wc.w.log_mag();
        Ok((LogComplex { log_mag, phase }, wc))
    }

    /// `β = -(ln u)_x = -2 a x - b (r1 - z)`.
    pub fn beta(&self, x: f64, t: f64) -> Result<Complex64> {
        let f = self.time_factors(t);
        self.beta_with(&f, x)
    }

    pub(crate) fn beta_with(&self, f: &TimeFactors, x: f64) -> Result<Complex64> {
        let z = f.b * x;
        let wc = self.w_combo(z)?;
        Ok(Complex64::new(-f.b * (wc.excess + z), -2.0 * f.alpha * x))
    }

    /// `V₁ = x² + 2b² - 2b² (ln w)''(b x)`.
    pub fn potential_v1(&self, x: f64, t: f64) -> Result<f64> {
        let b = self.time_factors(t).b;
        potential_from_b(&self.params, b, x)
    }

    /// The closed form available at `ν = 1/2`, where `w = e^{z²}(k_a + (√π/2) k_b erf z)`:
    /// `V₁ = x² - 2b² - 4 k_b b ∂_x[e^{-b²x²} / (2k_a + √π k_b erf(b x))]`.
    pub fn mielnik_potential(&self, x: f64, t: f64) -> Result<f64> {
        let p = &self.params;
        if p.nu != 0.5 {
            return Err(Error::invalid(
                "nu",
                format!("the erf form needs nu = 1/2, got {}", p.nu),
            ));
        }
        if 2.0 * p.k_a <= SQRT_PI * p.k_b.abs() {
            return Err(Error::Singular {
                k_a: p.k_a,
                k_b: p.k_b,
            });
        }
        let b = self.time_factors(t).b;
        let z = b * x;
        // with g = k_b e^{-z²} / (k_a + (√π/2) k_b erf z) the derivative term is 2b² g (2z + g)
        let g = p.k_b * (-z * z).exp() / (p.k_a + 0.5 * SQRT_PI * p.k_b * erf(z));
        Ok(x * x - 2.0 * b * b + 2.0 * b * b * g * (2.0 * z + g))
    }
}

pub(crate) fn potential_from_b(p: &BssParams, b: f64, x: f64) -> Result<f64> {
    let wc = w_combo_unchecked(p, b * x)?;
    let b2 = b * b;
    Ok(x * x + 2.0 * b2 - 2.0 * b2 * wc.log_second_derivative(p.nu))
}
