//! Time coefficients `b(t)`, `a(t) = i·alpha(t)`, `ℓ(t)`, `B(t)` and the
//! ODEs they satisfy.

use num_complex::Complex64;
use serde::Serialize;

use super::params::{BssParams, DerivedConstants};

/// The modulation `D(s) = c1 + γ cos s` for one choice of `γ`, written as
/// `(c1+γ) cos²(s/2) + (c1-γ) sin²(s/2)` so its minimum `c1-γ` is not
/// formed by cancellation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Modulation {
    pub gamma: f64,
    c1_plus_gamma: f64,
    c1_minus_gamma: f64,
}

impl Modulation {
    pub fn new(c1: f64, gamma: f64, c1_minus_gamma: f64) -> Self {
        Self {
            gamma,
            c1_plus_gamma: c1 + gamma,
            c1_minus_gamma,
        }
    }

    pub fn at(&self, s: f64) -> f64 {
        if self.gamma == 0.0 {
            return self.c1_plus_gamma;
        }
        let (sh, ch) = (0.5 * s).sin_cos();
        self.c1_plus_gamma * ch * ch + self.c1_minus_gamma * sh * sh
    }

    /// `c1 cos s + γ`, in the same cancellation-free form.
    pub fn dual(&self, s: f64) -> f64 {
        let (sh, ch) = (0.5 * s).sin_cos();
        self.c1_plus_gamma * ch * ch - self.c1_minus_gamma * sh * sh
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TimeFactors {
    pub t: f64,
    pub b: f64,
    /// `a(t) = i·alpha`.
    pub alpha: f64,
    pub ell: f64,
    /// `ln|B(t)| = -ln(ℓ)/2`.
    pub log_b_mag: f64,
    /// Continuous phase of `B(t)`, zero where `4t + c2 = 0`.
    pub theta: f64,
}

/// Closed-form time derivatives of the [`TimeFactors`] fields.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TimeDerivatives {
    pub b_dot: f64,
    pub alpha_dot: f64,
    pub log_b_mag_dot: f64,
    pub theta_dot: f64,
}

/// Residuals of the three ODEs obtained by separating the `u` equation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeparationResiduals {
    /// `|i ȧ + 4a² + b⁴ - 1|`
    pub riccati: f64,
    /// `|ḃ - 4iab| = |ḃ + 4 alpha b|`
    pub b_ode: f64,
    /// `i Ḃ/B + 2a - μ b²`
    pub big_b_ode: Complex64,
}

impl SeparationResiduals {
    pub fn max_abs(&self) -> f64 {
        self.riccati.max(self.b_ode).max(self.big_b_ode.norm())
    }
}

/// Everything time-dependent, for one parameter set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct TimeLaw {
    c0: f64,
    c2: f64,
    nu: f64,
    kappa: f64,
    /// Prefactor of the unwrapped arctangent in the phase of `B`.
    phase_rate: f64,
    modulation: Modulation,
    /// Modulation used for `b(t)` alone; differs from `modulation` only in
    /// deliberately inconsistent negative controls.
    amplitude: Modulation,
}

impl TimeLaw {
    pub fn new(p: &BssParams, d: &DerivedConstants) -> Self {
        // (ν - 1/4) c0² / (γ λ sqrt(1+λ²)); equals (4ν-1)/2 since γλ sqrt(1+λ²) = c0²/2
        let phase_rate = match d.lambda {
            Some(l) => (p.nu - 0.25) * p.c0 * p.c0 / (d.gamma * l * (1.0 + l * l).sqrt()),
            None => 2.0 * p.nu - 0.5,
        };
        let modulation = Modulation::new(p.c1, d.gamma, d.c1_minus_gamma);
        Self {
            c0: p.c0.abs(),
            c2: p.c2,
            nu: p.nu,
            kappa: d.kappa,
            phase_rate,
            modulation,
            amplitude: modulation,
        }
    }

    pub fn with_amplitude(mut self, amplitude: Modulation) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn with_modulation(mut self, modulation: Modulation) -> Self {
        self.modulation = modulation;
        self.amplitude = modulation;
        self
    }

    fn phase_arg(&self, t: f64) -> f64 {
        4.0 * t + self.c2
    }

    /// `A(θ)` with `θ = s/2`: the branch of `arctan(κ tan θ)` that is
    /// continuous, vanishes at 0 and gains π per period.
    fn unwrapped_arctan(&self, s: f64) -> f64 {
        let k = self.kappa;
        0.5 * s + ((k - 1.0) * s.sin()).atan2((1.0 + k) + (1.0 - k) * s.cos())
    }

    pub fn b(&self, t: f64) -> f64 {
        self.c0 / self.amplitude.at(self.phase_arg(t)).sqrt()
    }

    pub fn factors(&self, t: f64) -> TimeFactors {
        let s = self.phase_arg(t);
        let d = self.modulation.at(s);
        TimeFactors {
            t,
            b: self.b(t),
            alpha: -0.5 * self.modulation.gamma * s.sin() / d,
            ell: d.sqrt(),
            log_b_mag: -0.25 * d.ln(),
            theta: self.phase_rate * self.unwrapped_arctan(s),
        }
    }

    pub fn derivatives(&self, t: f64) -> TimeDerivatives {
        let s = self.phase_arg(t);
        let sin_s = s.sin();
        let d = self.modulation.at(s);
        let g = self.modulation.gamma;
        let da = self.amplitude.at(s);
        let ga = self.amplitude.gamma;
        let (sh, ch) = (0.5 * s).sin_cos();
        let k = self.kappa;
        TimeDerivatives {
            b_dot: 2.0 * ga * sin_s * self.c0 / (da * da.sqrt()),
            // d/dt [-(γ/2) sin s / D] with ṡ = 4, Ḋ = -4γ sin s
            alpha_dot: -2.0 * g * self.modulation.dual(s) / (d * d),
            log_b_mag_dot: g * sin_s / d,
            theta_dot: self.phase_rate * 2.0 * k / (ch * ch + k * k * sh * sh),
        }
    }

    pub fn mu(&self) -> f64 {
        1.0 - 4.0 * self.nu
    }

    pub fn residuals(&self, t: f64) -> SeparationResiduals {
        let f = self.factors(t);
        let dv = self.derivatives(t);
        let a = Complex64::new(0.0, f.alpha);
        let a_dot = Complex64::new(0.0, dv.alpha_dot);
        let i = Complex64::i();
        let b2 = f.b * f.b;
        let riccati = i * a_dot + 4.0 * a * a + b2 * b2 - 1.0;
        let b_ode = dv.b_dot - 4.0 * i * a * f.b;
        let big_b_log_dot = Complex64::new(dv.log_b_mag_dot, dv.theta_dot);
        let big_b_ode = i * big_b_log_dot + 2.0 * a - self.mu() * b2;
        SeparationResiduals {
            riccati: riccati.norm(),
            b_ode: b_ode.norm(),
            big_b_ode,
        }
    }
}
