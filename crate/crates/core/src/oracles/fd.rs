//! Finite-difference residuals of `i∂ₜψ + ∂ₓ²ψ - Vψ` and of the
//! intertwining relation `L(i∂ₜ + ∂ₓ² - V₀) = (i∂ₜ + ∂ₓ² - V₁)L`.
//!
//! Every derivative is taken at steps `h` and `2h` and combined by one
//! Richardson step. The two levels also serve as a smoothness probe: if
//! they disagree by a sizeable fraction of their magnitude the sampler is
//! not smooth on the stencil (a branch jump, say) and an error is returned.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transform::BssTransform;

pub const MIN_STEP: f64 = 1e-5;
pub const MAX_STEP: f64 = 1e-2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeStencil {
    /// Three-point central difference, `O(h²)` before extrapolation.
    Second,
    /// Five-point central difference, `O(h⁴)` before extrapolation.
    Fourth,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FdSteps {
    pub h_x: f64,
    pub h_t: f64,
    pub time_stencil: TimeStencil,
    /// Largest tolerated `|D(h) - D(2h)| / (|D(h)| + |D(2h)| + |f|)`.
    pub smoothness_limit: f64,
}

impl Default for FdSteps {
    fn default() -> Self {
        Self {
            h_x: 1e-3,
            h_t: 1e-4,
            time_stencil: TimeStencil::Second,
            smoothness_limit: 0.1,
        }
    }
}

impl FdSteps {
    /// Steps that resolve phases turning at thousands of radians per unit
    /// time, as happens near the narrowest point of the breathing.
    pub fn fast_dynamics() -> Self {
        Self {
            h_x: 5e-4,
            h_t: 1e-5,
            time_stencil: TimeStencil::Fourth,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, h) in [("h_x", self.h_x), ("h_t", self.h_t)] {
            if !(MIN_STEP..=MAX_STEP).contains(&h) {
                return Err(Error::domain(
                    "fd_steps",
                    format!("{name} must lie in [{MIN_STEP}, {MAX_STEP}], got {h}"),
                ));
            }
        }
        if !(self.smoothness_limit > 0.0) {
            return Err(Error::domain(
                "fd_steps",
                "smoothness_limit must be positive",
            ));
        }
        Ok(())
    }
}

/// One extrapolated derivative: `(2^p D(h) - D(2h)) / (2^p - 1)`.
fn richardson(
    fine: Complex64,
    coarse: Complex64,
    order: i32,
    center: Complex64,
    floor: f64,
    limit: f64,
    at: (f64, f64),
) -> Result<Complex64> {
    let disagreement = (fine - coarse).norm();
    let scale = fine.norm() + coarse.norm() + center.norm() + floor;
    if disagreement > limit * scale {
        return Err(Error::StepSize {
            x: at.0,
            t: at.1,
            disagreement: disagreement / scale,
            limit,
        });
    }
    let w = 2f64.powi(order);
    Ok((w * fine - coarse) / (w - 1.0))
}

fn second_derivative_4(
    f: &impl Fn(f64) -> Result<Complex64>,
    x: f64,
    h: f64,
    f0: Complex64,
) -> Result<Complex64> {
    let (p1, m1, p2, m2) = (f(x + h)?, f(x - h)?, f(x + 2.0 * h)?, f(x - 2.0 * h)?);
    Ok((16.0 * (p1 + m1) - (p2 + m2) - 30.0 * f0) / (12.0 * h * h))
}

fn first_derivative_4(f: &impl Fn(f64) -> Result<Complex64>, x: f64, h: f64) -> Result<Complex64> {
    Ok((8.0 * (f(x + h)? - f(x - h)?) - (f(x + 2.0 * h)? - f(x - 2.0 * h)?)) / (12.0 * h))
}

fn first_derivative_2(f: &impl Fn(f64) -> Result<Complex64>, x: f64, h: f64) -> Result<Complex64> {
    Ok((f(x + h)? - f(x - h)?) / (2.0 * h))
}

/// `∂ₓ² f` at `x`: fourth-order stencil, extrapolated to sixth order.
pub fn d_xx(
    f: impl Fn(f64) -> Result<Complex64>,
    x: f64,
    steps: &FdSteps,
    at_t: f64,
) -> Result<Complex64> {
    d_xx_floored(f, x, steps, at_t, 0.0)
}

/// `∂ₓ f` at `x`: fourth-order stencil, extrapolated to sixth order.
pub fn d_x(
    f: impl Fn(f64) -> Result<Complex64>,
    x: f64,
    steps: &FdSteps,
    at_t: f64,
) -> Result<Complex64> {
    d_x_floored(f, x, steps, at_t, 0.0)
}

/// `∂ₜ f` at `t` with the configured stencil and one extrapolation step.
pub fn d_t(
    f: impl Fn(f64) -> Result<Complex64>,
    t: f64,
    steps: &FdSteps,
    at_x: f64,
) -> Result<Complex64> {
    d_t_floored(f, t, steps, at_x, 0.0)
}

// The `floor` variants add an absolute term to the smoothness scale, for
// functions that are pure rounding noise (an operator applied to its own
// solution) yet still have to be differentiated.

fn d_xx_floored(
    f: impl Fn(f64) -> Result<Complex64>,
    x: f64,
    steps: &FdSteps,
    at_t: f64,
    floor: f64,
) -> Result<Complex64> {
    let f0 = f(x)?;
    let fine = second_derivative_4(&f, x, steps.h_x, f0)?;
    let coarse = second_derivative_4(&f, x, 2.0 * steps.h_x, f0)?;
    richardson(
        fine,
        coarse,
        4,
        f0,
        floor,
        steps.smoothness_limit,
        (x, at_t),
    )
}

fn d_x_floored(
    f: impl Fn(f64) -> Result<Complex64>,
    x: f64,
    steps: &FdSteps,
    at_t: f64,
    floor: f64,
) -> Result<Complex64> {
    let fine = first_derivative_4(&f, x, steps.h_x)?;
    let coarse = first_derivative_4(&f, x, 2.0 * steps.h_x)?;
    richardson(
        fine,
        coarse,
        4,
        f(x)?,
        floor,
        steps.smoothness_limit,
        (x, at_t),
    )
}

fn d_t_floored(
    f: impl Fn(f64) -> Result<Complex64>,
    t: f64,
    steps: &FdSteps,
    at_x: f64,
    floor: f64,
) -> Result<Complex64> {
    let h = steps.h_t;
    let (fine, coarse, order) = match steps.time_stencil {
        TimeStencil::Second => (
            first_derivative_2(&f, t, h)?,
            first_derivative_2(&f, t, 2.0 * h)?,
            2,
        ),
        TimeStencil::Fourth => (
            first_derivative_4(&f, t, h)?,
            first_derivative_4(&f, t, 2.0 * h)?,
            4,
        ),
    };
    richardson(
        fine,
        coarse,
        order,
        f(t)?,
        floor,
        steps.smoothness_limit,
        (at_x, t),
    )
}

/// `i ∂ₜψ + ∂ₓ²ψ - V ψ` at `(x, t)`.
pub fn fd_tdse_residual(
    state: impl Fn(f64, f64) -> Result<Complex64>,
    potential: impl Fn(f64, f64) -> Result<f64>,
    x: f64,
    t: f64,
    steps: &FdSteps,
) -> Result<Complex64> {
    steps.validate()?;
    let psi_t = d_t(|s| state(x, s), t, steps, x)?;
    let psi_xx = d_xx(|y| state(y, t), x, steps, t)?;
    Ok(Complex64::i() * psi_t + psi_xx - potential(x, t)? * state(x, t)?)
}

/// Steps for the two nesting levels of [`intertwining_residual`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NestedSteps {
    pub inner: FdSteps,
    pub outer: FdSteps,
}

impl Default for NestedSteps {
    fn default() -> Self {
        Self {
            inner: FdSteps::default(),
            outer: FdSteps {
                h_x: 1e-2,
                h_t: 1e-3,
                ..FdSteps::default()
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IntertwiningResidual {
    pub residual: Complex64,
    /// `|L S₀ g| + |S₁ L g| + |L g|`, the size of what cancels.
    pub scale: f64,
}

impl IntertwiningResidual {
    pub fn relative(&self) -> f64 {
        if self.scale == 0.0 {
            self.residual.norm()
        } else {
            self.residual.norm() / self.scale
        }
    }
}

/// `[L(i∂ₜ + ∂ₓ² - V₀) - (i∂ₜ + ∂ₓ² - V₁)L] g` at `(x, t)`, with every
/// derivative taken numerically. `deformed` plays the role of `V₁`; passing
/// anything else is a way to watch the identity fail.
pub fn intertwining_residual(
    transform: &BssTransform,
    g: impl Fn(f64, f64) -> Result<Complex64>,
    deformed: impl Fn(f64, f64) -> Result<f64>,
    x: f64,
    t: f64,
    steps: &NestedSteps,
) -> Result<IntertwiningResidual> {
    steps.inner.validate()?;
    steps.outer.validate()?;
    let i = Complex64::i();
    let floor = g(x, t)?.norm();
    let apply_l = |h: &dyn Fn(f64, f64) -> Result<Complex64>,
                   y: f64,
                   s: f64,
                   fd: &FdSteps|
     -> Result<Complex64> {
        let f = transform.time_factors(s);
        let beta = transform.beta(y, s)?;
        let h_x = d_x_floored(|z| h(z, s), y, fd, s, floor)?;
        Ok(f.ell * (beta * h(y, s)? + h_x))
    };
    let base_operator = |y: f64, s: f64| -> Result<Complex64> {
        let g_t = d_t(|r| g(y, r), s, &steps.inner, y)?;
        let g_xx = d_xx(|z| g(z, s), y, &steps.inner, s)?;
        Ok(i * g_t + g_xx - y * y * g(y, s)?)
    };
    let lifted = |y: f64, s: f64| apply_l(&g, y, s, &steps.inner);

    let left = apply_l(&base_operator, x, t, &steps.outer)?;
    let lifted_t = d_t_floored(|s| lifted(x, s), t, &steps.outer, x, floor)?;
    let lifted_xx = d_xx_floored(|y| lifted(y, t), x, &steps.outer, t, floor)?;
    let lifted_0 = lifted(x, t)?;
    let right = i * lifted_t + lifted_xx - deformed(x, t)? * lifted_0;
    Ok(IntertwiningResidual {
        residual: left - right,
        scale: left.norm() + right.norm() + lifted_0.norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solutions::phi;
    use crate::transform::BssParams;

    fn harmonic(x: f64, _t: f64) -> Result<f64> {
        Ok(x * x)
    }

    #[test]
    fn oscillator_states_are_calibration_cases() {
        for n in [0, 2, 5] {
            for stencil in [TimeStencil::Second, TimeStencil::Fourth] {
                let steps = FdSteps {
                    time_stencil: stencil,
                    ..FdSteps::default()
                };
                let r = fd_tdse_residual(|x, t| phi(n, x, t), harmonic, 0.5, 0.3, &steps).unwrap();
                assert!(r.norm() <= 1e-8, "n = {n}: {r}");
            }
        }
    }

    #[test]
    fn detects_wrong_potential_and_jumps() {
        let r = fd_tdse_residual(
            |x, t| phi(2, x, t),
            |x, _| Ok(x * x + 0.1),
            0.5,
            0.3,
            &FdSteps::default(),
        )
        .unwrap();
        assert!(r.norm() > 1e-3);
        // a phase jump inside the time stencil
        let jumpy = |x: f64, t: f64| Ok(phi(0, x, t)? * if t > 0.30005 { -1.0 } else { 1.0 });
        let err = fd_tdse_residual(jumpy, harmonic, 0.5, 0.3, &FdSteps::default()).unwrap_err();
        assert!(matches!(err, Error::StepSize { .. }), "{err}");
        let bad = FdSteps {
            h_x: 1e-7,
            ..FdSteps::default()
        };
        assert!(fd_tdse_residual(|x, t| phi(0, x, t), harmonic, 0.5, 0.3, &bad).is_err());
    }

    #[test]
    fn intertwining_holds_for_arbitrary_functions() {
        let tr = BssTransform::new(BssParams {
            c0: 1.0,
            c1: 10.0,
            c2: 0.0,
            k_a: 2.0,
            k_b: 5.0,
            nu: 2.0,
        })
        .unwrap();
        let v1 = |x: f64, t: f64| tr.potential_v1(x, t);
        let steps = NestedSteps::default();
        let r = intertwining_residual(&tr, |x, t| phi(3, x, t), v1, 0.8, 0.2, &steps).unwrap();
        assert!(r.relative() <= 1e-4, "{r:?}");
        let gaussian = |x: f64, _t: f64| Ok(Complex64::from((-(x - 1.0) * (x - 1.0)).exp()));
        let r = intertwining_residual(&tr, gaussian, v1, 0.8, 0.2, &steps).unwrap();
        assert!(r.relative() <= 1e-4, "{r:?}");
        let wrong =
            intertwining_residual(&tr, |x, t| phi(3, x, t), harmonic, 0.8, 0.2, &steps).unwrap();
        assert!(wrong.residual.norm() > 1e-1, "{wrong:?}");
        assert!(wrong.relative() > 100.0 * 1e-4, "{wrong:?}");
    }
}
