//! Strang split-step Fourier propagation of `i∂ₜψ = -∂ₓ²ψ + V(x,t)ψ` on a
//! periodic box, used to evolve states independently of their closed forms.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::solutions::{simpson, GridField, GridSpec};
use crate::transform::profile::LogProfile;
use crate::transform::BssTransform;

pub const MAX_DT: f64 = 1e-3;
/// Edge-to-peak ratio an initial field must stay below.
pub const INITIAL_EDGE_LIMIT: f64 = 1e-10;
/// Edge-to-peak ratio at which a running propagation is abandoned.
pub const RUNNING_EDGE_LIMIT: f64 = 1e-6;
const EDGE_CHECK_INTERVAL: usize = 16;
const PROFILE_DZ: f64 = 0.01;

/// `n` points `x_min + j dx`, `dx = (x_max - x_min)/n`; `x_max` itself is the
/// periodic image of `x_min` and not sampled.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PeriodicGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
}

impl PeriodicGrid {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if !n.is_power_of_two() || n < 8 {
            return Err(Error::DegenerateGrid(format!(
                "spectral grid size must be a power of two >= 8, got {n}"
            )));
        }
        if !(x_min.is_finite() && x_max.is_finite() && x_max > x_min) {
            return Err(Error::DegenerateGrid(format!(
                "need x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        Ok(Self { x_min, x_max, n })
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n as f64
    }

    /// The sampled points as an inclusive grid, for analytic evaluation.
    pub fn samples(&self) -> GridSpec {
        GridSpec {
            x_min: self.x_min,
            x_max: self.x_min + self.dx() * (self.n - 1) as f64,
            n: self.n,
        }
    }

    fn matches(&self, field: &GridField<Complex64>) -> bool {
        field.len() == self.n
            && (field.x0 - self.x_min).abs() <= 1e-12 * (1.0 + self.x_min.abs())
            && (field.dx - self.dx()).abs() <= 1e-12 * self.dx()
    }
}

/// A real potential that can be sampled on a whole grid at once.
pub trait PotentialSampler: Sync {
    fn fill(&self, xs: &[f64], t: f64, out: &mut [f64]) -> Result<()>;
}

/// `V₀ = x²`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Harmonic;

impl PotentialSampler for Harmonic {
    fn fill(&self, xs: &[f64], _t: f64, out: &mut [f64]) -> Result<()> {
        for (o, &x) in out.iter_mut().zip(xs) {
            *o = x * x;
        }
        Ok(())
    }
}

/// `V₁` from a tabulated `(ln w)''` profile covering `|x| ≤ x_extent` at
/// every time.
#[derive(Clone, Debug)]
pub struct DeformedPotential {
    transform: BssTransform,
    profile: LogProfile,
}

impl DeformedPotential {
    pub fn new(transform: &BssTransform, x_extent: f64) -> Result<Self> {
        let c = transform.constants();
        let b_max = transform.params().c0.abs() / c.c1_minus_gamma.sqrt();
        let profile = LogProfile::new(transform, b_max * x_extent * 1.01 + 1.0, PROFILE_DZ)?;
        Ok(Self {
            transform: *transform,
            profile,
        })
    }
}

impl PotentialSampler for DeformedPotential {
    fn fill(&self, xs: &[f64], t: f64, out: &mut [f64]) -> Result<()> {
        let b = self.transform.time_factors(t).b;
        for (o, &x) in out.iter_mut().zip(xs) {
            *o = self.profile.potential(b, x).ok_or_else(|| {
                Error::domain(
                    "deformed_potential",
                    format!("x = {x} outside the tabulated range at t = {t}"),
                )
            })?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Propagation {
    pub field: GridField<Complex64>,
    pub steps: usize,
    pub dt: f64,
    /// `| ‖ψ(t1)‖ / ‖ψ(t0)‖ - 1 |` for the discrete norm.
    pub norm_drift: f64,
    pub max_edge_ratio: f64,
}

fn edge_ratio(psi: &[Complex64]) -> f64 {
    let max = psi.iter().map(|v| v.norm_sqr()).fold(0.0, f64::max);
    let edge = psi[0].norm_sqr().max(psi[psi.len() - 1].norm_sqr());
    if max == 0.0 {
        0.0
    } else {
        (edge / max).sqrt()
    }
}

fn discrete_norm(psi: &[Complex64]) -> f64 {
    psi.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

struct SplitStep {
    xs: Vec<f64>,
    /// `e^{-i k² dt} / n`, the kinetic factor with the FFT normalization folded in.
    kinetic: Vec<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    potential: Vec<f64>,
}

impl SplitStep {
    fn new(grid: &PeriodicGrid, dt: f64) -> Self {
        let n = grid.n;
        let dx = grid.dx();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        let kinetic = (0..n)
            .map(|m| {
                let wave = if m < n / 2 {
                    m as f64
                } else {
                    m as f64 - n as f64
                };
                let k = 2.0 * PI * wave / (n as f64 * dx);
                Complex64::from_polar(1.0 / n as f64, -k * k * dt)
            })
            .collect();
        Self {
            xs: (0..n).map(|j| grid.x_min + dx * j as f64).collect(),
            kinetic,
            forward,
            inverse,
            scratch: vec![Complex64::default(); scratch_len],
            potential: vec![0.0; n],
        }
    }

    fn kick(&self, psi: &mut [Complex64], dt: f64) {
        for (v, &p) in psi.iter_mut().zip(&self.potential) {
            *v *= Complex64::from_polar(1.0, -p * dt);
        }
    }

    /// One Strang step with `V` frozen at the midpoint time.
    fn step(
        &mut self,
        psi: &mut [Complex64],
        v: &dyn PotentialSampler,
        t_mid: f64,
        dt: f64,
    ) -> Result<()> {
        v.fill(&self.xs, t_mid, &mut self.potential)?;
        self.kick(psi, 0.5 * dt);
        self.forward.process_with_scratch(psi, &mut self.scratch);
        for (c, k) in psi.iter_mut().zip(&self.kinetic) {
            *c *= k;
        }
        self.inverse.process_with_scratch(psi, &mut self.scratch);
        self.kick(psi, 0.5 * dt);
        Ok(())
    }
}

/// Evolves `initial` from `initial.t` to `t1` with steps no longer than `dt`.
pub fn split_step_evolve(
    initial: &GridField<Complex64>,
    grid: &PeriodicGrid,
    potential: &dyn PotentialSampler,
    t1: f64,
    dt: f64,
) -> Result<Propagation> {
    if !grid.matches(initial) {
        return Err(Error::GridMismatch(format!(
            "field (x0 = {}, dx = {}, n = {}) does not sample the periodic grid {grid:?}",
            initial.x0,
            initial.dx,
            initial.len()
        )));
    }
    if !(dt > 0.0 && dt <= MAX_DT) {
        return Err(Error::domain(
            "split_step_evolve",
            format!("dt must lie in (0, {MAX_DT}], got {dt}"),
        ));
    }
    let t0 = initial.t;
    let span = t1 - t0;
    if !(span >= 0.0 && span.is_finite()) {
        return Err(Error::domain(
            "split_step_evolve",
            format!("need t1 >= t0, got {t0} -> {t1}"),
        ));
    }
    let mut psi = initial.values.clone();
    let initial_edge = edge_ratio(&psi);
    if initial_edge > INITIAL_EDGE_LIMIT {
        return Err(Error::BoundaryLeak {
            ratio: initial_edge,
            t: t0,
        });
    }
    let steps = (span / dt).ceil() as usize;
    let dt = if steps == 0 { 0.0 } else { span / steps as f64 };
    let norm0 = discrete_norm(&psi);
    let mut stepper = SplitStep::new(grid, dt);
    let mut max_edge = initial_edge;
    for s in 0..steps {
        let t_mid = t0 + (s as f64 + 0.5) * dt;
        stepper.step(&mut psi, potential, t_mid, dt)?;
        if (s + 1) % EDGE_CHECK_INTERVAL == 0 || s + 1 == steps {
            let e = edge_ratio(&psi);
            max_edge = max_edge.max(e);
            if e > RUNNING_EDGE_LIMIT {
                return Err(Error::BoundaryLeak {
                    ratio: e,
                    t: t0 + (s + 1) as f64 * dt,
                });
            }
        }
    }
    let norm_drift = (discrete_norm(&psi) / norm0 - 1.0).abs();
    let field = GridField {
        x0: initial.x0,
        dx: initial.dx,
        t: t1,
        values: psi,
    };
    Ok(Propagation {
        field,
        steps,
        dt,
        norm_drift,
        max_edge_ratio: max_edge,
    })
}

/// `‖a - b‖ / ‖b‖` with Simpson quadrature.
pub fn l2_relative_error(a: &GridField<Complex64>, b: &GridField<Complex64>) -> Result<f64> {
    let same_grid = a.len() == b.len()
        && (a.x0 - b.x0).abs() <= 1e-12 * (1.0 + a.x0.abs())
        && (a.dx - b.dx).abs() <= 1e-12 * a.dx;
    if !same_grid {
        return Err(Error::GridMismatch(format!(
            "(x0 = {}, dx = {}, n = {}) vs (x0 = {}, dx = {}, n = {})",
            a.x0,
            a.dx,
            a.len(),
            b.x0,
            b.dx,
            b.len()
        )));
    }
    let diff: Vec<f64> = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(p, q)| (p - q).norm_sqr())
        .collect();
    let reference: Vec<f64> = b.values.iter().map(|q| q.norm_sqr()).collect();
    Ok((simpson(&diff, a.dx)? / simpson(&reference, b.dx)?).sqrt())
}
