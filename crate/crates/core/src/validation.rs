//! The residual battery: every identity the construction promises, measured
//! numerically and compared against a tolerance.

use std::cell::RefCell;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracles::reference::hyp1f1_reference;
use crate::oracles::{
    d_xx, fd_tdse_residual, intertwining_residual, l2_relative_error, split_step_evolve,
    DeformedPotential, FdSteps, Harmonic, NestedSteps, PeriodicGrid, PotentialSampler,
};
use crate::solutions::{
    grid_eval_state, norm_l2, phi, zero_census, GridSpec, StateKind, DEFAULT_ZERO_THRESHOLD,
};
use crate::special::{hyp1f1, hyp1f1_dw};
use crate::transform::BssTransform;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Absolute,
    Relative,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    pub name: String,
    pub max_abs: f64,
    pub max_rel: f64,
    pub grid_spec: String,
    pub tolerance: f64,
    pub mode: Mode,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ResidualReport {
    pub fn new(
        name: impl Into<String>,
        max_abs: f64,
        max_rel: f64,
        grid_spec: impl Into<String>,
        tolerance: f64,
        mode: Mode,
    ) -> Self {
        let measured = match mode {
            Mode::Absolute => max_abs,
            Mode::Relative => max_rel,
        };
        Self {
            name: name.into(),
            max_abs,
            max_rel,
            grid_spec: grid_spec.into(),
            tolerance,
            mode,
            pass: measured <= tolerance,
            note: None,
        }
    }

    /// A check that could not be evaluated; it fails.
    pub fn errored(
        name: impl Into<String>,
        grid_spec: impl Into<String>,
        tolerance: f64,
        mode: Mode,
        err: &Error,
    ) -> Self {
        let mut r = Self::new(
            name,
            f64::INFINITY,
            f64::INFINITY,
            grid_spec,
            tolerance,
            mode,
        );
        r.note = Some(err.to_string());
        r
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// The number compared against `tolerance`.
    pub fn measured(&self) -> f64 {
        match self.mode {
            Mode::Absolute => self.max_abs,
            Mode::Relative => self.max_rel,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub separation: f64,
    pub u_equation: f64,
    pub deformed_equation: f64,
    pub intertwining: f64,
    pub reality: f64,
    pub cross_form: f64,
    pub ell_integral: f64,
    pub special_form: f64,
    pub static_limit: f64,
    pub propagation: f64,
    pub propagation_control: f64,
    /// Allowed `|ratio - 4|` between errors at `2 dt` and `dt`.
    pub dt_order: f64,
    pub norm: f64,
    pub hyp1f1: f64,
    pub wronskian: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            separation: 1e-10,
            u_equation: 1e-6,
            deformed_equation: 1e-5,
            intertwining: 1e-4,
            reality: 1e-6,
            cross_form: 1e-6,
            ell_integral: 1e-8,
            special_form: 1e-9,
            static_limit: 1e-12,
            propagation: 1e-4,
            propagation_control: 1e-6,
            dt_order: 0.5,
            norm: 1e-6,
            hyp1f1: 1e-10,
            wronskian: 1e-8,
        }
    }
}

/// A rectangular set of `(x, t)` probe points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lattice {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub nt: usize,
}

impl Default for Lattice {
    fn default() -> Self {
        Self {
            x_min: -3.0,
            x_max: 3.0,
            nx: 21,
            t_min: 0.0,
            t_max: FRAC_PI_4,
            nt: 9,
        }
    }
}

impl Lattice {
    pub fn points(&self) -> Vec<(f64, f64)> {
        let step = |lo: f64, hi: f64, n: usize, i: usize| {
            if n < 2 {
                lo
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        };
        let mut out = Vec::with_capacity(self.nx * self.nt);
        for j in 0..self.nt {
            for i in 0..self.nx {
                out.push((
                    step(self.x_min, self.x_max, self.nx, i),
                    step(self.t_min, self.t_max, self.nt, j),
                ));
            }
        }
        out
    }

    fn describe(&self) -> String {
        format!(
            "x in [{}, {}] x {}, t in [{}, {}] x {}",
            self.x_min, self.x_max, self.nx, self.t_min, self.t_max, self.nt
        )
    }
}

fn describe_grid(g: &GridSpec) -> String {
    format!("x in [{}, {}], n = {}", g.x_min, g.x_max, g.n)
}

/// `|iȧ + 4a² + b⁴ - 1|`, `|ḃ + 4αb|` and `|iḂ/B + 2a - μb²|` at `samples`
/// times spread over one period of the breathing.
pub fn separation_odes(tr: &BssTransform, samples: usize, tol: f64) -> Vec<ResidualReport> {
    let spec = format!("{samples} times in [0, pi/2)");
    let ts: Vec<f64> = (0..samples)
        .map(|k| FRAC_PI_2 * k as f64 / samples as f64)
        .collect();
    let worst = |f: &dyn Fn(f64) -> f64| ts.iter().map(|&t| f(t)).fold(0.0, f64::max);
    let riccati = worst(&|t| tr.separation_residuals(t).riccati);
    let b_ode = worst(&|t| tr.separation_residuals(t).b_ode);
    let big_b = worst(&|t| tr.separation_residuals(t).big_b_ode.norm());
    vec![
        ResidualReport::new(
            "separation_riccati",
            riccati,
            riccati,
            spec.clone(),
            tol,
            Mode::Absolute,
        ),
        ResidualReport::new(
            "separation_b_ode",
            b_ode,
            b_ode,
            spec.clone(),
            tol,
            Mode::Absolute,
        ),
        ResidualReport::new(
            "separation_amplitude_ode",
            big_b,
            big_b,
            spec,
            tol,
            Mode::Absolute,
        ),
    ]
}

/// FD residual of `i∂ₜu + ∂ₓ²u - x²u`; `u` is rescaled to unit modulus at
/// each probe point, so the absolute residual is also the relative one.
pub fn u_equation(
    tr: &BssTransform,
    lattice: &Lattice,
    steps: &FdSteps,
    tol: f64,
) -> ResidualReport {
    let name = "u_equation";
    let mut worst = 0.0f64;
    for (x, t) in lattice.points() {
        let res = (|| -> Result<f64> {
            let u0 = tr.transformation_u(x, t)?;
            let sample = |y: f64, s: f64| -> Result<Complex64> {
                let u = tr.transformation_u(y, s)?;
                Ok(Complex64::from_polar(
                    (u.log_mag - u0.log_mag).exp(),
                    u.phase,
                ))
            };
            Ok(fd_tdse_residual(sample, |y, _| Ok(y * y), x, t, steps)?.norm())
        })();
        match res {
            Ok(r) => worst = worst.max(r),
            Err(e) => {
                return ResidualReport::errored(name, lattice.describe(), tol, Mode::Relative, &e)
            }
        }
    }
    ResidualReport::new(name, worst, worst, lattice.describe(), tol, Mode::Relative)
}

/// Relative floor for deformed residuals: `|res| / (|ψ| + 10⁻³ max|ψ|)`,
/// so isolated near-zeros of `ψ` do not dominate.
pub const DEFORMED_RELATIVE_FLOOR: f64 = 1e-3;

/// FD residual of `iψₜ + ψₓₓ - V₁ψ` over the lattice.
pub fn deformed_equation(
    tr: &BssTransform,
    kind: StateKind,
    lattice: &Lattice,
    steps: &FdSteps,
    tol: f64,
) -> ResidualReport {
    let name = format!("deformed_equation_{}", kind.label());
    let run = || -> Result<(f64, f64)> {
        let points = lattice.points();
        let values: Vec<f64> = points
            .iter()
            .map(|&(x, t)| Ok(kind.eval(tr, x, t)?.norm()))
            .collect::<Result<_>>()?;
        let scale = values.iter().copied().fold(0.0, f64::max);
        let (mut abs, mut rel) = (0.0f64, 0.0f64);
        for (&(x, t), &v) in points.iter().zip(&values) {
            let r = fd_tdse_residual(
                |y, s| kind.eval(tr, y, s),
                |y, s| tr.potential_v1(y, s),
                x,
                t,
                steps,
            )?
            .norm();
            abs = abs.max(r);
            rel = rel.max(r / (v + DEFORMED_RELATIVE_FLOOR * scale));
        }
        Ok((abs, rel))
    };
    match run() {
        Ok((abs, rel)) => {
            ResidualReport::new(name, abs, rel, lattice.describe(), tol, Mode::Relative)
        }
        Err(e) => ResidualReport::errored(name, lattice.describe(), tol, Mode::Relative, &e),
    }
}

pub const INTERTWINING_PROBE: (f64, f64) = (0.8, 0.2);

/// `[L S₀ - S₁ L] g` for an oscillator state and for a function that solves
/// nothing; the identity is between operators, so both vanish.
pub fn intertwining(tr: &BssTransform, tol: f64) -> Vec<ResidualReport> {
    let (x, t) = INTERTWINING_PROBE;
    let spec = format!("(x, t) = ({x}, {t})");
    let v1 = |y: f64, s: f64| tr.potential_v1(y, s);
    let steps = NestedSteps::default();
    let gaussian = |y: f64, _s: f64| Ok(Complex64::from((-(y - 1.0) * (y - 1.0)).exp()));
    let cases: [(&str, Result<_>); 2] = [
        (
            "intertwining_phi3",
            intertwining_residual(tr, |y, s| phi(3, y, s), v1, x, t, &steps),
        ),
        (
            "intertwining_gaussian",
            intertwining_residual(tr, gaussian, v1, x, t, &steps),
        ),
    ];
    cases
        .into_iter()
        .map(|(name, r)| match r {
            Ok(r) => ResidualReport::new(
                name,
                r.residual.norm(),
                r.relative(),
                spec.clone(),
                tol,
                Mode::Relative,
            ),
            Err(e) => ResidualReport::errored(name, spec.clone(), tol, Mode::Relative, &e),
        })
        .collect()
}

fn phase_at(tr: &BssTransform, x: f64, t: f64) -> Result<Complex64> {
    Ok(Complex64::from(tr.transformation_u(x, t)?.phase))
}

const PHASE_STEP: f64 = 1e-2;

/// `Im(ln u)ₓₓ` by central differences of the phase, which is exactly
/// quadratic in `x`.
fn phase_curvature(tr: &BssTransform, x: f64, t: f64) -> Result<f64> {
    let steps = FdSteps {
        h_x: PHASE_STEP,
        ..FdSteps::default()
    };
    Ok(d_xx(|y| phase_at(tr, y, t), x, &steps, t)?.re)
}

/// Checks that `V₁` is real and matches its other forms:
/// `Im(x² - 2(ln u)ₓₓ) + ℓ'/ℓ = 0`, `V₁ = x² - (ln|u|²)ₓₓ`, and
/// `(ln(u/u*))ₓₓₓ = 0`.
pub fn reality(
    tr: &BssTransform,
    lattice: &Lattice,
    tolerances: &Tolerances,
) -> Vec<ResidualReport> {
    let spec = lattice.describe();
    let imag = || -> Result<f64> {
        let mut worst = 0.0f64;
        for (x, t) in lattice.points() {
            let f = tr.time_factors(t);
            worst = worst.max((-2.0 * phase_curvature(tr, x, t)? + 4.0 * f.alpha).abs());
        }
        Ok(worst)
    };
    let cross = || -> Result<(f64, f64)> {
        let steps = FdSteps::default();
        let (mut abs, mut rel) = (0.0f64, 0.0f64);
        for (x, t) in lattice.points() {
            let log_mag = |y: f64| Ok(Complex64::from(tr.transformation_u(y, t)?.log_mag));
            let v_fd = x * x - 2.0 * d_xx(log_mag, x, &steps, t)?.re;
            let v = tr.potential_v1(x, t)?;
            let d = (v_fd - v).abs();
            abs = abs.max(d);
            rel = rel.max(d / v.abs().max(f64::MIN_POSITIVE));
        }
        Ok((abs, rel))
    };
    let third = || -> Result<f64> {
        let mut worst = 0.0f64;
        for (x, t) in lattice.points() {
            for h in [PHASE_STEP, 2.0 * PHASE_STEP] {
                let p = |k: f64| Ok::<f64, Error>(phase_at(tr, x + k * h, t)?.re);
                // 2i ∂ₓ³ arg u
                let d3 = (p(2.0)? - 2.0 * p(1.0)? + 2.0 * p(-1.0)? - p(-2.0)?) / (2.0 * h * h * h);
                worst = worst.max(2.0 * d3.abs());
            }
        }
        Ok(worst)
    };
    vec![
        match imag() {
            Ok(v) => ResidualReport::new(
                "potential_imaginary_part",
                v,
                v,
                spec.clone(),
                tolerances.reality,
                Mode::Absolute,
            ),
            Err(e) => ResidualReport::errored(
                "potential_imaginary_part",
                spec.clone(),
                tolerances.reality,
                Mode::Absolute,
                &e,
            ),
        },
        match cross() {
            Ok((a, r)) => ResidualReport::new(
                "potential_cross_form",
                a,
                r,
                spec.clone(),
                tolerances.cross_form,
                Mode::Relative,
            ),
            Err(e) => ResidualReport::errored(
                "potential_cross_form",
                spec.clone(),
                tolerances.cross_form,
                Mode::Relative,
                &e,
            ),
        },
        match third() {
            Ok(v) => ResidualReport::new(
                "phase_third_derivative",
                v,
                v,
                spec.clone(),
                tolerances.reality,
                Mode::Absolute,
            ),
            Err(e) => ResidualReport::errored(
                "phase_third_derivative",
                spec,
                tolerances.reality,
                Mode::Absolute,
                &e,
            ),
        },
    ]
}

pub const ELL_PROBE_X: f64 = 0.5;

/// `exp(2∫₀ᵗ Im(ln u)ₓₓ dt')` against `ℓ(t)/ℓ(0)` at `samples` times over
/// one period, integrating the FD curvature by double-exponential quadrature.
pub fn ell_integral(tr: &BssTransform, samples: usize, tol: f64) -> ResidualReport {
    let name = "ell_integral";
    let spec = format!("{samples} times in (0, pi/2], x = {ELL_PROBE_X}");
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let integrand = |t: f64| match phase_curvature(tr, ELL_PROBE_X, t) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            0.0
        }
    };
    let ell0 = tr.time_factors(0.0).ell;
    let (mut integral, mut abs, mut rel) = (0.0, 0.0f64, 0.0f64);
    for k in 1..=samples {
        let (a, b) = (
            FRAC_PI_2 * (k - 1) as f64 / samples as f64,
            FRAC_PI_2 * k as f64 / samples as f64,
        );
        // short panels keep the quadrature within its evaluation budget
        const PANELS: usize = 4;
        for m in 0..PANELS {
            let lo = a + (b - a) * m as f64 / PANELS as f64;
            let hi = a + (b - a) * (m + 1) as f64 / PANELS as f64;
            integral += quadrature::integrate(integrand, lo, hi, 1e-13).integral;
        }
        let ratio = (2.0 * integral).exp();
        let want = tr.time_factors(b).ell / ell0;
        abs = abs.max((ratio - want).abs());
        rel = rel.max((ratio - want).abs() / want);
    }
    match failure.into_inner() {
        Some(e) => ResidualReport::errored(name, spec, tol, Mode::Relative, &e),
        None => ResidualReport::new(name, abs, rel, spec, tol, Mode::Relative),
    }
}

/// Agreement of the erf-based closed form with the general `V₁` (ν = 1/2 only).
pub fn special_form(tr: &BssTransform, grid: &GridSpec, times: &[f64], tol: f64) -> ResidualReport {
    let spec = describe_grid(grid);
    let run = || -> Result<f64> {
        let mut worst = 0.0f64;
        for &t in times {
            for x in grid.points() {
                worst = worst.max((tr.mielnik_potential(x, t)? - tr.potential_v1(x, t)?).abs());
            }
        }
        Ok(worst)
    };
    match run() {
        Ok(v) => ResidualReport::new("special_form", v, v, spec, tol, Mode::Absolute),
        Err(e) => ResidualReport::errored("special_form", spec, tol, Mode::Absolute, &e),
    }
}

/// Largest change of `V₁` between the first and any later snapshot.
pub fn static_limit(tr: &BssTransform, grid: &GridSpec, times: &[f64], tol: f64) -> ResidualReport {
    let spec = describe_grid(grid);
    let run = || -> Result<f64> {
        let mut worst = 0.0f64;
        for x in grid.points() {
            let first = tr.potential_v1(x, times[0])?;
            for &t in &times[1..] {
                worst = worst.max((tr.potential_v1(x, t)? - first).abs());
            }
        }
        Ok(worst)
    };
    match run() {
        Ok(v) => ResidualReport::new("static_limit", v, v, spec, tol, Mode::Absolute),
        Err(e) => ResidualReport::errored("static_limit", spec, tol, Mode::Absolute, &e),
    }
}

/// `max |V₁ - (x² - 2)|`; meaningful when the weights reduce `u` to the
/// oscillator ground state.
pub fn trivial_limit(
    tr: &BssTransform,
    grid: &GridSpec,
    times: &[f64],
    tol: f64,
) -> ResidualReport {
    let spec = describe_grid(grid);
    let run = || -> Result<f64> {
        let mut worst = 0.0f64;
        for &t in times {
            for x in grid.points() {
                worst = worst.max((tr.potential_v1(x, t)? - (x * x - 2.0)).abs());
            }
        }
        Ok(worst)
    };
    match run() {
        Ok(v) => ResidualReport::new("trivial_limit", v, v, spec, tol, Mode::Absolute),
        Err(e) => ResidualReport::errored("trivial_limit", spec, tol, Mode::Absolute, &e),
    }
}

/// Factor by which the missing state's grid is widened: it decays far
/// more slowly than the intertwined states.
pub const MISSING_STATE_WIDENING: usize = 4;

/// Grid on which `kind` is negligible at the edges, derived from `base`
/// at the same spacing.
pub fn state_grid(kind: StateKind, base: &GridSpec) -> GridSpec {
    match kind {
        StateKind::Missing => {
            let m = MISSING_STATE_WIDENING as f64;
            GridSpec {
                x_min: base.x_min * m,
                x_max: base.x_max * m,
                n: (base.n - 1) * MISSING_STATE_WIDENING + 1,
            }
        }
        _ => *base,
    }
}

/// Spectral grid over the extent of [`state_grid`], with the point count
/// rounded up to a power of two.
pub fn propagation_grid(kind: StateKind, base: &GridSpec) -> Result<PeriodicGrid> {
    let g = state_grid(kind, base);
    PeriodicGrid::new(g.x_min, g.x_max, (g.n - 1).max(8).next_power_of_two())
}

pub const NORM_CHECKPOINTS: [f64; 5] = [0.0, PI / 16.0, PI / 8.0, 3.0 * PI / 16.0, FRAC_PI_4];

/// `‖ψ(·,t)‖` at the checkpoints, relative to its value at the first one.
pub fn norm_conservation(
    tr: &BssTransform,
    kind: StateKind,
    base: &GridSpec,
    checkpoints: &[f64],
    tol: f64,
) -> ResidualReport {
    let name = format!("norm_{}", kind.label());
    let grid = state_grid(kind, base);
    let run = || -> Result<(f64, f64)> {
        let norms: Vec<f64> = checkpoints
            .iter()
            .map(|&t| norm_l2(&grid_eval_state(tr, kind, &grid, t)?))
            .collect::<Result<_>>()?;
        let abs = norms
            .iter()
            .map(|n| (n - norms[0]).abs())
            .fold(0.0, f64::max);
        Ok((abs, abs / norms[0]))
    };
    match run() {
        Ok((a, r)) => ResidualReport::new(name, a, r, describe_grid(&grid), tol, Mode::Relative),
        Err(e) => ResidualReport::errored(name, describe_grid(&grid), tol, Mode::Relative, &e),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropagationOutcome {
    pub report: ResidualReport,
    pub norm_drift: f64,
    pub steps: usize,
}

/// Evolves `kind` from `t0` to `t1` under `V₁` (or `V₀` for oscillator
/// states) and compares with the closed form at `t1`.
pub fn propagation(
    tr: &BssTransform,
    kind: StateKind,
    base: &GridSpec,
    t0: f64,
    t1: f64,
    dt: f64,
    tol: f64,
) -> Result<PropagationOutcome> {
    let grid = propagation_grid(kind, base)?;
    let samples = grid.samples();
    let deformed;
    let potential: &dyn PotentialSampler = if kind.is_deformed() {
        deformed = DeformedPotential::new(tr, grid.x_max.max(-grid.x_min))?;
        &deformed
    } else {
        &Harmonic
    };
    let start = grid_eval_state(tr, kind, &samples, t0)?;
    let run = split_step_evolve(&start, &grid, potential, t1, dt)?;
    let exact = grid_eval_state(tr, kind, &samples, t1)?;
    let err = l2_relative_error(&run.field, &exact)?;
    let spec = format!(
        "x in [{}, {}), n = {}, dt = {dt:e}, t = {t0} -> {t1}",
        grid.x_min, grid.x_max, grid.n
    );
    let report = ResidualReport::new(
        format!("propagation_{}", kind.label()),
        err,
        err,
        spec,
        tol,
        Mode::Relative,
    );
    Ok(PropagationOutcome {
        report,
        norm_drift: run.norm_drift,
        steps: run.steps,
    })
}

/// Evolves `kind` from the first to the last of `times`, reporting the
/// error against the closed form at every later time and the drift of the
/// Simpson norm over the whole run.
pub fn propagate_checkpoints(
    tr: &BssTransform,
    kind: StateKind,
    base: &GridSpec,
    times: &[f64],
    dt: f64,
    tolerances: &Tolerances,
) -> Vec<ResidualReport> {
    let label = kind.label();
    let tol = if kind.is_deformed() {
        tolerances.propagation
    } else {
        tolerances.propagation_control
    };
    let mut out = Vec::new();
    let run = |out: &mut Vec<ResidualReport>| -> Result<()> {
        let grid = propagation_grid(kind, base)?;
        let samples = grid.samples();
        let spec = format!(
            "x in [{}, {}), n = {}, dt = {dt:e}",
            grid.x_min, grid.x_max, grid.n
        );
        let deformed;
        let potential: &dyn PotentialSampler = if kind.is_deformed() {
            deformed = DeformedPotential::new(tr, grid.x_max.max(-grid.x_min))?;
            &deformed
        } else {
            &Harmonic
        };
        let mut field = grid_eval_state(tr, kind, &samples, times[0])?;
        let norm0 = norm_l2(&field)?;
        let mut drift = 0.0f64;
        for &t in &times[1..] {
            field = split_step_evolve(&field, &grid, potential, t, dt)?.field;
            let err = l2_relative_error(&field, &grid_eval_state(tr, kind, &samples, t)?)?;
            out.push(ResidualReport::new(
                format!("propagation_{label}_t{t:.6}"),
                err,
                err,
                spec.clone(),
                tol,
                Mode::Relative,
            ));
            drift = drift.max((norm_l2(&field)? / norm0 - 1.0).abs());
        }
        out.push(ResidualReport::new(
            format!("propagated_norm_{label}"),
            drift * norm0,
            drift,
            spec,
            tolerances.norm,
            Mode::Relative,
        ));
        Ok(())
    };
    if let Err(e) = run(&mut out) {
        out.push(ResidualReport::errored(
            format!("propagation_{label}"),
            describe_grid(base),
            tol,
            Mode::Relative,
            &e,
        ));
    }
    out
}

/// [`dt_order`] as a report: passes when the ratio is within `tol` of 4.
pub fn dt_order_check(
    tr: &BssTransform,
    kind: StateKind,
    base: &GridSpec,
    t0: f64,
    t1: f64,
    dt: f64,
    tol: f64,
) -> ResidualReport {
    let name = format!("dt_order_{}", kind.label());
    let spec = format!("dt = {dt:e} vs {:e}, t = {t0} -> {t1}", 2.0 * dt);
    match dt_order(tr, kind, base, t0, t1, dt) {
        Ok(ratio) => {
            let miss = (ratio - 4.0).abs();
            ResidualReport::new(name, miss, miss / 4.0, spec, tol, Mode::Absolute)
                .with_note(format!("error ratio {ratio:.4}"))
        }
        Err(e) => ResidualReport::errored(name, spec, tol, Mode::Absolute, &e),
    }
}

/// Error ratio between steps `2 dt` and `dt`; Strang splitting gives ≈ 4.
pub fn dt_order(
    tr: &BssTransform,
    kind: StateKind,
    base: &GridSpec,
    t0: f64,
    t1: f64,
    dt: f64,
) -> Result<f64> {
    let coarse = propagation(tr, kind, base, t0, t1, 2.0 * dt, f64::INFINITY)?
        .report
        .max_rel;
    let fine = propagation(tr, kind, base, t0, t1, dt, f64::INFINITY)?
        .report
        .max_rel;
    Ok(coarse / fine)
}

/// Which intertwined states the figure curves labelled `ψ₁` and `ψ₂` show.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fig2Labels {
    /// `ψ₁ = Lφ₀`, `ψ₂ = Lφ₁`: the `n`-th curve has `n` zeros where the
    /// potential is momentarily symmetric.
    #[default]
    Ladder,
    /// `ψ₁ = Lφ₂`, `ψ₂ = Lφ₃`, following `ψₙ = Lφₙ₊₁`.
    Shifted,
}

impl Fig2Labels {
    /// The plotted states `[ψ₀, ψ₁, ψ₂]`.
    pub fn states(self) -> [StateKind; 3] {
        match self {
            Self::Ladder => [
                StateKind::Missing,
                StateKind::Intertwined(0),
                StateKind::Intertwined(1),
            ],
            Self::Shifted => [
                StateKind::Missing,
                StateKind::Intertwined(2),
                StateKind::Intertwined(3),
            ],
        }
    }
}

/// Zero counts of the plotted `|ψ|²` curves at time `t`.
pub fn fig2_counts(
    tr: &BssTransform,
    labels: Fig2Labels,
    grid: &GridSpec,
    t: f64,
) -> Result<[usize; 3]> {
    let mut counts = [0; 3];
    for (c, kind) in counts.iter_mut().zip(labels.states()) {
        *c = zero_census(&grid_eval_state(tr, kind, grid, t)?, DEFAULT_ZERO_THRESHOLD).count;
    }
    Ok(counts)
}

/// Census counts against expected values; `max_abs` is the largest count mismatch.
pub fn fig2_census(
    tr: &BssTransform,
    labels: Fig2Labels,
    grid: &GridSpec,
    expected: &[(f64, [usize; 3])],
) -> ResidualReport {
    let spec = describe_grid(grid);
    let mut worst = 0usize;
    let mut seen = Vec::new();
    for &(t, want) in expected {
        match fig2_counts(tr, labels, grid, t) {
            Ok(got) => {
                worst = worst.max(
                    got.iter()
                        .zip(&want)
                        .map(|(g, w)| g.abs_diff(*w))
                        .max()
                        .unwrap_or(0),
                );
                seen.push(format!("t = {t}: {got:?}"));
            }
            Err(e) => {
                return ResidualReport::errored("fig2_zero_census", spec, 0.0, Mode::Absolute, &e)
            }
        }
    }
    ResidualReport::new(
        "fig2_zero_census",
        worst as f64,
        worst as f64,
        spec,
        0.0,
        Mode::Absolute,
    )
    .with_note(seen.join("; "))
}

pub const ORACLE_NUS: [f64; 3] = [0.5, 2.0, -0.3];
pub const ORACLE_POINTS: usize = 200;
pub const ORACLE_W_MAX: f64 = 1300.0;
const ORACLE_DIGITS: u32 = 30;

/// `₁F₁(ν, 1/2; w)` and `₁F₁(ν + 1/2, 3/2; w)` against the extended-precision
/// series on `ORACLE_POINTS` points, denser near the origin.
pub fn hyp1f1_oracle(tol: f64) -> ResidualReport {
    let spec = format!("{ORACLE_POINTS} points, w in [0, {ORACLE_W_MAX}], nu in {ORACLE_NUS:?}");
    let run = || -> Result<f64> {
        let mut worst = 0.0f64;
        for j in 0..ORACLE_POINTS {
            let nu = ORACLE_NUS[j % 3];
            let (a, b) = if (j / 3) % 2 == 0 {
                (nu, 0.5)
            } else {
                (nu + 0.5, 1.5)
            };
            let s = j as f64 / (ORACLE_POINTS - 1) as f64;
            let w = ORACLE_W_MAX * s * s;
            let got = hyp1f1(a, b, w)?;
            worst = worst.max(hyp1f1_reference(a, b, w, ORACLE_DIGITS)?.relative_error_of(&got));
        }
        Ok(worst)
    };
    match run() {
        Ok(v) => ResidualReport::new("hyp1f1_oracle", v, v, spec, tol, Mode::Relative),
        Err(e) => ResidualReport::errored("hyp1f1_oracle", spec, tol, Mode::Relative, &e),
    }
}

pub const WRONSKIAN_Z_MAX: f64 = 2.5;

/// `w₁w₂' - w₁'w₂ = e^{z²}` for the even and odd solutions at each ν.
/// The two products grow like `z^{4ν} e^{2z²}` while their difference is
/// `e^{z²}`, so `z` stops where the cancellation still leaves ten digits.
pub fn wronskian(tol: f64) -> ResidualReport {
    let spec = format!("z in [0, {WRONSKIAN_Z_MAX}], nu in {ORACLE_NUS:?}");
    let run = || -> Result<f64> {
        let mut worst = 0.0f64;
        for nu in ORACLE_NUS {
            for k in 0..=35 {
                let z = WRONSKIAN_Z_MAX * k as f64 / 35.0;
                let w = z * z;
                let w1 = hyp1f1(nu, 0.5, w)?.to_f64();
                let w1p = 2.0 * z * hyp1f1_dw(nu, 0.5, w)?.to_f64();
                let odd = hyp1f1(nu + 0.5, 1.5, w)?.to_f64();
                let w2 = z * odd;
                let w2p = odd + 2.0 * w * hyp1f1_dw(nu + 0.5, 1.5, w)?.to_f64();
                let want = w.exp();
                worst = worst.max(((w1 * w2p - w1p * w2) - want).abs() / want);
            }
        }
        Ok(worst)
    };
    match run() {
        Ok(v) => ResidualReport::new("wronskian", v, v, spec, tol, Mode::Relative),
        Err(e) => ResidualReport::errored("wronskian", spec, tol, Mode::Relative, &e),
    }
}

pub const GAMMA_PERTURBATION: f64 = 1.01;

/// The b-equation residual with `γ` scaled in `b(t)` alone. Must fail.
pub fn perturbed_gamma_control(tr: &BssTransform, tol: f64) -> ResidualReport {
    let perturbed = tr.with_scaled_amplitude(GAMMA_PERTURBATION);
    let b_ode = separation_odes(&perturbed, 64, tol)
        .into_iter()
        .find(|r| r.name == "separation_b_ode");
    let mut r = b_ode.expect("separation_odes reports the b-equation");
    r.name = "control_perturbed_gamma".into();
    r.note = Some(format!("gamma scaled by {GAMMA_PERTURBATION} in b(t)"));
    r
}

/// Intertwining with `V₀` standing in for `V₁`. Must fail.
pub fn mismatched_potential_control(tr: &BssTransform, tol: f64) -> ResidualReport {
    let (x, t) = INTERTWINING_PROBE;
    let spec = format!("(x, t) = ({x}, {t})");
    // the absolute residual is what the identity leaves unbalanced
    match intertwining_residual(
        tr,
        |y, s| phi(3, y, s),
        |y, _| Ok(y * y),
        x,
        t,
        &NestedSteps::default(),
    ) {
        Ok(r) => ResidualReport::new(
            "control_mismatched_potential",
            r.residual.norm(),
            r.relative(),
            spec,
            tol,
            Mode::Relative,
        ),
        Err(e) => ResidualReport::errored(
            "control_mismatched_potential",
            spec,
            tol,
            Mode::Relative,
            &e,
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::BssParams;

    fn fig1a() -> BssTransform {
        BssTransform::new(BssParams {
            c0: 1.0,
            c1: 10.0,
            c2: 0.0,
            k_a: 2.0,
            k_b: 5.0,
            nu: 2.0,
        })
        .unwrap()
    }

    #[test]
    fn report_pass_follows_mode() {
        let r = ResidualReport::new("x", 1.0, 1e-3, "", 1e-2, Mode::Relative);
        assert!(r.pass);
        let r = ResidualReport::new("x", 1.0, 1e-3, "", 1e-2, Mode::Absolute);
        assert!(!r.pass);
        let e = ResidualReport::errored(
            "x",
            "",
            1.0,
            Mode::Absolute,
            &Error::NonConvergence {
                what: "t",
                terms: 1,
            },
        );
        assert!(!e.pass && e.note.is_some());
    }

    #[test]
    fn lattice_covers_corners() {
        let pts = Lattice::default().points();
        assert_eq!(pts.len(), 189);
        assert_eq!(pts[0], (-3.0, 0.0));
        assert_eq!(pts[188], (3.0, FRAC_PI_4));
    }

    #[test]
    fn controls_fail_and_odes_pass() {
        let tr = fig1a();
        assert!(separation_odes(&tr, 64, 1e-10).iter().all(|r| r.pass));
        let c = perturbed_gamma_control(&tr, 1e-10);
        assert!(!c.pass && c.max_abs > 1e-3, "{c:?}");
    }

    #[test]
    fn ell_integral_closes() {
        let r = ell_integral(&fig1a(), 16, 1e-8);
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn fig2_labels_pick_states() {
        assert_eq!(Fig2Labels::Ladder.states()[1], StateKind::Intertwined(0));
        assert_eq!(Fig2Labels::Shifted.states()[2], StateKind::Intertwined(3));
    }
}
