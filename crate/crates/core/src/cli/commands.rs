//! The CLI verbs. Each writes its artifacts under `cfg.outputs` and returns
//! what it wrote; `validate` and `propagate` also return a pass/fail report.

use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::{FigurePreset, RunConfig};
use super::output::{write_csv, write_json};
use crate::error::Result;
use crate::oracles::FdSteps;
use crate::solutions::{
    grid_eval_potential, grid_eval_state, zero_census, StateKind, ZeroCensus,
    DEFAULT_ZERO_THRESHOLD,
};
use crate::transform::BssParams;
use crate::validation::{
    deformed_equation, dt_order_check, ell_integral, fig2_census, hyp1f1_oracle, intertwining,
    norm_conservation, propagate_checkpoints, reality, separation_odes, special_form, static_limit,
    trivial_limit, u_equation, wronskian, Fig2Labels, Lattice, ResidualReport, NORM_CHECKPOINTS,
};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub checks: Vec<ResidualReport>,
    pub pass: bool,
}

impl Report {
    pub fn new(checks: Vec<ResidualReport>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Self {
            schema_version: SCHEMA_VERSION,
            checks,
            pass,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &ResidualReport> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

#[derive(Serialize)]
struct Snapshot {
    file: String,
    t: f64,
}

#[derive(Serialize)]
struct Index<'a> {
    schema_version: &'static str,
    figure_preset: Option<&'static str>,
    params: &'a BssParams,
    snapshots: Vec<Snapshot>,
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn write_index(cfg: &RunConfig, name: &str, files: &[(PathBuf, f64)]) -> Result<PathBuf> {
    let index = Index {
        schema_version: SCHEMA_VERSION,
        figure_preset: cfg.figure_preset.map(FigurePreset::name),
        params: &cfg.params,
        snapshots: files
            .iter()
            .map(|(p, t)| Snapshot {
                file: file_name(p),
                t: *t,
            })
            .collect(),
    };
    let path = cfg.outputs.join(name);
    write_json(&path, &index)?;
    Ok(path)
}

/// `potential_t{k}.csv` with columns `x, V1, V1_minus_V0` for the k-th time.
pub fn run_potential(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let tr = cfg.transform()?;
    let mut files = Vec::new();
    for (k, &t) in cfg.times.iter().enumerate() {
        let v = grid_eval_potential(&tr, &cfg.grid, t)?;
        let rows: Vec<[f64; 3]> = (0..v.len())
            .map(|j| {
                let x = v.x(j);
                [x, v.values[j], v.values[j] - x * x]
            })
            .collect();
        let path = cfg.outputs.join(format!("potential_t{k}.csv"));
        write_csv(&path, &["x", "V1", "V1_minus_V0"], &rows)?;
        files.push((path, t));
    }
    let index = write_index(cfg, "potential.json", &files)?;
    Ok(files.into_iter().map(|(p, _)| p).chain([index]).collect())
}

#[derive(Serialize)]
struct CurveCensus {
    column: &'static str,
    state: StateKind,
    census: ZeroCensus,
}

#[derive(Serialize)]
struct CensusSidecar {
    schema_version: &'static str,
    t: f64,
    labels: Fig2Labels,
    curves: Vec<CurveCensus>,
}

pub const STATE_COLUMNS: [&str; 3] = ["abs2_psi0_missing", "abs2_psi1", "abs2_psi2"];

/// `states_t{k}.csv` with `|ψ|²` of the three plotted states, and a
/// `states_t{k}.census.json` sidecar with their zero census.
pub fn run_states(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let tr = cfg.transform()?;
    let kinds = cfg.fig2_labels.states();
    let mut files = Vec::new();
    let mut written = Vec::new();
    for (k, &t) in cfg.times.iter().enumerate() {
        let fields = kinds
            .iter()
            .map(|&kind| grid_eval_state(&tr, kind, &cfg.grid, t))
            .collect::<Result<Vec<_>>>()?;
        let rows: Vec<[f64; 4]> = (0..cfg.grid.n)
            .map(|j| {
                [
                    cfg.grid.x(j),
                    fields[0].values[j].norm_sqr(),
                    fields[1].values[j].norm_sqr(),
                    fields[2].values[j].norm_sqr(),
                ]
            })
            .collect();
        let path = cfg.outputs.join(format!("states_t{k}.csv"));
        let mut header = vec!["x"];
        header.extend(STATE_COLUMNS);
        write_csv(&path, &header, &rows)?;
        let sidecar = CensusSidecar {
            schema_version: SCHEMA_VERSION,
            t,
            labels: cfg.fig2_labels,
            curves: STATE_COLUMNS
                .iter()
                .zip(kinds)
                .zip(&fields)
                .map(|((&column, state), f)| CurveCensus {
                    column,
                    state,
                    census: zero_census(f, DEFAULT_ZERO_THRESHOLD),
                })
                .collect(),
        };
        let side = cfg.outputs.join(format!("states_t{k}.census.json"));
        write_json(&side, &sidecar)?;
        written.push(side);
        files.push((path, t));
    }
    let index = write_index(cfg, "states.json", &files)?;
    Ok(files
        .into_iter()
        .map(|(p, _)| p)
        .chain(written)
        .chain([index])
        .collect())
}

/// Every residual check that applies to the configured parameters.
pub fn validation_battery(cfg: &RunConfig) -> Result<Vec<ResidualReport>> {
    let tr = cfg.transform()?;
    let tol = &cfg.tolerances;
    let lattice = Lattice::default();
    let steps = FdSteps::fast_dynamics();
    let p = tr.params();
    let gamma = tr.constants().gamma;
    let mut checks = separation_odes(&tr, 64, tol.separation);
    checks.push(u_equation(&tr, &lattice, &steps, tol.u_equation));
    for kind in [
        StateKind::Missing,
        StateKind::Intertwined(1),
        StateKind::Intertwined(2),
        StateKind::Intertwined(3),
    ] {
        checks.push(deformed_equation(
            &tr,
            kind,
            &lattice,
            &steps,
            tol.deformed_equation,
        ));
    }
    checks.extend(intertwining(&tr, tol.intertwining));
    checks.extend(reality(&tr, &lattice, tol));
    checks.push(ell_integral(&tr, 16, tol.ell_integral));
    if p.nu == 0.5 {
        checks.push(special_form(&tr, &cfg.grid, &cfg.times, tol.special_form));
    }
    if gamma == 0.0 {
        checks.push(static_limit(&tr, &cfg.grid, &cfg.times, tol.static_limit));
        if p.nu == 0.5 && p.k_b == 0.0 {
            checks.push(
                trivial_limit(&tr, &cfg.grid, &cfg.times, tol.static_limit)
                    .with_note("V1 = x^2 - 2"),
            );
        }
    }
    for kind in [
        StateKind::Missing,
        StateKind::Intertwined(0),
        StateKind::Intertwined(1),
        StateKind::Intertwined(2),
        StateKind::Intertwined(3),
    ] {
        checks.push(norm_conservation(
            &tr,
            kind,
            &cfg.grid,
            &NORM_CHECKPOINTS,
            tol.norm,
        ));
    }
    if cfg.figure_preset.is_some() && cfg.fig2_labels == Fig2Labels::Ladder {
        checks.push(fig2_census(
            &tr,
            cfg.fig2_labels,
            &cfg.grid,
            &FigurePreset::frozen_census(),
        ));
    }
    checks.push(hyp1f1_oracle(tol.hyp1f1));
    checks.push(wronskian(tol.wronskian));
    Ok(checks)
}

/// Runs [`validation_battery`] and writes `validate.json`.
pub fn run_validate(cfg: &RunConfig) -> Result<(Report, PathBuf)> {
    let report = Report::new(validation_battery(cfg)?);
    let path = cfg.outputs.join("validate.json");
    write_json(&path, &report)?;
    Ok((report, path))
}

/// Propagates the oscillator ground state under `V₀` as a control, then
/// `ψ₁` and the missing state under `V₁`, across the configured times.
pub fn propagation_checks(cfg: &RunConfig) -> Result<Vec<ResidualReport>> {
    let tr = cfg.transform()?;
    let times = cfg.sorted_times();
    let dt = cfg.propagation.dt;
    let psi1 = cfg.fig2_labels.states()[1];
    let mut checks = Vec::new();
    for kind in [StateKind::Phi(0), psi1, StateKind::Missing] {
        checks.extend(propagate_checkpoints(
            &tr,
            kind,
            &cfg.grid,
            &times,
            dt,
            &cfg.tolerances,
        ));
    }
    if cfg.propagation.order_check && times.len() > 1 {
        let (t0, t1) = (times[0], times[times.len() - 1]);
        checks.push(dt_order_check(
            &tr,
            psi1,
            &cfg.grid,
            t0,
            t1,
            dt,
            cfg.tolerances.dt_order,
        ));
    }
    Ok(checks)
}

/// Runs [`propagation_checks`] and writes `propagate.json`.
pub fn run_propagate(cfg: &RunConfig) -> Result<(Report, PathBuf)> {
    let report = Report::new(propagation_checks(cfg)?);
    let path = cfg.outputs.join("propagate.json");
    write_json(&path, &report)?;
    Ok((report, path))
}

/// Potential and state data for a figure preset.
pub fn run_figures(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let mut files = run_potential(cfg)?;
    files.extend(run_states(cfg)?);
    Ok(files)
}
