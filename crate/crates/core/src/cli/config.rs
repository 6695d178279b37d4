//! Run configuration: a JSON document, optionally replaced wholesale by one
//! of the figure presets.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solutions::GridSpec;
use crate::special::SQRT_PI;
use crate::transform::{BssParams, BssTransform};
use crate::validation::{Fig2Labels, Tolerances};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FigurePreset {
    #[serde(rename = "fig1a")]
    Fig1a,
    #[serde(rename = "fig1b")]
    Fig1b,
    #[serde(rename = "fig2-upper")]
    Fig2Upper,
    #[serde(rename = "fig2-lower")]
    Fig2Lower,
}

impl FigurePreset {
    pub const ALL: [Self; 4] = [Self::Fig1a, Self::Fig1b, Self::Fig2Upper, Self::Fig2Lower];

    pub fn name(self) -> &'static str {
        match self {
            Self::Fig1a => "fig1a",
            Self::Fig1b => "fig1b",
            Self::Fig2Upper => "fig2-upper",
            Self::Fig2Lower => "fig2-lower",
        }
    }

    pub fn params(self) -> BssParams {
        match self {
            Self::Fig1a | Self::Fig2Upper => BssParams {
                c0: 1.0,
                c1: 10.0,
                c2: 0.0,
                k_a: 2.0,
                k_b: 5.0,
                nu: 2.0,
            },
            Self::Fig1b | Self::Fig2Lower => BssParams {
                c0: 1.0,
                c1: 10.0,
                c2: 0.0,
                k_a: 1.3 * SQRT_PI,
                k_b: 2.0,
                nu: 0.5,
            },
        }
    }

    pub fn times() -> Vec<f64> {
        vec![0.0, FRAC_PI_8, FRAC_PI_4]
    }

    /// Zero counts of `[ψ₀, ψ₁, ψ₂]` under the default labels, measured
    /// once with the census and frozen as regression values.
    pub fn frozen_census() -> Vec<(f64, [usize; 3])> {
        vec![
            (0.0, [0, 1, 2]),
            (FRAC_PI_8, [0, 0, 0]),
            (FRAC_PI_4, [0, 1, 2]),
        ]
    }
}

impl FromStr for FigurePreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Config {
                field: "figure_preset".into(),
                reason: format!(
                    "unknown preset `{s}`; expected one of fig1a, fig1b, fig2-upper, fig2-lower"
                ),
            })
    }
}

/// A deliberately inconsistent transform, for watching checks fail.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Perturbation {
    /// Factor applied to `γ` inside `b(t)` only.
    pub gamma_scale: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PropagationConfig {
    pub dt: f64,
    /// Compare the error at `dt` with the error at `2 dt`.
    pub order_check: bool,
}

impl Default for PropagationConfig {
    fn default() -> Self {
        Self {
            dt: 1e-4,
            order_check: true,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    params: Option<BssParams>,
    grid: Option<GridSpec>,
    times: Option<Vec<f64>>,
    #[serde(default)]
    tolerances: Tolerances,
    outputs: Option<PathBuf>,
    figure_preset: Option<FigurePreset>,
    #[serde(default)]
    fig2_labels: Fig2Labels,
    perturbation: Option<Perturbation>,
    #[serde(default)]
    propagation: PropagationConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub params: BssParams,
    pub grid: GridSpec,
    pub times: Vec<f64>,
    pub tolerances: Tolerances,
    pub outputs: PathBuf,
    pub figure_preset: Option<FigurePreset>,
    pub fig2_labels: Fig2Labels,
    pub perturbation: Option<Perturbation>,
    pub propagation: PropagationConfig,
}

pub const DEFAULT_OUTPUTS: &str = "out";

fn config_error(field: impl Into<String>, err: Error) -> Error {
    match err {
        Error::Config { .. } => err,
        other => Error::Config {
            field: field.into(),
            reason: other.to_string(),
        },
    }
}

fn params_field(err: &Error) -> String {
    match err {
        Error::InvalidParams { field, .. } => format!("params.{field}"),
        Error::Singular { .. } => "params.k_b".into(),
        _ => "params".into(),
    }
}

impl RunConfig {
    /// A preset with every other setting at its default.
    pub fn from_preset(preset: FigurePreset) -> Result<Self> {
        Self::resolve(RawConfig {
            figure_preset: Some(preset),
            ..RawConfig::default()
        })
    }

    fn resolve(raw: RawConfig) -> Result<Self> {
        let (params, times) = match raw.figure_preset {
            Some(p) => (p.params(), FigurePreset::times()),
            None => (
                raw.params.ok_or_else(|| Error::Config {
                    field: "params".into(),
                    reason: "required unless figure_preset is given".into(),
                })?,
                raw.times.unwrap_or_else(FigurePreset::times),
            ),
        };
        let grid = raw.grid.unwrap_or_default();
        grid.validate().map_err(|e| config_error("grid", e))?;
        if times.is_empty() || times.iter().any(|t| !t.is_finite()) {
            return Err(Error::Config {
                field: "times".into(),
                reason: "need at least one finite time".into(),
            });
        }
        for (name, tol) in tolerance_entries(&raw.tolerances) {
            if !(tol >= 0.0) {
                return Err(Error::Config {
                    field: format!("tolerances.{name}"),
                    reason: format!("must be non-negative, got {tol}"),
                });
            }
        }
        if let Some(p) = raw.perturbation {
            if !(p.gamma_scale.is_finite() && p.gamma_scale > 0.0) {
                return Err(Error::Config {
                    field: "perturbation.gamma_scale".into(),
                    reason: "must be positive".into(),
                });
            }
        }
        let dt = raw.propagation.dt;
        if !(dt > 0.0 && dt <= crate::oracles::propagator::MAX_DT) {
            return Err(Error::Config {
                field: "propagation.dt".into(),
                reason: format!("must lie in (0, 1e-3], got {dt}"),
            });
        }
        let cfg = Self {
            params,
            grid,
            times,
            tolerances: raw.tolerances,
            outputs: raw
                .outputs
                .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUTS)),
            figure_preset: raw.figure_preset,
            fig2_labels: raw.fig2_labels,
            perturbation: raw.perturbation,
            propagation: raw.propagation,
        };
        cfg.transform()?;
        Ok(cfg)
    }

    /// The transform for these parameters, node-checked.
    pub fn transform(&self) -> Result<BssTransform> {
        let p = &self.params;
        if p.nu == 0.5 && 2.0 * p.k_a <= SQRT_PI * p.k_b.abs() {
            let err = Error::Singular {
                k_a: p.k_a,
                k_b: p.k_b,
            };
            return Err(config_error(params_field(&err), err));
        }
        let tr = BssTransform::new(*p).map_err(|e| config_error(params_field(&e), e))?;
        Ok(match self.perturbation {
            Some(q) => tr.with_scaled_amplitude(q.gamma_scale),
            None => tr,
        })
    }

    /// Times in increasing order without repeats.
    pub fn sorted_times(&self) -> Vec<f64> {
        let mut ts = self.times.clone();
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        ts
    }
}

fn tolerance_entries(t: &Tolerances) -> Vec<(String, f64)> {
    match serde_json::to_value(t) {
        Ok(serde_json::Value::Object(map)) => map
            .into_iter()
            .filter_map(|(k, v)| Some((k, v.as_f64()?)))
            .collect(),
        _ => Vec::new(),
    }
}

/// Parses and validates a JSON run configuration. A `figure_preset`
/// overrides `params` and `times`.
pub fn parse_config(document: &str) -> Result<RunConfig> {
    let de = &mut serde_json::Deserializer::from_str(document);
    let raw: RawConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::Config {
            field: if path == "." { "document".into() } else { path },
            reason: e.into_inner().to_string(),
        }
    })?;
    RunConfig::resolve(raw)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_pins_parameters() {
        let cfg = parse_config(r#"{"figure_preset":"fig1a"}"#).unwrap();
        assert_eq!(
            cfg.params,
            BssParams {
                c0: 1.0,
                c1: 10.0,
                c2: 0.0,
                k_a: 2.0,
                k_b: 5.0,
                nu: 2.0
            }
        );
        assert_eq!(cfg.times, vec![0.0, FRAC_PI_8, FRAC_PI_4]);
        assert_eq!(
            cfg.grid,
            GridSpec {
                x_min: -8.0,
                x_max: 8.0,
                n: 1601
            }
        );
        assert_eq!(cfg.tolerances, Tolerances::default());
        let lower = parse_config(r#"{"figure_preset":"fig2-lower","params":{"c0":1,"c1":0.5,"c2":0,"k_a":1,"k_b":0,"nu":0.5}}"#).unwrap();
        assert_eq!(lower.params.k_a, 1.3 * SQRT_PI);
    }

    #[test]
    fn errors_name_the_field() {
        let e = parse_config(r#"{"params":{"c0":1,"c1":0.5,"c2":0,"k_a":2,"k_b":5,"nu":2}}"#)
            .unwrap_err();
        assert!(
            matches!(&e, Error::Config { field, .. } if field == "params.c1"),
            "{e}"
        );
        let e = parse_config(r#"{"params":{"c0":1,"c1":10,"c2":0,"k_a":"two","k_b":5,"nu":2}}"#)
            .unwrap_err();
        assert!(
            matches!(&e, Error::Config { field, .. } if field == "params.k_a"),
            "{e}"
        );
        let e = parse_config(r#"{"figure_preset":"fig3"}"#).unwrap_err();
        assert!(
            matches!(&e, Error::Config { field, .. } if field == "figure_preset"),
            "{e}"
        );
        let e = parse_config(r#"{"figure_preset":"fig1a","tolerances":{"bogus":1}}"#).unwrap_err();
        assert!(
            matches!(&e, Error::Config { field, .. } if field == "tolerances.bogus"),
            "{e}"
        );
        let e = parse_config(r#"{"params":{"c0":1,"c1":10,"c2":0,"k_a":1,"k_b":2,"nu":0.5}}"#)
            .unwrap_err();
        assert!(
            matches!(&e, Error::Config { field, .. } if field == "params.k_b"),
            "{e}"
        );
        let e = parse_config(r#"{"params":{"c0":1,"c1":10,"c2":0,"k_a":1,"k_b":0,"nu":-1}}"#)
            .unwrap_err();
        assert!(e.to_string().contains("node"), "{e}");
        assert!(parse_config("{").is_err());
        assert!(parse_config(r#"{"figure_preset":"fig1a","propagation":{"dt":0.01}}"#).is_err());
    }

    #[test]
    fn defaults_fill_omissions() {
        let cfg = parse_config(r#"{"params":{"c0":1,"c1":1,"c2":0,"k_a":1,"k_b":0,"nu":0.5},"tolerances":{"norm":1e-7}}"#).unwrap();
        assert_eq!(cfg.grid, GridSpec::default());
        assert_eq!(cfg.tolerances.norm, 1e-7);
        assert_eq!(cfg.tolerances.separation, 1e-10);
        assert_eq!(cfg.outputs, PathBuf::from("out"));
        assert_eq!(cfg.fig2_labels, Fig2Labels::Ladder);
        assert_eq!(cfg.sorted_times(), vec![0.0, FRAC_PI_8, FRAC_PI_4]);
    }
}
