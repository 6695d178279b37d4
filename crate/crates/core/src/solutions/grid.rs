//! Uniform grids and fields sampled on them.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transform::BssTransform;

use super::states::StateKind;

pub const MIN_GRID_POINTS: usize = 8;

/// `n` points from `x_min` to `x_max` inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            x_min: -8.0,
            x_max: 8.0,
            n: 1601,
        }
    }
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        let g = Self { x_min, x_max, n };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < MIN_GRID_POINTS {
            return Err(Error::DegenerateGrid(format!(
                "need at least {MIN_GRID_POINTS} points, got {}",
                self.n
            )));
        }
        if !(self.x_min.is_finite() && self.x_max.is_finite() && self.x_max > self.x_min) {
            return Err(Error::DegenerateGrid(format!(
                "need x_min < x_max, got [{}, {}]",
                self.x_min, self.x_max
            )));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n - 1) as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x_min + self.dx() * j as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|j| self.x(j))
    }
}

/// Values on `x_j = x0 + j dx` at one time `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridField<T> {
    pub x0: f64,
    pub dx: f64,
    pub t: f64,
    pub values: Vec<T>,
}

impl<T> GridField<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x0 + self.dx * j as f64
    }

    pub fn spec(&self) -> GridSpec {
        GridSpec {
            x_min: self.x0,
            x_max: self.x(self.len().saturating_sub(1)),
            n: self.len(),
        }
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> GridField<U> {
        GridField {
            x0: self.x0,
            dx: self.dx,
            t: self.t,
            values: self.values.iter().map(f).collect(),
        }
    }
}

impl GridField<Complex64> {
    pub fn abs2(&self) -> GridField<f64> {
        self.map(|v| v.norm_sqr())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest edge magnitude relative to the field maximum.
    pub fn edge_ratio(&self) -> f64 {
        let max = self.max_abs();
        let edge = self.values[0]
            .norm()
            .max(self.values[self.len() - 1].norm());
        if max == 0.0 {
            0.0
        } else {
            edge / max
        }
    }
}

/// Evaluates `f` at every grid point in parallel. Each value depends only
/// on its own `x`, so the result is the same for any partitioning.
fn fill<T: Send>(grid: &GridSpec, f: impl Fn(f64) -> Result<T> + Sync) -> Result<Vec<T>> {
    grid.validate()?;
    (0..grid.n).into_par_iter().map(|j| f(grid.x(j))).collect()
}

pub fn grid_eval_state(
    transform: &BssTransform,
    kind: StateKind,
    grid: &GridSpec,
    t: f64,
) -> Result<GridField<Complex64>> {
    let f = transform.time_factors(t);
    let values = fill(grid, |x| kind.eval_with(transform, &f, x))?;
    Ok(GridField {
        x0: grid.x_min,
        dx: grid.dx(),
        t,
        values,
    })
}

pub fn grid_eval_potential(
    transform: &BssTransform,
    grid: &GridSpec,
    t: f64,
) -> Result<GridField<f64>> {
    let values = fill(grid, |x| transform.potential_v1(x, t))?;
    Ok(GridField {
        x0: grid.x_min,
        dx: grid.dx(),
        t,
        values,
    })
}
