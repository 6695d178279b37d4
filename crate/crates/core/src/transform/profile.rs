//! `(ln w)''` tabulated once on a uniform `z` grid, so that `V₁` can be
//! evaluated millions of times without fresh ₁F₁ calls.
//!
//! `V₁(x, t) = x² + 2b² - 2b² h(b x)` depends on `t` only through `b(t)`,
//! so a single table serves every time step.

use crate::error::{Error, Result};

use super::kernel::{w_combo_unchecked, BssTransform};

/// Interpolation stencil width; the error is `O(dz^STENCIL)`.
const STENCIL: usize = 8;
/// `1 / Π_{m≠j}(j - m) = (-1)^(7-j) / (j! (7-j)!)` for the nodes `0..8`.
const LAGRANGE_DENOMINATORS: [f64; STENCIL] = [
    -1.0 / 5040.0,
    1.0 / 720.0,
    -1.0 / 240.0,
    1.0 / 144.0,
    -1.0 / 144.0,
    1.0 / 240.0,
    -1.0 / 720.0,
    1.0 / 5040.0,
];

#[derive(Clone, Debug)]
pub struct LogProfile {
    z_min: f64,
    dz: f64,
    values: Vec<f64>,
}

impl LogProfile {
    /// Tabulates `h(z) = (ln w)''(z)` on `[-z_max, z_max]` with spacing at most `dz`.
    pub fn new(transform: &BssTransform, z_max: f64, dz: f64) -> Result<Self> {
        if !(z_max > 0.0 && dz > 0.0 && z_max.is_finite()) {
            return Err(Error::DegenerateGrid(format!(
                "profile needs z_max > 0 and dz > 0, got {z_max}, {dz}"
            )));
        }
        let half = (z_max / dz).ceil() as usize + STENCIL;
        let dz = (z_max / (half - STENCIL) as f64).min(dz);
        let z_min = -dz * half as f64;
        let nu = transform.params().nu;
        let values = (0..=2 * half)
            .map(|i| {
                let z = z_min + dz * i as f64;
                Ok(w_combo_unchecked(transform.params(), z)?.log_second_derivative(nu))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { z_min, dz, values })
    }

    /// Largest `|z|` that can be interpolated with a full stencil.
    pub fn z_max(&self) -> f64 {
        -self.z_min - (STENCIL / 2) as f64 * self.dz
    }

    /// `h(z)` by centred Lagrange interpolation; `None` outside the table.
    pub fn eval(&self, z: f64) -> Option<f64> {
        let pos = (z - self.z_min) / self.dz;
        let base = pos.floor() as isize - (STENCIL / 2 - 1) as isize;
        if base < 0 || base as usize + STENCIL > self.values.len() {
            return None;
        }
        let base = base as usize;
        let u = pos - base as f64;
        // weight_j = Π_{m≠j}(u - m) / Π_{m≠j}(j - m), built from prefix and suffix products
        let mut prefix = [1.0; STENCIL];
        for m in 1..STENCIL {
            prefix[m] = prefix[m - 1] * (u - (m - 1) as f64);
        }
        let mut suffix = 1.0;
        let mut total = 0.0;
        for j in (0..STENCIL).rev() {
            total += prefix[j] * suffix * LAGRANGE_DENOMINATORS[j] * self.values[base + j];
            suffix *= u - j as f64;
        }
        Some(total)
    }

    pub fn potential(&self, b: f64, x: f64) -> Option<f64> {
        let b2 = b * b;
        Some(x * x + 2.0 * b2 - 2.0 * b2 * self.eval(b * x)?)
    }
}
