//! The time-dependent Darboux transformation: constants, time coefficients,
//! the transformation function `u`, `β` and the deformed potential `V₁`.
//!
//! [`BssTransform`] bundles a validated parameter set; the free functions
//! below are one-shot conveniences that revalidate on every call.

mod kernel;
mod params;
pub mod profile;
mod time;

use num_complex::Complex64;

use crate::error::Result;

pub use kernel::{
    node_check, BssTransform, LogComplex, NodeCheck, WCombo, DEFAULT_NODE_SAMPLES,
    DEFAULT_NODE_Z_MAX, NODE_RELATIVE_FLOOR,
};
pub use params::{derive_constants, BssParams, DerivedConstants};
pub use time::{SeparationResiduals, TimeDerivatives, TimeFactors};

pub fn time_factors(p: &BssParams, t: f64) -> Result<TimeFactors> {
    Ok(BssTransform::without_node_check(*p)?.time_factors(t))
}

pub fn w_combo(p: &BssParams, z: f64) -> Result<WCombo> {
    BssTransform::without_node_check(*p)?.w_combo(z)
}

pub fn transformation_u(p: &BssParams, x: f64, t: f64) -> Result<LogComplex> {
    BssTransform::without_node_check(*p)?.transformation_u(x, t)
}

pub fn beta_fn(p: &BssParams, x: f64, t: f64) -> Result<Complex64> {
    BssTransform::without_node_check(*p)?.beta(x, t)
}

pub fn potential_v1(p: &BssParams, x: f64, t: f64) -> Result<f64> {
    BssTransform::without_node_check(*p)?.potential_v1(x, t)
}

pub fn mielnik_potential(p: &BssParams, x: f64, t: f64) -> Result<f64> {
    BssTransform::without_node_check(*p)?.mielnik_potential(x, t)
}

pub fn separation_residuals(p: &BssParams, t: f64) -> Result<SeparationResiduals> {
    Ok(BssTransform::without_node_check(*p)?.separation_residuals(t))
}
