//! Special functions needed by the transformation: ₁F₁ with half-integer
//! second parameter, erf, Hermite polynomials, and the log-scaled number
//! type they share.

pub mod erf;
mod gamma;
pub mod hermite;
pub mod hyp1f1;
pub mod log_scaled;

pub use erf::{erf, erfc};
pub(crate) use gamma::gamma;
pub use hermite::hermite;
pub(crate) use hyp1f1::hyp1f1_exp_scaled;
pub use hyp1f1::{hyp1f1, hyp1f1_dw};
pub use log_scaled::{LogScaledValue, Sign};

pub const SQRT_PI: f64 = 1.772_453_850_905_516_f64;
