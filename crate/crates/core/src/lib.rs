//! Time-dependent Darboux deformations of the harmonic oscillator.

pub mod cli;
pub mod error;
pub mod oracles;
pub mod solutions;
pub mod special;
pub mod transform;
pub mod validation;

pub use error::{Error, Result};
