//! Independent verification machinery: extended-precision references,
//! finite-difference residuals of the Schrödinger operators, and a
//! split-step spectral propagator.

pub mod fd;
pub mod propagator;
pub mod reference;

pub use fd::{
    d_t, d_x, d_xx, fd_tdse_residual, intertwining_residual, FdSteps, IntertwiningResidual,
    NestedSteps, TimeStencil,
};
pub use propagator::{
    l2_relative_error, split_step_evolve, DeformedPotential, Harmonic, PeriodicGrid,
    PotentialSampler, Propagation,
};
