//! Solutions of the deformed equation sampled on grids: the oscillator
//! states, their intertwined images, the missing state, and tools to
//! measure them.

pub mod analysis;
pub mod grid;
pub mod states;

pub use analysis::{norm_l2, simpson, zero_census, ZeroCensus, DEFAULT_ZERO_THRESHOLD};
pub use grid::{grid_eval_potential, grid_eval_state, GridField, GridSpec};
pub use states::{intertwined, missing_state, phi, phi_dx, psi, StateKind, MAX_PHI_INDEX};
