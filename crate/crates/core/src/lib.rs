//! Collective dynamics of two two-level atoms coupled through vacuum, squeezed-vacuum
//! and bad-cavity reservoirs.
//!
//! Rates are in units of the single-atom decay rate Γ₁, times in 1/Γ₁ and distances
//! in wavelengths.

pub mod cli_runner;
pub mod collective_basis;
pub mod coupling_geometry;
pub mod error;
pub mod linalg;
pub mod liouvillian;
pub mod observables;
pub mod oracles;
pub mod quantum_jump;

pub use error::{Error, Result};
