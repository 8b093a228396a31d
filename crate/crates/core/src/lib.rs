//! Numerical laboratory for classical limits and spontaneous symmetry
//! breaking in three exactly solvable quantum models: the one-dimensional
//! double well, the quantum Curie-Weiss spin model and the two-site
//! Bose-Hubbard model.
//!
//! The crate is organised bottom-up:
//!
//! - [`linalg`]: symmetric eigensolvers (Sturm bisection, inverse iteration,
//!   cyclic Jacobi) and operator norms.
//! - [`models`]: matrix Hamiltonians and symmetry-breaking perturbations.
//! - [`tensor`]: exact small-N tensor products, symmetrizers and the
//!   Bloch-ball quantization maps.
//! - [`quantize`]: coherent states, sphere quadrature, Berezin matrices and
//!   Husimi expectations.
//! - [`classical`]: classical Hamiltonians, minima, symmetry actions and the
//!   symmetry-breaking verdict.
//! - [`experiments`]: limit sweeps, extrapolation, flea scans and the
//!   acceptance harness.
//! - [`cli`]: configuration parsing, subcommands and report emission.

pub mod classical;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod models;
pub mod par;
pub mod quantize;
pub mod tensor;

pub use error::{Error, Result};
pub use par::Execution;
