//! Equilibrium quantum resources of two Coulomb-coupled double quantum dots.
//!
//! Each double dot holds one electron that sits either in the left (`l`) or
//! right (`r`) dot, so the pair is a two-qubit system. The crate builds the
//! Hamiltonian, forms the Gibbs state at temperature `T` (with `k_B = ħ = 1`)
//! and evaluates l1-norm coherence (total, local, correlated) and Wootters
//! concurrence. The [`sweep`] module runs one-dimensional parameter scans and
//! locates the level crossing and the entanglement sudden-death temperature.
//!
//! All matrices are written in the local basis, in this fixed order:
//!
//! | index | state          |
//! |-------|----------------|
//! | 0     | `|l_A l_B⟩`    |
//! | 1     | `|l_A r_B⟩`    |
//! | 2     | `|r_A l_B⟩`    |
//! | 3     | `|r_A r_B⟩`    |
//!
//! `|l⟩` is the `+1` eigenstate of `σᶻ`.

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod error;
pub mod linalg;
pub mod model;
pub mod quantifiers;
pub mod sweep;

pub use error::{Error, Result};
pub use linalg::{EigenSystem4, SymMatrix2, SymMatrix4};
pub use model::{BasisLabel, ModelParams, PauliCoefficients, Subsystem, ThermalState};
pub use quantifiers::{CoherenceDecomposition, QuantifierRecord};
pub use sweep::{LevelCrossing, SweepResult, SweepSpec, SweepVariable};
