//! The spin ⊗ grid Hilbert space and its operators.

mod build;
mod grid;
mod operator;
mod spin;

pub use build::{
    embed_spin, momentum_op, multiplication_op, orbital_momentum, orbital_multiplication,
    orbital_symmetry, symmetry_op, GridEvalError, OrbitalSymmetry,
};
pub use grid::{Boundary, Grid, GridError};
pub use operator::{LatticeOperator, OperatorError};
pub use spin::{levi_civita, SpinMatrix};
