//! Lattice construction and numerical certification of extended
//! supersymmetry for the Pauli Hamiltonian.
//!
//! The pipeline is:
//!
//! 1. [`field`]: parse the vector-potential components, evaluate them and
//!    classify their parity under coordinate reflections, which predicts the
//!    admissible involutions `σ_k ⊗ I_k`.
//! 2. [`lattice`]: spin ⊗ grid Hilbert space, central-difference momenta,
//!    multiplication operators and the orbital reflection / π-rotation
//!    permutations, together with exact sparse operator arithmetic.
//! 3. [`susy`]: `Q₀ = σ·(p − A)`, `H = Q₀²`, candidate involutions
//!    `T = σ_i ⊗ G`, admissibility, the maximal Clifford-compatible set,
//!    the supercharges `Q_j = i T_j Q₀` and the superalgebra check.
//! 4. [`spectral`]: dense Hermitian spectra, degeneracy clustering and the
//!    `2^[N/2]` divisibility law on non-zero levels.
//! 5. [`catalog`]: the free, solenoid, wire and octopole field configurations.
//! 6. [`report`]: run configuration, the `analyze` / `verify` / `spectrum`
//!    drivers and deterministic JSON output used by the CLI.
//!
//! Units are fixed to `ħ = 1`, `e/c = 1`, `2m = 1`, `g = 2`, so that
//! `Q₀ = Σ_i σ_i ⊗ (p_i − A_i)` carries no prefactor.

pub mod catalog;
pub mod field;
pub mod lattice;
pub mod report;
pub mod spectral;
pub mod susy;

pub use catalog::{builtin, NamedField};
pub use field::{parse, Expr, ParitySignature, Sampler, Verdict, VectorPotentialSpec};
pub use lattice::{Boundary, Grid, LatticeOperator, OrbitalSymmetry, SpinMatrix};
pub use report::RunConfig;
pub use spectral::SpectrumReport;
pub use susy::{certify, AlgebraReport, CandidateT, Certification, SuperchargeSet};


