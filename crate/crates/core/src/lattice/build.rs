//! Constructors for the physical operators on a [`Grid`].

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use super::grid::Grid;
use super::operator::LatticeOperator;
use super::spin::SpinMatrix;
use crate::field::{Axis, EvalError, Expr};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("cannot evaluate `{expr}` at grid point ({}, {}, {}): {source}", point[0], point[1], point[2])]
pub struct GridEvalError {
    pub expr: String,
    pub point: [f64; 3],
    #[source]
    pub source: EvalError,
}

/// Coordinate-axis isometries `G` with `G² = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum OrbitalSymmetry {
    /// `x_k ↦ −x_k`.
    Reflection(Axis),
    /// Rotation by π about axis `k`: the two transverse coordinates flip.
    RotationPi(Axis),
    /// `x ↦ −x`.
    FullInversion,
}

impl OrbitalSymmetry {
    pub const ALL: [OrbitalSymmetry; 7] = [
        OrbitalSymmetry::Reflection(Axis::X),
        OrbitalSymmetry::Reflection(Axis::Y),
        OrbitalSymmetry::Reflection(Axis::Z),
        OrbitalSymmetry::RotationPi(Axis::X),
        OrbitalSymmetry::RotationPi(Axis::Y),
        OrbitalSymmetry::RotationPi(Axis::Z),
        OrbitalSymmetry::FullInversion,
    ];

    /// Which coordinates change sign.
    pub fn negated(self) -> [bool; 3] {
        match self {
            OrbitalSymmetry::Reflection(k) => std::array::from_fn(|i| i == k.index()),
            OrbitalSymmetry::RotationPi(k) => std::array::from_fn(|i| i != k.index()),
            OrbitalSymmetry::FullInversion => [true; 3],
        }
    }

    pub fn name(self) -> String {
        match self {
            OrbitalSymmetry::Reflection(k) => format!("I_{k}"),
            OrbitalSymmetry::RotationPi(k) => format!("R_{k}(pi)"),
            OrbitalSymmetry::FullInversion => "I".to_string(),
        }
    }

    /// Family rank used for ordering: reflections, then rotations, then inversion.
    pub fn family_rank(self) -> u8 {
        match self {
            OrbitalSymmetry::Reflection(_) => 0,
            OrbitalSymmetry::RotationPi(_) => 1,
            OrbitalSymmetry::FullInversion => 2,
        }
    }

    pub fn axis_rank(self) -> usize {
        match self {
            OrbitalSymmetry::Reflection(k) | OrbitalSymmetry::RotationPi(k) => k.index(),
            OrbitalSymmetry::FullInversion => 3,
        }
    }
}

fn real(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// Central-difference momentum on the orbital factor, `D × D`.
pub fn orbital_momentum(g: &Grid, axis: Axis) -> LatticeOperator {
    let h = g.spacing()[axis.index()];
    let w = Complex64::new(0.0, 1.0 / (2.0 * h));
    let d = g.orbital_dim();
    let mut trip = Vec::with_capacity(2 * d);
    for o in 0..d {
        if let Some(f) = g.neighbour(o, axis, true) {
            trip.push((o, f, -w));
        }
        if let Some(b) = g.neighbour(o, axis, false) {
            trip.push((o, b, w));
        }
    }
    LatticeOperator::from_triplets(d, trip).with_hermitian(true)
}

/// Diagonal orbital operator with entries `e(x_n)`; parameters are taken from `params`.
pub fn orbital_multiplication(
    g: &Grid,
    e: &Expr,
    params: &BTreeMap<String, f64>,
) -> Result<LatticeOperator, GridEvalError> {
    let d = g.orbital_dim();
    let mut diag = Vec::with_capacity(d);
    for o in 0..d {
        let p = g.position(o);
        let v = e.eval(p, params).map_err(|source| GridEvalError {
            expr: e.to_string(),
            point: p,
            source,
        })?;
        diag.push(real(v));
    }
    Ok(LatticeOperator::from_diagonal(&diag).with_hermitian(true))
}

/// Permutation matrix of the point map `x ↦ G x` on the orbital factor.
pub fn orbital_symmetry(g: &Grid, kind: OrbitalSymmetry) -> LatticeOperator {
    let flip = kind.negated();
    let m = g.points();
    let d = g.orbital_dim();
    let trip = (0..d).map(|o| {
        let s = g.site(o);
        let image: [usize; 3] = std::array::from_fn(|k| if flip[k] { m[k] - 1 - s[k] } else { s[k] });
        (g.orbital_index(image), o, real(1.0))
    });
    LatticeOperator::from_triplets(d, trip)
        .with_hermitian(true)
        .with_signed_permutation(true)
}

/// `p_k = −i(S₊ − S₋)/(2h_k)` tensored with the spin identity.
pub fn momentum_op(g: &Grid, axis: Axis) -> LatticeOperator {
    LatticeOperator::spin_tensor(SpinMatrix::identity(), &orbital_momentum(g, axis))
}

/// Multiplication by `e` at every grid point, tensored with the spin identity.
pub fn multiplication_op(
    g: &Grid,
    e: &Expr,
    params: &BTreeMap<String, f64>,
) -> Result<LatticeOperator, GridEvalError> {
    Ok(LatticeOperator::spin_tensor(SpinMatrix::identity(), &orbital_multiplication(g, e, params)?))
}

/// Orbital permutation tensored with the spin identity.
pub fn symmetry_op(g: &Grid, kind: OrbitalSymmetry) -> LatticeOperator {
    LatticeOperator::spin_tensor(SpinMatrix::identity(), &orbital_symmetry(g, kind))
}

/// `s ⊗ 1_orbital`.
pub fn embed_spin(s: SpinMatrix, g: &Grid) -> LatticeOperator {
    LatticeOperator::spin_tensor(s, &LatticeOperator::identity(g.orbital_dim()))
}
