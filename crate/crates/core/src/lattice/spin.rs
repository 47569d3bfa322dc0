use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::field::Axis;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// 2×2 complex matrix acting on the spin factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinMatrix(pub [[Complex64; 2]; 2]);

impl SpinMatrix {
    pub fn identity() -> SpinMatrix {
        SpinMatrix([[ONE, ZERO], [ZERO, ONE]])
    }

    pub fn zero() -> SpinMatrix {
        SpinMatrix([[ZERO; 2]; 2])
    }

    /// Standard Pauli matrix `σ_x`, `σ_y` or `σ_z`.
    pub fn pauli(axis: Axis) -> SpinMatrix {
        match axis {
            Axis::X => SpinMatrix([[ZERO, ONE], [ONE, ZERO]]),
            Axis::Y => SpinMatrix([[ZERO, -I], [I, ZERO]]),
            Axis::Z => SpinMatrix([[ONE, ZERO], [ZERO, -ONE]]),
        }
    }

    pub fn scale(self, c: Complex64) -> SpinMatrix {
        SpinMatrix(self.0.map(|row| row.map(|v| v * c)))
    }

    pub fn adjoint(self) -> SpinMatrix {
        let m = self.0;
        SpinMatrix([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn trace(self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn max_abs(self) -> f64 {
        self.0.iter().flatten().fold(0.0, |m, v| m.max(v.norm()))
    }
}

impl Mul for SpinMatrix {
    type Output = SpinMatrix;

    fn mul(self, rhs: SpinMatrix) -> SpinMatrix {
        let (a, b) = (self.0, rhs.0);
        SpinMatrix(std::array::from_fn(|i| {
            std::array::from_fn(|j| a[i][0] * b[0][j] + a[i][1] * b[1][j])
        }))
    }
}

impl Add for SpinMatrix {
    type Output = SpinMatrix;

    fn add(self, rhs: SpinMatrix) -> SpinMatrix {
        SpinMatrix(std::array::from_fn(|i| std::array::from_fn(|j| self.0[i][j] + rhs.0[i][j])))
    }
}

impl Sub for SpinMatrix {
    type Output = SpinMatrix;

    fn sub(self, rhs: SpinMatrix) -> SpinMatrix {
        SpinMatrix(std::array::from_fn(|i| std::array::from_fn(|j| self.0[i][j] - rhs.0[i][j])))
    }
}

impl Neg for SpinMatrix {
    type Output = SpinMatrix;

    fn neg(self) -> SpinMatrix {
        self.scale(-ONE)
    }
}

/// Levi-Civita symbol on axis indices.
pub fn levi_civita(i: Axis, j: Axis, k: Axis) -> f64 {
    match (i.index(), j.index(), k.index()) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}
