//! Discretisation diagnostic: compares `H = Q₀²` with the Pauli form
//! `(p − A)² − σ·B`, where `B = ∇×A` is taken by central differences of the
//! analytic potential.
//!
//! Expanding the square with `σ_j σ_k = δ_jk + i ε_jkl σ_l` gives
//! `Q₀² = Σ_k π_k² + i Σ_l σ_l [π_j, π_k]` (cyclic `j, k, l`, `π = p − A`),
//! so the difference is the spin-field operator
//! `H − H_pauli = Σ_l σ_l ⊗ (i [π_j, π_k] + B_l)`, which vanishes in the
//! continuum and is `O(h²)` on the lattice.

use num_complex::Complex64;

use super::kinetic_momenta;
use crate::field::{Axis, VectorPotentialSpec};
use crate::lattice::{Grid, GridEvalError, LatticeOperator, SpinMatrix};

fn cyclic(l: Axis) -> (Axis, Axis) {
    match l {
        Axis::X => (Axis::Y, Axis::Z),
        Axis::Y => (Axis::Z, Axis::X),
        Axis::Z => (Axis::X, Axis::Y),
    }
}

/// `B_l` at every grid point by central differences of `A` with the grid spacing.
fn curl_diagonals(g: &Grid, a: &VectorPotentialSpec) -> Result<[Vec<Complex64>; 3], GridEvalError> {
    let h = g.spacing();
    let eval = |component: Axis, p: [f64; 3]| {
        a.component(component).eval(p, &a.params).map_err(|source| GridEvalError {
            expr: a.component(component).to_string(),
            point: p,
            source,
        })
    };
    let derivative = |component: Axis, along: Axis, p: [f64; 3]| -> Result<f64, GridEvalError> {
        let k = along.index();
        let (mut fwd, mut bwd) = (p, p);
        fwd[k] += h[k];
        bwd[k] -= h[k];
        Ok((eval(component, fwd)? - eval(component, bwd)?) / (2.0 * h[k]))
    };
    let mut out: [Vec<Complex64>; 3] = Default::default();
    for l in Axis::ALL {
        let (j, k) = cyclic(l);
        let mut diag = Vec::with_capacity(g.orbital_dim());
        for o in 0..g.orbital_dim() {
            let p = g.position(o);
            // B_l = ∂_j A_k − ∂_k A_j
            let b = derivative(k, j, p)? - derivative(j, k, p)?;
            diag.push(Complex64::new(b, 0.0));
        }
        out[l.index()] = diag;
    }
    Ok(out)
}

/// `Σ_l σ_l ⊗ (i [π_j, π_k] + B_l)`, i.e. `Q₀² − H_pauli` assembled from its
/// spin-field part.
pub fn spin_field_residual(g: &Grid, a: &VectorPotentialSpec) -> Result<LatticeOperator, GridEvalError> {
    let pis = kinetic_momenta(g, a)?;
    let b = curl_diagonals(g, a)?;
    let i = Complex64::new(0.0, 1.0);
    let mut out = LatticeOperator::zeros(g.dim());
    for l in Axis::ALL {
        let (j, k) = cyclic(l);
        let comm = pis[j.index()].commutator(&pis[k.index()]).expect("same dimension");
        let orbital = comm
            .scale(i)
            .add(&LatticeOperator::from_diagonal(&b[l.index()]))
            .expect("same dimension");
        out = out
            .add(&LatticeOperator::spin_tensor(SpinMatrix::pauli(l), &orbital))
            .expect("same dimension");
    }
    Ok(out)
}

/// Independently assembled `Σ_k (p_k − A_k)² − σ·B`.
pub fn pauli_hamiltonian(g: &Grid, a: &VectorPotentialSpec) -> Result<LatticeOperator, GridEvalError> {
    let pis = kinetic_momenta(g, a)?;
    let b = curl_diagonals(g, a)?;
    let mut kinetic = LatticeOperator::zeros(g.orbital_dim());
    for pi in &pis {
        kinetic = kinetic.add(&pi.compose(pi).expect("same dimension")).expect("same dimension");
    }
    let mut h = LatticeOperator::spin_tensor(SpinMatrix::identity(), &kinetic);
    for l in Axis::ALL {
        let bl = LatticeOperator::from_diagonal(&b[l.index()]);
        h = h
            .sub(&LatticeOperator::spin_tensor(SpinMatrix::pauli(l), &bl))
            .expect("same dimension");
    }
    Ok(h.with_hermitian(true))
}

/// Gaussian `exp(−|x − c|²/(2w²))` times a fixed spinor, normalised to unit
/// Euclidean norm on the grid.
pub fn gaussian_state(g: &Grid, width: f64, center: [f64; 3], spinor: [Complex64; 2]) -> Vec<Complex64> {
    let d = g.orbital_dim();
    let mut psi = vec![Complex64::new(0.0, 0.0); g.dim()];
    for o in 0..d {
        let p = g.position(o);
        let r2: f64 = (0..3).map(|k| (p[k] - center[k]).powi(2)).sum();
        let amp = (-r2 / (2.0 * width * width)).exp();
        psi[o] = spinor[0] * amp;
        psi[d + o] = spinor[1] * amp;
    }
    let norm = psi.iter().fold(0.0, |s, v| s + v.norm_sqr()).sqrt();
    psi.iter_mut().for_each(|v| *v /= norm);
    psi
}

/// `‖(H − H_pauli) ψ‖₂`.
pub fn pauli_consistency_check(g: &Grid, a: &VectorPotentialSpec, state: &[Complex64]) -> Result<f64, GridEvalError> {
    let diff = spin_field_residual(g, a)?;
    Ok(diff.apply(state).iter().fold(0.0, |s, v| s + v.norm_sqr()).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::susy::{build_hamiltonian, build_q0};
    use std::collections::BTreeMap;

    fn spinor() -> [Complex64; 2] {
        let s = (1.0f64 + 0.5).sqrt();
        [Complex64::new(1.0 / s, 0.0), Complex64::new(0.5 / s, 0.5 / s)]
    }

    #[test]
    fn free_field_is_exactly_consistent() {
        let g = Grid::new([5, 5, 5], [0.3, 0.3, 0.3], Default::default()).unwrap();
        let psi = gaussian_state(&g, 0.5, [0.0; 3], spinor());
        assert_eq!(pauli_consistency_check(&g, &VectorPotentialSpec::zero("free"), &psi).unwrap(), 0.0);
    }

    #[test]
    fn constant_potential_is_exactly_consistent() {
        let g = Grid::new([5, 5, 5], [0.3, 0.3, 0.3], Default::default()).unwrap();
        let a = VectorPotentialSpec::parse("const", ["0", "0", "1"], BTreeMap::new()).unwrap();
        let psi = gaussian_state(&g, 0.5, [0.0; 3], spinor());
        assert_eq!(pauli_consistency_check(&g, &a, &psi).unwrap(), 0.0);
    }

    #[test]
    fn spin_field_part_equals_difference_of_hamiltonians() {
        let g = Grid::new([5, 3, 5], [0.4, 0.6, 0.5], Default::default()).unwrap();
        let a = VectorPotentialSpec::parse("t", ["-y*exp(-x^2)", "x*z", "sin(y)"], BTreeMap::new()).unwrap();
        let h = build_hamiltonian(&build_q0(&g, &a).unwrap());
        let direct = h.sub(&pauli_hamiltonian(&g, &a).unwrap()).unwrap();
        let via_identity = spin_field_residual(&g, &a).unwrap();
        let gap = direct.sub(&via_identity).unwrap().max_abs_entry();
        assert!(gap <= 1e-13 * h.max_abs_entry(), "gap {gap}");
    }

    #[test]
    fn gaussian_is_normalised() {
        let g = Grid::cubic(7, 0.5).unwrap();
        let psi = gaussian_state(&g, 0.4, [0.1, 0.0, -0.2], spinor());
        let n: f64 = psi.iter().map(|v| v.norm_sqr()).sum();
        assert!((n - 1.0).abs() < 1e-14);
    }
}
