//! Supercharge construction and superalgebra certification.
//!
//! `Q₀ = Σ_k σ_k ⊗ (p_k − A_k)` and `H = Q₀²` (the matrix square, never an
//! independent discretisation). An involution `T` with `{T, Q₀} = 0` yields a
//! new supercharge `Q = i T Q₀`; mutually anticommuting involutions yield an
//! `N = n + 1` extended algebra `{Q_i, Q_j} = 2 δ_ij H`.

mod candidates;
mod consistency;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::field::{Axis, VectorPotentialSpec};
use crate::lattice::{
    orbital_momentum, orbital_multiplication, Grid, GridEvalError, LatticeOperator, SpinMatrix,
};

pub use candidates::{
    admissibility, enumerate_candidates, max_compatible_set, screen_candidates, Admissibility,
    CandidateT,
};
pub use consistency::{gaussian_state, pauli_consistency_check, pauli_hamiltonian, spin_field_residual};

/// Relative Frobenius tolerance for `{T, Q₀} = 0` and pairwise `{T, T'} = 0`.
pub const DEFAULT_ADMISSIBILITY_TOL: f64 = 1e-10;
/// Relative tolerance for the superalgebra relations.
pub const DEFAULT_ALGEBRA_TOL: f64 = 1e-12;
/// Relative residuals cannot be resolved below unit roundoff; a tolerance
/// tighter than this never certifies.
pub const RESOLUTION_FLOOR: f64 = f64::EPSILON;

#[derive(Debug, Error)]
pub enum SusyError {
    #[error(transparent)]
    Potential(#[from] GridEvalError),
}

/// Orbital `p_k − A_k` for each axis.
pub(crate) fn kinetic_momenta(g: &Grid, a: &VectorPotentialSpec) -> Result<[LatticeOperator; 3], GridEvalError> {
    let mut out = Vec::with_capacity(3);
    for k in Axis::ALL {
        let p = orbital_momentum(g, k);
        let component = a.component(k);
        let pi = if component.is_zero_literal() {
            p
        } else {
            let ak = orbital_multiplication(g, component, &a.params)?;
            p.sub(&ak).expect("orbital operators share a dimension")
        };
        out.push(pi.with_hermitian(true));
    }
    Ok(out.try_into().expect("three axes"))
}

/// `Q₀ = Σ_k σ_k ⊗ (p_k − A_k)`.
pub fn build_q0(g: &Grid, a: &VectorPotentialSpec) -> Result<LatticeOperator, SusyError> {
    let pis = kinetic_momenta(g, a)?;
    let mut q0 = LatticeOperator::zeros(g.dim());
    for (k, pi) in Axis::ALL.into_iter().zip(&pis) {
        let term = LatticeOperator::spin_tensor(SpinMatrix::pauli(k), pi);
        q0 = q0.add(&term).expect("same dimension");
    }
    Ok(q0.with_hermitian(true))
}

/// `H = Q₀ · Q₀`.
pub fn build_hamiltonian(q0: &LatticeOperator) -> LatticeOperator {
    q0.compose(q0).expect("square operator").with_hermitian(q0.is_hermitian())
}

fn relative(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        num
    }
}

/// `Q₀`, the admitted involutions, the extra supercharges and `H`.
#[derive(Debug, Clone)]
pub struct SuperchargeSet {
    pub q0: LatticeOperator,
    pub ts: Vec<CandidateT>,
    /// `qs[j] = i · ts[j] · Q₀`.
    pub qs: Vec<LatticeOperator>,
    pub hamiltonian: LatticeOperator,
    /// `max |Q_j − Q_j†|` for every `Q_j` in `qs`.
    pub hermiticity_residuals: Vec<f64>,
}

impl SuperchargeSet {
    /// Number of supercharges including `Q₀`.
    pub fn n(&self) -> usize {
        self.qs.len() + 1
    }

    /// `Q₀, Q₁, …` in order.
    pub fn supercharges(&self) -> impl Iterator<Item = &LatticeOperator> {
        std::iter::once(&self.q0).chain(self.qs.iter())
    }
}

pub fn assemble_supercharges(q0: &LatticeOperator, ts: Vec<CandidateT>) -> SuperchargeSet {
    let i = Complex64::new(0.0, 1.0);
    let q0_norm = q0.frobenius_norm();
    let mut qs = Vec::with_capacity(ts.len());
    let mut hermiticity_residuals = Vec::with_capacity(ts.len());
    for t in &ts {
        let q = t.op.compose(q0).expect("same dimension").scale(i);
        let res = q.hermiticity_residual();
        let hermitian = res <= 1e-12 * q0_norm;
        hermiticity_residuals.push(res);
        qs.push(q.with_hermitian(hermitian));
    }
    SuperchargeSet {
        q0: q0.clone(),
        ts,
        qs,
        hamiltonian: build_hamiltonian(q0),
        hermiticity_residuals,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TResidual {
    pub spin: usize,
    pub orbital: String,
    /// `‖{T, Q₀}‖ / ‖Q₀‖`.
    pub residual_q0: f64,
    /// `‖T² − 1‖ / ‖1‖`.
    pub residual_involution: f64,
    /// `‖[H, T]‖ / ‖H‖`.
    pub residual_h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairResidual {
    pub i: usize,
    pub j: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommutatorResidual {
    pub i: usize,
    pub residual: f64,
}

/// Residuals of every relation in the extended superalgebra.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgebraReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub ts: Vec<TResidual>,
    /// `‖{Q_i, Q_j} − 2 δ_ij H‖ / ‖H‖` for `0 ≤ i ≤ j < N`.
    pub pairs: Vec<PairResidual>,
    /// `‖{T_i, T_j}‖ / ‖1‖` for `i < j` (indices into `ts`, starting at 1).
    pub t_pairs: Vec<PairResidual>,
    /// `‖[H, Q_i]‖ / ‖H‖`.
    pub commutators: Vec<CommutatorResidual>,
    pub pass: bool,
    pub tol: f64,
}

impl AlgebraReport {
    pub fn max_residual(&self) -> f64 {
        let ts = self
            .ts
            .iter()
            .flat_map(|t| [t.residual_q0, t.residual_involution, t.residual_h]);
        let pairs = self.pairs.iter().chain(&self.t_pairs).map(|p| p.residual);
        let comms = self.commutators.iter().map(|c| c.residual);
        ts.chain(pairs).chain(comms).fold(0.0, f64::max)
    }
}

pub fn verify_superalgebra(s: &SuperchargeSet, tol: f64) -> AlgebraReport {
    let dim = s.q0.dim();
    let id = LatticeOperator::identity(dim);
    let id_norm = (dim as f64).sqrt();
    let h = &s.hamiltonian;
    let h_norm = h.frobenius_norm();
    let q0_norm = s.q0.frobenius_norm();

    let ts = s
        .ts
        .iter()
        .map(|t| {
            let anti = t.op.anticommutator(&s.q0).expect("same dimension");
            let square = t.op.compose(&t.op).expect("same dimension").sub(&id).expect("same dimension");
            let comm = h.commutator(&t.op).expect("same dimension");
            TResidual {
                spin: t.spin.index() + 1,
                orbital: t.orbital.name(),
                residual_q0: relative(anti.frobenius_norm(), q0_norm),
                residual_involution: square.frobenius_norm() / id_norm,
                residual_h: relative(comm.frobenius_norm(), h_norm),
            }
        })
        .collect();

    let charges: Vec<&LatticeOperator> = s.supercharges().collect();
    let mut pairs = Vec::new();
    for i in 0..charges.len() {
        for j in i..charges.len() {
            let mut anti = charges[i].anticommutator(charges[j]).expect("same dimension");
            if i == j {
                anti = anti.sub(&h.scale_real(2.0)).expect("same dimension");
            }
            pairs.push(PairResidual {
                i,
                j,
                residual: relative(anti.frobenius_norm(), h_norm),
            });
        }
    }

    let mut t_pairs = Vec::new();
    for i in 0..s.ts.len() {
        for j in i + 1..s.ts.len() {
            let anti = s.ts[i].op.anticommutator(&s.ts[j].op).expect("same dimension");
            t_pairs.push(PairResidual {
                i: i + 1,
                j: j + 1,
                residual: anti.frobenius_norm() / id_norm,
            });
        }
    }

    let commutators = charges
        .iter()
        .enumerate()
        .map(|(i, q)| CommutatorResidual {
            i,
            residual: relative(h.commutator(q).expect("same dimension").frobenius_norm(), h_norm),
        })
        .collect();

    let mut report = AlgebraReport {
        n: s.n(),
        ts,
        pairs,
        t_pairs,
        commutators,
        pass: false,
        tol,
    };
    report.pass = tol >= RESOLUTION_FLOOR && report.max_residual() <= tol;
    report
}

/// Everything `certify` produced along the way.
#[derive(Debug, Clone)]
pub struct Certification {
    /// All 21 candidates in enumeration order, with `q0_residual` filled in.
    pub candidates: Vec<CandidateT>,
    pub set: SuperchargeSet,
    pub report: AlgebraReport,
    pub admissibility_tol: f64,
}

impl Certification {
    pub fn is_admissible(&self, c: &CandidateT) -> bool {
        c.q0_residual.is_some_and(|r| r <= self.admissibility_tol)
    }
}

/// Full lattice pipeline: build `Q₀`, screen every candidate, keep the
/// largest anticommuting admissible family, assemble and verify.
pub fn certify(
    g: &Grid,
    a: &VectorPotentialSpec,
    admissibility_tol: f64,
    algebra_tol: f64,
) -> Result<Certification, SusyError> {
    let q0 = build_q0(g, a)?;
    let candidates = screen_candidates(enumerate_candidates(g), &q0);
    let admissible: Vec<CandidateT> = candidates
        .iter()
        .filter(|c| c.q0_residual.is_some_and(|r| r <= admissibility_tol))
        .cloned()
        .collect();
    let ts = max_compatible_set(&admissible, admissibility_tol);
    let set = assemble_supercharges(&q0, ts);
    let report = verify_superalgebra(&set, algebra_tol);
    Ok(Certification {
        candidates,
        set,
        report,
        admissibility_tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{momentum_op, multiplication_op, Boundary};
    use std::collections::BTreeMap;

    fn grid3() -> Grid {
        Grid::cubic(3, 1.0).unwrap()
    }

    #[test]
    fn free_q0_is_sigma_dot_p() {
        let g = Grid::new([3, 5, 3], [0.7, 0.4, 1.1], Boundary::Dirichlet).unwrap();
        let q0 = build_q0(&g, &VectorPotentialSpec::zero("free")).unwrap();
        assert_eq!(q0.hermiticity_residual(), 0.0);
        let mut direct = LatticeOperator::zeros(g.dim());
        for k in Axis::ALL {
            let t = LatticeOperator::spin_tensor(SpinMatrix::pauli(k), &orbital_momentum(&g, k));
            direct = direct.add(&t).unwrap();
        }
        assert_eq!(q0, direct);
    }

    #[test]
    fn q0_frobenius_norm_splits_over_axes() {
        // ‖Q₀‖² = 2 Σ_k ‖p_k − A_k‖² because the σ_k are trace-orthogonal
        let a = VectorPotentialSpec::parse("t", ["y*z", "x^2 - z", "sin(x*y)"], BTreeMap::new()).unwrap();
        let g = grid3();
        let q0 = build_q0(&g, &a).unwrap();
        let mut expected = 0.0;
        for k in Axis::ALL {
            let pk = orbital_momentum(&g, k).to_dense();
            let ak = orbital_multiplication(&g, a.component(k), &a.params).unwrap().to_dense();
            expected += 2.0 * (pk - ak).norm_squared();
        }
        let got = q0.frobenius_norm().powi(2);
        assert!((got - expected).abs() <= 1e-13 * expected, "{got} vs {expected}");
    }

    #[test]
    fn wire_on_axis_is_a_domain_error() {
        let a = VectorPotentialSpec::parse("wire", ["0", "0", "-ln(x^2+y^2)"], BTreeMap::new()).unwrap();
        let g = Grid::cubic(5, 0.5).unwrap();
        assert!(matches!(build_q0(&g, &a), Err(SusyError::Potential(_))));
    }

    #[test]
    fn free_hamiltonian_is_spin_diagonal_laplacian() {
        let g = grid3();
        let q0 = build_q0(&g, &VectorPotentialSpec::zero("free")).unwrap();
        let h = build_hamiltonian(&q0);
        let d = g.orbital_dim();
        let offdiag = h
            .triplets()
            .filter(|&(r, c, _)| (r < d) != (c < d))
            .fold(0.0_f64, |m, (_, _, v)| m.max(v.norm()));
        assert_eq!(offdiag, 0.0);
        let mut p2 = LatticeOperator::zeros(g.dim());
        for k in Axis::ALL {
            let p = momentum_op(&g, k);
            p2 = p2.add(&p.compose(&p).unwrap()).unwrap();
        }
        assert_eq!(h.sub(&p2).unwrap().max_abs_entry(), 0.0);
        assert_eq!(h.commutator(&q0).unwrap().max_abs_entry(), 0.0);
        assert_eq!(h.hermiticity_residual(), 0.0);
    }

    #[test]
    fn hamiltonian_is_positive_semidefinite() {
        let a = VectorPotentialSpec::parse("t", ["y", "-x*z", "x*y*z"], BTreeMap::new()).unwrap();
        let g = grid3();
        let h = build_hamiltonian(&build_q0(&g, &a).unwrap());
        let dense = h.to_dense();
        let min = dense.clone().symmetric_eigenvalues().min();
        assert!(min >= -1e-12 * dense.norm(), "{min}");
    }

    #[test]
    fn multiplication_commutes_with_matching_reflection() {
        use crate::lattice::{symmetry_op, OrbitalSymmetry};
        let g = grid3();
        let e = crate::field::parse("ln(x^2+y^2+1)").unwrap();
        let m = multiplication_op(&g, &e, &BTreeMap::new()).unwrap();
        let r = symmetry_op(&g, OrbitalSymmetry::Reflection(Axis::Z));
        let comm = m.commutator(&r).unwrap();
        assert_eq!(comm.max_abs_entry(), 0.0);
        // hence {M, R} = 2 M R
        let anti = m.anticommutator(&r).unwrap();
        let twice = m.compose(&r).unwrap().scale_real(2.0);
        assert_eq!(anti.sub(&twice).unwrap().max_abs_entry(), 0.0);
    }
}
