//! Dense spectra of `H` and the `2^[N/2]` degeneracy law.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::lattice::LatticeOperator;

/// Largest dimension handled by the dense eigensolver.
pub const MAX_DENSE_DIM: usize = 8192;
pub const DEFAULT_CLUSTER_REL_TOL: f64 = 1e-8;
pub const DEFAULT_ZERO_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error("operator is not Hermitian (max |H - H^dagger| = {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("dimension {dim} exceeds the dense eigensolver limit of {limit}")]
    TooLarge { dim: usize, limit: usize },
}

fn dense_hermitian(h: &LatticeOperator) -> Result<DMatrix<Complex64>, SpectrumError> {
    if h.dim() > MAX_DENSE_DIM {
        return Err(SpectrumError::TooLarge {
            dim: h.dim(),
            limit: MAX_DENSE_DIM,
        });
    }
    let residual = h.hermiticity_residual();
    if residual > 1e-12 * h.max_abs_entry() {
        return Err(SpectrumError::NotHermitian { residual });
    }
    Ok(h.to_dense())
}

/// All eigenvalues of a Hermitian operator, ascending.
pub fn eigen_spectrum(h: &LatticeOperator) -> Result<Vec<f64>, SpectrumError> {
    let m = dense_hermitian(h)?;
    let mut eigs: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    eigs.sort_by(f64::total_cmp);
    Ok(eigs)
}

/// Eigenvalues (ascending) with the matching eigenvectors as columns.
pub fn eigen_decomposition(h: &LatticeOperator) -> Result<(Vec<f64>, DMatrix<Complex64>), SpectrumError> {
    let m = dense_hermitian(h)?;
    let eig = m.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = eig.eigenvectors.select_columns(&order);
    Ok((values, vectors))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cluster {
    pub energy: f64,
    pub mult: usize,
    /// Set once the degeneracy law has been checked.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub divisible: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<f64>,
    pub clusters: Vec<Cluster>,
    pub zero_modes: usize,
    pub n: Option<usize>,
    pub law_satisfied: Option<bool>,
    pub cluster_rel_tol: f64,
    pub zero_tol: f64,
}

impl SpectrumReport {
    /// `2^[N/2]` for the checked `N`.
    pub fn divisor(&self) -> Option<usize> {
        self.n.map(degeneracy_divisor)
    }
}

pub fn degeneracy_divisor(n: usize) -> usize {
    1usize << (n / 2)
}

/// Splits sorted eigenvalues into zero modes and clusters of (near-)equal
/// values. `|E| ≤ zero_tol·s` is a zero mode; a value joins the running
/// cluster when its gap to the previous value is at most `cluster_rel_tol·s`,
/// with `s = max(max |E|, 1)`.
pub fn cluster_degeneracies(eigs: &[f64], cluster_rel_tol: f64, zero_tol: f64) -> SpectrumReport {
    debug_assert!(eigs.windows(2).all(|w| w[0] <= w[1]), "eigenvalues must be sorted");
    let scale = eigs.iter().fold(1.0_f64, |m, e| m.max(e.abs()));
    let mut zero_modes = 0;
    let mut groups: Vec<Vec<f64>> = Vec::new();
    let mut prev: Option<f64> = None;
    for &e in eigs {
        if e.abs() <= zero_tol * scale {
            zero_modes += 1;
            prev = None;
            continue;
        }
        match (prev, groups.last_mut()) {
            (Some(p), Some(g)) if e - p <= cluster_rel_tol * scale => g.push(e),
            _ => groups.push(vec![e]),
        }
        prev = Some(e);
    }
    let clusters = groups
        .into_iter()
        .map(|g| Cluster {
            energy: g.iter().sum::<f64>() / g.len() as f64,
            mult: g.len(),
            divisible: None,
        })
        .collect();
    SpectrumReport {
        eigenvalues: eigs.to_vec(),
        clusters,
        zero_modes,
        n: None,
        law_satisfied: None,
        cluster_rel_tol,
        zero_tol,
    }
}

/// Every non-zero level must have a multiplicity divisible by `2^[N/2]`;
/// zero modes are exempt. Records per-cluster verdicts in the report.
pub fn check_degeneracy_law(r: &mut SpectrumReport, n: usize) -> bool {
    assert!(n >= 1, "N counts Q0 and is at least 1");
    let divisor = degeneracy_divisor(n);
    for c in &mut r.clusters {
        c.divisible = Some(c.mult % divisor == 0);
    }
    let ok = r.clusters.iter().all(|c| c.divisible == Some(true));
    r.n = Some(n);
    r.law_satisfied = Some(ok);
    ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::VectorPotentialSpec;
    use crate::lattice::Grid;
    use crate::susy::{build_hamiltonian, build_q0};

    #[test]
    fn free_three_point_spectrum() {
        // p on 3 points has eigenvalues {0, ±1/√2}, so p² ∈ {0, 1/2} and
        // H = Σ p_k² has levels {0, 1/2, 1, 3/2} with spin doubling.
        let g = Grid::cubic(3, 1.0).unwrap();
        let h = build_hamiltonian(&build_q0(&g, &VectorPotentialSpec::zero("free")).unwrap());
        let eigs = eigen_spectrum(&h).unwrap();
        let mut r = cluster_degeneracies(&eigs, 1e-8, 1e-8);
        let levels: Vec<(f64, usize)> = r.clusters.iter().map(|c| (c.energy, c.mult)).collect();
        // orbital multiplicities: p² = 1/2 twice per axis → 3·2=6, 3·4=12, 8
        let expected = [(0.5, 12), (1.0, 24), (1.5, 16)];
        assert_eq!(r.zero_modes, 2);
        for ((e, m), (ee, em)) in levels.iter().zip(expected) {
            assert!((e - ee).abs() < 1e-12, "{levels:?}");
            assert_eq!(*m, em);
        }
        assert!(check_degeneracy_law(&mut r, 4));
    }

    #[test]
    fn trivial_spectra() {
        assert_eq!(eigen_spectrum(&LatticeOperator::identity(5)).unwrap(), vec![1.0; 5]);
        let diag: Vec<Complex64> = (1..=6).rev().map(|v| Complex64::new(v as f64, 0.0)).collect();
        let eigs = eigen_spectrum(&LatticeOperator::from_diagonal(&diag)).unwrap();
        assert_eq!(eigs, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
    }

    #[test]
    fn rejects_non_hermitian_and_oversize() {
        let op = LatticeOperator::from_triplets(2, [(0, 1, Complex64::new(1.0, 0.0))]);
        assert!(matches!(eigen_spectrum(&op), Err(SpectrumError::NotHermitian { .. })));
        let big = LatticeOperator::identity(MAX_DENSE_DIM + 2);
        assert!(matches!(eigen_spectrum(&big), Err(SpectrumError::TooLarge { .. })));
    }

    #[test]
    fn eigenpair_residuals_meet_contract() {
        let a = VectorPotentialSpec::parse("t", ["-y", "x", "z*x"], Default::default()).unwrap();
        let g = Grid::cubic(3, 0.7).unwrap();
        let h = build_hamiltonian(&build_q0(&g, &a).unwrap());
        let (vals, vecs) = eigen_decomposition(&h).unwrap();
        let dense = h.to_dense();
        let norm = dense.norm();
        for (i, &l) in vals.iter().enumerate() {
            let v = vecs.column(i);
            let r = (&dense * v - v * Complex64::new(l, 0.0)).norm();
            assert!(r <= 1e-10 * norm, "pair {i}: {r}");
        }
    }

    #[test]
    fn clustering_examples() {
        let r = cluster_degeneracies(&[0.0, 0.5, 0.5, 0.5, 0.5, 1.0], 1e-8, 1e-8);
        assert_eq!(r.zero_modes, 1);
        assert_eq!(
            r.clusters.iter().map(|c| (c.energy, c.mult)).collect::<Vec<_>>(),
            vec![(0.5, 4), (1.0, 1)]
        );
        let r = cluster_degeneracies(&[], 1e-8, 1e-8);
        assert_eq!(r.zero_modes, 0);
        assert!(r.clusters.is_empty());
        let r = cluster_degeneracies(&[1.0, 1.0 + 1e-12], 1e-8, 1e-8);
        assert_eq!(r.clusters.len(), 1);
        assert_eq!(r.clusters[0].mult, 2);
    }

    #[test]
    fn law_divisors() {
        assert_eq!((1..=5).map(degeneracy_divisor).collect::<Vec<_>>(), vec![1, 2, 2, 4, 4]);
        let mut r = cluster_degeneracies(&[0.2, 0.7, 0.7, 0.9], 1e-8, 1e-8);
        assert!(check_degeneracy_law(&mut r, 1));
        assert!(!check_degeneracy_law(&mut r, 2));
        assert_eq!(r.clusters[1].divisible, Some(true));
        assert_eq!(r.clusters[0].divisible, Some(false));
    }

    #[test]
    fn sum_of_multiplicities_is_dimension() {
        let g = Grid::cubic(3, 0.5).unwrap();
        let h = build_hamiltonian(&build_q0(&g, &VectorPotentialSpec::zero("free")).unwrap());
        let r = cluster_degeneracies(&eigen_spectrum(&h).unwrap(), 1e-8, 1e-8);
        assert_eq!(r.zero_modes + r.clusters.iter().map(|c| c.mult).sum::<usize>(), g.dim());
        assert!(r.clusters.windows(2).all(|w| w[0].energy < w[1].energy));
    }
}
