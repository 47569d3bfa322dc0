use rayon::prelude::*;
use serde::Serialize;

use crate::field::Axis;
use crate::lattice::{orbital_symmetry, Grid, LatticeOperator, OrbitalSymmetry, SpinMatrix};

/// A prospective involution `σ_spin ⊗ G`.
#[derive(Debug, Clone)]
pub struct CandidateT {
    pub spin: Axis,
    pub orbital: OrbitalSymmetry,
    pub op: LatticeOperator,
    /// `‖T² − 1‖_F / ‖1‖_F`.
    pub involution_residual: f64,
    /// `‖{T, Q₀}‖_F / ‖Q₀‖_F`, once screened against a `Q₀`.
    pub q0_residual: Option<f64>,
}

impl CandidateT {
    pub fn new(g: &Grid, spin: Axis, orbital: OrbitalSymmetry) -> CandidateT {
        let op = LatticeOperator::spin_tensor(SpinMatrix::pauli(spin), &orbital_symmetry(g, orbital));
        let id = LatticeOperator::identity(op.dim());
        let square = op.compose(&op).expect("square operator").sub(&id).expect("same dimension");
        let involution_residual = square.frobenius_norm() / (op.dim() as f64).sqrt();
        CandidateT {
            spin,
            orbital,
            op,
            involution_residual,
            q0_residual: None,
        }
    }

    /// Ordering key: reflections before rotations before inversion, then spin
    /// index, then axis.
    pub fn key(&self) -> (u8, usize, usize) {
        (self.orbital.family_rank(), self.spin.index(), self.orbital.axis_rank())
    }

    pub fn label(&self) -> String {
        format!("sigma_{} (x) {}", self.spin.index() + 1, self.orbital.name())
    }
}

/// All 21 products `σ_i ⊗ G` with `G` a coordinate reflection, π-rotation or
/// the full inversion.
pub fn enumerate_candidates(g: &Grid) -> Vec<CandidateT> {
    Axis::ALL
        .into_iter()
        .flat_map(|spin| OrbitalSymmetry::ALL.into_iter().map(move |orb| (spin, orb)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(spin, orb)| CandidateT::new(g, spin, orb))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Admissibility {
    pub pass: bool,
    pub residual: f64,
}

/// Checks `{T, Q₀} = 0` in relative Frobenius norm.
pub fn admissibility(c: &CandidateT, q0: &LatticeOperator, tol: f64) -> Admissibility {
    let anti = c.op.anticommutator(q0).expect("candidate and Q0 share a dimension");
    let norm = q0.frobenius_norm();
    let residual = if norm > 0.0 {
        anti.frobenius_norm() / norm
    } else {
        anti.frobenius_norm()
    };
    Admissibility {
        pass: residual <= tol,
        residual,
    }
}

/// Fills in `q0_residual` for every candidate; order is preserved.
pub fn screen_candidates(cands: Vec<CandidateT>, q0: &LatticeOperator) -> Vec<CandidateT> {
    cands
        .into_par_iter()
        .map(|mut c| {
            c.q0_residual = Some(admissibility(&c, q0, f64::INFINITY).residual);
            c
        })
        .collect()
}

/// Relative `‖{T, T'}‖ / ‖1‖`.
fn pair_residual(a: &CandidateT, b: &CandidateT) -> f64 {
    let anti = a.op.anticommutator(&b.op).expect("same dimension");
    anti.frobenius_norm() / (a.op.dim() as f64).sqrt()
}

/// Maximum-cardinality subset whose members pairwise anticommute.
///
/// Candidates are ordered by [`CandidateT::key`] and the search is exhaustive;
/// among maximum sets the lexicographically smallest key sequence wins, so the
/// result does not depend on input order.
pub fn max_compatible_set(cands: &[CandidateT], tol: f64) -> Vec<CandidateT> {
    let mut sorted: Vec<&CandidateT> = cands.iter().collect();
    sorted.sort_by_key(|c| c.key());
    sorted.dedup_by_key(|c| c.key());
    let n = sorted.len();
    let compatible: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| i != j && pair_residual(sorted[i], sorted[j]) <= tol).collect())
        .collect();

    struct Search<'a> {
        compatible: &'a [Vec<bool>],
        best: Vec<usize>,
        current: Vec<usize>,
    }

    impl Search<'_> {
        // Include-first depth-first order visits equal-size cliques in
        // lexicographic order, so only a strictly larger clique replaces `best`.
        fn run(&mut self, next: usize) {
            let n = self.compatible.len();
            if self.current.len() > self.best.len() {
                self.best = self.current.clone();
            }
            if next == n || self.current.len() + (n - next) <= self.best.len() {
                return;
            }
            if self.current.iter().all(|&m| self.compatible[m][next]) {
                self.current.push(next);
                self.run(next + 1);
                self.current.pop();
            }
            self.run(next + 1);
        }
    }

    let mut search = Search {
        compatible: &compatible,
        best: Vec::new(),
        current: Vec::new(),
    };
    search.run(0);
    search.best.into_iter().map(|i| sorted[i].clone()).collect()
}
