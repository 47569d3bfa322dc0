//! Sparse complex operators on the spinor lattice space.
//!
//! Storage is compressed sparse rows with sorted column indices. Exact zeros
//! are dropped after every operation, so an identity such as `{I_x, p_x} = 0`
//! shows up as an operator with no stored entries at all.

use std::io::{BufRead, Write};

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use super::spin::SpinMatrix;

#[derive(Debug, Error)]
pub enum OperatorError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("operator dump line {line}: {message}")]
    Dump { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Equality compares dimension and stored entries; the structural flags are ignored.
#[derive(Debug, Clone)]
pub struct LatticeOperator {
    dim: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<Complex64>,
    hermitian: bool,
    signed_permutation: bool,
}

impl PartialEq for LatticeOperator {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.indptr == other.indptr
            && self.indices == other.indices
            && self.values == other.values
    }
}

fn check_dims(a: &LatticeOperator, b: &LatticeOperator) -> Result<(), OperatorError> {
    if a.dim != b.dim {
        return Err(OperatorError::DimensionMismatch { left: a.dim, right: b.dim });
    }
    Ok(())
}

impl LatticeOperator {
    pub fn zeros(dim: usize) -> LatticeOperator {
        LatticeOperator {
            dim,
            indptr: vec![0; dim + 1],
            indices: Vec::new(),
            values: Vec::new(),
            hermitian: true,
            signed_permutation: false,
        }
    }

    pub fn identity(dim: usize) -> LatticeOperator {
        LatticeOperator {
            dim,
            indptr: (0..=dim).collect(),
            indices: (0..dim).collect(),
            values: vec![Complex64::new(1.0, 0.0); dim],
            hermitian: true,
            signed_permutation: true,
        }
    }

    /// Builds an operator from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets<I>(dim: usize, triplets: I) -> LatticeOperator
    where
        I: IntoIterator<Item = (usize, usize, Complex64)>,
    {
        let mut rows: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); dim];
        for (r, c, v) in triplets {
            assert!(r < dim && c < dim, "triplet ({r}, {c}) outside dimension {dim}");
            rows[r].push((c, v));
        }
        let mut op = LatticeOperator::zeros(dim);
        op.hermitian = false;
        for (r, mut row) in rows.into_iter().enumerate() {
            row.sort_by_key(|&(c, _)| c);
            let mut last: Option<usize> = None;
            let start = op.indices.len();
            for (c, v) in row {
                if last == Some(c) {
                    *op.values.last_mut().expect("entry exists") += v;
                } else {
                    op.indices.push(c);
                    op.values.push(v);
                    last = Some(c);
                }
            }
            op.prune_tail(start);
            op.indptr[r + 1] = op.indices.len();
        }
        op
    }

    pub fn from_diagonal(values: &[Complex64]) -> LatticeOperator {
        LatticeOperator::from_triplets(values.len(), values.iter().enumerate().map(|(i, &v)| (i, i, v)))
    }

    pub fn from_dense(m: &DMatrix<Complex64>) -> LatticeOperator {
        assert_eq!(m.nrows(), m.ncols(), "operator must be square");
        let n = m.nrows();
        LatticeOperator::from_triplets(
            n,
            (0..n).flat_map(|r| (0..n).map(move |c| (r, c, m[(r, c)]))),
        )
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (r, c, v) in self.triplets() {
            m[(r, c)] = v;
        }
        m
    }

    fn prune_tail(&mut self, start: usize) {
        let mut w = start;
        for k in start..self.indices.len() {
            if self.values[k] != Complex64::new(0.0, 0.0) {
                self.indices[w] = self.indices[k];
                self.values[w] = self.values[k];
                w += 1;
            }
        }
        self.indices.truncate(w);
        self.values.truncate(w);
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn is_signed_permutation(&self) -> bool {
        self.signed_permutation
    }

    /// Marks the operator as Hermitian by construction.
    pub fn with_hermitian(mut self, hermitian: bool) -> LatticeOperator {
        self.hermitian = hermitian;
        self
    }

    pub fn with_signed_permutation(mut self, flag: bool) -> LatticeOperator {
        self.signed_permutation = flag;
        self
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let span = self.indptr[r]..self.indptr[r + 1];
        self.indices[span.clone()].iter().copied().zip(self.values[span].iter().copied())
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        let span = self.indptr[r]..self.indptr[r + 1];
        match self.indices[span.clone()].binary_search(&c) {
            Ok(k) => self.values[span.start + k],
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.dim).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    fn merge(&self, other: &LatticeOperator, sign: f64) -> Result<LatticeOperator, OperatorError> {
        check_dims(self, other)?;
        let mut out = LatticeOperator::zeros(self.dim);
        for r in 0..self.dim {
            let start = out.indices.len();
            let mut a = self.row(r).peekable();
            let mut b = other.row(r).map(|(c, v)| (c, v * sign)).peekable();
            loop {
                let next = match (a.peek(), b.peek()) {
                    (Some(&(ca, va)), Some(&(cb, vb))) => {
                        if ca == cb {
                            a.next();
                            b.next();
                            (ca, va + vb)
                        } else if ca < cb {
                            a.next();
                            (ca, va)
                        } else {
                            b.next();
                            (cb, vb)
                        }
                    }
                    (Some(&x), None) => {
                        a.next();
                        x
                    }
                    (None, Some(&y)) => {
                        b.next();
                        y
                    }
                    (None, None) => break,
                };
                out.indices.push(next.0);
                out.values.push(next.1);
            }
            out.prune_tail(start);
            out.indptr[r + 1] = out.indices.len();
        }
        out.hermitian = self.hermitian && other.hermitian;
        out.signed_permutation = false;
        Ok(out)
    }

    pub fn add(&self, other: &LatticeOperator) -> Result<LatticeOperator, OperatorError> {
        self.merge(other, 1.0)
    }

    pub fn sub(&self, other: &LatticeOperator) -> Result<LatticeOperator, OperatorError> {
        self.merge(other, -1.0)
    }

    pub fn scale(&self, c: Complex64) -> LatticeOperator {
        let mut out = self.clone();
        for v in &mut out.values {
            *v *= c;
        }
        let mut pruned = LatticeOperator::zeros(self.dim);
        for r in 0..self.dim {
            let start = pruned.indices.len();
            pruned.indices.extend_from_slice(&out.indices[out.indptr[r]..out.indptr[r + 1]]);
            pruned.values.extend_from_slice(&out.values[out.indptr[r]..out.indptr[r + 1]]);
            pruned.prune_tail(start);
            pruned.indptr[r + 1] = pruned.indices.len();
        }
        pruned.hermitian = self.hermitian && c.im == 0.0;
        pruned.signed_permutation = self.signed_permutation && c.im == 0.0 && c.re.abs() == 1.0;
        pruned
    }

    pub fn scale_real(&self, c: f64) -> LatticeOperator {
        self.scale(Complex64::new(c, 0.0))
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &LatticeOperator) -> Result<LatticeOperator, OperatorError> {
        check_dims(self, other)?;
        let n = self.dim;
        let mut acc = vec![Complex64::new(0.0, 0.0); n];
        let mut touched = vec![false; n];
        let mut cols: Vec<usize> = Vec::new();
        let mut out = LatticeOperator::zeros(n);
        for r in 0..n {
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    if !touched[c] {
                        touched[c] = true;
                        cols.push(c);
                    }
                    acc[c] += a * b;
                }
            }
            cols.sort_unstable();
            let start = out.indices.len();
            for &c in &cols {
                out.indices.push(c);
                out.values.push(acc[c]);
                acc[c] = Complex64::new(0.0, 0.0);
                touched[c] = false;
            }
            cols.clear();
            out.prune_tail(start);
            out.indptr[r + 1] = out.indices.len();
        }
        out.hermitian = false;
        out.signed_permutation = self.signed_permutation && other.signed_permutation;
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> LatticeOperator {
        let mut out = LatticeOperator::from_triplets(self.dim, self.triplets().map(|(r, c, v)| (c, r, v.conj())));
        out.hermitian = self.hermitian;
        out.signed_permutation = self.signed_permutation;
        out
    }

    /// `ab − ba`.
    pub fn commutator(&self, other: &LatticeOperator) -> Result<LatticeOperator, OperatorError> {
        self.compose(other)?.sub(&other.compose(self)?)
    }

    /// `ab + ba`.
    pub fn anticommutator(&self, other: &LatticeOperator) -> Result<LatticeOperator, OperatorError> {
        let out = self.compose(other)?.add(&other.compose(self)?)?;
        Ok(out.with_hermitian(self.hermitian && other.hermitian))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |s, v| s + v.norm_sqr()).sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    /// `max |A − A†|` over all entries.
    pub fn hermiticity_residual(&self) -> f64 {
        self.sub(&self.adjoint()).expect("same dimension").max_abs_entry()
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "vector length must match operator dimension");
        (0..self.dim)
            .map(|r| self.row(r).map(|(c, a)| a * v[c]).sum())
            .collect()
    }

    /// `s ⊗ orbital`, with the spin index as the outer (block) index.
    pub fn spin_tensor(s: SpinMatrix, orbital: &LatticeOperator) -> LatticeOperator {
        let d = orbital.dim;
        let mut trip = Vec::with_capacity(4 * orbital.nnz());
        for (a, row) in s.0.iter().enumerate() {
            for (b, &sv) in row.iter().enumerate() {
                if sv == Complex64::new(0.0, 0.0) {
                    continue;
                }
                trip.extend(orbital.triplets().map(|(r, c, v)| (a * d + r, b * d + c, sv * v)));
            }
        }
        let mut out = LatticeOperator::from_triplets(2 * d, trip);
        out.hermitian = orbital.hermitian && s.adjoint() == s;
        out.signed_permutation = orbital.signed_permutation
            && s.0.iter().all(|row| row.iter().filter(|v| v.norm() != 0.0).count() == 1)
            && s.0.iter().flatten().all(|v| v.norm() == 0.0 || v.norm() == 1.0);
        out
    }

    /// Writes the sparse-triplet text dump: a `dim N nnz K` header, then one
    /// `row col re im` line per stored entry.
    pub fn write_triplets<W: Write>(&self, mut w: W) -> Result<(), OperatorError> {
        writeln!(w, "dim {} nnz {}", self.dim, self.nnz())?;
        for (r, c, v) in self.triplets() {
            writeln!(w, "{r} {c} {:e} {:e}", v.re, v.im)?;
        }
        Ok(())
    }

    pub fn read_triplets<R: BufRead>(r: R) -> Result<LatticeOperator, OperatorError> {
        let bad = |line: usize, message: &str| OperatorError::Dump { line, message: message.to_string() };
        let mut lines = r.lines();
        let header = lines.next().ok_or_else(|| bad(1, "missing header"))??;
        let h: Vec<&str> = header.split_whitespace().collect();
        let (dim, nnz) = match h.as_slice() {
            ["dim", d, "nnz", k] => (
                d.parse::<usize>().map_err(|_| bad(1, "bad dimension"))?,
                k.parse::<usize>().map_err(|_| bad(1, "bad entry count"))?,
            ),
            _ => return Err(bad(1, "expected `dim N nnz K`")),
        };
        let mut trip = Vec::with_capacity(nnz);
        for (i, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            let [r, c, re, im] = f.as_slice() else {
                return Err(bad(i + 2, "expected `row col re im`"));
            };
            let r: usize = r.parse().map_err(|_| bad(i + 2, "bad row"))?;
            let c: usize = c.parse().map_err(|_| bad(i + 2, "bad column"))?;
            if r >= dim || c >= dim {
                return Err(bad(i + 2, "index out of range"));
            }
            let re: f64 = re.parse().map_err(|_| bad(i + 2, "bad real part"))?;
            let im: f64 = im.parse().map_err(|_| bad(i + 2, "bad imaginary part"))?;
            trip.push((r, c, Complex64::new(re, im)));
        }
        if trip.len() != nnz {
            return Err(bad(0, "entry count does not match header"));
        }
        Ok(LatticeOperator::from_triplets(dim, trip))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_op(dim: usize, entries: Vec<(usize, usize, f64, f64)>) -> LatticeOperator {
        LatticeOperator::from_triplets(dim, entries.into_iter().map(|(r, cc, re, im)| (r % dim, cc % dim, c(re, im))))
    }

    #[test]
    fn triplets_sum_duplicates_and_drop_zeros() {
        let op = LatticeOperator::from_triplets(2, [(0, 1, c(1.0, 0.0)), (0, 1, c(-1.0, 0.0)), (1, 0, c(0.0, 2.0))]);
        assert_eq!(op.nnz(), 1);
        assert_eq!(op.get(1, 0), c(0.0, 2.0));
    }

    #[test]
    fn dimension_mismatch() {
        let a = LatticeOperator::identity(2);
        let b = LatticeOperator::identity(3);
        assert!(matches!(a.add(&b), Err(OperatorError::DimensionMismatch { left: 2, right: 3 })));
        assert!(a.compose(&b).is_err());
    }

    #[test]
    fn norms() {
        let op = LatticeOperator::from_triplets(3, [(0, 0, c(3.0, 0.0)), (2, 1, c(0.0, -4.0))]);
        assert_eq!(op.frobenius_norm(), 5.0);
        assert_eq!(op.max_abs_entry(), 4.0);
        assert_eq!(LatticeOperator::zeros(4).frobenius_norm(), 0.0);
    }

    #[test]
    fn spin_tensor_layout() {
        let orb = LatticeOperator::from_triplets(2, [(0, 1, c(2.0, 0.0))]);
        let t = LatticeOperator::spin_tensor(SpinMatrix::pauli(crate::field::Axis::Y), &orb);
        // σ_y = [[0, −i], [i, 0]]
        assert_eq!(t.get(0, 3), c(0.0, -2.0));
        assert_eq!(t.get(2, 1), c(0.0, 2.0));
        assert_eq!(t.nnz(), 2);
    }

    #[test]
    fn dump_roundtrip() {
        let op = LatticeOperator::from_triplets(3, [(0, 2, c(0.1, -0.3)), (1, 1, c(2.0, 0.0))]);
        let mut buf = Vec::new();
        op.write_triplets(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("dim 3 nnz 2\n"));
        let back = LatticeOperator::read_triplets(&buf[..]).unwrap();
        assert_eq!(back.to_dense(), op.to_dense());
        assert!(LatticeOperator::read_triplets(&b"dim 2 nnz 1\n0 5 1 0\n"[..]).is_err());
        assert!(LatticeOperator::read_triplets(&b"size 2\n"[..]).is_err());
    }

    proptest! {
        #[test]
        fn arithmetic_matches_dense(
            a in proptest::collection::vec((0usize..6, 0usize..6, -2.0f64..2.0, -2.0f64..2.0), 0..20),
            b in proptest::collection::vec((0usize..6, 0usize..6, -2.0f64..2.0, -2.0f64..2.0), 0..20),
        ) {
            let (a, b) = (random_op(6, a), random_op(6, b));
            let (da, db) = (a.to_dense(), b.to_dense());
            let tol = 1e-12;
            prop_assert!((a.compose(&b).unwrap().to_dense() - &da * &db).norm() < tol);
            prop_assert!((a.add(&b).unwrap().to_dense() - (&da + &db)).norm() < tol);
            prop_assert!((a.anticommutator(&b).unwrap().to_dense() - (&da * &db + &db * &da)).norm() < tol);
            prop_assert!((a.commutator(&b).unwrap().to_dense() - (&da * &db - &db * &da)).norm() < tol);
            prop_assert!((a.adjoint().to_dense() - da.adjoint()).norm() == 0.0);
            let v: Vec<Complex64> = (0..6).map(|i| c(i as f64 - 2.5, 0.5 * i as f64)).collect();
            let dv = &da * nalgebra::DVector::from_vec(v.clone());
            let av = a.apply(&v);
            prop_assert!(av.iter().zip(dv.iter()).all(|(x, y)| (x - y).norm() < tol));
        }
    }
}
