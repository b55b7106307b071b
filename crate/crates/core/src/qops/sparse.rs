use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::qops::{CompositeSpace, Factor, Operator};
use crate::C64;

/// Coordinate-format complex matrix for composite-space generators.
///
/// Entries are kept sorted by `(row, col)` with duplicates merged and exact
/// zeros dropped. Generators built from Kronecker products of ladder and spin
/// operators have a handful of nonzeros per row, so this is the form used once
/// the cutoff makes a dense `4N^2 x 4N^2` matrix too large to hold.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseOperator {
    dims: Vec<usize>,
    dim: usize,
    entries: Vec<(usize, usize, C64)>,
}

impl SparseOperator {
    pub fn zeros(dims: &[usize]) -> Self {
        Self {
            dims: dims.to_vec(),
            dim: dims.iter().product(),
            entries: Vec::new(),
        }
    }

    pub fn identity(dims: &[usize]) -> Self {
        let dim = dims.iter().product();
        Self {
            dims: dims.to_vec(),
            dim,
            entries: (0..dim).map(|i| (i, i, C64::new(1.0, 0.0))).collect(),
        }
    }

    pub fn from_entries(dims: &[usize], entries: Vec<(usize, usize, C64)>) -> Result<Self> {
        let dim: usize = dims.iter().product();
        if let Some(&(r, c, _)) = entries.iter().find(|(r, c, _)| *r >= dim || *c >= dim) {
            return Err(Error::InvalidDimension(format!(
                "entry ({r}, {c}) outside a {dim}x{dim} matrix"
            )));
        }
        Ok(Self {
            dims: dims.to_vec(),
            dim,
            entries: canonicalize(entries),
        })
    }

    pub fn from_dense(op: &Operator) -> Self {
        let m = op.matrix();
        let mut entries = Vec::new();
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                if z != C64::new(0.0, 0.0) {
                    entries.push((i, j, z));
                }
            }
        }
        Self {
            dims: op.dims().to_vec(),
            dim: op.dim(),
            entries,
        }
    }

    /// `coef * (X_A (x) X_B (x) X_a (x) X_b)` where unspecified factors are
    /// identities.
    pub fn product(
        space: &CompositeSpace,
        coef: C64,
        factors: &[(Factor, &Operator)],
    ) -> Result<Self> {
        let dims = space.dims();
        let mut locals: [Option<&Operator>; 4] = [None; 4];
        for &(f, op) in factors {
            let slot = f.slot();
            if op.dim() != dims[slot] {
                return Err(Error::DimensionMismatch {
                    expected: dims[slot],
                    actual: op.dim(),
                });
            }
            if locals[slot].is_some() {
                return Err(Error::InvalidDimension(format!(
                    "factor {} given twice",
                    f.label()
                )));
            }
            locals[slot] = Some(op);
        }
        // Nonzero pattern of each local factor.
        let local_nz: Vec<Vec<(usize, usize, C64)>> = locals
            .iter()
            .zip(dims.iter())
            .map(|(op, &d)| match op {
                Some(op) => {
                    let m = op.matrix();
                    let mut nz = Vec::new();
                    for i in 0..d {
                        for j in 0..d {
                            if m[(i, j)] != C64::new(0.0, 0.0) {
                                nz.push((i, j, m[(i, j)]));
                            }
                        }
                    }
                    nz
                }
                None => (0..d).map(|i| (i, i, C64::new(1.0, 0.0))).collect(),
            })
            .collect();

        let mut entries = vec![(0usize, 0usize, coef)];
        for (slot, nz) in local_nz.iter().enumerate() {
            let d = dims[slot];
            let mut next = Vec::with_capacity(entries.len() * nz.len());
            for &(r, c, v) in &entries {
                for &(i, j, w) in nz {
                    next.push((r * d + i, c * d + j, v * w));
                }
            }
            entries = next;
        }
        Ok(Self {
            dims: dims.to_vec(),
            dim: space.dim(),
            entries: canonicalize(entries),
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, usize, C64)] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        match self
            .entries
            .binary_search_by(|&(r, c, _)| (r, c).cmp(&(row, col)))
        {
            Ok(k) => self.entries[k].2,
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    pub fn try_add(&self, other: &SparseOperator) -> Result<Self> {
        self.check_same_dim(other)?;
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Ok(Self {
            dims: self.dims.clone(),
            dim: self.dim,
            entries: canonicalize(entries),
        })
    }

    pub fn try_sub(&self, other: &SparseOperator) -> Result<Self> {
        self.try_add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            dims: self.dims.clone(),
            dim: self.dim,
            entries: canonicalize(self.entries.iter().map(|&(r, k, v)| (r, k, v * c)).collect()),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self {
            dims: self.dims.clone(),
            dim: self.dim,
            entries: canonicalize(
                self.entries
                    .iter()
                    .map(|&(r, c, v)| (c, r, v.conj()))
                    .collect(),
            ),
        }
    }

    pub fn try_mul(&self, other: &SparseOperator) -> Result<Self> {
        self.check_same_dim(other)?;
        let rows = other.rows();
        let mut entries = Vec::new();
        for &(i, k, a) in &self.entries {
            for &(j, b) in &rows[k] {
                entries.push((i, j, a * b));
            }
        }
        Ok(Self {
            dims: self.dims.clone(),
            dim: self.dim,
            entries: canonicalize(entries),
        })
    }

    pub fn commutator(&self, other: &SparseOperator) -> Result<Self> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    fn rows(&self) -> Vec<Vec<(usize, C64)>> {
        let mut rows = vec![Vec::new(); self.dim];
        for &(r, c, v) in &self.entries {
            rows[r].push((c, v));
        }
        rows
    }

    fn check_same_dim(&self, other: &SparseOperator) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: other.dim,
            });
        }
        Ok(())
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |acc, e| acc.max(e.2.norm()))
    }

    pub fn hermiticity_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for &(r, c, v) in &self.entries {
            worst = worst.max((v - self.get(c, r).conj()).norm());
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() < tol
    }

    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        let mut out = DVector::zeros(self.dim);
        for &(r, c, a) in &self.entries {
            out[r] += a * v[c];
        }
        out
    }

    /// Diagonal element of a state-independent basis vector, i.e. `<i|H|i>`.
    pub fn diagonal(&self) -> Vec<C64> {
        let mut d = vec![C64::new(0.0, 0.0); self.dim];
        for &(r, c, v) in &self.entries {
            if r == c {
                d[r] = v;
            }
        }
        d
    }

    pub fn to_dense(&self) -> Operator {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for &(r, c, v) in &self.entries {
            m[(r, c)] = v;
        }
        Operator::new(m, self.dims.clone()).expect("sparse operator dims are consistent")
    }
}

fn canonicalize(mut entries: Vec<(usize, usize, C64)>) -> Vec<(usize, usize, C64)> {
    entries.sort_by_key(|e| (e.0, e.1));
    let mut merged: BTreeMap<(usize, usize), C64> = BTreeMap::new();
    for (r, c, v) in entries {
        *merged.entry((r, c)).or_insert(C64::new(0.0, 0.0)) += v;
    }
    merged
        .into_iter()
        .filter(|(_, v)| *v != C64::new(0.0, 0.0))
        .map(|((r, c), v)| (r, c, v))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qops::{annihilation, atomic_ops, embed};

    #[test]
    fn product_matches_dense_embedding() {
        let s = CompositeSpace::new(4).unwrap();
        let ops = atomic_ops();
        let a = annihilation(4).unwrap();
        let sp = SparseOperator::product(
            &s,
            C64::new(0.5, 0.0),
            &[(Factor::AtomA, &ops.sigma_minus), (Factor::FieldA, &a.adjoint())],
        )
        .unwrap();
        let dense = embed(&ops.sigma_minus, Factor::AtomA, &s)
            .unwrap()
            .try_mul(&embed(&a.adjoint(), Factor::FieldA, &s).unwrap())
            .unwrap()
            .scale_real(0.5);
        assert!(sp.to_dense().max_abs_diff(&dense) < 1e-15);
    }

    #[test]
    fn algebra_matches_dense() {
        let s = CompositeSpace::new(3).unwrap();
        let ops = atomic_ops();
        let a = annihilation(3).unwrap();
        let x = SparseOperator::product(&s, C64::new(1.0, 0.0), &[(Factor::FieldB, &a)]).unwrap();
        let y = SparseOperator::product(
            &s,
            C64::new(0.0, 2.0),
            &[(Factor::AtomB, &ops.sigma_plus), (Factor::FieldB, &a.adjoint())],
        )
        .unwrap();
        let xd = x.to_dense();
        let yd = y.to_dense();
        assert!(x.try_mul(&y).unwrap().to_dense().max_abs_diff(&(&xd * &yd)) < 1e-14);
        assert!(x.try_add(&y).unwrap().to_dense().max_abs_diff(&(&xd + &yd)) < 1e-14);
        assert!(y.adjoint().to_dense().max_abs_diff(&yd.adjoint()) < 1e-14);
        assert!(
            x.commutator(&y).unwrap().to_dense().max_abs_diff(&xd.commutator(&yd).unwrap())
                < 1e-14
        );
    }

    #[test]
    fn duplicate_factor_rejected() {
        let s = CompositeSpace::new(3).unwrap();
        let a = annihilation(3).unwrap();
        let r = SparseOperator::product(
            &s,
            C64::new(1.0, 0.0),
            &[(Factor::FieldA, &a), (Factor::FieldA, &a)],
        );
        assert!(r.is_err());
    }

    #[test]
    fn cancellation_drops_entries() {
        let s = CompositeSpace::new(2).unwrap();
        let id = SparseOperator::identity(&s.dims());
        let zero = id.try_sub(&id).unwrap();
        assert_eq!(zero.nnz(), 0);
    }
}
