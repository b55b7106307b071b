use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::qops::{Operator, SparseOperator};
use crate::C64;

/// Inputs whose `max |H - H^dagger|` exceeds this are rejected.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Full spectral decomposition `H = V diag(eigenvalues) V^dagger`, eigenvalues
/// ascending.
#[derive(Clone, Debug)]
pub struct EigDecomposition {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: DMatrix<C64>,
}

impl EigDecomposition {
    pub fn reconstruct(&self) -> DMatrix<C64> {
        let v = &self.eigenvectors;
        let scaled = DMatrix::from_fn(v.nrows(), v.ncols(), |i, j| v[(i, j)] * self.eigenvalues[j]);
        scaled * v.adjoint()
    }
}

/// Eigendecomposition of one connected block of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct EigBlock {
    /// Global basis indices spanned by the block, ascending.
    pub indices: Vec<usize>,
    /// Ascending.
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: DMatrix<C64>,
}

/// Spectral decomposition of a Hermitian matrix organised by the connected
/// components of its nonzero pattern.
///
/// Two basis states share a block when a chain of nonzero matrix elements links
/// them, so the matrix is exactly block diagonal in this partition and every
/// matrix function acts block by block. Every eigendecomposition in the crate
/// goes through here; a dense matrix with no zero structure is a single block.
#[derive(Clone, Debug)]
pub struct BlockEig {
    dim: usize,
    blocks: Vec<EigBlock>,
}

impl BlockEig {
    /// Build from the nonzero entries of a Hermitian matrix of side `dim`.
    /// Entries not listed are zero. Hermiticity is the caller's contract.
    pub fn from_entries(dim: usize, entries: &[(usize, usize, C64)]) -> Result<Self> {
        let mut uf = UnionFind::new(dim);
        for &(r, c, v) in entries {
            if r != c && v != C64::new(0.0, 0.0) {
                uf.union(r, c);
            }
        }
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); dim];
        for i in 0..dim {
            members[uf.find(i)].push(i);
        }
        let mut groups: Vec<Vec<usize>> = members.into_iter().filter(|m| !m.is_empty()).collect();
        groups.sort_by_key(|g| g[0]);

        // Position of each global index inside its block.
        let mut block_of = vec![0usize; dim];
        let mut pos = vec![0usize; dim];
        for (b, g) in groups.iter().enumerate() {
            for (k, &i) in g.iter().enumerate() {
                block_of[i] = b;
                pos[i] = k;
            }
        }
        let mut locals: Vec<DMatrix<C64>> = groups
            .iter()
            .map(|g| DMatrix::zeros(g.len(), g.len()))
            .collect();
        for &(r, c, v) in entries {
            let b = block_of[r];
            debug_assert_eq!(b, block_of[c]);
            locals[b][(pos[r], pos[c])] += v;
        }

        let blocks = groups
            .into_iter()
            .zip(locals)
            .map(|(indices, m)| {
                let (eigenvalues, eigenvectors) = dense_herm_eig(m)?;
                Ok(EigBlock {
                    indices,
                    eigenvalues,
                    eigenvectors,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { dim, blocks })
    }

    pub fn from_operator(h: &Operator) -> Result<Self> {
        let asym = h.hermiticity_error();
        if asym >= HERMITIAN_TOL {
            return Err(Error::NotHermitian { asymmetry: asym });
        }
        let sparse = SparseOperator::from_dense(h);
        Self::from_entries(h.dim(), sparse.entries())
    }

    pub fn from_sparse(h: &SparseOperator) -> Result<Self> {
        let asym = h.hermiticity_error();
        if asym >= HERMITIAN_TOL {
            return Err(Error::NotHermitian { asymmetry: asym });
        }
        Self::from_entries(h.dim(), h.entries())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn blocks(&self) -> &[EigBlock] {
        &self.blocks
    }

    pub fn largest_block(&self) -> usize {
        self.blocks.iter().map(|b| b.indices.len()).max().unwrap_or(0)
    }

    /// `exp(-i H t)` as a block-diagonal unitary.
    pub fn unitary(&self, t: f64) -> BlockUnitary {
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                let v = &b.eigenvectors;
                let phased = DMatrix::from_fn(v.nrows(), v.ncols(), |i, j| {
                    v[(i, j)] * C64::new(0.0, -b.eigenvalues[j] * t).exp()
                });
                UnitaryBlock {
                    indices: b.indices.clone(),
                    matrix: phased * v.adjoint(),
                }
            })
            .collect();
        BlockUnitary {
            dim: self.dim,
            blocks,
        }
    }

    /// Assemble the dense decomposition with globally ascending eigenvalues.
    pub fn to_dense(&self) -> EigDecomposition {
        let mut cols: Vec<(f64, usize, usize)> = Vec::with_capacity(self.dim);
        for (b, blk) in self.blocks.iter().enumerate() {
            for k in 0..blk.eigenvalues.len() {
                cols.push((blk.eigenvalues[k], b, k));
            }
        }
        cols.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut vectors = DMatrix::zeros(self.dim, self.dim);
        let mut values = DVector::zeros(self.dim);
        for (col, &(lambda, b, k)) in cols.iter().enumerate() {
            values[col] = lambda;
            let blk = &self.blocks[b];
            for (r, &gi) in blk.indices.iter().enumerate() {
                vectors[(gi, col)] = blk.eigenvectors[(r, k)];
            }
        }
        EigDecomposition {
            eigenvalues: values,
            eigenvectors: vectors,
        }
    }
}

/// Dense Hermitian eigensolver; eigenvalues ascending with matching columns.
pub(crate) fn dense_herm_eig(m: DMatrix<C64>) -> Result<(DVector<f64>, DMatrix<C64>)> {
    let n = m.nrows();
    if n == 1 {
        return Ok((DVector::from_element(1, m[(0, 0)].re), DMatrix::identity(1, 1)));
    }
    let eig = SymmetricEigen::try_new(m, f64::EPSILON, 0).ok_or(Error::EigenFailure(n))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(n, order.iter().map(|&k| eig.eigenvalues[k]));
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok((values, vectors))
}

/// Side above which eigenvalue-only requests go to faer's divide-and-conquer
/// solver instead of nalgebra's QR iteration.
const FAER_MIN_SIDE: usize = 32;

/// Eigenvalues only, ascending. Used where eigenvectors are never needed
/// (negativity, spectrum checks). The lower triangle is read.
pub fn herm_eigenvalues(m: &DMatrix<C64>) -> DVector<f64> {
    let n = m.nrows();
    let mut vals: Vec<f64> = if n == 1 {
        vec![m[(0, 0)].re]
    } else if n >= FAER_MIN_SIDE {
        let f = faer::Mat::<C64>::from_fn(n, n, |i, j| m[(i, j)]);
        match f.self_adjoint_eigenvalues(faer::Side::Lower) {
            Ok(v) => v,
            Err(_) => m.clone().symmetric_eigenvalues().iter().copied().collect(),
        }
    } else {
        m.clone().symmetric_eigenvalues().iter().copied().collect()
    };
    vals.sort_by(f64::total_cmp);
    DVector::from_vec(vals)
}

/// Hermitian eigendecomposition with a contract check on the input.
pub fn herm_eig(h: &Operator) -> Result<EigDecomposition> {
    Ok(BlockEig::from_operator(h)?.to_dense())
}

/// `exp(-i H t)`.
pub fn unitary_exp(h: &Operator, t: f64) -> Result<Operator> {
    let unitary = BlockEig::from_operator(h)?.unitary(t);
    Ok(unitary.to_operator(h.dims().to_vec()))
}

/// One diagonal block of a [`BlockUnitary`].
#[derive(Clone, Debug)]
pub struct UnitaryBlock {
    pub indices: Vec<usize>,
    pub matrix: DMatrix<C64>,
}

/// A unitary that is block diagonal after a permutation of the basis.
///
/// Products with vectors and density matrices cost `dim x (block size)`
/// per column instead of `dim^2`.
#[derive(Clone, Debug)]
pub struct BlockUnitary {
    dim: usize,
    blocks: Vec<UnitaryBlock>,
}

impl BlockUnitary {
    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            blocks: (0..dim)
                .map(|i| UnitaryBlock {
                    indices: vec![i],
                    matrix: DMatrix::identity(1, 1),
                })
                .collect(),
        }
    }

    /// The blocks must partition `0..dim` and have matching square matrices.
    pub fn from_blocks(dim: usize, blocks: Vec<UnitaryBlock>) -> Result<Self> {
        let mut seen = vec![false; dim];
        for b in &blocks {
            let s = b.indices.len();
            if b.matrix.nrows() != s || b.matrix.ncols() != s {
                return Err(Error::DimensionMismatch {
                    expected: s,
                    actual: b.matrix.nrows(),
                });
            }
            for &i in &b.indices {
                if i >= dim || seen[i] {
                    return Err(Error::InvalidDimension(format!(
                        "block index {i} repeated or outside 0..{dim}"
                    )));
                }
                seen[i] = true;
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidDimension(format!(
                "basis index {missing} not covered by any block"
            )));
        }
        Ok(Self { dim, blocks })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn blocks(&self) -> &[UnitaryBlock] {
        &self.blocks
    }

    pub fn adjoint(&self) -> Self {
        Self {
            dim: self.dim,
            blocks: self
                .blocks
                .iter()
                .map(|b| UnitaryBlock {
                    indices: b.indices.clone(),
                    matrix: b.matrix.adjoint(),
                })
                .collect(),
        }
    }

    pub fn to_matrix(&self) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for b in &self.blocks {
            for (r, &gi) in b.indices.iter().enumerate() {
                for (c, &gj) in b.indices.iter().enumerate() {
                    m[(gi, gj)] = b.matrix[(r, c)];
                }
            }
        }
        m
    }

    pub fn to_operator(&self, dims: Vec<usize>) -> Operator {
        Operator::new(self.to_matrix(), dims).expect("dims must multiply to the unitary's side")
    }

    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        assert_eq!(v.len(), self.dim, "vector length differs from unitary side");
        let mut out = DVector::zeros(self.dim);
        let mut scratch = Vec::new();
        for b in &self.blocks {
            scratch.clear();
            scratch.extend(b.indices.iter().map(|&i| v[i]));
            for (r, &gi) in b.indices.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for (c, x) in scratch.iter().enumerate() {
                    acc += b.matrix[(r, c)] * x;
                }
                out[gi] = acc;
            }
        }
        out
    }

    /// `U X` for a matrix with `dim` rows.
    pub fn apply_columns(&self, x: &DMatrix<C64>) -> DMatrix<C64> {
        assert_eq!(x.nrows(), self.dim, "matrix rows differ from unitary side");
        let mut out = DMatrix::zeros(self.dim, x.ncols());
        let mut scratch = Vec::new();
        for col in 0..x.ncols() {
            let src = x.column(col);
            let mut dst = out.column_mut(col);
            for b in &self.blocks {
                scratch.clear();
                scratch.extend(b.indices.iter().map(|&i| src[i]));
                for (r, &gi) in b.indices.iter().enumerate() {
                    let mut acc = C64::new(0.0, 0.0);
                    for (c, s) in scratch.iter().enumerate() {
                        acc += b.matrix[(r, c)] * s;
                    }
                    dst[gi] = acc;
                }
            }
        }
        out
    }

    /// `U rho U^dagger`.
    pub fn conjugate(&self, rho: &DMatrix<C64>) -> DMatrix<C64> {
        let left = self.apply_columns(rho);
        self.apply_columns(&left.adjoint()).adjoint()
    }

    /// `self * other` for two unitaries over the same basis.
    pub fn compose(&self, other: &BlockUnitary) -> DMatrix<C64> {
        self.apply_columns(&other.to_matrix())
    }

    /// Row-wise view of the nonzero entries.
    pub fn rows(&self) -> RowTable {
        let mut per_row: Vec<Vec<(usize, C64)>> = vec![Vec::new(); self.dim];
        for b in &self.blocks {
            for (r, &gi) in b.indices.iter().enumerate() {
                per_row[gi] = b
                    .indices
                    .iter()
                    .enumerate()
                    .map(|(c, &gj)| (gj, b.matrix[(r, c)]))
                    .collect();
            }
        }
        let mut offsets = Vec::with_capacity(self.dim + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        offsets.push(0);
        for row in per_row {
            for (c, v) in row {
                cols.push(c);
                vals.push(v);
            }
            offsets.push(cols.len());
        }
        RowTable { offsets, cols, vals }
    }
}

/// Compressed-row copy of a block unitary's nonzeros.
#[derive(Clone, Debug)]
pub struct RowTable {
    offsets: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
}

impl RowTable {
    /// Column indices and values of row `r`.
    pub fn row(&self, r: usize) -> (&[usize], &[C64]) {
        let (a, b) = (self.offsets[r], self.offsets[r + 1]);
        (&self.cols[a..b], &self.vals[a..b])
    }

    /// Entry `(r, c)` of `U rho U^dagger`.
    pub fn conjugated_entry(&self, rho: &DMatrix<C64>, r: usize, c: usize) -> C64 {
        let (ci, vi) = self.row(r);
        let (cj, vj) = self.row(c);
        let mut acc = C64::new(0.0, 0.0);
        for (&i, &u) in ci.iter().zip(vi) {
            let mut inner = C64::new(0.0, 0.0);
            for (&j, &v) in cj.iter().zip(vj) {
                inner += rho[(i, j)] * v.conj();
            }
            acc += u * inner;
        }
        acc
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}
