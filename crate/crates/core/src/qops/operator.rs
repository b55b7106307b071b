use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::C64;

/// Dense complex square matrix tagged with the dimensions of the tensor
/// factors it acts on.
///
/// Hermiticity and unitarity are checked on demand, never assumed.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    data: DMatrix<C64>,
    dims: Vec<usize>,
}

impl Operator {
    pub fn new(data: DMatrix<C64>, dims: Vec<usize>) -> Result<Self> {
        if !data.is_square() {
            return Err(Error::InvalidDimension(format!(
                "operator matrix is {}x{}, not square",
                data.nrows(),
                data.ncols()
            )));
        }
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidDimension(format!("bad factor dims {dims:?}")));
        }
        let side: usize = dims.iter().product();
        if side != data.nrows() {
            return Err(Error::DimensionMismatch {
                expected: side,
                actual: data.nrows(),
            });
        }
        Ok(Self { data, dims })
    }

    /// Single-factor operator from a square matrix.
    pub fn from_matrix(data: DMatrix<C64>) -> Result<Self> {
        let n = data.nrows();
        Self::new(data, vec![n])
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let data = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        Self {
            data,
            dims: vec![n],
        }
    }

    pub fn identity(dims: &[usize]) -> Self {
        let n = dims.iter().product();
        Self {
            data: DMatrix::identity(n, n),
            dims: dims.to_vec(),
        }
    }

    pub fn zeros(dims: &[usize]) -> Self {
        let n = dims.iter().product();
        Self {
            data: DMatrix::zeros(n, n),
            dims: dims.to_vec(),
        }
    }

    /// Rank-one projector |v><v| on a single factor of dimension `v.len()`.
    pub fn projector(v: &nalgebra::DVector<C64>) -> Self {
        let n = v.len();
        Self {
            data: v * v.adjoint(),
            dims: vec![n],
        }
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.data
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    /// Re-tag the factor structure without touching the matrix.
    pub fn with_dims(self, dims: Vec<usize>) -> Result<Self> {
        Self::new(self.data, dims)
    }

    pub fn adjoint(&self) -> Self {
        Self {
            data: self.data.adjoint(),
            dims: self.dims.clone(),
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            data: &self.data * c,
            dims: self.dims.clone(),
        }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(C64::new(c, 0.0))
    }

    /// Kronecker product; the factor lists are concatenated.
    pub fn kron(&self, other: &Operator) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self {
            data: self.data.kronecker(&other.data),
            dims,
        }
    }

    pub fn commutator(&self, other: &Operator) -> Result<Self> {
        let ab = self.try_mul(other)?;
        let ba = other.try_mul(self)?;
        ab.try_sub(&ba)
    }

    pub fn try_mul(&self, other: &Operator) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self {
            data: &self.data * &other.data,
            dims: self.dims.clone(),
        })
    }

    pub fn try_add(&self, other: &Operator) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self {
            data: &self.data + &other.data,
            dims: self.dims.clone(),
        })
    }

    pub fn try_sub(&self, other: &Operator) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self {
            data: &self.data - &other.data,
            dims: self.dims.clone(),
        })
    }

    fn check_same_dim(&self, other: &Operator) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(())
    }

    pub fn trace(&self) -> C64 {
        self.data.trace()
    }

    /// Tr(rho^2), real part.
    pub fn purity(&self) -> f64 {
        // Tr(A B) = sum_ij A_ij B_ji; for Hermitian rho this is sum |rho_ij|^2.
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        max_abs(&self.data)
    }

    /// max |H - H^dagger|.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for j in 0..n {
            for i in 0..=j {
                worst = worst.max((self.data[(i, j)] - self.data[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() < tol
    }

    /// max |U^dagger U - I|.
    pub fn unitarity_error(&self) -> f64 {
        let n = self.dim();
        let prod = self.data.adjoint() * &self.data;
        max_abs(&(prod - DMatrix::<C64>::identity(n, n)))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_error() < tol
    }

    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        max_abs(&(&self.data - &other.data))
    }

    /// Diagonal of the matrix, real parts.
    pub fn real_diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.data[(i, i)].re).collect()
    }
}

impl Add for &Operator {
    type Output = Operator;

    fn add(self, rhs: &Operator) -> Operator {
        self.try_add(rhs).expect("operator dimensions differ")
    }
}

impl Sub for &Operator {
    type Output = Operator;

    fn sub(self, rhs: &Operator) -> Operator {
        self.try_sub(rhs).expect("operator dimensions differ")
    }
}

impl Mul for &Operator {
    type Output = Operator;

    fn mul(self, rhs: &Operator) -> Operator {
        self.try_mul(rhs).expect("operator dimensions differ")
    }
}

pub(crate) fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// Truncated bosonic annihilation operator on Fock levels `0..cutoff`.
pub fn annihilation(cutoff: usize) -> Result<Operator> {
    if cutoff < 2 {
        return Err(Error::InvalidDimension(format!(
            "Fock cutoff must be at least 2, got {cutoff}"
        )));
    }
    let mut data = DMatrix::zeros(cutoff, cutoff);
    for n in 1..cutoff {
        data[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    Operator::from_matrix(data)
}

pub fn creation(cutoff: usize) -> Result<Operator> {
    Ok(annihilation(cutoff)?.adjoint())
}

/// Number operator diag(0, 1, ..., cutoff-1).
pub fn number(cutoff: usize) -> Result<Operator> {
    if cutoff < 2 {
        return Err(Error::InvalidDimension(format!(
            "Fock cutoff must be at least 2, got {cutoff}"
        )));
    }
    let diag: Vec<f64> = (0..cutoff).map(|n| n as f64).collect();
    Ok(Operator::from_real_diagonal(&diag))
}

/// Two-level atom operators in the basis (|e>, |g>).
#[derive(Clone, Debug)]
pub struct AtomicOps {
    pub sigma_z: Operator,
    pub sigma_plus: Operator,
    pub sigma_minus: Operator,
}

pub fn atomic_ops() -> AtomicOps {
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    // |e> = index 0, |g> = index 1; sigma_+ |g> = |e>.
    let sigma_plus = DMatrix::from_row_slice(2, 2, &[zero, one, zero, zero]);
    let sigma_minus = sigma_plus.adjoint();
    let sigma_z = DMatrix::from_row_slice(2, 2, &[one, zero, zero, -one]);
    AtomicOps {
        sigma_z: Operator::from_matrix(sigma_z).unwrap(),
        sigma_plus: Operator::from_matrix(sigma_plus).unwrap(),
        sigma_minus: Operator::from_matrix(sigma_minus).unwrap(),
    }
}

/// Pauli sigma_y in the (|e>, |g>) basis.
pub fn sigma_y() -> Operator {
    let zero = C64::new(0.0, 0.0);
    let i = C64::new(0.0, 1.0);
    Operator::from_matrix(DMatrix::from_row_slice(2, 2, &[zero, -i, i, zero])).unwrap()
}
