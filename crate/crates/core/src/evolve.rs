//! Time grids, propagators and trajectories.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::qops::{BlockEig, BlockUnitary, CompositeSpace, Operator, SparseOperator, UnitaryBlock};
use crate::states::PreparedState;
use crate::C64;

/// Top-level population above which a trajectory is flagged.
pub const LEAKAGE_WARN: f64 = 1e-6;
/// Top-level population above which a trajectory is rejected.
pub const LEAKAGE_FAIL: f64 = 1e-3;
/// Factor eigenvalues at or below this are dropped when a mixed state is
/// split into kets.
pub const ENSEMBLE_TOL: f64 = 1e-14;
/// Largest ensemble propagated ket by ket; bigger ones use the density matrix.
pub const MAX_ENSEMBLE: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    t_max: f64,
    points: usize,
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self {
            t_max: 25.0,
            points: 1001,
        }
    }
}

impl TimeGrid {
    pub fn new(t_max: f64, points: usize) -> Result<Self> {
        if !(t_max.is_finite() && t_max > 0.0) {
            return Err(Error::Config(format!(
                "t_max must be positive and finite, got {t_max}"
            )));
        }
        if points < 2 {
            return Err(Error::Config(format!(
                "a time grid needs at least 2 points, got {points}"
            )));
        }
        Ok(Self { t_max, points })
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn step(&self) -> f64 {
        self.t_max / (self.points - 1) as f64
    }

    pub fn time(&self, k: usize) -> f64 {
        if k + 1 == self.points {
            self.t_max
        } else {
            k as f64 * self.step()
        }
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.points).map(|k| self.time(k)).collect()
    }
}

/// `exp(-i H t)` for any `t`, sharing one block eigendecomposition of `H`.
#[derive(Clone, Debug)]
pub struct Propagator {
    eig: BlockEig,
    dims: Vec<usize>,
}

impl Propagator {
    pub fn new(h: &SparseOperator) -> Result<Self> {
        Ok(Self {
            eig: BlockEig::from_sparse(h)?,
            dims: h.dims().to_vec(),
        })
    }

    pub fn from_operator(h: &Operator) -> Result<Self> {
        Ok(Self {
            eig: BlockEig::from_operator(h)?,
            dims: h.dims().to_vec(),
        })
    }

    pub fn unitary(&self, t: f64) -> BlockUnitary {
        self.eig.unitary(t)
    }

    pub fn operator(&self, t: f64) -> Operator {
        self.unitary(t).to_operator(self.dims.clone())
    }

    pub fn eig(&self) -> &BlockEig {
        &self.eig
    }
}

/// `U(t) = exp(-i H t)` as a dense operator.
pub fn propagator(h: &Operator, t: f64) -> Result<Operator> {
    Ok(Propagator::from_operator(h)?.operator(t))
}

/// Closed-form single-cavity map in the basis `(atom, n)` flattened as
/// `atom * N + n`, returned as blocks.
fn cavity_blocks(cutoff: usize, g: f64, t: f64) -> Vec<(Vec<usize>, DMatrix<C64>)> {
    let n = cutoff;
    let e = |k: usize| k;
    let gr = |k: usize| n + k;
    let mut blocks = vec![(vec![gr(0)], DMatrix::identity(1, 1))];
    for k in 1..n {
        // |e,k-1> -> cos|e,k-1> - i sin|g,k>; |g,k> -> cos|g,k> - i sin|e,k-1>
        let w = g * (k as f64).sqrt() * t;
        let (s, c) = w.sin_cos();
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[C64::new(c, 0.0), C64::new(0.0, -s), C64::new(0.0, -s), C64::new(c, 0.0)],
        );
        blocks.push((vec![e(k - 1), gr(k)], m));
    }
    // The top excited level has no partner inside the truncated space.
    blocks.push((vec![e(n - 1)], DMatrix::identity(1, 1)));
    blocks
}

/// Closed-form propagator of the resonant bare model in block form.
pub fn analytic_block_unitary(space: &CompositeSpace, g: f64, t: f64) -> BlockUnitary {
    let n = space.cutoff();
    let cav = cavity_blocks(n, g, t);
    let mut blocks = Vec::with_capacity(cav.len() * cav.len());
    for (ia, ma) in &cav {
        for (ib, mb) in &cav {
            let indices: Vec<usize> = ia
                .iter()
                .flat_map(|&pa| {
                    ib.iter().map(move |&pb| {
                        let (atom_a, na) = (pa / n, pa % n);
                        let (atom_b, nb) = (pb / n, pb % n);
                        space.index(atom_a, atom_b, na, nb)
                    })
                })
                .collect();
            blocks.push(UnitaryBlock {
                indices,
                matrix: ma.kronecker(mb),
            });
        }
    }
    BlockUnitary::from_blocks(space.dim(), blocks).expect("cavity blocks partition the space")
}

/// Closed-form propagator of the resonant bare model.
pub fn analytic_propagator(space: &CompositeSpace, g: f64, t: f64) -> Operator {
    analytic_block_unitary(space, g, t).to_operator(space.dims().to_vec())
}

/// Source of `U(t)` for a trajectory.
#[derive(Clone, Debug)]
pub enum Evolution {
    Numeric(Propagator),
    /// Closed-form resonant bare model with coupling `g`.
    Analytic { g: f64 },
}

impl Evolution {
    pub fn unitary(&self, space: &CompositeSpace, t: f64) -> BlockUnitary {
        match self {
            Evolution::Numeric(p) => p.unitary(t),
            Evolution::Analytic { g } => analytic_block_unitary(space, *g, t),
        }
    }
}

/// Initial state in the form it is propagated.
#[derive(Clone, Debug)]
pub enum InitialState {
    /// `rho = sum_k w_k |psi_k><psi_k|`.
    Kets(Vec<(f64, DVector<C64>)>),
    Dense(Arc<DMatrix<C64>>),
}

impl InitialState {
    /// Kets when the state is pure or splits into at most [`MAX_ENSEMBLE`]
    /// terms, otherwise the full density matrix.
    pub fn from_prepared(p: &PreparedState) -> Result<Self> {
        if p.purity_hint() {
            if let Some(k) = p.ket() {
                return Ok(InitialState::Kets(vec![(1.0, k)]));
            }
        }
        if p.ensemble_size(ENSEMBLE_TOL)? <= MAX_ENSEMBLE {
            Ok(InitialState::Kets(p.ensemble(ENSEMBLE_TOL)?))
        } else {
            Ok(InitialState::Dense(Arc::new(p.rho().into_matrix())))
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            InitialState::Kets(k) => k.first().map_or(0, |(_, v)| v.len()),
            InitialState::Dense(m) => m.nrows(),
        }
    }

    pub fn evolve(&self, u: &BlockUnitary) -> EvolvedState {
        match self {
            InitialState::Kets(kets) => {
                EvolvedState::Kets(kets.iter().map(|(w, v)| (*w, u.apply(v))).collect())
            }
            InitialState::Dense(rho) => EvolvedState::Dense {
                rho0: Arc::clone(rho),
                unitary: u.clone(),
            },
        }
    }

    /// Diagonal of `U rho U^dagger` without forming the product.
    fn evolved_diagonal(&self, u: &BlockUnitary) -> Vec<f64> {
        let mut diag = vec![0.0; u.dim()];
        match self {
            InitialState::Kets(kets) => {
                for (w, v) in kets {
                    let uv = u.apply(v);
                    for (d, x) in diag.iter_mut().zip(uv.iter()) {
                        *d += w * x.norm_sqr();
                    }
                }
            }
            InitialState::Dense(rho) => {
                for b in u.blocks() {
                    let idx = &b.indices;
                    let local = DMatrix::from_fn(idx.len(), idx.len(), |r, c| rho[(idx[r], idx[c])]);
                    let out = &b.matrix * local * b.matrix.adjoint();
                    for (r, &gi) in idx.iter().enumerate() {
                        diag[gi] = out[(r, r)].re;
                    }
                }
            }
        }
        diag
    }
}

/// State at one time point.
#[derive(Clone, Debug)]
pub enum EvolvedState {
    Kets(Vec<(f64, DVector<C64>)>),
    /// `U rho0 U^dagger`, kept unexpanded; reductions read only the entries
    /// they need.
    Dense {
        rho0: Arc<DMatrix<C64>>,
        unitary: BlockUnitary,
    },
}

impl EvolvedState {
    pub fn rho(&self, space: &CompositeSpace) -> Operator {
        let m = match self {
            EvolvedState::Kets(kets) => {
                let d = space.dim();
                let mut m = DMatrix::zeros(d, d);
                for (w, v) in kets {
                    m += (v * v.adjoint()).scale(*w);
                }
                m
            }
            EvolvedState::Dense { rho0, unitary } => unitary.conjugate(rho0),
        };
        Operator::new(m, space.dims().to_vec()).expect("state side matches the space")
    }
}

/// Lazily evaluated `rho(t_k) = U(t_k) rho_0 U(t_k)^dagger` over a grid.
///
/// Only the per-time diagnostics are computed up front; states are produced
/// on request so a long grid never holds more than a few density matrices.
#[derive(Clone, Debug)]
pub struct Trajectory {
    space: CompositeSpace,
    grid: TimeGrid,
    evolution: Evolution,
    initial: InitialState,
    trace_err: Vec<f64>,
    leakage: Vec<f64>,
    warnings: Vec<String>,
}

impl Trajectory {
    pub fn new(
        space: CompositeSpace,
        initial: InitialState,
        evolution: Evolution,
        grid: TimeGrid,
    ) -> Result<Self> {
        if initial.dim() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                actual: initial.dim(),
            });
        }
        let n = space.cutoff();
        let top: Vec<bool> = (0..space.dim())
            .map(|i| {
                let [_, _, na, nb] = space.decompose(i);
                na + 2 >= n || nb + 2 >= n
            })
            .collect();
        let mut trace_err = Vec::with_capacity(grid.points());
        let mut leakage: Vec<f64> = Vec::with_capacity(grid.points());
        for t in grid.times() {
            let diag = initial.evolved_diagonal(&evolution.unitary(&space, t));
            trace_err.push((diag.iter().sum::<f64>() - 1.0).abs());
            leakage.push(
                diag.iter()
                    .zip(&top)
                    .filter(|(_, &is_top)| is_top)
                    .map(|(p, _)| p.max(0.0))
                    .sum(),
            );
        }
        let mut warnings = Vec::new();
        if let Some((k, &worst)) = leakage
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
        {
            if worst > LEAKAGE_FAIL {
                return Err(Error::Leakage {
                    leakage: worst,
                    time: grid.time(k),
                    cutoff: n,
                });
            }
            if worst > LEAKAGE_WARN {
                warnings.push(format!(
                    "population in the top two Fock levels reaches {worst:.3e} at gt = {:.4} (cutoff {n})",
                    grid.time(k)
                ));
            }
        }
        Ok(Self {
            space,
            grid,
            evolution,
            initial,
            trace_err,
            leakage,
            warnings,
        })
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.grid.points()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn initial(&self) -> &InitialState {
        &self.initial
    }

    /// `|Tr rho(t_k) - 1|`.
    pub fn trace_err(&self) -> &[f64] {
        &self.trace_err
    }

    /// Population in the top two Fock levels of either field.
    pub fn leakage(&self) -> &[f64] {
        &self.leakage
    }

    pub fn max_leakage(&self) -> f64 {
        self.leakage.iter().copied().fold(0.0, f64::max)
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn unitary(&self, k: usize) -> BlockUnitary {
        self.evolution.unitary(&self.space, self.grid.time(k))
    }

    pub fn state(&self, k: usize) -> EvolvedState {
        self.initial.evolve(&self.unitary(k))
    }

    pub fn rho(&self, k: usize) -> Operator {
        self.state(k).rho(&self.space)
    }
}

/// Evolve a prepared state under a generator over a grid.
pub fn trajectory(rho0: &PreparedState, h: &SparseOperator, grid: TimeGrid) -> Result<Trajectory> {
    let space = *rho0.space();
    if h.dim() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            actual: h.dim(),
        });
    }
    Trajectory::new(
        space,
        InitialState::from_prepared(rho0)?,
        Evolution::Numeric(Propagator::new(h)?),
        grid,
    )
}

/// Same as [`trajectory`] with the closed-form bare-model propagator.
pub fn analytic_trajectory(rho0: &PreparedState, g: f64, grid: TimeGrid) -> Result<Trajectory> {
    Trajectory::new(
        *rho0.space(),
        InitialState::from_prepared(rho0)?,
        Evolution::Analytic { g },
        grid,
    )
}
