//! Reduced states, concurrence, negativity and sudden-death intervals.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::evolve::{EvolvedState, Trajectory};
use crate::qops::{
    dense_herm_eig, herm_eigenvalues, sigma_y, BlockUnitary, CompositeSpace, Factor, Operator,
};
use crate::C64;

/// Two-qubit states with an eigenvalue below this are rejected by [`concurrence`].
pub const PSD_TOL: f64 = 1e-8;
/// Default threshold under which an entanglement measure counts as zero.
pub const ESD_THRESHOLD: f64 = 1e-6;
/// Marginal eigenvalues below this fraction of the trace are outside the
/// support used by [`negativity`].
pub const SUPPORT_TOL: f64 = 1e-15;

/// A pair of distinct factors kept by a partial trace, in canonical order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BipartiteCut {
    first: Factor,
    second: Factor,
}

impl BipartiteCut {
    pub const ATOMS: BipartiteCut = BipartiteCut {
        first: Factor::AtomA,
        second: Factor::AtomB,
    };
    pub const ATOM_A_FIELD_A: BipartiteCut = BipartiteCut {
        first: Factor::AtomA,
        second: Factor::FieldA,
    };
    pub const ATOM_A_FIELD_B: BipartiteCut = BipartiteCut {
        first: Factor::AtomA,
        second: Factor::FieldB,
    };
    pub const FIELDS: BipartiteCut = BipartiteCut {
        first: Factor::FieldA,
        second: Factor::FieldB,
    };

    /// The factors are reordered into global order.
    pub fn new(x: Factor, y: Factor) -> Result<Self> {
        if x == y {
            return Err(Error::InvalidDimension(format!(
                "a cut needs two distinct factors, got {} twice",
                x.label()
            )));
        }
        let (first, second) = if x.slot() < y.slot() { (x, y) } else { (y, x) };
        Ok(Self { first, second })
    }

    pub fn first(&self) -> Factor {
        self.first
    }

    pub fn second(&self) -> Factor {
        self.second
    }

    pub fn dims(&self, space: &CompositeSpace) -> (usize, usize) {
        (space.factor_dim(self.first), space.factor_dim(self.second))
    }

    pub fn label(&self) -> String {
        format!("{}{}", self.first.label(), self.second.label())
    }

    /// `map[k * T + tau]` is the full index with kept index `k` and traced index `tau`.
    fn index_map(&self, space: &CompositeSpace) -> (usize, usize, Vec<usize>) {
        let dims = space.dims();
        let (s1, s2) = (self.first.slot(), self.second.slot());
        let traced: Vec<usize> = (0..4).filter(|&s| s != s1 && s != s2).collect();
        let (t1, t2) = (traced[0], traced[1]);
        let kept = dims[s1] * dims[s2];
        let rest = dims[t1] * dims[t2];
        let mut map = vec![0usize; kept * rest];
        for k1 in 0..dims[s1] {
            for k2 in 0..dims[s2] {
                for u1 in 0..dims[t1] {
                    for u2 in 0..dims[t2] {
                        let mut idx = [0usize; 4];
                        idx[s1] = k1;
                        idx[s2] = k2;
                        idx[t1] = u1;
                        idx[t2] = u2;
                        let full = space.index(idx[0], idx[1], idx[2], idx[3]);
                        map[(k1 * dims[s2] + k2) * rest + u1 * dims[t2] + u2] = full;
                    }
                }
            }
        }
        (kept, rest, map)
    }
}

/// Reduced density matrix on the cut's factors.
pub fn partial_trace(rho: &Operator, space: &CompositeSpace, cut: BipartiteCut) -> Result<Operator> {
    if rho.dim() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            actual: rho.dim(),
        });
    }
    let (d1, d2) = cut.dims(space);
    Operator::new(trace_dense(rho.matrix(), space, cut), vec![d1, d2])
}

fn trace_dense(rho: &DMatrix<C64>, space: &CompositeSpace, cut: BipartiteCut) -> DMatrix<C64> {
    let (kept, rest, map) = cut.index_map(space);
    DMatrix::from_fn(kept, kept, |i, j| {
        (0..rest)
            .map(|tau| rho[(map[i * rest + tau], map[j * rest + tau])])
            .sum()
    })
}

/// Columns `sqrt(w) psi[k, tau]` whose Gram matrix `C C^dagger` is the
/// reduced state of a ket ensemble.
fn ket_columns(kets: &[(f64, DVector<C64>)], space: &CompositeSpace, cut: BipartiteCut) -> DMatrix<C64> {
    let (kept, rest, map) = cut.index_map(space);
    let mut cols = DMatrix::zeros(kept, rest * kets.len());
    for (n, (w, psi)) in kets.iter().enumerate() {
        let s = w.max(0.0).sqrt();
        for tau in 0..rest {
            for i in 0..kept {
                cols[(i, n * rest + tau)] = psi[map[i * rest + tau]] * s;
            }
        }
    }
    cols
}

fn trace_kets(kets: &[(f64, DVector<C64>)], space: &CompositeSpace, cut: BipartiteCut) -> DMatrix<C64> {
    let c = ket_columns(kets, space, cut);
    &c * c.adjoint()
}

/// Reduced state of an evolved state on a cut, as a plain matrix.
pub fn reduce(state: &EvolvedState, space: &CompositeSpace, cut: BipartiteCut) -> DMatrix<C64> {
    match state {
        EvolvedState::Kets(kets) => trace_kets(kets, space, cut),
        EvolvedState::Dense { rho0, unitary } => trace_conjugated(rho0, unitary, space, cut),
    }
}

/// Reduced state of `U rho0 U^dagger` without forming the full product.
fn trace_conjugated(
    rho0: &DMatrix<C64>,
    unitary: &BlockUnitary,
    space: &CompositeSpace,
    cut: BipartiteCut,
) -> DMatrix<C64> {
    let (kept, rest, map) = cut.index_map(space);
    let rows = unitary.rows();
    let mut out = DMatrix::zeros(kept, kept);
    for i in 0..kept {
        for j in i..kept {
            let z: C64 = (0..rest)
                .map(|tau| rows.conjugated_entry(rho0, map[i * rest + tau], map[j * rest + tau]))
                .sum();
            out[(i, j)] = z;
            out[(j, i)] = z.conj();
        }
    }
    for i in 0..kept {
        out[(i, i)].im = 0.0;
    }
    out
}

/// Wootters concurrence of a two-qubit density matrix.
///
/// Computed as the singular values of `tau_ij = <v_i| (sigma_y x sigma_y) |v_j*>`
/// over the subnormalized eigenvectors `v_i = sqrt(p_i) e_i`, which equal the
/// square roots of the spin-flip spectrum without taking roots of tiny numbers.
pub fn concurrence(rho: &DMatrix<C64>) -> Result<f64> {
    if rho.nrows() != 4 || rho.ncols() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            actual: rho.nrows(),
        });
    }
    let herm = (rho + rho.adjoint()).scale(0.5);
    let (vals, vecs) = dense_herm_eig(herm)?;
    if vals[0] < -PSD_TOL {
        return Err(Error::NotDensityMatrix(format!(
            "two-qubit state has eigenvalue {:.3e}",
            vals[0]
        )));
    }
    let v = DMatrix::from_fn(4, 4, |i, j| vecs[(i, j)] * vals[j].max(0.0).sqrt());
    let y = sigma_y();
    let yy = y.matrix().kronecker(y.matrix());
    let tau = v.adjoint() * yy * v.map(|z| z.conj());
    let mut xi: Vec<f64> = tau.singular_values().iter().copied().collect();
    xi.sort_by(|a, b| b.total_cmp(a));
    Ok((xi[0] - xi[1] - xi[2] - xi[3]).max(0.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Transpose the indices of one factor of a `d1 x d2` bipartite matrix.
pub fn partial_transpose(
    rho: &DMatrix<C64>,
    dims: (usize, usize),
    subsystem: Subsystem,
) -> Result<DMatrix<C64>> {
    let (d1, d2) = dims;
    if rho.nrows() != d1 * d2 || rho.ncols() != d1 * d2 {
        return Err(Error::DimensionMismatch {
            expected: d1 * d2,
            actual: rho.nrows(),
        });
    }
    Ok(DMatrix::from_fn(d1 * d2, d1 * d2, |r, c| {
        let (i1, i2) = (r / d2, r % d2);
        let (j1, j2) = (c / d2, c % d2);
        match subsystem {
            Subsystem::First => rho[(j1 * d2 + i2, i1 * d2 + j2)],
            Subsystem::Second => rho[(i1 * d2 + j2, j1 * d2 + i2)],
        }
    }))
}

/// Isometry onto the eigenvectors of `m` with eigenvalue above `cut`.
fn support(m: DMatrix<C64>, cut: f64) -> Result<DMatrix<C64>> {
    let (vals, vecs) = dense_herm_eig(m)?;
    let keep: Vec<usize> = (0..vals.len()).filter(|&k| vals[k] > cut).collect();
    Ok(DMatrix::from_fn(vecs.nrows(), keep.len(), |i, j| vecs[(i, keep[j])]))
}

/// Negativity `sum_k (|x_k| - x_k) / 2` over the spectrum of the partial
/// transpose on the second factor.
///
/// The state is first compressed onto `supp(rho_1) (x) supp(rho_2)`, which
/// contains its support, so low-rank states of large modes reduce to small
/// eigenproblems.
pub fn negativity(rho: &DMatrix<C64>, dims: (usize, usize)) -> Result<f64> {
    let (d1, d2) = dims;
    if rho.nrows() != d1 * d2 || rho.ncols() != d1 * d2 {
        return Err(Error::DimensionMismatch {
            expected: d1 * d2,
            actual: rho.nrows(),
        });
    }
    let tr = rho.trace().re.abs().max(f64::MIN_POSITIVE);
    let marginal_1 = DMatrix::from_fn(d1, d1, |i, j| (0..d2).map(|k| rho[(i * d2 + k, j * d2 + k)]).sum());
    let marginal_2 = DMatrix::from_fn(d2, d2, |i, j| (0..d1).map(|k| rho[(k * d2 + i, k * d2 + j)]).sum());
    let p1 = support(marginal_1, SUPPORT_TOL * tr)?;
    let p2 = support(marginal_2, SUPPORT_TOL * tr)?;
    let (r1, r2) = (p1.ncols(), p2.ncols());
    let compressed = if r1 * r2 < d1 * d2 {
        let iso = p1.kronecker(&p2);
        iso.adjoint() * rho * iso
    } else {
        rho.clone()
    };
    negativity_exact(&compressed, (r1, r2))
}

/// [`negativity`] of `rho = C C^dagger` given the columns `C`.
///
/// With fewer columns than the bipartite dimension the marginals and the
/// support compression are formed from `C` directly, never building `rho`.
pub fn negativity_from_columns(c: &DMatrix<C64>, dims: (usize, usize)) -> Result<f64> {
    let (d1, d2) = dims;
    if c.nrows() != d1 * d2 {
        return Err(Error::DimensionMismatch {
            expected: d1 * d2,
            actual: c.nrows(),
        });
    }
    if c.ncols() >= d1 * d2 {
        return negativity(&(c * c.adjoint()), dims);
    }
    let blocks: Vec<DMatrix<C64>> = (0..c.ncols())
        .map(|k| DMatrix::from_fn(d1, d2, |i, j| c[(i * d2 + j, k)]))
        .collect();
    let mut marginal_1 = DMatrix::zeros(d1, d1);
    let mut marginal_2 = DMatrix::zeros(d2, d2);
    for x in &blocks {
        marginal_1 += x * x.adjoint();
        marginal_2 += x.transpose() * x.map(|z| z.conj());
    }
    let tr = marginal_1.trace().re.abs().max(f64::MIN_POSITIVE);
    let p1 = support(marginal_1, SUPPORT_TOL * tr)?;
    let p2 = support(marginal_2, SUPPORT_TOL * tr)?;
    let (r1, r2) = (p1.ncols(), p2.ncols());
    let p1h = p1.adjoint();
    let p2c = p2.map(|z| z.conj());
    let mut compressed = DMatrix::zeros(r1 * r2, blocks.len());
    for (k, x) in blocks.iter().enumerate() {
        let y = &p1h * x * &p2c;
        for i in 0..r1 {
            for j in 0..r2 {
                compressed[(i * r2 + j, k)] = y[(i, j)];
            }
        }
    }
    negativity_exact(&(&compressed * compressed.adjoint()), (r1, r2))
}

/// Negativity from the full partial-transpose spectrum, with no compression.
pub fn negativity_exact(rho: &DMatrix<C64>, dims: (usize, usize)) -> Result<f64> {
    if dims.0 == 0 || dims.1 == 0 {
        return Ok(0.0);
    }
    let pt = partial_transpose(rho, dims, Subsystem::Second)?;
    let pt = (&pt + pt.adjoint()).scale(0.5);
    Ok(herm_eigenvalues(&pt)
        .iter()
        .map(|&x| (x.abs() - x) / 2.0)
        .sum())
}

/// The four measures at one time point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntanglementPoint {
    /// Atom A - atom B concurrence.
    pub c_atoms: f64,
    /// Atom A - field a negativity.
    pub n_atom_field_a: f64,
    /// Atom A - field b negativity.
    pub n_atom_field_b: f64,
    /// Field a - field b negativity.
    pub n_fields: f64,
}

pub fn measure_state(state: &EvolvedState, space: &CompositeSpace) -> Result<EntanglementPoint> {
    let neg = |cut: BipartiteCut| match state {
        EvolvedState::Kets(kets) => {
            negativity_from_columns(&ket_columns(kets, space, cut), cut.dims(space))
        }
        EvolvedState::Dense { .. } => negativity(&reduce(state, space, cut), cut.dims(space)),
    };
    Ok(EntanglementPoint {
        c_atoms: concurrence(&reduce(state, space, BipartiteCut::ATOMS))?,
        n_atom_field_a: neg(BipartiteCut::ATOM_A_FIELD_A)?,
        n_atom_field_b: neg(BipartiteCut::ATOM_A_FIELD_B)?,
        n_fields: neg(BipartiteCut::FIELDS)?,
    })
}

/// Entanglement time series with the trajectory's diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct EntanglementSeries {
    pub gt: Vec<f64>,
    pub c_atoms: Vec<f64>,
    pub n_atom_field_a: Vec<f64>,
    pub n_atom_field_b: Vec<f64>,
    pub n_fields: Vec<f64>,
    pub trace_err: Vec<f64>,
    pub leakage: Vec<f64>,
    pub warnings: Vec<String>,
}

impl EntanglementSeries {
    pub fn len(&self) -> usize {
        self.gt.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gt.is_empty()
    }

    pub fn point(&self, k: usize) -> EntanglementPoint {
        EntanglementPoint {
            c_atoms: self.c_atoms[k],
            n_atom_field_a: self.n_atom_field_a[k],
            n_atom_field_b: self.n_atom_field_b[k],
            n_fields: self.n_fields[k],
        }
    }
}

/// All four measures at every grid point; time points run in parallel.
pub fn measure_trajectory(traj: &Trajectory) -> Result<EntanglementSeries> {
    let space = *traj.space();
    let points: Vec<EntanglementPoint> = (0..traj.len())
        .into_par_iter()
        .map(|k| measure_state(&traj.state(k), &space))
        .collect::<Result<_>>()?;
    Ok(EntanglementSeries {
        gt: traj.grid().times(),
        c_atoms: points.iter().map(|p| p.c_atoms).collect(),
        n_atom_field_a: points.iter().map(|p| p.n_atom_field_a).collect(),
        n_atom_field_b: points.iter().map(|p| p.n_atom_field_b).collect(),
        n_fields: points.iter().map(|p| p.n_fields).collect(),
        trace_err: traj.trace_err().to_vec(),
        leakage: traj.leakage().to_vec(),
        warnings: traj.warnings().to_vec(),
    })
}

/// Atom-atom concurrence only, skipping the negativities.
pub fn concurrence_series(traj: &Trajectory) -> Result<Vec<f64>> {
    let space = *traj.space();
    (0..traj.len())
        .into_par_iter()
        .map(|k| concurrence(&reduce(&traj.state(k), &space, BipartiteCut::ATOMS)))
        .collect()
}

/// Maximal intervals on which `series < threshold`, with endpoints linearly
/// interpolated to the threshold crossing. A run that begins at the first grid
/// point is not a death and is skipped; a run reaching the last point ends there.
pub fn esd_intervals(series: &[f64], gt: &[f64], threshold: f64) -> Vec<(f64, f64)> {
    assert_eq!(series.len(), gt.len(), "series and grid differ in length");
    let crossing = |k0: usize, k1: usize| {
        let (a, b) = (series[k0], series[k1]);
        if a == b {
            return gt[k1];
        }
        let f = ((a - threshold) / (a - b)).clamp(0.0, 1.0);
        gt[k0] + f * (gt[k1] - gt[k0])
    };
    let below: Vec<bool> = series.iter().map(|&v| v < threshold).collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < series.len() {
        if !below[k] {
            k += 1;
            continue;
        }
        let start = k;
        while k < series.len() && below[k] {
            k += 1;
        }
        if start == 0 {
            continue;
        }
        let t0 = crossing(start - 1, start);
        let t1 = if k == series.len() {
            gt[k - 1]
        } else {
            crossing(k, k - 1)
        };
        out.push((t0, t1));
    }
    out
}

/// Summed length of the intervals from [`esd_intervals`].
pub fn total_esd_duration(series: &[f64], gt: &[f64], threshold: f64) -> f64 {
    esd_intervals(series, gt, threshold)
        .iter()
        .map(|(a, b)| b - a)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qops::atomic_ops;
    use crate::states::{bell_atoms, werner_atoms};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn projector(v: &DVector<C64>) -> DMatrix<C64> {
        v * v.adjoint()
    }

    #[test]
    fn cut_construction() {
        let c = BipartiteCut::new(Factor::FieldB, Factor::AtomA).unwrap();
        assert_eq!(c, BipartiteCut::ATOM_A_FIELD_B);
        assert!(BipartiteCut::new(Factor::FieldA, Factor::FieldA).is_err());
        assert_eq!(BipartiteCut::FIELDS.label(), "ab");
    }

    #[test]
    fn product_state_trace() {
        let s = CompositeSpace::new(3).unwrap();
        let atoms = projector(&bell_atoms(0.4));
        let fa = DMatrix::from_fn(3, 3, |i, j| C64::new(if i == j { [0.5, 0.3, 0.2][i] } else { 0.0 }, 0.0));
        let fb = DMatrix::from_fn(3, 3, |i, j| C64::new(if i == 0 && j == 0 { 1.0 } else { 0.0 }, 0.0));
        let rho = Operator::new(atoms.kronecker(&fa).kronecker(&fb), s.dims().to_vec()).unwrap();
        let r = partial_trace(&rho, &s, BipartiteCut::ATOMS).unwrap();
        assert!(crate::qops::max_abs(&(r.matrix() - &atoms)) < 1e-15);
        let r = partial_trace(&rho, &s, BipartiteCut::FIELDS).unwrap();
        assert!(crate::qops::max_abs(&(r.matrix() - fa.kronecker(&fb))) < 1e-15);
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        // Trace out atom B from the 2-qubit Bell state embedded with vacuum fields.
        let s = CompositeSpace::new(2).unwrap();
        let mut vac = DVector::zeros(2);
        vac[0] = C64::new(1.0, 0.0);
        let psi = bell_atoms(FRAC_PI_4).kronecker(&vac).kronecker(&vac);
        let rho = Operator::projector(&psi);
        let r = partial_trace(&rho, &s, BipartiteCut::ATOM_A_FIELD_A).unwrap();
        // Atom A is I/2, field a is |0><0|.
        let m = r.matrix();
        assert!((m[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!((m[(2, 2)].re - 0.5).abs() < 1e-15);
        assert!(m[(0, 2)].norm() < 1e-15);
    }

    #[test]
    fn concurrence_examples() {
        assert!((concurrence(&projector(&bell_atoms(FRAC_PI_4))).unwrap() - 1.0).abs() < 1e-12);
        for theta in [0.1, 0.5, 1.0, 2.0] {
            let c = concurrence(&projector(&bell_atoms(theta))).unwrap();
            assert!((c - (2.0 * theta).sin().abs()).abs() < 1e-12);
        }
        assert!(concurrence(werner_atoms(0.25).unwrap().matrix()).unwrap() < 1e-15);
        assert!((concurrence(werner_atoms(0.75).unwrap().matrix()).unwrap() - 0.625).abs() < 1e-12);
        let excited = (&atomic_ops().sigma_plus * &atomic_ops().sigma_minus).into_matrix();
        let mixed = DMatrix::from_diagonal(&DVector::from_vec(vec![C64::new(0.3, 0.0), C64::new(0.7, 0.0)]));
        assert!(concurrence(&excited.kronecker(&mixed)).unwrap() < 1e-15);
    }

    #[test]
    fn concurrence_rejects_bad_input() {
        let bad = DMatrix::from_diagonal(&DVector::from_vec(vec![
            C64::new(1.2, 0.0),
            C64::new(-0.2, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
        ]));
        assert!(matches!(concurrence(&bad), Err(Error::NotDensityMatrix(_))));
        assert!(concurrence(&DMatrix::identity(3, 3)).is_err());
    }

    #[test]
    fn partial_transpose_properties() {
        let rho = projector(&bell_atoms(FRAC_PI_4));
        let pt = partial_transpose(&rho, (2, 2), Subsystem::Second).unwrap();
        assert_eq!(partial_transpose(&pt, (2, 2), Subsystem::Second).unwrap(), rho);
        let ev = herm_eigenvalues(&pt);
        let expected = [-0.5, 0.5, 0.5, 0.5];
        for (x, e) in ev.iter().zip(expected) {
            assert!((x - e).abs() < 1e-14);
        }
        let first = partial_transpose(&rho, (2, 2), Subsystem::First).unwrap();
        assert!((herm_eigenvalues(&first) - ev).amax() < 1e-14);
        assert!(partial_transpose(&rho, (3, 2), Subsystem::First).is_err());
    }

    #[test]
    fn negativity_examples() {
        let bell = projector(&bell_atoms(FRAC_PI_4));
        assert!((negativity(&bell, (2, 2)).unwrap() - 0.5).abs() < 1e-14);
        let a = DMatrix::from_fn(2, 2, |i, j| C64::new(0.3 + (i + j) as f64 * 0.1, 0.0));
        let a = (&a * a.adjoint()).unscale((&a * a.adjoint()).trace().re);
        let b = DMatrix::from_fn(3, 3, |i, j| C64::new(1.0 / (1.0 + i as f64 + j as f64), 0.0));
        let b = b.unscale(b.trace().re);
        assert!(negativity(&a.kronecker(&b), (2, 3)).unwrap() < 1e-14);
    }

    #[test]
    fn compression_is_exact_for_low_rank() {
        // Maximally entangled state of two 3-level systems padded into 6 levels each.
        let d = 6;
        let mut psi = DVector::zeros(d * d);
        for k in 0..3 {
            psi[k * d + k] = C64::new(1.0 / 3f64.sqrt(), 0.0);
        }
        let rho = projector(&psi);
        let full = negativity_exact(&rho, (d, d)).unwrap();
        assert!((full - 1.0).abs() < 1e-12);
        assert!((negativity(&rho, (d, d)).unwrap() - full).abs() < 1e-12);
        let cols = DMatrix::from_column_slice(d * d, 1, psi.as_slice());
        assert!((negativity_from_columns(&cols, (d, d)).unwrap() - full).abs() < 1e-12);
    }

    #[test]
    fn column_path_matches_matrix_path() {
        let (d1, d2, m) = (3, 5, 4);
        let c = DMatrix::from_fn(d1 * d2, m, |i, k| {
            C64::new(((i * 7 + k * 3) % 11) as f64 - 5.0, ((i + 2 * k) % 5) as f64 - 2.0)
        });
        let rho = &c * c.adjoint();
        let rho = rho.unscale(rho.trace().re);
        let c = c.unscale((&c * c.adjoint()).trace().re.sqrt());
        let a = negativity_exact(&rho, (d1, d2)).unwrap();
        assert!(a > 0.01);
        assert!((negativity_from_columns(&c, (d1, d2)).unwrap() - a).abs() < 1e-12);
        assert!((negativity(&rho, (d1, d2)).unwrap() - a).abs() < 1e-12);
    }

    #[test]
    fn esd_examples() {
        let gt: Vec<f64> = (0..=1000).map(|k| k as f64 * 0.01).collect();
        assert!(esd_intervals(&vec![0.3; gt.len()], &gt, 1e-6).is_empty());
        let s: Vec<f64> = gt.iter().map(|t| t.cos().max(0.0)).collect();
        let iv = esd_intervals(&s, &gt, 1e-6);
        assert_eq!(iv.len(), 2);
        assert!((iv[0].0 - FRAC_PI_2).abs() < 0.01);
        assert!((iv[0].1 - 3.0 * FRAC_PI_2).abs() < 0.01);
        assert!((iv[1].0 - 5.0 * FRAC_PI_2).abs() < 0.01);
        // Series that starts at zero: the initial run is not a death.
        let s: Vec<f64> = gt.iter().map(|t| t.sin().max(0.0)).collect();
        let iv = esd_intervals(&s, &gt, 1e-6);
        assert!((iv[0].0 - PI).abs() < 0.01);
        assert!((total_esd_duration(&s, &gt, 1e-6) - iv.iter().map(|(a, b)| b - a).sum::<f64>()).abs() < 1e-15);
    }
}
