#![allow(dead_code)]

use djcm::qops::{unitary_exp, Operator};
use djcm::C64;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut impl Rng, rows: usize, cols: usize) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> DMatrix<C64> {
    let m = random_complex(rng, n, n);
    (&m + m.adjoint()).scale(0.5)
}

/// Random density matrix of the given rank.
pub fn random_density(rng: &mut impl Rng, n: usize, rank: usize) -> DMatrix<C64> {
    let g = random_complex(rng, n, rank);
    let rho = &g * g.adjoint();
    let tr = rho.trace().re;
    rho.unscale(tr)
}

pub fn random_unitary(rng: &mut impl Rng, n: usize) -> DMatrix<C64> {
    let h = Operator::from_matrix(random_hermitian(rng, n).scale(3.0)).unwrap();
    unitary_exp(&h, 1.0).unwrap().into_matrix()
}

pub fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a.kronecker(b)
}

pub fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

use djcm::entangle::{measure_trajectory, EntanglementSeries};
use djcm::evolve::{trajectory, TimeGrid};
use djcm::hamiltonian::{build_sparse, free_terms, ModelParams};
use djcm::qops::CompositeSpace;
use djcm::states::PreparedState;

/// Largest change of any measure when the local free terms `w/2 (sz_A + sz_B)
/// + w (n_a + n_b)` are added to the interaction-picture generator.
pub fn local_picture_deviation(p: &PreparedState, model: &ModelParams, w: f64, grid: TimeGrid) -> f64 {
    let space: CompositeSpace = *p.space();
    let h = build_sparse(model, &space).unwrap();
    let full = h.try_add(&free_terms(&space, 0.5 * w, w).unwrap()).unwrap();
    let a = measure_trajectory(&trajectory(p, &h, grid).unwrap()).unwrap();
    let b = measure_trajectory(&trajectory(p, &full, grid).unwrap()).unwrap();
    series_deviation(&a, &b)
}

pub fn series_deviation(a: &EntanglementSeries, b: &EntanglementSeries) -> f64 {
    [
        max_diff(&a.c_atoms, &b.c_atoms),
        max_diff(&a.n_atom_field_a, &b.n_atom_field_a),
        max_diff(&a.n_atom_field_b, &b.n_atom_field_b),
        max_diff(&a.n_fields, &b.n_fields),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}
