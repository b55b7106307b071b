//! Generators for the four model variants, in the resonant interaction picture
//! (the detuned variant keeps its detuning term).

use crate::error::{Error, Result};
use crate::qops::{annihilation, atomic_ops, number, CompositeSpace, Factor, Operator, SparseOperator};
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Variant {
    Bare,
    /// Adds `jz sigma_z^A sigma_z^B`.
    Ising { jz: f64 },
    /// Adds `delta sigma_-^X sigma_+^X` for each atom.
    Detuned { delta: f64 },
    /// Adds `k omega (a^dagger^2 a^2 + b^dagger^2 b^2)`.
    Kerr { k: f64, omega: f64 },
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::Bare => "bare",
            Variant::Ising { .. } => "ising",
            Variant::Detuned { .. } => "detuned",
            Variant::Kerr { .. } => "kerr",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    /// Atom-field coupling; `g = 1` makes time read as `gt`.
    pub g: f64,
    pub variant: Variant,
}

impl ModelParams {
    pub fn bare() -> Self {
        Self {
            g: 1.0,
            variant: Variant::Bare,
        }
    }

    pub fn ising(jz: f64) -> Self {
        Self {
            g: 1.0,
            variant: Variant::Ising { jz },
        }
    }

    pub fn detuned(delta: f64) -> Self {
        Self {
            g: 1.0,
            variant: Variant::Detuned { delta },
        }
    }

    /// Kerr variant with `omega = 1`.
    pub fn kerr(k: f64) -> Self {
        Self {
            g: 1.0,
            variant: Variant::Kerr { k, omega: 1.0 },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.g.is_finite() && self.g > 0.0) {
            return Err(Error::Config(format!(
                "coupling g must be positive and finite, got {}",
                self.g
            )));
        }
        let finite = |name: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be finite, got {v}")))
            }
        };
        match self.variant {
            Variant::Bare => Ok(()),
            Variant::Ising { jz } => finite("jz", jz),
            Variant::Detuned { delta } => finite("delta", delta),
            Variant::Kerr { k, omega } => {
                finite("k", k)?;
                finite("omega", omega)
            }
        }
    }
}

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `g (a^dagger sigma_- + a sigma_+)` for one atom-cavity pair.
fn jaynes_cummings(space: &CompositeSpace, g: f64, atom: Factor, field: Factor) -> Result<SparseOperator> {
    let ops = atomic_ops();
    let a = annihilation(space.cutoff())?;
    let emit = SparseOperator::product(space, c(g), &[(atom, &ops.sigma_minus), (field, &a.adjoint())])?;
    let absorb = SparseOperator::product(space, c(g), &[(atom, &ops.sigma_plus), (field, &a)])?;
    emit.try_add(&absorb)
}

/// The generator in sparse form.
pub fn build_sparse(params: &ModelParams, space: &CompositeSpace) -> Result<SparseOperator> {
    params.validate()?;
    let g = params.g;
    let mut h = jaynes_cummings(space, g, Factor::AtomA, Factor::FieldA)?
        .try_add(&jaynes_cummings(space, g, Factor::AtomB, Factor::FieldB)?)?;
    let ops = atomic_ops();
    match params.variant {
        Variant::Bare => {}
        Variant::Ising { jz } => {
            let zz = SparseOperator::product(
                space,
                c(jz),
                &[(Factor::AtomA, &ops.sigma_z), (Factor::AtomB, &ops.sigma_z)],
            )?;
            h = h.try_add(&zz)?;
        }
        Variant::Detuned { delta } => {
            let lower = &ops.sigma_minus * &ops.sigma_plus;
            for atom in [Factor::AtomA, Factor::AtomB] {
                h = h.try_add(&SparseOperator::product(space, c(delta), &[(atom, &lower)])?)?;
            }
        }
        Variant::Kerr { k, omega } => {
            let a = annihilation(space.cutoff())?;
            let a2 = &a * &a;
            let pairs = &a2.adjoint() * &a2;
            for field in [Factor::FieldA, Factor::FieldB] {
                h = h.try_add(&SparseOperator::product(space, c(k * omega), &[(field, &pairs)])?)?;
            }
        }
    }
    Ok(h)
}

/// The generator as a dense matrix.
pub fn build(params: &ModelParams, space: &CompositeSpace) -> Result<Operator> {
    Ok(build_sparse(params, space)?.to_dense())
}

/// `sigma_+^A sigma_-^A + sigma_+^B sigma_-^B + n_a + n_b`.
pub fn excitation_operator_sparse(space: &CompositeSpace) -> Result<SparseOperator> {
    let ops = atomic_ops();
    let excited = &ops.sigma_plus * &ops.sigma_minus;
    let n = number(space.cutoff())?;
    let mut total = SparseOperator::zeros(&space.dims());
    for (factor, op) in [
        (Factor::AtomA, &excited),
        (Factor::AtomB, &excited),
        (Factor::FieldA, &n),
        (Factor::FieldB, &n),
    ] {
        total = total.try_add(&SparseOperator::product(space, c(1.0), &[(factor, op)])?)?;
    }
    Ok(total)
}

pub fn excitation_operator(space: &CompositeSpace) -> Result<Operator> {
    Ok(excitation_operator_sparse(space)?.to_dense())
}

/// Local free terms `omega (sigma_z^A + sigma_z^B) + nu (n_a + n_b)` that the
/// interaction picture removes.
pub fn free_terms(space: &CompositeSpace, omega: f64, nu: f64) -> Result<SparseOperator> {
    let ops = atomic_ops();
    let n = number(space.cutoff())?;
    let mut total = SparseOperator::zeros(&space.dims());
    for (factor, op, coef) in [
        (Factor::AtomA, &ops.sigma_z, omega),
        (Factor::AtomB, &ops.sigma_z, omega),
        (Factor::FieldA, &n, nu),
        (Factor::FieldB, &n, nu),
    ] {
        total = total.try_add(&SparseOperator::product(space, c(coef), &[(factor, op)])?)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_variants() -> Vec<ModelParams> {
        vec![
            ModelParams::bare(),
            ModelParams::ising(0.7),
            ModelParams::detuned(2.0),
            ModelParams::kerr(0.5),
        ]
    }

    #[test]
    fn bare_matrix_element() {
        let s = CompositeSpace::new(16).unwrap();
        let h = build_sparse(&ModelParams::bare(), &s).unwrap();
        let e_g_0_0 = s.index(0, 1, 0, 0);
        let g_g_1_0 = s.index(1, 1, 1, 0);
        assert!((h.get(e_g_0_0, g_g_1_0) - c(1.0)).norm() < 1e-15);
        // <e,n|H|g,n+1> = g sqrt(n+1)
        let e3 = s.index(1, 0, 5, 3);
        let g4 = s.index(1, 1, 5, 4);
        assert!((h.get(e3, g4) - c(2.0)).norm() < 1e-15);
    }

    #[test]
    fn ising_zero_is_bare() {
        let s = CompositeSpace::new(6).unwrap();
        let bare = build_sparse(&ModelParams::bare(), &s).unwrap();
        let ising = build_sparse(&ModelParams::ising(0.0), &s).unwrap();
        assert_eq!(bare, ising);
    }

    #[test]
    fn kerr_diagonal_shift() {
        let s = CompositeSpace::new(16).unwrap();
        let h = build_sparse(&ModelParams::kerr(0.5), &s).unwrap();
        let i = s.index(0, 0, 2, 0);
        assert!((h.get(i, i) - c(1.0)).norm() < 1e-15);
        let j = s.index(1, 1, 3, 4);
        // 0.5 * (3*2 + 4*3)
        assert!((h.get(j, j) - c(9.0)).norm() < 1e-14);
    }

    #[test]
    fn detuning_acts_on_ground_atoms() {
        let s = CompositeSpace::new(4).unwrap();
        let h = build_sparse(&ModelParams::detuned(2.0), &s).unwrap();
        let gg = s.index(1, 1, 0, 0);
        let ee = s.index(0, 0, 0, 0);
        let eg = s.index(0, 1, 0, 0);
        assert!((h.get(gg, gg) - c(4.0)).norm() < 1e-15);
        assert!(h.get(ee, ee).norm() < 1e-15);
        assert!((h.get(eg, eg) - c(2.0)).norm() < 1e-15);
    }

    #[test]
    fn excitation_eigenvalues() {
        let s = CompositeSpace::new(6).unwrap();
        let n = excitation_operator_sparse(&s).unwrap();
        let i = s.index(0, 1, 0, 0);
        assert!((n.get(i, i) - c(1.0)).norm() < 1e-15);
        let j = s.index(1, 1, 2, 3);
        assert!((n.get(j, j) - c(5.0)).norm() < 1e-15);
    }

    #[test]
    fn hermitian_and_conserving() {
        let s = CompositeSpace::new(6).unwrap();
        let n = excitation_operator_sparse(&s).unwrap();
        for p in all_variants() {
            let h = build_sparse(&p, &s).unwrap();
            assert!(h.hermiticity_error() < 1e-12, "{}", p.variant.name());
            assert!(h.commutator(&n).unwrap().max_abs() < 1e-10, "{}", p.variant.name());
        }
    }

    #[test]
    fn dense_matches_sparse() {
        let s = CompositeSpace::new(4).unwrap();
        for p in all_variants() {
            let d = build(&p, &s).unwrap();
            assert!(d.max_abs_diff(&build_sparse(&p, &s).unwrap().to_dense()) == 0.0);
            assert!(d.is_hermitian(1e-12));
        }
    }

    #[test]
    fn validation() {
        let s = CompositeSpace::new(4).unwrap();
        let mut p = ModelParams::bare();
        p.g = 0.0;
        assert!(matches!(build_sparse(&p, &s), Err(Error::Config(_))));
        assert!(build_sparse(&ModelParams::ising(f64::NAN), &s).is_err());
    }
}
