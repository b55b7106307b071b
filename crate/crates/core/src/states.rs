//! Field and atomic state preparation.
//!
//! Field states are built by exponentiating the exact displacement and
//! squeezing generators in a padded Fock space and truncating to the working
//! cutoff; the closed-form photon-counting distributions are kept separate so
//! they can serve as independent checks on the construction.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::qops::{annihilation, dense_herm_eig, unitary_exp, CompositeSpace, Factor, Operator};
use crate::C64;

/// Largest Fock-tail probability a field state may lose to truncation.
pub const TRUNCATION_LIMIT: f64 = 1e-6;

/// Below this, squeezed or thermal photon means are treated as zero.
pub const DEGENERATE_MEAN: f64 = 1e-12;

/// Padded-space amplitudes above this in the last few levels trigger a wider pad.
const PAD_TAIL_TOL: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FieldSpec {
    /// `D(alpha) S(r) |0>` with `nbar_c = alpha^2` and `nbar_s = sinh^2 r`.
    SqueezedCoherent { nbar_c: f64, nbar_s: f64 },
    /// `D(alpha) rho_th D(alpha)^dagger` with `nbar_c = alpha^2`.
    GlauberLachs { nbar_c: f64, nbar_th: f64 },
}

impl FieldSpec {
    pub fn scs(nbar_c: f64, nbar_s: f64) -> Self {
        FieldSpec::SqueezedCoherent { nbar_c, nbar_s }
    }

    pub fn gl(nbar_c: f64, nbar_th: f64) -> Self {
        FieldSpec::GlauberLachs { nbar_c, nbar_th }
    }

    pub fn validate(&self) -> Result<()> {
        let (a, b, name) = match *self {
            FieldSpec::SqueezedCoherent { nbar_c, nbar_s } => (nbar_c, nbar_s, "nbar_s"),
            FieldSpec::GlauberLachs { nbar_c, nbar_th } => (nbar_c, nbar_th, "nbar_th"),
        };
        check_mean("nbar_c", a)?;
        check_mean(name, b)
    }

    pub fn nbar_c(&self) -> f64 {
        match *self {
            FieldSpec::SqueezedCoherent { nbar_c, .. } | FieldSpec::GlauberLachs { nbar_c, .. } => {
                nbar_c
            }
        }
    }

    /// Mean photon number of the untruncated state.
    pub fn mean_photons(&self) -> f64 {
        match *self {
            FieldSpec::SqueezedCoherent { nbar_c, nbar_s } => nbar_c + nbar_s,
            FieldSpec::GlauberLachs { nbar_c, nbar_th } => nbar_c + nbar_th,
        }
    }

    pub fn is_pure(&self) -> bool {
        matches!(self, FieldSpec::SqueezedCoherent { .. })
    }

    /// Photon-counting distribution from the closed-form expression.
    pub fn pmf(&self, n: usize) -> Result<f64> {
        match *self {
            FieldSpec::SqueezedCoherent { nbar_c, nbar_s } => scs_pmf(nbar_c, nbar_s, n),
            FieldSpec::GlauberLachs { nbar_c, nbar_th } => gl_pmf(nbar_c, nbar_th, n),
        }
    }

    pub fn prepare(&self, cutoff: usize) -> Result<PreparedField> {
        match *self {
            FieldSpec::SqueezedCoherent { nbar_c, nbar_s } => {
                let k = squeezed_coherent_ket(nbar_c, nbar_s, cutoff)?;
                Ok(PreparedField {
                    rho: k.amplitudes.clone() * k.amplitudes.adjoint(),
                    ket: Some(k.amplitudes),
                    truncation_loss: k.truncation_loss,
                })
            }
            FieldSpec::GlauberLachs { nbar_c, nbar_th } => {
                let d = glauber_lachs_rho(nbar_c, nbar_th, cutoff)?;
                Ok(PreparedField {
                    rho: d.rho.into_matrix(),
                    ket: None,
                    truncation_loss: d.truncation_loss,
                })
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AtomSpec {
    /// `cos(theta)|e,g> + sin(theta)|g,e>`.
    Bell { theta: f64 },
    /// `(1 - lambda) I/4 + lambda |psi-><psi-|`.
    Werner { lambda: f64 },
}

impl AtomSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            AtomSpec::Bell { theta } if !theta.is_finite() => {
                Err(Error::Domain(format!("Bell angle must be finite, got {theta}")))
            }
            AtomSpec::Werner { lambda } if !(0.0..=1.0).contains(&lambda) => Err(Error::Domain(
                format!("Werner mixing parameter must lie in [0, 1], got {lambda}"),
            )),
            _ => Ok(()),
        }
    }

    pub fn rho(&self) -> Result<Operator> {
        match *self {
            AtomSpec::Bell { theta } => Ok(Operator::projector(&bell_atoms(theta))),
            AtomSpec::Werner { lambda } => werner_atoms(lambda),
        }
    }

    pub fn ket(&self) -> Option<DVector<C64>> {
        match *self {
            AtomSpec::Bell { theta } => Some(bell_atoms(theta)),
            AtomSpec::Werner { .. } => None,
        }
    }
}

fn check_mean(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{name} must be finite and non-negative, got {v}"
        )))
    }
}

/// A pure field state truncated to the cutoff and renormalized.
#[derive(Clone, Debug)]
pub struct TruncatedKet {
    pub amplitudes: DVector<C64>,
    /// Probability beyond the cutoff before renormalization.
    pub truncation_loss: f64,
}

/// A mixed field state truncated to the cutoff and renormalized.
#[derive(Clone, Debug)]
pub struct TruncatedDensity {
    pub rho: Operator,
    pub truncation_loss: f64,
}

/// One prepared field mode, kept in factored form.
#[derive(Clone, Debug)]
pub struct PreparedField {
    pub rho: DMatrix<C64>,
    pub ket: Option<DVector<C64>>,
    pub truncation_loss: f64,
}

/// Run `build` in successively wider padded spaces until the last levels are
/// empty, so the padded result stands in for the untruncated state.
fn padded<T>(
    cutoff: usize,
    mean: f64,
    mut build: impl FnMut(usize) -> Result<(T, f64)>,
) -> Result<T> {
    let mut pad = 40 + (8.0 * mean).ceil() as usize;
    loop {
        let (value, edge) = build(cutoff + pad)?;
        if edge < PAD_TAIL_TOL || pad > 4000 {
            return Ok(value);
        }
        pad *= 2;
    }
}

fn displacement(alpha: f64, dim: usize) -> Result<Operator> {
    let a = annihilation(dim)?;
    // exp(-i H) with H = i alpha (a^dagger - a)
    let h = (&a.adjoint() - &a).scale(C64::new(0.0, alpha));
    unitary_exp(&h, 1.0)
}

fn squeeze(r: f64, dim: usize) -> Result<Operator> {
    let a = annihilation(dim)?;
    let a2 = &a * &a;
    // exp(-i H) with H = i (r/2)(a^2 - a^dagger^2)
    let h = (&a2 - &a2.adjoint()).scale(C64::new(0.0, 0.5 * r));
    unitary_exp(&h, 1.0)
}

/// `D(alpha) S(r) |0>` with `alpha = sqrt(nbar_c)` and `r = asinh(sqrt(nbar_s))`,
/// both real.
pub fn squeezed_coherent_ket(nbar_c: f64, nbar_s: f64, cutoff: usize) -> Result<TruncatedKet> {
    check_mean("nbar_c", nbar_c)?;
    check_mean("nbar_s", nbar_s)?;
    annihilation(cutoff)?;
    let alpha = nbar_c.sqrt();
    let r = nbar_s.sqrt().asinh();
    let full = padded(cutoff, nbar_c + 4.0 * nbar_s, |dim| {
        let mut vac = DVector::zeros(dim);
        vac[0] = C64::new(1.0, 0.0);
        let psi = displacement(alpha, dim)?.matrix() * (squeeze(r, dim)?.matrix() * vac);
        let edge = psi.rows(dim - 4, 4).norm_squared();
        Ok((psi, edge))
    })?;
    let kept = full.rows(0, cutoff).into_owned();
    let norm2 = kept.norm_squared();
    let loss = (1.0 - norm2).max(0.0);
    if loss > TRUNCATION_LIMIT {
        return Err(Error::CutoffTooSmall {
            cutoff,
            what: format!("squeezed coherent state (nbar_c = {nbar_c}, nbar_s = {nbar_s})"),
            loss,
            limit: TRUNCATION_LIMIT,
        });
    }
    Ok(TruncatedKet {
        amplitudes: kept.unscale(norm2.sqrt()),
        truncation_loss: loss,
    })
}

/// Displaced thermal state with geometric thermal weights
/// `p_n = nbar_th^n / (1 + nbar_th)^(n+1)`.
pub fn glauber_lachs_rho(nbar_c: f64, nbar_th: f64, cutoff: usize) -> Result<TruncatedDensity> {
    check_mean("nbar_c", nbar_c)?;
    check_mean("nbar_th", nbar_th)?;
    annihilation(cutoff)?;
    let alpha = nbar_c.sqrt();
    let full = padded(cutoff, nbar_c + 4.0 * nbar_th, |dim| {
        let ratio = nbar_th / (1.0 + nbar_th);
        let weights: Vec<f64> = (0..dim)
            .map(|n| ratio.powi(n as i32) / (1.0 + nbar_th))
            .collect();
        let thermal = Operator::from_real_diagonal(&weights);
        let d = displacement(alpha, dim)?;
        let rho = &(&d * &thermal) * &d.adjoint();
        let edge: f64 = (dim - 4..dim).map(|n| rho.matrix()[(n, n)].re).sum();
        Ok((rho, edge))
    })?;
    let kept = full.matrix().view((0, 0), (cutoff, cutoff)).into_owned();
    let tr = kept.trace().re;
    let loss = (1.0 - tr).max(0.0);
    if loss > TRUNCATION_LIMIT {
        return Err(Error::CutoffTooSmall {
            cutoff,
            what: format!("Glauber-Lachs state (nbar_c = {nbar_c}, nbar_th = {nbar_th})"),
            loss,
            limit: TRUNCATION_LIMIT,
        });
    }
    let mut kept = kept.unscale(tr);
    // Restore exact Hermiticity lost to rounding in the two products.
    kept = (&kept + kept.adjoint()).scale(0.5);
    Ok(TruncatedDensity {
        rho: Operator::from_matrix(kept)?,
        truncation_loss: loss,
    })
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `exp(-nbar) nbar^n / n!`.
pub fn poisson_pmf(nbar: f64, n: usize) -> f64 {
    if nbar == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    (-nbar + n as f64 * nbar.ln() - ln_factorial(n)).exp()
}

/// Photon-counting distribution of the squeezed coherent state,
///
/// `P(n) = (nu / 2 mu)^n H_n(beta / sqrt(2 mu nu))^2 exp(-beta^2 (1 - nu/mu)) / (n! mu)`
///
/// with `mu = sqrt(1 + nbar_s)`, `nu = sqrt(nbar_s)` and
/// `beta = sqrt(nbar_c) (mu + nu)`.
pub fn scs_pmf(nbar_c: f64, nbar_s: f64, n: usize) -> Result<f64> {
    check_mean("nbar_c", nbar_c)?;
    check_mean("nbar_s", nbar_s)?;
    if nbar_s < DEGENERATE_MEAN {
        return Ok(poisson_pmf(nbar_c, n));
    }
    let mu = (1.0 + nbar_s).sqrt();
    let nu = nbar_s.sqrt();
    let beta = nbar_c.sqrt() * (mu + nu);
    let x = beta / (2.0 * mu * nu).sqrt();
    // u_n = H_n(x) / sqrt(2^n n!), carried with a separate log scale.
    let (u, ln_scale) = scaled_recurrence(n, 1.0, 2f64.sqrt() * x, |k, cur, prev| {
        let k = k as f64;
        (2f64.sqrt() * x * cur - k.sqrt() * prev) / (k + 1.0).sqrt()
    });
    if u == 0.0 {
        return Ok(0.0);
    }
    let ln_p = -mu.ln() + n as f64 * (nu / mu).ln() + 2.0 * (u.abs().ln() + ln_scale)
        - beta * beta * (1.0 - nu / mu);
    Ok(ln_p.exp())
}

/// Photon-counting distribution of the Glauber-Lachs state,
///
/// `P(n) = nbar_th^n / (1 + nbar_th)^(n+1) exp(-nbar_c / (1 + nbar_th)) L_n(-nbar_c / (nbar_th (1 + nbar_th)))`.
pub fn gl_pmf(nbar_c: f64, nbar_th: f64, n: usize) -> Result<f64> {
    check_mean("nbar_c", nbar_c)?;
    check_mean("nbar_th", nbar_th)?;
    if nbar_th < DEGENERATE_MEAN {
        return Ok(poisson_pmf(nbar_c, n));
    }
    let y = -nbar_c / (nbar_th * (1.0 + nbar_th));
    let (l, ln_scale) = scaled_recurrence(n, 1.0, 1.0 - y, |k, cur, prev| {
        let k = k as f64;
        ((2.0 * k + 1.0 - y) * cur - k * prev) / (k + 1.0)
    });
    let ln_p = n as f64 * nbar_th.ln() - (n as f64 + 1.0) * (1.0 + nbar_th).ln()
        - nbar_c / (1.0 + nbar_th)
        + l.ln()
        + ln_scale;
    Ok(ln_p.exp())
}

/// Three-term recurrence `f_{k+1} = step(k, f_k, f_{k-1})` from `f_0`, `f_1`,
/// returning `f_n = value * exp(ln_scale)` with `value` kept near unit size.
fn scaled_recurrence(
    n: usize,
    f0: f64,
    f1: f64,
    step: impl Fn(usize, f64, f64) -> f64,
) -> (f64, f64) {
    if n == 0 {
        return (f0, 0.0);
    }
    let (mut prev, mut cur, mut ln_scale) = (f0, f1, 0.0);
    for k in 1..n {
        let next = step(k, cur, prev);
        prev = cur;
        cur = next;
        let m = cur.abs().max(prev.abs());
        if m > 1e100 || (m < 1e-100 && m > 0.0) {
            prev /= m;
            cur /= m;
            ln_scale += m.ln();
        }
    }
    (cur, ln_scale)
}

/// `cos(theta)|e,g> + sin(theta)|g,e>` in the basis (ee, eg, ge, gg).
pub fn bell_atoms(theta: f64) -> DVector<C64> {
    DVector::from_vec(vec![
        C64::new(0.0, 0.0),
        C64::new(theta.cos(), 0.0),
        C64::new(theta.sin(), 0.0),
        C64::new(0.0, 0.0),
    ])
}

/// Singlet `(|g,e> - |e,g>)/sqrt(2)`.
pub fn singlet() -> DVector<C64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DVector::from_vec(vec![
        C64::new(0.0, 0.0),
        C64::new(-s, 0.0),
        C64::new(s, 0.0),
        C64::new(0.0, 0.0),
    ])
}

pub fn werner_atoms(lambda: f64) -> Result<Operator> {
    AtomSpec::Werner { lambda }.validate()?;
    let mixed = Operator::identity(&[2, 2]).scale_real((1.0 - lambda) / 4.0);
    let singlet = Operator::projector(&singlet()).scale_real(lambda);
    Ok(&mixed + &singlet)
}

/// Composite initial state `rho_AB (x) rho_a (x) rho_b`, stored by factor.
///
/// The full `4N^2`-dimensional density matrix is only formed on request;
/// propagation works from [`PreparedState::ensemble`] or [`PreparedState::rho`]
/// depending on the rank.
#[derive(Clone, Debug)]
pub struct PreparedState {
    space: CompositeSpace,
    atoms: DMatrix<C64>,
    atom_ket: Option<DVector<C64>>,
    fields: [PreparedField; 2],
    purity_hint: bool,
}

impl PreparedState {
    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    /// The two-atom density matrix.
    pub fn atoms(&self) -> &DMatrix<C64> {
        &self.atoms
    }

    pub fn field(&self, factor: Factor) -> Result<&PreparedField> {
        match factor {
            Factor::FieldA => Ok(&self.fields[0]),
            Factor::FieldB => Ok(&self.fields[1]),
            other => Err(Error::InvalidDimension(format!(
                "factor {} is not a field mode",
                other.label()
            ))),
        }
    }

    /// Set when the atoms are in a Bell state and both fields are pure.
    pub fn purity_hint(&self) -> bool {
        self.purity_hint
    }

    /// Fock-tail probability discarded by each field, `[a, b]`.
    pub fn truncation_losses(&self) -> [f64; 2] {
        [self.fields[0].truncation_loss, self.fields[1].truncation_loss]
    }

    pub fn truncation_loss(&self) -> f64 {
        self.fields[0].truncation_loss.max(self.fields[1].truncation_loss)
    }

    /// The full density matrix on the composite space.
    pub fn rho(&self) -> Operator {
        let m = self
            .atoms
            .kronecker(&self.fields[0].rho)
            .kronecker(&self.fields[1].rho);
        Operator::new(m, self.space.dims().to_vec()).expect("factor sides match the space")
    }

    /// The global state vector when the state is pure by construction.
    pub fn ket(&self) -> Option<DVector<C64>> {
        let atoms = self.atom_ket.as_ref()?;
        let a = self.fields[0].ket.as_ref()?;
        let b = self.fields[1].ket.as_ref()?;
        Some(atoms.kronecker(a).kronecker(b))
    }

    /// Decomposition `rho = sum_k w_k |psi_k><psi_k|` built from the factor
    /// spectra, dropping factor eigenvalues at or below `tol`.
    pub fn ensemble(&self, tol: f64) -> Result<Vec<(f64, DVector<C64>)>> {
        let atoms = local_ensemble(&self.atoms, self.atom_ket.as_ref(), tol)?;
        let a = local_ensemble(&self.fields[0].rho, self.fields[0].ket.as_ref(), tol)?;
        let b = local_ensemble(&self.fields[1].rho, self.fields[1].ket.as_ref(), tol)?;
        let mut out = Vec::with_capacity(atoms.len() * a.len() * b.len());
        for (wa, va) in &atoms {
            for (wf, vf) in &a {
                let left = va.kronecker(vf);
                for (wg, vg) in &b {
                    out.push((wa * wf * wg, left.kronecker(vg)));
                }
            }
        }
        Ok(out)
    }

    /// Number of terms [`PreparedState::ensemble`] would return.
    pub fn ensemble_size(&self, tol: f64) -> Result<usize> {
        let count = |rho: &DMatrix<C64>, ket: Option<&DVector<C64>>| -> Result<usize> {
            Ok(match ket {
                Some(_) => 1,
                None => dense_herm_eig(rho.clone())?.0.iter().filter(|&&w| w > tol).count(),
            })
        };
        Ok(count(&self.atoms, self.atom_ket.as_ref())?
            * count(&self.fields[0].rho, self.fields[0].ket.as_ref())?
            * count(&self.fields[1].rho, self.fields[1].ket.as_ref())?)
    }
}

fn local_ensemble(
    rho: &DMatrix<C64>,
    ket: Option<&DVector<C64>>,
    tol: f64,
) -> Result<Vec<(f64, DVector<C64>)>> {
    if let Some(k) = ket {
        return Ok(vec![(1.0, k.clone())]);
    }
    let (vals, vecs) = dense_herm_eig(rho.clone())?;
    Ok(vals
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > tol)
        .map(|(k, &w)| (w, vecs.column(k).into_owned()))
        .collect())
}

pub fn assemble_initial(
    atom: AtomSpec,
    field_a: FieldSpec,
    field_b: FieldSpec,
    space: CompositeSpace,
) -> Result<PreparedState> {
    atom.validate()?;
    field_a.validate()?;
    field_b.validate()?;
    let cutoff = space.cutoff();
    let fa = field_a.prepare(cutoff)?;
    let fb = field_b.prepare(cutoff)?;
    Ok(PreparedState {
        space,
        atoms: atom.rho()?.into_matrix(),
        atom_ket: atom.ket(),
        purity_hint: matches!(atom, AtomSpec::Bell { .. }) && field_a.is_pure() && field_b.is_pure(),
        fields: [fa, fb],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qops::{herm_eigenvalues, number};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    #[test]
    fn coherent_limit_is_poisson() {
        let k = squeezed_coherent_ket(0.5, 0.0, 16).unwrap();
        assert!((k.amplitudes[0].norm_sqr() - (-0.5f64).exp()).abs() < 1e-12);
        for n in 0..16 {
            assert!((k.amplitudes[n].norm_sqr() - poisson_pmf(0.5, n)).abs() < 1e-12);
        }
    }

    #[test]
    fn squeezed_vacuum_has_only_even_levels() {
        let k = squeezed_coherent_ket(0.0, 0.5, 40).unwrap();
        for n in (1..40).step_by(2) {
            assert!(k.amplitudes[n].norm() < 1e-14);
        }
    }

    #[test]
    fn squeezed_vacuum_amplitudes() {
        // <2n|S(r)|0> = (-tanh r)^n sqrt((2n)!) / (2^n n! sqrt(cosh r))
        let ns: f64 = 0.3;
        let r = ns.sqrt().asinh();
        let k = squeezed_coherent_ket(0.0, ns, 40).unwrap();
        for m in 0..10usize {
            let ln_mag = 0.5 * ln_factorial(2 * m)
                - m as f64 * 2f64.ln()
                - ln_factorial(m)
                - 0.5 * r.cosh().ln()
                + m as f64 * r.tanh().ln();
            let expected = (-1f64).powi(m as i32) * ln_mag.exp();
            assert!((k.amplitudes[2 * m] - C64::new(expected, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn scs_matches_pmf() {
        let k = squeezed_coherent_ket(0.5, 0.1, 24).unwrap();
        for n in 0..=10 {
            let p = scs_pmf(0.5, 0.1, n).unwrap();
            assert!((k.amplitudes[n].norm_sqr() - p).abs() < 1e-8, "n = {n}");
        }
    }

    #[test]
    fn scs_pmf_values() {
        assert!((scs_pmf(0.5, 1e-15, 1).unwrap() - 0.5 * (-0.5f64).exp()).abs() < 1e-15);
        let total: f64 = (0..40).map(|n| scs_pmf(0.0, 0.5, n).unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-10);
        let k = squeezed_coherent_ket(0.5, 0.3, 40).unwrap();
        assert!((scs_pmf(0.5, 0.3, 2).unwrap() - k.amplitudes[2].norm_sqr()).abs() < 1e-10);
    }

    #[test]
    fn thermal_and_coherent_limits() {
        let d = glauber_lachs_rho(0.0, 0.5, 24).unwrap();
        let m = d.rho.matrix();
        for n in 0..5 {
            let expected = 2.0 / 3.0 * (1.0f64 / 3.0).powi(n as i32);
            assert!((m[(n, n)].re - expected).abs() < 1e-10);
        }
        for i in 0..24 {
            for j in 0..24 {
                if i != j {
                    assert!(m[(i, j)].norm() < 1e-14);
                }
            }
        }
        let c = glauber_lachs_rho(0.5, 0.0, 16).unwrap();
        assert!((c.rho.purity() - 1.0).abs() < 1e-12);
        for n in 0..16 {
            assert!((c.rho.matrix()[(n, n)].re - poisson_pmf(0.5, n)).abs() < 1e-12);
        }
    }

    #[test]
    fn gl_matches_pmf() {
        let d = glauber_lachs_rho(0.5, 0.1, 16).unwrap();
        for n in 0..=10 {
            let p = gl_pmf(0.5, 0.1, n).unwrap();
            assert!((d.rho.matrix()[(n, n)].re - p).abs() < 1e-8, "n = {n}");
        }
    }

    #[test]
    fn gl_pmf_values() {
        assert!((gl_pmf(0.0, 0.5, 0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        let expected = (-0.5f64).exp() * 0.125;
        assert!((gl_pmf(0.5, 1e-15, 2).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.0758).abs() < 1e-4);
    }

    #[test]
    fn pmfs_reject_negative_inputs() {
        assert!(matches!(scs_pmf(-0.1, 0.1, 0), Err(Error::Domain(_))));
        assert!(matches!(gl_pmf(0.1, -0.1, 0), Err(Error::Domain(_))));
        assert!(squeezed_coherent_ket(0.5, -1.0, 16).is_err());
    }

    #[test]
    fn small_cutoff_is_reported() {
        match squeezed_coherent_ket(0.5, 0.5, 8) {
            Err(Error::CutoffTooSmall { cutoff, loss, .. }) => {
                assert_eq!(cutoff, 8);
                assert!(loss > TRUNCATION_LIMIT);
            }
            other => panic!("expected CutoffTooSmall, got {other:?}"),
        }
        assert!(glauber_lachs_rho(0.5, 0.5, 6).is_err());
    }

    #[test]
    fn mean_photon_numbers() {
        let n = number(24).unwrap();
        let k = squeezed_coherent_ket(0.5, 0.1, 24).unwrap();
        let mean = (k.amplitudes.adjoint() * n.matrix() * &k.amplitudes)[(0, 0)].re;
        assert!((mean - 0.6).abs() < 1e-6);
        let d = glauber_lachs_rho(0.5, 0.1, 24).unwrap();
        let mean = (d.rho.matrix() * n.matrix()).trace().re;
        assert!((mean - 0.6).abs() < 1e-6);
    }

    #[test]
    fn bell_state() {
        let v = bell_atoms(FRAC_PI_4);
        let expect = [0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0];
        for (x, e) in v.iter().zip(expect) {
            assert!((x - C64::new(e, 0.0)).norm() < 1e-15);
        }
        let p = bell_atoms(0.0);
        assert_eq!(p[1], C64::new(1.0, 0.0));
        assert!((bell_atoms(1.234).norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn werner_state() {
        let w1 = werner_atoms(1.0).unwrap();
        assert!(w1.max_abs_diff(&Operator::projector(&singlet())) < 1e-15);
        let w0 = werner_atoms(0.0).unwrap();
        assert!(w0.max_abs_diff(&Operator::identity(&[2, 2]).scale_real(0.25)) < 1e-15);
        let lam = 0.6;
        let ev = herm_eigenvalues(werner_atoms(lam).unwrap().matrix());
        let low = (1.0 - lam) / 4.0;
        for k in 0..3 {
            assert!((ev[k] - low).abs() < 1e-14);
        }
        assert!((ev[3] - (1.0 + 3.0 * lam) / 4.0).abs() < 1e-14);
        assert!(matches!(werner_atoms(1.5), Err(Error::Domain(_))));
        assert!(werner_atoms(-0.1).is_err());
    }

    #[test]
    fn assembled_pure_state() {
        let s = CompositeSpace::new(24).unwrap();
        let p = assemble_initial(
            AtomSpec::Bell { theta: FRAC_PI_4 },
            FieldSpec::scs(0.5, 0.1),
            FieldSpec::scs(0.5, 0.1),
            s,
        )
        .unwrap();
        assert!(p.purity_hint());
        let rho = p.rho();
        assert!((rho.trace().re - 1.0).abs() < 1e-10);
        assert!((rho.purity() - 1.0).abs() < 1e-9);
        assert!(p.truncation_loss() < 1e-8);
        let psi = p.ket().unwrap();
        assert!(Operator::projector(&psi).max_abs_diff(&rho) < 1e-14);
        assert_eq!(p.ensemble(1e-14).unwrap().len(), 1);
    }

    #[test]
    fn assembled_mixed_state() {
        let s = CompositeSpace::new(8).unwrap();
        let p = assemble_initial(
            AtomSpec::Werner { lambda: 0.75 },
            FieldSpec::gl(0.5, 0.1),
            FieldSpec::gl(0.5, 0.1),
            s,
        );
        assert!(p.is_err(), "cutoff 8 is too small for GL(0.5, 0.1)");
        let s = CompositeSpace::new(16).unwrap();
        let p = assemble_initial(
            AtomSpec::Werner { lambda: 0.75 },
            FieldSpec::gl(0.5, 0.1),
            FieldSpec::gl(0.5, 0.1),
            s,
        )
        .unwrap();
        assert!(!p.purity_hint());
        assert!(p.truncation_loss() < 1e-8);
        let rho = p.rho();
        assert!((rho.trace().re - 1.0).abs() < 1e-10);
        assert!(rho.purity() < 1.0);

        let s = CompositeSpace::new(10).unwrap();
        let p = assemble_initial(
            AtomSpec::Werner { lambda: 0.75 },
            FieldSpec::gl(0.2, 0.05),
            FieldSpec::scs(0.2, 0.05),
            s,
        )
        .unwrap();
        let rho = p.rho();
        let ens = p.ensemble(0.0).unwrap();
        let mut rebuilt = DMatrix::zeros(s.dim(), s.dim());
        for (w, v) in &ens {
            rebuilt += (v * v.adjoint()).scale(*w);
        }
        assert!(crate::qops::max_abs(&(rebuilt - rho.matrix())) < 1e-12);
    }
}
