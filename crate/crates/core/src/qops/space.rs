use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::qops::Operator;

/// One of the four tensor factors, in their fixed global order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Factor {
    AtomA,
    AtomB,
    FieldA,
    FieldB,
}

impl Factor {
    pub const ALL: [Factor; 4] = [Factor::AtomA, Factor::AtomB, Factor::FieldA, Factor::FieldB];

    pub fn slot(self) -> usize {
        match self {
            Factor::AtomA => 0,
            Factor::AtomB => 1,
            Factor::FieldA => 2,
            Factor::FieldB => 3,
        }
    }

    pub fn from_slot(slot: usize) -> Result<Self> {
        Self::ALL
            .get(slot)
            .copied()
            .ok_or(Error::SlotOutOfRange { slot, factors: 4 })
    }

    pub fn label(self) -> &'static str {
        match self {
            Factor::AtomA => "A",
            Factor::AtomB => "B",
            Factor::FieldA => "a",
            Factor::FieldB => "b",
        }
    }
}

/// Atom A (2) x atom B (2) x field a (N) x field b (N).
///
/// Flat index is `((iA * 2 + iB) * N + na) * N + nb`, with |e> at atom
/// index 0 and |g> at atom index 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompositeSpace {
    cutoff: usize,
}

impl CompositeSpace {
    pub fn new(cutoff: usize) -> Result<Self> {
        if cutoff < 2 {
            return Err(Error::InvalidDimension(format!(
                "Fock cutoff must be at least 2, got {cutoff}"
            )));
        }
        Ok(Self { cutoff })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dims(&self) -> [usize; 4] {
        [2, 2, self.cutoff, self.cutoff]
    }

    pub fn factor_dim(&self, factor: Factor) -> usize {
        self.dims()[factor.slot()]
    }

    pub fn dim(&self) -> usize {
        4 * self.cutoff * self.cutoff
    }

    pub fn index(&self, atom_a: usize, atom_b: usize, na: usize, nb: usize) -> usize {
        let n = self.cutoff;
        debug_assert!(atom_a < 2 && atom_b < 2 && na < n && nb < n);
        ((atom_a * 2 + atom_b) * n + na) * n + nb
    }

    /// Inverse of [`CompositeSpace::index`]: `[iA, iB, na, nb]`.
    pub fn decompose(&self, index: usize) -> [usize; 4] {
        let n = self.cutoff;
        let nb = index % n;
        let rest = index / n;
        let na = rest % n;
        let atoms = rest / n;
        [atoms / 2, atoms % 2, na, nb]
    }
}

/// Lift a single-factor operator into the composite space: identities on every
/// factor except `factor`.
pub fn embed(op: &Operator, factor: Factor, space: &CompositeSpace) -> Result<Operator> {
    let dims = space.dims();
    let slot = factor.slot();
    if op.dim() != dims[slot] {
        return Err(Error::DimensionMismatch {
            expected: dims[slot],
            actual: op.dim(),
        });
    }
    let mut acc: Option<DMatrix<crate::C64>> = None;
    for (k, &d) in dims.iter().enumerate() {
        let local = if k == slot {
            op.matrix().clone()
        } else {
            DMatrix::identity(d, d)
        };
        acc = Some(match acc {
            None => local,
            Some(m) => m.kronecker(&local),
        });
    }
    Operator::new(acc.unwrap(), dims.to_vec())
}

/// Same as [`embed`] but addressed by numeric slot, as used by config-driven code.
pub fn embed_slot(op: &Operator, slot: usize, space: &CompositeSpace) -> Result<Operator> {
    embed(op, Factor::from_slot(slot)?, space)
}
