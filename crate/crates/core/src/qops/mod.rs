//! Dense and sparse complex operator algebra on the truncated composite space.

mod eig;
mod operator;
mod space;
mod sparse;

pub use eig::{
    herm_eig, herm_eigenvalues, unitary_exp, BlockEig, BlockUnitary, EigBlock, EigDecomposition,
    RowTable, UnitaryBlock, HERMITIAN_TOL,
};
pub use operator::{annihilation, atomic_ops, creation, number, sigma_y, AtomicOps, Operator};
pub use space::{embed, embed_slot, CompositeSpace, Factor};
pub use sparse::SparseOperator;

pub(crate) use eig::dense_herm_eig;
#[cfg(test)]
pub(crate) use operator::max_abs;
