//! Unitary dynamics of two atom-cavity pairs (the double Jaynes-Cummings
//! model) in a truncated Fock space, with the four bipartite entanglement
//! measures tracked over time.
//!
//! The crate is layered bottom-up:
//!
//! * [`qops`]: operator algebra, Kronecker lifting, block-aware Hermitian
//!   eigendecomposition and unitary exponentials.
//! * [`states`]: squeezed-coherent and Glauber-Lachs field states, Bell and
//!   Werner atomic states, and the composite initial state.
//! * [`hamiltonian`]: the bare, Ising, detuned and Kerr generators.
//! * [`evolve`]: time grids, propagators (numeric and closed form) and lazy
//!   trajectories.
//! * [`entangle`]: partial traces, concurrence, negativity and
//!   sudden-death interval extraction.
//! * [`scenario`]: figure presets, sweeps, config files and CSV output.

pub mod entangle;
pub mod error;
pub mod evolve;
pub mod hamiltonian;
pub mod qops;
pub mod scenario;
pub mod states;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
