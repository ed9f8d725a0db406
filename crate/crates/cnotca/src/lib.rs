//! Simulator and analysis toolkit for a 1-D brickwork circuit of CNOT gates.
//!
//! The circuit applies alternating layers of nearest-neighbor CNOT gates to a
//! chain of qubits. Because CNOT permutes computational basis states, the
//! whole dynamics reduces to linear algebra over GF(2): states, and likewise
//! Heisenberg-evolved Pauli strings, are carried by bit vectors acted on by
//! N x N bit matrices instead of 2^N x 2^N unitaries.
//!
//! Modules:
//!
//! - [`gf2`] — bit-packed vectors and matrices over GF(2)
//! - [`lattice`] — circuit layer construction, boundary conditions, the
//!   sheared single-gate variant, bulk windows for the thermodynamic limit
//! - [`pauli`] — Pauli strings with exact phase, CNOT conjugation, and the
//!   fast label maps for pure-X and pure-Z strings
//! - [`product_state`] — translation-invariant product initial states and
//!   exact expectation values of evolved Pauli strings
//! - [`density`] — one- and two-site reduced density matrices, von Neumann
//!   entropy, mutual information, and time-by-site grids
//! - [`oracle`] — brute-force dense state-vector simulator used as ground
//!   truth in tests (capped at 12 qubits)
//! - [`fractal`] — rule-60 reference automaton, popcount series, fractal
//!   dimension and equilibration-law fits
//! - [`charges`] — conserved and oscillating boundary charges for open
//!   boundary conditions

pub mod charges;
pub mod density;
mod error;
pub mod fractal;
pub mod gf2;
pub mod lattice;
pub mod oracle;
pub mod pauli;
pub mod product_state;

pub use error::{Error, Result};
