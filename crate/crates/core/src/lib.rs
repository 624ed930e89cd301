//! Weight enumerators, generalized-stabilizer spectra and LP/SDP upper bounds
//! for entanglement-assisted codeword-stabilized (EA-CWS) quantum codes.
//!
//! The crate has two halves:
//!
//! * code analysis ([`pauli`], [`analysis`], [`transforms`]): exact Pauli-group
//!   combinatorics for explicit codes, cross-checked against dense linear
//!   algebra on the code projector;
//! * size bounds ([`terwilliger`], [`bounds`], [`solver`]): linear and
//!   semidefinite feasibility programs for hypothetical `((n, M, d; c))` codes,
//!   decided by an exact-rational simplex (LP) or a phase-I interior-point
//!   method (SDP), swept over `M` to produce bound tables.
//!
//! Data-parallel loops (Pauli scans, triple statistics, `(M, s)` sweeps) run on
//! rayon when the `parallel` feature is enabled and fall back to plain
//! iterators otherwise; see [`par::Execution`].

pub mod analysis;
pub mod bounds;
pub mod codefile;
pub mod enumerator;
pub mod error;
pub mod exact;
pub mod par;
pub mod pauli;
pub mod reference;
pub mod solver;
pub mod terwilliger;
pub mod transforms;

pub use error::{Error, Result};
