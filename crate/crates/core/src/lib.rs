//! Two-qubit postselected stabilizer circuits and their recovery circuits.
//!
//! A postselected two-to-one circuit `(C, b)` applies a two-qubit Clifford `C`
//! and keeps the first qubit when a Z-measurement of the second qubit returns
//! `b`. This crate provides:
//!
//! - exact Pauli algebra with phases tracked as powers of `i` ([`pauli`]),
//! - the one- and two-qubit Clifford groups as conjugation tableaux, with
//!   exhaustive breadth-first enumeration ([`clifford`]),
//! - outcome probabilities, output states and the two equivalence relations
//!   between postselected circuits ([`circuits`]),
//! - reduction of every circuit to one of three canonical forms and a census of
//!   the resulting classes ([`classify`]),
//! - synthesis and verification of recovery circuits for interacting circuits
//!   ([`recovery`]),
//! - Monte Carlo and exact absorbing-chain cost estimates of the depth-k
//!   recovery protocol ([`protocol`]),
//! - the magic-state ladder and programmable ancilla rotation worked through
//!   end to end ([`applications`]).
//!
//! # Example
//!
//! ```
//! use stabrec::circuits::{output_state, PostselectedCircuit};
//! use stabrec::clifford::{CliffordElement, Gate};
//! use stabrec::pauli::{bloch_of, density_of, BlochVector};
//! use stabrec::recovery::synthesize_recovery;
//!
//! let cnot = CliffordElement::from_word_arity2(&[Gate::Cnot]).unwrap();
//! let source = PostselectedCircuit::new(cnot, 0).unwrap();
//! let recovery = synthesize_recovery(&source).unwrap();
//!
//! let phi = density_of(&BlochVector::new(0.6, 0.0, 0.8)).unwrap();
//! let psi = density_of(&BlochVector::new(0.0, 0.6, 0.8)).unwrap();
//!
//! // The unlucky branch of (CNOT, 0), fed back with a fresh psi.
//! let failed = output_state(&source.flipped(), &phi.tensor(&psi)).unwrap();
//! let back = output_state(&recovery.circuit, &failed.state.tensor(&psi)).unwrap();
//! assert!(back.state.approx_eq(&phi, 1e-9));
//! # let _ = bloch_of(&back.state).unwrap();
//! ```

pub mod applications;
pub mod circuits;
pub mod classify;
pub mod clifford;
mod error;
pub mod pauli;
pub mod protocol;
pub mod recovery;
pub mod sample;
pub mod verify;

pub use circuits::{MeasuredOutput, PostselectedCircuit};
pub use classify::{CanonicalForm, Census, FormKind, ProjectorDecomposition};
pub use clifford::{Arity, CliffordElement, CliffordGroupTable, Gate};
pub use error::{Error, Result};
pub use pauli::{BlochVector, DensityMatrix, Phase, SignedTwoQubitPauli, SinglePauli};
pub use protocol::{ProtocolConfig, ProtocolResult};
pub use recovery::{DistinctnessRow, RecoverySpec};

/// Complex scalar used for every matrix in the crate.
pub type C64 = nalgebra::Complex<f64>;

/// Below this an outcome is treated as impossible.
pub const ZERO_PROBABILITY: f64 = 1e-12;

/// Tolerance for equality of states and Kraus operators.
pub const STATE_TOLERANCE: f64 = 1e-9;
