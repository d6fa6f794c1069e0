//! Clifford+T synthesis of multi-controlled Z gates with classical
//! feedback, and brute-force channel verification of the results.
//!
//! The headline construction is a CCCZ using six T gates
//! ([`synthesis::cccz_6t`]); it drops the T cost of C^nZ from `4n-4` to
//! `4n-6` ([`synthesis::synth_cnz`]). Every circuit can be checked with
//! [`verify::check_implements`], which runs each data basis state through
//! the statevector [`simulator`] and confirms that every measurement
//! history applies the target unitary up to an input-independent phase.

pub mod circuit;
pub mod codec;
pub mod resources;
pub mod simulator;
pub mod synthesis;
pub mod verify;

pub use circuit::{Bit, Circuit, CircuitBuilder, Gate, Op, Qubit};
pub use resources::{compare, count, CompareRow, ResourceCount};
pub use simulator::{run_branches, unitary_of, BranchRecord, Operator, StateVector};
pub use synthesis::{and_compute, and_uncompute, cccz_6t, synth_cnz, CnzSpec, Method};
pub use verify::{check_implements, check_phase_identity, oracle_cnz, ChannelVerdict};
