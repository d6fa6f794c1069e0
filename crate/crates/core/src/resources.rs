//! Static resource accounting.

use serde::Serialize;
use thiserror::Error;

use crate::circuit::{Circuit, Gate, Violation};
use crate::synthesis::{synth_cnz, CnzSpec, Method, SynthError};

/// Gate tallies for a circuit. Conditioned gates are counted whether or
/// not they fire at runtime; resets are not counted as gates.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ResourceCount {
    /// T and T† gates.
    pub t: usize,
    pub clifford: usize,
    pub measurements: usize,
    pub ancillas: usize,
    pub conditioned_gates: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ResourceError {
    #[error("invalid circuit: {0:?}")]
    InvalidCircuit(Vec<Violation>),
    #[error("comparison needs n >= 3, got {0}")]
    TooFewControls(usize),
    #[error(transparent)]
    Synth(#[from] SynthError),
}

pub fn count(circuit: &Circuit) -> Result<ResourceCount, ResourceError> {
    let violations = circuit.validate();
    if !violations.is_empty() {
        return Err(ResourceError::InvalidCircuit(violations));
    }
    let mut rc = ResourceCount {
        ancillas: circuit.ancilla_qubits().len(),
        ..ResourceCount::default()
    };
    for op in circuit.ops() {
        match op.gate {
            Gate::T(_) | Gate::Tdg(_) => rc.t += 1,
            Gate::Measure { .. } => rc.measurements += 1,
            Gate::Reset(_) => {}
            _ => rc.clifford += 1,
        }
        if op.condition.is_some() {
            rc.conditioned_gates += 1;
        }
    }
    Ok(rc)
}

/// One row of the baseline-vs-optimized table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CompareRow {
    pub n: usize,
    pub baseline_t: usize,
    pub optimized_t: usize,
    pub saving: usize,
}

/// Synthesizes both methods for `n` controls and counts their T gates.
pub fn compare(spec: CnzSpec) -> Result<CompareRow, ResourceError> {
    let n = spec.n();
    if n < 3 {
        return Err(ResourceError::TooFewControls(n));
    }
    let baseline_t = count(&synth_cnz(spec, Method::Baseline)?)?.t;
    let optimized_t = count(&synth_cnz(spec, Method::Optimized)?)?.t;
    Ok(CompareRow {
        n,
        baseline_t,
        optimized_t,
        saving: baseline_t - optimized_t,
    })
}
