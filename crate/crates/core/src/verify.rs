//! Channel verification of measurement-and-feedback circuits.
//!
//! A circuit *deterministically implements* a unitary `U` on its data
//! qubits when every measurement history `m`, after its fixups, acts as
//! `λ_m · √p_m · U` with `|λ_m| = 1` and `λ_m` independent of the input.
//! [`check_implements`] establishes this by brute force: it runs the
//! circuit on every data basis state (ancillas in |0⟩), groups the
//! resulting branches by history and assembles one Kraus operator `K_m`
//! per group.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::{Complex, Complex64};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::circuit::{Circuit, Gate, Violation};
use crate::simulator::{run_branches, BranchRecord, Operator, SimError, StateVector};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("oracle_cnz needs n >= 1, got {0}")]
    BadControlCount(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("reference operator is zero but the other is not")]
    ZeroReference,
    #[error("invalid circuit: {0:?}")]
    InvalidCircuit(Vec<Violation>),
    #[error(transparent)]
    Simulation(#[from] SimError),
}

/// The C^nZ unitary on `n + 1` qubits: diagonal, −1 on the all-ones state.
pub fn oracle_cnz(n: usize) -> Result<Operator, VerifyError> {
    if n < 1 {
        return Err(VerifyError::BadControlCount(n));
    }
    let dim = 1usize << (n + 1);
    let diag: Vec<Complex64> = (0..dim)
        .map(|i| Complex64::new(if i == dim - 1 { -1.0 } else { 1.0 }, 0.0))
        .collect();
    Ok(Operator::diagonal(&diag))
}

/// Compares `a` against `phase · b` where `phase` is read off at the
/// largest-magnitude entry of `b` (first in row-major order). Returns
/// whether `‖a − phase·b‖_max ≤ tol` and `|phase|` is 1 within `tol`.
pub fn equal_up_to_global_phase(
    a: &Operator,
    b: &Operator,
    tol: f64,
) -> Result<(bool, Complex64), VerifyError> {
    if a.dim() != b.dim() {
        return Err(VerifyError::DimensionMismatch {
            expected: b.dim(),
            found: a.dim(),
        });
    }
    let mut best = (0, 0, 0.0f64);
    for r in 0..b.dim() {
        for c in 0..b.dim() {
            let m = b.get(r, c).norm();
            if m > best.2 {
                best = (r, c, m);
            }
        }
    }
    if best.2 <= tol {
        return if a.max_abs() <= tol {
            Ok((true, Complex64::new(1.0, 0.0)))
        } else {
            Err(VerifyError::ZeroReference)
        };
    }
    let phase = a.get(best.0, best.1) / b.get(best.0, best.1);
    let dev = a.max_abs_diff(&b.scale(phase));
    Ok((dev <= tol && (phase.norm() - 1.0).abs() <= tol, phase))
}

/// Per-history report inside a [`ChannelVerdict`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupReport {
    /// Classical bit values, bit 0 first.
    pub outcomes: Vec<bool>,
    /// Hidden reset outcomes; empty for reset-free circuits.
    pub resets: Vec<bool>,
    /// `p_m`, averaged over data basis inputs.
    pub probability: f64,
    /// `λ_m`, serialized as `[re, im]`.
    pub phase: Complex64,
    /// `max |K_m/√p_m − λ_m·U|`, plus `||λ_m| − 1|`.
    pub max_deviation: f64,
    /// Largest distance between a single input column's phase and `λ_m`.
    pub phase_spread: f64,
}

impl GroupReport {
    pub fn outcome_string(&self) -> String {
        self.outcomes
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChannelVerdict {
    pub passed: bool,
    pub tolerance: f64,
    pub groups: Vec<GroupReport>,
    pub ancilla_clean: bool,
    /// Largest weight found outside the expected ancilla pattern.
    pub max_ancilla_leakage: f64,
    /// `Σ_m p_m`.
    pub probability_total: f64,
}

impl ChannelVerdict {
    pub fn max_deviation(&self) -> f64 {
        self.groups
            .iter()
            .map(|g| g.max_deviation)
            .fold(0.0, f64::max)
    }

    pub fn max_phase_spread(&self) -> f64 {
        self.groups
            .iter()
            .map(|g| g.phase_spread)
            .fold(0.0, f64::max)
    }
}

type HistoryKey = (Vec<bool>, Vec<bool>);

/// What one branch contributes to its history's Kraus operator.
struct Column {
    key: HistoryKey,
    input: usize,
    probability: f64,
    /// Ancilla basis pattern the branch settled in.
    pattern: usize,
    leakage: f64,
    /// `√p` times the data amplitudes at `pattern`.
    amps: Vec<Complex64>,
}

struct Layout {
    data: Vec<usize>,
    anc_mask: usize,
    /// Ancillas allowed to end in |1⟩: the ones that are measured out.
    free_mask: usize,
}

impl Layout {
    fn new(circuit: &Circuit) -> Self {
        let anc_mask = circuit.ancilla_qubits().iter().map(|q| 1usize << q.0).sum();
        let free_mask = circuit
            .ops()
            .iter()
            .filter_map(|op| match op.gate {
                Gate::Measure { qubit, .. } if circuit.is_ancilla(qubit) => Some(1usize << qubit.0),
                _ => None,
            })
            .fold(0, |m, b| m | b);
        Layout {
            data: circuit.data_qubits().iter().map(|q| q.0).collect(),
            anc_mask,
            free_mask,
        }
    }

    fn embed(&self, x: usize) -> usize {
        self.data
            .iter()
            .enumerate()
            .filter(|(j, _)| x >> j & 1 == 1)
            .map(|(_, q)| 1usize << q)
            .sum()
    }

    fn column(&self, input: usize, br: BranchRecord) -> Column {
        let amps = br.final_state.amplitudes();
        let mut weights: BTreeMap<usize, f64> = BTreeMap::new();
        for (i, a) in amps.iter().enumerate() {
            *weights.entry(i & self.anc_mask).or_default() += a.norm_sqr();
        }
        let (pattern, weight) = weights
            .into_iter()
            .filter(|(p, _)| p & !self.free_mask == 0)
            .fold(
                (0, 0.0),
                |best, (p, w)| if w > best.1 { (p, w) } else { best },
            );
        let scale = br.probability.sqrt();
        let dim = 1usize << self.data.len();
        Column {
            key: (br.outcomes, br.resets),
            input,
            probability: br.probability,
            pattern,
            leakage: (1.0 - weight).max(0.0),
            amps: (0..dim)
                .map(|y| amps[self.embed(y) | pattern] * scale)
                .collect(),
        }
    }
}

#[derive(Default)]
struct Group {
    columns: Vec<(usize, Vec<Complex64>)>,
    probability_sum: f64,
    pattern: Option<usize>,
    consistent: bool,
}

/// Checks that `circuit` deterministically implements `target` on its
/// data qubits. Data qubit `j` (in designation order) is bit `j` of the
/// target's basis index.
pub fn check_implements(
    circuit: &Circuit,
    target: &Operator,
    tolerance: f64,
) -> Result<ChannelVerdict, VerifyError> {
    let violations = circuit.validate();
    if !violations.is_empty() {
        return Err(VerifyError::InvalidCircuit(violations));
    }
    let layout = Layout::new(circuit);
    let dim = 1usize << layout.data.len();
    if target.dim() != dim {
        return Err(VerifyError::DimensionMismatch {
            expected: dim,
            found: target.dim(),
        });
    }

    let per_input: Vec<Vec<Column>> = (0..dim)
        .into_par_iter()
        .map(|x| {
            let input = StateVector::basis(circuit.qubit_count(), layout.embed(x));
            let branches = run_branches(circuit, &input)?;
            Ok(branches
                .into_iter()
                .map(|br| layout.column(x, br))
                .collect())
        })
        .collect::<Result<_, VerifyError>>()?;

    let mut groups: BTreeMap<HistoryKey, Group> = BTreeMap::new();
    let mut max_leak = 0.0f64;
    for col in per_input.into_iter().flatten() {
        max_leak = max_leak.max(col.leakage);
        let g = groups.entry(col.key).or_insert_with(|| Group {
            consistent: true,
            ..Group::default()
        });
        match g.pattern {
            None => g.pattern = Some(col.pattern),
            Some(p) if p != col.pattern => g.consistent = false,
            Some(_) => {}
        }
        g.probability_sum += col.probability;
        g.columns.push((col.input, col.amps));
    }

    let mut reports = Vec::with_capacity(groups.len());
    let mut ancilla_clean = max_leak <= tolerance;
    for ((outcomes, resets), g) in groups {
        ancilla_clean &= g.consistent;
        let p = g.probability_sum / dim as f64;
        let mut k = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
        for (x, amps) in &g.columns {
            for (y, a) in amps.iter().enumerate() {
                k[(y, *x)] = *a;
            }
        }
        let k = Operator(k);
        let (phase, max_deviation, phase_spread) = if p <= tolerance {
            (Complex64::new(0.0, 0.0), k.max_abs(), 0.0)
        } else {
            let normalized = k.scale(Complex64::new(1.0 / p.sqrt(), 0.0));
            let (_, phase) = equal_up_to_global_phase(&normalized, target, tolerance)?;
            let dev = normalized.max_abs_diff(&target.scale(phase)) + (phase.norm() - 1.0).abs();
            let spread = (0..dim)
                .map(|x| {
                    let lx: Complex64 = (0..dim)
                        .map(|y| target.get(y, x).conj() * normalized.get(y, x))
                        .sum();
                    (lx - phase).norm()
                })
                .fold(0.0, f64::max);
            (phase, dev, spread)
        };
        reports.push(GroupReport {
            outcomes,
            resets,
            probability: p,
            phase,
            max_deviation,
            phase_spread,
        });
    }
    let probability_total: f64 = reports.iter().map(|r| r.probability).sum();
    let passed = ancilla_clean
        && (probability_total - 1.0).abs() <= tolerance
        && reports.iter().all(|r| r.max_deviation <= tolerance);
    Ok(ChannelVerdict {
        passed,
        tolerance,
        groups: reports,
        ancilla_clean,
        max_ancilla_leakage: max_leak,
        probability_total,
    })
}

fn i_pow(k: u32) -> Complex<i64> {
    (0..k).fold(Complex::new(1, 0), |acc, _| acc * Complex::new(0, 1))
}

/// Both sides of `i^(ab ⊕ cd) = i^ab · i^cd · (−1)^abcd` for one
/// assignment, in exact Gaussian-integer arithmetic.
pub fn phase_identity_sides(a: bool, b: bool, c: bool, d: bool) -> (Complex<i64>, Complex<i64>) {
    let (ab, cd) = ((a & b) as u32, (c & d) as u32);
    let lhs = i_pow(ab ^ cd);
    let sign = if a & b & c & d { -1 } else { 1 };
    let rhs = i_pow(ab) * i_pow(cd) * Complex::new(sign, 0);
    (lhs, rhs)
}

/// Evaluates the phase identity on all 16 assignments.
pub fn check_phase_identity() -> bool {
    (0..16u8).all(|x| {
        let bit = |k: u8| x >> k & 1 == 1;
        let (l, r) = phase_identity_sides(bit(0), bit(1), bit(2), bit(3));
        l == r
    })
}
