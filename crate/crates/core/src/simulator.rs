//! Dense statevector simulation with measurement branching.
//!
//! Basis-state indices are little-endian: qubit 0 is the least-significant
//! bit, so `|q2 q1 q0⟩` has index `4*q2 + 2*q1 + q0`. The simulator never
//! removes global phase.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::circuit::{Circuit, Gate, Qubit, Violation};

/// Branches whose squared norm falls below this are dropped.
pub const PRUNE_THRESHOLD: f64 = 1e-12;

/// Tolerance on the norm of a [`StateVector`] and on ancilla inputs.
pub const NORM_TOLERANCE: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid circuit: {}", join_violations(.0))]
    InvalidCircuit(Vec<Violation>),
    #[error("{0:?} is not a unitary gate")]
    NotUnitary(Gate),
    #[error("circuit contains measurement, reset or classical conditions")]
    NotMeasurementFree,
    #[error("qubit {qubit} out of range for a {qubit_count}-qubit register")]
    QubitOutOfRange { qubit: Qubit, qubit_count: usize },
    #[error("register size mismatch: circuit has {circuit} qubits, state has {state}")]
    RegisterMismatch { circuit: usize, state: usize },
    #[error("ancilla qubits are not in |0⟩ (weight {0:e} outside the ancilla-zero subspace)")]
    AncillaNotZero(f64),
    #[error("state has {found} amplitudes, expected {expected}")]
    BadLength { expected: usize, found: usize },
    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// A normalized pure state of `qubit_count` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    qubit_count: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The basis state with the given little-endian index.
    pub fn basis(qubit_count: usize, index: usize) -> Self {
        let mut amps = vec![ZERO; 1 << qubit_count];
        amps[index] = ONE;
        StateVector { qubit_count, amps }
    }

    pub fn zero(qubit_count: usize) -> Self {
        Self::basis(qubit_count, 0)
    }

    pub fn from_amplitudes(qubit_count: usize, amps: Vec<Complex64>) -> Result<Self, SimError> {
        if amps.len() != 1 << qubit_count {
            return Err(SimError::BadLength {
                expected: 1 << qubit_count,
                found: amps.len(),
            });
        }
        let n = norm_sqr(&amps);
        if (n - 1.0).abs() > NORM_TOLERANCE {
            return Err(SimError::NotNormalized(n));
        }
        Ok(StateVector { qubit_count, amps })
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amps)
    }

    /// Probability weight on basis states where qubit `q` is 1.
    pub fn excitation(&self, q: Qubit) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i >> q.0 & 1 == 1)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }
}

fn norm_sqr(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

/// A dense square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator(pub DMatrix<Complex64>);

impl Operator {
    pub fn identity(dim: usize) -> Self {
        Operator(DMatrix::identity(dim, dim))
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        let n = entries.len();
        Operator(DMatrix::from_fn(n, n, |r, c| {
            if r == c {
                entries[r]
            } else {
                ZERO
            }
        }))
    }

    pub fn from_rows(rows: &[&[Complex64]]) -> Self {
        let n = rows.len();
        Operator(DMatrix::from_fn(n, n, |r, c| rows[r][c]))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn mul(&self, other: &Operator) -> Operator {
        Operator(&self.0 * &other.0)
    }

    pub fn scale(&self, s: Complex64) -> Operator {
        Operator(self.0.map(|x| x * s))
    }

    pub fn adjoint(&self) -> Operator {
        Operator(self.0.adjoint())
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.adjoint()
            .mul(self)
            .max_abs_diff(&Operator::identity(self.dim()))
            <= tol
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.dim() {
            let row: Vec<String> = (0..self.dim())
                .map(|c| {
                    let z = self.get(r, c);
                    format!("{:+.3}{:+.3}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// 2×2 matrix of a single-qubit gate, row-major.
fn single_qubit_matrix(gate: &Gate) -> Option<[[Complex64; 2]; 2]> {
    let h = FRAC_1_SQRT_2;
    Some(match gate {
        Gate::H(_) => [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]],
        Gate::X(_) => [[ZERO, ONE], [ONE, ZERO]],
        Gate::Z(_) => [[ONE, ZERO], [ZERO, c(-1.0, 0.0)]],
        Gate::S(_) => [[ONE, ZERO], [ZERO, c(0.0, 1.0)]],
        Gate::Sdg(_) => [[ONE, ZERO], [ZERO, c(0.0, -1.0)]],
        Gate::T(_) => [[ONE, ZERO], [ZERO, c(h, h)]],
        Gate::Tdg(_) => [[ONE, ZERO], [ZERO, c(h, -h)]],
        // Principal root: eigenvalue 1 on |+⟩, i on |−⟩.
        Gate::SqrtX(_) => [[c(0.5, 0.5), c(0.5, -0.5)], [c(0.5, -0.5), c(0.5, 0.5)]],
        // Eigenvalue 1 on |+⟩, −i on |−⟩.
        Gate::SqrtXdg(_) => [[c(0.5, -0.5), c(0.5, 0.5)], [c(0.5, 0.5), c(0.5, -0.5)]],
        _ => return None,
    })
}

/// The exact matrix of a unitary gate. Two-qubit gates use a local
/// little-endian basis where the first operand is the low bit, so
/// `CX{control, target}` swaps local indices 1 and 3.
pub fn gate_matrix(gate: &Gate) -> Result<Operator, SimError> {
    if let Some(m) = single_qubit_matrix(gate) {
        return Ok(Operator::from_rows(&[&m[0], &m[1]]));
    }
    match gate {
        Gate::Cx { .. } => Ok(Operator::from_rows(&[
            &[ONE, ZERO, ZERO, ZERO],
            &[ZERO, ZERO, ZERO, ONE],
            &[ZERO, ZERO, ONE, ZERO],
            &[ZERO, ONE, ZERO, ZERO],
        ])),
        Gate::Cz(..) => Ok(Operator::diagonal(&[ONE, ONE, ONE, c(-1.0, 0.0)])),
        g => Err(SimError::NotUnitary(*g)),
    }
}

fn check_operands(gate: &Gate, qubit_count: usize) -> Result<(), SimError> {
    for q in gate.qubits() {
        if q.0 >= qubit_count {
            return Err(SimError::QubitOutOfRange {
                qubit: q,
                qubit_count,
            });
        }
    }
    Ok(())
}

/// Applies a unitary gate in place. Operands must already be in range.
fn apply_in_place(amps: &mut [Complex64], gate: &Gate) {
    match *gate {
        Gate::Cx { control, target } => {
            let (cm, tm) = (1 << control.0, 1 << target.0);
            for i in 0..amps.len() {
                if i & cm != 0 && i & tm == 0 {
                    amps.swap(i, i | tm);
                }
            }
        }
        Gate::Cz(a, b) => {
            let mask = (1 << a.0) | (1 << b.0);
            for (i, amp) in amps.iter_mut().enumerate() {
                if i & mask == mask {
                    *amp = -*amp;
                }
            }
        }
        ref g => {
            let [[m00, m01], [m10, m11]] =
                single_qubit_matrix(g).expect("non-unitary gate reached apply_in_place");
            let bit = 1 << g.qubits()[0].0;
            for i in 0..amps.len() {
                if i & bit == 0 {
                    let (a0, a1) = (amps[i], amps[i | bit]);
                    amps[i] = m00 * a0 + m01 * a1;
                    amps[i | bit] = m10 * a0 + m11 * a1;
                }
            }
        }
    }
}

/// Applies a unitary gate to a state, returning the new state.
pub fn apply(state: &StateVector, gate: &Gate) -> Result<StateVector, SimError> {
    if !gate.is_unitary() {
        return Err(SimError::NotUnitary(*gate));
    }
    check_operands(gate, state.qubit_count)?;
    let mut out = state.clone();
    apply_in_place(&mut out.amps, gate);
    Ok(out)
}

/// One measurement history of a circuit run.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchRecord {
    /// Value of every classical bit, indexed by bit.
    pub outcomes: Vec<bool>,
    /// Hidden outcomes of `Reset` ops, in execution order. A reset is a
    /// measurement whose result is discarded, so each one splits the branch.
    pub resets: Vec<bool>,
    pub probability: f64,
    /// Normalized state conditioned on this history.
    pub final_state: StateVector,
}

impl BranchRecord {
    /// Outcome string as `0`/`1` characters, bit 0 first.
    pub fn outcome_string(&self) -> String {
        self.outcomes
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }
}

struct Walker<'a> {
    circuit: &'a Circuit,
    out: Vec<BranchRecord>,
}

impl Walker<'_> {
    fn walk(
        &mut self,
        start: usize,
        mut amps: Vec<Complex64>,
        bits: Vec<Option<bool>>,
        resets: Vec<bool>,
    ) {
        let ops = self.circuit.ops();
        for (i, op) in ops.iter().enumerate().skip(start) {
            if let Some(cond) = op.condition {
                if bits[cond.bit.0] != Some(cond.value) {
                    continue;
                }
            }
            match op.gate {
                Gate::Measure { qubit, bit } => {
                    for (value, proj) in split(&amps, qubit) {
                        let mut bits = bits.clone();
                        bits[bit.0] = Some(value);
                        self.walk(i + 1, proj, bits, resets.clone());
                    }
                    return;
                }
                Gate::Reset(qubit) => {
                    for (value, mut proj) in split(&amps, qubit) {
                        if value {
                            apply_in_place(&mut proj, &Gate::X(qubit));
                        }
                        let mut resets = resets.clone();
                        resets.push(value);
                        self.walk(i + 1, proj, bits.clone(), resets);
                    }
                    return;
                }
                ref g => apply_in_place(&mut amps, g),
            }
        }
        let probability = norm_sqr(&amps);
        let scale = 1.0 / probability.sqrt();
        for a in amps.iter_mut() {
            *a *= scale;
        }
        self.out.push(BranchRecord {
            outcomes: bits.into_iter().map(|b| b.unwrap_or(false)).collect(),
            resets,
            probability,
            final_state: StateVector {
                qubit_count: self.circuit.qubit_count(),
                amps,
            },
        });
    }
}

/// Projects onto qubit `q` = 0 and = 1, dropping negligible projections.
fn split(amps: &[Complex64], q: Qubit) -> Vec<(bool, Vec<Complex64>)> {
    let bit = 1 << q.0;
    [false, true]
        .into_iter()
        .filter_map(|value| {
            let proj: Vec<Complex64> = amps
                .iter()
                .enumerate()
                .map(|(i, &a)| if (i & bit != 0) == value { a } else { ZERO })
                .collect();
            (norm_sqr(&proj) >= PRUNE_THRESHOLD).then_some((value, proj))
        })
        .collect()
}

/// Runs `circuit` on `input`, exploring every measurement outcome
/// depth-first with outcome 0 before outcome 1.
pub fn run_branches(circuit: &Circuit, input: &StateVector) -> Result<Vec<BranchRecord>, SimError> {
    let violations = circuit.validate();
    if !violations.is_empty() {
        return Err(SimError::InvalidCircuit(violations));
    }
    if input.qubit_count != circuit.qubit_count() {
        return Err(SimError::RegisterMismatch {
            circuit: circuit.qubit_count(),
            state: input.qubit_count,
        });
    }
    let anc_mask: usize = circuit.ancilla_qubits().iter().map(|q| 1 << q.0).sum();
    let leak: f64 = input
        .amps
        .iter()
        .enumerate()
        .filter(|(i, _)| i & anc_mask != 0)
        .map(|(_, a)| a.norm_sqr())
        .sum();
    if leak > NORM_TOLERANCE {
        return Err(SimError::AncillaNotZero(leak));
    }
    let mut walker = Walker {
        circuit,
        out: Vec::new(),
    };
    walker.walk(
        0,
        input.amps.clone(),
        vec![None; circuit.bit_count()],
        Vec::new(),
    );
    Ok(walker.out)
}

/// The full-register unitary of a measurement-free, condition-free circuit.
pub fn unitary_of(circuit: &Circuit) -> Result<Operator, SimError> {
    if circuit
        .ops()
        .iter()
        .any(|op| op.condition.is_some() || !op.gate.is_unitary())
    {
        return Err(SimError::NotMeasurementFree);
    }
    let n = circuit.qubit_count();
    for op in circuit.ops() {
        check_operands(&op.gate, n)?;
    }
    let dim = 1 << n;
    let mut m = DMatrix::from_element(dim, dim, ZERO);
    for col in 0..dim {
        let mut amps = vec![ZERO; dim];
        amps[col] = ONE;
        for op in circuit.ops() {
            apply_in_place(&mut amps, &op.gate);
        }
        for (row, a) in amps.into_iter().enumerate() {
            m[(row, col)] = a;
        }
    }
    Ok(Operator(m))
}
