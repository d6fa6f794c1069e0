//! Circuit intermediate representation.
//!
//! A [`Circuit`] is an ordered list of [`Op`]s over indexed qubits and
//! classical bits. Every classical bit is written by exactly one
//! measurement, and unitary gates may be conditioned on a single bit that
//! was written earlier. Qubits are split into a data register (the logical
//! interface) and an ancilla register (starts in |0⟩, ends in |0⟩ or
//! measured out).

use std::fmt;

use thiserror::Error;

/// Index of a qubit within a circuit.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Qubit(pub usize);

/// Index of a classical bit within a circuit.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bit(pub usize);

impl fmt::Display for Qubit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Bit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b{}", self.0)
    }
}

/// The closed gate alphabet, with operands.
///
/// `T` and `Tdg` are the only non-Clifford gates. `SqrtX` is the principal
/// square root of X (eigenvalue `i` on |−⟩) and `SqrtXdg` its inverse.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    H(Qubit),
    X(Qubit),
    Z(Qubit),
    S(Qubit),
    Sdg(Qubit),
    T(Qubit),
    Tdg(Qubit),
    SqrtX(Qubit),
    SqrtXdg(Qubit),
    Cx { control: Qubit, target: Qubit },
    Cz(Qubit, Qubit),
    Measure { qubit: Qubit, bit: Bit },
    Reset(Qubit),
}

impl Gate {
    /// Qubits the gate acts on, in operand order.
    pub fn qubits(&self) -> Vec<Qubit> {
        match *self {
            Gate::H(q)
            | Gate::X(q)
            | Gate::Z(q)
            | Gate::S(q)
            | Gate::Sdg(q)
            | Gate::T(q)
            | Gate::Tdg(q)
            | Gate::SqrtX(q)
            | Gate::SqrtXdg(q)
            | Gate::Reset(q) => vec![q],
            Gate::Measure { qubit, .. } => vec![qubit],
            Gate::Cx { control, target } => vec![control, target],
            Gate::Cz(a, b) => vec![a, b],
        }
    }

    pub fn is_t_like(&self) -> bool {
        matches!(self, Gate::T(_) | Gate::Tdg(_))
    }

    /// True for every gate that is a unitary (everything except
    /// measurement and reset).
    pub fn is_unitary(&self) -> bool {
        !matches!(self, Gate::Measure { .. } | Gate::Reset(_))
    }

    /// The inverse gate, or `None` for measurement and reset.
    pub fn inverse(&self) -> Option<Gate> {
        Some(match *self {
            Gate::S(q) => Gate::Sdg(q),
            Gate::Sdg(q) => Gate::S(q),
            Gate::T(q) => Gate::Tdg(q),
            Gate::Tdg(q) => Gate::T(q),
            Gate::SqrtX(q) => Gate::SqrtXdg(q),
            Gate::SqrtXdg(q) => Gate::SqrtX(q),
            Gate::Measure { .. } | Gate::Reset(_) => return None,
            g => g,
        })
    }

    /// Applies `f` to every qubit operand.
    pub fn map_qubits(&self, f: impl Fn(Qubit) -> Qubit) -> Gate {
        match *self {
            Gate::H(q) => Gate::H(f(q)),
            Gate::X(q) => Gate::X(f(q)),
            Gate::Z(q) => Gate::Z(f(q)),
            Gate::S(q) => Gate::S(f(q)),
            Gate::Sdg(q) => Gate::Sdg(f(q)),
            Gate::T(q) => Gate::T(f(q)),
            Gate::Tdg(q) => Gate::Tdg(f(q)),
            Gate::SqrtX(q) => Gate::SqrtX(f(q)),
            Gate::SqrtXdg(q) => Gate::SqrtXdg(f(q)),
            Gate::Cx { control, target } => Gate::Cx {
                control: f(control),
                target: f(target),
            },
            Gate::Cz(a, b) => Gate::Cz(f(a), f(b)),
            Gate::Measure { qubit, bit } => Gate::Measure {
                qubit: f(qubit),
                bit,
            },
            Gate::Reset(q) => Gate::Reset(f(q)),
        }
    }
}

/// Single-bit classical condition: the gate fires iff `bit == value`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Condition {
    pub bit: Bit,
    pub value: bool,
}

/// A gate together with its optional classical condition.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Op {
    pub gate: Gate,
    pub condition: Option<Condition>,
}

impl Op {
    pub fn new(gate: Gate) -> Self {
        Op {
            gate,
            condition: None,
        }
    }

    pub fn conditioned(gate: Gate, bit: Bit, value: bool) -> Self {
        Op {
            gate,
            condition: Some(Condition { bit, value }),
        }
    }
}

impl From<Gate> for Op {
    fn from(gate: Gate) -> Self {
        Op::new(gate)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("qubit counts differ: {0} vs {1}")]
    QubitCountMismatch(usize, usize),
    #[error("data/ancilla designations disagree")]
    DesignationMismatch,
    #[error("op {0} is a measurement or reset; only unitary segments can be inverted")]
    NotUnitary(usize),
    #[error("op {0} is classically conditioned; only unitary segments can be inverted")]
    Conditioned(usize),
    #[error("qubit map has length {found}, expected {expected}")]
    BadQubitMap { expected: usize, found: usize },
}

/// One well-formedness problem found by [`Circuit::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Offending op, or `None` for register-level problems.
    pub op: Option<usize>,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    QubitOutOfRange(Qubit),
    BitOutOfRange(Bit),
    IdenticalOperands(Qubit),
    /// The condition's bit has not been written by an earlier measurement.
    ConditionPrecedesWrite(Bit),
    ConditionOnNonUnitary,
    BitWrittenTwice(Bit),
    BitNeverWritten(Bit),
    DesignationOverlap(Qubit),
    DesignationDuplicate(Qubit),
    Undesignated(Qubit),
    /// A data qubit is measured and never reset afterwards.
    MeasuredDataQubit(Qubit),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.op {
            Some(i) => write!(f, "op {i}: {}", self.kind),
            None => write!(f, "{}", self.kind),
        }
    }
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViolationKind::QubitOutOfRange(q) => write!(f, "qubit {q} out of range"),
            ViolationKind::BitOutOfRange(b) => write!(f, "bit {b} out of range"),
            ViolationKind::IdenticalOperands(q) => write!(f, "identical operands ({q}, {q})"),
            ViolationKind::ConditionPrecedesWrite(b) => {
                write!(f, "condition on {b} precedes its measurement")
            }
            ViolationKind::ConditionOnNonUnitary => {
                write!(f, "only unitary gates may be conditioned")
            }
            ViolationKind::BitWrittenTwice(b) => {
                write!(f, "{b} written by more than one measurement")
            }
            ViolationKind::BitNeverWritten(b) => write!(f, "{b} is never written"),
            ViolationKind::DesignationOverlap(q) => write!(f, "qubit {q} is both data and ancilla"),
            ViolationKind::DesignationDuplicate(q) => write!(f, "qubit {q} designated twice"),
            ViolationKind::Undesignated(q) => write!(f, "qubit {q} is neither data nor ancilla"),
            ViolationKind::MeasuredDataQubit(q) => {
                write!(f, "data qubit {q} is measured and not reset")
            }
        }
    }
}

/// An immutable circuit. Build one with [`CircuitBuilder`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Circuit {
    qubit_count: usize,
    bit_count: usize,
    ops: Vec<Op>,
    data_qubits: Vec<Qubit>,
    ancilla_qubits: Vec<Qubit>,
}

impl Circuit {
    /// Assembles a circuit from raw parts without checking anything; use
    /// [`Circuit::validate`] to find problems.
    pub fn from_parts(
        qubit_count: usize,
        bit_count: usize,
        ops: Vec<Op>,
        data_qubits: Vec<Qubit>,
        ancilla_qubits: Vec<Qubit>,
    ) -> Self {
        Circuit {
            qubit_count,
            bit_count,
            ops,
            data_qubits,
            ancilla_qubits,
        }
    }

    /// An op-free circuit in which every qubit is data.
    pub fn empty(qubit_count: usize) -> Self {
        CircuitBuilder::new(qubit_count).build()
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn bit_count(&self) -> usize {
        self.bit_count
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn data_qubits(&self) -> &[Qubit] {
        &self.data_qubits
    }

    pub fn ancilla_qubits(&self) -> &[Qubit] {
        &self.ancilla_qubits
    }

    pub fn is_ancilla(&self, q: Qubit) -> bool {
        self.ancilla_qubits.contains(&q)
    }

    pub fn t_count(&self) -> usize {
        self.ops.iter().filter(|op| op.gate.is_t_like()).count()
    }

    /// Returns every invariant violation; empty iff the circuit is
    /// executable by the simulator.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut push = |op: Option<usize>, kind| out.push(Violation { op, kind });

        let mut role = vec![None::<bool>; self.qubit_count];
        for (list, is_anc) in [(&self.data_qubits, false), (&self.ancilla_qubits, true)] {
            for &q in list.iter() {
                match role.get_mut(q.0) {
                    None => push(None, ViolationKind::QubitOutOfRange(q)),
                    Some(slot @ None) => *slot = Some(is_anc),
                    Some(Some(prev)) if *prev == is_anc => {
                        push(None, ViolationKind::DesignationDuplicate(q))
                    }
                    Some(Some(_)) => push(None, ViolationKind::DesignationOverlap(q)),
                }
            }
        }
        for (i, r) in role.iter().enumerate() {
            if r.is_none() {
                push(None, ViolationKind::Undesignated(Qubit(i)));
            }
        }

        let mut written = vec![false; self.bit_count];
        // Data qubits currently holding an unreset measurement result.
        let mut measured = vec![false; self.qubit_count];
        for (i, op) in self.ops.iter().enumerate() {
            let at = Some(i);
            let qs = op.gate.qubits();
            let mut in_range = true;
            for &q in &qs {
                if q.0 >= self.qubit_count {
                    push(at, ViolationKind::QubitOutOfRange(q));
                    in_range = false;
                }
            }
            if qs.len() == 2 && qs[0] == qs[1] {
                push(at, ViolationKind::IdenticalOperands(qs[0]));
            }
            if let Some(cond) = op.condition {
                if !op.gate.is_unitary() {
                    push(at, ViolationKind::ConditionOnNonUnitary);
                }
                match written.get(cond.bit.0) {
                    None => push(at, ViolationKind::BitOutOfRange(cond.bit)),
                    Some(false) => push(at, ViolationKind::ConditionPrecedesWrite(cond.bit)),
                    Some(true) => {}
                }
            }
            match op.gate {
                Gate::Measure { qubit, bit } => {
                    match written.get_mut(bit.0) {
                        None => push(at, ViolationKind::BitOutOfRange(bit)),
                        Some(true) => push(at, ViolationKind::BitWrittenTwice(bit)),
                        Some(w) => *w = true,
                    }
                    if in_range {
                        measured[qubit.0] = true;
                    }
                }
                Gate::Reset(q) if in_range => measured[q.0] = false,
                _ => {}
            }
        }
        for (i, w) in written.iter().enumerate() {
            if !w {
                push(None, ViolationKind::BitNeverWritten(Bit(i)));
            }
        }
        for (i, m) in measured.iter().enumerate() {
            if *m && role[i] == Some(false) {
                push(None, ViolationKind::MeasuredDataQubit(Qubit(i)));
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Ancillas whose last measurement is not followed by a reset, in index
    /// order.
    pub fn measured_out_ancillas(&self) -> Vec<Qubit> {
        let mut out = vec![false; self.qubit_count];
        for op in &self.ops {
            match op.gate {
                Gate::Measure { qubit, .. } if qubit.0 < self.qubit_count => out[qubit.0] = true,
                Gate::Reset(q) if q.0 < self.qubit_count => out[q.0] = false,
                _ => {}
            }
        }
        self.ancilla_qubits
            .iter()
            .copied()
            .filter(|q| out.get(q.0).copied().unwrap_or(false))
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    /// Sequential composition: `self` then `second`. Bits of `second` are
    /// shifted past those of `self`. When `second` is non-empty, every
    /// ancilla that `self` leaves measured out is reset first so `second`
    /// finds it in |0⟩.
    pub fn compose(&self, second: &Circuit) -> Result<Circuit, CircuitError> {
        if self.qubit_count != second.qubit_count {
            return Err(CircuitError::QubitCountMismatch(
                self.qubit_count,
                second.qubit_count,
            ));
        }
        let sorted = |v: &[Qubit]| {
            let mut v = v.to_vec();
            v.sort();
            v
        };
        if sorted(&self.data_qubits) != sorted(&second.data_qubits)
            || sorted(&self.ancilla_qubits) != sorted(&second.ancilla_qubits)
        {
            return Err(CircuitError::DesignationMismatch);
        }
        let shift = self.bit_count;
        let mut ops = self.ops.clone();
        if !second.ops.is_empty() {
            ops.extend(
                self.measured_out_ancillas()
                    .into_iter()
                    .map(|q| Op::new(Gate::Reset(q))),
            );
        }
        ops.extend(second.ops.iter().map(|op| shift_bits(op, shift)));
        Ok(Circuit {
            qubit_count: self.qubit_count,
            bit_count: self.bit_count + second.bit_count,
            ops,
            data_qubits: self.data_qubits.clone(),
            ancilla_qubits: self.ancilla_qubits.clone(),
        })
    }

    /// The reversed, gate-inverted circuit. Rejects measurements, resets
    /// and classical conditions.
    pub fn inverse_unitary_segment(&self) -> Result<Circuit, CircuitError> {
        let mut ops = Vec::with_capacity(self.ops.len());
        for (i, op) in self.ops.iter().enumerate().rev() {
            if op.condition.is_some() {
                return Err(CircuitError::Conditioned(i));
            }
            let inv = op.gate.inverse().ok_or(CircuitError::NotUnitary(i))?;
            ops.push(Op::new(inv));
        }
        Ok(Circuit {
            ops,
            ..self.clone()
        })
    }

    /// Renames qubit `q` to `map[q]`, including in the data/ancilla
    /// designations. `map` must be a permutation of `0..qubit_count`.
    pub fn relabel_qubits(&self, map: &[usize]) -> Result<Circuit, CircuitError> {
        if map.len() != self.qubit_count {
            return Err(CircuitError::BadQubitMap {
                expected: self.qubit_count,
                found: map.len(),
            });
        }
        let f = |q: Qubit| Qubit(map.get(q.0).copied().unwrap_or(q.0));
        Ok(Circuit {
            qubit_count: self.qubit_count,
            bit_count: self.bit_count,
            ops: self
                .ops
                .iter()
                .map(|op| Op {
                    gate: op.gate.map_qubits(f),
                    condition: op.condition,
                })
                .collect(),
            data_qubits: self.data_qubits.iter().map(|&q| f(q)).collect(),
            ancilla_qubits: self.ancilla_qubits.iter().map(|&q| f(q)).collect(),
        })
    }
}

fn shift_bits(op: &Op, shift: usize) -> Op {
    let gate = match op.gate {
        Gate::Measure { qubit, bit } => Gate::Measure {
            qubit,
            bit: Bit(bit.0 + shift),
        },
        g => g,
    };
    Op {
        gate,
        condition: op.condition.map(|c| Condition {
            bit: Bit(c.bit.0 + shift),
            value: c.value,
        }),
    }
}

/// Incremental circuit construction.
///
/// Qubits start out as data; [`CircuitBuilder::add_ancilla`] appends a new
/// ancilla after all existing qubits, and [`CircuitBuilder::measure`]
/// allocates the next classical bit.
#[derive(Debug, Clone)]
pub struct CircuitBuilder {
    qubit_count: usize,
    bit_count: usize,
    ops: Vec<Op>,
    ancillas: Vec<Qubit>,
}

impl CircuitBuilder {
    /// A builder over `data_qubits` data qubits and no ancillas.
    pub fn new(data_qubits: usize) -> Self {
        CircuitBuilder {
            qubit_count: data_qubits,
            bit_count: 0,
            ops: Vec::new(),
            ancillas: Vec::new(),
        }
    }

    pub fn add_ancilla(&mut self) -> Qubit {
        let q = Qubit(self.qubit_count);
        self.qubit_count += 1;
        self.ancillas.push(q);
        q
    }

    /// Marks an existing qubit as ancilla.
    pub fn mark_ancilla(&mut self, q: Qubit) -> &mut Self {
        if !self.ancillas.contains(&q) {
            self.ancillas.push(q);
            self.ancillas.sort();
        }
        self
    }

    pub fn push(&mut self, op: impl Into<Op>) -> &mut Self {
        self.ops.push(op.into());
        self
    }

    pub fn push_if(&mut self, gate: Gate, bit: Bit, value: bool) -> &mut Self {
        self.ops.push(Op::conditioned(gate, bit, value));
        self
    }

    /// Measures `q` into a freshly allocated bit.
    pub fn measure(&mut self, q: Qubit) -> Bit {
        let bit = Bit(self.bit_count);
        self.bit_count += 1;
        self.ops.push(Op::new(Gate::Measure { qubit: q, bit }));
        bit
    }

    /// Appends the ops of `fragment`, shifting its bits past the ones
    /// already allocated. Designations of `fragment` are ignored.
    pub fn append(&mut self, fragment: &Circuit) -> &mut Self {
        let shift = self.bit_count;
        self.ops
            .extend(fragment.ops.iter().map(|op| shift_bits(op, shift)));
        self.bit_count += fragment.bit_count;
        self.qubit_count = self.qubit_count.max(fragment.qubit_count);
        self
    }

    pub fn build(&self) -> Circuit {
        let data = (0..self.qubit_count)
            .map(Qubit)
            .filter(|q| !self.ancillas.contains(q))
            .collect();
        Circuit {
            qubit_count: self.qubit_count,
            bit_count: self.bit_count,
            ops: self.ops.clone(),
            data_qubits: data,
            ancilla_qubits: self.ancillas.clone(),
        }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    fn kinds(c: &Circuit) -> Vec<ViolationKind> {
        c.validate().into_iter().map(|v| v.kind).collect()
    }

    #[test]
    fn empty_circuit_is_valid() {
        assert!(Circuit::empty(0).validate().is_empty());
    }

    #[test]
    fn identical_cx_operands_rejected() {
        let mut b = CircuitBuilder::new(2);
        b.push(Gate::Cx {
            control: Qubit(0),
            target: Qubit(0),
        });
        let v = b.build().validate();
        assert_eq!(
            v,
            vec![Violation {
                op: Some(0),
                kind: ViolationKind::IdenticalOperands(Qubit(0))
            }]
        );
    }

    #[test]
    fn condition_before_write_rejected() {
        let c = Circuit::from_parts(
            3,
            1,
            vec![
                Op::conditioned(Gate::Cz(Qubit(0), Qubit(1)), Bit(0), true),
                Op::new(Gate::Measure {
                    qubit: Qubit(2),
                    bit: Bit(0),
                }),
            ],
            vec![Qubit(0), Qubit(1)],
            vec![Qubit(2)],
        );
        let v = c.validate();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].op, Some(0));
        assert_eq!(v[0].kind, ViolationKind::ConditionPrecedesWrite(Bit(0)));
    }

    #[test]
    fn register_level_violations() {
        let c = Circuit::from_parts(3, 1, vec![], vec![Qubit(0), Qubit(1)], vec![Qubit(1)]);
        let k = kinds(&c);
        assert!(k.contains(&ViolationKind::DesignationOverlap(Qubit(1))));
        assert!(k.contains(&ViolationKind::Undesignated(Qubit(2))));
        assert!(k.contains(&ViolationKind::BitNeverWritten(Bit(0))));
    }

    #[test]
    fn measured_data_qubit_needs_reset() {
        let mut b = CircuitBuilder::new(1);
        b.measure(Qubit(0));
        assert_eq!(
            kinds(&b.build()),
            vec![ViolationKind::MeasuredDataQubit(Qubit(0))]
        );
        b.push(Gate::Reset(Qubit(0)));
        assert!(b.build().is_valid());
    }

    #[test]
    fn out_of_range_and_double_write() {
        let c = Circuit::from_parts(
            1,
            1,
            vec![
                Op::new(Gate::H(Qubit(3))),
                Op::new(Gate::Measure {
                    qubit: Qubit(0),
                    bit: Bit(0),
                }),
                Op::new(Gate::Measure {
                    qubit: Qubit(0),
                    bit: Bit(0),
                }),
                Op::conditioned(Gate::Reset(Qubit(0)), Bit(0), true),
            ],
            vec![],
            vec![Qubit(0)],
        );
        let k = kinds(&c);
        assert!(k.contains(&ViolationKind::QubitOutOfRange(Qubit(3))));
        assert!(k.contains(&ViolationKind::BitWrittenTwice(Bit(0))));
        assert!(k.contains(&ViolationKind::ConditionOnNonUnitary));
    }

    #[test]
    fn compose_identities() {
        let mut b = CircuitBuilder::new(2);
        b.push(Gate::H(Qubit(0))).push(Gate::T(Qubit(1)));
        let c = b.build();
        let e = Circuit::empty(2);
        assert_eq!(e.compose(&c).unwrap(), c);
        assert_eq!(c.compose(&e).unwrap(), c);
    }

    #[test]
    fn compose_shifts_bits() {
        let mut b = CircuitBuilder::new(1);
        let anc = b.add_ancilla();
        let m = b.measure(anc);
        b.push_if(Gate::Z(Qubit(0)), m, true);
        let c = b.build();
        let cc = c.compose(&c).unwrap();
        assert_eq!(cc.bit_count(), 2);
        assert_eq!(cc.ops()[2].gate, Gate::Reset(anc));
        assert_eq!(
            cc.ops()[3].gate,
            Gate::Measure {
                qubit: anc,
                bit: Bit(1)
            }
        );
        assert_eq!(cc.ops()[4].condition.unwrap().bit, Bit(1));
        assert!(cc.is_valid());
        let empty = Circuit::from_parts(2, 0, vec![], vec![Qubit(0)], vec![anc]);
        assert_eq!(c.compose(&empty).unwrap(), c);
    }

    #[test]
    fn compose_with_resets_is_associative() {
        let mut b = CircuitBuilder::new(1);
        let anc = b.add_ancilla();
        b.push(Gate::H(anc));
        let m = b.measure(anc);
        b.push_if(Gate::Z(Qubit(0)), m, true);
        let a = b.build();
        let mut b = CircuitBuilder::new(1);
        b.add_ancilla();
        b.push(Gate::T(Qubit(0)));
        let t = b.build();
        for (x, y, z) in [(&a, &a, &a), (&a, &t, &a), (&t, &a, &t), (&a, &a, &t)] {
            let left = x.compose(y).unwrap().compose(z).unwrap();
            let right = x.compose(&y.compose(z).unwrap()).unwrap();
            assert_eq!(left.ops(), right.ops());
            assert!(left.is_valid());
        }
    }

    #[test]
    fn compose_errors() {
        assert_eq!(
            Circuit::empty(1).compose(&Circuit::empty(2)),
            Err(CircuitError::QubitCountMismatch(1, 2))
        );
        let mut b = CircuitBuilder::new(1);
        b.mark_ancilla(Qubit(0));
        assert_eq!(
            Circuit::empty(1).compose(&b.build()),
            Err(CircuitError::DesignationMismatch)
        );
    }

    #[test]
    fn inverse_of_t_is_tdg() {
        let mut b = CircuitBuilder::new(1);
        b.push(Gate::T(Qubit(0)));
        let inv = b.build().inverse_unitary_segment().unwrap();
        assert_eq!(inv.ops(), &[Op::new(Gate::Tdg(Qubit(0)))]);
    }

    #[test]
    fn inverse_reverses_self_inverse_gates() {
        let cx = Gate::Cx {
            control: Qubit(0),
            target: Qubit(1),
        };
        let mut b = CircuitBuilder::new(2);
        b.push(Gate::H(Qubit(0))).push(cx);
        let inv = b.build().inverse_unitary_segment().unwrap();
        assert_eq!(inv.ops(), &[Op::new(cx), Op::new(Gate::H(Qubit(0)))]);
    }

    #[test]
    fn inverse_rejects_measurement_and_conditions() {
        let mut b = CircuitBuilder::new(1);
        let anc = b.add_ancilla();
        let m = b.measure(anc);
        assert_eq!(
            b.build().inverse_unitary_segment(),
            Err(CircuitError::NotUnitary(0))
        );
        b.push_if(Gate::X(Qubit(0)), m, false);
        assert_eq!(
            b.build().inverse_unitary_segment(),
            Err(CircuitError::Conditioned(1))
        );
    }

    #[test]
    fn relabel_moves_designations() {
        let mut b = CircuitBuilder::new(2);
        let anc = b.add_ancilla();
        b.push(Gate::Cx {
            control: Qubit(0),
            target: anc,
        });
        let c = b.build().relabel_qubits(&[2, 0, 1]).unwrap();
        assert_eq!(c.ancilla_qubits(), &[Qubit(1)]);
        assert_eq!(
            c.ops()[0].gate,
            Gate::Cx {
                control: Qubit(2),
                target: Qubit(1)
            }
        );
        assert!(c.is_valid());
    }

    pub(crate) fn arb_unitary_gate(n: usize) -> impl Strategy<Value = Gate> {
        let q = 0..n;
        let pair = (0..n, 0..n - 1).prop_map(move |(a, b)| {
            let b = if b >= a { b + 1 } else { b };
            (Qubit(a), Qubit(b))
        });
        prop_oneof![
            q.clone().prop_map(|i| Gate::H(Qubit(i))),
            q.clone().prop_map(|i| Gate::X(Qubit(i))),
            q.clone().prop_map(|i| Gate::Z(Qubit(i))),
            q.clone().prop_map(|i| Gate::S(Qubit(i))),
            q.clone().prop_map(|i| Gate::Sdg(Qubit(i))),
            q.clone().prop_map(|i| Gate::T(Qubit(i))),
            q.clone().prop_map(|i| Gate::Tdg(Qubit(i))),
            q.clone().prop_map(|i| Gate::SqrtX(Qubit(i))),
            q.prop_map(|i| Gate::SqrtXdg(Qubit(i))),
            pair.clone().prop_map(|(a, b)| Gate::Cx {
                control: a,
                target: b
            }),
            pair.prop_map(|(a, b)| Gate::Cz(a, b)),
        ]
    }

    fn arb_unitary_circuit() -> impl Strategy<Value = Circuit> {
        prop::collection::vec(arb_unitary_gate(3), 0..20).prop_map(|gates| {
            let mut b = CircuitBuilder::new(3);
            for g in gates {
                b.push(g);
            }
            b.build()
        })
    }

    proptest! {
        #[test]
        fn inverse_preserves_t_count(c in arb_unitary_circuit()) {
            let inv = c.inverse_unitary_segment().unwrap();
            prop_assert_eq!(inv.t_count(), c.t_count());
            prop_assert_eq!(inv.inverse_unitary_segment().unwrap(), c);
        }

        #[test]
        fn compose_is_associative(
            a in arb_unitary_circuit(),
            b in arb_unitary_circuit(),
            c in arb_unitary_circuit(),
        ) {
            let left = a.compose(&b).unwrap().compose(&c).unwrap();
            let right = a.compose(&b.compose(&c).unwrap()).unwrap();
            prop_assert!(left.is_valid());
            prop_assert_eq!(left.ops(), right.ops());
        }
    }
}
