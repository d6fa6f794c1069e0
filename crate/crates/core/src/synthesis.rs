//! Clifford+T constructions for multi-controlled Z.
//!
//! * [`cccz_6t`]: a CCCZ using six T gates, one measured ancilla and two
//!   classically-conditioned CZ fixups. The ancilla accumulates
//!   `ab ⊕ cd`, is phased by `i^(ab ⊕ cd)`, and is measured out; the
//!   kickback phases `i^ab · i^cd` cancel, leaving `(-1)^abcd`.
//! * [`and_compute`] / [`and_uncompute`]: the 4-T temporary AND and its
//!   T-free measurement-based uncomputation.
//! * [`synth_cnz`]: C^nZ via a linear ladder of temporary ANDs, with
//!   either a 4-T AND+CZ core (`4n-4` T total) or the 6-T CCCZ core
//!   (`4n-6` T total, `n >= 3`).
//!
//! Layout: data qubits `0..=n` (controls `0..n`, target `n`), ancillas
//! appended after them in creation order.

use thiserror::Error;

use crate::circuit::{Circuit, CircuitBuilder, Gate, Qubit};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("C^nZ needs n >= 2 controls, got {0}")]
    TooFewControls(usize),
    #[error("optimized requires n ≥ 3 (got n = {0})")]
    OptimizedNeedsThree(usize),
    #[error("operands must be distinct")]
    NonDistinct,
}

/// Number of controls of a C^nZ gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CnzSpec {
    n: usize,
}

impl CnzSpec {
    pub fn new(n: usize) -> Result<Self, SynthError> {
        if n < 2 {
            return Err(SynthError::TooFewControls(n));
        }
        Ok(CnzSpec { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Controls plus target.
    pub fn data_qubits(&self) -> usize {
        self.n + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Temporary-AND ladder down to a Toffoli: `4n - 4` T gates.
    Baseline,
    /// Ladder down to three controls, then the 6-T CCCZ: `4n - 6` T gates.
    Optimized,
}

fn distinct(qs: &[Qubit]) -> Result<(), SynthError> {
    for (i, a) in qs.iter().enumerate() {
        if qs[i + 1..].contains(a) {
            return Err(SynthError::NonDistinct);
        }
    }
    Ok(())
}

fn fragment_builder(qs: &[Qubit], anc: Qubit) -> CircuitBuilder {
    let size = qs.iter().chain([&anc]).map(|q| q.0 + 1).max().unwrap_or(0);
    let mut b = CircuitBuilder::new(size);
    b.mark_ancilla(anc);
    b
}

/// The six-T CCCZ on data qubits `a, b, c, d` with ancilla `anc`.
///
/// `ab ⊕ cd` is computed onto the ancilla by two 4-T Toffolis whose
/// adjacent T gates cancel; `X^-½` then measurement removes it. Outcome 0
/// is fixed by `CZ(c, d)`, outcome 1 by `CZ(a, b)`.
pub fn cccz_6t_on(
    a: Qubit,
    b: Qubit,
    c: Qubit,
    d: Qubit,
    anc: Qubit,
) -> Result<Circuit, SynthError> {
    distinct(&[a, b, c, d, anc])?;
    let mut bld = fragment_builder(&[a, b, c, d], anc);
    let cx = |control| Gate::Cx {
        control,
        target: anc,
    };
    bld.push(Gate::H(anc))
        .push(Gate::T(anc))
        .push(cx(b))
        .push(Gate::Tdg(anc))
        .push(cx(a))
        .push(Gate::T(anc))
        .push(cx(b))
        .push(cx(c))
        .push(Gate::Tdg(anc))
        .push(cx(d))
        .push(Gate::T(anc))
        .push(cx(c))
        .push(Gate::Tdg(anc))
        .push(cx(d))
        .push(Gate::SqrtXdg(anc));
    let m = bld.measure(anc);
    bld.push_if(Gate::Cz(c, d), m, false)
        .push_if(Gate::Cz(a, b), m, true);
    Ok(bld.build())
}

/// The 6-T CCCZ on qubits 0..4 with ancilla 4.
pub fn cccz_6t() -> Circuit {
    cccz_6t_on(Qubit(0), Qubit(1), Qubit(2), Qubit(3), Qubit(4))
        .expect("fixed operands are distinct")
}

/// Computes `a ∧ b` onto a fresh |0⟩ ancilla with four T gates. Exact on
/// the `anc = |0⟩` subspace, including phases.
pub fn and_compute(a: Qubit, b: Qubit, anc: Qubit) -> Result<Circuit, SynthError> {
    distinct(&[a, b, anc])?;
    let mut bld = fragment_builder(&[a, b], anc);
    bld.push(Gate::H(anc))
        .push(Gate::T(anc))
        .push(Gate::Cx {
            control: a,
            target: anc,
        })
        .push(Gate::Cx {
            control: b,
            target: anc,
        })
        .push(Gate::Cx {
            control: anc,
            target: a,
        })
        .push(Gate::Cx {
            control: anc,
            target: b,
        })
        .push(Gate::Tdg(a))
        .push(Gate::Tdg(b))
        .push(Gate::T(anc))
        .push(Gate::Cx {
            control: anc,
            target: a,
        })
        .push(Gate::Cx {
            control: anc,
            target: b,
        })
        .push(Gate::H(anc))
        .push(Gate::S(anc));
    Ok(bld.build())
}

/// Erases an ancilla holding `a ∧ b`: X-basis measurement, then `CZ(a, b)`
/// when the outcome is 1. No T gates. The ancilla is left measured out.
pub fn and_uncompute(a: Qubit, b: Qubit, anc: Qubit) -> Result<Circuit, SynthError> {
    distinct(&[a, b, anc])?;
    let mut bld = fragment_builder(&[a, b], anc);
    bld.push(Gate::H(anc));
    let m = bld.measure(anc);
    bld.push_if(Gate::Cz(a, b), m, true);
    Ok(bld.build())
}

/// One temporary AND: `(a, b, ancilla)`.
type AndStep = (Qubit, Qubit, Qubit);

/// Folds `controls` into a single qubit with a linear chain of temporary
/// ANDs: the first takes `controls[0], controls[1]`, each later one the
/// previous ancilla and the next control. Returns the AND triples in
/// compute order and the qubit holding the conjunction.
fn and_ladder(
    bld: &mut CircuitBuilder,
    controls: &[Qubit],
) -> Result<(Vec<AndStep>, Qubit), SynthError> {
    let mut acc = controls[0];
    let mut steps = Vec::new();
    for &next in &controls[1..] {
        let anc = bld.add_ancilla();
        bld.append(&and_compute(acc, next, anc)?);
        steps.push((acc, next, anc));
        acc = anc;
    }
    Ok((steps, acc))
}

fn unwind(bld: &mut CircuitBuilder, steps: &[AndStep]) -> Result<(), SynthError> {
    for &(a, b, anc) in steps.iter().rev() {
        bld.append(&and_uncompute(a, b, anc)?);
    }
    Ok(())
}

/// Synthesizes C^nZ over data qubits `0..=n`.
pub fn synth_cnz(spec: CnzSpec, method: Method) -> Result<Circuit, SynthError> {
    let n = spec.n;
    let controls: Vec<Qubit> = (0..n).map(Qubit).collect();
    let target = Qubit(n);
    let mut bld = CircuitBuilder::new(spec.data_qubits());
    match method {
        Method::Baseline => {
            // n-2 ladder ANDs plus the AND inside the 4-T Toffoli core.
            let (steps, acc) = and_ladder(&mut bld, &controls)?;
            bld.push(Gate::Cz(acc, target));
            unwind(&mut bld, &steps)?;
        }
        Method::Optimized => {
            if n < 3 {
                return Err(SynthError::OptimizedNeedsThree(n));
            }
            let (steps, acc) = and_ladder(&mut bld, &controls[..n - 2])?;
            let anc = bld.add_ancilla();
            bld.append(&cccz_6t_on(
                acc,
                controls[n - 2],
                controls[n - 1],
                target,
                anc,
            )?);
            unwind(&mut bld, &steps)?;
        }
    }
    Ok(bld.build())
}

/// Turns a C^nZ into a C^nX by conjugating `target` with H.
pub fn with_x_target(circuit: &Circuit, target: Qubit) -> Circuit {
    let mut bld = CircuitBuilder::new(circuit.qubit_count());
    for &a in circuit.ancilla_qubits() {
        bld.mark_ancilla(a);
    }
    bld.push(Gate::H(target));
    bld.append(circuit);
    bld.push(Gate::H(target));
    bld.build()
}
