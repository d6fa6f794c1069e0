//! Import and export of Quirk circuit URLs for the supported gate subset.
//!
//! Export puts every op in its own column. Conditions become `•`/`◦` dots
//! on the wire whose measurement wrote the bit. Ancillas are tagged with an
//! identity custom gate named `|0>` in a leading column so the data/ancilla
//! split survives a round trip.
//!
//! Import accepts the same subset plus identity-matrix custom gates, which
//! are annotations. When a column holding a `test` marker is followed by a
//! column holding a `verify` marker, only the columns strictly between them
//! are imported: the columns outside are an input-preparation and checking
//! harness around the circuit under test.

use std::collections::HashMap;

use percent_encoding::{percent_decode_str, utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};
use serde::Serialize;
use serde_json::Value;

use crate::circuit::{Bit, Circuit, Gate, Op, Qubit};

use super::CodecError;

pub const QUIRK_PREFIX: &str = "https://algassert.com/quirk#circuit=";

const ENCODE_SET: &AsciiSet = &NON_ALPHANUMERIC
    .remove(b'-')
    .remove(b'_')
    .remove(b'.')
    .remove(b'~');

const ANCILLA_MARKER_ID: &str = "~anc";
const ANCILLA_MARKER_NAMES: [&str; 2] = ["|0>", "|0⟩"];
const IDENTITY_MATRIX: &str = "{{1,0},{0,1}}";

const CONTROL: &str = "•";
const ANTI_CONTROL: &str = "◦";

fn gate_name(gate: &Gate) -> Option<&'static str> {
    Some(match gate {
        Gate::H(_) => "H",
        Gate::X(_) => "X",
        Gate::Z(_) => "Z",
        Gate::S(_) => "Z^½",
        Gate::Sdg(_) => "Z^-½",
        Gate::T(_) => "Z^¼",
        Gate::Tdg(_) => "Z^-¼",
        Gate::SqrtX(_) => "X^½",
        Gate::SqrtXdg(_) => "X^-½",
        Gate::Measure { .. } => "Measure",
        _ => return None,
    })
}

fn single_qubit_gate(name: &str, q: Qubit) -> Option<Gate> {
    Some(match name {
        "H" => Gate::H(q),
        "X" => Gate::X(q),
        "Z" => Gate::Z(q),
        "Z^½" => Gate::S(q),
        "Z^-½" => Gate::Sdg(q),
        "Z^¼" => Gate::T(q),
        "Z^-¼" => Gate::Tdg(q),
        "X^½" => Gate::SqrtX(q),
        "X^-½" => Gate::SqrtXdg(q),
        _ => return None,
    })
}

#[derive(Serialize)]
struct CustomGate {
    id: &'static str,
    name: &'static str,
    matrix: &'static str,
}

#[derive(Serialize)]
struct QuirkDoc {
    cols: Vec<Vec<Value>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    gates: Vec<CustomGate>,
}

fn unrepresentable(op: usize, why: &str) -> CodecError {
    CodecError::Unrepresentable {
        op,
        reason: why.to_string(),
    }
}

/// The Quirk JSON for `circuit` (before URL encoding).
pub fn export_quirk_json(circuit: &Circuit) -> Result<String, CodecError> {
    let violations = circuit.validate();
    if !violations.is_empty() {
        return Err(CodecError::InvalidCircuit(violations));
    }
    let width = circuit.qubit_count();
    let blank = || vec![Value::from(1); width];
    let mut doc = QuirkDoc {
        cols: Vec::new(),
        gates: Vec::new(),
    };
    if !circuit.ancilla_qubits().is_empty() {
        let mut col = blank();
        for q in circuit.ancilla_qubits() {
            col[q.0] = Value::from(ANCILLA_MARKER_ID);
        }
        doc.cols.push(col);
        doc.gates.push(CustomGate {
            id: ANCILLA_MARKER_ID,
            name: ANCILLA_MARKER_NAMES[0],
            matrix: IDENTITY_MATRIX,
        });
    }

    // Wires that hold a measurement result, and the wire behind each bit.
    let mut classical = vec![false; width];
    let mut bit_wire: HashMap<Bit, usize> = HashMap::new();
    for (i, op) in circuit.ops().iter().enumerate() {
        let mut col = blank();
        for q in op.gate.qubits() {
            if classical[q.0] {
                return Err(unrepresentable(i, "gate on an already-measured wire"));
            }
        }
        match op.gate {
            Gate::Reset(_) => return Err(unrepresentable(i, "reset has no Quirk equivalent")),
            Gate::Measure { qubit, bit } => {
                col[qubit.0] = Value::from("Measure");
                classical[qubit.0] = true;
                bit_wire.insert(bit, qubit.0);
            }
            Gate::Cx { control, target } => {
                col[control.0] = Value::from(CONTROL);
                col[target.0] = Value::from("X");
            }
            Gate::Cz(a, b) => {
                col[a.0] = Value::from(CONTROL);
                col[b.0] = Value::from("Z");
            }
            ref g => {
                let name = gate_name(g).expect("single-qubit gates all have Quirk names");
                col[g.qubits()[0].0] = Value::from(name);
            }
        }
        if let Some(c) = op.condition {
            let wire = bit_wire[&c.bit];
            col[wire] = Value::from(if c.value { CONTROL } else { ANTI_CONTROL });
        }
        doc.cols.push(col);
    }
    Ok(serde_json::to_string(&doc).expect("quirk document serializes"))
}

/// A `https://algassert.com/quirk#circuit=` URL for `circuit`.
pub fn export_quirk_url(circuit: &Circuit) -> Result<String, CodecError> {
    let json = export_quirk_json(circuit)?;
    Ok(format!(
        "{QUIRK_PREFIX}{}",
        utf8_percent_encode(&json, ENCODE_SET)
    ))
}

/// Extracts and fully decodes the JSON payload of a Quirk URL. LaTeX-style
/// escapes (`\%`, `\#`) and repeated percent-encoding are tolerated.
fn decode_payload(url: &str) -> Result<String, CodecError> {
    let cleaned = url.trim().replace("\\%", "%").replace("\\#", "#");
    let mut payload = match cleaned.find("circuit=") {
        Some(i) => cleaned[i + "circuit=".len()..].to_string(),
        None if cleaned.starts_with('{') => cleaned,
        None => return Err(CodecError::MalformedUrl("missing `circuit=`".into())),
    };
    for _ in 0..4 {
        if payload.trim_start().starts_with('{') {
            break;
        }
        let next = percent_decode_str(&payload)
            .decode_utf8()
            .map_err(|e| CodecError::MalformedUrl(e.to_string()))?
            .into_owned();
        if next == payload {
            break;
        }
        payload = next;
    }
    Ok(payload)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Marker {
    Test,
    Verify,
    Ancilla,
    Annotation,
}

fn custom_markers(doc: &Value) -> Result<HashMap<String, Marker>, CodecError> {
    let mut out = HashMap::new();
    let Some(gates) = doc.get("gates") else {
        return Ok(out);
    };
    let gates = gates
        .as_array()
        .ok_or_else(|| CodecError::MalformedJson("`gates` is not an array".into()))?;
    for g in gates {
        let id = g
            .get("id")
            .and_then(Value::as_str)
            .ok_or_else(|| CodecError::MalformedJson("custom gate without `id`".into()))?;
        let matrix: String = g
            .get("matrix")
            .and_then(Value::as_str)
            .unwrap_or("")
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect();
        if matrix != IDENTITY_MATRIX {
            // Non-identity custom gates stay unknown and are rejected where used.
            continue;
        }
        let name = g.get("name").and_then(Value::as_str).unwrap_or("");
        let marker = match name {
            "test" => Marker::Test,
            "verify" => Marker::Verify,
            n if ANCILLA_MARKER_NAMES.contains(&n) => Marker::Ancilla,
            _ => Marker::Annotation,
        };
        out.insert(id.to_string(), marker);
    }
    Ok(out)
}

fn column_has(col: &[Value], markers: &HashMap<String, Marker>, want: Marker) -> bool {
    col.iter()
        .any(|v| v.as_str().and_then(|s| markers.get(s)) == Some(&want))
}

enum Cell<'a> {
    Empty,
    Control(bool),
    Marker(Marker),
    Gate(&'a str),
}

fn classify<'a>(v: &'a Value, markers: &HashMap<String, Marker>) -> Result<Cell<'a>, CodecError> {
    match v {
        Value::Null => Ok(Cell::Empty),
        Value::Number(n) if n.as_u64() == Some(1) => Ok(Cell::Empty),
        Value::String(s) => Ok(match s.as_str() {
            CONTROL => Cell::Control(true),
            ANTI_CONTROL => Cell::Control(false),
            s => match markers.get(s) {
                Some(&m) => Cell::Marker(m),
                None => Cell::Gate(s),
            },
        }),
        other => Err(CodecError::UnsupportedGate(other.to_string())),
    }
}

fn unsupported(col: usize, why: &str) -> CodecError {
    CodecError::UnsupportedConstruct {
        column: col,
        reason: why.to_string(),
    }
}

/// Parses a Quirk URL (or a bare `circuit=` payload) into a circuit.
/// Measured wires and `|0>`-tagged wires become ancillas; every other
/// wire is data.
pub fn parse_quirk_url(url: &str) -> Result<Circuit, CodecError> {
    let payload = decode_payload(url)?;
    let doc: Value =
        serde_json::from_str(&payload).map_err(|e| CodecError::MalformedJson(e.to_string()))?;
    if let Some(init) = doc.get("init") {
        if init.as_array().is_some_and(|a| !a.is_empty()) {
            return Err(CodecError::UnsupportedGate("init".into()));
        }
    }
    let markers = custom_markers(&doc)?;
    let cols = doc
        .get("cols")
        .and_then(Value::as_array)
        .ok_or_else(|| CodecError::MalformedJson("missing `cols` array".into()))?;
    let cols: Vec<&Vec<Value>> = cols
        .iter()
        .map(|c| {
            c.as_array()
                .ok_or_else(|| CodecError::MalformedJson("column is not an array".into()))
        })
        .collect::<Result<_, _>>()?;

    let start = cols
        .iter()
        .position(|c| column_has(c, &markers, Marker::Test));
    let range = match start.and_then(|s| {
        cols[s + 1..]
            .iter()
            .position(|c| column_has(c, &markers, Marker::Verify))
            .map(|v| (s + 1, s + 1 + v))
    }) {
        Some((a, b)) => a..b,
        None => 0..cols.len(),
    };

    let width = cols[range.clone()]
        .iter()
        .map(|c| c.len())
        .max()
        .unwrap_or(0);
    let mut ops = Vec::new();
    let mut ancilla = vec![false; width];
    let mut measured: Vec<Option<Bit>> = vec![None; width];
    let mut bit_count = 0;

    for ci in range {
        let mut classical_ctrl: Option<(Bit, bool)> = None;
        let mut quantum_ctrl: Option<Qubit> = None;
        let mut targets: Vec<(usize, &str)> = Vec::new();
        for (w, v) in cols[ci].iter().enumerate() {
            match classify(v, &markers)? {
                Cell::Empty | Cell::Marker(Marker::Annotation) => {}
                Cell::Marker(Marker::Ancilla) => ancilla[w] = true,
                Cell::Marker(_) => {}
                Cell::Control(positive) => match measured[w] {
                    Some(bit) => {
                        if classical_ctrl.replace((bit, positive)).is_some() {
                            return Err(unsupported(ci, "more than one classical control"));
                        }
                    }
                    None if !positive => {
                        return Err(unsupported(ci, "anti-control on a quantum wire"))
                    }
                    None => {
                        if quantum_ctrl.replace(Qubit(w)).is_some() {
                            return Err(unsupported(ci, "more than one quantum control"));
                        }
                    }
                },
                Cell::Gate(name) => {
                    if name != "Measure" && single_qubit_gate(name, Qubit(w)).is_none() {
                        return Err(CodecError::UnsupportedGate(name.to_string()));
                    }
                    if measured[w].is_some() {
                        return Err(unsupported(ci, "gate on an already-measured wire"));
                    }
                    targets.push((w, name));
                }
            }
        }
        for (w, name) in targets {
            let q = Qubit(w);
            let gate = if name == "Measure" {
                if quantum_ctrl.is_some() || classical_ctrl.is_some() {
                    return Err(unsupported(ci, "controlled measurement"));
                }
                let bit = Bit(bit_count);
                bit_count += 1;
                measured[w] = Some(bit);
                ancilla[w] = true;
                Gate::Measure { qubit: q, bit }
            } else if let Some(control) = quantum_ctrl {
                match name {
                    "X" => Gate::Cx { control, target: q },
                    "Z" => Gate::Cz(control, q),
                    _ => return Err(unsupported(ci, "only X and Z may be quantum-controlled")),
                }
            } else {
                single_qubit_gate(name, q).expect("checked above")
            };
            ops.push(match classical_ctrl {
                Some((bit, value)) => Op::conditioned(gate, bit, value),
                None => Op::new(gate),
            });
        }
    }

    let (anc, data): (Vec<Qubit>, Vec<Qubit>) = (0..width).map(Qubit).partition(|q| ancilla[q.0]);
    let circuit = Circuit::from_parts(width, bit_count, ops, data, anc);
    let violations = circuit.validate();
    if !violations.is_empty() {
        return Err(CodecError::InvalidCircuit(violations));
    }
    Ok(circuit)
}
