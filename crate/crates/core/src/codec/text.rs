//! Line-based circuit text format.
//!
//! ```text
//! qubits 5
//! bits 1
//! data 0 1 2 3
//! h 4
//! cx 1 4
//! m 4 -> b0
//! cz 2 3 if b0==0
//! ```
//!
//! Header lines come first. `data` lists the data qubits; every other
//! qubit is an ancilla (when `data` is omitted, all qubits are data).
//! Blank lines and `#` comments are ignored.

use std::fmt::Write as _;

use crate::circuit::{Bit, Circuit, Gate, Op, Qubit, Violation};

use super::CodecError;

fn mnemonic(gate: &Gate) -> String {
    match *gate {
        Gate::H(q) => format!("h {q}"),
        Gate::X(q) => format!("x {q}"),
        Gate::Z(q) => format!("z {q}"),
        Gate::S(q) => format!("s {q}"),
        Gate::Sdg(q) => format!("sdg {q}"),
        Gate::T(q) => format!("t {q}"),
        Gate::Tdg(q) => format!("tdg {q}"),
        Gate::SqrtX(q) => format!("sx {q}"),
        Gate::SqrtXdg(q) => format!("sxdg {q}"),
        Gate::Cx { control, target } => format!("cx {control} {target}"),
        Gate::Cz(a, b) => format!("cz {a} {b}"),
        Gate::Measure { qubit, bit } => format!("m {qubit} -> {bit}"),
        Gate::Reset(q) => format!("reset {q}"),
    }
}

/// Canonical text for a valid circuit.
pub fn emit_text(circuit: &Circuit) -> Result<String, CodecError> {
    let violations = circuit.validate();
    if !violations.is_empty() {
        return Err(CodecError::InvalidCircuit(violations));
    }
    let mut out = String::new();
    let _ = writeln!(out, "qubits {}", circuit.qubit_count());
    let _ = writeln!(out, "bits {}", circuit.bit_count());
    out.push_str("data");
    for q in circuit.data_qubits() {
        let _ = write!(out, " {q}");
    }
    out.push('\n');
    for op in circuit.ops() {
        out.push_str(&mnemonic(&op.gate));
        if let Some(c) = op.condition {
            let _ = write!(out, " if {}=={}", c.bit, c.value as u8);
        }
        out.push('\n');
    }
    Ok(out)
}

fn syntax(line: usize, message: impl Into<String>) -> CodecError {
    CodecError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_index(tok: &str, line: usize) -> Result<usize, CodecError> {
    tok.parse().map_err(|_| {
        syntax(
            line,
            format!("expected a non-negative integer, found `{tok}`"),
        )
    })
}

fn parse_bit(tok: &str, line: usize) -> Result<Bit, CodecError> {
    tok.strip_prefix('b')
        .ok_or_else(|| syntax(line, format!("expected a bit like `b0`, found `{tok}`")))
        .and_then(|k| parse_index(k, line))
        .map(Bit)
}

fn parse_gate(tokens: &[&str], line: usize) -> Result<Gate, CodecError> {
    let arity = |n: usize| {
        if tokens.len() == n + 1 {
            Ok(())
        } else {
            Err(syntax(
                line,
                format!(
                    "`{}` takes {n} operand(s), found {}",
                    tokens[0],
                    tokens.len() - 1
                ),
            ))
        }
    };
    let q = |i: usize| parse_index(tokens[i], line).map(Qubit);
    let single = |f: fn(Qubit) -> Gate| -> Result<Gate, CodecError> {
        arity(1)?;
        Ok(f(q(1)?))
    };
    match tokens[0] {
        "h" => single(Gate::H),
        "x" => single(Gate::X),
        "z" => single(Gate::Z),
        "s" => single(Gate::S),
        "sdg" => single(Gate::Sdg),
        "t" => single(Gate::T),
        "tdg" => single(Gate::Tdg),
        "sx" => single(Gate::SqrtX),
        "sxdg" => single(Gate::SqrtXdg),
        "reset" => single(Gate::Reset),
        "cx" => {
            arity(2)?;
            Ok(Gate::Cx {
                control: q(1)?,
                target: q(2)?,
            })
        }
        "cz" => {
            arity(2)?;
            Ok(Gate::Cz(q(1)?, q(2)?))
        }
        "m" => {
            if tokens.len() != 4 || tokens[2] != "->" {
                return Err(syntax(line, "expected `m <qubit> -> b<k>`"));
            }
            Ok(Gate::Measure {
                qubit: q(1)?,
                bit: parse_bit(tokens[3], line)?,
            })
        }
        other => Err(syntax(line, format!("unknown mnemonic `{other}`"))),
    }
}

fn parse_condition(text: &str, line: usize) -> Result<(Bit, bool), CodecError> {
    let compact: String = text.split_whitespace().collect();
    let (bit, value) = compact
        .split_once("==")
        .ok_or_else(|| syntax(line, "expected condition `b<k>==0|1`"))?;
    let value = match value {
        "0" => false,
        "1" => true,
        v => {
            return Err(syntax(
                line,
                format!("condition value must be 0 or 1, found `{v}`"),
            ))
        }
    };
    Ok((parse_bit(bit, line)?, value))
}

fn violation_error(v: Violation, op_lines: &[usize], header_line: usize) -> CodecError {
    let line = v.op.map_or(header_line, |i| op_lines[i]);
    CodecError::Invalid {
        line,
        message: v.kind.to_string(),
    }
}

/// Parses a circuit document. All indices are validated; the first
/// problem is reported with its 1-based line number.
pub fn parse_text(doc: &str) -> Result<Circuit, CodecError> {
    let mut qubits: Option<usize> = None;
    let mut bits: Option<usize> = None;
    let mut data: Option<Vec<Qubit>> = None;
    let mut ops = Vec::new();
    let mut op_lines = Vec::new();
    let mut header_line = 1;

    for (i, raw) in doc.lines().enumerate() {
        let line = i + 1;
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let (body, cond) = match text.split_once(" if ") {
            Some((b, c)) => (b.trim(), Some(parse_condition(c, line)?)),
            None => (text, None),
        };
        let tokens: Vec<&str> = body.split_whitespace().collect();
        match tokens[0] {
            "qubits" | "bits" | "data" => {
                if !ops.is_empty() {
                    return Err(syntax(line, format!("`{}` header after ops", tokens[0])));
                }
                if cond.is_some() {
                    return Err(syntax(line, "headers cannot be conditioned"));
                }
                header_line = line;
                let slot = match tokens[0] {
                    "qubits" => &mut qubits,
                    "bits" => &mut bits,
                    _ => {
                        if data.is_some() {
                            return Err(syntax(line, "duplicate `data` header"));
                        }
                        data = Some(
                            tokens[1..]
                                .iter()
                                .map(|t| parse_index(t, line).map(Qubit))
                                .collect::<Result<_, _>>()?,
                        );
                        continue;
                    }
                };
                if slot.is_some() {
                    return Err(syntax(line, format!("duplicate `{}` header", tokens[0])));
                }
                if tokens.len() != 2 {
                    return Err(syntax(line, format!("`{}` takes one count", tokens[0])));
                }
                *slot = Some(parse_index(tokens[1], line)?);
            }
            _ => {
                let gate = parse_gate(&tokens, line)?;
                ops.push(match cond {
                    Some((bit, value)) => Op::conditioned(gate, bit, value),
                    None => Op::new(gate),
                });
                op_lines.push(line);
            }
        }
    }

    // A document with nothing in it is the empty circuit.
    let qubit_count = match qubits {
        Some(n) => n,
        None if ops.is_empty() && bits.is_none() && data.is_none() => 0,
        None => return Err(syntax(header_line, "missing `qubits` header")),
    };
    let bit_count = bits.unwrap_or(0);
    let data = data.unwrap_or_else(|| (0..qubit_count).map(Qubit).collect());
    let ancillas = (0..qubit_count)
        .map(Qubit)
        .filter(|q| !data.contains(q))
        .collect();
    let circuit = Circuit::from_parts(qubit_count, bit_count, ops, data, ancillas);
    match circuit.validate().into_iter().next() {
        Some(v) => Err(violation_error(v, &op_lines, header_line)),
        None => Ok(circuit),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CircuitBuilder;
    use crate::synthesis::{cccz_6t, synth_cnz, CnzSpec, Method};

    #[test]
    fn single_t_line() {
        let mut b = CircuitBuilder::new(5);
        b.push(Gate::T(Qubit(4)));
        let text = emit_text(&b.build()).unwrap();
        assert_eq!(text.lines().last(), Some("t 4"));
    }

    #[test]
    fn measure_and_condition_lines() {
        let text = emit_text(&cccz_6t()).unwrap();
        assert!(text.contains("\nm 4 -> b0\n"));
        assert!(text.contains("\ncz 2 3 if b0==0\n"));
        assert!(text.contains("\ncz 0 1 if b0==1\n"));
        assert!(text.starts_with("qubits 5\nbits 1\ndata 0 1 2 3\n"));
    }

    #[test]
    fn cccz_golden() {
        let golden = "qubits 5\nbits 1\ndata 0 1 2 3\n\
            h 4\nt 4\ncx 1 4\ntdg 4\ncx 0 4\nt 4\ncx 1 4\ncx 2 4\ntdg 4\n\
            cx 3 4\nt 4\ncx 2 4\ntdg 4\ncx 3 4\nsxdg 4\nm 4 -> b0\n\
            cz 2 3 if b0==0\ncz 0 1 if b0==1\n";
        assert_eq!(emit_text(&cccz_6t()).unwrap(), golden);
    }

    #[test]
    fn roundtrip_synthesized() {
        let mut circuits = vec![cccz_6t()];
        for n in 2..=6 {
            let spec = CnzSpec::new(n).unwrap();
            circuits.push(synth_cnz(spec, Method::Baseline).unwrap());
            if n >= 3 {
                circuits.push(synth_cnz(spec, Method::Optimized).unwrap());
            }
        }
        for c in circuits {
            let text = emit_text(&c).unwrap();
            assert_eq!(parse_text(&text).unwrap(), c);
            assert_eq!(emit_text(&parse_text(&text).unwrap()).unwrap(), text);
        }
    }

    #[test]
    fn identical_operands_error_has_line() {
        let err = parse_text("qubits 2\nbits 0\n\ncx 0 0\n").unwrap_err();
        match err {
            CodecError::Invalid { line, message } => {
                assert_eq!(line, 4);
                assert!(message.contains("identical operands"));
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn empty_document() {
        let c = parse_text("qubits 0\nbits 0\n").unwrap();
        assert_eq!(c, Circuit::empty(0));
        assert_eq!(parse_text("").unwrap(), Circuit::empty(0));
        assert_eq!(parse_text("# nothing\n\n").unwrap(), Circuit::empty(0));
    }

    #[test]
    fn comments_and_blank_lines() {
        let c = parse_text("# header\nqubits 1\n\nh 0 # hadamard\n").unwrap();
        assert_eq!(c.ops(), &[Op::new(Gate::H(Qubit(0)))]);
        assert_eq!(c.bit_count(), 0);
    }

    #[test]
    fn errors() {
        let line_of = |doc: &str| match parse_text(doc).unwrap_err() {
            CodecError::Syntax { line, .. } | CodecError::Invalid { line, .. } => line,
            e => panic!("unexpected {e:?}"),
        };
        assert_eq!(line_of("qubits 1\nfoo 0\n"), 2);
        assert_eq!(line_of("qubits 1\nh 3\n"), 2);
        assert_eq!(
            line_of("qubits 2\nbits 1\ndata 0\nz 0 if b0==1\nm 1 -> b0\n"),
            4
        );
        assert_eq!(line_of("qubits 1\nh 0\nbits 0\n"), 3);
        assert_eq!(line_of("qubits 1\nh 0 if b0==2\n"), 2);
        assert_eq!(line_of("qubits 1\nm 0 b0\n"), 2);
        assert!(matches!(
            parse_text("h 0\n"),
            Err(CodecError::Syntax { .. })
        ));
    }
}
