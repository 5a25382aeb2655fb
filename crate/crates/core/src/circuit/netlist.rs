//! Text netlist format.
//!
//! ```text
//! # full adder fragment
//! lines 4
//! ancilla 3 0
//! garbage 0
//! TOF 0 1 3
//! CNOT 0 1
//! FRED 2 0 1
//! NOT 2
//! ```

use std::fmt;
use std::str::FromStr;

use super::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};
use crate::logic::strip_comment;

impl FromStr for Circuit {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut circuit: Option<Circuit> = None;
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let mut tokens = line.split_whitespace();
            let head = tokens.next().unwrap_or_default().to_ascii_uppercase();
            let args = tokens
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::parse(lineno, format!("invalid operand `{t}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            let at_line = |e: Error| Error::parse(lineno, e.to_string());

            let Some(c) = circuit.as_mut() else {
                if head != "LINES" || args.len() != 1 {
                    return Err(Error::parse(lineno, "expected `lines <width>` header"));
                }
                circuit = Some(Circuit::new(args[0]).map_err(at_line)?);
                continue;
            };

            let kind = match head.as_str() {
                "ANCILLA" => {
                    match args[..] {
                        [l, v @ (0 | 1)] => c.set_ancilla(l, v == 1).map_err(at_line)?,
                        _ => return Err(Error::parse(lineno, "expected `ancilla <line> <0|1>`")),
                    }
                    continue;
                }
                "GARBAGE" => {
                    match args[..] {
                        [l] => c.set_garbage(l).map_err(at_line)?,
                        _ => return Err(Error::parse(lineno, "expected `garbage <line>`")),
                    }
                    continue;
                }
                "LINES" => return Err(Error::parse(lineno, "duplicate `lines` header")),
                "NOT" => GateKind::Not,
                "CNOT" => GateKind::Cnot,
                "TOF" | "TOFFOLI" => GateKind::Toffoli,
                "FRED" | "FREDKIN" => GateKind::Fredkin,
                other => return Err(Error::parse(lineno, format!("unknown directive `{other}`"))),
            };
            let gate = Gate::from_lines(kind, &args).map_err(at_line)?;
            c.push(gate).map_err(at_line)?;
        }
        circuit.ok_or_else(|| Error::parse(1, "missing `lines <width>` header"))
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "lines {}", self.width)?;
        for (line, value) in &self.ancillas {
            writeln!(f, "ancilla {line} {}", u8::from(*value))?;
        }
        for line in &self.garbage {
            writeln!(f, "garbage {line}")?;
        }
        for gate in &self.gates {
            writeln!(f, "{gate}")?;
        }
        Ok(())
    }
}
