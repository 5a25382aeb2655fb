//! Straight-line gate programs.
//!
//! ```text
//! qubits 2        # optional; inferred from the largest index otherwise
//! H 0
//! RX 1.5708 1
//! IZZ 0.25 0 1
//! T 1
//! MEASURE 0
//! ```

use std::fmt;
use std::str::FromStr;

use super::{apply, gate_matrix, measure, GateName, StateVector, MAX_QUBITS};
use crate::error::{Error, Result};
use crate::logic::strip_comment;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Instruction {
    Rx { theta: f64, qubit: usize },
    H { qubit: usize },
    Izz { theta: f64, qubits: [usize; 2] },
    T { qubit: usize },
    Measure { qubit: usize },
}

impl Instruction {
    fn qubits(&self) -> Vec<usize> {
        match *self {
            Instruction::Rx { qubit, .. }
            | Instruction::H { qubit }
            | Instruction::T { qubit }
            | Instruction::Measure { qubit } => vec![qubit],
            Instruction::Izz { qubits, .. } => qubits.to_vec(),
        }
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instruction::Rx { theta, qubit } => write!(f, "RX {theta} {qubit}"),
            Instruction::H { qubit } => write!(f, "H {qubit}"),
            Instruction::Izz {
                theta,
                qubits: [a, b],
            } => write!(f, "IZZ {theta} {a} {b}"),
            Instruction::T { qubit } => write!(f, "T {qubit}"),
            Instruction::Measure { qubit } => write!(f, "MEASURE {qubit}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Program {
    num_qubits: usize,
    instructions: Vec<Instruction>,
}

/// One measurement history and the state it leaves behind.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub probability: f64,
    /// `(qubit, bit)` for every measurement along this branch, in order.
    pub outcomes: Vec<(usize, usize)>,
    pub state: StateVector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Execution {
    pub branches: Vec<Branch>,
    /// Classical bits produced by measurement on any single branch.
    pub measured_bits: u64,
}

impl Program {
    pub fn new(num_qubits: usize, instructions: Vec<Instruction>) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::TooWide {
                width: num_qubits,
                max: MAX_QUBITS,
            });
        }
        for ins in &instructions {
            let qs = ins.qubits();
            if let Some(&q) = qs.iter().find(|&&q| q >= num_qubits) {
                return Err(Error::LineOutOfRange {
                    line: q,
                    width: num_qubits,
                });
            }
            if qs.len() == 2 && qs[0] == qs[1] {
                return Err(Error::InvalidGate(format!("{ins}: repeated qubit")));
            }
        }
        Ok(Program {
            num_qubits,
            instructions,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn measurement_count(&self) -> u64 {
        self.instructions
            .iter()
            .filter(|i| matches!(i, Instruction::Measure { .. }))
            .count() as u64
    }

    fn step(&self, ins: &Instruction, s: &StateVector) -> Result<StateVector> {
        let (name, theta, targets) = match *ins {
            Instruction::Rx { theta, qubit } => (GateName::Rx, Some(theta), vec![qubit]),
            Instruction::H { qubit } => (GateName::H, None, vec![qubit]),
            Instruction::Izz { theta, qubits } => (GateName::Izz, Some(theta), qubits.to_vec()),
            Instruction::T { qubit } => (GateName::T, None, vec![qubit]),
            Instruction::Measure { .. } => unreachable!("measurement handled by caller"),
        };
        apply(&gate_matrix(name, theta)?, s, &targets)
    }

    /// Runs the program, following every measurement outcome.
    pub fn run(&self, initial: &StateVector) -> Result<Execution> {
        self.check_state(initial)?;
        let mut branches = vec![Branch {
            probability: 1.0,
            outcomes: Vec::new(),
            state: initial.clone(),
        }];
        for ins in &self.instructions {
            branches = match *ins {
                Instruction::Measure { qubit } => {
                    let mut next = Vec::with_capacity(branches.len() * 2);
                    for b in branches {
                        for o in measure(&b.state, qubit)? {
                            let mut outcomes = b.outcomes.clone();
                            outcomes.push((qubit, o.basis_index));
                            next.push(Branch {
                                probability: b.probability * o.probability,
                                outcomes,
                                state: o.post_state,
                            });
                        }
                    }
                    next
                }
                _ => branches
                    .into_iter()
                    .map(|b| {
                        Ok(Branch {
                            state: self.step(ins, &b.state)?,
                            ..b
                        })
                    })
                    .collect::<Result<_>>()?,
            };
        }
        Ok(Execution {
            branches,
            measured_bits: self.measurement_count(),
        })
    }

    /// Runs the program choosing one outcome per measurement. `uniform`
    /// must yield samples from `[0, 1)`.
    pub fn run_sampled(
        &self,
        initial: &StateVector,
        mut uniform: impl FnMut() -> f64,
    ) -> Result<Execution> {
        self.check_state(initial)?;
        let mut branch = Branch {
            probability: 1.0,
            outcomes: Vec::new(),
            state: initial.clone(),
        };
        for ins in &self.instructions {
            match *ins {
                Instruction::Measure { qubit } => {
                    let outcomes = measure(&branch.state, qubit)?;
                    let r = uniform();
                    let mut acc = 0.0;
                    let chosen = outcomes
                        .iter()
                        .find(|o| {
                            acc += o.probability;
                            r < acc
                        })
                        .unwrap_or_else(|| outcomes.last().expect("at least one outcome"));
                    branch.probability *= chosen.probability;
                    branch.outcomes.push((qubit, chosen.basis_index));
                    branch.state = chosen.post_state.clone();
                }
                _ => branch.state = self.step(ins, &branch.state)?,
            }
        }
        Ok(Execution {
            branches: vec![branch],
            measured_bits: self.measurement_count(),
        })
    }

    fn check_state(&self, s: &StateVector) -> Result<()> {
        if s.num_qubits() != self.num_qubits {
            return Err(Error::DimensionMismatch(format!(
                "program uses {} qubits, state has {}",
                self.num_qubits,
                s.num_qubits()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qubits {}", self.num_qubits)?;
        for ins in &self.instructions {
            writeln!(f, "{ins}")?;
        }
        Ok(())
    }
}

impl FromStr for Program {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut declared: Option<usize> = None;
        let mut instructions = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            let head = tokens[0].to_ascii_uppercase();
            let args = &tokens[1..];
            let qubit = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| Error::parse(lineno, format!("invalid qubit index `{s}`")))
            };
            let angle = |s: &str| {
                s.parse::<f64>()
                    .ok()
                    .filter(|t| t.is_finite())
                    .ok_or_else(|| Error::parse(lineno, format!("invalid angle `{s}`")))
            };
            let ins = match (head.as_str(), args) {
                ("QUBITS", [n]) if declared.is_none() && instructions.is_empty() => {
                    declared = Some(qubit(n)?);
                    continue;
                }
                ("RX", [t, q]) => Instruction::Rx {
                    theta: angle(t)?,
                    qubit: qubit(q)?,
                },
                ("H", [q]) => Instruction::H { qubit: qubit(q)? },
                ("IZZ", [t, a, b]) => Instruction::Izz {
                    theta: angle(t)?,
                    qubits: [qubit(a)?, qubit(b)?],
                },
                ("T", [q]) => Instruction::T { qubit: qubit(q)? },
                ("MEASURE", [q]) => Instruction::Measure { qubit: qubit(q)? },
                _ => {
                    return Err(Error::parse(
                        lineno,
                        format!("malformed instruction `{line}`"),
                    ))
                }
            };
            instructions.push(ins);
        }
        let num_qubits = declared.unwrap_or_else(|| {
            instructions
                .iter()
                .flat_map(Instruction::qubits)
                .max()
                .map_or(1, |q| q + 1)
        });
        Program::new(num_qubits, instructions).map_err(|e| Error::parse(0, e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn parses_and_infers_width() {
        let p: Program = "H 0\nIZZ 0.5 0 2 # phase\nMEASURE 1\n".parse().unwrap();
        assert_eq!(p.num_qubits(), 3);
        assert_eq!(p.measurement_count(), 1);
        let again: Program = p.to_string().parse().unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn parse_errors() {
        assert!("RX 1\n".parse::<Program>().is_err());
        assert!("H a\n".parse::<Program>().is_err());
        assert!("RX nan 0\n".parse::<Program>().is_err());
        assert!("qubits 1\nH 1\n".parse::<Program>().is_err());
        assert!("IZZ 1 0 0\n".parse::<Program>().is_err());
        assert!("CNOT 0 1\n".parse::<Program>().is_err());
        assert!("H 0\nqubits 2\n".parse::<Program>().is_err());
    }

    #[test]
    fn distribution_over_measurements() {
        let p: Program = "qubits 2\nH 0\nH 1\nMEASURE 0\nMEASURE 1\n"
            .parse()
            .unwrap();
        let run = p.run(&StateVector::basis(2, 0).unwrap()).unwrap();
        assert_eq!(run.branches.len(), 4);
        assert_eq!(run.measured_bits, 2);
        for b in &run.branches {
            assert!((b.probability - 0.25).abs() < 1e-12);
            let (q0, q1) = (b.outcomes[0].1, b.outcomes[1].1);
            let idx = q0 << 1 | q1;
            assert!((b.state.amplitudes()[idx] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
        let total: f64 = run.branches.iter().map(|b| b.probability).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sampling_picks_one_branch() {
        let p: Program = "H 0\nMEASURE 0\n".parse().unwrap();
        let init = StateVector::basis(1, 0).unwrap();
        let low = p.run_sampled(&init, || 0.1).unwrap();
        let high = p.run_sampled(&init, || 0.9).unwrap();
        assert_eq!(low.branches[0].outcomes, vec![(0, 0)]);
        assert_eq!(high.branches[0].outcomes, vec![(0, 1)]);
    }

    #[test]
    fn state_width_must_match() {
        let p: Program = "H 1\n".parse().unwrap();
        assert!(p.run(&StateVector::basis(1, 0).unwrap()).is_err());
    }
}
