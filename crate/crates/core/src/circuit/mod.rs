//! Reversible circuits over NOT, CNOT, Toffoli and Fredkin gates.
//!
//! A [`Circuit`] is a gate list over numbered lines. Some lines may be
//! declared ancillas (fixed constant inputs) and some outputs may be
//! declared garbage. Simulation works on whole-circuit [`BitWord`]s with
//! line 0 as the most significant bit.

mod dual_rail;
mod netlist;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::logic::{BitWord, Projection, TruthTable, MAX_WIDTH};

pub use dual_rail::{dual_rail_embed, DualRailFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum GateKind {
    Not,
    Cnot,
    Toffoli,
    Fredkin,
}

impl GateKind {
    /// Mnemonic used in the netlist format.
    pub fn mnemonic(self) -> &'static str {
        match self {
            GateKind::Not => "NOT",
            GateKind::Cnot => "CNOT",
            GateKind::Toffoli => "TOF",
            GateKind::Fredkin => "FRED",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            GateKind::Not => 1,
            GateKind::Cnot => 2,
            GateKind::Toffoli | GateKind::Fredkin => 3,
        }
    }
}

/// A gate with its operand lines, controls first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    Not { target: usize },
    Cnot { control: usize, target: usize },
    Toffoli { controls: [usize; 2], target: usize },
    Fredkin { control: usize, targets: [usize; 2] },
}

impl Gate {
    pub fn not(target: usize) -> Self {
        Gate::Not { target }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Gate::Cnot { control, target }
    }

    pub fn toffoli(c1: usize, c2: usize, target: usize) -> Self {
        Gate::Toffoli {
            controls: [c1, c2],
            target,
        }
    }

    pub fn fredkin(control: usize, t1: usize, t2: usize) -> Self {
        Gate::Fredkin {
            control,
            targets: [t1, t2],
        }
    }

    /// Builds a gate from a kind and operand list (controls first).
    pub fn from_lines(kind: GateKind, lines: &[usize]) -> Result<Self> {
        if lines.len() != kind.arity() {
            return Err(Error::InvalidGate(format!(
                "{} takes {} operands, got {}",
                kind.mnemonic(),
                kind.arity(),
                lines.len()
            )));
        }
        let gate = match kind {
            GateKind::Not => Gate::not(lines[0]),
            GateKind::Cnot => Gate::cnot(lines[0], lines[1]),
            GateKind::Toffoli => Gate::toffoli(lines[0], lines[1], lines[2]),
            GateKind::Fredkin => Gate::fredkin(lines[0], lines[1], lines[2]),
        };
        Ok(gate)
    }

    pub fn kind(&self) -> GateKind {
        match self {
            Gate::Not { .. } => GateKind::Not,
            Gate::Cnot { .. } => GateKind::Cnot,
            Gate::Toffoli { .. } => GateKind::Toffoli,
            Gate::Fredkin { .. } => GateKind::Fredkin,
        }
    }

    /// Operand lines, controls before targets.
    pub fn lines(&self) -> Vec<usize> {
        match *self {
            Gate::Not { target } => vec![target],
            Gate::Cnot { control, target } => vec![control, target],
            Gate::Toffoli {
                controls: [a, b],
                target,
            } => vec![a, b, target],
            Gate::Fredkin {
                control,
                targets: [a, b],
            } => vec![control, a, b],
        }
    }

    /// Checks that the operands are distinct and below `width`.
    pub fn validate(&self, width: usize) -> Result<()> {
        let lines = self.lines();
        for (i, &line) in lines.iter().enumerate() {
            if line >= width {
                return Err(Error::LineOutOfRange { line, width });
            }
            if lines[..i].contains(&line) {
                return Err(Error::InvalidGate(format!("{self}: repeated line {line}")));
            }
        }
        Ok(())
    }

    /// Applies the gate to a raw state of `width` lines. Operands must
    /// already be validated.
    fn apply_raw(&self, width: usize, state: u32) -> u32 {
        let mask = |line: usize| 1u32 << (width - 1 - line);
        let is_set = |line: usize| state & mask(line) != 0;
        match *self {
            Gate::Not { target } => state ^ mask(target),
            Gate::Cnot { control, target } => {
                if is_set(control) {
                    state ^ mask(target)
                } else {
                    state
                }
            }
            Gate::Toffoli {
                controls: [a, b],
                target,
            } => {
                if is_set(a) && is_set(b) {
                    state ^ mask(target)
                } else {
                    state
                }
            }
            Gate::Fredkin {
                control,
                targets: [a, b],
            } => {
                if is_set(control) && is_set(a) != is_set(b) {
                    state ^ mask(a) ^ mask(b)
                } else {
                    state
                }
            }
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind().mnemonic())?;
        for line in self.lines() {
            write!(f, " {line}")?;
        }
        Ok(())
    }
}

/// Applies a single gate to a whole-circuit state.
pub fn apply_gate(gate: &Gate, state: BitWord) -> Result<BitWord> {
    gate.validate(state.width())?;
    BitWord::new(state.width(), gate.apply_raw(state.width(), state.value()))
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
    ancillas: BTreeMap<usize, bool>,
    garbage: BTreeSet<usize>,
}

impl Circuit {
    pub fn new(width: usize) -> Result<Self> {
        if width > MAX_WIDTH {
            return Err(Error::TooWide {
                width,
                max: MAX_WIDTH,
            });
        }
        Ok(Circuit {
            width,
            ..Default::default()
        })
    }

    pub fn from_gates(width: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Self> {
        let mut c = Self::new(width)?;
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.width)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Declares `line` as an ancilla holding the constant `value`.
    pub fn set_ancilla(&mut self, line: usize, value: bool) -> Result<()> {
        self.check_line(line)?;
        self.ancillas.insert(line, value);
        Ok(())
    }

    /// Declares output `line` as garbage.
    pub fn set_garbage(&mut self, line: usize) -> Result<()> {
        self.check_line(line)?;
        self.garbage.insert(line);
        Ok(())
    }

    fn check_line(&self, line: usize) -> Result<()> {
        if line >= self.width {
            Err(Error::LineOutOfRange {
                line,
                width: self.width,
            })
        } else {
            Ok(())
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn ancillas(&self) -> &BTreeMap<usize, bool> {
        &self.ancillas
    }

    pub fn garbage(&self) -> &BTreeSet<usize> {
        &self.garbage
    }

    /// Lines that take caller-supplied input bits, in ascending order.
    pub fn free_lines(&self) -> Vec<usize> {
        (0..self.width)
            .filter(|l| !self.ancillas.contains_key(l))
            .collect()
    }

    /// Output lines that are not garbage, in ascending order.
    pub fn functional_lines(&self) -> Vec<usize> {
        (0..self.width)
            .filter(|l| !self.garbage.contains(l))
            .collect()
    }

    /// Builds the initial whole-circuit state from the free-line input bits.
    pub fn initial_state(&self, input: BitWord) -> Result<BitWord> {
        let free = self.free_lines();
        if input.width() != free.len() {
            return Err(Error::WidthMismatch {
                expected: free.len(),
                actual: input.width(),
            });
        }
        let mut state = BitWord::zero(self.width)?;
        for (i, &line) in free.iter().enumerate() {
            state = state.with_bit(line, input.bit(i)?)?;
        }
        for (&line, &value) in &self.ancillas {
            state = state.with_bit(line, value)?;
        }
        Ok(state)
    }

    /// Applies every gate, in order, to a whole-circuit state.
    pub fn run(&self, state: BitWord) -> Result<BitWord> {
        if state.width() != self.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                actual: state.width(),
            });
        }
        let value = self
            .gates
            .iter()
            .fold(state.value(), |s, g| g.apply_raw(self.width, s));
        BitWord::new(self.width, value)
    }

    /// Simulates the circuit: `input` supplies the free lines (ancillas take
    /// their constants) and the full output word is returned.
    pub fn simulate(&self, input: BitWord) -> Result<BitWord> {
        self.run(self.initial_state(input)?)
    }

    /// Whole-circuit states: the initial state followed by the state after
    /// each gate.
    pub fn trace(&self, input: BitWord) -> Result<Vec<BitWord>> {
        let mut state = self.initial_state(input)?;
        let mut states = Vec::with_capacity(self.gates.len() + 1);
        states.push(state);
        for g in &self.gates {
            state = BitWord::new(self.width, g.apply_raw(self.width, state.value()))?;
            states.push(state);
        }
        Ok(states)
    }

    /// Exhaustive table over all free-input assignments with ancillas fixed.
    /// Garbage lines stay in the output word.
    pub fn to_truth_table(&self) -> Result<TruthTable> {
        let free = self.free_lines();
        let outputs = (0..1u32 << free.len())
            .map(|x| {
                let input = BitWord::new(free.len(), x)?;
                Ok(self.simulate(input)?.value())
            })
            .collect::<Result<Vec<_>>>()?;
        TruthTable::new(free.len(), self.width, outputs)
    }

    /// Table of the gate list over every line, ignoring ancilla constants.
    pub fn permutation_table(&self) -> Result<TruthTable> {
        TruthTable::from_fn(self.width, self.width, |x| {
            self.gates.iter().fold(x, |s, g| g.apply_raw(self.width, s))
        })
    }

    /// [`Circuit::to_truth_table`] with the garbage lines dropped. The
    /// projection reports whether distinct outputs collided.
    pub fn functional_table(&self) -> Result<Projection> {
        self.to_truth_table()?
            .project_outputs(&self.functional_lines())
    }

    /// Gates in reverse order. Every gate kind is self-inverse, so this is
    /// the inverse circuit on whole-circuit states. Ancilla and garbage
    /// declarations are not carried over: the inverse consumes a full output
    /// word and restores the full input word, ancilla constants included.
    pub fn invert(&self) -> Circuit {
        Circuit {
            width: self.width,
            gates: self.gates.iter().rev().copied().collect(),
            ancillas: BTreeMap::new(),
            garbage: BTreeSet::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(s: &str) -> BitWord {
        s.parse().unwrap()
    }

    #[test]
    fn gate_semantics() {
        assert_eq!(
            apply_gate(&Gate::cnot(0, 1), word("10")).unwrap(),
            word("11")
        );
        assert_eq!(
            apply_gate(&Gate::cnot(0, 1), word("01")).unwrap(),
            word("01")
        );
        assert_eq!(
            apply_gate(&Gate::toffoli(0, 1, 2), word("110")).unwrap(),
            word("111")
        );
        assert_eq!(
            apply_gate(&Gate::toffoli(0, 1, 2), word("100")).unwrap(),
            word("100")
        );
        assert_eq!(
            apply_gate(&Gate::fredkin(0, 1, 2), word("101")).unwrap(),
            word("110")
        );
        assert_eq!(
            apply_gate(&Gate::fredkin(0, 1, 2), word("001")).unwrap(),
            word("001")
        );
        assert_eq!(apply_gate(&Gate::not(2), word("000")).unwrap(), word("001"));
    }

    #[test]
    fn gate_line_errors() {
        assert_eq!(
            apply_gate(&Gate::cnot(0, 2), word("10")),
            Err(Error::LineOutOfRange { line: 2, width: 2 })
        );
        assert!(matches!(
            apply_gate(&Gate::toffoli(0, 0, 1), word("11")),
            Err(Error::InvalidGate(_))
        ));
        assert!(Gate::from_lines(GateKind::Cnot, &[0]).is_err());
        assert_eq!(
            Gate::from_lines(GateKind::Fredkin, &[2, 0, 1]).unwrap(),
            Gate::fredkin(2, 0, 1)
        );
    }

    #[test]
    fn simulate_basics() {
        let empty = Circuit::new(4).unwrap();
        assert_eq!(empty.simulate(word("1011")).unwrap(), word("1011"));

        let cnot = Circuit::from_gates(2, [Gate::cnot(0, 1)]).unwrap();
        assert_eq!(cnot.simulate(word("10")).unwrap(), word("11"));

        let nn = Circuit::from_gates(1, [Gate::not(0), Gate::not(0)]).unwrap();
        assert_eq!(nn.simulate(word("0")).unwrap(), word("0"));

        assert!(matches!(
            cnot.simulate(word("1")),
            Err(Error::WidthMismatch {
                expected: 2,
                actual: 1
            })
        ));
    }

    #[test]
    fn ancillas_take_constants() {
        // AND via Toffoli onto a zero ancilla.
        let mut c = Circuit::from_gates(3, [Gate::toffoli(0, 1, 2)]).unwrap();
        c.set_ancilla(2, false).unwrap();
        c.set_garbage(0).unwrap();
        c.set_garbage(1).unwrap();
        assert_eq!(c.free_lines(), vec![0, 1]);
        assert_eq!(c.simulate(word("11")).unwrap(), word("111"));
        assert_eq!(c.simulate(word("10")).unwrap(), word("100"));

        let t = c.to_truth_table().unwrap();
        assert_eq!((t.in_width(), t.out_width()), (2, 3));
        assert!(!t.is_reversible());

        let p = c.functional_table().unwrap();
        assert!(p.information_lost);
        assert_eq!(p.table.outputs(), &[0, 0, 0, 1]);
    }

    #[test]
    fn truth_tables_of_single_gates() {
        let cnot = Circuit::from_gates(2, [Gate::cnot(0, 1)]).unwrap();
        assert_eq!(
            cnot.to_truth_table().unwrap().outputs(),
            &[0b00, 0b01, 0b11, 0b10]
        );

        let fred = Circuit::from_gates(3, [Gate::fredkin(0, 1, 2)]).unwrap();
        assert!(fred.to_truth_table().unwrap().is_conservative());

        let empty = Circuit::new(2).unwrap();
        assert_eq!(
            empty.to_truth_table().unwrap(),
            TruthTable::identity(2).unwrap()
        );
    }

    #[test]
    fn invert_reverses_gate_order() {
        let c = Circuit::from_gates(3, [Gate::toffoli(0, 1, 2), Gate::not(1)]).unwrap();
        assert_eq!(c.invert().gates(), &[Gate::not(1), Gate::toffoli(0, 1, 2)]);
        assert_eq!(Circuit::new(3).unwrap().invert().gates(), &[]);
    }

    #[test]
    fn invert_restores_ancillas() {
        let mut c = Circuit::from_gates(3, [Gate::toffoli(0, 1, 2), Gate::cnot(2, 0)]).unwrap();
        c.set_ancilla(2, true).unwrap();
        let inv = c.invert();
        for x in 0..4 {
            let input = BitWord::new(2, x).unwrap();
            let start = c.initial_state(input).unwrap();
            assert_eq!(inv.simulate(c.simulate(input).unwrap()).unwrap(), start);
        }
    }

    #[test]
    fn push_validates() {
        let mut c = Circuit::new(2).unwrap();
        assert!(c.push(Gate::toffoli(0, 1, 2)).is_err());
        assert!(c.set_ancilla(5, true).is_err());
        assert!(c.set_garbage(2).is_err());
        assert!(Circuit::new(17).is_err());
    }

    #[test]
    fn trace_lists_every_state() {
        let c = Circuit::from_gates(2, [Gate::not(0), Gate::cnot(0, 1)]).unwrap();
        let states = c.trace(word("00")).unwrap();
        assert_eq!(states, vec![word("00"), word("10"), word("11")]);
    }
}
