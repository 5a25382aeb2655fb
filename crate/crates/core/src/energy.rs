//! Dissipation models: Landauer cost per bit, the whole-machine lower
//! bound, the CPU power decomposition, and interconnect I²R heating.
//!
//! Every function is a pure computation over an [`EnergyParams`] record.
//! Defaults describe a copper wire between two adjacent transistors at room
//! temperature.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::logic::strip_comment;

/// Physical and technology constants. SI units throughout.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyParams {
    /// Boltzmann constant, J/K.
    pub boltzmann: f64,
    /// Temperature, K.
    pub temperature: f64,
    /// Value used for ln 2. The default is the three-digit `0.693`; set it
    /// to [`std::f64::consts::LN_2`] for the exact constant.
    pub ln2: f64,
    /// Conductor resistivity, Ω·m.
    pub resistivity: f64,
    /// Wire length, m.
    pub wire_length: f64,
    /// Denominator of `R = ρ·l / s`.
    pub wire_cross_section: f64,
    /// Capacitance per unit wire length, F/m.
    pub capacitance_per_length: f64,
    /// Supply voltage, V.
    pub voltage: f64,
    /// Clock frequency, Hz.
    pub frequency: f64,
    /// Technology feature parameter. Informational only.
    pub lambda: f64,
    /// Treat `C·V²` as 1 in the dynamic power term.
    pub normalized_cv: bool,
}

impl Default for EnergyParams {
    fn default() -> Self {
        EnergyParams {
            boltzmann: 1.38e-23,
            temperature: 293.15,
            ln2: 0.693,
            resistivity: 1.678e-8,
            wire_length: 2.4e-5,
            wire_cross_section: 1.2e-5,
            capacitance_per_length: 30e-15 / 1e-6,
            voltage: 5.0,
            frequency: 1e9,
            lambda: 12.0,
            normalized_cv: false,
        }
    }
}

const KEYS: &[(&str, &[&str])] = &[
    ("boltzmann", &["k", "k_b", "kb"]),
    ("temperature", &["t", "temp"]),
    ("ln2", &[]),
    ("rho", &["resistivity"]),
    ("wire_length", &["l", "length"]),
    ("wire_cross_section", &["s", "cross_section"]),
    ("capacitance", &["c", "capacitance_per_length"]),
    ("voltage", &["v"]),
    ("frequency", &["f", "freq"]),
    ("lambda", &[]),
    ("normalized_cv", &[]),
];

fn canonical_key(key: &str) -> Option<&'static str> {
    KEYS.iter()
        .find(|(name, aliases)| *name == key || aliases.contains(&key))
        .map(|(name, _)| *name)
}

impl EnergyParams {
    /// Rejects negative or non-finite values.
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("boltzmann", self.boltzmann),
            ("temperature", self.temperature),
            ("ln2", self.ln2),
            ("rho", self.resistivity),
            ("wire_length", self.wire_length),
            ("wire_cross_section", self.wire_cross_section),
            ("capacitance", self.capacitance_per_length),
            ("voltage", self.voltage),
            ("frequency", self.frequency),
            ("lambda", self.lambda),
        ];
        for (name, value) in fields {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidParameter { name, value });
            }
        }
        if self.wire_cross_section == 0.0 {
            return Err(Error::InvalidParameter {
                name: "wire_cross_section",
                value: 0.0,
            });
        }
        Ok(())
    }

    /// Wire capacitance, F.
    pub fn total_capacitance(&self) -> f64 {
        self.capacitance_per_length * self.wire_length
    }

    fn set(&mut self, canonical: &str, value: &str) -> std::result::Result<(), String> {
        if canonical == "normalized_cv" {
            self.normalized_cv = value
                .parse()
                .map_err(|_| format!("expected true or false, got `{value}`"))?;
            return Ok(());
        }
        let v: f64 = value
            .parse()
            .map_err(|_| format!("invalid number `{value}` for {canonical}"))?;
        let slot = match canonical {
            "boltzmann" => &mut self.boltzmann,
            "temperature" => &mut self.temperature,
            "ln2" => &mut self.ln2,
            "rho" => &mut self.resistivity,
            "wire_length" => &mut self.wire_length,
            "wire_cross_section" => &mut self.wire_cross_section,
            "capacitance" => &mut self.capacitance_per_length,
            "voltage" => &mut self.voltage,
            "frequency" => &mut self.frequency,
            "lambda" => &mut self.lambda,
            _ => unreachable!(),
        };
        *slot = v;
        Ok(())
    }
}

/// Parses a technology file of `key = value` lines on top of the defaults.
impl FromStr for EnergyParams {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut params = EnergyParams::default();
        let mut seen = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(lineno, "expected `key = value`"))?;
            let key = key.trim().to_ascii_lowercase();
            let canonical = canonical_key(&key)
                .ok_or_else(|| Error::parse(lineno, format!("unknown parameter `{key}`")))?;
            if seen.contains(&canonical) {
                return Err(Error::parse(
                    lineno,
                    format!("duplicate parameter `{canonical}`"),
                ));
            }
            seen.push(canonical);
            params
                .set(canonical, value.trim())
                .map_err(|msg| Error::parse(lineno, msg))?;
        }
        params.validate()?;
        Ok(params)
    }
}

/// Writes the parameters back in technology-file form.
impl fmt::Display for EnergyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "boltzmann = {:e}", self.boltzmann)?;
        writeln!(f, "temperature = {}", self.temperature)?;
        writeln!(f, "ln2 = {}", self.ln2)?;
        writeln!(f, "rho = {:e}", self.resistivity)?;
        writeln!(f, "wire_length = {:e}", self.wire_length)?;
        writeln!(f, "wire_cross_section = {:e}", self.wire_cross_section)?;
        writeln!(f, "capacitance = {:e}", self.capacitance_per_length)?;
        writeln!(f, "voltage = {}", self.voltage)?;
        writeln!(f, "frequency = {:e}", self.frequency)?;
        writeln!(f, "lambda = {}", self.lambda)?;
        writeln!(f, "normalized_cv = {}", self.normalized_cv)
    }
}

/// Bit counts entering the whole-machine bound: `2n = k + l + i_r + n_pr`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct BoundInput {
    /// Input bits (`k`).
    pub input_bits: u64,
    /// Output bits (`l`).
    pub output_bits: u64,
    /// Instruction register bits (`i_r`).
    pub instruction_bits: u64,
    /// Bits of the combinational circuit (`n_pr`).
    pub circuit_bits: u64,
}

impl BoundInput {
    pub fn new(
        input_bits: u64,
        output_bits: u64,
        instruction_bits: u64,
        circuit_bits: u64,
    ) -> Self {
        BoundInput {
            input_bits,
            output_bits,
            instruction_bits,
            circuit_bits,
        }
    }

    /// `2n`.
    pub fn total_bits(&self) -> u64 {
        self.input_bits + self.output_bits + self.instruction_bits + self.circuit_bits
    }
}

impl Add for BoundInput {
    type Output = BoundInput;

    fn add(self, rhs: BoundInput) -> BoundInput {
        BoundInput {
            input_bits: self.input_bits + rhs.input_bits,
            output_bits: self.output_bits + rhs.output_bits,
            instruction_bits: self.instruction_bits + rhs.instruction_bits,
            circuit_bits: self.circuit_bits + rhs.circuit_bits,
        }
    }
}

/// `P_cpu = P_dyn + P_sc + P_leak`, watts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerBreakdown {
    p_dyn: f64,
    p_sc: f64,
    p_leak: f64,
    p_cpu: f64,
}

impl PowerBreakdown {
    pub fn new(p_dyn: f64, p_sc: f64, p_leak: f64) -> Self {
        PowerBreakdown {
            p_dyn,
            p_sc,
            p_leak,
            p_cpu: p_dyn + p_sc + p_leak,
        }
    }

    pub fn dynamic(&self) -> f64 {
        self.p_dyn
    }

    pub fn short_circuit(&self) -> f64 {
        self.p_sc
    }

    pub fn leakage(&self) -> f64 {
        self.p_leak
    }

    pub fn total(&self) -> f64 {
        self.p_cpu
    }
}

/// Transistor loss model for [`cpu_power`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Transistors {
    /// No short-circuit or leakage current.
    Ideal,
    /// Caller-supplied static losses, watts.
    Lossy { short_circuit: f64, leakage: f64 },
}

/// `k·T·ln 2`, joules.
pub fn landauer_per_bit(p: &EnergyParams) -> f64 {
    p.boltzmann * p.temperature * p.ln2
}

/// `2n·k·T·ln 2`, joules.
pub fn lower_bound(b: &BoundInput, p: &EnergyParams) -> f64 {
    b.total_bits() as f64 * landauer_per_bit(p)
}

/// `C·V²·f` with `C` the whole-wire capacitance, or `f` alone when
/// `normalized_cv` is set.
pub fn dynamic_power(p: &EnergyParams) -> f64 {
    if p.normalized_cv {
        p.frequency
    } else {
        p.total_capacitance() * p.voltage * p.voltage * p.frequency
    }
}

pub fn cpu_power(p: &EnergyParams, transistors: Transistors) -> PowerBreakdown {
    let (sc, leak) = match transistors {
        Transistors::Ideal => (0.0, 0.0),
        Transistors::Lossy {
            short_circuit,
            leakage,
        } => (short_circuit, leakage),
    };
    PowerBreakdown::new(dynamic_power(p), sc, leak)
}

/// `R = ρ·l / s`, ohms.
pub fn wire_resistance(p: &EnergyParams) -> f64 {
    p.resistivity * p.wire_length / p.wire_cross_section
}

/// `0.5·C·V²·f`, watts.
pub fn switching_power(p: &EnergyParams) -> f64 {
    0.5 * p.total_capacitance() * p.voltage * p.voltage * p.frequency
}

/// Switching current `P_switch / V`, amperes.
pub fn switching_current(p: &EnergyParams) -> f64 {
    if p.voltage == 0.0 {
        0.0
    } else {
        switching_power(p) / p.voltage
    }
}

/// `I²·R` heat over one clock period, joules.
pub fn wire_dissipation_per_cycle(p: &EnergyParams) -> Result<f64> {
    if p.frequency <= 0.0 || p.frequency.is_nan() {
        return Err(Error::ZeroFrequency);
    }
    let i = switching_current(p);
    Ok(i * i * wire_resistance(p) / p.frequency)
}

/// Clock frequency at which per-cycle wire heat equals one Landauer unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Crossover {
    /// Below this frequency Landauer cost dominates; above it, wire heat.
    At(f64),
    /// Wire heat is identically zero (no resistance, capacitance or
    /// voltage), so Landauer cost dominates at every frequency.
    Never,
}

impl Crossover {
    /// The crossover in hertz; infinite for [`Crossover::Never`].
    pub fn hz(&self) -> f64 {
        match *self {
            Crossover::At(f) => f,
            Crossover::Never => f64::INFINITY,
        }
    }
}

/// Per-cycle wire energy is `(0.5·C·V)²·R·f`, linear in `f`, so the
/// crossover is `k·T·ln 2 / ((0.5·C·V)²·R)`.
pub fn break_even_frequency(p: &EnergyParams) -> Crossover {
    let charge = 0.5 * p.total_capacitance() * p.voltage;
    let slope = charge * charge * wire_resistance(p);
    if slope == 0.0 {
        Crossover::Never
    } else {
        Crossover::At(landauer_per_bit(p) / slope)
    }
}
