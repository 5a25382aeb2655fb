//! Reversibility levels and per-run dissipation ledgers.
//!
//! A run of a circuit is charged at Landauer cost for every bit that
//! crosses between the irreversible outside world and the reversible
//! machine: input transcription, output read-out, and control. Internal
//! computation is charged only when the circuit is not conservative and the
//! machine is open to its environment. Wire heating is added unless
//! transmission is ideal.

use std::fmt;

use serde::Serialize;

use crate::circuit::Circuit;
use crate::energy::{
    landauer_per_bit, lower_bound, wire_dissipation_per_cycle, BoundInput, EnergyParams,
};
use crate::error::{Error, Result};
use crate::logic::BitWord;

/// Absolute slack, in joules, allowed by [`check_bound`].
pub const BOUND_SLACK: f64 = 1e-30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ReversibilityClass {
    /// Inputs recoverable only through software bookkeeping.
    #[serde(rename = "NSLR")]
    NotSustainedLogical,
    /// Built from logically reversible hardware components.
    #[serde(rename = "SLR")]
    SustainedLogical,
    /// Built from energy-conservative (energy-recycling) components.
    #[serde(rename = "ESR")]
    EnergySustained,
    /// Energy-conservative components joined by ideal transmission.
    #[serde(rename = "FSR")]
    FullySustained,
}

impl ReversibilityClass {
    pub fn abbreviation(self) -> &'static str {
        match self {
            ReversibilityClass::NotSustainedLogical => "NSLR",
            ReversibilityClass::SustainedLogical => "SLR",
            ReversibilityClass::EnergySustained => "ESR",
            ReversibilityClass::FullySustained => "FSR",
        }
    }
}

impl fmt::Display for ReversibilityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.abbreviation())
    }
}

/// Whether the machine sits in a reversible (closed) or an irreversible
/// (transfer) environment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Environment {
    /// Closed reversible computation: nothing crosses the boundary.
    Closed,
    /// Reversible transfer computation: driven and observed from outside.
    Transfer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ControlStyle {
    /// An irreversible controller drives the instruction register at every
    /// gate step.
    ExternalIrreversible,
    /// A reversible cyclic tag controller, initialized once from outside.
    CyclicTagReversible,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystemProfile {
    pub logical_reversible_components: bool,
    pub software_tracked_only: bool,
    pub energy_conservative_components: bool,
    pub ideal_transmission: bool,
    pub environment: Environment,
    pub control_style: ControlStyle,
    /// Fraction in `[0, 1]` of computation energy recovered (by running the
    /// inverse, adiabatically, or back into the supply).
    pub recovered_fraction: f64,
    /// Width of the instruction register.
    pub instruction_bits: u64,
    /// Landauer units charged per changed control bit on reconfiguration.
    pub reconfiguration_units_per_bit: f64,
}

impl Default for SystemProfile {
    /// Logically reversible hardware in an open environment with an
    /// external controller and a one-bit instruction register.
    fn default() -> Self {
        SystemProfile {
            logical_reversible_components: true,
            software_tracked_only: false,
            energy_conservative_components: false,
            ideal_transmission: false,
            environment: Environment::Transfer,
            control_style: ControlStyle::ExternalIrreversible,
            recovered_fraction: 0.0,
            instruction_bits: 1,
            reconfiguration_units_per_bit: 1.0,
        }
    }
}

impl SystemProfile {
    fn check(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.recovered_fraction) {
            return Err(Error::InconsistentProfile(format!(
                "recovered fraction {} outside [0, 1]",
                self.recovered_fraction
            )));
        }
        if !(self.reconfiguration_units_per_bit >= 0.0
            && self.reconfiguration_units_per_bit.is_finite())
        {
            return Err(Error::InconsistentProfile(format!(
                "reconfiguration cost {} must be a non-negative number",
                self.reconfiguration_units_per_bit
            )));
        }
        Ok(())
    }
}

/// Highest reversibility level the profile satisfies.
pub fn classify(p: &SystemProfile) -> Result<ReversibilityClass> {
    p.check()?;
    use ReversibilityClass::*;
    let level = if p.energy_conservative_components && p.ideal_transmission {
        FullySustained
    } else if p.energy_conservative_components {
        EnergySustained
    } else if p.logical_reversible_components {
        SustainedLogical
    } else if p.software_tracked_only {
        NotSustainedLogical
    } else {
        return Err(Error::InconsistentProfile(
            "no reversibility mechanism: neither software tracking nor reversible components"
                .into(),
        ));
    };
    Ok(level)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Stage {
    InputSet,
    OutputRead,
    Control,
    Compute,
    Interconnect,
    Measurement,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::InputSet => "INPUT_SET",
            Stage::OutputRead => "OUTPUT_READ",
            Stage::Control => "CONTROL",
            Stage::Compute => "COMPUTE",
            Stage::Interconnect => "INTERCONNECT",
            Stage::Measurement => "MEASUREMENT",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LedgerEntry {
    pub stage: Stage,
    pub bits: u64,
    pub joules: f64,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DissipationLedger {
    entries: Vec<LedgerEntry>,
    total: f64,
    /// False for closed runs: their results never leave the machine.
    observable: bool,
    /// Bit counts of the run that produced the ledger, if any.
    dimensions: Option<BoundInput>,
    recovered_fraction: f64,
}

impl Default for DissipationLedger {
    fn default() -> Self {
        DissipationLedger {
            entries: Vec::new(),
            total: 0.0,
            observable: true,
            dimensions: None,
            recovered_fraction: 0.0,
        }
    }
}

impl DissipationLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends an entry. Negative or non-finite energies are rejected.
    pub fn push(
        &mut self,
        stage: Stage,
        bits: u64,
        joules: f64,
        note: impl Into<String>,
    ) -> Result<()> {
        if !(joules >= 0.0 && joules.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "joules",
                value: joules,
            });
        }
        self.total += joules;
        self.entries.push(LedgerEntry {
            stage,
            bits,
            joules,
            note: note.into(),
        });
        Ok(())
    }

    /// Concatenates another run onto this one.
    pub fn append(&mut self, other: &DissipationLedger) {
        for e in &other.entries {
            self.total += e.joules;
            self.entries.push(e.clone());
        }
        self.observable &= other.observable;
        self.dimensions = match (self.dimensions, other.dimensions) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        self.recovered_fraction = self.recovered_fraction.max(other.recovered_fraction);
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn is_observable(&self) -> bool {
        self.observable
    }

    pub fn dimensions(&self) -> Option<BoundInput> {
        self.dimensions
    }

    pub fn stage_total(&self, stage: Stage) -> f64 {
        self.entries
            .iter()
            .filter(|e| e.stage == stage)
            .map(|e| e.joules)
            .sum()
    }

    pub fn stage_bits(&self, stage: Stage) -> u64 {
        self.entries
            .iter()
            .filter(|e| e.stage == stage)
            .map(|e| e.bits)
            .sum()
    }

    /// True when input, output, control and computation all dissipated and
    /// no computation energy was recovered.
    pub fn all_stages_active(&self) -> bool {
        self.recovered_fraction == 0.0
            && [
                Stage::InputSet,
                Stage::OutputRead,
                Stage::Control,
                Stage::Compute,
            ]
            .iter()
            .all(|&s| self.stage_bits(s) > 0)
    }
}

/// Builds the dissipation ledger of one run of `c` on `input`.
///
/// The recorded dimensions are `k` = all circuit lines (free inputs and
/// ancilla constants), `l` = non-garbage outputs, `i_r` from the profile,
/// and `n_pr` = lines whose value changes during the run.
pub fn run_ledger(
    c: &Circuit,
    input: BitWord,
    p: &SystemProfile,
    e: &EnergyParams,
) -> Result<DissipationLedger> {
    p.check()?;
    let unit = landauer_per_bit(e);
    let states = c.trace(input)?;
    let gates = c.gates().len() as u64;

    let mut ledger = DissipationLedger {
        recovered_fraction: p.recovered_fraction,
        ..Default::default()
    };
    let mut add = |stage, bits: u64, joules: f64, note: &str| -> Result<()> {
        if bits == 0 {
            return Ok(());
        }
        ledger.push(stage, bits, joules, note)
    };

    let input_bits = c.width() as u64;
    add(
        Stage::InputSet,
        input_bits,
        input_bits as f64 * unit,
        "free inputs and ancilla constants",
    )?;

    let i_r = p.instruction_bits;
    match p.control_style {
        ControlStyle::ExternalIrreversible => {
            for step in 0..gates {
                add(
                    Stage::Control,
                    i_r,
                    i_r as f64 * unit,
                    &format!("instruction for gate {step}"),
                )?;
            }
        }
        ControlStyle::CyclicTagReversible => {
            add(
                Stage::Control,
                i_r,
                i_r as f64 * unit,
                "cyclic tag initialization",
            )?;
        }
    }

    let conservative = c.permutation_table()?.is_conservative();
    let mut changed_lines = 0u32;
    for (step, pair) in states.windows(2).enumerate() {
        let diff = pair[0].value() ^ pair[1].value();
        changed_lines |= diff;
        if conservative || p.environment == Environment::Closed {
            continue;
        }
        let flips = diff.count_ones() as u64;
        add(
            Stage::Compute,
            flips,
            flips as f64 * unit * (1.0 - p.recovered_fraction),
            &format!("state change at gate {step}"),
        )?;
    }

    if !p.ideal_transmission && gates > 0 {
        add(
            Stage::Interconnect,
            gates,
            gates as f64 * wire_dissipation_per_cycle(e)?,
            "I²R wire heat, one clock period per gate",
        )?;
    }

    let output_bits = c.functional_lines().len() as u64;
    match p.environment {
        Environment::Transfer => add(
            Stage::OutputRead,
            output_bits,
            output_bits as f64 * unit,
            "functional outputs",
        )?,
        Environment::Closed => ledger.observable = false,
    }

    ledger.dimensions = Some(BoundInput::new(
        input_bits,
        output_bits,
        i_r,
        changed_lines.count_ones() as u64,
    ));
    Ok(ledger)
}

/// Ledger of a quantum program run: one Landauer unit per prepared qubit
/// and one per measured bit.
pub fn quantum_ledger(
    prepared_qubits: u64,
    measured_bits: u64,
    e: &EnergyParams,
) -> DissipationLedger {
    let unit = landauer_per_bit(e);
    let mut ledger = DissipationLedger::new();
    if prepared_qubits > 0 {
        ledger
            .push(
                Stage::InputSet,
                prepared_qubits,
                prepared_qubits as f64 * unit,
                "classical to quantum transcription",
            )
            .expect("finite non-negative energy");
    }
    if measured_bits > 0 {
        ledger
            .push(
                Stage::Measurement,
                measured_bits,
                measured_bits as f64 * unit,
                "non-unitary measurement",
            )
            .expect("finite non-negative energy");
    }
    ledger
}

/// Control energy of switching a closed machine from one gate list to
/// another. Each gate position that differs counts as one changed control
/// bit.
pub fn reconfiguration_cost(
    from: &Circuit,
    to: &Circuit,
    p: &SystemProfile,
    e: &EnergyParams,
) -> Result<LedgerEntry> {
    p.check()?;
    let (a, b) = (from.gates(), to.gates());
    let changed = (0..a.len().max(b.len()))
        .filter(|&i| a.get(i) != b.get(i))
        .count() as u64;
    Ok(LedgerEntry {
        stage: Stage::Control,
        bits: changed,
        joules: changed as f64 * p.reconfiguration_units_per_bit * landauer_per_bit(e),
        note: "reconfiguration".into(),
    })
}

/// True iff the ledger total reaches the `2n·kT·ln 2` bound for `b`.
///
/// Ledgers produced by [`run_ledger`] carry their own dimensions; passing a
/// different `b` is an error.
pub fn check_bound(ledger: &DissipationLedger, b: &BoundInput, e: &EnergyParams) -> Result<bool> {
    if let Some(d) = ledger.dimensions {
        if d != *b {
            return Err(Error::DimensionMismatch(format!(
                "ledger dimensions {d:?} do not match bound input {b:?}"
            )));
        }
    }
    Ok(ledger.total >= lower_bound(b, e) - BOUND_SLACK)
}

/// Ledger plus bound verdict, as printed by the command-line tool.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LedgerReport {
    pub ledger: DissipationLedger,
    pub bound: BoundInput,
    pub lower_bound: f64,
    pub bound_satisfied: bool,
}

impl LedgerReport {
    pub fn new(ledger: DissipationLedger, bound: BoundInput, e: &EnergyParams) -> Result<Self> {
        let bound_satisfied = check_bound(&ledger, &bound, e)?;
        Ok(LedgerReport {
            lower_bound: lower_bound(&bound, e),
            ledger,
            bound,
            bound_satisfied,
        })
    }
}

/// Energies are printed in scientific notation with six decimals.
pub fn format_joules(j: f64) -> String {
    format!("{j:.6e}")
}

impl fmt::Display for LedgerReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in self.ledger.entries() {
            writeln!(
                f,
                "{:<12} {:>6} bits  {} J  {}",
                e.stage.as_str(),
                e.bits,
                format_joules(e.joules),
                e.note
            )?;
        }
        writeln!(f, "total {} J", format_joules(self.ledger.total()))?;
        writeln!(
            f,
            "observable: {}",
            if self.ledger.is_observable() {
                "yes"
            } else {
                "no"
            }
        )?;
        writeln!(
            f,
            "all stages active: {}",
            if self.ledger.all_stages_active() {
                "yes"
            } else {
                "no"
            }
        )?;
        writeln!(
            f,
            "bound: 2n = {} ({} + {} + {} + {}), {} J, satisfied: {}",
            self.bound.total_bits(),
            self.bound.input_bits,
            self.bound.output_bits,
            self.bound.instruction_bits,
            self.bound.circuit_bits,
            format_joules(self.lower_bound),
            if self.bound_satisfied { "yes" } else { "no" }
        )
    }
}
