//! Reversible-logic toolkit.
//!
//! - [`logic`]: bit words, truth tables, reversibility and conservativity.
//! - [`circuit`]: NOT/CNOT/Toffoli/Fredkin circuits, simulation, inversion
//!   and the dual-rail conservative embedding.
//! - [`quantum`]: small dense operators, unitarity and measurement.
//! - [`energy`]: Landauer cost, power decomposition and wire heating.
//! - [`classify`]: reversibility levels and per-run dissipation ledgers.

pub mod circuit;
pub mod classify;
pub mod energy;
pub mod error;
pub mod logic;
pub mod quantum;

pub use circuit::{apply_gate, dual_rail_embed, Circuit, DualRailFunction, Gate, GateKind};
pub use classify::{
    check_bound, classify, run_ledger, ControlStyle, DissipationLedger, Environment, LedgerReport,
    ReversibilityClass, Stage, SystemProfile,
};
pub use energy::{BoundInput, EnergyParams, PowerBreakdown};
pub use error::{Error, Result};
pub use logic::{BitWord, TruthTable};
pub use quantum::{ComplexMatrix, MeasurementOutcome, StateVector};
