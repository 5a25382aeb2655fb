//! Command-line front end for `revkit`.
//!
//! [`run`] parses an argument list, dispatches to the library and returns a
//! [`Report`]; the `revkit` binary prints it and exits with its code.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use revkit::classify::{format_joules, quantum_ledger, DissipationLedger};
use revkit::quantum::{Execution, Program, NEGLIGIBLE_PROBABILITY};
use revkit::{
    classify, dual_rail_embed, run_ledger, BitWord, Circuit, ControlStyle, EnergyParams,
    Environment, Error, LedgerReport, StateVector, SystemProfile, TruthTable,
};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const ABOUT: &str =
    "Reversible-logic toolkit: truth tables, circuits, quantum programs and dissipation ledgers.

Bit strings are written most-significant line first everywhere: in `10` line 0 is 1 and line 1 is 0.
Exit codes: 0 success, 1 property false or domain error, 2 usage or parse error.";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub format: Format,
    pub body: String,
    pub exit_code: i32,
    /// The body describes a failure and belongs on standard error.
    pub is_error: bool,
}

#[derive(Debug, Parser)]
#[command(name = "revkit", version, about = ABOUT)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "text")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Report whether a truth table or circuit is reversible and conservative.
    Check { path: PathBuf },
    /// Simulate a circuit on one input.
    Sim {
        path: PathBuf,
        /// Free-line input, most significant line first.
        #[arg(long, allow_hyphen_values = true)]
        input: String,
    },
    /// Print the inverse of a truth table or circuit.
    Invert { path: PathBuf },
    /// Print the dual-rail conservative embedding of a reversible table.
    Dualrail { path: PathBuf },
    /// Dissipation ledger of one circuit run.
    Energy(EnergyArgs),
    /// Run a quantum gate program.
    Quantum(QuantumArgs),
    /// Reversibility level of a system described by capability flags.
    Classify(ClassifyArgs),
}

#[derive(Debug, Args)]
struct TechArgs {
    /// Technology file of `key = value` lines.
    #[arg(long)]
    tech: Option<PathBuf>,
    /// Temperature in kelvin.
    #[arg(long)]
    temp: Option<f64>,
    /// Clock frequency in hertz.
    #[arg(long)]
    freq: Option<f64>,
}

#[derive(Debug, Args)]
struct ProfileArgs {
    /// The machine is coupled to a closed (reversible) environment.
    #[arg(long)]
    closed: bool,
    /// Interconnects transmit without loss.
    #[arg(long)]
    ideal_wires: bool,
    /// Control comes from a self-contained cyclic tag system.
    #[arg(long)]
    cyclic_tag: bool,
    /// Fraction of computation energy recovered.
    #[arg(long, default_value_t = 0.0)]
    recovered_fraction: f64,
    /// Instruction register width.
    #[arg(long, default_value_t = 1)]
    ir_bits: u64,
}

impl ProfileArgs {
    fn apply(&self, p: &mut SystemProfile) {
        p.ideal_transmission = self.ideal_wires;
        p.environment = if self.closed {
            Environment::Closed
        } else {
            Environment::Transfer
        };
        p.control_style = if self.cyclic_tag {
            ControlStyle::CyclicTagReversible
        } else {
            ControlStyle::ExternalIrreversible
        };
        p.recovered_fraction = self.recovered_fraction;
        p.instruction_bits = self.ir_bits;
    }
}

#[derive(Debug, Args)]
struct EnergyArgs {
    path: PathBuf,
    /// Free-line input; defaults to all zeros.
    #[arg(long, allow_hyphen_values = true)]
    input: Option<String>,
    #[command(flatten)]
    tech: TechArgs,
    #[command(flatten)]
    profile: ProfileArgs,
}

#[derive(Debug, Args)]
struct QuantumArgs {
    path: PathBuf,
    /// Initial basis state; defaults to all zeros.
    #[arg(long)]
    state: Option<String>,
    /// Sample one measurement history with this seed instead of
    /// reporting the full distribution.
    #[arg(long)]
    sample: Option<u64>,
    #[command(flatten)]
    tech: TechArgs,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    /// Components are logically reversible.
    #[arg(long)]
    logical_reversible: bool,
    /// Inputs are recovered only by software bookkeeping.
    #[arg(long)]
    software_tracked: bool,
    /// Components recycle their signal energy.
    #[arg(long)]
    energy_conservative: bool,
    #[command(flatten)]
    profile: ProfileArgs,
}

/// Failure carrying its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } => EXIT_USAGE,
            _ => EXIT_FALSE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn context(stage: &str) -> impl Fn(Error) -> Failure + '_ {
    move |e| {
        let mut f = Failure::from(e);
        f.message = format!("{stage}: {}", f.message);
        f
    }
}

/// Command output before formatting.
struct Output {
    text: String,
    json: Value,
    exit_code: i32,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output {
            text,
            json,
            exit_code: EXIT_OK,
        }
    }
}

/// Runs one command. `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> Report
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return Report {
                format: Format::Text,
                body: e.render().to_string(),
                exit_code: if e.use_stderr() { EXIT_USAGE } else { EXIT_OK },
                is_error: e.use_stderr(),
            }
        }
    };
    let format = cli.format;
    match dispatch(cli.command) {
        Ok(out) => Report {
            format,
            body: match format {
                Format::Text => out.text,
                Format::Json => to_json(&out.json),
            },
            exit_code: out.exit_code,
            is_error: false,
        },
        Err(f) => Report {
            format,
            body: match format {
                Format::Text => format!("error: {}\n", f.message),
                Format::Json => to_json(&json!({ "error": f.message, "exit_code": f.code })),
            },
            exit_code: f.code,
            is_error: true,
        },
    }
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn dispatch(cmd: Command) -> Result<Output, Failure> {
    match cmd {
        Command::Check { path } => check(&path),
        Command::Sim { path, input } => sim(&path, &input),
        Command::Invert { path } => invert(&path),
        Command::Dualrail { path } => dualrail(&path),
        Command::Energy(args) => energy(&args),
        Command::Quantum(args) => quantum(&args),
        Command::Classify(args) => classify_cmd(&args),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

enum Document {
    Table(TruthTable),
    Circuit(Circuit),
}

/// Tables start with a `table` header; anything else is a netlist.
fn load(path: &Path) -> Result<Document, Failure> {
    let text = read(path)?;
    let first = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .unwrap_or("");
    let head = first.split_whitespace().next().unwrap_or("");
    if head.eq_ignore_ascii_case("table") {
        Ok(Document::Table(text.parse().map_err(context("table"))?))
    } else {
        Ok(Document::Circuit(text.parse().map_err(context("circuit"))?))
    }
}

fn load_circuit(path: &Path) -> Result<Circuit, Failure> {
    match load(path)? {
        Document::Circuit(c) => Ok(c),
        Document::Table(_) => Err(usage(format!(
            "{}: expected a circuit, found a table",
            path.display()
        ))),
    }
}

fn load_table(path: &Path) -> Result<TruthTable, Failure> {
    match load(path)? {
        Document::Table(t) => Ok(t),
        Document::Circuit(_) => Err(usage(format!(
            "{}: expected a table, found a circuit",
            path.display()
        ))),
    }
}

fn parse_bits(flag: &str, s: &str) -> Result<BitWord, Failure> {
    s.parse()
        .map_err(|e: Error| usage(format!("--{flag} `{s}`: {e}")))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn check(path: &Path) -> Result<Output, Failure> {
    let (kind, table) = match load(path)? {
        Document::Table(t) => ("table", t),
        Document::Circuit(c) => (
            "circuit",
            c.to_truth_table().map_err(context("truth table"))?,
        ),
    };
    let reversible = table.is_reversible();
    let conservative = table.is_conservative();
    let mut out = Output::ok(
        format!(
            "reversible: {}, conservative: {}\n",
            yes_no(reversible),
            yes_no(conservative)
        ),
        json!({
            "kind": kind,
            "in_width": table.in_width(),
            "out_width": table.out_width(),
            "reversible": reversible,
            "conservative": conservative,
        }),
    );
    if !reversible {
        out.exit_code = EXIT_FALSE;
    }
    Ok(out)
}

fn sim(path: &Path, input: &str) -> Result<Output, Failure> {
    let c = load_circuit(path)?;
    let x = parse_bits("input", input)?;
    let y = c.simulate(x).map_err(context("simulate"))?;
    Ok(Output::ok(
        format!("{y}\n"),
        json!({ "input": x.to_string(), "output": y.to_string() }),
    ))
}

fn invert(path: &Path) -> Result<Output, Failure> {
    let (kind, text) = match load(path)? {
        Document::Table(t) => ("table", t.invert().map_err(context("invert"))?.to_string()),
        Document::Circuit(c) => ("circuit", c.invert().to_string()),
    };
    Ok(Output::ok(
        text.clone(),
        json!({ "kind": kind, "text": text }),
    ))
}

fn dualrail(path: &Path) -> Result<Output, Failure> {
    let t = load_table(path)?;
    let d = dual_rail_embed(&t).map_err(context("dual-rail"))?;
    let table = d.embedded().to_string();
    let conserves = d.conserves_codewords();
    Ok(Output::ok(
        format!(
            "{table}# rail width {}, conserves codewords: {}\n",
            d.rail_width(),
            yes_no(conserves)
        ),
        json!({
            "rail_width": d.rail_width(),
            "conserves_codewords": conserves,
            "reversible": d.embedded().is_reversible(),
            "table": table,
        }),
    ))
}

fn energy_params(args: &TechArgs) -> Result<EnergyParams, Failure> {
    let mut p = match &args.tech {
        Some(path) => read(path)?.parse().map_err(context("technology file"))?,
        None => EnergyParams::default(),
    };
    if let Some(t) = args.temp {
        p.temperature = t;
    }
    if let Some(f) = args.freq {
        p.frequency = f;
    }
    p.validate().map_err(context("parameters"))?;
    Ok(p)
}

fn energy(args: &EnergyArgs) -> Result<Output, Failure> {
    let c = load_circuit(&args.path)?;
    let params = energy_params(&args.tech)?;
    let free = c.free_lines().len();
    let input = match &args.input {
        Some(s) => parse_bits("input", s)?,
        None => BitWord::zero(free).map_err(context("input"))?,
    };
    let mut profile = SystemProfile {
        energy_conservative_components: c
            .permutation_table()
            .map_err(context("truth table"))?
            .is_conservative(),
        ..Default::default()
    };
    args.profile.apply(&mut profile);
    let class = classify(&profile).map_err(context("profile"))?;
    let ledger = run_ledger(&c, input, &profile, &params).map_err(context("ledger"))?;
    let bound = ledger
        .dimensions()
        .expect("run ledgers record their dimensions");
    let report = LedgerReport::new(ledger, bound, &params).map_err(context("bound"))?;

    let text = format!("parameters:\n{params}class: {class}\n{report}");
    Ok(Output::ok(
        text,
        json!({
            "parameters": params,
            "profile": profile,
            "class": class,
            "report": report,
        }),
    ))
}

fn quantum(args: &QuantumArgs) -> Result<Output, Failure> {
    let program: Program = read(&args.path)?.parse().map_err(context("program"))?;
    let params = energy_params(&args.tech)?;
    let nq = program.num_qubits();
    let initial = match &args.state {
        Some(s) => {
            let w = parse_bits("state", s)?;
            if w.width() != nq {
                return Err(Failure::from(Error::WidthMismatch {
                    expected: nq,
                    actual: w.width(),
                }));
            }
            w
        }
        None => BitWord::zero(nq).map_err(context("state"))?,
    };
    let state = StateVector::basis(nq, initial.value() as usize).map_err(context("state"))?;
    let exec = match args.sample {
        Some(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            program.run_sampled(&state, || rng.gen::<f64>())
        }
        None => program.run(&state),
    }
    .map_err(context("quantum"))?;
    let ledger = quantum_ledger(nq as u64, exec.measured_bits, &params);
    Ok(Output::ok(
        quantum_text(&exec, nq, &params, &ledger),
        json!({
            "qubits": nq,
            "initial": initial.to_string(),
            "sampled": args.sample.is_some(),
            "parameters": params,
            "branches": exec.branches.iter().map(|b| json!({
                "probability": b.probability,
                "outcomes": b.outcomes.iter().map(|&(q, bit)| json!({ "qubit": q, "bit": bit })).collect::<Vec<_>>(),
                "state": amplitudes(&b.state, nq).into_iter().map(|(idx, re, im, p)| json!({
                    "index": idx, "re": re, "im": im, "probability": p,
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "ledger": ledger,
        }),
    ))
}

/// Basis states with non-negligible probability, labelled MSB first.
fn amplitudes(s: &StateVector, nq: usize) -> Vec<(String, f64, f64, f64)> {
    s.amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm_sqr() > NEGLIGIBLE_PROBABILITY)
        .map(|(i, a)| (format!("{i:0nq$b}"), a.re, a.im, a.norm_sqr()))
        .collect()
}

/// Drops values that print as zero so no `-0.000000` appears.
fn printed(x: f64) -> f64 {
    if x.abs() < 5e-7 {
        0.0
    } else {
        x
    }
}

fn quantum_text(
    exec: &Execution,
    nq: usize,
    params: &EnergyParams,
    ledger: &DissipationLedger,
) -> String {
    let mut t = format!("parameters:\n{params}");
    for (n, b) in exec.branches.iter().enumerate() {
        let outcomes: Vec<String> = b
            .outcomes
            .iter()
            .map(|(q, bit)| format!("q{q}={bit}"))
            .collect();
        let _ = writeln!(
            t,
            "branch {n}: probability {:.6}{}{}",
            b.probability,
            if outcomes.is_empty() {
                ""
            } else {
                ", outcomes "
            },
            outcomes.join(" ")
        );
        for (idx, re, im, p) in amplitudes(&b.state, nq) {
            let (re, im) = (printed(re), printed(im));
            let sign = if im < 0.0 { '-' } else { '+' };
            let _ = writeln!(t, "  {idx}: {re:.6}{sign}{:.6}i  p={p:.6}", im.abs());
        }
    }
    for e in ledger.entries() {
        let _ = writeln!(
            t,
            "{:<12} {:>6} bits  {} J  {}",
            e.stage.as_str(),
            e.bits,
            format_joules(e.joules),
            e.note
        );
    }
    let _ = writeln!(t, "total {} J", format_joules(ledger.total()));
    t
}

fn classify_cmd(args: &ClassifyArgs) -> Result<Output, Failure> {
    let mut profile = SystemProfile {
        logical_reversible_components: args.logical_reversible,
        software_tracked_only: args.software_tracked,
        energy_conservative_components: args.energy_conservative,
        ..Default::default()
    };
    args.profile.apply(&mut profile);
    let class = classify(&profile).map_err(context("profile"))?;
    Ok(Output::ok(
        format!("class: {class}\n"),
        json!({ "class": class, "profile": profile }),
    ))
}
