//! `stabrec`: enumerate, classify and recover two-qubit postselected
//! stabilizer circuits, and estimate recovery-protocol costs.
//!
//! Exit codes: 0 success, 1 failed verification or I/O error, 2 bad
//! arguments, 3 domain error.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use stabrec::applications::{ladder_trajectory, par_recover, par_rotate};
use stabrec::circuits::PostselectedCircuit;
use stabrec::classify::{canonicalize, census};
use stabrec::clifford::{enumerate, parse_word, Arity, CliffordElement, Gate};
use stabrec::pauli::{bloch_of, density_of, BlochVector};
use stabrec::protocol::{analytic_cost, probability_sequence, simulate, ProtocolConfig, SimulationRow};
use stabrec::recovery::{distinctness_table, probe_inputs, reference_psi, round_trip, synthesize_recovery};
use stabrec::verify;

#[derive(Parser)]
#[command(name = "stabrec", version, about = "Two-qubit postselected stabilizer circuits and their recovery circuits")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,

    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Size of the one- or two-qubit Clifford group, optionally with every element.
    Enumerate {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        arity: u8,
        /// List every element as `ordinal,word,tableau`.
        #[arg(long)]
        table: bool,
    },
    /// Counts of projector classes and strict interacting classes.
    Census,
    /// Canonical form of a postselected circuit.
    Classify(CircuitArgs),
    /// Recovery circuit of an interacting postselected circuit, with a round-trip check.
    Recover(CircuitArgs),
    /// Success probabilities Q_1..Q_count of successive recoveries.
    Probe {
        #[arg(long, default_value_t = 0.5)]
        q1: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        z: f64,
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
    /// Monte Carlo and exact cost of the depth-k recovery protocol.
    Simulate {
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 1000.0)]
        d: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        z: f64,
        #[arg(long, default_value_t = 0.5)]
        q1: f64,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run every self-check suite; exits 1 if any fails.
    Verify,
    /// The distinguishing values v for all 18 interacting projectors.
    Table,
    /// Climb the magic-state ladder from rung 0.
    Ladder {
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..=64))]
        steps: u32,
    },
    /// Programmable Z-rotation by gamma on a fixed set of inputs.
    Par {
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
    },
}

#[derive(Args)]
struct CircuitArgs {
    /// Gate word applied left to right, e.g. "H1 CNOT P2".
    #[arg(long, value_parser = parse_circuit)]
    circuit: Word,
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
    bit: u8,
}

#[derive(Clone)]
struct Word(Vec<Gate>);

fn parse_circuit(text: &str) -> Result<Word, stabrec::Error> {
    parse_word(text).map(Word)
}

impl CircuitArgs {
    fn circuit(&self) -> stabrec::Result<PostselectedCircuit> {
        PostselectedCircuit::new(CliffordElement::from_word_arity2(&self.circuit.0)?, self.bit)
    }
}

/// Rows to print; JSON prints a single row as an object.
struct Report {
    csv: Vec<u8>,
    json: serde_json::Value,
}

impl Report {
    fn rows<T: Serialize>(rows: &[T]) -> anyhow::Result<Report> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in rows {
            w.serialize(row)?;
        }
        Ok(Report { csv: w.into_inner()?, json: serde_json::to_value(rows)? })
    }

    fn single<T: Serialize>(row: &T) -> anyhow::Result<Report> {
        let mut report = Report::rows(std::slice::from_ref(row))?;
        report.json = serde_json::to_value(row)?;
        Ok(report)
    }

    fn with_json(mut self, json: serde_json::Value) -> Report {
        self.json = json;
        self
    }
}

#[derive(Serialize)]
struct SizeRow {
    arity: u8,
    size: usize,
}

#[derive(Serialize)]
struct ElementRow {
    ordinal: usize,
    word: String,
    tableau: String,
}

#[derive(Serialize)]
struct CountRow {
    class_kind: &'static str,
    count: usize,
}

#[derive(Serialize)]
struct ClassifyRow {
    circuit: String,
    bit: u8,
    kind: String,
    lambda03: String,
    g1: String,
    g2: String,
    g3: String,
    outcome: u8,
}

#[derive(Serialize)]
struct RecoverRow {
    circuit: String,
    bit: u8,
    recovery: String,
    recovery_bit: u8,
    g1: String,
    g2: String,
    g: String,
    probes: usize,
    max_round_trip_error: f64,
    round_trip_ok: bool,
}

#[derive(Serialize)]
struct ProbeRow {
    i: usize,
    q: f64,
}

#[derive(Serialize)]
struct VerifyRow {
    suite: &'static str,
    passed: bool,
    detail: String,
}

#[derive(Serialize)]
struct TableRow {
    lambda: String,
    sign: char,
    a03: f64,
    a30: f64,
    a33: f64,
    v: f64,
}

#[derive(Serialize)]
struct ParRow {
    q_x: f64,
    q_y: f64,
    q_z: f64,
    gamma: f64,
    success_prob: f64,
    success_x: f64,
    success_y: f64,
    success_z: f64,
    failure_x: f64,
    failure_y: f64,
    failure_z: f64,
    recovered_x: f64,
    recovered_y: f64,
    recovered_z: f64,
}

fn execute(command: &Command) -> anyhow::Result<(Report, bool)> {
    let report = match command {
        Command::Enumerate { arity, table } => {
            let arity = Arity::from_qubits(*arity).expect("range-checked by clap");
            let group = enumerate(arity);
            let size = SizeRow { arity: arity.qubits(), size: group.len() };
            if *table {
                let rows: Vec<ElementRow> = group
                    .iter()
                    .enumerate()
                    .map(|(ordinal, c)| ElementRow { ordinal, word: c.word_string(), tableau: c.tableau().to_string() })
                    .collect();
                let json = serde_json::json!({ "arity": size.arity, "size": size.size, "elements": rows });
                Report::rows(&rows)?.with_json(json)
            } else {
                Report::single(&size)?
            }
        }
        Command::Census => {
            let rows: Vec<CountRow> =
                census()?.rows().into_iter().map(|(class_kind, count)| CountRow { class_kind, count }).collect();
            let json = serde_json::Value::Object(
                rows.iter().map(|r| (r.class_kind.to_string(), serde_json::Value::from(r.count))).collect(),
            );
            Report::rows(&rows)?.with_json(json)
        }
        Command::Classify(args) => {
            let pc = args.circuit()?;
            let form = canonicalize(&pc)?;
            Report::single(&ClassifyRow {
                circuit: pc.clifford().word_string(),
                bit: pc.bit(),
                kind: form.kind.to_string(),
                lambda03: form.lambda03.to_string(),
                g1: form.g1.word_string(),
                g2: form.g2.as_ref().map(CliffordElement::word_string).unwrap_or_default(),
                g3: form.g3.word_string(),
                outcome: form.outcome,
            })?
        }
        Command::Recover(args) => {
            let pc = args.circuit()?;
            let spec = synthesize_recovery(&pc)?;
            let psi = density_of(&reference_psi())?;
            let mut worst = 0.0f64;
            for v in probe_inputs() {
                let phi = density_of(&v)?;
                worst = worst.max(round_trip(&spec, &pc, &phi, &psi)?.recovered.distance(&phi));
            }
            Report::single(&RecoverRow {
                circuit: pc.clifford().word_string(),
                bit: pc.bit(),
                recovery: spec.circuit.clifford().word_string(),
                recovery_bit: spec.circuit.bit(),
                g1: spec.g1.word_string(),
                g2: spec.g2.word_string(),
                g: spec.resource_gate.word_string(),
                probes: probe_inputs().len(),
                max_round_trip_error: worst,
                round_trip_ok: worst <= stabrec::STATE_TOLERANCE,
            })?
        }
        Command::Probe { q1, z, count } => {
            let rows: Vec<ProbeRow> = probability_sequence(*q1, *z, *count)?
                .into_iter()
                .enumerate()
                .map(|(i, q)| ProbeRow { i: i + 1, q })
                .collect();
            Report::rows(&rows)?
        }
        Command::Simulate { k, d, z, q1, trials, seed } => {
            let config = ProtocolConfig { k: *k, d: *d, z: *z, q1: *q1, trials: *trials, seed: *seed };
            let result = simulate(&config)?;
            let row = SimulationRow::new(&config, &result, analytic_cost(&config)?);
            let mut json = serde_json::to_value(&row)?;
            json["prob_sequence"] = serde_json::to_value(&result.prob_sequence)?;
            Report::single(&row)?.with_json(json)
        }
        Command::Verify => {
            let outcomes = verify::run_all();
            for o in &outcomes {
                eprintln!("{} {} ({:.2}s)", if o.passed { "PASS" } else { "FAIL" }, o.name, o.seconds);
            }
            let passed = outcomes.iter().all(|o| o.passed);
            let rows: Vec<VerifyRow> =
                outcomes.into_iter().map(|o| VerifyRow { suite: o.name, passed: o.passed, detail: o.detail }).collect();
            return Ok((Report::rows(&rows)?, passed));
        }
        Command::Table => {
            let rows: Vec<TableRow> = distinctness_table()
                .into_iter()
                .map(|r| TableRow {
                    lambda: r.lambda03.label(),
                    sign: if r.lambda03.is_negative() { '-' } else { '+' },
                    a03: r.a03,
                    a30: r.a30,
                    a33: r.a33,
                    v: r.v,
                })
                .collect();
            Report::rows(&rows)?
        }
        Command::Ladder { steps } => Report::rows(&ladder_trajectory(*steps)?)?,
        Command::Par { gamma } => {
            let inputs = [
                BlochVector::new(0.0, 0.0, 1.0),
                BlochVector::new(1.0, 0.0, 0.0),
                BlochVector::new(0.0, 1.0, 0.0),
                BlochVector::new(0.6, 0.0, 0.8),
                BlochVector::new(0.3, -0.2, 0.4),
            ];
            let mut rows = Vec::new();
            for q in inputs {
                let rho = density_of(&q)?;
                let branches = par_rotate(&rho, *gamma)?;
                let s = bloch_of(&branches.success.state)?;
                let f = bloch_of(&branches.failure.state)?;
                let r = bloch_of(&par_recover(&branches.failure.state, *gamma)?.state)?;
                rows.push(ParRow {
                    q_x: q.x,
                    q_y: q.y,
                    q_z: q.z,
                    gamma: *gamma,
                    success_prob: branches.success.probability,
                    success_x: s.x,
                    success_y: s.y,
                    success_z: s.z,
                    failure_x: f.x,
                    failure_y: f.y,
                    failure_z: f.z,
                    recovered_x: r.x,
                    recovered_y: r.y,
                    recovered_z: r.z,
                });
            }
            Report::rows(&rows)?
        }
    };
    Ok((report, true))
}

fn write_report(report: &Report, format: Format, output: Option<&PathBuf>) -> anyhow::Result<()> {
    let bytes = match format {
        Format::Csv => report.csv.clone(),
        Format::Json => {
            let mut b = serde_json::to_vec_pretty(&report.json)?;
            b.push(b'\n');
            b
        }
    };
    match output {
        Some(path) => File::create(path)
            .and_then(|mut f| f.write_all(&bytes))
            .with_context(|| format!("writing {}", path.display())),
        None => io::stdout().write_all(&bytes).context("writing to standard output"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli.command) {
        Ok((report, passed)) => {
            if let Err(e) = write_report(&report, cli.format, cli.output.as_ref()) {
                eprintln!("error: {e:#}");
                return ExitCode::from(1);
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) if e.is::<stabrec::Error>() => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
