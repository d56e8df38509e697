//! Command-line front end. Exit codes: 0 valid or ok, 1 falsifiable or
//! violation, 2 usage or input error.

use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::birel::BiRelModel;
use crate::calculus::{check_proof, Proof};
use crate::charform::{char_laws, chi, successor_laws, worlds};
use crate::decide::{decide_with, Options, Status, DEFAULT_BUDGET};
use crate::error::Error;
use crate::formula::{parse, ClosureSet, Formula};
use crate::labelled::LabelledSystem;
use crate::real::RealModel;

#[derive(Parser, Debug)]
#[command(name = "gtl", version, about = "Goedel temporal logic toolkit")]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// A formula given inline or in a file; inline wins.
#[derive(Args, Debug)]
pub struct FormulaInput {
    /// Formula text.
    pub formula: Option<String>,
    /// File holding the formula text.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a formula and print its canonical form.
    Parse(FormulaInput),
    /// Evaluate a formula in a real-valued model.
    EvalReal {
        #[arg(long)]
        model: PathBuf,
        /// Only report the value at this moment.
        #[arg(long)]
        moment: Option<String>,
        #[command(flatten)]
        input: FormulaInput,
    },
    /// Validate a bi-relational model; with a formula, check global truth.
    CheckBirel {
        #[arg(long)]
        model: PathBuf,
        /// Write the induced labelled system over the formula's closure.
        #[arg(long)]
        quasimodel: Option<PathBuf>,
        #[command(flatten)]
        input: FormulaInput,
    },
    /// Decide validity by searching for a falsifying quasimodel.
    Decide {
        #[command(flatten)]
        input: FormulaInput,
        /// Write the falsifying quasimodel here.
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Largest closure set to accept.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Check a proof file.
    CheckProof { proof: PathBuf },
    /// Quotient a labelled system whose relation is a total function.
    Quotient {
        system: PathBuf,
        /// Write the quotient here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate a quasimodel file.
    ValidateQm { system: PathBuf },
    /// Characteristic formulas over the closure of a formula.
    Charform {
        #[command(flatten)]
        input: FormulaInput,
        /// Emit the single-world laws instead of the formulas.
        #[arg(long)]
        laws: bool,
        /// Emit the successor laws instead of the formulas.
        #[arg(long, conflicts_with = "laws")]
        successor: bool,
    },
}

enum Failure {
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(i32, Report), Failure>;

/// Lines for text output, an object for JSON output.
struct Report {
    lines: Vec<String>,
    json: Value,
}

impl FormulaInput {
    fn get(&self) -> Result<Formula, Failure> {
        let text = match (&self.formula, &self.file) {
            (Some(t), _) => t.clone(),
            (None, Some(path)) => read(path)?,
            (None, None) => return Err(Failure::Usage("no formula given (inline or --file)".into())),
        };
        parse(text.trim()).map_err(|e| Failure::Usage(format!("parse error at {e}")))
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &PathBuf, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Runs the command line `args` (including the program name), writing the
/// report to `out` and diagnostics to `err`; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match dispatch(&cli.command) {
        Ok((code, report)) => {
            let _ = match cli.format {
                Format::Text => report.lines.iter().try_for_each(|l| writeln!(out, "{l}")),
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report.json).expect("json values serialize")),
            };
            code
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn dispatch(cmd: &Command) -> Outcome {
    match cmd {
        Command::Parse(input) => {
            let f = input.get()?;
            Ok((
                0,
                Report {
                    lines: vec![f.to_string(), format!("size={} depth={}", f.size(), f.depth())],
                    json: json!({"formula": f.to_string(), "size": f.size(), "depth": f.depth()}),
                },
            ))
        }
        Command::EvalReal { model, moment, input } => {
            let f = input.get()?;
            let m = RealModel::from_json(&read(model)?)?;
            let flow = m.flow();
            let values = m.eval_all(&f);
            let selected: Vec<usize> = match moment {
                Some(t) => vec![flow.index_of(t)?],
                None => (0..flow.len()).collect(),
            };
            let mut lines: Vec<String> =
                selected.iter().map(|&t| format!("{} {}", flow.name(t), values[t])).collect();
            let mut obj = json!({
                "values": selected.iter().map(|&t| (flow.name(t).to_string(), json!(values[t].to_string())))
                    .collect::<serde_json::Map<_, _>>(),
            });
            if moment.is_some() {
                return Ok((0, Report { lines, json: obj }));
            }
            let global = m.globally_true(&f);
            lines.push(format!("globally-true={global}"));
            obj["globally_true"] = json!(global);
            Ok((if global { 0 } else { 1 }, Report { lines, json: obj }))
        }
        Command::CheckBirel { model, quasimodel, input } => {
            let m = BiRelModel::from_json(&read(model)?)?;
            let f = match (&input.formula, &input.file) {
                (None, None) => None,
                _ => Some(input.get()?),
            };
            let Some(f) = f else {
                if quasimodel.is_some() {
                    return Err(Failure::Usage("--quasimodel needs a formula".into()));
                }
                return Ok((0, Report { lines: vec!["ok".into()], json: json!({"model": "ok"}) }));
            };
            if let Some(path) = quasimodel {
                let sigma = Arc::new(ClosureSet::of(&f));
                write(path, &m.to_quasimodel(&sigma)?.to_json())?;
            }
            let ext = m.extension(&f);
            let global = m.globally_true(&f);
            let mut lines = vec![format!("globally-true={global}")];
            let failing: Vec<String> = (0..m.flow().len())
                .flat_map(|t| (0..m.worlds().len()).map(move |w| (w, t)))
                .filter(|p| !ext.contains(p))
                .map(|(w, t)| format!("{}@{}", m.worlds()[w], m.flow().name(t)))
                .collect();
            lines.extend(failing.iter().map(|p| format!("fails {p}")));
            Ok((
                if global { 0 } else { 1 },
                Report { lines, json: json!({"model": "ok", "globally_true": global, "fails": failing}) },
            ))
        }
        Command::Decide { input, witness, budget } => {
            let f = input.get()?;
            let v = decide_with(&f, Options { budget: *budget })?;
            if let (Some(path), Some(w)) = (witness, &v.witness) {
                write(path, &w.to_json())?;
            }
            let s = &v.stats;
            let time_ms = s.elapsed.as_secs_f64() * 1000.0;
            let lines = vec![
                v.status.to_string(),
                format!(
                    "sigma={} types={} moments={} worlds={} surviving={} rounds={} time_ms={time_ms:.3}",
                    s.sigma_size, s.types, s.moments, s.worlds_explored, s.surviving_moments, s.rounds
                ),
            ];
            let json = json!({
                "status": v.status.to_string(),
                "sigma": s.sigma_size,
                "types": s.types,
                "moments": s.moments,
                "worlds": s.worlds_explored,
                "surviving": s.surviving_moments,
                "rounds": s.rounds,
                "time_ms": time_ms,
                "witness_worlds": v.witness.as_ref().map(|w| w.len()),
            });
            Ok((if v.status == Status::Valid { 0 } else { 1 }, Report { lines, json }))
        }
        Command::CheckProof { proof } => {
            let pr = Proof::from_json(&read(proof)?)?;
            let conclusion = pr.conclusion().map(|f| f.to_string()).unwrap_or_default();
            match check_proof(&pr) {
                Ok(()) => Ok((
                    0,
                    Report {
                        lines: vec!["ok".into(), format!("proves {conclusion}")],
                        json: json!({"status": "ok", "conclusion": conclusion}),
                    },
                )),
                Err(e) => Ok((
                    1,
                    Report {
                        lines: vec![format!("error {e}")],
                        json: json!({"status": "error", "line": e.line, "expected": e.expected, "found": e.found}),
                    },
                )),
            }
        }
        Command::Quotient { system, out } => {
            let s = LabelledSystem::from_json(&read(system)?)?;
            let q = s.quotient()?;
            let text = q.to_json();
            let lines = match out {
                Some(path) => {
                    write(path, &text)?;
                    vec![format!("worlds={} height={}", q.len(), q.height())]
                }
                None => vec![text.clone()],
            };
            let json: Value = serde_json::from_str(&text).expect("quotient json reparses");
            Ok((0, Report { lines, json }))
        }
        Command::ValidateQm { system } => {
            let s = LabelledSystem::from_json(&read(system)?)?;
            match s.validate_quasimodel() {
                Ok(()) => Ok((0, Report { lines: vec!["ok".into()], json: json!({"status": "ok"}) })),
                Err(v) => Ok((
                    1,
                    Report {
                        lines: vec![format!("violation {v}")],
                        json: json!({
                            "status": "violation",
                            "condition": v.condition.to_string(),
                            "worlds": v.worlds,
                            "formula": v.formula.map(|f| f.to_string()),
                        }),
                    },
                )),
            }
        }
        Command::Charform { input, laws, successor } => {
            let f = input.get()?;
            let sigma = Arc::new(ClosureSet::of(&f));
            if *laws || *successor {
                let list = if *laws { char_laws(&sigma)? } else { successor_laws(&sigma)? };
                let lines: Vec<String> = list.iter().map(|l| l.to_string()).collect();
                return Ok((0, Report { json: json!(lines), lines }));
            }
            let mut lines = Vec::new();
            let mut items = Vec::new();
            for w in worlds(&sigma)? {
                let c = chi(&w)?;
                lines.push(format!("world {}", w.label()));
                lines.push(format!("chi+ {}", c.plus));
                lines.push(format!("chi- {}", c.minus));
                items.push(json!({"label": w.label().to_string(), "chi_plus": c.plus.to_string(), "chi_minus": c.minus.to_string()}));
            }
            Ok((0, Report { lines, json: json!(items) }))
        }
    }
}
