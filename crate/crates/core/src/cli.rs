//! Command-line front end. [`run`] returns the exit code and the text to
//! print so that it can be driven in-process.
//!
//! Exit codes: 0 when every answer is decisive, 1 on errors, failed
//! verification or oracle disagreement, 2 when some answer is unknown.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::classifier::{
    default_probes, expansivity_witness, sensitivity_witness, Classifier, Evidence, Outcome,
    Pattern, DEFAULT_MAX_H, DEFAULT_PROBE_RANGE, DEFAULT_WINDOW,
};
use crate::engine::{inverse_orbit, orbit, Budgets, OrbitResult};
use crate::interval::Interval;
use crate::oracle::{exhaustive_sweep, random_sweep};
use crate::presentation_file::{parse_presentation_file, parse_range, Params, PresentationFile};
use crate::report::{
    diagram, expansivity_record, from_json_line, header, orbit_record, sensitivity_record,
    to_human, to_json_line, verdict_record, NoteRecord, OrbitDirection, Record, SweepRecord,
};
use crate::verify::verify_records;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;

pub const DEFAULT_SEED: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Machine,
}

#[derive(Debug, Parser)]
#[command(
    name = "gshift",
    version,
    about = "Decide dynamical properties of generalized-shift semigroups"
)]
pub struct Cli {
    /// Points explored per orbit computation.
    #[arg(long, global = true)]
    budget_orbit: Option<usize>,
    /// Maps enumerated per closure computation.
    #[arg(long, global = true)]
    budget_closure: Option<usize>,
    /// Probe range LO..HI (breakpoints and exception keys are always added).
    #[arg(long, global = true, allow_hyphen_values = true)]
    probes: Option<String>,
    /// H is searched inside [-N, N].
    #[arg(long, global = true)]
    max_h: Option<u32>,
    /// Coverage window LO..HI.
    #[arg(long, global = true, allow_hyphen_values = true)]
    window: Option<String>,
    /// First seed of the random oracle instances.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Re-check every emitted certificate and witness.
    #[arg(long, global = true)]
    verify: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Multiplies every budget.
    #[arg(long, global = true, env = "GSHIFT_BUDGET_SCALE", hide = true)]
    budget_scale: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run all four checks on a presentation file.
    Classify { file: PathBuf },
    /// Forward orbit Tw, or inverse orbit with --inverse.
    Orbit {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: i64,
        #[arg(long)]
        inverse: bool,
    },
    /// Construct and self-check a witness.
    Witness {
        file: PathBuf,
        #[command(subcommand)]
        kind: WitnessKind,
    },
    /// Cross-check the criteria against brute force on finite instances.
    Oracle {
        #[arg(long, default_value_t = 3)]
        max_m: usize,
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, default_value_t = 2)]
        max_g: usize,
        /// Number of seeded random instances.
        #[arg(long, default_value_t = 1000)]
        random: usize,
        #[arg(long, default_value_t = 4)]
        random_m: usize,
    },
    /// Re-check a machine-format report against its presentation file.
    Check { file: PathBuf, report: PathBuf },
}

#[derive(Debug, Subcommand)]
enum WitnessKind {
    /// A flip inside the neighborhood of x separating the images at v.
    Sensitivity {
        #[arg(long, allow_hyphen_values = true)]
        v: i64,
        /// Comma-separated coordinates the neighborhood fixes.
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        protected: Vec<i64>,
        #[arg(long, default_value_t = 2)]
        k: u32,
        /// Background symbol of x.
        #[arg(long, default_value_t = 0)]
        background: u32,
        /// Extra assignments COORD=SYMBOL for x, comma-separated.
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        assign: Vec<String>,
    },
    /// The word sending a point of H to where x and y differ.
    Expansivity {
        /// x and y differ exactly here.
        #[arg(long, allow_hyphen_values = true)]
        diff: i64,
        /// Comma-separated H; computed from the expansivity check if absent.
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        h: Vec<i64>,
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, default_value_t = 0)]
        background: u32,
    },
}

struct Settings {
    budgets: Budgets,
    probes: (i64, i64),
    max_h: i64,
    window: (i64, i64),
    seed: u64,
}

impl Settings {
    fn resolve(cli: &Cli, file: &Params) -> Result<Self, String> {
        let range =
            |flag: &Option<String>, param: Option<(i64, i64)>, default| -> Result<_, String> {
                match flag {
                    Some(s) => parse_range(s),
                    None => Ok(param.unwrap_or(default)),
                }
            };
        let positive = |n: Option<usize>, name: &str| match n {
            Some(0) => Err(format!("--{name} must be positive")),
            _ => Ok(n),
        };
        let base = Budgets::default();
        let mut budgets = Budgets {
            orbit: positive(cli.budget_orbit, "budget-orbit")?
                .or(file.budget_orbit)
                .unwrap_or(base.orbit),
            closure: positive(cli.budget_closure, "budget-closure")?
                .or(file.budget_closure)
                .unwrap_or(base.closure),
        };
        if let Some(scale) = cli.budget_scale {
            if !(scale.is_finite() && scale > 0.0) {
                return Err(format!("GSHIFT_BUDGET_SCALE must be positive, got {scale}"));
            }
            budgets = budgets.scaled(scale);
        }
        Ok(Settings {
            budgets,
            probes: range(&cli.probes, file.probes, DEFAULT_PROBE_RANGE)?,
            max_h: cli
                .max_h
                .map(i64::from)
                .or(file.max_h)
                .unwrap_or(DEFAULT_MAX_H),
            window: range(&cli.window, file.window, DEFAULT_WINDOW)?,
            seed: cli.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
        })
    }

    fn window(&self) -> Interval {
        Interval::bounded(self.window.0, self.window.1)
    }
}

/// Parses arguments (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            return (code, e.to_string());
        }
    };
    match execute(&cli) {
        Ok((code, records)) => (code, render(&records, cli.format)),
        Err(message) => (EXIT_ERROR, format!("error: {message}\n")),
    }
}

fn render(records: &[Record], format: Format) -> String {
    let mut out = String::new();
    for r in records {
        match format {
            Format::Human => out += &to_human(r),
            Format::Machine => out += &to_json_line(r),
        }
        out.push('\n');
    }
    out
}

fn load(path: &PathBuf) -> Result<PresentationFile, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_presentation_file(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn execute(cli: &Cli) -> Result<(i32, Vec<Record>), String> {
    let (mut code, records, presentation) = match &cli.command {
        Command::Classify { file } => {
            let f = load(file)?;
            let s = Settings::resolve(cli, &f.params)?;
            let (code, records) = classify(&f, &s);
            (code, records, Some(f.presentation))
        }
        Command::Orbit {
            file,
            point,
            inverse,
        } => {
            let f = load(file)?;
            let s = Settings::resolve(cli, &f.params)?;
            let p = &f.presentation;
            let (result, direction) = if *inverse {
                (
                    inverse_orbit(p, *point, s.budgets.orbit),
                    OrbitDirection::Inverse,
                )
            } else {
                (orbit(p, *point, s.budgets.orbit), OrbitDirection::Forward)
            };
            let code = match result {
                OrbitResult::Unknown { .. } => EXIT_UNKNOWN,
                _ => EXIT_OK,
            };
            let records = vec![
                Record::Header(header(p, "orbit", s.budgets)),
                Record::Orbit(orbit_record(p, *point, direction, &result)),
            ];
            (code, records, Some(f.presentation))
        }
        Command::Witness { file, kind } => {
            let f = load(file)?;
            let s = Settings::resolve(cli, &f.params)?;
            let (code, records) = witness(&f, &s, kind)?;
            (code, records, Some(f.presentation))
        }
        Command::Oracle {
            max_m,
            k,
            max_g,
            random,
            random_m,
        } => {
            let s = Settings::resolve(cli, &Params::default())?;
            let exhaustive = exhaustive_sweep(*max_m, *k, *max_g).map_err(|e| e.to_string())?;
            let sampled = random_sweep(s.seed, *random, *random_m, *k, *max_g.max(&1))
                .map_err(|e| e.to_string())?;
            let records = vec![
                Record::Sweep(SweepRecord {
                    label: format!("exhaustive m<={max_m} k={k} g<={max_g}"),
                    summary: exhaustive,
                }),
                Record::Sweep(SweepRecord {
                    label: format!("random m={random_m} k={k} seed={}", s.seed),
                    summary: sampled,
                }),
            ];
            let failed = records
                .iter()
                .any(|r| matches!(r, Record::Sweep(s) if !s.summary.disagreements.is_empty()));
            (if failed { EXIT_ERROR } else { EXIT_OK }, records, None)
        }
        Command::Check { file, report } => {
            let f = load(file)?;
            let text = std::fs::read_to_string(report)
                .map_err(|e| format!("{}: {e}", report.display()))?;
            let mut records = Vec::new();
            for (i, line) in text
                .lines()
                .enumerate()
                .filter(|(_, l)| !l.trim().is_empty())
            {
                records.push(
                    from_json_line(line)
                        .map_err(|e| format!("{}:{}: {e}", report.display(), i + 1))?,
                );
            }
            let result = verify_records(&f.presentation, &records);
            let code = if result.failures.is_empty() {
                EXIT_OK
            } else {
                EXIT_ERROR
            };
            return Ok((code, vec![Record::Verify(result)]));
        }
    };
    let mut records = records;
    if cli.verify {
        if let Some(p) = presentation {
            let result = verify_records(&p, &records);
            if !result.failures.is_empty() {
                code = EXIT_ERROR;
            }
            records.push(Record::Verify(result));
        }
    }
    Ok((code, records))
}

fn classify(f: &PresentationFile, s: &Settings) -> (i32, Vec<Record>) {
    let p = &f.presentation;
    let c = Classifier::new(p, s.budgets);
    let probes = default_probes(p, s.probes);
    let eq = c.check_equicontinuous(&probes);
    let distal = c.check_distal(&probes);
    let sensitive = c.check_sensitive(&probes);
    let expansive = c.check_expansive(s.max_h, s.window());
    let verdicts = [&eq, &distal, &sensitive, &expansive];
    let code = if verdicts.iter().any(|v| v.outcome == Outcome::Unknown) {
        EXIT_UNKNOWN
    } else {
        EXIT_OK
    };
    let mut records = vec![Record::Header(header(p, "classify", s.budgets))];
    records.extend(
        verdicts
            .iter()
            .map(|v| Record::Verdict(verdict_record(p, v))),
    );
    records.push(Record::Diagram(diagram(
        eq.outcome,
        distal.outcome,
        sensitive.outcome,
        expansive.outcome,
    )));
    (code, records)
}

fn parse_assignment(text: &str) -> Result<(i64, u32), String> {
    let (c, v) = text
        .split_once('=')
        .ok_or_else(|| format!("expected COORD=SYMBOL, got `{text}`"))?;
    let c = c
        .trim()
        .parse()
        .map_err(|_| format!("bad coordinate in `{text}`"))?;
    let v = v
        .trim()
        .parse()
        .map_err(|_| format!("bad symbol in `{text}`"))?;
    Ok((c, v))
}

fn witness(
    f: &PresentationFile,
    s: &Settings,
    kind: &WitnessKind,
) -> Result<(i32, Vec<Record>), String> {
    let p = &f.presentation;
    let mut records = vec![Record::Header(header(p, "witness", s.budgets))];
    match kind {
        WitnessKind::Sensitivity {
            v,
            protected,
            k,
            background,
            assign,
        } => {
            let table: Vec<(i64, u32)> = assign
                .iter()
                .map(|a| parse_assignment(a))
                .collect::<Result<_, _>>()?;
            let x = Pattern::from_table(*k, *background, table).map_err(|e| e.to_string())?;
            match sensitivity_witness(p, *v, &x, protected, s.budgets.orbit) {
                Ok(w) => {
                    w.check(p)
                        .map_err(|e| format!("internal: witness failed its self-check: {e}"))?;
                    records.push(Record::Witness(sensitivity_record(p, &w)));
                    Ok((EXIT_OK, records))
                }
                Err(e) => Ok((EXIT_UNKNOWN, with_note(records, e.to_string()))),
            }
        }
        WitnessKind::Expansivity {
            diff,
            h,
            k,
            background,
        } => {
            let x = Pattern::constant(*k, *background).map_err(|e| e.to_string())?;
            let y = x.flipped(*diff);
            let h = if h.is_empty() {
                let c = Classifier::new(p, s.budgets);
                let v = c.check_expansive(s.max_h, s.window());
                match v.evidence {
                    Evidence::March(cert) => cert.h,
                    _ => {
                        records.push(Record::Verdict(verdict_record(p, &v)));
                        return Ok((
                            EXIT_UNKNOWN,
                            with_note(records, "no expansivity certificate for H".into()),
                        ));
                    }
                }
            } else {
                h.clone()
            };
            match expansivity_witness(p, &h, &x, &y, s.budgets.orbit) {
                Ok(w) => {
                    w.check(p, &h)
                        .map_err(|e| format!("internal: witness failed its self-check: {e}"))?;
                    records.push(Record::Witness(expansivity_record(p, &h, &w)));
                    Ok((EXIT_OK, records))
                }
                Err(e) => Ok((EXIT_UNKNOWN, with_note(records, e.to_string()))),
            }
        }
    }
}

fn with_note(mut records: Vec<Record>, note: String) -> Vec<Record> {
    records.push(Record::Note(NoteRecord {
        message: format!("no witness: {note}"),
    }));
    records
}
