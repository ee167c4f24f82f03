//! `qcool`: analyze thermal machines, synthesize cooling circuits, sweep
//! bounds and run the oracle cross-checks.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qcool::matching::{build_graph, cost_matrix, graph_to_dot, hungarian, HammingCost};
use qcool::oracle::hypercube_to_dot;
use qcool::orders::{ell_range, minimal_swappable_set, never_swappable_set};
use qcool::report::{analyze, synthesize};
use qcool::sweep::{sweep, to_csv, OmegaChoice};
use qcool::verify::{run_machine, run_random};
use qcool::{load_machine, CostKind, Family, MachineSpec};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "qcool",
    version,
    about = "Optimal cooling of a qubit with a thermal machine"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Cost {
    Hamming,
    Energy,
}

impl From<Cost> for CostKind {
    fn from(c: Cost) -> Self {
        match c {
            Cost::Hamming => CostKind::Hamming,
            Cost::Energy => CostKind::Energy,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Swappable set, population gain, bounds and reducibility.
    Analyze {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Minimum-cost matching and the circuits realizing it.
    Synthesize {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long, value_enum, default_value = "hamming")]
        cost: Cost,
        /// Machine whose energies price the edges (defaults to --machine).
        #[arg(long)]
        cost_machine: Option<PathBuf>,
        /// Also list every optimal matching (at most 8 levels).
        #[arg(long)]
        enumerate: bool,
        #[arg(long, default_value_t = 100)]
        limit: usize,
        /// Write PREFIX.native.circ and PREFIX.lowered.circ.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bound comparison sweep as CSV.
    Bounds {
        /// Comma-separated families.
        #[arg(long, value_delimiter = ',', required = true)]
        family: Vec<String>,
        /// One gamma for all families, or one per family.
        #[arg(long, value_delimiter = ',', required = true)]
        gamma: Vec<f64>,
        #[arg(long, conflicts_with = "omega_ratio")]
        omega: Option<f64>,
        /// System gap as a multiple of the smallest machine gap.
        #[arg(long)]
        omega_ratio: Option<f64>,
        /// Range `LO:HI` or a single size.
        #[arg(long)]
        n: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check every module against the brute-force oracle.
    Verify {
        #[arg(long, conflicts_with = "machine")]
        random: bool,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        machine: Option<PathBuf>,
    },
    /// Never and minimal swappable sets.
    Orders {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        ell: Option<i64>,
    },
    /// DOT export of the disorder graph or the joint hypercube.
    Graph {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        hypercube: bool,
    },
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<qcool::Error> for Failure {
    fn from(e: qcool::Error) -> Self {
        Failure {
            code: 1,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

fn machine(path: &Path) -> Result<MachineSpec, Failure> {
    load_machine(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn pretty(value: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn parse_range(s: &str) -> Result<std::ops::RangeInclusive<usize>, Failure> {
    let bad = || usage(format!("invalid --n {s:?}, expected LO:HI or N"));
    let (lo, hi) = match s.split_once(':') {
        Some((a, b)) => (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?),
        None => {
            let v = s.parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo == 0 || lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze {
            machine: path,
            format,
        } => {
            let report = analyze(&machine(&path)?);
            match format {
                Format::Json => print!("{}", pretty(&report)),
                Format::Text => print!("{}", report.to_text()),
            }
        }
        Command::Synthesize {
            machine: path,
            cost,
            cost_machine,
            enumerate,
            limit,
            out,
        } => {
            let spec = machine(&path)?;
            let cost_spec = match cost_machine {
                Some(p) => machine(&p)?,
                None => spec.clone(),
            };
            let s = synthesize(&spec, cost.into(), &cost_spec, enumerate.then_some(limit))?;
            if let Some(prefix) = out {
                let with = |ext: &str| {
                    let mut p = prefix.clone().into_os_string();
                    p.push(ext);
                    PathBuf::from(p)
                };
                write(&with(".native.circ"), &s.native.to_text())?;
                write(&with(".lowered.circ"), &s.lowered.to_text())?;
            }
            print!("{}", pretty(&s.report));
        }
        Command::Bounds {
            family,
            gamma,
            omega,
            omega_ratio,
            n,
            out,
        } => {
            let families = family
                .iter()
                .map(|f| f.parse::<Family>())
                .collect::<Result<Vec<_>, _>>()?;
            let gammas = match gamma.len() {
                1 => vec![gamma[0]; families.len()],
                k if k == families.len() => gamma,
                k => {
                    return Err(usage(format!(
                        "--gamma has {k} values for {} families",
                        families.len()
                    )))
                }
            };
            let omega = match (omega, omega_ratio) {
                (Some(w), None) => OmegaChoice::Fixed(w),
                (None, Some(r)) => OmegaChoice::Ratio(r),
                _ => return Err(usage("give exactly one of --omega and --omega-ratio")),
            };
            let points: Vec<_> = families.into_iter().zip(gammas).collect();
            let csv = to_csv(&sweep(&points, parse_range(&n)?, omega)?);
            match out {
                Some(p) => write(&p, &csv)?,
                None => print!("{csv}"),
            }
        }
        Command::Verify {
            random,
            n,
            trials,
            seed,
            machine: path,
        } => {
            let report = match (random, path) {
                (_, Some(p)) => run_machine(&machine(&p)?)?,
                (true, None) => {
                    if n == 0 || n > qcool::oracle::MAX_ORACLE_N - 1 {
                        return Err(usage(format!(
                            "--n must lie in 1..={}",
                            qcool::oracle::MAX_ORACLE_N - 1
                        )));
                    }
                    run_random(seed, trials, n)?
                }
                (false, None) => return Err(usage("verify needs --random or --machine")),
            };
            print!("{}", pretty(&report));
            if !report.passed {
                return Err(Failure {
                    code: 2,
                    message: "verification mismatch".into(),
                });
            }
        }
        Command::Orders { n, ell } => {
            let never = never_swappable_set(n)?;
            let ells: Vec<i64> = match ell {
                Some(l) => vec![l],
                None => {
                    let (lo, hi) = ell_range(n);
                    (lo..=hi).collect()
                }
            };
            let minimal = ells
                .into_iter()
                .map(|l| {
                    minimal_swappable_set(n, l).map(
                        |s| json!({"ell": s.ell, "anchor": s.anchor, "minimal_set": s.minimal_set}),
                    )
                })
                .collect::<Result<Vec<_>, _>>()?;
            print!(
                "{}",
                pretty(&json!({"n": n, "never_set": never, "minimal_sets": minimal}))
            );
        }
        Command::Graph {
            machine: path,
            dot,
            hypercube,
        } => {
            let spec = machine(&path)?;
            let text = if hypercube {
                hypercube_to_dot(&spec)?
            } else {
                let graph = build_graph(&spec);
                if graph.is_empty() {
                    graph_to_dot(&graph, None, None)
                } else {
                    let matrix = cost_matrix(&graph, &HammingCost, &spec)?;
                    let matching = hungarian(&matrix)?;
                    graph_to_dot(&graph, Some(&matrix), Some(&matching))
                }
            };
            match dot {
                Some(p) => write(&p, &text)?,
                None => print!("{text}"),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
