//! Command-line front end: analyze quiver files, evaluate module
//! expressions, run gap searches, apply quiver transforms, run seeded
//! random exploration, and run the bundled regression suite.
//!
//! Exit codes: 0 success, 1 regression failure, 2 input error, 3 internal
//! invariant or property violation.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use phigap::algebra::parse_module_expr;
use phigap::explore::{run_explore, ExploreConfig, ExploreFormat};
use phigap::gaps::{find_gaps, GapsError, SearchBounds};
use phigap::igusa_todorov::{phidim, psidim_lower, Engine, PhiContext};
use phigap::quiver::{
    one_point_extension, opposite_quiver, separated_quiver, successor_closed_subquiver, Quiver,
};
use phigap::regress::{bundled_fixtures, run_all};
use phigap::report::AlgebraReport;

const EXIT_REGRESSION: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "phigap",
    about = "Exact homological invariants of radical square zero algebras presented by quivers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print partition, transfer matrix, kernel filtration, and dimensions.
    Analyze {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate the Igusa-Todorov functions of a module expression.
    Phi {
        file: PathBuf,
        /// Module expression, e.g. "S(2) + S(3)" or "P(1)/[2]^3".
        #[arg(short, long)]
        module: String,
        #[arg(long, value_enum, default_value_t = EngineArg::Both)]
        engine: EngineArg,
        #[arg(long)]
        json: bool,
    },
    /// Search admissible values and report gaps.
    Gaps {
        file: PathBuf,
        #[arg(long)]
        max_summands: Option<usize>,
        #[arg(long)]
        no_local_quotients: bool,
    },
    /// Apply a quiver transform; optionally compare invariants.
    Transform {
        file: PathBuf,
        #[arg(long, value_enum)]
        op: TransformOp,
        /// Extension targets (comma separated), for --op extend.
        #[arg(long, value_delimiter = ',')]
        targets: Vec<String>,
        /// Kept vertices (comma separated), for --op subquiver.
        #[arg(long, value_delimiter = ',')]
        keep: Vec<String>,
        /// Also print both algebras' invariants and check the applicable
        /// inequality.
        #[arg(long)]
        compare: bool,
        /// Emit the transformed quiver as JSON instead of the DSL.
        #[arg(long)]
        json: bool,
    },
    /// Seeded random exploration with per-sample property verdicts.
    Explore {
        #[arg(long)]
        vertices: usize,
        #[arg(long)]
        arrows: usize,
        #[arg(long)]
        loops: bool,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FormatArg::Jsonl)]
        format: FormatArg,
    },
    /// Evaluate every bundled regression fixture.
    Regress,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Def,
    Filt,
    Both,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Engine {
        match e {
            EngineArg::Def => Engine::Definition,
            EngineArg::Filt => Engine::Filtration,
            EngineArg::Both => Engine::Both,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TransformOp {
    Opposite,
    Separated,
    Extend,
    Subquiver,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Jsonl,
    Csv,
}

fn time_budget_from_env() -> Option<Duration> {
    let raw = std::env::var("PHIGAP_TIME_BUDGET").ok()?;
    match raw.trim().parse::<f64>() {
        Ok(secs) if secs > 0.0 => Some(Duration::from_secs_f64(secs)),
        _ => {
            eprintln!("warning: ignoring unparsable PHIGAP_TIME_BUDGET `{raw}`");
            None
        }
    }
}

fn load_quiver(path: &PathBuf) -> Result<Quiver, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    } else {
        Quiver::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

enum CliError {
    Input(String),
    Internal(String),
    Io(String),
}

impl From<GapsError> for CliError {
    fn from(e: GapsError) -> Self {
        match e {
            GapsError::Precondition(msg) => CliError::Input(msg),
            GapsError::Engine(e) => CliError::Internal(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(EXIT_INTERNAL)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("io error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn bounds_with(max_summands: Option<usize>, no_local_quotients: bool) -> SearchBounds {
    SearchBounds {
        max_summands,
        include_local_quotients: !no_local_quotients,
        time_budget: time_budget_from_env(),
        ..SearchBounds::default()
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Analyze { file, json } => {
            let q = load_quiver(&file).map_err(CliError::Input)?;
            let report = AlgebraReport::compute(&q);
            if json {
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
            } else {
                print!("{}", report.render_text());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Phi {
            file,
            module,
            engine,
            json,
        } => {
            let q = load_quiver(&file).map_err(CliError::Input)?;
            let m = parse_module_expr(&q, &module).map_err(|e| CliError::Input(e.to_string()))?;
            let ctx = PhiContext::new(&q);
            let computation = ctx
                .phi(&m, engine.into())
                .map_err(|e| CliError::Internal(e.to_string()))?;
            let psi = ctx.psi(&m).map_err(|e| CliError::Internal(e.to_string()))?;
            if json {
                let blob = serde_json::json!({
                    "module": m.format(&q),
                    "phi": computation,
                    "psi": psi,
                });
                println!("{}", serde_json::to_string_pretty(&blob).unwrap());
            } else {
                println!("module: {}", m.format(&q));
                let summands: Vec<String> = computation
                    .summands
                    .iter()
                    .map(|(a, k)| {
                        if *k > 1 {
                            format!("{a}^{k}")
                        } else {
                            a.clone()
                        }
                    })
                    .collect();
                println!("summands: {}", summands.join(", "));
                println!(
                    "r-sequence: {:?} (stabilizes at index {})",
                    computation.r_sequence, computation.eta
                );
                println!("phi: {}", computation.phi);
                println!(
                    "psi: {} (phi {} + finite-pd sup {})",
                    psi.psi, psi.phi, psi.finite_pd_supremum
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Gaps {
            file,
            max_summands,
            no_local_quotients,
        } => {
            let q = load_quiver(&file).map_err(CliError::Input)?;
            let bounds = bounds_with(max_summands, no_local_quotients);
            let report = find_gaps(&q, &bounds)?;
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
            if report.gap_theorem_ok {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(EXIT_INTERNAL))
            }
        }
        Command::Transform {
            file,
            op,
            targets,
            keep,
            compare,
            json,
        } => {
            let q = load_quiver(&file).map_err(CliError::Input)?;
            let transformed = match op {
                TransformOp::Opposite => opposite_quiver(&q),
                TransformOp::Separated => separated_quiver(&q),
                TransformOp::Extend => {
                    one_point_extension(&q, &targets).map_err(|e| CliError::Input(e.to_string()))?
                }
                TransformOp::Subquiver => {
                    let keep: BTreeSet<String> = keep.into_iter().collect();
                    successor_closed_subquiver(&q, &keep)
                        .map_err(|e| CliError::Input(e.to_string()))?
                }
            };
            if json {
                println!("{}", serde_json::to_string_pretty(&transformed).unwrap());
            } else {
                println!("{}", transformed.to_dsl());
            }
            if compare {
                let bounds = bounds_with(None, false);
                let before = Invariants::of(&q, &bounds);
                let after = Invariants::of(&transformed, &bounds);
                println!("original:    {before}");
                println!("transformed: {after}");
                let verdict = match op {
                    TransformOp::Opposite => Some(before.phidim == after.phidim),
                    TransformOp::Extend => {
                        Some(before.phidim <= after.phidim && after.phidim <= before.phidim + 1)
                    }
                    TransformOp::Subquiver => Some(after.phidim <= before.phidim),
                    TransformOp::Separated => None,
                };
                match verdict {
                    Some(true) => println!("inequality: ok"),
                    Some(false) => {
                        println!("inequality: VIOLATED");
                        return Ok(ExitCode::from(EXIT_INTERNAL));
                    }
                    None => println!("inequality: none applicable"),
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Explore {
            vertices,
            arrows,
            loops,
            samples,
            seed,
            out,
            format,
        } => {
            if vertices == 0 {
                return Err(CliError::Input("--vertices must be at least 1".into()));
            }
            let config = ExploreConfig {
                num_vertices: vertices,
                arrow_count: arrows,
                allow_loops: loops,
                samples,
                seed,
                format: match format {
                    FormatArg::Jsonl => ExploreFormat::Jsonl,
                    FormatArg::Csv => ExploreFormat::Csv,
                },
            };
            let all_ok = match out {
                Some(path) => {
                    let mut file = fs::File::create(&path)
                        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                    let ok =
                        run_explore(&config, &mut file).map_err(|e| CliError::Io(e.to_string()))?;
                    file.flush().map_err(|e| CliError::Io(e.to_string()))?;
                    ok
                }
                None => {
                    let stdout = std::io::stdout();
                    let mut lock = stdout.lock();
                    run_explore(&config, &mut lock).map_err(|e| CliError::Io(e.to_string()))?
                }
            };
            if all_ok {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("property violation detected; see flagged records");
                Ok(ExitCode::from(EXIT_INTERNAL))
            }
        }
        Command::Regress => {
            let fixtures = bundled_fixtures();
            let outcome = run_all(&fixtures).map_err(CliError::Input)?;
            for line in &outcome.lines {
                println!("{line}");
            }
            println!(
                "{} expectations, {} failures ({} on reference values)",
                outcome.total, outcome.failures, outcome.reference_failures
            );
            if outcome.reference_failures > 0 {
                Ok(ExitCode::from(EXIT_REGRESSION))
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
    }
}

struct Invariants {
    phidim: usize,
    findim: usize,
    psidim_lower: usize,
}

impl Invariants {
    fn of(q: &Quiver, bounds: &SearchBounds) -> Invariants {
        Invariants {
            phidim: phidim(q),
            findim: phigap::algebra::findim(q),
            psidim_lower: psidim_lower(q, bounds),
        }
    }
}

impl std::fmt::Display for Invariants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "phidim {} findim {} psidim >= {}",
            self.phidim, self.findim, self.psidim_lower
        )
    }
}
