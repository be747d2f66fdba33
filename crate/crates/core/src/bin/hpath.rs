use std::fs::{self, File};
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_rational::Rational64;

use hidden_path::blowup::{build_good_system, verify_good_system, GoodSystem};
use hidden_path::experiment::{default_suite, read_records, records_csv, report, run_detailed, violations, write_csv, GraphFamily, RunRecord, Scenario};
use hidden_path::game::{verify_relations, GameRecord, GameSolver};
use hidden_path::generate::{gen_setting2, PathControl};
use hidden_path::oracle::{consistency_witness, QueryKind, Transcript};
use hidden_path::separators::{min_alpha_separator_exact_capped, EXACT_CAP};
use hidden_path::{Error, GridSpec, Instance, Result, Setting};

/// Endpoint search on graphs with a hidden directed path.
#[derive(Parser)]
#[command(name = "hpath", version)]
struct Cli {
    /// Directory for CSV, JSONL and DOT output.
    #[arg(long, global = true, env = "HPATH_OUT_DIR", default_value = ".")]
    out_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run scenarios from a JSON file (one object or an array).
    Run {
        config: PathBuf,
        /// Override every scenario's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override every scenario's repetition count.
        #[arg(long)]
        repetitions: Option<usize>,
        /// Also write every transcript as JSON lines.
        #[arg(long)]
        transcripts: bool,
    },
    /// Summarize a records CSV against the bounds it carries.
    Report { records: PathBuf },
    /// Run the built-in suite and fail on any bound violation.
    Verify,
    /// Exact game value on a tiny graph.
    Solve {
        /// e.g. path:4, grid:2x3, complete:4, star:3.
        graph: GraphFamily,
        #[arg(long, default_value_t = 0)]
        source: usize,
        #[arg(long, default_value = "S2")]
        setting: Setting,
        #[arg(long, default_value = "B")]
        kind: QueryKind,
        /// Raise the vertex cap.
        #[arg(long)]
        cap: Option<usize>,
        /// Report all four values and the inequalities between them.
        #[arg(long)]
        relations: bool,
    },
    /// Minimum alpha-separator by exhaustive search.
    Separator {
        graph: GraphFamily,
        #[arg(long, default_value = "1/2")]
        alpha: Rational64,
        #[arg(long, default_value_t = EXACT_CAP)]
        cap: usize,
    },
    /// 4x4 blowup good systems.
    Blowup {
        #[command(subcommand)]
        action: BlowupAction,
    },
    /// Check that a transcript is consistent with some instance.
    Replay {
        graph: GraphFamily,
        transcript: PathBuf,
    },
}

#[derive(Subcommand)]
enum BlowupAction {
    /// Build a good system for a seeded base path; writes JSON and DOT.
    Build {
        /// Base grid, e.g. 2x2 or 2x2x3.
        dims: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Verify a good-system JSON file.
    Verify { file: PathBuf },
}

fn io_err(e: impl std::fmt::Display) -> Error {
    Error::Io(e.to_string())
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(io_err)?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(io_err)?;
    Ok(path)
}

fn print_report(records: &[RunRecord]) -> Result<bool> {
    write_csv(&report(records), io::stdout().lock())?;
    let bad = violations(records)?;
    for r in &bad {
        eprintln!("violation: {} {} queries={} bounds=[{}, {}] correct={}", r.scenario, r.instance, r.queries_used,
            r.lower_bound.as_deref().unwrap_or("-"), r.upper_bound.as_deref().unwrap_or("-"), r.correct);
    }
    Ok(bad.is_empty())
}

fn run_scenarios(scenarios: &[Scenario], out_dir: &Path, transcripts: bool) -> Result<bool> {
    let mut records = Vec::new();
    let mut lines = String::new();
    for s in scenarios {
        for run in run_detailed(s)? {
            if transcripts {
                lines.push_str(&run.result.transcript.to_jsonl());
            }
            records.push(run.record);
        }
    }
    let path = write_file(out_dir, "records.csv", &records_csv(&records)?)?;
    eprintln!("wrote {}", path.display());
    if transcripts {
        eprintln!("wrote {}", write_file(out_dir, "transcripts.jsonl", &lines)?.display());
    }
    print_report(&records)
}

fn parse_dims(s: &str) -> Result<GridSpec> {
    let dims = s.split('x').map(|d| d.parse().map_err(|_| Error::Parse(format!("bad dims {s}")))).collect::<Result<Vec<usize>>>()?;
    GridSpec::new(dims)
}

fn execute(cli: Cli) -> Result<bool> {
    let out = cli.out_dir;
    match cli.command {
        Command::Run { config, seed, repetitions, transcripts } => {
            let text = fs::read_to_string(&config).map_err(io_err)?;
            let mut scenarios = Scenario::from_json(&text)?;
            for s in &mut scenarios {
                s.seed = seed.or(s.seed);
                s.repetitions = repetitions.unwrap_or(s.repetitions);
            }
            run_scenarios(&scenarios, &out, transcripts)
        }
        Command::Report { records } => {
            let records = read_records(File::open(&records).map_err(io_err)?)?;
            if records.is_empty() {
                return Err(Error::Parse("no records".into()));
            }
            print_report(&records)
        }
        Command::Verify => run_scenarios(&default_suite(), &out, false),
        Command::Solve { graph, source, setting, kind, cap, relations } => {
            let g = graph.build()?;
            if relations {
                let r = verify_relations(&g, source)?;
                println!("{}", serde_json::to_string_pretty(&r).map_err(io_err)?);
                return Ok(r.all_hold());
            }
            let mut solver = match cap {
                Some(c) => GameSolver::with_cap(&g, source, setting, kind, c)?,
                None => GameSolver::new(&g, source, setting, kind)?,
            };
            let v = solver.solve();
            let graph_id = graph.to_string();
            hidden_path::game::write_game_csv(&[GameRecord { graph_id, setting, kind, value: v.value }], io::stdout().lock())?;
            if let Some(q) = v.first_query {
                eprintln!("optimal first query: {q}");
            }
            Ok(true)
        }
        Command::Separator { graph, alpha, cap } => {
            let g = graph.build()?;
            let r = min_alpha_separator_exact_capped(&g, alpha, cap)?;
            println!("{}", serde_json::to_string_pretty(&r).map_err(io_err)?);
            Ok(true)
        }
        Command::Blowup { action: BlowupAction::Build { dims, seed } } => {
            let base = parse_dims(&dims)?;
            let path = gen_setting2(&base.build(), 0, PathControl::Seed(seed))?;
            let sys = build_good_system(&base, &path)?;
            verify_good_system(&base, &path, &sys)?;
            let json = serde_json::to_string_pretty(&sys).map_err(io_err)?;
            eprintln!("wrote {}", write_file(&out, "good_system.json", &json)?.display());
            eprintln!("wrote {}", write_file(&out, "good_system.dot", &sys.instance.to_dot(&hidden_path::blowup::blowup_spec(&base)?.build()))?.display());
            println!("base path: {:?}", sys.block_order);
            Ok(true)
        }
        Command::Blowup { action: BlowupAction::Verify { file } } => {
            let sys: GoodSystem = serde_json::from_reader(BufReader::new(File::open(&file).map_err(io_err)?)).map_err(io_err)?;
            let base = GridSpec::new(sys.base_dims.clone())?;
            let path = Instance::from_path(base.vertex_count(), &sys.block_order)?;
            verify_good_system(&base, &path, &sys)?;
            println!("ok: good system over {} blocks", sys.block_order.len());
            Ok(true)
        }
        Command::Replay { graph, transcript } => {
            let g = graph.build()?;
            let t = Transcript::read_jsonl(BufReader::new(File::open(&transcript).map_err(io_err)?))?;
            let w = consistency_witness(&g, &t).map_err(|e| match e {
                Error::SizeCap { .. } => Error::Unsupported(format!("replay enumerates instances and is limited to small graphs: {e}")),
                e => e,
            })?;
            println!("consistent; witness endpoint {}", w.endpoint());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = execute(cli);
    let _ = io::stdout().flush();
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
