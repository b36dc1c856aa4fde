use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use preamble_sat::cnf::brute_force_optimum;
use preamble_sat::ga::GaParams;
use preamble_sat::harness::{
    emit_report, load_instance, read_comparison_csv, run_experiment, ExperimentConfig, ExperimentResult,
    HarnessError, Mode, Report, ReportFormat,
};
use preamble_sat::sls::{run_heuristic, Budget, HeuristicKind, HeuristicSpec};
use preamble_sat::SolverRng;
use rand::SeedableRng;

#[derive(Parser)]
#[command(name = "preamble-sat", version, about = "MAX-SAT local search with evolved preambles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One heuristic run from a random assignment.
    Solve {
        instance: PathBuf,
        #[command(flatten)]
        heuristic: HeuristicArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Evolve preambles for a heuristic.
    Evolve {
        instance: PathBuf,
        #[command(flatten)]
        heuristic: HeuristicArgs,
        #[command(flatten)]
        ga: GaArgs,
        /// Stop after this many generations instead of a time budget.
        #[arg(long, conflicts_with = "time_budget")]
        generations: Option<u64>,
        #[arg(long, default_value = "default")]
        dataset: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Restart the heuristic alone, reporting the best of every block of runs.
    Baseline {
        instance: PathBuf,
        #[command(flatten)]
        heuristic: HeuristicArgs,
        /// Stop after exactly this many restarts instead of a time budget.
        #[arg(long, conflicts_with = "time_budget")]
        runs: Option<u64>,
        #[arg(long, default_value_t = 50)]
        block_size: u64,
        #[arg(long, default_value = "default")]
        dataset: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Build a comparison table from result files or an existing table.
    Compare {
        /// GA result files (JSON).
        #[arg(long, num_args = 1.., requires = "baseline", conflicts_with = "table")]
        ga: Vec<PathBuf>,
        /// Baseline result files (JSON).
        #[arg(long, num_args = 1.., requires = "ga")]
        baseline: Vec<PathBuf>,
        /// Comparison CSV; highlights and ratios are recomputed.
        #[arg(long)]
        table: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Exact optimum by enumeration (at most 26 variables).
    Oracle {
        instance: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args)]
struct HeuristicArgs {
    #[arg(long, default_value = "novelty", value_parser = parse_kind)]
    heuristic: HeuristicKind,
    #[arg(long)]
    noise: Option<f64>,
    /// Random-walk probability.
    #[arg(long)]
    wp: Option<f64>,
    /// Tabu tenure in flips.
    #[arg(long)]
    tabu: Option<u64>,
    /// Wall-clock budget in seconds.
    #[arg(long)]
    time_budget: Option<f64>,
    /// Flips per heuristic run (per fitness evaluation in `evolve`); 10*n is a reasonable start.
    #[arg(long)]
    flip_budget: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct GaArgs {
    #[arg(long, default_value_t = 50)]
    pop_size: usize,
    #[arg(long, default_value_t = 0.2)]
    elite_frac: f64,
    /// Crossover probability; mutation takes the rest.
    #[arg(long, default_value_t = 0.25)]
    p_crossover: f64,
    #[arg(long, default_value_t = 10)]
    eval_starts: usize,
    #[arg(long, default_value_t = 20.0)]
    selection_ratio: f64,
    /// Minimum share of variables a genome must mention.
    #[arg(long, default_value_t = 0.4)]
    floor_frac: f64,
    /// Maximum initial genome length as a multiple of n.
    #[arg(long, default_value_t = 1.5)]
    init_len_frac: f64,
    #[arg(long, default_value_t = 0.5)]
    mutation_frac: f64,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn parse_kind(s: &str) -> Result<HeuristicKind, String> {
    s.parse().map_err(|e: preamble_sat::sls::SlsError| e.to_string())
}

impl HeuristicArgs {
    fn spec(&self) -> HeuristicSpec {
        let mut spec = HeuristicSpec::new(self.heuristic);
        if let Some(noise) = self.noise {
            spec = spec.with_noise(noise);
        }
        if let Some(wp) = self.wp {
            spec = spec.with_walk_prob(wp);
        }
        if let Some(tabu) = self.tabu {
            spec = spec.with_tabu_tenure(tabu);
        }
        spec
    }

    fn flip_budget(&self) -> Result<u64, HarnessError> {
        match self.flip_budget {
            Some(0) => Err(HarnessError::Config("--flip-budget must be positive".into())),
            Some(f) => Ok(f),
            None => Err(HarnessError::Config("--flip-budget is required".into())),
        }
    }
}

fn emit(out: &OutputArgs, body: &str) -> Result<(), HarnessError> {
    match &out.out {
        Some(path) => fs::write(path, body).map_err(|e| HarnessError::Io {
            path: path.clone(),
            message: e.to_string(),
        }),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn pretty(value: &serde_json::Value) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

fn experiment(
    instance: PathBuf,
    heuristic: &HeuristicArgs,
    mode: Mode,
    count: Option<u64>,
    dataset: String,
    out: &OutputArgs,
) -> Result<ExperimentConfig, HarnessError> {
    let mut cfg = ExperimentConfig::new(instance, heuristic.spec(), mode, heuristic.flip_budget()?);
    cfg.time_budget_s = heuristic.time_budget;
    cfg.count_budget = count;
    cfg.seed = heuristic.seed;
    cfg.dataset = dataset;
    cfg.output = out.out.clone();
    cfg.format = match out.format {
        Format::Json => ReportFormat::Json,
        Format::Csv => ReportFormat::Csv,
    };
    Ok(cfg)
}

fn write_result(result: &ExperimentResult, out: &OutputArgs) {
    // run_experiment already wrote the file when --out was given.
    if out.out.is_none() {
        match out.format {
            Format::Json => print!("{}", result.to_json_string()),
            Format::Csv => print!("{}", result.to_csv()),
        }
    }
}

fn read_results(paths: &[PathBuf]) -> Result<Vec<ExperimentResult>, HarnessError> {
    paths.iter().map(|p| ExperimentResult::read(p)).collect()
}

fn load_table(path: &Path) -> Result<Report, HarnessError> {
    let text = fs::read_to_string(path).map_err(|e| HarnessError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    Ok(Report::from_rows(read_comparison_csv(&text, path)?))
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::Solve { instance, heuristic, out } => {
            let inst = load_instance(&instance)?;
            let spec = heuristic.spec();
            let budget = Budget {
                max_flips: heuristic.flip_budget,
                max_time: heuristic.time_budget.map(Duration::from_secs_f64),
                deadline: None,
            };
            if budget.max_flips.is_none() && budget.max_time.is_none() {
                return Err(HarnessError::Config("give --flip-budget or --time-budget".into()));
            }
            let mut rng = SolverRng::seed_from_u64(heuristic.seed);
            let start = preamble_sat::cnf::Assignment::random(inst.num_vars(), &mut rng);
            let record = run_heuristic(&spec, &inst, start, budget, &mut rng)?;
            let body = match out.format {
                Format::Json => pretty(&serde_json::json!({
                    "instance": instance.display().to_string(),
                    "n": inst.num_vars(),
                    "m": inst.num_clauses(),
                    "heuristic": spec,
                    "seed": heuristic.seed,
                    "run": record,
                })),
                Format::Csv => format!(
                    "best_count,best_time_s,best_flips,total_flips\n{},{},{},{}\n",
                    record.best_count, record.best_found_at_time, record.best_found_at_flips, record.total_flips
                ),
            };
            emit(&out, &body)
        }
        Command::Evolve { instance, heuristic, ga, generations, dataset, out } => {
            let mut cfg = experiment(instance, &heuristic, Mode::Ga, generations, dataset, &out)?;
            cfg.ga = GaParams {
                pop_size: ga.pop_size,
                elite_frac: ga.elite_frac,
                p_crossover: ga.p_crossover,
                p_mutation: 1.0 - ga.p_crossover,
                eval_starts: ga.eval_starts,
                selection_ratio: ga.selection_ratio,
                distinct_floor_frac: ga.floor_frac,
                init_maxlen_frac: ga.init_len_frac,
                mutation_frac: ga.mutation_frac,
                per_eval_flips: cfg.flip_budget,
            };
            write_result(&run_experiment(&cfg)?, &out);
            Ok(())
        }
        Command::Baseline { instance, heuristic, runs, block_size, dataset, out } => {
            let mut cfg = experiment(instance, &heuristic, Mode::Baseline, runs, dataset, &out)?;
            cfg.block_size = block_size;
            write_result(&run_experiment(&cfg)?, &out);
            Ok(())
        }
        Command::Compare { ga, baseline, table, out } => {
            let report = match table {
                Some(path) => load_table(&path)?,
                None if !ga.is_empty() => emit_report(&read_results(&ga)?, &read_results(&baseline)?)?,
                None => return Err(HarnessError::Config("give --ga and --baseline files, or --table".into())),
            };
            let body = match out.format {
                Format::Json => pretty(&report.to_json()),
                Format::Csv => report.to_csv(),
            };
            emit(&out, &body)
        }
        Command::Oracle { instance, out } => {
            let inst = load_instance(&instance)?;
            let (best, witness) = brute_force_optimum(&inst).map_err(|e| HarnessError::Config(e.to_string()))?;
            let lits: Vec<i64> = (0..inst.num_vars())
                .map(|v| if witness.values()[v] { v as i64 + 1 } else { -(v as i64 + 1) })
                .collect();
            let body = match out.format {
                Format::Json => pretty(&serde_json::json!({
                    "n": inst.num_vars(),
                    "m": inst.num_clauses(),
                    "optimum": best,
                    "assignment": lits,
                })),
                Format::Csv => format!("n,m,optimum\n{},{},{best}\n", inst.num_vars(), inst.num_clauses()),
            };
            emit(&out, &body)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
