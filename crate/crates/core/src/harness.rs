//! Experiment orchestration: GA versus the heuristic alone under the same
//! wall-clock budget, the highlight rule, success ratios, and result files.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::cnf::{parse_dimacs, Assignment, Instance, ParseError};
use crate::ga::{run_ga, GaError, GaParams, GaRecordJson, GaStop};
use crate::sls::{run_heuristic, Budget, HeuristicSpec, SlsError};
use crate::SolverRng;

/// Baseline runs are reported in blocks of this many restarts.
pub const DEFAULT_BLOCK_SIZE: u64 = 50;

/// Footer note describing which rows enter the success ratios.
pub const RATIO_NOTE: &str = "ratios count rows with a GA result; a missing baseline counts as a GA success; \
                              rows without a GA result are excluded";

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("configuration: {0}")]
    Config(String),
    #[error("{path}: malformed data: {message}")]
    Data { path: PathBuf, message: String },
    #[error("instance sets differ; GA only: [{}], baseline only: [{}]", ga_only.join(", "), base_only.join(", "))]
    MismatchedInstances {
        ga_only: Vec<String>,
        base_only: Vec<String>,
    },
    #[error("no rows with a GA result in selection `{0}`")]
    EmptySelection(String),
    #[error(transparent)]
    Ga(#[from] GaError),
    #[error(transparent)]
    Sls(#[from] SlsError),
}

impl HarnessError {
    /// Process exit code: 2 configuration, 3 parse, 4 runtime or I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            HarnessError::Parse { .. } | HarnessError::Data { .. } => 3,
            HarnessError::Ga(GaError::BadParams(_)) => 2,
            HarnessError::Sls(SlsError::BadProbability { .. } | SlsError::UnknownHeuristic(_)) => 2,
            _ => 4,
        }
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> HarnessError {
    HarnessError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

/// Reads and parses a DIMACS CNF file.
pub fn load_instance(path: &Path) -> Result<Instance, HarnessError> {
    let file = fs::File::open(path).map_err(|e| io_err(path, e))?;
    parse_dimacs(std::io::BufReader::new(file)).map_err(|source| HarnessError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

/// When the baseline loop ends.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BaselineStop {
    Time(Duration),
    /// Exact number of restarts; makes runs reproducible.
    Runs(u64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunLogEntry {
    pub best_count: usize,
    /// Seconds since the baseline started.
    pub best_time_s: f64,
    pub best_flips: u64,
    pub total_flips: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaselineRecord {
    /// Best count over completed blocks; `None` if no block completed.
    pub best_count: Option<usize>,
    pub best_time_s: Option<f64>,
    pub runs_completed: u64,
    pub blocks_completed: u64,
    /// Best over every run, including an unfinished block.
    pub global_best: Option<usize>,
    /// Reported best after each completed block.
    pub block_bests: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub runs: Vec<RunLogEntry>,
}

/// Restarts `spec` from fresh random assignments until `stop`, reporting
/// the best count frozen at completed block boundaries.
pub fn run_baseline<R: Rng + ?Sized>(
    spec: &HeuristicSpec,
    inst: &Instance,
    stop: BaselineStop,
    per_run_flips: u64,
    block_size: u64,
    keep_log: bool,
    rng: &mut R,
) -> Result<BaselineRecord, HarnessError> {
    if block_size == 0 {
        return Err(HarnessError::Config("block size must be positive".into()));
    }
    spec.validate()?;
    let started = Instant::now();
    let (deadline, max_runs) = match stop {
        BaselineStop::Time(t) => (Some(started + t), u64::MAX),
        BaselineStop::Runs(r) => (None, r),
    };
    let m = inst.num_clauses();
    let mut record = BaselineRecord {
        best_count: None,
        best_time_s: None,
        runs_completed: 0,
        blocks_completed: 0,
        global_best: None,
        block_bests: Vec::new(),
        runs: Vec::new(),
    };
    let mut block_best: Option<(usize, f64)> = None;
    let mut reported: Option<(usize, f64)> = None;

    while record.runs_completed < max_runs {
        if deadline.is_some_and(|d| Instant::now() >= d) {
            break;
        }
        let offset = started.elapsed().as_secs_f64();
        let start = Assignment::random(inst.num_vars(), rng);
        let budget = Budget::flips(per_run_flips).with_deadline(deadline);
        let run = run_heuristic(spec, inst, start, budget, rng)?;
        let finished = run.total_flips == per_run_flips || run.best_count == m;
        if !finished {
            // Cut off by the deadline.
            record.global_best = record.global_best.max(Some(run.best_count));
            break;
        }
        let found_at = offset + run.best_found_at_time;
        record.runs_completed += 1;
        record.global_best = record.global_best.max(Some(run.best_count));
        if keep_log {
            record.runs.push(RunLogEntry {
                best_count: run.best_count,
                best_time_s: found_at,
                best_flips: run.best_found_at_flips,
                total_flips: run.total_flips,
            });
        }
        if block_best.is_none_or(|(c, _)| run.best_count > c) {
            block_best = Some((run.best_count, found_at));
        }
        if record.runs_completed.is_multiple_of(block_size) {
            let b = block_best.take().unwrap();
            if reported.is_none_or(|(c, _)| b.0 > c) {
                reported = Some(b);
            }
            record.blocks_completed += 1;
            record.block_bests.push(reported.unwrap().0);
        }
    }
    record.best_count = reported.map(|r| r.0);
    record.best_time_s = reported.map(|r| r.1);
    Ok(record)
}

/// A result pair: satisfied clauses and when they were first reached.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub count: usize,
    pub time_s: f64,
}

impl Outcome {
    pub fn new(count: usize, time_s: f64) -> Self {
        Outcome { count, time_s }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Highlight {
    /// GA strictly better, or equal and first found sooner.
    pub count: bool,
    /// Equal counts with the GA strictly faster.
    pub time: bool,
}

/// Applies the highlight rule. `None` when the GA has no result. A GA
/// result against a missing baseline is a count win.
pub fn highlight(ga: Option<Outcome>, base: Option<Outcome>) -> Option<Highlight> {
    let ga = ga?;
    let Some(base) = base else {
        return Some(Highlight { count: true, time: false });
    };
    let time = ga.count == base.count && ga.time_s < base.time_s;
    Some(Highlight {
        count: ga.count > base.count || time,
        time,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonRow {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub dataset: String,
    pub ga: Option<Outcome>,
    pub base: Option<Outcome>,
    pub highlight: Option<Highlight>,
}

impl ComparisonRow {
    pub fn new(
        instance: impl Into<String>,
        n: usize,
        m: usize,
        dataset: impl Into<String>,
        ga: Option<Outcome>,
        base: Option<Outcome>,
    ) -> Self {
        ComparisonRow {
            instance: instance.into(),
            n,
            m,
            dataset: dataset.into(),
            ga,
            base,
            highlight: highlight(ga, base),
        }
    }
}

/// Flat CSV form of a [`ComparisonRow`]; column order is fixed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct CsvRow {
    instance: String,
    n: usize,
    m: usize,
    ga_count: Option<usize>,
    ga_time_s: Option<f64>,
    base_count: Option<usize>,
    base_time_s: Option<f64>,
    count_highlight: Option<bool>,
    time_highlight: Option<bool>,
    #[serde(default)]
    dataset: String,
}

fn pair(count: Option<usize>, time: Option<f64>) -> Option<Outcome> {
    Some(Outcome::new(count?, time?))
}

impl From<&ComparisonRow> for CsvRow {
    fn from(r: &ComparisonRow) -> Self {
        CsvRow {
            instance: r.instance.clone(),
            n: r.n,
            m: r.m,
            ga_count: r.ga.map(|o| o.count),
            ga_time_s: r.ga.map(|o| o.time_s),
            base_count: r.base.map(|o| o.count),
            base_time_s: r.base.map(|o| o.time_s),
            count_highlight: r.highlight.map(|h| h.count),
            time_highlight: r.highlight.map(|h| h.time),
            dataset: r.dataset.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuccessRatio {
    pub successes: usize,
    pub eligible: usize,
    pub value: f64,
}

/// Fraction of count-highlighted rows among rows with a GA result,
/// restricted to `dataset` when given.
pub fn success_ratio(rows: &[ComparisonRow], dataset: Option<&str>) -> Result<SuccessRatio, HarnessError> {
    let (mut successes, mut eligible) = (0, 0);
    for row in rows.iter().filter(|r| dataset.is_none_or(|d| r.dataset == d)) {
        if let Some(h) = row.highlight {
            eligible += 1;
            successes += usize::from(h.count);
        }
    }
    if eligible == 0 {
        return Err(HarnessError::EmptySelection(dataset.unwrap_or("all").to_string()));
    }
    Ok(SuccessRatio {
        successes,
        eligible,
        value: successes as f64 / eligible as f64,
    })
}

/// Comparison table with per-dataset and combined success ratios.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    #[serde(skip)]
    pub rows: Vec<ComparisonRow>,
    /// Keyed by dataset label, in label order.
    pub ratios: BTreeMap<String, SuccessRatio>,
    pub combined: Option<SuccessRatio>,
}

impl Report {
    pub fn from_rows(rows: Vec<ComparisonRow>) -> Self {
        let labels: BTreeSet<&str> = rows.iter().map(|r| r.dataset.as_str()).collect();
        let ratios = labels
            .into_iter()
            .filter_map(|l| success_ratio(&rows, Some(l)).ok().map(|r| (l.to_string(), r)))
            .collect();
        let combined = success_ratio(&rows, None).ok();
        Report { rows, ratios, combined }
    }

    /// CSV with the fixed columns plus `dataset`, and `#` footer lines
    /// carrying the ratios.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(CsvRow::from(row)).expect("in-memory CSV write");
        }
        let mut out = String::from_utf8(w.into_inner().expect("in-memory CSV flush")).unwrap();
        let line = |label: &str, r: &SuccessRatio| {
            format!("# success_ratio,{label},{:.3},{}/{}\n", r.value, r.successes, r.eligible)
        };
        for (label, r) in &self.ratios {
            out.push_str(&line(label, r));
        }
        if let Some(r) = &self.combined {
            out.push_str(&line("combined", r));
        }
        out.push_str(&format!("# note: {RATIO_NOTE}\n"));
        out
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<CsvRow> = self.rows.iter().map(CsvRow::from).collect();
        serde_json::json!({
            "rows": rows,
            "ratios": self.ratios,
            "combined": self.combined,
            "note": RATIO_NOTE,
        })
    }
}

/// Reads comparison rows from CSV. Stored highlight flags are ignored and
/// recomputed from the counts and times; `#` lines are skipped.
pub fn read_comparison_csv(text: &str, origin: &Path) -> Result<Vec<ComparisonRow>, HarnessError> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .flexible(true)
        .from_reader(text.as_bytes());
    let data_err = |e: csv::Error| HarnessError::Data {
        path: origin.to_path_buf(),
        message: e.to_string(),
    };
    let headers = reader.headers().map_err(data_err)?.clone();
    let expected = [
        "instance",
        "n",
        "m",
        "ga_count",
        "ga_time_s",
        "base_count",
        "base_time_s",
        "count_highlight",
        "time_highlight",
    ];
    if headers.iter().take(expected.len()).ne(expected) {
        return Err(HarnessError::Data {
            path: origin.to_path_buf(),
            message: format!("unexpected header `{}`", headers.iter().collect::<Vec<_>>().join(",")),
        });
    }
    reader
        .deserialize::<CsvRow>()
        .map(|row| {
            let row = row.map_err(data_err)?;
            Ok(ComparisonRow::new(
                row.instance,
                row.n,
                row.m,
                row.dataset,
                pair(row.ga_count, row.ga_time_s),
                pair(row.base_count, row.base_time_s),
            ))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Ga,
    Baseline,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub instance_path: PathBuf,
    /// Label used to group rows when computing success ratios.
    pub dataset: String,
    pub heuristic: HeuristicSpec,
    pub mode: Mode,
    /// Wall-clock budget in seconds.
    pub time_budget_s: Option<f64>,
    /// Generations (GA) or restarts (baseline); replaces the time budget
    /// for reproducible runs.
    pub count_budget: Option<u64>,
    /// Flips per heuristic run, inside GA fitness evaluation or per restart.
    pub flip_budget: u64,
    pub seed: u64,
    pub ga: GaParams,
    pub block_size: u64,
    pub output: Option<PathBuf>,
    pub format: ReportFormat,
}

impl ExperimentConfig {
    pub fn new(instance_path: impl Into<PathBuf>, heuristic: HeuristicSpec, mode: Mode, flip_budget: u64) -> Self {
        ExperimentConfig {
            instance_path: instance_path.into(),
            dataset: "default".into(),
            heuristic,
            mode,
            time_budget_s: None,
            count_budget: None,
            flip_budget,
            seed: 0,
            ga: GaParams::new(flip_budget),
            block_size: DEFAULT_BLOCK_SIZE,
            output: None,
            format: ReportFormat::Json,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let cfg = |m: &str| Err(HarnessError::Config(m.to_string()));
        match (self.time_budget_s, self.count_budget) {
            (Some(_), Some(_)) => return cfg("give either a time budget or a generation/run count, not both"),
            (None, None) => return cfg("a time budget or a generation/run count is required"),
            (Some(t), None) if !(t > 0.0 && t.is_finite()) => return cfg("time budget must be positive"),
            (None, Some(0)) => return cfg("generation/run count must be positive"),
            _ => {}
        }
        if self.mode == Mode::Baseline && self.flip_budget == 0 {
            return cfg("baseline restarts need a positive flip budget");
        }
        if self.block_size == 0 {
            return cfg("block size must be positive");
        }
        self.heuristic.validate()?;
        if self.mode == Mode::Ga {
            self.ga.validate()?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: Option<usize>,
    pub time_s: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub host: String,
    pub os: String,
    pub arch: String,
    pub threads: usize,
    pub started_unix_s: f64,
    pub wall_s: f64,
}

impl Provenance {
    fn capture(started_unix_s: f64, wall_s: f64) -> Self {
        let host = std::env::var("HOSTNAME")
            .ok()
            .or_else(|| fs::read_to_string("/etc/hostname").ok())
            .map(|h| h.trim().to_string())
            .filter(|h| !h.is_empty())
            .unwrap_or_else(|| "unknown".into());
        Provenance {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            host,
            os: std::env::consts::OS.into(),
            arch: std::env::consts::ARCH.into(),
            threads: rayon::current_num_threads(),
            started_unix_s,
            wall_s,
        }
    }
}

/// Persisted outcome of one experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub instance: String,
    pub dataset: String,
    pub n: usize,
    pub m: usize,
    pub mode: Mode,
    pub seed: u64,
    pub config: ExperimentConfig,
    pub summary: Summary,
    pub ga: Option<GaRecordJson>,
    pub baseline: Option<BaselineRecord>,
    pub provenance: Provenance,
}

impl ExperimentResult {
    pub fn outcome(&self) -> Option<Outcome> {
        pair(self.summary.count, self.summary.time_s)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serializes") + "\n"
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["instance", "n", "m", "mode", "heuristic", "seed", "count", "time_s"])
            .unwrap();
        let opt = |v: Option<String>| v.unwrap_or_default();
        w.write_record([
            self.instance.clone(),
            self.n.to_string(),
            self.m.to_string(),
            serde_json::to_value(self.mode).unwrap().as_str().unwrap().to_string(),
            self.config.heuristic.kind.name().to_string(),
            self.seed.to_string(),
            opt(self.summary.count.map(|c| c.to_string())),
            opt(self.summary.time_s.map(|t| t.to_string())),
        ])
        .unwrap();
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }

    pub fn read(path: &Path) -> Result<Self, HarnessError> {
        let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        serde_json::from_str(&text).map_err(|e| HarnessError::Data {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }
}

/// Removes wall-clock fields (`provenance` and every `*time_s` key) so
/// payloads of reproducible runs can be compared byte for byte.
pub fn strip_timing(value: &Value) -> Value {
    match value {
        Value::Object(map) => Value::Object(
            map.iter()
                .filter(|(k, _)| *k != "provenance" && !k.ends_with("time_s"))
                .map(|(k, v)| (k.clone(), strip_timing(v)))
                .collect(),
        ),
        Value::Array(items) => Value::Array(items.iter().map(strip_timing).collect()),
        other => other.clone(),
    }
}

fn instance_name(path: &Path) -> String {
    let name = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    name.strip_suffix(".cnf").map(str::to_string).unwrap_or(name)
}

/// Runs one configured experiment and writes its result file, if an output
/// path is set.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult, HarnessError> {
    config.validate()?;
    let inst = load_instance(&config.instance_path)?;
    let started_unix_s = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0);
    let wall = Instant::now();
    let mut rng = SolverRng::seed_from_u64(config.seed);
    let time = config.time_budget_s.map(Duration::from_secs_f64);

    let (summary, ga, baseline) = match config.mode {
        Mode::Ga => {
            let stop = match (time, config.count_budget) {
                (Some(t), _) => GaStop::Time(t),
                (None, Some(g)) => GaStop::Generations(g.min(u32::MAX as u64) as u32),
                (None, None) => unreachable!("validated"),
            };
            let params = GaParams {
                per_eval_flips: config.flip_budget,
                ..config.ga.clone()
            };
            let record = run_ga(&inst, &config.heuristic, &params, stop, &mut rng)?;
            let json = record.to_json();
            let summary = Summary {
                count: json.best_s,
                time_s: json.best_time_s,
            };
            (summary, Some(json), None)
        }
        Mode::Baseline => {
            let stop = match (time, config.count_budget) {
                (Some(t), _) => BaselineStop::Time(t),
                (None, Some(r)) => BaselineStop::Runs(r),
                (None, None) => unreachable!("validated"),
            };
            let keep_log = matches!(stop, BaselineStop::Runs(_));
            let record = run_baseline(
                &config.heuristic,
                &inst,
                stop,
                config.flip_budget,
                config.block_size,
                keep_log,
                &mut rng,
            )?;
            let summary = Summary {
                count: record.best_count,
                time_s: record.best_time_s,
            };
            (summary, None, Some(record))
        }
    };

    let result = ExperimentResult {
        instance: instance_name(&config.instance_path),
        dataset: config.dataset.clone(),
        n: inst.num_vars(),
        m: inst.num_clauses(),
        mode: config.mode,
        seed: config.seed,
        config: config.clone(),
        summary,
        ga,
        baseline,
        provenance: Provenance::capture(started_unix_s, wall.elapsed().as_secs_f64()),
    };
    if let Some(out) = &config.output {
        let body = match config.format {
            ReportFormat::Json => result.to_json_string(),
            ReportFormat::Csv => result.to_csv(),
        };
        fs::write(out, body).map_err(|e| io_err(out, e))?;
    }
    Ok(result)
}

/// Pairs GA and baseline results by instance name into a report.
pub fn emit_report(ga: &[ExperimentResult], base: &[ExperimentResult]) -> Result<Report, HarnessError> {
    let index = |results: &[ExperimentResult]| -> BTreeMap<String, ExperimentResult> {
        results.iter().map(|r| (r.instance.clone(), r.clone())).collect()
    };
    let (ga, base) = (index(ga), index(base));
    let ga_only: Vec<String> = ga.keys().filter(|k| !base.contains_key(*k)).cloned().collect();
    let base_only: Vec<String> = base.keys().filter(|k| !ga.contains_key(*k)).cloned().collect();
    if !ga_only.is_empty() || !base_only.is_empty() {
        return Err(HarnessError::MismatchedInstances { ga_only, base_only });
    }
    let rows = ga
        .values()
        .map(|g| {
            let b = &base[&g.instance];
            ComparisonRow::new(g.instance.clone(), g.n, g.m, g.dataset.clone(), g.outcome(), b.outcome())
        })
        .collect();
    Ok(Report::from_rows(rows))
}
