//! Command-line front end.
//!
//! | exit code | meaning |
//! |-----------|---------|
//! | 0 | success |
//! | 1 | `eval` found coverage violations |
//! | 2 | usage, parse, configuration or sample-id error |
//! | 3 | the distance broke its contract (negative or NaN) |
//! | 4 | no legal cover exists, or the selector could not reach one |
//!
//! Every file-producing command records a [`RunManifest`]: embedded in
//! solution JSON, or in a `<output>.manifest.json` sidecar next to CSV
//! output. `repsel replay` re-runs a manifest and reproduces the output
//! byte for byte. Wall-clock time is only recorded with `--timing`.

pub mod config;
pub mod io;
pub mod svg;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

pub use config::{BenchConfig, BenchDatasetConfig, GenSpec};
pub use io::{format_dataset, read_dataset, write_atomic};

use crate::dataset::{Dataset, SampleId};
use crate::distances::{build_oracle, DistanceKind, DistanceModels};
use crate::error::{Error, Result};
use crate::eval::{benchmark_run, coverage_report, stability_experiment, BenchDataset};
use crate::numeric::format_g17;
use crate::oracle::{CachePolicy, DistanceOracle};
use crate::selectors::{
    shuffled_order, Algorithm, SelectorConfig, DEFAULT_MAX_ITERATIONS, DEFAULT_RESTARTS,
};
use crate::solution::{IterationRecord, RepresentativeSolution, SolveStats};

pub const THREADS_ENV: &str = "REPSEL_THREADS";

#[derive(Parser, Debug)]
#[command(name = "repsel", version, about = "Representative selection over arbitrary dissimilarities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Select representatives and write a solution JSON.
    Select(SelectArgs),
    /// Check a solution against delta; prints a coverage report.
    Eval(EvalArgs),
    /// Repeat a selector under reshuffled inputs and report set overlap.
    Stability(StabilityArgs),
    /// Run a benchmark described by a TOML config.
    Bench(BenchArgs),
    /// Generate a synthetic dataset.
    Gen(GenArgs),
    /// Print one distance d(from, to).
    Dist(DistArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectArgs {
    /// Dataset file, in the format implied by --distance.
    pub input: PathBuf,
    #[arg(long)]
    pub distance: DistanceKind,
    #[arg(long)]
    pub algorithm: Algorithm,
    /// Required by every algorithm except plain kmedoids.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Cluster count for plain kmedoids.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Scan the input in a seeded random order instead of file order.
    #[arg(long)]
    pub shuffle: bool,
    #[arg(long)]
    pub merge_refine: bool,
    /// k-medoids runs per k for kmedoids-min-k.
    #[arg(long, default_value_t = DEFAULT_RESTARTS)]
    pub restarts: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_ITERATIONS)]
    pub max_iterations: usize,
    /// TOML file overriding distance-model parameters.
    #[arg(long)]
    pub model_config: Option<PathBuf>,
    /// Record wall-clock time (makes output differ between runs).
    #[arg(long)]
    pub timing: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct EvalArgs {
    pub input: PathBuf,
    pub solution: PathBuf,
    /// Defaults to the solution's delta.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Defaults to the distance recorded in the solution's manifest.
    #[arg(long)]
    pub distance: Option<DistanceKind>,
    /// Defaults to the model parameters recorded in the manifest.
    #[arg(long)]
    pub model_config: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub distance: DistanceKind,
    #[arg(long)]
    pub algorithm: Algorithm,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 10)]
    pub shuffles: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = crate::eval::stability::DEFAULT_BIN_WIDTH)]
    pub bin_width: f64,
    #[arg(long, default_value_t = DEFAULT_RESTARTS)]
    pub restarts: usize,
    #[arg(long)]
    pub merge_refine: bool,
    #[arg(long)]
    pub model_config: Option<PathBuf>,
    /// Also write the overlap histogram as CSV.
    #[arg(long)]
    pub histogram: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct BenchArgs {
    pub config: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Also draw mean representative counts as an SVG chart.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Gaussian,
    Line,
    Grid,
    Matrix,
    Music,
    Trajectories,
}

#[derive(Args, Debug, Clone)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: GenKind,
    /// Sample count (for gaussian: total, split evenly across modes).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub dims: usize,
    /// Mixture modes, music motifs or trajectory patterns.
    #[arg(long, default_value_t = 3)]
    pub modes: usize,
    #[arg(long)]
    pub samples_per_mode: Option<usize>,
    #[arg(long, default_value_t = -10.0, allow_negative_numbers = true)]
    pub mean_min: f64,
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    pub mean_max: f64,
    #[arg(long, default_value_t = 0.5)]
    pub var_min: f64,
    #[arg(long, default_value_t = 2.0)]
    pub var_max: f64,
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long)]
    pub cols: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    pub step: f64,
    /// Notes per music segment or points per trajectory.
    #[arg(long, default_value_t = 8)]
    pub len: usize,
    /// Largest off-diagonal matrix entry.
    #[arg(long, default_value_t = 10.0)]
    pub max: f64,
    /// Largest self-distance of a generated matrix.
    #[arg(long, default_value_t = 0.0)]
    pub self_max: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct DistArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub distance: DistanceKind,
    #[arg(long)]
    pub from: usize,
    #[arg(long)]
    pub to: usize,
    #[arg(long)]
    pub model_config: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct ReplayArgs {
    /// A solution JSON or a `.manifest.json` sidecar.
    pub manifest: PathBuf,
    /// Write here instead of the recorded output path. The embedded
    /// manifest is kept as recorded.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRun {
    pub config: BenchConfig,
    pub out: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub svg: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenRun {
    pub spec: GenSpec,
    pub out: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Invocation {
    Select(SelectArgs),
    Stability(StabilityArgs),
    Bench(BenchRun),
    Gen(GenRun),
}

/// Everything needed to reproduce an output file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub run: Invocation,
    /// Resolved distance-model parameters (after any --model-config).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub models: Option<DistanceModels>,
}

impl RunManifest {
    pub fn new(run: Invocation, models: Option<DistanceModels>) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            run,
            models,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionStats {
    pub iterations: usize,
    pub distance_evals: u64,
    /// Only present when the run was timed.
    pub wall_ms: Option<f64>,
    pub converged: bool,
}

/// The JSON document written by `select`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub delta: Option<f64>,
    pub algorithm: Algorithm,
    pub representatives: Vec<SampleId>,
    /// `{"sample id": representative id}` for every sample.
    #[serde(with = "assignment_map")]
    pub assignment: Vec<SampleId>,
    pub stats: SolutionStats,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<IterationRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<RunManifest>,
}

impl SolutionFile {
    pub fn new(
        solution: &RepresentativeSolution,
        algorithm: Algorithm,
        timing: bool,
        manifest: RunManifest,
    ) -> Self {
        SolutionFile {
            delta: solution.delta,
            algorithm,
            representatives: solution.representatives.clone(),
            assignment: solution.assignment.clone(),
            stats: SolutionStats {
                iterations: solution.stats.iterations,
                distance_evals: solution.stats.distance_evaluations,
                wall_ms: timing.then_some(solution.stats.wall_time.as_secs_f64() * 1e3),
                converged: solution.stats.converged,
            },
            trace: solution.trace.clone(),
            manifest: Some(manifest),
        }
    }

    /// The solution as the library type; distances are looked up in `oracle`.
    pub fn to_solution(&self, oracle: &DistanceOracle) -> Result<RepresentativeSolution> {
        let assigned_distance = self
            .assignment
            .iter()
            .enumerate()
            .map(|(s, &r)| oracle.distance(SampleId(s), r))
            .collect::<Result<_>>()?;
        Ok(RepresentativeSolution {
            delta: self.delta,
            representatives: self.representatives.clone(),
            assignment: self.assignment.clone(),
            assigned_distance,
            stats: SolveStats {
                iterations: self.stats.iterations,
                distance_evaluations: self.stats.distance_evals,
                ..SolveStats::default()
            },
            trace: self.trace.clone(),
        })
    }
}

mod assignment_map {
    use std::collections::BTreeMap;

    use serde::de::Error as _;
    use serde::ser::SerializeMap;
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::dataset::SampleId;

    pub fn serialize<S: Serializer>(assignment: &[SampleId], s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(assignment.len()))?;
        for (i, rep) in assignment.iter().enumerate() {
            map.serialize_entry(&i, rep)?;
        }
        map.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<SampleId>, D::Error> {
        let map = BTreeMap::<usize, SampleId>::deserialize(d)?;
        if let Some((pos, (&key, _))) = map.iter().enumerate().find(|(pos, (key, _))| pos != *key) {
            return Err(D::Error::custom(format!(
                "assignment must list samples 0..{} exactly once; sample {pos} is missing (next key {key})",
                map.len()
            )));
        }
        Ok(map.into_values().collect())
    }
}

/// Error to exit-code mapping; see the module docs.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ContractViolation { .. } => 3,
        Error::NoCover { .. } | Error::Uncovered { .. } => 4,
        _ => 2,
    }
}

fn configure_threads() -> Result<()> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => v.trim().parse::<usize>().map_err(|_| {
            Error::parameter(format!("{THREADS_ENV} must be a non-negative integer, got '{v}'"))
        })?,
        Err(_) => 0,
    };
    // fails only when a pool already exists (repeated in-process runs)
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code. Diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match configure_threads().and_then(|()| execute(cli.command)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("repsel: {e}");
            exit_code(&e)
        }
    }
}

pub fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Select(args) => {
            let models = load_models(args.model_config.as_deref())?;
            let manifest = RunManifest::new(Invocation::Select(args.clone()), Some(models));
            cmd_select(&args, &models, &manifest, &args.out)
        }
        Command::Eval(args) => cmd_eval(&args),
        Command::Stability(args) => {
            let models = load_models(args.model_config.as_deref())?;
            let manifest = RunManifest::new(Invocation::Stability(args.clone()), Some(models));
            cmd_stability(&args, &models, &manifest, &args.out)
        }
        Command::Bench(args) => {
            let run = BenchRun {
                config: BenchConfig::load(&args.config)?,
                out: args.out,
                svg: args.svg,
            };
            let manifest = RunManifest::new(Invocation::Bench(run.clone()), Some(run.config.models));
            cmd_bench(&run, &manifest, &run.out)
        }
        Command::Gen(args) => {
            let run = GenRun {
                spec: gen_spec(&args)?,
                out: args.out,
            };
            let manifest = RunManifest::new(Invocation::Gen(run.clone()), None);
            cmd_gen(&run, &manifest, &run.out)
        }
        Command::Dist(args) => cmd_dist(&args),
        Command::Replay(args) => cmd_replay(&args),
    }
}

fn load_models(path: Option<&Path>) -> Result<DistanceModels> {
    path.map_or_else(|| Ok(DistanceModels::default()), DistanceModels::load)
}

fn load_oracle(input: &Path, kind: DistanceKind, models: &DistanceModels) -> Result<(Dataset, DistanceOracle)> {
    let data = read_dataset(input, kind)?;
    let oracle = build_oracle(&data, kind, models, CachePolicy::Unbounded)?;
    Ok((data, oracle))
}

fn required_delta(algorithm: Algorithm, delta: Option<f64>) -> Result<f64> {
    match (algorithm, delta) {
        (_, Some(d)) => Ok(d),
        (Algorithm::KMedoids, None) => Ok(0.0),
        (a, None) => Err(Error::parameter(format!("--delta is required for {a}"))),
    }
}

fn sidecar(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(OsString::from).unwrap_or_default();
    name.push(".manifest.json");
    out.with_file_name(name)
}

fn manifest_json(manifest: &RunManifest) -> Result<String> {
    serde_json::to_string_pretty(manifest)
        .map(|s| s + "\n")
        .map_err(io::json_error)
}

fn cmd_select(args: &SelectArgs, models: &DistanceModels, manifest: &RunManifest, out: &Path) -> Result<i32> {
    let delta = required_delta(args.algorithm, args.delta)?;
    if args.algorithm == Algorithm::KMedoids && args.k.is_none() {
        return Err(Error::parameter("--k is required for kmedoids"));
    }
    let (data, oracle) = load_oracle(&args.input, args.distance, models)?;
    let mut config = SelectorConfig::new(delta)
        .with_seed(args.seed)
        .with_merge_refine(args.merge_refine)
        .with_restarts(args.restarts)
        .with_max_iterations(args.max_iterations);
    if args.shuffle {
        config = config.with_scan_order(shuffled_order(data.len(), args.seed));
    }
    let mut solution = args.algorithm.run(&oracle, &config, args.k)?;
    if args.algorithm == Algorithm::KMedoids {
        solution.delta = args.delta;
    }
    if let Some(delta) = solution.delta {
        if let Some(v) = coverage_report(&solution, &oracle, delta)?.violations.first() {
            return Err(Error::Uncovered {
                delta,
                sample: v.sample,
                distance: v.distance,
            });
        }
    }
    if args.algorithm == Algorithm::DeltaMedoids && !solution.stats.converged {
        eprintln!(
            "repsel: warning: stopped at the {}-iteration cap before converging",
            args.max_iterations
        );
    }
    let file = SolutionFile::new(&solution, args.algorithm, args.timing, manifest.clone());
    let text = serde_json::to_string_pretty(&file).map_err(io::json_error)? + "\n";
    write_atomic(&[(out, text.as_bytes())])?;
    Ok(0)
}

fn cmd_eval(args: &EvalArgs) -> Result<i32> {
    let text = std::fs::read_to_string(&args.solution)?;
    let file: SolutionFile = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: args.solution.display().to_string(),
        line: e.line() as u64,
        message: e.to_string(),
    })?;
    let recorded = file.manifest.as_ref().and_then(|m| match &m.run {
        Invocation::Select(s) => Some(s.distance),
        _ => None,
    });
    let distance = args.distance.or(recorded).ok_or_else(|| {
        Error::parameter("--distance is required when the solution has no manifest")
    })?;
    let models = match (&args.model_config, file.manifest.as_ref().and_then(|m| m.models)) {
        (Some(path), _) => DistanceModels::load(path)?,
        (None, Some(m)) => m,
        (None, None) => DistanceModels::default(),
    };
    let delta = args
        .delta
        .or(file.delta)
        .ok_or_else(|| Error::parameter("--delta is required for solutions without one"))?;
    let (_, oracle) = load_oracle(&args.input, distance, &models)?;
    if let Some(bad) = file.assignment.iter().find(|r| r.0 >= oracle.len()) {
        return Err(Error::InvalidId {
            id: bad.0,
            size: oracle.len(),
        });
    }
    if file.assignment.len() != oracle.len() {
        return Err(Error::parameter(format!(
            "solution assigns {} samples but {} has {}",
            file.assignment.len(),
            args.input.display(),
            oracle.len()
        )));
    }
    let report = coverage_report(&file.to_solution(&oracle)?, &oracle, delta)?;
    println!("{}", serde_json::to_string_pretty(&report).map_err(io::json_error)?);
    Ok(if report.is_legal() { 0 } else { 1 })
}

fn cmd_stability(args: &StabilityArgs, models: &DistanceModels, manifest: &RunManifest, out: &Path) -> Result<i32> {
    let delta = required_delta(args.algorithm, args.delta)?;
    let (_, oracle) = load_oracle(&args.input, args.distance, models)?;
    let config = SelectorConfig::new(delta)
        .with_restarts(args.restarts)
        .with_merge_refine(args.merge_refine);
    let report = stability_experiment(
        &oracle,
        args.algorithm,
        &config,
        args.k,
        args.shuffles,
        args.seed,
        args.bin_width,
    )?;
    let mut csv = String::from("run_a,run_b,overlap\n");
    for p in &report.pairs {
        csv.push_str(&format!("{},{},{}\n", p.first, p.second, format_g17(p.overlap)));
    }
    csv.push_str(&format!("mean,,{}\n", format_g17(report.mean_overlap)));
    let manifest_text = manifest_json(manifest)?;
    let side = sidecar(out);
    let mut files: Vec<(&Path, &[u8])> = vec![(out, csv.as_bytes()), (&side, manifest_text.as_bytes())];
    let hist_text: String;
    if let Some(h) = &args.histogram {
        hist_text = std::iter::once("lower,upper,count\n".to_string())
            .chain(report.histogram.iter().map(|b| {
                format!("{},{},{}\n", format_g17(b.lower), format_g17(b.upper), b.count)
            }))
            .collect();
        files.push((h, hist_text.as_bytes()));
    }
    write_atomic(&files)?;
    Ok(0)
}

fn cmd_bench(run: &BenchRun, manifest: &RunManifest, out: &Path) -> Result<i32> {
    let config = &run.config;
    let datasets = config
        .datasets
        .iter()
        .map(|d| {
            let data = match (&d.path, &d.generate) {
                (Some(path), _) => read_dataset(path, d.distance)?,
                (None, Some(spec)) => spec.generate()?,
                (None, None) => {
                    return Err(Error::parameter(format!("dataset '{}' has no source", d.name)))
                }
            };
            Ok(BenchDataset {
                name: d.name.clone(),
                data,
                distance: d.distance,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let models = config.models;
    let table = benchmark_run(
        &datasets,
        |data, kind| build_oracle(data, kind, &models, CachePolicy::Unbounded),
        &config.spec(),
    )?;
    for row in table.flagged() {
        eprintln!(
            "repsel: warning: {} / {} / delta {} / repetition {}: {}",
            row.dataset,
            row.algorithm,
            format_g17(row.delta),
            row.repetition,
            row.error.as_deref().unwrap_or("illegal cover")
        );
    }
    let csv = table.to_csv()?;
    let manifest_text = manifest_json(manifest)?;
    let side = sidecar(out);
    let mut files: Vec<(&Path, &[u8])> = vec![(out, csv.as_bytes()), (&side, manifest_text.as_bytes())];
    let svg_text: String;
    if let Some(path) = &run.svg {
        svg_text = svg::bench_svg(&table);
        files.push((path, svg_text.as_bytes()));
    }
    write_atomic(&files)?;
    Ok(0)
}

fn gen_spec(args: &GenArgs) -> Result<GenSpec> {
    let need = |v: Option<usize>, flag: &str| {
        v.ok_or_else(|| Error::parameter(format!("--{flag} is required for this kind")))
    };
    Ok(match args.kind {
        GenKind::Gaussian => {
            let samples_per_mode = match (args.samples_per_mode, args.n) {
                (Some(s), _) => s,
                (None, Some(n)) if args.modes > 0 && n % args.modes == 0 => n / args.modes,
                (None, Some(n)) => {
                    return Err(Error::parameter(format!(
                        "--n {n} does not split evenly into {} modes",
                        args.modes
                    )))
                }
                (None, None) => 100,
            };
            GenSpec::Gaussian {
                dims: args.dims,
                modes: args.modes,
                samples_per_mode,
                mean_range: (args.mean_min, args.mean_max),
                var_range: (args.var_min, args.var_max),
                seed: args.seed,
            }
        }
        GenKind::Line => GenSpec::Line {
            n: need(args.n, "n")?,
            step: args.step,
        },
        GenKind::Grid => GenSpec::Grid {
            rows: need(args.rows, "rows")?,
            cols: need(args.cols, "cols")?,
            step: args.step,
        },
        GenKind::Matrix => GenSpec::Matrix {
            n: need(args.n, "n")?,
            max: args.max,
            self_max: args.self_max,
            seed: args.seed,
        },
        GenKind::Music => GenSpec::Music {
            n: need(args.n, "n")?,
            motifs: args.modes,
            len: args.len,
            seed: args.seed,
        },
        GenKind::Trajectories => GenSpec::Trajectories {
            n: need(args.n, "n")?,
            patterns: args.modes,
            len: args.len,
            seed: args.seed,
        },
    })
}

fn cmd_gen(run: &GenRun, manifest: &RunManifest, out: &Path) -> Result<i32> {
    let text = format_dataset(&run.spec.generate()?)?;
    let manifest_text = manifest_json(manifest)?;
    let side = sidecar(out);
    write_atomic(&[(out, text.as_bytes()), (&side, manifest_text.as_bytes())])?;
    Ok(0)
}

fn cmd_dist(args: &DistArgs) -> Result<i32> {
    let models = load_models(args.model_config.as_deref())?;
    let (_, oracle) = load_oracle(&args.input, args.distance, &models)?;
    let d = oracle.distance(SampleId(args.from), SampleId(args.to))?;
    println!("{}", format_g17(d));
    Ok(0)
}

fn cmd_replay(args: &ReplayArgs) -> Result<i32> {
    let text = std::fs::read_to_string(&args.manifest)?;
    let parse_err = |e: serde_json::Error| Error::Parse {
        path: args.manifest.display().to_string(),
        line: e.line() as u64,
        message: e.to_string(),
    };
    let value: serde_json::Value = serde_json::from_str(&text).map_err(parse_err)?;
    let manifest: RunManifest = match value.get("manifest") {
        Some(m) => serde_json::from_value(m.clone()),
        None => serde_json::from_value(value),
    }
    .map_err(parse_err)?;
    if manifest.version != env!("CARGO_PKG_VERSION") {
        eprintln!(
            "repsel: warning: manifest written by version {}, replaying with {}",
            manifest.version,
            env!("CARGO_PKG_VERSION")
        );
    }
    let models = manifest.models.unwrap_or_default();
    match &manifest.run {
        Invocation::Select(a) => cmd_select(a, &models, &manifest, args.out.as_deref().unwrap_or(&a.out)),
        Invocation::Stability(a) => {
            let mut a = a.clone();
            if args.out.is_some() {
                // the histogram path would otherwise be overwritten in place
                a.histogram = None;
            }
            cmd_stability(&a, &models, &manifest, args.out.as_deref().unwrap_or(&a.out))
        }
        Invocation::Bench(r) => {
            let mut r = r.clone();
            if args.out.is_some() {
                r.svg = None;
            }
            cmd_bench(&r, &manifest, args.out.as_deref().unwrap_or(&r.out))
        }
        Invocation::Gen(r) => cmd_gen(r, &manifest, args.out.as_deref().unwrap_or(&r.out)),
    }
}
