//! Repeated subset benchmark over datasets, algorithms and thresholds.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{coverage_report, mean_and_stderr};
use crate::dataset::{Dataset, SampleId};
use crate::distances::DistanceKind;
use crate::error::{Error, Result};
use crate::numeric::{derive_seed, format_g17};
use crate::oracle::DistanceOracle;
use crate::selectors::{Algorithm, SelectorConfig, DEFAULT_RESTARTS};

pub const CSV_HEADER: [&str; 12] = [
    "dataset",
    "algorithm",
    "delta",
    "repetition",
    "seed",
    "subset_size",
    "rep_count",
    "rep_pct",
    "avg_dist",
    "max_dist",
    "dist_evals",
    "wall_ms",
];

pub struct BenchDataset {
    pub name: String,
    pub data: Dataset,
    pub distance: DistanceKind,
}

fn default_restarts() -> usize {
    DEFAULT_RESTARTS
}

/// What to run. Every (dataset, algorithm, delta, repetition) is one cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchSpec {
    pub algorithms: Vec<Algorithm>,
    pub deltas: Vec<f64>,
    pub repetitions: usize,
    /// Samples drawn per repetition; the whole dataset if it is smaller.
    pub subset_size: usize,
    pub seed: u64,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default)]
    pub merge_refine: bool,
    /// Record wall-clock time. Off by default so tables are reproducible.
    #[serde(default)]
    pub timing: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowMetrics {
    pub rep_count: usize,
    pub rep_pct: f64,
    pub avg_dist: f64,
    pub max_dist: f64,
    pub dist_evals: u64,
    pub wall_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub dataset: String,
    pub algorithm: Algorithm,
    pub delta: f64,
    pub repetition: usize,
    pub seed: u64,
    pub subset_size: usize,
    /// `None` when the algorithm failed outright.
    pub metrics: Option<RowMetrics>,
    /// Whether the run produced a legal delta-cover.
    pub legal: bool,
    pub error: Option<String>,
}

/// Mean and standard error of each metric across repetitions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchSummary {
    pub dataset: String,
    pub algorithm: Algorithm,
    pub delta: f64,
    pub subset_size: usize,
    /// Repetitions that produced a solution.
    pub completed: usize,
    pub rep_count: (f64, f64),
    pub rep_pct: (f64, f64),
    pub avg_dist: (f64, f64),
    pub max_dist: (f64, f64),
    pub dist_evals: (f64, f64),
    pub wall_ms: Option<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchTable {
    /// Ordered by dataset, algorithm, delta, repetition.
    pub rows: Vec<BenchRow>,
    /// One per (dataset, algorithm, delta), same order.
    pub summaries: Vec<BenchSummary>,
}

impl BenchTable {
    pub fn flagged(&self) -> impl Iterator<Item = &BenchRow> {
        self.rows.iter().filter(|r| !r.legal)
    }

    /// Rows of each cell followed by its summary row. Failed runs leave the
    /// metric columns empty; summary cells read `mean±stderr` and the
    /// repetition column reads `summary`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_HEADER).map_err(csv_error)?;
        let per_cell = self.rows.len() / self.summaries.len().max(1);
        for (cell, summary) in self.rows.chunks(per_cell.max(1)).zip(&self.summaries) {
            for row in cell {
                let mut rec = vec![
                    row.dataset.clone(),
                    row.algorithm.to_string(),
                    format_g17(row.delta),
                    row.repetition.to_string(),
                    row.seed.to_string(),
                    row.subset_size.to_string(),
                ];
                match &row.metrics {
                    Some(m) => rec.extend([
                        m.rep_count.to_string(),
                        format_g17(m.rep_pct),
                        format_g17(m.avg_dist),
                        format_g17(m.max_dist),
                        m.dist_evals.to_string(),
                        m.wall_ms.map(format_g17).unwrap_or_default(),
                    ]),
                    None => rec.extend(std::iter::repeat_n(String::new(), 6)),
                }
                w.write_record(&rec).map_err(csv_error)?;
            }
            let pm = |(m, se): (f64, f64)| format!("{}±{}", format_g17(m), format_g17(se));
            let s = summary;
            w.write_record([
                s.dataset.clone(),
                s.algorithm.to_string(),
                format_g17(s.delta),
                "summary".into(),
                String::new(),
                s.subset_size.to_string(),
                pm(s.rep_count),
                pm(s.rep_pct),
                pm(s.avg_dist),
                pm(s.max_dist),
                pm(s.dist_evals),
                s.wall_ms.map(pm).unwrap_or_default(),
            ])
            .map_err(csv_error)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::parameter(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::parameter(format!("csv: {e}"))
}

fn draw_subset(n: usize, size: usize, seed: u64) -> Vec<SampleId> {
    if size >= n {
        return (0..n).map(SampleId).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ids = rand::seq::index::sample(&mut rng, n, size).into_vec();
    ids.sort_unstable();
    ids.into_iter().map(SampleId).collect()
}

/// Runs every cell of `spec` over `datasets`.
///
/// Repetition `r` of dataset `d` draws one subset (without replacement,
/// seeded by `d` and `r`) shared by all algorithms and thresholds, so
/// algorithms are compared on identical samples. The same seed also drives
/// the algorithm's own randomness. `oracle_for` builds a fresh oracle per
/// cell so evaluation counts are per run. Cells run in parallel; the output
/// order does not depend on scheduling.
pub fn benchmark_run<F>(datasets: &[BenchDataset], oracle_for: F, spec: &BenchSpec) -> Result<BenchTable>
where
    F: Fn(&Dataset, DistanceKind) -> Result<DistanceOracle> + Sync,
{
    if spec.repetitions == 0 {
        return Err(Error::parameter("repetitions must be at least 1"));
    }
    if spec.subset_size == 0 {
        return Err(Error::parameter("subset size must be at least 1"));
    }
    if spec.algorithms.contains(&Algorithm::KMedoids) {
        return Err(Error::parameter(
            "plain kmedoids needs k; benchmark kmedoids-min-k instead",
        ));
    }
    if let Some(d) = spec.deltas.iter().find(|d| !(**d >= 0.0 && d.is_finite())) {
        return Err(Error::parameter(format!("invalid delta {d}")));
    }

    let subsets: Vec<Vec<(u64, Dataset)>> = datasets
        .iter()
        .enumerate()
        .map(|(di, ds)| {
            (0..spec.repetitions)
                .map(|r| {
                    let seed = derive_seed(spec.seed, di as u64, r as u64);
                    let ids = draw_subset(ds.data.len(), spec.subset_size, seed);
                    (seed, ds.data.subset(&ids))
                })
                .collect()
        })
        .collect();

    let mut cells = Vec::new();
    for di in 0..datasets.len() {
        for &alg in &spec.algorithms {
            for &delta in &spec.deltas {
                for r in 0..spec.repetitions {
                    cells.push((di, alg, delta, r));
                }
            }
        }
    }

    let rows: Vec<BenchRow> = cells
        .par_iter()
        .map(|&(di, algorithm, delta, r)| {
            let (seed, data) = &subsets[di][r];
            let ds = &datasets[di];
            let mut row = BenchRow {
                dataset: ds.name.clone(),
                algorithm,
                delta,
                repetition: r,
                seed: *seed,
                subset_size: data.len(),
                metrics: None,
                legal: false,
                error: None,
            };
            let oracle = oracle_for(data, ds.distance)?;
            let config = SelectorConfig::new(delta)
                .with_seed(*seed)
                .with_restarts(spec.restarts)
                .with_merge_refine(spec.merge_refine);
            let t0 = Instant::now();
            let outcome = algorithm.run(&oracle, &config, None);
            let elapsed = t0.elapsed();
            match outcome {
                Ok(solution) => {
                    let evals = oracle.eval_count();
                    let report = coverage_report(&solution, &oracle, delta)?;
                    let n = data.len();
                    row.legal = report.is_legal();
                    row.metrics = Some(RowMetrics {
                        rep_count: report.representative_count,
                        rep_pct: if n == 0 {
                            0.0
                        } else {
                            100.0 * report.representative_count as f64 / n as f64
                        },
                        avg_dist: report.average_distance,
                        max_dist: report.max_distance,
                        dist_evals: evals,
                        wall_ms: spec.timing.then_some(elapsed.as_secs_f64() * 1e3),
                    });
                }
                Err(e @ Error::NoCover { .. }) => row.error = Some(e.to_string()),
                Err(e) => return Err(e),
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;

    let summaries = rows
        .chunks(spec.repetitions)
        .map(|cell| summarize(cell, spec.timing))
        .collect();
    Ok(BenchTable { rows, summaries })
}

fn summarize(cell: &[BenchRow], timing: bool) -> BenchSummary {
    let done: Vec<&RowMetrics> = cell.iter().filter_map(|r| r.metrics.as_ref()).collect();
    let stat = |f: &dyn Fn(&RowMetrics) -> f64| {
        mean_and_stderr(&done.iter().map(|m| f(m)).collect::<Vec<_>>())
    };
    let first = &cell[0];
    BenchSummary {
        dataset: first.dataset.clone(),
        algorithm: first.algorithm,
        delta: first.delta,
        subset_size: first.subset_size,
        completed: done.len(),
        rep_count: stat(&|m| m.rep_count as f64),
        rep_pct: stat(&|m| m.rep_pct),
        avg_dist: stat(&|m| m.avg_dist),
        max_dist: stat(&|m| m.max_dist),
        dist_evals: stat(&|m| m.dist_evals as f64),
        wall_ms: timing.then(|| stat(&|m| m.wall_ms.unwrap_or(0.0))),
    }
}
