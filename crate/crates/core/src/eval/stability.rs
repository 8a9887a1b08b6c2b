use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::overlap;
use crate::dataset::SampleId;
use crate::error::{Error, Result};
use crate::numeric::{derive_seed, exact_sum};
use crate::oracle::DistanceOracle;
use crate::selectors::{shuffled_order, Algorithm, SelectorConfig};

pub const DEFAULT_BIN_WIDTH: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairOverlap {
    pub first: usize,
    pub second: usize,
    pub overlap: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub lower: f64,
    pub upper: f64,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub algorithm: Algorithm,
    pub delta: f64,
    pub shuffles: usize,
    pub seed: u64,
    /// Representative set of each run, in run order.
    pub runs: Vec<BTreeSet<SampleId>>,
    /// One entry per unordered pair of runs, `first < second`.
    pub pairs: Vec<PairOverlap>,
    pub mean_overlap: f64,
    pub histogram: Vec<HistogramBin>,
}

/// Counts `values` (all in `[0, 1]`) into bins of `bin_width`; the last bin
/// is closed on the right.
pub fn overlap_histogram(values: &[f64], bin_width: f64) -> Result<Vec<HistogramBin>> {
    if !(bin_width > 0.0 && bin_width <= 1.0) {
        return Err(Error::parameter(format!(
            "bin width must lie in (0, 1], got {bin_width}"
        )));
    }
    let bins = (1.0 / bin_width).ceil() as usize;
    let mut hist: Vec<HistogramBin> = (0..bins)
        .map(|i| HistogramBin {
            lower: i as f64 * bin_width,
            upper: ((i + 1) as f64 * bin_width).min(1.0),
            count: 0,
        })
        .collect();
    for &v in values {
        let i = ((v / bin_width).floor() as usize).min(bins - 1);
        hist[i].count += 1;
    }
    Ok(hist)
}

/// Runs `algorithm` `shuffles` times and measures how much the
/// representative sets agree.
///
/// The scan-based selectors (delta-medoids, one-shot) see a fresh seeded
/// permutation of the input each run. k-centers and the k-medoids variants
/// keep the canonical order and instead vary the seed of their random
/// start. `config.scan_order` and `config.seed` are overridden per run.
pub fn stability_experiment(
    oracle: &DistanceOracle,
    algorithm: Algorithm,
    config: &SelectorConfig,
    k: Option<usize>,
    shuffles: usize,
    seed: u64,
    bin_width: f64,
) -> Result<StabilityReport> {
    if shuffles < 2 {
        return Err(Error::parameter(format!(
            "stability needs at least 2 shuffles, got {shuffles}"
        )));
    }
    let n = oracle.len();
    let runs: Vec<BTreeSet<SampleId>> = (0..shuffles)
        .into_par_iter()
        .map(|i| {
            let run_seed = derive_seed(seed, i as u64, 0);
            let mut cfg = config.clone();
            match algorithm {
                Algorithm::DeltaMedoids | Algorithm::OneShot => {
                    cfg.scan_order = Some(shuffled_order(n, run_seed));
                }
                Algorithm::KCenters | Algorithm::KMedoidsMinK | Algorithm::KMedoids => {
                    cfg.scan_order = None;
                    cfg.seed = run_seed;
                }
            }
            algorithm
                .run(oracle, &cfg, k)
                .map(|s| s.representative_set())
        })
        .collect::<Result<_>>()?;

    let mut pairs = Vec::with_capacity(shuffles * (shuffles - 1) / 2);
    for i in 0..shuffles {
        for j in i + 1..shuffles {
            pairs.push(PairOverlap {
                first: i,
                second: j,
                overlap: overlap(&runs[i], &runs[j]),
            });
        }
    }
    let values: Vec<f64> = pairs.iter().map(|p| p.overlap).collect();
    Ok(StabilityReport {
        algorithm,
        delta: config.delta,
        shuffles,
        seed,
        runs,
        mean_overlap: exact_sum(values.iter().copied()) / values.len() as f64,
        histogram: overlap_histogram(&values, bin_width)?,
        pairs,
    })
}
