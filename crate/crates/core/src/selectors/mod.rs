//! Representative-selection algorithms.
//!
//! * [`one_shot_select`]: a single ordered scan that promotes any sample
//!   farther than delta from every current representative.
//! * [`delta_medoids`]: repeats the scan and moves each cluster to its
//!   delta-constrained medoid until the representative set is stable.
//! * [`merge_close_clusters`]: optional pairwise merge refinement.
//! * [`greedy_k_centers`]: farthest-first traversal until everything is
//!   within delta.
//! * [`k_medoids`] and [`min_k_for_delta`]: the clustering baseline and the
//!   outer search for the smallest k that meets delta.
//!
//! Every argmin/argmax breaks ties toward the lowest sample index, and all
//! threshold tests are exact `<=` on the stored `f64` values.

mod kcenters;
mod kmedoids;
mod medoids;
mod merge;
mod rep_assign;

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use kcenters::{greedy_k_centers, greedy_k_centers_from};
pub use kmedoids::{k_medoids, min_k_for_delta};
pub use medoids::{constrained_medoid, delta_medoids};
pub use merge::{merge_close_clusters, merge_clusters};
pub use rep_assign::{one_shot_select, rep_assign};

use crate::dataset::{canonical_order, SampleId};
use crate::error::{Error, Result};
use crate::numeric::exact_sum;
use crate::oracle::DistanceOracle;
use crate::solution::{Cluster, RepresentativeSolution};

pub const DEFAULT_MAX_ITERATIONS: usize = 1000;
pub const DEFAULT_RESTARTS: usize = 3;

#[derive(Clone, Debug, PartialEq)]
pub struct SelectorConfig {
    pub delta: f64,
    /// `None` scans in canonical order.
    pub scan_order: Option<Vec<SampleId>>,
    pub seed: u64,
    pub max_iterations: usize,
    pub merge_refine: bool,
    /// k-medoids runs per k in [`min_k_for_delta`].
    pub restarts: usize,
}

impl SelectorConfig {
    pub fn new(delta: f64) -> Self {
        SelectorConfig {
            delta,
            scan_order: None,
            seed: 0,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            merge_refine: false,
            restarts: DEFAULT_RESTARTS,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_scan_order(mut self, order: Vec<SampleId>) -> Self {
        self.scan_order = Some(order);
        self
    }

    pub fn with_merge_refine(mut self, on: bool) -> Self {
        self.merge_refine = on;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    /// Scan order for `n` samples, validated as a permutation.
    pub fn order(&self, n: usize) -> Result<Vec<SampleId>> {
        if !(self.delta >= 0.0) {
            return Err(Error::parameter(format!(
                "delta must be non-negative, got {}",
                self.delta
            )));
        }
        match &self.scan_order {
            None => Ok(canonical_order(n)),
            Some(order) => {
                let mut seen = vec![false; n];
                if order.len() != n {
                    return Err(Error::parameter(format!(
                        "scan order has {} entries for {n} samples",
                        order.len()
                    )));
                }
                for id in order {
                    if id.0 >= n || std::mem::replace(&mut seen[id.0], true) {
                        return Err(Error::parameter(format!(
                            "scan order is not a permutation (at {id})"
                        )));
                    }
                }
                Ok(order.clone())
            }
        }
    }
}

/// A seeded uniformly random permutation of `0..n`.
pub fn shuffled_order(n: usize, seed: u64) -> Vec<SampleId> {
    let mut order = canonical_order(n);
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    order
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    DeltaMedoids,
    OneShot,
    KCenters,
    #[serde(rename = "kmedoids-min-k")]
    KMedoidsMinK,
    #[serde(rename = "kmedoids")]
    KMedoids,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::DeltaMedoids,
        Algorithm::OneShot,
        Algorithm::KCenters,
        Algorithm::KMedoidsMinK,
        Algorithm::KMedoids,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::DeltaMedoids => "delta-medoids",
            Algorithm::OneShot => "one-shot",
            Algorithm::KCenters => "k-centers",
            Algorithm::KMedoidsMinK => "kmedoids-min-k",
            Algorithm::KMedoids => "kmedoids",
        }
    }

    /// Runs the algorithm. `k` is only read by plain k-medoids; `config.delta`
    /// is ignored by it.
    pub fn run(
        self,
        oracle: &DistanceOracle,
        config: &SelectorConfig,
        k: Option<usize>,
    ) -> Result<RepresentativeSolution> {
        match self {
            Algorithm::DeltaMedoids => delta_medoids(oracle, config),
            Algorithm::OneShot => one_shot_select(oracle, config),
            Algorithm::KCenters => greedy_k_centers(oracle, config),
            Algorithm::KMedoidsMinK => min_k_for_delta(oracle, config).map(|(_, s)| s),
            Algorithm::KMedoids => {
                let k = k.ok_or_else(|| Error::parameter("kmedoids requires k"))?;
                k_medoids(oracle, k, config.seed, config.max_iterations)
            }
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::parameter(format!("unknown algorithm '{s}'")))
    }
}

/// `sum_s d(s, rep(s))` over all clusters, independent of member order.
pub(crate) fn clusters_cost(clusters: &[Cluster], oracle: &DistanceOracle) -> Result<f64> {
    let mut values = Vec::new();
    for c in clusters {
        for &m in &c.members {
            values.push(oracle.distance(m, c.representative)?);
        }
    }
    Ok(exact_sum(values))
}

/// Among `candidates`, the one whose distance sum over `members` is smallest
/// while keeping every member within `delta`. `None` when no candidate is
/// feasible.
pub(crate) fn best_covering(
    candidates: &[SampleId],
    members: &[SampleId],
    oracle: &DistanceOracle,
    delta: f64,
) -> Result<Option<SampleId>> {
    let mut best: Option<(f64, SampleId)> = None;
    let mut dists = Vec::with_capacity(members.len());
    'candidates: for &s in candidates {
        dists.clear();
        for &x in members {
            let d = oracle.distance(x, s)?;
            if d > delta {
                continue 'candidates;
            }
            dists.push(d);
        }
        let sum = exact_sum(dists.iter().copied());
        best = match best {
            Some((bs, b)) if bs < sum || (bs == sum && b < s) => Some((bs, b)),
            _ => Some((sum, s)),
        };
    }
    Ok(best.map(|(_, s)| s))
}

/// Merges clusters that ended up with the same representative.
pub(crate) fn coalesce(clusters: Vec<Cluster>) -> Vec<Cluster> {
    let mut out: Vec<Cluster> = Vec::with_capacity(clusters.len());
    let mut slot = std::collections::HashMap::new();
    for c in clusters {
        match slot.get(&c.representative) {
            Some(&i) => {
                let target: &mut Cluster = &mut out[i];
                target.members.extend(c.members);
                target.members.sort_unstable();
            }
            None => {
                slot.insert(c.representative, out.len());
                out.push(c);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
            let json = serde_json::to_string(&a).unwrap();
            assert_eq!(json, format!("\"{}\"", a.name()));
        }
        assert!("spectral".parse::<Algorithm>().is_err());
    }

    #[test]
    fn scan_order_validation() {
        let c = SelectorConfig::new(1.0).with_scan_order(vec![SampleId(1), SampleId(1)]);
        assert!(c.order(2).is_err());
        let c = SelectorConfig::new(1.0).with_scan_order(vec![SampleId(1), SampleId(0)]);
        assert_eq!(c.order(2).unwrap(), vec![SampleId(1), SampleId(0)]);
        assert!(SelectorConfig::new(-1.0).order(0).is_err());
        assert!(SelectorConfig::new(f64::NAN).order(0).is_err());
    }

    #[test]
    fn shuffles_are_seeded_permutations() {
        let a = shuffled_order(50, 3);
        assert_eq!(a, shuffled_order(50, 3));
        assert_ne!(a, shuffled_order(50, 4));
        let mut sorted = a.clone();
        sorted.sort();
        assert_eq!(sorted, canonical_order(50));
    }
}
