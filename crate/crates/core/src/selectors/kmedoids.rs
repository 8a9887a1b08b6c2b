use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dataset::SampleId;
use crate::error::{Error, Result};
use crate::numeric::{derive_seed, exact_sum};
use crate::oracle::{nearest_representative, DistanceOracle};
use crate::solution::{RepresentativeSolution, SolveStats};

use super::SelectorConfig;

/// Alternating k-medoids from `k` seed-chosen distinct initial medoids.
///
/// Each round assigns every sample to its nearest medoid and then moves each
/// medoid to the member of its cluster minimizing `sum_x d(x, s)`. A medoid
/// whose cluster is empty stays put. Stops when the medoid set repeats or
/// after `max_iterations` rounds. With `k == n` every sample stays a medoid.
/// The result carries no delta.
pub fn k_medoids(
    oracle: &DistanceOracle,
    k: usize,
    seed: u64,
    max_iterations: usize,
) -> Result<RepresentativeSolution> {
    let n = oracle.len();
    if k == 0 || k > n {
        return Err(Error::parameter(format!(
            "k must lie in 1..={n}, got {k}"
        )));
    }
    let start = Instant::now();
    let evals = oracle.eval_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut medoids: Vec<SampleId> = rand::seq::index::sample(&mut rng, n, k)
        .into_iter()
        .map(SampleId)
        .collect();
    medoids.sort_unstable();

    let mut iterations = 0;
    let mut converged = k == n;
    let mut assigned = assign(oracle, &medoids)?;
    while !converged && iterations < max_iterations.max(1) {
        iterations += 1;
        let mut members: Vec<Vec<SampleId>> = vec![Vec::new(); medoids.len()];
        for (s, &(slot, _)) in assigned.iter().enumerate() {
            members[slot].push(SampleId(s));
        }
        let mut next = medoids
            .par_iter()
            .zip(members.par_iter())
            .map(|(&m, cluster)| {
                if cluster.is_empty() {
                    Ok(m)
                } else {
                    medoid(cluster, oracle)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        next.sort_unstable();
        next.dedup();
        if next == medoids {
            converged = true;
            break;
        }
        medoids = next;
        assigned = assign(oracle, &medoids)?;
    }

    Ok(RepresentativeSolution {
        delta: None,
        assignment: assigned.iter().map(|&(slot, _)| medoids[slot]).collect(),
        assigned_distance: assigned.iter().map(|&(_, d)| d).collect(),
        representatives: medoids,
        stats: SolveStats {
            iterations,
            distance_evaluations: oracle.eval_count() - evals,
            wall_time: start.elapsed(),
            converged,
        },
        trace: Vec::new(),
    })
}

/// Nearest medoid (as a slot into `medoids`) and its distance, per sample.
fn assign(oracle: &DistanceOracle, medoids: &[SampleId]) -> Result<Vec<(usize, f64)>> {
    (0..oracle.len())
        .into_par_iter()
        .map(|s| {
            let (m, d) = nearest_representative(SampleId(s), medoids, oracle)?;
            Ok((medoids.binary_search(&m).expect("nearest is a medoid"), d))
        })
        .collect()
}

/// Unconstrained medoid: `argmin_s sum_x d(x, s)` over the cluster.
fn medoid(cluster: &[SampleId], oracle: &DistanceOracle) -> Result<SampleId> {
    let mut best: Option<(f64, SampleId)> = None;
    for &s in cluster {
        let sum = exact_sum(
            cluster
                .iter()
                .map(|&x| oracle.distance(x, s))
                .collect::<Result<Vec<_>>>()?,
        );
        if best.is_none_or(|(b, _)| sum < b) {
            best = Some((sum, s));
        }
    }
    Ok(best.expect("non-empty cluster").1)
}

/// Smallest k for which one of `config.restarts` seeded k-medoids runs keeps
/// every sample within `config.delta` of its medoid.
///
/// Tries k = 1, 2, ... in order. Restart `r` at a given k is seeded from
/// `config.seed`, k and r. Fails with [`Error::NoCover`] when even k = n does
/// not meet delta.
pub fn min_k_for_delta(
    oracle: &DistanceOracle,
    config: &SelectorConfig,
) -> Result<(usize, RepresentativeSolution)> {
    if config.restarts == 0 {
        return Err(Error::parameter("restarts must be at least 1"));
    }
    let start = Instant::now();
    let evals = oracle.eval_count();
    let n = oracle.len();
    if n == 0 {
        return Ok((0, RepresentativeSolution::empty(Some(config.delta))));
    }
    let mut worst = SampleId(0);
    for k in 1..=n {
        for r in 0..config.restarts {
            let seed = derive_seed(config.seed, k as u64, r as u64);
            let mut sol = k_medoids(oracle, k, seed, config.max_iterations)?;
            let max = sol.max_distance();
            if max <= config.delta {
                sol.delta = Some(config.delta);
                sol.stats.distance_evaluations = oracle.eval_count() - evals;
                sol.stats.wall_time = start.elapsed();
                return Ok((k, sol));
            }
            worst = SampleId(
                sol.assigned_distance
                    .iter()
                    .position(|&d| d == max)
                    .unwrap_or(0),
            );
            // with every sample a medoid the seed no longer matters
            if k == n {
                break;
            }
        }
    }
    Err(Error::NoCover {
        delta: config.delta,
        sample: worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::DistanceMatrix;

    fn line(points: &[f64]) -> DistanceOracle {
        let p = points.to_vec();
        DistanceOracle::from_fn(p.len(), move |a, b| (p[a.0] - p[b.0]).abs())
    }

    fn ids(v: &[usize]) -> Vec<SampleId> {
        v.iter().map(|&i| SampleId(i)).collect()
    }

    #[test]
    fn single_medoid_is_the_center() {
        let o = line(&[0.0, 1.0, 2.0]);
        for seed in 0..5 {
            let s = k_medoids(&o, 1, seed, 100).unwrap();
            assert_eq!(s.representatives, ids(&[1]));
            assert!(s.delta.is_none());
        }
    }

    #[test]
    fn k_equal_n_is_identity() {
        let o = line(&[0.0, 3.0, 4.0, 9.0]);
        let s = k_medoids(&o, 4, 1, 100).unwrap();
        assert_eq!(s.representatives, ids(&[0, 1, 2, 3]));
        assert_eq!(s.average_distance(), 0.0);
    }

    #[test]
    fn k_equal_n_keeps_every_sample_with_positive_self_distance() {
        // 1 is nearer to 0 than to itself, so a medoid update would drop it
        let m = DistanceMatrix::from_rows(vec![
            vec![0.2, 0.9, 0.0],
            vec![0.0, 0.3, 0.5],
            vec![0.8, 0.1, 0.3],
        ])
        .unwrap();
        let o = DistanceOracle::from_matrix(m);
        let s = k_medoids(&o, 3, 0, 100).unwrap();
        assert_eq!(s.representatives, ids(&[0, 1, 2]));
        assert_eq!(s.assignment, ids(&[2, 0, 1]));
        assert!(s.stats.converged);
        let (k, s) = min_k_for_delta(&o, &SelectorConfig::new(0.3)).unwrap();
        assert!(k <= 3 && s.max_distance() <= 0.3);
    }

    #[test]
    fn two_groups_converge_to_lowest_index_medoids() {
        let o = line(&[0.0, 1.0, 10.0, 11.0]);
        for seed in 0..20 {
            let s = k_medoids(&o, 2, seed, 100).unwrap();
            assert!(s.stats.converged);
            assert_eq!(s.representatives, ids(&[0, 2]), "seed {seed}");
            assert_eq!(s.assignment, ids(&[0, 0, 2, 2]));
        }
    }

    #[test]
    fn k_out_of_range() {
        let o = line(&[0.0, 1.0]);
        assert!(matches!(k_medoids(&o, 0, 0, 10), Err(Error::Parameter(_))));
        assert!(matches!(k_medoids(&o, 3, 0, 10), Err(Error::Parameter(_))));
    }

    #[test]
    fn min_k_examples() {
        let o = line(&[0.0, 1.0, 2.0]);
        let (k, s) = min_k_for_delta(&o, &SelectorConfig::new(1.0)).unwrap();
        assert_eq!(k, 1);
        assert_eq!(s.representatives, ids(&[1]));

        let o = line(&[0.0, 1.0, 2.0, 3.0, 4.0]);
        let (k, s) = min_k_for_delta(&o, &SelectorConfig::new(1.0)).unwrap();
        assert_eq!(k, 2);
        assert!(s.max_distance() <= 1.0);
        assert_eq!(s.delta, Some(1.0));

        let (k, _) = min_k_for_delta(&o, &SelectorConfig::new(100.0)).unwrap();
        assert_eq!(k, 1);
    }

    #[test]
    fn min_k_reports_missing_cover() {
        let m = DistanceMatrix::from_rows(vec![vec![3.0, 5.0], vec![5.0, 3.0]]).unwrap();
        let o = DistanceOracle::from_matrix(m);
        assert!(matches!(
            min_k_for_delta(&o, &SelectorConfig::new(1.0)),
            Err(Error::NoCover { .. })
        ));
        assert!(min_k_for_delta(&o, &SelectorConfig::new(1.0).with_restarts(0)).is_err());
    }
}
