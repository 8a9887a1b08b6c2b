use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::SampleId;
use crate::error::Result;
use crate::oracle::DistanceOracle;
use crate::solution::RepresentativeSolution;

use super::SelectorConfig;

/// Farthest-first traversal from a seed-chosen starting sample, continued
/// until every non-representative is within delta of the set.
pub fn greedy_k_centers(
    oracle: &DistanceOracle,
    config: &SelectorConfig,
) -> Result<RepresentativeSolution> {
    if oracle.is_empty() {
        return Ok(RepresentativeSolution::empty(Some(config.delta)));
    }
    let start = ChaCha8Rng::seed_from_u64(config.seed).gen_range(0..oracle.len());
    greedy_k_centers_from(oracle, config.delta, SampleId(start))
}

/// Farthest-first traversal from an explicit starting sample.
///
/// Every sample ends up assigned to its nearest representative (lowest index
/// on ties); `representatives` are in insertion order.
pub fn greedy_k_centers_from(
    oracle: &DistanceOracle,
    delta: f64,
    start: SampleId,
) -> Result<RepresentativeSolution> {
    let t0 = Instant::now();
    let evals = oracle.eval_count();
    let n = oracle.len();
    oracle.distance(start, start)?;

    let mut is_rep = vec![false; n];
    let mut nearest = vec![start; n];
    let mut nearest_dist = vec![f64::INFINITY; n];
    let mut reps = Vec::new();

    let mut next = Some(start);
    while let Some(r) = next {
        is_rep[r.0] = true;
        reps.push(r);
        for s in 0..n {
            let d = oracle.distance(SampleId(s), r)?;
            if d < nearest_dist[s] || (d == nearest_dist[s] && r < nearest[s]) {
                nearest_dist[s] = d;
                nearest[s] = r;
            }
        }
        // argmax over the remaining samples, lowest index on ties
        let farthest = (0..n)
            .filter(|&s| !is_rep[s])
            .fold(None, |best: Option<usize>, s| match best {
                Some(b) if nearest_dist[b] >= nearest_dist[s] => Some(b),
                _ => Some(s),
            });
        next = farthest
            .filter(|&s| nearest_dist[s] > delta)
            .map(SampleId);
    }

    Ok(RepresentativeSolution {
        delta: Some(delta),
        representatives: reps,
        assignment: nearest,
        assigned_distance: nearest_dist,
        stats: crate::solution::SolveStats {
            iterations: 1,
            distance_evaluations: oracle.eval_count() - evals,
            wall_time: t0.elapsed(),
            converged: true,
        },
        trace: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(points: &[f64]) -> DistanceOracle {
        let p = points.to_vec();
        DistanceOracle::from_fn(p.len(), move |a, b| (p[a.0] - p[b.0]).abs())
    }

    fn ids(v: &[usize]) -> Vec<SampleId> {
        v.iter().map(|&i| SampleId(i)).collect()
    }

    #[test]
    fn farthest_first_order() {
        let o = line(&[0.0, 10.0, 20.0]);
        let s = greedy_k_centers_from(&o, 6.0, SampleId(0)).unwrap();
        assert_eq!(s.representatives, ids(&[0, 2, 1]));
        assert_eq!(s.max_distance(), 0.0);
    }

    #[test]
    fn large_delta_stops_immediately() {
        let o = line(&[0.0, 10.0, 20.0]);
        let s = greedy_k_centers_from(&o, 25.0, SampleId(0)).unwrap();
        assert_eq!(s.representatives, ids(&[0]));
        assert_eq!(s.assigned_distance, vec![0.0, 10.0, 20.0]);
    }

    #[test]
    fn single_and_empty() {
        let s = greedy_k_centers(&line(&[1.5]), &SelectorConfig::new(0.0)).unwrap();
        assert_eq!(s.representatives, ids(&[0]));
        let s = greedy_k_centers(&line(&[]), &SelectorConfig::new(0.0)).unwrap();
        assert!(s.representatives.is_empty());
    }

    #[test]
    fn ties_go_to_lowest_index() {
        // from 2, samples 0 and 4 are both 2 away
        let o = line(&[0.0, 1.0, 2.0, 3.0, 4.0]);
        let s = greedy_k_centers_from(&o, 1.0, SampleId(2)).unwrap();
        assert_eq!(s.representatives, ids(&[2, 0, 4]));
        // sample 1 is 1 from both 0 and 2
        assert_eq!(s.assignment[1], SampleId(0));
    }

    #[test]
    fn seeded_start_is_reproducible() {
        let pts: Vec<f64> = (0..30).map(|i| i as f64 * 1.7 % 11.0).collect();
        let o = line(&pts);
        let cfg = SelectorConfig::new(1.0).with_seed(9);
        assert_eq!(
            greedy_k_centers(&o, &cfg).unwrap().representatives,
            greedy_k_centers(&o, &cfg).unwrap().representatives
        );
    }
}
