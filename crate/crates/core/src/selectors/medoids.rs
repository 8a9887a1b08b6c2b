use std::collections::BTreeSet;
use std::time::Instant;

use rayon::prelude::*;

use crate::dataset::SampleId;
use crate::error::Result;
use crate::oracle::DistanceOracle;
use crate::solution::{Cluster, IterationRecord, RepresentativeSolution};

use super::{best_covering, clusters_cost, coalesce, merge_clusters, rep_assign, SelectorConfig};

/// The member `s` minimizing `sum_x d(x, s)` over the cluster (self term
/// included) subject to `d(x, s) <= delta` for every member `x`.
///
/// The current representative competes as well when the scan placed it in
/// another cluster (possible when `d(r, r) > d(r, r')`), so the update never
/// raises the cluster's cost. Falls back to the current representative when
/// no candidate is feasible, which only happens with self-distances above
/// delta.
pub fn constrained_medoid(
    cluster: &Cluster,
    oracle: &DistanceOracle,
    delta: f64,
) -> Result<SampleId> {
    let rep = cluster.representative;
    let best = if cluster.members.contains(&rep) {
        best_covering(&cluster.members, &cluster.members, oracle, delta)?
    } else {
        let mut candidates = cluster.members.clone();
        candidates.push(rep);
        best_covering(&candidates, &cluster.members, oracle, delta)?
    };
    Ok(best.unwrap_or(rep))
}

/// The delta-medoids selector.
///
/// Alternates an assignment scan ([`rep_assign`], seeded with the previous
/// representatives) and a constrained-medoid update of every cluster until
/// the representative set stops changing. Clusters are rebuilt from scratch
/// by every scan. After each scan the clusters form a legal delta-cover, and
/// the medoid update keeps it legal.
///
/// If `max_iterations` is exhausted the last legal solution is returned with
/// `stats.converged == false`.
pub fn delta_medoids(
    oracle: &DistanceOracle,
    config: &SelectorConfig,
) -> Result<RepresentativeSolution> {
    let start = Instant::now();
    let evals = oracle.eval_count();
    let delta = config.delta;
    let n = oracle.len();

    let mut carried: Vec<SampleId> = Vec::new();
    let mut current: Vec<Cluster> = Vec::new();
    let mut trace = Vec::new();
    let mut converged = false;

    for _ in 0..config.max_iterations.max(1) {
        let assigned = rep_assign(oracle, &carried, config)?;
        let assign_cost = clusters_cost(&assigned, oracle)?;
        let assigned_representatives: Vec<SampleId> =
            assigned.iter().map(|c| c.representative).collect();

        let refined = assigned
            .into_par_iter()
            .map(|c| {
                let representative = constrained_medoid(&c, oracle, delta)?;
                Ok(Cluster {
                    representative,
                    members: c.members,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut refined = coalesce(refined);
        if config.merge_refine {
            refined = merge_clusters(refined, oracle, delta)?;
        }

        trace.push(IterationRecord {
            assigned_representatives,
            assign_cost,
            refined_cost: clusters_cost(&refined, oracle)?,
            representative_count: refined.len(),
        });

        let before: BTreeSet<SampleId> = carried.iter().copied().collect();
        let after: BTreeSet<SampleId> = refined.iter().map(|c| c.representative).collect();
        carried = refined.iter().map(|c| c.representative).collect();
        current = refined;
        if before == after {
            converged = true;
            break;
        }
    }

    let mut solution = RepresentativeSolution::from_clusters(&current, n, Some(delta), oracle)?;
    solution.stats.iterations = trace.len();
    solution.stats.converged = converged;
    solution.stats.distance_evaluations = oracle.eval_count() - evals;
    solution.stats.wall_time = start.elapsed();
    solution.trace = trace;
    Ok(solution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::DistanceMatrix;
    use crate::selectors::one_shot_select;

    fn line(points: &[f64]) -> DistanceOracle {
        let p = points.to_vec();
        DistanceOracle::from_fn(p.len(), move |a, b| (p[a.0] - p[b.0]).abs())
    }

    fn ids(v: &[usize]) -> Vec<SampleId> {
        v.iter().map(|&i| SampleId(i)).collect()
    }

    #[test]
    fn constrained_medoid_examples() {
        // sums: 1.9, 1.0, 1.1
        let o = line(&[0.0, 0.9, 1.0]);
        let c = Cluster {
            representative: SampleId(0),
            members: ids(&[0, 1, 2]),
        };
        assert_eq!(constrained_medoid(&c, &o, 1.0).unwrap(), SampleId(1));

        let o = line(&[4.0]);
        assert_eq!(
            constrained_medoid(&Cluster::singleton(SampleId(0)), &o, 0.0).unwrap(),
            SampleId(0)
        );

        let o = line(&[0.0, 1.0]);
        let c = Cluster {
            representative: SampleId(1),
            members: ids(&[0, 1]),
        };
        assert_eq!(constrained_medoid(&c, &o, 1.0).unwrap(), SampleId(0));
    }

    #[test]
    fn representative_outside_its_cluster_stays_a_candidate() {
        // representative 0 is closer to representative 1 than to itself, so
        // its cluster holds only sample 2, whose self-distance is large
        let m = DistanceMatrix::from_rows(vec![
            vec![0.3, 0.1, 0.9],
            vec![0.2, 0.0, 0.9],
            vec![0.1, 0.4, 0.45],
        ])
        .unwrap();
        let o = DistanceOracle::from_matrix(m);
        let clusters = rep_assign(&o, &ids(&[0, 1]), &SelectorConfig::new(0.5)).unwrap();
        assert_eq!(clusters[0].members, ids(&[2]));
        assert_eq!(constrained_medoid(&clusters[0], &o, 0.5).unwrap(), SampleId(0));
        assert_eq!(constrained_medoid(&clusters[1], &o, 0.5).unwrap(), SampleId(1));
    }

    #[test]
    fn constraint_beats_smaller_sum() {
        // candidate 2 has the smallest sum (4.2 vs 4.5) but leaves sample 4
        // beyond delta
        let o = line(&[0.0, 0.1, 1.0, 1.3, 3.0]);
        let c = Cluster {
            representative: SampleId(3),
            members: ids(&[0, 1, 2, 3, 4]),
        };
        assert_eq!(constrained_medoid(&c, &o, 1.8).unwrap(), SampleId(3));
    }

    #[test]
    fn infeasible_cluster_keeps_its_representative() {
        let m = DistanceMatrix::from_rows(vec![vec![2.0, 0.5], vec![0.5, 2.0]]).unwrap();
        let o = DistanceOracle::from_matrix(m);
        let c = Cluster {
            representative: SampleId(1),
            members: ids(&[0, 1]),
        };
        assert_eq!(constrained_medoid(&c, &o, 1.0).unwrap(), SampleId(1));
    }

    #[test]
    fn moves_to_the_medoid_and_converges() {
        let o = line(&[0.0, 0.9, 1.0]);
        let s = delta_medoids(&o, &SelectorConfig::new(1.0)).unwrap();
        assert_eq!(s.representatives, ids(&[1]));
        assert!(s.stats.converged);
        assert_eq!(s.stats.iterations, 2);
        assert_eq!(s.trace[0].assigned_representatives, ids(&[0]));
    }

    #[test]
    fn integer_line_keeps_scan_representatives() {
        let o = line(&[0.0, 1.0, 2.0, 3.0, 4.0]);
        let s = delta_medoids(&o, &SelectorConfig::new(1.0)).unwrap();
        assert_eq!(s.representative_set(), ids(&[0, 2, 4]).into_iter().collect());
        assert!(s.stats.converged);
    }

    #[test]
    fn empty_dataset_converges_in_one_iteration() {
        let s = delta_medoids(&line(&[]), &SelectorConfig::new(1.0)).unwrap();
        assert!(s.representatives.is_empty());
        assert_eq!(s.stats.iterations, 1);
        assert!(s.stats.converged);
    }

    #[test]
    fn first_scan_matches_one_shot() {
        let pts: Vec<f64> = (0..40).map(|i| ((i * 37) % 23) as f64 * 0.7).collect();
        let o = line(&pts);
        let cfg = SelectorConfig::new(2.0);
        let full = delta_medoids(&o, &cfg).unwrap();
        let once = one_shot_select(&o, &cfg).unwrap();
        assert_eq!(full.trace[0].assigned_representatives, once.representatives);
    }

    #[test]
    fn iteration_cap_flags_non_convergence() {
        let o = line(&[0.0, 0.9, 1.0]);
        let s = delta_medoids(&o, &SelectorConfig::new(1.0).with_max_iterations(1)).unwrap();
        assert!(!s.stats.converged);
        assert_eq!(s.stats.iterations, 1);
        // still a legal cover, already moved to the medoid
        assert_eq!(s.representatives, ids(&[1]));
        assert!(s.assigned_distance.iter().all(|&d| d <= 1.0));
    }
}
