use std::collections::HashMap;
use std::time::Instant;

use crate::dataset::SampleId;
use crate::error::Result;
use crate::oracle::{nearest_representative, DistanceOracle};
use crate::solution::{Cluster, RepresentativeSolution};

use super::SelectorConfig;

/// One assignment scan over the samples in `config`'s scan order.
///
/// Each sample joins the cluster of its nearest representative when that
/// distance is within delta, and otherwise becomes a new representative.
/// `carried` seeds the representative set (empty for the first scan); a
/// carried representative is scanned like any other sample and may end up in
/// another cluster. Clusters left without members are dropped.
///
/// Clusters are returned with carried representatives first, then new ones
/// in the order they were created; members are sorted by id.
pub fn rep_assign(
    oracle: &DistanceOracle,
    carried: &[SampleId],
    config: &SelectorConfig,
) -> Result<Vec<Cluster>> {
    let order = config.order(oracle.len())?;
    let delta = config.delta;

    let mut reps: Vec<SampleId> = Vec::with_capacity(carried.len());
    let mut slot: HashMap<SampleId, usize> = HashMap::with_capacity(carried.len());
    for &r in carried {
        if let std::collections::hash_map::Entry::Vacant(e) = slot.entry(r) {
            e.insert(reps.len());
            reps.push(r);
        }
    }
    let mut members: Vec<Vec<SampleId>> = vec![Vec::new(); reps.len()];

    for x in order {
        let target = if reps.is_empty() {
            None
        } else {
            let (rep, dist) = nearest_representative(x, &reps, oracle)?;
            (dist <= delta).then_some(rep)
        };
        match target {
            Some(rep) => members[slot[&rep]].push(x),
            // a representative always covers itself by membership
            None => match slot.get(&x) {
                Some(&i) => members[i].push(x),
                None => {
                    slot.insert(x, reps.len());
                    reps.push(x);
                    members.push(vec![x]);
                }
            },
        }
    }

    Ok(reps
        .into_iter()
        .zip(members)
        .filter(|(_, m)| !m.is_empty())
        .map(|(representative, mut members)| {
            members.sort_unstable();
            Cluster {
                representative,
                members,
            }
        })
        .collect())
}

/// Single-scan selection: [`rep_assign`] from an empty representative set.
///
/// `representatives` in the result are in insertion order, so each one is
/// farther than delta from every representative before it.
pub fn one_shot_select(
    oracle: &DistanceOracle,
    config: &SelectorConfig,
) -> Result<RepresentativeSolution> {
    let start = Instant::now();
    let evals = oracle.eval_count();
    let clusters = rep_assign(oracle, &[], config)?;
    let mut solution =
        RepresentativeSolution::from_clusters(&clusters, oracle.len(), Some(config.delta), oracle)?;
    solution.stats.iterations = 1;
    solution.stats.converged = true;
    solution.stats.distance_evaluations = oracle.eval_count() - evals;
    solution.stats.wall_time = start.elapsed();
    Ok(solution)
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
    fn scan_builds_two_clusters() {
        let o = line(&[0.0, 0.5, 2.0, 2.4]);
        let clusters = rep_assign(&o, &[], &SelectorConfig::new(1.0)).unwrap();
        assert_eq!(
            clusters,
            vec![
                Cluster {
                    representative: SampleId(0),
                    members: ids(&[0, 1])
                },
                Cluster {
                    representative: SampleId(2),
                    members: ids(&[2, 3])
                },
            ]
        );
    }

    #[test]
    fn empty_dataset_gives_no_clusters() {
        let o = line(&[]);
        assert!(rep_assign(&o, &[], &SelectorConfig::new(1.0)).unwrap().is_empty());
        let s = one_shot_select(&o, &SelectorConfig::new(1.0)).unwrap();
        assert!(s.representatives.is_empty() && s.assignment.is_empty());
    }

    #[test]
    fn carried_representative_absorbs_everything() {
        let o = line(&[0.0, 1.0, 2.0]);
        let clusters = rep_assign(&o, &ids(&[1]), &SelectorConfig::new(1.0)).unwrap();
        assert_eq!(
            clusters,
            vec![Cluster {
                representative: SampleId(1),
                members: ids(&[0, 1, 2])
            }]
        );
    }

    #[test]
    fn carried_representative_with_no_members_is_dropped() {
        // sample 1 sits on top of sample 0, so with tie-breaking toward the
        // lower id nobody picks 1
        let o = line(&[0.0, 0.0, 5.0]);
        let clusters = rep_assign(&o, &ids(&[1, 0]), &SelectorConfig::new(1.0)).unwrap();
        assert_eq!(clusters.len(), 2);
        assert_eq!(clusters[0].representative, SampleId(0));
        assert_eq!(clusters[0].members, ids(&[0, 1]));
        assert_eq!(clusters[1].representative, SampleId(2));
    }

    #[test]
    fn one_shot_is_order_sensitive() {
        let o = line(&[0.0, 0.5, 2.0, 2.4]);
        let fwd = one_shot_select(&o, &SelectorConfig::new(1.0)).unwrap();
        assert_eq!(fwd.representatives, ids(&[0, 2]));
        let rev = one_shot_select(
            &o,
            &SelectorConfig::new(1.0).with_scan_order(ids(&[3, 2, 1, 0])),
        )
        .unwrap();
        assert_eq!(rev.representatives, ids(&[3, 1]));
        assert_eq!(rev.assignment, ids(&[1, 1, 3, 3]));
    }

    #[test]
    fn single_sample_is_its_own_representative() {
        let o = line(&[7.0]);
        let s = one_shot_select(&o, &SelectorConfig::new(0.0)).unwrap();
        assert_eq!(s.representatives, ids(&[0]));
        assert_eq!(s.assigned_distance, vec![0.0]);
    }

    #[test]
    fn self_coverage_is_by_membership() {
        // d(x, x) = 5 > delta: each sample still seeds and joins its own cluster
        let m = DistanceMatrix::from_rows(vec![vec![5.0, 9.0], vec![9.0, 5.0]]).unwrap();
        let o = DistanceOracle::from_matrix(m);
        let s = one_shot_select(&o, &SelectorConfig::new(1.0)).unwrap();
        assert_eq!(s.representatives, ids(&[0, 1]));
        assert_eq!(s.assigned_distance, vec![5.0, 5.0]);
    }

    #[test]
    fn asymmetric_direction_is_sample_to_representative() {
        // d(1 -> 0) = 0.5 covers, d(0 -> 1) = 4 would not
        let m = DistanceMatrix::from_rows(vec![vec![0.0, 4.0], vec![0.5, 0.0]]).unwrap();
        let o = DistanceOracle::from_matrix(m);
        let s = one_shot_select(&o, &SelectorConfig::new(1.0)).unwrap();
        assert_eq!(s.representatives, ids(&[0]));
        let rev =
            one_shot_select(&o, &SelectorConfig::new(1.0).with_scan_order(ids(&[1, 0]))).unwrap();
        assert_eq!(rev.representatives, ids(&[1, 0]));
    }
}
