use std::time::Instant;

use crate::error::Result;
use crate::oracle::DistanceOracle;
use crate::solution::{Cluster, RepresentativeSolution};

use super::best_covering;

/// Pairwise merge refinement over a legal delta-cover.
///
/// Representative pairs within delta of each other (in either direction) are
/// tried in index order. When some member of the union of their clusters
/// covers the whole union, both clusters are replaced by the union under the
/// feasible member with the smallest distance sum, and the pair scan starts
/// over. Stops after a scan with no merge.
pub fn merge_clusters(
    mut clusters: Vec<Cluster>,
    oracle: &DistanceOracle,
    delta: f64,
) -> Result<Vec<Cluster>> {
    loop {
        clusters.sort_by_key(|c| c.representative);
        let mut merged = None;
        'pairs: for i in 0..clusters.len() {
            for j in i + 1..clusters.len() {
                let (ri, rj) = (clusters[i].representative, clusters[j].representative);
                if oracle.distance(ri, rj)? > delta && oracle.distance(rj, ri)? > delta {
                    continue;
                }
                let mut union = clusters[i].members.clone();
                union.extend_from_slice(&clusters[j].members);
                union.sort_unstable();
                union.dedup();
                if let Some(rep) = best_covering(&union, &union, oracle, delta)? {
                    merged = Some((
                        i,
                        j,
                        Cluster {
                            representative: rep,
                            members: union,
                        },
                    ));
                    break 'pairs;
                }
            }
        }
        match merged {
            Some((i, j, cluster)) => {
                clusters.remove(j);
                clusters[i] = cluster;
            }
            None => return Ok(clusters),
        }
    }
}

/// [`merge_clusters`] applied to a finished solution.
pub fn merge_close_clusters(
    solution: &RepresentativeSolution,
    oracle: &DistanceOracle,
    delta: f64,
) -> Result<RepresentativeSolution> {
    let start = Instant::now();
    let evals = oracle.eval_count();
    let clusters = merge_clusters(solution.clusters(), oracle, delta)?;
    let mut out =
        RepresentativeSolution::from_clusters(&clusters, solution.len(), Some(delta), oracle)?;
    out.stats = solution.stats.clone();
    out.stats.distance_evaluations += oracle.eval_count() - evals;
    out.stats.wall_time += start.elapsed();
    out.trace = solution.trace.clone();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::SampleId;

    fn line(points: &[f64]) -> DistanceOracle {
        let p = points.to_vec();
        DistanceOracle::from_fn(p.len(), move |a, b| (p[a.0] - p[b.0]).abs())
    }

    fn singletons(o: &DistanceOracle, delta: f64) -> RepresentativeSolution {
        let clusters: Vec<Cluster> = (0..o.len()).map(|i| Cluster::singleton(SampleId(i))).collect();
        RepresentativeSolution::from_clusters(&clusters, o.len(), Some(delta), o).unwrap()
    }

    #[test]
    fn close_singletons_merge_under_lowest_index() {
        let o = line(&[0.0, 2.0]);
        let merged = merge_close_clusters(&singletons(&o, 2.0), &o, 2.0).unwrap();
        assert_eq!(merged.representatives, vec![SampleId(0)]);
        assert_eq!(merged.assignment, vec![SampleId(0), SampleId(0)]);
    }

    #[test]
    fn distant_pairs_are_left_alone() {
        let o = line(&[0.0, 2.0]);
        let s = singletons(&o, 1.0);
        assert_eq!(merge_close_clusters(&s, &o, 1.0).unwrap().representatives, s.representatives);

        let o = line(&[3.0]);
        let s = singletons(&o, 1.0);
        assert_eq!(merge_close_clusters(&s, &o, 1.0).unwrap().representatives, s.representatives);
    }

    #[test]
    fn merges_cascade() {
        // {0},{1} merge first; the pair cluster then absorbs {2} under the middle
        let o = line(&[0.0, 0.5, 1.0]);
        let merged = merge_close_clusters(&singletons(&o, 1.0), &o, 1.0).unwrap();
        assert_eq!(merged.representatives, vec![SampleId(1)]);
        assert!(merged.assigned_distance.iter().all(|&d| d <= 1.0));
    }

    #[test]
    fn pairwise_merging_can_stop_short_of_the_optimum() {
        // {0},{1} merge under 0 (tie); 0 and 2 are then too far apart to pair
        let o = line(&[0.0, 1.0, 2.0]);
        let merged = merge_close_clusters(&singletons(&o, 1.0), &o, 1.0).unwrap();
        assert_eq!(merged.representatives, vec![SampleId(0), SampleId(2)]);
    }

    #[test]
    fn close_representatives_without_a_common_cover_stay() {
        // reps 1 and 2 are 1 apart but their clusters span [0, 3]
        let o = line(&[0.0, 1.0, 2.0, 3.0]);
        let clusters = vec![
            Cluster {
                representative: SampleId(1),
                members: vec![SampleId(0), SampleId(1)],
            },
            Cluster {
                representative: SampleId(2),
                members: vec![SampleId(2), SampleId(3)],
            },
        ];
        assert_eq!(merge_clusters(clusters.clone(), &o, 1.0).unwrap(), clusters);
    }
}
