//! Coverage checks, stability experiments, synthetic data and the benchmark
//! harness.

pub mod bench;
pub mod stability;
pub mod synth;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

pub use bench::{benchmark_run, BenchDataset, BenchRow, BenchSpec, BenchSummary, BenchTable};
pub use stability::{overlap_histogram, stability_experiment, StabilityReport};
pub use synth::{gen_multimodal_gaussian, GaussianMixture};

use crate::dataset::SampleId;
use crate::error::{Error, Result};
use crate::numeric::exact_sum;
use crate::oracle::DistanceOracle;
use crate::solution::RepresentativeSolution;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub sample: SampleId,
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub delta: f64,
    pub representative_count: usize,
    pub max_distance: f64,
    pub average_distance: f64,
    /// Samples farther than delta from their assigned representative, or
    /// assigned to a sample outside the representative set.
    pub violations: Vec<Violation>,
}

impl CoverageReport {
    pub fn is_legal(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Recomputes every assigned distance through the oracle (stored distances
/// are not trusted) and aggregates them against `delta`.
pub fn coverage_report(
    solution: &RepresentativeSolution,
    oracle: &DistanceOracle,
    delta: f64,
) -> Result<CoverageReport> {
    if solution.len() != oracle.len() {
        return Err(Error::parameter(format!(
            "solution assigns {} samples but the dataset has {}",
            solution.len(),
            oracle.len()
        )));
    }
    let reps: BTreeSet<SampleId> = solution.representative_set();
    if let Some(bad) = reps.iter().find(|r| r.0 >= oracle.len()) {
        return Err(Error::InvalidId {
            id: bad.0,
            size: oracle.len(),
        });
    }
    let mut distances = Vec::with_capacity(solution.len());
    let mut violations = Vec::new();
    for (s, &rep) in solution.assignment.iter().enumerate() {
        let d = oracle.distance(SampleId(s), rep)?;
        if d > delta || !reps.contains(&rep) {
            violations.push(Violation {
                sample: SampleId(s),
                distance: d,
            });
        }
        distances.push(d);
    }
    let n = distances.len();
    Ok(CoverageReport {
        delta,
        representative_count: reps.len(),
        max_distance: distances.iter().copied().fold(0.0, f64::max),
        average_distance: if n == 0 {
            0.0
        } else {
            exact_sum(distances.iter().copied()) / n as f64
        },
        violations,
    })
}

/// Jaccard overlap `|A ∩ B| / |A ∪ B|`; two empty sets overlap fully.
pub fn overlap(a: &BTreeSet<SampleId>, b: &BTreeSet<SampleId>) -> f64 {
    let union = a.union(b).count();
    if union == 0 {
        1.0
    } else {
        a.intersection(b).count() as f64 / union as f64
    }
}

/// Mean and standard error (sample standard deviation over `sqrt(n)`).
/// The standard error of a single value is 0.
pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = exact_sum(values.iter().copied()) / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = exact_sum(values.iter().map(|v| (v - mean).powi(2))) / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solution::Cluster;
    use proptest::prelude::*;

    fn line(points: &[f64]) -> DistanceOracle {
        let p = points.to_vec();
        DistanceOracle::from_fn(p.len(), move |a, b| (p[a.0] - p[b.0]).abs())
    }

    fn set(v: &[usize]) -> BTreeSet<SampleId> {
        v.iter().map(|&i| SampleId(i)).collect()
    }

    #[test]
    fn coverage_of_two_clusters() {
        let o = line(&[0.0, 0.5, 2.0, 2.4]);
        let clusters = vec![
            Cluster {
                representative: SampleId(0),
                members: vec![SampleId(0), SampleId(1)],
            },
            Cluster {
                representative: SampleId(2),
                members: vec![SampleId(2), SampleId(3)],
            },
        ];
        let s = RepresentativeSolution::from_clusters(&clusters, 4, Some(1.0), &o).unwrap();
        let r = coverage_report(&s, &o, 1.0).unwrap();
        assert!(r.is_legal());
        assert_eq!(r.max_distance, 0.5);
        assert!((r.average_distance - 0.225).abs() < 1e-15);
        assert_eq!(r.representative_count, 2);

        let tight = coverage_report(&s, &o, 0.45).unwrap();
        assert_eq!(
            tight.violations,
            vec![Violation {
                sample: SampleId(1),
                distance: 0.5
            }]
        );
    }

    #[test]
    fn all_self_assigned_is_zero() {
        let o = line(&[1.0, 5.0, 9.0]);
        let clusters: Vec<_> = (0..3).map(|i| Cluster::singleton(SampleId(i))).collect();
        let s = RepresentativeSolution::from_clusters(&clusters, 3, Some(0.0), &o).unwrap();
        let r = coverage_report(&s, &o, 0.0).unwrap();
        assert_eq!((r.max_distance, r.average_distance), (0.0, 0.0));
        assert!(r.is_legal());
    }

    #[test]
    fn foreign_assignment_targets() {
        let o = line(&[0.0, 1.0]);
        let one = line(&[0.0]);
        let mut s =
            RepresentativeSolution::from_clusters(&[Cluster::singleton(SampleId(0))], 1, None, &one)
                .unwrap();
        assert!(coverage_report(&s, &o, 1.0).is_err());

        // assigned to a sample that is not a representative
        s.representatives.clear();
        let r = coverage_report(&s, &one, 1.0).unwrap();
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.representative_count, 0);

        s.assignment = vec![SampleId(1)];
        assert!(matches!(
            coverage_report(&s, &one, 1.0),
            Err(Error::InvalidId { id: 1, .. })
        ));
    }

    #[test]
    fn overlap_examples() {
        assert_eq!(overlap(&set(&[1, 2]), &set(&[1, 2])), 1.0);
        assert_eq!(overlap(&set(&[1]), &set(&[2])), 0.0);
        assert_eq!(overlap(&set(&[0, 2]), &set(&[0, 4])), 1.0 / 3.0);
        assert_eq!(overlap(&set(&[]), &set(&[])), 1.0);
    }

    #[test]
    fn stderr_definition() {
        assert_eq!(mean_and_stderr(&[3.0]), (3.0, 0.0));
        let (m, se) = mean_and_stderr(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        // sample sd = sqrt(5/3)
        assert!((se - (5.0f64 / 3.0).sqrt() / 2.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn overlap_symmetric_and_one_iff_equal(
            a in prop::collection::btree_set(0usize..10, 0..6),
            b in prop::collection::btree_set(0usize..10, 0..6),
        ) {
            let a: BTreeSet<SampleId> = a.into_iter().map(SampleId).collect();
            let b: BTreeSet<SampleId> = b.into_iter().map(SampleId).collect();
            let o = overlap(&a, &b);
            prop_assert!((0.0..=1.0).contains(&o));
            prop_assert_eq!(o, overlap(&b, &a));
            prop_assert_eq!(o == 1.0, a == b);
        }
    }
}
