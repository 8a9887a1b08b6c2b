use std::collections::BTreeSet;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::dataset::SampleId;
use crate::error::Result;
use crate::numeric::exact_sum;
use crate::oracle::DistanceOracle;

/// A representative and the samples it covers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cluster {
    pub representative: SampleId,
    /// Includes the representative when it is assigned to itself.
    pub members: Vec<SampleId>,
}

impl Cluster {
    pub fn singleton(id: SampleId) -> Self {
        Cluster {
            representative: id,
            members: vec![id],
        }
    }
}

/// Per-iteration bookkeeping of an iterative selector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    /// Representatives produced by the assignment scan, before refinement.
    pub assigned_representatives: Vec<SampleId>,
    /// `sum_s d(s, rep(s))` right after the assignment scan.
    pub assign_cost: f64,
    /// The same sum after each cluster moved to its (constrained) medoid.
    pub refined_cost: f64,
    /// Representative count at the end of the iteration.
    pub representative_count: usize,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SolveStats {
    pub iterations: usize,
    pub distance_evaluations: u64,
    pub wall_time: Duration,
    pub converged: bool,
}

/// A representative set with a total assignment of samples to it.
#[derive(Clone, Debug, PartialEq)]
pub struct RepresentativeSolution {
    /// Coverage threshold the solution was built for; `None` for plain
    /// k-medoids, which carries no coverage guarantee.
    pub delta: Option<f64>,
    /// In insertion (or cluster) order.
    pub representatives: Vec<SampleId>,
    /// `assignment[s]` is the representative covering sample `s`.
    pub assignment: Vec<SampleId>,
    /// `assigned_distance[s] == d(s, assignment[s])`.
    pub assigned_distance: Vec<f64>,
    pub stats: SolveStats,
    pub trace: Vec<IterationRecord>,
}

impl RepresentativeSolution {
    pub fn empty(delta: Option<f64>) -> Self {
        RepresentativeSolution {
            delta,
            representatives: Vec::new(),
            assignment: Vec::new(),
            assigned_distance: Vec::new(),
            stats: SolveStats::default(),
            trace: Vec::new(),
        }
    }

    /// Packages clusters covering `0..n` into a solution, looking up each
    /// assigned distance through the oracle.
    pub fn from_clusters(
        clusters: &[Cluster],
        n: usize,
        delta: Option<f64>,
        oracle: &DistanceOracle,
    ) -> Result<Self> {
        let mut assignment = vec![SampleId(usize::MAX); n];
        let mut assigned_distance = vec![f64::NAN; n];
        for c in clusters {
            for &m in &c.members {
                assignment[m.0] = c.representative;
                assigned_distance[m.0] = oracle.distance(m, c.representative)?;
            }
        }
        debug_assert!(assignment.iter().all(|a| a.0 != usize::MAX));
        Ok(RepresentativeSolution {
            delta,
            representatives: clusters.iter().map(|c| c.representative).collect(),
            assignment,
            assigned_distance,
            stats: SolveStats::default(),
            trace: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn representative_set(&self) -> BTreeSet<SampleId> {
        self.representatives.iter().copied().collect()
    }

    /// Regroups the assignment into clusters, one per representative, in
    /// representative order.
    pub fn clusters(&self) -> Vec<Cluster> {
        let mut clusters: Vec<Cluster> = self
            .representatives
            .iter()
            .map(|&r| Cluster {
                representative: r,
                members: Vec::new(),
            })
            .collect();
        let slot: std::collections::HashMap<SampleId, usize> = self
            .representatives
            .iter()
            .enumerate()
            .map(|(i, &r)| (r, i))
            .collect();
        for (s, rep) in self.assignment.iter().enumerate() {
            clusters[slot[rep]].members.push(SampleId(s));
        }
        clusters
    }

    pub fn total_distance(&self) -> f64 {
        exact_sum(self.assigned_distance.iter().copied())
    }

    pub fn max_distance(&self) -> f64 {
        self.assigned_distance.iter().copied().fold(0.0, f64::max)
    }

    pub fn average_distance(&self) -> f64 {
        if self.assigned_distance.is_empty() {
            0.0
        } else {
            self.total_distance() / self.assigned_distance.len() as f64
        }
    }
}
