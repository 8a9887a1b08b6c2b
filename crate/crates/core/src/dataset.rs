//! Samples, datasets and precomputed dissimilarity matrices.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::distances::music::MusicSegment;
use crate::distances::trajectory::Trajectory;
use crate::error::{Error, Result};

/// Position of a sample in its dataset's canonical (ingestion) order.
///
/// Shuffled scans are expressed as permutations of ids; a dataset is never
/// reindexed.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct SampleId(pub usize);

impl SampleId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for SampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<usize> for SampleId {
    fn from(i: usize) -> Self {
        SampleId(i)
    }
}

/// `SampleId(0)..SampleId(n)` in canonical order.
pub fn canonical_order(n: usize) -> Vec<SampleId> {
    (0..n).map(SampleId).collect()
}

/// Square matrix of dissimilarities; entry `(i, j)` is `d(i -> j)`, the cost of
/// covering sample `i` with representative `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::parameter(format!(
                    "matrix row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, v) in row.iter().enumerate() {
                if !(v.is_finite() && *v >= 0.0) {
                    return Err(Error::ContractViolation {
                        from: SampleId(i),
                        to: SampleId(j),
                        value: *v,
                    });
                }
            }
            data.extend(row);
        }
        Ok(DistanceMatrix { n, data })
    }

    /// Evaluates `f` on every ordered pair. Only meant for small instances.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let rows = (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect();
        Self::from_rows(rows)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, from: usize, to: usize) -> f64 {
        self.data[from * self.n + to]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.n.max(1)).take(self.n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DatasetKind {
    Points,
    Sequences,
    Trajectories,
    Opaque,
}

/// An ordered collection of samples of one kind.
#[derive(Clone, Debug)]
pub enum Dataset {
    Points(Vec<Vec<f64>>),
    Sequences(Vec<MusicSegment>),
    Trajectories(Vec<Trajectory>),
    /// Samples known only through a precomputed matrix.
    Opaque(DistanceMatrix),
}

impl Dataset {
    pub fn kind(&self) -> DatasetKind {
        match self {
            Dataset::Points(_) => DatasetKind::Points,
            Dataset::Sequences(_) => DatasetKind::Sequences,
            Dataset::Trajectories(_) => DatasetKind::Trajectories,
            Dataset::Opaque(_) => DatasetKind::Opaque,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Dataset::Points(p) => p.len(),
            Dataset::Sequences(s) => s.len(),
            Dataset::Trajectories(t) => t.len(),
            Dataset::Opaque(m) => m.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Restricts the dataset to `ids`, in the given order.
    pub fn subset(&self, ids: &[SampleId]) -> Dataset {
        fn pick<T: Clone>(items: &[T], ids: &[SampleId]) -> Vec<T> {
            ids.iter().map(|id| items[id.0].clone()).collect()
        }
        match self {
            Dataset::Points(p) => Dataset::Points(pick(p, ids)),
            Dataset::Sequences(s) => Dataset::Sequences(pick(s, ids)),
            Dataset::Trajectories(t) => Dataset::Trajectories(pick(t, ids)),
            Dataset::Opaque(m) => Dataset::Opaque(
                DistanceMatrix::from_fn(ids.len(), |i, j| m.get(ids[i].0, ids[j].0))
                    .expect("sub-matrix of a valid matrix is valid"),
            ),
        }
    }
}
