//! The single access path to pairwise dissimilarities.
//!
//! `d(from, to)` always means "cost of covering `from` with the candidate
//! representative `to`". Neither symmetry nor `d(x, x) = 0` is assumed.

use std::num::NonZeroUsize;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use dashmap::DashMap;
use lru::LruCache;
use rustc_hash::FxBuildHasher;

use crate::dataset::{DistanceMatrix, SampleId};
use crate::error::{Error, Result};

pub type DistanceFn = dyn Fn(SampleId, SampleId) -> f64 + Send + Sync;

/// Memoization strategy for function-backed oracles.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CachePolicy {
    #[default]
    Unbounded,
    /// Keep at most this many pairs, evicting the least recently used.
    Lru(NonZeroUsize),
    Disabled,
}

enum Source {
    Matrix {
        matrix: DistanceMatrix,
        // one bit per ordered pair, so lookups are counted once like a cache miss
        seen: Vec<AtomicU64>,
    },
    Function {
        len: usize,
        f: Arc<DistanceFn>,
    },
}

enum Cache {
    None,
    Unbounded(DashMap<u64, f64, FxBuildHasher>),
    Lru(Mutex<LruCache<u64, f64, FxBuildHasher>>),
}

pub struct DistanceOracle {
    source: Source,
    cache: Cache,
    evals: AtomicU64,
}

impl std::fmt::Debug for DistanceOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DistanceOracle")
            .field("len", &self.len())
            .field("evals", &self.eval_count())
            .finish_non_exhaustive()
    }
}

impl DistanceOracle {
    pub fn from_matrix(matrix: DistanceMatrix) -> Self {
        let words = (matrix.len() * matrix.len()).div_ceil(64);
        DistanceOracle {
            source: Source::Matrix {
                matrix,
                seen: (0..words).map(|_| AtomicU64::new(0)).collect(),
            },
            cache: Cache::None,
            evals: AtomicU64::new(0),
        }
    }

    /// Wraps a deterministic distance function over `len` samples, memoized
    /// without bound.
    pub fn from_fn<F>(len: usize, f: F) -> Self
    where
        F: Fn(SampleId, SampleId) -> f64 + Send + Sync + 'static,
    {
        DistanceOracle {
            source: Source::Function {
                len,
                f: Arc::new(f),
            },
            cache: Cache::Unbounded(DashMap::with_hasher(FxBuildHasher)),
            evals: AtomicU64::new(0),
        }
    }

    /// Replaces the cache. Has no effect on matrix-backed oracles, which
    /// never need one.
    pub fn with_cache(mut self, policy: CachePolicy) -> Self {
        if let Source::Function { .. } = self.source {
            self.cache = match policy {
                CachePolicy::Unbounded => Cache::Unbounded(DashMap::with_hasher(FxBuildHasher)),
                CachePolicy::Lru(cap) => {
                    Cache::Lru(Mutex::new(LruCache::with_hasher(cap, FxBuildHasher)))
                }
                CachePolicy::Disabled => Cache::None,
            };
        }
        self
    }

    pub fn len(&self) -> usize {
        match &self.source {
            Source::Matrix { matrix, .. } => matrix.len(),
            Source::Function { len, .. } => *len,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of underlying evaluations performed; cache hits are not counted.
    pub fn eval_count(&self) -> u64 {
        self.evals.load(Ordering::Relaxed)
    }

    pub fn matrix(&self) -> Option<&DistanceMatrix> {
        match &self.source {
            Source::Matrix { matrix, .. } => Some(matrix),
            Source::Function { .. } => None,
        }
    }

    #[inline]
    fn check(&self, id: SampleId) -> Result<()> {
        let size = self.len();
        if id.0 < size {
            Ok(())
        } else {
            Err(Error::InvalidId { id: id.0, size })
        }
    }

    fn evaluate(&self, f: &DistanceFn, from: SampleId, to: SampleId) -> Result<f64> {
        self.evals.fetch_add(1, Ordering::Relaxed);
        let value = f(from, to);
        if value.is_finite() && value >= 0.0 {
            Ok(value)
        } else {
            Err(Error::ContractViolation { from, to, value })
        }
    }

    /// `d(from, to)`.
    pub fn distance(&self, from: SampleId, to: SampleId) -> Result<f64> {
        self.check(from)?;
        self.check(to)?;
        match &self.source {
            Source::Matrix { matrix, seen } => {
                let bit = from.0 * matrix.len() + to.0;
                let mask = 1u64 << (bit % 64);
                if seen[bit / 64].fetch_or(mask, Ordering::Relaxed) & mask == 0 {
                    self.evals.fetch_add(1, Ordering::Relaxed);
                }
                Ok(matrix.get(from.0, to.0))
            }
            Source::Function { len, f } => {
                let key = (from.0 as u64) * (*len as u64) + to.0 as u64;
                match &self.cache {
                    Cache::None => self.evaluate(f.as_ref(), from, to),
                    Cache::Unbounded(map) => {
                        if let Some(v) = map.get(&key) {
                            return Ok(*v);
                        }
                        // the entry lock makes every pair evaluate exactly once
                        let entry = map.entry(key);
                        match entry {
                            dashmap::Entry::Occupied(o) => Ok(*o.get()),
                            dashmap::Entry::Vacant(v) => {
                                let value = self.evaluate(f.as_ref(), from, to)?;
                                v.insert(value);
                                Ok(value)
                            }
                        }
                    }
                    Cache::Lru(lru) => {
                        if let Some(v) = lru.lock().unwrap().get(&key) {
                            return Ok(*v);
                        }
                        let value = self.evaluate(f.as_ref(), from, to)?;
                        lru.lock().unwrap().put(key, value);
                        Ok(value)
                    }
                }
            }
        }
    }
}

/// The representative in `reps` closest to `x`, i.e. `argmin_r d(x, r)`.
/// Ties go to the lowest sample index.
pub fn nearest_representative(
    x: SampleId,
    reps: &[SampleId],
    oracle: &DistanceOracle,
) -> Result<(SampleId, f64)> {
    let mut best: Option<(SampleId, f64)> = None;
    for &r in reps {
        let d = oracle.distance(x, r)?;
        best = match best {
            Some((b, bd)) if bd < d || (bd == d && b < r) => Some((b, bd)),
            _ => Some((r, d)),
        };
    }
    best.ok_or(Error::EmptySet)
}
