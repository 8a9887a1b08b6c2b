//! Representative selection over arbitrary dissimilarities.
//!
//! Given `n` samples and a dissimilarity `d(x, c)` (not necessarily
//! symmetric, metric, or zero on the diagonal), find a small set of
//! representatives `C` such that every sample `x` has some `c` in `C` with
//! `d(x, c) <= delta`, preferring sets with a low average distance.
//!
//! ```
//! use repsel::{Algorithm, DistanceOracle, SelectorConfig, SampleId};
//!
//! let xs: [f64; 5] = [0.0, 1.0, 2.0, 3.0, 4.0];
//! let oracle = DistanceOracle::from_fn(xs.len(), move |a, b| (xs[a.0] - xs[b.0]).abs());
//! let sol = Algorithm::DeltaMedoids.run(&oracle, &SelectorConfig::new(1.0), None).unwrap();
//! assert_eq!(sol.representatives, vec![SampleId(0), SampleId(2), SampleId(4)]);
//! ```

pub mod cli;
pub mod dataset;
pub mod distances;
pub mod error;
pub mod eval;
pub mod exact;
pub mod numeric;
pub mod oracle;
pub mod selectors;
pub mod solution;

pub use dataset::{Dataset, DatasetKind, DistanceMatrix, SampleId};
pub use distances::{build_oracle, DistanceKind, DistanceModels};
pub use error::{Error, Result};
pub use eval::{coverage_report, overlap, CoverageReport};
pub use oracle::{CachePolicy, DistanceOracle};
pub use selectors::{Algorithm, SelectorConfig};
pub use solution::{Cluster, RepresentativeSolution};
