//! Concrete dissimilarity measures and the glue that turns a [`Dataset`]
//! into a [`DistanceOracle`].

pub mod align;
pub mod bag;
pub mod music;
pub mod trajectory;

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use align::{global_alignment, local_alignment, local_similarity, SubstitutionModel};
pub use bag::{bag_distance, Bag};
pub use music::{
    music_distance, music_features, music_substitution_cost, MusicModel, MusicSample,
    MusicSegment,
};
pub use trajectory::{
    trajectory_distance, trajectory_features, Trajectory, TrajectoryModel, TrajectorySample,
    TurnBin,
};

use crate::dataset::{Dataset, DatasetKind};
use crate::error::{Error, Result};
use crate::oracle::{CachePolicy, DistanceOracle};

/// L2 norm of `p - q`.
pub fn euclidean_distance(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::parameter(format!(
            "dimension mismatch: {} vs {}",
            p.len(),
            q.len()
        )));
    }
    Ok(euclidean_unchecked(p, q))
}

#[inline]
fn euclidean_unchecked(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistanceKind {
    Euclidean,
    Precomputed,
    Music,
    Trajectory,
}

impl DistanceKind {
    pub const ALL: [DistanceKind; 4] = [
        DistanceKind::Euclidean,
        DistanceKind::Precomputed,
        DistanceKind::Music,
        DistanceKind::Trajectory,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DistanceKind::Euclidean => "euclidean",
            DistanceKind::Precomputed => "precomputed",
            DistanceKind::Music => "music",
            DistanceKind::Trajectory => "trajectory",
        }
    }

    /// The dataset kind this measure applies to.
    pub fn dataset_kind(self) -> DatasetKind {
        match self {
            DistanceKind::Euclidean => DatasetKind::Points,
            DistanceKind::Precomputed => DatasetKind::Opaque,
            DistanceKind::Music => DatasetKind::Sequences,
            DistanceKind::Trajectory => DatasetKind::Trajectories,
        }
    }
}

impl fmt::Display for DistanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DistanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DistanceKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::parameter(format!("unknown distance '{s}'")))
    }
}

/// Parameters of the composite measures. Loaded from TOML:
///
/// ```toml
/// [music]
/// gap = 1.5
/// local_offset = 1.5
///
/// [trajectory]
/// gap = 100.0
/// resolution = 5.0
/// ```
///
/// Missing keys keep their defaults.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DistanceModels {
    pub music: MusicModel,
    pub trajectory: TrajectoryModel,
}

impl DistanceModels {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse {
            path: "<model config>".into(),
            line: e
                .span()
                .map(|s| text[..s.start].matches('\n').count() as u64 + 1)
                .unwrap_or(0),
            message: e.message().to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Parse { line, message, .. } => Error::Parse {
                path: path.display().to_string(),
                line,
                message,
            },
            other => other,
        })
    }
}

/// Builds the oracle for `dataset` under `kind`. Features of sequences and
/// trajectories are extracted once up front.
pub fn build_oracle(
    dataset: &Dataset,
    kind: DistanceKind,
    models: &DistanceModels,
    cache: CachePolicy,
) -> Result<DistanceOracle> {
    if dataset.kind() != kind.dataset_kind() {
        return Err(Error::parameter(format!(
            "distance '{kind}' does not apply to {:?} data",
            dataset.kind()
        )));
    }
    let oracle = match dataset {
        Dataset::Opaque(m) => return Ok(DistanceOracle::from_matrix(m.clone())),
        Dataset::Points(points) => {
            if let Some(dim) = points.first().map(Vec::len) {
                if let Some(i) = points.iter().position(|p| p.len() != dim) {
                    return Err(Error::parameter(format!(
                        "point {i} has dimension {}, expected {dim}",
                        points[i].len()
                    )));
                }
            }
            let points = Arc::new(points.clone());
            DistanceOracle::from_fn(points.len(), move |a, b| {
                euclidean_unchecked(&points[a.0], &points[b.0])
            })
        }
        Dataset::Sequences(segments) => {
            let samples: Arc<Vec<MusicSample>> =
                Arc::new(segments.iter().cloned().map(MusicSample::from).collect());
            let model = models.music;
            DistanceOracle::from_fn(samples.len(), move |a, b| {
                music::music_sample_distance(&samples[a.0], &samples[b.0], &model)
            })
        }
        Dataset::Trajectories(trajectories) => {
            if let Some(len) = trajectories.first().map(Trajectory::len) {
                if let Some(i) = trajectories.iter().position(|t| t.len() != len) {
                    return Err(Error::parameter(format!(
                        "trajectory {i} has {} points, expected {len}",
                        trajectories[i].len()
                    )));
                }
            }
            let model = models.trajectory;
            let samples: Arc<Vec<TrajectorySample>> = Arc::new(
                trajectories
                    .iter()
                    .cloned()
                    .map(|t| TrajectorySample::new(t, &model))
                    .collect(),
            );
            DistanceOracle::from_fn(samples.len(), move |a, b| {
                trajectory::trajectory_scores(&samples[a.0], &samples[b.0], &model)
                    .expect("lengths checked at construction")
                    .combined(&model)
            })
        }
    };
    Ok(oracle.with_cache(cache))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::SampleId;

    #[test]
    fn euclidean_examples() {
        assert_eq!(euclidean_distance(&[0.0, 0.0], &[3.0, 4.0]).unwrap(), 5.0);
        assert_eq!(euclidean_distance(&[1.5, -2.0], &[1.5, -2.0]).unwrap(), 0.0);
        let mut e1 = vec![0.0; 10];
        let mut e2 = vec![0.0; 10];
        e1[0] = 1.0;
        e2[1] = 1.0;
        assert_eq!(euclidean_distance(&e1, &e2).unwrap(), 2f64.sqrt());
        assert!(euclidean_distance(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn model_config_defaults_and_overrides() {
        let m = DistanceModels::from_toml_str("[music]\ngap = 2.0\n").unwrap();
        assert_eq!(m.music.gap, 2.0);
        assert_eq!(m.music.local_offset, 1.5);
        assert_eq!(m.trajectory, TrajectoryModel::default());
        let err = DistanceModels::from_toml_str("[music]\n\ngapp = 2.0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
    }

    #[test]
    fn oracle_kind_must_match_dataset() {
        let d = Dataset::Points(vec![vec![0.0], vec![1.0]]);
        let models = DistanceModels::default();
        assert!(build_oracle(&d, DistanceKind::Music, &models, CachePolicy::Unbounded).is_err());
        let o = build_oracle(&d, DistanceKind::Euclidean, &models, CachePolicy::Unbounded).unwrap();
        assert_eq!(o.distance(SampleId(0), SampleId(1)).unwrap(), 1.0);

        let ragged = Dataset::Points(vec![vec![0.0], vec![1.0, 2.0]]);
        assert!(build_oracle(&ragged, DistanceKind::Euclidean, &models, CachePolicy::Unbounded)
            .is_err());
    }
}
