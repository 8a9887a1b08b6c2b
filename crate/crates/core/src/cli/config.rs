//! Dataset generator specs and the benchmark configuration file.
//!
//! A benchmark config is TOML:
//!
//! ```toml
//! seed = 7
//! repetitions = 5
//! subset_size = 200
//! algorithms = ["delta-medoids", "one-shot", "k-centers", "kmedoids-min-k"]
//! deltas = [2.0, 4.0, 6.0]
//! restarts = 3          # optional, k-medoids runs per k
//! merge_refine = false  # optional
//! timing = false        # optional, fills the wall_ms column
//!
//! [models.music]        # optional, same keys as --model-config
//! gap = 1.5
//!
//! [[datasets]]
//! name = "mixture"
//! distance = "euclidean"
//! path = "points.csv"   # relative to the config file
//!
//! [[datasets]]
//! name = "generated"
//! distance = "euclidean"
//! generate = { kind = "gaussian", dims = 10, modes = 4, samples_per_mode = 75, seed = 3 }
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::distances::{DistanceKind, DistanceModels};
use crate::error::{Error, Result};
use crate::eval::synth::{
    gen_asymmetric_matrix, gen_grid, gen_line, gen_multimodal_gaussian, gen_music_segments,
    gen_trajectories, GaussianMixture,
};
use crate::eval::BenchSpec;
use crate::selectors::{Algorithm, DEFAULT_RESTARTS};

fn default_mean_range() -> (f64, f64) {
    (-10.0, 10.0)
}

fn default_var_range() -> (f64, f64) {
    (0.5, 2.0)
}

fn default_step() -> f64 {
    1.0
}

/// A synthetic dataset, fully determined by its fields.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GenSpec {
    Gaussian {
        dims: usize,
        modes: usize,
        samples_per_mode: usize,
        #[serde(default = "default_mean_range")]
        mean_range: (f64, f64),
        #[serde(default = "default_var_range")]
        var_range: (f64, f64),
        #[serde(default)]
        seed: u64,
    },
    Line {
        n: usize,
        #[serde(default = "default_step")]
        step: f64,
    },
    Grid {
        rows: usize,
        cols: usize,
        #[serde(default = "default_step")]
        step: f64,
    },
    Matrix {
        n: usize,
        max: f64,
        #[serde(default)]
        self_max: f64,
        #[serde(default)]
        seed: u64,
    },
    Music {
        n: usize,
        motifs: usize,
        len: usize,
        #[serde(default)]
        seed: u64,
    },
    Trajectories {
        n: usize,
        patterns: usize,
        len: usize,
        #[serde(default)]
        seed: u64,
    },
}

impl GenSpec {
    /// The measure whose input format the generated data uses.
    pub fn distance(&self) -> DistanceKind {
        match self {
            GenSpec::Gaussian { .. } | GenSpec::Line { .. } | GenSpec::Grid { .. } => {
                DistanceKind::Euclidean
            }
            GenSpec::Matrix { .. } => DistanceKind::Precomputed,
            GenSpec::Music { .. } => DistanceKind::Music,
            GenSpec::Trajectories { .. } => DistanceKind::Trajectory,
        }
    }

    pub fn generate(&self) -> Result<Dataset> {
        Ok(match *self {
            GenSpec::Gaussian {
                dims,
                modes,
                samples_per_mode,
                mean_range,
                var_range,
                seed,
            } => Dataset::Points(gen_multimodal_gaussian(
                seed,
                &GaussianMixture {
                    dims,
                    modes,
                    samples_per_mode,
                    mean_range,
                    var_range,
                },
            )?),
            GenSpec::Line { n, step } => Dataset::Points(gen_line(n, step)),
            GenSpec::Grid { rows, cols, step } => Dataset::Points(gen_grid(rows, cols, step)),
            GenSpec::Matrix {
                n,
                max,
                self_max,
                seed,
            } => Dataset::Opaque(gen_asymmetric_matrix(seed, n, max, self_max)?),
            GenSpec::Music {
                n,
                motifs,
                len,
                seed,
            } => Dataset::Sequences(gen_music_segments(seed, n, motifs, len)?),
            GenSpec::Trajectories {
                n,
                patterns,
                len,
                seed,
            } => Dataset::Trajectories(gen_trajectories(seed, n, patterns, len)?),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchDatasetConfig {
    pub name: String,
    pub distance: DistanceKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generate: Option<GenSpec>,
}

fn default_restarts() -> usize {
    DEFAULT_RESTARTS
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    pub seed: u64,
    pub repetitions: usize,
    pub subset_size: usize,
    pub algorithms: Vec<Algorithm>,
    pub deltas: Vec<f64>,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default)]
    pub merge_refine: bool,
    #[serde(default)]
    pub timing: bool,
    #[serde(default)]
    pub models: DistanceModels,
    pub datasets: Vec<BenchDatasetConfig>,
}

impl BenchConfig {
    /// Parses a config and resolves dataset paths against `base`.
    pub fn from_toml_str(text: &str, origin: &Path) -> Result<Self> {
        let mut config: BenchConfig = toml::from_str(text).map_err(|e| Error::Parse {
            path: origin.display().to_string(),
            line: e
                .span()
                .map(|s| text[..s.start].matches('\n').count() as u64 + 1)
                .unwrap_or(0),
            message: e.message().to_string(),
        })?;
        let base = origin.parent().unwrap_or(Path::new(""));
        for d in &mut config.datasets {
            if d.path.is_some() == d.generate.is_some() {
                return Err(Error::parameter(format!(
                    "dataset '{}' needs exactly one of `path` and `generate`",
                    d.name
                )));
            }
            if let Some(p) = &mut d.path {
                if p.is_relative() {
                    *p = base.join(&*p);
                }
            }
            if let Some(g) = &d.generate {
                if g.distance() != d.distance {
                    return Err(Error::parameter(format!(
                        "dataset '{}': generated {} data cannot use distance '{}'",
                        d.name,
                        g.distance(),
                        d.distance
                    )));
                }
            }
        }
        if let Some(bad) = config
            .algorithms
            .iter()
            .find(|a| **a == Algorithm::KMedoids)
        {
            return Err(Error::parameter(format!(
                "algorithm '{bad}' needs k and cannot be benchmarked; use kmedoids-min-k"
            )));
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?, path)
    }

    pub fn spec(&self) -> BenchSpec {
        BenchSpec {
            algorithms: self.algorithms.clone(),
            deltas: self.deltas.clone(),
            repetitions: self.repetitions,
            subset_size: self.subset_size,
            seed: self.seed,
            restarts: self.restarts,
            merge_refine: self.merge_refine,
            timing: self.timing,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CONFIG: &str = r#"
seed = 7
repetitions = 2
subset_size = 50
algorithms = ["delta-medoids", "k-centers"]
deltas = [1.0, 2.5]

[[datasets]]
name = "pts"
distance = "euclidean"
path = "data/points.csv"

[[datasets]]
name = "gen"
distance = "euclidean"
generate = { kind = "gaussian", dims = 3, modes = 2, samples_per_mode = 10 }
"#;

    #[test]
    fn parses_and_resolves_paths() {
        let c = BenchConfig::from_toml_str(CONFIG, Path::new("/cfg/bench.toml")).unwrap();
        assert_eq!(c.algorithms, vec![Algorithm::DeltaMedoids, Algorithm::KCenters]);
        assert_eq!(c.restarts, DEFAULT_RESTARTS);
        assert_eq!(c.datasets[0].path.as_deref(), Some(Path::new("/cfg/data/points.csv")));
        let GenSpec::Gaussian { mean_range, seed, .. } = c.datasets[1].generate.clone().unwrap()
        else {
            panic!()
        };
        assert_eq!((mean_range, seed), ((-10.0, 10.0), 0));
        assert_eq!(c.datasets[1].generate.as_ref().unwrap().generate().unwrap().len(), 20);
    }

    #[test]
    fn rejects_malformed_configs() {
        let bad_key = CONFIG.replace("deltas", "detlas");
        assert!(matches!(
            BenchConfig::from_toml_str(&bad_key, Path::new("b.toml")),
            Err(Error::Parse { .. })
        ));
        let kmedoids = CONFIG.replace("\"k-centers\"", "\"kmedoids\"");
        assert!(BenchConfig::from_toml_str(&kmedoids, Path::new("b.toml")).is_err());
        let both = CONFIG.replace("path = \"data/points.csv\"", "path = \"x\"\ngenerate = { kind = \"line\", n = 3 }");
        assert!(BenchConfig::from_toml_str(&both, Path::new("b.toml")).is_err());
    }

    #[test]
    fn generated_kinds_match_their_distance() {
        let specs = [
            GenSpec::Line { n: 5, step: 1.0 },
            GenSpec::Grid { rows: 2, cols: 2, step: 1.0 },
            GenSpec::Matrix { n: 4, max: 3.0, self_max: 0.0, seed: 1 },
            GenSpec::Music { n: 4, motifs: 2, len: 5, seed: 1 },
            GenSpec::Trajectories { n: 4, patterns: 2, len: 5, seed: 1 },
        ];
        for s in specs {
            let d = s.generate().unwrap();
            assert_eq!(d.kind(), s.distance().dataset_kind());
        }
    }
}
