//! Seeded synthetic datasets. Every generator is a pure function of its
//! arguments, so the same seed yields bit-identical output.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::dataset::DistanceMatrix;
use crate::distances::{MusicSegment, Trajectory};
use crate::error::{Error, Result};

/// Shape of a mixture of axis-aligned Gaussians.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianMixture {
    pub dims: usize,
    pub modes: usize,
    pub samples_per_mode: usize,
    /// Each coordinate of each mode mean is uniform in this range.
    pub mean_range: (f64, f64),
    /// Each diagonal variance of each mode is uniform in this range.
    pub var_range: (f64, f64),
}

impl GaussianMixture {
    /// 10 dimensions, 4 modes of 250 samples.
    pub fn ten_dims() -> Self {
        GaussianMixture {
            dims: 10,
            modes: 4,
            samples_per_mode: 250,
            mean_range: (-10.0, 10.0),
            var_range: (0.5, 2.0),
        }
    }

    pub fn len(&self) -> usize {
        self.modes * self.samples_per_mode
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn uniform_in(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.gen_range(lo..hi)
    }
}

fn check_range(name: &str, (lo, hi): (f64, f64), min: f64) -> Result<()> {
    if lo.is_finite() && hi.is_finite() && min <= lo && lo <= hi {
        Ok(())
    } else {
        Err(Error::parameter(format!("invalid {name} [{lo}, {hi}]")))
    }
}

/// Samples a mixture; points of all modes are returned in shuffled order.
pub fn gen_multimodal_gaussian(seed: u64, spec: &GaussianMixture) -> Result<Vec<Vec<f64>>> {
    if spec.dims == 0 || spec.modes == 0 || spec.samples_per_mode == 0 {
        return Err(Error::parameter("dims, modes and samples per mode must be positive"));
    }
    check_range("mean range", spec.mean_range, f64::NEG_INFINITY)?;
    check_range("variance range", spec.var_range, 0.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(spec.len());
    for _ in 0..spec.modes {
        let coords: Vec<Normal<f64>> = (0..spec.dims)
            .map(|_| {
                let mean = uniform_in(&mut rng, spec.mean_range);
                let var = uniform_in(&mut rng, spec.var_range);
                Normal::new(mean, var.sqrt()).expect("finite mean, non-negative deviation")
            })
            .collect();
        for _ in 0..spec.samples_per_mode {
            points.push(coords.iter().map(|c| c.sample(&mut rng)).collect());
        }
    }
    points.shuffle(&mut rng);
    Ok(points)
}

/// `n` one-dimensional points `0, step, 2*step, ...`.
pub fn gen_line(n: usize, step: f64) -> Vec<Vec<f64>> {
    (0..n).map(|i| vec![i as f64 * step]).collect()
}

/// A `rows x cols` lattice in the plane, row-major.
pub fn gen_grid(rows: usize, cols: usize, step: f64) -> Vec<Vec<f64>> {
    (0..rows)
        .flat_map(|r| (0..cols).map(move |c| vec![c as f64 * step, r as f64 * step]))
        .collect()
}

/// A random dissimilarity with independent directions. Off-diagonal entries
/// are uniform in `[0, max)`, self-distances uniform in `[0, self_max]`.
pub fn gen_asymmetric_matrix(seed: u64, n: usize, max: f64, self_max: f64) -> Result<DistanceMatrix> {
    if !(max > 0.0 && self_max >= 0.0) {
        return Err(Error::parameter("matrix ranges must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DistanceMatrix::from_fn(n, |i, j| {
        if i == j {
            rng.gen_range(0.0..=self_max)
        } else {
            rng.gen_range(0.0..max)
        }
    })
}

const DURATIONS: [f64; 5] = [0.25, 0.5, 1.0, 1.5, 2.0];

/// Melodic segments built as noisy variations of a few random motifs, so
/// the data has cluster structure under the music distance.
pub fn gen_music_segments(seed: u64, n: usize, motifs: usize, len: usize) -> Result<Vec<MusicSegment>> {
    if motifs == 0 || len == 0 {
        return Err(Error::parameter("motif count and length must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bases: Vec<(Vec<i32>, Vec<f64>)> = (0..motifs)
        .map(|_| {
            let mut pitch = rng.gen_range(55..72);
            let mut pitches = Vec::with_capacity(len);
            for _ in 0..len {
                pitches.push(pitch);
                pitch = (pitch + rng.gen_range(-5..=5)).clamp(40, 90);
            }
            let durations = (0..len).map(|_| *DURATIONS.choose(&mut rng).unwrap()).collect();
            (pitches, durations)
        })
        .collect();
    (0..n)
        .map(|_| {
            let (pitches, durations) = &bases[rng.gen_range(0..motifs)];
            let pitches = pitches
                .iter()
                .map(|&p| if rng.gen_bool(0.2) { p + rng.gen_range(-2..=2) } else { p })
                .collect();
            let durations = durations
                .iter()
                .map(|&d| if rng.gen_bool(0.1) { *DURATIONS.choose(&mut rng).unwrap() } else { d })
                .collect();
            MusicSegment::new(pitches, durations)
        })
        .collect()
}

/// Planar paths of `len` points, each a noisy copy of one of a few random
/// movement patterns (step length and turn per step).
pub fn gen_trajectories(seed: u64, n: usize, patterns: usize, len: usize) -> Result<Vec<Trajectory>> {
    if patterns == 0 || len < 2 {
        return Err(Error::parameter("need at least one pattern and two points per path"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let protos: Vec<Vec<(f64, f64)>> = (0..patterns)
        .map(|_| {
            (1..len)
                .map(|_| (rng.gen_range(0.0..40.0), rng.gen_range(-1.2..1.2)))
                .collect()
        })
        .collect();
    (0..n)
        .map(|_| {
            let proto = &protos[rng.gen_range(0..patterns)];
            let mut heading: f64 = rng.gen_range(-0.2..0.2);
            let mut at = (0.0, 0.0);
            let mut points = vec![at];
            for &(step, turn) in proto {
                heading += turn + rng.gen_range(-0.15..0.15);
                let step = (step + rng.gen_range(-3.0..3.0)).max(0.0);
                at = (at.0 + step * heading.cos(), at.1 + step * heading.sin());
                points.push(at);
            }
            Trajectory::new(points, None)
        })
        .collect()
}
