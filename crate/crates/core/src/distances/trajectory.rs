//! Fixed-timestep 2-D movement segments and their composite dissimilarity.
//!
//! ```text
//! score_align   = global^2 + 2.5 * local^2
//! score_overall = delta_length^2 + (10 * delta_angle)^2
//! distance      = sqrt(100 * bag + score_align) + score_overall
//! ```
//!
//! Alignment substitutes points at their Euclidean distance and prices gaps
//! at 100, so alignments with gaps are effectively ruled out.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_6, PI, TAU};

use serde::{Deserialize, Serialize};

use super::align::{global_alignment, local_alignment, SubstitutionModel};
use super::bag::{bag_distance, Bag};
use crate::error::{Error, Result};

pub type Point = (f64, f64);

/// Direction change between two consecutive movements. Turns are measured
/// clockwise-positive, so a right turn lands in one of the `*Right` bins.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TurnBin {
    /// (-30°, 30°]
    Forward,
    /// (30°, 90°]
    UpperRight,
    /// (90°, 150°]
    LowerRight,
    /// (150°, 180°] and (-180°, -150°)
    Backward,
    /// [-150°, -90°)
    LowerLeft,
    /// [-90°, -30°]
    UpperLeft,
}

impl TurnBin {
    /// Bins a clockwise-positive turn angle in radians, `(-π, π]`.
    pub fn from_angle(theta: f64) -> Self {
        const FIVE_PI_6: f64 = 5.0 * FRAC_PI_6;
        if theta > -FRAC_PI_6 && theta <= FRAC_PI_6 {
            TurnBin::Forward
        } else if theta > FRAC_PI_6 && theta <= FRAC_PI_2 {
            TurnBin::UpperRight
        } else if theta > FRAC_PI_2 && theta <= FIVE_PI_6 {
            TurnBin::LowerRight
        } else if !(-FIVE_PI_6..=FIVE_PI_6).contains(&theta) {
            TurnBin::Backward
        } else if theta < -FRAC_PI_2 {
            TurnBin::LowerLeft
        } else {
            TurnBin::UpperLeft
        }
    }
}

/// A quantized movement length paired with the turn that follows it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MovementTurn {
    /// Movement length in multiples of the quantization resolution.
    pub length_steps: u32,
    pub turn: TurnBin,
}

/// A movement segment, translated so it starts at the origin and optionally
/// rotated into a common frame.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    points: Vec<Point>,
}

impl Trajectory {
    /// Normalizes `points`: translation to the origin, then a counterclockwise
    /// rotation by `rotate` radians when given.
    pub fn new(points: Vec<Point>, rotate: Option<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::parameter(format!(
                "a trajectory needs at least 2 points, got {}",
                points.len()
            )));
        }
        if points.iter().any(|(x, y)| !(x.is_finite() && y.is_finite())) {
            return Err(Error::parameter("trajectory coordinates must be finite"));
        }
        let (x0, y0) = points[0];
        let (sin, cos) = rotate.unwrap_or(0.0).sin_cos();
        let points = points
            .into_iter()
            .map(|(x, y)| {
                let (dx, dy) = (x - x0, y - y0);
                match rotate {
                    Some(_) => (dx * cos - dy * sin, dx * sin + dy * cos),
                    None => (dx, dy),
                }
            })
            .collect();
        Ok(Trajectory { points })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryFeatures {
    pub movement_turns: Bag<MovementTurn>,
    pub total_length: f64,
    /// Direction of the net displacement, `atan2(dy, dx)`; 0 when the segment
    /// ends where it started.
    pub net_angle: f64,
}

fn norm((x, y): Point) -> f64 {
    x.hypot(y)
}

/// Movement-turn bag and summary geometry. Zero-length movements are
/// skipped, so a pause does not break the turn between the movements around
/// it.
pub fn trajectory_features(t: &Trajectory, resolution: f64) -> TrajectoryFeatures {
    let movements: Vec<Point> = t
        .points
        .windows(2)
        .map(|w| (w[1].0 - w[0].0, w[1].1 - w[0].1))
        .collect();
    let total_length = movements.iter().map(|&m| norm(m)).sum();
    let moving: Vec<Point> = movements.into_iter().filter(|&m| norm(m) > 0.0).collect();

    let movement_turns = moving
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            let cross = a.0 * b.1 - a.1 * b.0;
            let dot = a.0 * b.0 + a.1 * b.1;
            // atan2 is counterclockwise-positive; right turns are positive here
            let turn = -cross.atan2(dot);
            let turn = if turn == -PI { PI } else { turn };
            MovementTurn {
                length_steps: (norm(a) / resolution + 0.5).floor() as u32,
                turn: TurnBin::from_angle(turn),
            }
        })
        .collect();

    let &(ex, ey) = t.points.last().expect("at least two points");
    let net_angle = if ex == 0.0 && ey == 0.0 {
        0.0
    } else {
        ey.atan2(ex)
    };
    TrajectoryFeatures {
        movement_turns,
        total_length,
        net_angle,
    }
}

/// Absolute angle difference wrapped to `[0, π]`.
pub fn angle_difference(a: f64, b: f64) -> f64 {
    let d = (a - b).abs() % TAU;
    if d > PI {
        TAU - d
    } else {
        d
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrajectoryModel {
    pub gap: f64,
    pub local_offset: f64,
    pub bag_weight: f64,
    pub local_weight: f64,
    pub angle_weight: f64,
    /// Movement-length quantization, in meters.
    pub resolution: f64,
}

impl Default for TrajectoryModel {
    fn default() -> Self {
        TrajectoryModel {
            gap: 100.0,
            local_offset: 100.0,
            bag_weight: 100.0,
            local_weight: 2.5,
            angle_weight: 10.0,
            resolution: 5.0,
        }
    }
}

pub fn point_distance(a: &Point, b: &Point) -> f64 {
    (a.0 - b.0).hypot(a.1 - b.1)
}

impl TrajectoryModel {
    pub fn substitution(&self) -> SubstitutionModel<fn(&Point, &Point) -> f64> {
        SubstitutionModel::new(point_distance as fn(&Point, &Point) -> f64, self.gap)
            .with_local_offset(self.local_offset)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectorySample {
    pub trajectory: Trajectory,
    pub features: TrajectoryFeatures,
}

impl TrajectorySample {
    pub fn new(trajectory: Trajectory, model: &TrajectoryModel) -> Self {
        let features = trajectory_features(&trajectory, model.resolution);
        TrajectorySample {
            trajectory,
            features,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectoryScores {
    pub global: f64,
    pub local: f64,
    pub bag: f64,
    pub delta_length: f64,
    pub delta_angle: f64,
}

impl TrajectoryScores {
    pub fn alignment_score(&self, model: &TrajectoryModel) -> f64 {
        self.global.powi(2) + model.local_weight * self.local.powi(2)
    }

    pub fn overall_score(&self, model: &TrajectoryModel) -> f64 {
        self.delta_length.powi(2) + (model.angle_weight * self.delta_angle).powi(2)
    }

    pub fn combined(&self, model: &TrajectoryModel) -> f64 {
        (model.bag_weight * self.bag + self.alignment_score(model)).sqrt()
            + self.overall_score(model)
    }
}

pub fn trajectory_scores(
    a: &TrajectorySample,
    b: &TrajectorySample,
    model: &TrajectoryModel,
) -> Result<TrajectoryScores> {
    let (pa, pb) = (a.trajectory.points(), b.trajectory.points());
    if pa.len() != pb.len() {
        return Err(Error::parameter(format!(
            "trajectories of different lengths ({} vs {})",
            pa.len(),
            pb.len()
        )));
    }
    let sub = model.substitution();
    Ok(TrajectoryScores {
        global: global_alignment(pa, pb, &sub),
        local: local_alignment(pa, pb, &sub),
        bag: bag_distance(&a.features.movement_turns, &b.features.movement_turns),
        delta_length: (a.features.total_length - b.features.total_length).abs(),
        delta_angle: angle_difference(a.features.net_angle, b.features.net_angle),
    })
}

/// Composite distance between two trajectories of equal length.
pub fn trajectory_distance(a: &Trajectory, b: &Trajectory, model: &TrajectoryModel) -> Result<f64> {
    trajectory_scores(
        &TrajectorySample::new(a.clone(), model),
        &TrajectorySample::new(b.clone(), model),
        model,
    )
    .map(|s| s.combined(model))
}
