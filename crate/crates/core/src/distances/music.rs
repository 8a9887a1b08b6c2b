//! Melodic segments and their composite dissimilarity.
//!
//! The measure combines global and local alignment of the pitch sequences
//! with five bag distances:
//!
//! ```text
//! score_alignment = global^2 + 2 * local^2
//! score_bag       = rhythm^2 + interval^2 + step^2 + pitch^2 + pitch_class^2
//! distance        = sqrt(10 * score_bag + score_alignment)
//! ```
//!
//! `local` is the local-alignment distance `1 / (1 + H*)`, so even a segment
//! compared with itself has a small positive distance.

use serde::{Deserialize, Serialize};

use super::align::{global_alignment, local_alignment, SubstitutionModel};
use super::bag::{bag_distance, Bag};
use crate::error::{Error, Result};

/// A note duration used as a bag token; compared by exact value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DurationKey(u64);

impl DurationKey {
    pub fn new(beats: f64) -> Self {
        // +0.0 and -0.0 must not form different tokens
        DurationKey((beats + 0.0).to_bits())
    }

    pub fn beats(self) -> f64 {
        f64::from_bits(self.0)
    }
}

/// A monophonic segment: MIDI pitches with durations in beats.
#[derive(Clone, Debug, PartialEq)]
pub struct MusicSegment {
    pitches: Vec<i32>,
    durations: Vec<f64>,
}

impl MusicSegment {
    pub fn new(pitches: Vec<i32>, durations: Vec<f64>) -> Result<Self> {
        if pitches.is_empty() {
            return Err(Error::parameter("a music segment needs at least one note"));
        }
        if pitches.len() != durations.len() {
            return Err(Error::parameter(format!(
                "{} pitches but {} durations",
                pitches.len(),
                durations.len()
            )));
        }
        if let Some(d) = durations.iter().find(|d| !(d.is_finite() && **d > 0.0)) {
            return Err(Error::parameter(format!("duration {d} is not positive")));
        }
        Ok(MusicSegment { pitches, durations })
    }

    /// Shifts every pitch by `semitones` (e.g. to bring the segment to C).
    pub fn transposed(mut self, semitones: i32) -> Self {
        for p in &mut self.pitches {
            *p += semitones;
        }
        self
    }

    pub fn pitches(&self) -> &[i32] {
        &self.pitches
    }

    pub fn durations(&self) -> &[f64] {
        &self.durations
    }

    pub fn len(&self) -> usize {
        self.pitches.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MusicFeatures {
    pub pitch: Bag<i32>,
    /// Pitch modulo 12.
    pub pitch_class: Bag<i32>,
    /// Absolute difference between consecutive pitches.
    pub interval: Bag<i32>,
    /// Signed difference between consecutive pitches.
    pub step: Bag<i32>,
    /// Pairs of consecutive durations.
    pub rhythm: Bag<(DurationKey, DurationKey)>,
}

pub fn music_features(segment: &MusicSegment) -> MusicFeatures {
    let p = &segment.pitches;
    let d = &segment.durations;
    MusicFeatures {
        pitch: p.iter().copied().collect(),
        pitch_class: p.iter().map(|x| x.rem_euclid(12)).collect(),
        interval: p.windows(2).map(|w| (w[1] - w[0]).abs()).collect(),
        step: p.windows(2).map(|w| w[1] - w[0]).collect(),
        rhythm: d
            .windows(2)
            .map(|w| (DurationKey::new(w[0]), DurationKey::new(w[1])))
            .collect(),
    }
}

/// Weights and alignment prices for [`music_distance`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MusicModel {
    pub gap: f64,
    pub local_offset: f64,
    pub bag_weight: f64,
    pub local_weight: f64,
    /// Also treat compound thirds and fifths (an octave or more apart) as
    /// consonant.
    pub compound_intervals: bool,
}

impl Default for MusicModel {
    fn default() -> Self {
        MusicModel {
            gap: 1.5,
            local_offset: 1.5,
            bag_weight: 10.0,
            local_weight: 2.0,
            compound_intervals: false,
        }
    }
}

/// Substitution cost between two MIDI pitches: 0 for the same note, 1 for a
/// third (3 or 4 semitones) or a fifth (7 semitones), and `1.3^(|a-b| / 4)`
/// otherwise.
pub fn music_substitution_cost(a: i32, b: i32) -> f64 {
    substitution_cost(a, b, false)
}

fn substitution_cost(a: i32, b: i32, compound: bool) -> f64 {
    let diff = (a - b).abs();
    if diff == 0 {
        return 0.0;
    }
    let interval = if compound && diff > 12 { diff % 12 } else { diff };
    match interval {
        3 | 4 | 7 => 1.0,
        _ => 1.3f64.powf(diff as f64 / 4.0),
    }
}

impl MusicModel {
    pub fn cost(&self, a: i32, b: i32) -> f64 {
        substitution_cost(a, b, self.compound_intervals)
    }

    pub fn substitution(&self) -> SubstitutionModel<impl Fn(&i32, &i32) -> f64 + '_> {
        SubstitutionModel::new(move |a: &i32, b: &i32| self.cost(*a, *b), self.gap)
            .with_local_offset(self.local_offset)
    }
}

/// A segment together with its precomputed bags.
#[derive(Clone, Debug, PartialEq)]
pub struct MusicSample {
    pub segment: MusicSegment,
    pub features: MusicFeatures,
}

impl From<MusicSegment> for MusicSample {
    fn from(segment: MusicSegment) -> Self {
        let features = music_features(&segment);
        MusicSample { segment, features }
    }
}

/// The individual terms of the music distance, for inspection.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MusicScores {
    pub global: f64,
    pub local: f64,
    pub rhythm: f64,
    pub interval: f64,
    pub step: f64,
    pub pitch: f64,
    pub pitch_class: f64,
}

impl MusicScores {
    pub fn bag_score(&self) -> f64 {
        self.rhythm.powi(2)
            + self.interval.powi(2)
            + self.step.powi(2)
            + self.pitch.powi(2)
            + self.pitch_class.powi(2)
    }

    pub fn alignment_score(&self, model: &MusicModel) -> f64 {
        self.global.powi(2) + model.local_weight * self.local.powi(2)
    }

    pub fn combined(&self, model: &MusicModel) -> f64 {
        (model.bag_weight * self.bag_score() + self.alignment_score(model)).sqrt()
    }
}

pub fn music_scores(a: &MusicSample, b: &MusicSample, model: &MusicModel) -> MusicScores {
    let sub = model.substitution();
    let (pa, pb) = (a.segment.pitches(), b.segment.pitches());
    let (fa, fb) = (&a.features, &b.features);
    MusicScores {
        global: global_alignment(pa, pb, &sub),
        local: local_alignment(pa, pb, &sub),
        rhythm: bag_distance(&fa.rhythm, &fb.rhythm),
        interval: bag_distance(&fa.interval, &fb.interval),
        step: bag_distance(&fa.step, &fb.step),
        pitch: bag_distance(&fa.pitch, &fb.pitch),
        pitch_class: bag_distance(&fa.pitch_class, &fb.pitch_class),
    }
}

pub fn music_sample_distance(a: &MusicSample, b: &MusicSample, model: &MusicModel) -> f64 {
    music_scores(a, b, model).combined(model)
}

/// Composite distance between two segments.
pub fn music_distance(a: &MusicSegment, b: &MusicSegment, model: &MusicModel) -> f64 {
    music_sample_distance(
        &MusicSample::from(a.clone()),
        &MusicSample::from(b.clone()),
        model,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substitution_cost_examples() {
        assert_eq!(music_substitution_cost(60, 60), 0.0);
        assert_eq!(music_substitution_cost(60, 64), 1.0);
        assert_eq!(music_substitution_cost(60, 63), 1.0);
        assert_eq!(music_substitution_cost(67, 60), 1.0);
        assert_eq!(music_substitution_cost(60, 66), 1.3f64.powf(1.5));
        assert!((music_substitution_cost(60, 66) - 1.4822).abs() < 1e-4);
        // a tenth is not a third unless compound intervals are enabled
        assert_eq!(music_substitution_cost(60, 76), 1.3f64.powf(4.0));
        let compound = MusicModel {
            compound_intervals: true,
            ..MusicModel::default()
        };
        assert_eq!(compound.cost(60, 76), 1.0);
        assert_eq!(compound.cost(60, 72), 1.3f64.powf(3.0));
    }

    #[test]
    fn features_by_definition() {
        let s = MusicSegment::new(vec![60, 64, 60], vec![1.0, 1.0, 2.0]).unwrap();
        let f = music_features(&s);
        assert_eq!(f.pitch, [60, 60, 64].into_iter().collect());
        assert_eq!(f.pitch_class, [0, 0, 4].into_iter().collect());
        assert_eq!(f.interval, [4, 4].into_iter().collect());
        assert_eq!(f.step, [4, -4].into_iter().collect());
        let k = DurationKey::new;
        assert_eq!(f.rhythm, [(k(1.0), k(1.0)), (k(1.0), k(2.0))].into_iter().collect());
    }

    #[test]
    fn short_segments() {
        let one = music_features(&MusicSegment::new(vec![62], vec![0.5]).unwrap());
        assert_eq!(one.pitch.len(), 1);
        assert_eq!(one.pitch_class, [2].into_iter().collect());
        assert!(one.interval.is_empty() && one.step.is_empty() && one.rhythm.is_empty());

        let rep = music_features(&MusicSegment::new(vec![60, 60], vec![1.0, 1.0]).unwrap());
        assert_eq!(rep.interval, [0].into_iter().collect());
        assert_eq!(rep.step, [0].into_iter().collect());
    }

    #[test]
    fn invalid_segments() {
        assert!(MusicSegment::new(vec![], vec![]).is_err());
        assert!(MusicSegment::new(vec![60], vec![1.0, 2.0]).is_err());
        assert!(MusicSegment::new(vec![60], vec![0.0]).is_err());
    }

    #[test]
    fn transposition_shifts_pitch_bag_only() {
        let a = MusicSegment::new(vec![60, 64, 67], vec![1.0, 0.5, 0.5]).unwrap();
        let b = a.clone().transposed(12);
        let (fa, fb) = (music_features(&a), music_features(&b));
        assert_ne!(fa.pitch, fb.pitch);
        assert_eq!(fa.pitch_class, fb.pitch_class);
        assert_eq!(fa.step, fb.step);
    }
}
