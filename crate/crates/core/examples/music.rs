//! Selecting representative melodic segments with the composite music
//! distance. Self-distances are positive and the triangle inequality can fail.

use repsel::distances::{music_distance, MusicModel, MusicSegment};
use repsel::eval::synth::gen_music_segments;
use repsel::{build_oracle, Algorithm, CachePolicy, Dataset, DistanceKind, DistanceModels};
use repsel::{SampleId, SelectorConfig};

fn main() -> repsel::Result<()> {
    let model = MusicModel::default();
    let a = MusicSegment::new(vec![60, 64, 67], vec![1.0, 1.0, 2.0])?;
    let b = a.clone().transposed(2);
    println!("d(a, a) = {:.4}", music_distance(&a, &a, &model));
    println!("d(a, a+2) = {:.4}", music_distance(&a, &b, &model));

    let segments = gen_music_segments(3, 120, 6, 8)?;
    let data = Dataset::Sequences(segments);
    let oracle = build_oracle(&data, DistanceKind::Music, &DistanceModels::default(), CachePolicy::Unbounded)?;

    let sol = Algorithm::DeltaMedoids.run(&oracle, &SelectorConfig::new(5.0), None)?;
    println!("{} representatives for {} segments", sol.representatives.len(), oracle.len());
    if let Dataset::Sequences(segs) = &data {
        for &SampleId(r) in sol.representatives.iter().take(5) {
            println!("  #{r}: {:?}", segs[r].pitches());
        }
    }
    Ok(())
}
