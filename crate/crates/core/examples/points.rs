//! δ-medoids, one-shot and k-centers on a 10-dimensional Gaussian mixture.

use repsel::eval::{gen_multimodal_gaussian, GaussianMixture};
use repsel::{build_oracle, coverage_report, Algorithm, CachePolicy, Dataset, DistanceKind};
use repsel::{DistanceModels, SelectorConfig};

fn main() -> repsel::Result<()> {
    let points = gen_multimodal_gaussian(7, &GaussianMixture::ten_dims())?;
    let data = Dataset::Points(points);
    let oracle = build_oracle(
        &data,
        DistanceKind::Euclidean,
        &DistanceModels::default(),
        CachePolicy::Unbounded,
    )?;

    let delta = 4.0;
    let config = SelectorConfig::new(delta).with_seed(1);
    for alg in [Algorithm::OneShot, Algorithm::DeltaMedoids, Algorithm::KCenters] {
        let sol = alg.run(&oracle, &config, None)?;
        let report = coverage_report(&sol, &oracle, delta)?;
        println!(
            "{:<14} reps={:<4} avg={:.3} max={:.3} legal={}",
            alg.name(),
            report.representative_count,
            report.average_distance,
            report.max_distance,
            report.is_legal()
        );
    }
    Ok(())
}
