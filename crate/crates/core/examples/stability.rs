//! How much the representative set moves when the input order is shuffled.

use repsel::eval::stability::DEFAULT_BIN_WIDTH;
use repsel::eval::{gen_multimodal_gaussian, stability_experiment, GaussianMixture};
use repsel::{Algorithm, DistanceOracle, SelectorConfig};

fn main() -> repsel::Result<()> {
    let mixture = GaussianMixture {
        dims: 3,
        modes: 5,
        samples_per_mode: 40,
        var_range: (0.0125, 0.05),
        ..GaussianMixture::ten_dims()
    };
    let points = gen_multimodal_gaussian(2, &mixture)?;
    let oracle = DistanceOracle::from_fn(points.len(), move |a, b| {
        repsel::distances::euclidean_distance(&points[a.0], &points[b.0]).unwrap()
    });

    let config = SelectorConfig::new(1.5);
    for alg in [Algorithm::DeltaMedoids, Algorithm::OneShot, Algorithm::KCenters] {
        let report = stability_experiment(&oracle, alg, &config, None, 10, 0, DEFAULT_BIN_WIDTH)?;
        println!("{:<14} mean overlap {:.3}", alg.name(), report.mean_overlap);
        for bin in report.histogram.iter().filter(|b| b.count > 0) {
            println!("    [{:.2}, {:.2}) {}", bin.lower, bin.upper, bin.count);
        }
    }
    Ok(())
}
