//! Comparing heuristic cover sizes against the exact minimum on a small
//! instance.

use repsel::exact::{exact_min_cover, opt_max_for_k};
use repsel::eval::synth::gen_asymmetric_matrix;
use repsel::{Algorithm, DistanceOracle, SelectorConfig};

fn main() -> repsel::Result<()> {
    let delta = 0.35;
    let oracle = DistanceOracle::from_matrix(gen_asymmetric_matrix(4, 14, 1.0, delta)?);

    let best = exact_min_cover(&oracle, delta, 64)?;
    println!(
        "exact minimum cover: {} {:?} ({} nodes explored)",
        best.optimum, best.witness, best.explored
    );
    let config = SelectorConfig::new(delta).with_seed(3);
    for alg in [Algorithm::OneShot, Algorithm::DeltaMedoids, Algorithm::KCenters, Algorithm::KMedoidsMinK] {
        let sol = alg.run(&oracle, &config, None)?;
        println!("{:<14} {}", alg.name(), sol.representative_set().len());
    }
    let radius = opt_max_for_k(&oracle, best.optimum, 64)?;
    println!("best max distance with k={}: {:.4}", best.optimum, radius.optimum);
    Ok(())
}
