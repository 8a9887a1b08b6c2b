//! Representative movement patterns among synthetic trajectories.

use repsel::eval::synth::gen_trajectories;
use repsel::{build_oracle, Algorithm, CachePolicy, Dataset, DistanceKind, DistanceModels};
use repsel::SelectorConfig;

fn main() -> repsel::Result<()> {
    let data = Dataset::Trajectories(gen_trajectories(11, 150, 5, 10)?);
    let oracle = build_oracle(
        &data,
        DistanceKind::Trajectory,
        &DistanceModels::default(),
        CachePolicy::Unbounded,
    )?;

    for delta in [150.0, 250.0, 400.0] {
        let sol = Algorithm::DeltaMedoids.run(&oracle, &SelectorConfig::new(delta), None)?;
        println!(
            "delta={delta:<5} reps={:<3} avg={:.2} iterations={}",
            sol.representatives.len(),
            sol.average_distance(),
            sol.stats.iterations
        );
    }
    Ok(())
}
