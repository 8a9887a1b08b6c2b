//! Selection from a hand-written asymmetric matrix with a non-zero diagonal.
//!
//! Row `x`, column `c` holds `d(x, c)`: the cost of letting `c` stand in for `x`.

use repsel::selectors::merge_close_clusters;
use repsel::{Algorithm, DistanceMatrix, DistanceOracle, SampleId, SelectorConfig};

fn ids(reps: &[SampleId]) -> Vec<usize> {
    reps.iter().map(|r| r.0).collect()
}

fn main() -> repsel::Result<()> {
    let matrix = DistanceMatrix::from_rows(vec![
        vec![0.2, 0.3, 0.9, 0.8, 0.9],
        vec![0.9, 0.1, 0.4, 0.9, 0.9],
        vec![0.9, 0.5, 0.3, 0.9, 0.4],
        vec![0.7, 0.9, 0.9, 0.0, 0.9],
        vec![0.9, 0.9, 0.3, 0.9, 0.5],
    ])?;
    let oracle = DistanceOracle::from_matrix(matrix);
    let delta = 0.5;

    let config = SelectorConfig::new(delta);
    let sol = Algorithm::DeltaMedoids.run(&oracle, &config, None)?;
    println!("delta-medoids: {:?}", ids(&sol.representatives));
    for (x, rep) in sol.assignment.iter().enumerate() {
        println!("  {x} -> {} ({})", rep.0, sol.assigned_distance[x]);
    }

    let merged = merge_close_clusters(&sol, &oracle, delta)?;
    println!("after merging: {:?}", ids(&merged.representatives));
    Ok(())
}
