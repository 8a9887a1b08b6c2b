//! A small repeated-subset benchmark, printed as CSV.

use repsel::eval::{benchmark_run, gen_multimodal_gaussian, BenchDataset, BenchSpec, GaussianMixture};
use repsel::{build_oracle, Algorithm, CachePolicy, Dataset, DistanceKind, DistanceModels};

fn main() -> repsel::Result<()> {
    let mixture = GaussianMixture {
        samples_per_mode: 100,
        ..GaussianMixture::ten_dims()
    };
    let datasets = vec![BenchDataset {
        name: "gauss10".into(),
        data: Dataset::Points(gen_multimodal_gaussian(5, &mixture)?),
        distance: DistanceKind::Euclidean,
    }];
    let spec = BenchSpec {
        algorithms: vec![Algorithm::DeltaMedoids, Algorithm::KCenters, Algorithm::KMedoidsMinK],
        deltas: vec![4.0, 5.0],
        repetitions: 3,
        subset_size: 200,
        seed: 1,
        restarts: 3,
        merge_refine: false,
        timing: false,
    };
    let models = DistanceModels::default();
    let table = benchmark_run(
        &datasets,
        |data, kind| build_oracle(data, kind, &models, CachePolicy::Unbounded),
        &spec,
    )?;
    print!("{}", table.to_csv()?);
    Ok(())
}
