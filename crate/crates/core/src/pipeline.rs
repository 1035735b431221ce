//! End-to-end junction detection on one scan.

use std::time::Instant;

use crate::eigen::{count_zero_eigenvalues, eigendecompose, spectral_embed};
use crate::error::{Error, Result};
use crate::graph::{build_adjacency, normalized_laplacian};
use crate::kmeans::kmeans_best_of;
use crate::scan_sim::{builtin_scenario, cast_scan, LidarConfig};
use crate::types::{DetectorParams, JunctionReport, PointCloud};

/// Number of leading eigenvalues kept in the report.
pub const EIGENVALUE_HEAD: usize = 10;

/// Similarity graph, normalized Laplacian, eigendecomposition, zero-eigenvalue
/// count `k`, k-dimensional embedding, then k-means++ on the embedding rows.
pub fn detect_junctions(cloud: &PointCloud, params: &DetectorParams) -> Result<JunctionReport> {
    let params = params.validate()?;
    if cloud.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let start = Instant::now();
    let n = cloud.len();

    let graph = build_adjacency(cloud, params.sigma, params.similarity_floor)?;
    let laplacian = normalized_laplacian(&graph);
    let spectrum = eigendecompose(&laplacian)?;

    // λ₁ is zero up to round-off for any graph Laplacian; never report fewer
    // than one cluster for a non-empty scan.
    let k = count_zero_eigenvalues(&spectrum, params.zero_eig_tol).max(1);
    let embedding = spectral_embed(&spectrum, k, true)?;
    let clustering = kmeans_best_of(
        embedding.matrix(),
        k,
        params.kmeans_restarts,
        params.rng_seed,
        params.kmeans_max_iter,
    )?;

    let runtime_seconds = start.elapsed().as_secs_f64();
    Ok(JunctionReport {
        num_junctions: k,
        labels: clustering.labels,
        eigenvalues_head: spectrum.eigenvalues()[..n.min(EIGENVALUE_HEAD)].to_vec(),
        objective: clustering.objective,
        runtime_seconds,
        all_isolated: n > 1 && k == n,
        params,
    })
}

/// Scans a built-in scenario with the default 360-beam, 15 m lidar plus
/// optional radial noise, then runs [`detect_junctions`]. `seed` drives both
/// the scan noise and the clustering, replacing `params.rng_seed`. Returns the
/// report with the scenario's ground-truth junction count.
pub fn detect_on_scenario(
    name: &str,
    params: &DetectorParams,
    noise_stddev: f64,
    seed: u64,
) -> Result<(JunctionReport, usize)> {
    let (env, expected) = builtin_scenario(name)?;
    let cfg = LidarConfig {
        noise_stddev,
        ..Default::default()
    };
    let cloud = cast_scan(&env, &cfg, seed)?;
    let params = DetectorParams {
        rng_seed: seed,
        ..*params
    };
    let report = detect_junctions(&cloud, &params)?;
    Ok((report, expected))
}
