#![allow(dead_code)]

use junction_core::{Point2, PointCloud};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Scattered blobs on a 10 m grid: radius <= 1.5 m, centers jittered by at
/// most 1 m, so points of different blobs are at least 5 m apart.
/// Returns the cloud and the blob index of every point.
pub fn blob_cloud(seed: u64, blobs: usize, max_points: usize) -> (PointCloud, Vec<usize>) {
    assert!((1..=16).contains(&blobs));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cells: Vec<(i32, i32)> = (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).collect();
    for i in (1..cells.len()).rev() {
        cells.swap(i, rng.random_range(0..=i));
    }
    let per_blob = (max_points / blobs).max(1);
    let mut points = Vec::new();
    let mut owner = Vec::new();
    for (b, &(ci, cj)) in cells.iter().take(blobs).enumerate() {
        let center = Point2::new(
            10.0 * ci as f64 + rng.random_range(-1.0..1.0),
            10.0 * cj as f64 + rng.random_range(-1.0..1.0),
        );
        let radius = rng.random_range(0.2..1.5);
        let count = rng.random_range(1..=per_blob);
        for _ in 0..count {
            let r = radius * rng.random::<f64>().sqrt();
            let a = rng.random_range(0.0..std::f64::consts::TAU);
            points.push(center + Point2::from_angle(a) * r);
            owner.push(b);
        }
    }
    (PointCloud::new(points).unwrap(), owner)
}

pub fn same_partition(a: &[usize], b: &[usize]) -> bool {
    junction_core::canonical_partition(a) == junction_core::canonical_partition(b)
}
