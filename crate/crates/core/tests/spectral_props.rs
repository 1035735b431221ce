mod common;

use common::{blob_cloud, same_partition};
use junction_core::oracles::connected_components;
use junction_core::{
    build_adjacency, count_zero_eigenvalues, eigendecompose, normalized_laplacian, spectral_embed,
    Point2, PointCloud,
};
use proptest::prelude::*;

fn cloud_strategy(max_n: usize, extent: f64) -> impl Strategy<Value = PointCloud> {
    prop::collection::vec((-extent..extent, -extent..extent), 1..max_n)
        .prop_map(|xy| PointCloud::from_xy(&xy).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laplacian_null_vector_and_symmetry(cloud in cloud_strategy(40, 6.0), sigma in 0.1f64..5.0) {
        let g = build_adjacency(&cloud, sigma, 1e-8).unwrap();
        let l = normalized_laplacian(&g);
        prop_assert!(l.entries().asymmetry() <= 1e-12);
        let v: Vec<f64> = g.degrees().iter().map(|d| d.sqrt()).collect();
        let lv = l.entries().mul_vec(&v);
        let norm = |x: &[f64]| x.iter().map(|a| a * a).sum::<f64>().sqrt();
        prop_assert!(norm(&lv) <= 1e-9 * norm(&v));
        for i in 0..cloud.len() {
            let d = l.entries()[(i, i)];
            prop_assert!((0.0..=1.0).contains(&d));
            prop_assert!(g.degrees()[i] >= 1.0);
        }
    }

    #[test]
    fn spectrum_bounds_and_decomposition_quality(cloud in cloud_strategy(60, 6.0)) {
        let l = normalized_laplacian(&build_adjacency(&cloud, 1.5, 1e-8).unwrap());
        let dec = eigendecompose(&l).unwrap();
        let ev = dec.eigenvalues();
        prop_assert!(ev.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(ev[0] >= -1e-9 && ev[0] <= 1e-9);
        prop_assert!(*ev.last().unwrap() <= 2.0 + 1e-9);
        prop_assert!(dec.orthonormality_error() <= 1e-8);
        prop_assert!(dec.reconstruct().max_abs_diff(l.entries()) <= 1e-8);
    }

    #[test]
    fn weights_invariant_under_rigid_motion(
        cloud in cloud_strategy(30, 5.0),
        angle in -3.2f64..3.2,
        dx in -100.0f64..100.0,
        dy in -100.0f64..100.0,
    ) {
        let moved = cloud.rigid_transform(angle, Point2::new(dx, dy)).unwrap();
        let a = build_adjacency(&cloud, 1.5, 0.0).unwrap();
        let b = build_adjacency(&moved, 1.5, 0.0).unwrap();
        prop_assert!(a.weights().max_abs_diff(b.weights()) <= 1e-12);
    }

    #[test]
    fn larger_sigma_never_increases_weights(cloud in cloud_strategy(25, 4.0), s1 in 0.1f64..3.0, ds in 0.0f64..3.0) {
        let a = build_adjacency(&cloud, s1, 1e-8).unwrap();
        let b = build_adjacency(&cloud, s1 + ds, 1e-8).unwrap();
        for (wa, wb) in a.weights().as_slice().iter().zip(b.weights().as_slice()) {
            prop_assert!(wb <= wa);
            prop_assert!((0.0..=1.0).contains(wb));
        }
    }

    #[test]
    fn spectrum_invariant_under_permutation(cloud in cloud_strategy(40, 6.0), seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let mut perm: Vec<usize> = (0..cloud.len()).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let spec = |c: &PointCloud| {
            eigendecompose(&normalized_laplacian(&build_adjacency(c, 1.5, 1e-8).unwrap()))
                .unwrap()
                .eigenvalues()
                .to_vec()
        };
        let (a, b) = (spec(&cloud), spec(&cloud.permuted(&perm)));
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-9);
        }
    }

    #[test]
    fn zero_multiplicity_matches_components(seed in any::<u64>(), blobs in 1usize..=6) {
        let (cloud, _) = blob_cloud(seed, blobs, 120);
        let g = build_adjacency(&cloud, 1.5, 1e-8).unwrap();
        let oracle = connected_components(&g);
        prop_assert_eq!(oracle.count, blobs);
        let dec = eigendecompose(&normalized_laplacian(&g)).unwrap();
        prop_assert_eq!(count_zero_eigenvalues(&dec, 1e-8), oracle.count);
    }
}

#[test]
fn two_component_embedding_is_piecewise_constant() {
    for seed in 0..20 {
        let (cloud, _) = blob_cloud(seed, 2, 80);
        let g = build_adjacency(&cloud, 1.5, 1e-8).unwrap();
        let comps = connected_components(&g);
        assert_eq!(comps.count, 2);
        let dec = eigendecompose(&normalized_laplacian(&g)).unwrap();
        let u = spectral_embed(&dec, 2, true).unwrap();

        let dist = |i: usize, j: usize| {
            u.row(i)
                .iter()
                .zip(u.row(j))
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
        };
        for i in 0..cloud.len() {
            for j in 0..cloud.len() {
                if comps.labels[i] == comps.labels[j] {
                    assert!(dist(i, j) <= 1e-6, "seed {seed}: rows {i},{j} differ");
                } else {
                    assert!(dist(i, j) > 0.5, "seed {seed}: rows {i},{j} coincide");
                }
            }
        }
        // Rounding the embedding rows recovers the components exactly.
        let rounded: Vec<usize> = (0..cloud.len())
            .map(|i| (0..cloud.len()).find(|&j| dist(i, j) <= 1e-6).unwrap())
            .collect();
        assert!(same_partition(&rounded, &comps.labels));
    }
}

#[test]
fn single_blob_has_one_zero_eigenvalue() {
    let (cloud, _) = blob_cloud(99, 1, 50);
    let dec = eigendecompose(&normalized_laplacian(
        &build_adjacency(&cloud, 1.5, 1e-8).unwrap(),
    ))
    .unwrap();
    assert_eq!(count_zero_eigenvalues(&dec, 1e-8), 1);
}
