//! K-means++ seeding and Lloyd refinement over spectral embedding rows.
//!
//! Everything is deterministic for a given seed: restarts draw their seeds
//! from a splitmix64 stream, assignment ties go to the lowest centroid index,
//! and Lloyd stops at an exact label fixed point.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::oracles::objective_eval;

/// Largest instance [`exhaustive_kmeans_oracle`] will enumerate.
pub const ORACLE_MAX_N: usize = 10;
pub const ORACLE_MAX_K: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterAssignment {
    /// Cluster id per row, each in `0..k`. No cluster is empty.
    pub labels: Vec<usize>,
    /// k×dim matrix of centroids.
    pub centroids: DenseMatrix,
    /// `Σ_i |u_i - c_{label_i}|²`.
    pub objective: f64,
    /// Centroid updates performed.
    pub iterations: usize,
    /// True when labels reached a fixed point before `max_iter`.
    pub converged: bool,
    /// Objective after the initial assignment and after every centroid
    /// update. Non-increasing.
    pub objective_trace: Vec<f64>,
}

impl ClusterAssignment {
    pub fn k(&self) -> usize {
        self.centroids.rows()
    }
}

fn check_shape(rows: &DenseMatrix, k: usize) -> Result<()> {
    let n = rows.rows();
    if k == 0 || k > n {
        return Err(Error::param(
            "k",
            format!("cluster count must be in 1..={n}, got {k}"),
        ));
    }
    if !rows.is_finite() {
        return Err(Error::param("rows", "embedding rows must be finite"));
    }
    Ok(())
}

#[inline]
fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Seed for restart `index`, derived from `base` via splitmix64.
pub fn restart_seed(base: u64, index: usize) -> u64 {
    let mut z = base.wrapping_add(
        (index as u64)
            .wrapping_add(1)
            .wrapping_mul(0x9E37_79B9_7F4A_7C15),
    );
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Picks `k` row indices by D² sampling.
fn seed_indices(rows: &DenseMatrix, k: usize, rng: &mut impl Rng) -> Vec<usize> {
    let n = rows.rows();
    let mut chosen = Vec::with_capacity(k);
    chosen.push(rng.random_range(0..n));
    let mut nearest: Vec<f64> = (0..n)
        .map(|i| sq_dist(rows.row(i), rows.row(chosen[0])))
        .collect();

    while chosen.len() < k {
        let total: f64 = nearest.iter().sum();
        let next = if total > 0.0 && total.is_finite() {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = None;
            for (i, &w) in nearest.iter().enumerate() {
                if w <= 0.0 {
                    continue;
                }
                acc += w;
                pick = Some(i);
                if acc > target {
                    break;
                }
            }
            pick.expect("positive total implies a positive weight")
        } else {
            // Every row coincides with a chosen centroid: uniform over the
            // rows not picked yet.
            let remaining: Vec<usize> = (0..n).filter(|i| !chosen.contains(i)).collect();
            remaining[rng.random_range(0..remaining.len())]
        };
        chosen.push(next);
        let c = rows.row(next);
        for (i, w) in nearest.iter_mut().enumerate() {
            *w = w.min(sq_dist(rows.row(i), c));
        }
    }
    chosen
}

/// K-means++ initial centroids (k×dim).
pub fn kmeans_pp_seed(rows: &DenseMatrix, k: usize, rng_seed: u64) -> Result<DenseMatrix> {
    check_shape(rows, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let picks = seed_indices(rows, k, &mut rng);
    Ok(gather_rows(rows, &picks))
}

fn gather_rows(rows: &DenseMatrix, picks: &[usize]) -> DenseMatrix {
    DenseMatrix::from_fn(picks.len(), rows.cols(), |r, c| rows[(picks[r], c)])
}

fn assign(rows: &DenseMatrix, centroids: &DenseMatrix) -> Vec<usize> {
    (0..rows.rows())
        .map(|i| {
            let x = rows.row(i);
            let mut best = 0;
            let mut best_d = f64::INFINITY;
            for c in 0..centroids.rows() {
                let d = sq_dist(x, centroids.row(c));
                if d < best_d {
                    best_d = d;
                    best = c;
                }
            }
            best
        })
        .collect()
}

/// Moves the point farthest from its centroid into each empty cluster,
/// making that point the cluster's centroid.
fn repair_empty(rows: &DenseMatrix, labels: &mut [usize], centroids: &mut DenseMatrix) {
    let k = centroids.rows();
    let mut counts = vec![0usize; k];
    for &l in labels.iter() {
        counts[l] += 1;
    }
    for j in 0..k {
        if counts[j] > 0 {
            continue;
        }
        let mut donor = None;
        let mut worst = -1.0;
        for (i, &l) in labels.iter().enumerate() {
            if counts[l] < 2 {
                continue;
            }
            let d = sq_dist(rows.row(i), centroids.row(l));
            if d > worst {
                worst = d;
                donor = Some(i);
            }
        }
        // k <= n guarantees a cluster with two or more members.
        let i = donor.expect("some cluster has at least two members");
        counts[labels[i]] -= 1;
        labels[i] = j;
        counts[j] = 1;
        centroids.row_mut(j).copy_from_slice(rows.row(i));
    }
}

fn cluster_means(rows: &DenseMatrix, labels: &[usize], k: usize) -> DenseMatrix {
    let dim = rows.cols();
    let mut sums = DenseMatrix::zeros(k, dim);
    let mut counts = vec![0usize; k];
    for (i, &l) in labels.iter().enumerate() {
        counts[l] += 1;
        for (s, x) in sums.row_mut(l).iter_mut().zip(rows.row(i)) {
            *s += x;
        }
    }
    for (c, &count) in counts.iter().enumerate() {
        debug_assert!(count > 0, "empty clusters are repaired before averaging");
        for s in sums.row_mut(c) {
            *s /= count as f64;
        }
    }
    sums
}

fn sse(rows: &DenseMatrix, labels: &[usize], centroids: &DenseMatrix) -> f64 {
    labels
        .iter()
        .enumerate()
        .map(|(i, &l)| sq_dist(rows.row(i), centroids.row(l)))
        .sum()
}

/// Lloyd iteration from the given initial centroids.
pub fn lloyd(rows: &DenseMatrix, init: &DenseMatrix, max_iter: usize) -> Result<ClusterAssignment> {
    let k = init.rows();
    check_shape(rows, k)?;
    if init.cols() != rows.cols() || !init.is_finite() {
        return Err(Error::param(
            "init",
            "initial centroids must be finite and match the row dimension",
        ));
    }
    if max_iter == 0 {
        return Err(Error::param("max_iter", "max_iter must be at least 1"));
    }

    let mut centroids = init.clone();
    let mut labels = assign(rows, &centroids);
    repair_empty(rows, &mut labels, &mut centroids);
    let mut trace = vec![sse(rows, &labels, &centroids)];
    // Round-off slack for the monotonicity check, scaled to the data.
    #[cfg(debug_assertions)]
    let slack = 1e-12
        * (0..rows.rows())
            .map(|i| rows.row(i).iter().map(|v| v * v).sum::<f64>())
            .sum::<f64>();

    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        centroids = cluster_means(rows, &labels, k);
        let objective = sse(rows, &labels, &centroids);
        debug_assert!(
            objective <= trace[trace.len() - 1] + slack,
            "Lloyd objective increased"
        );
        trace.push(objective);
        iterations += 1;

        let mut next = assign(rows, &centroids);
        repair_empty(rows, &mut next, &mut centroids);
        if next == labels {
            converged = true;
            break;
        }
        labels = next;
    }
    if !converged {
        centroids = cluster_means(rows, &labels, k);
        trace.push(sse(rows, &labels, &centroids));
    }

    Ok(ClusterAssignment {
        objective: sse(rows, &labels, &centroids),
        labels,
        centroids,
        iterations,
        converged,
        objective_trace: trace,
    })
}

/// Runs k-means++ then Lloyd `restarts` times and keeps the lowest objective
/// (earliest restart on ties).
pub fn kmeans_best_of(
    rows: &DenseMatrix,
    k: usize,
    restarts: usize,
    rng_seed: u64,
    max_iter: usize,
) -> Result<ClusterAssignment> {
    if restarts == 0 {
        return Err(Error::param("restarts", "restarts must be at least 1"));
    }
    let mut best: Option<ClusterAssignment> = None;
    for r in 0..restarts {
        let init = kmeans_pp_seed(rows, k, restart_seed(rng_seed, r))?;
        let run = lloyd(rows, &init, max_iter)?;
        if best.as_ref().is_none_or(|b| run.objective < b.objective) {
            best = Some(run);
        }
    }
    Ok(best.expect("restarts >= 1"))
}

/// Exact k-means optimum by enumerating every surjective labeling.
/// Only feasible for tiny inputs (n <= 10, k <= 3).
pub fn exhaustive_kmeans_oracle(rows: &DenseMatrix, k: usize) -> Result<f64> {
    exhaustive_kmeans_partition(rows, k).map(|(objective, _)| objective)
}

/// Like [`exhaustive_kmeans_oracle`] but also returns the first optimal
/// labeling found.
pub fn exhaustive_kmeans_partition(rows: &DenseMatrix, k: usize) -> Result<(f64, Vec<usize>)> {
    let n = rows.rows();
    if n > ORACLE_MAX_N || k > ORACLE_MAX_K {
        return Err(Error::OracleTooLarge {
            n,
            k,
            max_n: ORACLE_MAX_N,
            max_k: ORACLE_MAX_K,
        });
    }
    check_shape(rows, k)?;

    let mut labels = vec![0usize; n];
    let mut best = (f64::INFINITY, labels.clone());
    loop {
        let mut seen = [false; ORACLE_MAX_K];
        labels.iter().for_each(|&l| seen[l] = true);
        if seen[..k].iter().all(|&s| s) {
            let f = objective_eval(rows, &labels);
            if f < best.0 {
                best = (f, labels.clone());
            }
        }
        // Odometer increment in base k.
        let mut pos = 0;
        loop {
            if pos == n {
                return Ok(best);
            }
            labels[pos] += 1;
            if labels[pos] < k {
                break;
            }
            labels[pos] = 0;
            pos += 1;
        }
    }
}
