//! Domain types shared by every stage of the detector.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point in the sensor body frame, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    /// Unit vector at `angle` radians from the +x axis.
    pub fn from_angle(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Point2 { x: c, y: s }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist_sq(self, other: Point2) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn dist(self, other: Point2) -> f64 {
        self.dist_sq(other).sqrt()
    }

    /// Rotates counter-clockwise about the origin.
    pub fn rotated(self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Point2 {
            x: c * self.x - s * self.y,
            y: s * self.x + c * self.y,
        }
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, rhs: f64) -> Point2 {
        Point2::new(self.x * rhs, self.y * rhs)
    }
}

/// An ordered 2D scan. Index `i` identifies point `x_i` throughout the
/// pipeline, so labels can be mapped back to the beams that produced them.
///
/// Duplicate points are allowed.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PointCloud {
    points: Vec<Point2>,
}

impl PointCloud {
    /// Builds a cloud, rejecting any point with a NaN or infinite coordinate.
    pub fn new(points: Vec<Point2>) -> Result<Self> {
        if let Some((index, p)) = points.iter().enumerate().find(|(_, p)| !p.is_finite()) {
            return Err(Error::NonFinitePoint {
                index,
                x: p.x,
                y: p.y,
            });
        }
        Ok(PointCloud { points })
    }

    pub fn from_xy(coords: &[(f64, f64)]) -> Result<Self> {
        Self::new(coords.iter().map(|&(x, y)| Point2::new(x, y)).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point2> {
        self.points.iter()
    }

    pub fn into_points(self) -> Vec<Point2> {
        self.points
    }

    /// Applies a rotation by `angle` followed by a translation by `offset`.
    pub fn rigid_transform(&self, angle: f64, offset: Point2) -> Result<Self> {
        Self::new(
            self.points
                .iter()
                .map(|p| p.rotated(angle) + offset)
                .collect(),
        )
    }

    /// Returns the cloud with `perm[i]` as its new i-th point.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        PointCloud {
            points: perm.iter().map(|&i| self.points[i]).collect(),
        }
    }
}

impl<'a> IntoIterator for &'a PointCloud {
    type Item = &'a Point2;
    type IntoIter = std::slice::Iter<'a, Point2>;
    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

/// Tuning knobs for [`detect_junctions`](crate::pipeline::detect_junctions).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorParams {
    /// RBF decay rate in 1/m².
    pub sigma: f64,
    /// Similarities below this value are set to zero, which is what lets far
    /// apart walls become separate graph components.
    pub similarity_floor: f64,
    /// Eigenvalues with magnitude at or below this count as zero.
    pub zero_eig_tol: f64,
    pub kmeans_max_iter: usize,
    pub kmeans_restarts: usize,
    pub rng_seed: u64,
}

impl Default for DetectorParams {
    fn default() -> Self {
        DetectorParams {
            sigma: 1.5,
            similarity_floor: 1e-8,
            zero_eig_tol: 1e-8,
            kmeans_max_iter: 100,
            kmeans_restarts: 10,
            rng_seed: 0,
        }
    }
}

impl DetectorParams {
    pub fn validate(self) -> Result<Self> {
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::param(
                "sigma",
                format!("sigma must be positive and finite, got {}", self.sigma),
            ));
        }
        if !(0.0..1.0).contains(&self.similarity_floor) {
            return Err(Error::param(
                "similarity_floor",
                format!(
                    "similarity_floor must lie in [0, 1), got {}",
                    self.similarity_floor
                ),
            ));
        }
        if !(self.zero_eig_tol > 0.0 && self.zero_eig_tol.is_finite()) {
            return Err(Error::param(
                "zero_eig_tol",
                format!("zero_eig_tol must be positive, got {}", self.zero_eig_tol),
            ));
        }
        if self.kmeans_max_iter == 0 {
            return Err(Error::param(
                "kmeans_max_iter",
                "kmeans_max_iter must be at least 1",
            ));
        }
        if self.kmeans_restarts == 0 {
            return Err(Error::param(
                "kmeans_restarts",
                "kmeans_restarts must be at least 1",
            ));
        }
        Ok(self)
    }
}

/// Output of one detection run.
#[derive(Debug, Clone, PartialEq)]
pub struct JunctionReport {
    /// Number of wall clusters, which is the junction count.
    pub num_junctions: usize,
    /// Cluster id of each input point, in input order.
    pub labels: Vec<usize>,
    /// The smallest `min(n, 10)` Laplacian eigenvalues, ascending.
    pub eigenvalues_head: Vec<f64>,
    /// Final k-means objective on the spectral embedding.
    pub objective: f64,
    /// Measured wall-clock time of the full detection, in seconds.
    pub runtime_seconds: f64,
    /// Set when every point ended up in its own component (k = n > 1), which
    /// usually means the floor or sigma is too aggressive for the scan density.
    pub all_isolated: bool,
    pub params: DetectorParams,
}

impl JunctionReport {
    /// Members of each cluster, ordered by first appearance so two reports can
    /// be compared independent of label values.
    pub fn partition(&self) -> Vec<Vec<usize>> {
        canonical_partition(&self.labels)
    }
}

/// Groups indices by label, with groups ordered by their smallest index.
pub fn canonical_partition(labels: &[usize]) -> Vec<Vec<usize>> {
    let mut slot: std::collections::HashMap<usize, usize> = Default::default();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, &l) in labels.iter().enumerate() {
        let g = *slot.entry(l).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(i);
    }
    groups
}
