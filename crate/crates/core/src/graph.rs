//! RBF similarity graph and its symmetric normalized Laplacian.

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::types::PointCloud;

/// Pairwise RBF affinities with self-loops, plus node degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityGraph {
    weights: DenseMatrix,
    degrees: Vec<f64>,
}

impl SimilarityGraph {
    /// Wraps an explicit adjacency matrix. The matrix must be square,
    /// symmetric, have entries in `[0, 1]` and a unit diagonal.
    pub fn from_weights(weights: DenseMatrix) -> Result<Self> {
        let n = weights.rows();
        if n == 0 {
            return Err(Error::EmptyCloud);
        }
        if !weights.is_square() || weights.asymmetry() != 0.0 {
            return Err(Error::InvalidGeometry(
                "adjacency must be square and symmetric".into(),
            ));
        }
        if weights.as_slice().iter().any(|w| !(0.0..=1.0).contains(w))
            || (0..n).any(|i| weights[(i, i)] != 1.0)
        {
            return Err(Error::InvalidGeometry(
                "adjacency entries must lie in [0, 1] with a unit diagonal".into(),
            ));
        }
        let degrees = (0..n).map(|i| weights.row(i).iter().sum()).collect();
        Ok(SimilarityGraph { weights, degrees })
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn weights(&self) -> &DenseMatrix {
        &self.weights
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[(i, j)]
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }
}

/// `L = I - D^{-1/2} W D^{-1/2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianMatrix {
    entries: DenseMatrix,
}

impl LaplacianMatrix {
    /// Wraps an arbitrary symmetric matrix, mostly useful for exercising the
    /// eigensolver directly.
    pub fn from_symmetric(entries: DenseMatrix) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::InvalidGeometry("matrix must be square".into()));
        }
        if !entries.is_finite() {
            return Err(Error::InvalidGeometry(
                "matrix has non-finite entries".into(),
            ));
        }
        let tol = 1e-12 * entries.max_abs().max(1.0);
        if entries.asymmetry() > tol {
            return Err(Error::InvalidGeometry("matrix is not symmetric".into()));
        }
        Ok(LaplacianMatrix { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.rows() == 0
    }

    pub fn entries(&self) -> &DenseMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> DenseMatrix {
        self.entries
    }
}

/// Builds `W(i,j) = exp(-sigma * |x_i - x_j|^2)`, zeroing off-diagonal values
/// below `floor`. The diagonal is always 1.
pub fn build_adjacency(cloud: &PointCloud, sigma: f64, floor: f64) -> Result<SimilarityGraph> {
    if cloud.is_empty() {
        return Err(Error::EmptyCloud);
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::param(
            "sigma",
            format!("sigma must be positive and finite, got {sigma}"),
        ));
    }
    if !(0.0..1.0).contains(&floor) {
        return Err(Error::param(
            "similarity_floor",
            format!("similarity_floor must lie in [0, 1), got {floor}"),
        ));
    }

    let pts = cloud.points();
    let n = pts.len();
    let mut weights = DenseMatrix::identity(n);
    for i in 0..n {
        for j in i + 1..n {
            let w = (-sigma * pts[i].dist_sq(pts[j])).exp();
            let w = if w >= floor { w } else { 0.0 };
            weights[(i, j)] = w;
            weights[(j, i)] = w;
        }
    }
    let degrees = (0..n).map(|i| weights.row(i).iter().sum()).collect();
    Ok(SimilarityGraph { weights, degrees })
}

pub fn normalized_laplacian(graph: &SimilarityGraph) -> LaplacianMatrix {
    let n = graph.len();
    let inv_sqrt: Vec<f64> = graph.degrees.iter().map(|d| 1.0 / d.sqrt()).collect();
    let mut entries = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let w = graph.weights[(i, j)];
            let mut v = -w * inv_sqrt[i] * inv_sqrt[j];
            if i == j {
                v += 1.0;
            }
            entries[(i, j)] = v;
            entries[(j, i)] = v;
        }
    }
    LaplacianMatrix { entries }
}
