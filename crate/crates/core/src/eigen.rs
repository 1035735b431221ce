//! Dense symmetric eigendecomposition and the spectral embedding built on it.
//!
//! The solver reduces the matrix to tridiagonal form with Householder
//! reflections and then diagonalizes it with implicitly shifted QL sweeps
//! (the classic `tred2`/`tql2` pair). Cost is O(n^3) with a small constant,
//! which is comfortable for one lidar revolution (n <= 360).

use crate::error::{Error, Result};
use crate::graph::LaplacianMatrix;
use crate::matrix::DenseMatrix;

/// QL iterations allowed per eigenvalue before giving up.
const MAX_QL_ITERATIONS: usize = 60;

/// Eigenpairs sorted by non-decreasing eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    // Row j holds the unit eigenvector paired with eigenvalues[j].
    vectors: DenseMatrix,
}

impl SpectralDecomposition {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvector(&self, j: usize) -> &[f64] {
        self.vectors.row(j)
    }

    /// The n×n matrix whose column j is the j-th eigenvector.
    pub fn eigenvector_matrix(&self) -> DenseMatrix {
        self.vectors.transpose()
    }

    /// `V diag(λ) Vᵀ`.
    pub fn reconstruct(&self) -> DenseMatrix {
        let n = self.len();
        let mut out = DenseMatrix::zeros(n, n);
        for (j, &lambda) in self.eigenvalues.iter().enumerate() {
            let v = self.vectors.row(j);
            for r in 0..n {
                let scaled = lambda * v[r];
                if scaled == 0.0 {
                    continue;
                }
                for (o, &vc) in out.row_mut(r).iter_mut().zip(v) {
                    *o += scaled * vc;
                }
            }
        }
        out
    }

    /// Largest deviation of `VᵀV` from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        let n = self.len();
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in a..n {
                let dot: f64 = self
                    .vectors
                    .row(a)
                    .iter()
                    .zip(self.vectors.row(b))
                    .map(|(x, y)| x * y)
                    .sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

/// Full eigendecomposition of a symmetric matrix.
pub fn eigendecompose(l: &LaplacianMatrix) -> Result<SpectralDecomposition> {
    let a = l.entries();
    let n = a.rows();
    if n == 0 {
        return Ok(SpectralDecomposition {
            eigenvalues: Vec::new(),
            vectors: DenseMatrix::zeros(0, 0),
        });
    }

    let mut v = a.clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(&mut v, &mut d, &mut e);

    // The QL stage rotates columns of V; work on the transpose so every
    // rotation touches two contiguous rows.
    let mut vt = v.transpose();
    diagonalize_tridiagonal(&mut vt, &mut d, &mut e)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let eigenvalues = order.iter().map(|&i| d[i]).collect();
    let mut vectors = DenseMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.row_mut(dst).copy_from_slice(vt.row(src));
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        vectors,
    })
}

/// Householder reduction to tridiagonal form. On return `v` holds the
/// accumulated orthogonal transform, `d` the diagonal and `e[1..]` the
/// sub-diagonal.
fn tridiagonalize(v: &mut DenseMatrix, d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    d.copy_from_slice(v.row(n - 1));

    for i in (1..n).rev() {
        let scale: f64 = d[..i].iter().map(|x| x.abs()).sum();
        let mut h = 0.0;
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[(i - 1, j)];
                v[(i, j)] = 0.0;
                v[(j, i)] = 0.0;
            }
        } else {
            for dk in d[..i].iter_mut() {
                *dk /= scale;
                h += *dk * *dk;
            }
            let f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            e[..i].fill(0.0);

            for j in 0..i {
                let f = d[j];
                v[(j, i)] = f;
                let mut g = e[j] + v[(j, j)] * f;
                for k in j + 1..i {
                    g += v[(k, j)] * d[k];
                    e[k] += v[(k, j)] * f;
                }
                e[j] = g;
            }

            let mut f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                let f = d[j];
                let g = e[j];
                for k in j..i {
                    v[(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[(i - 1, j)];
                v[(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    // Accumulate the transformations.
    for i in 0..n - 1 {
        v[(n - 1, i)] = v[(i, i)];
        v[(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[(k, i + 1)] * v[(k, j)];
                }
                for k in 0..=i {
                    v[(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[(n - 1, j)];
        v[(n - 1, j)] = 0.0;
    }
    v[(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

/// Implicit-shift QL on the tridiagonal `(d, e)`. `vt` holds the transform
/// from [`tridiagonalize`] transposed; its rows become the eigenvectors.
fn diagonalize_tridiagonal(vt: &mut DenseMatrix, d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0;
    let mut tst1 = 0.0f64;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }

        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_QL_ITERATIONS {
                    return Err(Error::NoConvergence {
                        n,
                        iterations: MAX_QL_ITERATIONS,
                    });
                }

                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let h = g - d[l];
                for di in d[l + 2..].iter_mut() {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    let h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    let (lo, hi) = vt.adjacent_rows_mut(i);
                    for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                        let h = *b;
                        *b = s * *a + c * h;
                        *a = c * *a - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// Number of eigenvalues with `|λ| <= tol`.
pub fn count_zero_eigenvalues(dec: &SpectralDecomposition, tol: f64) -> usize {
    dec.eigenvalues.iter().filter(|l| l.abs() <= tol).count()
}

/// Rows of the first `k` eigenvectors; row `i` embeds point `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralEmbedding {
    rows: DenseMatrix,
}

impl SpectralEmbedding {
    pub fn from_rows(rows: DenseMatrix) -> Self {
        SpectralEmbedding { rows }
    }

    pub fn len(&self) -> usize {
        self.rows.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.rows() == 0
    }

    pub fn dim(&self) -> usize {
        self.rows.cols()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.rows.row(i)
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.rows
    }

    pub fn into_matrix(self) -> DenseMatrix {
        self.rows
    }
}

/// Stacks the `k` lowest eigenvectors column-wise into an n×k matrix,
/// optionally scaling every nonzero row to unit length.
pub fn spectral_embed(
    dec: &SpectralDecomposition,
    k: usize,
    row_normalize: bool,
) -> Result<SpectralEmbedding> {
    let n = dec.len();
    if k == 0 || k > n {
        return Err(Error::param(
            "k",
            format!("embedding dimension must be in 1..={n}, got {k}"),
        ));
    }
    let mut rows = DenseMatrix::from_fn(n, k, |i, j| dec.vectors[(j, i)]);
    if row_normalize {
        for i in 0..n {
            let row = rows.row_mut(i);
            let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 0.0 {
                row.iter_mut().for_each(|x| *x /= norm);
            }
        }
    }
    Ok(SpectralEmbedding { rows })
}
