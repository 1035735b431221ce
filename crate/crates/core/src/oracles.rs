//! Brute-force reference implementations used to cross-check the spectral
//! path. Nothing here shares numeric code with `graph`, `eigen` or `kmeans`.

use std::collections::VecDeque;

use crate::graph::SimilarityGraph;
use crate::matrix::DenseMatrix;

/// Component id per node; ids are dense and ordered by first appearance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentLabeling {
    pub labels: Vec<usize>,
    pub count: usize,
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

/// Union-find over the edges with positive weight.
pub fn connected_components(graph: &SimilarityGraph) -> ComponentLabeling {
    components_of(graph.weights())
}

/// Same as [`connected_components`] for a raw adjacency matrix.
pub fn components_of(weights: &DenseMatrix) -> ComponentLabeling {
    let n = weights.rows();
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if weights[(i, j)] > 0.0 || weights[(j, i)] > 0.0 {
                uf.union(i, j);
            }
        }
    }
    let roots: Vec<usize> = (0..n).map(|i| uf.find(i)).collect();
    relabel_dense(&roots)
}

/// Breadth-first search component labeling, a second independent oracle.
pub fn components_bfs(weights: &DenseMatrix) -> ComponentLabeling {
    let n = weights.rows();
    let mut labels = vec![usize::MAX; n];
    let mut count = 0;
    let mut queue = VecDeque::new();
    for start in 0..n {
        if labels[start] != usize::MAX {
            continue;
        }
        labels[start] = count;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if labels[v] == usize::MAX && (weights[(u, v)] > 0.0 || weights[(v, u)] > 0.0) {
                    labels[v] = count;
                    queue.push_back(v);
                }
            }
        }
        count += 1;
    }
    ComponentLabeling { labels, count }
}

fn relabel_dense(raw: &[usize]) -> ComponentLabeling {
    let mut map = std::collections::HashMap::new();
    let labels: Vec<usize> = raw
        .iter()
        .map(|r| {
            let next = map.len();
            *map.entry(*r).or_insert(next)
        })
        .collect();
    ComponentLabeling {
        count: map.len(),
        labels,
    }
}

/// Sum of squared distances from each row to the mean of its labeled group.
///
/// # Panics
/// If `labels.len()` differs from the number of rows.
pub fn objective_eval(rows: &DenseMatrix, labels: &[usize]) -> f64 {
    assert_eq!(rows.rows(), labels.len(), "one label per row");
    let dim = rows.cols();
    let groups = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut sums = vec![vec![0.0; dim]; groups];
    let mut counts = vec![0usize; groups];
    for (i, &l) in labels.iter().enumerate() {
        counts[l] += 1;
        for (s, x) in sums[l].iter_mut().zip(rows.row(i)) {
            *s += x;
        }
    }
    let means: Vec<Vec<f64>> = sums
        .into_iter()
        .zip(&counts)
        .map(|(s, &c)| s.into_iter().map(|v| v / c.max(1) as f64).collect())
        .collect();
    labels
        .iter()
        .enumerate()
        .map(|(i, &l)| {
            rows.row(i)
                .iter()
                .zip(&means[l])
                .map(|(x, m)| (x - m) * (x - m))
                .sum::<f64>()
        })
        .sum()
}
