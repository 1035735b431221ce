//! Counts tunnel junctions in a single 2D lidar revolution.
//!
//! Points are joined into an RBF similarity graph, the number of connected
//! wall clusters is read off the multiplicity of the zero eigenvalue of the
//! normalized graph Laplacian, and the points are partitioned by k-means++
//! on the corresponding spectral embedding. A branchless corridor has two
//! junctions (its two walls), a T-intersection three, and so on.
//!
//! ```
//! use junction_core::{builtin_scenario, cast_scan, detect_junctions, DetectorParams, LidarConfig};
//!
//! let (env, expected) = builtin_scenario("T").unwrap();
//! let cloud = cast_scan(&env, &LidarConfig::default(), 0).unwrap();
//! let report = detect_junctions(&cloud, &DetectorParams::default()).unwrap();
//! assert_eq!(report.num_junctions, expected);
//! ```

pub mod eigen;
pub mod error;
pub mod graph;
pub mod io;
pub mod kmeans;
pub mod matrix;
pub mod oracles;
pub mod pipeline;
pub mod scan_sim;
pub mod types;

pub use eigen::{
    count_zero_eigenvalues, eigendecompose, spectral_embed, SpectralDecomposition,
    SpectralEmbedding,
};
pub use error::{Error, Result};
pub use graph::{build_adjacency, normalized_laplacian, LaplacianMatrix, SimilarityGraph};
pub use kmeans::{kmeans_best_of, kmeans_pp_seed, lloyd, ClusterAssignment};
pub use matrix::DenseMatrix;
pub use pipeline::{detect_junctions, detect_on_scenario};
pub use scan_sim::{
    builtin_scenario, cast_scan, Environment, LidarConfig, Pose, Segment, SCENARIO_NAMES,
};
pub use types::{canonical_partition, DetectorParams, JunctionReport, Point2, PointCloud};
