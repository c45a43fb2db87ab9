//! Exact closed-ball expansion on finite metric graphs.
//!
//! A graph is normalised to unit-length edges; closed subsets are stored as
//! unions of closed rational intervals per edge. On top of that the crate
//! computes balls, spheres and Hausdorff distances, the quotient obtained by
//! identifying points with equal balls at a given radius, the sequence of
//! topological types of those quotients, and the ultrametric of merge radii.
//!
//! ```
//! use semiflow::{fixtures, Rational};
//!
//! let g = fixtures::theta();
//! let a = g.point(0, Rational::frac(1, 2)).unwrap();
//! let b = g.point(1, Rational::frac(1, 2)).unwrap();
//! assert_eq!(semiflow::merge_radius(&g, &a, &b).unwrap(), Rational::from_int(1));
//! ```

pub mod ball;
pub mod canon;
pub mod error;
pub mod evolution;
pub mod field;
pub mod fixtures;
pub mod graph;
pub mod merge;
pub mod quotient;
pub mod rational;
pub mod wire;

pub use ball::{
    closed_ball, dilate, directed_hausdorff, hausdorff, lyapunov, set_length, sets_equal, sphere, BallMeta, BallSet,
    BoundaryPoint, EdgeCoverage,
};
pub use canon::Multigraph;
pub use error::{Error, Result};
pub use evolution::{
    candidate_grid, distinct_types, distinct_types_of, robustness_of, robustness_radius, sampled_merge_floor, timeline,
    DistinctTypes, LocusKind, Robustness, Timeline, TimelineEntry,
};
pub use graph::{load_graph, GraphPoint, MetricGraph, PotentialProfile};
pub use merge::{
    build_merge_tree, extinction_radius, merge_matrix, merge_radius, sample_points, ultrametric_check, Dendrogram,
    MergeMatrix, UltrametricReport,
};
pub use quotient::{
    euler_bounds_check, fingerprint, is_injective, project, subdivision, EulerReport, Fingerprint, QuotientGraph,
    Subdivision,
};
pub use rational::Rational;
