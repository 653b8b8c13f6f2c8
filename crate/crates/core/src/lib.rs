//! Random spherical polytopes and their combinatorics.
//!
//! A Poisson sample `A` on the unit sphere `S^{n-1}` defines two polytopes:
//! the convex hull `Q(A) = conv(A)` and its polar `P(A) = {x : <a, x> <= 1, a in A}`.
//! This crate builds both, measures exact combinatorial diameters, follows
//! shadow-vertex paths, stitches upper-bound paths out of local and shadow
//! segments, and certifies lower bounds on `diam(Q(A))` from a net-subsequence
//! of a path's objective curve. The closed-form probabilistic bounds used as
//! baselines by experiments live in [`prob_bounds`].

pub mod error;
pub mod hull;
pub mod lower_bound_cert;
pub mod polytope_graph;
pub mod prob_bounds;
pub mod sampler;
pub mod shadow;
pub mod spatial;
pub mod sphere_geom;
pub mod svg;

mod exact;

pub use error::{Error, Result};
pub use hull::{contains_origin, convex_hull, hull_vertex_graph, polar_vertex_graph, Facet, Hull, HullOptions};
pub use lower_bound_cert::{
    antipodal_distance_experiment, certify_lower_bound, curve_subsequence, path_to_curve,
    AntipodalStats, CurveSample, LBCertificate,
};
pub use polytope_graph::{
    bfs_distance, diameter, diameter_relation_check, extract_dual_walk, PolytopeKind,
    VertexGraph, WalkCertificate,
};
pub use prob_bounds::TailParams;
pub use sampler::{sample_poisson_sphere, PointCloud};
pub use shadow::{LocalityEvent, PlaneSpan, ShadowRecord};
pub use sphere_geom::{DensityParams, SphericalCap, SphericalNet, UnitVector};

/// Unit vectors must have norm within this distance of 1.
pub const UNIT_NORM_TOL: f64 = 1e-12;
/// Stopping width for monotone bisections.
pub const BISECTION_TOL: f64 = 1e-12;
/// Default tolerance for floating-point geometric predicates.
pub const GEOM_TOL: f64 = 1e-9;
