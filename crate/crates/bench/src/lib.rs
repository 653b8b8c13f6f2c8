//! Shared fixtures for the benchmarks.

use spherepoly::{convex_hull, hull_vertex_graph, polar_vertex_graph, sample_poisson_sphere, Hull, HullOptions, PointCloud, VertexGraph};

pub struct Instance {
    pub cloud: PointCloud,
    pub hull: Hull,
    pub p: VertexGraph,
    pub q: VertexGraph,
}

pub fn instance(n: usize, m: f64, seed: u64) -> Instance {
    let cloud = sample_poisson_sphere(n, m, seed).expect("sample");
    let hull = convex_hull(&cloud, HullOptions::default()).expect("hull");
    let p = polar_vertex_graph(&hull).expect("polar graph");
    let q = hull_vertex_graph(&hull).expect("hull graph");
    Instance { cloud, hull, p, q }
}
