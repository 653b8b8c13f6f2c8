use std::collections::BTreeSet;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;
use spherepoly::sampler::{random_unit_vector, rng_from_seed, sample_poisson_sphere};
use spherepoly::shadow::{
    check_locality_event, is_shadow_vertex, maximizer, monotone_local_path, shadow_path, shadow_path_walk, shadow_record,
    stitched_diameter_path, verify_tight_constraint_locality,
};
use spherepoly::sphere_geom::{greedy_separated_net_pinned, solve_epsilon};
use spherepoly::{convex_hull, polar_vertex_graph, HullOptions, PlaneSpan, PointCloud, UnitVector, VertexGraph};

fn gaussian_matrix<R: Rng>(n: usize, rng: &mut R) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |_, _| rng.sample(StandardNormal))
}

fn instance(m: f64, seed: u64) -> (PointCloud, VertexGraph) {
    let cloud = sample_poisson_sphere(3, m, seed).unwrap();
    let hull = convex_hull(&cloud, HullOptions::default()).unwrap();
    let g = polar_vertex_graph(&hull).unwrap();
    (cloud, g)
}

/// Vertices of the 2D convex hull of the projected vertex set, collinear points excluded.
fn projection_polygon(g: &VertexGraph, plane: &PlaneSpan) -> BTreeSet<usize> {
    let mut pts: Vec<(f64, f64, usize)> = (0..g.len())
        .map(|v| {
            let (x, y) = plane.coords(g.coords(v));
            (x, y, v)
        })
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let cross = |o: &(f64, f64, usize), a: &(f64, f64, usize), b: &(f64, f64, usize)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let chain = |iter: &mut dyn Iterator<Item = &(f64, f64, usize)>| {
        let mut h: Vec<(f64, f64, usize)> = Vec::new();
        for p in iter {
            while h.len() >= 2 && cross(&h[h.len() - 2], &h[h.len() - 1], p) <= 0.0 {
                h.pop();
            }
            h.push(*p);
        }
        h.pop();
        h
    };
    let lower = chain(&mut pts.iter());
    let upper = chain(&mut pts.iter().rev());
    lower.into_iter().chain(upper).map(|p| p.2).collect()
}

#[test]
fn shadow_equals_projection_polygon() {
    let mut rng = rng_from_seed(11);
    for seed in 0..8 {
        let (cloud, g) = instance(500.0, seed);
        for _ in 0..3 {
            let plane = PlaneSpan::random(3, &mut rng);
            let rec = shadow_record(&g, &cloud, &plane);
            let ours: BTreeSet<usize> = rec.shadow_vertex_ids.iter().copied().collect();
            assert_eq!(ours, projection_polygon(&g, &plane));
            rec.check_cyclic_adjacency(&g).unwrap();
        }
    }
}

#[test]
fn shadow_indicator_is_rotation_equivariant() {
    let mut rng = rng_from_seed(5);
    let (cloud, g) = instance(300.0, 21);
    let plane = PlaneSpan::random(3, &mut rng);
    let rot = gaussian_matrix(3, &mut rng).qr().q();
    let turned = cloud.rotated(&rot).unwrap();
    let hull = convex_hull(&turned, HullOptions::default()).unwrap();
    let g2 = polar_vertex_graph(&hull).unwrap();
    let apply = |u: &UnitVector| {
        let v = &rot * DMatrix::from_column_slice(3, 1, u.as_slice());
        UnitVector::normalize(v.iter().copied().collect()).unwrap()
    };
    let plane2 = PlaneSpan::from_spanning(&apply(&plane.u1), &apply(&plane.u2)).unwrap();
    for v in 0..g.len() {
        let w = g2.vertex_with_basis(g.basis(v)).unwrap();
        assert_eq!(is_shadow_vertex(&g, &cloud, v, &plane), is_shadow_vertex(&g2, &turned, w, &plane2));
    }
}

#[test]
fn shadow_segments_partition_the_shadow() {
    let mut rng = rng_from_seed(8);
    for seed in 0..5 {
        let (cloud, g) = instance(2000.0, 100 + seed);
        let plane = PlaneSpan::random(3, &mut rng);
        let rec = shadow_record(&g, &cloud, &plane);
        let dirs: Vec<Vec<f64>> = (0..7)
            .map(|j| {
                let th = 0.3 + 2.0 * PI * j as f64 / 7.0;
                plane.u1.iter().zip(plane.u2.iter()).map(|(a, b)| th.cos() * a + th.sin() * b).collect()
            })
            .collect();
        let mut total = 0;
        for j in 0..7 {
            let (w1, w2) = (&dirs[j], &dirs[(j + 1) % 7]);
            let path = shadow_path(&g, &rec, w1, w2).unwrap();
            assert_eq!(shadow_path_walk(&g, &cloud, &plane, w1, w2).unwrap(), path);
            assert!(path.len() <= rec.size + 1);
            for win in path.windows(2) {
                let (a, b) = (g.coords(win[0]), g.coords(win[1]));
                let (va, vb): (f64, f64) = (
                    a.iter().zip(w2).map(|(x, y)| x * y).sum(),
                    b.iter().zip(w2).map(|(x, y)| x * y).sum(),
                );
                assert!(vb >= va - 1e-12);
            }
            total += path.len() - 1;
        }
        assert_eq!(total, rec.size);
    }
}

#[test]
fn local_paths_stay_in_superlevel_set() {
    let (_, g) = instance(1000.0, 3);
    let mut rng = rng_from_seed(2);
    for _ in 0..30 {
        let w = random_unit_vector(3, &mut rng);
        let w2 = random_unit_vector(3, &mut rng);
        let path = monotone_local_path(&g, &w, &w2).unwrap();
        assert_eq!(path[0], maximizer(&g, &w));
        assert_eq!(*path.last().unwrap(), maximizer(&g, &w2));
        let val = |v: usize| g.coords(v).iter().zip(w2.iter()).map(|(x, y)| x * y).sum::<f64>();
        assert!(path.iter().all(|&v| val(v) >= val(path[0])));
    }
}

#[test]
fn locality_report_is_clean_under_the_event() {
    let (m, p) = (2000.0, 1e-3);
    let eps = solve_epsilon(m, 3, p).unwrap().epsilon;
    let mut rng = rng_from_seed(4);
    let mut checked = 0;
    for seed in 0..6 {
        let (cloud, g) = instance(m, 200 + seed);
        let w1 = random_unit_vector(3, &mut rng);
        let mut w2 = w1.to_vec();
        let d = random_unit_vector(3, &mut rng);
        w2.iter_mut().zip(d.iter()).for_each(|(a, b)| *a += 0.9 * eps * b);
        let w2 = UnitVector::normalize(w2).unwrap();
        assert!(w1.chord(&w2) <= eps);
        if !check_locality_event(&cloud, &w1, &w2, eps, p).holds() {
            continue;
        }
        checked += 1;
        let rep = verify_tight_constraint_locality(&g, &cloud, &w1, &w2, eps).unwrap();
        assert!(rep.clean(), "{rep:?}");
        assert_eq!(rep.samples, 11);
    }
    assert!(checked > 0);
}

#[test]
fn stitched_paths_end_at_the_e1_maximizer() {
    let (m, p) = (1000.0, 1e-3);
    let eps = solve_epsilon(m, 3, p).unwrap().epsilon;
    let (cloud, g) = instance(m, 9);
    let e1 = UnitVector::axis(3, 0);
    let net = greedy_separated_net_pinned(3, eps, 1, Some(&e1)).unwrap();
    let target = maximizer(&g, &e1);
    let trivial = stitched_diameter_path(&g, &cloud, &net, &e1).unwrap();
    assert_eq!(trivial.vertices, vec![target]);
    let mut rng = rng_from_seed(6);
    for _ in 0..20 {
        let w = random_unit_vector(3, &mut rng);
        let sp = stitched_diameter_path(&g, &cloud, &net, &w).unwrap();
        assert_eq!(sp.vertices[0], maximizer(&g, &w));
        assert_eq!(*sp.vertices.last().unwrap(), target);
        assert_eq!(sp.segment_lengths.iter().sum::<usize>(), sp.len());
        assert!(net.points[sp.net_index].chord(&w) <= eps * 1.2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn shadow_size_is_at_least_three(seed in any::<u64>(), m in 100.0f64..600.0, ps in any::<u64>()) {
        let (cloud, g) = instance(m, seed);
        let plane = PlaneSpan::random(3, &mut rng_from_seed(ps));
        let rec = shadow_record(&g, &cloud, &plane);
        prop_assert!(rec.size >= 3);
        prop_assert!(rec.check_cyclic_adjacency(&g).is_ok());
        prop_assert!(rec.angles.windows(2).all(|w| w[0] <= w[1]));
    }
}
