//! One trial of each experiment kind.

use std::time::Instant;

use spherepoly::lower_bound_cert::antipodal_distance_in;
use spherepoly::polytope_graph::dual_walk_between;
use spherepoly::prob_bounds::{poisson_tail_bound, t_p_eval, u_eval};
use spherepoly::sampler::{derive_seed, poisson_lower_tail, poisson_upper_tail, random_unit_vector, rng_from_seed};
use spherepoly::shadow::{shadow_record, stitched_diameter_path, PlaneSpan};
use spherepoly::sphere_geom::{cap_measure, greedy_separated_net_pinned, solve_epsilon, DensityOracle};
use spherepoly::{
    certify_lower_bound, convex_hull, diameter, diameter_relation_check, hull_vertex_graph, polar_vertex_graph,
    sample_poisson_sphere, Error, HullOptions, SphericalCap, UnitVector,
};

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::record::ExperimentRecord;

#[derive(Debug, Clone)]
pub struct TrialOutput {
    pub record: ExperimentRecord,
    pub svg: Option<String>,
}

/// Runs one trial; `Err` means the sample was unusable and the trial is excluded.
pub fn run_trial(cfg: &ExperimentConfig, m: f64, trial: usize, seed: u64, want_svg: bool) -> spherepoly::Result<TrialOutput> {
    let start = Instant::now();
    let n = cfg.n;
    let k = &cfg.constants;
    let cloud = sample_poisson_sphere(n, m, seed)?;
    let mut rec = ExperimentRecord {
        experiment: Some(cfg.experiment),
        n,
        m,
        trial,
        seed,
        count: cloud.len(),
        ..Default::default()
    };
    let opts = HullOptions {
        tolerance: k.tolerance,
        seed,
    };
    let mut svg = None;
    match cfg.experiment {
        ExperimentKind::HullValidate => {
            let hull = convex_hull(&cloud, opts)?;
            rec.facets = Some(hull.facets.len());
            rec.max_violation = Some(hull.max_violation());
            rec.violation = hull.validate().is_err();
        }
        ExperimentKind::ShadowScaling => {
            let hull = convex_hull(&cloud, opts)?;
            let g = polar_vertex_graph(&hull)?;
            let plane = PlaneSpan::random(n, &mut rng_from_seed(derive_seed(seed, 1)));
            let sr = shadow_record(&g, &cloud, &plane);
            rec.shadow_size = Some(sr.size);
            rec.t_p = Some(t_p_eval(m, n, cfg.p, u_eval(n, cfg.p, k.c_u), k.c1, k.c2));
            rec.violation = sr.check_cyclic_adjacency(&g).is_err();
            if want_svg {
                svg = Some(sr.to_svg(&g, None));
            }
        }
        ExperimentKind::DiameterRelation => {
            let hull = convex_hull(&cloud, opts)?;
            let p = polar_vertex_graph(&hull)?;
            let q = hull_vertex_graph(&hull)?;
            let rel = diameter_relation_check(&p, &q)?;
            rec.diam_p = Some(rel.diam_p);
            rec.diam_q = Some(rel.diam_q);
            let (s, t) = rel.witness_q;
            let walk_ok = dual_walk_between(&p, q.basis(s)[0], q.basis(t)[0])
                .and_then(|c| c.validate(&hull.hull_edges, n))
                .is_ok();
            rec.violation = !rel.holds || !walk_ok;
        }
        ExperimentKind::Density => {
            let eps = solve_epsilon(m, n, cfg.p)?.epsilon;
            rec.epsilon = Some(eps);
            let oracle = DensityOracle::new(&cloud.points, eps);
            let dense = oracle.is_dense_for(&SphericalCap::whole_sphere(n), eps);
            rec.dense = Some(dense);
            rec.occupancy_max = Some(oracle.max_occupancy_bound(eps, eps / 2.0));
            rec.occupancy_max_t2 = Some(oracle.max_occupancy_bound(2.0 * eps, eps / 2.0));
            let hull = convex_hull(&cloud, opts)?;
            match polar_vertex_graph(&hull) {
                Ok(g) => {
                    let norm = (0..g.len())
                        .map(|v| g.coords(v).iter().map(|x| x * x).sum::<f64>().sqrt())
                        .fold(0.0, f64::max);
                    rec.max_vertex_norm = Some(norm);
                    rec.violation = dense && norm > 1.0 / (1.0 - eps * eps / 2.0) + 1e-9;
                }
                // an unbounded polar is only a violation when the sample was dense
                Err(Error::Polarity) => rec.violation = dense,
                Err(e) => return Err(e),
            }
        }
        ExperimentKind::LbCertify => {
            let hull = convex_hull(&cloud, opts)?;
            let q = hull_vertex_graph(&hull)?;
            let cert = certify_lower_bound(&cloud, &hull, &q, k.c6, derive_seed(seed, 2))?;
            rec.epsilon = Some(cert.epsilon);
            rec.certified_lb = Some(cert.certified_lb);
            rec.exact_distance = Some(cert.exact_distance);
            rec.antipodal_distance = Some(antipodal_distance_in(&cloud, &q)?);
            rec.violation = cert.validate().is_err();
            if want_svg {
                svg = Some(cert.to_svg());
            }
        }
        ExperimentKind::Stitch => {
            let eps = solve_epsilon(m, n, cfg.p)?.epsilon;
            rec.epsilon = Some(eps);
            let hull = convex_hull(&cloud, opts)?;
            let g = polar_vertex_graph(&hull)?;
            let e1 = UnitVector::axis(n, 0);
            let net = greedy_separated_net_pinned(n, eps, derive_seed(seed, 3), Some(&e1))?;
            let mut rng = rng_from_seed(derive_seed(seed, 4));
            let mut longest = 0;
            for _ in 0..k.objectives {
                let w = random_unit_vector(n, &mut rng);
                match stitched_diameter_path(&g, &cloud, &net, &w) {
                    Ok(sp) => {
                        if want_svg && svg.is_none() && sp.segment_lengths[1] > 0 {
                            let plane = PlaneSpan::from_spanning(&e1, &net.points[sp.net_index])?;
                            svg = Some(shadow_record(&g, &cloud, &plane).to_svg(&g, Some(&sp.vertices)));
                        }
                        longest = longest.max(sp.len());
                    }
                    Err(e) => {
                        log::warn!("m={m} trial={trial}: stitched path failed: {e}");
                        rec.violation = true;
                    }
                }
            }
            rec.stitched_len = Some(longest);
            rec.diam_p = Some(diameter(&g)?.0);
        }
        ExperimentKind::Tails => {
            let cap = SphericalCap::clamped(UnitVector::axis(n, 0), k.cap_radius);
            let lambda = m * cap_measure(n, cap.radius)?;
            let count = cloud.points.iter().filter(|a| cap.contains(a)).count();
            rec.cap_count = Some(count);
            rec.cap_mean = Some(lambda);
            let x = (count as f64 - lambda).abs();
            let bound = poisson_tail_bound(lambda, x);
            rec.violation = poisson_upper_tail(lambda, x)? > bound || poisson_lower_tail(lambda, x)? > bound;
        }
    }
    rec.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(TrialOutput { record: rec, svg })
}
