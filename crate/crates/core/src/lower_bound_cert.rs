//! Certified lower bounds on the graph distance in `Q(A)`.
//!
//! A shortest path `a_0 .. a_l` between two far-apart vertices becomes a
//! piecewise-geodesic curve `f` whose nearest sample point is always the
//! current path vertex. A subsequence of net points `x_i` with jumps in
//! `[6 eps, 8 eps]` shadows `f`; every consecutive pair of occupied `eps/2`
//! caps forces a distinct path vertex, so their count is a lower bound.

use std::collections::HashSet;
use std::io::Write;

use rand::Rng;
use rayon::prelude::*;

use crate::hull::{convex_hull, hull_vertex_graph, Hull, HullOptions};
use crate::polytope_graph::{bfs_distance, shortest_path, VertexGraph};
use crate::sampler::{derive_seed, rng_from_seed, sample_poisson_sphere, PointCloud};
use crate::spatial::PointIndex;
use crate::sphere_geom::{dist, greedy_separated_net_pinned, SphericalNet, UnitVector};
use crate::svg::SvgCanvas;
use crate::{Error, Result};

/// Parameter step of the coarse scan; one refinement divides it by ten.
pub const CURVE_STEP: f64 = 1e-4;
const ROOT_TOL: f64 = 1e-9;
const ARGMIN_TOL: f64 = 1e-9;

/// Piecewise-geodesic curve `f: [0, 1] -> S^{n-1}`.
///
/// Knots alternate path vertices and circumscribed-cap centers
/// `a_0, x_0, a_1, x_1, .., a_l`, equally spaced in the parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSample {
    pub breakpoints: Vec<(f64, UnitVector)>,
    /// `0 = s_0 < s_1 < .. < s_{l+1} = 1`; `owners[j]` is nearest on `[s_j, s_{j+1}]`.
    pub owner_switches: Vec<f64>,
    pub owners: Vec<usize>,
}

impl CurveSample {
    /// Curve through `knots` at parameters `j / (len - 1)`.
    pub fn from_knots(knots: Vec<UnitVector>, owners: Vec<usize>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::Domain("a curve needs at least two knots".into()));
        }
        let pieces = (knots.len() - 1) as f64;
        for w in knots.windows(2) {
            if w[0].chord(&w[1]) >= 2.0 - 1e-12 {
                return Err(Error::AntipodalInput);
            }
        }
        let breakpoints = knots.into_iter().enumerate().map(|(j, k)| (j as f64 / pieces, k)).collect();
        let l = owners.len().saturating_sub(1);
        let mut owner_switches = vec![0.0];
        owner_switches.extend((0..l).map(|i| (i as f64 + 0.5) / l as f64));
        owner_switches.push(1.0);
        Ok(Self {
            breakpoints,
            owner_switches,
            owners,
        })
    }

    pub fn dim(&self) -> usize {
        self.breakpoints[0].1.dim()
    }

    pub fn eval(&self, t: f64) -> Vec<f64> {
        let pieces = self.breakpoints.len() - 1;
        let x = t.clamp(0.0, 1.0) * pieces as f64;
        let j = (x.floor() as usize).min(pieces - 1);
        let tau = x - j as f64;
        let (a, b) = (&self.breakpoints[j].1, &self.breakpoints[j + 1].1);
        if tau == 0.0 {
            return a.to_vec();
        }
        if tau == 1.0 {
            return b.to_vec();
        }
        let v: Vec<f64> = a.iter().zip(b.iter()).map(|(p, q)| (1.0 - tau) * p + tau * q).collect();
        let nv = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        v.into_iter().map(|c| c / nv).collect()
    }

    /// Constraint index owning parameter `t` (the later one at a switch).
    pub fn owner_at(&self, t: f64) -> usize {
        let j = self.owner_switches[1..self.owner_switches.len() - 1]
            .iter()
            .take_while(|&&s| s <= t)
            .count();
        self.owners[j]
    }
}

/// Circumscribed-cap center of the lexicographically smallest facet containing edge `{a, b}`.
fn edge_cap_center(hull: &Hull, a: usize, b: usize) -> Result<UnitVector> {
    let facet = hull
        .facets
        .iter()
        .filter(|f| f.basis.contains(&a) && f.basis.contains(&b))
        .min_by(|f, g| {
            let mut x = f.basis.clone();
            let mut y = g.basis.clone();
            x.sort_unstable();
            y.sort_unstable();
            x.cmp(&y)
        })
        .ok_or(Error::NonEdge(a, b))?;
    UnitVector::normalize(facet.outward_normal.clone())
}

/// Curve of a path `a_0 .. a_l` of `Q(A)` (point indices), with the nearest-point
/// property checked at 101 samples per edge.
pub fn path_to_curve(hull: &Hull, path: &[usize]) -> Result<CurveSample> {
    if path.len() < 2 {
        return Err(Error::Domain("path needs at least one edge".into()));
    }
    let cloud = &hull.cloud;
    let mut knots = vec![UnitVector::new(cloud.point(path[0]).to_vec())?];
    for w in path.windows(2) {
        let (a, b) = (w[0], w[1]);
        if !hull.hull_edges.contains(&(a.min(b), a.max(b))) {
            return Err(Error::NonEdge(a, b));
        }
        knots.push(edge_cap_center(hull, a, b)?);
        knots.push(UnitVector::new(cloud.point(b).to_vec())?);
    }
    let curve = CurveSample::from_knots(knots, path.to_vec())?;

    let index = PointIndex::from_points(cloud.dim, 0.25, cloud.points.iter().map(|p| p.as_slice()));
    let l = path.len() - 1;
    for i in 0..l {
        for s in 0..=100 {
            let t = (i as f64 + s as f64 / 100.0) / l as f64;
            let f = curve.eval(t);
            let owner = curve.owner_at(t);
            let d = dist(&f, cloud.point(owner));
            if let Some((j, dj)) = index.nearest_within(&f, d) {
                if dj < d - ARGMIN_TOL {
                    return Err(Error::Degenerate(format!(
                        "point {j} is closer than owner {owner} at t = {t}"
                    )));
                }
            }
        }
    }
    Ok(curve)
}

/// Inserts curve samples (step `step`) farther than `eps` from every net point.
///
/// Separation is preserved and every sample ends within `eps` of the net.
pub fn augment_net_along_curve(net: &mut SphericalNet, f: &CurveSample, step: f64) -> usize {
    let eps = net.separation;
    let mut index = net.spatial_index();
    let steps = (1.0 / step).round() as usize;
    let mut added = 0;
    for g in 0..=steps {
        let p = f.eval(g as f64 / steps as f64);
        if !index.any_within(&p, eps) {
            index.insert(&p);
            net.points.push(UnitVector::new(p).expect("curve points are unit"));
            added += 1;
        }
    }
    added
}

/// Net subsequence `(t_i, x_i)` shadowing `f`, returned as net indices.
///
/// Scans at [`CURVE_STEP`] and retries once at a tenth of it.
pub fn curve_subsequence(f: &CurveSample, net: &SphericalNet, eps: f64) -> Result<Vec<(f64, usize)>> {
    match curve_subsequence_at(f, net, eps, CURVE_STEP) {
        Err(Error::Resolution(_)) => curve_subsequence_at(f, net, eps, CURVE_STEP / 10.0),
        r => r,
    }
}

fn bisect<F: Fn(f64) -> bool>(mut inside: f64, mut outside: f64, is_inside: F) -> f64 {
    while (outside - inside).abs() > ROOT_TOL {
        let mid = 0.5 * (inside + outside);
        if is_inside(mid) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    inside
}

/// `sup { t >= from : |f(t) - x| <= eps }`, assuming `f(from)` is within `eps` of `x`.
fn last_exit(f: &CurveSample, x: &[f64], eps: f64, from: f64, steps: usize) -> f64 {
    let inside = |t: f64| dist(&f.eval(t), x) <= eps;
    let first = (from * steps as f64).ceil() as usize;
    for g in (first..=steps).rev() {
        let t = g as f64 / steps as f64;
        if inside(t) {
            if g == steps {
                return 1.0;
            }
            return bisect(t, (g + 1) as f64 / steps as f64, inside);
        }
    }
    from
}

/// As [`curve_subsequence`] at a fixed parameter step.
pub fn curve_subsequence_at(f: &CurveSample, net: &SphericalNet, eps: f64, step: f64) -> Result<Vec<(f64, usize)>> {
    let steps = (1.0 / step).round() as usize;
    let index = net.spatial_index();
    let f0 = f.eval(0.0);
    let (x0, _) = index
        .nearest_within(&f0, eps)
        .ok_or_else(|| Error::Precondition("f(0) has no net point within eps".into()))?;
    let end = f.eval(1.0);
    let mut seq = vec![(last_exit(f, &net.points[x0], eps, 0.0, steps), x0)];
    loop {
        let (t_cur, x_cur) = *seq.last().unwrap();
        let xc = &net.points[x_cur];
        if dist(xc, &end) < 7.0 * eps {
            return Ok(seq);
        }
        // first parameter at or after t_cur where a far-enough net point comes within eps
        let candidates_at = |t: f64| {
            let p = f.eval(t);
            let mut found = Vec::new();
            index.for_each_within(&p, eps, |j, _| {
                if dist(&net.points[j], xc) >= 6.0 * eps && dist(&net.points[j], &p) <= eps {
                    found.push(j);
                }
                true
            });
            found
        };
        let mut prev = t_cur;
        let mut hit = None;
        let mut g = (t_cur * steps as f64).floor() as usize;
        let mut t = t_cur;
        loop {
            let c = candidates_at(t);
            if !c.is_empty() {
                hit = Some((prev, t, c));
                break;
            }
            if t >= 1.0 {
                break;
            }
            prev = t;
            g += 1;
            t = (g as f64 / steps as f64).min(1.0);
        }
        let (lo, hi, cands) = hit.ok_or_else(|| {
            Error::Resolution(format!("no admissible net point after t = {t_cur}"))
        })?;
        let (entry, next) = cands
            .into_iter()
            .map(|j| {
                let x = &net.points[j];
                let e = if hi == lo { hi } else { bisect(hi, lo, |s| dist(&f.eval(s), x) <= eps) };
                (e, j)
            })
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
            .unwrap();
        let jump = dist(&net.points[next], xc);
        if jump > 8.0 * eps {
            return Err(Error::Resolution(format!(
                "jump {jump} exceeds 8 eps = {} at t = {entry}",
                8.0 * eps
            )));
        }
        let t_next = last_exit(f, &net.points[next], eps, entry, steps).max(entry);
        seq.push((t_next, next));
        if seq.len() > net.len() + 1 {
            return Err(Error::Resolution("subsequence does not terminate".into()));
        }
    }
}

/// Lower-bound certificate for the distance between `a_plus` and `a_minus` in `Q(A)`.
#[derive(Debug, Clone)]
pub struct LBCertificate {
    pub net: SphericalNet,
    pub epsilon: f64,
    /// Curve samples added to the net to make it dense along the curve.
    pub net_augmented: usize,
    pub a_plus: usize,
    pub a_minus: usize,
    /// Shortest path in `Q(A)` as point indices.
    pub path: Vec<usize>,
    pub curve: CurveSample,
    /// `(t_i, net index of x_i)`.
    pub sequence: Vec<(f64, usize)>,
    pub k: usize,
    /// `ceil(1 / 8 eps) - 1`, the smallest `k` the jump bound allows.
    pub k0: usize,
    /// `ceil(1 / 8 eps) + 1`, the value used for the probability estimate.
    pub k0_tail: usize,
    /// `B_i`: the cap `C(x_i, eps/2)` meets `A`.
    pub occupied: Vec<bool>,
    pub pair_count: usize,
    pub certified_lb: usize,
    pub exact_distance: usize,
}

impl LBCertificate {
    pub fn point(&self, i: usize) -> &UnitVector {
        &self.net.points[self.sequence[i].1]
    }

    pub fn is_sound(&self) -> bool {
        self.certified_lb <= self.exact_distance
    }

    /// Distinct points, jumps in `[6 eps, 8 eps]`, `|x_k - f(1)| < 7 eps`, `k >= k0`.
    pub fn validate(&self) -> Result<()> {
        let eps = self.epsilon;
        let ids: HashSet<usize> = self.sequence.iter().map(|s| s.1).collect();
        if ids.len() != self.sequence.len() {
            return Err(Error::Precondition("subsequence repeats a net point".into()));
        }
        for i in 0..self.k {
            let d = self.point(i).chord(self.point(i + 1));
            if d < 6.0 * eps || d > 8.0 * eps {
                return Err(Error::Precondition(format!("jump {i} has length {d}, eps = {eps}")));
            }
        }
        if self.point(self.k).chord(&self.curve.eval(1.0)) >= 7.0 * eps {
            return Err(Error::Precondition("last point is not within 7 eps of f(1)".into()));
        }
        if self.k < self.k0 {
            return Err(Error::Precondition(format!("k = {} < k0 = {}", self.k, self.k0)));
        }
        if !self.is_sound() {
            return Err(Error::Precondition(format!(
                "certificate {} exceeds distance {}",
                self.certified_lb, self.exact_distance
            )));
        }
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# spherepoly-lbcert v1")?;
        writeln!(
            w,
            "# eps={:.16e} a_plus={} a_minus={} k={} k0={} pairs={} distance={}",
            self.epsilon, self.a_plus, self.a_minus, self.k, self.k0, self.pair_count, self.exact_distance
        )?;
        writeln!(w, "i,t,net_index,occupied,x")?;
        for (i, (t, j)) in self.sequence.iter().enumerate() {
            let x: Vec<String> = self.net.points[*j].iter().map(|c| format!("{c:.16e}")).collect();
            writeln!(w, "{i},{t:.16e},{j},{},{}", self.occupied[i] as u8, x.join(" "))?;
        }
        Ok(())
    }

    /// Curve and subsequence caps, projected onto the first two coordinates.
    pub fn to_svg(&self) -> String {
        let pr = |v: &[f64]| (v[0], v[1]);
        let curve: Vec<(f64, f64)> = (0..=2000).map(|s| pr(&self.curve.eval(s as f64 / 2000.0))).collect();
        let mut c = SvgCanvas::new(600.0, -1.05, 1.05, -1.05, 1.05);
        c.polyline(&curve, "#1f77b4", 1.0, false);
        for (i, _) in self.sequence.iter().enumerate() {
            let fill = if self.occupied[i] { "#2ca02c" } else { "none" };
            c.data_circle(pr(self.point(i)), self.epsilon / 2.0, fill, "black");
        }
        c.finish()
    }
}

/// Certificate for a uniformly chosen `a_plus` and the point `a_minus` farthest from it,
/// at `eps = c6 m^{-1/(n-1)}`. Soundness is checked by [`LBCertificate::validate`].
pub fn certify_lower_bound(cloud: &PointCloud, hull: &Hull, q: &VertexGraph, c6: f64, seed: u64) -> Result<LBCertificate> {
    let n = cloud.dim;
    if cloud.is_empty() {
        return Err(Error::NoAntipode);
    }
    let mut rng = rng_from_seed(seed);
    let a_plus = rng.random_range(0..cloud.len());
    let (a_minus, far) = (0..cloud.len())
        .map(|j| (j, dist(cloud.point(a_plus), cloud.point(j))))
        .fold((a_plus, 0.0), |b, x| if x.1 > b.1 { x } else { b });
    if far < 1.0 {
        return Err(Error::NoAntipode);
    }
    let epsilon = c6 * cloud.intensity.powf(-1.0 / (n as f64 - 1.0));
    let pin = UnitVector::new(cloud.point(a_plus).to_vec())?;
    let mut net = greedy_separated_net_pinned(n, epsilon, derive_seed(seed, 1), Some(&pin))?;

    let vid = |a: usize| {
        q.vertex_with_basis(&[a])
            .ok_or_else(|| Error::Precondition(format!("point {a} is not a vertex of the hull")))
    };
    let path: Vec<usize> = shortest_path(q, vid(a_plus)?, vid(a_minus)?)?
        .into_iter()
        .map(|v| q.basis(v)[0])
        .collect();
    let exact_distance = path.len() - 1;
    let curve = path_to_curve(hull, &path)?;
    let net_augmented = augment_net_along_curve(&mut net, &curve, CURVE_STEP / 10.0);
    let sequence = curve_subsequence(&curve, &net, epsilon)?;

    let index = PointIndex::from_points(n, epsilon.max(1e-3), cloud.points.iter().map(|p| p.as_slice()));
    let occupied: Vec<bool> = sequence
        .iter()
        .map(|&(_, j)| index.any_within(&net.points[j], epsilon / 2.0))
        .collect();
    let pair_count = occupied.windows(2).filter(|w| w[0] && w[1]).count();
    let base = (1.0 / (8.0 * epsilon)).ceil() as usize;
    Ok(LBCertificate {
        net,
        epsilon,
        net_augmented,
        a_plus,
        a_minus,
        path,
        curve,
        k: sequence.len() - 1,
        sequence,
        k0: base.saturating_sub(1),
        k0_tail: base + 1,
        occupied,
        pair_count,
        certified_lb: pair_count,
        exact_distance,
    })
}

/// Distances in `Q(A)` between the maximizers of `e1` and `-e1` over `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct AntipodalStats {
    pub n: usize,
    pub m: f64,
    pub distances: Vec<usize>,
    pub mean: f64,
    pub median: f64,
    /// Trials without a full-dimensional hull.
    pub failures: usize,
}

/// Graph distance between `argmax <e1, a>` and `argmin <e1, a>` in one sample.
pub fn antipodal_distance(cloud: &PointCloud) -> Result<usize> {
    let hull = convex_hull(cloud, HullOptions::default())?;
    antipodal_distance_in(cloud, &hull_vertex_graph(&hull)?)
}

/// As [`antipodal_distance`] on a prebuilt graph of `Q(A)`.
pub fn antipodal_distance_in(cloud: &PointCloud, q: &VertexGraph) -> Result<usize> {
    let key = |i: &usize| cloud.point(*i)[0];
    let hi = (0..cloud.len()).max_by(|a, b| key(a).total_cmp(&key(b))).unwrap();
    let lo = (0..cloud.len()).min_by(|a, b| key(a).total_cmp(&key(b))).unwrap();
    let vid = |a: usize| q.vertex_with_basis(&[a]).ok_or(Error::Precondition(format!("{a} is interior")));
    bfs_distance(q, vid(hi)?, vid(lo)?)
}

pub fn antipodal_distance_experiment(n: usize, m: f64, trials: usize, seed: u64) -> Result<AntipodalStats> {
    if trials == 0 {
        return Err(Error::Domain("trials must be >= 1".into()));
    }
    let out: Vec<Option<usize>> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<Option<usize>> {
            let cloud = sample_poisson_sphere(n, m, derive_seed(seed, t as u64))?;
            match antipodal_distance(&cloud) {
                Ok(d) => Ok(Some(d)),
                Err(Error::Degenerate(_)) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    let distances: Vec<usize> = out.iter().flatten().copied().collect();
    let failures = trials - distances.len();
    let mean = distances.iter().sum::<usize>() as f64 / distances.len().max(1) as f64;
    Ok(AntipodalStats {
        n,
        m,
        median: median(&distances),
        distances,
        mean,
        failures,
    })
}

pub fn median(values: &[usize]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_unstable();
    let h = v.len() / 2;
    if v.len() % 2 == 1 {
        v[h] as f64
    } else {
        0.5 * (v[h - 1] + v[h]) as f64
    }
}
