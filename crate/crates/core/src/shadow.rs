//! Shadow vertices of `P(A)` for a plane `W`, shadow paths, monotone local
//! paths, the locality event and the stitched upper-bound path.

use std::collections::VecDeque;
use std::f64::consts::PI;
use std::io::Write;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;

use crate::hull::{convex_hull, polar_vertex_graph, HullOptions};
use crate::polytope_graph::VertexGraph;
use crate::prob_bounds::{locality_occupancy_threshold, t_p_eval, u_eval, BoundConstants};
use crate::sampler::{derive_seed, random_unit_vector, sample_poisson_sphere, PointCloud};
use crate::sphere_geom::{dist, dot, norm, DensityOracle, SphericalCap, SphericalNet, UnitVector};
use crate::svg::SvgCanvas;
use crate::{Error, Result};

/// Orthonormal pair spanning a 2-dimensional subspace `W`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneSpan {
    pub u1: UnitVector,
    pub u2: UnitVector,
    complement: Vec<Vec<f64>>,
}

impl PlaneSpan {
    pub fn new(u1: UnitVector, u2: UnitVector) -> Result<Self> {
        if u1.dim() != u2.dim() {
            return Err(Error::Domain("dimension mismatch".into()));
        }
        if u1.dot(&u2).abs() > 1e-12 {
            return Err(Error::Domain(format!("<u1, u2> = {:e} is not 0", u1.dot(&u2))));
        }
        let complement = orthogonal_complement(&[u1.as_slice(), u2.as_slice()]);
        Ok(Self { u1, u2, complement })
    }

    /// `span(w1, w2)` with `u1` along `w1`.
    pub fn from_spanning(w1: &[f64], w2: &[f64]) -> Result<Self> {
        let u1 = UnitVector::normalize(w1.to_vec())?;
        let c = u1.dot(w2);
        let r: Vec<f64> = w2.iter().zip(u1.iter()).map(|(b, a)| b - c * a).collect();
        if norm(&r) < 1e-12 * norm(w2).max(1e-300) {
            return Err(Error::Degenerate("spanning vectors are parallel".into()));
        }
        let mut u2 = UnitVector::normalize(r)?.into_inner();
        // one more projection removes the rounding left by the first
        let c = dot(&u2, &u1);
        u2.iter_mut().zip(u1.iter()).for_each(|(b, a)| *b -= c * a);
        Self::new(u1, UnitVector::normalize(u2)?)
    }

    /// Uniformly random plane.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        loop {
            let a = random_unit_vector(n, rng);
            let b = random_unit_vector(n, rng);
            if let Ok(p) = Self::from_spanning(&a, &b) {
                return p;
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.u1.dim()
    }

    /// Coordinates of the projection onto `W` in the basis `(u1, u2)`.
    pub fn coords(&self, x: &[f64]) -> (f64, f64) {
        (self.u1.dot(x), self.u2.dot(x))
    }

    pub fn angle(&self, x: &[f64]) -> f64 {
        let (a, b) = self.coords(x);
        b.atan2(a)
    }

    /// Orthonormal basis of `W^⊥`.
    pub fn complement(&self) -> &[Vec<f64>] {
        &self.complement
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        let r: f64 = self.complement.iter().map(|c| dot(c, x).powi(2)).sum::<f64>().sqrt();
        r <= tol * norm(x).max(1.0)
    }
}

fn orthogonal_complement(basis: &[&[f64]]) -> Vec<Vec<f64>> {
    let n = basis[0].len();
    let mut frame: Vec<Vec<f64>> = basis.iter().map(|b| b.to_vec()).collect();
    let mut out = Vec::new();
    let project = |v: &mut Vec<f64>, frame: &[Vec<f64>]| {
        for _ in 0..2 {
            for u in frame {
                let c = dot(v, u);
                v.iter_mut().zip(u).for_each(|(x, y)| *x -= c * y);
            }
        }
    };
    while frame.len() < n {
        let best = (0..n)
            .map(|i| {
                let mut e = vec![0.0; n];
                e[i] = 1.0;
                project(&mut e, &frame);
                e
            })
            .max_by(|a, b| norm(a).total_cmp(&norm(b)))
            .unwrap();
        let nb = norm(&best);
        let v: Vec<f64> = best.iter().map(|x| x / nb).collect();
        frame.push(v.clone());
        out.push(v);
    }
    out
}

/// Vertex maximizing `<w, .>`; smallest index on ties.
pub fn maximizer(g: &VertexGraph, w: &[f64]) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for v in 0..g.len() {
        let val = dot(w, g.coords(v));
        if val > best.1 {
            best = (v, val);
        }
    }
    best.0
}

/// Solves the membership program for `v` and returns the polar angle of a
/// point of `conv(A_v) ∩ W`, or `None` if the intersection is empty.
///
/// The constraints `<c_k, sum λ_j a_j> = 0` for a basis `c_k` of `W^⊥` and
/// `sum λ_j = 1` cut out a line `λ_0 + t d` in `λ`-space; the vertex is a shadow
/// vertex iff some `t` keeps every `λ_j >= 0`.
pub fn shadow_angle(g: &VertexGraph, cloud: &PointCloud, v: usize, plane: &PlaneSpan) -> Option<f64> {
    let basis = g.basis(v);
    let n = basis.len();
    let comp = plane.complement();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for (k, c) in comp.iter().enumerate() {
        for (j, &a) in basis.iter().enumerate() {
            m[(k, j)] = dot(c, cloud.point(a));
        }
    }
    for j in 0..n {
        m[(comp.len(), j)] = 1.0;
    }
    let mut rhs = DVector::<f64>::zeros(n);
    rhs[comp.len()] = 1.0;
    let svd = m.svd(true, true);
    let smax = svd.singular_values.max();
    let lambda0 = svd.solve(&rhs, 1e-12 * smax).ok()?;
    let v_t = svd.v_t.as_ref()?;
    let (imin, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))?;
    let d: Vec<f64> = v_t.row(imin).iter().copied().collect();
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for j in 0..n {
        if d[j].abs() < 1e-14 {
            if lambda0[j] < 0.0 {
                return None;
            }
        } else if d[j] > 0.0 {
            lo = lo.max(-lambda0[j] / d[j]);
        } else {
            hi = hi.min(-lambda0[j] / d[j]);
        }
    }
    if lo > hi || !lo.is_finite() || !hi.is_finite() {
        return None;
    }
    let t = 0.5 * (lo + hi);
    let mut x = vec![0.0; plane.dim()];
    for (j, &a) in basis.iter().enumerate() {
        let lam = lambda0[j] + t * d[j];
        x.iter_mut().zip(cloud.point(a)).for_each(|(s, p)| *s += lam * p);
    }
    Some(plane.angle(&x))
}

pub fn is_shadow_vertex(g: &VertexGraph, cloud: &PointCloud, v: usize, plane: &PlaneSpan) -> bool {
    shadow_angle(g, cloud, v, plane).is_some()
}

/// Shadow vertices of `P(A)` for `W`, sorted by the angle of an objective they maximize.
#[derive(Debug, Clone, PartialEq)]
pub struct ShadowRecord {
    pub plane: PlaneSpan,
    pub shadow_vertex_ids: Vec<usize>,
    pub angles: Vec<f64>,
    pub size: usize,
}

impl ShadowRecord {
    pub fn position(&self, v: usize) -> Option<usize> {
        self.shadow_vertex_ids.iter().position(|&s| s == v)
    }

    /// Consecutive shadow vertices, cyclically, must be adjacent.
    pub fn check_cyclic_adjacency(&self, g: &VertexGraph) -> Result<()> {
        let k = self.size;
        if k < 2 {
            return Ok(());
        }
        for i in 0..k {
            let (a, b) = (self.shadow_vertex_ids[i], self.shadow_vertex_ids[(i + 1) % k]);
            if !g.is_edge(a, b) {
                return Err(Error::AdjacencyViolation(a, b));
            }
        }
        Ok(())
    }

    /// Vertex ids and objective angles, one row per shadow vertex.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# spherepoly-shadow v1")?;
        writeln!(w, "position,vertex,angle")?;
        for (i, (v, a)) in self.shadow_vertex_ids.iter().zip(&self.angles).enumerate() {
            writeln!(w, "{i},{v},{a:.16e}")?;
        }
        Ok(())
    }

    /// Projection of `P(A)` onto `W` with the shadow polygon and an optional path.
    pub fn to_svg(&self, g: &VertexGraph, path: Option<&[usize]>) -> String {
        let proj: Vec<(f64, f64)> = (0..g.len()).map(|v| self.plane.coords(g.coords(v))).collect();
        let mut c = SvgCanvas::fitted(600.0, proj.iter().copied());
        for &p in &proj {
            c.circle(p, 1.2, "#999999", "none");
        }
        let poly: Vec<(f64, f64)> = self.shadow_vertex_ids.iter().map(|&v| proj[v]).collect();
        c.polyline(&poly, "black", 1.0, true);
        if let Some(path) = path {
            let pts: Vec<(f64, f64)> = path.iter().map(|&v| proj[v]).collect();
            c.polyline(&pts, "#d62728", 2.0, false);
        }
        for &p in &poly {
            c.circle(p, 2.5, "black", "none");
        }
        c.finish()
    }
}

pub fn shadow_record(g: &VertexGraph, cloud: &PointCloud, plane: &PlaneSpan) -> ShadowRecord {
    let found: Vec<(usize, f64)> = (0..g.len())
        .into_par_iter()
        .filter_map(|v| shadow_angle(g, cloud, v, plane).map(|a| (v, a)))
        .collect();
    let mut found = found;
    found.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    ShadowRecord {
        plane: plane.clone(),
        size: found.len(),
        shadow_vertex_ids: found.iter().map(|x| x.0).collect(),
        angles: found.iter().map(|x| x.1).collect(),
    }
}

/// +1 when the short rotation from `w1` to `w2` is counterclockwise in `(u1, u2)`.
fn rotation_sign(plane: &PlaneSpan, w1: &[f64], w2: &[f64]) -> i64 {
    let (a, b) = (plane.coords(w1), plane.coords(w2));
    if a.0 * b.1 - a.1 * b.0 >= 0.0 {
        1
    } else {
        -1
    }
}

fn check_in_plane(plane: &PlaneSpan, w: &[f64]) -> Result<()> {
    if !plane.contains(w, 1e-9) {
        return Err(Error::Precondition("objective does not lie in the plane".into()));
    }
    if norm(w) == 0.0 {
        return Err(Error::Precondition("zero objective".into()));
    }
    Ok(())
}

/// Shadow path from the maximizer of `w1` to the maximizer of `w2`, walking the
/// angular order of `record` in the direction of the short rotation `w1 -> w2`.
pub fn shadow_path(g: &VertexGraph, record: &ShadowRecord, w1: &[f64], w2: &[f64]) -> Result<Vec<usize>> {
    let plane = &record.plane;
    check_in_plane(plane, w1)?;
    check_in_plane(plane, w2)?;
    let (s, t) = (maximizer(g, w1), maximizer(g, w2));
    if s == t {
        return Ok(vec![s]);
    }
    let k = record.size as i64;
    let start = record
        .position(s)
        .ok_or_else(|| Error::Degenerate(format!("maximizer {s} is not a shadow vertex")))?;
    if record.position(t).is_none() {
        return Err(Error::Degenerate(format!("maximizer {t} is not a shadow vertex")));
    }
    let step = rotation_sign(plane, w1, w2);
    let mut path = vec![s];
    let mut i = start as i64;
    while *path.last().unwrap() != t {
        i = (i + step).rem_euclid(k);
        let v = record.shadow_vertex_ids[i as usize];
        let prev = *path.last().unwrap();
        if !g.is_edge(prev, v) {
            return Err(Error::AdjacencyViolation(prev, v));
        }
        path.push(v);
        if path.len() as i64 > k + 1 {
            return Err(Error::Degenerate("shadow walk did not reach its target".into()));
        }
    }
    Ok(path)
}

/// Same path as [`shadow_path`] without enumerating the whole shadow: from the
/// current vertex, step to the adjacent shadow vertex that lies further along
/// the rotation.
pub fn shadow_path_walk(
    g: &VertexGraph,
    cloud: &PointCloud,
    plane: &PlaneSpan,
    w1: &[f64],
    w2: &[f64],
) -> Result<Vec<usize>> {
    check_in_plane(plane, w1)?;
    check_in_plane(plane, w2)?;
    let (s, t) = (maximizer(g, w1), maximizer(g, w2));
    let step = rotation_sign(plane, w1, w2) as f64;
    let mut cur = s;
    let mut cur_angle = shadow_angle(g, cloud, s, plane)
        .ok_or_else(|| Error::Degenerate(format!("maximizer {s} is not a shadow vertex")))?;
    let mut path = vec![s];
    while cur != t {
        // an edge may also join non-consecutive shadow vertices, so take the smallest turn
        let mut next: Option<(usize, f64, f64)> = None;
        for &u in &g.adjacency[cur] {
            if let Some(a) = shadow_angle(g, cloud, u, plane) {
                let turn = ((a - cur_angle) * step).rem_euclid(2.0 * PI);
                if turn > 0.0 && turn < PI && next.is_none_or(|n| turn < n.2) {
                    next = Some((u, a, turn));
                }
            }
        }
        let (u, a, _) = next.ok_or(Error::AdjacencyViolation(cur, t))?;
        path.push(u);
        cur = u;
        cur_angle = a;
        if path.len() > g.len() {
            return Err(Error::Degenerate("shadow walk did not reach its target".into()));
        }
    }
    Ok(path)
}

/// Shortest path from `maximizer(w)` to `maximizer(w2)` inside the superlevel set
/// `{v : <w2, v> >= <w2, maximizer(w)>}`.
pub fn monotone_local_path(g: &VertexGraph, w: &[f64], w2: &[f64]) -> Result<Vec<usize>> {
    let start = maximizer(g, w);
    let target = maximizer(g, w2);
    let floor = dot(w2, g.coords(start));
    let allowed = |v: usize| dot(w2, g.coords(v)) >= floor;
    let mut to_target = vec![u32::MAX; g.len()];
    to_target[target] = 0;
    let mut queue = VecDeque::from([target]);
    while let Some(u) = queue.pop_front() {
        for &v in &g.adjacency[u] {
            if to_target[v] == u32::MAX && allowed(v) {
                to_target[v] = to_target[u] + 1;
                queue.push_back(v);
            }
        }
    }
    if to_target[start] == u32::MAX {
        return Err(Error::Unreachable(start, target));
    }
    let mut path = vec![start];
    let mut cur = start;
    while cur != target {
        cur = *g.adjacency[cur]
            .iter()
            .find(|&&v| to_target[v] != u32::MAX && to_target[v] + 1 == to_target[cur])
            .unwrap();
        path.push(cur);
    }
    Ok(path)
}

/// The event `E_{x,y}` evaluated on a sample.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalityEvent {
    pub x: UnitVector,
    pub y: UnitVector,
    pub epsilon: f64,
    pub p: f64,
    /// `A` is `eps`-dense for `C(x, |x - y| + 4 eps)` (conservative probe check).
    pub dense_ok: bool,
    /// Every sampled `z` on `[x, y]` has at most `45 e 2^n ln(1/p)` points in
    /// `C(z/|z|, (2 + 2/n) eps)`.
    pub occupancy_ok: bool,
    pub max_occupancy: usize,
}

impl LocalityEvent {
    pub fn holds(&self) -> bool {
        self.dense_ok && self.occupancy_ok
    }
}

/// Points `z/|z|` for `z` on the segment `[x, y]`, `count` samples including the ends.
fn segment_samples(x: &[f64], y: &[f64], count: usize) -> Vec<UnitVector> {
    (0..count)
        .filter_map(|i| {
            let s = i as f64 / (count - 1).max(1) as f64;
            let z: Vec<f64> = x.iter().zip(y).map(|(a, b)| (1.0 - s) * a + s * b).collect();
            UnitVector::normalize(z).ok()
        })
        .collect()
}

pub fn check_locality_event(cloud: &PointCloud, x: &UnitVector, y: &UnitVector, eps: f64, p: f64) -> LocalityEvent {
    let oracle = DensityOracle::new(&cloud.points, eps);
    check_locality_event_with(&oracle, cloud.dim, x, y, eps, p)
}

/// As [`check_locality_event`] with a prebuilt neighbour index over `A`.
pub fn check_locality_event_with(
    oracle: &DensityOracle,
    n: usize,
    x: &UnitVector,
    y: &UnitVector,
    eps: f64,
    p: f64,
) -> LocalityEvent {
    let cap = SphericalCap::clamped(x.clone(), x.chord(y) + 4.0 * eps);
    let dense_ok = oracle.is_dense_for(&cap, eps);
    let radius = ((2.0 + 2.0 / n as f64) * eps).min(2.0);
    let max_occupancy = segment_samples(x, y, 101)
        .into_iter()
        .map(|z| oracle.occupancy(&SphericalCap::clamped(z, radius)))
        .max()
        .unwrap_or(0);
    let occupancy_ok = (max_occupancy as f64) <= locality_occupancy_threshold(n, p);
    LocalityEvent {
        x: x.clone(),
        y: y.clone(),
        epsilon: eps,
        p,
        dense_ok,
        occupancy_ok,
        max_occupancy,
    }
}

/// Result of checking which constraints can be tight along monotone local paths.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LocalityReport {
    pub samples: usize,
    pub vertices_checked: usize,
    pub constraints_checked: usize,
    /// Tight `a` with `|w2 - a| > 2 eps + |w1 - w2|`.
    pub distance_violations: usize,
    pub max_distance_slack: f64,
    pub max_vertex_norm: f64,
    pub norm_bound: f64,
    pub norm_violations: usize,
    pub max_path_length: usize,
}

impl LocalityReport {
    pub fn clean(&self) -> bool {
        self.distance_violations == 0 && self.norm_violations == 0
    }
}

/// For 11 objectives `w` on `[w1, w2]`, checks every tight constraint of every
/// vertex of `monotone_local_path(w, w2)` against `|w2 - a| <= 2 eps + |w1 - w2|`,
/// and every vertex norm against `(1 - eps^2/2)^{-1}`.
pub fn verify_tight_constraint_locality(
    g: &VertexGraph,
    cloud: &PointCloud,
    w1: &UnitVector,
    w2: &UnitVector,
    eps: f64,
) -> Result<LocalityReport> {
    let bound = 2.0 * eps + w1.chord(w2);
    let mut rep = LocalityReport {
        norm_bound: 1.0 / (1.0 - eps * eps / 2.0),
        max_distance_slack: f64::NEG_INFINITY,
        ..Default::default()
    };
    for w in segment_samples(w1, w2, 11) {
        let path = monotone_local_path(g, &w, w2)?;
        rep.samples += 1;
        rep.max_path_length = rep.max_path_length.max(path.len() - 1);
        for &v in &path {
            rep.vertices_checked += 1;
            let nv = norm(g.coords(v));
            rep.max_vertex_norm = rep.max_vertex_norm.max(nv);
            if nv > rep.norm_bound + 1e-9 {
                rep.norm_violations += 1;
            }
            for &a in g.basis(v) {
                rep.constraints_checked += 1;
                let d = dist(w2, cloud.point(a));
                rep.max_distance_slack = rep.max_distance_slack.max(d - bound);
                if d > bound + 1e-12 {
                    rep.distance_violations += 1;
                }
            }
        }
    }
    Ok(rep)
}

/// A path from `maximizer(w)` to `maximizer(e1)` built from a local segment and a shadow segment.
#[derive(Debug, Clone, PartialEq)]
pub struct StitchedPath {
    pub objective: UnitVector,
    pub net_index: usize,
    pub vertices: Vec<usize>,
    /// Edge counts of the local segment and the shadow segment.
    pub segment_lengths: Vec<usize>,
}

impl StitchedPath {
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.len() <= 1
    }
}

/// Local path from `maximizer(w)` to the maximizer of the nearest net point `n_w`,
/// then the shadow path in `span(e1, n_w)` from `n_w` to `e1`.
pub fn stitched_diameter_path(g: &VertexGraph, cloud: &PointCloud, net: &SphericalNet, w: &UnitVector) -> Result<StitchedPath> {
    let n = g.dim;
    let e1 = UnitVector::axis(n, 0);
    let net_index = net.nearest(w);
    let nw = &net.points[net_index];
    let local = monotone_local_path(g, w, nw)?;
    let shadow = if nw.chord(&e1) == 0.0 {
        vec![maximizer(g, &e1)]
    } else if nw.chord(&e1.neg()) < 1e-12 {
        // antipodal pair: every plane through e1 contains both; use span(e1, e2)
        let plane = PlaneSpan::new(e1.clone(), UnitVector::axis(n, 1))?;
        let mid = UnitVector::axis(n, 1);
        let mut first = shadow_path_walk(g, cloud, &plane, nw, &mid)?;
        let second = shadow_path_walk(g, cloud, &plane, &mid, &e1)?;
        first.extend_from_slice(&second[1..]);
        first
    } else {
        let plane = PlaneSpan::from_spanning(&e1, nw)?;
        shadow_path_walk(g, cloud, &plane, nw, &e1)?
    };
    let mut vertices = local.clone();
    vertices.extend_from_slice(&shadow[1..]);
    for win in vertices.windows(2) {
        if !g.is_edge(win[0], win[1]) {
            return Err(Error::AdjacencyViolation(win[0], win[1]));
        }
    }
    Ok(StitchedPath {
        objective: w.clone(),
        net_index,
        vertices,
        segment_lengths: vec![local.len() - 1, shadow.len() - 1],
    })
}

/// Empirical shadow sizes against the analytic deviation scale `t_p`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShadowSizeStats {
    pub sizes: Vec<usize>,
    pub mean: f64,
    pub max_deviation: f64,
    pub t_p: f64,
    pub exceed_count: usize,
    /// Trials whose sample did not contain the origin in its hull.
    pub failures: usize,
}

pub fn shadow_size_stats(
    n: usize,
    m: f64,
    plane: &PlaneSpan,
    trials: usize,
    p: f64,
    seed: u64,
    consts: BoundConstants,
) -> Result<ShadowSizeStats> {
    if trials < 2 {
        return Err(Error::Domain("need at least 2 trials".into()));
    }
    let results: Vec<Option<usize>> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<Option<usize>> {
            let cloud = sample_poisson_sphere(n, m, derive_seed(seed, t as u64))?;
            let hull = match convex_hull(&cloud, HullOptions::default()) {
                Ok(h) => h,
                Err(Error::Degenerate(_)) => return Ok(None),
                Err(e) => return Err(e),
            };
            match polar_vertex_graph(&hull) {
                Ok(g) => Ok(Some(shadow_record(&g, &cloud, plane).size)),
                Err(Error::Polarity) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    let sizes: Vec<usize> = results.iter().flatten().copied().collect();
    let failures = trials - sizes.len();
    let mean = sizes.iter().sum::<usize>() as f64 / sizes.len().max(1) as f64;
    let max_deviation = sizes.iter().map(|&s| (s as f64 - mean).abs()).fold(0.0, f64::max);
    let u = u_eval(n, p, consts.c_u);
    let t_p = t_p_eval(m, n, p, u, consts.c1, consts.c2);
    let exceed_count = sizes.iter().filter(|&&s| (s as f64 - mean).abs() > t_p).count();
    Ok(ShadowSizeStats {
        sizes,
        mean,
        max_deviation,
        t_p,
        exceed_count,
        failures,
    })
}

/// Segment table of a stitched path.
pub fn write_stitched_csv<W: Write>(paths: &[StitchedPath], mut w: W) -> Result<()> {
    writeln!(w, "# spherepoly-stitched v1")?;
    writeln!(w, "objective,net_index,length,local_segment,shadow_segment")?;
    for p in paths {
        let obj: Vec<String> = p.objective.iter().map(|x| format!("{x:.16e}")).collect();
        writeln!(
            w,
            "{},{},{},{},{}",
            obj.join(" "),
            p.net_index,
            p.len(),
            p.segment_lengths[0],
            p.segment_lengths[1]
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::{rng_from_seed, sample_fixed_count};

    fn polygon(count: usize, seed: u64) -> (PointCloud, VertexGraph) {
        let cloud = sample_fixed_count(2, count, seed).unwrap();
        let hull = convex_hull(&cloud, HullOptions::default()).unwrap();
        let g = polar_vertex_graph(&hull).unwrap();
        (cloud, g)
    }

    #[test]
    fn plane_rejects_non_orthogonal() {
        let a = UnitVector::axis(3, 0);
        let b = UnitVector::normalize(vec![1.0, 1.0, 0.0]).unwrap();
        assert!(PlaneSpan::new(a.clone(), b.clone()).is_err());
        let p = PlaneSpan::from_spanning(&a, &b).unwrap();
        assert!(p.u1.dot(&p.u2).abs() < 1e-15);
        assert_eq!(p.complement().len(), 1);
        assert!(p.contains(&[0.3, -0.2, 0.0], 1e-12));
        assert!(!p.contains(&[0.0, 0.0, 1.0], 1e-12));
    }

    #[test]
    fn every_polygon_vertex_is_shadow() {
        let (cloud, g) = polygon(30, 4);
        let plane = PlaneSpan::new(UnitVector::axis(2, 0), UnitVector::axis(2, 1)).unwrap();
        let rec = shadow_record(&g, &cloud, &plane);
        assert_eq!(rec.size, g.len());
        rec.check_cyclic_adjacency(&g).unwrap();
    }

    #[test]
    fn maximizer_on_polygon() {
        let (_, g) = polygon(25, 9);
        let m = maximizer(&g, &[1.0, 0.0]);
        assert!((0..g.len()).all(|v| g.coords(v)[0] <= g.coords(m)[0]));
    }

    #[test]
    fn polygon_shadow_path_counts_arcs() {
        let (cloud, g) = polygon(40, 2);
        let plane = PlaneSpan::new(UnitVector::axis(2, 0), UnitVector::axis(2, 1)).unwrap();
        let rec = shadow_record(&g, &cloud, &plane);
        let w1 = [1.0, 0.0];
        let w2 = [0.0, 1.0];
        let path = shadow_path(&g, &rec, &w1, &w2).unwrap();
        let (i, j) = (rec.position(path[0]).unwrap(), rec.position(*path.last().unwrap()).unwrap());
        assert_eq!(path.len() - 1, (j + rec.size - i) % rec.size);
        assert_eq!(shadow_path(&g, &rec, &w1, &w1).unwrap().len(), 1);
        assert_eq!(shadow_path_walk(&g, &cloud, &plane, &w1, &w2).unwrap(), path);
        for win in path.windows(2) {
            assert!(dot(&w2, g.coords(win[1])) >= dot(&w2, g.coords(win[0])));
        }
    }

    #[test]
    fn local_path_trivial_and_dominating() {
        let cloud = sample_poisson_sphere(3, 300.0, 5).unwrap();
        let hull = convex_hull(&cloud, HullOptions::default()).unwrap();
        let g = polar_vertex_graph(&hull).unwrap();
        let mut rng = rng_from_seed(3);
        for _ in 0..20 {
            let w = random_unit_vector(3, &mut rng);
            assert_eq!(monotone_local_path(&g, &w, &w).unwrap().len(), 1);
            let w2 = random_unit_vector(3, &mut rng);
            let path = monotone_local_path(&g, &w, &w2).unwrap();
            let free = crate::polytope_graph::bfs_distance(&g, path[0], *path.last().unwrap()).unwrap();
            assert!(path.len() > free);
        }
    }

    #[test]
    fn empty_sample_is_not_local() {
        let cloud = PointCloud::from_points(3, vec![], 1.0, 0).unwrap();
        let x = UnitVector::axis(3, 0);
        let ev = check_locality_event(&cloud, &x, &x, 0.1, 0.01);
        assert!(!ev.dense_ok && !ev.holds());
    }
}
