//! Convex hull `Q(A) = conv(A)` and the polar vertex graph of `P(A)`.

use std::collections::{BTreeSet, HashMap};
use std::io::Write;

use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::exact::orientation_sign;
use crate::polytope_graph::{PolytopeKind, VertexGraph};
use crate::sampler::{rng_from_seed, PointCloud};
use crate::sphere_geom::{dot, norm};
use crate::{Error, Result, GEOM_TOL};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HullOptions {
    /// Plane distances inside `[-tolerance, tolerance]` are decided exactly.
    pub tolerance: f64,
    /// Seed for the random insertion order.
    pub seed: u64,
}

impl Default for HullOptions {
    fn default() -> Self {
        Self {
            tolerance: GEOM_TOL,
            seed: 0,
        }
    }
}

/// A simplicial facet of `Q(A)`: `<outward_normal, a_i> = support` for `i` in `basis`.
#[derive(Debug, Clone, PartialEq)]
pub struct Facet {
    pub basis: Vec<usize>,
    pub outward_normal: Vec<f64>,
    pub support: f64,
}

#[derive(Debug, Clone)]
pub struct Hull {
    pub cloud: PointCloud,
    pub facets: Vec<Facet>,
    /// `neighbors[f][k]` is the facet across the ridge `basis \ {basis[k]}`.
    pub neighbors: Vec<Vec<usize>>,
    pub ridge_adjacency: HashMap<Vec<usize>, (usize, usize)>,
    pub hull_edges: BTreeSet<(usize, usize)>,
    pub tolerance: f64,
}

impl Hull {
    pub fn dim(&self) -> usize {
        self.cloud.dim
    }

    /// Sorted indices of points that are vertices of `Q(A)`.
    pub fn vertices(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.facets.iter().flat_map(|f| f.basis.iter().copied()).collect();
        set.into_iter().collect()
    }

    /// Largest signed distance of any point above any facet plane.
    pub fn max_violation(&self) -> f64 {
        let pts = &self.cloud.points;
        self.facets
            .par_iter()
            .map(|f| {
                pts.iter()
                    .map(|a| dot(&f.outward_normal, a) - f.support)
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .reduce(|| f64::NEG_INFINITY, f64::max)
    }

    /// Structural checks: simplicial facets, two facets per ridge, all points
    /// below every facet (within the tolerance) and, for `n = 3`, Euler's relation.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        for f in &self.facets {
            if f.basis.len() != n || f.basis.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Degenerate(format!("bad facet basis {:?}", f.basis)));
            }
        }
        if self.ridge_adjacency.len() * 2 != self.facets.len() * n {
            return Err(Error::Degenerate("a ridge is not shared by exactly two facets".into()));
        }
        let worst = self.max_violation();
        if worst > self.tolerance {
            return Err(Error::Degenerate(format!("point above a facet by {worst:e}")));
        }
        if n == 3 {
            let (v, e, f) = (self.vertices().len(), self.hull_edges.len(), self.facets.len());
            if v + f != e + 2 || 2 * e != 3 * f {
                return Err(Error::Degenerate(format!("Euler check failed: V={v} E={e} F={f}")));
            }
        }
        Ok(())
    }

    /// Facet table: basis indices, normal and support, one facet per row.
    pub fn write_facet_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let n = self.dim();
        let mut cols: Vec<String> = (0..n).map(|i| format!("b{i}")).collect();
        cols.extend((0..n).map(|i| format!("u{i}")));
        cols.push("support".into());
        writeln!(w, "# spherepoly-facets v1")?;
        writeln!(w, "{}", cols.join(","))?;
        for f in &self.facets {
            let mut row: Vec<String> = f.basis.iter().map(|b| b.to_string()).collect();
            row.extend(f.outward_normal.iter().map(|x| format!("{x:.16e}")));
            row.push(format!("{:.16e}", f.support));
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}

struct Face {
    verts: Vec<u32>,
    normal: Vec<f64>,
    offset: f64,
    neighbors: Vec<usize>,
    outside: Vec<u32>,
    alive: bool,
    visit: u32,
}

struct Builder<'a> {
    pts: &'a [crate::UnitVector],
    n: usize,
    tol: f64,
    interior: Vec<f64>,
    faces: Vec<Face>,
}

impl Builder<'_> {
    fn point(&self, i: u32) -> &[f64] {
        &self.pts[i as usize]
    }

    fn make_face(&mut self, verts: Vec<u32>) -> usize {
        let mut normal = hyperplane_normal(&verts.iter().map(|&v| self.point(v)).collect::<Vec<_>>());
        let nrm = norm(&normal);
        normal.iter_mut().for_each(|x| *x /= nrm);
        let p0 = self.point(verts[0]);
        let mut offset = dot(&normal, p0);
        if offset < dot(&normal, &self.interior) {
            normal.iter_mut().for_each(|x| *x = -*x);
            offset = -offset;
        }
        let n = self.n;
        self.faces.push(Face {
            verts,
            normal,
            offset,
            neighbors: vec![usize::MAX; n],
            outside: Vec::new(),
            alive: true,
            visit: 0,
        });
        self.faces.len() - 1
    }

    /// Strictly above the facet plane, decided exactly near the plane.
    fn visible(&self, f: usize, q: u32) -> Result<bool> {
        let face = &self.faces[f];
        let d = dot(&face.normal, self.point(q)) - face.offset;
        if d > self.tol {
            return Ok(true);
        }
        if d < -self.tol {
            return Ok(false);
        }
        let mut rows: Vec<&[f64]> = face.verts.iter().map(|&v| self.point(v)).collect();
        rows.push(self.point(q));
        let sq = orientation_sign(&rows);
        if sq == 0 {
            return Err(Error::Degenerate(format!(
                "point {q} is affinely dependent on facet {:?}",
                face.verts
            )));
        }
        rows.pop();
        rows.push(&self.interior);
        let si = orientation_sign(&rows);
        Ok(sq != si)
    }
}

/// Normal of the hyperplane through `n` points in `R^n` by cofactor expansion.
fn hyperplane_normal(pts: &[&[f64]]) -> Vec<f64> {
    let n = pts.len();
    let diffs: Vec<Vec<f64>> = pts[1..]
        .iter()
        .map(|p| p.iter().zip(pts[0]).map(|(a, b)| a - b).collect())
        .collect();
    if n == 2 {
        return vec![-diffs[0][1], diffs[0][0]];
    }
    if n == 3 {
        let (a, b) = (&diffs[0], &diffs[1]);
        return vec![
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ];
    }
    let mut out = vec![0.0; n];
    let mut minor = vec![0.0; (n - 1) * (n - 1)];
    for (j, o) in out.iter_mut().enumerate() {
        for (r, row) in diffs.iter().enumerate() {
            let mut c = 0;
            for (k, &v) in row.iter().enumerate() {
                if k != j {
                    minor[r * (n - 1) + c] = v;
                    c += 1;
                }
            }
        }
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        *o = sign * det_in_place(&mut minor, n - 1);
    }
    out
}

/// Determinant by Gaussian elimination with partial pivoting; destroys `a`.
fn det_in_place(a: &mut [f64], k: usize) -> f64 {
    let mut det = 1.0;
    for c in 0..k {
        let piv = (c..k)
            .max_by(|&x, &y| a[x * k + c].abs().total_cmp(&a[y * k + c].abs()))
            .unwrap();
        if a[piv * k + c] == 0.0 {
            return 0.0;
        }
        if piv != c {
            for j in 0..k {
                a.swap(piv * k + j, c * k + j);
            }
            det = -det;
        }
        let p = a[c * k + c];
        det *= p;
        for r in c + 1..k {
            let f = a[r * k + c] / p;
            for j in c..k {
                a[r * k + j] -= f * a[c * k + j];
            }
        }
    }
    det
}

/// Distance from `q` to the affine span of `base` (Gram-Schmidt on differences).
fn affine_residual(base: &[Vec<f64>], q: &[f64]) -> f64 {
    let mut r: Vec<f64> = q.iter().zip(&base[0]).map(|(a, b)| a - b).collect();
    for u in &base[1..] {
        let c = dot(&r, u);
        r.iter_mut().zip(u).for_each(|(x, y)| *x -= c * y);
    }
    norm(&r)
}

fn initial_simplex(pts: &[crate::UnitVector], order: &[u32], n: usize) -> Result<Vec<u32>> {
    let mut chosen = vec![order[0]];
    // origin point followed by an orthonormal basis of the current span
    let mut frame: Vec<Vec<f64>> = vec![pts[order[0] as usize].to_vec()];
    while chosen.len() < n + 1 {
        let best = order
            .iter()
            .map(|&i| (i, affine_residual(&frame, &pts[i as usize])))
            .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)))
            .unwrap();
        if best.1 < 1e-12 {
            return Err(Error::Degenerate("points are not affinely spanning".into()));
        }
        let q = &pts[best.0 as usize];
        let mut r: Vec<f64> = q.iter().zip(&frame[0]).map(|(a, b)| a - b).collect();
        for u in &frame[1..] {
            let c = dot(&r, u);
            r.iter_mut().zip(u).for_each(|(x, y)| *x -= c * y);
        }
        let nr = norm(&r);
        r.iter_mut().for_each(|x| *x /= nr);
        frame.push(r);
        chosen.push(best.0);
    }
    Ok(chosen)
}

/// Beneath-beyond hull with conflict lists and a seeded random insertion order.
pub fn convex_hull(cloud: &PointCloud, opts: HullOptions) -> Result<Hull> {
    let n = cloud.dim;
    let pts = &cloud.points;
    if pts.len() < n + 1 {
        return Err(Error::Degenerate(format!("{} points cannot span R^{n}", pts.len())));
    }
    let mut order: Vec<u32> = (0..pts.len() as u32).collect();
    order.shuffle(&mut rng_from_seed(opts.seed));

    let simplex = initial_simplex(pts, &order, n)?;
    let mut interior = vec![0.0; n];
    for &s in &simplex {
        interior.iter_mut().zip(pts[s as usize].iter()).for_each(|(c, x)| *c += x);
    }
    interior.iter_mut().for_each(|c| *c /= (n + 1) as f64);

    let mut b = Builder {
        pts,
        n,
        tol: opts.tolerance,
        interior,
        faces: Vec::new(),
    };
    // facet k omits simplex vertex k; facets k and j are adjacent across the ridge omitting both
    for k in 0..=n {
        let verts: Vec<u32> = simplex.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &v)| v).collect();
        b.make_face(verts);
    }
    for k in 0..=n {
        let verts = b.faces[k].verts.clone();
        for (pos, v) in verts.iter().enumerate() {
            let j = simplex.iter().position(|s| s == v).unwrap();
            b.faces[k].neighbors[pos] = j;
        }
    }

    let mut conflict: Vec<usize> = vec![usize::MAX; pts.len()];
    let in_simplex: BTreeSet<u32> = simplex.iter().copied().collect();
    for &q in &order {
        if in_simplex.contains(&q) {
            continue;
        }
        for f in 0..=n {
            if b.visible(f, q)? {
                b.faces[f].outside.push(q);
                conflict[q as usize] = f;
                break;
            }
        }
    }

    let mut stamp = 0u32;
    let mut visible: Vec<usize> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    let mut horizon: Vec<(usize, usize, usize)> = Vec::new();
    let mut pending: HashMap<Vec<u32>, (usize, usize)> = HashMap::new();
    for &q in &order {
        let start = conflict[q as usize];
        if start == usize::MAX || in_simplex.contains(&q) {
            continue;
        }
        debug_assert!(b.faces[start].alive);
        stamp += 2;
        visible.clear();
        horizon.clear();
        stack.push(start);
        b.faces[start].visit = stamp;
        // stamp marks visible faces, stamp + 1 marks faces tested and found hidden
        while let Some(f) = stack.pop() {
            visible.push(f);
            for k in 0..n {
                let g = b.faces[f].neighbors[k];
                let mark = b.faces[g].visit;
                if mark == stamp {
                    continue;
                }
                if mark != stamp + 1 && b.visible(g, q)? {
                    b.faces[g].visit = stamp;
                    stack.push(g);
                } else {
                    b.faces[g].visit = stamp + 1;
                    horizon.push((f, k, g));
                }
            }
        }

        let first_new = b.faces.len();
        pending.clear();
        for &(f, k, g) in &horizon {
            let mut verts = b.faces[f].verts.clone();
            verts[k] = q;
            let h = b.make_face(verts);
            b.faces[h].neighbors[k] = g;
            let back = b.faces[g].neighbors.iter().position(|&x| x == f).unwrap();
            b.faces[g].neighbors[back] = h;
            for j in 0..n {
                if j == k {
                    continue;
                }
                let mut key: Vec<u32> = b.faces[h]
                    .verts
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != j && i != k)
                    .map(|(_, &v)| v)
                    .collect();
                key.sort_unstable();
                if let Some((other, oj)) = pending.remove(&key) {
                    b.faces[h].neighbors[j] = other;
                    b.faces[other].neighbors[oj] = h;
                } else {
                    pending.insert(key, (h, j));
                }
            }
        }
        if !pending.is_empty() {
            return Err(Error::Degenerate("open horizon while inserting a point".into()));
        }

        conflict[q as usize] = usize::MAX;
        for &f in &visible {
            b.faces[f].alive = false;
            let outside = std::mem::take(&mut b.faces[f].outside);
            for p in outside {
                if p == q {
                    continue;
                }
                conflict[p as usize] = usize::MAX;
                for h in first_new..b.faces.len() {
                    if b.visible(h, p)? {
                        b.faces[h].outside.push(p);
                        conflict[p as usize] = h;
                        break;
                    }
                }
            }
        }
    }

    finish(cloud.clone(), b.faces, opts.tolerance)
}

fn finish(cloud: PointCloud, faces: Vec<Face>, tolerance: f64) -> Result<Hull> {
    let n = cloud.dim;
    let mut remap = vec![usize::MAX; faces.len()];
    let mut next = 0;
    for (i, f) in faces.iter().enumerate() {
        if f.alive {
            remap[i] = next;
            next += 1;
        }
    }
    let mut facets = Vec::with_capacity(next);
    let mut neighbors = Vec::with_capacity(next);
    for f in faces.iter().filter(|f| f.alive) {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.sort_by_key(|&k| f.verts[k]);
        let basis: Vec<usize> = perm.iter().map(|&k| f.verts[k] as usize).collect();
        let nb: Vec<usize> = perm.iter().map(|&k| remap[f.neighbors[k]]).collect();
        if nb.contains(&usize::MAX) {
            return Err(Error::Degenerate("facet adjacent to a removed facet".into()));
        }
        let support = basis.iter().map(|&i| dot(&f.normal, &cloud.points[i])).sum::<f64>() / n as f64;
        facets.push(Facet {
            basis,
            outward_normal: f.normal.clone(),
            support,
        });
        neighbors.push(nb);
    }
    let mut ridge_adjacency = HashMap::with_capacity(facets.len() * n / 2);
    let mut hull_edges = BTreeSet::new();
    for (fi, f) in facets.iter().enumerate() {
        for k in 0..n {
            let g = neighbors[fi][k];
            if fi < g {
                let ridge: Vec<usize> = f.basis.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &v)| v).collect();
                ridge_adjacency.insert(ridge, (fi, g));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                hull_edges.insert((f.basis[i], f.basis[j]));
            }
        }
    }
    Ok(Hull {
        cloud,
        facets,
        neighbors,
        ridge_adjacency,
        hull_edges,
        tolerance,
    })
}

/// Whether the origin lies strictly inside `Q(A)`.
pub fn contains_origin(hull: &Hull) -> bool {
    hull.facets.iter().all(|f| f.support > hull.tolerance)
}

/// Vertex graph of `P(A)`: facet `(S, u, h)` of `Q(A)` becomes the vertex `u / h`
/// with tight set `S`, and ridges of `Q(A)` become edges.
pub fn polar_vertex_graph(hull: &Hull) -> Result<VertexGraph> {
    if !contains_origin(hull) {
        return Err(Error::Polarity);
    }
    let vertices = hull
        .facets
        .iter()
        .map(|f| {
            let coords = f.outward_normal.iter().map(|x| x / f.support).collect();
            (coords, f.basis.clone())
        })
        .collect();
    let adjacency = hull
        .neighbors
        .iter()
        .map(|nb| {
            let mut v = nb.clone();
            v.sort_unstable();
            v
        })
        .collect();
    VertexGraph::new(PolytopeKind::P, hull.dim(), vertices, adjacency)
}

/// Vertex graph of `Q(A)` itself; vertex bases are the singleton point indices.
pub fn hull_vertex_graph(hull: &Hull) -> Result<VertexGraph> {
    let ids = hull.vertices();
    let pos: HashMap<usize, usize> = ids.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let vertices = ids.iter().map(|&i| (hull.cloud.point(i).to_vec(), vec![i])).collect();
    let mut adjacency = vec![Vec::new(); ids.len()];
    for &(a, b) in &hull.hull_edges {
        adjacency[pos[&a]].push(pos[&b]);
        adjacency[pos[&b]].push(pos[&a]);
    }
    adjacency.iter_mut().for_each(|v: &mut Vec<usize>| v.sort_unstable());
    VertexGraph::new(PolytopeKind::Q, hull.dim(), vertices, adjacency)
}
