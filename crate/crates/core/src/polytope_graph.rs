//! Vertex graphs of `P(A)` and `Q(A)`: distances, diameters and the dual walk
//! relating a path in `P` to a walk in its polar.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::io::Write;

use rayon::prelude::*;

use crate::{Error, Result};

/// Graphs with more vertices than this use the pruned iFUB diameter search.
pub const ALL_PAIRS_LIMIT: usize = 50_000;

const UNSEEN: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolytopeKind {
    /// The H-polytope `{x : <a, x> <= 1}`.
    P,
    /// The V-polytope `conv(A)`.
    Q,
}

#[derive(Debug, Clone)]
pub struct VertexGraph {
    pub kind: PolytopeKind,
    pub dim: usize,
    /// `(coords, basis)` per vertex; the basis is the sorted tight set.
    pub vertices: Vec<(Vec<f64>, Vec<usize>)>,
    /// Sorted neighbour lists.
    pub adjacency: Vec<Vec<usize>>,
    by_basis: HashMap<Vec<usize>, usize>,
}

impl VertexGraph {
    pub fn new(
        kind: PolytopeKind,
        dim: usize,
        vertices: Vec<(Vec<f64>, Vec<usize>)>,
        mut adjacency: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if vertices.len() != adjacency.len() {
            return Err(Error::Domain("vertex and adjacency counts differ".into()));
        }
        adjacency.iter_mut().for_each(|nb| {
            nb.sort_unstable();
            nb.dedup();
        });
        for (u, nb) in adjacency.iter().enumerate() {
            for &v in nb {
                if v >= adjacency.len() || v == u || adjacency[v].binary_search(&u).is_err() {
                    return Err(Error::Domain(format!("asymmetric or invalid edge ({u}, {v})")));
                }
            }
        }
        let mut by_basis = HashMap::with_capacity(vertices.len());
        for (i, (_, b)) in vertices.iter().enumerate() {
            if by_basis.insert(b.clone(), i).is_some() {
                return Err(Error::Domain(format!("duplicate basis {b:?}")));
            }
        }
        Ok(Self {
            kind,
            dim,
            vertices,
            adjacency,
            by_basis,
        })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn coords(&self, v: usize) -> &[f64] {
        &self.vertices[v].0
    }

    pub fn basis(&self, v: usize) -> &[usize] {
        &self.vertices[v].1
    }

    pub fn vertex_with_basis(&self, basis: &[usize]) -> Option<usize> {
        self.by_basis.get(basis).copied()
    }

    pub fn is_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Vertices whose tight set contains constraint `a`, in increasing order.
    pub fn vertices_tight_at(&self, a: usize) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.basis(v).binary_search(&a).is_ok()).collect()
    }

    pub fn is_simple(&self) -> bool {
        self.adjacency.iter().all(|nb| nb.len() == self.dim)
    }

    pub fn is_connected(&self) -> bool {
        self.is_empty() || bfs_levels(self, &[0]).iter().all(|&d| d != UNSEEN)
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Adjacency table: vertex id, basis, coordinates, neighbour ids.
    pub fn write_adjacency_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# spherepoly-graph v1 kind={:?} n={}", self.kind, self.dim)?;
        writeln!(w, "id,basis,coords,neighbors")?;
        for (i, (coords, basis)) in self.vertices.iter().enumerate() {
            let join = |it: Vec<String>| it.join(" ");
            writeln!(
                w,
                "{i},{},{},{}",
                join(basis.iter().map(|b| b.to_string()).collect()),
                join(coords.iter().map(|x| format!("{x:.16e}")).collect()),
                join(self.adjacency[i].iter().map(|b| b.to_string()).collect()),
            )?;
        }
        Ok(())
    }
}

/// BFS levels from a set of sources; unreachable vertices get `u32::MAX`.
pub fn bfs_levels(g: &VertexGraph, sources: &[usize]) -> Vec<u32> {
    let mut dist = vec![UNSEEN; g.len()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if dist[s] == UNSEEN {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        for &v in &g.adjacency[u] {
            if dist[v] == UNSEEN {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

pub fn bfs_distance(g: &VertexGraph, u: usize, v: usize) -> Result<usize> {
    match bfs_levels(g, &[u])[v] {
        UNSEEN => Err(Error::Unreachable(u, v)),
        d => Ok(d as usize),
    }
}

/// Lexicographically smallest among the shortest paths from any source to any target.
pub fn shortest_path_between_sets(g: &VertexGraph, sources: &[usize], targets: &[usize]) -> Result<Vec<usize>> {
    let to_target = bfs_levels(g, targets);
    let start = sources
        .iter()
        .copied()
        .filter(|&s| to_target[s] != UNSEEN)
        .min_by_key(|&s| (to_target[s], s))
        .ok_or_else(|| Error::Unreachable(sources.first().copied().unwrap_or(0), targets.first().copied().unwrap_or(0)))?;
    let mut path = vec![start];
    let mut cur = start;
    while to_target[cur] > 0 {
        cur = *g.adjacency[cur]
            .iter()
            .find(|&&v| to_target[v] + 1 == to_target[cur])
            .expect("BFS levels decrease along some edge");
        path.push(cur);
    }
    Ok(path)
}

pub fn shortest_path(g: &VertexGraph, u: usize, v: usize) -> Result<Vec<usize>> {
    shortest_path_between_sets(g, &[u], &[v]).map_err(|_| Error::Unreachable(u, v))
}

/// Eccentricity of `s` and the smallest vertex attaining it.
fn eccentricity(g: &VertexGraph, s: usize) -> (u32, usize) {
    let dist = bfs_levels(g, &[s]);
    let mut best = (0, s);
    for (v, &d) in dist.iter().enumerate() {
        if d > best.0 {
            best = (d, v);
        }
    }
    best
}

/// Exact diameter and a witness pair.
///
/// Up to [`ALL_PAIRS_LIMIT`] vertices this runs one BFS per vertex and returns
/// the lexicographically smallest pair `(s, t)`, `s < t`, at maximal distance.
/// Larger graphs use [`diameter_ifub`], whose witness is not canonical.
pub fn diameter(g: &VertexGraph) -> Result<(usize, (usize, usize))> {
    if g.is_empty() {
        return Err(Error::Domain("empty graph".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if g.len() > ALL_PAIRS_LIMIT {
        return Ok(diameter_ifub(g));
    }
    let ecc: Vec<(u32, usize)> = (0..g.len()).into_par_iter().map(|s| eccentricity(g, s)).collect();
    let (s, &(d, t)) = ecc
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .0.cmp(&b.1 .0).then(b.0.cmp(&a.0)))
        .unwrap();
    Ok((d as usize, (s.min(t), s.max(t))))
}

/// iFUB: exact diameter from the BFS fringe of a central start vertex.
///
/// The start is the midpoint of a double sweep. The graph must be connected.
pub fn diameter_ifub(g: &VertexGraph) -> (usize, (usize, usize)) {
    let (_, a) = eccentricity(g, 0);
    let da = bfs_levels(g, &[a]);
    let (_, b) = eccentricity(g, a);
    // walk back from b towards a to the midpoint of the sweep path
    let mut u = b;
    let half = da[b] / 2;
    while da[u] > half {
        u = *g.adjacency[u].iter().find(|&&v| da[v] + 1 == da[u]).unwrap();
    }
    let levels = bfs_levels(g, &[u]);
    let ecc_u = *levels.iter().max().unwrap();
    let mut fringe: Vec<Vec<usize>> = vec![Vec::new(); ecc_u as usize + 1];
    for (v, &d) in levels.iter().enumerate() {
        fringe[d as usize].push(v);
    }
    let far = fringe[ecc_u as usize][0];
    let mut best = (ecc_u, (u.min(far), u.max(far)));
    let mut i = ecc_u;
    while i > 0 && best.0 <= 2 * (i - 1) {
        let layer = fringe[i as usize]
            .par_iter()
            .map(|&v| {
                let (d, t) = eccentricity(g, v);
                (d, (v.min(t), v.max(t)))
            })
            .max_by(|x, y| x.0.cmp(&y.0).then(y.1.cmp(&x.1)));
        if let Some(l) = layer {
            if l.0 > best.0 {
                best = l;
            }
        }
        i -= 1;
    }
    (best.0 as usize, best.1)
}

/// The walk `a_1 = u_0, ..., u_L = a_2` in `Q` extracted from a path `w_0..w_D` in `P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkCertificate {
    pub path_in_p: Vec<usize>,
    pub walk_in_q: Vec<usize>,
    /// `l_0 = 0 < l_1 < ... < l_{L-1} = D`.
    pub breakpoints: Vec<usize>,
}

impl WalkCertificate {
    pub fn path_length(&self) -> usize {
        self.path_in_p.len() - 1
    }

    pub fn walk_length(&self) -> usize {
        self.walk_in_q.len() - 1
    }

    /// `L <= D/(n-1) + 2`, compared in integers as `(L - 2)(n - 1) <= D`.
    pub fn length_bound_holds(&self, n: usize) -> bool {
        let l = self.walk_length() as i64;
        (l - 2) * (n as i64 - 1) <= self.path_length() as i64
    }

    /// Consecutive walk entries are distinct and form edges of `Q`.
    pub fn validate(&self, hull_edges: &BTreeSet<(usize, usize)>, n: usize) -> Result<()> {
        for w in self.walk_in_q.windows(2) {
            let (a, b) = (w[0].min(w[1]), w[0].max(w[1]));
            if a == b || !hull_edges.contains(&(a, b)) {
                return Err(Error::NonEdge(w[0], w[1]));
            }
        }
        if !self.length_bound_holds(n) {
            return Err(Error::Precondition(format!(
                "walk length {} exceeds D/(n-1) + 2 for D = {}",
                self.walk_length(),
                self.path_length()
            )));
        }
        Ok(())
    }
}

/// Extracts the dual walk from a path in the graph of a simple polytope `P`.
///
/// `l_i` is the last index such that the tight sets `S_{l_{i-1}}, ..., S_{l_i}`
/// still share a constraint, and `u_i` is the smallest such shared constraint.
/// The path must be minimal: `a_1` tight only at `w_0`, `a_2` tight only at `w_D`.
pub fn extract_dual_walk(p: &VertexGraph, path: &[usize], a1: usize, a2: usize) -> Result<WalkCertificate> {
    if path.is_empty() {
        return Err(Error::Precondition("empty path".into()));
    }
    for w in path.windows(2) {
        if !p.is_edge(w[0], w[1]) {
            return Err(Error::NonEdge(w[0], w[1]));
        }
    }
    let d = path.len() - 1;
    let tight = |i: usize, a: usize| p.basis(path[i]).binary_search(&a).is_ok();
    if a1 == a2 || !tight(0, a1) || !tight(d, a2) {
        return Err(Error::Precondition("endpoints must be distinct and tight at the path ends".into()));
    }
    if (1..=d).any(|i| tight(i, a1)) || (0..d).any(|i| tight(i, a2)) {
        return Err(Error::Precondition("path is not minimal between the two facets".into()));
    }
    let mut walk = vec![a1];
    let mut breakpoints = vec![0];
    if d > 0 {
        let mut lo = 0;
        loop {
            let mut common: Vec<usize> = p.basis(path[lo]).to_vec();
            let mut j = lo;
            while j < d {
                let next: Vec<usize> = common.iter().copied().filter(|&a| tight(j + 1, a)).collect();
                if next.is_empty() {
                    break;
                }
                common = next;
                j += 1;
            }
            if j == lo {
                return Err(Error::Precondition("consecutive tight sets are disjoint".into()));
            }
            walk.push(common[0]);
            breakpoints.push(j);
            if j == d {
                break;
            }
            lo = j;
        }
    }
    walk.push(a2);
    Ok(WalkCertificate {
        path_in_p: path.to_vec(),
        walk_in_q: walk,
        breakpoints,
    })
}

/// Shortest path between the facets `F_1 = {<a_1, x> = 1}` and `F_2` of `P`,
/// followed by [`extract_dual_walk`].
pub fn dual_walk_between(p: &VertexGraph, a1: usize, a2: usize) -> Result<WalkCertificate> {
    let f1 = p.vertices_tight_at(a1);
    let f2 = p.vertices_tight_at(a2);
    if f1.is_empty() || f2.is_empty() {
        return Err(Error::Precondition("constraint is not a facet of P".into()));
    }
    let path = shortest_path_between_sets(p, &f1, &f2)?;
    extract_dual_walk(p, &path, a1, a2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiameterRelation {
    pub n: usize,
    pub diam_p: usize,
    pub diam_q: usize,
    pub witness_q: (usize, usize),
    /// `diam(P) >= (n - 1)(diam(Q) - 2)`.
    pub holds: bool,
}

pub fn diameter_relation_check(p: &VertexGraph, q: &VertexGraph) -> Result<DiameterRelation> {
    let n = p.dim;
    let (diam_p, _) = diameter(p)?;
    let (diam_q, witness_q) = diameter(q)?;
    let holds = diam_p as i64 >= (n as i64 - 1) * (diam_q as i64 - 2);
    Ok(DiameterRelation {
        n,
        diam_p,
        diam_q,
        witness_q,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(m: usize) -> VertexGraph {
        let vertices = (0..m).map(|i| (vec![i as f64, 0.0], vec![i, (i + 1) % m].into_iter().collect::<BTreeSet<_>>().into_iter().collect())).collect();
        let adjacency = (0..m).map(|i| vec![(i + m - 1) % m, (i + 1) % m]).collect();
        VertexGraph::new(PolytopeKind::P, 2, vertices, adjacency).unwrap()
    }

    #[test]
    fn cycle_diameter() {
        for m in [3, 4, 7, 10] {
            let g = cycle(m);
            let (d, (s, t)) = diameter(&g).unwrap();
            assert_eq!(d, m / 2);
            assert_eq!((s, t), (0, m / 2));
            assert_eq!(diameter_ifub(&g).0, m / 2);
        }
    }

    #[test]
    fn complete_graph_diameter() {
        let vertices = (0..4).map(|i| (vec![0.0; 3], vec![i])).collect();
        let adjacency = (0..4).map(|i| (0..4).filter(|&j| j != i).collect()).collect();
        let g = VertexGraph::new(PolytopeKind::P, 3, vertices, adjacency).unwrap();
        assert_eq!(diameter(&g).unwrap(), (1, (0, 1)));
    }

    #[test]
    fn disconnected_is_error() {
        let vertices = (0..2).map(|i| (vec![0.0; 2], vec![i])).collect();
        let g = VertexGraph::new(PolytopeKind::Q, 2, vertices, vec![vec![], vec![]]).unwrap();
        assert!(matches!(diameter(&g), Err(Error::Disconnected)));
        assert!(matches!(bfs_distance(&g, 0, 1), Err(Error::Unreachable(0, 1))));
    }

    #[test]
    fn asymmetric_rejected() {
        let vertices = (0..2).map(|i| (vec![0.0; 2], vec![i])).collect();
        assert!(VertexGraph::new(PolytopeKind::Q, 2, vertices, vec![vec![1], vec![]]).is_err());
    }

    #[test]
    fn single_edge_walk() {
        // polygon: vertex i is tight at constraints {i, i+1}
        let g = cycle(6);
        let cert = extract_dual_walk(&g, &[0, 1], 0, 2).unwrap();
        assert_eq!(cert.walk_in_q, vec![0, 1, 2]);
        assert_eq!(cert.breakpoints, vec![0, 1]);
        assert!(extract_dual_walk(&g, &[0, 1], 1, 2).is_err());
        assert!(matches!(extract_dual_walk(&g, &[0, 2], 0, 3), Err(Error::NonEdge(0, 2))));
    }

    #[test]
    fn polygon_walk_between_facets() {
        let g = cycle(10);
        let cert = dual_walk_between(&g, 0, 5).unwrap();
        assert_eq!(cert.path_in_p, vec![0, 1, 2, 3, 4]);
        assert_eq!(cert.walk_in_q, vec![0, 1, 2, 3, 4, 5]);
        assert!(cert.length_bound_holds(2));
    }
}
