//! Hashed uniform grid over `R^n` for fixed-radius neighbour queries.

use std::collections::HashMap;

/// Points bucketed into axis-aligned cells of side `cell`.
///
/// Queries visit every cell within `ceil(r / cell)` steps along each axis, so
/// the index is only efficient for radii comparable to the cell size.
#[derive(Debug, Clone)]
pub struct PointIndex {
    dim: usize,
    cell: f64,
    coords: Vec<f64>,
    buckets: HashMap<Vec<i64>, Vec<u32>>,
}

impl PointIndex {
    pub fn new(dim: usize, cell: f64) -> Self {
        assert!(cell > 0.0, "cell size must be positive");
        Self {
            dim,
            cell,
            coords: Vec::new(),
            buckets: HashMap::new(),
        }
    }

    pub fn from_points<'a, I>(dim: usize, cell: f64, points: I) -> Self
    where
        I: IntoIterator<Item = &'a [f64]>,
    {
        let mut index = Self::new(dim, cell);
        for p in points {
            index.insert(p);
        }
        index
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    fn cell_of(&self, p: &[f64]) -> Vec<i64> {
        p.iter().map(|x| (x / self.cell).floor() as i64).collect()
    }

    /// Inserts a point and returns its index.
    pub fn insert(&mut self, p: &[f64]) -> usize {
        debug_assert_eq!(p.len(), self.dim);
        let id = self.len();
        self.coords.extend_from_slice(p);
        let key = self.cell_of(p);
        self.buckets.entry(key).or_default().push(id as u32);
        id
    }

    /// Calls `visit(index, squared_distance)` for every point within `r` of `q`.
    /// Returning `false` from `visit` stops the scan early.
    pub fn for_each_within<F>(&self, q: &[f64], r: f64, mut visit: F)
    where
        F: FnMut(usize, f64) -> bool,
    {
        if self.is_empty() || r < 0.0 {
            return;
        }
        let r2 = r * r;
        let reach = (r / self.cell).ceil() as i64;
        let base = self.cell_of(q);
        let mut offset = vec![-reach; self.dim];
        let mut cell = vec![0i64; self.dim];
        loop {
            for k in 0..self.dim {
                cell[k] = base[k] + offset[k];
            }
            if let Some(ids) = self.buckets.get(cell.as_slice()) {
                for &id in ids {
                    let p = self.point(id as usize);
                    let d2: f64 = p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum();
                    if d2 <= r2 && !visit(id as usize, d2) {
                        return;
                    }
                }
            }
            // odometer increment over the neighbourhood
            let mut k = 0;
            loop {
                if k == self.dim {
                    return;
                }
                offset[k] += 1;
                if offset[k] <= reach {
                    break;
                }
                offset[k] = -reach;
                k += 1;
            }
        }
    }

    pub fn any_within(&self, q: &[f64], r: f64) -> bool {
        let mut found = false;
        self.for_each_within(q, r, |_, _| {
            found = true;
            false
        });
        found
    }

    pub fn count_within(&self, q: &[f64], r: f64) -> usize {
        let mut count = 0;
        self.for_each_within(q, r, |_, _| {
            count += 1;
            true
        });
        count
    }

    /// Nearest point within `r`, smallest index on ties.
    pub fn nearest_within(&self, q: &[f64], r: f64) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        self.for_each_within(q, r, |id, d2| {
            match best {
                Some((bi, bd)) if bd < d2 || (bd == d2 && bi < id) => {}
                _ => best = Some((id, d2)),
            }
            true
        });
        best.map(|(i, d2)| (i, d2.sqrt()))
    }
}
