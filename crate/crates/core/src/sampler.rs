//! Seeded Poisson point processes on `S^{n-1}`.

use std::io::{BufRead, Write};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use statrs::function::gamma::ln_gamma;

use crate::sphere_geom::{SphericalCap, UnitVector};
use crate::{Error, Result};

/// Points closer than this are treated as duplicates and resampled.
pub const DUPLICATE_TOL: f64 = 1e-10;

const CLOUD_MAGIC: &str = "# spherepoly-cloud v1";

/// A realization `A = {a_1, ..., a_M}` of `Pois(S^{n-1}, m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    pub points: Vec<UnitVector>,
    pub intensity: f64,
    pub dim: usize,
    pub seed: u64,
}

impl PointCloud {
    /// Validates unit norms, dimensions and pairwise separation.
    pub fn from_points(dim: usize, points: Vec<UnitVector>, intensity: f64, seed: u64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Domain(format!("dimension {dim} < 2")));
        }
        if points.iter().any(|p| p.dim() != dim) {
            return Err(Error::Domain("point of the wrong dimension".into()));
        }
        if let Some((i, j)) = first_near_duplicate(&points) {
            return Err(Error::Degenerate(format!("points {i} and {j} coincide")));
        }
        Ok(Self {
            points,
            intensity,
            dim,
            seed,
        })
    }

    /// The realized count `M`.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        self.points[i].as_slice()
    }

    /// Applies an orthogonal map to every point.
    pub fn rotated(&self, rot: &DMatrix<f64>) -> Result<Self> {
        let points = self
            .points
            .iter()
            .map(|p| {
                let v = rot * nalgebra::DVector::from_column_slice(p);
                UnitVector::normalize(v.as_slice().to_vec())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            points,
            ..self.clone()
        })
    }

    /// Header line, `n,m,seed,M`, then one row of `n` coordinates per point.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{CLOUD_MAGIC}")?;
        writeln!(w, "n,m,seed,M")?;
        writeln!(w, "{},{:e},{},{}", self.dim, self.intensity, self.seed, self.len())?;
        for p in &self.points {
            let row: Vec<String> = p.iter().map(|x| format!("{x:.16e}")).collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let mut next = |what: &str| -> Result<String> {
            lines
                .next()
                .transpose()?
                .ok_or_else(|| Error::Parse(format!("missing {what}")))
        };
        if next("magic line")?.trim() != CLOUD_MAGIC {
            return Err(Error::Parse("not a spherepoly cloud file".into()));
        }
        next("column header")?;
        let header = next("header")?;
        let fields: Vec<&str> = header.trim().split(',').collect();
        if fields.len() != 4 {
            return Err(Error::Parse(format!("bad header {header:?}")));
        }
        let bad = |s: &str| Error::Parse(format!("bad field {s:?}"));
        let dim: usize = fields[0].parse().map_err(|_| bad(fields[0]))?;
        let intensity: f64 = fields[1].parse().map_err(|_| bad(fields[1]))?;
        let seed: u64 = fields[2].parse().map_err(|_| bad(fields[2]))?;
        let count: usize = fields[3].parse().map_err(|_| bad(fields[3]))?;
        let mut points = Vec::with_capacity(count);
        for _ in 0..count {
            let line = next("point row")?;
            let coords = line
                .trim()
                .split(',')
                .map(|s| s.parse::<f64>().map_err(|_| bad(s)))
                .collect::<Result<Vec<_>>>()?;
            if coords.len() != dim {
                return Err(Error::Parse(format!("row has {} coordinates", coords.len())));
            }
            points.push(UnitVector::new(coords)?);
        }
        Self::from_points(dim, points, intensity, seed)
    }
}

/// SplitMix64 stream splitting: independent child seeds for `(master, stream)`.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    let mut z = master ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point on `S^{n-1}` from a normalized Gaussian vector.
pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> UnitVector {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        if let Ok(u) = UnitVector::normalize(v) {
            if u.iter().all(|x| x.is_finite()) {
                return u;
            }
        }
    }
}

/// Draws `M ~ Poisson(m)` and `M` independent uniform points.
pub fn sample_poisson_sphere(n: usize, m: f64, seed: u64) -> Result<PointCloud> {
    if n < 2 || !(m > 0.0) || !m.is_finite() {
        return Err(Error::Domain(format!("need n >= 2 and finite m > 0; got n={n}, m={m}")));
    }
    let mut rng = rng_from_seed(seed);
    let count = Poisson::new(m)
        .map_err(|e| Error::Domain(e.to_string()))?
        .sample(&mut rng) as usize;
    let points = sample_points(n, count, &mut rng);
    Ok(PointCloud {
        points,
        intensity: m,
        dim: n,
        seed,
    })
}

/// Exactly `count` uniform points; for debugging only, the model draws the count.
pub fn sample_fixed_count(n: usize, count: usize, seed: u64) -> Result<PointCloud> {
    if n < 2 {
        return Err(Error::Domain(format!("dimension {n} < 2")));
    }
    let mut rng = rng_from_seed(seed);
    let points = sample_points(n, count, &mut rng);
    Ok(PointCloud {
        points,
        intensity: count as f64,
        dim: n,
        seed,
    })
}

fn sample_points<R: Rng + ?Sized>(n: usize, count: usize, rng: &mut R) -> Vec<UnitVector> {
    let mut points: Vec<UnitVector> = (0..count).map(|_| random_unit_vector(n, rng)).collect();
    while let Some((_, j)) = first_near_duplicate(&points) {
        points[j] = random_unit_vector(n, rng);
    }
    points
}

/// First pair `(i, j)`, `i < j`, closer than [`DUPLICATE_TOL`], found by a sweep
/// along the first coordinate.
fn first_near_duplicate(points: &[UnitVector]) -> Option<(usize, usize)> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a][0].total_cmp(&points[b][0]).then(a.cmp(&b)));
    for (k, &i) in order.iter().enumerate() {
        for &j in &order[k + 1..] {
            if points[j][0] - points[i][0] > DUPLICATE_TOL {
                break;
            }
            if points[i].chord(&points[j]) < DUPLICATE_TOL {
                return Some((i.min(j), i.max(j)));
            }
        }
    }
    None
}

/// `|A ∩ C_i|` for pairwise disjoint caps.
///
/// Disjointness is checked conservatively: centers must be farther apart than
/// the sum of the radii.
pub fn count_in_disjoint_caps(cloud: &PointCloud, caps: &[SphericalCap]) -> Result<Vec<usize>> {
    for i in 0..caps.len() {
        for j in 0..i {
            if caps[i].center.chord(&caps[j].center) <= caps[i].radius + caps[j].radius {
                return Err(Error::Overlap(j, i));
            }
        }
    }
    Ok(caps
        .iter()
        .map(|c| cloud.points.iter().filter(|a| c.contains(a)).count())
        .collect())
}

fn poisson_ln_pmf(lambda: f64, k: u64) -> f64 {
    if lambda == 0.0 {
        return if k == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    k as f64 * lambda.ln() - lambda - ln_gamma(k as f64 + 1.0)
}

/// `P[X >= lambda + x]` for `X ~ Pois(lambda)`, summed term by term.
pub fn poisson_tail_exact(lambda: f64, x: f64) -> Result<f64> {
    poisson_upper_tail(lambda, x)
}

pub fn poisson_upper_tail(lambda: f64, x: f64) -> Result<f64> {
    check_tail_args(lambda, x)?;
    let start = (lambda + x).ceil() as u64;
    let mut sum = 0.0;
    let mut k = start;
    loop {
        let term = poisson_ln_pmf(lambda, k).exp();
        sum += term;
        // terms are decreasing once k > lambda
        if (k as f64) > lambda && term <= 1e-17 * sum {
            break;
        }
        if term == 0.0 && (k as f64) > lambda {
            break;
        }
        k += 1;
    }
    Ok(sum.min(1.0))
}

/// `P[X <= lambda - x]`.
pub fn poisson_lower_tail(lambda: f64, x: f64) -> Result<f64> {
    check_tail_args(lambda, x)?;
    let end = lambda - x;
    if end < 0.0 {
        return Ok(0.0);
    }
    let end = end.floor() as u64;
    // sum from the largest term down so small terms are added last
    let mut sum = 0.0;
    for k in (0..=end).rev() {
        let term = poisson_ln_pmf(lambda, k).exp();
        sum += term;
        if term <= 1e-17 * sum {
            break;
        }
    }
    Ok(sum.min(1.0))
}

fn check_tail_args(lambda: f64, x: f64) -> Result<()> {
    if !(lambda >= 0.0 && x >= 0.0) || !lambda.is_finite() || !x.is_finite() {
        return Err(Error::Domain(format!("need lambda, x >= 0; got {lambda}, {x}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn tiny_intensity_gives_empty_cloud() {
        let c = sample_poisson_sphere(3, 1e-9, 1).unwrap();
        assert!(c.is_empty());
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample_poisson_sphere(4, 300.0, 99).unwrap();
        let b = sample_poisson_sphere(4, 300.0, 99).unwrap();
        assert_eq!(a, b);
        let c = sample_poisson_sphere(4, 300.0, 100).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn derived_seeds_differ() {
        let s: std::collections::HashSet<u64> = (0..1000).map(|i| derive_seed(7, i)).collect();
        assert_eq!(s.len(), 1000);
        assert_ne!(derive_seed(1, 0), derive_seed(2, 0));
    }

    #[test]
    fn tail_two_term_closed_form() {
        let exact = poisson_tail_exact(1.0, 1.0).unwrap();
        assert_relative_eq!(exact, 1.0 - 2.0 / std::f64::consts::E, max_relative = 1e-13);
        assert!(poisson_tail_exact(5.0, 0.0).unwrap() <= 1.0);
        assert_relative_eq!(poisson_lower_tail(3.0, 1.0).unwrap(), (-3.0f64).exp() * 8.5, max_relative = 1e-13);
        assert_eq!(poisson_lower_tail(3.0, 3.5).unwrap(), 0.0);
    }

    #[test]
    fn tails_sum_to_one() {
        for lambda in [0.5f64, 7.5, 120.5] {
            // P[X >= k] + P[X <= k - 1] = 1 with k = ceil(lambda)
            let k = lambda.ceil();
            let up = poisson_upper_tail(lambda, k - lambda).unwrap();
            let lo = poisson_lower_tail(lambda, lambda - (k - 1.0)).unwrap();
            assert_relative_eq!(up + lo, 1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn disjoint_caps() {
        let cloud = sample_fixed_count(3, 50, 3).unwrap();
        let e = UnitVector::axis(3, 0);
        let whole = SphericalCap::new(e.clone(), 2.0).unwrap();
        assert_eq!(count_in_disjoint_caps(&cloud, &[whole]).unwrap(), vec![50]);
        let a = SphericalCap::new(e.clone(), 1.0).unwrap();
        let b = SphericalCap::new(UnitVector::axis(3, 1), 1.0).unwrap();
        assert!(matches!(count_in_disjoint_caps(&cloud, &[a, b]), Err(Error::Overlap(0, 1))));
        let empty = SphericalCap::new(e, 0.0).unwrap();
        assert_eq!(count_in_disjoint_caps(&cloud, &[empty]).unwrap(), vec![0]);
    }

    #[test]
    fn csv_round_trip() {
        let cloud = sample_poisson_sphere(3, 40.0, 5).unwrap();
        let mut buf = Vec::new();
        cloud.write_csv(&mut buf).unwrap();
        let back = PointCloud::read_csv(&buf[..]).unwrap();
        assert_eq!(back, cloud);
    }

    #[test]
    fn duplicates_rejected() {
        let p = UnitVector::axis(3, 2);
        assert!(PointCloud::from_points(3, vec![p.clone(), p], 2.0, 0).is_err());
    }
}
