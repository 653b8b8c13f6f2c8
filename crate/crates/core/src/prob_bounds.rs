//! Closed-form probabilistic bounds, evaluated literally.
//!
//! Constants hidden in `O(.)` terms are explicit arguments; nothing here
//! claims that the default value 1 is the true constant.

use crate::sphere_geom::solve_epsilon;
use crate::{Error, Result};

/// Inputs and evaluated constants of the shadow-size concentration bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailParams {
    pub m: f64,
    pub n: usize,
    pub p: f64,
    pub epsilon: f64,
    pub u: f64,
    pub t_p: f64,
    /// Size of the partition into independent classes.
    pub q: f64,
    /// Number of summands.
    pub k: f64,
    /// Range bound of each summand.
    pub m_bound: f64,
    pub sigma2: f64,
}

/// Hidden constants, all defaulting to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundConstants {
    pub c1: f64,
    pub c2: f64,
    pub c_u: f64,
}

impl Default for BoundConstants {
    fn default() -> Self {
        Self {
            c1: 1.0,
            c2: 1.0,
            c_u: 1.0,
        }
    }
}

/// `2 exp(-8 t^2 / (25 q (k sigma^2 + M t / 3)))` for sums of `[0, M]`-valued
/// variables split into `q` independent classes.
pub fn bernstein_bound(k: f64, q: f64, m_bound: f64, sigma2: f64, t: f64) -> Result<f64> {
    if [k, q, m_bound, sigma2].iter().any(|x| !(*x >= 0.0)) || !(t > 0.0) {
        return Err(Error::Domain("arguments must be nonnegative and t > 0".into()));
    }
    let denom = 25.0 * q * (k * sigma2 + m_bound * t / 3.0);
    if denom == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * (-8.0 * t * t / denom).exp())
}

/// `mu (M - mu)`, the largest variance of a `[0, M]`-valued variable with mean `mu`.
pub fn bhatia_davis(mu: f64, m_bound: f64) -> Result<f64> {
    if !(0.0 <= mu && mu <= m_bound) {
        return Err(Error::Domain(format!("need 0 <= mu <= M; got mu={mu}, M={m_bound}")));
    }
    Ok(mu * (m_bound - mu))
}

/// `exp(-x^2 / (2 (lambda + x)))`, bounding both Poisson tails at distance `x`.
pub fn poisson_tail_bound(lambda: f64, x: f64) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    (-x * x / (2.0 * (lambda + x))).exp()
}

/// `(eps(m, n, p), 45 ln(1/p) t^{n-1})`: the density radius and the count a
/// `t eps` cap stays below with probability `1 - p`.
pub fn density_thresholds(m: f64, n: usize, p: f64, t: f64) -> Result<(f64, f64)> {
    if !(t >= 1.0) {
        return Err(Error::Domain(format!("need t >= 1; got {t}")));
    }
    let d = solve_epsilon(m, n, p)?;
    Ok((d.epsilon, 45.0 * (1.0 / p).ln() * t.powi(n as i32 - 1)))
}

/// Occupancy cap of the locality event: `45 e 2^n ln(1/p)`.
pub fn locality_occupancy_threshold(n: usize, p: f64) -> f64 {
    45.0 * std::f64::consts::E * 2f64.powi(n as i32) * (1.0 / p).ln()
}

/// Length bound of a monotone local path: `45 e n 4^n ln(1/p)`.
pub fn local_path_bound(n: usize, p: f64) -> f64 {
    45.0 * std::f64::consts::E * n as f64 * 4f64.powi(n as i32) * (1.0 / p).ln()
}

/// `U = c_U n 2^{n^2} ln(1/p)^n`.
pub fn u_eval(n: usize, p: f64, c_u: f64) -> f64 {
    let l = (1.0 / p).ln();
    c_u * n as f64 * 2f64.powi((n * n) as i32) * l.powi(n as i32)
}

/// `max(sqrt(c1 U n^2 m^{1/(n-1)} ln(1/p)), c2 U ln(1/p))`.
pub fn t_p_eval(m: f64, n: usize, p: f64, u: f64, c1: f64, c2: f64) -> f64 {
    let l = (1.0 / p).ln();
    let a = (c1 * u * (n * n) as f64 * m.powf(1.0 / (n as f64 - 1.0)) * l).sqrt();
    a.max(c2 * u * l)
}

/// The admissible window `exp(-m / (18 sqrt(n) (76 sqrt 2)^{n-1})) < p < m^{-2n}`.
pub fn p_window(m: f64, n: usize) -> (f64, f64) {
    let lo = (-m / (18.0 * (n as f64).sqrt() * (76.0 * 2f64.sqrt()).powi(n as i32 - 1))).exp();
    (lo, m.powf(-2.0 * n as f64))
}

impl TailParams {
    /// Evaluates `eps`, `U` and `t_p`; the Bernstein fields start at zero.
    pub fn new(m: f64, n: usize, p: f64, consts: BoundConstants) -> Result<Self> {
        let epsilon = solve_epsilon(m, n, p)?.epsilon;
        let u = u_eval(n, p, consts.c_u);
        Ok(Self {
            m,
            n,
            p,
            epsilon,
            u,
            t_p: t_p_eval(m, n, p, u, consts.c1, consts.c2),
            q: 0.0,
            k: 0.0,
            m_bound: 0.0,
            sigma2: 0.0,
        })
    }

    /// Whether `p` lies inside the admissible window for `m` and `n`.
    pub fn in_window(&self) -> bool {
        let (lo, hi) = p_window(self.m, self.n);
        lo < self.p && self.p < hi
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn bernstein_arithmetic() {
        let b = bernstein_bound(1.0, 1.0, 1.0, 0.0, 3.0).unwrap();
        assert_relative_eq!(b, 2.0 * (-72.0f64 / 25.0).exp(), max_relative = 1e-15);
        assert!(bernstein_bound(1.0, -1.0, 1.0, 0.0, 3.0).is_err());
        assert!(bernstein_bound(1.0, 1.0, 1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn bernstein_decreases_in_t() {
        let mut prev = f64::INFINITY;
        for i in 1..200 {
            let b = bernstein_bound(100.0, 2.0, 1.0, 0.25, i as f64).unwrap();
            assert!(b < prev);
            prev = b;
        }
        assert!(prev < 1e-10);
    }

    #[test]
    fn bhatia_davis_values() {
        assert_eq!(bhatia_davis(0.0, 5.0).unwrap(), 0.0);
        assert_eq!(bhatia_davis(2.5, 5.0).unwrap(), 6.25);
        assert!(bhatia_davis(6.0, 5.0).is_err());
    }

    #[test]
    fn poisson_bound_values() {
        assert_eq!(poisson_tail_bound(3.0, 0.0), 1.0);
        assert_relative_eq!(poisson_tail_bound(1.0, 1.0), (-0.25f64).exp());
    }

    #[test]
    fn thresholds_and_t_p() {
        let (eps, thr) = density_thresholds(1e4, 3, 1e-3, 1.0).unwrap();
        assert_relative_eq!(thr, 45.0 * 1000f64.ln(), max_relative = 1e-15);
        assert_relative_eq!(eps, 2.0 * (3.0 * std::f64::consts::E * 1000f64.ln() / 1e4).sqrt(), max_relative = 1e-12);
        assert_eq!(t_p_eval(1e6, 3, 1e-6, 0.0, 1.0, 1.0), 0.0);
        let u = u_eval(3, 1e-6, 1.0);
        assert!(t_p_eval(1e3, 3, 1e-6, u, 1.0, 1.0) <= t_p_eval(1e6, 3, 1e-6, u, 1.0, 1.0));
    }

    #[test]
    fn p_window_is_empty_at_desk_scale() {
        let t = TailParams::new(4000.0, 3, 1e-3, BoundConstants::default()).unwrap();
        assert!(!t.in_window());
        let (lo, hi) = p_window(4000.0, 3);
        assert!(lo >= hi);
    }
}
