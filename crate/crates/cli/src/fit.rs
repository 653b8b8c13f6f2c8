use crate::record::ExperimentRecord;
use crate::{CliError, Result};

/// `log y = intercept + slope log m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Which per-`m` aggregate is fitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Aggregate {
    Mean,
    Median,
}

/// Ordinary least squares of `ln y` on `ln x`.
pub fn fit_log_log(points: &[(f64, f64)]) -> Result<PowerFit> {
    let mut xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    if xs.len() < 3 {
        return Err(CliError::InsufficientData(xs.len()));
    }
    if points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(CliError::Config("log-log fit needs positive values".into()));
    }
    let k = points.len() as f64;
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ly.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(PowerFit { slope, intercept, r2 })
}

/// Fits `metric` against `m` using the per-`m` mean or median over `records`.
pub fn fit_exponent(records: &[ExperimentRecord], metric: &str, agg: Aggregate) -> Result<PowerFit> {
    let mut ms: Vec<f64> = records.iter().map(|r| r.m).collect();
    ms.sort_by(f64::total_cmp);
    ms.dedup();
    let mut points = Vec::new();
    for m in ms {
        let mut v: Vec<f64> = records.iter().filter(|r| r.m == m).filter_map(|r| r.metric(metric)).collect();
        if v.is_empty() {
            continue;
        }
        let y = match agg {
            Aggregate::Mean => v.iter().sum::<f64>() / v.len() as f64,
            Aggregate::Median => {
                v.sort_by(f64::total_cmp);
                let h = v.len() / 2;
                if v.len() % 2 == 1 {
                    v[h]
                } else {
                    0.5 * (v[h - 1] + v[h])
                }
            }
        };
        points.push((m, y));
    }
    fit_log_log(&points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn recovers_any_power_law(slope in -2.0f64..2.0, c in 0.01f64..100.0, m0 in 10.0f64..1e4, k in 3usize..8) {
            let pts: Vec<(f64, f64)> = (0..k).map(|i| {
                let m = m0 * 2f64.powi(i as i32);
                (m, c * m.powf(slope))
            }).collect();
            let f = fit_log_log(&pts).unwrap();
            prop_assert!((f.slope - slope).abs() < 1e-9);
            prop_assert!((f.intercept - c.ln()).abs() < 1e-6);
        }

        #[test]
        fn r2_lies_in_unit_interval(ys in proptest::collection::vec(0.1f64..10.0, 3..12)) {
            let pts: Vec<(f64, f64)> = ys.iter().enumerate().map(|(i, &y)| ((i + 1) as f64, y)).collect();
            let f = fit_log_log(&pts).unwrap();
            prop_assert!((0.0..=1.0 + 1e-12).contains(&f.r2));
        }
    }

    #[test]
    fn exact_power_law() {
        let pts: Vec<(f64, f64)> = [100.0, 400.0, 1600.0, 6400.0].iter().map(|&m: &f64| (m, 7.0 * m.sqrt())).collect();
        let f = fit_log_log(&pts).unwrap();
        assert!((f.slope - 0.5).abs() < 1e-12);
        assert!((f.intercept - 7f64.ln()).abs() < 1e-12);
        assert!((f.r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_has_zero_slope() {
        let f = fit_log_log(&[(1.0, 3.0), (2.0, 3.0), (5.0, 3.0)]).unwrap();
        assert_eq!(f.slope, 0.0);
    }

    #[test]
    fn needs_three_distinct_m() {
        assert!(matches!(
            fit_log_log(&[(1.0, 1.0), (1.0, 2.0), (2.0, 3.0)]),
            Err(CliError::InsufficientData(2))
        ));
    }

    #[test]
    fn median_aggregate() {
        let rec = |m: f64, v: usize| ExperimentRecord { m, certified_lb: Some(v), ..Default::default() };
        let records: Vec<ExperimentRecord> = [(100.0, 1), (100.0, 1), (100.0, 50), (400.0, 2), (400.0, 2), (1600.0, 4)]
            .iter()
            .map(|&(m, v)| rec(m, v))
            .collect();
        let f = fit_exponent(&records, "certified_lb", Aggregate::Median).unwrap();
        assert!((f.slope - 0.5).abs() < 1e-12);
    }
}
