use std::io::Write;

use crate::config::ExperimentKind;
use crate::Result;

pub const RECORDS_MAGIC: &str = "# spherepoly-records v1";
pub const SUMMARY_MAGIC: &str = "# spherepoly-summary v1";

/// One trial. Unmeasured quantities are `None` and written as empty cells.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExperimentRecord {
    pub experiment: Option<ExperimentKind>,
    pub n: usize,
    pub m: f64,
    pub trial: usize,
    pub seed: u64,
    /// Realized point count `M`.
    pub count: usize,
    pub epsilon: Option<f64>,
    pub facets: Option<usize>,
    pub max_violation: Option<f64>,
    pub diam_p: Option<usize>,
    pub diam_q: Option<usize>,
    pub shadow_size: Option<usize>,
    pub t_p: Option<f64>,
    pub stitched_len: Option<usize>,
    pub certified_lb: Option<usize>,
    pub exact_distance: Option<usize>,
    pub antipodal_distance: Option<usize>,
    pub occupancy_max: Option<usize>,
    pub occupancy_max_t2: Option<usize>,
    pub max_vertex_norm: Option<f64>,
    pub dense: Option<bool>,
    pub cap_count: Option<usize>,
    pub cap_mean: Option<f64>,
    /// A hard invariant failed on this trial.
    pub violation: bool,
    pub wall_ms: f64,
}

pub const COLUMNS: [&str; 25] = [
    "experiment",
    "n",
    "m",
    "trial",
    "seed",
    "count",
    "epsilon",
    "facets",
    "max_violation",
    "diam_p",
    "diam_q",
    "shadow_size",
    "t_p",
    "stitched_len",
    "certified_lb",
    "exact_distance",
    "antipodal_distance",
    "occupancy_max",
    "occupancy_max_t2",
    "max_vertex_norm",
    "dense",
    "cap_count",
    "cap_mean",
    "violation",
    "wall_ms",
];

pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt<T, F: Fn(&T) -> String>(v: &Option<T>, f: F) -> String {
    v.as_ref().map(f).unwrap_or_default()
}

impl ExperimentRecord {
    pub fn metric(&self, name: &str) -> Option<f64> {
        let u = |v: Option<usize>| v.map(|x| x as f64);
        match name {
            "count" => Some(self.count as f64),
            "epsilon" => self.epsilon,
            "facets" => u(self.facets),
            "max_violation" => self.max_violation,
            "diam_p" => u(self.diam_p),
            "diam_q" => u(self.diam_q),
            "shadow_size" => u(self.shadow_size),
            "t_p" => self.t_p,
            "stitched_len" => u(self.stitched_len),
            "certified_lb" => u(self.certified_lb),
            "exact_distance" => u(self.exact_distance),
            "antipodal_distance" => u(self.antipodal_distance),
            "occupancy_max" => u(self.occupancy_max),
            "occupancy_max_t2" => u(self.occupancy_max_t2),
            "max_vertex_norm" => self.max_vertex_norm,
            "cap_count" => u(self.cap_count),
            _ => None,
        }
    }

    pub fn cells(&self) -> Vec<String> {
        let int = |x: &usize| x.to_string();
        vec![
            self.experiment.map(|k| k.name().to_string()).unwrap_or_default(),
            self.n.to_string(),
            real(self.m),
            self.trial.to_string(),
            self.seed.to_string(),
            self.count.to_string(),
            opt(&self.epsilon, |x| real(*x)),
            opt(&self.facets, int),
            opt(&self.max_violation, |x| real(*x)),
            opt(&self.diam_p, int),
            opt(&self.diam_q, int),
            opt(&self.shadow_size, int),
            opt(&self.t_p, |x| real(*x)),
            opt(&self.stitched_len, int),
            opt(&self.certified_lb, int),
            opt(&self.exact_distance, int),
            opt(&self.antipodal_distance, int),
            opt(&self.occupancy_max, int),
            opt(&self.occupancy_max_t2, int),
            opt(&self.max_vertex_norm, |x| real(*x)),
            opt(&self.dense, |b| (*b as u8).to_string()),
            opt(&self.cap_count, int),
            opt(&self.cap_mean, |x| real(*x)),
            (self.violation as u8).to_string(),
            format!("{:.3}", self.wall_ms),
        ]
    }
}

/// Writes records sorted by `(m, trial)`.
pub fn write_records<W: Write>(records: &[ExperimentRecord], mut w: W) -> Result<()> {
    let mut sorted: Vec<&ExperimentRecord> = records.iter().collect();
    sorted.sort_by(|a, b| a.m.total_cmp(&b.m).then(a.trial.cmp(&b.trial)));
    writeln!(w, "{RECORDS_MAGIC}")?;
    writeln!(w, "{}", COLUMNS.join(","))?;
    for r in sorted {
        writeln!(w, "{}", r.cells().join(","))?;
    }
    Ok(())
}

/// Per-`m` statistics of one metric.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricStat {
    pub metric: String,
    pub m: f64,
    pub samples: usize,
    pub failures: usize,
    pub mean: f64,
    pub std: f64,
    pub median: f64,
}

impl MetricStat {
    pub fn from_values(metric: &str, m: f64, values: &[f64], failures: usize) -> Self {
        let k = values.len();
        let mean = values.iter().sum::<f64>() / k.max(1) as f64;
        let std = if k > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1) as f64).sqrt()
        } else {
            0.0
        };
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let median = match k {
            0 => f64::NAN,
            _ if k % 2 == 1 => sorted[k / 2],
            _ => 0.5 * (sorted[k / 2 - 1] + sorted[k / 2]),
        };
        Self {
            metric: metric.to_string(),
            m,
            samples: k,
            failures,
            mean,
            std,
            median,
        }
    }
}
