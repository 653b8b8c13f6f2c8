use std::fs::{self, File};
use std::io::{BufWriter, Write};

use rayon::prelude::*;
use spherepoly::sampler::derive_seed;

use crate::config::ExperimentConfig;
use crate::experiments::run_trial;
use crate::fit::{fit_exponent, Aggregate, PowerFit};
use crate::record::{real, write_records, ExperimentRecord, MetricStat, SUMMARY_MAGIC};
use crate::{CliError, Result};

#[derive(Debug, Clone)]
pub struct FitRow {
    pub metric: String,
    pub aggregate: Aggregate,
    pub fit: PowerFit,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub records: Vec<ExperimentRecord>,
    pub stats: Vec<MetricStat>,
    pub fits: Vec<FitRow>,
    /// `(m, trial, error)` for excluded trials.
    pub failures: Vec<(f64, usize, String)>,
    pub svgs: Vec<(String, String)>,
}

impl RunOutcome {
    pub fn violations(&self) -> usize {
        self.records.iter().filter(|r| r.violation).count()
    }

    pub fn fit(&self, metric: &str, aggregate: Aggregate) -> Option<PowerFit> {
        self.fits
            .iter()
            .find(|f| f.metric == metric && f.aggregate == aggregate)
            .map(|f| f.fit)
    }
}

/// Seed of trial `trial` at the `mi`-th intensity.
pub fn trial_seed(master: u64, mi: usize, trial: usize) -> u64 {
    derive_seed(derive_seed(master, mi as u64), trial as u64)
}

/// Runs every `(m, trial)` pair without touching the filesystem.
pub fn execute(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let tasks: Vec<(usize, f64, usize)> = cfg
        .m
        .iter()
        .enumerate()
        .flat_map(|(mi, &m)| (0..cfg.trials).map(move |t| (mi, m, t)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| CliError::Config(e.to_string()))?;
    let results: Vec<_> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(mi, m, t)| {
                let out = run_trial(cfg, m, t, trial_seed(cfg.seed, mi, t), cfg.svg && t == 0);
                (m, t, out)
            })
            .collect()
    });

    let mut records = Vec::new();
    let mut failures = Vec::new();
    let mut svgs = Vec::new();
    for (m, t, out) in results {
        match out {
            Ok(o) => {
                if let Some(s) = o.svg {
                    svgs.push((format!("{}_m{}.svg", cfg.experiment, m), s));
                }
                if o.record.violation {
                    log::error!("{} m={m} trial={t}: hard invariant violated", cfg.experiment);
                }
                records.push(o.record);
            }
            Err(e) => {
                log::warn!("{} m={m} trial={t} excluded: {e}", cfg.experiment);
                failures.push((m, t, e.to_string()));
            }
        }
    }
    records.sort_by(|a, b| a.m.total_cmp(&b.m).then(a.trial.cmp(&b.trial)));

    let mut stats = Vec::new();
    let mut fits = Vec::new();
    for metric in cfg.experiment.metrics() {
        for &m in &cfg.m {
            let values: Vec<f64> = records.iter().filter(|r| r.m == m).filter_map(|r| r.metric(metric)).collect();
            let failed = failures.iter().filter(|f| f.0 == m).count();
            stats.push(MetricStat::from_values(metric, m, &values, failed));
        }
        for aggregate in [Aggregate::Mean, Aggregate::Median] {
            match fit_exponent(&records, metric, aggregate) {
                Ok(fit) => fits.push(FitRow {
                    metric: metric.to_string(),
                    aggregate,
                    fit,
                }),
                Err(e) => log::debug!("no {aggregate:?} fit for {metric}: {e}"),
            }
        }
    }
    Ok(RunOutcome {
        records,
        stats,
        fits,
        failures,
        svgs,
    })
}

pub fn write_summary<W: Write>(outcome: &RunOutcome, mut w: W) -> Result<()> {
    writeln!(w, "{SUMMARY_MAGIC}")?;
    writeln!(w, "kind,metric,m,samples,failures,mean,std,median,aggregate,slope,intercept,r2")?;
    for s in &outcome.stats {
        writeln!(
            w,
            "stat,{},{},{},{},{},{},{},,,,",
            s.metric,
            real(s.m),
            s.samples,
            s.failures,
            real(s.mean),
            real(s.std),
            real(s.median)
        )?;
    }
    for f in &outcome.fits {
        let agg = match f.aggregate {
            Aggregate::Mean => "mean",
            Aggregate::Median => "median",
        };
        writeln!(
            w,
            "fit,{},,,,,,,{agg},{},{},{}",
            f.metric,
            real(f.fit.slope),
            real(f.fit.intercept),
            real(f.fit.r2)
        )?;
    }
    Ok(())
}

/// Writes `records.csv`, `summary.csv` and any figures under `cfg.out`.
pub fn write_outputs(cfg: &ExperimentConfig, outcome: &RunOutcome) -> Result<()> {
    fs::create_dir_all(&cfg.out)?;
    write_records(&outcome.records, BufWriter::new(File::create(cfg.out.join("records.csv"))?))?;
    write_summary(outcome, BufWriter::new(File::create(cfg.out.join("summary.csv"))?))?;
    for (name, svg) in &outcome.svgs {
        fs::write(cfg.out.join(name), svg)?;
    }
    Ok(())
}

pub fn run(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    let outcome = execute(cfg)?;
    write_outputs(cfg, &outcome)?;
    log::info!(
        "{}: {} records, {} excluded, {} violations -> {}",
        cfg.experiment,
        outcome.records.len(),
        outcome.failures.len(),
        outcome.violations(),
        cfg.out.display()
    );
    Ok(outcome)
}
