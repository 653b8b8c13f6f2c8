use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    HullValidate,
    ShadowScaling,
    DiameterRelation,
    Density,
    LbCertify,
    Stitch,
    Tails,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 7] = [
        Self::HullValidate,
        Self::ShadowScaling,
        Self::DiameterRelation,
        Self::Density,
        Self::LbCertify,
        Self::Stitch,
        Self::Tails,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::HullValidate => "hull-validate",
            Self::ShadowScaling => "shadow-scaling",
            Self::DiameterRelation => "diameter-relation",
            Self::Density => "density",
            Self::LbCertify => "lb-certify",
            Self::Stitch => "stitch",
            Self::Tails => "tails",
        }
    }

    /// Metrics summarized and fitted against `m`.
    pub fn metrics(self) -> &'static [&'static str] {
        match self {
            Self::HullValidate => &["facets", "max_violation"],
            Self::ShadowScaling => &["shadow_size"],
            Self::DiameterRelation => &["diam_p", "diam_q"],
            Self::Density => &["occupancy_max", "occupancy_max_t2", "max_vertex_norm"],
            Self::LbCertify => &["certified_lb", "exact_distance", "antipodal_distance"],
            Self::Stitch => &["stitched_len", "diam_p"],
            Self::Tails => &["cap_count"],
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| CliError::Config(format!("unknown experiment '{s}'")))
    }
}

/// Hidden constants and numerical knobs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Constants {
    pub c1: f64,
    pub c2: f64,
    pub c_u: f64,
    /// Net scale for lower-bound certificates: `eps = c6 m^{-1/(n-1)}`.
    pub c6: f64,
    pub tolerance: f64,
    /// Objectives sampled per instance by the stitch experiment.
    pub objectives: usize,
    /// Chordal cap radius used by the tails experiment.
    pub cap_radius: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Self {
            c1: 1.0,
            c2: 1.0,
            c_u: 1.0,
            c6: 6.0,
            tolerance: spherepoly::GEOM_TOL,
            objectives: 50,
            cap_radius: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default = "default_n")]
    pub n: usize,
    pub m: Vec<f64>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_p")]
    pub p: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub constants: Constants,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    #[serde(default)]
    pub svg: bool,
    /// Worker threads; 0 uses every core.
    #[serde(default)]
    pub jobs: usize,
}

fn default_n() -> usize {
    3
}
fn default_trials() -> usize {
    1
}
fn default_p() -> f64 {
    1e-3
}
fn default_out() -> PathBuf {
    PathBuf::from("out")
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind, n: usize, m: Vec<f64>, trials: usize) -> Self {
        Self {
            experiment,
            n,
            m,
            trials,
            p: default_p(),
            seed: 0,
            constants: Constants::default(),
            out: default_out(),
            svg: false,
            jobs: 0,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.m.is_empty() {
            return Err(CliError::Config("m-list is empty".into()));
        }
        if self.m.windows(2).any(|w| !(w[0] < w[1])) || self.m.iter().any(|&m| !(m > 0.0)) {
            return Err(CliError::Config("m-list must be positive and strictly ascending".into()));
        }
        if self.trials == 0 {
            return Err(CliError::Config("trials must be >= 1".into()));
        }
        if self.n < 2 {
            return Err(CliError::Config("n must be >= 2".into()));
        }
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(CliError::Config("p must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_minimal_file() {
        let cfg = ExperimentConfig::from_toml("experiment = \"stitch\"\nm = [100.0, 200.0]\n").unwrap();
        assert_eq!(cfg.experiment, ExperimentKind::Stitch);
        assert_eq!(cfg.n, 3);
        assert_eq!(cfg.constants, Constants::default());
        cfg.validate().unwrap();
    }

    #[test]
    fn rejects_bad_lists() {
        let mut cfg = ExperimentConfig::new(ExperimentKind::Tails, 3, vec![200.0, 100.0], 1);
        assert!(cfg.validate().is_err());
        cfg.m.clear();
        assert!(cfg.validate().is_err());
        assert!(ExperimentConfig::from_toml("experiment = \"nope\"\nm = [1.0]").is_err());
        assert!(ExperimentConfig::from_toml("experiment = \"tails\"\nm = [1.0]\nbogus = 1").is_err());
    }

    #[test]
    fn toml_round_trip() {
        let mut cfg = ExperimentConfig::new(ExperimentKind::LbCertify, 3, vec![500.0, 1000.0], 4);
        cfg.constants.c6 = 4.5;
        assert_eq!(ExperimentConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
    }

    #[test]
    fn kind_names_parse() {
        for k in ExperimentKind::ALL {
            assert_eq!(k.name().parse::<ExperimentKind>().unwrap(), k);
        }
    }
}
