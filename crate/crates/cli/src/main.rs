use std::fs::{self, File};
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use spherepoly::sampler::{derive_seed, rng_from_seed};
use spherepoly::shadow::shadow_record;
use spherepoly::{convex_hull, hull_vertex_graph, polar_vertex_graph, sample_poisson_sphere, HullOptions, PlaneSpan};
use spherepoly_cli::{run, CliError, ExperimentConfig, ExperimentKind};

#[derive(Parser)]
#[command(name = "spherepoly", version, about = "Experiments on random spherical polytopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hull invariants (Euler relation, facet adjacency, containment)
    HullValidate(Overrides),
    /// Shadow size in a random plane
    ShadowScaling(Overrides),
    /// diam(P) against diam(Q)
    DiameterRelation(Overrides),
    /// Density, cap occupancy and vertex norms
    Density(Overrides),
    /// Certified lower bound against the exact distance
    LbCertify(Overrides),
    /// Stitched shadow paths against the exact diameter
    Stitch(Overrides),
    /// Cap counts against Poisson tail bounds
    Tails(Overrides),
    /// Run the experiment named in a config file (or by --experiment)
    Run {
        #[arg(long)]
        experiment: Option<ExperimentKind>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Write one instance's cloud, facets, adjacency and shadow
    Export {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 1000.0)]
        m: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

#[derive(Args, Default)]
struct Overrides {
    /// TOML config; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Ambient dimension
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated intensities
    #[arg(long, value_delimiter = ',')]
    m: Option<Vec<f64>>,
    /// Trials per intensity
    #[arg(long)]
    trials: Option<usize>,
    /// Failure probability used to size eps
    #[arg(long)]
    p: Option<f64>,
    /// Master seed
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write a figure for trial 0 of each intensity
    #[arg(long)]
    svg: bool,
    /// Worker threads, 0 for all cores
    #[arg(long)]
    jobs: Option<usize>,
    /// Net radius constant of the lower-bound certificate
    #[arg(long)]
    c6: Option<f64>,
}

impl Overrides {
    fn resolve(self, kind: Option<ExperimentKind>) -> Result<ExperimentConfig, CliError> {
        let mut cfg = match (&self.config, kind) {
            (Some(path), _) => ExperimentConfig::load(path)?,
            (None, Some(k)) => ExperimentConfig::new(k, 3, vec![], 1),
            (None, None) => return Err(CliError::Config("run needs --config or --experiment".into())),
        };
        if let Some(k) = kind {
            cfg.experiment = k;
        }
        if let Some(n) = self.n {
            cfg.n = n;
        }
        if let Some(m) = self.m {
            cfg.m = m;
        }
        if let Some(t) = self.trials {
            cfg.trials = t;
        }
        if let Some(p) = self.p {
            cfg.p = p;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(o) = self.out {
            cfg.out = o;
        }
        if let Some(j) = self.jobs {
            cfg.jobs = j;
        }
        if let Some(c) = self.c6 {
            cfg.constants.c6 = c;
        }
        cfg.svg |= self.svg;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn export(n: usize, m: f64, seed: u64, out: PathBuf) -> Result<(), CliError> {
    fs::create_dir_all(&out)?;
    let cloud = sample_poisson_sphere(n, m, seed)?;
    cloud.write_csv(BufWriter::new(File::create(out.join("cloud.csv"))?))?;
    let hull = convex_hull(&cloud, HullOptions { seed, ..Default::default() })?;
    hull.write_facet_csv(BufWriter::new(File::create(out.join("facets.csv"))?))?;
    hull_vertex_graph(&hull)?.write_adjacency_csv(BufWriter::new(File::create(out.join("adjacency_q.csv"))?))?;
    let g = polar_vertex_graph(&hull)?;
    g.write_adjacency_csv(BufWriter::new(File::create(out.join("adjacency_p.csv"))?))?;
    let plane = PlaneSpan::random(n, &mut rng_from_seed(derive_seed(seed, 1)));
    let sr = shadow_record(&g, &cloud, &plane);
    sr.write_csv(BufWriter::new(File::create(out.join("shadow.csv"))?))?;
    fs::write(out.join("shadow.svg"), sr.to_svg(&g, None))?;
    log::info!("{} points, {} facets, shadow size {} -> {}", cloud.len(), hull.facets.len(), sr.size, out.display());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let (kind, overrides) = match cli.command {
        Command::HullValidate(o) => (Some(ExperimentKind::HullValidate), o),
        Command::ShadowScaling(o) => (Some(ExperimentKind::ShadowScaling), o),
        Command::DiameterRelation(o) => (Some(ExperimentKind::DiameterRelation), o),
        Command::Density(o) => (Some(ExperimentKind::Density), o),
        Command::LbCertify(o) => (Some(ExperimentKind::LbCertify), o),
        Command::Stitch(o) => (Some(ExperimentKind::Stitch), o),
        Command::Tails(o) => (Some(ExperimentKind::Tails), o),
        Command::Run { experiment, overrides } => (experiment, overrides),
        Command::Export { n, m, seed, out } => {
            return match export(n, m, seed, out) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    log::error!("{e}");
                    ExitCode::from(2)
                }
            };
        }
    };
    let outcome = overrides.resolve(kind).and_then(|cfg| run(&cfg));
    match outcome {
        Ok(o) if o.violations() > 0 => {
            log::error!("{} hard invariant violations", o.violations());
            ExitCode::from(1)
        }
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            log::error!("{e}");
            ExitCode::from(2)
        }
    }
}
