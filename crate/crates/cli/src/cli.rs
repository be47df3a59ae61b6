//! Command-line definitions and dispatch.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::{
    cmd_analyze, cmd_maximin, cmd_run, cmd_sweep, AnalyzeSettings, MaximinMethod, SweepSettings,
};
use crate::error::CliResult;
use crate::manifest::{resolve_run, Manifest, ENGINE_KEYS, SWEEP_KEYS};

/// Environment variable naming the default output directory.
pub const OUT_ENV: &str = "NSGA_MAXIMIN_OUT";

#[derive(Parser, Debug)]
#[command(
    name = "nsga-maximin",
    version,
    about = "NSGA-II (mu+mu) and (mu+1) runs, sweeps and maximin crowding analysis"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the engine once and write population.csv and metrics.json.
    Run(EngineArgs),
    /// Run consecutive seeds (optionally both schemes) and aggregate.
    Sweep(SweepArgs),
    /// Optimal minimum crowding distance on a linear front.
    Maximin(MaximinArgs),
    /// Metrics for a population CSV.
    Analyze(AnalyzeArgs),
}

#[derive(Args, Debug, Default)]
pub struct EngineArgs {
    /// Config file of key=value lines; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// linefront, dtlz1 or dtlz2.
    #[arg(long)]
    pub problem: Option<String>,
    #[arg(long)]
    pub nvar: Option<usize>,
    #[arg(long)]
    pub nobj: Option<usize>,
    /// mu1 or mumu (sweep also accepts both).
    #[arg(long)]
    pub scheme: Option<String>,
    #[arg(long)]
    pub pop: Option<usize>,
    /// Generations for mumu, steps for mu1.
    #[arg(long, group = "budget")]
    pub gens: Option<u64>,
    #[arg(long, group = "budget")]
    pub offspring: Option<u64>,
    /// Total evaluations including the initial population.
    #[arg(long, group = "budget")]
    pub evals: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// worst-cd or best-contribution.
    #[arg(long)]
    pub removal: Option<String>,
    /// range-normalized or raw-sum.
    #[arg(long)]
    pub crowding: Option<String>,
    #[arg(long)]
    pub sbx_eta: Option<f64>,
    #[arg(long)]
    pub sbx_prob: Option<f64>,
    #[arg(long)]
    pub mut_eta: Option<f64>,
    #[arg(long)]
    pub mut_prob: Option<f64>,
    #[arg(long)]
    pub snapshot_every: Option<u64>,
    /// Crowding histogram bins.
    #[arg(long)]
    pub bins: Option<usize>,
    /// Output directory [default: $NSGA_MAXIMIN_OUT, else ./out].
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl EngineArgs {
    fn flags(&self) -> Manifest {
        let mut m = Manifest::new();
        m.set_opt("problem", self.problem.as_ref());
        m.set_opt("nvar", self.nvar);
        m.set_opt("nobj", self.nobj);
        m.set_opt("scheme", self.scheme.as_ref());
        m.set_opt("pop", self.pop);
        m.set_opt("gens", self.gens);
        m.set_opt("offspring", self.offspring);
        m.set_opt("evals", self.evals);
        m.set_opt("seed", self.seed);
        m.set_opt("removal", self.removal.as_ref());
        m.set_opt("crowding", self.crowding.as_ref());
        m.set_opt("sbx_eta", self.sbx_eta);
        m.set_opt("sbx_prob", self.sbx_prob);
        m.set_opt("mut_eta", self.mut_eta);
        m.set_opt("mut_prob", self.mut_prob);
        m.set_opt("snapshot_every", self.snapshot_every);
        m.set_opt("bins", self.bins);
        m.set_opt("out", self.out.as_ref().map(|p| p.display()));
        m
    }

    /// File settings overlaid with flags; the output directory falls back
    /// to the environment.
    pub fn manifest(&self, allowed: &[&str], extra: Manifest) -> CliResult<Manifest> {
        let file = match &self.config {
            Some(path) => Manifest::load_config(path, allowed)?,
            None => Manifest::new(),
        };
        let mut flags = self.flags();
        for (k, v) in extra.iter() {
            flags.set(k, v);
        }
        let mut m = file.overlay(flags);
        if !m.contains("out") {
            if let Some(dir) = std::env::var_os(OUT_ENV).filter(|d| !d.is_empty()) {
                m.set("out", PathBuf::from(dir).display());
            }
        }
        Ok(m)
    }
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub engine: EngineArgs,
    /// Number of consecutive seeds starting at --seed [default: 10].
    #[arg(long)]
    pub runs: Option<u64>,
    /// Gap CV at or below which a run counts as uniform [default: 0.25].
    #[arg(long)]
    pub cv_threshold: Option<f64>,
    /// Distance within which a solution sits on an extreme [default: 0.001].
    #[arg(long)]
    pub extreme_eps: Option<f64>,
}

#[derive(Args, Debug)]
pub struct MaximinArgs {
    /// Total number of solutions, extremes included.
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value = "closed", value_parser = ["closed", "bisect", "grid"])]
    pub method: String,
    /// Grid spacing for --method grid.
    #[arg(long, default_value_t = 0.01)]
    pub resolution: f64,
    /// Bisection tolerance for --method bisect.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Population CSV as written by run.
    pub path: PathBuf,
    /// Normalize with this problem instead of the one in the file.
    #[arg(long)]
    pub problem: Option<String>,
    #[arg(long)]
    pub nvar: Option<usize>,
    #[arg(long)]
    pub nobj: Option<usize>,
    #[arg(long)]
    pub bins: Option<usize>,
    /// Also write the report to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Executes a parsed command line, returning what to print on stdout.
pub fn execute(cli: Cli) -> CliResult<String> {
    match cli.command {
        Command::Run(args) => {
            let settings = resolve_run(&args.manifest(ENGINE_KEYS, Manifest::new())?)?;
            let out = cmd_run(&settings)?;
            Ok(format!(
                "{}\n{}\n",
                out.population_path.display(),
                out.metrics_path.display()
            ))
        }
        Command::Sweep(args) => {
            let allowed: Vec<&str> = ENGINE_KEYS.iter().chain(SWEEP_KEYS).copied().collect();
            let mut extra = Manifest::new();
            extra.set_opt("runs", args.runs);
            extra.set_opt("cv_threshold", args.cv_threshold);
            extra.set_opt("extreme_eps", args.extreme_eps);
            let sweep = SweepSettings::resolve(args.engine.manifest(&allowed, extra)?)?;
            let out = cmd_sweep(&sweep)?;
            let mut text = String::new();
            for r in &out.runs {
                let cv = r
                    .metrics
                    .gap_cv
                    .map_or("-".to_string(), |v| format!("{v:.6}"));
                text.push_str(&format!(
                    "{} seed {}: gap_cv {} min_finite_cd {}\n",
                    r.scheme, r.seed, cv, r.metrics.min_finite_cd
                ));
            }
            text.push_str(&format!("{}\n", out.aggregate_path.display()));
            Ok(text)
        }
        Command::Maximin(args) => {
            let method: MaximinMethod = args.method.parse()?;
            cmd_maximin(args.n, method, args.resolution, args.tol)
        }
        Command::Analyze(args) => {
            let mut flags = Manifest::new();
            flags.set_opt("problem", args.problem.as_ref());
            flags.set_opt("nvar", args.nvar);
            flags.set_opt("nobj", args.nobj);
            flags.set_opt("bins", args.bins);
            cmd_analyze(
                &args.path,
                &AnalyzeSettings {
                    flags,
                    out: args.out,
                },
            )
        }
    }
}
