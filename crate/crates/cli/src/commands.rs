//! The four subcommands. Each takes resolved settings and returns what it
//! wrote or printed, so tests can drive them without a process boundary.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use nsga_maximin::{
    closed_form_value, grid_oracle, maximin_solve, optimal_placement, run, Exact, MaximinResult,
    ProblemSpec64, RunRecord64, Scheme,
};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::error::{CliError, CliResult};
use crate::manifest::{resolve_run, Manifest, RunSettings};
use crate::population::{parse_population, write_population};
use crate::report::{
    normalized_objectives, optimality_verdict, population_metrics, snapshots_json, to_pretty,
    MetricOptions, PopulationMetrics,
};

pub const POPULATION_FILE: &str = "population.csv";
pub const METRICS_FILE: &str = "metrics.json";
pub const AGGREGATE_FILE: &str = "aggregate.json";

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub record: RunRecord64,
    pub metrics: PopulationMetrics,
    pub population_path: PathBuf,
    pub metrics_path: PathBuf,
}

fn metrics_document(
    settings: &RunSettings,
    record: &RunRecord64,
    metrics: &PopulationMetrics,
) -> Value {
    let mut obj = Map::new();
    obj.insert("manifest".into(), settings.manifest.to_json());
    obj.insert("seed".into(), json!(settings.config.seed));
    obj.insert("evaluations".into(), json!(record.evaluations));
    metrics.write_into(&mut obj);
    obj.insert("snapshots".into(), snapshots_json(&record.snapshots));
    Value::Object(obj)
}

/// One engine run; writes the population CSV and metrics JSON under the
/// manifest's output directory.
pub fn cmd_run(settings: &RunSettings) -> CliResult<RunOutput> {
    execute_run(settings, MetricOptions::with_bins(settings.bins))
}

fn execute_run(settings: &RunSettings, opts: MetricOptions) -> CliResult<RunOutput> {
    let record = run(&settings.config)?;
    let metrics = population_metrics(&record.population, Some(&settings.config.problem), opts)?;
    let population_path = settings.out.join(POPULATION_FILE);
    let metrics_path = settings.out.join(METRICS_FILE);
    write_file(
        &population_path,
        &write_population(&settings.manifest, &record.population),
    )?;
    write_file(
        &metrics_path,
        &to_pretty(&metrics_document(settings, &record, &metrics)),
    )?;
    Ok(RunOutput {
        record,
        metrics,
        population_path,
        metrics_path,
    })
}

#[derive(Clone, Debug)]
pub struct SweepSettings {
    /// Engine keys shared by every run; `seed` is the base seed.
    pub base: Manifest,
    pub schemes: Vec<Scheme>,
    pub runs: u64,
    pub cv_threshold: f64,
    pub extreme_eps: f64,
    pub out: PathBuf,
}

impl SweepSettings {
    /// `scheme` may be `both` for a paired sweep. The sweep keys `runs`,
    /// `cv_threshold` and `extreme_eps` are taken out of `base`.
    pub fn resolve(mut base: Manifest) -> CliResult<Self> {
        let schemes = match base.get("scheme") {
            Some("both") => vec![Scheme::MuPlusOne, Scheme::MuPlusMu],
            Some(s) => vec![s.parse::<Scheme>()?],
            None => vec![Scheme::MuPlusMu],
        };
        base.remove("scheme");
        let runs: u64 = base.parsed("runs")?.unwrap_or(10);
        let cv_threshold: f64 = base.parsed("cv_threshold")?.unwrap_or(0.25);
        let extreme_eps: f64 = base
            .parsed("extreme_eps")?
            .unwrap_or(crate::report::DEFAULT_EXTREME_EPS);
        for key in crate::manifest::SWEEP_KEYS {
            base.remove(key);
        }
        if runs == 0 {
            return Err(CliError::Usage("runs must be at least 1".into()));
        }
        if !(cv_threshold >= 0.0 && extreme_eps >= 0.0) {
            return Err(CliError::Usage("thresholds must be non-negative".into()));
        }
        let out = PathBuf::from(
            base.remove("out")
                .unwrap_or_else(|| crate::manifest::DEFAULT_OUT.into()),
        );
        // validate the shared settings once before fanning out
        let mut probe = base.clone();
        probe.set("scheme", schemes[0]);
        resolve_run(&probe)?;
        Ok(Self {
            base,
            schemes,
            runs,
            cv_threshold,
            extreme_eps,
            out,
        })
    }

    fn base_seed(&self) -> CliResult<u64> {
        Ok(self.base.parsed("seed")?.unwrap_or(0))
    }

    pub fn run_settings(&self, scheme: Scheme, seed: u64) -> CliResult<RunSettings> {
        let mut m = self.base.clone();
        m.set("scheme", scheme);
        m.set("seed", seed);
        m.set("out", self.run_dir(scheme, seed).display());
        resolve_run(&m)
    }

    pub fn run_dir(&self, scheme: Scheme, seed: u64) -> PathBuf {
        self.out.join(scheme.name()).join(format!("seed-{seed}"))
    }
}

#[derive(Clone, Debug)]
pub struct SweepRun {
    pub scheme: Scheme,
    pub seed: u64,
    pub metrics: PopulationMetrics,
}

impl SweepRun {
    pub fn uniform(&self, threshold: f64) -> bool {
        self.metrics.gap_cv.is_some_and(|cv| cv <= threshold)
    }

    pub fn duplicated_extremes(&self) -> bool {
        self.metrics
            .dup_at_extremes
            .is_some_and(|(a, b)| a >= 2 && b >= 2)
    }
}

#[derive(Clone, Debug)]
pub struct SweepOutput {
    pub runs: Vec<SweepRun>,
    pub aggregate: Value,
    pub aggregate_path: PathBuf,
}

/// Runs every (scheme, seed) pair, in parallel, then writes the aggregate.
pub fn cmd_sweep(sweep: &SweepSettings) -> CliResult<SweepOutput> {
    let base_seed = sweep.base_seed()?;
    let seeds: Vec<u64> = (0..sweep.runs).map(|i| base_seed.wrapping_add(i)).collect();
    let jobs: Vec<(Scheme, u64)> = sweep
        .schemes
        .iter()
        .flat_map(|&s| seeds.iter().map(move |&seed| (s, seed)))
        .collect();
    let runs = jobs
        .par_iter()
        .map(|&(scheme, seed)| {
            let settings = sweep.run_settings(scheme, seed)?;
            let mut opts = MetricOptions::with_bins(settings.bins);
            opts.extreme_eps = sweep.extreme_eps;
            let out = execute_run(&settings, opts)?;
            Ok(SweepRun {
                scheme,
                seed,
                metrics: out.metrics,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;

    let aggregate = aggregate_document(sweep, &seeds, &runs);
    let aggregate_path = sweep.out.join(AGGREGATE_FILE);
    write_file(&aggregate_path, &to_pretty(&aggregate))?;
    Ok(SweepOutput {
        runs,
        aggregate,
        aggregate_path,
    })
}

fn aggregate_document(sweep: &SweepSettings, seeds: &[u64], runs: &[SweepRun]) -> Value {
    let mut manifest = sweep.base.clone();
    manifest.set(
        "scheme",
        if sweep.schemes.len() == 2 {
            "both"
        } else {
            sweep.schemes[0].name()
        },
    );
    manifest.set("runs", sweep.runs);
    manifest.set("cv_threshold", sweep.cv_threshold);
    manifest.set("extreme_eps", sweep.extreme_eps);
    manifest.set("out", sweep.out.display());

    let per_run: Vec<Value> = runs
        .iter()
        .map(|r| {
            let mut obj = Map::new();
            obj.insert("scheme".into(), json!(r.scheme.name()));
            obj.insert("seed".into(), json!(r.seed));
            obj.insert(
                "dir".into(),
                json!(format!("{}/seed-{}", r.scheme.name(), r.seed)),
            );
            obj.insert("uniform".into(), json!(r.uniform(sweep.cv_threshold)));
            obj.insert("duplicated_extremes".into(), json!(r.duplicated_extremes()));
            r.metrics.write_into(&mut obj);
            obj.remove("cd_histogram");
            Value::Object(obj)
        })
        .collect();

    let mut summary = Map::new();
    for &scheme in &sweep.schemes {
        let mine: Vec<&SweepRun> = runs.iter().filter(|r| r.scheme == scheme).collect();
        let n = mine.len();
        let uniform = mine
            .iter()
            .filter(|r| r.uniform(sweep.cv_threshold))
            .count();
        let dup = mine.iter().filter(|r| r.duplicated_extremes()).count();
        summary.insert(
            scheme.name().into(),
            json!({
                "runs": n,
                "uniform_runs": uniform,
                "uniform_fraction": uniform as f64 / n as f64,
                "duplicated_extreme_runs": dup,
                "duplicated_extreme_fraction": dup as f64 / n as f64,
            }),
        );
    }

    let mut doc = Map::new();
    doc.insert("manifest".into(), manifest.to_json());
    doc.insert("runs".into(), Value::Array(per_run));
    doc.insert("summary".into(), Value::Object(summary));
    if sweep.schemes.len() == 2 {
        let cv = |scheme: Scheme, seed: u64| {
            runs.iter()
                .find(|r| r.scheme == scheme && r.seed == seed)
                .and_then(|r| r.metrics.gap_cv)
        };
        let mut lower = 0;
        let table: Vec<Value> = seeds
            .iter()
            .map(|&seed| {
                let (a, b) = (cv(Scheme::MuPlusOne, seed), cv(Scheme::MuPlusMu, seed));
                let mu1_lower = matches!((a, b), (Some(a), Some(b)) if a < b);
                lower += usize::from(mu1_lower);
                json!({"seed": seed, "mu1_gap_cv": a, "mumu_gap_cv": b, "mu1_lower": mu1_lower})
            })
            .collect();
        doc.insert("paired".into(), Value::Array(table));
        doc.insert("paired_mu1_lower".into(), json!(lower));
    }
    Value::Object(doc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MaximinMethod {
    Closed,
    Bisect,
    Grid,
}

impl std::str::FromStr for MaximinMethod {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "closed" => Ok(Self::Closed),
            "bisect" => Ok(Self::Bisect),
            "grid" => Ok(Self::Grid),
            other => Err(CliError::Usage(format!(
                "unknown method '{other}' (expected closed, bisect or grid)"
            ))),
        }
    }
}

fn join<T: std::fmt::Display>(values: &[T]) -> String {
    values
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// Maximin value, witness interior placement and uniqueness class for `n`
/// solutions, as `key=value` lines.
pub fn cmd_maximin(
    n: usize,
    method: MaximinMethod,
    resolution: f64,
    tol: f64,
) -> CliResult<String> {
    if n < 3 {
        return Err(CliError::Usage(format!("n must be at least 3, got {n}")));
    }
    let mut out = String::new();
    let _ = writeln!(out, "n={n}");
    let result: MaximinResult<f64> = match method {
        MaximinMethod::Closed => {
            let exact = optimal_placement::<Exact>(n)?;
            let _ = writeln!(out, "method=closed");
            let _ = writeln!(out, "value_exact={}", exact.value);
            let _ = writeln!(out, "witness_exact={}", join(exact.witness.interior()));
            optimal_placement::<f64>(n)?
        }
        MaximinMethod::Bisect => {
            let _ = writeln!(out, "method=bisect");
            let _ = writeln!(out, "tolerance={tol:e}");
            maximin_solve::<f64>(n - 2, tol)?
        }
        MaximinMethod::Grid => {
            let _ = writeln!(out, "method=grid");
            let _ = writeln!(out, "resolution={resolution}");
            grid_oracle::<f64>(n - 2, resolution)?
        }
    };
    let _ = writeln!(out, "value={}", result.value);
    let _ = writeln!(out, "closed_form_value={}", closed_form_value::<f64>(n)?);
    let _ = writeln!(out, "witness={}", join(result.witness.interior()));
    let _ = writeln!(out, "uniqueness={}", result.uniqueness);
    Ok(out)
}

#[derive(Clone, Debug, Default)]
pub struct AnalyzeSettings {
    /// Flag overrides for `problem`, `nvar`, `nobj` and `bins`.
    pub flags: Manifest,
    pub out: Option<PathBuf>,
}

/// Metrics for a population dump. The problem used for normalization comes
/// from the dump's manifest unless overridden; without one the objectives are
/// taken as already normalized.
pub fn cmd_analyze(path: &Path, settings: &AnalyzeSettings) -> CliResult<String> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let source = path.display().to_string();
    let parsed = parse_population(&text, &source)?;
    if parsed.individuals.is_empty() {
        return Err(CliError::parse(
            &source,
            text.lines().count().max(1),
            "no population rows",
        ));
    }
    let mut manifest = Manifest::new();
    for key in ["problem", "nvar", "nobj", "bins"] {
        if let Some(v) = settings.flags.get(key).or(parsed.manifest.get(key)) {
            manifest.set(key, v);
        }
    }
    let problem = match manifest.get("problem") {
        Some(name) => {
            let p =
                ProblemSpec64::from_name(name, manifest.parsed("nvar")?, manifest.parsed("nobj")?)?;
            let m = parsed.individuals[0].objectives.dim();
            if p.m != m {
                return Err(CliError::Usage(format!(
                    "problem {} has {} objectives, the dump has {m}",
                    p.name(),
                    p.m
                )));
            }
            Some(p)
        }
        None => None,
    };
    let bins: usize = manifest
        .parsed("bins")?
        .unwrap_or(crate::manifest::DEFAULT_BINS);
    if bins == 0 {
        return Err(CliError::Usage("bins must be at least 1".into()));
    }
    manifest.set("bins", bins);
    manifest.set("input", &source);

    let opts = MetricOptions::with_bins(bins);
    let metrics = population_metrics(&parsed.individuals, problem.as_ref(), opts)?;
    let normalized = normalized_objectives(&parsed.individuals, problem.as_ref())?;
    let n = parsed.individuals.len();

    let mut obj = Map::new();
    obj.insert("manifest".into(), manifest.to_json());
    obj.insert("source_manifest".into(), parsed.manifest.to_json());
    metrics.write_into(&mut obj);
    obj.insert(
        "is_optimal".into(),
        json!(optimality_verdict(&normalized, opts.front_eps, 1e-9)?),
    );
    let closed = (n >= 3 && normalized[0].dim() == 2)
        .then(|| closed_form_value::<f64>(n))
        .transpose()?;
    obj.insert("closed_form_value".into(), json!(closed));
    let doc = to_pretty(&Value::Object(obj));
    if let Some(out) = &settings.out {
        write_file(out, &doc)?;
    }
    Ok(doc)
}
