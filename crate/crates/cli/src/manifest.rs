//! Experiment manifests: flat `key=value` settings assembled from an optional
//! config file and command-line flags, then resolved into engine settings.
//!
//! Config grammar: one `key=value` per line; blank lines and lines starting
//! with `#` are ignored; surrounding whitespace is trimmed.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use nsga_maximin::{
    Budget, CrowdingPolicy, ProblemSpec64, Removal, RunConfig64, Scheme, VariationConfig,
};

use crate::error::{CliError, CliResult};

/// Keys understood by `run` and `sweep`.
pub const ENGINE_KEYS: &[&str] = &[
    "problem",
    "nvar",
    "nobj",
    "scheme",
    "pop",
    "gens",
    "offspring",
    "evals",
    "seed",
    "removal",
    "crowding",
    "sbx_eta",
    "sbx_prob",
    "mut_eta",
    "mut_prob",
    "snapshot_every",
    "bins",
    "out",
];

/// Extra keys understood by `sweep`.
pub const SWEEP_KEYS: &[&str] = &["runs", "cv_threshold", "extreme_eps"];

const BUDGET_KEYS: [&str; 3] = ["gens", "offspring", "evals"];

pub const DEFAULT_PROBLEM: &str = "dtlz1";
pub const DEFAULT_POP: usize = 10;
pub const DEFAULT_GENERATIONS: u64 = 10_000;
pub const DEFAULT_BINS: usize = 10;
pub const DEFAULT_OUT: &str = "out";

/// Resolved settings, kept sorted so every echo is byte-stable.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Manifest(BTreeMap<String, String>);

impl Manifest {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    pub fn set(&mut self, key: &str, value: impl Display) {
        self.0.insert(key.to_string(), value.to_string());
    }

    pub fn set_opt<V: Display>(&mut self, key: &str, value: Option<V>) {
        if let Some(v) = value {
            self.set(key, v);
        }
    }

    pub fn remove(&mut self, key: &str) -> Option<String> {
        self.0.remove(key)
    }

    pub fn contains(&self, key: &str) -> bool {
        self.0.contains_key(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn parsed<T: FromStr>(&self, key: &str) -> CliResult<Option<T>>
    where
        T::Err: Display,
    {
        self.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| CliError::Usage(format!("invalid value '{v}' for {key}: {e}")))
            })
            .transpose()
    }

    fn parsed_or<T: FromStr>(&self, key: &str, default: T) -> CliResult<T>
    where
        T::Err: Display,
    {
        Ok(self.parsed(key)?.unwrap_or(default))
    }

    /// Parses config-file text; keys outside `allowed` are rejected.
    pub fn parse_config(text: &str, source_name: &str, allowed: &[&str]) -> CliResult<Self> {
        let mut m = Manifest::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::parse(
                    source_name,
                    idx + 1,
                    format!("expected key=value, got '{line}'"),
                ));
            };
            let (key, value) = (key.trim(), value.trim());
            if !allowed.contains(&key) {
                return Err(CliError::parse(
                    source_name,
                    idx + 1,
                    format!("unknown key '{key}'"),
                ));
            }
            if m.contains(key) {
                return Err(CliError::parse(
                    source_name,
                    idx + 1,
                    format!("duplicate key '{key}'"),
                ));
            }
            m.set(key, value);
        }
        Ok(m)
    }

    pub fn load_config(path: &Path, allowed: &[&str]) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse_config(&text, &path.display().to_string(), allowed)
    }

    /// Overlays `flags` on `self`. A budget given by flag replaces any budget
    /// from the file, whichever form it took.
    pub fn overlay(mut self, flags: Manifest) -> Self {
        if BUDGET_KEYS.iter().any(|k| flags.contains(k)) {
            for k in BUDGET_KEYS {
                self.remove(k);
            }
        }
        self.0.extend(flags.0);
        self
    }

    /// `# key=value` lines for embedding in CSV output.
    pub fn comment_lines(&self) -> String {
        self.iter().map(|(k, v)| format!("# {k}={v}\n")).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Object(
            self.iter()
                .map(|(k, v)| (k.to_string(), serde_json::Value::String(v.to_string())))
                .collect(),
        )
    }
}

/// A single run's engine configuration plus its fully resolved manifest.
#[derive(Clone, Debug)]
pub struct RunSettings {
    pub config: RunConfig64,
    pub manifest: Manifest,
    pub bins: usize,
    pub out: PathBuf,
}

fn parse_policy(name: &str) -> CliResult<CrowdingPolicy> {
    match name {
        "range-normalized" => Ok(CrowdingPolicy::RANGE_NORMALIZED),
        "raw-sum" => Ok(CrowdingPolicy::RAW_SUM),
        other => Err(CliError::Usage(format!(
            "unknown crowding policy '{other}' (expected raw-sum or range-normalized)"
        ))),
    }
}

fn policy_name(p: CrowdingPolicy) -> &'static str {
    if p == CrowdingPolicy::RAW_SUM {
        "raw-sum"
    } else {
        "range-normalized"
    }
}

fn budget_of(m: &Manifest) -> CliResult<Budget> {
    let given: Vec<&str> = BUDGET_KEYS
        .iter()
        .copied()
        .filter(|k| m.contains(k))
        .collect();
    if given.len() > 1 {
        return Err(CliError::Usage(format!(
            "give only one of gens, offspring, evals (got {})",
            given.join(", ")
        )));
    }
    Ok(match given.first() {
        Some(&"offspring") => Budget::Offspring(m.parsed("offspring")?.expect("present")),
        Some(&"evals") => Budget::Evaluations(m.parsed("evals")?.expect("present")),
        Some(_) => Budget::Generations(m.parsed("gens")?.expect("present")),
        None => Budget::Generations(DEFAULT_GENERATIONS),
    })
}

fn set_budget(m: &mut Manifest, budget: Budget) {
    match budget {
        Budget::Generations(g) => m.set("gens", g),
        Budget::Offspring(o) => m.set("offspring", o),
        Budget::Evaluations(e) => m.set("evals", e),
    }
}

/// Resolves a manifest into a run configuration, filling defaults and writing
/// every resolved value back so the echo is complete.
pub fn resolve_run(input: &Manifest) -> CliResult<RunSettings> {
    let mut m = input.clone();
    let problem_name = m.get("problem").unwrap_or(DEFAULT_PROBLEM).to_string();
    let problem = ProblemSpec64::from_name(&problem_name, m.parsed("nvar")?, m.parsed("nobj")?)?;
    m.set("problem", problem.name());
    m.set("nvar", problem.n);
    m.set("nobj", problem.m);

    let scheme: Scheme = m.parsed_or("scheme", Scheme::MuPlusMu)?;
    m.set("scheme", scheme);
    let pop: usize = m.parsed_or("pop", DEFAULT_POP)?;
    m.set("pop", pop);
    let budget = budget_of(&m)?;
    set_budget(&mut m, budget);
    let seed: u64 = m.parsed_or("seed", 0)?;
    m.set("seed", seed);
    let removal: Removal = m.parsed_or("removal", Removal::WorstCd)?;
    m.set("removal", removal);
    let crowding = match m.get("crowding") {
        Some(name) => parse_policy(name)?,
        None => CrowdingPolicy::engine_default(),
    };
    m.set("crowding", policy_name(crowding));

    let standard = VariationConfig::<f64>::standard(problem.n)?;
    let variation = VariationConfig::new(
        m.parsed_or("sbx_eta", standard.sbx_eta)?,
        m.parsed_or("sbx_prob", standard.sbx_prob)?,
        m.parsed_or("mut_eta", standard.mut_eta)?,
        m.parsed_or("mut_prob", standard.mut_prob)?,
        problem.bounds.clone(),
    )?;
    m.set("sbx_eta", variation.sbx_eta);
    m.set("sbx_prob", variation.sbx_prob);
    m.set("mut_eta", variation.mut_eta);
    m.set("mut_prob", variation.mut_prob);

    let snapshot_every: Option<u64> = m.parsed("snapshot_every")?;
    let bins: usize = m.parsed_or("bins", DEFAULT_BINS)?;
    if bins == 0 {
        return Err(CliError::Usage("bins must be at least 1".into()));
    }
    m.set("bins", bins);
    let out = PathBuf::from(m.get("out").unwrap_or(DEFAULT_OUT));
    m.set("out", out.display());

    let config = RunConfig64 {
        pop_size: pop,
        budget,
        seed,
        scheme,
        removal,
        crowding,
        variation,
        problem,
        snapshot_every,
    };
    config.validate()?;
    Ok(RunSettings {
        config,
        manifest: m,
        bins,
        out,
    })
}
