//! NSGA-II generation updates: the generational (mu+mu) scheme and the
//! steady-state (mu+1) scheme.

use std::fmt;
use std::str::FromStr;

use crate::crowding::{
    argmin_lowest_index, best_contribution_removal, distances_unchecked, min_finite_of,
    CrowdingPolicy,
};
use crate::error::{Error, Result};
use crate::metrics::{gap_statistics, project_to_line, DEFAULT_DEDUP_EPS, DEFAULT_FRONT_EPS};
use crate::pareto::{dominates_slices, sort_unchecked, FrontPartition, Individual};
use crate::problems::ProblemSpec;
use crate::rng::RandomStream;
use crate::scalar::{CrowdingDistance, Real};
use crate::variation::{binary_tournament, polynomial_mutation, sbx_crossover, VariationConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// mu offspring per generation, one truncation of the 2mu pool.
    MuPlusMu,
    /// One offspring per step, one removal from the mu+1 pool.
    MuPlusOne,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::MuPlusMu => "mumu",
            Scheme::MuPlusOne => "mu1",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mumu" | "mu-plus-mu" => Ok(Scheme::MuPlusMu),
            "mu1" | "mu-plus-one" => Ok(Scheme::MuPlusOne),
            other => Err(Error::Config(format!("unknown scheme '{other}'"))),
        }
    }
}

/// Which member of the critical front a single-removal update drops.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Removal {
    /// Smallest crowding distance, computed once.
    #[default]
    WorstCd,
    /// The member whose removal maximizes the remaining minimum crowding
    /// distance.
    BestContribution,
}

impl Removal {
    pub fn name(self) -> &'static str {
        match self {
            Removal::WorstCd => "worst-cd",
            Removal::BestContribution => "best-contribution",
        }
    }
}

impl fmt::Display for Removal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Removal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "worst-cd" => Ok(Removal::WorstCd),
            "best-contribution" => Ok(Removal::BestContribution),
            other => Err(Error::Config(format!("unknown removal policy '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Budget {
    /// Generations of mu offspring for (mu+mu); single steps for (mu+1).
    Generations(u64),
    /// Offspring evaluations, rounded down to whole generations for (mu+mu).
    Offspring(u64),
    /// Total evaluations including the initial population.
    Evaluations(u64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig<R> {
    pub pop_size: usize,
    pub budget: Budget,
    pub seed: u64,
    pub scheme: Scheme,
    pub removal: Removal,
    pub crowding: CrowdingPolicy,
    pub variation: VariationConfig<R>,
    pub problem: ProblemSpec<R>,
    /// Record metrics whenever the evaluation count crosses a multiple of
    /// this; the final state is always recorded.
    pub snapshot_every: Option<u64>,
}

impl<R: Real> RunConfig<R> {
    /// Standard variation settings for the problem, worst-cd removal and the
    /// engine crowding policy.
    pub fn new(
        problem: ProblemSpec<R>,
        scheme: Scheme,
        pop_size: usize,
        budget: Budget,
        seed: u64,
    ) -> Result<Self> {
        let cfg = Self {
            pop_size,
            budget,
            seed,
            scheme,
            removal: Removal::WorstCd,
            crowding: CrowdingPolicy::engine_default(),
            variation: VariationConfig::standard(problem.n)?,
            problem,
            snapshot_every: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.pop_size < 3 {
            return Err(Error::Config(format!(
                "population size must be at least 3, got {}",
                self.pop_size
            )));
        }
        let amount = match self.budget {
            Budget::Generations(g) => g,
            Budget::Offspring(o) => o,
            Budget::Evaluations(e) => {
                if e <= self.pop_size as u64 {
                    return Err(Error::Config(format!(
                        "evaluation budget {e} does not exceed the population size {}",
                        self.pop_size
                    )));
                }
                e
            }
        };
        if amount == 0 {
            return Err(Error::Config("budget must be positive".into()));
        }
        if self.snapshot_every == Some(0) {
            return Err(Error::Config("snapshot interval must be positive".into()));
        }
        self.variation.validate()?;
        if self.variation.dim() != self.problem.n {
            return Err(Error::Dimension {
                expected: self.problem.n,
                found: self.variation.dim(),
            });
        }
        Ok(())
    }

    /// Number of offspring the run will evaluate.
    pub fn offspring_budget(&self) -> u64 {
        let mu = self.pop_size as u64;
        match (self.scheme, self.budget) {
            (Scheme::MuPlusMu, Budget::Generations(g)) => g * mu,
            (Scheme::MuPlusMu, Budget::Offspring(o)) => o / mu * mu,
            (Scheme::MuPlusMu, Budget::Evaluations(e)) => (e - mu) / mu * mu,
            (Scheme::MuPlusOne, Budget::Generations(g)) => g,
            (Scheme::MuPlusOne, Budget::Offspring(o)) => o,
            (Scheme::MuPlusOne, Budget::Evaluations(e)) => e - mu,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot<R> {
    pub evaluations: u64,
    /// Over the normalized first front, raw-sum policy.
    pub min_finite_cd: CrowdingDistance<R>,
    /// Two-objective problems only.
    pub gap_cv: Option<R>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord<R> {
    pub config: RunConfig<R>,
    pub population: Vec<Individual<R>>,
    pub evaluations: u64,
    pub snapshots: Vec<Snapshot<R>>,
}

/// Sorts `pop` and writes rank and crowding distance into every member.
pub fn assign_fitness<R: Real>(
    pop: &mut [Individual<R>],
    policy: CrowdingPolicy,
) -> FrontPartition {
    let fronts = sort_unchecked(pop);
    let m = pop.first().map_or(0, |i| i.objectives.dim());
    for (rank, front) in fronts.iter().enumerate() {
        let members: Vec<&[R]> = front.iter().map(|&i| pop[i].objectives.values()).collect();
        let distances = distances_unchecked(&members, m, policy);
        for (&i, d) in front.iter().zip(distances) {
            pop[i].rank = Some(rank);
            pop[i].crowding = Some(d);
        }
    }
    fronts
}

/// Index (into `front`) of the member a single-removal update drops.
fn single_removal<R: Real>(
    members: &[&[R]],
    m: usize,
    policy: CrowdingPolicy,
    removal: Removal,
) -> usize {
    if members.len() == 1 {
        return 0;
    }
    match removal {
        Removal::WorstCd => argmin_lowest_index(&distances_unchecked(members, m, policy)),
        Removal::BestContribution => {
            best_contribution_removal(members, policy)
                .expect("front has two members")
                .0
        }
    }
}

/// Survivor selection from a merged pool, preserving pool order.
///
/// Fronts are taken whole until one no longer fits. With exactly one excess
/// member, the critical front loses one solution chosen by `removal`.
/// Otherwise the critical front is truncated in a single pass: crowding
/// distances are computed once and the largest are kept, ties resolved in
/// favour of the lower index.
pub fn environmental_selection<R: Real>(
    merged: Vec<Individual<R>>,
    mu: usize,
    policy: CrowdingPolicy,
    removal: Removal,
) -> Result<Vec<Individual<R>>> {
    if merged.len() <= mu {
        return Err(Error::Size(format!(
            "merged pool of {} cannot be reduced to {mu}",
            merged.len()
        )));
    }
    let m = crate::pareto::check_uniform_dim(&merged)?;
    let fronts = sort_unchecked(&merged);
    let mut keep = vec![false; merged.len()];
    let mut kept = 0;
    for front in fronts.iter() {
        if kept + front.len() <= mu {
            for &i in front {
                keep[i] = true;
            }
            kept += front.len();
            if kept == mu {
                break;
            }
            continue;
        }
        let members: Vec<&[R]> = front
            .iter()
            .map(|&i| merged[i].objectives.values())
            .collect();
        let needed = mu - kept;
        if needed + 1 == front.len() {
            let drop = single_removal(&members, m, policy, removal);
            for (j, &i) in front.iter().enumerate() {
                keep[i] = j != drop;
            }
        } else {
            let distances = distances_unchecked(&members, m, policy);
            let mut order: Vec<usize> = (0..front.len()).collect();
            order.sort_by(|&a, &b| distances[b].total_cmp(&distances[a]));
            for &j in &order[..needed] {
                keep[front[j]] = true;
            }
        }
        break;
    }
    Ok(merged
        .into_iter()
        .zip(keep)
        .filter_map(|(ind, k)| k.then_some(ind))
        .collect())
}

/// Runs the configured engine to completion.
pub fn run<R: Real>(config: &RunConfig<R>) -> Result<RunRecord<R>> {
    Engine::new(config, true)?.run()
}

struct Engine<'a, R: Real> {
    config: &'a RunConfig<R>,
    rng: RandomStream,
    population: Vec<Individual<R>>,
    evaluations: u64,
    snapshots: Vec<Snapshot<R>>,
    /// Skip the full sort in (mu+1) updates when the population is a single
    /// front. Results are identical either way.
    steady_state_shortcut: bool,
}

impl<'a, R: Real> Engine<'a, R> {
    fn new(config: &'a RunConfig<R>, steady_state_shortcut: bool) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            config,
            rng: RandomStream::from_seed(config.seed),
            population: Vec::with_capacity(config.pop_size + 1),
            evaluations: 0,
            snapshots: Vec::new(),
            steady_state_shortcut,
        })
    }

    fn evaluate(&mut self, decision: Vec<R>) -> Result<Individual<R>> {
        let objectives = self.config.problem.evaluate(&decision)?;
        self.evaluations += 1;
        Ok(Individual::new(decision, objectives))
    }

    fn initialize(&mut self) -> Result<()> {
        for _ in 0..self.config.pop_size {
            let x: Vec<R> = self
                .config
                .variation
                .bounds
                .iter()
                .map(|&(lo, hi)| lo + R::lit(self.rng.uniform()) * (hi - lo))
                .collect();
            let ind = self.evaluate(x)?;
            self.population.push(ind);
        }
        assign_fitness(&mut self.population, self.config.crowding);
        Ok(())
    }

    fn parents(&mut self) -> Result<(Vec<R>, Vec<R>)> {
        let cfg = &self.config.variation;
        let a = binary_tournament(&self.population, &mut self.rng)?;
        let b = binary_tournament(&self.population, &mut self.rng)?;
        sbx_crossover(
            &self.population[a].decision,
            &self.population[b].decision,
            cfg,
            &mut self.rng,
        )
    }

    fn mutated(&mut self, x: &[R]) -> Result<Individual<R>> {
        let y = polynomial_mutation(x, &self.config.variation, &mut self.rng)?;
        self.evaluate(y)
    }

    fn generation(&mut self) -> Result<()> {
        let mu = self.config.pop_size;
        let mut offspring = Vec::with_capacity(mu);
        while offspring.len() < mu {
            let (c1, c2) = self.parents()?;
            for child in [c1, c2] {
                if offspring.len() < mu {
                    offspring.push(self.mutated(&child)?);
                }
            }
        }
        let mut merged = std::mem::take(&mut self.population);
        merged.extend(offspring);
        self.population =
            environmental_selection(merged, mu, self.config.crowding, self.config.removal)?;
        assign_fitness(&mut self.population, self.config.crowding);
        Ok(())
    }

    fn steady_state_step(&mut self) -> Result<()> {
        let (c1, _) = self.parents()?;
        let child = self.mutated(&c1)?;
        let policy = self.config.crowding;

        if self.steady_state_shortcut && self.population.iter().all(|i| i.rank == Some(0)) {
            let f = child.objectives.values();
            if self
                .population
                .iter()
                .any(|p| dominates_slices(p.objectives.values(), f))
            {
                // the child forms a front of its own and is the one removed
                return Ok(());
            }
            if !self
                .population
                .iter()
                .any(|p| dominates_slices(f, p.objectives.values()))
            {
                self.population.push(child);
                let m = f_dim(&self.population);
                let members: Vec<&[R]> = self
                    .population
                    .iter()
                    .map(|i| i.objectives.values())
                    .collect();
                let drop = single_removal(&members, m, policy, self.config.removal);
                self.population.remove(drop);
                let members: Vec<&[R]> = self
                    .population
                    .iter()
                    .map(|i| i.objectives.values())
                    .collect();
                let distances = distances_unchecked(&members, m, policy);
                for (ind, d) in self.population.iter_mut().zip(distances) {
                    ind.rank = Some(0);
                    ind.crowding = Some(d);
                }
                return Ok(());
            }
        }

        let mut merged = std::mem::take(&mut self.population);
        merged.push(child);
        self.population =
            environmental_selection(merged, self.config.pop_size, policy, self.config.removal)?;
        assign_fitness(&mut self.population, policy);
        Ok(())
    }

    fn snapshot(&mut self) -> Result<()> {
        if self.snapshots.last().map(|s| s.evaluations) == Some(self.evaluations) {
            return Ok(());
        }
        let snap = population_snapshot(&self.population, &self.config.problem, self.evaluations)?;
        self.snapshots.push(snap);
        Ok(())
    }

    fn run(mut self) -> Result<RunRecord<R>> {
        self.initialize()?;
        let target = self.config.pop_size as u64 + self.config.offspring_budget();
        let every = self.config.snapshot_every;
        let bucket = |evals: u64| every.map_or(0, |k| evals / k);
        let mut last_bucket = bucket(self.evaluations);
        if every.is_some() {
            self.snapshot()?;
        }
        while self.evaluations < target {
            match self.config.scheme {
                Scheme::MuPlusMu => self.generation()?,
                Scheme::MuPlusOne => self.steady_state_step()?,
            }
            let b = bucket(self.evaluations);
            if b > last_bucket {
                last_bucket = b;
                self.snapshot()?;
            }
        }
        self.snapshot()?;
        Ok(RunRecord {
            config: self.config.clone(),
            population: self.population,
            evaluations: self.evaluations,
            snapshots: self.snapshots,
        })
    }
}

fn f_dim<R: Real>(pop: &[Individual<R>]) -> usize {
    pop.first().map_or(0, |i| i.objectives.dim())
}

/// Metrics of the first front in normalized objective space.
pub fn population_snapshot<R: Real>(
    pop: &[Individual<R>],
    problem: &ProblemSpec<R>,
    evaluations: u64,
) -> Result<Snapshot<R>> {
    let first: Vec<_> = pop
        .iter()
        .filter(|i| i.rank == Some(0))
        .map(|i| problem.normalize_to_unit_front(&i.objectives))
        .collect::<Result<_>>()?;
    if first.is_empty() {
        return Err(Error::State("population has no ranked first front".into()));
    }
    let m = first[0].dim();
    let min_finite_cd = min_finite_of(&distances_unchecked(
        &first,
        m,
        CrowdingPolicy::analysis_default(),
    ));
    let gap_cv = if m == 2 {
        let projection = project_to_line(&first, R::lit(DEFAULT_FRONT_EPS))?;
        if projection.positions.len() >= 3 {
            gap_statistics(&projection.positions, R::lit(DEFAULT_DEDUP_EPS))?.cv
        } else {
            None
        }
    } else {
        None
    };
    Ok(Snapshot {
        evaluations,
        min_finite_cd,
        gap_cv,
    })
}
