//! Metric reports for populations, serialized as JSON.

use nsga_maximin::metrics::{DEFAULT_DEDUP_EPS, DEFAULT_FRONT_EPS};
use nsga_maximin::{
    cd_histogram, crowding_distances, duplicate_extremes, gap_statistics, is_optimal_placement,
    non_dominated_sort, project_to_line, CdHistogram, CrowdingDistance, CrowdingPolicy,
    Individual64, LinePlacement, ObjectiveVector64, ProblemSpec64, Snapshot,
};
use serde_json::{json, Value};

use crate::error::CliResult;

/// Distance from an extreme within which a solution counts as sitting on it.
pub const DEFAULT_EXTREME_EPS: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricOptions {
    pub bins: usize,
    pub front_eps: f64,
    pub dedup_eps: f64,
    pub extreme_eps: f64,
}

impl MetricOptions {
    pub fn with_bins(bins: usize) -> Self {
        Self {
            bins,
            front_eps: DEFAULT_FRONT_EPS,
            dedup_eps: DEFAULT_DEDUP_EPS,
            extreme_eps: DEFAULT_EXTREME_EPS,
        }
    }
}

/// Metrics of the first front in normalized objective space.
#[derive(Clone, Debug, PartialEq)]
pub struct PopulationMetrics {
    pub population_size: usize,
    pub front_size: usize,
    pub min_finite_cd: CrowdingDistance<f64>,
    /// Two-objective populations only, as are the next two fields.
    pub gap_cv: Option<f64>,
    pub dup_at_extremes: Option<(usize, usize)>,
    pub excluded_off_front: Option<usize>,
    pub histogram: CdHistogram<f64>,
}

pub fn normalized_objectives(
    pop: &[Individual64],
    problem: Option<&ProblemSpec64>,
) -> CliResult<Vec<ObjectiveVector64>> {
    pop.iter()
        .map(|i| match problem {
            Some(p) => Ok(p.normalize_to_unit_front(&i.objectives)?),
            None => Ok(i.objectives.clone()),
        })
        .collect()
}

/// Ranks are recomputed from the objectives rather than trusted.
pub fn population_metrics(
    pop: &[Individual64],
    problem: Option<&ProblemSpec64>,
    opts: MetricOptions,
) -> CliResult<PopulationMetrics> {
    let normalized = normalized_objectives(pop, problem)?;
    let fronts = non_dominated_sort(&normalized)?;
    let first: Vec<ObjectiveVector64> = fronts
        .front(0)
        .iter()
        .map(|&i| normalized[i].clone())
        .collect();
    let policy = CrowdingPolicy::analysis_default();
    let min_finite_cd = crowding_distances(&first, policy)?.min_finite();
    let histogram = cd_histogram(&first, policy, opts.bins)?;
    let (mut gap_cv, mut dup, mut excluded) = (None, None, None);
    if first[0].dim() == 2 {
        let projection = project_to_line(&first, opts.front_eps)?;
        if projection.positions.len() >= 3 {
            gap_cv = gap_statistics(&projection.positions, opts.dedup_eps)?.cv;
        }
        dup = Some(duplicate_extremes(&projection.positions, opts.extreme_eps));
        excluded = Some(projection.excluded);
    }
    Ok(PopulationMetrics {
        population_size: pop.len(),
        front_size: first.len(),
        min_finite_cd,
        gap_cv,
        dup_at_extremes: dup,
        excluded_off_front: excluded,
        histogram,
    })
}

/// Whether a two-objective population is a maximin-optimal placement of its
/// size on the normalized line. `None` when the question does not apply.
pub fn optimality_verdict(
    normalized: &[ObjectiveVector64],
    front_eps: f64,
    tol: f64,
) -> CliResult<Option<bool>> {
    let n = normalized.len();
    if n < 3 || normalized[0].dim() != 2 {
        return Ok(None);
    }
    let projection = project_to_line(normalized, front_eps)?;
    if projection.excluded > 0 {
        return Ok(Some(false));
    }
    let mut ts = projection.positions;
    ts.sort_by(f64::total_cmp);
    if ts[0] > tol || ts[n - 1] < 1.0 - tol {
        return Ok(Some(false));
    }
    let interior = ts[1..n - 1].iter().map(|t| t.clamp(0.0, 1.0)).collect();
    Ok(Some(is_optimal_placement(
        &LinePlacement::new(interior)?,
        n,
        tol,
    )?))
}

pub fn cd_json(d: &CrowdingDistance<f64>) -> Value {
    match d {
        CrowdingDistance::Finite(v) => json!(v),
        CrowdingDistance::Infinite => json!("inf"),
    }
}

impl PopulationMetrics {
    /// Inserts the metric keys into `obj`.
    pub fn write_into(&self, obj: &mut serde_json::Map<String, Value>) {
        obj.insert("population_size".into(), json!(self.population_size));
        obj.insert("front_size".into(), json!(self.front_size));
        obj.insert("min_finite_cd".into(), cd_json(&self.min_finite_cd));
        obj.insert("gap_cv".into(), json!(self.gap_cv));
        obj.insert(
            "dup_at_extremes".into(),
            json!(self.dup_at_extremes.map(|(a, b)| [a, b])),
        );
        obj.insert("excluded_off_front".into(), json!(self.excluded_off_front));
        obj.insert(
            "cd_histogram".into(),
            json!({
                "edges": self.histogram.edges,
                "counts": self.histogram.counts,
                "infinite_count": self.histogram.infinite_count,
            }),
        );
    }
}

pub fn snapshots_json(snapshots: &[Snapshot<f64>]) -> Value {
    Value::Array(
        snapshots
            .iter()
            .map(|s| {
                json!({
                    "evaluations": s.evaluations,
                    "min_finite_cd": cd_json(&s.min_finite_cd),
                    "gap_cv": s.gap_cv,
                })
            })
            .collect(),
    )
}

pub fn to_pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}
