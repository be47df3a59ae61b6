//! Non-dominated sorting, crowding distance and NSGA-II engines under the
//! (mu+mu) and (mu+1) update schemes, with an exact treatment of maximin
//! crowding-distance placements on a linear front.
//!
//! Numeric code is generic over [`Scalar`] (exact rationals allowed) or
//! [`Real`] (floating point only). The aliases below fix the common choices.

pub mod crowding;
pub mod engine;
pub mod error;
pub mod maximin;
pub mod metrics;
pub mod pareto;
pub mod problems;
pub mod rng;
pub mod scalar;
pub mod variation;

pub use crowding::{
    best_contribution_removal, crowding_distances, min_finite_cd, worst_cd_removal, CrowdingPolicy,
    CrowdingReport, Normalization, TieBreak,
};
pub use engine::{
    assign_fitness, environmental_selection, population_snapshot, run, Budget, Removal, RunConfig,
    RunRecord, Scheme, Snapshot,
};
pub use error::{Error, Result};
pub use maximin::{
    classify, closed_form_value, grid_oracle, is_optimal_placement, line_crowding, maximin_solve,
    optimal_placement, LinePlacement, MaximinResult, Uniqueness,
};
pub use metrics::{
    cd_histogram, dedup_positions, duplicate_extremes, gap_statistics, project_to_line,
    CdHistogram, GapStats, LineProjection,
};
pub use pareto::{
    dominates, non_dominated_sort, peel_fronts_oracle, FrontPartition, Individual, ObjectiveVector,
};
pub use problems::{normalize, ProblemKind, ProblemSpec};
pub use rng::RandomStream;
pub use scalar::{CrowdingDistance, Real, Scalar};
pub use variation::{binary_tournament, polynomial_mutation, sbx_crossover, VariationConfig};

/// Exact rational scalar for hand-checkable crowding and maximin values.
pub type Exact = num_rational::Ratio<i64>;

pub type ObjectiveVector64 = ObjectiveVector<f64>;
pub type Individual64 = Individual<f64>;
pub type CrowdingDistance64 = CrowdingDistance<f64>;
pub type ProblemSpec64 = ProblemSpec<f64>;
pub type RunConfig64 = RunConfig<f64>;
pub type RunRecord64 = RunRecord<f64>;
pub type LinePlacement64 = LinePlacement<f64>;
pub type LinePlacementExact = LinePlacement<Exact>;
