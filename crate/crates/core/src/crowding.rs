//! Crowding distance and the two single-removal policies built on it.
//!
//! Per-axis orderings are stable sorts over insertion index, so fronts
//! containing duplicate points always get the same boundary assignment.
//! With duplicated extremes this yields more than two infinite distances:
//! for `A=B=(0,1), C, D=E=(1,0)` the first axis orders `ABCDE` while the
//! second orders `DECAB`, marking A, E, D and B as boundaries.

use crate::error::{Error, Result};
use crate::pareto::check_uniform_dim;
use crate::scalar::{CrowdingDistance, Scalar};

/// How equal objective values are ordered in the per-axis sorts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum TieBreak {
    /// Stable ascending sort: equal values keep their front order.
    #[default]
    ByInsertionIndex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Normalization {
    /// Plain sum of neighbour spans.
    RawSum,
    /// Each axis span divided by the axis range; zero-range axes contribute 0.
    RangeNormalized,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CrowdingPolicy {
    pub tie_break: TieBreak,
    pub normalization: Normalization,
}

impl CrowdingPolicy {
    pub const RAW_SUM: Self = Self {
        tie_break: TieBreak::ByInsertionIndex,
        normalization: Normalization::RawSum,
    };

    pub const RANGE_NORMALIZED: Self = Self {
        tie_break: TieBreak::ByInsertionIndex,
        normalization: Normalization::RangeNormalized,
    };

    /// Policy used inside the engines.
    pub fn engine_default() -> Self {
        Self::RANGE_NORMALIZED
    }

    /// Policy used by the analysis and metric routines.
    pub fn analysis_default() -> Self {
        Self::RAW_SUM
    }
}

impl Default for CrowdingPolicy {
    fn default() -> Self {
        Self::engine_default()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrowdingReport<T> {
    pub distances: Vec<CrowdingDistance<T>>,
    pub infinite_count: usize,
}

impl<T: Scalar> CrowdingReport<T> {
    /// Smallest finite distance, or infinity if every entry is infinite.
    pub fn min_finite(&self) -> CrowdingDistance<T> {
        min_finite_of(&self.distances)
    }
}

pub(crate) fn min_finite_of<T: Scalar>(distances: &[CrowdingDistance<T>]) -> CrowdingDistance<T> {
    distances
        .iter()
        .filter_map(CrowdingDistance::finite)
        .fold(None, |acc: Option<T>, v| match acc {
            Some(m) if m <= v => Some(m),
            _ => Some(v),
        })
        .map_or(CrowdingDistance::Infinite, CrowdingDistance::Finite)
}

/// Crowding distance of every member of `front`.
pub fn crowding_distances<T: Scalar, V: AsRef<[T]>>(
    front: &[V],
    policy: CrowdingPolicy,
) -> Result<CrowdingReport<T>> {
    let m = check_uniform_dim(front)?;
    let distances = distances_unchecked(front, m, policy);
    let infinite_count = distances.iter().filter(|d| d.is_infinite()).count();
    Ok(CrowdingReport {
        distances,
        infinite_count,
    })
}

pub(crate) fn distances_unchecked<T: Scalar, V: AsRef<[T]>>(
    front: &[V],
    m: usize,
    policy: CrowdingPolicy,
) -> Vec<CrowdingDistance<T>> {
    let n = front.len();
    if n <= 2 {
        return vec![CrowdingDistance::Infinite; n];
    }
    let mut acc = vec![T::zero(); n];
    let mut boundary = vec![false; n];
    let mut order: Vec<usize> = Vec::with_capacity(n);

    for axis in 0..m {
        let value = |i: usize| front[i].as_ref()[axis];
        order.clear();
        order.extend(0..n);
        match policy.tie_break {
            TieBreak::ByInsertionIndex => order.sort_by(|&a, &b| value(a).cmp_finite(&value(b))),
        }
        boundary[order[0]] = true;
        boundary[order[n - 1]] = true;

        let range = value(order[n - 1]) - value(order[0]);
        if policy.normalization == Normalization::RangeNormalized && range == T::zero() {
            continue;
        }
        for w in order.windows(3) {
            let span = value(w[2]) - value(w[0]);
            acc[w[1]] = acc[w[1]]
                + match policy.normalization {
                    Normalization::RawSum => span,
                    Normalization::RangeNormalized => span / range,
                };
        }
    }

    acc.into_iter()
        .zip(boundary)
        .map(|(d, b)| {
            if b {
                CrowdingDistance::Infinite
            } else {
                CrowdingDistance::Finite(d)
            }
        })
        .collect()
}

/// Minimum over the finite crowding distances of `front`; infinite when
/// every member is a boundary.
pub fn min_finite_cd<T: Scalar, V: AsRef<[T]>>(
    front: &[V],
    policy: CrowdingPolicy,
) -> Result<CrowdingDistance<T>> {
    Ok(crowding_distances(front, policy)?.min_finite())
}

/// Index of the lowest crowding distance, computed once over the whole
/// front. Ties go to the lowest index.
pub fn worst_cd_removal<T: Scalar, V: AsRef<[T]>>(
    front: &[V],
    policy: CrowdingPolicy,
) -> Result<usize> {
    let report = crowding_distances(front, policy)?;
    Ok(argmin_lowest_index(&report.distances))
}

pub(crate) fn argmin_lowest_index<T: Scalar>(distances: &[CrowdingDistance<T>]) -> usize {
    let mut best = 0;
    for (i, d) in distances.iter().enumerate().skip(1) {
        if d.total_cmp(&distances[best]).is_lt() {
            best = i;
        }
    }
    best
}

/// Removes the member whose absence leaves the largest minimum finite
/// crowding distance. Every candidate removal is re-evaluated from scratch;
/// ties go to the lowest index.
pub fn best_contribution_removal<T: Scalar, V: AsRef<[T]>>(
    front: &[V],
    policy: CrowdingPolicy,
) -> Result<(usize, CrowdingDistance<T>)> {
    let m = check_uniform_dim(front)?;
    if front.len() < 2 {
        return Err(Error::Size(format!(
            "best-contribution removal needs at least 2 solutions, got {}",
            front.len()
        )));
    }
    let mut reduced: Vec<&[T]> = Vec::with_capacity(front.len() - 1);
    let mut best: Option<(usize, CrowdingDistance<T>)> = None;
    for skip in 0..front.len() {
        reduced.clear();
        reduced.extend(
            front
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, v)| v.as_ref()),
        );
        let value = min_finite_of(&distances_unchecked(&reduced, m, policy));
        match best {
            Some((_, b)) if value.total_cmp(&b).is_le() => {}
            _ => best = Some((skip, value)),
        }
    }
    Ok(best.expect("front has at least two members"))
}
