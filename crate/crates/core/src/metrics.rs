//! Distribution diagnostics for final populations.

use crate::crowding::{crowding_distances, CrowdingPolicy};
use crate::error::{Error, Result};
use crate::pareto::ObjectiveVector;
use crate::scalar::Real;

/// Positions merged by [`gap_statistics`] when closer than this.
pub const DEFAULT_DEDUP_EPS: f64 = 1e-6;

/// Maximum `|f1 + f2 - 1|` for a normalized point to count as on the line.
pub const DEFAULT_FRONT_EPS: f64 = 1e-3;

/// Line positions of the points that passed the residual check.
#[derive(Clone, Debug, PartialEq)]
pub struct LineProjection<R> {
    pub positions: Vec<R>,
    pub excluded: usize,
}

/// Projects normalized two-objective points onto the line from `(0, 1)` to
/// `(1, 0)`; `t = f1`. Points further than `eps_front` from the line are
/// dropped and counted.
pub fn project_to_line<R: Real>(
    pop: &[ObjectiveVector<R>],
    eps_front: R,
) -> Result<LineProjection<R>> {
    let mut positions = Vec::with_capacity(pop.len());
    let mut excluded = 0;
    for f in pop {
        if f.dim() != 2 {
            return Err(Error::Dimension {
                expected: 2,
                found: f.dim(),
            });
        }
        if (f[0] + f[1] - R::one()).abs() <= eps_front {
            positions.push(f[0]);
        } else {
            excluded += 1;
        }
    }
    Ok(LineProjection {
        positions,
        excluded,
    })
}

/// Sorts positions and merges runs whose consecutive spacing is at most
/// `eps` into their mean.
pub fn dedup_positions<R: Real>(ts: &[R], eps: R) -> Vec<R> {
    let mut sorted = ts.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite positions"));
    let mut merged = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] - sorted[j - 1] <= eps {
            j += 1;
        }
        let sum = sorted[i..j].iter().fold(R::zero(), |a, &b| a + b);
        merged.push(sum / R::from_usize(j - i));
        i = j;
    }
    merged
}

#[derive(Clone, Debug, PartialEq)]
pub struct GapStats<R> {
    /// Spacing between consecutive distinct positions, endpoints included.
    pub gaps: Vec<R>,
    pub mean: Option<R>,
    pub stdev: Option<R>,
    /// `stdev / mean`; absent with fewer than two gaps.
    pub cv: Option<R>,
}

/// Gap statistics of line positions after merging near-duplicates.
///
/// The endpoints 0 and 1 join the position set before merging, so coverage
/// of the whole segment is judged, not just the spread between the outermost
/// members. Population standard deviation is used.
pub fn gap_statistics<R: Real>(ts: &[R], dedup_eps: R) -> Result<GapStats<R>> {
    if ts.len() < 3 {
        return Err(Error::Size(format!(
            "need at least 3 positions, got {}",
            ts.len()
        )));
    }
    let mut with_ends = ts.to_vec();
    with_ends.push(R::zero());
    with_ends.push(R::one());
    let distinct = dedup_positions(&with_ends, dedup_eps);
    let gaps: Vec<R> = distinct.windows(2).map(|w| w[1] - w[0]).collect();
    if gaps.len() < 2 {
        return Ok(GapStats {
            gaps,
            mean: None,
            stdev: None,
            cv: None,
        });
    }
    let count = R::from_usize(gaps.len());
    let mean = gaps.iter().fold(R::zero(), |a, &b| a + b) / count;
    let var = gaps
        .iter()
        .fold(R::zero(), |a, &g| a + (g - mean) * (g - mean))
        / count;
    let stdev = var.sqrt();
    Ok(GapStats {
        gaps,
        mean: Some(mean),
        stdev: Some(stdev),
        cv: Some(stdev / mean),
    })
}

/// Number of positions within `eps` of 0 and of 1.
pub fn duplicate_extremes<R: Real>(ts: &[R], eps: R) -> (usize, usize) {
    let near = |target: R| ts.iter().filter(|&&t| (t - target).abs() <= eps).count();
    (near(R::zero()), near(R::one()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CdHistogram<R> {
    /// `bins + 1` ascending edges spanning the finite distances.
    pub edges: Vec<R>,
    pub counts: Vec<usize>,
    pub infinite_count: usize,
}

impl<R: Real> CdHistogram<R> {
    pub fn total(&self) -> usize {
        self.counts.iter().sum::<usize>() + self.infinite_count
    }
}

/// Histogram of the finite crowding distances of `front` over `bins`
/// equal-width bins between the smallest and largest finite value. Infinite
/// distances are counted separately; with no finite values the edges are
/// empty.
pub fn cd_histogram<R: Real, V: AsRef<[R]>>(
    front: &[V],
    policy: CrowdingPolicy,
    bins: usize,
) -> Result<CdHistogram<R>> {
    if bins == 0 {
        return Err(Error::Config("histogram needs at least one bin".into()));
    }
    let report = crowding_distances(front, policy)?;
    let finite: Vec<R> = report.distances.iter().filter_map(|d| d.finite()).collect();
    if finite.is_empty() {
        return Ok(CdHistogram {
            edges: Vec::new(),
            counts: vec![0; bins],
            infinite_count: report.infinite_count,
        });
    }
    let lo = finite.iter().copied().fold(R::infinity(), R::min);
    let hi = finite.iter().copied().fold(R::neg_infinity(), R::max);
    let width = (hi - lo) / R::from_usize(bins);
    let edges = (0..=bins)
        .map(|i| {
            if i == bins {
                hi
            } else {
                lo + width * R::from_usize(i)
            }
        })
        .collect();
    let mut counts = vec![0; bins];
    for v in finite {
        let slot = if width > R::zero() {
            ((v - lo) / width)
                .floor()
                .to_usize()
                .unwrap_or(0)
                .min(bins - 1)
        } else {
            0
        };
        counts[slot] += 1;
    }
    Ok(CdHistogram {
        edges,
        counts,
        infinite_count: report.infinite_count,
    })
}
