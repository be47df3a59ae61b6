//! Placements on the normalized linear front that maximize the minimum
//! crowding distance.
//!
//! A solution at position `t` sits at `(t, 1 - t)`. The two extremes `t = 0`
//! and `t = 1` are always present, carry infinite crowding distance, and are
//! left out of the objective. On this 45 degree line both axes contribute the
//! same neighbour span, so the `i`-th interior solution has crowding distance
//! `2 (t[i+1] - t[i-1])` with `t[0] = 0` and `t[K+1] = 1`.
//!
//! The constraints `t[i+1] - t[i-1] >= z/2` split into two interleaved
//! chains (even and odd indices). For `N` solutions in total and
//! `L = ceil(N/2)` lattice locations the best value is `2 / (L - 1)`: the
//! chain anchored at both extremes is pinned to the lattice `j / (L - 1)`,
//! and for even `N` the other chain is pinned too. For odd `N` the second
//! chain keeps one lattice step of slack, which is why odd optima are not
//! unique.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};

/// Interior positions on the line, kept sorted. Duplicates are allowed; a
/// copy at `t = 0` or `t = 1` sits next to the implicit extreme.
#[derive(Clone, Debug, PartialEq)]
pub struct LinePlacement<T> {
    interior: Vec<T>,
}

impl<T: Scalar> LinePlacement<T> {
    pub fn new(mut interior: Vec<T>) -> Result<Self> {
        if let Some(bad) = interior
            .iter()
            .find(|t| !(t.is_finite_value() && **t >= T::zero() && **t <= T::one()))
        {
            return Err(Error::Input(format!("position {bad} outside [0, 1]")));
        }
        interior.sort_by(T::cmp_finite);
        Ok(Self { interior })
    }

    pub fn interior(&self) -> &[T] {
        &self.interior
    }

    pub fn len(&self) -> usize {
        self.interior.len()
    }

    pub fn is_empty(&self) -> bool {
        self.interior.is_empty()
    }

    /// Total solution count including the two extremes.
    pub fn total(&self) -> usize {
        self.interior.len() + 2
    }

    /// Reflection `t -> 1 - t`.
    pub fn mirrored(&self) -> Self {
        let mut interior: Vec<T> = self.interior.iter().rev().map(|&t| T::one() - t).collect();
        interior.sort_by(T::cmp_finite);
        Self { interior }
    }

    /// Objective vectors of the full solution set, extremes first and last.
    pub fn to_front(&self) -> Vec<Vec<T>> {
        std::iter::once(T::zero())
            .chain(self.interior.iter().copied())
            .chain(std::iter::once(T::one()))
            .map(|t| vec![t, T::one() - t])
            .collect()
    }
}

/// Crowding distance of every interior solution, in placement order.
pub fn line_crowding<T: Scalar>(p: &LinePlacement<T>) -> Vec<T> {
    let two = T::one() + T::one();
    let k = p.len();
    (0..k)
        .map(|i| {
            let prev = if i == 0 { T::zero() } else { p.interior[i - 1] };
            let next = if i + 1 == k {
                T::one()
            } else {
                p.interior[i + 1]
            };
            two * (next - prev)
        })
        .collect()
}

fn min_of<T: Scalar>(values: &[T]) -> Option<T> {
    values
        .iter()
        .copied()
        .reduce(|a, b| if b < a { b } else { a })
}

fn check_total(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::Size(format!("need at least 3 solutions, got {n}")));
    }
    Ok(())
}

fn locations(n: usize) -> usize {
    n.div_ceil(2)
}

/// Largest achievable minimum crowding distance for `n` solutions:
/// `2 / (ceil(n/2) - 1)`.
pub fn closed_form_value<T: Scalar>(n: usize) -> Result<T> {
    check_total(n)?;
    Ok(T::from_ratio(2, locations(n) as i64 - 1))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Uniqueness {
    Unique,
    /// Optima form a continuum with `free_parameters` degrees of freedom;
    /// `lattice_configurations` of them put every solution on the lattice.
    Continuum {
        free_parameters: usize,
        lattice_configurations: usize,
        description: String,
    },
}

impl fmt::Display for Uniqueness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Uniqueness::Unique => f.write_str("unique"),
            Uniqueness::Continuum { description, .. } => write!(f, "continuum ({description})"),
        }
    }
}

/// Uniqueness class of the optimum for `n` solutions.
pub fn classify(n: usize) -> Result<Uniqueness> {
    check_total(n)?;
    if n.is_multiple_of(2) {
        return Ok(Uniqueness::Unique);
    }
    let l = locations(n);
    let description = if n == 3 {
        "the single interior solution may sit anywhere on the line".to_string()
    } else {
        format!(
            "even-indexed positions pinned to j/{}; each odd-indexed position slides within \
             its lattice cell with non-decreasing offsets; {l} configurations lie on the lattice",
            l - 1
        )
    };
    Ok(Uniqueness::Continuum {
        free_parameters: l - 1,
        lattice_configurations: l,
        description,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MaximinResult<T> {
    pub value: T,
    pub witness: LinePlacement<T>,
    pub uniqueness: Uniqueness,
}

/// Canonical optimal placement: `ceil(n/2)` evenly spaced locations with two
/// solutions each; for odd `n` the location at `t = 0` holds only the
/// extreme.
pub fn optimal_placement<T: Scalar>(n: usize) -> Result<MaximinResult<T>> {
    check_total(n)?;
    let l = locations(n);
    let step = l as i64 - 1;
    let mut all = Vec::with_capacity(n);
    for j in 0..l {
        let copies = if j == 0 && n % 2 == 1 { 1 } else { 2 };
        for _ in 0..copies {
            all.push(T::from_ratio(j as i64, step));
        }
    }
    // the first and last entries are the fixed extremes
    let interior = all[1..all.len() - 1].to_vec();
    Ok(MaximinResult {
        value: closed_form_value(n)?,
        witness: LinePlacement::new(interior)?,
        uniqueness: classify(n)?,
    })
}

/// Greedy minimal placement for target `z`; `None` when `z` is infeasible.
fn greedy_placement<R: Real>(k: usize, z: R) -> Option<Vec<R>> {
    let half_z = z / R::lit(2.0);
    let mut t = Vec::with_capacity(k);
    for i in 0..k {
        let before_prev = if i >= 2 { t[i - 2] } else { R::zero() };
        let prev = if i >= 1 { t[i - 1] } else { R::zero() };
        let next = if i == 0 {
            R::zero()
        } else {
            prev.max(before_prev + half_z)
        };
        t.push(next);
    }
    let last = t[k - 1];
    let second_last = if k >= 2 { t[k - 2] } else { R::zero() };
    (last <= R::one() && second_last <= R::one() - half_z).then_some(t)
}

/// Bisection on the target value over `[0, 2]` with a greedy feasibility
/// check. Returns the largest feasible value found (within `tol` of the
/// optimum) and its greedy witness.
pub fn maximin_solve<R: Real>(k: usize, tol: R) -> Result<MaximinResult<R>> {
    if k == 0 {
        return Err(Error::Size("need at least one interior solution".into()));
    }
    if !(tol > R::zero() && tol.is_finite()) {
        return Err(Error::Config(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let two = R::lit(2.0);
    let (value, witness) = if let Some(w) = greedy_placement(k, two) {
        (two, w)
    } else {
        let mut lo = R::zero();
        let mut hi = two;
        while hi - lo > tol {
            let mid = (lo + hi) / two;
            if greedy_placement(k, mid).is_some() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (
            lo,
            greedy_placement(k, lo).expect("lower end stays feasible"),
        )
    };
    Ok(MaximinResult {
        value,
        witness: LinePlacement::new(witness)?,
        uniqueness: classify(k + 2)?,
    })
}

/// Upper bound on the number of non-decreasing tuples the grid search may
/// visit before it refuses the instance.
pub const GRID_CAPACITY: f64 = 1e10;

/// Exhaustive search over non-decreasing `k`-tuples on `{0, r, 2r, ..., 1}`.
///
/// Independent of the bisection solver: it enumerates positions directly and
/// prunes only with the incumbent value and simple counting bounds.
pub fn grid_oracle<R: Real>(k: usize, resolution: R) -> Result<MaximinResult<R>> {
    if k == 0 {
        return Err(Error::Size("need at least one interior solution".into()));
    }
    let r = resolution.to_f64_lossy();
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::Config(format!(
            "resolution must lie in (0, 1], got {r}"
        )));
    }
    let cells = (1.0 / r).round();
    if (cells * r - 1.0).abs() > 1e-9 {
        return Err(Error::Config(format!(
            "resolution {r} does not divide [0, 1]"
        )));
    }
    let tuples = (1..=k).fold(1.0, |acc, i| acc * (cells + i as f64) / i as f64);
    if tuples > GRID_CAPACITY {
        return Err(Error::Capacity(format!(
            "{tuples:.3e} grid tuples for k = {k} at resolution {r}"
        )));
    }
    let cells = cells as i64;

    let mut search = GridSearch::new(k, cells);
    search.descend(1);
    let value = R::from_ratio(2 * search.best_gap, cells);
    let witness = search
        .best
        .iter()
        .map(|&g| R::from_ratio(g, cells))
        .collect();
    Ok(MaximinResult {
        value,
        witness: LinePlacement::new(witness)?,
        uniqueness: classify(k + 2)?,
    })
}

/// Positions are integers in `0..=cells`; `pos[0] = 0` and
/// `pos[k+1] = cells` are the extremes. The objective is the smallest
/// `pos[i+1] - pos[i-1]` over interior `i`.
struct GridSearch {
    k: usize,
    cells: i64,
    pos: Vec<i64>,
    best: Vec<i64>,
    best_gap: i64,
}

impl GridSearch {
    fn new(k: usize, cells: i64) -> Self {
        let mut pos = vec![0; k + 2];
        pos[k + 1] = cells;
        // incumbent: evenly spaced positions snapped to the grid
        for (i, p) in pos.iter_mut().enumerate().take(k + 1).skip(1) {
            *p = (i as i64 * cells + (k as i64 + 1) / 2) / (k as i64 + 1);
        }
        let best_gap = Self::min_gap(&pos);
        let best = pos[1..=k].to_vec();
        Self {
            k,
            cells,
            pos,
            best,
            best_gap,
        }
    }

    fn min_gap(pos: &[i64]) -> i64 {
        pos.windows(3).map(|w| w[2] - w[0]).min().expect("k >= 1")
    }

    fn descend(&mut self, i: usize) {
        if i == self.k + 1 {
            let gap = Self::min_gap(&self.pos);
            if gap > self.best_gap {
                self.best_gap = gap;
                self.best = self.pos[1..=self.k].to_vec();
            }
            return;
        }
        let lower = if i >= 2 {
            self.pos[i - 1].max(self.pos[i - 2] + self.best_gap + 1)
        } else {
            0
        };
        let mut g = lower;
        loop {
            // the chain through i must still reach the far extreme
            let need = self.best_gap + 1;
            let hops = ((self.k + 1 - i) / 2) as i64;
            if g > self.cells || g + hops * need > self.cells {
                break;
            }
            self.pos[i] = g;
            self.descend(i + 1);
            g += 1;
        }
    }
}

/// True iff the placement's minimum crowding distance reaches the optimum
/// for its solution count, up to `tol`.
pub fn is_optimal_placement<T: Scalar>(p: &LinePlacement<T>, n: usize, tol: T) -> Result<bool> {
    check_total(n)?;
    if p.total() != n {
        return Err(Error::Size(format!(
            "placement has {} interior solutions, expected {}",
            p.len(),
            n - 2
        )));
    }
    let min = min_of(&line_crowding(p)).expect("n >= 3 gives an interior solution");
    Ok(min >= closed_form_value::<T>(n)? - tol)
}
