//! Objective vectors, individuals, Pareto dominance and non-dominated sorting.

use crate::error::{Error, Result};
use crate::scalar::{CrowdingDistance, Scalar};

/// A point in objective space. Every objective is minimized.
#[derive(Clone, Debug, PartialEq)]
pub struct ObjectiveVector<T>(Vec<T>);

impl<T: Scalar> ObjectiveVector<T> {
    /// Requires at least two objectives, all finite.
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::Dimension {
                expected: 2,
                found: values.len(),
            });
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite_value()) {
            return Err(Error::Input(format!("non-finite objective value {bad}")));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[T] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_inner(self) -> Vec<T> {
        self.0
    }
}

impl<T> AsRef<[T]> for ObjectiveVector<T> {
    fn as_ref(&self) -> &[T] {
        &self.0
    }
}

impl<T> std::ops::Index<usize> for ObjectiveVector<T> {
    type Output = T;

    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

/// A population member. Fitness (`rank`, `crowding`) stays `None` until a
/// sort has been run over the population it belongs to.
#[derive(Clone, Debug, PartialEq)]
pub struct Individual<T> {
    pub decision: Vec<T>,
    pub objectives: ObjectiveVector<T>,
    pub rank: Option<usize>,
    pub crowding: Option<CrowdingDistance<T>>,
}

impl<T: Scalar> Individual<T> {
    pub fn new(decision: Vec<T>, objectives: ObjectiveVector<T>) -> Self {
        Self {
            decision,
            objectives,
            rank: None,
            crowding: None,
        }
    }

    pub fn has_fitness(&self) -> bool {
        self.rank.is_some() && self.crowding.is_some()
    }
}

impl<T> AsRef<[T]> for Individual<T> {
    fn as_ref(&self) -> &[T] {
        self.objectives.as_ref()
    }
}

/// Ranked fronts as index lists into a population; front 0 is the best.
/// Indices inside each front are ascending.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FrontPartition {
    fronts: Vec<Vec<usize>>,
}

impl FrontPartition {
    pub fn fronts(&self) -> &[Vec<usize>] {
        &self.fronts
    }

    pub fn len(&self) -> usize {
        self.fronts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fronts.is_empty()
    }

    pub fn front(&self, k: usize) -> &[usize] {
        &self.fronts[k]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[usize]> {
        self.fronts.iter().map(Vec::as_slice)
    }

    /// Rank of every population member, indexed by position.
    pub fn ranks(&self) -> Vec<usize> {
        let n = self.fronts.iter().map(Vec::len).sum();
        let mut ranks = vec![0; n];
        for (k, front) in self.fronts.iter().enumerate() {
            for &i in front {
                ranks[i] = k;
            }
        }
        ranks
    }

    pub fn into_fronts(self) -> Vec<Vec<usize>> {
        self.fronts
    }
}

/// Dominance on raw slices; callers guarantee equal lengths.
#[inline]
pub(crate) fn dominates_slices<T: PartialOrd>(a: &[T], b: &[T]) -> bool {
    let mut strictly_better = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly_better = true;
        }
    }
    strictly_better
}

/// True iff `a` is no worse than `b` everywhere and strictly better somewhere.
pub fn dominates<T: Scalar>(a: &ObjectiveVector<T>, b: &ObjectiveVector<T>) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(dominates_slices(a.values(), b.values()))
}

pub(crate) fn check_uniform_dim<T, V: AsRef<[T]>>(pop: &[V]) -> Result<usize> {
    let first = pop.first().ok_or(Error::EmptyInput)?.as_ref().len();
    for v in pop {
        let found = v.as_ref().len();
        if found != first {
            return Err(Error::Dimension {
                expected: first,
                found,
            });
        }
    }
    Ok(first)
}

/// Fast non-dominated sorting with domination counts and dominated-sets.
pub fn non_dominated_sort<T: Scalar, V: AsRef<[T]>>(pop: &[V]) -> Result<FrontPartition> {
    check_uniform_dim(pop)?;
    Ok(sort_unchecked(pop))
}

pub(crate) fn sort_unchecked<T: PartialOrd, V: AsRef<[T]>>(pop: &[V]) -> FrontPartition {
    let n = pop.len();
    let mut dominated_count = vec![0usize; n];
    let mut dominated_sets: Vec<Vec<usize>> = vec![Vec::new(); n];

    for i in 0..n {
        let a = pop[i].as_ref();
        for j in (i + 1)..n {
            let b = pop[j].as_ref();
            if dominates_slices(a, b) {
                dominated_sets[i].push(j);
                dominated_count[j] += 1;
            } else if dominates_slices(b, a) {
                dominated_sets[j].push(i);
                dominated_count[i] += 1;
            }
        }
    }

    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| dominated_count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated_sets[i] {
                dominated_count[j] -= 1;
                if dominated_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
    }
    FrontPartition { fronts }
}

/// Reference sort: repeatedly extract the non-dominated subset of what is
/// left. Quadratic per front and intentionally naive.
pub fn peel_fronts_oracle<T: Scalar, V: AsRef<[T]>>(pop: &[V]) -> Result<FrontPartition> {
    check_uniform_dim(pop)?;
    let mut remaining: Vec<usize> = (0..pop.len()).collect();
    let mut fronts = Vec::new();
    while !remaining.is_empty() {
        let (front, rest): (Vec<usize>, Vec<usize>) = remaining.iter().partition(|&&i| {
            !remaining
                .iter()
                .any(|&j| dominates_slices(pop[j].as_ref(), pop[i].as_ref()))
        });
        fronts.push(front);
        remaining = rest;
    }
    Ok(FrontPartition { fronts })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ov(v: &[f64]) -> ObjectiveVector<f64> {
        ObjectiveVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn dominance_examples() {
        assert!(dominates(&ov(&[0.2, 0.3]), &ov(&[0.4, 0.5])).unwrap());
        assert!(!dominates(&ov(&[0.2, 0.3]), &ov(&[0.2, 0.3])).unwrap());
        assert!(!dominates(&ov(&[0.0, 1.0]), &ov(&[1.0, 0.0])).unwrap());
        assert!(!dominates(&ov(&[1.0, 0.0]), &ov(&[0.0, 1.0])).unwrap());
    }

    #[test]
    fn dominance_rejects_length_mismatch() {
        let err = dominates(&ov(&[0.0, 1.0]), &ov(&[0.0, 1.0, 2.0])).unwrap_err();
        assert_eq!(
            err,
            Error::Dimension {
                expected: 2,
                found: 3
            }
        );
    }

    #[test]
    fn objective_vector_rejects_non_finite() {
        assert!(ObjectiveVector::new(vec![0.0, f64::NAN]).is_err());
        assert!(ObjectiveVector::new(vec![f64::INFINITY, 0.0]).is_err());
        assert!(ObjectiveVector::new(vec![0.0]).is_err());
    }

    #[test]
    fn sort_examples() {
        let line = [ov(&[0.0, 1.0]), ov(&[1.0, 0.0]), ov(&[0.5, 0.5])];
        assert_eq!(
            non_dominated_sort(&line).unwrap().fronts(),
            &[vec![0, 1, 2]]
        );
        assert_eq!(
            peel_fronts_oracle(&line).unwrap().fronts(),
            &[vec![0, 1, 2]]
        );

        let chain = [ov(&[0.2, 0.2]), ov(&[0.5, 0.5])];
        assert_eq!(
            non_dominated_sort(&chain).unwrap().fronts(),
            &[vec![0], vec![1]]
        );
        assert_eq!(
            peel_fronts_oracle(&chain).unwrap().fronts(),
            &[vec![0], vec![1]]
        );
    }

    #[test]
    fn duplicates_share_a_front() {
        let pop = [
            ov(&[0.0, 1.0]),
            ov(&[0.0, 1.0]),
            ov(&[1.0, 0.0]),
            ov(&[1.0, 1.0]),
        ];
        let fp = non_dominated_sort(&pop).unwrap();
        assert_eq!(fp.fronts(), &[vec![0, 1, 2], vec![3]]);
        assert_eq!(fp.ranks(), vec![0, 0, 0, 1]);
    }

    #[test]
    fn sort_rejects_empty_and_ragged() {
        let empty: [ObjectiveVector<f64>; 0] = [];
        assert_eq!(non_dominated_sort(&empty).unwrap_err(), Error::EmptyInput);
        let ragged = [vec![0.0, 1.0], vec![0.0, 1.0, 2.0]];
        assert!(matches!(
            non_dominated_sort::<f64, _>(&ragged),
            Err(Error::Dimension { .. })
        ));
    }
}
