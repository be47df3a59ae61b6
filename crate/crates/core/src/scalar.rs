//! Scalar abstractions.
//!
//! Ordering-only code (dominance, sorting, crowding, line placements) is
//! written against [`Scalar`], which admits exact rationals. Anything that
//! needs transcendental functions or square roots asks for [`Real`].

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};

use num_rational::Ratio;
use num_traits::{Float, Num, NumCast};

pub trait Scalar: Num + Copy + PartialOrd + Debug + Display + Send + Sync + 'static {
    /// False for NaN and the infinities.
    fn is_finite_value(&self) -> bool;

    /// `numer / denom`, exactly when the type allows it.
    fn from_ratio(numer: i64, denom: i64) -> Self;

    fn to_f64_lossy(&self) -> f64;

    fn from_usize(n: usize) -> Self {
        Self::from_ratio(n as i64, 1)
    }

    /// Total order for finite values. Panics on NaN.
    fn cmp_finite(&self, other: &Self) -> Ordering {
        self.partial_cmp(other)
            .expect("comparison of non-finite scalar")
    }
}

impl Scalar for f64 {
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        numer as f64 / denom as f64
    }

    fn to_f64_lossy(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        (numer as f64 / denom as f64) as f32
    }

    fn to_f64_lossy(&self) -> f64 {
        *self as f64
    }
}

impl Scalar for Ratio<i64> {
    fn is_finite_value(&self) -> bool {
        true
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        Ratio::new(numer, denom)
    }

    fn to_f64_lossy(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

/// Floating-point scalars.
pub trait Real: Scalar + Float {
    fn lit(v: f64) -> Self {
        <Self as NumCast>::from(v).expect("f64 literal representable")
    }
}

impl Real for f64 {}
impl Real for f32 {}

/// A crowding distance: a finite non-negative value or positive infinity.
///
/// Kept separate from the scalar so exact rational types can carry
/// boundary distances too.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CrowdingDistance<T> {
    Finite(T),
    Infinite,
}

impl<T: Scalar> CrowdingDistance<T> {
    pub fn is_infinite(&self) -> bool {
        matches!(self, CrowdingDistance::Infinite)
    }

    pub fn finite(&self) -> Option<T> {
        match *self {
            CrowdingDistance::Finite(v) => Some(v),
            CrowdingDistance::Infinite => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            CrowdingDistance::Finite(v) => v.to_f64_lossy(),
            CrowdingDistance::Infinite => f64::INFINITY,
        }
    }

    pub fn map<U, F: FnOnce(T) -> U>(self, f: F) -> CrowdingDistance<U> {
        match self {
            CrowdingDistance::Finite(v) => CrowdingDistance::Finite(f(v)),
            CrowdingDistance::Infinite => CrowdingDistance::Infinite,
        }
    }

    /// Total order; panics if a finite value is NaN.
    pub fn total_cmp(&self, other: &Self) -> Ordering {
        use CrowdingDistance::*;
        match (self, other) {
            (Infinite, Infinite) => Ordering::Equal,
            (Infinite, Finite(_)) => Ordering::Greater,
            (Finite(_), Infinite) => Ordering::Less,
            (Finite(a), Finite(b)) => a.cmp_finite(b),
        }
    }
}

impl<T: Scalar> PartialOrd for CrowdingDistance<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        use CrowdingDistance::*;
        match (self, other) {
            (Infinite, Infinite) => Some(Ordering::Equal),
            (Infinite, Finite(_)) => Some(Ordering::Greater),
            (Finite(_), Infinite) => Some(Ordering::Less),
            (Finite(a), Finite(b)) => a.partial_cmp(b),
        }
    }
}

impl<T: Display> Display for CrowdingDistance<T> {
    /// Infinite values print as the literal token `inf`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CrowdingDistance::Finite(v) => Display::fmt(v, f),
            CrowdingDistance::Infinite => f.write_str("inf"),
        }
    }
}
