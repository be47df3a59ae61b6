//! Benchmark problems: a one-variable line front and DTLZ1/DTLZ2 for two or
//! three objectives.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::pareto::ObjectiveVector;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProblemKind {
    /// `f = (x, 1 - x)`: every point is Pareto optimal.
    LineFront,
    Dtlz1,
    Dtlz2,
}

impl ProblemKind {
    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::LineFront => "linefront",
            ProblemKind::Dtlz1 => "dtlz1",
            ProblemKind::Dtlz2 => "dtlz2",
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "linefront" => Ok(ProblemKind::LineFront),
            "dtlz1" => Ok(ProblemKind::Dtlz1),
            "dtlz2" => Ok(ProblemKind::Dtlz2),
            other => Err(Error::Config(format!("unknown problem '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProblemSpec<R> {
    pub kind: ProblemKind,
    /// Decision dimension.
    pub n: usize,
    /// Objective dimension.
    pub m: usize,
    pub bounds: Vec<(R, R)>,
    pub ideal: ObjectiveVector<R>,
    /// Analytic nadir of the Pareto front.
    pub nadir: ObjectiveVector<R>,
}

impl<R: Real> ProblemSpec<R> {
    pub fn line_front() -> Self {
        Self::build(ProblemKind::LineFront, 1, 2, R::one())
    }

    pub fn dtlz1(n: usize, m: usize) -> Result<Self> {
        Self::check_dtlz(n, m)?;
        Ok(Self::build(ProblemKind::Dtlz1, n, m, R::lit(0.5)))
    }

    pub fn dtlz2(n: usize, m: usize) -> Result<Self> {
        Self::check_dtlz(n, m)?;
        Ok(Self::build(ProblemKind::Dtlz2, n, m, R::one()))
    }

    /// Looks a problem up by name. LineFront ignores `n` and `m` unless they
    /// disagree with its fixed shape.
    pub fn from_name(name: &str, n: Option<usize>, m: Option<usize>) -> Result<Self> {
        match name.parse::<ProblemKind>()? {
            ProblemKind::LineFront => {
                if n.is_some_and(|n| n != 1) || m.is_some_and(|m| m != 2) {
                    return Err(Error::Config("linefront has n = 1 and m = 2".into()));
                }
                Ok(Self::line_front())
            }
            ProblemKind::Dtlz1 => Self::dtlz1(n.unwrap_or(6), m.unwrap_or(2)),
            ProblemKind::Dtlz2 => Self::dtlz2(n.unwrap_or(6), m.unwrap_or(2)),
        }
    }

    fn check_dtlz(n: usize, m: usize) -> Result<()> {
        if !(2..=3).contains(&m) {
            return Err(Error::Config(format!(
                "objective count must be 2 or 3, got {m}"
            )));
        }
        if n < m - 1 {
            return Err(Error::Config(format!(
                "need at least {} variables for m = {m}, got {n}",
                m - 1
            )));
        }
        Ok(())
    }

    fn build(kind: ProblemKind, n: usize, m: usize, nadir: R) -> Self {
        Self {
            kind,
            n,
            m,
            bounds: vec![(R::zero(), R::one()); n],
            ideal: ObjectiveVector::new(vec![R::zero(); m]).expect("finite"),
            nadir: ObjectiveVector::new(vec![nadir; m]).expect("finite"),
        }
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn evaluate(&self, x: &[R]) -> Result<ObjectiveVector<R>> {
        if x.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                found: x.len(),
            });
        }
        if let Some((i, v)) = x
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v >= R::zero() && **v <= R::one()))
        {
            return Err(Error::Input(format!("variable {i} = {v} outside [0, 1]")));
        }
        let f = match self.kind {
            ProblemKind::LineFront => vec![x[0], R::one() - x[0]],
            ProblemKind::Dtlz1 => dtlz1(x, self.m),
            ProblemKind::Dtlz2 => dtlz2(x, self.m),
        };
        ObjectiveVector::new(f)
    }

    /// Distance-like residual from the analytic Pareto front: zero on it.
    pub fn front_membership_residual(&self, f: &ObjectiveVector<R>) -> R {
        let sum = f.values().iter().fold(R::zero(), |a, &b| a + b);
        match self.kind {
            ProblemKind::LineFront => (sum - R::one()).abs(),
            ProblemKind::Dtlz1 => (sum - R::lit(0.5)).abs(),
            ProblemKind::Dtlz2 => {
                let norm = f.values().iter().fold(R::zero(), |a, &b| a + b * b).sqrt();
                (norm - R::one()).abs()
            }
        }
    }

    /// Maps objectives through `(f - ideal) / (nadir - ideal)`.
    pub fn normalize_to_unit_front(&self, f: &ObjectiveVector<R>) -> Result<ObjectiveVector<R>> {
        normalize(f, &self.ideal, &self.nadir)
    }
}

/// Componentwise `(f - ideal) / (nadir - ideal)`.
pub fn normalize<R: Real>(
    f: &ObjectiveVector<R>,
    ideal: &ObjectiveVector<R>,
    nadir: &ObjectiveVector<R>,
) -> Result<ObjectiveVector<R>> {
    if f.dim() != ideal.dim() || f.dim() != nadir.dim() {
        return Err(Error::Dimension {
            expected: ideal.dim(),
            found: f.dim(),
        });
    }
    let mut out = Vec::with_capacity(f.dim());
    for i in 0..f.dim() {
        let range = nadir[i] - ideal[i];
        if range == R::zero() {
            return Err(Error::Config(format!(
                "objective {i} has zero normalization range"
            )));
        }
        out.push((f[i] - ideal[i]) / range);
    }
    ObjectiveVector::new(out)
}

fn dtlz1<R: Real>(x: &[R], m: usize) -> Vec<R> {
    let half = R::lit(0.5);
    let twenty_pi = R::lit(20.0 * PI);
    let tail = &x[m - 1..];
    let sum = tail.iter().fold(R::zero(), |acc, &xi| {
        let d = xi - half;
        acc + d * d - (twenty_pi * d).cos()
    });
    let g = R::lit(100.0) * (R::from_usize(tail.len()) + sum);
    let scale = half * (R::one() + g);
    (0..m)
        .map(|i| {
            let kept = m - 1 - i;
            let mut f = scale;
            for &xj in &x[..kept] {
                f = f * xj;
            }
            if i > 0 {
                f = f * (R::one() - x[kept]);
            }
            f
        })
        .collect()
}

fn dtlz2<R: Real>(x: &[R], m: usize) -> Vec<R> {
    let half = R::lit(0.5);
    let half_pi = R::lit(PI / 2.0);
    let g = x[m - 1..]
        .iter()
        .fold(R::zero(), |acc, &xi| acc + (xi - half) * (xi - half));
    let scale = R::one() + g;
    (0..m)
        .map(|i| {
            let kept = m - 1 - i;
            let mut f = scale;
            for &xj in &x[..kept] {
                f = f * (xj * half_pi).cos();
            }
            if i > 0 {
                f = f * (x[kept] * half_pi).sin();
            }
            f
        })
        .collect()
}
