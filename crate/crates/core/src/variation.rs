//! Real-coded variation: SBX crossover, polynomial mutation and binary
//! tournament mating selection.

use crate::error::{Error, Result};
use crate::pareto::Individual;
use crate::rng::RandomStream;
use crate::scalar::{Real, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct VariationConfig<R> {
    pub sbx_eta: R,
    pub sbx_prob: R,
    pub mut_eta: R,
    pub mut_prob: R,
    pub bounds: Vec<(R, R)>,
}

impl<R: Real> VariationConfig<R> {
    pub fn new(
        sbx_eta: R,
        sbx_prob: R,
        mut_eta: R,
        mut_prob: R,
        bounds: Vec<(R, R)>,
    ) -> Result<Self> {
        let cfg = Self {
            sbx_eta,
            sbx_prob,
            mut_eta,
            mut_prob,
            bounds,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Both distribution indices 20, crossover always, mutation rate `1/n`,
    /// unit box.
    pub fn standard(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("decision dimension must be positive".into()));
        }
        Self::new(
            R::lit(20.0),
            R::one(),
            R::lit(20.0),
            R::one() / R::from_usize(n),
            vec![(R::zero(), R::one()); n],
        )
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |p: R| p >= R::zero() && p <= R::one();
        if !(self.sbx_eta > R::zero() && self.sbx_eta.is_finite()) {
            return Err(Error::Config(format!(
                "sbx_eta must be positive, got {}",
                self.sbx_eta
            )));
        }
        if !(self.mut_eta > R::zero() && self.mut_eta.is_finite()) {
            return Err(Error::Config(format!(
                "mut_eta must be positive, got {}",
                self.mut_eta
            )));
        }
        if !unit(self.sbx_prob) {
            return Err(Error::Config(format!(
                "sbx_prob outside [0,1]: {}",
                self.sbx_prob
            )));
        }
        if !unit(self.mut_prob) {
            return Err(Error::Config(format!(
                "mut_prob outside [0,1]: {}",
                self.mut_prob
            )));
        }
        if self.bounds.is_empty() {
            return Err(Error::Config("no decision variables".into()));
        }
        for (i, &(lo, hi)) in self.bounds.iter().enumerate() {
            if !(lo < hi && lo.is_finite() && hi.is_finite()) {
                return Err(Error::Config(format!(
                    "bounds of variable {i} not ordered: ({lo}, {hi})"
                )));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    fn check_in_bounds(&self, x: &[R], what: &str) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: x.len(),
            });
        }
        for (i, (&v, &(lo, hi))) in x.iter().zip(&self.bounds).enumerate() {
            if !(v >= lo && v <= hi) {
                return Err(Error::Input(format!(
                    "{what} variable {i} = {v} outside [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    }
}

fn clip<R: Real>(v: R, (lo, hi): (R, R)) -> R {
    v.max(lo).min(hi)
}

/// SBX spread factor with distribution index `eta`.
fn spread_factor<R: Real>(u: R, eta: R) -> R {
    let two = R::lit(2.0);
    let half = R::lit(0.5);
    let exponent = R::one() / (eta + R::one());
    if u <= half {
        (two * u).powf(exponent)
    } else {
        (R::one() / (two * (R::one() - u))).powf(exponent)
    }
}

/// Simulated binary crossover. When it fires (probability `sbx_prob`) each
/// variable is recombined with probability 1/2; children are clipped to the
/// box. Equal parent genes are copied unchanged without drawing a spread
/// factor.
pub fn sbx_crossover<R: Real>(
    p1: &[R],
    p2: &[R],
    cfg: &VariationConfig<R>,
    rng: &mut RandomStream,
) -> Result<(Vec<R>, Vec<R>)> {
    cfg.check_in_bounds(p1, "parent 1")?;
    cfg.check_in_bounds(p2, "parent 2")?;
    let mut c1 = p1.to_vec();
    let mut c2 = p2.to_vec();
    if R::lit(rng.uniform()) >= cfg.sbx_prob {
        return Ok((c1, c2));
    }
    let half = R::lit(0.5);
    for i in 0..p1.len() {
        if R::lit(rng.uniform()) >= half {
            continue;
        }
        let (a, b) = (p1[i], p2[i]);
        if a == b {
            continue;
        }
        let beta = spread_factor(R::lit(rng.uniform()), cfg.sbx_eta);
        c1[i] = clip(
            half * ((R::one() + beta) * a + (R::one() - beta) * b),
            cfg.bounds[i],
        );
        c2[i] = clip(
            half * ((R::one() - beta) * a + (R::one() + beta) * b),
            cfg.bounds[i],
        );
    }
    Ok((c1, c2))
}

/// Bounded polynomial mutation; each variable mutates with probability
/// `mut_prob`.
pub fn polynomial_mutation<R: Real>(
    x: &[R],
    cfg: &VariationConfig<R>,
    rng: &mut RandomStream,
) -> Result<Vec<R>> {
    cfg.check_in_bounds(x, "input")?;
    let one = R::one();
    let two = R::lit(2.0);
    let half = R::lit(0.5);
    let power = one / (cfg.mut_eta + one);
    let mut y = x.to_vec();
    for (v, &(lo, hi)) in y.iter_mut().zip(&cfg.bounds) {
        if R::lit(rng.uniform()) >= cfg.mut_prob {
            continue;
        }
        let width = hi - lo;
        let below = (*v - lo) / width;
        let above = (hi - *v) / width;
        let u = R::lit(rng.uniform());
        let delta = if u < half {
            let base = two * u + (one - two * u) * (one - below).powf(cfg.mut_eta + one);
            base.powf(power) - one
        } else {
            let base = two * (one - u) + two * (u - half) * (one - above).powf(cfg.mut_eta + one);
            one - base.powf(power)
        };
        *v = clip(*v + delta * width, (lo, hi));
    }
    Ok(y)
}

/// Binary tournament with replacement: lower rank wins, then larger
/// crowding distance, then the first contestant drawn.
pub fn binary_tournament<T: Scalar>(
    pop: &[Individual<T>],
    rng: &mut RandomStream,
) -> Result<usize> {
    if pop.is_empty() {
        return Err(Error::EmptyInput);
    }
    let a = rng.index(pop.len());
    let b = rng.index(pop.len());
    Ok(if prefer_second(&pop[a], &pop[b])? {
        b
    } else {
        a
    })
}

fn prefer_second<T: Scalar>(a: &Individual<T>, b: &Individual<T>) -> Result<bool> {
    let fitness = |ind: &Individual<T>| match (ind.rank, ind.crowding) {
        (Some(r), Some(c)) => Ok((r, c)),
        _ => Err(Error::State(
            "tournament contestant has no fitness assigned".into(),
        )),
    };
    let (ra, ca) = fitness(a)?;
    let (rb, cb) = fitness(b)?;
    Ok(rb < ra || (rb == ra && cb.total_cmp(&ca).is_gt()))
}
