//! Points on the probability simplex over a finite state space.

use rand_distr::{Distribution, Exp1};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Absolute tolerance on the unit-mass invariant.
pub const SUM_TOLERANCE: f64 = 1e-12;

/// Floor applied by update steps that could otherwise produce negative mass.
pub const PROB_FLOOR: f64 = 1e-15;

/// A probability distribution over `N >= 2` states.
///
/// Entries are non-negative and sum to one within [`SUM_TOLERANCE`]. Exact
/// zeros are allowed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StateDistribution {
    probs: Vec<f64>,
}

impl StateDistribution {
    /// Wraps an already-normalized vector, checking every invariant.
    pub fn from_probs(probs: Vec<f64>) -> Result<Self> {
        if probs.len() < 2 {
            return Err(Error::InvalidDimension { n: probs.len() });
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::DegenerateVector("entries must be finite and non-negative"));
        }
        if (compensated_sum(&probs) - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::DegenerateVector("entries do not sum to one"));
        }
        Ok(Self { probs })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(Self {
            probs: vec![1.0 / n as f64; n],
        })
    }

    /// Point mass on `index`.
    pub fn delta(n: usize, index: usize) -> Result<Self> {
        check_dim(n)?;
        if index >= n {
            return Err(Error::Index { index, n });
        }
        let mut probs = vec![0.0; n];
        probs[index] = 1.0;
        Ok(Self { probs })
    }

    /// Draw from the flat Dirichlet(1, ..., 1) as normalized unit-rate exponentials.
    pub fn sample_dirichlet_uniform(n: usize, rng: &mut RngStream) -> Result<Self> {
        check_dim(n)?;
        let raw: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
        Self::renormalize(raw)
    }

    /// Scale a non-negative vector to unit mass.
    ///
    /// A vector whose sum is already one to within rounding (4·N·ε) is
    /// returned unchanged, which makes the operation exactly idempotent.
    pub fn renormalize(raw: Vec<f64>) -> Result<Self> {
        if raw.len() < 2 {
            return Err(Error::InvalidDimension { n: raw.len() });
        }
        if raw.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::DegenerateVector("entries must be finite and non-negative"));
        }
        let total = compensated_sum(&raw);
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::DegenerateVector("vector has no positive mass"));
        }
        let slack = 4.0 * raw.len() as f64 * f64::EPSILON;
        if (total - 1.0).abs() <= slack {
            return Ok(Self { probs: raw });
        }
        let probs = raw.into_iter().map(|p| p / total).collect();
        Ok(Self { probs })
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn into_probs(self) -> Vec<f64> {
        self.probs
    }

    /// Relabel states: entry `i` of the result is entry `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.len() {
            return Err(Error::param("perm", "length must match the number of states"));
        }
        let mut seen = vec![false; perm.len()];
        for &j in perm {
            if j >= perm.len() || std::mem::replace(&mut seen[j], true) {
                return Err(Error::param("perm", "not a permutation"));
            }
        }
        Ok(Self {
            probs: perm.iter().map(|&j| self.probs[j]).collect(),
        })
    }

    /// Total variation distance, ½·Σ|p − q|.
    pub fn total_variation(&self, other: &Self) -> f64 {
        0.5 * self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::InvalidDimension { n })
    } else {
        Ok(())
    }
}

/// Neumaier-compensated summation.
pub(crate) fn compensated_sum(xs: &[f64]) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for &x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}
