//! Entropy functionals and concentration statistics. All logarithms are natural.

use serde::{Deserialize, Serialize};

use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::simplex::StateDistribution;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EntropyMeasure {
    Shannon,
    Renyi { q: f64 },
}

impl EntropyMeasure {
    /// Rényi measure of order `q`; order one is the Shannon limit.
    pub fn renyi(q: f64) -> Result<Self> {
        if !(q > 0.0) || !q.is_finite() {
            return Err(Error::param("q", format!("Rényi order must be positive, got {q}")));
        }
        Ok(if q == 1.0 {
            EntropyMeasure::Shannon
        } else {
            EntropyMeasure::Renyi { q }
        })
    }

    /// The order as a number (1 for Shannon).
    pub fn order(&self) -> f64 {
        match self {
            EntropyMeasure::Shannon => 1.0,
            EntropyMeasure::Renyi { q } => *q,
        }
    }

    pub fn entropy(&self, p: &StateDistribution) -> f64 {
        match *self {
            EntropyMeasure::Shannon => shannon_entropy(p),
            EntropyMeasure::Renyi { q } => renyi_unchecked(p, q),
        }
    }
}

/// −Σ p ln p with 0·ln 0 = 0.
pub fn shannon_entropy(p: &StateDistribution) -> f64 {
    let h: f64 = p
        .probs()
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.ln())
        .sum();
    h.clamp(0.0, max_entropy(p))
}

/// (1/(1−q))·ln Σ p^q, delegating to Shannon at q = 1.
pub fn renyi_entropy(p: &StateDistribution, q: f64) -> Result<f64> {
    Ok(EntropyMeasure::renyi(q)?.entropy(p))
}

fn renyi_unchecked(p: &StateDistribution, q: f64) -> f64 {
    let s: f64 = p
        .probs()
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x.powf(q))
        .sum();
    (s.ln() / (1.0 - q)).clamp(0.0, max_entropy(p))
}

fn max_entropy(p: &StateDistribution) -> f64 {
    (p.len() as f64).ln()
}

/// Entropy divided by ln N.
pub fn normalized_entropy(p: &StateDistribution, measure: EntropyMeasure) -> f64 {
    measure.entropy(p) / max_entropy(p)
}

pub fn normalized_shannon(p: &StateDistribution) -> f64 {
    normalized_entropy(p, EntropyMeasure::Shannon)
}

/// Order-1 Hill number, exp(H).
pub fn effective_dimension(p: &StateDistribution) -> f64 {
    shannon_entropy(p).exp()
}

/// Order-2 Hill number, 1/Σp².
pub fn effective_dimension_order2(p: &StateDistribution) -> f64 {
    1.0 / p.probs().iter().map(|x| x * x).sum::<f64>()
}

pub fn dominant_share(p: &StateDistribution) -> f64 {
    p.probs().iter().copied().fold(0.0, f64::max)
}

/// Mass of the `k` most probable states.
pub fn top_k_mass(p: &StateDistribution, k: usize) -> Result<f64> {
    if k == 0 || k > p.len() {
        return Err(Error::param("k", format!("must be in 1..={}, got {k}", p.len())));
    }
    let mut sorted = p.probs().to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    Ok(sorted[..k].iter().sum())
}

/// Map each step to the universality time axis t·β₀/α·100, paired with
/// normalized Shannon entropy. β₀ is the schedule's base value.
pub fn rescale_time(traj: &Trajectory) -> Result<Vec<(f64, f64)>> {
    let alpha = traj.params.alpha;
    if !(alpha > 0.0) {
        return Err(Error::param("alpha", "time rescaling needs alpha > 0"));
    }
    let scale = traj.params.beta / alpha * 100.0;
    Ok(traj
        .steps
        .iter()
        .map(|s| (s.t as f64 * scale, s.entropy_norm))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(v: &[f64]) -> StateDistribution {
        StateDistribution::from_probs(v.to_vec()).unwrap()
    }

    const MIXED: [f64; 3] = [0.5, 0.25, 0.25];

    #[test]
    fn shannon_examples() {
        let u4 = StateDistribution::uniform(4).unwrap();
        assert!((shannon_entropy(&u4) - 4f64.ln()).abs() < 1e-15);
        assert_eq!(shannon_entropy(&StateDistribution::delta(7, 2).unwrap()), 0.0);
        // 1.5·ln 2 = 1.0397207708399179
        assert!((shannon_entropy(&d(&MIXED)) - 1.039_720_770_839_917_9).abs() < 1e-15);
    }

    #[test]
    fn renyi_examples() {
        let u = StateDistribution::uniform(10).unwrap();
        assert!((renyi_entropy(&u, 2.0).unwrap() - 10f64.ln()).abs() < 1e-14);
        let p = d(&MIXED);
        assert_eq!(renyi_entropy(&p, 1.0).unwrap(), shannon_entropy(&p));
        // −ln 0.375 = 0.9808292530117262
        assert!((renyi_entropy(&p, 2.0).unwrap() - 0.980_829_253_011_726_2).abs() < 1e-15);
        assert!(renyi_entropy(&p, 0.0).is_err());
        assert!(renyi_entropy(&p, -1.0).is_err());
    }

    #[test]
    fn normalized_examples() {
        for n in [2, 7, 100] {
            let u = StateDistribution::uniform(n).unwrap();
            assert!((normalized_shannon(&u) - 1.0).abs() < 1e-14);
            assert_eq!(normalized_shannon(&StateDistribution::delta(n, 1).unwrap()), 0.0);
        }
        // 1.0397207708399179 / ln 3
        assert!((normalized_shannon(&d(&MIXED)) - 0.946_394_630_357_186).abs() < 1e-14);
    }

    #[test]
    fn concentration_examples() {
        let u50 = StateDistribution::uniform(50).unwrap();
        assert!((effective_dimension(&u50) - 50.0).abs() < 1e-12);
        assert_eq!(effective_dimension(&StateDistribution::delta(50, 0).unwrap()), 1.0);
        // exp(1.5 ln 2) = 2^1.5
        assert!((effective_dimension(&d(&MIXED)) - 2f64.powf(1.5)).abs() < 1e-14);

        assert_eq!(dominant_share(&StateDistribution::uniform(5).unwrap()), 0.2);
        assert_eq!(dominant_share(&StateDistribution::delta(5, 1).unwrap()), 1.0);
        assert_eq!(dominant_share(&d(&MIXED)), 0.5);

        assert!((top_k_mass(&StateDistribution::uniform(10).unwrap(), 5).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(top_k_mass(&StateDistribution::delta(10, 0).unwrap(), 5).unwrap(), 1.0);
        assert_eq!(top_k_mass(&d(&MIXED), 2).unwrap(), 0.75);
        assert!(top_k_mass(&d(&MIXED), 0).is_err());
        assert!(top_k_mass(&d(&MIXED), 4).is_err());
    }

    fn arb_dist(n: usize) -> impl Strategy<Value = StateDistribution> {
        prop::collection::vec(1e-6f64..1.0, n)
            .prop_map(|v| StateDistribution::renormalize(v).unwrap())
    }

    /// Transfer mass `t` from a poorer state to a richer one: the output majorizes the input.
    fn concentrate(p: &StateDistribution, i: usize, j: usize, frac: f64) -> StateDistribution {
        let mut v = p.probs().to_vec();
        let (rich, poor) = if v[i] >= v[j] { (i, j) } else { (j, i) };
        let t = v[poor] * frac;
        v[rich] += t;
        v[poor] -= t;
        StateDistribution::renormalize(v).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn schur_concave_under_concentration(
            p in arb_dist(5), i in 0usize..5, j in 0usize..5, frac in 0.0f64..1.0,
        ) {
            prop_assume!(i != j);
            let r = concentrate(&p, i, j, frac);
            for m in [EntropyMeasure::Shannon, EntropyMeasure::Renyi { q: 0.5 }, EntropyMeasure::Renyi { q: 2.0 }] {
                prop_assert!(m.entropy(&r) <= m.entropy(&p) + 1e-12);
            }
        }

        #[test]
        fn renyi_non_increasing_in_order(p in arb_dist(6)) {
            let h05 = renyi_entropy(&p, 0.5).unwrap();
            let h1 = renyi_entropy(&p, 1.0).unwrap();
            let h2 = renyi_entropy(&p, 2.0).unwrap();
            prop_assert!(h05 + 1e-12 >= h1);
            prop_assert!(h1 + 1e-12 >= h2);
        }

        #[test]
        fn hill_and_share_identities(p in arb_dist(8)) {
            prop_assert_eq!(effective_dimension(&p), shannon_entropy(&p).exp());
            prop_assert_eq!(dominant_share(&p), top_k_mass(&p, 1).unwrap());
            let e = effective_dimension(&p);
            prop_assert!((1.0..=8.0 + 1e-12).contains(&e));
        }
    }
}
