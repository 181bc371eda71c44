use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use crate::netmodel::Network;

use super::{enumerate_equilibria, OracleError};

const RATE_TOL: f64 = 1e-9;

/// Distribution of the shock vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShockSampler {
    /// Independent uniform coordinates on `[lower_i, upper_i]`.
    ContinuousUniform { lower: Vec<f64>, upper: Vec<f64> },
    /// One of the listed shocks, each with equal probability.
    DiscreteUniform { points: Vec<Vec<f64>> },
}

impl ShockSampler {
    fn validate(&self, n: usize) -> Result<(), OracleError> {
        let bad = |msg: &str| Err(OracleError::PreconditionViolated(msg.into()));
        match self {
            ShockSampler::ContinuousUniform { lower, upper } => {
                if lower.len() != n || upper.len() != n {
                    return bad("sampler box has the wrong dimension");
                }
                if lower.iter().zip(upper).any(|(l, u)| !(l < u) || !l.is_finite() || !u.is_finite()) {
                    return bad("sampler box needs finite lower < upper");
                }
            }
            ShockSampler::DiscreteUniform { points } => {
                if points.is_empty() || points.iter().any(|p| p.len() != n) {
                    return bad("support points must be nonempty with length n");
                }
            }
        }
        Ok(())
    }

    fn draw(&self, rng: &mut Xoshiro256PlusPlus) -> Vec<f64> {
        match self {
            ShockSampler::ContinuousUniform { lower, upper } => lower
                .iter()
                .zip(upper)
                .map(|(&l, &u)| rng.random_range(l..u))
                .collect(),
            ShockSampler::DiscreteUniform { points } => {
                points[rng.random_range(0..points.len())].clone()
            }
        }
    }
}

/// Fraction of sampled shocks under which the network has more than one
/// equilibrium. Shocks come from a Xoshiro256++ stream seeded by `seed` and
/// are drawn sequentially, so results are reproducible.
pub fn multiplicity_rate(
    template: &Network,
    sampler: &ShockSampler,
    trials: usize,
    seed: u64,
) -> Result<f64, OracleError> {
    if trials == 0 {
        return Err(OracleError::PreconditionViolated("trials must be positive".into()));
    }
    sampler.validate(template.n())?;
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let shocks: Vec<Vec<f64>> = (0..trials).map(|_| sampler.draw(&mut rng)).collect();
    let mut multiple = 0usize;
    for shock in shocks {
        let net = template
            .with_shock(shock)
            .map_err(|e| OracleError::PreconditionViolated(e.to_string()))?;
        if enumerate_equilibria(&net, RATE_TOL)?.is_multiple() {
            multiple += 1;
        }
    }
    Ok(multiple as f64 / trials as f64)
}
