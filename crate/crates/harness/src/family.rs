//! Channel families drawn by the trial generator.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use petz_core::random;
use petz_core::{Channel, Result, TracialAlgebra};
use serde::{Deserialize, Serialize};

use crate::seed::mix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `X ↦ U X U*` for a Haar unitary.
    Unitary,
    /// Conditional expectation onto the diagonal.
    Pinching,
    /// `X ↦ τ(X)·1`.
    Trace,
    /// Random Kraus channel into a single block; multi-block sources are
    /// first embedded into `M_N`.
    RandomSingleBlock,
    /// Random channel on the first block ⊕ random channel on the rest.
    DirectSum,
    /// Compression ∘ random channel on `M_N` ∘ embedding.
    Composed,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Unitary,
        Family::Pinching,
        Family::Trace,
        Family::RandomSingleBlock,
        Family::DirectSum,
        Family::Composed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Unitary => "unitary",
            Family::Pinching => "pinching",
            Family::Trace => "trace",
            Family::RandomSingleBlock => "random_single_block",
            Family::DirectSum => "direct_sum",
            Family::Composed => "composed",
        }
    }

    /// Direct sums need at least two blocks to split.
    pub fn applicable(self, algebra: &TracialAlgebra) -> bool {
        !(self == Family::DirectSum && algebra.is_single_block())
    }

    pub fn build(self, algebra: &Arc<TracialAlgebra>, seed: u64) -> Result<Channel> {
        match self {
            Family::Unitary => Channel::unitary(algebra, &random::random_unitary(algebra, seed)),
            Family::Pinching => Ok(Channel::pinching(algebra)),
            Family::Trace => Ok(Channel::trace(algebra)),
            Family::RandomSingleBlock => random_single_block(algebra, seed),
            Family::DirectSum => direct_sum(algebra, seed),
            Family::Composed => random_endomorphism(algebra, seed),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown channel family `{s}`"))
    }
}

/// Number of Kraus operators needed for a trace-preserving map `M_n → M_m`,
/// plus a random surplus.
fn kraus_count(n: usize, m: usize, seed: u64) -> usize {
    n.div_ceil(m) + (mix(seed, 11) % 3) as usize
}

fn random_single_block(algebra: &Arc<TracialAlgebra>, seed: u64) -> Result<Channel> {
    let n = algebra.total_dim();
    let m = 2 + (mix(seed, 12) % n as u64) as usize;
    let target = Arc::new(TracialAlgebra::matrix(m)?);
    if algebra.is_single_block() {
        return Channel::random(algebra, &target, kraus_count(n, m, seed), seed);
    }
    let embed = Channel::block_embedding(algebra)?;
    let raw = Channel::random(embed.target(), &target, kraus_count(n, m, seed), seed)?;
    raw.compose(&embed)
}

/// A random channel from an algebra to itself.
fn random_endomorphism(algebra: &Arc<TracialAlgebra>, seed: u64) -> Result<Channel> {
    let n = algebra.total_dim();
    if algebra.is_single_block() {
        return Channel::random(algebra, algebra, kraus_count(n, n, seed), seed);
    }
    let embed = Channel::block_embedding(algebra)?;
    let middle = Channel::random(embed.target(), embed.target(), kraus_count(n, n, seed), seed)?;
    let compress = Channel::block_compression(algebra)?;
    compress.compose(&middle.compose(&embed)?)
}

fn direct_sum(algebra: &Arc<TracialAlgebra>, seed: u64) -> Result<Channel> {
    if algebra.is_single_block() {
        return Err(petz_core::Error::InvalidAlgebra("direct sums need two blocks"));
    }
    let dims = algebra.block_dims();
    let weights = algebra.trace_weights();
    let lambda = dims[0] as f64 * weights[0];
    let first = Arc::new(TracialAlgebra::matrix(dims[0])?);
    let rest = Arc::new(TracialAlgebra::new(
        dims[1..].to_vec(),
        weights[1..].iter().map(|w| w / (1.0 - lambda)).collect(),
    )?);
    let phi1 = random_endomorphism(&first, mix(seed, 13))?;
    let phi2 = random_endomorphism(&rest, mix(seed, 14))?;
    Channel::direct_sum(&phi1, &phi2, lambda)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Vec<Arc<TracialAlgebra>> {
        vec![
            Arc::new(TracialAlgebra::matrix(3).unwrap()),
            Arc::new(TracialAlgebra::new(vec![2, 2], vec![0.125, 0.375]).unwrap()),
            Arc::new(TracialAlgebra::new(vec![1, 1, 2], vec![0.1, 0.3, 0.3]).unwrap()),
        ]
    }

    #[test]
    fn every_applicable_family_builds() {
        for alg in grid() {
            for family in Family::ALL {
                if !family.applicable(&alg) {
                    assert!(family.build(&alg, 1).is_err());
                    continue;
                }
                for seed in 0..5 {
                    let phi = family.build(&alg, seed).unwrap();
                    assert_eq!(phi.source().block_dims(), alg.block_dims(), "{family}");
                    let w: f64 = phi
                        .source()
                        .trace_weights()
                        .iter()
                        .zip(alg.trace_weights())
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max);
                    assert!(w < 1e-15, "{family}");
                }
            }
        }
    }

    #[test]
    fn names_round_trip() {
        for family in Family::ALL {
            assert_eq!(family.name().parse::<Family>().unwrap(), family);
        }
        assert!("bogus".parse::<Family>().is_err());
    }
}
