//! Key expansion: fresh random blocks are sent through the keyed channel and
//! each delivered block becomes the next seed.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};

use super::constellation::{
    alice_encode, bob_decode, next_symbol_map, BasisAssignment, ConstellationSpec,
};
use super::keystream::{GeneratorSpec, SeedKey};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SessionChannel {
    Noiseless,
    /// Bob's decision is flipped independently with this probability.
    BitFlip(f64),
    /// Additive Gaussian noise on Bob's decision statistic.
    Gaussian { sigma: f64 },
}

#[derive(Debug, Clone)]
pub struct SessionSetup {
    pub spec: ConstellationSpec,
    pub assignment: BasisAssignment,
    pub generator: GeneratorSpec,
    pub channel: SessionChannel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord {
    pub seed: SeedKey,
    pub alice_block: Vec<bool>,
    pub bob_block: Vec<bool>,
    pub bit_errors: usize,
    /// Whether the delivered block replaced the seed for the next round.
    pub refreshed: bool,
}

impl RoundRecord {
    pub fn flagged(&self) -> bool {
        self.bit_errors > 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SessionReport {
    pub alice_key: Vec<bool>,
    pub bob_key: Vec<bool>,
    pub rounds: Vec<RoundRecord>,
}

impl SessionReport {
    pub fn mismatched_rounds(&self) -> usize {
        self.rounds.iter().filter(|r| r.flagged()).count()
    }

    pub fn keys_agree(&self) -> bool {
        self.alice_key == self.bob_key
    }
}

/// Run `rounds` key-expansion rounds with block length equal to the seed
/// length.
///
/// A round with any bit error is flagged and the seed is kept, so both sides
/// stay synchronized. A block that cannot seed the generator (for an LFSR, one
/// that folds to the zero state) is delivered but also keeps the old seed.
pub fn key_expansion_session<E: Rng, C: Rng>(
    initial_seed: &SeedKey,
    rounds: usize,
    setup: &SessionSetup,
    entropy: &mut E,
    channel_rng: &mut C,
) -> Result<SessionReport> {
    if rounds == 0 {
        return Err(Error::param("rounds", "at least one round required"));
    }
    let noise = match setup.channel {
        SessionChannel::BitFlip(p) if !(0.0..=1.0).contains(&p) => {
            return Err(Error::param("channel", format!("flip probability {p} outside [0, 1]")));
        }
        SessionChannel::Gaussian { sigma } => Some(
            Normal::new(0.0, sigma)
                .map_err(|e| Error::param("channel", format!("bad sigma {sigma}: {e}")))?,
        ),
        _ => None,
    };

    let n = initial_seed.len();
    let mut seed = initial_seed.clone();
    let mut report =
        SessionReport { alice_key: Vec::new(), bob_key: Vec::new(), rounds: Vec::new() };

    for _ in 0..rounds {
        let mut alice_gen = setup.generator.build(&seed)?;
        let mut bob_gen = setup.generator.build(&seed)?;
        let alice_block: Vec<bool> = (0..n).map(|_| entropy.random_bool(0.5)).collect();
        let mut bob_block = Vec::with_capacity(n);
        for &bit in &alice_block {
            let tx = next_symbol_map(&mut alice_gen, setup.spec.bases(), setup.assignment);
            let rx = next_symbol_map(&mut bob_gen, setup.spec.bases(), setup.assignment);
            let symbol = alice_encode(bit, tx, &setup.spec)?;
            let mut statistic = setup.spec.decision_point(tx.basis, symbol.level);
            if let Some(dist) = &noise {
                statistic += dist.sample(channel_rng);
            }
            let mut decoded = bob_decode(statistic, rx, &setup.spec);
            if let SessionChannel::BitFlip(p) = setup.channel {
                if channel_rng.random_bool(p) {
                    decoded = !decoded;
                }
            }
            bob_block.push(decoded);
        }
        let bit_errors = alice_block.iter().zip(&bob_block).filter(|(a, b)| a != b).count();
        let next_seed = SeedKey::new(alice_block.clone())?;
        let refreshed = bit_errors == 0 && setup.generator.build(&next_seed).is_ok();

        report.alice_key.extend(&alice_block);
        report.bob_key.extend(&bob_block);
        report.rounds.push(RoundRecord {
            seed: seed.clone(),
            alice_block,
            bob_block,
            bit_errors,
            refreshed,
        });
        if refreshed {
            seed = next_seed;
        }
    }
    Ok(report)
}
