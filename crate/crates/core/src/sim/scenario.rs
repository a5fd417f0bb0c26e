//! End-to-end Monte Carlo: keystream → encode → link noise → Bob's keyed
//! decision, with Eve's square-root-measurement attack on the same symbols.
//!
//! Trials are split into fixed chunks of [`CHUNK_TRIALS`]. Chunk `c` draws
//! from a ChaCha8 stream selected by `c` under the master seed, and chunk
//! counts are reduced in chunk order, so results do not depend on how chunks
//! are scheduled across threads.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::cipher::{
    alice_encode, bit_from_level, eve_bit_mixtures, next_symbol_map, BasisAssignment,
    ConstellationSpec, FrameParams,
};
use crate::coding::{analytic_block_error, decode_block, encode_block, CodeId, Level, Pattern};
use crate::detection::{guess_baseline, helstrom_mixed_pair, srm_error, srm_probabilities};
use crate::error::Result;
use crate::link::{basis_error_rates, on_off_decision, OnOffDecision};

use super::config::{ChannelModel, ScenarioConfig};

pub const CHUNK_TRIALS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[default]
    Parallel,
    Sequential,
}

/// Binomial estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub errors: u64,
    pub trials: u64,
}

impl Estimate {
    pub fn rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.errors as f64 / self.trials as f64
        }
    }

    pub fn standard_error(&self) -> f64 {
        let p = self.rate();
        if self.trials == 0 {
            0.0
        } else {
            (p * (1.0 - p) / self.trials as f64).sqrt()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialReport {
    pub label: String,
    pub trials: u64,
    /// Mean direct-detection symbol error over the bases.
    pub bob_ber_analytic: f64,
    /// Bob's raw symbol decisions (before decoding when coding is on).
    pub bob_ber_montecarlo: Estimate,
    /// Helstrom bound on Eve's bit hypotheses.
    pub eve_bit_error_analytic: f64,
    /// SRM-Eve's per-bit guesses.
    pub eve_bit_error_montecarlo: Estimate,
    pub eve_state_error_srm: f64,
    pub guess_baseline: f64,
    pub block_error_analytic: Option<f64>,
    pub block_error_montecarlo: Option<Estimate>,
}

impl TrialReport {
    /// Bob's final bit error: decoded block error with coding, raw otherwise.
    pub fn bob_final_analytic(&self) -> f64 {
        self.block_error_analytic.unwrap_or(self.bob_ber_analytic)
    }

    pub fn to_report_string(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        let f = |v: f64| format!("{v:.15e}");
        kv("label", self.label.clone());
        kv("trials", self.trials.to_string());
        kv("bob_ber_analytic", f(self.bob_ber_analytic));
        kv("bob_ber_montecarlo", f(self.bob_ber_montecarlo.rate()));
        kv("bob_ber_montecarlo_se", f(self.bob_ber_montecarlo.standard_error()));
        kv("bob_symbol_errors", self.bob_ber_montecarlo.errors.to_string());
        kv("bob_symbols", self.bob_ber_montecarlo.trials.to_string());
        kv("eve_bit_error_analytic", f(self.eve_bit_error_analytic));
        kv("eve_bit_error_montecarlo", f(self.eve_bit_error_montecarlo.rate()));
        kv("eve_bit_error_montecarlo_se", f(self.eve_bit_error_montecarlo.standard_error()));
        kv("eve_bit_errors", self.eve_bit_error_montecarlo.errors.to_string());
        kv("eve_state_error_srm", f(self.eve_state_error_srm));
        kv("guess_baseline", f(self.guess_baseline));
        if let (Some(a), Some(m)) = (self.block_error_analytic, self.block_error_montecarlo) {
            kv("block_error_analytic", f(a));
            kv("block_error_montecarlo", f(m.rate()));
            kv("block_error_montecarlo_se", f(m.standard_error()));
            kv("block_errors", m.errors.to_string());
        }
        s
    }
}

pub fn run_scenario(config: &ScenarioConfig) -> Result<TrialReport> {
    run_scenario_with(config, Execution::default())
}

/// Per-trial key material, generated sequentially from the running key.
#[derive(Debug, Clone, Copy)]
struct Frame {
    params: FrameParams,
    code: Option<CodeId>,
}

#[derive(Debug, Clone, Copy, Default)]
struct ChunkCounts {
    bob_symbol_errors: u64,
    bob_symbols: u64,
    eve_bit_errors: u64,
    block_errors: u64,
}

impl std::ops::AddAssign for ChunkCounts {
    fn add_assign(&mut self, o: Self) {
        self.bob_symbol_errors += o.bob_symbol_errors;
        self.bob_symbols += o.bob_symbols;
        self.eve_bit_errors += o.eve_bit_errors;
        self.block_errors += o.block_errors;
    }
}

/// Everything a chunk needs, shared read-only across workers.
struct Pipeline<'a> {
    spec: &'a ConstellationSpec,
    frames: &'a [Frame],
    master_seed: u64,
    /// Per-basis on/off decision model; `None` for a noiseless channel.
    decisions: Option<Vec<OnOffDecision>>,
    /// Cumulative SRM outcome distribution per transmitted level (0-based).
    eve_cdf: Vec<Vec<f64>>,
}

impl Pipeline<'_> {
    fn bob_sees_high(&self, rng: &mut ChaCha8Rng, basis: usize, high: bool) -> bool {
        match &self.decisions {
            None => high,
            Some(d) => {
                let d = &d[basis];
                let (mean, sigma) = if high { (d.mean_on, d.sigma_on) } else { (d.mean_off, d.sigma_off) };
                let z: f64 = StandardNormal.sample(rng);
                mean + sigma * z > d.threshold
            }
        }
    }

    /// Eve's SRM outcome (0-based level) for a transmitted 1-based level.
    fn eve_outcome(&self, rng: &mut ChaCha8Rng, level: usize) -> usize {
        let cdf = &self.eve_cdf[level - 1];
        let u: f64 = rng.random::<f64>() * cdf[cdf.len() - 1];
        cdf.partition_point(|&c| c <= u).min(cdf.len() - 1)
    }

    fn run_chunk(&self, chunk: usize) -> ChunkCounts {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(chunk as u64);
        let m = self.spec.bases();
        let start = chunk * CHUNK_TRIALS;
        let end = (start + CHUNK_TRIALS).min(self.frames.len());
        let mut counts = ChunkCounts::default();
        for frame in &self.frames[start..end] {
            let FrameParams { basis, polarity } = frame.params;
            let bit: bool = rng.random_bool(0.5);
            let eve_high_votes = match frame.code {
                None => {
                    let sym = alice_encode(bit, frame.params, self.spec).expect("basis in range");
                    let high = sym.level > m;
                    let seen = self.bob_sees_high(&mut rng, basis, high);
                    counts.bob_symbols += 1;
                    counts.bob_symbol_errors += (seen != high) as u64;
                    let k = self.eve_outcome(&mut rng, sym.level);
                    // Eve reads the level through the public map with polarity 0
                    let eve_bit = bit_from_level(k >= m, false);
                    counts.eve_bit_errors += (eve_bit != bit) as u64;
                    continue;
                }
                Some(code) => {
                    let sent: Pattern = encode_block(bit, code, polarity);
                    let (low, high_level) = self.spec.basis_levels(basis);
                    let mut received = [Level::Low; 3];
                    let mut votes = 0;
                    for (slot, level) in received.iter_mut().zip(sent) {
                        let seen = self.bob_sees_high(&mut rng, basis, level.is_high());
                        counts.bob_symbols += 1;
                        counts.bob_symbol_errors += (seen != level.is_high()) as u64;
                        *slot = Level::from_high(seen);
                        let tx = if level.is_high() { high_level } else { low };
                        votes += (self.eve_outcome(&mut rng, tx) >= m) as u32;
                    }
                    counts.block_errors += (decode_block(&received, code, polarity) != bit) as u64;
                    votes
                }
            };
            // coded symbols: Eve takes the majority of her three level reads
            let eve_bit = bit_from_level(eve_high_votes >= 2, false);
            counts.eve_bit_errors += (eve_bit != bit) as u64;
        }
        counts
    }
}

pub fn run_scenario_with(config: &ScenarioConfig, execution: Execution) -> Result<TrialReport> {
    config.validate()?;
    let spec = config.constellation_spec()?;
    let assignment = BasisAssignment { mode: config.assignment };

    // analytic side
    let (bob_ber_analytic, block_error_analytic, decisions) = match config.channel {
        ChannelModel::Noiseless => (0.0, config.coding.then_some(0.0), None),
        ChannelModel::Link => {
            let rates = basis_error_rates(&config.link, &spec)?;
            let n = rates.len() as f64;
            let block = if config.coding {
                let sum: f64 = rates.iter().map(|&p| analytic_block_error(p)).sum::<Result<f64>>()?;
                Some(sum / n)
            } else {
                None
            };
            let decisions = (0..spec.bases())
                .map(|j| {
                    let (lo, hi) = spec.basis_levels(j);
                    let rate = |i| config.link.level_rate(spec.decision_point(j, i));
                    on_off_decision(&config.link, rate(hi), rate(lo))
                })
                .collect::<Result<Vec<_>>>()?;
            (rates.iter().sum::<f64>() / n, block, Some(decisions))
        }
    };
    let eve_bit_error_analytic =
        helstrom_mixed_pair(&eve_bit_mixtures(&spec, assignment)?)?.error_probability;
    let ensemble = spec.uniform_ensemble();
    let eve_state_error_srm = srm_error(&ensemble)?.error_probability;
    let probs = srm_probabilities(&ensemble)?;
    let n_levels = spec.levels().len();
    let eve_cdf = (0..n_levels)
        .map(|l| {
            let mut acc = 0.0;
            (0..n_levels)
                .map(|k| {
                    acc += probs[(k, l)].re;
                    acc
                })
                .collect()
        })
        .collect();

    // key material, drawn sequentially from the running key
    let mut gen = config.generator.build(&config.seed_key)?;
    let frames: Vec<Frame> = (0..config.trials)
        .map(|_| {
            let params = next_symbol_map(&mut gen, spec.bases(), assignment);
            let code = config.coding.then(|| CodeId::select(&mut gen));
            Frame { params, code }
        })
        .collect();

    let pipeline = Pipeline {
        spec: &spec,
        frames: &frames,
        master_seed: config.master_rng_seed,
        decisions,
        eve_cdf,
    };
    let chunks = config.trials.div_ceil(CHUNK_TRIALS);
    let per_chunk: Vec<ChunkCounts> = match execution {
        Execution::Sequential => (0..chunks).map(|c| pipeline.run_chunk(c)).collect(),
        Execution::Parallel => parallel_chunks(&pipeline, chunks),
    };
    let mut total = ChunkCounts::default();
    for c in per_chunk {
        total += c;
    }

    let trials = config.trials as u64;
    Ok(TrialReport {
        label: config.label.clone(),
        trials,
        bob_ber_analytic,
        bob_ber_montecarlo: Estimate { errors: total.bob_symbol_errors, trials: total.bob_symbols },
        eve_bit_error_analytic,
        eve_bit_error_montecarlo: Estimate { errors: total.eve_bit_errors, trials },
        eve_state_error_srm,
        guess_baseline: guess_baseline(n_levels),
        block_error_analytic,
        block_error_montecarlo: config
            .coding
            .then_some(Estimate { errors: total.block_errors, trials }),
    })
}

#[cfg(feature = "parallel")]
fn parallel_chunks(pipeline: &Pipeline<'_>, chunks: usize) -> Vec<ChunkCounts> {
    use rayon::prelude::*;
    (0..chunks).into_par_iter().map(|c| pipeline.run_chunk(c)).collect()
}

#[cfg(not(feature = "parallel"))]
fn parallel_chunks(pipeline: &Pipeline<'_>, chunks: usize) -> Vec<ChunkCounts> {
    (0..chunks).map(|c| pipeline.run_chunk(c)).collect()
}
