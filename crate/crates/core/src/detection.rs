//! Quantum detection bounds: binary Helstrom (pure and mixed hypotheses), the
//! square-root measurement for `N`-ary pure ensembles, the binary minimax
//! game, and the guessing baseline.

use num_complex::Complex64;

use crate::coherent::{self, inner_product, MultiModeState, StateEnsemble};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetectionMethod {
    HelstromPure,
    HelstromMixed,
    Srm,
    Minimax,
    Guess,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionReport {
    pub error_probability: f64,
    pub method: DetectionMethod,
    pub per_state_correct: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemMode {
    PureEnsemble,
    /// Index sets of the ensemble forming hypothesis 1 and hypothesis 0.
    TwoMixtures { hypothesis_one: Vec<usize>, hypothesis_zero: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscriminationProblem {
    ensemble: StateEnsemble,
    mode: ProblemMode,
}

impl DiscriminationProblem {
    pub fn pure(ensemble: StateEnsemble) -> Self {
        DiscriminationProblem { ensemble, mode: ProblemMode::PureEnsemble }
    }

    pub fn two_mixtures(
        ensemble: StateEnsemble,
        hypothesis_one: Vec<usize>,
        hypothesis_zero: Vec<usize>,
    ) -> Result<Self> {
        let n = ensemble.len();
        let mut seen = vec![false; n];
        for &i in hypothesis_one.iter().chain(&hypothesis_zero) {
            if i >= n {
                return Err(Error::param("partition", format!("index {i} out of range")));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::param("partition", format!("index {i} listed twice")));
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::param("partition", "every state must belong to a hypothesis"));
        }
        Ok(DiscriminationProblem {
            ensemble,
            mode: ProblemMode::TwoMixtures { hypothesis_one, hypothesis_zero },
        })
    }

    pub fn ensemble(&self) -> &StateEnsemble {
        &self.ensemble
    }

    pub fn mode(&self) -> &ProblemMode {
        &self.mode
    }

    /// Total prior weight of each hypothesis `(p1, p0)`.
    pub fn hypothesis_priors(&self) -> Option<(f64, f64)> {
        match &self.mode {
            ProblemMode::PureEnsemble => None,
            ProblemMode::TwoMixtures { hypothesis_one, hypothesis_zero } => {
                let p = self.ensemble.priors();
                Some((
                    hypothesis_one.iter().map(|&i| p[i]).sum(),
                    hypothesis_zero.iter().map(|&i| p[i]).sum(),
                ))
            }
        }
    }
}

/// Minimum error for two pure states with `|⟨ψ0|ψ1⟩|² = overlap_sq` and prior
/// `p1`: `½(1 - √(1 - 4 p1 (1-p1) overlap_sq))`.
pub fn helstrom_pure_pair(overlap_sq: f64, p1: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&overlap_sq) {
        return Err(Error::param("overlap_sq", format!("{overlap_sq} outside [0, 1]")));
    }
    if !(0.0..=1.0).contains(&p1) {
        return Err(Error::param("p1", format!("{p1} outside [0, 1]")));
    }
    let d = 4.0 * p1 * (1.0 - p1) * overlap_sq;
    // rationalized to keep precision when d is tiny
    Ok(d / (2.0 * (1.0 + (1.0 - d).sqrt())))
}

/// Helstrom bound `½(1 - ‖p1ρ1 - p0ρ0‖₁)` for two mixtures of coherent kets.
///
/// Kets that appear in both hypotheses are merged into one embedding column,
/// so hypotheses with identical weighted member sets cancel exactly.
pub fn helstrom_mixed_pair(problem: &DiscriminationProblem) -> Result<DetectionReport> {
    let ProblemMode::TwoMixtures { hypothesis_one, hypothesis_zero } = problem.mode() else {
        return Err(Error::param("problem", "helstrom_mixed_pair needs two mixtures"));
    };
    if hypothesis_one.is_empty() || hypothesis_zero.is_empty() {
        return Err(Error::param("partition", "both hypotheses must be nonempty"));
    }
    let states = problem.ensemble().states();
    let priors = problem.ensemble().priors();

    let mut distinct: Vec<MultiModeState> = Vec::new();
    let mut weight: Vec<f64> = Vec::new();
    let mut add = |i: usize, sign: f64| {
        let k = match distinct.iter().position(|s| *s == states[i]) {
            Some(k) => k,
            None => {
                distinct.push(states[i].clone());
                weight.push(0.0);
                distinct.len() - 1
            }
        };
        (k, sign * priors[i])
    };
    let mut terms: Vec<(usize, f64)> = Vec::new();
    for &i in hypothesis_one {
        terms.push(add(i, 1.0));
    }
    for &i in hypothesis_zero {
        terms.push(add(i, -1.0));
    }
    for (k, w) in terms {
        weight[k] += w;
    }

    let error_probability = if weight.iter().all(|&w| w == 0.0) {
        0.5
    } else {
        let v = coherent::embed_states(&distinct)?;
        let n = distinct.len();
        let mut delta = CMatrix::zeros(n, n);
        for (k, &w) in weight.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let col = v.column(k);
            delta += (col * col.adjoint()) * Complex64::new(w, 0.0);
        }
        (0.5 * (1.0 - linalg::trace_norm(&delta))).clamp(0.0, 0.5)
    };
    Ok(DetectionReport {
        error_probability,
        method: DetectionMethod::HelstromMixed,
        per_state_correct: None,
    })
}

/// SRM outcome probabilities: entry `(k, l)` is `P(outcome k | state l)`.
pub fn srm_probabilities(ensemble: &StateEnsemble) -> Result<CMatrix> {
    let root = coherent::gram_matrix(ensemble).sqrt()?;
    Ok(root.map(|z| Complex64::new(z.norm_sqr(), 0.0)))
}

/// Error of the square-root measurement on a uniformly weighted ensemble.
pub fn srm_error(ensemble: &StateEnsemble) -> Result<DetectionReport> {
    if !ensemble.is_uniform() {
        return Err(Error::param("priors", "square-root measurement assumes uniform priors"));
    }
    let root = coherent::gram_matrix(ensemble).sqrt()?;
    let per_state: Vec<f64> =
        (0..root.nrows()).map(|i| root[(i, i)].norm_sqr().min(1.0)).collect();
    let n = per_state.len() as f64;
    let correct = per_state.iter().sum::<f64>() / n;
    Ok(DetectionReport {
        error_probability: (1.0 - correct).clamp(0.0, guess_baseline(per_state.len())),
        method: DetectionMethod::Srm,
        per_state_correct: Some(per_state),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimaxValue {
    pub worst_prior: f64,
    pub value: f64,
}

/// Binary pure-state minimax: the Helstrom error is maximized at the
/// equalizing prior ½.
pub fn minimax_pair(psi0: &MultiModeState, psi1: &MultiModeState) -> Result<MinimaxValue> {
    let overlap_sq = inner_product(psi0, psi1)?.norm_sqr().min(1.0);
    Ok(MinimaxValue { worst_prior: 0.5, value: helstrom_pure_pair(overlap_sq, 0.5)? })
}

/// Error of guessing uniformly among `n` hypotheses.
pub fn guess_baseline(n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    (n - 1) as f64 / n as f64
}

/// Binary Helstrom error of the most-overlapping pair in an ensemble, with
/// the pair's indices.
pub fn closest_pair_error(ensemble: &StateEnsemble) -> Result<(usize, usize, f64)> {
    let states = ensemble.states();
    if states.len() < 2 {
        return Err(Error::param("ensemble", "need at least two states"));
    }
    let mut best = (0, 1, -1.0);
    for i in 0..states.len() {
        for j in (i + 1)..states.len() {
            let o = inner_product(&states[i], &states[j])?.norm_sqr();
            if o > best.2 {
                best = (i, j, o);
            }
        }
    }
    Ok((best.0, best.1, helstrom_pure_pair(best.2.min(1.0), 0.5)?))
}
