//! Coherent-state overlap algebra.
//!
//! Every mixed-state quantity in this crate is evaluated in the finite span of
//! the coherent kets involved: a set of `N` distinct kets has an `N x N` Gram
//! matrix `G`, and the columns of `G^{1/2}` are orthonormal coordinates whose
//! inner products reproduce `G` exactly. This avoids any Fock-space cutoff.
//!
//! The module also carries the two-mode quasi-Bell states and the lossy-channel
//! model for an entangled probe, together with the entangled fraction that
//! survives the loss.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, HermitianEigen};

const PRIOR_TOLERANCE: f64 = 1e-12;

/// Complex field amplitude `α`; `|α|²` is the mean photon number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentAmplitude(Complex64);

impl CoherentAmplitude {
    pub fn new(value: Complex64) -> Result<Self> {
        if value.re.is_finite() && value.im.is_finite() {
            Ok(CoherentAmplitude(value))
        } else {
            Err(Error::param("amplitude", format!("non-finite value {value}")))
        }
    }

    /// Real amplitude. Panics on NaN/Inf; use [`CoherentAmplitude::new`] for
    /// fallible construction.
    pub fn real(value: f64) -> Self {
        Self::new(Complex64::new(value, 0.0)).expect("finite amplitude")
    }

    pub fn value(self) -> Complex64 {
        self.0
    }

    pub fn photon_number(self) -> f64 {
        self.0.norm_sqr()
    }
}

impl std::ops::Neg for CoherentAmplitude {
    type Output = Self;
    fn neg(self) -> Self {
        CoherentAmplitude(-self.0)
    }
}

/// Product of single-mode coherent states.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiModeState {
    modes: Vec<CoherentAmplitude>,
}

impl MultiModeState {
    pub fn new(modes: Vec<CoherentAmplitude>) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::param("modes", "at least one mode required"));
        }
        Ok(MultiModeState { modes })
    }

    pub fn single(amplitude: CoherentAmplitude) -> Self {
        MultiModeState { modes: vec![amplitude] }
    }

    pub fn modes(&self) -> &[CoherentAmplitude] {
        &self.modes
    }

    pub fn mode_count(&self) -> usize {
        self.modes.len()
    }

    pub fn energy(&self) -> f64 {
        self.modes.iter().map(|a| a.photon_number()).sum()
    }
}

/// Pure states with prior probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct StateEnsemble {
    states: Vec<MultiModeState>,
    priors: Vec<f64>,
}

impl StateEnsemble {
    pub fn new(states: Vec<MultiModeState>, priors: Vec<f64>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::param("states", "ensemble must be nonempty"));
        }
        if states.len() != priors.len() {
            return Err(Error::Dimension { expected: states.len(), actual: priors.len() });
        }
        let modes = states[0].mode_count();
        if let Some(bad) = states.iter().find(|s| s.mode_count() != modes) {
            return Err(Error::Dimension { expected: modes, actual: bad.mode_count() });
        }
        if priors.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::param("priors", "priors must be finite and nonnegative"));
        }
        let total: f64 = priors.iter().sum();
        if (total - 1.0).abs() > PRIOR_TOLERANCE {
            return Err(Error::param("priors", format!("priors sum to {total}")));
        }
        Ok(StateEnsemble { states, priors })
    }

    pub fn uniform(states: Vec<MultiModeState>) -> Result<Self> {
        let n = states.len();
        Self::new(states, vec![1.0 / n.max(1) as f64; n])
    }

    pub fn states(&self) -> &[MultiModeState] {
        &self.states
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn is_uniform(&self) -> bool {
        let p = 1.0 / self.len() as f64;
        self.priors.iter().all(|q| (q - p).abs() <= PRIOR_TOLERANCE)
    }
}

/// Matrix of overlaps `G_ij = ⟨ψ_i|ψ_j⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    entries: CMatrix,
}

impl GramMatrix {
    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut w = HermitianEigen::new(&self.entries).eigenvalues;
        w.sort_by(f64::total_cmp);
        w
    }

    /// `G^{1/2}` with eigenvalues in `[-1e-8, 0)` clamped to zero.
    pub fn sqrt(&self) -> Result<CMatrix> {
        linalg::psd_sqrt(&self.entries)
    }
}

/// `⟨a|b⟩ = ∏_m exp(-(|a_m|² + |b_m|²)/2 + conj(a_m) b_m)`.
pub fn inner_product(a: &MultiModeState, b: &MultiModeState) -> Result<Complex64> {
    if a.mode_count() != b.mode_count() {
        return Err(Error::Dimension { expected: a.mode_count(), actual: b.mode_count() });
    }
    let exponent: Complex64 = a
        .modes
        .iter()
        .zip(&b.modes)
        .map(|(x, y)| {
            let (x, y) = (x.value(), y.value());
            -(x.norm_sqr() + y.norm_sqr()) * 0.5 + x.conj() * y
        })
        .sum();
    Ok(exponent.exp())
}

pub fn gram_of_states(states: &[MultiModeState]) -> Result<GramMatrix> {
    let n = states.len();
    let mut entries = CMatrix::zeros(n, n);
    for i in 0..n {
        entries[(i, i)] = Complex64::new(1.0, 0.0);
        for j in (i + 1)..n {
            let g = inner_product(&states[i], &states[j])?;
            entries[(i, j)] = g;
            entries[(j, i)] = g.conj();
        }
    }
    Ok(GramMatrix { entries })
}

pub fn gram_matrix(ensemble: &StateEnsemble) -> GramMatrix {
    // mode counts were checked at construction, so this cannot fail
    gram_of_states(&ensemble.states).expect("ensemble states share a mode count")
}

/// Column coordinates `V` with `V†V = G`, taken as the Hermitian root `G^{1/2}`.
pub fn orthonormal_embedding(ensemble: &StateEnsemble) -> Result<CMatrix> {
    gram_matrix(ensemble).sqrt()
}

/// Embedding of an arbitrary list of kets (no priors needed).
pub fn embed_states(states: &[MultiModeState]) -> Result<CMatrix> {
    gram_of_states(states)?.sqrt()
}

/// Eigenvalues `(λ1, λ2)` of the single-mode reduced state of a quasi-Bell
/// state whose mode bases have overlaps `κ_A` and `κ_B`.
pub fn quasi_bell_reduced_eigenvalues(kappa_a: f64, kappa_b: f64) -> Result<(f64, f64)> {
    for (name, k) in [("kappa_A", kappa_a), ("kappa_B", kappa_b)] {
        if !(0.0..=1.0).contains(&k) {
            return Err(Error::param(name, format!("{k} outside [0, 1]")));
        }
    }
    let denom = 2.0 * (1.0 - kappa_a * kappa_b);
    if denom == 0.0 {
        return Err(Error::Singular);
    }
    let l1 = (1.0 + kappa_a) * (1.0 - kappa_b) / denom;
    let l2 = (1.0 - kappa_a) * (1.0 + kappa_b) / denom;
    Ok((l1, l2))
}

/// Entropy of entanglement (bits) for a two-level reduced spectrum.
pub fn entanglement_entropy(l1: f64, l2: f64) -> f64 {
    [l1, l2].iter().filter(|&&l| l > 0.0).map(|l| -l * l.log2()).sum()
}

/// Beam-splitter loss: `|α⟩ → |√η α⟩ ⊗ |√(1-η) α⟩`.
pub fn apply_loss(
    state: CoherentAmplitude,
    eta: f64,
) -> Result<(CoherentAmplitude, CoherentAmplitude)> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::param("eta", format!("{eta} outside [0, 1]")));
    }
    let a = state.value();
    Ok((CoherentAmplitude(a * eta.sqrt()), CoherentAmplitude(a * (1.0 - eta).sqrt())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuasiBellKind {
    /// `|α⟩|-β⟩ + |-α⟩|β⟩`
    Psi1,
    /// `|α⟩|-β⟩ - |-α⟩|β⟩`
    Psi2,
    /// `|α⟩|β⟩ + |-α⟩|-β⟩`
    Psi3,
    /// `|α⟩|β⟩ - |-α⟩|-β⟩`
    Psi4,
}

impl QuasiBellKind {
    fn sign(self) -> f64 {
        match self {
            QuasiBellKind::Psi1 | QuasiBellKind::Psi3 => 1.0,
            QuasiBellKind::Psi2 | QuasiBellKind::Psi4 => -1.0,
        }
    }

    /// Whether the first branch has mode B flipped (`|α⟩|-β⟩`).
    fn anti_correlated(self) -> bool {
        matches!(self, QuasiBellKind::Psi1 | QuasiBellKind::Psi2)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuasiBellState {
    kind: QuasiBellKind,
    amplitude_a: CoherentAmplitude,
    amplitude_b: CoherentAmplitude,
    normalization: f64,
}

impl QuasiBellState {
    pub fn new(
        kind: QuasiBellKind,
        amplitude_a: CoherentAmplitude,
        amplitude_b: CoherentAmplitude,
    ) -> Result<Self> {
        let kk = mode_kappa(amplitude_a) * mode_kappa(amplitude_b);
        let norm_sq = 2.0 * (1.0 + kind.sign() * kk);
        if norm_sq <= 0.0 {
            return Err(Error::Singular);
        }
        Ok(QuasiBellState { kind, amplitude_a, amplitude_b, normalization: norm_sq.sqrt().recip() })
    }

    pub fn kind(&self) -> QuasiBellKind {
        self.kind
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn kappa_a(&self) -> f64 {
        mode_kappa(self.amplitude_a)
    }

    pub fn kappa_b(&self) -> f64 {
        mode_kappa(self.amplitude_b)
    }

    /// The two product-state branches `(coefficient, state)`.
    pub fn branches(&self) -> [(f64, MultiModeState); 2] {
        let (a, b) = (self.amplitude_a, self.amplitude_b);
        let first_b = if self.kind.anti_correlated() { -b } else { b };
        let h = self.normalization;
        [
            (h, MultiModeState { modes: vec![a, first_b] }),
            (h * self.kind.sign(), MultiModeState { modes: vec![-a, -first_b] }),
        ]
    }

    /// Coordinates in the product embedding of `{|a⟩,|-a⟩} ⊗ {|b⟩,|-b⟩}`.
    pub fn coordinates(&self) -> Result<CVector> {
        let basis = ProductBasis::new(self.amplitude_a, self.amplitude_b)?;
        let mut out = CVector::zeros(4);
        for (c, state) in self.branches() {
            out += basis.coordinates(&state)? * Complex64::new(c, 0.0);
        }
        Ok(out)
    }
}

/// `⟨a|-a⟩ = exp(-2|a|²)`, real for every complex `a`.
pub fn mode_kappa(a: CoherentAmplitude) -> f64 {
    (-2.0 * a.photon_number()).exp()
}

/// Orthonormalized basis of the span of `{|±a⟩_A} ⊗ {|±b⟩_B}`.
struct ProductBasis {
    amps: [CoherentAmplitude; 2],
    coords: [CMatrix; 2],
}

impl ProductBasis {
    fn new(a: CoherentAmplitude, b: CoherentAmplitude) -> Result<Self> {
        let mode = |x: CoherentAmplitude| {
            embed_states(&[MultiModeState::single(x), MultiModeState::single(-x)])
        };
        Ok(ProductBasis { amps: [a, b], coords: [mode(a)?, mode(b)?] })
    }

    fn coordinates(&self, state: &MultiModeState) -> Result<CVector> {
        if state.mode_count() != 2 {
            return Err(Error::Dimension { expected: 2, actual: state.mode_count() });
        }
        let col = |m: usize| -> Result<CVector> {
            let amp = state.modes[m].value();
            let base = self.amps[m].value();
            let tol = 1e-12 * base.norm().max(1.0);
            let idx = if (amp - base).norm() <= tol {
                0
            } else if (amp + base).norm() <= tol {
                1
            } else {
                return Err(Error::param("state", "mode amplitude outside the product basis"));
            };
            Ok(self.coords[m].column(idx).into_owned())
        };
        Ok(linalg::kron(&col(0)?, &col(1)?))
    }
}

/// Two-mode state shared by an entangling eavesdropper (mode A) and the
/// receiver (mode B) after the probe's partner crosses a lossy channel.
#[derive(Debug, Clone)]
pub struct LossySharedState {
    alpha: f64,
    eta: f64,
    kappa_a: f64,
    kappa_b: f64,
    loss_overlap: f64,
    printed_loss_factor: f64,
    density: CMatrix,
    psi2: CVector,
}

impl LossySharedState {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn kappa_a(&self) -> f64 {
        self.kappa_a
    }

    /// Overlap of the pre-amplified probe mode, `⟨α/√η|-α/√η⟩`.
    pub fn kappa_b(&self) -> f64 {
        self.kappa_b
    }

    /// `⟨β|-β⟩` for the loss-mode amplitudes `±β`, `β = √((1-η)/η) α`.
    pub fn loss_overlap(&self) -> f64 {
        self.loss_overlap
    }

    /// `exp(-4(1-η)α²)`, the loss factor entering the closed-form fraction.
    pub fn printed_loss_factor(&self) -> f64 {
        self.printed_loss_factor
    }

    /// Density matrix in the orthonormalized `{|±α⟩}⊗{|±α⟩}` basis.
    pub fn density(&self) -> &CMatrix {
        &self.density
    }

    /// Coordinates of the maximally entangled reference `|Ψ2⟩`.
    pub fn psi2(&self) -> &CVector {
        &self.psi2
    }

    pub fn trace(&self) -> f64 {
        self.density.trace().re
    }
}

/// Prepare the trick state `h(|α⟩|-α/√η⟩ - |-α⟩|α/√η⟩)`, send mode B through
/// a beam splitter of transparency `η`, and trace out the loss mode.
pub fn lossy_shared_state(alpha: f64, eta: f64) -> Result<LossySharedState> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::param("alpha", format!("{alpha} must be positive")));
    }
    if eta == 0.0 {
        return Err(Error::DegenerateChannel);
    }
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::param("eta", format!("{eta} outside (0, 1]")));
    }
    let a = CoherentAmplitude::real(alpha);
    let probe = CoherentAmplitude::real(alpha / eta.sqrt());
    let trick = QuasiBellState::new(QuasiBellKind::Psi2, a, probe)?;
    let h = trick.normalization();

    // Branch kets after the beam splitter: B keeps √η·(∓α/√η) = ∓α, L gets ∓β.
    let [(_, first), (_, second)] = trick.branches();
    let split = |s: &MultiModeState| -> Result<(MultiModeState, MultiModeState)> {
        let (kept, lost) = apply_loss(s.modes[1], eta)?;
        Ok((MultiModeState { modes: vec![s.modes[0], kept] }, MultiModeState::single(lost)))
    };
    let (x, loss_x) = split(&first)?;
    let (y, loss_y) = split(&second)?;
    // Tr_L(|l_x⟩⟨l_y|) = ⟨l_y|l_x⟩
    let l_xy = inner_product(&loss_y, &loss_x)?;

    let basis = ProductBasis::new(a, a)?;
    let vx = basis.coordinates(&x)?;
    let vy = basis.coordinates(&y)?;
    let h2 = Complex64::new(h * h, 0.0);
    let density = (&vx * vx.adjoint() + &vy * vy.adjoint()
        - (&vx * vy.adjoint()) * l_xy
        - (&vy * vx.adjoint()) * l_xy.conj())
        * h2;

    let psi2 = QuasiBellState::new(QuasiBellKind::Psi2, a, a)?.coordinates()?;
    Ok(LossySharedState {
        alpha,
        eta,
        kappa_a: trick.kappa_a(),
        kappa_b: trick.kappa_b(),
        loss_overlap: l_xy.re,
        printed_loss_factor: (-4.0 * (1.0 - eta) * alpha * alpha).exp(),
        density: linalg::hermitize(&density),
        psi2,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntangledFraction {
    /// `⟨Ψ2|ρ|Ψ2⟩` evaluated in the embedding.
    pub oracle: f64,
    /// The closed form `(1-κ²)/(1-Lκ²) + (1-L)(1-κ²)²/(1-Lκ²)`.
    pub printed: f64,
}

impl EntangledFraction {
    pub fn discrepancy(&self) -> f64 {
        (self.oracle - self.printed).abs()
    }
}

pub fn entangled_fraction(state: &LossySharedState) -> EntangledFraction {
    let oracle = linalg::expectation(&state.density, &state.psi2).clamp(0.0, 1.0);
    let k2 = state.kappa_a * state.kappa_a;
    let l = state.printed_loss_factor;
    let denom = 1.0 - l * k2;
    let printed = (1.0 - k2) / denom + (1.0 - l) * (1.0 - k2).powi(2) / denom;
    EntangledFraction { oracle, printed }
}

/// `2M` two-mode states `|e^{-iφ/2}α/√2⟩ ⊗ |e^{iφ/2}α/√2⟩`, `φ_k = 2πk/(2M)`.
pub fn phase_constellation(alpha: f64, m: usize) -> Result<StateEnsemble> {
    if m == 0 {
        return Err(Error::param("M", "at least one basis required"));
    }
    let n = 2 * m;
    let states = (0..n)
        .map(|k| phase_state(alpha, 2.0 * PI * k as f64 / n as f64))
        .collect::<Result<Vec<_>>>()?;
    StateEnsemble::uniform(states)
}

pub fn phase_state(alpha: f64, phi: f64) -> Result<MultiModeState> {
    let half = alpha / 2f64.sqrt();
    let rot = |s: f64| CoherentAmplitude::new(Complex64::from_polar(half, s * phi / 2.0));
    MultiModeState::new(vec![rot(-1.0)?, rot(1.0)?])
}
