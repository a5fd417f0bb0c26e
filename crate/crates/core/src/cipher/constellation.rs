//! Keyed constellation: basis selection, overlap selection keying, and the
//! per-symbol encode/decode maps.

use crate::coherent::{self, CoherentAmplitude, MultiModeState, StateEnsemble};
use crate::detection::DiscriminationProblem;
use crate::error::{Error, Result};

use super::keystream::KeystreamGenerator;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstellationKind {
    IntensityLadder,
    PhaseLadder,
}

/// `2M` levels grouped into `M` basis pairs: basis `j` pairs level `j+1` with
/// level `j+1+M` (levels are 1-based).
#[derive(Debug, Clone, PartialEq)]
pub struct ConstellationSpec {
    kind: ConstellationKind,
    bases: usize,
    alpha_max: f64,
    levels: Vec<MultiModeState>,
}

impl ConstellationSpec {
    /// Real amplitudes `α_(i) = α_max · i / (2M)`, `i = 1..2M`.
    pub fn intensity_ladder(bases: usize, alpha_max: f64) -> Result<Self> {
        validate(bases, alpha_max)?;
        let n = 2 * bases;
        let levels = (1..=n)
            .map(|i| {
                MultiModeState::single(CoherentAmplitude::real(alpha_max * i as f64 / n as f64))
            })
            .collect();
        Ok(ConstellationSpec { kind: ConstellationKind::IntensityLadder, bases, alpha_max, levels })
    }

    /// Two-mode phase states with `φ_k = 2πk/(2M)`; level `j+M` is antipodal
    /// to level `j`.
    pub fn phase_ladder(bases: usize, alpha_max: f64) -> Result<Self> {
        validate(bases, alpha_max)?;
        let levels = coherent::phase_constellation(alpha_max, bases)?.states().to_vec();
        Ok(ConstellationSpec { kind: ConstellationKind::PhaseLadder, bases, alpha_max, levels })
    }

    pub fn new(kind: ConstellationKind, bases: usize, alpha_max: f64) -> Result<Self> {
        match kind {
            ConstellationKind::IntensityLadder => Self::intensity_ladder(bases, alpha_max),
            ConstellationKind::PhaseLadder => Self::phase_ladder(bases, alpha_max),
        }
    }

    pub fn kind(&self) -> ConstellationKind {
        self.kind
    }

    pub fn bases(&self) -> usize {
        self.bases
    }

    pub fn alpha_max(&self) -> f64 {
        self.alpha_max
    }

    pub fn levels(&self) -> &[MultiModeState] {
        &self.levels
    }

    /// Level by 1-based index.
    pub fn level(&self, index: usize) -> &MultiModeState {
        &self.levels[index - 1]
    }

    /// 1-based `(low, high)` level indices of a basis.
    pub fn basis_levels(&self, basis: usize) -> (usize, usize) {
        (basis + 1, basis + 1 + self.bases)
    }

    /// Scalar decision coordinate of a level.
    ///
    /// Intensity ladder: the real amplitude. Phase ladder: projection onto the
    /// axis of the basis' high level (so low → `-|α|`, high → `+|α|`).
    pub fn decision_point(&self, basis: usize, index: usize) -> f64 {
        match self.kind {
            ConstellationKind::IntensityLadder => self.level(index).modes()[0].value().re,
            ConstellationKind::PhaseLadder => {
                let (low, _) = self.basis_levels(basis);
                if index == low {
                    -self.alpha_max
                } else {
                    self.alpha_max
                }
            }
        }
    }

    pub fn uniform_ensemble(&self) -> StateEnsemble {
        StateEnsemble::uniform(self.levels.clone()).expect("nonempty ladder")
    }
}

fn validate(bases: usize, alpha_max: f64) -> Result<()> {
    if bases == 0 {
        return Err(Error::param("M", "at least one basis required"));
    }
    if !(alpha_max.is_finite() && alpha_max > 0.0) {
        return Err(Error::param("alpha_max", format!("{alpha_max} must be positive")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssignmentMode {
    /// Each basis carries both polarity maps, chosen per symbol by the key.
    Osk,
    /// Fixed polarity: lower half of the ladder is bit 0, upper half bit 1.
    NonOverlap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisAssignment {
    pub mode: AssignmentMode,
}

impl BasisAssignment {
    pub fn osk() -> Self {
        BasisAssignment { mode: AssignmentMode::Osk }
    }

    pub fn non_overlap() -> Self {
        BasisAssignment { mode: AssignmentMode::NonOverlap }
    }
}

/// Per-symbol key material: basis index and polarity bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FrameParams {
    pub basis: usize,
    pub polarity: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymbolFrame {
    pub basis: usize,
    pub polarity: bool,
    pub data_bit: bool,
    /// 1-based level index in `1..=2M`.
    pub level: usize,
}

/// Bits consumed for a basis index: `⌈log₂ M⌉`.
pub fn basis_index_width(bases: usize) -> u32 {
    if bases <= 1 {
        0
    } else {
        usize::BITS - (bases - 1).leading_zeros()
    }
}

/// Draw the next basis (rejection-sampled to be uniform on `0..M`) and, in
/// OSK mode, one polarity bit.
pub fn next_symbol_map(
    gen: &mut KeystreamGenerator,
    bases: usize,
    assignment: BasisAssignment,
) -> FrameParams {
    let width = basis_index_width(bases);
    let basis = loop {
        let v = gen.take_uint(width) as usize;
        if v < bases {
            break v;
        }
    };
    let polarity = match assignment.mode {
        AssignmentMode::Osk => gen.next_bit(),
        AssignmentMode::NonOverlap => false,
    };
    FrameParams { basis, polarity }
}

/// Whether the high level of the basis carries this bit under the polarity.
fn uses_high_level(bit: bool, polarity: bool) -> bool {
    bit ^ polarity
}

pub fn alice_encode(bit: bool, frame: FrameParams, spec: &ConstellationSpec) -> Result<SymbolFrame> {
    if frame.basis >= spec.bases() {
        return Err(Error::param("basis", format!("{} >= M = {}", frame.basis, spec.bases())));
    }
    let (low, high) = spec.basis_levels(frame.basis);
    let level = if uses_high_level(bit, frame.polarity) { high } else { low };
    Ok(SymbolFrame { basis: frame.basis, polarity: frame.polarity, data_bit: bit, level })
}

/// Bit carried by a hard level decision.
pub fn bit_from_level(high: bool, polarity: bool) -> bool {
    high ^ polarity
}

/// Keyed demodulation: threshold at the midpoint of the basis' two decision
/// points; a statistic exactly at the midpoint decides for the low level.
pub fn bob_decode(estimate: f64, frame: FrameParams, spec: &ConstellationSpec) -> bool {
    let (low, high) = spec.basis_levels(frame.basis);
    let lo = spec.decision_point(frame.basis, low);
    let hi = spec.decision_point(frame.basis, high);
    bit_from_level(estimate > 0.5 * (lo + hi), frame.polarity)
}

/// Eve's bit hypotheses when she knows the scheme but not the running key.
///
/// Every (basis, polarity) pair is equally likely, so each member ket enters
/// its hypothesis with weight `1/(2M)` (times the bit prior ½). In OSK mode
/// both hypotheses are the uniform mixture over all `2M` levels; in
/// non-overlap mode bit 0 is the lower half-ladder and bit 1 the upper half.
pub fn eve_bit_mixtures(
    spec: &ConstellationSpec,
    assignment: BasisAssignment,
) -> Result<DiscriminationProblem> {
    let polarities: &[bool] = match assignment.mode {
        AssignmentMode::Osk => &[false, true],
        AssignmentMode::NonOverlap => &[false],
    };
    let mut states = Vec::new();
    let mut one = Vec::new();
    let mut zero = Vec::new();
    for bit in [true, false] {
        for basis in 0..spec.bases() {
            for &polarity in polarities {
                let frame = alice_encode(bit, FrameParams { basis, polarity }, spec)?;
                if bit { &mut one } else { &mut zero }.push(states.len());
                states.push(spec.level(frame.level).clone());
            }
        }
    }
    let n = states.len();
    let ensemble = StateEnsemble::uniform(states)?;
    debug_assert_eq!(n, 2 * spec.bases() * polarities.len());
    DiscriminationProblem::two_mixtures(ensemble, one, zero)
}
