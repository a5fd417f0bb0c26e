//! IMDD fiber link: photocurrent noise budget across a repeater chain and the
//! on/off decision error of a direct-detection receiver.

use crate::cipher::{ConstellationKind, ConstellationSpec};
use crate::coherent::inner_product;
use crate::detection::helstrom_pure_pair;
use crate::error::{Error, Result};

/// Elementary charge (C).
pub const ELECTRON_CHARGE: f64 = 1.602176634e-19;

/// Physical link parameters in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkParams {
    /// Pre-amplifier gain `G_p ≥ 1`.
    pub gain_pre: f64,
    /// Span transparency `κ_r ∈ (0, 1]`; each repeater has gain `1/κ_r`.
    pub kappa_r: f64,
    /// Number of repeaters `N`.
    pub repeaters: u32,
    /// Transmitter photon rate per second.
    pub n_mean: f64,
    /// Spontaneous-emission factor `n_sp ≥ 1`.
    pub n_sp: f64,
    /// Electrical bandwidth `B` (Hz).
    pub bandwidth: f64,
    /// Optical filter bandwidth `δf` (Hz).
    pub filter_bandwidth: f64,
    /// Thermal-noise variance `⟨I_th²⟩` (A²).
    pub thermal_variance: f64,
}

impl Default for LinkParams {
    fn default() -> Self {
        LinkParams {
            gain_pre: 100.0,
            kappa_r: 0.5,
            repeaters: 30,
            n_mean: 1e13,
            n_sp: 1.5,
            bandwidth: 1e9,
            filter_bandwidth: 2e9,
            thermal_variance: 1e-16,
        }
    }
}

impl LinkParams {
    pub fn validate(&self) -> Result<()> {
        let check = |ok: bool, name: &'static str, v: f64| {
            if ok && v.is_finite() {
                Ok(())
            } else {
                Err(Error::param(name, format!("invalid value {v}")))
            }
        };
        check(self.gain_pre >= 1.0, "G_p", self.gain_pre)?;
        check(self.kappa_r > 0.0 && self.kappa_r <= 1.0, "kappa_r", self.kappa_r)?;
        check(self.n_mean >= 0.0, "n_mean", self.n_mean)?;
        check(self.n_sp >= 1.0, "n_sp", self.n_sp)?;
        check(self.bandwidth > 0.0, "B", self.bandwidth)?;
        check(self.filter_bandwidth >= 0.0, "delta_f", self.filter_bandwidth)?;
        check(self.thermal_variance >= 0.0, "I_th_var", self.thermal_variance)?;
        Ok(())
    }

    pub fn repeater_gain(&self) -> f64 {
        1.0 / self.kappa_r
    }

    /// `κ_r G_p N (G - 1) + (G_p - 1)`, the amplified-emission weight shared
    /// by the spontaneous-emission terms.
    pub fn emission_factor(&self) -> f64 {
        self.kappa_r * self.gain_pre * self.repeaters as f64 * (self.repeater_gain() - 1.0)
            + (self.gain_pre - 1.0)
    }

    /// Photon rate of a constellation level, `|α|² B`.
    pub fn level_rate(&self, amplitude: f64) -> f64 {
        amplitude * amplitude * self.bandwidth
    }

    /// Mean photocurrent `e G_p κ_r rate`.
    pub fn mean_current(&self, rate: f64) -> f64 {
        ELECTRON_CHARGE * self.gain_pre * self.kappa_r * rate
    }
}

/// Photocurrent variance terms (A²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseBudget {
    pub sig: f64,
    pub sp: f64,
    pub sig_sp: f64,
    pub sp_sp: f64,
    pub th: f64,
    pub total_on: f64,
}

pub fn noise_budget(params: &LinkParams, level_photon_rate: f64) -> Result<NoiseBudget> {
    params.validate()?;
    if !(level_photon_rate.is_finite() && level_photon_rate >= 0.0) {
        return Err(Error::param("level_photon_rate", format!("{level_photon_rate}")));
    }
    let e2 = ELECTRON_CHARGE * ELECTRON_CHARGE;
    let LinkParams { gain_pre: gp, kappa_r: kr, n_sp, bandwidth: b, filter_bandwidth: df, .. } =
        *params;
    let n = level_photon_rate;
    let a = params.emission_factor();

    let sig = 2.0 * e2 * gp * kr * n * b;
    let sp = 2.0 * e2 * a * n_sp * b * df;
    // G_p appears both in the prefactor and inside `a`, as in the printed form
    let sig_sp = 4.0 * e2 * gp * a * kr * n * n_sp * b;
    let sp_sp = 2.0 * e2 * a * a * n_sp * n_sp * b * df;
    let th = params.thermal_variance;
    Ok(NoiseBudget {
        sig,
        sp,
        sig_sp,
        sp_sp,
        th,
        total_on: th + sig + 2.0 * sp + sig_sp + 2.0 * sp_sp,
    })
}

/// `Φ(-q)` for the standard normal CDF `Φ`.
pub fn normal_tail(q: f64) -> f64 {
    0.5 * libm::erfc(q / std::f64::consts::SQRT_2)
}

/// On/off decision model: means, standard deviations, Q factor and the
/// equal-error threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OnOffDecision {
    pub mean_on: f64,
    pub mean_off: f64,
    pub sigma_on: f64,
    pub sigma_off: f64,
    pub q: f64,
    /// Threshold at which `P(0|1) = P(1|0) = Φ(-Q)`.
    pub threshold: f64,
}

pub fn on_off_decision(params: &LinkParams, rate_on: f64, rate_off: f64) -> Result<OnOffDecision> {
    if !(rate_on > rate_off && rate_off >= 0.0) {
        return Err(Error::param("rate_on", format!("need rate_on {rate_on} > rate_off {rate_off} >= 0")));
    }
    let on = noise_budget(params, rate_on)?;
    let off = noise_budget(params, rate_off)?;
    let mean_on = params.mean_current(rate_on);
    let mean_off = params.mean_current(rate_off);
    let sigma_on = on.total_on.sqrt();
    let sigma_off = off.total_on.sqrt();
    let spread = sigma_on + sigma_off;
    let (q, threshold) = if spread == 0.0 {
        (f64::INFINITY, 0.5 * (mean_on + mean_off))
    } else {
        ((mean_on - mean_off) / spread, (sigma_on * mean_off + sigma_off * mean_on) / spread)
    };
    Ok(OnOffDecision { mean_on, mean_off, sigma_on, sigma_off, q, threshold })
}

/// Symmetric on/off bit error `Φ(-Q)`, `Q = (I_on - I_off)/(σ_on + σ_off)`.
pub fn ber_on_off(params: &LinkParams, rate_on: f64, rate_off: f64) -> Result<f64> {
    Ok(normal_tail(on_off_decision(params, rate_on, rate_off)?.q))
}

/// Direct-detection error of every basis pair of an intensity ladder.
pub fn basis_error_rates(params: &LinkParams, spec: &ConstellationSpec) -> Result<Vec<f64>> {
    require_intensity(spec)?;
    (0..spec.bases())
        .map(|j| {
            let (lo, hi) = spec.basis_levels(j);
            let amp = |i| spec.decision_point(j, i);
            ber_on_off(params, params.level_rate(amp(hi)), params.level_rate(amp(lo)))
        })
        .collect()
}

fn require_intensity(spec: &ConstellationSpec) -> Result<()> {
    if spec.kind() != ConstellationKind::IntensityLadder {
        return Err(Error::param("constellation", "direct detection needs an intensity ladder"));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PracticalVsOptimal {
    pub practical_ber: f64,
    pub helstrom_ber: f64,
}

impl PracticalVsOptimal {
    pub fn dominance_holds(&self) -> bool {
        self.practical_ber >= self.helstrom_ber - 1e-12
    }
}

/// Direct-detection error on the basis pair (levels 1 and M+1) next to the
/// quantum-optimal error for the same pair.
pub fn bob_practical_vs_optimal(
    params: &LinkParams,
    spec: &ConstellationSpec,
) -> Result<PracticalVsOptimal> {
    require_intensity(spec)?;
    let (lo, hi) = spec.basis_levels(0);
    let a_lo = spec.decision_point(0, lo);
    let a_hi = spec.decision_point(0, hi);
    let practical_ber = ber_on_off(params, params.level_rate(a_hi), params.level_rate(a_lo))?;
    let overlap_sq = inner_product(spec.level(lo), spec.level(hi))?.norm_sqr().min(1.0);
    let out = PracticalVsOptimal { practical_ber, helstrom_ber: helstrom_pure_pair(overlap_sq, 0.5)? };
    debug_assert!(out.dominance_holds(), "{out:?}");
    Ok(out)
}
