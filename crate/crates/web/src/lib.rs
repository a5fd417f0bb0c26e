//! WebAssembly bindings behind `www/index.html`. Each export returns one
//! curve as a flat `Float64Array`.

use wasm_bindgen::prelude::*;
use y00::cipher::{eve_bit_mixtures, AssignmentMode, BasisAssignment, ConstellationSpec};
use y00::coherent::{entangled_fraction, lossy_shared_state};
use y00::detection::{helstrom_mixed_pair, srm_error};

fn js(e: y00::Error) -> JsValue {
    JsValue::from_str(&e.to_string())
}

/// Eve's SRM state error on the `2M` ladder for `M = 1..=max_bases`.
pub fn srm_curve(alpha_max: f64, max_bases: usize) -> y00::Result<Vec<f64>> {
    (1..=max_bases)
        .map(|m| {
            let spec = ConstellationSpec::intensity_ladder(m, alpha_max)?;
            Ok(srm_error(&spec.uniform_ensemble())?.error_probability)
        })
        .collect()
}

/// Eve's bit error under non-overlap keying at each `α_max`.
pub fn non_overlap_curve(bases: usize, alpha_max: &[f64]) -> y00::Result<Vec<f64>> {
    let mode = BasisAssignment { mode: AssignmentMode::NonOverlap };
    alpha_max
        .iter()
        .map(|&a| {
            let spec = ConstellationSpec::intensity_ladder(bases, a)?;
            Ok(helstrom_mixed_pair(&eve_bit_mixtures(&spec, mode)?)?.error_probability)
        })
        .collect()
}

/// Entangled fraction after loss, `[oracle, printed]` pairs interleaved.
pub fn fraction_curve(alpha: f64, etas: &[f64]) -> y00::Result<Vec<f64>> {
    let mut out = Vec::with_capacity(2 * etas.len());
    for &eta in etas {
        let f = entangled_fraction(&lossy_shared_state(alpha, eta)?);
        out.push(f.oracle);
        out.push(f.printed);
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn srm_error_vs_bases(alpha_max: f64, max_bases: usize) -> Result<Vec<f64>, JsValue> {
    srm_curve(alpha_max, max_bases).map_err(js)
}

#[wasm_bindgen]
pub fn non_overlap_error_vs_power(bases: usize, alpha_max: &[f64]) -> Result<Vec<f64>, JsValue> {
    non_overlap_curve(bases, alpha_max).map_err(js)
}

#[wasm_bindgen]
pub fn entangled_fraction_vs_transparency(alpha: f64, etas: &[f64]) -> Result<Vec<f64>, JsValue> {
    fraction_curve(alpha, etas).map_err(js)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn srm_curve_rises_toward_guessing() {
        let c = srm_curve(3.0, 8).unwrap();
        assert_eq!(c.len(), 8);
        assert!(c.windows(2).all(|w| w[1] >= w[0] - 1e-12));
        assert!(c[7] < 1.0 - 1.0 / 16.0 + 1e-12);
    }

    #[test]
    fn non_overlap_falls_with_power() {
        let c = non_overlap_curve(4, &[0.5, 2.0, 8.0]).unwrap();
        assert!(c[0] > c[1] && c[1] > c[2]);
    }

    #[test]
    fn fraction_pairs() {
        let c = fraction_curve(1.0, &[1.0, 0.1]).unwrap();
        assert_eq!(c.len(), 4);
        assert!((c[0] - 1.0).abs() < 1e-10);
        assert!(c[2] < c[0]);
    }

    #[test]
    fn bad_input_is_an_error() {
        assert!(srm_curve(-1.0, 4).is_err());
        assert!(fraction_curve(1.0, &[1.5]).is_err());
    }
}
