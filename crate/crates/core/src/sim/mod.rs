//! Scenario runner: configs, Monte Carlo runs, parameter sweeps, the attack
//! suite and CSV output.

pub mod config;
pub mod csv;
pub mod scenario;

use std::fmt::Write as _;

use crate::coherent::{entangled_fraction, lossy_shared_state};
use crate::detection::{closest_pair_error, guess_baseline, minimax_pair, srm_error, MinimaxValue};
use crate::error::{Error, Result};

pub use self::config::{ChannelModel, ScenarioConfig, Sweep, SweepVariable};
pub use self::csv::{emit_csv, CsvSeries};
pub use self::scenario::{run_scenario, run_scenario_with, Estimate, Execution, TrialReport, CHUNK_TRIALS};

pub const SWEEP_COLUMNS: [&str; 12] = [
    "value",
    "bob_ber_analytic",
    "bob_ber_montecarlo",
    "bob_ber_montecarlo_se",
    "eve_bit_error_analytic",
    "eve_bit_error_montecarlo",
    "eve_bit_error_montecarlo_se",
    "eve_state_error_srm",
    "guess_baseline",
    "block_error_analytic",
    "block_error_montecarlo",
    "block_error_montecarlo_se",
];

/// One scenario run per sweep value, rows sorted by value. Block-error
/// columns are NaN when coding is off.
pub fn sweep(config: &ScenarioConfig, execution: Execution) -> Result<CsvSeries> {
    let Some(Sweep { variable, values }) = &config.sweep else {
        return Err(Error::config("sweep", "no sweep configured"));
    };
    if values.is_empty() {
        return Err(Error::config("sweep", "empty value list"));
    }
    let mut values = values.clone();
    values.sort_by(f64::total_cmp);
    values.dedup();

    let mut header: Vec<String> = SWEEP_COLUMNS.iter().map(|s| s.to_string()).collect();
    header[0] = variable.key().to_string();
    let mut series = CsvSeries::new(header);
    for v in values {
        let r = run_scenario_with(&config.with_sweep_value(*variable, v)?, execution)?;
        let (ba, bm, bs) = match (r.block_error_analytic, r.block_error_montecarlo) {
            (Some(a), Some(m)) => (a, m.rate(), m.standard_error()),
            _ => (f64::NAN, f64::NAN, f64::NAN),
        };
        series.push(vec![
            v,
            r.bob_ber_analytic,
            r.bob_ber_montecarlo.rate(),
            r.bob_ber_montecarlo.standard_error(),
            r.eve_bit_error_analytic,
            r.eve_bit_error_montecarlo.rate(),
            r.eve_bit_error_montecarlo.standard_error(),
            r.eve_state_error_srm,
            r.guess_baseline,
            ba,
            bm,
            bs,
        ])?;
    }
    Ok(series)
}

/// Transparencies used for the entanglement-attack table.
pub const ENTANGLE_ETAS: [f64; 9] = [1.0, 0.8, 0.6, 0.4, 0.2, 0.1, 0.01, 0.001, 0.0001];

#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementRow {
    pub eta: f64,
    pub oracle: f64,
    pub printed: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttackReport {
    /// 1-based level indices of the most-overlapping pair.
    pub worst_pair: (usize, usize),
    pub minimax: MinimaxValue,
    pub srm_error: f64,
    pub guess_baseline: f64,
    pub entangle_alpha: f64,
    pub entanglement: Vec<EntanglementRow>,
}

impl AttackReport {
    pub fn entanglement_csv(&self) -> CsvSeries {
        let mut s = CsvSeries::new(vec!["eta".into(), "fraction_oracle".into(), "fraction_printed".into()]);
        for r in &self.entanglement {
            s.rows.push(vec![r.eta, r.oracle, r.printed]);
        }
        s
    }

    pub fn to_report_string(&self) -> String {
        let mut s = String::new();
        let f = |v: f64| format!("{v:.15e}");
        let _ = writeln!(s, "minimax_pair = {},{}", self.worst_pair.0, self.worst_pair.1);
        let _ = writeln!(s, "minimax_worst_prior = {}", f(self.minimax.worst_prior));
        let _ = writeln!(s, "minimax_value = {}", f(self.minimax.value));
        let _ = writeln!(s, "srm_error = {}", f(self.srm_error));
        let _ = writeln!(s, "guess_baseline = {}", f(self.guess_baseline));
        let _ = writeln!(s, "entangle_alpha = {}", f(self.entangle_alpha));
        s.push_str("# entangled fraction vs transparency\n");
        s.push_str(&self.entanglement_csv().to_csv_string());
        s
    }
}

pub fn attack_suite(config: &ScenarioConfig) -> Result<AttackReport> {
    config.validate()?;
    let spec = config.constellation_spec()?;
    let ensemble = spec.uniform_ensemble();
    let (i, j, _) = closest_pair_error(&ensemble)?;
    let minimax = minimax_pair(&ensemble.states()[i], &ensemble.states()[j])?;
    let srm = srm_error(&ensemble)?.error_probability;
    let entanglement = ENTANGLE_ETAS
        .iter()
        .map(|&eta| {
            let f = entangled_fraction(&lossy_shared_state(config.entangle_alpha, eta)?);
            Ok(EntanglementRow { eta, oracle: f.oracle, printed: f.printed })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AttackReport {
        worst_pair: (i + 1, j + 1),
        minimax,
        srm_error: srm,
        guess_baseline: guess_baseline(ensemble.len()),
        entangle_alpha: config.entangle_alpha,
        entanglement,
    })
}
