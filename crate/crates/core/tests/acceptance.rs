//! Acceptance checks. Runs as a plain binary so every criterion prints one
//! PASS/FAIL line; exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use y00::cipher::{
    eve_bit_mixtures, AssignmentMode, BasisAssignment, ConstellationSpec, GeneratorSpec, SeedKey,
};
use y00::coding::{analytic_block_error, decode_block, encode_block, CodeId, Level};
use y00::coherent::{
    entangled_fraction, inner_product, lossy_shared_state, quasi_bell_reduced_eigenvalues,
    CoherentAmplitude, MultiModeState, StateEnsemble,
};
use y00::detection::{
    guess_baseline, helstrom_mixed_pair, helstrom_pure_pair, srm_error, DiscriminationProblem,
};
use y00::link::{
    ber_on_off, bob_practical_vs_optimal, noise_budget, LinkParams, ELECTRON_CHARGE,
};
use y00::sim::{
    run_scenario_with, sweep, ChannelModel, Execution, ScenarioConfig, Sweep, SweepVariable,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ket(a: f64) -> MultiModeState {
    MultiModeState::single(CoherentAmplitude::real(a))
}

fn cket(z: Complex64) -> MultiModeState {
    MultiModeState::single(CoherentAmplitude::new(z).unwrap())
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn osk_secrecy() -> Outcome {
    let mut worst_analytic: f64 = 0.0;
    let mut worst_sigmas: f64 = 0.0;
    for m in [1, 2, 8, 32] {
        for alpha_max in [0.1, 1.0, 10.0, 100.0] {
            let spec = ConstellationSpec::intensity_ladder(m, alpha_max).map_err(err)?;
            let problem = eve_bit_mixtures(&spec, BasisAssignment { mode: AssignmentMode::Osk })
                .map_err(err)?;
            let pe = helstrom_mixed_pair(&problem).map_err(err)?.error_probability;
            worst_analytic = worst_analytic.max((pe - 0.5).abs());
            ensure((pe - 0.5).abs() <= 1e-12, || format!("M={m} α_max={alpha_max}: Helstrom {pe}"))?;

            let config = ScenarioConfig {
                bases: m,
                alpha_max,
                channel: ChannelModel::Noiseless,
                coding: false,
                trials: 100_000,
                ..ScenarioConfig::default()
            };
            let r = run_scenario_with(&config, Execution::Parallel).map_err(err)?;
            let est = r.eve_bit_error_montecarlo;
            let sigma = (0.25 / est.trials as f64).sqrt();
            let z = (est.rate() - 0.5).abs() / sigma;
            worst_sigmas = worst_sigmas.max(z);
            ensure(z <= 3.0, || format!("M={m} α_max={alpha_max}: SRM-Eve {} ({z:.2}σ)", est.rate()))?;
        }
    }
    Ok(format!("max |Helstrom - ½| = {worst_analytic:.1e}, worst SRM-Eve deviation {worst_sigmas:.2}σ"))
}

fn repetition_code() -> Outcome {
    let a = analytic_block_error(1e-4).map_err(err)?;
    ensure((a - 2.9998e-8).abs() <= 1e-20, || format!("analytic_block_error(1e-4) = {a:e}"))?;

    let p = 0.01;
    let blocks = 1_000_000u64;
    let mut key = GeneratorSpec::default()
        .build(&SeedKey::from_hex("0123456789abcdef").unwrap())
        .map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut errors = 0u64;
    for _ in 0..blocks {
        let code = CodeId::select(&mut key);
        let polarity = key.next_bit();
        let bit: bool = rng.random_bool(0.5);
        let mut word = encode_block(bit, code, polarity);
        for s in word.iter_mut() {
            if rng.random_bool(p) {
                *s = if *s == Level::High { Level::Low } else { Level::High };
            }
        }
        errors += (decode_block(&word, code, polarity) != bit) as u64;
    }
    let rate = errors as f64 / blocks as f64;
    let expected = 2.98e-4;
    let se = (expected * (1.0 - expected) / blocks as f64).sqrt();
    let z = (rate - expected).abs() / se;
    ensure(z <= 3.0, || format!("Monte Carlo {rate:e} vs {expected:e} ({z:.2} SE)"))?;
    Ok(format!("analytic(1e-4) = {a:.5e}, Monte Carlo(0.01) = {rate:.4e} ({z:.2} SE)"))
}

fn binary_bounds() -> Outcome {
    let h0 = helstrom_pure_pair(0.0, 0.5).map_err(err)?;
    let h1 = helstrom_pure_pair(1.0, 0.5).map_err(err)?;
    ensure(h0 == 0.0 && h1 == 0.5, || format!("endpoints {h0}, {h1}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let a = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let b = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let p1: f64 = rng.random_range(0.05..0.95);
        let overlap_sq = (-(a - b).norm_sqr()).exp();
        let closed = 0.5 * (1.0 - (1.0 - 4.0 * p1 * (1.0 - p1) * overlap_sq).sqrt());
        let ensemble = StateEnsemble::new(vec![cket(a), cket(b)], vec![p1, 1.0 - p1]).map_err(err)?;
        let problem = DiscriminationProblem::two_mixtures(ensemble, vec![0], vec![1]).map_err(err)?;
        let pe = helstrom_mixed_pair(&problem).map_err(err)?.error_probability;
        worst = worst.max((pe - closed).abs());
    }
    ensure(worst <= 1e-12, || format!("mixed vs closed form differs by {worst:e}"))?;
    Ok(format!("endpoints exact, max mixed-pair deviation {worst:.1e}"))
}

fn srm_validity() -> Outcome {
    let mut worst_pair: f64 = 0.0;
    for alpha in [0.05, 0.3, 0.7, 1.2, 2.0] {
        let e = StateEnsemble::uniform(vec![ket(alpha), ket(-alpha)]).map_err(err)?;
        let srm = srm_error(&e).map_err(err)?.error_probability;
        let helstrom = 0.5 * (1.0 - (1.0 - (-4.0 * alpha * alpha).exp()).sqrt());
        worst_pair = worst_pair.max((srm - helstrom).abs());
    }
    ensure(worst_pair <= 1e-10, || format!("binary SRM vs Helstrom differs by {worst_pair:e}"))?;

    let mut worst_identical: f64 = 0.0;
    for n in [2, 3, 5, 8, 16] {
        let e = StateEnsemble::uniform(vec![ket(0.8); n]).map_err(err)?;
        let srm = srm_error(&e).map_err(err)?.error_probability;
        worst_identical = worst_identical.max((srm - (n as f64 - 1.0) / n as f64).abs());
    }
    ensure(worst_identical <= 1e-12, || format!("identical states off by {worst_identical:e}"))?;

    let mut trend = Vec::new();
    for alpha_max in [1.0, 4.0, 10.0] {
        let mut prev = f64::NEG_INFINITY;
        for m in [2, 4, 8, 16] {
            let spec = ConstellationSpec::intensity_ladder(m, alpha_max).map_err(err)?;
            let pe = srm_error(&spec.uniform_ensemble()).map_err(err)?.error_probability;
            ensure(pe >= prev - 1e-12, || format!("α_max={alpha_max}: SRM error fell at M={m}"))?;
            ensure(pe <= guess_baseline(2 * m) + 1e-12, || format!("α_max={alpha_max} M={m}: above guessing"))?;
            prev = pe;
            if alpha_max == 4.0 {
                trend.push(format!("{pe:.3}"));
            }
        }
    }
    Ok(format!(
        "pair dev {worst_pair:.1e}, identical dev {worst_identical:.1e}, α_max=4 M=2..16: {}",
        trend.join(" ")
    ))
}

fn non_overlap_power() -> Outcome {
    let mode = BasisAssignment { mode: AssignmentMode::NonOverlap };
    let eve = |alpha_max: f64| -> Result<f64, String> {
        let spec = ConstellationSpec::intensity_ladder(8, alpha_max).map_err(err)?;
        let problem = eve_bit_mixtures(&spec, mode).map_err(err)?;
        Ok(helstrom_mixed_pair(&problem).map_err(err)?.error_probability)
    };
    let mut values = Vec::new();
    let mut prev = f64::INFINITY;
    for alpha_max in [0.5, 1.0, 2.0, 4.0, 8.0] {
        let pe = eve(alpha_max)?;
        ensure(pe <= prev + 1e-12, || format!("error rose at α_max={alpha_max}: {pe}"))?;
        prev = pe;
        values.push(format!("{pe:.3e}"));
    }
    let weak = eve(0.25)?;
    ensure(weak > 0.45, || format!("α_max=0.25 gives {weak}, not above 0.45"))?;
    Ok(format!("α_max=0.25: {weak:.4}; α_max=0.5..8: {}", values.join(" ")))
}

fn entangled_fraction_checks() -> Outcome {
    let mut worst_unit: f64 = 0.0;
    let mut worst_gap: f64 = 0.0;
    for alpha in [0.5, 1.0, 2.0] {
        let f1 = entangled_fraction(&lossy_shared_state(alpha, 1.0).map_err(err)?);
        worst_unit = worst_unit.max((f1.oracle - 1.0).abs());
        ensure((f1.oracle - 1.0).abs() <= 1e-10, || format!("α={alpha}: f(η=1) = {}", f1.oracle))?;

        let fl = entangled_fraction(&lossy_shared_state(alpha, 1e-6).map_err(err)?);
        let k2 = (-4.0 * alpha * alpha).exp();
        ensure(fl.oracle >= k2 * (1.0 - k2), || format!("α={alpha}: f(η=1e-6) = {}", fl.oracle))?;

        let mut prev = f64::NEG_INFINITY;
        for i in 0..20 {
            let eta = 10f64.powf(-6.0 + 6.0 * i as f64 / 19.0);
            let f = entangled_fraction(&lossy_shared_state(alpha, eta).map_err(err)?);
            ensure(f.oracle >= prev - 1e-12, || format!("α={alpha}: fidelity fell at η={eta:e}"))?;
            prev = f.oracle;
            worst_gap = worst_gap.max(f.discrepancy());
        }
    }
    Ok(format!(
        "max |f(1) - 1| = {worst_unit:.1e}; printed closed form differs from oracle by up to {worst_gap:.3e} (reported)"
    ))
}

fn reduced_eigenvalues() -> Outcome {
    let grid: Vec<f64> = (0..10).map(|i| 0.02 + 0.96 * i as f64 / 9.0).collect();
    let mut worst_sum: f64 = 0.0;
    for &ka in &grid {
        for &kb in &grid {
            let (l1, l2) = quasi_bell_reduced_eigenvalues(ka, kb).map_err(err)?;
            worst_sum = worst_sum.max((l1 + l2 - 1.0).abs());
            let half = (l1 - 0.5).abs() <= 1e-12 && (l2 - 0.5).abs() <= 1e-12;
            let equal = (ka - kb).abs() <= 1e-12;
            ensure(half == equal, || format!("κ_A={ka} κ_B={kb}: λ = ({l1}, {l2})"))?;
        }
    }
    ensure(worst_sum <= 1e-12, || format!("λ1+λ2 off by {worst_sum:e}"))?;
    Ok(format!("100-point grid, max |λ1+λ2-1| = {worst_sum:.1e}"))
}

/// Independent arrangement of the noise terms around the mean signal current.
fn oracle_noise(p: &LinkParams, n: f64) -> [f64; 5] {
    let e = ELECTRON_CHARGE;
    let i_sig = e * p.gain_pre * p.kappa_r * n;
    let weight = p.gain_pre * (1.0 + p.repeaters as f64 * (1.0 - p.kappa_r)) - 1.0;
    let b = p.bandwidth;
    let df = p.filter_bandwidth;
    let sig = 2.0 * e * i_sig * b;
    let sp = 2.0 * e * e * weight * p.n_sp * b * df;
    let sig_sp = 4.0 * e * i_sig * weight * p.n_sp * b;
    let sp_sp = 2.0 * (e * weight * p.n_sp).powi(2) * b * df;
    let total = p.thermal_variance + sig + 2.0 * sp + sig_sp + 2.0 * sp_sp;
    [sig, sp, sig_sp, sp_sp, total]
}

fn noise_budget_checks() -> Outcome {
    let quiet = LinkParams { gain_pre: 1.0, repeaters: 0, ..LinkParams::default() };
    let nb = noise_budget(&quiet, 3e12).map_err(err)?;
    ensure(nb.sp == 0.0 && nb.sig_sp == 0.0 && nb.sp_sp == 0.0, || format!("{nb:?}"))?;

    let p = LinkParams::default();
    let base = noise_budget(&p, 1e12).map_err(err)?.sig;
    for k in [2.0, 4.0, 0.5, 1024.0] {
        let scaled = noise_budget(&p, k * 1e12).map_err(err)?.sig;
        ensure(scaled == k * base, || format!("⟨I_sig²⟩ not linear at factor {k}"))?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let p = LinkParams {
            gain_pre: 10f64.powf(rng.random_range(0.2..3.0)),
            kappa_r: rng.random_range(0.01..1.0),
            repeaters: rng.random_range(0..100),
            n_mean: 0.0,
            n_sp: rng.random_range(1.0..5.0),
            bandwidth: 10f64.powf(rng.random_range(6.0..11.0)),
            filter_bandwidth: 10f64.powf(rng.random_range(6.0..12.0)),
            thermal_variance: 10f64.powf(rng.random_range(-24.0..-12.0)),
        };
        let n = 10f64.powf(rng.random_range(6.0..16.0));
        let nb = noise_budget(&p, n).map_err(err)?;
        let ours = [nb.sig, nb.sp, nb.sig_sp, nb.sp_sp, nb.total_on];
        for (a, b) in ours.iter().zip(oracle_noise(&p, n)) {
            let rel = (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
            worst = worst.max(rel);
        }
    }
    ensure(worst <= 1e-12, || format!("oracle disagreement {worst:e}"))?;
    Ok(format!("amplifier terms vanish, shot term linear, oracle rel. dev {worst:.1e}"))
}

fn advantage_distillation() -> Outcome {
    let config = ScenarioConfig::default();
    let spec = config.constellation_spec().map_err(err)?;
    let link = &config.link;
    for j in 0..spec.bases() {
        let (lo, hi) = spec.basis_levels(j);
        let practical = ber_on_off(
            link,
            link.level_rate(spec.decision_point(j, hi)),
            link.level_rate(spec.decision_point(j, lo)),
        )
        .map_err(err)?;
        let overlap = inner_product(spec.level(lo), spec.level(hi)).map_err(err)?.norm_sqr();
        let optimal = helstrom_pure_pair(overlap.min(1.0), 0.5).map_err(err)?;
        ensure(practical >= optimal, || format!("basis {j}: on/off {practical:e} below Helstrom {optimal:e}"))?;
    }
    let pair = bob_practical_vs_optimal(link, &spec).map_err(err)?;
    ensure(pair.dominance_holds(), || format!("{pair:?}"))?;

    let r = run_scenario_with(&config, Execution::Parallel).map_err(err)?;
    let coded = r.bob_final_analytic();
    ensure(coded < 1e-6, || format!("coded Bob error {coded:e}"))?;
    let blocks = r.block_error_montecarlo.ok_or("coding disabled in the default scenario")?;
    let allowed = coded * blocks.trials as f64 + 3.0 * (coded * blocks.trials as f64).sqrt() + 1.0;
    ensure((blocks.errors as f64) <= allowed, || format!("{} block errors in {}", blocks.errors, blocks.trials))?;

    let raw = r.bob_ber_montecarlo;
    let raw_se = (r.bob_ber_analytic / raw.trials as f64).sqrt();
    ensure((raw.rate() - r.bob_ber_analytic).abs() <= 3.0 * raw_se + 1e-12, || {
        format!("raw Monte Carlo {} vs analytic {}", raw.rate(), r.bob_ber_analytic)
    })?;

    ensure((r.eve_bit_error_analytic - 0.5).abs() <= 1e-12, || format!("Eve Helstrom {}", r.eve_bit_error_analytic))?;
    let eve = r.eve_bit_error_montecarlo;
    let z = (eve.rate() - 0.5).abs() / (0.25 / eve.trials as f64).sqrt();
    ensure(z <= 3.0, || format!("Eve Monte Carlo {} ({z:.2}σ)", eve.rate()))?;
    Ok(format!(
        "raw Bob {:.3e} (MC {:.3e}), coded Bob {coded:.3e} ({} block errors / {}), Eve {:.4} (MC {:.4})",
        r.bob_ber_analytic,
        raw.rate(),
        blocks.errors,
        blocks.trials,
        r.eve_bit_error_analytic,
        eve.rate()
    ))
}

fn determinism() -> Outcome {
    let config = ScenarioConfig { trials: 30_000, ..ScenarioConfig::default() };
    let a = run_scenario_with(&config, Execution::Parallel).map_err(err)?.to_report_string();
    let b = run_scenario_with(&config, Execution::Parallel).map_err(err)?.to_report_string();
    ensure(a == b, || "repeated runs differ".into())?;
    let c = run_scenario_with(&config, Execution::Sequential).map_err(err)?.to_report_string();
    ensure(a == c, || "parallel and sequential reports differ".into())?;

    let swept = ScenarioConfig {
        sweep: Some(Sweep { variable: SweepVariable::Repeaters, values: vec![40.0, 10.0, 30.0, 50.0] }),
        ..config
    };
    let par = sweep(&swept, Execution::Parallel).map_err(err)?.to_csv_string();
    let seq = sweep(&swept, Execution::Sequential).map_err(err)?.to_csv_string();
    ensure(par == seq, || "parallel and sequential CSV differ".into())?;
    Ok(format!("report {} bytes, sweep CSV {} bytes, both identical", a.len(), par.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("OSK secrecy", osk_secrecy),
        ("repetition code", repetition_code),
        ("binary bounds", binary_bounds),
        ("SRM validity", srm_validity),
        ("non-overlap power dependence", non_overlap_power),
        ("entangled fraction", entangled_fraction_checks),
        ("reduced eigenvalues", reduced_eigenvalues),
        ("noise budget", noise_budget_checks),
        ("advantage distillation", advantage_distillation),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} [{secs:.1}s]: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name} [{secs:.1}s]: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
