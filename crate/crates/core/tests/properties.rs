use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use y00::cipher::{
    alice_encode, bob_decode, next_symbol_map, AssignmentMode, BasisAssignment, ConstellationSpec,
    FrameParams, GeneratorSpec, SeedKey,
};
use y00::coding::analytic_block_error;
use y00::coherent::{
    apply_loss, embed_states, gram_of_states, inner_product, CoherentAmplitude, MultiModeState,
};
use y00::detection::{helstrom_pure_pair, srm_error};
use y00::linalg::max_abs_diff;
use y00::link::{ber_on_off, noise_budget, normal_tail, LinkParams};
use y00::sim::{run_scenario_with, sweep, Execution, ScenarioConfig, Sweep, SweepVariable};

fn amp(re: f64, im: f64) -> CoherentAmplitude {
    CoherentAmplitude::new(Complex64::new(re, im)).unwrap()
}

fn state(modes: &[(f64, f64)]) -> MultiModeState {
    MultiModeState::new(modes.iter().map(|&(r, i)| amp(r, i)).collect()).unwrap()
}

fn link_params() -> impl Strategy<Value = LinkParams> {
    (1.0..1e3f64, 0.01..1.0f64, 0u32..80, 1.0..4.0f64, 1e8..1e11f64, 1e8..1e12f64, 0.0..1e-14f64)
        .prop_map(|(gain_pre, kappa_r, repeaters, n_sp, bandwidth, filter_bandwidth, th)| LinkParams {
            gain_pre,
            kappa_r,
            repeaters,
            n_mean: 0.0,
            n_sp,
            bandwidth,
            filter_bandwidth,
            thermal_variance: th,
        })
}

proptest! {
    #[test]
    fn overlap_bounded_and_conjugate_symmetric(
        a in prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), 1..4),
        b in prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), 4),
    ) {
        let x = state(&a);
        let y = state(&b[..a.len()]);
        let xy = inner_product(&x, &y).unwrap();
        let yx = inner_product(&y, &x).unwrap();
        prop_assert!(xy.norm() <= 1.0 + 1e-15);
        prop_assert!((xy - yx.conj()).norm() < 1e-14);
        prop_assert!((inner_product(&x, &x).unwrap() - 1.0).norm() < 1e-14);
    }

    #[test]
    fn embedding_reconstructs_random_ladder(levels in prop::collection::vec(0.0..3.0f64, 6)) {
        let states: Vec<_> = levels.iter().map(|&a| state(&[(a, 0.0)])).collect();
        let gram = gram_of_states(&states).unwrap();
        prop_assert!(gram.eigenvalues().iter().all(|&w| w > -1e-12));
        let v = embed_states(&states).unwrap();
        prop_assert!(max_abs_diff(&(v.adjoint() * &v), gram.entries()) < 1e-10);
    }

    #[test]
    fn loss_splits_energy(re in -5.0..5.0f64, im in -5.0..5.0f64, eta in 0.0..=1.0f64) {
        let a = amp(re, im);
        let (kept, lost) = apply_loss(a, eta).unwrap();
        let total = kept.photon_number() + lost.photon_number();
        prop_assert!((total - a.photon_number()).abs() <= 1e-12 * a.photon_number().max(1.0));
    }

    #[test]
    fn noise_terms_nonnegative(p in link_params(), n in 0.0..1e16f64) {
        let nb = noise_budget(&p, n).unwrap();
        for t in [nb.sig, nb.sp, nb.sig_sp, nb.sp_sp, nb.th] {
            prop_assert!(t >= 0.0);
        }
        prop_assert!(nb.total_on >= nb.sig);
    }

    #[test]
    fn direct_detection_never_beats_helstrom(
        p in link_params(),
        lo in 0.0..5.0f64,
        gap in 1e-3..5.0f64,
    ) {
        let hi = lo + gap;
        let practical = ber_on_off(&p, p.level_rate(hi), p.level_rate(lo)).unwrap();
        let overlap_sq = (-(gap * gap)).exp();
        let optimal = helstrom_pure_pair(overlap_sq, 0.5).unwrap();
        prop_assert!(practical >= optimal - 1e-12, "{} < {}", practical, optimal);
    }

    #[test]
    fn block_error_below_symbol_error(p in 0.0..=0.5f64, dp in 0.0..0.01f64) {
        let a = analytic_block_error(p).unwrap();
        prop_assert!(a <= p + 1e-15);
        let q = (p + dp).min(0.5);
        prop_assert!(analytic_block_error(q).unwrap() >= a);
    }

    #[test]
    fn noiseless_round_trip(m in 1usize..=32, seed in any::<u64>(), bits in prop::collection::vec(any::<bool>(), 64)) {
        let spec = ConstellationSpec::intensity_ladder(m, 10.0).unwrap();
        let key = SeedKey::from_hex(&format!("{seed:016x}")).unwrap();
        let mut gen = GeneratorSpec::default().build(&key).unwrap();
        for bit in bits {
            let frame = next_symbol_map(&mut gen, m, BasisAssignment { mode: AssignmentMode::Osk });
            let sym = alice_encode(bit, frame, &spec).unwrap();
            let estimate = spec.decision_point(frame.basis, sym.level);
            prop_assert_eq!(bob_decode(estimate, frame, &spec), bit);
        }
    }
}

#[test]
fn basis_index_is_uniform() {
    let m = 6;
    let draws = 100_000;
    let mut gen = GeneratorSpec::default().build(&SeedKey::from_hex("a5a5a5a5deadbeef").unwrap()).unwrap();
    let mut counts = vec![0f64; m];
    for _ in 0..draws {
        counts[next_symbol_map(&mut gen, m, BasisAssignment { mode: AssignmentMode::Osk }).basis] += 1.0;
    }
    let expected = draws as f64 / m as f64;
    let chi2: f64 = counts.iter().map(|c| (c - expected).powi(2) / expected).sum();
    // 5 degrees of freedom, p = 0.001
    assert!(chi2 < 20.52, "χ² = {chi2}");
}

#[test]
fn gaussian_decoding_matches_q_function() {
    let spec = ConstellationSpec::intensity_ladder(4, 8.0).unwrap();
    let frame = FrameParams { basis: 1, polarity: true };
    let (lo, hi) = spec.basis_levels(1);
    let half_gap = 0.5 * (spec.decision_point(1, hi) - spec.decision_point(1, lo));
    let sigma = half_gap / 2.0;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let trials = 200_000;
    let mut errors = 0;
    for _ in 0..trials {
        let bit: bool = rng.random_bool(0.5);
        let sym = alice_encode(bit, frame, &spec).unwrap();
        let z: f64 = StandardNormal.sample(&mut rng);
        let estimate = spec.decision_point(1, sym.level) + sigma * z;
        errors += (bob_decode(estimate, frame, &spec) != bit) as u32;
    }
    let rate = errors as f64 / trials as f64;
    let expected = normal_tail(half_gap / sigma);
    let se = (expected * (1.0 - expected) / trials as f64).sqrt();
    assert!((rate - expected).abs() < 4.0 * se, "{rate} vs {expected}");
}

#[test]
fn srm_error_grows_with_ladder_size() {
    for alpha_max in [0.5, 2.0, 6.0] {
        let errs: Vec<f64> = [1, 2, 4, 8, 16]
            .iter()
            .map(|&m| {
                let spec = ConstellationSpec::intensity_ladder(m, alpha_max).unwrap();
                srm_error(&spec.uniform_ensemble()).unwrap().error_probability
            })
            .collect();
        assert!(errs.windows(2).all(|w| w[1] >= w[0] - 1e-12), "{errs:?}");
    }
}

#[test]
fn sweep_csv_parses_back() {
    let config = ScenarioConfig {
        trials: 5_000,
        sweep: Some(Sweep { variable: SweepVariable::AlphaMax, values: vec![80.0, 100.0, 60.0] }),
        ..ScenarioConfig::default()
    };
    let series = sweep(&config, Execution::Sequential).unwrap();
    let text = series.to_csv_string();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, series.header);
    let rows: Vec<Vec<f64>> = reader
        .records()
        .map(|r| r.unwrap().iter().map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows, series.rows);
    assert_eq!(series.column("alpha_max").unwrap(), vec![60.0, 80.0, 100.0]);
}

#[test]
fn csv_written_to_file() {
    let config = ScenarioConfig {
        trials: 2_000,
        sweep: Some(Sweep { variable: SweepVariable::Bases, values: vec![2.0, 4.0] }),
        ..ScenarioConfig::default()
    };
    let series = sweep(&config, Execution::Parallel).unwrap();
    let mut file = tempfile::NamedTempFile::new().unwrap();
    y00::sim::emit_csv(&series, file.as_file_mut()).unwrap();
    let back = std::fs::read_to_string(file.path()).unwrap();
    assert_eq!(back, series.to_csv_string());
    assert!(!back.contains('\r'));
}

#[test]
fn monte_carlo_block_error_tracks_analytic() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for p in [0.001, 0.01, 0.1] {
        let blocks = 1_000_000;
        let mut errors = 0u64;
        for _ in 0..blocks {
            let flips = (0..3).filter(|_| rng.random_bool(p)).count();
            errors += (flips >= 2) as u64;
        }
        let expected = analytic_block_error(p).unwrap();
        let rate = errors as f64 / blocks as f64;
        let se = (expected * (1.0 - expected) / blocks as f64).sqrt();
        assert!((rate - expected).abs() < 4.0 * se, "p={p}: {rate} vs {expected}");
    }
}

#[test]
fn osk_eve_at_half_for_noisy_link() {
    let config = ScenarioConfig { trials: 20_000, coding: false, ..ScenarioConfig::default() };
    let r = run_scenario_with(&config, Execution::Parallel).unwrap();
    assert_eq!(r.eve_bit_error_analytic, 0.5);
    let se = (0.25 / r.trials as f64).sqrt();
    assert!((r.eve_bit_error_montecarlo.rate() - 0.5).abs() < 4.0 * se);
}
