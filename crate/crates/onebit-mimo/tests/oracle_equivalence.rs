//! Conditional Monte-Carlo (noise-only randomness) against the exact
//! conditional-error oracles, on random (H, G, s) fixtures. The acceptance
//! suite runs the full-scale version; these are compact smoke grids.

use onebit_mimo::analytics::{exact_cond_error_scheme1, exact_cond_error_scheme2};
use onebit_mimo::csi::CsiMatrix;
use onebit_mimo::montecarlo::{run_conditional_trials, Diagnostics, SystemConfig};
use onebit_mimo::schemes::{DecoderVariant, SchemeKind};
use onebit_mimo::signal::{QuadSymbol, RngStream, Role};
use onebit_mimo::{draw_channel, PilotConfig};

fn fixture_config(scheme: SchemeKind, m: usize, n: usize, trials: u64, seed: u64) -> SystemConfig {
    SystemConfig {
        scheme,
        decoder: DecoderVariant::RealCombining,
        tx_antennas: m,
        rx_antennas: n,
        power: 1.0,
        pilot: PilotConfig::new(1.0, 1).unwrap(),
        trials,
        seed,
        diagnostics: Diagnostics::default(),
    }
}

fn assert_within_4se(rate: f64, p: f64, trials: u64, what: &str) {
    let se = (p * (1.0 - p) / trials as f64).sqrt();
    let slack = 4.0 * se;
    assert!(
        (rate - p).abs() <= slack.max(2.0 / trials as f64),
        "{what}: measured {rate} vs exact {p} (4se = {slack})"
    );
}

#[test]
fn scheme1_conditional_runs_match_oracle() {
    let fixtures = RngStream::new(0xfeed);
    for i in 0..10u64 {
        let mut rng = fixtures.substream(i, Role::Channel);
        let h = draw_channel(&mut rng, 2, 8);
        let g = CsiMatrix::from_fn(2, 8, |_, _| QuadSymbol::random(&mut rng));
        let s: Vec<QuadSymbol> = (0..2).map(|_| QuadSymbol::random(&mut rng)).collect();

        let exact = exact_cond_error_scheme1(&h, &g, &s, 1.0).unwrap();
        let cfg = fixture_config(SchemeKind::TxBeamform, 8, 2, 20_000, 100 + i);
        let stats = run_conditional_trials(&cfg, &h, &g, &s).unwrap();
        assert_within_4se(stats.block_error_rate, exact, cfg.trials, "scheme 1 fixture");
    }
}

#[test]
fn scheme2_conditional_runs_match_oracle() {
    let fixtures = RngStream::new(0xbead);
    for variant in [DecoderVariant::RealCombining, DecoderVariant::MatchedFilter] {
        for i in 0..10u64 {
            let mut rng = fixtures.substream(i, Role::Channel);
            let h = draw_channel(&mut rng, 6, 2);
            let g = CsiMatrix::from_fn(6, 2, |_, _| QuadSymbol::random(&mut rng));
            let s: Vec<QuadSymbol> = (0..2).map(|_| QuadSymbol::random(&mut rng)).collect();

            let exact = exact_cond_error_scheme2(&h, &g, &s, 1.0, variant).unwrap();
            let mut cfg = fixture_config(SchemeKind::RxCombine, 2, 6, 20_000, 300 + i);
            cfg.decoder = variant;
            let stats = run_conditional_trials(&cfg, &h, &g, &s).unwrap();
            assert_within_4se(
                stats.block_error_rate,
                exact,
                cfg.trials,
                &format!("scheme 2 fixture ({variant:?})"),
            );
        }
    }
}

// The single-antenna closed forms from the oracle module, reproduced through
// the full conditional engine.
#[test]
fn conditional_engine_reproduces_closed_forms() {
    use num_complex::Complex64;
    use onebit_mimo::signal::Sign;

    let h = onebit_mimo::ComplexMatrix::from_vec(1, 1, vec![Complex64::new(1.0, 1.0)]).unwrap();
    let g = CsiMatrix::quantize(&h);
    let s = vec![QuadSymbol::new(Sign::Plus, Sign::Plus)];
    let cfg = fixture_config(SchemeKind::TxBeamform, 1, 1, 100_000, 42);
    let stats = run_conditional_trials(&cfg, &h, &g, &s).unwrap();
    assert_within_4se(stats.block_error_rate, 0.151_113_446_915_623, cfg.trials, "Q(sqrt 2) fixture");

    let h = onebit_mimo::ComplexMatrix::from_vec(1, 1, vec![Complex64::new(1.0, 0.0)]).unwrap();
    let g = CsiMatrix::from_fn(1, 1, |_, _| QuadSymbol::new(Sign::Plus, Sign::Plus));
    let cfg = fixture_config(SchemeKind::RxCombine, 1, 1, 100_000, 43);
    let stats = run_conditional_trials(&cfg, &h, &g, &s).unwrap();
    assert_within_4se(stats.block_error_rate, 0.292_139_018_262_859, cfg.trials, "Q(1) fixture");
}
