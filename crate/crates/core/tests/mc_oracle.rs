//! Monte Carlo oracle against closed forms and the analytic engine.

mod common;

use common::{default_kernel, default_model};
use swapgame::equilibrium::{solve_thresholds, SolverOptions};
use swapgame::kernel::{Barrier, ContractTerms, GameKernel};
use swapgame::levy::ModelParams;
use swapgame::mc::{self, Deviator, McConfig};
use swapgame::scale::ScaleCoefficients;
use swapgame::valuation::{game_value, threshold_value};

fn config(model: &ModelParams, n: usize, seed: u64) -> McConfig {
    McConfig::for_rate(model.r, n, seed)
}

#[test]
fn brownian_default_transform_matches_closed_form() {
    let m = ModelParams::calibrated(0.03, 0.2, 0.0, 2.0).unwrap();
    let (mu, nu2) = (m.mu, m.nu * m.nu);
    let theta = (mu + (mu * mu + 2.0 * nu2 * m.r).sqrt()) / nu2;
    let x0 = 0.5;
    let e = mc::estimate_default_transform(&m, x0, &config(&m, 20_000, 11)).unwrap();
    let exact = (-theta * x0).exp();
    assert!(e.agrees_with(exact, 3.0), "{e:?} vs {exact}");
}

#[test]
fn distant_start_rarely_defaults() {
    let m = default_model();
    let s = ScaleCoefficients::build(&m).unwrap();
    let e = mc::estimate_default_transform(&m, 40.0, &config(&m, 4_000, 5)).unwrap();
    assert!(e.agrees_with(s.zeta(40.0), 3.0) && e.mean < 1e-2, "{e:?} vs {}", s.zeta(40.0));
    let far = mc::estimate_default_transform(&m, 100.0, &config(&m, 2_000, 5)).unwrap();
    assert!(far.mean < 1e-4, "{far:?}");
}

#[test]
fn grid_monitoring_alone_misses_crossings() {
    let m = default_model();
    let zeta = ScaleCoefficients::build(&m).unwrap().zeta(1.5);
    let mut coarse = config(&m, 40_000, 3);
    coarse.dt = 0.5;
    let bridged = mc::estimate_default_transform(&m, 1.5, &coarse).unwrap();
    assert!(bridged.agrees_with(zeta, 3.0), "{bridged:?} vs {zeta}");
    coarse.bridge_correction = false;
    let plain = mc::estimate_default_transform(&m, 1.5, &coarse).unwrap();
    // Missed crossings delay default, so the transform comes out low.
    assert!(plain.mean < zeta - 3.0 * plain.stderr, "{plain:?} vs {zeta}");
}

#[test]
fn antithetic_pairs_reduce_variance() {
    let m = default_model();
    let plain = mc::estimate_default_transform(&m, 1.5, &config(&m, 40_000, 8)).unwrap();
    let mut cfg = config(&m, 40_000, 8);
    cfg.antithetic = true;
    let paired = mc::estimate_default_transform(&m, 1.5, &cfg).unwrap();
    assert!(paired.stderr < plain.stderr, "{} vs {}", paired.stderr, plain.stderr);
}

#[test]
fn doubling_the_horizon_stays_within_the_truncation_bound() {
    let m = default_model();
    let cfg = config(&m, 4_000, 21);
    let mut long = cfg;
    long.horizon *= 2.0;
    let short = mc::estimate_default_transform(&m, 1.5, &cfg).unwrap();
    let longer = mc::estimate_default_transform(&m, 1.5, &long).unwrap();
    assert!(longer.mean >= short.mean);
    assert!(longer.mean - short.mean <= cfg.truncation_bound(m.r), "{short:?} {longer:?}");
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let m = default_model();
    let cfg = config(&m, 3_000, 9);
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| mc::estimate_default_transform(&m, 1.5, &cfg).unwrap())
    };
    assert_eq!(run(1), run(3));
}

#[test]
fn exit_estimates_match_identities() {
    let k = default_kernel();
    let exact = k.exit_identities(1.5, 0.5, Barrier::Finite(2.5)).unwrap();
    let e = mc::estimate_exit_triple(&k.model, 1.5, 0.5, 2.5, &config(&k.model, 20_000, 4)).unwrap();
    assert!(e.up.agrees_with(exact.up, 3.0), "{:?} vs {}", e.up, exact.up);
    assert!(e.down.agrees_with(exact.down, 3.0), "{:?} vs {}", e.down, exact.down);
    assert!(e.jump_default.agrees_with(exact.jump_default, 3.0));
    // Up and down exits partition the exits on each path.
    assert!((e.up.mean + e.down.mean - e.any.mean).abs() < 1e-12);
    assert!(e.creep.mean > 0.0);
}

#[test]
fn pure_jump_paths_never_creep_down() {
    let m = ModelParams::calibrated(0.03, 0.0, 1.0, 2.0).unwrap();
    let e = mc::estimate_exit_triple(&m, 1.5, 0.5, 2.5, &config(&m, 5_000, 6)).unwrap();
    assert_eq!(e.creep.mean, 0.0);
    assert!(e.down.mean > 0.0 && e.up.mean > 0.0);
}

#[test]
fn narrow_band_value_lies_between_payoffs() {
    let k = default_kernel();
    let x = 1.5;
    let e = mc::estimate_game_value(&k, x, x - 0.01, Barrier::Finite(x + 0.01), &config(&k.model, 5_000, 2)).unwrap();
    let (h, g) = (k.payoff_h(x), k.payoff_g(x));
    assert!(e.mean >= h - 3.0 * e.stderr && e.mean <= g + 3.0 * e.stderr, "{h} {e:?} {g}");
}

#[test]
fn seller_only_value_matches_unbounded_formula() {
    let k = default_kernel();
    let exact = threshold_value(&k, 1.5, 0.5, Barrier::Infinite).unwrap();
    let e = mc::estimate_game_value(&k, 1.5, 0.5, Barrier::Infinite, &config(&k.model, 20_000, 13)).unwrap();
    assert!(e.agrees_with(exact, 3.0), "{e:?} vs {exact}");
}

#[test]
fn cancellation_deviations_hurt_the_deviator() {
    let m = default_model();
    let k = GameKernel::new(m, ContractTerms::with_ratio(0.05, 1.0, 0.0, 0.1, 0.1).canonical().unwrap()).unwrap();
    let sol = solve_thresholds(&k, &SolverOptions::default()).unwrap();
    let report = mc::nash_deviation_test(&k, &sol, 1.5, &[0.8, 1.2], &config(&m, 20_000, 17)).unwrap();
    assert!(report.equilibrium.agrees_with(report.analytic, 3.0), "{report:?}");
    assert_eq!(report.deviations.len(), 4);
    assert!(report.passed(), "{report:?}");
    for d in &report.deviations {
        let diff = d.paired_difference;
        match d.deviator {
            Deviator::Buyer => assert!(diff.mean < 0.0, "{d:?}"),
            Deviator::Seller => assert!(diff.mean > 0.0, "{d:?}"),
        }
    }
}

#[test]
fn seller_levels_near_zero_approach_the_limit_value() {
    let m = default_model();
    let k = GameKernel::new(m, ContractTerms::with_ratio(1.0, 1.0, 0.5, 0.1, 0.1).canonical().unwrap()).unwrap();
    let sol = solve_thresholds(&k, &SolverOptions::default()).unwrap();
    assert_eq!(sol.a_star, 0.0);
    let x = 0.5 * sol.b_star.value();
    let limit = game_value(&k, &sol, x).unwrap();
    let trend = mc::epsilon_trend(&k, &sol, x, &[0.05, 0.02, 0.005], &config(&m, 10_000, 23)).unwrap();
    for (delta, e) in &trend {
        println!("delta = {delta}: {} ± {} (limit {limit})", e.mean, e.stderr);
    }
    let (_, finest) = trend[2];
    assert!(finest.agrees_with(limit, 4.0), "{finest:?} vs {limit}");
}
