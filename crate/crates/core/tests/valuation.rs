//! Contract values: shape in x and p, step-up symmetry and the premium.

mod common;

use common::default_model;
use swapgame::equilibrium::SolverOptions;
use swapgame::kernel::{ContractTerms, StepDirection};
use swapgame::valuation::{equilibrium_premium, GameValuation, PremiumTemplate, Region};

fn contract(q: f64, p: f64, gb: f64, gs: f64) -> GameValuation {
    GameValuation::solve(&default_model(), &ContractTerms::with_ratio(p, 1.0, q, gb, gs), &SolverOptions::default())
        .unwrap()
}

const RATIOS: [f64; 4] = [0.0, 0.5, 1.0, 1.5];

fn grid() -> Vec<f64> {
    (1..=400).map(|i| 0.02 * i as f64).collect()
}

#[test]
fn value_is_nonincreasing_in_state() {
    for q in RATIOS {
        let v = contract(q, 0.05, 0.1, 0.1);
        let curve = v.curve(&grid()).unwrap();
        for w in curve.values.windows(2) {
            assert!(w[1] <= w[0] + 1e-12, "q = {q}: {} then {}", w[0], w[1]);
        }
    }
}

#[test]
fn cancellation_value_clamps_at_fees() {
    let v = contract(0.0, 0.05, 0.1, 0.1);
    let levels = v.levels().unwrap();
    for x in grid() {
        let value = v.value(x).unwrap();
        if x <= levels.seller.value() {
            assert!((value - 0.1).abs() < 1e-12, "{x}: {value}");
            assert_eq!(v.region(x), Region::SellerExercise);
        } else if x >= levels.buyer.value() {
            assert!((value + 0.1).abs() < 1e-12, "{x}: {value}");
            assert_eq!(v.region(x), Region::BuyerExercise);
        } else {
            assert!(value < 0.1 && value > -0.1);
        }
    }
}

#[test]
fn value_is_continuous_across_exercise_levels() {
    for q in [0.0, 0.5, 1.5] {
        let v = contract(q, 0.05, 0.1, 0.1);
        let levels = v.levels().unwrap();
        for level in [levels.seller, levels.buyer] {
            let Some(l) = level.finite().filter(|l| *l > 0.0) else { continue };
            let below = v.value(l * (1.0 - 1e-10)).unwrap();
            let above = v.value(l * (1.0 + 1e-10)).unwrap();
            assert!((below - above).abs() < 1e-8, "q = {q} at {l}: {below} vs {above}");
        }
    }
}

#[test]
fn value_is_nonincreasing_in_premium() {
    for q in RATIOS {
        let mut prev = f64::INFINITY;
        for i in 0..30 {
            let p = 0.005 + 0.005 * i as f64;
            let value = contract(q, p, 0.1, 0.1).value(1.5).unwrap();
            assert!(value <= prev + 1e-12, "q = {q}, p = {p}: {value} after {prev}");
            prev = value;
        }
    }
}

#[test]
fn step_up_is_the_mirrored_step_down() {
    let down = contract(0.5, 0.05, 0.1, 0.3);
    let up = GameValuation::solve(
        &default_model(),
        &ContractTerms::new(0.05, 1.0, 0.075, 1.5, 0.3, 0.1),
        &SolverOptions::default(),
    )
    .unwrap();
    assert_eq!(up.direction, StepDirection::Up);
    let (d, u) = (down.levels().unwrap(), up.levels().unwrap());
    assert!((d.seller.value() - u.buyer.value()).abs() < 1e-12);
    assert!((d.buyer.value() - u.seller.value()).abs() < 1e-12);
    // The game parts are negatives of each other.
    for x in [0.3, 1.0, 2.0, 4.0] {
        let gd = down.game_value(x).unwrap();
        let gu = up.game_value(x).unwrap();
        assert!((gd + gu).abs() < 1e-12, "{x}: {gd} vs {gu}");
    }
}

#[test]
fn step_up_holds_more_protection_near_default() {
    let up = contract(1.5, 0.05, 0.1, 0.1);
    let buyer = up.levels().unwrap().buyer.value();
    let x = 0.5 * buyer;
    assert_eq!(up.region(x), Region::BuyerExercise);
    // Exercised: a CDS on the raised terms, less the fee.
    let raised = swapgame::kernel::cds_value(&up.scale, x, 0.075, 1.5) - 0.1;
    assert!((up.value(x).unwrap() - raised).abs() < 1e-12);
}

#[test]
fn premium_zeroes_the_value() {
    for q in RATIOS {
        let template = PremiumTemplate { alpha: 1.0, q, gamma_b: 0.1, gamma_s: 0.1 };
        let sol = equilibrium_premium(&default_model(), 1.5, &template, &SolverOptions::default()).unwrap();
        assert!(sol.value.abs() < 1e-8, "q = {q}: {}", sol.value);
        let v = GameValuation::solve(&default_model(), &template.terms(sol.p_star), &SolverOptions::default()).unwrap();
        assert!(v.value(1.5).unwrap().abs() < 1e-8);
    }
}

#[test]
fn premium_moves_with_fees() {
    let at = |gb: f64, gs: f64| {
        let template = PremiumTemplate { alpha: 1.0, q: 0.5, gamma_b: gb, gamma_s: gs };
        equilibrium_premium(&default_model(), 1.5, &template, &SolverOptions::default()).unwrap().p_star
    };
    assert!(at(0.1, 0.05) < at(0.1, 0.1) && at(0.1, 0.1) < at(0.1, 0.2));
    assert!(at(0.05, 0.1) > at(0.1, 0.1) && at(0.1, 0.1) > at(0.2, 0.1));
}

#[test]
fn premium_search_rejects_default_state() {
    let template = PremiumTemplate { alpha: 1.0, q: 0.5, gamma_b: 0.1, gamma_s: 0.1 };
    assert!(equilibrium_premium(&default_model(), 0.0, &template, &SolverOptions::default()).is_err());
}
