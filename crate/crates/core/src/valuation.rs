//! Contract values at equilibrium, the step-up symmetry and the
//! equilibrium premium.
//!
//! The buyer's value splits as `V = C + v`, where `C` is the plain CDS and
//! `v` the value of the exercise game. A step-up contract is priced through
//! the mirrored step-down game: `V = C − v'`, where `v'` uses the terms
//! `(−p̌, −α̌, γ_s, γ_b)` and the two players trade places.

use std::fmt;

use crate::equilibrium::{solve_thresholds, Case, EquilibriumSolution, SolverOptions};
use crate::error::{Error, Result};
use crate::kernel::{cds_value, Barrier, ContractTerms, GameKernel, StepDirection};
use crate::levy::ModelParams;
use crate::roots::bisect;
use crate::scale::ScaleCoefficients;

/// `v_{A,B}(x)` for the step-down game of `kernel` with seller level `a` and
/// buyer level `b`. At `a = 0` this is the right limit `A → 0+`.
pub fn threshold_value(kernel: &GameKernel, x: f64, a: f64, b: Barrier) -> Result<f64> {
    if x <= 0.0 {
        return Ok(0.0);
    }
    if a > 0.0 && x <= a {
        return Ok(kernel.payoff_g(x));
    }
    if Barrier::Finite(x) >= b {
        return Ok(kernel.payoff_h(x));
    }
    interior_value(kernel, x, a, b)
}

/// The continuation branch `Υ(x;A,B) − (p̌/r − γ_b) + h(x)` on `[A, B]`.
fn interior_value(kernel: &GameKernel, x: f64, a: f64, b: Barrier) -> Result<f64> {
    Ok(kernel.continuation_value(x, a, b)? - kernel.buyer_level() + kernel.payoff_h(x))
}

/// `v_{A*,B*}(x)` for a solved step-down game.
pub fn game_value(kernel: &GameKernel, solution: &EquilibriumSolution, x: f64) -> Result<f64> {
    threshold_value(kernel, x, solution.a_star, solution.b_star)
}

/// Where a state sits relative to the exercise levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Default,
    SellerExercise,
    BuyerExercise,
    Continuation,
}

impl Region {
    pub fn label(&self) -> &'static str {
        match self {
            Region::Default => "default",
            Region::SellerExercise => "seller_exercise",
            Region::BuyerExercise => "buyer_exercise",
            Region::Continuation => "continuation",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Exercise levels in the contract's own orientation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExerciseLevels {
    /// The seller exercises when the state reaches this level.
    pub seller: Barrier,
    /// The buyer exercises when the state reaches this level.
    pub buyer: Barrier,
}

/// A contract priced at its equilibrium exercise strategies.
#[derive(Debug, Clone)]
pub struct GameValuation {
    pub model: ModelParams,
    pub terms: ContractTerms,
    pub direction: StepDirection,
    pub scale: ScaleCoefficients,
    game: Option<(GameKernel, EquilibriumSolution)>,
}

impl GameValuation {
    /// Validates the terms and solves the (canonical) exercise game.
    /// A vanilla contract has no game: exercising only costs a fee.
    pub fn solve(model: &ModelParams, terms: &ContractTerms, opts: &SolverOptions) -> Result<Self> {
        let direction = terms.direction()?;
        let scale = ScaleCoefficients::build(model)?;
        let game = match direction {
            StepDirection::Vanilla => None,
            _ => {
                let kernel = GameKernel::with_scale(*model, scale.clone(), terms.canonical()?);
                let solution = solve_thresholds(&kernel, opts)?;
                Some((kernel, solution))
            }
        };
        Ok(GameValuation { model: *model, terms: *terms, direction, scale, game })
    }

    pub fn kernel(&self) -> Option<&GameKernel> {
        self.game.as_ref().map(|g| &g.0)
    }

    /// The solution of the canonical step-down game.
    pub fn solution(&self) -> Option<&EquilibriumSolution> {
        self.game.as_ref().map(|g| &g.1)
    }

    pub fn case(&self) -> Option<Case> {
        self.solution().map(|s| s.case)
    }

    /// Exercise levels per player; `None` for a vanilla contract.
    pub fn levels(&self) -> Option<ExerciseLevels> {
        let s = self.solution()?;
        let lower = Barrier::Finite(s.a_star);
        Some(match self.direction {
            StepDirection::Up => ExerciseLevels { seller: s.b_star, buyer: lower },
            _ => ExerciseLevels { seller: lower, buyer: s.b_star },
        })
    }

    /// Plain CDS value `C(x; p, α)`.
    pub fn cds(&self, x: f64) -> f64 {
        cds_value(&self.scale, x, self.terms.p, self.terms.alpha)
    }

    /// `v` of the canonical step-down game.
    pub fn canonical_game_value(&self, x: f64) -> Result<f64> {
        match &self.game {
            Some((k, s)) => game_value(k, s, x),
            None => Ok(0.0),
        }
    }

    /// `V − C` in the contract's orientation.
    pub fn game_value(&self, x: f64) -> Result<f64> {
        let v = self.canonical_game_value(x)?;
        Ok(if self.direction == StepDirection::Up { -v } else { v })
    }

    /// Total buyer value `V(x)`.
    pub fn value(&self, x: f64) -> Result<f64> {
        Ok(self.cds(x) + self.game_value(x)?)
    }

    pub fn region(&self, x: f64) -> Region {
        if x <= 0.0 {
            return Region::Default;
        }
        let Some(s) = self.solution() else {
            return Region::Continuation;
        };
        let (lower, upper) = match self.direction {
            StepDirection::Up => (Region::BuyerExercise, Region::SellerExercise),
            _ => (Region::SellerExercise, Region::BuyerExercise),
        };
        if s.a_star > 0.0 && x <= s.a_star {
            lower
        } else if Barrier::Finite(x) >= s.b_star {
            upper
        } else {
            Region::Continuation
        }
    }

    pub fn curve(&self, grid: &[f64]) -> Result<ValueCurve> {
        let values = grid.iter().map(|&x| self.value(x)).collect::<Result<Vec<_>>>()?;
        Ok(ValueCurve {
            grid: grid.to_vec(),
            values,
            regions: grid.iter().map(|&x| self.region(x)).collect(),
            levels: self.levels(),
            premium: self.terms.p,
        })
    }

    /// Fit diagnostics of the canonical game at its thresholds.
    pub fn smoothness_report(&self) -> Option<FitReport> {
        let (k, s) = self.game.as_ref()?;
        Some(smoothness_report(k, s))
    }
}

/// Values of a contract along a grid of states.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueCurve {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub regions: Vec<Region>,
    pub levels: Option<ExerciseLevels>,
    pub premium: f64,
}

/// Residuals of the fit conditions, each `None` where the condition does
/// not apply (no finite `B*`, or `A* = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FitReport {
    /// `v(A*+) − g(A*)`.
    pub continuity_a: Option<f64>,
    /// `v'(A*+) − g'(A*)`; only with a Gaussian component.
    pub slope_a: Option<f64>,
    /// `v(B*−) − h(B*)`.
    pub continuity_b: Option<f64>,
    /// `v'(B*−) − h'(B*)`.
    pub slope_b: Option<f64>,
}

/// One-sided limits of `v` and `v'` at the thresholds, probed numerically:
/// the continuation branch is evaluated on the boundary and differentiated
/// with a one-sided four-point stencil of step `1e-5 max(1, x)`.
pub fn smoothness_report(kernel: &GameKernel, solution: &EquilibriumSolution) -> FitReport {
    let (a, b) = (solution.a_star, solution.b_star);
    let inner = |x: f64| interior_value(kernel, x, a, b).unwrap_or(f64::NAN);
    let mut report = FitReport::default();
    if a > 0.0 {
        report.continuity_a = Some(inner(a) - kernel.payoff_g(a));
        if kernel.model.nu > 0.0 {
            let step = 1e-5 * a.max(1.0);
            let slope = one_sided_slope(&inner, a, step);
            report.slope_a = Some(slope - kernel.payoff_slope(a));
        }
    }
    if let Barrier::Finite(b) = b {
        report.continuity_b = Some(inner(b) - kernel.payoff_h(b));
        let step = -1e-5 * b.max(1.0);
        report.slope_b = Some(one_sided_slope(&inner, b, step) - kernel.payoff_slope(b));
    }
    report
}

/// Third-order one-sided difference; a negative `step` looks to the left.
fn one_sided_slope<F: Fn(f64) -> f64>(f: &F, x: f64, step: f64) -> f64 {
    (-11.0 * f(x) + 18.0 * f(x + step) - 9.0 * f(x + 2.0 * step) + 2.0 * f(x + 3.0 * step)) / (6.0 * step)
}

/// Contract shape for the premium search: `p̂ = q p`, `α̂ = q α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PremiumTemplate {
    pub alpha: f64,
    pub q: f64,
    pub gamma_b: f64,
    pub gamma_s: f64,
}

impl PremiumTemplate {
    pub fn terms(&self, p: f64) -> ContractTerms {
        ContractTerms::with_ratio(p, self.alpha, self.q, self.gamma_b, self.gamma_s)
    }
}

#[derive(Debug, Clone)]
pub struct PremiumSolution {
    pub p_star: f64,
    /// `V(x)` at `p*`.
    pub value: f64,
    pub iterations: usize,
    pub valuation: GameValuation,
}

/// Smallest premium tried; a zero premium leaves no game to play.
const PREMIUM_FLOOR: f64 = 1e-10;
const PREMIUM_TOL: f64 = 1e-8;

/// The premium rate `p*` that makes the buyer's value at `x` zero, with the
/// thresholds re-solved at every trial premium.
pub fn equilibrium_premium(
    model: &ModelParams,
    x: f64,
    template: &PremiumTemplate,
    opts: &SolverOptions,
) -> Result<PremiumSolution> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("premium search needs x > 0, got {x}")));
    }
    let value_at = |p: f64| -> Result<(f64, GameValuation)> {
        let valuation = GameValuation::solve(model, &template.terms(p), opts)?;
        Ok((valuation.value(x)?, valuation))
    };
    let lo = PREMIUM_FLOOR;
    let (v_lo, _) = value_at(lo)?;
    let mut hi = model.r * (template.alpha + template.gamma_b) * 10.0;
    let mut v_hi = value_at(hi)?.0;
    let mut doublings = 0;
    while v_lo.signum() == v_hi.signum() {
        if doublings == 60 {
            return Err(Error::Bracket(format!(
                "buyer value has no sign change for p in [{lo}, {hi}]: V = {v_lo}, {v_hi}"
            )));
        }
        hi *= 2.0;
        v_hi = value_at(hi)?.0;
        doublings += 1;
    }

    let mut iterations = 0;
    let mut failure = None;
    let root = bisect(
        |p| {
            iterations += 1;
            match value_at(p) {
                Ok((v, _)) if v.abs() < PREMIUM_TOL => 0.0,
                Ok((v, _)) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        },
        lo,
        hi,
        1e-15,
        200,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    let (value, valuation) = value_at(root)?;
    if value.abs() >= PREMIUM_TOL {
        return Err(Error::NoConvergence(format!(
            "premium bracket collapsed at p = {root} with V = {value}"
        )));
    }
    Ok(PremiumSolution { p_star: root, value, iterations, valuation })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> ModelParams {
        ModelParams::calibrated(0.03, 0.2, 1.0, 2.0).unwrap()
    }

    fn solve(q: f64, gb: f64, gs: f64) -> GameValuation {
        let terms = ContractTerms::with_ratio(0.05, 1.0, q, gb, gs);
        GameValuation::solve(&model(), &terms, &SolverOptions::default()).unwrap()
    }

    #[test]
    fn vanilla_is_plain_cds() {
        let v = solve(1.0, 0.1, 0.1);
        assert!(v.solution().is_none());
        for x in [0.5, 1.5, 4.0] {
            assert_eq!(v.value(x).unwrap(), v.cds(x));
        }
    }

    #[test]
    fn default_state_pays_protection() {
        let v = solve(0.5, 0.1, 0.1);
        assert!((v.value(0.0).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(v.region(-0.1), Region::Default);
    }

    #[test]
    fn regions_follow_thresholds() {
        let v = solve(0.5, 0.1, 0.1);
        let s = v.solution().unwrap();
        let b = s.b_star.value();
        assert_eq!(v.region(0.5 * s.a_star), Region::SellerExercise);
        assert_eq!(v.region(0.5 * (s.a_star + b)), Region::Continuation);
        assert_eq!(v.region(b + 0.1), Region::BuyerExercise);
        let up = solve(1.5, 0.1, 0.1);
        assert_eq!(up.region(0.5 * s.a_star), Region::BuyerExercise);
    }

    #[test]
    fn value_is_continuous_at_thresholds() {
        let v = solve(0.5, 0.1, 0.1);
        let report = v.smoothness_report().unwrap();
        assert!(report.continuity_a.unwrap().abs() < 1e-10);
        assert!(report.continuity_b.unwrap().abs() < 1e-10);
        assert!(report.slope_a.unwrap().abs() < 1e-6, "{report:?}");
        assert!(report.slope_b.unwrap().abs() < 1e-6, "{report:?}");
    }

    #[test]
    fn vanilla_premium_has_closed_form() {
        let template = PremiumTemplate { alpha: 1.0, q: 1.0, gamma_b: 0.1, gamma_s: 0.1 };
        let sol = equilibrium_premium(&model(), 1.5, &template, &SolverOptions::default()).unwrap();
        let zeta = sol.valuation.scale.zeta(1.5);
        let closed = 0.03 * zeta / (1.0 - zeta);
        assert!(sol.value.abs() < 1e-8);
        assert!((sol.p_star - closed).abs() < 1e-8, "{} vs {closed}", sol.p_star);
    }
}
