//! Contract payoffs and the game functions built on the scale function.
//!
//! Notation follows the usual step-down game: `p̌ = p − p̂`, `α̌ = α − α̂`,
//! buyer fee `γ_b`, seller fee `γ_s`. Symbols used in the docs:
//!
//! * `ρ(A) = ∫_A^∞ Π(du)(1 − e^{−Φ(u−A)})`
//! * `κ(x;A) = (1/r) ∫_A^∞ Π(du)[Z(x−A) − Z(x−u)]`
//! * `Ψ(A,B)`, its `B`-derivative `ψ(A,B)`, and the normalised versions
//!   `Ψ̂ = Ψ/W(B−A)`, `ψ̂ = ψ/W(B−A)` which stay finite as `B → ∞`
//! * `Υ(x;A,B)`, the common part of `v_{A,B} − h` and `v_{A,B} − g`
//!
//! For exponential jumps every integral against `Π(du) = λη e^{−ηu} du`
//! has a closed form. Writing `y = x − A`,
//! `κ(x;A) = λ e^{−ηA} K(y)` with `K(y) = ∫_0^y W(w) e^{−η(y−w)} dw`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::levy::ModelParams;
use crate::scale::{exp_diff, one_minus_exp_over, ScaleCoefficients};

/// An exercise level that may be unbounded. `Infinite` stands for "never
/// exercise", not for a large number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Barrier {
    Finite(f64),
    Infinite,
}

impl Barrier {
    pub fn is_finite(&self) -> bool {
        matches!(self, Barrier::Finite(_))
    }

    /// The level as a float, `+∞` when unbounded.
    pub fn value(&self) -> f64 {
        match *self {
            Barrier::Finite(b) => b,
            Barrier::Infinite => f64::INFINITY,
        }
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            Barrier::Finite(b) => Some(b),
            Barrier::Infinite => None,
        }
    }
}

impl PartialOrd for Barrier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value().partial_cmp(&other.value())
    }
}

impl fmt::Display for Barrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Barrier::Finite(b) => write!(f, "{b}"),
            Barrier::Infinite => write!(f, "inf"),
        }
    }
}

/// Which way the position moves when either party exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepDirection {
    /// `p̌ > 0`, `α̌ > 0`.
    Down,
    /// `p̌ < 0`, `α̌ < 0`.
    Up,
    /// `p̂ = p` and `α̂ = α`: exercising changes nothing but costs a fee.
    Vanilla,
}

/// Raw contract specification as quoted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractTerms {
    pub p: f64,
    pub alpha: f64,
    pub p_hat: f64,
    pub alpha_hat: f64,
    pub gamma_b: f64,
    pub gamma_s: f64,
}

impl ContractTerms {
    pub fn new(p: f64, alpha: f64, p_hat: f64, alpha_hat: f64, gamma_b: f64, gamma_s: f64) -> Self {
        ContractTerms { p, alpha, p_hat, alpha_hat, gamma_b, gamma_s }
    }

    /// Terms where premium and notional both scale by `q` at exercise.
    pub fn with_ratio(p: f64, alpha: f64, q: f64, gamma_b: f64, gamma_s: f64) -> Self {
        Self::new(p, alpha, q * p, q * alpha, gamma_b, gamma_s)
    }

    pub fn p_check(&self) -> f64 {
        self.p - self.p_hat
    }

    pub fn alpha_check(&self) -> f64 {
        self.alpha - self.alpha_hat
    }

    /// Validates the sign conventions and classifies the contract.
    pub fn direction(&self) -> Result<StepDirection> {
        let fields = [self.p, self.alpha, self.p_hat, self.alpha_hat, self.gamma_b, self.gamma_s];
        if fields.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidTerms(format!(
                "premia, notionals and fees must be finite and >= 0: {self:?}"
            )));
        }
        let (pc, ac) = (self.p_check(), self.alpha_check());
        match (pc.partial_cmp(&0.0), ac.partial_cmp(&0.0)) {
            (Some(Ordering::Equal), Some(Ordering::Equal)) => Ok(StepDirection::Vanilla),
            (Some(Ordering::Greater), Some(Ordering::Greater)) => Ok(StepDirection::Down),
            (Some(Ordering::Less), Some(Ordering::Less)) => Ok(StepDirection::Up),
            _ if pc == 0.0 || ac == 0.0 => Err(Error::InvalidTerms(format!(
                "exactly one of p_check = {pc} and alpha_check = {ac} is zero; the game is exercised trivially"
            ))),
            _ => Err(Error::InvalidTerms(format!(
                "p_check = {pc} and alpha_check = {ac} have opposite signs"
            ))),
        }
    }

    /// The equivalent step-down game. A step-up contract maps to
    /// `(−p̌, −α̌, γ_s, γ_b)`, which also swaps the players' roles.
    pub fn canonical(&self) -> Result<GameTerms> {
        match self.direction()? {
            StepDirection::Down => {
                GameTerms::new(self.p_check(), self.alpha_check(), self.gamma_b, self.gamma_s)
            }
            StepDirection::Up => {
                GameTerms::new(-self.p_check(), -self.alpha_check(), self.gamma_s, self.gamma_b)
            }
            StepDirection::Vanilla => Err(Error::InvalidTerms(
                "a vanilla contract has no exercise game".into(),
            )),
        }
    }
}

/// Step-down game terms satisfying `α̌ > γ_s ≥ 0`, `p̌ > 0`, `γ_b + γ_s > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameTerms {
    pub p_check: f64,
    pub alpha_check: f64,
    pub gamma_b: f64,
    pub gamma_s: f64,
}

impl GameTerms {
    pub fn new(p_check: f64, alpha_check: f64, gamma_b: f64, gamma_s: f64) -> Result<Self> {
        let t = GameTerms { p_check, alpha_check, gamma_b, gamma_s };
        if ![p_check, alpha_check, gamma_b, gamma_s].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidTerms(format!("non-finite game terms {t:?}")));
        }
        if gamma_b < 0.0 || gamma_s < 0.0 {
            return Err(Error::InvalidTerms(format!("fees must be >= 0: {t:?}")));
        }
        if !(alpha_check > gamma_s) {
            return Err(Error::InvalidTerms(format!(
                "assumption violated: alpha_check = {alpha_check} must exceed gamma_s = {gamma_s} \
                 (the seller would never exercise)"
            )));
        }
        if !(p_check > 0.0) {
            return Err(Error::InvalidTerms(format!(
                "assumption violated: p_check = {p_check} must be > 0"
            )));
        }
        if !(gamma_b + gamma_s > 0.0) {
            return Err(Error::InvalidTerms(
                "assumption violated: gamma_b + gamma_s must be > 0 (otherwise exercise is immediate)"
                    .into(),
            ));
        }
        Ok(t)
    }

    /// The mirrored terms `(−p̌, −α̌, γ_s, γ_b)`, unchecked.
    pub fn mirrored(&self) -> (f64, f64, f64, f64) {
        (-self.p_check, -self.alpha_check, self.gamma_s, self.gamma_b)
    }
}

/// Value of a perpetual CDS, `C(x; p, α) = (p/r + α) ζ(x) − p/r`.
pub fn cds_value(scale: &ScaleCoefficients, x: f64, p: f64, alpha: f64) -> f64 {
    let r = scale.r;
    (p / r + alpha) * scale.zeta(x) - p / r
}

/// Discounted exit probabilities from `(A, B)` started at `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExitIdentities {
    /// `E^x[e^{−rτ}; up-crossing B first]`.
    pub up: f64,
    /// `E^x[e^{−rτ}; down-crossing A first, including default]`.
    pub down: f64,
    /// `E^x[e^{−rτ}; a jump from (A, B) straight below zero]`.
    pub jump_default: f64,
}

/// The game functions for one model and one set of step-down terms.
#[derive(Debug, Clone)]
pub struct GameKernel {
    pub model: ModelParams,
    pub scale: ScaleCoefficients,
    pub terms: GameTerms,
}

impl GameKernel {
    pub fn new(model: ModelParams, terms: GameTerms) -> Result<Self> {
        let scale = ScaleCoefficients::build(&model)?;
        Ok(GameKernel { model, scale, terms })
    }

    pub fn with_scale(model: ModelParams, scale: ScaleCoefficients, terms: GameTerms) -> Self {
        GameKernel { model, scale, terms }
    }

    fn r(&self) -> f64 {
        self.model.r
    }

    fn phi(&self) -> f64 {
        self.scale.phi_r
    }

    /// `p̌/r − γ_b`: what the buyer locks in by exercising, net of ζ.
    pub fn buyer_level(&self) -> f64 {
        self.terms.p_check / self.r() - self.terms.gamma_b
    }

    /// `p̌/r + γ_s`.
    pub fn seller_level(&self) -> f64 {
        self.terms.p_check / self.r() + self.terms.gamma_s
    }

    /// `p̌/r + α̌`.
    fn default_level(&self) -> f64 {
        self.terms.p_check / self.r() + self.terms.alpha_check
    }

    /// `α̌ − γ_s > 0`.
    fn net_notional(&self) -> f64 {
        self.terms.alpha_check - self.terms.gamma_s
    }

    /// `p̌ + r γ_s > 0`.
    fn net_premium(&self) -> f64 {
        self.terms.p_check + self.r() * self.terms.gamma_s
    }

    /// `λ e^{−ηA}`, the tail mass `Π(A, ∞)`.
    pub fn jump_tail(&self, a: f64) -> f64 {
        self.model.lambda * (-self.model.eta * a).exp()
    }

    /// Buyer's exercise payoff `h(x)`.
    pub fn payoff_h(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        self.buyer_level() - self.default_level() * self.scale.zeta(x)
    }

    /// Seller's exercise payoff `g(x) = h(x) + γ_b + γ_s`.
    pub fn payoff_g(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        self.seller_level() - self.default_level() * self.scale.zeta(x)
    }

    /// Payoff `f(x)` for simultaneous exercise. It never enters the value of
    /// threshold strategies, since simultaneous exercise only happens at default.
    pub fn payoff_f(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        self.terms.p_check / self.r() - self.terms.gamma_b + self.terms.gamma_s
            - self.default_level() * self.scale.zeta(x)
    }

    /// `h'(x) = g'(x)` for `x > 0`.
    pub fn payoff_slope(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        -self.default_level() * self.scale.zeta_prime(x)
    }

    /// `ρ(A) = λ e^{−ηA} Φ/(Φ + η)`.
    pub fn jump_tail_rate(&self, a: f64) -> f64 {
        let phi = self.phi();
        self.jump_tail(a) * phi / (phi + self.model.eta)
    }

    /// `K(y) e^{−Φy}`.
    fn resolvent_tilted(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        let phi = self.phi();
        let eta = self.model.eta;
        let e = (-phi * y).exp();
        self.scale
            .terms
            .iter()
            .map(|t| t.c * (one_minus_exp_over(phi + eta, y) - e * exp_diff(t.xi, eta, y)))
            .sum()
    }

    /// `W(y)/(Φ+η) − K(y)`; times `λ e^{−ηA}` this is the discounted
    /// probability of jumping from above `A` straight below zero.
    fn jump_default_kernel(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        let phi = self.phi();
        let eta = self.model.eta;
        self.scale
            .terms
            .iter()
            .map(|t| t.c * (t.xi + phi) / (phi + eta) * exp_diff(eta, t.xi, y))
            .sum()
    }

    /// `κ(x;A)` for `x > A ≥ 0`.
    pub fn jump_occupation(&self, x: f64, a: f64) -> Result<f64> {
        check_order(a, x, "jump_occupation needs x > A >= 0")?;
        let y = x - a;
        Ok(self.jump_tail(a) * (self.phi() * y).exp() * self.resolvent_tilted(y))
    }

    /// `∂κ(x;A)/∂x = ∫_A^∞ Π(du)(W(x−A) − W(x−u))`.
    pub fn jump_occupation_slope(&self, x: f64, a: f64) -> Result<f64> {
        check_order(a, x, "jump_occupation_slope needs x > A >= 0")?;
        let y = x - a;
        let k = (self.phi() * y).exp() * self.resolvent_tilted(y);
        Ok(self.jump_tail(a) * (self.scale.w(y) - self.model.eta * k))
    }

    /// `Ψ(A,B) = (p̌/r − γ_b) − (p̌/r + γ_s) Z(B−A) + (α̌ − γ_s) κ(B;A)`.
    pub fn gap(&self, a: f64, b: f64) -> Result<f64> {
        check_order(a, b, "gap needs B > A >= 0")?;
        Ok(self.buyer_level() - self.seller_level() * self.scale.z(b - a)
            + self.net_notional() * self.jump_occupation(b, a)?)
    }

    /// `ψ(A,B) = ∂Ψ/∂B = −(p̌ + rγ_s) W(B−A) + (α̌ − γ_s) ∂κ(B;A)/∂B`.
    pub fn gap_slope(&self, a: f64, b: f64) -> Result<f64> {
        check_order(a, b, "gap_slope needs B > A >= 0")?;
        Ok(-self.net_premium() * self.scale.w(b - a)
            + self.net_notional() * self.jump_occupation_slope(b, a)?)
    }

    /// `Ψ̂(A,B)`, extended to `B = ∞` by `ψ̂(A,∞)/Φ`.
    ///
    /// For finite `B` this is the tilted closed form
    /// `[W_Φ(∞)(λe^{−ηA}(α̌−γ_s)/(Φ+η) − (p̌+rγ_s)/Φ) + e^{−Φ(B−A)} ϱ(A,B)] / W_Φ(B−A)`.
    pub fn scaled_gap(&self, a: f64, b: Barrier) -> Result<f64> {
        let b = match b {
            Barrier::Infinite => {
                check_level(a)?;
                return Ok(self.scaled_slope_at_infinity(a) / self.phi());
            }
            Barrier::Finite(b) => b,
        };
        check_order(a, b, "scaled_gap needs B > A >= 0")?;
        let y = b - a;
        let phi = self.phi();
        let eta = self.model.eta;
        let tail = self.jump_tail(a);
        let limit = self.scale.tilted_limit()
            * (tail * self.net_notional() / (phi + eta) - self.net_premium() / phi);
        Ok((limit + (-phi * y).exp() * self.gap_remainder(a, y)) / self.scale.w_tilted(y))
    }

    /// `ϱ(A, A+y)`.
    fn gap_remainder(&self, a: f64, y: f64) -> f64 {
        let phi = self.phi();
        let eta = self.model.eta;
        let tail = self.jump_tail(a);
        let e_eta = (-eta * y).exp();
        let mut jump = 0.0;
        let mut premium = 0.0;
        for t in &self.scale.terms {
            // (e^{−ξy} − e^{−ηy})/(ξ − η) = −exp_diff(ξ, η, y)
            jump += t.c * (-e_eta / (phi + eta) - exp_diff(t.xi, eta, y));
            premium += t.c * (-1.0 / phi - one_minus_exp_over(t.xi, y));
        }
        self.net_notional() * tail * jump
            - self.net_premium() * premium
            - (self.terms.gamma_b + self.terms.gamma_s)
    }

    /// `ψ̂(A,∞) = −(p̌ + rγ_s) + (α̌ − γ_s) ρ(A)`.
    fn scaled_slope_at_infinity(&self, a: f64) -> f64 {
        -self.net_premium() + self.net_notional() * self.jump_tail_rate(a)
    }

    /// `ψ̂(A, A+) = −(p̌ + rγ_s) + (α̌ − γ_s) λ e^{−ηA}`.
    pub fn scaled_slope_at_closing(&self, a: f64) -> f64 {
        -self.net_premium() + self.net_notional() * self.jump_tail(a)
    }

    /// `ψ̂(A,B) = ψ(A,B)/W(B−A)`, finite for `B = ∞`.
    pub fn scaled_slope(&self, a: f64, b: Barrier) -> Result<f64> {
        let b = match b {
            Barrier::Infinite => {
                check_level(a)?;
                return Ok(self.scaled_slope_at_infinity(a));
            }
            Barrier::Finite(b) => b,
        };
        check_order(a, b, "scaled_slope needs B > A >= 0")?;
        let y = b - a;
        let phi = self.phi();
        let eta = self.model.eta;
        let tail = self.jump_tail(a);
        let wt = self.scale.w_tilted(y);
        let e_eta_b = (-eta * b).exp();
        let sum: f64 = self
            .scale
            .terms
            .iter()
            .map(|t| {
                t.c * (eta / (phi + eta) * e_eta_b
                    + eta * (-eta * a).exp() * exp_diff(eta, t.xi, y))
            })
            .sum();
        let lambda = self.model.lambda;
        Ok(-self.net_premium() + self.net_notional() * tail
            - self.scale.tilted_limit() / wt * self.net_notional() * tail * eta / (phi + eta)
            + self.net_notional() / wt * lambda * (-phi * y).exp() * sum)
    }

    /// `∂Ψ̂(A,B)/∂B = ψ̂ − (W'/W)(B−A) Ψ̂`.
    pub fn scaled_gap_db(&self, a: f64, b: f64) -> Result<f64> {
        let big = self.scaled_gap(a, Barrier::Finite(b))?;
        let small = self.scaled_slope(a, Barrier::Finite(b))?;
        Ok(small - self.scale.w_log_derivative(b - a) * big)
    }

    /// `Ψ̂ − ψ̂ W/W'`; it vanishes exactly where smooth fit at `B` holds.
    pub fn smooth_fit_gap(&self, a: f64, b: f64) -> Result<f64> {
        let big = self.scaled_gap(a, Barrier::Finite(b))?;
        let small = self.scaled_slope(a, Barrier::Finite(b))?;
        Ok(big - small / self.scale.w_log_derivative(b - a))
    }

    /// Discounted exit probabilities for `A ≤ x ≤ B`, `A ≥ 0`.
    pub fn exit_identities(&self, x: f64, a: f64, b: Barrier) -> Result<ExitIdentities> {
        check_level(a)?;
        if !(x >= a) || !(Barrier::Finite(x) <= b) {
            return Err(Error::Domain(format!("exit identities need A <= x <= B, got x = {x}, A = {a}, B = {b}")));
        }
        let s = &self.scale;
        let yx = x - a;
        let tail = self.jump_tail(a);
        Ok(match b {
            Barrier::Infinite => ExitIdentities {
                up: 0.0,
                down: s.zeta(yx),
                jump_default: tail * self.jump_default_kernel(yx),
            },
            Barrier::Finite(b) => {
                let yb = b - a;
                let up = if yb > 0.0 { s.w_ratio(yx, yb) } else { 1.0 };
                ExitIdentities {
                    up,
                    down: s.zeta(yx) - up * s.zeta(yb),
                    jump_default: tail * (self.jump_default_kernel(yx) - up * self.jump_default_kernel(yb)),
                }
            }
        })
    }

    /// `Υ(x;A,B)` on the closed interval `A ≤ x ≤ B`, assembled from the
    /// exit identities. At `A = 0` this is the right limit `Υ(x;0+,B)`.
    pub fn continuation_value(&self, x: f64, a: f64, b: Barrier) -> Result<f64> {
        let e = self.exit_identities(x, a, b)?;
        Ok(self.buyer_level() * e.up + self.seller_level() * e.down + self.net_notional() * e.jump_default)
    }

    /// `Υ(x;A,B) = W(x−A) Ψ̂(A,B) + (p̌/r + γ_s) Z(x−A) − (α̌ − γ_s) κ(x;A)`,
    /// for `A < x < B`. Loses precision when `x − A` is large; prefer
    /// [`continuation_value`](Self::continuation_value).
    pub fn continuation_value_scale_form(&self, x: f64, a: f64, b: Barrier) -> Result<f64> {
        check_level(a)?;
        if !(x > a) || !(Barrier::Finite(x) < b) {
            return Err(Error::Domain(format!("need A < x < B, got x = {x}, A = {a}, B = {b}")));
        }
        let y = x - a;
        Ok(self.scale.w(y) * self.scaled_gap(a, b)? + self.seller_level() * self.scale.z(y)
            - self.net_notional() * self.jump_occupation(x, a)?)
    }
}

fn check_level(a: f64) -> Result<()> {
    if a.is_finite() && a >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("threshold A must be finite and >= 0, got {a}")))
    }
}

fn check_order(a: f64, x: f64, what: &str) -> Result<()> {
    check_level(a)?;
    if x.is_finite() && x > a {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what}: A = {a}, x = {x}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kernel() -> GameKernel {
        let model = ModelParams::calibrated(0.03, 0.2, 1.0, 2.0).unwrap();
        let terms = ContractTerms::with_ratio(0.05, 1.0, 0.5, 0.1, 0.1).canonical().unwrap();
        GameKernel::new(model, terms).unwrap()
    }

    #[test]
    fn payoffs() {
        let k = kernel();
        assert_eq!(k.payoff_h(0.0), 0.0);
        assert_eq!(k.payoff_g(-1.0), 0.0);
        assert_eq!(k.payoff_f(0.0), 0.0);
        for x in [0.1, 1.0, 3.0] {
            assert!((k.payoff_g(x) - k.payoff_h(x) - 0.2).abs() < 1e-14);
        }
        assert!((k.payoff_h(400.0) - k.buyer_level()).abs() < 1e-12);
    }

    #[test]
    fn cds_limits() {
        let k = kernel();
        assert!((cds_value(&k.scale, 1e-12, 0.05, 1.0) - 1.0).abs() < 1e-9);
        assert!((cds_value(&k.scale, 500.0, 0.05, 1.0) + 0.05 / 0.03).abs() < 1e-12);
    }

    #[test]
    fn tail_rate_at_zero() {
        let k = kernel();
        assert!((k.jump_tail_rate(0.0) - 1.0 / 3.0).abs() < 1e-12);
        assert!(k.jump_tail_rate(50.0) < 1e-40);
    }

    #[test]
    fn occupation_vanishes_at_threshold() {
        let k = kernel();
        assert!(k.jump_occupation(0.7 + 1e-12, 0.7).unwrap().abs() < 1e-20);
        assert!(k.jump_occupation(0.7, 0.7).is_err());
    }

    #[test]
    fn gap_closing_limits() {
        let k = kernel();
        let a = 0.6;
        assert!((k.gap(a, a + 1e-9).unwrap() + 0.2).abs() < 1e-7);
        let slope = k.gap_slope(a, a + 1e-9).unwrap() / k.scale.w(1e-9);
        assert!((slope - k.scaled_slope_at_closing(a)).abs() < 1e-5);
        assert!(k.gap(a, a).is_err());
    }

    #[test]
    fn infinite_barrier_relations() {
        let k = kernel();
        for a in [0.0, 0.5, 1.2] {
            let big = k.scaled_gap(a, Barrier::Infinite).unwrap();
            let small = k.scaled_slope(a, Barrier::Infinite).unwrap();
            assert!((k.scale.phi_r * big - small).abs() < 1e-14);
            let far = k.scaled_gap(a, Barrier::Finite(a + 80.0)).unwrap();
            assert!((far - big).abs() < 1e-6);
        }
    }

    #[test]
    fn continuation_fits_at_both_ends() {
        let k = kernel();
        let (a, b) = (0.5, 2.5);
        let at_b = k.continuation_value(b, a, Barrier::Finite(b)).unwrap();
        assert!((at_b - k.buyer_level()).abs() < 1e-12);
        let at_a = k.continuation_value(a, a, Barrier::Finite(b)).unwrap();
        assert!((at_a - k.seller_level()).abs() < 1e-12);
        assert!(k.exit_identities(3.0, a, Barrier::Finite(b)).is_err());
    }

    #[test]
    fn barrier_ordering() {
        assert!(Barrier::Finite(1e300) < Barrier::Infinite);
        assert!(Barrier::Finite(2.0) > Barrier::Finite(1.0));
        assert_eq!(Barrier::Infinite.to_string(), "inf");
    }

    #[test]
    fn terms_classification() {
        assert_eq!(ContractTerms::with_ratio(0.05, 1.0, 0.5, 0.1, 0.1).direction().unwrap(), StepDirection::Down);
        assert_eq!(ContractTerms::with_ratio(0.05, 1.0, 1.5, 0.1, 0.1).direction().unwrap(), StepDirection::Up);
        assert_eq!(ContractTerms::with_ratio(0.05, 1.0, 1.0, 0.1, 0.1).direction().unwrap(), StepDirection::Vanilla);
        assert!(ContractTerms::new(0.05, 1.0, 0.05, 0.5, 0.1, 0.1).direction().is_err());
        assert!(ContractTerms::new(0.05, 1.0, 0.02, 1.5, 0.1, 0.1).direction().is_err());
        // seller fee at least the notional reduction
        assert!(ContractTerms::with_ratio(0.05, 1.0, 0.5, 0.1, 0.5).canonical().is_err());
        assert!(ContractTerms::with_ratio(0.05, 1.0, 0.5, 0.0, 0.0).canonical().is_err());
        let up = ContractTerms::with_ratio(0.05, 1.0, 1.5, 0.1, 0.3).canonical().unwrap();
        assert!((up.p_check - 0.025).abs() < 1e-15);
        assert_eq!((up.gamma_b, up.gamma_s), (0.3, 0.1));
    }
}
