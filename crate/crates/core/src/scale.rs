//! Closed-form r-scale function of the exponential-jump model.
//!
//! With `Φ = Φ(r)` and negative roots `−ξ_i` of `φ(s) = r`,
//!
//! ```text
//! W(x)   = Σ C_i (e^{Φx} − e^{−ξ_i x}),       x ≥ 0
//! W_Φ(x) = e^{−Φx} W(x) = Σ C_i (1 − e^{−(Φ+ξ_i)x})
//! Z(x)   = 1 + r ∫_0^x W(y) dy
//! ζ(x)   = Z(x) − (r/Φ) W(x) = E^x[e^{−r σ_0}]
//! ```
//!
//! The weights are the residues of `1/(φ(s) − r)`: `C_i = −1/φ'(−ξ_i)`, and
//! `Σ C_i = 1/φ'(Φ)`. Without jumps there is a single Brownian term.
//!
//! Ratios of `W` at two arguments are evaluated through `W_Φ` so that
//! nothing overflows for large arguments.

use crate::error::Result;
use crate::levy::ModelParams;

/// One exponential term of the scale function: `C (e^{Φx} − e^{−ξx})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleTerm {
    /// Magnitude of the negative root.
    pub xi: f64,
    /// Partial-fraction weight.
    pub c: f64,
}

/// Everything needed to evaluate `W`, `Z` and `ζ` in closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleCoefficients {
    /// Discount rate the coefficients were built for.
    pub r: f64,
    /// `Φ(r)`.
    pub phi_r: f64,
    /// `φ'(Φ(r))`.
    pub phi_prime_at_phi_r: f64,
    /// Two terms with jumps, one in the pure Brownian case.
    pub terms: Vec<ScaleTerm>,
    /// `C_i (1/Φ + 1/ξ_i)`, normalised to sum to one; `ζ(x) = Σ w_i e^{−ξ_i x}`.
    zeta_weights: Vec<f64>,
}

/// `(1 − e^{−d y}) / d`, continuous through `d = 0`.
#[inline]
pub(crate) fn one_minus_exp_over(d: f64, y: f64) -> f64 {
    if d.abs() * y < 1e-12 {
        y * (1.0 - 0.5 * d * y)
    } else {
        -(-d * y).exp_m1() / d
    }
}

/// `(e^{−a y} − e^{−b y}) / (b − a)` without overflow or cancellation.
#[inline]
pub(crate) fn exp_diff(a: f64, b: f64, y: f64) -> f64 {
    if b >= a {
        (-a * y).exp() * one_minus_exp_over(b - a, y)
    } else {
        (-b * y).exp() * one_minus_exp_over(a - b, y)
    }
}

impl ScaleCoefficients {
    /// Builds the coefficients for `params` at its own discount rate.
    pub fn build(params: &ModelParams) -> Result<Self> {
        params.validate()?;
        params.require_gaussian()?;
        let r = params.r;
        let phi_r = params.phi_inverse(r)?;
        let xis: Vec<f64> = if params.lambda > 0.0 {
            let (x1, x2) = params.negative_roots(r)?;
            vec![x1, x2]
        } else {
            // ½ν²s² + μs − r = 0 has roots Φ and −θ with θ = Φ + 2μ/ν².
            vec![phi_r + 2.0 * params.mu / (params.nu * params.nu)]
        };
        let terms: Vec<ScaleTerm> = xis
            .iter()
            .map(|&xi| ScaleTerm { xi, c: -1.0 / params.laplace_exponent_derivative(-xi) })
            .collect();
        let raw: Vec<f64> = terms.iter().map(|t| t.c * (1.0 / phi_r + 1.0 / t.xi)).collect();
        let total: f64 = raw.iter().sum();
        let zeta_weights = raw.iter().map(|w| w / total).collect();
        Ok(ScaleCoefficients {
            r,
            phi_r,
            phi_prime_at_phi_r: params.laplace_exponent_derivative(phi_r),
            terms,
            zeta_weights,
        })
    }

    /// `W_Φ(∞) = Σ C_i`.
    pub fn tilted_limit(&self) -> f64 {
        self.terms.iter().map(|t| t.c).sum()
    }

    /// `W(x)`; zero for `x < 0`.
    pub fn w(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        (self.phi_r * x).exp() * self.w_tilted(x)
    }

    /// `W'(x)` for `x > 0`; the right limit `2/ν²` at zero.
    pub fn w_prime(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        let phi = self.phi_r;
        self.terms
            .iter()
            .map(|t| t.c * (phi * (phi * x).exp() + t.xi * (-t.xi * x).exp()))
            .sum()
    }

    pub fn w_double_prime(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        let phi = self.phi_r;
        self.terms
            .iter()
            .map(|t| t.c * (phi * phi * (phi * x).exp() - t.xi * t.xi * (-t.xi * x).exp()))
            .sum()
    }

    /// `W_Φ(x) = e^{−Φx} W(x)`.
    pub fn w_tilted(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let phi = self.phi_r;
        self.terms.iter().map(|t| t.c * -(-(phi + t.xi) * x).exp_m1()).sum()
    }

    /// `W_Φ'(x)`.
    pub fn w_tilted_prime(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        let phi = self.phi_r;
        self.terms
            .iter()
            .map(|t| t.c * (phi + t.xi) * (-(phi + t.xi) * x).exp())
            .sum()
    }

    /// `W'(x)/W(x) = Φ + W_Φ'(x)/W_Φ(x)` for `x > 0`.
    pub fn w_log_derivative(&self, x: f64) -> f64 {
        self.phi_r + self.w_tilted_prime(x) / self.w_tilted(x)
    }

    /// `W(x)/W(y)` for `0 ≤ x ≤ y`, `y > 0`, without forming either factor.
    pub fn w_ratio(&self, x: f64, y: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        (-self.phi_r * (y - x)).exp() * self.w_tilted(x) / self.w_tilted(y)
    }

    /// `Z(x)`; one for `x ≤ 0`.
    pub fn z(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        let phi = self.phi_r;
        let integral: f64 = self
            .terms
            .iter()
            .map(|t| t.c * ((phi * x).exp_m1() / phi + (-t.xi * x).exp_m1() / t.xi))
            .sum();
        1.0 + self.r * integral
    }

    /// `Z(x) e^{−Φx}`, bounded for all `x ≥ 0`.
    pub fn z_tilted(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return (-self.phi_r * x.max(0.0)).exp();
        }
        let phi = self.phi_r;
        let e = (-phi * x).exp();
        let integral: f64 = self
            .terms
            .iter()
            .map(|t| t.c * (-(-phi * x).exp_m1() / phi - e * one_minus_exp_over(t.xi, x)))
            .sum();
        e + self.r * integral
    }

    /// `ζ(x) = E^x[e^{−rσ_0}]`; one for `x ≤ 0`.
    pub fn zeta(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        self.terms
            .iter()
            .zip(&self.zeta_weights)
            .map(|(t, w)| w * (-t.xi * x).exp())
            .sum()
    }

    /// `ζ'(x)` for `x > 0`.
    pub fn zeta_prime(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        self.terms
            .iter()
            .zip(&self.zeta_weights)
            .map(|(t, w)| -w * t.xi * (-t.xi * x).exp())
            .sum()
    }
}
