//! Spectrally negative jump diffusion: Brownian motion with drift plus
//! compound-Poisson exponential down-jumps.
//!
//! The Laplace exponent is
//! `φ(s) = μ s + ½ ν² s² − λ s / (η + s)`.

use crate::error::{Error, Result};
use crate::roots::safeguarded_newton;

const ROOT_XTOL: f64 = 1e-15;
const ROOT_MAX_ITER: usize = 200;

/// Parameters of the log-asset process `X_t − X_0 = μt + νB_t − Σ Z_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Discount rate, per year.
    pub r: f64,
    /// Linear drift, per year.
    pub mu: f64,
    /// Gaussian coefficient.
    pub nu: f64,
    /// Jump intensity, per year.
    pub lambda: f64,
    /// Rate of the exponential jump sizes (mean jump `1/η`).
    pub eta: f64,
}

/// Drift that makes the discounted asset value `e^{X}` a martingale, i.e. `φ(1) = r`.
pub fn calibrate_drift(r: f64, nu: f64, lambda: f64, eta: f64) -> f64 {
    r - 0.5 * nu * nu + lambda / (eta + 1.0)
}

impl ModelParams {
    pub fn new(r: f64, mu: f64, nu: f64, lambda: f64, eta: f64) -> Result<Self> {
        let p = ModelParams { r, mu, nu, lambda, eta };
        p.validate()?;
        Ok(p)
    }

    /// Parameters with `μ` set by [`calibrate_drift`].
    pub fn calibrated(r: f64, nu: f64, lambda: f64, eta: f64) -> Result<Self> {
        Self::new(r, calibrate_drift(r, nu, lambda, eta), nu, lambda, eta)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.r, self.mu, self.nu, self.lambda, self.eta];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParams(format!("non-finite parameter in {self:?}")));
        }
        if self.r <= 0.0 {
            return Err(Error::InvalidParams(format!("r must be > 0, got {}", self.r)));
        }
        if self.eta <= 0.0 {
            return Err(Error::InvalidParams(format!("eta must be > 0, got {}", self.eta)));
        }
        if self.nu < 0.0 {
            return Err(Error::InvalidParams(format!("nu must be >= 0, got {}", self.nu)));
        }
        if self.lambda < 0.0 {
            return Err(Error::InvalidParams(format!("lambda must be >= 0, got {}", self.lambda)));
        }
        if self.nu == 0.0 && self.mu <= 0.0 {
            return Err(Error::InvalidParams(
                "with nu = 0 the drift mu must be > 0 (negative subordinator)".into(),
            ));
        }
        Ok(())
    }

    /// The closed-form engine needs a Gaussian component.
    pub fn require_gaussian(&self) -> Result<()> {
        if self.nu > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidParams(
                "the analytic engine requires nu > 0; nu = 0 is supported by the Monte Carlo oracle only"
                    .into(),
            ))
        }
    }

    /// `φ(s)`; a domain error at the pole `s = −η` when jumps are present.
    pub fn laplace_exponent(&self, s: f64) -> Result<f64> {
        if self.lambda > 0.0 && s == -self.eta {
            return Err(Error::Domain(format!("Laplace exponent has a pole at s = -eta = {s}")));
        }
        Ok(self.phi_unchecked(s))
    }

    fn phi_unchecked(&self, s: f64) -> f64 {
        let jump = if self.lambda > 0.0 { self.lambda * s / (self.eta + s) } else { 0.0 };
        self.mu * s + 0.5 * self.nu * self.nu * s * s - jump
    }

    /// `φ'(s)`.
    pub fn laplace_exponent_derivative(&self, s: f64) -> f64 {
        let d = self.eta + s;
        let jump = if self.lambda > 0.0 { self.lambda * self.eta / (d * d) } else { 0.0 };
        self.mu + self.nu * self.nu * s - jump
    }

    /// Coefficients `[a0, a1, a2, a3]` of `(φ(s) − q)(η + s)`.
    pub fn cubic_coefficients(&self, q: f64) -> [f64; 4] {
        let half_var = 0.5 * self.nu * self.nu;
        [
            -q * self.eta,
            self.mu * self.eta - self.lambda - q,
            self.mu + half_var * self.eta,
            half_var,
        ]
    }

    /// Right inverse `Φ(q) = sup{s ≥ 0 : φ(s) = q}` for `q > 0`.
    pub fn phi_inverse(&self, q: f64) -> Result<f64> {
        if !(q > 0.0) {
            return Err(Error::Domain(format!("phi_inverse needs q > 0, got {q}")));
        }
        // φ is convex with φ(0) = 0 < q, so φ − q has one positive root.
        let mut hi = 1.0;
        let mut guard = 0;
        while self.phi_unchecked(hi) <= q {
            hi *= 2.0;
            guard += 1;
            if guard > 200 {
                return Err(Error::NoConvergence("no upper bracket for phi_inverse".into()));
            }
        }
        safeguarded_newton(
            |s| (self.phi_unchecked(s) - q, self.laplace_exponent_derivative(s)),
            0.0,
            hi,
            hi,
            ROOT_XTOL,
            ROOT_MAX_ITER,
        )
    }

    /// Magnitudes `(ξ1, ξ2)` of the two negative solutions of `φ(s) = q`,
    /// with `0 < ξ1 < η < ξ2`.
    ///
    /// The cubic `(φ(s) − q)(η + s)` is deflated by its positive root `Φ(q)`;
    /// the quadratic roots are then polished by Newton on the cubic inside
    /// the brackets `(−η, 0)` and `(−∞, −η)`.
    pub fn negative_roots(&self, q: f64) -> Result<(f64, f64)> {
        self.require_gaussian()?;
        if !(self.lambda > 0.0) {
            return Err(Error::Domain(
                "negative_roots needs lambda > 0; without jumps there is a single negative root".into(),
            ));
        }
        let phi_q = self.phi_inverse(q)?;
        let [a0, a1, a2, a3] = self.cubic_coefficients(q);
        let cubic = |s: f64| {
            let v = ((a3 * s + a2) * s + a1) * s + a0;
            let d = (3.0 * a3 * s + 2.0 * a2) * s + a1;
            (v, d)
        };

        // Synthetic division by (s − Φ).
        let b2 = a3;
        let b1 = a2 + phi_q * b2;
        let b0 = a1 + phi_q * b1;
        let disc = (b1 * b1 - 4.0 * b2 * b0).max(0.0);
        let sq = disc.sqrt();
        // Both roots negative: the stable form avoids cancellation.
        let big = -(b1 + sq) / (2.0 * b2);
        let small = if big != 0.0 { b0 / (b2 * big) } else { -(b1 - sq) / (2.0 * b2) };
        let (guess1, guess2) = if small > big { (small, big) } else { (big, small) };

        let eta = self.eta;
        let s1 = safeguarded_newton(cubic, -eta, 0.0, guess1, ROOT_XTOL, ROOT_MAX_ITER)?;
        let mut far = -2.0 * eta;
        let mut guard = 0;
        while cubic(far).0 > 0.0 {
            far *= 2.0;
            guard += 1;
            if guard > 200 {
                return Err(Error::NoConvergence("no bracket for the second negative root".into()));
            }
        }
        let s2 = safeguarded_newton(cubic, far, -eta, guess2, ROOT_XTOL, ROOT_MAX_ITER)?;
        Ok((-s1, -s2))
    }
}
