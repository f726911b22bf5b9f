//! Equilibrium exercise thresholds `(A*, B*)`.
//!
//! For a seller level `A` the buyer's candidate levels are
//!
//! * `b̲(A) = inf{B > A : Ψ̂(A,B) ≥ 0}` (continuous fit),
//! * `b̄(A) = inf{B > A : ψ̂(A,B) ≤ 0}` (smooth-fit side),
//! * `b(A) = inf{B > A : Ψ̂ − ψ̂ W/W' ≥ 0}` (only used at `A = 0`),
//!
//! with `inf ∅ = ∞`. `A*` is located by bisection on the sign of `b̄ − b̲`
//! between `A̲` (where `ψ̂(A,∞) = 0`) and `A̅` (where `ψ̂(A,A+) = 0`).

use std::fmt;

use crate::error::{Error, Result};
use crate::kernel::{Barrier, GameKernel};
use crate::roots::bisect;

/// Which of the four equilibrium shapes was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    /// `0 < A* < B* < ∞`, continuous and smooth fit at `B*`.
    Interior = 1,
    /// `A* > 0`, the buyer never exercises.
    BuyerNever = 2,
    /// `A* = 0`, `B* < ∞`.
    SellerAtDefault = 3,
    /// `A* = 0`, `B* = ∞`.
    NoExercise = 4,
}

impl Case {
    pub fn id(&self) -> u8 {
        *self as u8
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}

/// Tuning of the threshold search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Stop the `A`-bisection once `|b̄(A) − b̲(A)| ≤ eps`.
    pub eps: f64,
    /// Hard cap on `A`-bisection steps.
    pub max_iter: usize,
    /// First scan offset `B − A`.
    pub scan_start: f64,
    /// Ratio between consecutive scan offsets.
    pub scan_ratio: f64,
    /// Scan span `B − A` is at least this, and at least `60/Φ`.
    pub scan_span: f64,
    /// Relative size below which a crossing function counts as zero.
    pub noise: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            eps: 1e-8,
            max_iter: 200,
            scan_start: 1e-7,
            scan_ratio: 1.05,
            scan_span: 80.0,
            noise: 1e-12,
        }
    }
}

/// Output of [`solve_thresholds`].
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumSolution {
    /// Seller's exercise level.
    pub a_star: f64,
    /// Buyer's exercise level.
    pub b_star: Barrier,
    pub case: Case,
    /// `false` exactly when `A* = 0` with a Gaussian component: the seller's
    /// limit strategy is not admissible and only ε-optimal levels exist.
    pub nash: bool,
    /// `(Ψ̂(A*,B*), ∂_B Ψ̂(A*,B*))`; the second entry is zero when `B* = ∞`.
    pub fit_residuals: (f64, f64),
    pub a_lower: f64,
    pub a_upper: f64,
    pub iterations: usize,
    pub note: Option<String>,
}

const EPSILON_NOTE: &str = "A* = 0 with a Gaussian component: the seller's best reply is the \
inadmissible limit of exercising just above default; any small level delta > 0 is epsilon-optimal";

/// Threshold maps and the bisection for one game.
#[derive(Debug, Clone)]
pub struct ThresholdSearch<'a> {
    kernel: &'a GameKernel,
    opts: SolverOptions,
    tol: f64,
    span: f64,
}

impl<'a> ThresholdSearch<'a> {
    pub fn new(kernel: &'a GameKernel, opts: SolverOptions) -> Self {
        let t = &kernel.terms;
        let size = t.p_check / kernel.model.r + t.alpha_check + t.gamma_b + t.gamma_s;
        ThresholdSearch {
            kernel,
            opts,
            tol: opts.noise * size,
            span: opts.scan_span.max(60.0 / kernel.scale.phi_r),
        }
    }

    /// `A̲`: the root of `ψ̂(A,∞) = 0`, clipped at zero.
    pub fn a_lower(&self) -> f64 {
        let k = self.kernel;
        let phi = k.scale.phi_r;
        self.clipped_level(phi / (phi + k.model.eta))
    }

    /// `A̅`: the root of `ψ̂(A,A+) = 0`, clipped at zero.
    pub fn a_upper(&self) -> f64 {
        self.clipped_level(1.0)
    }

    fn clipped_level(&self, factor: f64) -> f64 {
        let k = self.kernel;
        let t = &k.terms;
        let ratio = k.model.lambda * (t.alpha_check - t.gamma_s) * factor
            / (t.p_check + k.model.r * t.gamma_s);
        if ratio > 1.0 {
            ratio.ln() / k.model.eta
        } else {
            0.0
        }
    }

    /// `b̲(A)`.
    pub fn b_lower(&self, a: f64) -> Result<Barrier> {
        let k = self.kernel;
        let tail = k.scaled_gap(a, Barrier::Infinite)?;
        let y = self.first_crossing(
            |y| k.scaled_gap(a, Barrier::Finite(a + y)).unwrap_or(f64::NEG_INFINITY),
            Some(|y: f64| k.scaled_gap_db(a, a + y).unwrap_or(0.0)),
            tail >= self.tol,
        )?;
        Ok(shift(a, y))
    }

    /// `b̄(A)`; equal to `A` itself when `ψ̂(A,A+) ≤ 0`.
    pub fn b_upper(&self, a: f64) -> Result<Barrier> {
        let k = self.kernel;
        if k.scaled_slope_at_closing(a) <= 0.0 {
            return Ok(Barrier::Finite(a));
        }
        let tail = -k.scaled_slope(a, Barrier::Infinite)?;
        let y = self.first_crossing(
            |y| -k.scaled_slope(a, Barrier::Finite(a + y)).unwrap_or(f64::NEG_INFINITY),
            None::<fn(f64) -> f64>,
            tail >= self.tol,
        )?;
        Ok(shift(a, y))
    }

    /// `b(A)`, the first point where `Ψ̂(A,·)` stops increasing.
    pub fn b_mid(&self, a: f64) -> Result<Barrier> {
        let k = self.kernel;
        let y = self.first_crossing(
            |y| k.smooth_fit_gap(a, a + y).unwrap_or(f64::NEG_INFINITY),
            None::<fn(f64) -> f64>,
            false,
        )?;
        Ok(shift(a, y))
    }

    /// First offset `y` where `f(y) ≥ tol`, refined to the zero of `f`.
    ///
    /// Offsets run over a geometric grid. `slope`, when given, flags local
    /// maxima between grid points so that a hump touching zero between two
    /// negative samples is not missed. Past the scan span the search only
    /// continues when the limit at infinity is known to be positive.
    fn first_crossing<F, D>(&self, f: F, slope: Option<D>, positive_tail: bool) -> Result<Option<f64>>
    where
        F: Fn(f64) -> f64,
        D: Fn(f64) -> f64,
    {
        let o = &self.opts;
        let xtol = 1e-14;
        let refine = |lo: f64, hi: f64| {
            bisect(&f, lo, hi, xtol * (1.0 + hi), 400).or_else(|e| match e {
                Error::Bracket(_) => Ok(hi),
                other => Err(other),
            })
        };
        let mut y_prev = o.scan_start;
        let f_start = f(y_prev);
        if f_start >= self.tol {
            return Ok(Some(y_prev));
        }
        let mut last_negative = y_prev;
        let mut d_prev = slope.as_ref().map(|d| d(y_prev));
        loop {
            let y = y_prev * o.scan_ratio;
            if y > self.span && !positive_tail {
                return Ok(None);
            }
            if y > 1e8 {
                return Err(Error::NoConvergence(
                    "crossing scan ran past 1e8 despite a positive limit".into(),
                ));
            }
            let fy = f(y);
            if fy >= self.tol {
                return refine(last_negative, y).map(Some);
            }
            if let Some(d) = slope.as_ref() {
                let dy = d(y);
                if d_prev.is_some_and(|dp| dp > 0.0) && dy < 0.0 {
                    let peak = bisect(d, y_prev, y, xtol * (1.0 + y), 400)?;
                    if f(peak) >= self.tol {
                        return refine(last_negative, peak).map(Some);
                    }
                }
                d_prev = Some(dy);
            }
            if fy < 0.0 {
                last_negative = y;
            }
            y_prev = y;
        }
    }

    fn residuals(&self, a: f64, b: Barrier) -> Result<(f64, f64)> {
        let k = self.kernel;
        Ok(match b {
            Barrier::Finite(bb) => (k.scaled_gap(a, b)?, k.scaled_gap_db(a, bb)?),
            Barrier::Infinite => (k.scaled_gap(a, b)?, 0.0),
        })
    }

    fn solution(&self, a: f64, b: Barrier, case: Case, iterations: usize, note: Option<String>) -> Result<EquilibriumSolution> {
        let seller_at_default = matches!(case, Case::SellerAtDefault | Case::NoExercise);
        let nash = !(seller_at_default && self.kernel.model.nu > 0.0);
        let note = note.or_else(|| (!nash).then(|| EPSILON_NOTE.to_string()));
        Ok(EquilibriumSolution {
            a_star: a,
            b_star: b,
            case,
            nash,
            fit_residuals: self.residuals(a, b)?,
            a_lower: self.a_lower(),
            a_upper: self.a_upper(),
            iterations,
            note,
        })
    }

    fn seller_at_default(&self) -> Result<EquilibriumSolution> {
        let b = self.b_mid(0.0)?;
        let case = if b.is_finite() { Case::SellerAtDefault } else { Case::NoExercise };
        self.solution(0.0, b, case, 0, None)
    }

    /// Runs the full classification and bisection.
    pub fn solve(&self) -> Result<EquilibriumSolution> {
        let a_lo = self.a_lower();
        let a_hi = self.a_upper();
        if a_hi == 0.0 {
            return self.seller_at_default();
        }
        if a_lo == 0.0 {
            if self.b_lower(0.0)? >= self.b_upper(0.0)? {
                return self.seller_at_default();
            }
        } else {
            let bl = self.b_lower(a_lo)?;
            if !bl.is_finite() {
                return self.solution(a_lo, Barrier::Infinite, Case::BuyerNever, 0, None);
            }
            if let Some(b) = self.tied(a_lo, bl)? {
                return self.solution(a_lo, Barrier::Finite(b), Case::Interior, 0, None);
            }
        }
        let bl = self.b_lower(a_hi)?;
        if let Some(b) = self.tied(a_hi, bl)? {
            return self.solution(a_hi, Barrier::Finite(b), Case::Interior, 0, None);
        }

        let (mut lo, mut hi) = (a_lo, a_hi);
        for iter in 1..=self.opts.max_iter {
            let a = 0.5 * (lo + hi);
            let bl = self.b_lower(a)?;
            let bu = self.b_upper(a)?;
            if let (Barrier::Finite(l), Barrier::Finite(u)) = (bl, bu) {
                if (u - l).abs() <= self.opts.eps {
                    return self.solution(a, bu, Case::Interior, iter, None);
                }
            }
            if bu > bl {
                lo = a;
            } else {
                hi = a;
            }
            if hi - lo <= 4.0 * f64::EPSILON * hi.max(1.0) {
                // b̲ is discontinuous at A*: the first crossing of Ψ̂(A,·)
                // appears at a tangency, so b̲ and b̄ never meet within eps.
                // The bracket has converged; take the smooth-fit level.
                let bu = self.b_upper(lo)?;
                if !bu.is_finite() && lo - a_lo <= 1e-8 * (1.0 + a_lo) {
                    // b̄ = ∞ only at A̲, so the bracket sits on A̲: b̲ is infinite
                    // just above it and finite below only through noise-level
                    // crossings of a vanishing Ψ̂(A̲,·).
                    let note = format!("A-bracket collapsed onto A_lower after {iter} steps");
                    return self.solution(a_lo, Barrier::Infinite, Case::BuyerNever, iter, Some(note));
                }
                if !bu.is_finite() {
                    return Err(Error::NoConvergence(format!(
                        "A-bracket collapsed at {lo} without a finite buyer level"
                    )));
                }
                let note = format!("A-bracket collapsed to machine precision after {iter} steps");
                return self.solution(lo, bu, Case::Interior, iter, Some(note));
            }
        }
        Err(Error::NoConvergence(format!(
            "threshold bisection did not converge in {} iterations (A in [{lo}, {hi}])",
            self.opts.max_iter
        )))
    }

    /// `Some(B)` when `b̲(A)` and `b̄(A)` coincide within eps.
    fn tied(&self, a: f64, bl: Barrier) -> Result<Option<f64>> {
        if let Barrier::Finite(l) = bl {
            if let Barrier::Finite(u) = self.b_upper(a)? {
                if (u - l).abs() <= self.opts.eps {
                    return Ok(Some(u));
                }
            }
        }
        Ok(None)
    }
}

fn shift(a: f64, y: Option<f64>) -> Barrier {
    match y {
        Some(y) => Barrier::Finite(a + y),
        None => Barrier::Infinite,
    }
}

/// Solves for the equilibrium thresholds of a step-down game.
pub fn solve_thresholds(kernel: &GameKernel, opts: &SolverOptions) -> Result<EquilibriumSolution> {
    if !(opts.eps > 0.0) || opts.max_iter == 0 {
        return Err(Error::InvalidParams(format!("invalid solver options {opts:?}")));
    }
    ThresholdSearch::new(kernel, *opts).solve()
}
