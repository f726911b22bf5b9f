//! Monte Carlo oracle for the jump diffusion.
//!
//! Between jump epochs the path is Brownian motion with drift, advanced in
//! steps of at most `dt`. Level crossings inside a step are detected from
//! the exact law of the Brownian bridge extremum, and crossing times are
//! drawn from the bridge's conditional first-passage law, so no
//! discretisation bias remains. Jumps arrive at exact exponential epochs.
//!
//! Every path owns a ChaCha stream selected by its index, and each step
//! consumes one normal and two uniforms whatever the barriers are. Paths of
//! different strategies started from the same seed therefore share their
//! randomness (common random numbers).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand::distr::Open01;
use rand_distr::{Distribution, InverseGaussian, StandardNormal};
use rayon::prelude::*;

use crate::equilibrium::EquilibriumSolution;
use crate::error::{Error, Result};
use crate::kernel::{Barrier, GameKernel};
use crate::levy::ModelParams;

const CROSSING_STREAM_KEY: u64 = 0x9E37_79B9_7F4A_7C15;
/// Bridge crossings with probability below `e^{-50}` are not tested for.
const SKIP_EXPONENT: f64 = 50.0;

/// Simulation settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub n_paths: usize,
    /// Paths still alive at this time contribute nothing.
    pub horizon: f64,
    /// Largest Brownian step between jump epochs.
    pub dt: f64,
    pub seed: u64,
    /// Pair each path with its mirror image (normals negated).
    pub antithetic: bool,
    /// Detect crossings inside steps. Off means grid monitoring only, kept
    /// to show the bias it introduces.
    pub bridge_correction: bool,
    /// Sampling units per parallel work item.
    pub chunk_size: usize,
}

impl McConfig {
    /// Defaults for discount rate `r`: horizon with `e^{−rT} = 1e-4` and
    /// daily steps.
    pub fn for_rate(r: f64, n_paths: usize, seed: u64) -> Self {
        McConfig {
            n_paths,
            horizon: (1e4f64).ln() / r,
            dt: 1.0 / 250.0,
            seed,
            antithetic: false,
            bridge_correction: true,
            chunk_size: 512,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_paths == 0 {
            return Err(Error::Config("n_paths must be >= 1".into()));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::Config(format!("dt must be > 0, got {}", self.dt)));
        }
        if !(self.horizon > 0.0) || !self.horizon.is_finite() {
            return Err(Error::Config(format!("horizon must be > 0, got {}", self.horizon)));
        }
        if self.chunk_size == 0 {
            return Err(Error::Config("chunk_size must be >= 1".into()));
        }
        Ok(())
    }

    /// Bound on the discount factor of paths censored at the horizon. Any
    /// estimate of a payoff bounded by `M` is off by at most `M` times this.
    pub fn truncation_bound(&self, r: f64) -> f64 {
        (-r * self.horizon).exp()
    }

    fn units(&self) -> usize {
        if self.antithetic {
            self.n_paths.div_ceil(2)
        } else {
            self.n_paths
        }
    }
}

/// A Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    /// Independent sampling units (antithetic pairs count once).
    pub n: usize,
    pub seed: u64,
}

impl McEstimate {
    /// Whether `target` lies within `k` standard errors.
    pub fn agrees_with(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.stderr
    }
}

/// Running mean and sum of squared deviations, mergeable (Chan et al.).
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: usize,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        Moments {
            n,
            mean: self.mean + d * other.n as f64 / n as f64,
            m2: self.m2 + other.m2 + d * d * (self.n as f64 * other.n as f64) / n as f64,
        }
    }

    fn estimate(&self, seed: u64) -> McEstimate {
        let var = if self.n > 1 { self.m2 / (self.n - 1) as f64 } else { 0.0 };
        McEstimate { mean: self.mean, stderr: (var / self.n as f64).sqrt(), n: self.n, seed }
    }
}

/// What one path did relative to a set of levels.
#[derive(Debug, Clone, PartialEq)]
pub struct PathRecord {
    /// Per lower level: time and state when the path first got to or below it.
    pub lower: Vec<Option<(f64, f64)>>,
    /// Per upper level: first time at or above it. Paths only creep upward,
    /// so the state at that time is the level itself.
    pub upper: Vec<Option<f64>>,
}

/// Path generator for one model.
#[derive(Debug, Clone)]
pub struct Simulator {
    model: ModelParams,
    cfg: McConfig,
}

impl Simulator {
    pub fn new(model: &ModelParams, cfg: &McConfig) -> Result<Self> {
        model.validate()?;
        cfg.validate()?;
        Ok(Simulator { model: *model, cfg: *cfg })
    }

    pub fn config(&self) -> &McConfig {
        &self.cfg
    }

    fn path_rngs(&self, unit: usize) -> (ChaCha8Rng, ChaCha8Rng) {
        let mut main = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        main.set_stream(unit as u64);
        let mut crossing = ChaCha8Rng::seed_from_u64(self.cfg.seed ^ CROSSING_STREAM_KEY);
        crossing.set_stream(unit as u64);
        (main, crossing)
    }

    /// Simulates the path of sampling unit `unit` (its mirror image when
    /// `mirrored`) from `x0` until it has passed every lower level, or every
    /// upper level, or the horizon.
    ///
    /// `lower` must be sorted descending and `upper` ascending.
    pub fn simulate(&self, unit: usize, mirrored: bool, x0: f64, lower: &[f64], upper: &[f64]) -> PathRecord {
        let (mut rng, mut crossing_rng) = self.path_rngs(unit);
        if mirrored {
            // The mirror shares the main stream but not the crossing draws.
            crossing_rng.set_stream(unit as u64 | 1 << 63);
        }
        let m = &self.model;
        let nu = m.nu;
        let var = nu * nu;
        let sign = if mirrored { -1.0 } else { 1.0 };
        let mut rec = PathRecord { lower: vec![None; lower.len()], upper: vec![None; upper.len()] };
        let mut next_low = 0;
        let mut next_up = 0;
        let mut x = x0;
        let mut t = 0.0;

        let mark_lower = |rec: &mut PathRecord, next: &mut usize, t: f64, x: f64| {
            while *next < lower.len() && x <= lower[*next] {
                rec.lower[*next] = Some((t, x));
                *next += 1;
            }
        };
        mark_lower(&mut rec, &mut next_low, 0.0, x);
        while next_up < upper.len() && x >= upper[next_up] {
            rec.upper[next_up] = Some(0.0);
            next_up += 1;
        }
        let done = |low: usize, up: usize| {
            (!lower.is_empty() && low == lower.len()) || (!upper.is_empty() && up == upper.len())
        };

        // Exponential draws by inversion, so the mirror can use `1 − u`.
        let exponential = |rate: f64, rng: &mut ChaCha8Rng| {
            let u: f64 = rng.sample(Open01);
            -(if mirrored { 1.0 - u } else { u }).ln() / rate
        };
        let mut next_jump = if m.lambda > 0.0 { exponential(m.lambda, &mut rng) } else { f64::INFINITY };
        let sqrt_dt = self.cfg.dt.sqrt();
        let horizon = self.cfg.horizon;
        while !done(next_low, next_up) && t < horizon {
            let end = (t + self.cfg.dt).min(next_jump).min(horizon);
            let step = end - t;
            let z: f64 = rng.sample(StandardNormal);
            let u_low: f64 = rng.random();
            let u_up: f64 = rng.random();
            let a = x;
            let root = if step == self.cfg.dt { sqrt_dt } else { step.sqrt() };
            let b = a + m.mu * step + nu * root * sign * z;

            // Lower levels crossed during the step.
            if next_low < lower.len() {
                let level = lower[next_low];
                let minimum = if b <= level {
                    Some(bridge_minimum(a, b, var, step, u_low, self.cfg.bridge_correction))
                } else if self.cfg.bridge_correction && nu > 0.0 {
                    let exponent = 2.0 * (a - level) * (b - level) / (var * step);
                    (exponent < SKIP_EXPONENT && u_low < (-exponent).exp()).then(|| bridge_minimum(a, b, var, step, u_low, true))
                } else {
                    None
                };
                if let Some(minimum) = minimum {
                    let mut last = t;
                    while next_low < lower.len() && lower[next_low] >= minimum {
                        let level = lower[next_low];
                        let hit = if nu > 0.0 && self.cfg.bridge_correction {
                            t + bridge_hitting_time(a - level, (b - level).abs(), var, step, &mut crossing_rng)
                        } else {
                            end
                        };
                        last = last.max(hit.min(end));
                        rec.lower[next_low] = Some((last, level));
                        next_low += 1;
                    }
                }
            }
            // Upper levels crossed during the step.
            if next_up < upper.len() {
                let level = upper[next_up];
                let maximum = if b >= level {
                    Some(bridge_maximum(a, b, var, step, u_up, self.cfg.bridge_correction))
                } else if self.cfg.bridge_correction && nu > 0.0 {
                    let exponent = 2.0 * (level - a) * (level - b) / (var * step);
                    (exponent < SKIP_EXPONENT && u_up < (-exponent).exp()).then(|| bridge_maximum(a, b, var, step, u_up, true))
                } else {
                    None
                };
                if let Some(maximum) = maximum {
                    let mut last = t;
                    while next_up < upper.len() && upper[next_up] <= maximum {
                        let level = upper[next_up];
                        let hit = if nu == 0.0 {
                            // Pure drift reaches the level at a deterministic time.
                            t + (level - a) / m.mu
                        } else if self.cfg.bridge_correction {
                            t + bridge_hitting_time(level - a, (level - b).abs(), var, step, &mut crossing_rng)
                        } else {
                            end
                        };
                        last = last.max(hit.min(end));
                        rec.upper[next_up] = Some(last);
                        next_up += 1;
                    }
                }
            }

            x = b;
            t = end;
            if t == next_jump {
                x -= exponential(m.eta, &mut rng);
                mark_lower(&mut rec, &mut next_low, t, x);
                next_jump = t + exponential(m.lambda, &mut rng);
            }
        }
        rec
    }

    /// Runs `f` on every sampling unit and returns one estimate per output.
    ///
    /// Units are grouped in fixed chunks; chunks run in parallel and their
    /// moments are merged in index order, so results do not depend on the
    /// number of worker threads.
    pub fn estimate<F>(&self, x0: f64, lower: &[f64], upper: &[f64], outputs: usize, f: F) -> Vec<McEstimate>
    where
        F: Fn(&PathRecord, &mut [f64]) + Sync,
    {
        let units = self.cfg.units();
        let chunk = self.cfg.chunk_size;
        let n_chunks = units.div_ceil(chunk);
        let partial: Vec<Vec<Moments>> = (0..n_chunks)
            .into_par_iter()
            .map(|c| {
                let mut acc = vec![Moments::default(); outputs];
                let mut out = vec![0.0; outputs];
                let mut mirror = vec![0.0; outputs];
                for unit in c * chunk..((c + 1) * chunk).min(units) {
                    let rec = self.simulate(unit, false, x0, lower, upper);
                    f(&rec, &mut out);
                    if self.cfg.antithetic {
                        let rec = self.simulate(unit, true, x0, lower, upper);
                        f(&rec, &mut mirror);
                        for (o, m) in out.iter_mut().zip(&mirror) {
                            *o = 0.5 * (*o + m);
                        }
                    }
                    for (a, &o) in acc.iter_mut().zip(&out) {
                        a.push(o);
                    }
                }
                acc
            })
            .collect();
        let mut total = vec![Moments::default(); outputs];
        for chunk in partial {
            for (t, c) in total.iter_mut().zip(chunk) {
                *t = t.merge(c);
            }
        }
        total.iter().map(|m| m.estimate(self.cfg.seed)).collect()
    }
}

/// Minimum of a Brownian bridge from `a` to `b` over `step`, by inverse CDF.
fn bridge_minimum(a: f64, b: f64, var: f64, step: f64, u: f64, exact: bool) -> f64 {
    if !exact || var == 0.0 {
        return a.min(b);
    }
    let k = -0.5 * var * step * u.max(f64::MIN_POSITIVE).ln();
    0.5 * ((a + b) - ((a - b).powi(2) + 4.0 * k).sqrt())
}

fn bridge_maximum(a: f64, b: f64, var: f64, step: f64, u: f64, exact: bool) -> f64 {
    if !exact || var == 0.0 {
        return a.max(b);
    }
    let k = -0.5 * var * step * u.max(f64::MIN_POSITIVE).ln();
    0.5 * ((a + b) + ((a - b).powi(2) + 4.0 * k).sqrt())
}

/// First time a Brownian bridge over `step` reaches a level at distance
/// `start` from its origin and `end` from its endpoint, given that it does.
/// With `s = τ step/(step − τ)`, `s` is inverse Gaussian with mean
/// `start·step/end` and shape `start²/var`.
fn bridge_hitting_time<R: Rng>(start: f64, end: f64, var: f64, step: f64, rng: &mut R) -> f64 {
    if start <= 0.0 {
        return 0.0;
    }
    let mean = start * step / end.max(1e-300);
    let shape = start * start / var;
    match InverseGaussian::new(mean.min(1e300), shape) {
        Ok(d) => {
            let s: f64 = d.sample(rng);
            s * step / (s + step)
        }
        Err(_) => step,
    }
}

fn discount(r: f64, t: f64) -> f64 {
    (-r * t).exp()
}

/// `E^x[e^{−rσ_0}]`, the Laplace transform of the default time.
pub fn estimate_default_transform(model: &ModelParams, x0: f64, cfg: &McConfig) -> Result<McEstimate> {
    if !(x0 > 0.0) {
        return Err(Error::Domain(format!("start must be > 0, got {x0}")));
    }
    let sim = Simulator::new(model, cfg)?;
    let r = model.r;
    Ok(sim.estimate(x0, &[0.0], &[], 1, |rec, out| {
        out[0] = rec.lower[0].map_or(0.0, |(t, _)| discount(r, t));
    })[0])
}

/// Discounted exit estimates from `(A, B)`, paired with the analytic
/// [`ExitIdentities`](crate::kernel::ExitIdentities) fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExitEstimates {
    pub up: McEstimate,
    pub down: McEstimate,
    pub jump_default: McEstimate,
    /// `E[e^{−rτ}]` for the exit time, on the same paths.
    pub any: McEstimate,
    /// Downward exits that land exactly on `A` (creeping).
    pub creep: McEstimate,
}

pub fn estimate_exit_triple(model: &ModelParams, x0: f64, a: f64, b: f64, cfg: &McConfig) -> Result<ExitEstimates> {
    if !(0.0 <= a && a < x0 && x0 < b && b.is_finite()) {
        return Err(Error::Domain(format!("need 0 <= A < x < B < inf, got {a}, {x0}, {b}")));
    }
    let sim = Simulator::new(model, cfg)?;
    let r = model.r;
    let e = sim.estimate(x0, &[a], &[b], 5, |rec, out| {
        out.fill(0.0);
        let up = rec.upper[0];
        let down = rec.lower[0];
        match (down, up) {
            (Some((t, x)), u) if u.is_none_or(|tu| t < tu) => {
                let d = discount(r, t);
                out[1] = d;
                if x == a {
                    out[4] = d;
                } else if x <= 0.0 {
                    out[2] = d;
                }
                out[3] = d;
            }
            (_, Some(t)) => {
                out[0] = discount(r, t);
                out[3] = out[0];
            }
            _ => {}
        }
    });
    Ok(ExitEstimates { up: e[0], down: e[1], jump_default: e[2], any: e[3], creep: e[4] })
}

/// Discounted payoff of the game under levels `a[i]` and `b[j]`.
fn pair_payoff(kernel: &GameKernel, rec: &PathRecord, i: usize, j: usize, b_level: f64) -> f64 {
    let r = kernel.model.r;
    let lower = rec.lower[i];
    let upper = rec.upper.get(j).copied().flatten();
    let seller = |(t, x): (f64, f64)| if x > 0.0 { discount(r, t) * kernel.payoff_g(x) } else { 0.0 };
    match (lower, upper) {
        (Some(l), Some(tu)) if tu < l.0 => discount(r, tu) * kernel.payoff_h(b_level),
        (Some(l), _) => seller(l),
        (None, Some(tu)) => discount(r, tu) * kernel.payoff_h(b_level),
        (None, None) => 0.0,
    }
}

/// Values `v(x; σ_{a_i}, τ_{b_j})` for every pair, all from the same paths.
///
/// A seller level of zero means the seller never exercises before default.
pub fn estimate_game_grid(
    kernel: &GameKernel,
    x0: f64,
    a_levels: &[f64],
    b_levels: &[Barrier],
    cfg: &McConfig,
) -> Result<Vec<Vec<McEstimate>>> {
    if !(x0 > 0.0) {
        return Err(Error::Domain(format!("start must be > 0, got {x0}")));
    }
    if a_levels.iter().any(|&a| !(a >= 0.0)) {
        return Err(Error::Domain("seller levels must be >= 0".into()));
    }
    let sim = Simulator::new(&kernel.model, cfg)?;
    // Default (level 0) ends the game for every pair.
    let mut lower: Vec<f64> = a_levels.to_vec();
    lower.push(0.0);
    lower.sort_by(|p, q| q.total_cmp(p));
    lower.dedup();
    let mut upper: Vec<f64> = b_levels.iter().filter_map(|b| b.finite()).collect();
    upper.sort_by(|p, q| p.total_cmp(q));
    upper.dedup();
    let a_index: Vec<usize> = a_levels.iter().map(|a| lower.iter().position(|l| l == a).unwrap()).collect();
    let b_index: Vec<usize> = b_levels
        .iter()
        .map(|b| b.finite().map_or(usize::MAX, |v| upper.iter().position(|u| *u == v).unwrap()))
        .collect();
    let nb = b_levels.len();
    let flat = sim.estimate(x0, &lower, &upper, a_levels.len() * nb, |rec, out| {
        for (i, &ia) in a_index.iter().enumerate() {
            for (j, &jb) in b_index.iter().enumerate() {
                let b_level = b_levels[j].value();
                out[i * nb + j] = if x0 <= a_levels[i] && a_levels[i] > 0.0 {
                    kernel.payoff_g(x0)
                } else if x0 >= b_level {
                    kernel.payoff_h(x0)
                } else {
                    pair_payoff(kernel, rec, ia, jb, b_level)
                };
            }
        }
    });
    Ok(flat.chunks(nb).map(|c| c.to_vec()).collect())
}

/// `v(x; σ_A, τ_B)` for one pair of levels.
pub fn estimate_game_value(kernel: &GameKernel, x0: f64, a: f64, b: Barrier, cfg: &McConfig) -> Result<McEstimate> {
    Ok(estimate_game_grid(kernel, x0, &[a], &[b], cfg)?[0][0])
}

/// Who deviates in a Nash check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Deviator {
    Buyer,
    Seller,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deviation {
    pub deviator: Deviator,
    /// The deviating player's level.
    pub level: Barrier,
    pub estimate: McEstimate,
    /// Estimate minus the equilibrium estimate on the same paths.
    pub paired_difference: McEstimate,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NashReport {
    /// Analytic `v(x; A*, B*)`.
    pub analytic: f64,
    /// Monte Carlo `v(x; A*, B*)` on the shared paths.
    pub equilibrium: McEstimate,
    pub deviations: Vec<Deviation>,
}

impl NashReport {
    pub fn passed(&self) -> bool {
        self.deviations.iter().all(|d| d.pass)
    }
}

/// Unilateral threshold deviations by factors of the equilibrium levels.
///
/// A buyer deviation passes when the estimate does not exceed the analytic
/// equilibrium value by more than three standard errors; a seller deviation
/// when it does not fall below it by more than three.
pub fn nash_deviation_test(
    kernel: &GameKernel,
    solution: &EquilibriumSolution,
    x0: f64,
    factors: &[f64],
    cfg: &McConfig,
) -> Result<NashReport> {
    let analytic = crate::valuation::game_value(kernel, solution, x0)?;
    let (a_star, b_star) = (solution.a_star, solution.b_star);
    let mut a_levels = vec![a_star];
    a_levels.extend(factors.iter().map(|f| f * a_star).filter(|&a| a > 0.0 && a != a_star));
    let mut b_levels = vec![b_star];
    if let Barrier::Finite(b) = b_star {
        b_levels.extend(factors.iter().map(|f| Barrier::Finite(f * b)).filter(|&l| l != b_star && l.value() > a_star));
    }
    let sim = Simulator::new(&kernel.model, cfg)?;
    let mut lower: Vec<f64> = a_levels.clone();
    lower.push(0.0);
    lower.sort_by(|p, q| q.total_cmp(p));
    lower.dedup();
    let mut upper: Vec<f64> = b_levels.iter().filter_map(|b| b.finite()).collect();
    upper.sort_by(|p, q| p.total_cmp(q));
    let ia: Vec<usize> = a_levels.iter().map(|a| lower.iter().position(|l| l == a).unwrap()).collect();
    let jb: Vec<usize> = b_levels
        .iter()
        .map(|b| b.finite().map_or(usize::MAX, |v| upper.iter().position(|u| *u == v).unwrap()))
        .collect();
    // Outputs: equilibrium, then buyer deviations and their differences,
    // then seller deviations and their differences.
    let nb = b_levels.len() - 1;
    let na = a_levels.len() - 1;
    let value = |rec: &PathRecord, i: usize, j: usize| {
        let b = b_levels[j].value();
        if x0 >= b {
            kernel.payoff_h(x0)
        } else if x0 <= a_levels[i] {
            kernel.payoff_g(x0)
        } else {
            pair_payoff(kernel, rec, ia[i], jb[j], b)
        }
    };
    let est = sim.estimate(x0, &lower, &upper, 1 + 2 * (na + nb), |rec, out| {
        let base = value(rec, 0, 0);
        out[0] = base;
        for j in 0..nb {
            let v = value(rec, 0, j + 1);
            out[1 + 2 * j] = v;
            out[2 + 2 * j] = v - base;
        }
        for i in 0..na {
            let v = value(rec, i + 1, 0);
            out[1 + 2 * nb + 2 * i] = v;
            out[2 + 2 * nb + 2 * i] = v - base;
        }
    });
    let mut deviations = Vec::new();
    for j in 0..nb {
        let e = est[1 + 2 * j];
        deviations.push(Deviation {
            deviator: Deviator::Buyer,
            level: b_levels[j + 1],
            estimate: e,
            paired_difference: est[2 + 2 * j],
            pass: e.mean <= analytic + 3.0 * e.stderr,
        });
    }
    for i in 0..na {
        let e = est[1 + 2 * nb + 2 * i];
        deviations.push(Deviation {
            deviator: Deviator::Seller,
            level: Barrier::Finite(a_levels[i + 1]),
            estimate: e,
            paired_difference: est[2 + 2 * nb + 2 * i],
            pass: e.mean >= analytic - 3.0 * e.stderr,
        });
    }
    Ok(NashReport { analytic, equilibrium: est[0], deviations })
}

/// Empirical saddle of a grid of Monte Carlo game values.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSaddle {
    pub a_levels: Vec<f64>,
    pub b_levels: Vec<f64>,
    /// `values[i][j] = v(x; σ_{a_i}, τ_{b_j})`.
    pub values: Vec<Vec<McEstimate>>,
    /// Buyer's max-min level index.
    pub b_index: usize,
    /// Seller's best reply to it.
    pub a_index: usize,
}

impl GridSaddle {
    pub fn a(&self) -> f64 {
        self.a_levels[self.a_index]
    }

    pub fn b(&self) -> f64 {
        self.b_levels[self.b_index]
    }
}

/// Brute-force saddle search: the buyer level maximising the seller's best
/// reply value, and that best reply.
pub fn grid_saddle(kernel: &GameKernel, x0: f64, a_levels: &[f64], b_levels: &[f64], cfg: &McConfig) -> Result<GridSaddle> {
    let barriers: Vec<Barrier> = b_levels.iter().map(|&b| Barrier::Finite(b)).collect();
    let values = estimate_game_grid(kernel, x0, a_levels, &barriers, cfg)?;
    let column_min = |j: usize| {
        (0..a_levels.len())
            .min_by(|&p, &q| values[p][j].mean.total_cmp(&values[q][j].mean))
            .unwrap()
    };
    let b_index = (0..b_levels.len())
        .max_by(|&p, &q| values[column_min(p)][p].mean.total_cmp(&values[column_min(q)][q].mean))
        .ok_or_else(|| Error::Domain("empty buyer grid".into()))?;
    let a_index = column_min(b_index);
    Ok(GridSaddle { a_levels: a_levels.to_vec(), b_levels: b_levels.to_vec(), values, b_index, a_index })
}

/// Values of the seller's ε-optimal levels `δ` against `B*`, for solutions
/// with `A* = 0`. Reported as a trend; there is no admissible limit strategy.
pub fn epsilon_trend(
    kernel: &GameKernel,
    solution: &EquilibriumSolution,
    x0: f64,
    deltas: &[f64],
    cfg: &McConfig,
) -> Result<Vec<(f64, McEstimate)>> {
    let grid = estimate_game_grid(kernel, x0, deltas, &[solution.b_star], cfg)?;
    Ok(deltas.iter().zip(grid).map(|(&d, row)| (d, row[0])).collect())
}
