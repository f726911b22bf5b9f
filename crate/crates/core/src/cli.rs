//! Command-line front end: run configuration, commands and output files.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::equilibrium::SolverOptions;
use crate::error::{Error, Result};
use crate::kernel::{Barrier, ContractTerms, StepDirection};
use crate::levy::{calibrate_drift, ModelParams};
use crate::mc::{self, McConfig, McEstimate};
use crate::valuation::{equilibrium_premium, GameValuation, PremiumTemplate};

#[derive(Debug, Parser)]
#[command(name = "swapgame", version, about = "Step-up/step-down default swap games")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Run configuration (TOML).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides the Monte Carlo seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file; defaults to `output.path`, then stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Print the risk-neutral drift.
    Calibrate,
    /// Solve the equilibrium exercise thresholds.
    Thresholds,
    /// Buyer value along a grid of states.
    Curve,
    /// Premium rate making the buyer's value zero.
    Premium,
    /// Thresholds and value across premium rates.
    SweepP,
    /// Equilibrium premium across one fee.
    SweepGamma,
    /// Monte Carlo cross-checks of the analytic values.
    Verify,
}

/// Drift setting: a number, or `"calibrate"` for the risk-neutral drift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Drift {
    Calibrate,
    Value(f64),
}

impl Serialize for Drift {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Drift::Calibrate => s.serialize_str("calibrate"),
            Drift::Value(v) => s.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for Drift {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Word(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(v) => Ok(Drift::Value(v)),
            Raw::Word(w) if w == "calibrate" => Ok(Drift::Calibrate),
            Raw::Word(w) => Err(serde::de::Error::custom(format!(
                "mu must be a number or \"calibrate\", got \"{w}\""
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelBlock {
    pub r: f64,
    pub nu: f64,
    pub lambda: f64,
    pub eta: f64,
    pub mu: Drift,
}

impl Default for ModelBlock {
    fn default() -> Self {
        ModelBlock { r: 0.03, nu: 0.2, lambda: 1.0, eta: 2.0, mu: Drift::Calibrate }
    }
}

/// Contract terms. Give either `q` (then `p̂ = q p`, `α̂ = q α`) or both
/// `p_hat` and `alpha_hat`; with neither, `q = 0.5`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ContractBlock {
    pub p: f64,
    pub alpha: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_hat: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_hat: Option<f64>,
    pub gamma_b: f64,
    pub gamma_s: f64,
    /// State at which values and premia are reported.
    pub x: f64,
}

impl Default for ContractBlock {
    fn default() -> Self {
        ContractBlock {
            p: 0.05,
            alpha: 1.0,
            q: None,
            p_hat: None,
            alpha_hat: None,
            gamma_b: 0.1,
            gamma_s: 0.1,
            x: 1.5,
        }
    }
}

const DEFAULT_Q: f64 = 0.5;

impl ContractBlock {
    fn ratio(&self) -> Result<Option<f64>> {
        match (self.q, self.p_hat, self.alpha_hat) {
            (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
                Err(Error::Config("give either q or p_hat/alpha_hat, not both".into()))
            }
            (None, Some(_), None) | (None, None, Some(_)) => {
                Err(Error::Config("p_hat and alpha_hat must be given together".into()))
            }
            (None, Some(_), Some(_)) => Ok(None),
            (q, None, None) => Ok(Some(q.unwrap_or(DEFAULT_Q))),
        }
    }

    pub fn terms(&self) -> Result<ContractTerms> {
        Ok(match self.ratio()? {
            Some(q) => ContractTerms::with_ratio(self.p, self.alpha, q, self.gamma_b, self.gamma_s),
            None => ContractTerms::new(
                self.p,
                self.alpha,
                self.p_hat.unwrap_or_default(),
                self.alpha_hat.unwrap_or_default(),
                self.gamma_b,
                self.gamma_s,
            ),
        })
    }

    /// The contract shape with the premium left free.
    pub fn template(&self) -> Result<PremiumTemplate> {
        let q = self.ratio()?.ok_or_else(|| {
            Error::Config("premium searches need the contract given through q".into())
        })?;
        Ok(PremiumTemplate { alpha: self.alpha, q, gamma_b: self.gamma_b, gamma_s: self.gamma_s })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fee {
    GammaB,
    GammaS,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NumericsBlock {
    /// Bracket width of the threshold search.
    pub eps: f64,
    pub max_iter: usize,
    pub curve_x_min: f64,
    pub curve_x_max: f64,
    pub curve_points: usize,
    pub sweep_p_min: f64,
    pub sweep_p_max: f64,
    pub sweep_p_points: usize,
    pub sweep_fee: Fee,
    pub sweep_gamma_min: f64,
    pub sweep_gamma_max: f64,
    pub sweep_gamma_points: usize,
}

impl Default for NumericsBlock {
    fn default() -> Self {
        NumericsBlock {
            eps: 1e-8,
            max_iter: 200,
            curve_x_min: 0.02,
            curve_x_max: 6.0,
            curve_points: 300,
            sweep_p_min: 0.005,
            sweep_p_max: 0.2,
            sweep_p_points: 50,
            sweep_fee: Fee::GammaS,
            sweep_gamma_min: 0.0,
            sweep_gamma_max: 0.3,
            sweep_gamma_points: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct McBlock {
    pub n_paths: usize,
    pub seed: u64,
    pub dt: f64,
    /// Years; defaults to the horizon with `e^{−rT} = 1e-4`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    pub antithetic: bool,
    /// Band used for the exit-probability checks.
    pub exit_a: f64,
    pub exit_b: f64,
    /// Threshold multipliers for the deviation checks.
    pub deviation_factors: Vec<f64>,
    /// Seller levels probed when `A* = 0`.
    pub deltas: Vec<f64>,
}

impl Default for McBlock {
    fn default() -> Self {
        McBlock {
            n_paths: 100_000,
            seed: 42,
            dt: 1.0 / 250.0,
            horizon: None,
            antithetic: false,
            exit_a: 0.5,
            exit_b: 2.5,
            deviation_factors: vec![0.8, 1.2],
            deltas: vec![0.2, 0.1, 0.05, 0.02, 0.01],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputBlock {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    /// Significant digits of printed floats.
    pub precision: usize,
}

impl Default for OutputBlock {
    fn default() -> Self {
        OutputBlock { path: None, precision: 10 }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelBlock,
    pub contract: ContractBlock,
    pub numerics: NumericsBlock,
    pub mc: McBlock,
    pub output: OutputBlock,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        self.model()?;
        let terms = self.contract.terms()?;
        if terms.direction()? != StepDirection::Vanilla {
            terms.canonical()?;
        }
        let n = &self.numerics;
        if !(n.eps > 0.0) || n.max_iter == 0 {
            return Err(Error::Config("eps must be > 0 and max_iter >= 1".into()));
        }
        for (name, lo, hi, points) in [
            ("curve", n.curve_x_min, n.curve_x_max, n.curve_points),
            ("sweep_p", n.sweep_p_min, n.sweep_p_max, n.sweep_p_points),
            ("sweep_gamma", n.sweep_gamma_min, n.sweep_gamma_max, n.sweep_gamma_points),
        ] {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) || points == 0 || (points == 1 && lo != hi) {
                return Err(Error::Config(format!("{name} grid [{lo}, {hi}] with {points} points")));
            }
        }
        if self.output.precision == 0 || self.output.precision > 17 {
            return Err(Error::Config("precision must be in 1..=17".into()));
        }
        self.mc_config(None)?;
        Ok(())
    }

    pub fn model(&self) -> Result<ModelParams> {
        let m = &self.model;
        match m.mu {
            Drift::Calibrate => ModelParams::calibrated(m.r, m.nu, m.lambda, m.eta),
            Drift::Value(mu) => ModelParams::new(m.r, mu, m.nu, m.lambda, m.eta),
        }
    }

    pub fn solver_options(&self) -> SolverOptions {
        SolverOptions { eps: self.numerics.eps, max_iter: self.numerics.max_iter, ..SolverOptions::default() }
    }

    pub fn mc_config(&self, seed: Option<u64>) -> Result<McConfig> {
        let mut cfg = McConfig::for_rate(self.model.r, self.mc.n_paths, seed.unwrap_or(self.mc.seed));
        cfg.dt = self.mc.dt;
        cfg.antithetic = self.mc.antithetic;
        if let Some(h) = self.mc.horizon {
            cfg.horizon = h;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// `n` evenly spaced points on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| if i == n - 1 { hi } else { lo + step * i as f64 }).collect()
}

/// `%g`-style formatting with `digits` significant digits.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{exp}", trim_zeros(mantissa))
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn format_barrier(b: Barrier, digits: usize) -> String {
    format_sig(b.value(), digits)
}

/// Writes `bytes` to a temporary file next to `path`, then renames it over.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}

/// Rows of a CSV table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            w.write_record(row).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }
}

/// Result of a command: its text output and whether every check passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub text: String,
    pub passed: bool,
}

impl Report {
    fn ok(text: String) -> Self {
        Report { text, passed: true }
    }
}

pub fn run(command: Command, cfg: &RunConfig, seed: Option<u64>) -> Result<Report> {
    match command {
        Command::Calibrate => cmd_calibrate(cfg),
        Command::Thresholds => cmd_thresholds(cfg),
        Command::Curve => Ok(Report::ok(cmd_curve(cfg)?.to_csv()?)),
        Command::Premium => cmd_premium(cfg),
        Command::SweepP => Ok(Report::ok(cmd_sweep_p(cfg)?.to_csv()?)),
        Command::SweepGamma => Ok(Report::ok(cmd_sweep_gamma(cfg)?.to_csv()?)),
        Command::Verify => {
            let table = cmd_verify(cfg, seed)?;
            let passed = table.rows.iter().all(|r| r[4] != "false");
            Ok(Report { text: table.to_csv()?, passed })
        }
    }
}

/// Exit status for an error: 3 for numerical failures, 2 otherwise.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::NoConvergence(_) | Error::Bracket(_) => 3,
        _ => 2,
    }
}

pub fn cmd_calibrate(cfg: &RunConfig) -> Result<Report> {
    let m = &cfg.model;
    let probe = ModelParams { r: m.r, mu: 0.0, nu: m.nu, lambda: m.lambda, eta: m.eta };
    probe.validate()?;
    let mu = calibrate_drift(m.r, m.nu, m.lambda, m.eta);
    let digits = cfg.output.precision;
    Ok(Report::ok(format!("mu = {mu:.4}\nmu_full = {}\n", format_sig(mu, digits))))
}

fn direction_label(d: StepDirection) -> &'static str {
    match d {
        StepDirection::Down => "step-down",
        StepDirection::Up => "step-up",
        StepDirection::Vanilla => "vanilla",
    }
}

pub fn cmd_thresholds(cfg: &RunConfig) -> Result<Report> {
    let valuation = GameValuation::solve(&cfg.model()?, &cfg.contract.terms()?, &cfg.solver_options())?;
    let d = cfg.output.precision;
    let mut out = String::new();
    writeln!(out, "direction = {}", direction_label(valuation.direction)).unwrap();
    let (Some(sol), Some(levels)) = (valuation.solution(), valuation.levels()) else {
        writeln!(out, "case = none").unwrap();
        return Ok(Report::ok(out));
    };
    writeln!(out, "case = {}", sol.case.id()).unwrap();
    writeln!(out, "A_star = {}", format_barrier(levels.seller, d)).unwrap();
    writeln!(out, "B_star = {}", format_barrier(levels.buyer, d)).unwrap();
    writeln!(out, "residual_gap = {}", format_sig(sol.fit_residuals.0, d)).unwrap();
    writeln!(out, "residual_slope = {}", format_sig(sol.fit_residuals.1, d)).unwrap();
    writeln!(out, "nash = {}", sol.nash).unwrap();
    writeln!(out, "iterations = {}", sol.iterations).unwrap();
    if let Some(note) = &sol.note {
        writeln!(out, "note = {note}").unwrap();
    }
    Ok(Report::ok(out))
}

pub fn cmd_curve(cfg: &RunConfig) -> Result<Table> {
    let valuation = GameValuation::solve(&cfg.model()?, &cfg.contract.terms()?, &cfg.solver_options())?;
    let n = &cfg.numerics;
    let curve = valuation.curve(&linspace(n.curve_x_min, n.curve_x_max, n.curve_points))?;
    let d = cfg.output.precision;
    let mut table = Table::new(&["x", "V", "region"]);
    for ((x, v), region) in curve.grid.iter().zip(&curve.values).zip(&curve.regions) {
        table.rows.push(vec![format_sig(*x, d), format_sig(*v, d), region.label().into()]);
    }
    Ok(table)
}

pub fn cmd_premium(cfg: &RunConfig) -> Result<Report> {
    let sol = equilibrium_premium(&cfg.model()?, cfg.contract.x, &cfg.contract.template()?, &cfg.solver_options())?;
    let d = cfg.output.precision;
    let mut out = String::new();
    writeln!(out, "p_star = {}", format_sig(sol.p_star, d)).unwrap();
    writeln!(out, "V = {}", format_sig(sol.value, d)).unwrap();
    if let (Some(case), Some(levels)) = (sol.valuation.case(), sol.valuation.levels()) {
        writeln!(out, "case = {}", case.id()).unwrap();
        writeln!(out, "A_star = {}", format_barrier(levels.seller, d)).unwrap();
        writeln!(out, "B_star = {}", format_barrier(levels.buyer, d)).unwrap();
    }
    writeln!(out, "iterations = {}", sol.iterations).unwrap();
    Ok(Report::ok(out))
}

pub fn cmd_sweep_p(cfg: &RunConfig) -> Result<Table> {
    let model = cfg.model()?;
    let template = cfg.contract.template()?;
    let n = &cfg.numerics;
    let d = cfg.output.precision;
    let mut table = Table::new(&["p", "A_star", "B_star", "case", "V"]);
    for p in linspace(n.sweep_p_min, n.sweep_p_max, n.sweep_p_points) {
        let valuation = GameValuation::solve(&model, &template.terms(p), &cfg.solver_options())?;
        let v = format_sig(valuation.value(cfg.contract.x)?, d);
        let row = match (valuation.levels(), valuation.case()) {
            (Some(l), Some(c)) => vec![
                format_sig(p, d),
                format_barrier(l.seller, d),
                format_barrier(l.buyer, d),
                c.id().to_string(),
                v,
            ],
            _ => vec![format_sig(p, d), "none".into(), "none".into(), "none".into(), v],
        };
        table.rows.push(row);
    }
    Ok(table)
}

pub fn cmd_sweep_gamma(cfg: &RunConfig) -> Result<Table> {
    let model = cfg.model()?;
    let base = cfg.contract.template()?;
    let n = &cfg.numerics;
    let d = cfg.output.precision;
    let mut table = Table::new(&["gamma", "p_star"]);
    for gamma in linspace(n.sweep_gamma_min, n.sweep_gamma_max, n.sweep_gamma_points) {
        let mut template = base;
        match n.sweep_fee {
            Fee::GammaB => template.gamma_b = gamma,
            Fee::GammaS => template.gamma_s = gamma,
        }
        let sol = equilibrium_premium(&model, cfg.contract.x, &template, &cfg.solver_options())?;
        table.rows.push(vec![format_sig(gamma, d), format_sig(sol.p_star, d)]);
    }
    Ok(table)
}

/// Monte Carlo checks: the default transform, the exit identities on the
/// configured band, the equilibrium value and unilateral deviations. With
/// `A* = 0` the seller's near-zero levels are reported as a trend instead.
pub fn cmd_verify(cfg: &RunConfig, seed: Option<u64>) -> Result<Table> {
    let model = cfg.model()?;
    let mc_cfg = cfg.mc_config(seed)?;
    let x = cfg.contract.x;
    let (a, b) = (cfg.mc.exit_a, cfg.mc.exit_b);
    if !(0.0 < a && a < x && x < b) {
        return Err(Error::Config(format!("exit band needs 0 < exit_a < x < exit_b, got {a}, {x}, {b}")));
    }
    let valuation = GameValuation::solve(&model, &cfg.contract.terms()?, &cfg.solver_options())?;
    let d = cfg.output.precision;
    let mut table = Table::new(&["check", "analytic", "mc_mean", "mc_stderr", "pass"]);
    let mut push = |check: String, analytic: f64, e: &McEstimate, pass: &str| {
        table.rows.push(vec![check, format_sig(analytic, d), format_sig(e.mean, d), format_sig(e.stderr, d), pass.into()]);
    };
    let verdict = |ok: bool| if ok { "true" } else { "false" };

    let zeta = valuation.scale.zeta(x);
    let e = mc::estimate_default_transform(&model, x, &mc_cfg)?;
    push("default_transform".into(), zeta, &e, verdict(e.agrees_with(zeta, 3.0)));

    let Some(kernel) = valuation.kernel() else {
        // Exit identities need only the model; any kernel shape works.
        let kernel = crate::kernel::GameKernel::with_scale(
            model,
            valuation.scale.clone(),
            crate::kernel::GameTerms::new(1.0, 1.0, 0.0, 0.5)?,
        );
        push_exit_rows(&kernel, x, a, b, &mc_cfg, &mut push)?;
        return Ok(table);
    };
    push_exit_rows(kernel, x, a, b, &mc_cfg, &mut push)?;

    let sol = valuation.solution().expect("game solution");
    let analytic = crate::valuation::game_value(kernel, sol, x)?;
    if sol.a_star > 0.0 {
        let e = mc::estimate_game_value(kernel, x, sol.a_star, sol.b_star, &mc_cfg)?;
        push("game_value".into(), analytic, &e, verdict(e.agrees_with(analytic, 3.0)));
        if sol.nash {
            let report = mc::nash_deviation_test(kernel, sol, x, &cfg.mc.deviation_factors, &mc_cfg)?;
            for dev in &report.deviations {
                let who = match dev.deviator {
                    mc::Deviator::Buyer => "buyer",
                    mc::Deviator::Seller => "seller",
                };
                push(format!("{who}_deviation_{}", format_barrier(dev.level, 6)), analytic, &dev.estimate, verdict(dev.pass));
            }
        }
    } else {
        let deltas: Vec<f64> = cfg.mc.deltas.iter().copied().filter(|&l| l > 0.0 && l < x).collect();
        for (delta, e) in mc::epsilon_trend(kernel, sol, x, &deltas, &mc_cfg)? {
            push(format!("seller_delta_{}", format_sig(delta, 6)), analytic, &e, "trend");
        }
    }
    Ok(table)
}

fn push_exit_rows<F>(
    kernel: &crate::kernel::GameKernel,
    x: f64,
    a: f64,
    b: f64,
    mc_cfg: &McConfig,
    push: &mut F,
) -> Result<()>
where
    F: FnMut(String, f64, &McEstimate, &str),
{
    let exact = kernel.exit_identities(x, a, Barrier::Finite(b))?;
    let est = mc::estimate_exit_triple(&kernel.model, x, a, b, mc_cfg)?;
    for (name, analytic, e) in [
        ("exit_up", exact.up, est.up),
        ("exit_down", exact.down, est.down),
        ("exit_jump_default", exact.jump_default, est.jump_default),
    ] {
        push(name.into(), analytic, &e, if e.agrees_with(analytic, 3.0) { "true" } else { "false" });
    }
    Ok(())
}

/// Where a command's output goes: `--out`, then `output.path`, then stdout.
pub fn output_target(cli_out: Option<&Path>, cfg: &RunConfig) -> Option<PathBuf> {
    cli_out.map(Path::to_path_buf).or_else(|| cfg.output.path.clone())
}
