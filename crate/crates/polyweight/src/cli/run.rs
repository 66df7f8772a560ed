//! Dispatch from a config to the computational modules.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::config::{Command, ExperimentConfig};
use super::table::{Cell, Provenance, Table};
use super::CliError;
use crate::approx::{fourier_decay_report, norm_equivalence_k};
use crate::construct::{
    divergence_report, neg11_schedule, staircase_bernstein_check, staircase_weight, ConstructError,
    DEFAULT_K_CAP,
};
use crate::extremal::{
    algebraic_markov_constant, bernstein_l2, bernstein_lp, mrs_number, mrs_residual,
    nikolskii_ratio, remez_constant_fit, ExceptionalKind, ExtremalReport, RemezFamily,
    SearchOptions,
};
use crate::quad::QuadConfig;
use crate::trigpoly::TrigPoly;
use crate::weights::{
    astar_constant, doubling_ratio, parse_weight, solve_x0, solve_x1, CompositeWeight,
    DoublingFactor, OmegaWeight,
};

pub const SCHEMA_VERSION: u32 = 1;
const TESTER_RESOLUTION: usize = 1024;
const RANDOM_TEST_POLYS: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowError {
    /// `None` when the failure concerns the whole run.
    pub n: Option<u64>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metric {
    pub name: String,
    pub value: Cell,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub command: Command,
    /// The config in its text form.
    pub config: String,
    pub table: Table,
    pub metrics: Vec<Metric>,
    pub checks: Vec<Check>,
    pub errors: Vec<RowError>,
    /// Rows left out on purpose, such as degrees above the evaluation cap.
    pub skipped: Vec<RowError>,
    /// Command-specific detail such as the full schedule.
    pub detail: serde_json::Value,
    pub wall_clock_seconds: f64,
    pub pass: bool,
    #[serde(skip)]
    pub plot_axes: (String, String),
}

struct Outcome {
    table: Table,
    metrics: Vec<Metric>,
    checks: Vec<Check>,
    errors: Vec<RowError>,
    skipped: Vec<RowError>,
    detail: serde_json::Value,
    plot_axes: (&'static str, &'static str),
}

impl Outcome {
    fn new(columns: &[&str], plot_axes: (&'static str, &'static str)) -> Self {
        Outcome {
            table: Table::new(columns),
            metrics: Vec::new(),
            checks: Vec::new(),
            errors: Vec::new(),
            skipped: Vec::new(),
            detail: serde_json::Value::Null,
            plot_axes,
        }
    }

    fn check(&mut self, name: impl Into<String>, pass: bool) {
        self.checks.push(Check {
            name: name.into(),
            pass,
        });
    }

    fn metric(&mut self, name: &str, value: Cell) {
        self.metrics.push(Metric {
            name: name.into(),
            value,
        });
    }

    fn fail(&mut self, n: Option<u64>, err: impl std::fmt::Display) {
        self.errors.push(RowError {
            n,
            message: err.to_string(),
        });
    }
}

/// Runs one experiment. Only an unparsable weight aborts; module errors are recorded per row.
pub fn run(cfg: &ExperimentConfig) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let weight = parse_weight(&cfg.weight)?;
    let outcome = match cfg.command {
        Command::Bernstein => constants(cfg, &weight, Constant::Bernstein),
        Command::Nikolskii => constants(cfg, &weight, Constant::Nikolskii),
        Command::Markov => constants(cfg, &weight, Constant::Markov),
        Command::Remez => remez(cfg, &weight),
        Command::Decay => decay(cfg, &weight),
        Command::EquivK => equivalence(cfg, &weight),
        Command::Counterexample => counterexample(cfg, &weight),
        Command::Mrs => mrs(cfg),
        Command::WeightInfo => weight_info(cfg, &weight),
        Command::Staircase => staircase(cfg),
    };
    let pass = outcome.errors.is_empty() && outcome.checks.iter().all(|c| c.pass);
    Ok(RunReport {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION"),
        command: cfg.command,
        config: cfg.to_string(),
        table: outcome.table,
        metrics: outcome.metrics,
        checks: outcome.checks,
        errors: outcome.errors,
        skipped: outcome.skipped,
        detail: outcome.detail,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        pass,
        plot_axes: (outcome.plot_axes.0.into(), outcome.plot_axes.1.into()),
    })
}

fn single_factor(w: &CompositeWeight) -> Option<&OmegaWeight> {
    match (w.factors.as_slice(), &w.doubling) {
        ([only], DoublingFactor::One) => Some(only),
        _ => None,
    }
}

#[derive(Clone, Copy)]
enum Constant {
    Bernstein,
    Nikolskii,
    Markov,
}

fn constants(cfg: &ExperimentConfig, w: &CompositeWeight, kind: Constant) -> Outcome {
    let mut out = Outcome::new(
        &["n", "constant_log", "constant_over_rate"],
        ("n", "constant_over_rate"),
    );
    let opts = SearchOptions {
        restarts: cfg.restarts,
        seed: cfg.seed,
    };
    let results: Vec<_> = cfg
        .n
        .par_iter()
        .map(|&n| {
            let n_usize = n as usize;
            let report: Result<ExtremalReport, _> = match kind {
                Constant::Bernstein if cfg.p == 2.0 => bernstein_l2(w, n_usize),
                Constant::Bernstein => bernstein_lp(w, n_usize, cfg.p, &opts),
                Constant::Nikolskii => nikolskii_ratio(w, n_usize, cfg.p, cfg.q, &opts),
                Constant::Markov => algebraic_markov_constant(w, n_usize, cfg.p, &opts),
            };
            (n, report)
        })
        .collect();
    for (n, report) in results {
        match report {
            Ok(r) => {
                out.table.push(vec![
                    Cell::input(n),
                    Cell::computed(r.constant_log),
                    Cell::computed(r.normalized),
                ]);
                out.check(format!("n={n} unflagged"), !r.flagged);
                if let Some(c) = cfg.c {
                    out.check(
                        format!("n={n} constant_over_rate <= {c}"),
                        r.normalized <= c,
                    );
                }
            }
            Err(e) => out.fail(Some(n), e),
        }
    }
    out
}

fn remez(cfg: &ExperimentConfig, w: &CompositeWeight) -> Outcome {
    let mut out = Outcome::new(&["n", "constant"], ("n", "constant"));
    for &n in &cfg.n {
        match remez_constant_fit(
            w,
            cfg.p,
            &[n as usize],
            RemezFamily::Random,
            ExceptionalKind::Intervals,
            cfg.samples,
            cfg.seed,
        ) {
            Ok(fit) => {
                out.table.push(vec![
                    Cell::input(n),
                    Cell::computed(fit.constant).with(Provenance::Fitted),
                ]);
                if let Some(c) = cfg.c {
                    out.check(format!("n={n} constant <= {c}"), fit.constant <= c);
                }
            }
            Err(e) => out.fail(Some(n), e),
        }
    }
    out
}

fn decay(cfg: &ExperimentConfig, w: &CompositeWeight) -> Outcome {
    let mut out = Outcome::new(
        &["n", "coeff_log", "n_x1", "censored"],
        ("n_x1", "coeff_log"),
    );
    let Some(omega) = single_factor(w) else {
        out.fail(None, "decay needs a single omega(...) factor");
        return out;
    };
    let (lo, hi) = (
        cfg.n.iter().min().copied().unwrap_or(1),
        cfg.n.iter().max().copied().unwrap_or(1),
    );
    match fourier_decay_report(omega, lo, hi) {
        Ok(report) => {
            for r in &report.rows {
                let coeff = Cell::computed(r.coeff_log);
                let coeff = if r.censored {
                    coeff.with(Provenance::Censored)
                } else {
                    coeff
                };
                out.table.push(vec![
                    Cell::input(r.n),
                    coeff,
                    Cell::computed(r.n_x1),
                    Cell::flag(r.censored),
                ]);
            }
            out.metric(
                "fitted_c",
                Cell::computed(report.fitted_c).with(Provenance::Fitted),
            );
            out.check("bound holds at half the fitted constant", report.pass);
        }
        Err(e) => out.fail(None, e),
    }
    out
}

fn equivalence(cfg: &ExperimentConfig, w: &CompositeWeight) -> Outcome {
    let mut out = Outcome::new(&["n", "K"], ("n", "K"));
    let unit = CompositeWeight::unit();
    for &n in &cfg.n {
        let degree = n as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut polys: Vec<TrigPoly> = (0..=degree).map(TrigPoly::cos_k).collect();
        polys.extend((0..RANDOM_TEST_POLYS).map(|_| {
            let v: Vec<f64> = (0..2 * degree + 1)
                .map(|_| rng.gen_range(-1.0..1.0))
                .collect();
            TrigPoly::from_vector(degree, &v)
        }));
        match norm_equivalence_k(w, &unit, cfg.p, degree, cfg.k_max, &polys) {
            Ok(r) => out.table.push(vec![Cell::input(n), Cell::count(r.k)]),
            Err(e) => out.fail(Some(n), e),
        }
    }
    out
}

fn counterexample(cfg: &ExperimentConfig, w: &CompositeWeight) -> Outcome {
    let mut out = Outcome::new(&["n", "K", "R", "LB", "b_over_a"], ("n", "R"));
    let Some(omega) = single_factor(w) else {
        out.fail(None, "counterexample needs a single omega(...) factor");
        return out;
    };
    let schedule = match neg11_schedule(omega, &cfg.n, DEFAULT_K_CAP) {
        Ok(s) => s,
        Err(e) => {
            out.fail(None, e);
            return out;
        }
    };
    out.detail = serde_json::to_value(&schedule).unwrap_or(serde_json::Value::Null);
    for (row, result) in schedule
        .rows
        .iter()
        .zip(divergence_report(w, &schedule, cfg.p))
    {
        match result {
            Ok(d) => {
                out.table.push(vec![
                    Cell::input(d.n),
                    Cell::count(d.k),
                    Cell::computed(d.ratio),
                    Cell::computed(d.lower_bound.unwrap_or(f64::NAN)),
                    Cell::computed(d.b_over_a.unwrap_or(f64::NAN)),
                ]);
                out.check(format!("n={} R >= LB", d.n), d.pass);
            }
            Err(e @ ConstructError::InfeasibleDegree { .. }) => out.skipped.push(RowError {
                n: Some(row.n),
                message: e.to_string(),
            }),
            Err(e) => out.fail(Some(row.n), e),
        }
    }
    out
}

fn mrs(cfg: &ExperimentConfig) -> Outcome {
    let mut out = Outcome::new(
        &["n", "a", "one_minus_a_log", "residual"],
        ("n", "one_minus_a_log"),
    );
    let check_cfg = QuadConfig::default().with_tolerance(1e-12);
    let results: Vec<_> = cfg
        .n
        .par_iter()
        .map(|&n| (n, mrs_number(cfg.alpha, n)))
        .collect();
    let mut fit = Vec::new();
    for (n, a) in results {
        match a {
            Ok(a) => {
                let gap_log = (1.0 - a).ln();
                let residual = mrs_residual(cfg.alpha, n, a, &check_cfg);
                out.table.push(vec![
                    Cell::input(n),
                    Cell::computed(a),
                    Cell::computed(gap_log),
                    Cell::computed(residual),
                ]);
                out.check(
                    format!("n={n} residual <= {}", cfg.tol.max(1e-9)),
                    residual <= cfg.tol.max(1e-9),
                );
                fit.push(((n as f64).ln(), gap_log));
            }
            Err(e) => out.fail(Some(n), e),
        }
    }
    if fit.len() >= 2 {
        out.metric(
            "slope",
            Cell::computed(slope(&fit)).with(Provenance::Fitted),
        );
    }
    out
}

/// Least-squares slope of `y` on `x`.
pub fn slope(points: &[(f64, f64)]) -> f64 {
    let m = points.len() as f64;
    let (sx, sy) = points
        .iter()
        .fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let (num, den) = points.iter().fold((0.0, 0.0), |(n, d), &(x, y)| {
        (n + (x - mx) * (y - my), d + (x - mx) * (x - mx))
    });
    num / den
}

fn weight_info(cfg: &ExperimentConfig, w: &CompositeWeight) -> Outcome {
    let mut out = Outcome::new(&["n", "x0", "x1"], ("n", "x1"));
    match doubling_ratio(w, TESTER_RESOLUTION) {
        Ok(v) => out.metric("doubling_ratio", Cell::computed(v)),
        Err(e) => out.fail(None, e),
    }
    match astar_constant(w, TESTER_RESOLUTION) {
        Ok(v) => out.metric("astar_constant", Cell::computed(v)),
        Err(e) => out.fail(None, e),
    }
    let Some(first) = w.factors.first() else {
        return out;
    };
    for &n in &cfg.n {
        match (solve_x0(&first.f, n as f64), solve_x1(&first.f, n as f64)) {
            (Ok(x0), Ok(x1)) => {
                out.table
                    .push(vec![Cell::input(n), Cell::computed(x0), Cell::computed(x1)])
            }
            (Err(e), _) | (_, Err(e)) => out.fail(Some(n), e),
        }
    }
    out
}

fn staircase(cfg: &ExperimentConfig) -> Outcome {
    let mut out = Outcome::new(
        &["n", "K", "log_alpha", "constant", "constant_scaled"],
        ("n", "constant"),
    );
    let n_max = cfg.n.iter().max().copied().unwrap_or(1);
    let result = staircase_weight(cfg.gamma, n_max)
        .and_then(|sw| staircase_bernstein_check(&sw, &cfg.n, cfg.samples, cfg.seed));
    match result {
        Ok(report) => {
            for r in &report.rows {
                out.table.push(vec![
                    Cell::input(r.n),
                    Cell::count(r.k),
                    Cell::computed(r.log_alpha),
                    Cell::computed(r.constant).with(Provenance::Fitted),
                    Cell::computed(r.constant_scaled).with(Provenance::Fitted),
                ]);
                out.check(
                    format!("n={} scaled constant >= 10", r.n),
                    r.constant_scaled >= 10.0,
                );
            }
            out.metric(
                "constant",
                Cell::computed(report.constant).with(Provenance::Fitted),
            );
            out.check("constant stable across rows", report.stable);
        }
        Err(e) => out.fail(None, e),
    }
    out
}
