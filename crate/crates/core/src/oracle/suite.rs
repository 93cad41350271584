//! The validation suite: exact tables against numeric quadrature, summed
//! energy series against the grid eigensolver.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fd::{ground_energy_fd, GridSpec};
use super::quad::{numeric_dbar_1d, numeric_dbar_radial, QuadratureConfig};
use crate::error::{Error, Result};
use crate::green1d::apply_dbar_table;
use crate::iterate1d::{run, Problem1D};
use crate::poly1d::Poly1D;
use crate::report::Engine;
use crate::scalar::ParamScalar;
use crate::stark3d::{apply_dbar_radial, radial_moment, AngularPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Relative,
    Absolute,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleRow {
    pub label: String,
    pub value_table: Option<f64>,
    /// `None` when the oracle failed, see `error`.
    pub value_oracle: Option<f64>,
    pub abs_err: Option<f64>,
    pub rel_err: Option<f64>,
    pub metric: Metric,
    pub tolerance: f64,
    pub passed: bool,
    /// Set when the oracle itself failed; the row then counts as failed.
    pub error: Option<String>,
}

impl OracleRow {
    fn compare(
        label: String,
        table: Result<f64>,
        oracle: Result<f64>,
        metric: Metric,
        tolerance: f64,
    ) -> Self {
        match table.and_then(|t| oracle.map(|o| (t, o))) {
            Ok((table, value)) => {
                let abs_err = (value - table).abs();
                let rel_err = if table == 0.0 {
                    abs_err
                } else {
                    abs_err / table.abs()
                };
                let measured = match metric {
                    Metric::Relative => rel_err,
                    Metric::Absolute => abs_err,
                };
                Self {
                    label,
                    value_table: Some(table),
                    value_oracle: Some(value),
                    abs_err: Some(abs_err),
                    rel_err: Some(rel_err),
                    metric,
                    tolerance,
                    passed: measured < tolerance,
                    error: None,
                }
            }
            Err(e) => Self {
                label,
                value_table: None,
                value_oracle: None,
                abs_err: None,
                rel_err: None,
                metric,
                tolerance,
                passed: false,
                error: Some(e.to_string()),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteConfig {
    pub g_value: f64,
    pub points: Vec<f64>,
    /// Highest `n` in the monomials `x^{2n}`, `x^{2n+1}` and `r^n`.
    pub max_power: u32,
    pub quadrature: QuadratureConfig,
    /// Grid in oscillator units, see [`GridSpec::for_coupling`].
    pub grid: GridSpec,
    /// Coarse grid for the convergence-order check; refined once.
    pub convergence_grid: GridSpec,
    pub linear_lambda: f64,
    pub cubic_eps: f64,
    pub dbar_1d_tol: f64,
    pub dbar_radial_tol: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            g_value: 1.0,
            points: vec![0.5, 1.0, 2.0],
            max_power: 4,
            quadrature: QuadratureConfig::default(),
            grid: GridSpec::default(),
            convergence_grid: GridSpec {
                half_width: 12.0,
                points: 1201,
            },
            linear_lambda: 0.01,
            cubic_eps: 0.02,
            dbar_1d_tol: 1e-8,
            dbar_radial_tol: 1e-7,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.g_value.is_nan() || self.g_value <= 0.0 {
            return Err(Error::Config(format!(
                "g_value must be positive, got {}",
                self.g_value
            )));
        }
        self.quadrature.validate()?;
        self.grid.validate()?;
        self.convergence_grid.validate()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub g_value: f64,
    pub rows: Vec<OracleRow>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    /// Largest relative error over the rows measured relatively.
    pub fn max_rel_err(&self) -> f64 {
        self.rows
            .iter()
            .filter(|r| r.metric == Metric::Relative)
            .filter_map(|r| r.rel_err)
            .fold(0.0, f64::max)
    }

    pub fn failures(&self) -> impl Iterator<Item = &OracleRow> {
        self.rows.iter().filter(|r| !r.passed)
    }
}

#[derive(Clone, Copy, Debug)]
enum Check {
    Dbar1d { power: u32, x: f64 },
    DbarRadial { power: u32, r: f64 },
    Harmonic,
    Linear,
    Cubic,
    Convergence,
}

fn checks(cfg: &SuiteConfig, dbar: bool, energy: bool) -> Vec<Check> {
    let mut out = Vec::new();
    if dbar {
        for n in 0..=cfg.max_power {
            for &x in &cfg.points {
                if n > 0 {
                    out.push(Check::Dbar1d { power: 2 * n, x });
                    out.push(Check::DbarRadial { power: n, r: x });
                }
                out.push(Check::Dbar1d {
                    power: 2 * n + 1,
                    x,
                });
            }
        }
    }
    if energy {
        out.extend([
            Check::Harmonic,
            Check::Linear,
            Check::Cubic,
            Check::Convergence,
        ]);
    }
    out
}

fn exact_1d(power: u32, x: f64, g: f64) -> Result<f64> {
    let u = Poly1D::x_pow(power);
    let p = &u - &Poly1D::constant(u.gauss_mean());
    Ok(apply_dbar_table(&p)?.eval(x, g))
}

fn exact_radial(power: u32, r: f64, g: f64) -> Result<f64> {
    let p = &AngularPoly::monomial(power, 0, ParamScalar::one())
        - &AngularPoly::constant(radial_moment(power));
    let out = apply_dbar_radial(&p)?;
    // The mean-subtracted input carries equal and opposite Ω weights.
    if out.has_omega() {
        return Err(Error::CancellationFailure(out.omega_part().to_string()));
    }
    Ok(out.eval(r, 1.0, g))
}

fn run_check(check: Check, cfg: &SuiteConfig) -> OracleRow {
    let g = cfg.g_value;
    let quad = &cfg.quadrature;
    let harmonic = move |x: f64| 0.5 * g * g * x * x;
    let grid = cfg.grid.for_coupling(g);
    match check {
        Check::Dbar1d { power, x } => {
            let label = format!("dbar1d x^{power} at x={x}");
            let table = exact_1d(power, x, g);
            let oracle = numeric_dbar_1d(|z| z.powi(power as i32), x, g, quad);
            OracleRow::compare(label, table, oracle, Metric::Relative, cfg.dbar_1d_tol)
        }
        Check::DbarRadial { power, r } => {
            let label = format!("dbar_radial r^{power} at r={r}");
            let table = exact_radial(power, r, g);
            let oracle = numeric_dbar_radial(|s| s.powi(power as i32), r, g, quad);
            OracleRow::compare(label, table, oracle, Metric::Relative, cfg.dbar_radial_tol)
        }
        Check::Harmonic => OracleRow::compare(
            "fd harmonic ground energy".into(),
            Ok(0.5 * g),
            ground_energy_fd(harmonic, &grid),
            Metric::Absolute,
            1e-6,
        ),
        Check::Linear => {
            let lambda = cfg.linear_lambda;
            OracleRow::compare(
                format!("fd linear λ={lambda}"),
                energy_series(Problem1D::linear(2), lambda, g),
                ground_energy_fd(|x| harmonic(x) + lambda * x, &grid),
                Metric::Absolute,
                1e-6,
            )
        }
        Check::Cubic => {
            let eps = cfg.cubic_eps;
            OracleRow::compare(
                format!("fd cubic ε={eps}"),
                energy_series(Problem1D::odd_power(1, 2), eps, g),
                ground_energy_fd(
                    |x| harmonic(x) + eps * x.powi(3),
                    &below_barrier(grid, g * g / (3.0 * eps.abs())),
                ),
                Metric::Absolute,
                5e-6,
            )
        }
        Check::Convergence => {
            let coarse = &cfg.convergence_grid.for_coupling(g);
            let factor = ground_energy_fd(harmonic, coarse).and_then(|e1| {
                let e2 = ground_energy_fd(harmonic, &coarse.refined())?;
                Ok((e1 - 0.5 * g) / (e2 - 0.5 * g))
            });
            OracleRow::compare(
                "fd error ratio on halving h".into(),
                Ok(4.0),
                factor,
                Metric::Absolute,
                0.5,
            )
        }
    }
}

/// The cubic well leaks past `|x| = g²/(3ε)`; keep the walls inside it.
fn below_barrier(grid: GridSpec, barrier: f64) -> GridSpec {
    if grid.half_width <= barrier {
        return grid;
    }
    GridSpec {
        half_width: barrier,
        ..grid
    }
}

/// `g/2 + Δ(ε)` from the revised engine, exact through the problem's cap.
pub fn energy_series(problem: Problem1D, eps: f64, g: f64) -> Result<f64> {
    let report = run(&problem, Engine::Revised)?;
    Ok(0.5 * g + report.final_delta().eval(eps, g))
}

fn run_checks(cfg: &SuiteConfig, list: Vec<Check>) -> Result<SuiteReport> {
    cfg.validate()?;
    let rows = list.into_par_iter().map(|c| run_check(c, cfg)).collect();
    Ok(SuiteReport {
        g_value: cfg.g_value,
        rows,
    })
}

/// Table-vs-quadrature rows for both `D̄` realizations.
pub fn dbar_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    run_checks(cfg, checks(cfg, true, false))
}

/// Grid-eigensolver rows.
pub fn energy_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    run_checks(cfg, checks(cfg, false, true))
}

pub fn full_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    run_checks(cfg, checks(cfg, true, true))
}
