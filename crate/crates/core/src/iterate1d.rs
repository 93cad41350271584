//! Revised and old iterations for `H = -½d²/dx² + ½g²x² + εU(x)`.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::green1d::{apply_dbar_series, apply_t, table_rows_needed, GammaTable};
use crate::poly1d::{differentiate, gauss_mean, Poly1D};
use crate::report::{agreement_order, Engine, IterationReport, Step};
use crate::scalar::{rat, series_div, Coeff, EpsSeries, ParamScalar};

pub const DEFAULT_ORDER_CAP: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "p", rename_all = "kebab-case")]
pub enum PotentialKind {
    /// `U = x^{2p}`
    EvenPower(u32),
    /// `U = x^{2p+1}`
    OddPower(u32),
    Explicit,
}

/// A 1D problem; the perturbation carries one implicit power of ε.
#[derive(Clone, Debug, PartialEq)]
pub struct Problem1D {
    pub kind: PotentialKind,
    pub perturbation: Poly1D,
    pub order_cap: usize,
    pub max_iter: usize,
}

impl Problem1D {
    pub fn even_power(p: u32, order_cap: usize) -> Self {
        Self::new(PotentialKind::EvenPower(p), Poly1D::x_pow(2 * p), order_cap)
    }

    pub fn odd_power(p: u32, order_cap: usize) -> Self {
        Self::new(
            PotentialKind::OddPower(p),
            Poly1D::x_pow(2 * p + 1),
            order_cap,
        )
    }

    /// `U = λx`, the exactly solvable shifted oscillator.
    pub fn linear(order_cap: usize) -> Self {
        Self::odd_power(0, order_cap)
    }

    pub fn explicit(u: Poly1D, order_cap: usize) -> Self {
        Self::new(PotentialKind::Explicit, u, order_cap)
    }

    fn new(kind: PotentialKind, perturbation: Poly1D, order_cap: usize) -> Self {
        Self {
            kind,
            perturbation,
            order_cap,
            max_iter: order_cap + 2,
        }
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter.max(1);
        self
    }

    /// `εU` as a series at the given cap.
    pub fn u_series(&self, cap: usize) -> EpsSeries<Poly1D> {
        EpsSeries::monomial(1, self.perturbation.clone(), cap)
    }
}

/// Engine state after step `n`: `Δ_n` plus `τ_n` (revised) or `f_n` (old).
#[derive(Clone, Debug, PartialEq)]
pub struct State1D {
    pub n: usize,
    pub delta: EpsSeries<ParamScalar>,
    pub state: EpsSeries<Poly1D>,
}

impl State1D {
    pub fn initial(engine: Engine, cap: usize) -> Self {
        let state = match engine {
            Engine::Revised => EpsSeries::zero(cap),
            Engine::Old => EpsSeries::constant(Poly1D::one(), cap),
        };
        Self {
            n: 0,
            delta: EpsSeries::zero(cap),
            state,
        }
    }
}

/// Grows its Γ/γ table on demand.
#[derive(Debug)]
struct TableCache(GammaTable);

impl TableCache {
    fn new() -> Self {
        Self(GammaTable::new(4))
    }

    fn dbar(&mut self, p: &EpsSeries<Poly1D>) -> Result<EpsSeries<Poly1D>> {
        let rows = table_rows_needed(p);
        if rows > self.0.n_max() {
            self.0 = GammaTable::new(rows.max(2 * self.0.n_max()));
        }
        apply_dbar_series(&self.0, p)
    }
}

fn half() -> ParamScalar {
    ParamScalar::constant(rat(1, 2))
}

/// `U − ½(τ')²`, the integrand of the revised energy.
fn revised_source(u: &EpsSeries<Poly1D>, tau: &EpsSeries<Poly1D>) -> EpsSeries<Poly1D> {
    let dtau = differentiate(tau);
    u.sub(&dtau.mul(&dtau).scale(&half()))
}

pub fn revised_step(problem: &Problem1D, prev: &State1D) -> Result<State1D> {
    revised_step_cached(problem, prev, &mut TableCache::new())
}

fn revised_step_cached(
    problem: &Problem1D,
    prev: &State1D,
    tables: &mut TableCache,
) -> Result<State1D> {
    let cap = problem.order_cap;
    let source = revised_source(&problem.u_series(cap), &prev.state);
    let delta = gauss_mean(&source);
    let arg = source.sub(&delta.map(|d| Poly1D::constant(d.clone())));
    let tau = tables.dbar(&arg)?;
    Ok(State1D {
        n: prev.n + 1,
        delta,
        state: tau,
    })
}

pub fn old_step(problem: &Problem1D, prev: &State1D) -> Result<State1D> {
    old_step_cached(problem, prev, &mut TableCache::new())
}

fn old_step_cached(
    problem: &Problem1D,
    prev: &State1D,
    tables: &mut TableCache,
) -> Result<State1D> {
    let cap = problem.order_cap;
    let u = problem.u_series(cap);
    let f = &prev.state;
    let delta = series_div(&gauss_mean(&u.mul(f)), &gauss_mean(f))?;
    let arg = delta.map(|d| Poly1D::constant(d.clone())).sub(&u).mul(f);
    let correction = tables.dbar(&arg)?;
    let state = EpsSeries::constant(Poly1D::one(), cap).add(&correction);
    Ok(State1D {
        n: prev.n + 1,
        delta,
        state,
    })
}

/// `gxτ' + ½((τ')² − τ'') − (εU − Δ)`, evaluated without truncation loss
/// (cap doubled).
pub fn riccati_residual(
    problem: &Problem1D,
    tau: &EpsSeries<Poly1D>,
    delta: &EpsSeries<ParamScalar>,
) -> EpsSeries<Poly1D> {
    let cap = 2 * tau.cap();
    let tau = tau.with_cap(cap);
    let dtau = differentiate(&tau);
    let drift = dtau.map(|p| p.shift(1).scaled(&ParamScalar::g_pow(1)));
    let quad = dtau.mul(&dtau).scale(&half());
    let lap = tau.map(apply_t);
    let rhs = problem
        .u_series(cap)
        .sub(&delta.with_cap(cap).map(|d| Poly1D::constant(d.clone())));
    drift.add(&quad).add(&lap).sub(&rhs)
}

/// `gxf' − ½f'' − (Δ − εU)f`, the linear equation obeyed by `f = e^{−τ}`.
pub fn linear_residual(
    problem: &Problem1D,
    f: &EpsSeries<Poly1D>,
    delta: &EpsSeries<ParamScalar>,
) -> EpsSeries<Poly1D> {
    let cap = f.cap();
    let drift = differentiate(f).map(|p| p.shift(1).scaled(&ParamScalar::g_pow(1)));
    let lap = f.map(apply_t);
    let factor = delta
        .map(|d| Poly1D::constant(d.clone()))
        .sub(&problem.u_series(cap));
    drift.add(&lap).sub(&factor.mul(f))
}

/// Iterate until `state_n == state_{n−1}` or `max_iter` steps.
pub fn run(problem: &Problem1D, engine: Engine) -> Result<IterationReport<Poly1D>> {
    let mut tables = TableCache::new();
    let mut state = State1D::initial(engine, problem.order_cap);
    let mut steps = Vec::new();
    for _ in 0..problem.max_iter.max(1) {
        let next = match engine {
            Engine::Revised => revised_step_cached(problem, &state, &mut tables)?,
            Engine::Old => old_step_cached(problem, &state, &mut tables)?,
        };
        let residual = match engine {
            Engine::Revised => riccati_residual(problem, &next.state, &next.delta),
            Engine::Old => linear_residual(problem, &next.state, &next.delta),
        };
        let fixed_point = next.state == state.state;
        steps.push(Step {
            n: next.n,
            delta: next.delta.clone(),
            state: next.state.clone(),
            fixed_point,
            residual_order: residual.valuation(),
            delta_stable_through: agreement_order(&next.delta, &state.delta),
        });
        state = next;
        if fixed_point {
            break;
        }
    }
    Ok(IterationReport {
        engine,
        order_cap: problem.order_cap,
        max_iter: problem.max_iter,
        steps,
    })
}

/// `e^{−τ}` expanded through the cap.
pub fn expand_wavefunction(tau: &EpsSeries<Poly1D>) -> EpsSeries<Poly1D> {
    tau.exp_neg()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: i64, d: i64, k: i32) -> ParamScalar {
        ParamScalar::monomial(rat(n, d), k)
    }

    fn steps(problem: &Problem1D, engine: Engine, n: usize) -> State1D {
        let mut s = State1D::initial(engine, problem.order_cap);
        for _ in 0..n {
            s = match engine {
                Engine::Revised => revised_step(problem, &s).unwrap(),
                Engine::Old => old_step(problem, &s).unwrap(),
            };
        }
        s
    }

    #[test]
    fn linear_revised_steps() {
        let problem = Problem1D::linear(4);
        let s1 = steps(&problem, Engine::Revised, 1);
        assert!(s1.delta.is_zero());
        assert_eq!(
            s1.state,
            EpsSeries::monomial(1, Poly1D::monomial(1, g(1, 1, -1)), 4)
        );
        let s2 = revised_step(&problem, &s1).unwrap();
        assert_eq!(s2.delta, EpsSeries::monomial(2, g(-1, 2, -2), 4));
        assert_eq!(s2.state, s1.state);
    }

    #[test]
    fn quartic_delta2() {
        let s2 = steps(&Problem1D::even_power(2, 2), Engine::Revised, 2);
        let expect =
            EpsSeries::from_coeffs(vec![ParamScalar::zero(), g(3, 4, -2), g(-21, 8, -5)], 2);
        assert_eq!(s2.delta, expect);
    }

    #[test]
    fn linear_old_steps() {
        let problem = Problem1D::linear(4);
        let s1 = steps(&problem, Engine::Old, 1);
        let f1 = EpsSeries::from_coeffs(vec![Poly1D::one(), Poly1D::monomial(1, g(-1, 1, -1))], 4);
        assert_eq!(s1.state, f1);
        let s2 = old_step(&problem, &s1).unwrap();
        assert_eq!(s2.delta.coeff(2), &g(-1, 2, -2));
        assert_ne!(s2.state, s1.state);
    }

    #[test]
    fn zero_perturbation() {
        let problem = Problem1D::explicit(Poly1D::zero(), 3);
        for engine in [Engine::Revised, Engine::Old] {
            let report = run(&problem, engine).unwrap();
            assert_eq!(report.steps.len(), 1);
            assert!(report.reached_fixed_point());
            assert!(report.final_delta().is_zero());
        }
    }

    #[test]
    fn run_terminates_for_linear() {
        let report = run(&Problem1D::linear(6), Engine::Revised).unwrap();
        assert_eq!(report.steps.len(), 2);
        assert!(report.reached_fixed_point());
        assert_eq!(report.last().residual_order, None);
    }

    #[test]
    fn expand_linear_tau() {
        let tau = EpsSeries::monomial(1, Poly1D::monomial(1, g(1, 1, -1)), 2);
        let e = expand_wavefunction(&tau);
        assert_eq!(e.coeff(0), &Poly1D::one());
        assert_eq!(e.coeff(1), &Poly1D::monomial(1, g(-1, 1, -1)));
        assert_eq!(e.coeff(2), &Poly1D::monomial(2, g(1, 2, -2)));
        assert_eq!(
            expand_wavefunction(&EpsSeries::zero(2)),
            EpsSeries::constant(Poly1D::one(), 2)
        );
    }

    #[test]
    fn residual_vanishes_through_step_order() {
        for problem in [
            Problem1D::odd_power(1, 4),
            Problem1D::even_power(2, 4),
            Problem1D::even_power(1, 4),
        ] {
            let mut s = State1D::initial(Engine::Revised, 4);
            for n in 1..=5 {
                s = revised_step(&problem, &s).unwrap();
                let r = riccati_residual(&problem, &s.state, &s.delta);
                let v = r.valuation().unwrap_or(usize::MAX);
                assert!(
                    v > n.min(4),
                    "{:?} step {n}: residual at order {v}",
                    problem.kind
                );
            }
        }
    }
}
