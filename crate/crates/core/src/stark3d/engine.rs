//! Both iterations for `H = -½∇² − g²/r + εr cosθ`.

use super::angular::{grad_dot, measure_mean, r2_grad_dot, AngularPoly};
use super::green::apply_g;
use crate::error::{Error, Result};
use crate::report::{agreement_order, Engine, IterationReport, Step};
use crate::scalar::{rat, series_div, Coeff, EpsSeries, ParamScalar};

/// `ε r ξ`
pub fn stark_perturbation(cap: usize) -> EpsSeries<AngularPoly> {
    EpsSeries::monomial(1, AngularPoly::monomial(1, 1, ParamScalar::one()), cap)
}

fn half() -> ParamScalar {
    ParamScalar::constant(rat(1, 2))
}

/// `(∇τ)²` order by order, truncated at the cap.
pub fn gradient_square_series(tau: &EpsSeries<AngularPoly>) -> Result<EpsSeries<AngularPoly>> {
    series_bilinear(tau, tau, grad_dot)
}

fn series_bilinear(
    a: &EpsSeries<AngularPoly>,
    b: &EpsSeries<AngularPoly>,
    op: fn(&AngularPoly, &AngularPoly) -> Result<AngularPoly>,
) -> Result<EpsSeries<AngularPoly>> {
    let cap = a.cap().min(b.cap());
    let mut coeffs = vec![AngularPoly::zero(); cap + 1];
    for i in 0..=cap {
        if a.coeff(i).is_zero() {
            continue;
        }
        for j in 0..=cap - i {
            if b.coeff(j).is_zero() {
                continue;
            }
            coeffs[i + j] = &coeffs[i + j] + &op(a.coeff(i), b.coeff(j))?;
        }
    }
    Ok(EpsSeries::from_coeffs(coeffs, cap))
}

fn constant_series(delta: &EpsSeries<ParamScalar>) -> EpsSeries<AngularPoly> {
    delta.map(|d| AngularPoly::constant(d.clone()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct StarkState {
    pub n: usize,
    pub delta: EpsSeries<ParamScalar>,
    pub state: EpsSeries<AngularPoly>,
}

impl StarkState {
    pub fn initial(engine: Engine, cap: usize) -> Self {
        let state = match engine {
            Engine::Revised => EpsSeries::zero(cap),
            Engine::Old => EpsSeries::constant(AngularPoly::one(), cap),
        };
        Self {
            n: 0,
            delta: EpsSeries::zero(cap),
            state,
        }
    }
}

fn apply_g_series(p: &EpsSeries<AngularPoly>) -> Result<EpsSeries<AngularPoly>> {
    p.try_map(|c| {
        let out = apply_g(c)?;
        // apply_g already refuses a leftover residue; this guards the contract.
        if out.has_omega() {
            return Err(Error::CancellationFailure(out.omega_part().to_string()));
        }
        Ok(out)
    })
}

/// `Δ_n = ⟨εrξ − ½(∇τ_{n−1})²⟩`, `τ_n = Ḡ[εrξ − Δ_n − ½(∇τ_{n−1})²]`.
pub fn revised_step(prev: &StarkState) -> Result<StarkState> {
    let cap = prev.state.cap();
    let source = stark_perturbation(cap).sub(&gradient_square_series(&prev.state)?.scale(&half()));
    let delta = source.map(measure_mean);
    let tau = apply_g_series(&source.sub(&constant_series(&delta)))?;
    Ok(StarkState {
        n: prev.n + 1,
        delta,
        state: tau,
    })
}

/// `Δ_n = ⟨εrξ f⟩/⟨f⟩`, `f_n = 1 + Ḡ[(Δ_n − εrξ) f_{n−1}]`.
pub fn old_step(prev: &StarkState) -> Result<StarkState> {
    let cap = prev.state.cap();
    let u = stark_perturbation(cap);
    let f = &prev.state;
    let delta = series_div(&u.mul(f).map(measure_mean), &f.map(measure_mean))?;
    let arg = constant_series(&delta).sub(&u).mul(f);
    let f_next = EpsSeries::constant(AngularPoly::one(), cap).add(&apply_g_series(&arg)?);
    Ok(StarkState {
        n: prev.n + 1,
        delta,
        state: f_next,
    })
}

/// `r²[g²∂_rτ + ½((∇τ)² − ∇²τ) − (εrξ − Δ)]` with the cap doubled.
pub fn riccati_residual_r2(
    tau: &EpsSeries<AngularPoly>,
    delta: &EpsSeries<ParamScalar>,
) -> Result<EpsSeries<AngularPoly>> {
    let cap = 2 * tau.cap();
    let tau = tau.with_cap(cap);
    let drift = tau.map(|t| t.d_r().shift_r(2).scaled(&ParamScalar::g_pow(2)));
    let quad = series_bilinear(&tau, &tau, r2_grad_dot)?.scale(&half());
    let kinetic = tau.try_map(AngularPoly::r2_kinetic)?;
    let rhs = stark_perturbation(cap)
        .sub(&constant_series(&delta.with_cap(cap)))
        .map(|p| p.shift_r(2));
    Ok(drift.add(&quad).add(&kinetic).sub(&rhs))
}

/// `r²[g²∂_r f + T f − (Δ − εrξ) f]`
pub fn linear_residual_r2(
    f: &EpsSeries<AngularPoly>,
    delta: &EpsSeries<ParamScalar>,
) -> Result<EpsSeries<AngularPoly>> {
    let cap = f.cap();
    let drift = f.map(|t| t.d_r().shift_r(2).scaled(&ParamScalar::g_pow(2)));
    let kinetic = f.try_map(AngularPoly::r2_kinetic)?;
    let factor = constant_series(delta).sub(&stark_perturbation(cap));
    let rhs = factor.mul(f).map(|p| p.shift_r(2));
    Ok(drift.add(&kinetic).sub(&rhs))
}

/// Iterate the Stark problem until a fixed point or `max_iter` steps.
pub fn run_stark(
    engine: Engine,
    order_cap: usize,
    max_iter: usize,
) -> Result<IterationReport<AngularPoly>> {
    if order_cap < 2 {
        return Err(Error::Config(format!(
            "Stark runs need an order cap ≥ 2, got {order_cap}"
        )));
    }
    let mut state = StarkState::initial(engine, order_cap);
    let mut steps = Vec::new();
    for _ in 0..max_iter.max(1) {
        let next = match engine {
            Engine::Revised => revised_step(&state)?,
            Engine::Old => old_step(&state)?,
        };
        let residual = match engine {
            Engine::Revised => riccati_residual_r2(&next.state, &next.delta)?,
            Engine::Old => linear_residual_r2(&next.state, &next.delta)?,
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
        order_cap,
        max_iter,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: i64, d: i64, k: i32) -> ParamScalar {
        ParamScalar::monomial(rat(n, d), k)
    }

    #[test]
    fn revised_first_two_steps() {
        let s1 = revised_step(&StarkState::initial(Engine::Revised, 2)).unwrap();
        assert!(s1.delta.is_zero());
        let tau1 = AngularPoly::from_terms([((2, 1), g(1, 2, -2)), ((1, 1), g(1, 1, -4))]);
        assert_eq!(s1.state.coeff(1), &tau1);
        let s2 = revised_step(&s1).unwrap();
        // −36/(2g²)⁴ = −9/(4g⁸)
        assert_eq!(s2.delta.coeff(2), &g(-9, 4, -8));
    }

    #[test]
    fn old_first_step_is_one_minus_tau1() {
        let s1 = old_step(&StarkState::initial(Engine::Old, 2)).unwrap();
        let r1 = revised_step(&StarkState::initial(Engine::Revised, 2)).unwrap();
        assert_eq!(
            s1.state,
            EpsSeries::constant(AngularPoly::one(), 2).sub(&r1.state)
        );
    }

    #[test]
    fn cap_below_two_rejected() {
        assert!(matches!(
            run_stark(Engine::Revised, 1, 3),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn revised_tau2_second_order() {
        let s1 = revised_step(&StarkState::initial(Engine::Revised, 2)).unwrap();
        let s2 = revised_step(&s1).unwrap();
        // −[r³(1+3ξ²)/(3(2g²)³) + 7r²(1+ξ²)/(2g²)⁴]
        let expect = AngularPoly::from_terms([
            ((3, 0), g(-1, 24, -6)),
            ((3, 2), g(-1, 8, -6)),
            ((2, 0), g(-7, 16, -8)),
            ((2, 2), g(-7, 16, -8)),
        ]);
        assert_eq!(s2.state.coeff(2), &expect);
        assert_eq!(s2.state.coeff(1), s1.state.coeff(1));
    }

    #[test]
    fn engines_agree_through_second_order() {
        let mut r = StarkState::initial(Engine::Revised, 2);
        let mut o = StarkState::initial(Engine::Old, 2);
        for _ in 0..2 {
            r = revised_step(&r).unwrap();
            o = old_step(&o).unwrap();
        }
        assert_eq!(r.state.exp_neg(), o.state);
        assert_eq!(r.delta, o.delta);
    }

    #[test]
    fn fourth_order_energy() {
        let report = run_stark(Engine::Revised, 4, 4).unwrap();
        let delta = report.final_delta();
        assert_eq!(delta.coeff(2), &g(-9, 4, -8));
        assert!(delta.coeff(3).is_zero());
        assert_eq!(delta.coeff(4), &g(-3555, 64, -20));
    }
}
