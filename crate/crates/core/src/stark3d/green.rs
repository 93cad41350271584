//! Radial `D̄` for the Coulomb trajectory `S = g²r` and the Green operator
//! `Ḡ = (1 + D̄T_α)⁻¹D̄`.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::angular::{measure_mean, radial_moment, AngularPoly};
use crate::error::{Error, Result};
use crate::scalar::{rat, Coeff, ParamScalar, Rational};

/// `Λ_{m,n} = (n+2)(n+1)⋯(m+2) / (m (2g²)^{n+1−m})` for `1 ≤ m ≤ n+1`.
pub fn lambda(m: u32, n: u32) -> ParamScalar {
    assert!(m >= 1 && m <= n + 1, "Λ_{{{m},{n}}} outside 1 ≤ m ≤ n+1");
    let num: BigInt = (m + 2..=n + 2).map(BigInt::from).product();
    let span = n + 1 - m;
    let den = BigInt::from(m) * BigInt::from(2).pow(span);
    ParamScalar::monomial(Rational::new(num, den), -2 * span as i32)
}

#[derive(Clone, Debug)]
pub struct LambdaTable {
    n_max: u32,
    entries: BTreeMap<(u32, u32), ParamScalar>,
}

impl LambdaTable {
    /// Panics if a special row disagrees with the general formula.
    pub fn new(n_max: u32) -> Self {
        let entries = (0..=n_max)
            .flat_map(|n| (1..=n + 1).map(move |m| ((m, n), lambda(m, n))))
            .collect();
        let table = Self { n_max, entries };
        for n in 0..=n_max {
            assert_eq!(
                table.get(n + 1, n),
                ParamScalar::constant(rat(1, n as i64 + 1))
            );
            let prod: BigInt = (3..=n + 2).map(BigInt::from).product();
            let expect =
                ParamScalar::monomial(Rational::new(prod, BigInt::from(2).pow(n)), -2 * n as i32);
            assert_eq!(table.get(1, n), expect);
            // The D̄·1 weight of r^n is its measure mean.
            assert_eq!(table.get(1, n), radial_moment(n));
        }
        table
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn get(&self, m: u32, n: u32) -> ParamScalar {
        match self.entries.get(&(m, n)) {
            Some(s) => s.clone(),
            None => lambda(m, n),
        }
    }
}

/// `D̄ r^n ξ^m = ξ^m (g⁻² Σ_{k=2}^{n+1} Λ_{k,n} r^k + Λ_{1,n} Ω)`; ξ is a
/// spectator since `D̄` is purely radial.
pub fn apply_dbar_radial(p: &AngularPoly) -> Result<AngularPoly> {
    if p.has_omega() {
        return Err(Error::OmegaInInput);
    }
    let table = LambdaTable::new(p.max_r_degree().unwrap_or(0));
    dbar_with(&table, p)
}

fn dbar_with(table: &LambdaTable, p: &AngularPoly) -> Result<AngularPoly> {
    if p.has_omega() {
        return Err(Error::OmegaInInput);
    }
    let inv_g2 = ParamScalar::g_pow(-2);
    let mut out = AngularPoly::zero();
    for ((n, m), c) in p.terms() {
        for k in 2..=n + 1 {
            out = &out + &AngularPoly::monomial(k, m, &(c * &table.get(k, n)) * &inv_g2);
        }
        out = &out + &AngularPoly::omega_term(m, c * &table.get(1, n));
    }
    Ok(out)
}

/// `Ḡ p` for a mean-zero, Ω-free `p`.
///
/// The Neumann series `Σ_j (−D̄T_α)^j D̄ p` is summed over finite parts only:
/// `T_α` lowers the r-degree by two and `D̄` raises it by one, so it stops.
/// The `Ω` pieces split off along the way are collected; their total must be
/// a multiple of `ξ`, which is absorbed by the harmonic mode `rξ` because
/// `(1 + D̄T_α)(rξ) = g²ξΩ`. Anything left over is a cancellation failure.
pub fn apply_g(p: &AngularPoly) -> Result<AngularPoly> {
    if p.has_omega() {
        return Err(Error::OmegaInInput);
    }
    let mean = measure_mean(p);
    if !mean.is_zero() {
        return Err(Error::MeanNotSubtracted(mean.to_string()));
    }
    let table = LambdaTable::new(p.max_r_degree().unwrap_or(0));

    let first = dbar_with(&table, p)?;
    let mut omega = first.omega_part();
    let mut current = first.finite_part();
    let mut result = current.clone();
    while !current.is_zero() {
        let next = -&dbar_with(&table, &super::angular::apply_talpha(&current)?)?;
        omega = &omega + &next.omega_part();
        current = next.finite_part();
        result = &result + &current;
    }

    let xi_weight = omega.omega_coeff(1);
    let residue = &omega - &AngularPoly::omega_term(1, xi_weight.clone());
    if !residue.is_zero() {
        return Err(Error::CancellationFailure(residue.to_string()));
    }
    let harmonic = &xi_weight * &ParamScalar::g_pow(-2);
    Ok(&result + &AngularPoly::monomial(1, 1, harmonic))
}

/// `r²(g²∂_r u + T u − w)`; vanishes identically when `u = Ḡw`.
pub fn green_residual_r2(u: &AngularPoly, w: &AngularPoly) -> Result<AngularPoly> {
    let drift = u.d_r().shift_r(2).scaled(&ParamScalar::g_pow(2));
    Ok(&(&drift + &u.r2_kinetic()?) - &w.shift_r(2))
}
