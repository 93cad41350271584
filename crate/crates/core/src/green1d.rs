//! Green operators on the line for the Gaussian trajectory `S = ½gx²`.
//!
//! `C x^k = x^k/(gk)` and `D̄ = (1+CT)⁻¹C` with `T = -½ d²/dx²`. `D̄` has two
//! independent realizations: closed-form coefficient tables (Γ for even
//! powers, γ for odd powers) and a terminating Neumann series.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::poly1d::Poly1D;
use crate::scalar::{rat, Coeff, EpsSeries, ParamScalar, Rational};

fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

/// `Γ_{m n}` from the general product formula, zero outside `1 ≤ m ≤ n`.
pub fn big_gamma(m: u32, n: u32) -> ParamScalar {
    if m == 0 || m > n {
        return ParamScalar::zero();
    }
    let num: BigInt = (m + 1..=n).map(|j| int(2 * j as i64 - 1)).product();
    let span = n - m + 1;
    let den = int(m as i64) * int(2).pow(span);
    ParamScalar::monomial(Rational::new(num, den), -(span as i32))
}

/// `γ_{m n}` from the general product formula, zero for `m > n`.
pub fn small_gamma(m: u32, n: u32) -> ParamScalar {
    if m > n {
        return ParamScalar::zero();
    }
    let num: BigInt = (m + 1..=n).map(|j| int(j as i64)).product();
    let span = n - m + 1;
    ParamScalar::monomial(Rational::new(num, int(2 * m as i64 + 1)), -(span as i32))
}

/// Precomputed Γ/γ rows up to `n_max`.
#[derive(Clone, Debug)]
pub struct GammaTable {
    n_max: u32,
    even: BTreeMap<(u32, u32), ParamScalar>,
    odd: BTreeMap<(u32, u32), ParamScalar>,
}

impl GammaTable {
    /// Build the tables and check the special rows against their closed forms.
    ///
    /// Panics if a special row disagrees with the product formula, which
    /// would mean the formulas themselves are wrong.
    pub fn new(n_max: u32) -> Self {
        let mut even = BTreeMap::new();
        let mut odd = BTreeMap::new();
        for n in 0..=n_max {
            for m in 0..=n {
                let big = big_gamma(m, n);
                if !big.is_zero() {
                    even.insert((m, n), big);
                }
                odd.insert((m, n), small_gamma(m, n));
            }
        }
        let table = Self { n_max, even, odd };
        table.check_special_rows();
        table
    }

    fn check_special_rows(&self) {
        for n in 1..=self.n_max {
            let nn = n as i64;
            // Γ_{nn} = 1/(2gn)
            assert_eq!(self.even(n, n), ParamScalar::monomial(rat(1, 2 * nn), -1));
            if n >= 2 {
                // Γ_{n-1,n} = (2n-1)/(2g²(2n-2))
                assert_eq!(
                    self.even(n - 1, n),
                    ParamScalar::monomial(rat(2 * nn - 1, 2 * (2 * nn - 2)), -2)
                );
            }
            // Γ_{1n} = (2n-1)!!/(2g)^n
            assert_eq!(self.even(1, n), crate::poly1d::gauss_moment(n));
            // γ_{n-1,n} = n/(g²(2n-1))
            assert_eq!(
                self.odd(n - 1, n),
                ParamScalar::monomial(rat(nn, 2 * nn - 1), -2)
            );
        }
        for n in 0..=self.n_max {
            let nn = n as i64;
            assert_eq!(
                self.odd(n, n),
                ParamScalar::monomial(rat(1, 2 * nn + 1), -1)
            );
            let fact: BigInt = (1..=nn).map(int).product();
            assert_eq!(
                self.odd(0, n),
                ParamScalar::monomial(Rational::from_integer(fact), -(n as i32 + 1))
            );
        }
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    /// `Γ_{m n}`; zero for `m > n` and `m = 0`.
    pub fn even(&self, m: u32, n: u32) -> ParamScalar {
        match self.even.get(&(m, n)) {
            Some(s) => s.clone(),
            None if n > self.n_max => big_gamma(m, n),
            None => ParamScalar::zero(),
        }
    }

    /// `γ_{m n}`; zero for `m > n`.
    pub fn odd(&self, m: u32, n: u32) -> ParamScalar {
        match self.odd.get(&(m, n)) {
            Some(s) => s.clone(),
            None if n > self.n_max => small_gamma(m, n),
            None => ParamScalar::zero(),
        }
    }
}

/// `C x^k = x^k/(gk)`; a constant term is rejected.
pub fn apply_c(p: &Poly1D) -> Result<Poly1D> {
    let c0 = p.coeff(0);
    if !c0.is_zero() {
        return Err(Error::DivergentInput(c0.to_string()));
    }
    Ok(Poly1D::from_terms(p.terms().map(|(k, s)| {
        (k, s * &ParamScalar::monomial(rat(1, k as i64), -1))
    })))
}

/// `T = -½ d²/dx²`
pub fn apply_t(p: &Poly1D) -> Poly1D {
    p.differentiate()
        .differentiate()
        .scaled(&ParamScalar::constant(rat(-1, 2)))
}

fn require_mean_zero(p: &Poly1D) -> Result<()> {
    let mean = p.gauss_mean();
    if mean.is_zero() {
        Ok(())
    } else {
        Err(Error::MeanNotSubtracted(mean.to_string()))
    }
}

/// `D̄ p` through the Γ/γ tables. `p` must have zero Gaussian mean.
pub fn apply_dbar_table(p: &Poly1D) -> Result<Poly1D> {
    require_mean_zero(p)?;
    let n_max = p.degree().unwrap_or(0) / 2;
    let table = GammaTable::new(n_max);
    apply_dbar_with(&table, p)
}

/// Same as [`apply_dbar_table`] with a caller-provided table.
pub fn apply_dbar_with(table: &GammaTable, p: &Poly1D) -> Result<Poly1D> {
    require_mean_zero(p)?;
    let mut out = Poly1D::zero();
    for (k, c) in p.terms() {
        let n = k / 2;
        if k % 2 == 0 {
            // x^{2n} = (x^{2n} - Γ_{1n}) + Γ_{1n}; the constants sum to the
            // (vanishing) mean, so only the first part contributes.
            for m in 1..=n {
                out = &out + &Poly1D::monomial(2 * m, c * &table.even(m, n));
            }
        } else {
            for m in 0..=n {
                out = &out + &Poly1D::monomial(2 * m + 1, c * &table.odd(m, n));
            }
        }
    }
    Ok(out)
}

/// `D̄ p = Σ_j (-CT)^j C p`.
///
/// `CT` lowers the degree by two, so the sum terminates. Constants reached by
/// `C` are collected into the formal `D̄·1` channel; for a mean-zero input the
/// collected weight is zero and the channel drops out.
pub fn apply_dbar_neumann(p: &Poly1D) -> Result<Poly1D> {
    let mut result = Poly1D::zero();
    let mut omega = ParamScalar::zero();
    let mut current = p.clone();
    while !current.is_zero() {
        let c0 = current.coeff(0);
        omega = &omega + &c0;
        let nonconst = &current - &Poly1D::constant(c0);
        let term = apply_c(&nonconst)?;
        current = -&apply_t(&term);
        result = &result + &term;
    }
    if omega.is_zero() {
        Ok(result)
    } else {
        Err(Error::DivergentInput(format!("D̄·1 channel weight {omega}")))
    }
}

/// `gx·u' - ½u'' - w`, zero when `u = D̄w`.
pub fn green_residual(u: &Poly1D, w: &Poly1D) -> Poly1D {
    let gx_du = u.differentiate().shift(1).scaled(&ParamScalar::g_pow(1));
    &(&gx_du + &apply_t(u)) - w
}

/// Apply the table `D̄` to every ε-order.
pub fn apply_dbar_series(table: &GammaTable, p: &EpsSeries<Poly1D>) -> Result<EpsSeries<Poly1D>> {
    p.try_map(|c| apply_dbar_with(table, c))
}

/// Largest `n` such that `x^{2n}` or `x^{2n+1}` appears in `p`.
pub fn table_rows_needed(p: &EpsSeries<Poly1D>) -> u32 {
    p.coeffs()
        .iter()
        .filter_map(Poly1D::degree)
        .max()
        .map_or(0, |d| d / 2)
}
