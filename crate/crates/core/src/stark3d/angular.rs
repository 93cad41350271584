//! Axially symmetric polynomials in `(r, ξ = cosθ)` plus the formal `D̄·1`
//! channel, and the differential operators acting on them.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::scalar::{impl_ring_ops, rat, Coeff, ParamScalar, Rational};

/// `Σ c_{nm} r^n ξ^m + Σ w_m ξ^m Ω`, where `Ω` stands for `D̄·1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AngularPoly {
    finite: BTreeMap<(u32, u32), ParamScalar>,
    omega: BTreeMap<u32, ParamScalar>,
}

fn accumulate<K: Ord + Copy>(map: &mut BTreeMap<K, ParamScalar>, key: K, s: &ParamScalar) {
    if s.is_zero() {
        return;
    }
    let sum = match map.get(&key) {
        Some(c) => c + s,
        None => s.clone(),
    };
    if sum.is_zero() {
        map.remove(&key);
    } else {
        map.insert(key, sum);
    }
}

fn int_scalar(n: i64) -> ParamScalar {
    ParamScalar::from_int(n)
}

/// `r²T_α ξ^m = m((m+1)/2 ξ^m − (m−1)/2 ξ^{m−2})` as `(power, coefficient)` pairs.
pub fn r2_talpha_xi(m: u32) -> Vec<(u32, Rational)> {
    let mi = m as i64;
    let mut out = Vec::new();
    if m == 0 {
        return out;
    }
    out.push((m, rat(mi * (mi + 1), 2)));
    if m >= 2 {
        out.push((m - 2, rat(-mi * (mi - 1), 2)));
    }
    out
}

impl AngularPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `s · r^n ξ^m`
    pub fn monomial(n: u32, m: u32, s: ParamScalar) -> Self {
        let mut p = Self::zero();
        accumulate(&mut p.finite, (n, m), &s);
        p
    }

    /// `s · ξ^m Ω`
    pub fn omega_term(m: u32, s: ParamScalar) -> Self {
        let mut p = Self::zero();
        accumulate(&mut p.omega, m, &s);
        p
    }

    pub fn constant(s: ParamScalar) -> Self {
        Self::monomial(0, 0, s)
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), ParamScalar)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (key, s) in terms {
            accumulate(&mut p.finite, key, &s);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.finite.is_empty() && self.omega.is_empty()
    }

    pub fn has_omega(&self) -> bool {
        !self.omega.is_empty()
    }

    pub fn coeff(&self, n: u32, m: u32) -> ParamScalar {
        self.finite.get(&(n, m)).cloned().unwrap_or_default()
    }

    pub fn omega_coeff(&self, m: u32) -> ParamScalar {
        self.omega.get(&m).cloned().unwrap_or_default()
    }

    /// Finite terms as `((n, m), coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &ParamScalar)> {
        self.finite.iter().map(|(k, s)| (*k, s))
    }

    pub fn omega_terms(&self) -> impl Iterator<Item = (u32, &ParamScalar)> {
        self.omega.iter().map(|(k, s)| (*k, s))
    }

    /// Drop the `Ω` channel.
    pub fn finite_part(&self) -> AngularPoly {
        Self {
            finite: self.finite.clone(),
            omega: BTreeMap::new(),
        }
    }

    /// Only the `Ω` channel.
    pub fn omega_part(&self) -> AngularPoly {
        Self {
            finite: BTreeMap::new(),
            omega: self.omega.clone(),
        }
    }

    pub fn max_r_degree(&self) -> Option<u32> {
        self.finite.keys().map(|(n, _)| *n).max()
    }

    /// Multiply by `r^k`.
    pub fn shift_r(&self, k: u32) -> AngularPoly {
        assert!(self.omega.is_empty(), "shift_r on the D̄·1 channel");
        Self {
            finite: self
                .finite
                .iter()
                .map(|((n, m), s)| ((n + k, *m), s.clone()))
                .collect(),
            omega: BTreeMap::new(),
        }
    }

    pub fn eval(&self, r: f64, xi: f64, g: f64) -> f64 {
        assert!(
            self.omega.is_empty(),
            "the D̄·1 channel has no numeric value"
        );
        self.finite
            .iter()
            .map(|((n, m), s)| s.eval(g) * r.powi(*n as i32) * xi.powi(*m as i32))
            .sum()
    }

    /// `∂/∂r`
    pub fn d_r(&self) -> AngularPoly {
        Self::from_terms(
            self.finite
                .iter()
                .filter(|((n, _), _)| *n > 0)
                .map(|((n, m), s)| ((n - 1, *m), s * &int_scalar(*n as i64))),
        )
    }

    /// `∂/∂ξ` at fixed `r`.
    pub fn d_xi(&self) -> AngularPoly {
        Self::from_terms(
            self.finite
                .iter()
                .filter(|((_, m), _)| *m > 0)
                .map(|((n, m), s)| ((*n, m - 1), s * &int_scalar(*m as i64))),
        )
    }

    /// Multiply the ξ-dependence by the rational polynomial `Σ c_j ξ^j`.
    fn mul_xi_poly(&self, poly: &[(u32, Rational)]) -> AngularPoly {
        let mut out = Self::zero();
        for ((n, m), s) in &self.finite {
            for (j, c) in poly {
                accumulate(&mut out.finite, (*n, m + j), &s.scale_rational(c));
            }
        }
        out
    }

    /// `r² T_α p`, which stays polynomial for every input.
    pub fn r2_talpha(&self) -> Result<AngularPoly> {
        if self.omega.keys().any(|m| *m > 0) {
            return Err(Error::OmegaInInput);
        }
        let mut out = Self::zero();
        for ((n, m), s) in &self.finite {
            for (j, c) in r2_talpha_xi(*m) {
                accumulate(&mut out.finite, (*n, j), &s.scale_rational(&c));
            }
        }
        Ok(out)
    }

    /// `r² T_S p = -½ r² (∂²_r + (2/r)∂_r) p`
    pub fn r2_tradial(&self) -> AngularPoly {
        Self::from_terms(self.finite.iter().map(|((n, m), s)| {
            let ni = *n as i64;
            ((*n, *m), s.scale_rational(&rat(-ni * (ni + 1), 2)))
        }))
    }

    /// `r² T p` for the full kinetic operator `T = -½∇²`.
    pub fn r2_kinetic(&self) -> Result<AngularPoly> {
        Ok(&self.r2_tradial() + &self.r2_talpha()?)
    }
}

/// `T_α p = r⁻²(r²T_α p)`; every ξ-dependent term needs `n ≥ 2`.
pub fn apply_talpha(p: &AngularPoly) -> Result<AngularPoly> {
    if p.has_omega() {
        return Err(Error::OmegaInInput);
    }
    let mut out = AngularPoly::zero();
    for ((n, m), s) in p.terms() {
        if m == 0 {
            continue;
        }
        if n < 2 {
            return Err(Error::NegativePower { n, m });
        }
        for (j, c) in r2_talpha_xi(m) {
            accumulate(&mut out.finite, (n - 2, j), &s.scale_rational(&c));
        }
    }
    Ok(out)
}

/// `r² ∇a·∇b = r² ∂_r a ∂_r b + (1 − ξ²) ∂_ξ a ∂_ξ b`.
pub fn r2_grad_dot(a: &AngularPoly, b: &AngularPoly) -> Result<AngularPoly> {
    if a.has_omega() || b.has_omega() {
        return Err(Error::OmegaInInput);
    }
    let radial = a.d_r().times(&b.d_r()).shift_r(2);
    let angular = a
        .d_xi()
        .times(&b.d_xi())
        .mul_xi_poly(&[(0, rat(1, 1)), (2, rat(-1, 1))]);
    Ok(&radial + &angular)
}

/// `∇a·∇b`; fails if the angular part would need a negative power of `r`.
pub fn grad_dot(a: &AngularPoly, b: &AngularPoly) -> Result<AngularPoly> {
    if a.has_omega() || b.has_omega() {
        return Err(Error::OmegaInInput);
    }
    let radial = a.d_r().times(&b.d_r());
    let angular = a
        .d_xi()
        .times(&b.d_xi())
        .mul_xi_poly(&[(0, rat(1, 1)), (2, rat(-1, 1))]);
    let mut out = radial;
    for ((n, m), s) in angular.terms() {
        if n < 2 {
            return Err(Error::NegativePower { n, m });
        }
        accumulate(&mut out.finite, (n - 2, m), s);
    }
    Ok(out)
}

/// `(∇p)²`
pub fn gradient_square(p: &AngularPoly) -> Result<AngularPoly> {
    grad_dot(p, p)
}

/// `∫₀^∞ r^{n+2} e^{−2g²r} dr / ∫₀^∞ r² e^{−2g²r} dr = (n+2)!/(2(2g²)^n)`
pub fn radial_moment(n: u32) -> ParamScalar {
    let fact: BigInt = (1..=(n as i64 + 2)).map(BigInt::from).product();
    let den = BigInt::from(2) * BigInt::from(2).pow(n);
    ParamScalar::monomial(Rational::new(fact, den), -2 * n as i32)
}

/// `½∫₋₁¹ ξ^m dξ`
pub fn angular_moment(m: u32) -> Rational {
    if m % 2 == 1 {
        rat(0, 1)
    } else {
        rat(1, m as i64 + 1)
    }
}

/// Mean under `e^{−2g²r} d³r`. Panics on a nonempty `Ω` channel.
pub fn measure_mean(p: &AngularPoly) -> ParamScalar {
    assert!(!p.has_omega(), "measure_mean of the divergent D̄·1 channel");
    p.terms()
        .filter(|((_, m), _)| m % 2 == 0)
        .fold(ParamScalar::zero(), |acc, ((n, m), s)| {
            &acc + &(s * &radial_moment(n)).scale_rational(&angular_moment(m))
        })
}

impl Coeff for AngularPoly {
    fn zero() -> Self {
        AngularPoly::zero()
    }
    fn one() -> Self {
        AngularPoly::constant(ParamScalar::one())
    }
    fn is_zero(&self) -> bool {
        AngularPoly::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, s) in &other.finite {
            accumulate(&mut out.finite, *k, s);
        }
        for (k, s) in &other.omega {
            accumulate(&mut out.omega, *k, s);
        }
        out
    }
    /// Product of Ω-free polynomials; panics if either factor carries `Ω`.
    fn times(&self, other: &Self) -> Self {
        assert!(
            self.omega.is_empty() && other.omega.is_empty(),
            "product involving the D̄·1 channel"
        );
        let mut out = AngularPoly::zero();
        for ((na, ma), sa) in &self.finite {
            for ((nb, mb), sb) in &other.finite {
                accumulate(&mut out.finite, (na + nb, ma + mb), &(sa * sb));
            }
        }
        out
    }
    fn negated(&self) -> Self {
        Self {
            finite: self.finite.iter().map(|(k, s)| (*k, -s)).collect(),
            omega: self.omega.iter().map(|(k, s)| (*k, -s)).collect(),
        }
    }
    fn scaled(&self, s: &ParamScalar) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.finite {
            accumulate(&mut out.finite, *k, &(c * s));
        }
        for (k, c) in &self.omega {
            accumulate(&mut out.omega, *k, &(c * s));
        }
        out
    }
}

impl_ring_ops!(AngularPoly);

impl fmt::Display for AngularPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((n, m), s) in &self.finite {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({s})·r^{n}ξ^{m}")?;
        }
        for (m, s) in &self.omega {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({s})·ξ^{m}Ω")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: i64, d: i64, k: i32) -> ParamScalar {
        ParamScalar::monomial(rat(n, d), k)
    }

    fn one() -> ParamScalar {
        ParamScalar::one()
    }

    #[test]
    fn talpha_examples() {
        assert_eq!(
            apply_talpha(&AngularPoly::monomial(2, 1, one())).unwrap(),
            AngularPoly::monomial(0, 1, one())
        );
        let expect = AngularPoly::from_terms([((0, 2), int_scalar(3)), ((0, 0), int_scalar(-1))]);
        assert_eq!(
            apply_talpha(&AngularPoly::monomial(2, 2, one())).unwrap(),
            expect
        );
        assert!(apply_talpha(&AngularPoly::monomial(5, 0, one()))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn talpha_errors() {
        assert_eq!(
            apply_talpha(&AngularPoly::monomial(1, 1, one())),
            Err(Error::NegativePower { n: 1, m: 1 })
        );
        assert_eq!(
            apply_talpha(&AngularPoly::omega_term(1, one())),
            Err(Error::OmegaInInput)
        );
    }

    #[test]
    fn gradient_square_examples() {
        assert!(gradient_square(&AngularPoly::constant(g(7, 2, 3)))
            .unwrap()
            .is_zero());
        assert_eq!(
            gradient_square(&AngularPoly::monomial(1, 0, one())).unwrap(),
            AngularPoly::constant(one())
        );
        // z = rξ has unit gradient
        assert_eq!(
            gradient_square(&AngularPoly::monomial(1, 1, one())).unwrap(),
            AngularPoly::constant(one())
        );
        assert!(matches!(
            gradient_square(&AngularPoly::monomial(0, 1, one())),
            Err(Error::NegativePower { .. })
        ));
    }

    #[test]
    fn measure_mean_examples() {
        assert!(measure_mean(&AngularPoly::monomial(1, 1, one())).is_zero());
        assert_eq!(measure_mean(&AngularPoly::constant(one())), one());
        assert_eq!(
            measure_mean(&AngularPoly::monomial(1, 0, one())),
            g(3, 2, -2)
        );
        assert_eq!(
            measure_mean(&AngularPoly::monomial(2, 2, one())),
            g(1, 1, -4)
        );
    }
}
