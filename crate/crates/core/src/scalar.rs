//! Exact scalars: big rationals, Laurent polynomials in the coupling `g`,
//! and ε-series truncated at a fixed order.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Shorthand for the rational `num/den`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Ring operations every ε-series payload must provide.
pub trait Coeff: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn scaled(&self, s: &ParamScalar) -> Self;

    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }
}

/// `Σ q_k g^k` with `k ∈ ℤ`; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ParamScalar {
    terms: BTreeMap<i32, Rational>,
}

impl ParamScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(q: Rational) -> Self {
        Self::monomial(q, 0)
    }

    /// `q · g^k`
    pub fn monomial(q: Rational, k: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(k, q);
        }
        Self { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(rat_int(n))
    }

    /// `g^k`
    pub fn g_pow(k: i32) -> Self {
        Self::monomial(Rational::one(), k)
    }

    pub fn from_terms<I: IntoIterator<Item = (i32, Rational)>>(terms: I) -> Self {
        let mut s = Self::zero();
        for (k, q) in terms {
            s.add_term(k, &q);
        }
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Rational)> {
        self.terms.iter().map(|(k, q)| (*k, q))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `g^k` (zero when absent).
    pub fn coeff(&self, k: i32) -> Rational {
        self.terms.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    /// The single `(exponent, coefficient)` pair when `self` is a monomial.
    pub fn as_monomial(&self) -> Option<(i32, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(k, q)| (*k, q))
        } else {
            None
        }
    }

    fn add_term(&mut self, k: i32, q: &Rational) {
        if q.is_zero() {
            return;
        }
        let entry = self.terms.entry(k).or_insert_with(Rational::zero);
        *entry += q;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, c)| (*k, c * q)).collect(),
        }
    }

    /// Inverse in the Laurent ring; only monomials are units.
    pub fn inverse(&self) -> Option<Self> {
        let (k, q) = self.as_monomial()?;
        Some(Self::monomial(q.recip(), -k))
    }

    /// Floating-point evaluation at a numeric coupling `g > 0`.
    pub fn eval(&self, g: f64) -> f64 {
        self.terms
            .iter()
            .map(|(k, q)| rational_to_f64(q) * g.powi(*k))
            .sum()
    }
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Fallback for numerators/denominators beyond f64 range.
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Evaluate `s` at `g = g_value`.
pub fn scalar_eval(s: &ParamScalar, g_value: f64) -> f64 {
    s.eval(g_value)
}

impl From<Rational> for ParamScalar {
    fn from(q: Rational) -> Self {
        Self::constant(q)
    }
}

impl From<i64> for ParamScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl Coeff for ParamScalar {
    fn zero() -> Self {
        ParamScalar::zero()
    }
    fn one() -> Self {
        ParamScalar::one()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, q) in &other.terms {
            out.add_term(*k, q);
        }
        out
    }
    fn times(&self, other: &Self) -> Self {
        let mut out = ParamScalar::zero();
        for (ka, qa) in &self.terms {
            for (kb, qb) in &other.terms {
                out.add_term(ka + kb, &(qa * qb));
            }
        }
        out
    }
    fn negated(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, q)| (*k, -q)).collect(),
        }
    }
    fn scaled(&self, s: &ParamScalar) -> Self {
        self.times(s)
    }
}

impl fmt::Display for ParamScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, q)) in self.terms.iter().rev().enumerate() {
            let mag = q.abs();
            if i == 0 {
                if q.is_negative() {
                    write!(f, "-")?;
                }
            } else if q.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "{mag}")?,
                _ if mag.is_one() => write!(f, "g^{k}")?,
                _ => write!(f, "{mag}·g^{k}")?,
            }
        }
        Ok(())
    }
}

macro_rules! impl_ring_ops {
    ($t:ty) => {
        impl ::std::ops::Add for &$t {
            type Output = $t;
            fn add(self, rhs: &$t) -> $t {
                $crate::scalar::Coeff::plus(self, rhs)
            }
        }
        impl ::std::ops::Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                $crate::scalar::Coeff::plus(&self, &rhs)
            }
        }
        impl ::std::ops::Sub for &$t {
            type Output = $t;
            fn sub(self, rhs: &$t) -> $t {
                $crate::scalar::Coeff::minus(self, rhs)
            }
        }
        impl ::std::ops::Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                $crate::scalar::Coeff::minus(&self, &rhs)
            }
        }
        impl ::std::ops::Mul for &$t {
            type Output = $t;
            fn mul(self, rhs: &$t) -> $t {
                $crate::scalar::Coeff::times(self, rhs)
            }
        }
        impl ::std::ops::Mul for $t {
            type Output = $t;
            fn mul(self, rhs: $t) -> $t {
                $crate::scalar::Coeff::times(&self, &rhs)
            }
        }
        impl ::std::ops::Neg for &$t {
            type Output = $t;
            fn neg(self) -> $t {
                $crate::scalar::Coeff::negated(self)
            }
        }
        impl ::std::ops::Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                $crate::scalar::Coeff::negated(&self)
            }
        }
    };
}
pub(crate) use impl_ring_ops;

impl_ring_ops!(ParamScalar);

/// Power series in ε with payload `P`, truncated above order `cap`.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsSeries<P> {
    cap: usize,
    coeffs: Vec<P>,
}

impl<P: Coeff> EpsSeries<P> {
    pub fn zero(cap: usize) -> Self {
        Self {
            cap,
            coeffs: vec![P::zero(); cap + 1],
        }
    }

    pub fn constant(p: P, cap: usize) -> Self {
        Self::monomial(0, p, cap)
    }

    /// `p · ε^order`; orders above the cap give the zero series.
    pub fn monomial(order: usize, p: P, cap: usize) -> Self {
        let mut s = Self::zero(cap);
        if order <= cap {
            s.coeffs[order] = p;
        }
        s
    }

    /// Build from explicit coefficients, dropping anything above `cap`.
    pub fn from_coeffs(mut coeffs: Vec<P>, cap: usize) -> Self {
        coeffs.resize(cap + 1, P::zero());
        coeffs.truncate(cap + 1);
        Self { cap, coeffs }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn coeff(&self, order: usize) -> &P {
        &self.coeffs[order]
    }

    pub fn coeffs(&self) -> &[P] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Coeff::is_zero)
    }

    /// Lowest order with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Same coefficients under a different cap (truncating or zero-padding).
    pub fn with_cap(&self, cap: usize) -> Self {
        Self::from_coeffs(self.coeffs.clone(), cap)
    }

    pub fn add(&self, other: &Self) -> Self {
        let cap = self.cap.min(other.cap);
        let coeffs = (0..=cap)
            .map(|k| self.coeffs[k].plus(&other.coeffs[k]))
            .collect();
        Self { cap, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let cap = self.cap.min(other.cap);
        let coeffs = (0..=cap)
            .map(|k| self.coeffs[k].minus(&other.coeffs[k]))
            .collect();
        Self { cap, coeffs }
    }

    pub fn neg(&self) -> Self {
        Self {
            cap: self.cap,
            coeffs: self.coeffs.iter().map(Coeff::negated).collect(),
        }
    }

    /// Truncated product; orders above `min(caps)` are discarded.
    pub fn mul(&self, other: &Self) -> Self {
        let cap = self.cap.min(other.cap);
        let mut coeffs = vec![P::zero(); cap + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(cap + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(cap + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].plus(&a.times(b));
            }
        }
        Self { cap, coeffs }
    }

    pub fn scale(&self, s: &ParamScalar) -> Self {
        Self {
            cap: self.cap,
            coeffs: self.coeffs.iter().map(|c| c.scaled(s)).collect(),
        }
    }

    /// Multiply every coefficient by an ε-independent payload.
    pub fn mul_payload(&self, p: &P) -> Self {
        Self {
            cap: self.cap,
            coeffs: self.coeffs.iter().map(|c| c.times(p)).collect(),
        }
    }

    /// Multiply by a scalar ε-series (payload scaled order by order).
    pub fn mul_scalar_series(&self, s: &EpsSeries<ParamScalar>) -> Self {
        let cap = self.cap.min(s.cap);
        let mut coeffs = vec![P::zero(); cap + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(cap + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in s.coeffs.iter().enumerate().take(cap + 1 - i) {
                if !b.is_zero() {
                    coeffs[i + j] = coeffs[i + j].plus(&a.scaled(b));
                }
            }
        }
        Self { cap, coeffs }
    }

    /// Apply a linear map order by order.
    pub fn map<Q: Coeff>(&self, f: impl Fn(&P) -> Q) -> EpsSeries<Q> {
        EpsSeries {
            cap: self.cap,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn try_map<Q: Coeff>(&self, f: impl Fn(&P) -> Result<Q>) -> Result<EpsSeries<Q>> {
        Ok(EpsSeries {
            cap: self.cap,
            coeffs: self.coeffs.iter().map(f).collect::<Result<_>>()?,
        })
    }

    /// `exp(-s)` for a series with vanishing ε⁰ coefficient.
    ///
    /// Panics if the constant term is nonzero.
    pub fn exp_neg(&self) -> Self {
        assert!(
            self.coeffs[0].is_zero(),
            "exp_neg needs a zero constant term"
        );
        let minus = self.neg();
        let mut out = Self::constant(P::one(), self.cap);
        let mut power = Self::constant(P::one(), self.cap);
        let mut factorial = BigInt::one();
        // (-s)^k vanishes below order k, so cap+1 terms are enough.
        for k in 1..=self.cap {
            power = power.mul(&minus);
            if power.is_zero() {
                break;
            }
            factorial *= BigInt::from(k);
            let inv = ParamScalar::constant(Rational::new(BigInt::one(), factorial.clone()));
            out = out.add(&power.scale(&inv));
        }
        out
    }
}

/// Quotient `num / den`, truncated at the smaller cap.
///
/// The ε⁰ coefficient of `den` must be a unit of the Laurent ring (a single
/// `q·g^k` term with `q ≠ 0`).
pub fn series_div<P: Coeff>(
    num: &EpsSeries<P>,
    den: &EpsSeries<ParamScalar>,
) -> Result<EpsSeries<P>> {
    let lead = &den.coeffs[0];
    let inv = lead
        .inverse()
        .ok_or_else(|| Error::SingularDivision(lead.to_string()))?;
    let cap = num.cap.min(den.cap);
    let mut q: Vec<P> = Vec::with_capacity(cap + 1);
    for k in 0..=cap {
        let mut acc = num.coeffs[k].clone();
        for j in 1..=k {
            let d = &den.coeffs[j];
            if !d.is_zero() {
                acc = acc.minus(&q[k - j].scaled(d));
            }
        }
        q.push(acc.scaled(&inv));
    }
    Ok(EpsSeries { cap, coeffs: q })
}

impl EpsSeries<ParamScalar> {
    /// Evaluate at numeric `ε` and `g`.
    pub fn eval(&self, eps: f64, g: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.eval(g) * eps.powi(k as i32))
            .sum()
    }
}

impl fmt::Display for EpsSeries<ParamScalar> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "ε^{k}·({c})")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(ε^{})", self.cap + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ps(terms: &[(i32, i64, i64)]) -> ParamScalar {
        ParamScalar::from_terms(terms.iter().map(|&(k, n, d)| (k, rat(n, d))))
    }

    #[test]
    fn eval_examples() {
        assert_eq!(scalar_eval(&ps(&[(0, 1, 1)]), 2.0), 1.0);
        assert_eq!(scalar_eval(&ps(&[(-1, 1, 2)]), 2.0), 0.25);
        // Γ_{1,2} = 3 (2g)^-2
        let gamma12 = ps(&[(-2, 3, 4)]);
        assert_eq!(scalar_eval(&gamma12, 1.0), 0.75);
    }

    #[test]
    fn canonical_form_drops_zeros() {
        let a = ps(&[(1, 1, 2), (3, 2, 1)]);
        let b = ps(&[(1, -1, 2)]);
        let s = &a + &b;
        assert_eq!(s.len(), 1);
        assert_eq!(s.coeff(3), rat_int(2));
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(
            ps(&[(-2, 3, 4), (-5, -21, 8)]).to_string(),
            "3/4·g^-2 - 21/8·g^-5"
        );
        assert_eq!(ParamScalar::zero().to_string(), "0");
    }

    #[test]
    fn div_unit_denominator() {
        let one = EpsSeries::constant(ParamScalar::one(), 3);
        let num = EpsSeries::from_coeffs(vec![ParamScalar::one(), ParamScalar::one()], 3);
        assert_eq!(series_div(&num, &one).unwrap(), num);
    }

    #[test]
    fn div_geometric() {
        let den = EpsSeries::from_coeffs(vec![ParamScalar::one(), ParamScalar::from_int(-1)], 2);
        let num = EpsSeries::constant(ParamScalar::one(), 2);
        let q = series_div(&num, &den).unwrap();
        assert!(q.coeffs().iter().all(|c| *c == ParamScalar::one()));
    }

    #[test]
    fn div_singular() {
        let den = EpsSeries::from_coeffs(vec![ParamScalar::zero(), ParamScalar::one()], 2);
        let num = EpsSeries::constant(ParamScalar::one(), 2);
        assert!(matches!(
            series_div(&num, &den),
            Err(Error::SingularDivision(_))
        ));
        // 1 + g is not a unit either
        let den = EpsSeries::constant(ps(&[(0, 1, 1), (1, 1, 1)]), 2);
        assert!(series_div(&num, &den).is_err());
    }

    #[test]
    fn mul_respects_cap() {
        let a = EpsSeries::from_coeffs(vec![ParamScalar::one(), ParamScalar::one()], 3);
        let b = EpsSeries::from_coeffs(vec![ParamScalar::one(), ParamScalar::one()], 1);
        let c = a.mul(&b);
        assert_eq!(c.cap(), 1);
        assert_eq!(c.coeff(1), &ParamScalar::from_int(2));
    }

    #[test]
    fn exp_neg_matches_factorials() {
        let s = EpsSeries::monomial(1, ParamScalar::one(), 4);
        let e = s.exp_neg();
        let expect = [rat(1, 1), rat(-1, 1), rat(1, 2), rat(-1, 6), rat(1, 24)];
        for (k, q) in expect.iter().enumerate() {
            assert_eq!(e.coeff(k), &ParamScalar::constant(q.clone()));
        }
    }

    fn arb_scalar() -> impl Strategy<Value = ParamScalar> {
        prop::collection::vec((-4i32..4, -9i64..10, 1i64..7), 0..4)
            .prop_map(|v| ParamScalar::from_terms(v.into_iter().map(|(k, n, d)| (k, rat(n, d)))))
    }

    fn arb_series(cap: usize) -> impl Strategy<Value = EpsSeries<ParamScalar>> {
        prop::collection::vec(arb_scalar(), cap + 1)
            .prop_map(move |v| EpsSeries::from_coeffs(v, cap))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn eval_is_homomorphism(a in arb_scalar(), b in arb_scalar(), g in 0.5f64..2.0) {
            let lhs = (&a * &b).eval(g);
            let rhs = a.eval(g) * b.eval(g);
            let scale = lhs.abs().max(rhs.abs()).max(1.0);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * scale);
        }

        #[test]
        fn div_inverts_mul(a in arb_series(4), tail in arb_series(4), k in -3i32..3, n in 1i64..5) {
            // b has a unit constant term q·g^k
            let mut coeffs = tail.coeffs().to_vec();
            coeffs[0] = ParamScalar::monomial(rat(n, 3), k);
            let b = EpsSeries::from_coeffs(coeffs, 4);
            let q = series_div(&a.mul(&b), &b).unwrap();
            prop_assert_eq!(q, a);
        }
    }
}
