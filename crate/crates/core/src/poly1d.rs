//! Polynomials in `x` over [`ParamScalar`] and the Gaussian mean
//! `∫ e^{-gx²} p dx / ∫ e^{-gx²} dx`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::scalar::{impl_ring_ops, Coeff, EpsSeries, ParamScalar, Rational};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly1D {
    coeffs: BTreeMap<u32, ParamScalar>,
}

impl Poly1D {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(s: ParamScalar) -> Self {
        Self::monomial(0, s)
    }

    /// `s · x^k`
    pub fn monomial(k: u32, s: ParamScalar) -> Self {
        let mut coeffs = BTreeMap::new();
        if !s.is_zero() {
            coeffs.insert(k, s);
        }
        Self { coeffs }
    }

    /// Bare `x^k`.
    pub fn x_pow(k: u32) -> Self {
        Self::monomial(k, ParamScalar::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, ParamScalar)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (k, s) in terms {
            p.add_term(k, &s);
        }
        p
    }

    fn add_term(&mut self, k: u32, s: &ParamScalar) {
        if s.is_zero() {
            return;
        }
        let sum = match self.coeffs.get(&k) {
            Some(c) => c + s,
            None => s.clone(),
        };
        if sum.is_zero() {
            self.coeffs.remove(&k);
        } else {
            self.coeffs.insert(k, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: u32) -> ParamScalar {
        self.coeffs.get(&k).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &ParamScalar)> {
        self.coeffs.iter().map(|(k, s)| (*k, s))
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    /// Split into (even-degree part, odd-degree part).
    pub fn parity_parts(&self) -> (Poly1D, Poly1D) {
        let (even, odd): (BTreeMap<_, _>, BTreeMap<_, _>) = self
            .coeffs
            .iter()
            .map(|(k, s)| (*k, s.clone()))
            .partition(|(k, _)| k % 2 == 0);
        (Poly1D { coeffs: even }, Poly1D { coeffs: odd })
    }

    pub fn is_even(&self) -> bool {
        self.coeffs.keys().all(|k| k % 2 == 0)
    }

    pub fn is_odd(&self) -> bool {
        self.coeffs.keys().all(|k| k % 2 == 1)
    }

    /// Term-wise `d/dx`.
    pub fn differentiate(&self) -> Poly1D {
        Poly1D::from_terms(self.coeffs.iter().filter(|(k, _)| **k > 0).map(|(k, s)| {
            (
                k - 1,
                s.scale_rational(&Rational::from_integer(BigInt::from(*k))),
            )
        }))
    }

    /// Multiply by `x^shift`.
    pub fn shift(&self, shift: u32) -> Poly1D {
        Poly1D {
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, s)| (k + shift, s.clone()))
                .collect(),
        }
    }

    /// Gaussian mean under the weight `e^{-gx²}`.
    pub fn gauss_mean(&self) -> ParamScalar {
        self.coeffs
            .iter()
            .filter(|(k, _)| *k % 2 == 0)
            .fold(ParamScalar::zero(), |acc, (k, s)| {
                &acc + &(s * &gauss_moment(k / 2))
            })
    }

    pub fn eval(&self, x: f64, g: f64) -> f64 {
        self.coeffs
            .iter()
            .map(|(k, s)| s.eval(g) * x.powi(*k as i32))
            .sum()
    }
}

/// `⟨x^{2k}⟩ = (2k−1)!!/(2g)^k`, with `⟨x⁰⟩ = 1`.
pub fn gauss_moment(k: u32) -> ParamScalar {
    let mut dfact = BigInt::one();
    let mut j = 2 * k as i64 - 1;
    while j > 1 {
        dfact *= BigInt::from(j);
        j -= 2;
    }
    let two_k = BigInt::from(2u32).pow(k);
    ParamScalar::monomial(Rational::new(dfact, two_k), -(k as i32))
}

/// Gaussian mean of every ε-order.
pub fn gauss_mean(p: &EpsSeries<Poly1D>) -> EpsSeries<ParamScalar> {
    p.map(Poly1D::gauss_mean)
}

pub fn differentiate(p: &EpsSeries<Poly1D>) -> EpsSeries<Poly1D> {
    p.map(Poly1D::differentiate)
}

pub fn poly_mul(a: &Poly1D, b: &Poly1D) -> Poly1D {
    a.times(b)
}

impl Coeff for Poly1D {
    fn zero() -> Self {
        Poly1D::zero()
    }
    fn one() -> Self {
        Poly1D::constant(ParamScalar::one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, s) in &other.coeffs {
            out.add_term(*k, s);
        }
        out
    }
    fn times(&self, other: &Self) -> Self {
        let mut out = Poly1D::zero();
        for (ka, sa) in &self.coeffs {
            for (kb, sb) in &other.coeffs {
                out.add_term(ka + kb, &(sa * sb));
            }
        }
        out
    }
    fn negated(&self) -> Self {
        Poly1D {
            coeffs: self.coeffs.iter().map(|(k, s)| (*k, -s)).collect(),
        }
    }
    fn scaled(&self, s: &ParamScalar) -> Self {
        Poly1D::from_terms(self.coeffs.iter().map(|(k, c)| (*k, c * s)))
    }
}

impl_ring_ops!(Poly1D);

impl fmt::Display for Poly1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, s)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "({s})")?,
                _ => write!(f, "({s})·x^{k}")?,
            }
        }
        Ok(())
    }
}
