//! The structured result of a command. Exact values are kept as decimal
//! numerator/denominator strings with a `g` exponent; floating-point
//! evaluations live in fields whose names say so.

use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::SuiteReport;
use crate::poly1d::Poly1D;
use crate::report::{Engine, IterationReport};
use crate::scalar::{Coeff, EpsSeries, ParamScalar, Rational};
use crate::stark3d::AngularPoly;

pub const SCHEMA_VERSION: u32 = 1;

/// `ε^order · num/den · g^g_exp`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactTerm {
    pub order: usize,
    pub num: String,
    pub den: String,
    pub g_exp: i32,
}

impl ExactTerm {
    fn new(order: usize, g_exp: i32, q: &Rational) -> Self {
        Self {
            order,
            num: q.numer().to_string(),
            den: q.denom().to_string(),
            g_exp,
        }
    }

    pub fn rational(&self) -> Result<Rational> {
        let parse = |s: &str| {
            BigInt::from_str(s).map_err(|e| Error::Config(format!("bad integer `{s}`: {e}")))
        };
        let den = parse(&self.den)?;
        if den == BigInt::from(0) {
            return Err(Error::Config("zero denominator".into()));
        }
        Ok(Rational::new(parse(&self.num)?, den))
    }

    pub fn scalar(&self) -> Result<ParamScalar> {
        Ok(ParamScalar::monomial(self.rational()?, self.g_exp))
    }
}

fn scalar_terms(order: usize, s: &ParamScalar) -> impl Iterator<Item = ExactTerm> + '_ {
    s.terms().map(move |(k, q)| ExactTerm::new(order, k, q))
}

pub fn series_terms(series: &EpsSeries<ParamScalar>) -> Vec<ExactTerm> {
    series
        .coeffs()
        .iter()
        .enumerate()
        .flat_map(|(order, c)| scalar_terms(order, c))
        .collect()
}

pub fn series_from_terms(terms: &[ExactTerm], cap: usize) -> Result<EpsSeries<ParamScalar>> {
    let mut coeffs = vec![ParamScalar::zero(); cap + 1];
    for t in terms {
        let slot = coeffs
            .get_mut(t.order)
            .ok_or_else(|| Error::Config(format!("term order {} above cap {cap}", t.order)))?;
        *slot = &*slot + &t.scalar()?;
    }
    Ok(EpsSeries::from_coeffs(coeffs, cap))
}

/// A basis monomial of the state polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Monomial {
    Line { x: u32 },
    Radial { r: u32, xi: u32 },
}

impl std::fmt::Display for Monomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Monomial::Line { x } => write!(f, "x^{x}"),
            Monomial::Radial { r, xi } => write!(f, "r^{r} xi^{xi}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateTerm {
    pub monomial: Monomial,
    #[serde(flatten)]
    pub coeff: ExactTerm,
}

/// Polynomials the document knows how to list.
pub trait Basis: Coeff {
    fn monomials(&self) -> Vec<(Monomial, ParamScalar)>;
    fn from_monomials(items: &[(Monomial, ParamScalar)]) -> Result<Self>;
}

impl Basis for Poly1D {
    fn monomials(&self) -> Vec<(Monomial, ParamScalar)> {
        self.terms()
            .map(|(k, c)| (Monomial::Line { x: k }, c.clone()))
            .collect()
    }

    fn from_monomials(items: &[(Monomial, ParamScalar)]) -> Result<Self> {
        let mut p = Poly1D::zero();
        for (m, c) in items {
            match m {
                Monomial::Line { x } => p = &p + &Poly1D::monomial(*x, c.clone()),
                other => return Err(Error::Config(format!("{other} in a line problem"))),
            }
        }
        Ok(p)
    }
}

impl Basis for AngularPoly {
    /// Results never carry the divergent channel; `apply_g` refuses them.
    fn monomials(&self) -> Vec<(Monomial, ParamScalar)> {
        self.terms()
            .map(|((n, m), c)| (Monomial::Radial { r: n, xi: m }, c.clone()))
            .collect()
    }

    fn from_monomials(items: &[(Monomial, ParamScalar)]) -> Result<Self> {
        let mut p = AngularPoly::zero();
        for (m, c) in items {
            match m {
                Monomial::Radial { r, xi } => p = &p + &AngularPoly::monomial(*r, *xi, c.clone()),
                other => return Err(Error::Config(format!("{other} in a radial problem"))),
            }
        }
        Ok(p)
    }
}

pub fn state_terms<P: Basis>(series: &EpsSeries<P>) -> Vec<StateTerm> {
    let mut out = Vec::new();
    for (order, c) in series.coeffs().iter().enumerate() {
        for (monomial, s) in c.monomials() {
            out.extend(scalar_terms(order, &s).map(|coeff| StateTerm { monomial, coeff }));
        }
    }
    out
}

pub fn state_from_terms<P: Basis>(terms: &[StateTerm], cap: usize) -> Result<EpsSeries<P>> {
    let mut per_order: Vec<Vec<(Monomial, ParamScalar)>> = vec![Vec::new(); cap + 1];
    for t in terms {
        let slot = per_order.get_mut(t.coeff.order).ok_or_else(|| {
            Error::Config(format!("term order {} above cap {cap}", t.coeff.order))
        })?;
        slot.push((t.monomial, t.coeff.scalar()?));
    }
    let coeffs = per_order
        .iter()
        .map(|items| P::from_monomials(items))
        .collect::<Result<Vec<_>>>()?;
    Ok(EpsSeries::from_coeffs(coeffs, cap))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub n: usize,
    pub delta: Vec<ExactTerm>,
    /// Floating-point evaluation of `Δ_n` at the configured `ε` and `g`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_numeric: Option<f64>,
    /// `τ_n` for the revised engine, `f_n` for the old one.
    pub state: Vec<StateTerm>,
    pub fixed_point: bool,
    pub residual_order: Option<usize>,
    pub delta_stable_through: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub engine: Engine,
    pub order_cap: usize,
    pub max_iter: usize,
    pub reached_fixed_point: bool,
    pub steps: Vec<StepRecord>,
}

impl RunRecord {
    pub fn from_report<P: Basis>(report: &IterationReport<P>, numeric: Option<(f64, f64)>) -> Self {
        let steps = report
            .steps
            .iter()
            .map(|s| StepRecord {
                n: s.n,
                delta: series_terms(&s.delta),
                delta_numeric: numeric.map(|(eps, g)| s.delta.eval(eps, g)),
                state: state_terms(&s.state),
                fixed_point: s.fixed_point,
                residual_order: s.residual_order,
                delta_stable_through: s.delta_stable_through,
            })
            .collect();
        Self {
            engine: report.engine,
            order_cap: report.order_cap,
            max_iter: report.max_iter,
            reached_fixed_point: report.reached_fixed_point(),
            steps,
        }
    }

    pub fn final_step(&self) -> Option<&StepRecord> {
        self.steps.last()
    }

    pub fn delta(&self, step: &StepRecord) -> Result<EpsSeries<ParamScalar>> {
        series_from_terms(&step.delta, self.order_cap)
    }

    pub fn state<P: Basis>(&self, step: &StepRecord) -> Result<EpsSeries<P>> {
        state_from_terms(&step.state, self.order_cap)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderAgreement {
    pub order: usize,
    pub delta_equal: bool,
    /// `e^{−τ_n}` against `f_n` at this ε-order.
    pub state_equal: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepComparison {
    pub n: usize,
    pub orders: Vec<OrderAgreement>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EngineComparison {
    pub revised_fixed_point_step: Option<usize>,
    pub old_fixed_point_step: Option<usize>,
    /// Orders through which the engines must agree for the comparison to pass.
    pub required_through: usize,
    pub steps: Vec<StepComparison>,
}

/// The sign of a computed energy coefficient, set against the sign that
/// commonly quoted closed forms print.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignNote {
    pub order: usize,
    pub computed: Vec<ExactTerm>,
    pub computed_sign: i8,
    pub quoted_sign: i8,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemEcho {
    pub system: String,
    pub description: String,
    pub engine: Option<Engine>,
    pub order_cap: usize,
    pub max_iter: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_value: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub schema_version: u32,
    pub command: String,
    pub problem: ProblemEcho,
    #[serde(default)]
    pub runs: Vec<RunRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparison: Option<EngineComparison>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<SuiteReport>,
    #[serde(default)]
    pub sign_notes: Vec<SignNote>,
    /// False when any comparison in the document failed.
    pub passed: bool,
}

impl ResultDocument {
    pub fn new(command: impl Into<String>, problem: ProblemEcho) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            problem,
            runs: Vec::new(),
            comparison: None,
            oracle: None,
            sign_notes: Vec::new(),
            passed: true,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self)
            .map_err(|e| Error::Config(format!("serializing result: {e}")))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Self = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("parsing result: {e}")))?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                doc.schema_version
            )));
        }
        Ok(doc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iterate1d::{run, Problem1D};
    use crate::scalar::rat;

    #[test]
    fn exact_term_roundtrip() {
        let s = ParamScalar::from_terms([(-5, rat(-21, 8)), (-2, rat(3, 4))]);
        let series = EpsSeries::from_coeffs(vec![ParamScalar::zero(), s.clone(), s], 2);
        let terms = series_terms(&series);
        assert_eq!(terms.len(), 4);
        assert_eq!(terms[0].num, "-21");
        assert_eq!(series_from_terms(&terms, 2).unwrap(), series);
        assert!(series_from_terms(&terms, 1).is_err());
    }

    #[test]
    fn monomial_json_shapes() {
        let line = serde_json::to_string(&Monomial::Line { x: 3 }).unwrap();
        assert_eq!(line, r#"{"x":3}"#);
        let radial: Monomial = serde_json::from_str(r#"{"r":2,"xi":1}"#).unwrap();
        assert_eq!(radial, Monomial::Radial { r: 2, xi: 1 });
    }

    #[test]
    fn run_record_rebuilds_state() {
        let report = run(&Problem1D::odd_power(1, 2), Engine::Revised).unwrap();
        let record = RunRecord::from_report(&report, Some((0.1, 1.0)));
        let last = record.final_step().unwrap();
        assert_eq!(record.state::<Poly1D>(last).unwrap(), report.last().state);
        assert_eq!(record.delta(last).unwrap(), *report.final_delta());
        assert!(record.state::<AngularPoly>(last).is_err());
    }

    #[test]
    fn schema_version_checked() {
        let echo = ProblemEcho {
            system: "line".into(),
            description: "U = 0".into(),
            engine: None,
            order_cap: 1,
            max_iter: 1,
            g_value: None,
            eps_value: None,
        };
        let mut doc = ResultDocument::new("solve1d", echo);
        doc.schema_version = 7;
        assert!(ResultDocument::from_json(&doc.to_json().unwrap()).is_err());
    }
}
