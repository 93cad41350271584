//! Per-step records shared by the 1D and 3D engines.

use serde::{Deserialize, Serialize};

use crate::scalar::{Coeff, EpsSeries, ParamScalar};

/// Which iteration drives the run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    /// `Δ_n` from the mean of `U − ½(∇τ_{n−1})²`, `τ_n = Ḡ[U − Δ_n − ½(∇τ_{n−1})²]`.
    Revised,
    /// `Δ_n` as a ratio of means, `f_n = 1 + Ḡ[(Δ_n − U) f_{n−1}]`.
    Old,
}

impl std::fmt::Display for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Engine::Revised => write!(f, "revised"),
            Engine::Old => write!(f, "old"),
        }
    }
}

impl std::str::FromStr for Engine {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "revised" => Ok(Engine::Revised),
            "old" => Ok(Engine::Old),
            other => Err(format!("unknown engine `{other}` (expected revised|old)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Step<P> {
    pub n: usize,
    pub delta: EpsSeries<ParamScalar>,
    /// `τ_n` for the revised engine, `f_n` for the old one.
    pub state: EpsSeries<P>,
    /// `state_n == state_{n−1}` coefficient for coefficient.
    pub fixed_point: bool,
    /// Lowest ε-order at which the defining equation is violated; `None`
    /// when the residual vanishes identically (checked through twice the cap).
    pub residual_order: Option<usize>,
    /// Highest order through which `Δ_n` agrees with `Δ_{n−1}`.
    pub delta_stable_through: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IterationReport<P> {
    pub engine: Engine,
    pub order_cap: usize,
    pub max_iter: usize,
    pub steps: Vec<Step<P>>,
}

impl<P: Coeff> IterationReport<P> {
    pub fn last(&self) -> &Step<P> {
        self.steps
            .last()
            .expect("a report always holds at least one step")
    }

    pub fn reached_fixed_point(&self) -> bool {
        self.last().fixed_point
    }

    pub fn final_delta(&self) -> &EpsSeries<ParamScalar> {
        &self.last().delta
    }

    pub fn step(&self, n: usize) -> Option<&Step<P>> {
        self.steps.iter().find(|s| s.n == n)
    }
}

/// Highest `k` with `a_j == b_j` for all `j ≤ k`.
pub fn agreement_order(a: &EpsSeries<ParamScalar>, b: &EpsSeries<ParamScalar>) -> Option<usize> {
    let cap = a.cap().min(b.cap());
    let first_diff = (0..=cap).find(|&k| a.coeff(k) != b.coeff(k));
    match first_diff {
        Some(0) => None,
        Some(k) => Some(k - 1),
        None => Some(cap),
    }
}
