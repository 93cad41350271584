//! Run configuration: a TOML document whose values the command-line flags
//! override.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::iterate1d::{Problem1D, DEFAULT_ORDER_CAP};
use crate::oracle::{GridSpec, SuiteConfig};
use crate::poly1d::Poly1D;
use crate::report::Engine;
use crate::scalar::{ParamScalar, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Solve1d,
    Stark,
    VerifyOracle,
    CompareEngines,
}

impl std::fmt::Display for Command {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Command::Solve1d => "solve1d",
            Command::Stark => "stark",
            Command::VerifyOracle => "verify-oracle",
            Command::CompareEngines => "compare-engines",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum System {
    #[default]
    Line,
    Stark,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub power: u32,
    /// Exact rational such as `"-3/4"`.
    pub coeff: String,
    #[serde(default)]
    pub g_exp: i32,
}

/// The perturbation `U` in `H = -½d²/dx² + ½g²x² + εU`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PotentialSpec {
    Zero,
    Linear,
    EvenPower { p: u32 },
    OddPower { p: u32 },
    Explicit { terms: Vec<Term> },
}

impl PotentialSpec {
    pub fn to_problem(&self, order_cap: usize) -> Result<Problem1D> {
        Ok(match self {
            PotentialSpec::Zero => Problem1D::explicit(Poly1D::zero(), order_cap),
            PotentialSpec::Linear => Problem1D::linear(order_cap),
            PotentialSpec::EvenPower { p } => {
                if *p == 0 {
                    return Err(Error::Config(
                        "even-power needs p ≥ 1 (p = 0 is a constant shift)".into(),
                    ));
                }
                Problem1D::even_power(*p, order_cap)
            }
            PotentialSpec::OddPower { p } => Problem1D::odd_power(*p, order_cap),
            PotentialSpec::Explicit { terms } => {
                let mut u = Poly1D::zero();
                for (i, t) in terms.iter().enumerate() {
                    let q = Rational::from_str(t.coeff.trim()).map_err(|e| {
                        Error::Config(format!(
                            "problem.potential.terms[{i}].coeff `{}`: {e}",
                            t.coeff
                        ))
                    })?;
                    u = &u + &Poly1D::monomial(t.power, ParamScalar::monomial(q, t.g_exp));
                }
                Problem1D::explicit(u, order_cap)
            }
        })
    }

    pub fn describe(&self) -> String {
        match self {
            PotentialSpec::Zero => "U = 0".into(),
            PotentialSpec::Linear => "U = x".into(),
            PotentialSpec::EvenPower { p } => format!("U = x^{}", 2 * p),
            PotentialSpec::OddPower { p } => format!("U = x^{}", 2 * p + 1),
            PotentialSpec::Explicit { .. } => "U explicit".into(),
        }
    }
}

/// `zero`, `linear`, `even:P`, `odd:P`.
impl FromStr for PotentialSpec {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parse_p = |p: &str| {
            p.parse::<u32>()
                .map_err(|e| format!("bad power `{p}`: {e}"))
        };
        match s.split_once(':') {
            None if s == "zero" => Ok(PotentialSpec::Zero),
            None if s == "linear" => Ok(PotentialSpec::Linear),
            Some(("even", p)) => Ok(PotentialSpec::EvenPower { p: parse_p(p)? }),
            Some(("odd", p)) => Ok(PotentialSpec::OddPower { p: parse_p(p)? }),
            _ => Err(format!(
                "unknown potential `{s}` (expected zero, linear, even:P or odd:P)"
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProblemConfig {
    pub system: System,
    pub potential: Option<PotentialSpec>,
    pub engine: Engine,
    /// Highest ε-order kept (N_ε).
    pub order: usize,
    /// Defaults to `order + 2`.
    pub max_iter: Option<usize>,
}

impl Default for ProblemConfig {
    fn default() -> Self {
        Self {
            system: System::Line,
            potential: None,
            engine: Engine::Revised,
            order: DEFAULT_ORDER_CAP,
            max_iter: None,
        }
    }
}

impl ProblemConfig {
    pub fn max_iter(&self) -> usize {
        self.max_iter.unwrap_or(self.order + 2)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NumericConfig {
    pub g_value: Option<f64>,
    pub eps_value: Option<f64>,
    pub grid: Option<GridSpec>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => Err(format!("unknown format `{other}` (expected json|csv|text)")),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub format: Format,
    pub path: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Informational in a file; the subcommand on the command line decides.
    pub command: Option<Command>,
    pub problem: ProblemConfig,
    pub numeric: NumericConfig,
    pub output: OutputConfig,
}

/// Command-line values that take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub order: Option<usize>,
    pub max_iter: Option<usize>,
    pub g_value: Option<f64>,
    pub eps_value: Option<f64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub engine: Option<Engine>,
    pub potential: Option<PotentialSpec>,
    pub system: Option<System>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn apply(&mut self, o: Overrides) {
        if let Some(v) = o.order {
            self.problem.order = v;
        }
        if let Some(v) = o.max_iter {
            self.problem.max_iter = Some(v);
        }
        if let Some(v) = o.engine {
            self.problem.engine = v;
        }
        if let Some(v) = o.potential {
            self.problem.potential = Some(v);
        }
        if let Some(v) = o.system {
            self.problem.system = v;
        }
        if let Some(v) = o.g_value {
            self.numeric.g_value = Some(v);
        }
        if let Some(v) = o.eps_value {
            self.numeric.eps_value = Some(v);
        }
        if let Some(v) = o.format {
            self.output.format = v;
        }
        if let Some(v) = o.out {
            self.output.path = Some(v);
        }
    }

    pub fn validate(&self, command: Command) -> Result<()> {
        if self.problem.order < 1 {
            return Err(Error::Config("problem.order must be at least 1".into()));
        }
        if self.problem.max_iter == Some(0) {
            return Err(Error::Config("problem.max_iter must be at least 1".into()));
        }
        if let Some(g) = self.numeric.g_value {
            if !(g > 0.0 && g.is_finite()) {
                return Err(Error::Config(format!(
                    "numeric.g_value must be positive, got {g}"
                )));
            }
        }
        if let Some(grid) = &self.numeric.grid {
            grid.validate()?;
        }
        let needs_potential = match command {
            Command::Solve1d => true,
            Command::CompareEngines => self.problem.system == System::Line,
            _ => false,
        };
        if needs_potential && self.problem.potential.is_none() {
            return Err(Error::Config(format!(
                "{command} needs problem.potential (or --potential)"
            )));
        }
        if (command == Command::Stark || self.problem.system == System::Stark)
            && self.problem.order < 2
        {
            return Err(Error::Config("Stark runs need problem.order ≥ 2".into()));
        }
        Ok(())
    }

    pub fn suite_config(&self) -> SuiteConfig {
        let mut cfg = SuiteConfig::default();
        if let Some(g) = self.numeric.g_value {
            cfg.g_value = g;
        }
        if let Some(grid) = self.numeric.grid {
            cfg.grid = grid;
        }
        cfg
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_document() {
        let cfg = RunConfig::from_toml(
            r#"
            command = "solve1d"
            [problem]
            order = 3
            engine = "old"
            potential = { kind = "explicit", terms = [{ power = 3, coeff = "1/2" }, { power = 1, coeff = "-2", g_exp = 1 }] }
            [numeric]
            g_value = 2.0
            grid = { half_width = 10.0, points = 101 }
            [output]
            format = "csv"
            "#,
        )
        .unwrap();
        assert_eq!(cfg.command, Some(Command::Solve1d));
        assert_eq!(cfg.problem.engine, Engine::Old);
        assert_eq!(cfg.problem.max_iter(), 5);
        assert_eq!(cfg.output.format, Format::Csv);
        let problem = cfg
            .problem
            .potential
            .as_ref()
            .unwrap()
            .to_problem(3)
            .unwrap();
        assert_eq!(problem.perturbation.degree(), Some(3));
        cfg.validate(Command::Solve1d).unwrap();
    }

    #[test]
    fn unknown_field_names_the_field() {
        let err = RunConfig::from_toml("[problem]\nordr = 2\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("ordr"), "{msg}");
        assert!(msg.contains("line 2"), "{msg}");
    }

    #[test]
    fn flags_override_file() {
        let mut cfg = RunConfig::from_toml("[problem]\norder = 3\n").unwrap();
        cfg.apply(Overrides {
            order: Some(5),
            potential: Some("odd:1".parse().unwrap()),
            ..Overrides::default()
        });
        assert_eq!(cfg.problem.order, 5);
        assert_eq!(
            cfg.problem.potential,
            Some(PotentialSpec::OddPower { p: 1 })
        );
    }

    #[test]
    fn validation_errors() {
        let cfg = RunConfig::default();
        assert!(cfg.validate(Command::Solve1d).is_err());
        assert!(cfg.validate(Command::Stark).is_ok());
        let mut cfg = RunConfig::default();
        cfg.problem.order = 1;
        assert!(cfg.validate(Command::Stark).is_err());
        assert!("even:x".parse::<PotentialSpec>().is_err());
        let bad = PotentialSpec::Explicit {
            terms: vec![Term {
                power: 1,
                coeff: "1/0".into(),
                g_exp: 0,
            }],
        };
        assert!(bad.to_problem(2).is_err());
    }
}
