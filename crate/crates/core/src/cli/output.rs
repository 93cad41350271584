use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};

use super::config::Format;
use super::document::{ExactTerm, ResultDocument};

/// One CSV row per (run, step, ε-order, basis monomial).
#[derive(Serialize)]
struct CoeffRow<'a> {
    engine: String,
    step: usize,
    quantity: &'static str,
    order: usize,
    monomial: String,
    num: &'a str,
    den: &'a str,
    g_exp: i32,
}

impl<'a> CoeffRow<'a> {
    fn new(
        engine: &str,
        step: usize,
        quantity: &'static str,
        monomial: String,
        t: &'a ExactTerm,
    ) -> Self {
        Self {
            engine: engine.to_string(),
            step,
            quantity,
            order: t.order,
            monomial,
            num: &t.num,
            den: &t.den,
            g_exp: t.g_exp,
        }
    }
}

#[derive(Serialize)]
struct OracleCsvRow<'a> {
    label: &'a str,
    value_table: Option<f64>,
    value_oracle: Option<f64>,
    abs_err: Option<f64>,
    rel_err: Option<f64>,
    metric: String,
    tolerance: f64,
    passed: bool,
    error: Option<&'a str>,
}

fn csv_error(e: impl std::fmt::Display) -> Error {
    Error::Config(format!("writing csv: {e}"))
}

pub fn to_csv(doc: &ResultDocument) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if let Some(oracle) = &doc.oracle {
        for row in &oracle.rows {
            w.serialize(OracleCsvRow {
                label: &row.label,
                value_table: row.value_table,
                value_oracle: row.value_oracle,
                abs_err: row.abs_err,
                rel_err: row.rel_err,
                metric: format!("{:?}", row.metric).to_lowercase(),
                tolerance: row.tolerance,
                passed: row.passed,
                error: row.error.as_deref(),
            })
            .map_err(csv_error)?;
        }
    } else {
        for run in &doc.runs {
            for step in &run.steps {
                let engine = run.engine.to_string();
                for t in &step.delta {
                    w.serialize(CoeffRow::new(&engine, step.n, "delta", "1".into(), t))
                        .map_err(csv_error)?;
                }
                for t in &step.state {
                    w.serialize(CoeffRow::new(
                        &engine,
                        step.n,
                        "state",
                        t.monomial.to_string(),
                        &t.coeff,
                    ))
                    .map_err(csv_error)?;
                }
            }
        }
    }
    let bytes = w.into_inner().map_err(csv_error)?;
    String::from_utf8(bytes).map_err(csv_error)
}

fn term_text(t: &ExactTerm) -> String {
    let q = if t.den == "1" {
        t.num.clone()
    } else {
        format!("{}/{}", t.num, t.den)
    };
    format!("{q}·ε^{}·g^{}", t.order, t.g_exp)
}

fn join(terms: impl Iterator<Item = String>) -> String {
    let s: Vec<String> = terms.collect();
    if s.is_empty() {
        "0".into()
    } else {
        s.join(" + ")
    }
}

pub fn to_text(doc: &ResultDocument) -> String {
    let mut out = String::new();
    let p = &doc.problem;
    let _ = writeln!(
        out,
        "{} [{}] {}, N_ε = {}, max_iter = {}",
        doc.command, p.system, p.description, p.order_cap, p.max_iter
    );
    for run in &doc.runs {
        let _ = writeln!(
            out,
            "engine {} (fixed point: {})",
            run.engine, run.reached_fixed_point
        );
        for step in &run.steps {
            let _ = write!(
                out,
                "  Δ_{} = {}",
                step.n,
                join(step.delta.iter().map(term_text))
            );
            if let Some(v) = step.delta_numeric {
                let _ = write!(out, "  (≈ {v:.12e})");
            }
            let _ = writeln!(out);
            let state = join(
                step.state
                    .iter()
                    .map(|t| format!("{}·{}", term_text(&t.coeff), t.monomial)),
            );
            let _ = writeln!(out, "    state: {state}");
            let _ = writeln!(
                out,
                "    fixed point: {}, residual order: {}",
                step.fixed_point,
                step.residual_order.map_or("none".into(), |o| o.to_string())
            );
        }
    }
    if let Some(cmp) = &doc.comparison {
        let _ = writeln!(
            out,
            "revised fixed point at step {:?}, old at {:?}; required agreement through ε^{}",
            cmp.revised_fixed_point_step, cmp.old_fixed_point_step, cmp.required_through
        );
        for step in &cmp.steps {
            let flags: Vec<String> = step
                .orders
                .iter()
                .map(|o| {
                    format!(
                        "ε^{}:{}{}",
                        o.order,
                        flag(o.delta_equal),
                        flag(o.state_equal)
                    )
                })
                .collect();
            let _ = writeln!(out, "  n={} Δ/state {}", step.n, flags.join(" "));
        }
    }
    if let Some(oracle) = &doc.oracle {
        for row in &oracle.rows {
            let err = match (row.rel_err, &row.error) {
                (_, Some(e)) => e.clone(),
                (Some(r), None) => {
                    format!("abs {:.2e} rel {r:.2e}", row.abs_err.unwrap_or(f64::NAN))
                }
                (None, None) => "n/a".into(),
            };
            let _ = writeln!(
                out,
                "  [{}] {:<32} {err}",
                if row.passed { "ok" } else { "FAIL" },
                row.label
            );
        }
        let _ = writeln!(out, "max relative error {:.3e}", oracle.max_rel_err());
    }
    for note in &doc.sign_notes {
        let _ = writeln!(out, "note: {}", note.message);
    }
    let _ = writeln!(out, "{}", if doc.passed { "PASS" } else { "FAIL" });
    out
}

fn flag(b: bool) -> char {
    if b {
        '='
    } else {
        '≠'
    }
}

pub fn render(doc: &ResultDocument, format: Format) -> Result<String> {
    match format {
        Format::Json => doc.to_json(),
        Format::Csv => to_csv(doc),
        Format::Text => Ok(to_text(doc)),
    }
}
