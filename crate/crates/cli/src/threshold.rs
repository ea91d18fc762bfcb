//! `threshold`: closed-form leakage of the deterministic threshold query over
//! an i.i.d. Bernoulli database, with the Chernoff-style upper bound alongside.

use pml_core::mechanisms::{threshold_query_leakage, ThresholdQuerySpec};

use crate::config::OutputFormat;
use crate::fmt::{fmt_float, json_float};

/// Reference level printed next to every row: the leakage that the
/// one-respondent counting query concedes at p = 0.3.
const REFERENCE: f64 = 0.356_674_943_938_732_45;

struct Row {
    n: u64,
    p: f64,
    m: u64,
    answer: u8,
    exact: f64,
    chernoff: Option<f64>,
    impossible: bool,
}

fn evaluate(n: u64, p: f64, m: u64, answer: u8) -> Result<Row, String> {
    let spec = ThresholdQuerySpec::new(n, m, p, answer).map_err(|e| e.to_string())?;
    let leak = threshold_query_leakage(&spec).map_err(|e| e.to_string())?;
    Ok(Row {
        n,
        p,
        m,
        answer,
        exact: leak.exact,
        chernoff: leak.chernoff_bound,
        impossible: leak.outcome_impossible,
    })
}

pub fn run(
    ns: &[u64],
    ps: &[f64],
    answer: u8,
    m: Option<u64>,
    sweep: bool,
    format: OutputFormat,
) -> Result<i32, String> {
    if ns.is_empty() || ps.is_empty() {
        return Err("provide at least one --n and one --p".into());
    }
    if m.is_none() && !sweep {
        return Err("provide --m or --sweep".into());
    }

    let mut rows = Vec::new();
    for &n in ns {
        for &p in ps {
            if sweep {
                // Threshold fractions m/n on a percent grid; duplicates after
                // rounding are kept so every n shares the same row count.
                for k in 0..=100u64 {
                    let m = ((k as f64 / 100.0) * n as f64).round() as u64;
                    rows.push(evaluate(n, p, m, answer)?);
                }
            } else {
                rows.push(evaluate(n, p, m.unwrap(), answer)?);
            }
        }
    }

    match format {
        OutputFormat::Json => {
            let out: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "n": r.n,
                        "p": r.p,
                        "m": r.m,
                        "m_over_n": r.m as f64 / r.n as f64,
                        "answer": r.answer,
                        "exact": json_float(r.exact),
                        "chernoff_bound": r.chernoff.map(json_float),
                        "outcome_impossible": r.impossible,
                        "reference": json_float(REFERENCE),
                    })
                })
                .collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::Value::Array(out)).unwrap()
            );
        }
        OutputFormat::Text | OutputFormat::Csv => {
            println!("n,p,m,m_over_n,answer,exact,chernoff_bound,reference");
            for r in &rows {
                println!(
                    "{},{},{},{},{},{},{},{}",
                    r.n,
                    r.p,
                    r.m,
                    r.m as f64 / r.n as f64,
                    r.answer,
                    fmt_float(r.exact),
                    r.chernoff.map(fmt_float).unwrap_or_default(),
                    fmt_float(REFERENCE),
                );
            }
        }
    }
    Ok(0)
}
