//! `laplace`: closed-form leakage of the Laplace counting query, either at a
//! single parameter point or swept along one parameter.

use pml_core::mechanisms::{
    laplace_counting_leakage_bound, laplace_counting_leakage_exact,
    laplace_counting_leakage_simplified, LaplaceCountingSpec,
};

use crate::config::OutputFormat;
use crate::fmt::{fmt_float, json_float};

#[derive(Debug, Clone, Copy)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    N,
    B,
    P,
    C,
}

/// Parses `param=lo:hi:steps`, e.g. `b=0.001:0.1:20`.
pub fn parse_sweep(spec: &str) -> Result<SweepSpec, String> {
    let (name, range) = spec
        .split_once('=')
        .ok_or_else(|| format!("sweep spec {spec:?} is not param=lo:hi:steps"))?;
    let param = match name {
        "n" => SweepParam::N,
        "b" => SweepParam::B,
        "p" => SweepParam::P,
        "c" => SweepParam::C,
        other => return Err(format!("unknown sweep parameter {other:?}")),
    };
    let parts: Vec<&str> = range.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("sweep spec {spec:?} is not param=lo:hi:steps"));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|_| format!("bad sweep bound {:?}", parts[0]))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|_| format!("bad sweep bound {:?}", parts[1]))?;
    let steps: usize = parts[2]
        .parse()
        .map_err(|_| format!("bad sweep step count {:?}", parts[2]))?;
    if steps < 2 {
        return Err("sweep needs at least 2 steps".into());
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err("sweep bounds must be finite with lo < hi".into());
    }
    Ok(SweepSpec {
        param,
        lo,
        hi,
        steps,
    })
}

struct Point {
    n: u64,
    b: f64,
    p: Option<f64>,
    c: Option<f64>,
    exact: Option<f64>,
    bound: Option<f64>,
    simplified: Option<f64>,
}

fn evaluate(n: u64, b: f64, p: Option<f64>, c: Option<f64>) -> Result<Point, String> {
    LaplaceCountingSpec::new(n, b, p, c).map_err(|e| e.to_string())?;
    let exact = match p {
        Some(p) => Some(laplace_counting_leakage_exact(n, b, p).map_err(|e| e.to_string())?),
        None => None,
    };
    let bound = match c {
        Some(c) => Some(laplace_counting_leakage_bound(n, b, c).map_err(|e| e.to_string())?),
        None => None,
    };
    let simplified = match c {
        Some(c) if n as f64 * b >= 1.0 => {
            Some(laplace_counting_leakage_simplified(n, b, c).map_err(|e| e.to_string())?)
        }
        _ => None,
    };
    Ok(Point {
        n,
        b,
        p,
        c,
        exact,
        bound,
        simplified,
    })
}

fn opt_cell(v: Option<f64>) -> String {
    v.map(fmt_float).unwrap_or_default()
}

pub fn run(
    n: u64,
    b: f64,
    p: Option<f64>,
    c: Option<f64>,
    sweep: Option<&str>,
    format: OutputFormat,
) -> Result<i32, String> {
    if p.is_none() && c.is_none() {
        return Err("provide --p (exact leakage) and/or --c (family bound)".into());
    }
    let points: Vec<Point> = match sweep {
        None => vec![evaluate(n, b, p, c)?],
        Some(spec) => {
            let sweep = parse_sweep(spec)?;
            let mut points = Vec::with_capacity(sweep.steps);
            for i in 0..sweep.steps {
                let t = sweep.lo + (sweep.hi - sweep.lo) * i as f64 / (sweep.steps - 1) as f64;
                let point = match sweep.param {
                    SweepParam::N => evaluate(t.round().max(1.0) as u64, b, p, c)?,
                    SweepParam::B => evaluate(n, t, p, c)?,
                    SweepParam::P => evaluate(n, b, Some(t), c)?,
                    SweepParam::C => evaluate(n, b, p, Some(t))?,
                };
                points.push(point);
            }
            points
        }
    };

    match format {
        OutputFormat::Json => {
            let rows: Vec<serde_json::Value> = points
                .iter()
                .map(|pt| {
                    serde_json::json!({
                        "n": pt.n,
                        "b": pt.b,
                        "p": pt.p,
                        "c": pt.c,
                        "exact": pt.exact.map(json_float),
                        "bound": pt.bound.map(json_float),
                        "simplified": pt.simplified.map(json_float),
                    })
                })
                .collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::Value::Array(rows)).unwrap()
            );
        }
        OutputFormat::Text if sweep.is_none() => {
            // Single point: one labeled line per available quantity.
            let pt = &points[0];
            if let Some(v) = pt.exact {
                println!("exact,{}", fmt_float(v));
            }
            if let Some(v) = pt.bound {
                println!("bound,{}", fmt_float(v));
            }
            if let Some(v) = pt.simplified {
                println!("simplified,{}", fmt_float(v));
            }
        }
        OutputFormat::Text | OutputFormat::Csv => {
            println!("n,b,p,c,exact,bound,simplified");
            for pt in &points {
                println!(
                    "{},{},{},{},{},{},{}",
                    pt.n,
                    pt.b,
                    pt.p.map(|v| v.to_string()).unwrap_or_default(),
                    pt.c.map(|v| v.to_string()).unwrap_or_default(),
                    opt_cell(pt.exact),
                    opt_cell(pt.bound),
                    opt_cell(pt.simplified),
                );
            }
        }
    }
    Ok(0)
}
