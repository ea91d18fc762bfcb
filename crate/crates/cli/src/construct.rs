//! `construct`: build the adversarial mechanisms, attribute kernels, and
//! concentrated priors, and serialize them as JSON files the other
//! subcommands can consume.

use std::fs;
use std::path::Path;

use pml_core::database::{adversarial_prior, AdversarialConstruction, AdversarialPrior};
use pml_core::disclosure::{
    construct_low_entropy_disclosed_attribute, construct_min_cost_disclosure,
};
use pml_core::prob::push_forward;
use pml_core::{Channel, Pmf};

use crate::files::{read_json, write_json, MechanismFile, PriorFile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum AdversarialKind {
    ProductTarget,
    ConditionalEntry,
    CorrelatedEntry,
}

#[derive(Debug, Clone)]
pub struct AdversarialSpec {
    pub kind: AdversarialKind,
    pub eps: f64,
    pub target: Option<String>,
    pub entry: usize,
    pub rest: Option<String>,
    pub d: Option<String>,
    pub d_prime: Option<String>,
    pub output: Option<String>,
}

fn ensure_dir(out: &Path) -> Result<(), String> {
    fs::create_dir_all(out).map_err(|e| format!("cannot create {}: {e}", out.display()))
}

fn report<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), String> {
    write_json(path, value)?;
    println!("wrote {}", path.display());
    Ok(())
}

pub fn run_min_cost(prior_path: &Path, alpha: Option<f64>, out: &Path) -> Result<i32, String> {
    let prior: Pmf = read_json::<PriorFile>(prior_path)?.to_pmf()?;
    let alpha = alpha.unwrap_or_else(|| {
        let p_min = prior.min_prob().0;
        (0.9 * p_min / (1.0 - p_min)).min(0.1)
    });
    let (mechanism, u_kernel) =
        construct_min_cost_disclosure(&prior, alpha).map_err(|e| e.to_string())?;
    ensure_dir(out)?;
    report(
        &out.join("mechanism.json"),
        &MechanismFile::from_channel(&mechanism),
    )?;
    report(
        &out.join("u_kernel.json"),
        &MechanismFile::from_channel(&u_kernel),
    )?;
    report(&out.join("prior.json"), &PriorFile::from_pmf(&prior))?;
    Ok(0)
}

pub fn run_low_entropy_attr(
    prior_path: &Path,
    disclosed: &str,
    lambda: f64,
    out: &Path,
) -> Result<i32, String> {
    let p_u: Pmf = read_json::<PriorFile>(prior_path)?.to_pmf()?;
    let kernel = construct_low_entropy_disclosed_attribute(&p_u, disclosed, lambda)
        .map_err(|e| e.to_string())?;
    let marginal = push_forward(&p_u, &kernel).map_err(|e| e.to_string())?;
    ensure_dir(out)?;
    report(
        &out.join("attribute_kernel.json"),
        &MechanismFile::from_channel(&kernel),
    )?;
    report(
        &out.join("attribute_marginal.json"),
        &PriorFile::from_pmf(&marginal),
    )?;
    Ok(0)
}

/// Resolves an entry value given either its label or its alphabet index.
fn entry_value(alphabet: &[String], token: &str) -> Result<usize, String> {
    if let Some(i) = alphabet.iter().position(|l| l == token) {
        return Ok(i);
    }
    token
        .parse::<usize>()
        .ok()
        .filter(|&i| i < alphabet.len())
        .ok_or_else(|| format!("entry value {token:?} not in the alphabet"))
}

fn entry_values(alphabet: &[String], tokens: &str) -> Result<Vec<usize>, String> {
    tokens
        .split(',')
        .map(|t| entry_value(alphabet, t.trim()))
        .collect()
}

fn output_value(c: &Channel, token: &str) -> Result<usize, String> {
    if let Some(y) = c.output_index(token) {
        return Ok(y);
    }
    token
        .parse::<usize>()
        .ok()
        .filter(|&y| y < c.output_len())
        .ok_or_else(|| format!("output {token:?} not in the mechanism"))
}

pub fn run_adversarial(
    mechanism_path: &Path,
    spec: &AdversarialSpec,
    out: &Path,
) -> Result<i32, String> {
    let m = read_json::<MechanismFile>(mechanism_path)?.to_database_mechanism()?;
    let schema = m.schema();
    let alphabet = schema.entry_alphabet().to_vec();
    let y = match &spec.output {
        Some(token) => output_value(m.channel(), token)?,
        None => 0,
    };
    let construction = match spec.kind {
        AdversarialKind::ProductTarget => {
            let target = match &spec.target {
                Some(tokens) => entry_values(&alphabet, tokens)?,
                None => vec![0; schema.n()],
            };
            AdversarialConstruction::ProductTarget { target }
        }
        AdversarialKind::ConditionalEntry => {
            let rest = match &spec.rest {
                Some(tokens) => entry_values(&alphabet, tokens)?,
                None => vec![0; schema.n() - 1],
            };
            AdversarialConstruction::ConditionalEntry {
                i: spec.entry,
                rest,
                y,
            }
        }
        AdversarialKind::CorrelatedEntry => {
            let d = match &spec.d {
                Some(token) => entry_value(&alphabet, token)?,
                None => 0,
            };
            let d_prime = match &spec.d_prime {
                Some(token) => entry_value(&alphabet, token)?,
                None => 1,
            };
            AdversarialConstruction::CorrelatedEntry {
                i: spec.entry,
                d,
                d_prime,
                y,
            }
        }
    };
    let built = adversarial_prior(&m, &construction, spec.eps).map_err(|e| e.to_string())?;
    ensure_dir(out)?;
    match built {
        AdversarialPrior::Product(prior) => {
            let explicit = prior.to_explicit(schema);
            report(&out.join("prior.json"), &PriorFile::from_pmf(&explicit))?;
        }
        AdversarialPrior::EntryPmf(pmf) => {
            report(&out.join("entry_pmf.json"), &PriorFile::from_pmf(&pmf))?;
        }
        AdversarialPrior::Kernel(kernel) => {
            report(&out.join("kernel.json"), &MechanismFile::from_channel(&kernel))?;
        }
    }
    Ok(0)
}
