//! Seeded generators for random priors, channels, and database mechanisms,
//! plus exhaustive enumeration of deterministic maps between small alphabets.
//!
//! Everything is driven by an explicit ChaCha stream so a seed printed in a
//! failure report reproduces the instance exactly, independent of platform.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::database::{DatabaseMechanism, DatabaseSchema};
use crate::error::Result;
use crate::prob::{Channel, Pmf};

/// Deterministic stream for a seed; every generator in this module takes the
/// stream by mutable reference so instances can be drawn in sequence.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Labels `"0"`, `"1"`, ..., `"k-1"`.
pub fn index_labels(k: usize) -> Vec<String> {
    (0..k).map(|i| i.to_string()).collect()
}

fn raw_weights<R: Rng>(rng: &mut R, len: usize, lo: f64, hi: f64) -> Vec<f64> {
    assert!(len > 0);
    assert!(0.0 < lo && lo <= hi);
    (0..len).map(|_| rng.gen_range(lo..=hi)).collect()
}

fn normalize(mut weights: Vec<f64>) -> Vec<f64> {
    let sum: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= sum;
    }
    weights
}

/// Full-support prior with raw masses uniform on `[lo, hi]`, normalized.
/// Entry ratios never exceed `hi / lo`, which callers use to keep generated
/// instances away from degenerate corners.
pub fn random_pmf<R: Rng>(rng: &mut R, labels: Vec<String>, lo: f64, hi: f64) -> Result<Pmf> {
    let weights = normalize(raw_weights(rng, labels.len(), lo, hi));
    Pmf::new(labels, weights)
}

/// Channel whose rows are drawn like [`random_pmf`]; every entry is positive,
/// so the leakage capacity is finite.
pub fn random_channel<R: Rng>(
    rng: &mut R,
    input_labels: Vec<String>,
    output_labels: Vec<String>,
    lo: f64,
    hi: f64,
) -> Result<Channel> {
    let rows: Vec<Vec<f64>> = (0..input_labels.len())
        .map(|_| normalize(raw_weights(rng, output_labels.len(), lo, hi)))
        .collect();
    Channel::new(input_labels, output_labels, rows)
}

/// Channel with infinite leakage capacity: one uniformly chosen entry is
/// forced to zero while the same output stays reachable from every other
/// input. Needs at least two inputs and two outputs.
pub fn random_infinite_capacity_channel<R: Rng>(
    rng: &mut R,
    input_labels: Vec<String>,
    output_labels: Vec<String>,
) -> Result<Channel> {
    assert!(input_labels.len() >= 2);
    assert!(output_labels.len() >= 2);
    let mut rows: Vec<Vec<f64>> = (0..input_labels.len())
        .map(|_| raw_weights(rng, output_labels.len(), 0.1, 1.0))
        .collect();
    let i = rng.gen_range(0..input_labels.len());
    let j = rng.gen_range(0..output_labels.len());
    rows[i][j] = 0.0;
    let rows = rows.into_iter().map(normalize).collect();
    Channel::new(input_labels, output_labels, rows)
}

/// Database mechanism whose conditional rows are drawn like [`random_pmf`]
/// over `n_outputs` observable values.
pub fn random_database_mechanism<R: Rng>(
    rng: &mut R,
    schema: DatabaseSchema,
    n_outputs: usize,
    lo: f64,
    hi: f64,
) -> Result<DatabaseMechanism> {
    let rows: Vec<Vec<f64>> = (0..schema.database_count())
        .map(|_| normalize(raw_weights(rng, n_outputs, lo, hi)))
        .collect();
    DatabaseMechanism::from_rows(schema, index_labels(n_outputs), rows)
}

/// Every function from a `domain`-element set to a `codomain`-element set,
/// as index vectors, in lexicographic order. Feeding these into
/// [`Channel::deterministic`] enumerates all deterministic kernels exactly.
pub fn enumerate_maps(domain: usize, codomain: usize) -> Vec<Vec<usize>> {
    assert!(domain > 0 && codomain > 0);
    let total = (codomain as u128).pow(domain as u32);
    assert!(total <= 1 << 20);
    let mut maps = Vec::with_capacity(total as usize);
    let mut current = vec![0usize; domain];
    loop {
        maps.push(current.clone());
        let mut pos = domain;
        loop {
            if pos == 0 {
                return maps;
            }
            pos -= 1;
            current[pos] += 1;
            if current[pos] < codomain {
                break;
            }
            current[pos] = 0;
        }
    }
}
