//! Canonical mechanisms with closed-form leakage: randomized response, the
//! deterministic threshold query over i.i.d. binary entries, and the
//! Laplace-noised counting query.
//!
//! The threshold and Laplace analyses never materialize the database; the
//! entry count only enters through binomial tails and the closed branch
//! expressions, all evaluated in the log domain.

use crate::error::{Error, Result};
use crate::par::par_map;
use crate::prob::{
    binomial_cdf_log, binomial_log_pmf, chernoff_tail_bound, log_add_exp, Channel,
};

/// Largest entry count accepted by the exact Laplace oracle; the oracle sums
/// binomial-weighted densities term by term.
pub const MAX_ORACLE_ENTRIES: u64 = 5000;

/// Symmetric randomized response over `k` symbols: keep the input with
/// probability `stay_prob`, otherwise answer uniformly among the other
/// `k - 1` symbols. Leakage capacity is `log(stay_prob (k-1) / (1 - stay_prob))`;
/// the lower endpoint `stay_prob = 1/k` gives identical rows and capacity
/// zero.
pub fn randomized_response(k: usize, stay_prob: f64) -> Result<Channel> {
    if k < 2 {
        return Err(Error::InvalidParameter(
            "randomized response needs at least two symbols".into(),
        ));
    }
    let floor = 1.0 / k as f64;
    if !(stay_prob >= floor && stay_prob < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "stay probability {stay_prob} outside [1/{k}, 1)"
        )));
    }
    let labels: Vec<String> = (0..k).map(|i| i.to_string()).collect();
    let off = (1.0 - stay_prob) / (k - 1) as f64;
    let rows: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| if i == j { stay_prob } else { off })
                .collect()
        })
        .collect();
    Channel::new(labels.clone(), labels, rows)
}

/// "Do more than `m` of the `n` entries satisfy the predicate?" with each
/// entry satisfying it independently with probability `p`, and the observed
/// answer bit.
#[derive(Debug, Clone, Copy)]
pub struct ThresholdQuerySpec {
    pub n: u64,
    pub m: u64,
    pub p: f64,
    pub answer: u8,
}

impl ThresholdQuerySpec {
    pub fn new(n: u64, m: u64, p: f64, answer: u8) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "threshold query needs at least one entry".into(),
            ));
        }
        if m > n {
            return Err(Error::InvalidParameter(format!(
                "threshold {m} exceeds entry count {n}"
            )));
        }
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "predicate probability {p} outside (0, 1)"
            )));
        }
        if answer > 1 {
            return Err(Error::InvalidParameter(format!(
                "answer bit {answer} must be 0 or 1"
            )));
        }
        Ok(ThresholdQuerySpec { n, m, p, answer })
    }
}

/// Leakage of one observed answer of a threshold query.
///
/// `outcome_impossible` marks an answer that can never occur (affirmative
/// with `m = n`); such outcomes leak nothing by convention.
#[derive(Debug, Clone, Copy)]
pub struct ThresholdLeakage {
    pub exact: f64,
    /// Closed-form overestimate `-log(1 - exp(-n KL))`; absent when the
    /// deviation runs the wrong way for the bound, infinite at the boundary
    /// where the exponent vanishes.
    pub chernoff_bound: Option<f64>,
    pub outcome_impossible: bool,
}

/// Exact leakage of the answer bit, `-log P(answer)`, with the matching
/// Chernoff-style overestimate when its direction precondition holds
/// (`m/n <= p` for the affirmative answer, `(m+1)/n >= p` for the negative
/// one).
///
/// Whichever binomial tail is small is evaluated directly in the log
/// domain; the complementary expression `-log1p(-exp(log_tail))` is only
/// used for the well-conditioned side, keeping tiny leakages exact across
/// fifty orders of magnitude.
pub fn threshold_query_leakage(spec: &ThresholdQuerySpec) -> Result<ThresholdLeakage> {
    let ThresholdQuerySpec { n, m, p, answer } = *spec;
    let ln_half = -std::f64::consts::LN_2;
    // P(S <= m) in log form, and the mirrored upper tail
    // P(S >= m + 1) = P(n - S <= n - m - 1) with n - S ~ Binomial(n, 1-p).
    let log_lower = binomial_cdf_log(n, m as i64, p)?;
    let log_upper = binomial_cdf_log(n, n as i64 - m as i64 - 1, 1.0 - p)?;
    if answer == 1 {
        if m == n {
            return Ok(ThresholdLeakage {
                exact: 0.0,
                chernoff_bound: None,
                outcome_impossible: true,
            });
        }
        let exact = if log_lower > ln_half {
            -log_upper
        } else {
            -(-log_lower.exp()).ln_1p()
        };
        let chernoff_bound = if m as f64 / n as f64 <= p {
            let tail = chernoff_tail_bound(n, m, p)?;
            Some(-(-tail).ln_1p())
        } else {
            None
        };
        Ok(ThresholdLeakage {
            exact,
            chernoff_bound,
            outcome_impossible: false,
        })
    } else {
        let exact = if log_lower > ln_half {
            -(-log_upper.exp()).ln_1p()
        } else {
            -log_lower
        };
        let chernoff_bound = if (m as f64 + 1.0) / n as f64 >= p {
            if m == n {
                // The negative answer is certain; zero leakage, zero bound.
                Some(0.0)
            } else {
                let tail = chernoff_tail_bound(n, n - m - 1, 1.0 - p)?;
                Some(-(-tail).ln_1p())
            }
        } else {
            None
        };
        Ok(ThresholdLeakage {
            exact,
            chernoff_bound,
            outcome_impossible: false,
        })
    }
}

/// Counting query with Laplace noise: the released value is the fraction of
/// entries satisfying a predicate plus `Laplace(0, b)` noise, each entry
/// satisfying the predicate independently. The prior is pinned either to one
/// predicate probability `p` or to the family `p` ranging over `(c, 1-c)`.
#[derive(Debug, Clone, Copy)]
pub struct LaplaceCountingSpec {
    pub n: u64,
    pub b: f64,
    pub p: Option<f64>,
    pub c: Option<f64>,
}

impl LaplaceCountingSpec {
    pub fn new(n: u64, b: f64, p: Option<f64>, c: Option<f64>) -> Result<Self> {
        check_laplace_params(n, b)?;
        if let Some(p) = p {
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "predicate probability {p} outside (0, 1)"
                )));
            }
        }
        if let Some(c) = c {
            check_family_parameter(c)?;
        }
        if let (Some(p), Some(c)) = (p, c) {
            if !(p > c && p < 1.0 - c) {
                return Err(Error::InvalidParameter(format!(
                    "predicate probability {p} outside the family range ({c}, {})",
                    1.0 - c
                )));
            }
        }
        Ok(LaplaceCountingSpec { n, b, p, c })
    }
}

fn check_laplace_params(n: u64, b: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "counting query needs at least one entry".into(),
        ));
    }
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "noise scale {b} must be positive and finite"
        )));
    }
    Ok(())
}

fn check_family_parameter(c: f64) -> Result<()> {
    if !(0.0..0.5).contains(&c) {
        return Err(Error::InvalidParameter(format!(
            "family parameter {c} outside [0, 0.5)"
        )));
    }
    Ok(())
}

/// Worst-outcome leakage about one entry of the Laplace counting query
/// under i.i.d. `Bernoulli(p)` entries: the larger of the two tail-outcome
/// branches
/// `1/(nb) - log((1-p) + p e^{1/(nb)})` (released value above the range)
/// and `1/(nb) - log(p + (1-p) e^{1/(nb)})` (below). The first branch wins
/// exactly when `p <= 1/2`.
pub fn laplace_counting_leakage_exact(n: u64, b: f64, p: f64) -> Result<f64> {
    check_laplace_params(n, b)?;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "predicate probability {p} outside (0, 1)"
        )));
    }
    let inb = 1.0 / (n as f64 * b);
    let above = inb - ((1.0 - p) + p * inb.exp()).ln();
    let below = inb - (p + (1.0 - p) * inb.exp()).ln();
    Ok(above.max(below))
}

/// Supremum of the exact leakage over all predicate probabilities in
/// `(c, 1-c)`: the endpoint value `1/(nb) - log((1-c) + c e^{1/(nb)})`.
/// Nonincreasing in `c` and exactly `1/(nb)` at `c = 0`.
pub fn laplace_counting_leakage_bound(n: u64, b: f64, c: f64) -> Result<f64> {
    check_laplace_params(n, b)?;
    check_family_parameter(c)?;
    let inb = 1.0 / (n as f64 * b);
    Ok(inb - ((1.0 - c) + c * inb.exp()).ln())
}

/// Second-order expansion of the bound for large `nb`:
/// `(1-c)/(nb) + c^2/(2 n^2 b^2)`. Valid (and an overestimate of the exact
/// bound) for `nb >= 1`.
pub fn laplace_counting_leakage_simplified(n: u64, b: f64, c: f64) -> Result<f64> {
    check_laplace_params(n, b)?;
    check_family_parameter(c)?;
    let inb = 1.0 / (n as f64 * b);
    if inb > 1.0 {
        return Err(Error::InvalidParameter(format!(
            "simplified bound needs n*b >= 1 (got {})",
            n as f64 * b
        )));
    }
    Ok((1.0 - c) * inb + c * c * inb * inb / 2.0)
}

/// Exact leakage about one entry at a specific released value `y`, via
/// binomial-weighted sums of Laplace densities:
/// `log max_{d in {0,1}} E[exp(-|y - d/n - K/n| / b)] - log E[exp(-|y - S/n| / b)]`
/// with `K` the count over the other entries and `S` the full count.
///
/// This is the brute-force oracle for the closed branches: it matches the
/// above-range branch for `y > 1` and the below-range branch for `y < 0`,
/// and stays below both inside `[0, 1]`.
pub fn laplace_counting_pml_at_y(n: u64, b: f64, p: f64, y: f64) -> Result<f64> {
    check_laplace_params(n, b)?;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "predicate probability {p} outside (0, 1)"
        )));
    }
    if !y.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "released value {y} must be finite"
        )));
    }
    if n > MAX_ORACLE_ENTRIES {
        return Err(Error::DomainTooLarge {
            size: n as u128,
            limit: MAX_ORACLE_ENTRIES,
        });
    }
    let nf = n as f64;
    let mut log_numerator = f64::NEG_INFINITY;
    for d in 0..=1u64 {
        let mut acc = f64::NEG_INFINITY;
        if n == 1 {
            acc = -(y - d as f64 / nf).abs() / b;
        } else {
            for k in 0..n {
                let term = binomial_log_pmf(n - 1, k, p)?
                    - (y - (d + k) as f64 / nf).abs() / b;
                acc = log_add_exp(acc, term);
            }
        }
        log_numerator = log_numerator.max(acc);
    }
    let mut log_denominator = f64::NEG_INFINITY;
    for k in 0..=n {
        let term = binomial_log_pmf(n, k, p)? - (y - k as f64 / nf).abs() / b;
        log_denominator = log_add_exp(log_denominator, term);
    }
    Ok((log_numerator - log_denominator).max(0.0))
}

/// Oracle maximized over a released-value grid: 1001 uniform points on
/// `[-2, 3]` plus the far tails `{-10, 10}`. The maximum always sits in a
/// tail, so this recovers [`laplace_counting_leakage_exact`].
pub fn laplace_counting_oracle_max(n: u64, b: f64, p: f64) -> Result<f64> {
    let mut grid: Vec<f64> = (0..=1000).map(|i| -2.0 + 5.0 * i as f64 / 1000.0).collect();
    grid.push(-10.0);
    grid.push(10.0);
    let values = par_map(&grid, |&y| laplace_counting_pml_at_y(n, b, p, y));
    let mut best = 0.0f64;
    for v in values {
        best = best.max(v?);
    }
    Ok(best)
}
