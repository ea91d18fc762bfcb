//! Finite probability primitives.
//!
//! [`Pmf`] and [`Channel`] validate on construction and carry probabilities
//! in both the linear and the log domain, so downstream code never takes a
//! logarithm of an unchecked value. A [`Joint`] pairs a channel with a prior
//! on its input alphabet and exposes the Bayes operations (output marginal,
//! posterior) that the leakage machinery is built from.
//!
//! Module-level numeric conventions:
//!
//! * sums may deviate from one by at most [`SUM_TOLERANCE`]; inputs within
//!   the tolerance are renormalized, anything worse is rejected;
//! * probabilities at or below [`SUPPORT_FLOOR`] count as exact zeros when
//!   deciding support membership, which keeps rounding noise from turning
//!   into spurious infinite log-ratios;
//! * every reported quantity is in nats.

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Probabilities at or below this value are treated as exact zeros when
/// determining support.
pub const SUPPORT_FLOOR: f64 = 1e-12;

/// Largest accepted deviation of a probability vector's sum from one.
pub const SUM_TOLERANCE: f64 = 1e-9;

pub(crate) fn check_labels(labels: &[String]) -> Result<()> {
    if labels.is_empty() {
        return Err(Error::EmptyAlphabet);
    }
    let mut sorted: Vec<&String> = labels.iter().collect();
    sorted.sort();
    for pair in sorted.windows(2) {
        if pair[0] == pair[1] {
            return Err(Error::DuplicateLabel {
                label: pair[0].clone(),
            });
        }
    }
    Ok(())
}

fn check_probs(probs: &[f64]) -> Result<f64> {
    let mut sum = 0.0;
    for (index, &value) in probs.iter().enumerate() {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::NegativeProbability { index, value });
        }
        sum += value;
    }
    Ok(sum)
}

fn log_or_neg_inf(p: f64) -> f64 {
    if p > 0.0 {
        p.ln()
    } else {
        f64::NEG_INFINITY
    }
}

/// Index of the smallest value; ties go to the lexicographically smallest
/// label so results are reproducible across runs.
pub(crate) fn argmin_by_label(values: &[f64], labels: &[String]) -> usize {
    assert!(!values.is_empty() && values.len() == labels.len());
    let mut best = 0;
    for i in 1..values.len() {
        if values[i] < values[best] || (values[i] == values[best] && labels[i] < labels[best]) {
            best = i;
        }
    }
    best
}

/// Index of the largest value, ties broken lexicographically by label.
pub(crate) fn argmax_by_label(values: &[f64], labels: &[String]) -> usize {
    assert!(!values.is_empty() && values.len() == labels.len());
    let mut best = 0;
    for i in 1..values.len() {
        if values[i] > values[best] || (values[i] == values[best] && labels[i] < labels[best]) {
            best = i;
        }
    }
    best
}

/// Probability mass function over a labeled finite alphabet.
///
/// Construction normalizes the vector exactly (every entry is divided by the
/// computed sum), so a component that owns all the mass is stored as exactly
/// `1.0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    labels: Vec<String>,
    probs: Vec<f64>,
    log_probs: Vec<f64>,
}

impl Pmf {
    pub fn new(labels: Vec<String>, probs: Vec<f64>) -> Result<Self> {
        check_labels(&labels)?;
        if labels.len() != probs.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels vs {} probabilities",
                labels.len(),
                probs.len()
            )));
        }
        let sum = check_probs(&probs)?;
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::SumOutOfTolerance {
                sum,
                tolerance: SUM_TOLERANCE,
            });
        }
        let probs: Vec<f64> = probs.iter().map(|p| p / sum).collect();
        let log_probs = probs.iter().map(|&p| log_or_neg_inf(p)).collect();
        Ok(Self {
            labels,
            probs,
            log_probs,
        })
    }

    /// Uniform distribution over the given alphabet.
    pub fn uniform(labels: Vec<String>) -> Result<Self> {
        let k = labels.len().max(1);
        Pmf::new(labels, vec![1.0 / k as f64; k])
    }

    /// Mass `1 - eps` on `target`, `eps / (k - 1)` on every other symbol.
    /// A single-symbol alphabet gets the whole mass regardless of `eps`.
    pub fn concentrated(labels: Vec<String>, target: usize, eps: f64) -> Result<Self> {
        let k = labels.len();
        if target >= k {
            return Err(Error::InvalidParameter(format!(
                "target index {target} out of range for alphabet of size {k}"
            )));
        }
        if !(0.0..1.0).contains(&eps) {
            return Err(Error::InvalidParameter(format!(
                "concentration eps {eps} outside [0, 1)"
            )));
        }
        let probs = if k == 1 {
            vec![1.0]
        } else {
            let off = eps / (k as f64 - 1.0);
            let mut v = vec![off; k];
            v[target] = 1.0 - eps;
            v
        };
        Pmf::new(labels, probs)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn log_probs(&self) -> &[f64] {
        &self.log_probs
    }

    pub fn prob(&self, index: usize) -> f64 {
        self.probs[index]
    }

    pub fn log_prob(&self, index: usize) -> f64 {
        self.log_probs[index]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Indices carrying mass above the support floor.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > SUPPORT_FLOOR)
            .map(|(i, _)| i)
    }

    pub fn in_support(&self, index: usize) -> bool {
        self.probs[index] > SUPPORT_FLOOR
    }

    /// True when every symbol carries mass above the support floor.
    pub fn is_full_support(&self) -> bool {
        self.probs.iter().all(|&p| p > SUPPORT_FLOOR)
    }

    /// Largest mass together with the lexicographically first label
    /// attaining it.
    pub fn max_prob(&self) -> (f64, &str) {
        let mut best = 0usize;
        for i in 1..self.probs.len() {
            if self.probs[i] > self.probs[best]
                || (self.probs[i] == self.probs[best] && self.labels[i] < self.labels[best])
            {
                best = i;
            }
        }
        (self.probs[best], &self.labels[best])
    }

    /// Smallest mass together with the lexicographically first label
    /// attaining it.
    pub fn min_prob(&self) -> (f64, &str) {
        let mut best = 0usize;
        for i in 1..self.probs.len() {
            if self.probs[i] < self.probs[best]
                || (self.probs[i] == self.probs[best] && self.labels[i] < self.labels[best])
            {
                best = i;
            }
        }
        (self.probs[best], &self.labels[best])
    }

    /// Min-entropy `-log max_x p(x)` in nats. Zero exactly for a point mass.
    pub fn min_entropy(&self) -> f64 {
        (-self.max_prob().0.ln()).max(0.0)
    }
}

/// Renyi divergence of order infinity, `log max_{x in supp(p)} p(x)/q(x)`.
///
/// Infinite when `p` puts mass above the support floor where `q` has none.
/// Requires identical alphabets.
pub fn renyi_div_inf(p: &Pmf, q: &Pmf) -> Result<f64> {
    if p.labels != q.labels {
        return Err(Error::AlphabetMismatch(
            "divergence arguments must share one alphabet".into(),
        ));
    }
    let mut best = f64::NEG_INFINITY;
    for i in p.support() {
        if !q.in_support(i) {
            return Ok(f64::INFINITY);
        }
        best = best.max(p.log_prob(i) - q.log_prob(i));
    }
    Ok(best)
}

/// Row-stochastic channel from a labeled input alphabet to a labeled output
/// alphabet. Rows are validated and renormalized independently.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    input_labels: Vec<String>,
    output_labels: Vec<String>,
    rows: Vec<Vec<f64>>,
    log_rows: Vec<Vec<f64>>,
}

impl Channel {
    pub fn new(
        input_labels: Vec<String>,
        output_labels: Vec<String>,
        rows: Vec<Vec<f64>>,
    ) -> Result<Self> {
        check_labels(&input_labels)?;
        check_labels(&output_labels)?;
        if rows.len() != input_labels.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} rows vs {} input labels",
                rows.len(),
                input_labels.len()
            )));
        }
        let mut normalized = Vec::with_capacity(rows.len());
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != output_labels.len() {
                return Err(Error::DimensionMismatch(format!(
                    "row {r} has {} entries vs {} output labels",
                    row.len(),
                    output_labels.len()
                )));
            }
            let sum = check_probs(&row)?;
            if (sum - 1.0).abs() > SUM_TOLERANCE {
                return Err(Error::RowSumOutOfTolerance { row: r, sum });
            }
            normalized.push(row.iter().map(|p| p / sum).collect::<Vec<f64>>());
        }
        let log_rows = normalized
            .iter()
            .map(|row| row.iter().map(|&p| log_or_neg_inf(p)).collect())
            .collect();
        Ok(Self {
            input_labels,
            output_labels,
            rows: normalized,
            log_rows,
        })
    }

    /// Identity channel on an alphabet.
    pub fn identity(labels: Vec<String>) -> Result<Self> {
        let k = labels.len();
        let rows = (0..k)
            .map(|i| {
                let mut row = vec![0.0; k];
                row[i] = 1.0;
                row
            })
            .collect();
        Channel::new(labels.clone(), labels, rows)
    }

    /// Deterministic channel sending input `x` to output `map[x]`.
    pub fn deterministic(
        input_labels: Vec<String>,
        output_labels: Vec<String>,
        map: &[usize],
    ) -> Result<Self> {
        if map.len() != input_labels.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} map entries vs {} input labels",
                map.len(),
                input_labels.len()
            )));
        }
        let rows = map
            .iter()
            .map(|&u| {
                if u >= output_labels.len() {
                    return Err(Error::InvalidParameter(format!(
                        "map target {u} out of range for {} outputs",
                        output_labels.len()
                    )));
                }
                let mut row = vec![0.0; output_labels.len()];
                row[u] = 1.0;
                Ok(row)
            })
            .collect::<Result<Vec<_>>>()?;
        Channel::new(input_labels, output_labels, rows)
    }

    pub fn input_len(&self) -> usize {
        self.input_labels.len()
    }

    pub fn output_len(&self) -> usize {
        self.output_labels.len()
    }

    pub fn input_labels(&self) -> &[String] {
        &self.input_labels
    }

    pub fn output_labels(&self) -> &[String] {
        &self.output_labels
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.rows[x]
    }

    pub fn log_row(&self, x: usize) -> &[f64] {
        &self.log_rows[x]
    }

    pub fn prob(&self, x: usize, y: usize) -> f64 {
        self.rows[x][y]
    }

    pub fn output_index(&self, label: &str) -> Option<usize> {
        self.output_labels.iter().position(|l| l == label)
    }

    pub fn input_index(&self, label: &str) -> Option<usize> {
        self.input_labels.iter().position(|l| l == label)
    }
}

/// Push a distribution through a channel: `out(u) = sum_x p(x) k(u|x)`.
pub fn push_forward(p: &Pmf, kernel: &Channel) -> Result<Pmf> {
    if p.labels() != kernel.input_labels() {
        return Err(Error::AlphabetMismatch(
            "push-forward kernel input alphabet must match the distribution".into(),
        ));
    }
    let mut out = vec![0.0; kernel.output_len()];
    for x in 0..p.len() {
        let px = p.prob(x);
        if px == 0.0 {
            continue;
        }
        for (u, slot) in out.iter_mut().enumerate() {
            *slot += px * kernel.prob(x, u);
        }
    }
    Pmf::new(kernel.output_labels().to_vec(), out)
}

/// Channel paired with a prior on its input alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct Joint {
    channel: Channel,
    prior: Pmf,
}

impl Joint {
    pub fn new(channel: Channel, prior: Pmf) -> Result<Self> {
        if channel.input_labels() != prior.labels() {
            return Err(Error::AlphabetMismatch(
                "prior alphabet must match the channel input alphabet".into(),
            ));
        }
        Ok(Self { channel, prior })
    }

    pub fn channel(&self) -> &Channel {
        &self.channel
    }

    pub fn prior(&self) -> &Pmf {
        &self.prior
    }

    /// Probability of output index `y` under the prior.
    pub fn output_prob(&self, y: usize) -> f64 {
        assert!(y < self.channel.output_len(), "output index out of range");
        let mut total = 0.0;
        for x in 0..self.prior.len() {
            total += self.prior.prob(x) * self.channel.prob(x, y);
        }
        total
    }

    /// Distribution of the output under the prior.
    pub fn output_marginal(&self) -> Pmf {
        let probs: Vec<f64> = (0..self.channel.output_len())
            .map(|y| self.output_prob(y))
            .collect();
        Pmf::new(self.channel.output_labels().to_vec(), probs)
            .expect("marginal of a valid joint is a valid pmf")
    }

    /// Posterior over inputs given output index `y`.
    ///
    /// Outputs with probability exactly zero follow the convention that the
    /// posterior equals the prior, which gives them zero leakage downstream.
    pub fn posterior(&self, y: usize) -> Pmf {
        let py = self.output_prob(y);
        if py == 0.0 {
            return self.prior.clone();
        }
        let probs: Vec<f64> = (0..self.prior.len())
            .map(|x| self.prior.prob(x) * self.channel.prob(x, y) / py)
            .collect();
        Pmf::new(self.prior.labels().to_vec(), probs)
            .expect("posterior of a valid joint is a valid pmf")
    }
}

/// Binary Kullback-Leibler divergence `q log(q/r) + (1-q) log((1-q)/(1-r))`
/// in nats, with the `0 log 0 = 0` convention.
pub fn kl_bernoulli(q: f64, r: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::InvalidParameter(format!(
            "kl_bernoulli first argument {q} outside [0, 1]"
        )));
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "kl_bernoulli second argument {r} outside (0, 1)"
        )));
    }
    let term = |a: f64, b: f64| if a == 0.0 { 0.0 } else { a * (a / b).ln() };
    Ok(term(q, r) + term(1.0 - q, 1.0 - r))
}

/// `log(exp(a) + exp(b))` without leaving the log domain.
pub(crate) fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let hi = a.max(b);
    hi + (-(a - b).abs()).exp().ln_1p()
}

/// Log of the binomial point mass `C(n, k) p^k (1-p)^(n-k)`.
///
/// Stays in the log domain throughout, so `n` up to 10^4 is fine.
pub fn binomial_log_pmf(n: u64, k: u64, p: f64) -> Result<f64> {
    if k > n {
        return Err(Error::InvalidParameter(format!(
            "binomial count {k} exceeds trials {n}"
        )));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "binomial success probability {p} outside (0, 1)"
        )));
    }
    let (n_f, k_f) = (n as f64, k as f64);
    let log_choose = ln_gamma(n_f + 1.0) - ln_gamma(k_f + 1.0) - ln_gamma(n_f - k_f + 1.0);
    Ok(log_choose + k_f * p.ln() + (n_f - k_f) * (1.0 - p).ln())
}

/// Log of `P(Binomial(n, p) <= m)`, streamed as a running log-sum-exp.
///
/// `m < 0` yields negative infinity and `m >= n` yields exactly zero; the
/// accumulated value is clamped at zero so rounding never produces a
/// positive log-probability.
pub fn binomial_cdf_log(n: u64, m: i64, p: f64) -> Result<f64> {
    if m < 0 {
        return Ok(f64::NEG_INFINITY);
    }
    if m as u64 >= n {
        return Ok(0.0);
    }
    let mut acc = f64::NEG_INFINITY;
    for k in 0..=(m as u64) {
        acc = log_add_exp(acc, binomial_log_pmf(n, k, p)?);
    }
    Ok(acc.min(0.0))
}

/// `P(Binomial(n, p) <= m)` in the linear domain.
pub fn binomial_cdf(n: u64, m: u64, p: f64) -> Result<f64> {
    if m > n {
        return Err(Error::InvalidParameter(format!(
            "binomial threshold {m} exceeds trials {n}"
        )));
    }
    if p == 0.0 {
        return Ok(1.0);
    }
    if p == 1.0 {
        return Ok(if m >= n { 1.0 } else { 0.0 });
    }
    Ok(binomial_cdf_log(n, m as i64, p)?.exp())
}

/// Chernoff bound `exp(-n D(m/n || p))` on the lower binomial tail
/// `P(Binomial(n, p) <= m)`. Only valid on the lower-deviation side
/// `m/n <= p`; other inputs are rejected.
pub fn chernoff_tail_bound(n: u64, m: u64, p: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("chernoff bound needs n >= 1".into()));
    }
    if m > n {
        return Err(Error::InvalidParameter(format!(
            "binomial threshold {m} exceeds trials {n}"
        )));
    }
    let q = m as f64 / n as f64;
    if q > p {
        return Err(Error::InvalidParameter(format!(
            "chernoff bound requires m/n <= p (got m/n = {q}, p = {p})"
        )));
    }
    Ok((-(n as f64) * kl_bernoulli(q, p)?).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn pmf_normalizes_within_tolerance() {
        let p = Pmf::new(labels(&["a", "b"]), vec![0.7, 0.3 + 5e-10]).unwrap();
        let sum: f64 = p.probs().iter().sum();
        assert!((sum - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pmf_rejects_bad_sum() {
        let err = Pmf::new(labels(&["a", "b"]), vec![0.7, 0.28]).unwrap_err();
        assert!(err.to_string().contains("pmf sum out of tolerance"));
    }

    #[test]
    fn pmf_rejects_negative_and_duplicate() {
        assert!(matches!(
            Pmf::new(labels(&["a", "b"]), vec![1.1, -0.1]),
            Err(Error::NegativeProbability { .. })
        ));
        assert!(matches!(
            Pmf::new(labels(&["a", "a"]), vec![0.5, 0.5]),
            Err(Error::DuplicateLabel { .. })
        ));
    }

    #[test]
    fn min_entropy_known_values() {
        let p = Pmf::new(labels(&["0", "1"]), vec![0.7, 0.3]).unwrap();
        assert!((p.min_entropy() - 0.35667494393873245).abs() < 1e-15);
        let u = Pmf::uniform(labels(&["a", "b", "c", "d"])).unwrap();
        assert!((u.min_entropy() - 4.0f64.ln()).abs() < 1e-15);
        let point = Pmf::new(labels(&["a", "b"]), vec![1.0, 0.0]).unwrap();
        assert_eq!(point.min_entropy(), 0.0);
    }

    #[test]
    fn renyi_known_values() {
        let p = Pmf::new(labels(&["0", "1"]), vec![0.75, 0.25]).unwrap();
        let q = Pmf::new(labels(&["0", "1"]), vec![0.5, 0.5]).unwrap();
        let d = renyi_div_inf(&p, &q).unwrap();
        assert!((d - 1.5f64.ln()).abs() < 1e-15);
        assert_eq!(renyi_div_inf(&p, &p).unwrap(), 0.0);

        let spread = Pmf::new(labels(&["0", "1"]), vec![0.5, 0.5]).unwrap();
        let degenerate = Pmf::new(labels(&["0", "1"]), vec![1.0, 0.0]).unwrap();
        assert_eq!(renyi_div_inf(&spread, &degenerate).unwrap(), f64::INFINITY);
        // Mass only where the reference has mass stays finite.
        assert!((renyi_div_inf(&degenerate, &q).unwrap() - 2.0f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn marginal_and_posterior_flip_channel() {
        let c = Channel::new(
            labels(&["0", "1"]),
            labels(&["0", "1"]),
            vec![vec![0.75, 0.25], vec![0.25, 0.75]],
        )
        .unwrap();
        let prior = Pmf::new(labels(&["0", "1"]), vec![0.7, 0.3]).unwrap();
        let j = Joint::new(c.clone(), prior).unwrap();
        let marginal = j.output_marginal();
        assert!((marginal.prob(0) - 0.6).abs() < 1e-15);
        assert!((marginal.prob(1) - 0.4).abs() < 1e-15);

        let uniform = Pmf::uniform(labels(&["0", "1"])).unwrap();
        let ju = Joint::new(c, uniform).unwrap();
        let post = ju.posterior(0);
        assert!((post.prob(0) - 0.75).abs() < 1e-15);
        assert!((post.prob(1) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn posterior_of_impossible_outcome_is_prior() {
        let c = Channel::new(
            labels(&["0", "1"]),
            labels(&["0", "1", "2"]),
            vec![vec![0.75, 0.25, 0.0], vec![0.25, 0.75, 0.0]],
        )
        .unwrap();
        let prior = Pmf::new(labels(&["0", "1"]), vec![0.7, 0.3]).unwrap();
        let j = Joint::new(c, prior.clone()).unwrap();
        assert_eq!(j.posterior(2), prior);
    }

    #[test]
    fn push_forward_low_entropy_kernel() {
        // Kernel that keeps one symbol fixed and leaks the rest onto it with
        // probability 1/2.
        let u = Pmf::new(labels(&["1", "2", "3"]), vec![0.2, 0.5, 0.3]).unwrap();
        let kernel = Channel::new(
            labels(&["1", "2", "3"]),
            labels(&["1", "2", "3"]),
            vec![
                vec![1.0, 0.0, 0.0],
                vec![0.5, 0.5, 0.0],
                vec![0.5, 0.0, 0.5],
            ],
        )
        .unwrap();
        let w = push_forward(&u, &kernel).unwrap();
        assert!((w.prob(0) - 0.6).abs() < 1e-15);
        assert!((w.prob(1) - 0.25).abs() < 1e-15);
        assert!((w.prob(2) - 0.15).abs() < 1e-15);
    }

    #[test]
    fn kl_bernoulli_known_value() {
        let v = kl_bernoulli(0.1, 0.3).unwrap();
        assert!((v - 0.1163217565860046).abs() < 1e-12);
        assert_eq!(kl_bernoulli(0.3, 0.3).unwrap(), 0.0);
        assert_eq!(kl_bernoulli(0.0, 0.5).unwrap(), std::f64::consts::LN_2);
    }

    #[test]
    fn binomial_cdf_small_case_matches_direct_sum() {
        // n = 6, p = 0.4, m = 2: sum the first three point masses directly.
        let direct: f64 = (0..=2)
            .map(|k| {
                let choose = [1.0, 6.0, 15.0][k as usize];
                choose * 0.4f64.powi(k) * 0.6f64.powi(6 - k)
            })
            .sum();
        let cdf = binomial_cdf(6, 2, 0.4).unwrap();
        assert!((cdf - direct).abs() < 1e-14);
    }

    #[test]
    fn binomial_cdf_log_deep_tail() {
        let log_cdf = binomial_cdf_log(1000, 100, 0.3).unwrap();
        assert!((log_cdf - -119.19306589419425).abs() < 1e-9);
        // The tail stays below its Chernoff bound.
        assert!(log_cdf <= -1000.0 * kl_bernoulli(0.1, 0.3).unwrap());
        assert_eq!(binomial_cdf_log(10, -1, 0.3).unwrap(), f64::NEG_INFINITY);
        assert_eq!(binomial_cdf_log(10, 10, 0.3).unwrap(), 0.0);
    }

    #[test]
    fn chernoff_bound_known_value_and_direction() {
        let b = chernoff_tail_bound(200, 20, 0.3).unwrap();
        assert!((b.ln() - -200.0 * 0.1163217565860046).abs() < 1e-9);
        assert!(chernoff_tail_bound(200, 80, 0.3).is_err());
    }

    #[test]
    fn deterministic_channel_rows_are_one_hot() {
        let c = Channel::deterministic(labels(&["a", "b", "c"]), labels(&["0", "1"]), &[0, 1, 1])
            .unwrap();
        assert_eq!(c.row(0), &[1.0, 0.0]);
        assert_eq!(c.row(2), &[0.0, 1.0]);
    }
}
