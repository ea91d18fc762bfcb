//! Disclosure detection and the adversarial attribute constructions.
//!
//! An attribute `U` is disclosed by an outcome when the adversary's
//! posterior over `U` collapses; over finite outputs the infimum of the
//! posterior min-entropy is a minimum, so detection takes a threshold and
//! additionally reports exact attainment (posterior mass exactly one).

use crate::error::{Error, Result};
use crate::prob::{push_forward, Channel, Joint, Pmf};

/// Evidence for (or against) disclosure: the outcome minimizing the
/// posterior min-entropy over the attribute, with the posterior mode.
#[derive(Debug, Clone)]
pub struct DisclosureWitness {
    pub outcome: String,
    pub attribute_value: String,
    pub posterior_mass: f64,
    pub min_entropy: f64,
}

/// Disclosure verdict at a threshold. `attained_zero` marks an exact
/// posterior collapse, which counts as disclosure at every threshold.
#[derive(Debug, Clone)]
pub struct Disclosure {
    pub disclosed: bool,
    pub attained_zero: bool,
    pub witness: DisclosureWitness,
}

/// Scan all outcomes that can occur and report the one minimizing the
/// adversary's posterior min-entropy about the attribute induced by
/// `u_kernel`; disclosed when that entropy falls strictly below `threshold`
/// or hits zero exactly.
///
/// Outcomes with zero marginal probability are skipped: they cannot be
/// observed, and the no-conditioning convention would otherwise let a
/// low-entropy prior masquerade as a disclosure.
pub fn detect_disclosure(
    c: &Channel,
    adversary_prior: &Pmf,
    u_kernel: &Channel,
    threshold: f64,
) -> Result<Disclosure> {
    if threshold.is_nan() || threshold < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "disclosure threshold {threshold} must be nonnegative"
        )));
    }
    let j = Joint::new(c.clone(), adversary_prior.clone())?;
    let mut best: Option<DisclosureWitness> = None;
    for y in 0..c.output_len() {
        if j.output_prob(y) <= 0.0 {
            continue;
        }
        let posterior_u = push_forward(&j.posterior(y), u_kernel)?;
        let (mass, value) = posterior_u.max_prob();
        let entropy = posterior_u.min_entropy();
        let replace = match &best {
            None => true,
            Some(w) => {
                entropy < w.min_entropy
                    || (entropy == w.min_entropy && c.output_labels()[y] < w.outcome)
            }
        };
        if replace {
            best = Some(DisclosureWitness {
                outcome: c.output_labels()[y].clone(),
                attribute_value: value.to_string(),
                posterior_mass: mass,
                min_entropy: entropy,
            });
        }
    }
    let witness = best.expect("output marginal sums to one, so some outcome occurs");
    let attained_zero = witness.min_entropy == 0.0;
    Ok(Disclosure {
        disclosed: attained_zero || witness.min_entropy < threshold,
        attained_zero,
        witness,
    })
}

/// Disclosure of the secret itself: [`detect_disclosure`] with the identity
/// attribute.
pub fn detect_singling_out(c: &Channel, prior: &Pmf, threshold: f64) -> Result<Disclosure> {
    let identity = Channel::identity(prior.labels().to_vec())?;
    detect_disclosure(c, prior, &identity, threshold)
}

/// Guaranteed lower bound on the posterior min-entropy of any attribute at
/// an outcome with the given leakage: `max(0, prior_entropy - leakage)`.
pub fn posterior_entropy_floor(prior_entropy_u: f64, pml_at_y: f64) -> Result<f64> {
    if prior_entropy_u.is_nan() || prior_entropy_u < 0.0 || pml_at_y.is_nan() || pml_at_y < 0.0 {
        return Err(Error::InvalidParameter(
            "entropy floor arguments must be nonnegative".into(),
        ));
    }
    Ok((prior_entropy_u - pml_at_y).max(0.0))
}

/// Capacity-based floor on the posterior min-entropy of every deterministic
/// non-constant function of the secret:
/// `log(1 + minq/(1-minq) * exp(-capacity))` with `minq` the smallest
/// adversary-prior probability. An infinite capacity degenerates the floor
/// to zero, which is returned rather than treated as an error.
pub fn capacity_entropy_floor(adversary_prior: &Pmf, capacity: f64) -> Result<f64> {
    if !adversary_prior.is_full_support() {
        return Err(Error::DegenerateSupport(
            "capacity floor needs a full-support adversary prior".into(),
        ));
    }
    if adversary_prior.len() < 2 {
        return Err(Error::InvalidParameter(
            "capacity floor needs at least two secret values".into(),
        ));
    }
    if capacity.is_nan() || capacity < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "capacity {capacity} must be nonnegative"
        )));
    }
    if capacity.is_infinite() {
        return Ok(0.0);
    }
    let minq = adversary_prior.min_prob().0;
    Ok((minq / (1.0 - minq) * (-capacity).exp()).ln_1p())
}

/// Kernel `P(W|U)` that leaks a chosen attribute value: the disclosed value
/// maps to itself with certainty, every other value moves to the disclosed
/// one with probability `lambda` and stays put otherwise.
///
/// With `lambda` strictly above `(max_u p(u) - p(u*)) / (1 - p(u*))`, the
/// pushed-forward marginal has strictly lower min-entropy than the input,
/// while any outcome boosting the disclosed value boosts its image at least
/// as much.
pub fn construct_low_entropy_disclosed_attribute(
    p_u: &Pmf,
    disclosed_u: &str,
    lambda: f64,
) -> Result<Channel> {
    let u_index = p_u
        .index_of(disclosed_u)
        .ok_or_else(|| Error::UnknownSymbol {
            symbol: disclosed_u.to_string(),
        })?;
    let p_star = p_u.prob(u_index);
    if p_star >= 1.0 {
        return Err(Error::DegenerateSupport(
            "disclosed value already holds all the mass".into(),
        ));
    }
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "lambda {lambda} outside (0, 1)"
        )));
    }
    let threshold = (p_u.max_prob().0 - p_star) / (1.0 - p_star);
    if lambda <= threshold {
        return Err(Error::InvalidParameter(format!(
            "lambda {lambda} not above the required threshold {threshold:.6}"
        )));
    }
    let k = p_u.len();
    let mut rows = vec![vec![0.0f64; k]; k];
    for (u, row) in rows.iter_mut().enumerate() {
        if u == u_index {
            row[u_index] = 1.0;
        } else {
            row[u_index] = lambda;
            row[u] = 1.0 - lambda;
        }
    }
    Channel::new(p_u.labels().to_vec(), p_u.labels().to_vec(), rows)
}

/// Binary-output mechanism that discloses whether the secret equals its
/// least likely value, at the smallest possible worst-case leakage.
///
/// Output 0 is impossible for the least likely value and has probability
/// `alpha` elsewhere, so observing 0 collapses the attribute
/// `U = 1{X != x_min}` exactly. Returns `(mechanism, u_kernel)`.
///
/// `alpha` must stay strictly below `p_min / (1 - p_min)`; past that point
/// the certain outcome 1 would leak more than the disclosing outcome 0 and
/// the worst-case leakage would exceed `log 1/(1 - p_min)`.
pub fn construct_min_cost_disclosure(prior: &Pmf, alpha: f64) -> Result<(Channel, Channel)> {
    if !prior.is_full_support() {
        return Err(Error::DegenerateSupport(
            "minimal-cost construction needs a full-support prior".into(),
        ));
    }
    if prior.len() < 2 {
        return Err(Error::InvalidParameter(
            "minimal-cost construction needs at least two secret values".into(),
        ));
    }
    let (p_min, x_min_label) = prior.min_prob();
    let upper = p_min / (1.0 - p_min);
    if !(alpha > 0.0 && alpha < upper) {
        return Err(Error::InvalidParameter(format!(
            "alpha {alpha} outside (0, {upper:.6}); the disclosing outcome must stay the leakage maximizer"
        )));
    }
    let x_min = prior.index_of(x_min_label).unwrap();
    let outputs = vec!["0".to_string(), "1".to_string()];
    let k = prior.len();
    let mut mech_rows = Vec::with_capacity(k);
    let mut u_rows = Vec::with_capacity(k);
    for x in 0..k {
        if x == x_min {
            mech_rows.push(vec![0.0, 1.0]);
            u_rows.push(vec![1.0, 0.0]);
        } else {
            mech_rows.push(vec![alpha, 1.0 - alpha]);
            u_rows.push(vec![0.0, 1.0]);
        }
    }
    let mechanism = Channel::new(prior.labels().to_vec(), outputs.clone(), mech_rows)?;
    let u_kernel = Channel::new(prior.labels().to_vec(), outputs, u_rows)?;
    Ok((mechanism, u_kernel))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::leakage::{leakage_capacity, pml, pml_profile};

    fn labels(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn identity_channel_singles_out() {
        let c = Channel::identity(labels(&["0", "1"])).unwrap();
        let prior = Pmf::new(labels(&["0", "1"]), vec![0.7, 0.3]).unwrap();
        let d = detect_singling_out(&c, &prior, 1e-9).unwrap();
        assert!(d.disclosed && d.attained_zero);
        assert_eq!(d.witness.outcome, "0");
        assert_eq!(d.witness.posterior_mass, 1.0);
        assert_eq!(d.witness.min_entropy, 0.0);
    }

    #[test]
    fn constant_channel_keeps_prior_entropy() {
        let c = Channel::new(
            labels(&["0", "1"]),
            labels(&["y"]),
            vec![vec![1.0], vec![1.0]],
        )
        .unwrap();
        let prior = Pmf::new(labels(&["0", "1"]), vec![0.7, 0.3]).unwrap();
        let d = detect_singling_out(&c, &prior, 0.2).unwrap();
        assert!(!d.disclosed);
        assert!((d.witness.min_entropy - 0.35667494393873245).abs() < 1e-15);
    }

    #[test]
    fn flip_channel_not_singled_out_at_low_threshold() {
        let c = Channel::new(
            labels(&["0", "1"]),
            labels(&["0", "1"]),
            vec![vec![0.75, 0.25], vec![0.25, 0.75]],
        )
        .unwrap();
        let prior = Pmf::uniform(labels(&["0", "1"])).unwrap();
        let d = detect_singling_out(&c, &prior, 0.2).unwrap();
        assert!(!d.disclosed);
        assert!((d.witness.posterior_mass - 0.75).abs() < 1e-15);
        assert!((d.witness.min_entropy - 0.2876820724517809).abs() < 1e-12);
    }

    #[test]
    fn impossible_outcomes_do_not_witness() {
        // Concentrated prior: the no-conditioning convention would give the
        // unreachable outcome a near-degenerate "posterior".
        let c = Channel::new(
            labels(&["0", "1"]),
            labels(&["a", "b"]),
            vec![vec![1.0, 0.0], vec![1.0, 0.0]],
        )
        .unwrap();
        let prior = Pmf::new(labels(&["0", "1"]), vec![0.999, 0.001]).unwrap();
        let d = detect_singling_out(&c, &prior, 0.5).unwrap();
        assert_eq!(d.witness.outcome, "a");
        assert!(!d.attained_zero);
    }

    #[test]
    fn entropy_floor_arithmetic() {
        assert!((posterior_entropy_floor(1.0, 0.4).unwrap() - 0.6).abs() < 1e-15);
        assert_eq!(posterior_entropy_floor(0.36, 0.36).unwrap(), 0.0);
        assert_eq!(posterior_entropy_floor(0.2, 0.9).unwrap(), 0.0);
        assert!(posterior_entropy_floor(-0.1, 0.0).is_err());
    }

    #[test]
    fn entropy_floor_tight_on_symmetric_flip() {
        let c = Channel::new(
            labels(&["0", "1"]),
            labels(&["0", "1"]),
            vec![vec![0.75, 0.25], vec![0.25, 0.75]],
        )
        .unwrap();
        let prior = Pmf::uniform(labels(&["0", "1"])).unwrap();
        let j = Joint::new(c, prior).unwrap();
        let floor =
            posterior_entropy_floor(j.prior().min_entropy(), pml(&j, 0)).unwrap();
        let actual = j.posterior(0).min_entropy();
        assert!((floor - 0.28768207245178085).abs() < 1e-12);
        assert!((actual - floor).abs() < 1e-12);
    }

    #[test]
    fn capacity_floor_values() {
        let q = Pmf::new(labels(&["0", "1"]), vec![0.75, 0.25]).unwrap();
        let v = capacity_entropy_floor(&q, 3.0f64.ln()).unwrap();
        assert!((v - (10.0f64 / 9.0).ln()).abs() < 1e-15);
        let at_zero = capacity_entropy_floor(&q, 0.0).unwrap();
        assert!((at_zero - 0.75f64.ln().abs()).abs() < 1e-15);
        assert_eq!(capacity_entropy_floor(&q, f64::INFINITY).unwrap(), 0.0);
        let degenerate = Pmf::new(labels(&["0", "1"]), vec![1.0, 0.0]).unwrap();
        assert!(capacity_entropy_floor(&degenerate, 1.0).is_err());
    }

    #[test]
    fn low_entropy_attribute_push_forward() {
        let p_u = Pmf::new(labels(&["u1", "u2", "u3"]), vec![0.2, 0.5, 0.3]).unwrap();
        let kernel = construct_low_entropy_disclosed_attribute(&p_u, "u1", 0.5).unwrap();
        let p_w = push_forward(&p_u, &kernel).unwrap();
        let expected = [0.6, 0.25, 0.15];
        for (got, want) in p_w.probs().iter().zip(expected) {
            assert!((got - want).abs() < 1e-15);
        }
        assert!(p_w.min_entropy() < p_u.min_entropy());
    }

    #[test]
    fn low_entropy_attribute_threshold_enforced() {
        let p_u = Pmf::new(labels(&["u1", "u2", "u3"]), vec![0.2, 0.5, 0.3]).unwrap();
        let err = construct_low_entropy_disclosed_attribute(&p_u, "u1", 0.3).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("0.375000"), "{msg}");
        // The mode itself needs no threshold.
        assert!(construct_low_entropy_disclosed_attribute(&p_u, "u2", 0.01).is_ok());
    }

    #[test]
    fn min_cost_construction_profile() {
        let prior = Pmf::new(labels(&["0", "1"]), vec![0.7, 0.3]).unwrap();
        let (mechanism, u_kernel) = construct_min_cost_disclosure(&prior, 0.1).unwrap();
        let j = Joint::new(mechanism.clone(), prior.clone()).unwrap();
        let profile = pml_profile(&j);
        assert!((profile.sup - 0.35667494393873245).abs() < 1e-12);
        assert_eq!(profile.witness, "0");
        assert!((profile.value("1").unwrap() - 0.07257069283483537).abs() < 1e-12);
        assert_eq!(leakage_capacity(&mechanism), f64::INFINITY);
        let d = detect_disclosure(&mechanism, &prior, &u_kernel, 1e-9).unwrap();
        assert!(d.disclosed && d.attained_zero);
        assert_eq!(d.witness.outcome, "0");
        assert_eq!(d.witness.attribute_value, "1");
        assert_eq!(d.witness.posterior_mass, 1.0);
    }

    #[test]
    fn min_cost_uniform_prior_value() {
        let prior = Pmf::uniform(labels(&["a", "b", "c", "d"])).unwrap();
        let (mechanism, _) = construct_min_cost_disclosure(&prior, 0.2).unwrap();
        let j = Joint::new(mechanism, prior).unwrap();
        // p_min = 1/4, so the worst outcome leaks log(4/3).
        assert!((pml_profile(&j).sup - (4.0f64 / 3.0).ln()).abs() < 1e-12);
    }

    #[test]
    fn min_cost_alpha_bound_enforced() {
        let prior = Pmf::new(labels(&["0", "1"]), vec![0.9, 0.1]).unwrap();
        let err = construct_min_cost_disclosure(&prior, 0.2).unwrap_err();
        assert!(err.to_string().contains("0.111111"));
        let (mechanism, _) = construct_min_cost_disclosure(&prior, 0.1).unwrap();
        let j = Joint::new(mechanism, prior).unwrap();
        assert!((pml_profile(&j).sup - (1.0f64 / 0.9).ln()).abs() < 1e-12);
    }
}
