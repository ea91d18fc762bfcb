//! Cross-module invariants checked on randomized instances: ordering between
//! the leakage quantities, data-processing dominance, floor tightness, and
//! agreement between closed forms and brute-force evaluation.

use proptest::prelude::*;

use pml_core::database::{
    conditional_entry_pml, database_pml, dp_epsilon, entry_pml, free_lunch_epsilon,
    verify_equivalences, DatabaseMechanism, DatabasePrior, DatabaseSchema,
};
use pml_core::disclosure::{
    capacity_entropy_floor, construct_low_entropy_disclosed_attribute,
    construct_min_cost_disclosure, detect_disclosure, detect_singling_out,
    posterior_entropy_floor,
};
use pml_core::leakage::{
    attribute_joint, check_eps_pml, epsilon_max, leakage_capacity, pml, pml_profile,
    pml_randomized_function_lower, PriorSet,
};
use pml_core::mechanisms::{
    laplace_counting_leakage_bound, laplace_counting_leakage_exact,
    laplace_counting_leakage_simplified, laplace_counting_oracle_max, threshold_query_leakage,
    ThresholdQuerySpec,
};
use pml_core::prob::{binomial_cdf, chernoff_tail_bound, push_forward, renyi_div_inf};
use pml_core::sampling::{
    enumerate_maps, index_labels, random_channel, random_infinite_capacity_channel, random_pmf,
    rng_from_seed,
};
use pml_core::{Channel, Joint, Pmf};

fn normalized(mut w: Vec<f64>) -> Vec<f64> {
    let sum: f64 = w.iter().sum();
    for v in &mut w {
        *v /= sum;
    }
    w
}

fn pmf_from(weights: Vec<f64>) -> Pmf {
    let k = weights.len();
    Pmf::new(index_labels(k), normalized(weights)).unwrap()
}

fn channel_from(inputs: usize, outputs: usize, weights: Vec<f64>) -> Channel {
    let rows = weights
        .chunks(outputs)
        .map(|chunk| normalized(chunk.to_vec()))
        .collect();
    Channel::new(index_labels(inputs), index_labels(outputs), rows).unwrap()
}

proptest! {
    #[test]
    fn min_entropy_stays_within_bounds(w in proptest::collection::vec(0.05f64..1.0, 2..6)) {
        let k = w.len();
        let p = pmf_from(w);
        let h = p.min_entropy();
        prop_assert!(h >= 0.0);
        prop_assert!(h <= (k as f64).ln() + 1e-12);
    }

    #[test]
    fn renyi_divergence_nonnegative(
        w in proptest::collection::vec(0.05f64..1.0, 3),
        v in proptest::collection::vec(0.05f64..1.0, 3),
    ) {
        let p = pmf_from(w);
        let q = pmf_from(v);
        prop_assert!(renyi_div_inf(&p, &q).unwrap() >= 0.0);
        prop_assert!(renyi_div_inf(&p, &p).unwrap().abs() < 1e-12);
    }

    #[test]
    fn bayes_operations_conserve_mass(
        w in proptest::collection::vec(0.05f64..1.0, 3),
        rows in proptest::collection::vec(0.05f64..1.0, 12),
    ) {
        let prior = pmf_from(w);
        let channel = channel_from(3, 4, rows);
        let j = Joint::new(channel, prior.clone()).unwrap();
        let marginal = j.output_marginal();
        let total: f64 = marginal.probs().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        for x in 0..3 {
            let mut reconstructed = 0.0;
            for y in 0..4 {
                reconstructed += j.output_prob(y) * j.posterior(y).prob(x);
            }
            prop_assert!((reconstructed - prior.prob(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn binomial_cdf_below_chernoff(n in 1u64..200, frac in 0.0f64..1.0, p in 0.05f64..0.95) {
        let m = (frac * n as f64 * p).floor() as u64;
        prop_assume!(m as f64 / n as f64 <= p);
        let cdf = binomial_cdf(n, m, p).unwrap();
        let bound = chernoff_tail_bound(n, m, p).unwrap();
        prop_assert!(cdf <= bound + 1e-12);
    }

    #[test]
    fn threshold_exact_below_its_bound(
        n in 1u64..400,
        frac in 0.0f64..=1.0,
        p in 0.05f64..0.95,
        answer in 0u8..2,
    ) {
        let m = (frac * n as f64).floor() as u64;
        let spec = ThresholdQuerySpec::new(n, m.min(n), p, answer).unwrap();
        let leak = threshold_query_leakage(&spec).unwrap();
        prop_assert!(leak.exact >= 0.0);
        prop_assert!(leak.exact.is_finite());
        if let Some(bound) = leak.chernoff_bound {
            prop_assert!(leak.exact <= bound + 1e-12);
        }
    }

    #[test]
    fn laplace_exact_below_family_bound(
        n in 1u64..2000,
        b in 0.001f64..1.0,
        c in 0.0f64..0.45,
        t in 0.01f64..0.99,
    ) {
        let p = c + t * (1.0 - 2.0 * c);
        let exact = laplace_counting_leakage_exact(n, b, p).unwrap();
        let bound = laplace_counting_leakage_bound(n, b, c).unwrap();
        let cap = 1.0 / (n as f64 * b);
        prop_assert!(exact <= bound + 1e-12);
        prop_assert!(bound <= cap + 1e-12);
        let mirrored = laplace_counting_leakage_exact(n, b, 1.0 - p).unwrap();
        prop_assert!((exact - mirrored).abs() < 1e-12);
        if n as f64 * b >= 1.0 {
            let simplified = laplace_counting_leakage_simplified(n, b, c).unwrap();
            prop_assert!(simplified >= bound - 1e-12);
        }
    }

    #[test]
    fn entropy_floor_is_never_above_prior_entropy(h in 0.0f64..3.0, leak in 0.0f64..3.0) {
        let floor = posterior_entropy_floor(h, leak).unwrap();
        prop_assert!(floor >= 0.0);
        prop_assert!(floor <= h);
        prop_assert!((floor - (h - leak).max(0.0)).abs() < 1e-15);
    }
}

#[test]
fn pml_dominates_every_deterministic_attribute() {
    let mut rng = rng_from_seed(101);
    for _ in 0..30 {
        let inputs = 3;
        let outputs = 4;
        let channel =
            random_channel(&mut rng, index_labels(inputs), index_labels(outputs), 0.1, 1.0)
                .unwrap();
        let prior = random_pmf(&mut rng, index_labels(inputs), 0.1, 1.0).unwrap();
        let j = Joint::new(channel, prior).unwrap();
        for u_size in 2..=4usize {
            for map in enumerate_maps(inputs, u_size) {
                let kernel =
                    Channel::deterministic(index_labels(inputs), index_labels(u_size), &map)
                        .unwrap();
                let induced = attribute_joint(&j, &kernel).unwrap();
                for y in 0..outputs {
                    assert!(pml(&induced, y) <= pml(&j, y) + 1e-12);
                    let lower = pml_randomized_function_lower(&j, y, &kernel).unwrap();
                    assert!(lower <= pml(&j, y) + 1e-12);
                }
            }
        }
    }
}

#[test]
fn capacity_and_prior_bounds_dominate_profile() {
    let mut rng = rng_from_seed(103);
    for round in 0..40 {
        let inputs = 2 + round % 3;
        let outputs = 2 + (round / 3) % 4;
        let channel =
            random_channel(&mut rng, index_labels(inputs), index_labels(outputs), 0.05, 1.0)
                .unwrap();
        let prior = random_pmf(&mut rng, index_labels(inputs), 0.05, 1.0).unwrap();
        let j = Joint::new(channel.clone(), prior.clone()).unwrap();
        let profile = pml_profile(&j);
        let capacity = leakage_capacity(&channel);
        let universal = -prior.min_prob().0.ln();
        assert!(profile.sup <= capacity + 1e-12);
        assert!(profile.sup <= universal + 1e-12);
        for &v in &profile.values {
            assert!(v >= 0.0);
        }
    }
}

#[test]
fn leakage_vanishes_exactly_on_independent_channels() {
    let mut rng = rng_from_seed(107);
    for _ in 0..20 {
        let outputs = 4;
        let base = random_pmf(&mut rng, index_labels(outputs), 0.2, 1.0).unwrap();
        let row: Vec<f64> = base.probs().to_vec();
        let rows = vec![row.clone(); 3];
        let constant = Channel::new(index_labels(3), index_labels(outputs), rows).unwrap();
        let prior = random_pmf(&mut rng, index_labels(3), 0.2, 1.0).unwrap();
        let j = Joint::new(constant, prior.clone()).unwrap();
        assert!(pml_profile(&j).sup < 1e-12);

        // Moving a little mass inside one row breaks independence; the
        // perturbation stays below the smallest entry so rows remain valid.
        let mut perturbed = vec![row.clone(); 3];
        perturbed[0][0] += 0.03;
        perturbed[0][1] -= 0.03;
        let dependent = Channel::new(index_labels(3), index_labels(outputs), perturbed).unwrap();
        let j = Joint::new(dependent, prior).unwrap();
        assert!(pml_profile(&j).sup > 1e-3);
    }
}

#[test]
fn certification_agrees_with_direct_evaluation() {
    let mut rng = rng_from_seed(109);
    for _ in 0..10 {
        let channel =
            random_channel(&mut rng, index_labels(3), index_labels(3), 0.1, 1.0).unwrap();
        let members: Vec<Pmf> = (0..5)
            .map(|_| random_pmf(&mut rng, index_labels(3), 0.1, 1.0).unwrap())
            .collect();
        let mut worst = 0.0f64;
        for m in &members {
            let j = Joint::new(channel.clone(), m.clone()).unwrap();
            worst = worst.max(pml_profile(&j).sup);
        }
        let set = PriorSet::Explicit(members);
        let pass = check_eps_pml(&channel, &set, worst + 1e-9).unwrap();
        assert!(pass.holds);
        assert!((pass.worst_value - worst).abs() < 1e-12);
        let fail = check_eps_pml(&channel, &set, worst - 1e-6).unwrap();
        assert!(!fail.holds);

        let grid = PriorSet::SimplexGrid { resolution: 6 };
        let cert = check_eps_pml(&channel, &grid, 1e9).unwrap();
        assert!(cert.worst_value <= leakage_capacity(&channel) + 1e-12);
    }
}

#[test]
fn privacy_parameters_are_ordered() {
    let mut rng = rng_from_seed(113);
    for round in 0..25 {
        let n = 1 + round % 3;
        let schema = DatabaseSchema::new(index_labels(2), n).unwrap();
        let mechanism = pml_core::sampling::random_database_mechanism(
            &mut rng,
            schema.clone(),
            3,
            0.2,
            1.0,
        )
        .unwrap();
        let dp = dp_epsilon(&mechanism);
        let flp = free_lunch_epsilon(&mechanism);
        assert!(dp <= flp + 1e-12);
        if n == 1 {
            assert!((dp - leakage_capacity(mechanism.channel())).abs() < 1e-12);
        }
    }
}

#[test]
fn database_leakages_are_ordered_and_strictly_below_targets() {
    let mut rng = rng_from_seed(127);
    for round in 0..15 {
        let n = 2 + round % 2;
        let schema = DatabaseSchema::new(index_labels(2), n).unwrap();
        let mechanism = pml_core::sampling::random_database_mechanism(
            &mut rng,
            schema.clone(),
            3,
            0.2,
            1.0,
        )
        .unwrap();
        let dp = dp_epsilon(&mechanism);
        let flp = free_lunch_epsilon(&mechanism);
        let entries: Vec<Pmf> = (0..n)
            .map(|_| random_pmf(&mut rng, index_labels(2), 0.2, 1.0).unwrap())
            .collect();
        let product = DatabasePrior::product(&schema, entries).unwrap();
        let explicit_pmf = random_pmf(&mut rng, schema.database_labels().to_vec(), 0.2, 1.0)
            .unwrap();
        let explicit = DatabasePrior::explicit(&schema, explicit_pmf).unwrap();

        for y in 0..mechanism.output_len() {
            let db_product = database_pml(&mechanism, &product, y).unwrap();
            let db_explicit = database_pml(&mechanism, &explicit, y).unwrap();
            assert!(db_product <= flp + 1e-12);
            if !mechanism.rows_identical() {
                assert!(db_explicit < flp);
            }
            for i in 0..n {
                let per_entry = entry_pml(&mechanism, &product, i, y).unwrap();
                assert!(per_entry <= db_product + 1e-12);
                let mut conditional_max = 0.0f64;
                for rest in 0..schema.rest_count() {
                    let digits = schema.rest_digits(rest);
                    let c = conditional_entry_pml(&mechanism, &product, i, &digits, y).unwrap();
                    assert!(c <= dp + 1e-12);
                    conditional_max = conditional_max.max(c);
                }
                assert!(per_entry <= conditional_max + 1e-12);
            }
        }
    }
}

#[test]
fn equivalence_traces_verify_on_random_instances() {
    let mut rng = rng_from_seed(131);
    for round in 0..6 {
        let n = 2 + round % 2;
        let schema = DatabaseSchema::new(index_labels(2), n).unwrap();
        let mechanism =
            pml_core::sampling::random_database_mechanism(&mut rng, schema, 3, 0.2, 1.0).unwrap();
        let report = verify_equivalences(&mechanism, 1e-4).unwrap();
        assert!(report.all_passed);
        assert!(!report.unbounded);
        for f in &report.formulations {
            assert!(f.monotone);
            assert!(f.strictly_below);
        }
    }
}

#[test]
fn exact_disclosure_transfers_across_full_support_priors() {
    let mut rng = rng_from_seed(137);
    let base = Pmf::new(index_labels(3), vec![0.5, 0.3, 0.2]).unwrap();
    let (mechanism, u_kernel) = construct_min_cost_disclosure(&base, 0.1).unwrap();
    for _ in 0..20 {
        let prior = random_pmf(&mut rng, index_labels(3), 0.05, 1.0).unwrap();
        let report = detect_disclosure(&mechanism, &prior, &u_kernel, 0.0).unwrap();
        assert!(report.attained_zero);
        assert!(report.disclosed);
    }
}

#[test]
fn near_disclosure_vanishes_uniformly_over_priors() {
    let alpha = 0.3;
    let priors: Vec<Pmf> = (1..9)
        .map(|i| {
            let p0 = i as f64 / 10.0;
            Pmf::new(index_labels(2), vec![p0, 1.0 - p0]).unwrap()
        })
        .collect();
    for exponent in 1..=6 {
        let delta = 10f64.powi(-exponent);
        let rows = vec![vec![alpha, 1.0 - alpha], vec![delta * alpha, 1.0 - delta * alpha]];
        let channel = Channel::new(index_labels(2), index_labels(2), rows).unwrap();
        for prior in &priors {
            let report = detect_singling_out(&channel, prior, 0.0).unwrap();
            // Entropy at the vanishing outcome is log(1 + delta p1/p0).
            let ratio = prior.prob(1) / prior.prob(0);
            assert!(report.witness.min_entropy <= (ratio * delta).ln_1p() + 1e-12);
            assert!(!report.attained_zero);
        }
        if exponent == 6 {
            for prior in &priors {
                let report = detect_singling_out(&channel, prior, 0.0).unwrap();
                assert!(report.witness.min_entropy < 1e-4);
            }
        }
    }
}

#[test]
fn capacity_floor_holds_for_every_nonconstant_attribute() {
    let mut rng = rng_from_seed(139);
    for _ in 0..15 {
        let inputs = 3;
        let channel =
            random_channel(&mut rng, index_labels(inputs), index_labels(3), 0.2, 1.0).unwrap();
        let prior = random_pmf(&mut rng, index_labels(inputs), 0.2, 1.0).unwrap();
        let capacity = leakage_capacity(&channel);
        let j = Joint::new(channel.clone(), prior.clone()).unwrap();
        for u_size in 2..=3usize {
            for map in enumerate_maps(inputs, u_size) {
                let mut seen = vec![false; u_size];
                for &u in &map {
                    seen[u] = true;
                }
                if !seen.iter().all(|&s| s) {
                    continue;
                }
                let kernel =
                    Channel::deterministic(index_labels(inputs), index_labels(u_size), &map)
                        .unwrap();
                let attribute_prior = push_forward(&prior, &kernel).unwrap();
                let floor = capacity_entropy_floor(&attribute_prior, capacity).unwrap();
                for y in 0..3 {
                    if j.output_prob(y) <= 0.0 {
                        continue;
                    }
                    let posterior_u = push_forward(&j.posterior(y), &kernel).unwrap();
                    assert!(posterior_u.min_entropy() >= floor - 1e-12);
                }
            }
        }
    }
}

#[test]
fn posterior_floor_holds_outcome_by_outcome() {
    let mut rng = rng_from_seed(149);
    for _ in 0..15 {
        let channel =
            random_channel(&mut rng, index_labels(4), index_labels(3), 0.1, 1.0).unwrap();
        let prior = random_pmf(&mut rng, index_labels(4), 0.1, 1.0).unwrap();
        let j = Joint::new(channel, prior.clone()).unwrap();
        for y in 0..3 {
            let leak = pml(&j, y);
            let floor = posterior_entropy_floor(prior.min_entropy(), leak).unwrap();
            assert!(j.posterior(y).min_entropy() >= floor - 1e-12);
        }
    }
}

#[test]
fn boosting_the_disclosed_value_lowers_posterior_entropy() {
    let mut rng = rng_from_seed(151);
    for round in 0..20 {
        let k = 3 + round % 3;
        let p_u = random_pmf(&mut rng, index_labels(k), 0.1, 1.0).unwrap();
        let disclosed = round % k;
        let label = disclosed.to_string();
        let p_star = p_u.prob(disclosed);
        let threshold = (p_u.max_prob().0 - p_star) / (1.0 - p_star);
        let lambda = (1.0 + threshold) / 2.0;
        let kernel = construct_low_entropy_disclosed_attribute(&p_u, &label, lambda).unwrap();

        let marginal_w = push_forward(&p_u, &kernel).unwrap();
        assert!(marginal_w.min_entropy() < p_u.min_entropy() + 1e-12);

        // Any posterior already concentrating on the disclosed value gets
        // strictly more concentrated through the kernel.
        let mut weights = vec![0.0; k];
        let bulk = 0.9 + 0.09 * (round as f64 / 20.0);
        for (u, w) in weights.iter_mut().enumerate() {
            *w = if u == disclosed {
                bulk
            } else {
                (1.0 - bulk) / (k - 1) as f64
            };
        }
        let posterior_u = Pmf::new(index_labels(k), weights).unwrap();
        let posterior_w = push_forward(&posterior_u, &kernel).unwrap();
        assert!(posterior_w.min_entropy() < posterior_u.min_entropy());

        // Below the mixing threshold the construction must refuse.
        if threshold > 0.0 {
            assert!(
                construct_low_entropy_disclosed_attribute(&p_u, &label, threshold / 2.0).is_err()
            );
        }
    }
}

#[test]
fn minimum_cost_construction_attains_the_infinite_capacity_floor() {
    let mut rng = rng_from_seed(157);
    for round in 0..30 {
        let k = 2 + round % 3;
        let prior = random_pmf(&mut rng, index_labels(k), 0.1, 1.0).unwrap();
        let p_min = prior.min_prob().0;
        let target = -(-p_min).ln_1p();
        let alpha = (0.9 * p_min / (1.0 - p_min)).min(0.1);
        let (mechanism, _) = construct_min_cost_disclosure(&prior, alpha).unwrap();
        let j = Joint::new(mechanism.clone(), prior.clone()).unwrap();
        let attained = pml_profile(&j).sup;
        assert!((attained - target).abs() < 1e-12);
        assert_eq!(leakage_capacity(&mechanism), f64::INFINITY);

        // Every infinite-capacity mechanism leaks at least that much under
        // the same prior.
        let other = random_infinite_capacity_channel(
            &mut rng,
            index_labels(k),
            index_labels(2 + round % 2),
        )
        .unwrap();
        let j = Joint::new(other, prior).unwrap();
        assert!(pml_profile(&j).sup >= target - 1e-9);
    }
}

#[test]
fn epsilon_max_matches_worst_outcome_shift() {
    let mut rng = rng_from_seed(163);
    for _ in 0..20 {
        let marginal = random_pmf(&mut rng, index_labels(4), 0.05, 1.0).unwrap();
        let eps = epsilon_max(&marginal).unwrap();
        assert!((eps - (-marginal.min_prob().0.ln())).abs() < 1e-12);
    }
}

#[test]
fn threshold_query_matches_database_brute_force() {
    for &n in &[1usize, 2, 5, 8] {
        let schema = DatabaseSchema::new(index_labels(2), n).unwrap();
        for &p in &[0.3f64, 0.62] {
            for m in [0, n / 2, n.saturating_sub(1), n] {
                let rows: Vec<Vec<f64>> = (0..schema.database_count())
                    .map(|db| {
                        let ones = schema.entries_of(db).iter().filter(|&&d| d == 1).count();
                        if ones > m {
                            vec![0.0, 1.0]
                        } else {
                            vec![1.0, 0.0]
                        }
                    })
                    .collect();
                let mechanism =
                    DatabaseMechanism::from_rows(schema.clone(), index_labels(2), rows).unwrap();
                let entry = Pmf::new(index_labels(2), vec![1.0 - p, p]).unwrap();
                let prior = DatabasePrior::product(&schema, vec![entry; n]).unwrap();
                for answer in 0..=1u8 {
                    let spec = ThresholdQuerySpec::new(n as u64, m as u64, p, answer).unwrap();
                    let closed = threshold_query_leakage(&spec).unwrap();
                    let brute = database_pml(&mechanism, &prior, answer as usize).unwrap();
                    assert!(
                        (closed.exact - brute).abs() < 1e-9,
                        "n={n} m={m} p={p} answer={answer}: closed {} vs brute {brute}",
                        closed.exact
                    );
                    for i in 0..n {
                        let per_entry = entry_pml(&mechanism, &prior, i, answer as usize).unwrap();
                        assert!(per_entry <= brute + 1e-12);
                    }
                }
            }
        }
    }
}

#[test]
fn laplace_oracle_agrees_with_closed_branches() {
    for &(n, b, p) in &[(50u64, 0.2f64, 0.3f64), (100, 0.05, 0.45)] {
        let oracle = laplace_counting_oracle_max(n, b, p).unwrap();
        let exact = laplace_counting_leakage_exact(n, b, p).unwrap();
        assert!((oracle - exact).abs() < 1e-9, "n={n} b={b} p={p}");
    }
}
