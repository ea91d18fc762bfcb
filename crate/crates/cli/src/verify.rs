//! `verify`: named invariant checks with pass/fail reporting and serialized
//! failure witnesses. Each check runs on one instance file or on a stream of
//! seeded random instances; the first violated assertion stops the run.

use std::path::{Path, PathBuf};

use serde_json::json;

use pml_core::database::{
    verify_equivalences_with, DatabaseMechanism, DatabaseSchema, EquivalenceReport,
    FormulationReport,
};
use pml_core::disclosure::{
    capacity_entropy_floor, construct_low_entropy_disclosed_attribute,
    construct_min_cost_disclosure, detect_disclosure, detect_singling_out,
};
use pml_core::leakage::{leakage_capacity, pml_profile, pml_randomized_function_lower};
use pml_core::prob::push_forward;
use pml_core::sampling::{
    enumerate_maps, index_labels, random_channel, random_database_mechanism,
    random_infinite_capacity_channel, random_pmf, rng_from_seed,
};
use pml_core::{Channel, Joint, Pmf};

use crate::config::AnalysisConfig;
use crate::files::{read_json, InstanceFile};
use crate::fmt::json_float;

enum Mode {
    Instance(PathBuf),
    Random { seed: u64, count: u64 },
}

enum Verdict {
    Pass { checks: u64, detail: String },
    Fail { message: String, witness: serde_json::Value },
}

pub fn run(
    id: &str,
    instance: Option<&Path>,
    random: Option<(u64, u64)>,
    tol_override: Option<f64>,
    config: &AnalysisConfig,
) -> Result<i32, String> {
    let mode = match (instance, random) {
        (Some(path), None) => Mode::Instance(path.to_path_buf()),
        (None, Some((seed, count))) => Mode::Random { seed, count },
        (Some(_), Some(_)) => {
            return Err("--instance and --random are mutually exclusive".into())
        }
        (None, None) => return Err("provide --instance FILE or --random SEED COUNT".into()),
    };
    let tol = tol_override.unwrap_or(config.numeric_tolerance);
    let equiv_tol = tol_override.unwrap_or(config.equivalence_tolerance);
    let verdict = match id {
        "eq-A2" => check_entropy_inequality(&mode, tol, false)?,
        "thm-3.5" => check_entropy_inequality(&mode, tol, true)?,
        "prop-3.6" => check_attribute_inheritance(&mode, tol)?,
        "thm-3.8" => check_capacity_floor(&mode, tol)?,
        "prop-3.9" => check_min_cost_optimality(&mode, tol_override.unwrap_or(1e-12))?,
        "thm-4.2" => check_equivalence(&mode, equiv_tol, config, true)?,
        "thm-4.5" => check_equivalence(&mode, equiv_tol, config, false)?,
        "remark-B1" => check_non_attainment(&mode, equiv_tol, config)?,
        "cor-3.11" => check_no_singling_out(&mode, tol)?,
        other => return Err(format!("unknown check id {other:?}")),
    };
    match verdict {
        Verdict::Pass { checks, detail } => {
            println!("pass: {id} ({checks} checks): {detail}");
            Ok(0)
        }
        Verdict::Fail { message, witness } => {
            println!("fail: {id}: {message}");
            println!("{}", serde_json::to_string_pretty(&witness).unwrap());
            Ok(1)
        }
    }
}

struct Scenario {
    label: String,
    channel: Channel,
    prior: Pmf,
    u_kernel: Option<Channel>,
    exhaustive: bool,
}

fn instance_scenario(path: &Path) -> Result<Scenario, String> {
    let inst: InstanceFile = read_json(path)?;
    let channel = inst
        .mechanism
        .ok_or_else(|| String::from("instance file lacks a mechanism"))?
        .to_channel()?;
    let prior = inst
        .prior
        .ok_or_else(|| String::from("instance file lacks a prior"))?
        .to_pmf()?;
    let u_kernel = match inst.u_kernel {
        Some(f) => Some(f.to_channel()?),
        None => None,
    };
    let exhaustive = u_kernel.is_none();
    Ok(Scenario {
        label: "instance".into(),
        channel,
        prior,
        u_kernel,
        exhaustive,
    })
}

/// Random channel, prior, and one stochastic attribute kernel per instance.
/// Alphabet sizes cycle with the instance index so a count covers several
/// shapes; the probability bands keep instances away from degenerate corners.
fn random_scenarios(seed: u64, count: u64, prior_lo: f64, row_lo: f64) -> Vec<Scenario> {
    let mut rng = rng_from_seed(seed);
    (0..count)
        .map(|i| {
            let k = 3 + (i as usize % 2);
            let ny = 2 + (i as usize % 3);
            let nu = 2 + (i as usize % 2);
            let channel =
                random_channel(&mut rng, index_labels(k), index_labels(ny), row_lo, 1.0)
                    .expect("random rows are valid");
            let prior = random_pmf(&mut rng, index_labels(k), prior_lo, 1.0)
                .expect("random masses are valid");
            let u_kernel = random_channel(&mut rng, index_labels(k), index_labels(nu), 0.1, 1.0)
                .expect("random rows are valid");
            Scenario {
                label: format!("seed {seed} instance {i}"),
                channel,
                prior,
                u_kernel: Some(u_kernel),
                exhaustive: true,
            }
        })
        .collect()
}

/// Every deterministic kernel from the secret alphabet onto 2..=k attribute
/// values, including constant and non-surjective maps.
fn deterministic_kernels(labels: &[String]) -> Vec<Channel> {
    let k = labels.len();
    let mut kernels = Vec::new();
    for u in 2..=k {
        let out = index_labels(u);
        for map in enumerate_maps(k, u) {
            kernels.push(
                Channel::deterministic(labels.to_vec(), out.clone(), &map)
                    .expect("enumerated maps stay in range"),
            );
        }
    }
    kernels
}

fn kernels_for(s: &Scenario) -> Result<Vec<Channel>, String> {
    let mut kernels = Vec::new();
    if s.exhaustive {
        if s.channel.input_len() > 6 {
            return Err(
                "exhaustive attribute enumeration needs at most 6 secret values; \
                 provide a u_kernel"
                    .into(),
            );
        }
        kernels.extend(deterministic_kernels(s.channel.input_labels()));
    }
    if let Some(k) = &s.u_kernel {
        kernels.push(k.clone());
    }
    if kernels.is_empty() {
        return Err("instance needs a u_kernel or at least two secret values".into());
    }
    Ok(kernels)
}

/// The per-outcome entropy inequality. With `certified` the floor uses the
/// certified level (the profile supremum) and additionally forbids exact
/// posterior collapse whenever the attribute's prior entropy exceeds that
/// level; without it the floor uses the outcome's own leakage and the
/// guessing-advantage lower bound is checked against the leakage as well.
fn check_entropy_inequality(mode: &Mode, tol: f64, certified: bool) -> Result<Verdict, String> {
    let scenarios = match mode {
        Mode::Instance(path) => vec![instance_scenario(path)?],
        Mode::Random { seed, count } => random_scenarios(*seed, *count, 0.05, 0.05),
    };
    let mut checks = 0u64;
    for s in &scenarios {
        let joint =
            Joint::new(s.channel.clone(), s.prior.clone()).map_err(|e| e.to_string())?;
        let profile = pml_profile(&joint);
        for kernel in kernels_for(s)? {
            let p_u = push_forward(&s.prior, &kernel).map_err(|e| e.to_string())?;
            let h_u = p_u.min_entropy();
            for y in 0..s.channel.output_len() {
                if joint.output_prob(y) <= 0.0 {
                    continue;
                }
                let leak = profile.values[y];
                let posterior_u =
                    push_forward(&joint.posterior(y), &kernel).map_err(|e| e.to_string())?;
                let h_post = posterior_u.min_entropy();
                let witness = |message: &str, extra: serde_json::Value| Verdict::Fail {
                    message: message.into(),
                    witness: json!({
                        "scenario": s.label,
                        "outcome": s.channel.output_labels()[y],
                        "pml": json_float(leak),
                        "prior_attribute_entropy": json_float(h_u),
                        "posterior_attribute_entropy": json_float(h_post),
                        "kernel_rows": (0..kernel.input_len())
                            .map(|x| kernel.row(x).to_vec())
                            .collect::<Vec<_>>(),
                        "extra": extra,
                    }),
                };
                if certified {
                    let eps = profile.sup;
                    checks += 1;
                    if h_post < h_u - eps - tol {
                        return Ok(witness(
                            "posterior entropy fell below the certified floor",
                            json!({ "certified_eps": json_float(eps) }),
                        ));
                    }
                    checks += 1;
                    if h_u > eps + tol && h_post <= 0.0 {
                        return Ok(witness(
                            "exact collapse of an attribute above the certified level",
                            json!({ "certified_eps": json_float(eps) }),
                        ));
                    }
                } else {
                    let lower = pml_randomized_function_lower(&joint, y, &kernel)
                        .map_err(|e| e.to_string())?;
                    checks += 1;
                    if lower > leak + tol {
                        return Ok(witness(
                            "guessing-advantage lower bound exceeded the leakage",
                            json!({ "lower_bound": json_float(lower) }),
                        ));
                    }
                    checks += 1;
                    if h_post < h_u - leak - tol {
                        return Ok(witness(
                            "posterior entropy fell below the per-outcome floor",
                            json!({}),
                        ));
                    }
                }
            }
        }
    }
    let detail = if certified {
        format!(
            "certified entropy floor holds on {} scenario(s)",
            scenarios.len()
        )
    } else {
        format!(
            "entropy floor and guessing lower bound hold on {} scenario(s)",
            scenarios.len()
        )
    };
    Ok(Verdict::Pass { checks, detail })
}

struct AttrCase {
    label: String,
    p_u: Pmf,
    disclosed: String,
    lambda: f64,
    mechanism: Option<Channel>,
}

fn check_attribute_inheritance(mode: &Mode, tol: f64) -> Result<Verdict, String> {
    let cases: Vec<AttrCase> = match mode {
        Mode::Instance(path) => {
            let inst: InstanceFile = read_json(path)?;
            let p_u = inst
                .prior
                .ok_or_else(|| String::from("instance file lacks a prior"))?
                .to_pmf()?;
            let disclosed = inst
                .disclosed
                .ok_or_else(|| String::from("instance file lacks a disclosed value"))?;
            let lambda = inst
                .lambda
                .ok_or_else(|| String::from("instance file lacks a lambda"))?;
            let mechanism = match inst.mechanism {
                Some(f) => Some(f.to_channel()?),
                None => None,
            };
            vec![AttrCase {
                label: "instance".into(),
                p_u,
                disclosed,
                lambda,
                mechanism,
            }]
        }
        Mode::Random { seed, count } => {
            let mut rng = rng_from_seed(*seed);
            (0..*count)
                .map(|i| {
                    let k = 3 + (i as usize % 2);
                    let labels = index_labels(k);
                    let p_u = random_pmf(&mut rng, labels.clone(), 0.2, 1.0)
                        .expect("random masses are valid");
                    let u_star = i as usize % k;
                    let disclosed = labels[u_star].clone();
                    let p_star = p_u.prob(u_star);
                    let threshold = (p_u.max_prob().0 - p_star) / (1.0 - p_star);
                    let lambda = threshold + (1.0 - threshold) * 0.5;
                    // Output 0 strongly indicates the disclosed value without
                    // making any posterior degenerate.
                    let rows: Vec<Vec<f64>> = (0..k)
                        .map(|u| {
                            if u == u_star {
                                vec![0.9, 0.1]
                            } else {
                                vec![0.05, 0.95]
                            }
                        })
                        .collect();
                    let mechanism =
                        Channel::new(labels, index_labels(2), rows).expect("rows are stochastic");
                    AttrCase {
                        label: format!("seed {seed} instance {i}"),
                        p_u,
                        disclosed,
                        lambda,
                        mechanism: Some(mechanism),
                    }
                })
                .collect()
        }
    };
    let mut checks = 0u64;
    for case in &cases {
        let kernel =
            construct_low_entropy_disclosed_attribute(&case.p_u, &case.disclosed, case.lambda)
                .map_err(|e| e.to_string())?;
        let p_w = push_forward(&case.p_u, &kernel).map_err(|e| e.to_string())?;
        checks += 1;
        if p_w.min_entropy() >= case.p_u.min_entropy() {
            return Ok(Verdict::Fail {
                message: "image attribute did not lose prior entropy".into(),
                witness: json!({
                    "scenario": case.label,
                    "prior_entropy": json_float(case.p_u.min_entropy()),
                    "image_entropy": json_float(p_w.min_entropy()),
                    "lambda": case.lambda,
                }),
            });
        }
        let Some(mechanism) = &case.mechanism else {
            continue;
        };
        let joint =
            Joint::new(mechanism.clone(), case.p_u.clone()).map_err(|e| e.to_string())?;
        let u_star = case
            .p_u
            .index_of(&case.disclosed)
            .ok_or_else(|| format!("disclosed value {:?} not in the prior", case.disclosed))?;
        let w_star = kernel
            .output_index(&case.disclosed)
            .expect("kernel preserves the attribute alphabet");
        let mut disclosing: Option<(usize, f64)> = None;
        for y in 0..mechanism.output_len() {
            if joint.output_prob(y) <= 0.0 {
                continue;
            }
            let q_u = joint.posterior(y);
            let q_w = push_forward(&q_u, &kernel).map_err(|e| e.to_string())?;
            let mass_u = q_u.prob(u_star);
            let mass_w = q_w.prob(w_star);
            checks += 1;
            if mass_w < mass_u - 1e-12 {
                return Ok(Verdict::Fail {
                    message: "image mass fell below the source mass".into(),
                    witness: json!({
                        "scenario": case.label,
                        "outcome": mechanism.output_labels()[y],
                        "source_mass": json_float(mass_u),
                        "image_mass": json_float(mass_w),
                    }),
                });
            }
            if q_u.max_prob().1 == case.disclosed {
                checks += 1;
                if q_w.min_entropy() > q_u.min_entropy() + tol {
                    return Ok(Verdict::Fail {
                        message: "image posterior entropy exceeded the source entropy at a \
                                  disclosing outcome"
                            .into(),
                        witness: json!({
                            "scenario": case.label,
                            "outcome": mechanism.output_labels()[y],
                            "source_entropy": json_float(q_u.min_entropy()),
                            "image_entropy": json_float(q_w.min_entropy()),
                        }),
                    });
                }
            }
            let entropy = q_u.min_entropy();
            if disclosing.is_none_or(|(_, h)| entropy < h) {
                disclosing = Some((y, entropy));
            }
        }
        let (y_star, _) = disclosing.expect("some outcome occurs");
        let q_u = joint.posterior(y_star);
        let q_w = push_forward(&q_u, &kernel).map_err(|e| e.to_string())?;
        let mass_u = q_u.prob(u_star);
        let mass_w = q_w.prob(w_star);
        checks += 1;
        if mass_u < 1.0 - 1e-12 && mass_w <= mass_u {
            return Ok(Verdict::Fail {
                message: "image mass did not strictly grow at the disclosing outcome".into(),
                witness: json!({
                    "scenario": case.label,
                    "outcome": mechanism.output_labels()[y_star],
                    "source_mass": json_float(mass_u),
                    "image_mass": json_float(mass_w),
                }),
            });
        }
    }
    Ok(Verdict::Pass {
        checks,
        detail: format!(
            "image attribute inherits disclosure on {} case(s)",
            cases.len()
        ),
    })
}

fn check_capacity_floor(mode: &Mode, tol: f64) -> Result<Verdict, String> {
    let scenarios = match mode {
        Mode::Instance(path) => vec![instance_scenario(path)?],
        Mode::Random { seed, count } => random_scenarios(*seed, *count, 0.05, 0.05),
    };
    let mut checks = 0u64;
    for s in &scenarios {
        if s.channel.input_len() > 6 {
            return Err("exhaustive function enumeration needs at most 6 secret values".into());
        }
        let capacity = leakage_capacity(&s.channel);
        let joint =
            Joint::new(s.channel.clone(), s.prior.clone()).map_err(|e| e.to_string())?;
        for kernel in deterministic_kernels(s.channel.input_labels()) {
            let p_v = push_forward(&s.prior, &kernel).map_err(|e| e.to_string())?;
            // Constant and non-surjective maps collapse onto a smaller
            // alphabet already covered by the enumeration.
            if !p_v.is_full_support() {
                continue;
            }
            let floor = capacity_entropy_floor(&p_v, capacity).map_err(|e| e.to_string())?;
            for y in 0..s.channel.output_len() {
                if joint.output_prob(y) <= 0.0 {
                    continue;
                }
                let h = push_forward(&joint.posterior(y), &kernel)
                    .map_err(|e| e.to_string())?
                    .min_entropy();
                checks += 1;
                if h < floor - tol {
                    return Ok(Verdict::Fail {
                        message: "posterior entropy of a deterministic function fell below \
                                  the capacity floor"
                            .into(),
                        witness: json!({
                            "scenario": s.label,
                            "outcome": s.channel.output_labels()[y],
                            "capacity": json_float(capacity),
                            "floor": json_float(floor),
                            "posterior_entropy": json_float(h),
                            "kernel_rows": (0..kernel.input_len())
                                .map(|x| kernel.row(x).to_vec())
                                .collect::<Vec<_>>(),
                        }),
                    });
                }
            }
        }
    }
    Ok(Verdict::Pass {
        checks,
        detail: format!(
            "capacity entropy floor holds on {} scenario(s)",
            scenarios.len()
        ),
    })
}

struct MinCostCase {
    label: String,
    prior: Pmf,
    alpha: Option<f64>,
    infinite: Option<Channel>,
}

fn check_min_cost_optimality(mode: &Mode, tol: f64) -> Result<Verdict, String> {
    let cases: Vec<MinCostCase> = match mode {
        Mode::Instance(path) => {
            let inst: InstanceFile = read_json(path)?;
            let prior = inst
                .prior
                .ok_or_else(|| String::from("instance file lacks a prior"))?
                .to_pmf()?;
            vec![MinCostCase {
                label: "instance".into(),
                prior,
                alpha: inst.alpha,
                infinite: None,
            }]
        }
        Mode::Random { seed, count } => {
            let mut rng = rng_from_seed(*seed);
            (0..*count)
                .map(|i| {
                    let k = 2 + (i as usize % 3);
                    let ny = 2 + (i as usize % 3);
                    let prior = random_pmf(&mut rng, index_labels(k), 0.05, 1.0)
                        .expect("random masses are valid");
                    let infinite = random_infinite_capacity_channel(
                        &mut rng,
                        index_labels(k),
                        index_labels(ny),
                    )
                    .expect("random rows are valid");
                    MinCostCase {
                        label: format!("seed {seed} instance {i}"),
                        prior,
                        alpha: None,
                        infinite: Some(infinite),
                    }
                })
                .collect()
        }
    };
    let mut checks = 0u64;
    for case in &cases {
        let p_min = case.prior.min_prob().0;
        let target = -(-p_min).ln_1p();
        let alpha = case
            .alpha
            .unwrap_or_else(|| (0.9 * p_min / (1.0 - p_min)).min(0.1));
        let (mechanism, u_kernel) =
            construct_min_cost_disclosure(&case.prior, alpha).map_err(|e| e.to_string())?;
        let joint =
            Joint::new(mechanism.clone(), case.prior.clone()).map_err(|e| e.to_string())?;
        let profile = pml_profile(&joint);
        checks += 1;
        if (profile.sup - target).abs() > tol || profile.witness != "0" {
            return Ok(Verdict::Fail {
                message: "constructed mechanism missed the minimal worst-case leakage".into(),
                witness: json!({
                    "scenario": case.label,
                    "sup_pml": json_float(profile.sup),
                    "target": json_float(target),
                    "witness_outcome": profile.witness,
                    "alpha": alpha,
                }),
            });
        }
        checks += 1;
        if !leakage_capacity(&mechanism).is_infinite() {
            return Ok(Verdict::Fail {
                message: "constructed mechanism does not have infinite capacity".into(),
                witness: json!({
                    "scenario": case.label,
                    "capacity": json_float(leakage_capacity(&mechanism)),
                }),
            });
        }
        let pushed = push_forward(&joint.posterior(0), &u_kernel).map_err(|e| e.to_string())?;
        checks += 1;
        if pushed.prob(1) != 1.0 {
            return Ok(Verdict::Fail {
                message: "disclosing outcome did not collapse the attribute exactly".into(),
                witness: json!({
                    "scenario": case.label,
                    "attribute_mass": json_float(pushed.prob(1)),
                }),
            });
        }
        let d = detect_disclosure(&mechanism, &case.prior, &u_kernel, 1e-9)
            .map_err(|e| e.to_string())?;
        checks += 1;
        if !(d.disclosed && d.attained_zero && d.witness.outcome == "0") {
            return Ok(Verdict::Fail {
                message: "disclosure detection did not confirm the construction".into(),
                witness: json!({
                    "scenario": case.label,
                    "disclosed": d.disclosed,
                    "attained_zero": d.attained_zero,
                    "witness_outcome": d.witness.outcome,
                }),
            });
        }
        if let Some(channel) = &case.infinite {
            let j2 =
                Joint::new(channel.clone(), case.prior.clone()).map_err(|e| e.to_string())?;
            let sup = pml_profile(&j2).sup;
            checks += 1;
            if sup < target - 1e-9 {
                return Ok(Verdict::Fail {
                    message: "an infinite-capacity channel undercut the minimal cost".into(),
                    witness: json!({
                        "scenario": case.label,
                        "sup_pml": json_float(sup),
                        "target": json_float(target),
                    }),
                });
            }
        }
    }
    Ok(Verdict::Pass {
        checks,
        detail: format!(
            "minimal-cost construction is tight on {} case(s)",
            cases.len()
        ),
    })
}

fn database_mechanisms(mode: &Mode) -> Result<Vec<(String, DatabaseMechanism)>, String> {
    match mode {
        Mode::Instance(path) => {
            let inst: InstanceFile = read_json(path)?;
            let m = inst
                .mechanism
                .ok_or_else(|| String::from("instance file lacks a mechanism"))?
                .to_database_mechanism()?;
            Ok(vec![("instance".into(), m)])
        }
        Mode::Random { seed, count } => {
            let mut rng = rng_from_seed(*seed);
            let mut out = Vec::with_capacity(*count as usize);
            for i in 0..*count {
                let n = 2 + (i as usize % 2);
                let ny = 2 + (i as usize % 2);
                let schema =
                    DatabaseSchema::new(index_labels(2), n).map_err(|e| e.to_string())?;
                let m = random_database_mechanism(&mut rng, schema, ny, 0.2, 1.0)
                    .map_err(|e| e.to_string())?;
                out.push((format!("seed {seed} instance {i}"), m));
            }
            Ok(out)
        }
    }
}

fn formulation_witness(
    label: &str,
    report: &EquivalenceReport,
    f: &FormulationReport,
) -> serde_json::Value {
    json!({
        "scenario": label,
        "formulation": f.trace.formulation.id(),
        "target": json_float(f.target),
        "limit_estimate": json_float(f.trace.limit_estimate),
        "gap": json_float(f.gap),
        "monotone": f.monotone,
        "strictly_below": f.strictly_below,
        "tolerance": report.tolerance,
        "dp_epsilon": json_float(report.dp_epsilon),
        "free_lunch_epsilon": json_float(report.free_lunch_epsilon),
        "trace": f.trace.points.iter().map(|p| json!({
            "construction_eps": p.construction_eps,
            "value": json_float(p.value),
        })).collect::<Vec<_>>(),
    })
}

fn check_equivalence(
    mode: &Mode,
    tol: f64,
    config: &AnalysisConfig,
    dp_side: bool,
) -> Result<Verdict, String> {
    let mechanisms = database_mechanisms(mode)?;
    let mut checks = 0u64;
    for (label, m) in &mechanisms {
        let report =
            verify_equivalences_with(m, tol, &config.eps_sequence).map_err(|e| e.to_string())?;
        for f in &report.formulations {
            if f.trace.formulation.targets_dp() != dp_side {
                continue;
            }
            checks += 1;
            if !f.passed {
                return Ok(Verdict::Fail {
                    message: format!(
                        "formulation {} missed its target on {label}",
                        f.trace.formulation.id()
                    ),
                    witness: formulation_witness(label, &report, f),
                });
            }
        }
    }
    let side = if dp_side {
        "differential-privacy"
    } else {
        "free-lunch"
    };
    Ok(Verdict::Pass {
        checks,
        detail: format!(
            "{side} traces monotone and converged on {} mechanism(s)",
            mechanisms.len()
        ),
    })
}

fn check_non_attainment(
    mode: &Mode,
    tol: f64,
    config: &AnalysisConfig,
) -> Result<Verdict, String> {
    let mechanisms = database_mechanisms(mode)?;
    let mut checks = 0u64;
    for (label, m) in &mechanisms {
        let report =
            verify_equivalences_with(m, tol, &config.eps_sequence).map_err(|e| e.to_string())?;
        if report.rows_identical {
            continue;
        }
        for f in &report.formulations {
            checks += 1;
            if !f.strictly_below {
                return Ok(Verdict::Fail {
                    message: format!(
                        "formulation {} attained its supremum on {label}",
                        f.trace.formulation.id()
                    ),
                    witness: formulation_witness(label, &report, f),
                });
            }
        }
    }
    Ok(Verdict::Pass {
        checks,
        detail: format!(
            "suprema unattained at every concentration on {} mechanism(s)",
            mechanisms.len()
        ),
    })
}

fn check_no_singling_out(mode: &Mode, tol: f64) -> Result<Verdict, String> {
    let scenarios = match mode {
        Mode::Instance(path) => vec![instance_scenario(path)?],
        Mode::Random { seed, count } => random_scenarios(*seed, *count, 0.8, 0.7),
    };
    let mut checks = 0u64;
    for s in &scenarios {
        let joint =
            Joint::new(s.channel.clone(), s.prior.clone()).map_err(|e| e.to_string())?;
        let eps = pml_profile(&joint).sup;
        let h = s.prior.min_entropy();
        if eps >= h {
            return Err(format!(
                "{}: sup-PML {eps} is not below the prior min-entropy {h}, so the \
                 hypothesis fails",
                s.label
            ));
        }
        let threshold = (h - eps - tol).max(0.0);
        let d = detect_singling_out(&s.channel, &s.prior, threshold).map_err(|e| e.to_string())?;
        checks += 1;
        if d.disclosed {
            return Ok(Verdict::Fail {
                message: "a certified mechanism singled out the secret".into(),
                witness: json!({
                    "scenario": s.label,
                    "sup_pml": json_float(eps),
                    "prior_entropy": json_float(h),
                    "threshold": json_float(threshold),
                    "witness_outcome": d.witness.outcome,
                    "witness_value": d.witness.attribute_value,
                    "posterior_mass": json_float(d.witness.posterior_mass),
                    "min_entropy": json_float(d.witness.min_entropy),
                }),
            });
        }
    }
    Ok(Verdict::Pass {
        checks,
        detail: format!(
            "no singling out below the certified margin on {} scenario(s)",
            scenarios.len()
        ),
    })
}
