//! Pointwise maximal leakage, leakage capacity, and prior-set certification.
//!
//! The central quantity is [`pml`]: the order-infinity divergence between the
//! posterior given one outcome and the prior, `log max_x p(y|x) / p_Y(y)`
//! over the prior's support. Outcomes with probability zero leak nothing by
//! convention. Everything here works exclusively in the log domain once the
//! inputs are validated.

use crate::database::DatabaseSchema;
use crate::error::{Error, Result};
use crate::par::par_map;
use crate::prob::{push_forward, Channel, Joint, Pmf, SUPPORT_FLOOR};

/// Per-outcome leakage values for a joint, with the supremum and the
/// outcome attaining it (lexicographically first label on ties).
#[derive(Debug, Clone)]
pub struct LeakageProfile {
    pub outcomes: Vec<String>,
    pub values: Vec<f64>,
    pub sup: f64,
    pub witness: String,
}

impl LeakageProfile {
    pub fn value(&self, outcome: &str) -> Option<f64> {
        self.outcomes
            .iter()
            .position(|o| o == outcome)
            .map(|i| self.values[i])
    }
}

/// Pointwise maximal leakage of output index `y` in nats.
///
/// Equals `log max_{x in supp(prior)} p(y|x) - log p_Y(y)`, and exactly zero
/// for outcomes that cannot occur under the prior.
pub fn pml(j: &Joint, y: usize) -> f64 {
    let mut max_row = 0.0f64;
    for x in j.prior().support() {
        max_row = max_row.max(j.channel().prob(x, y));
    }
    if max_row <= 0.0 {
        return 0.0;
    }
    let py = j.output_prob(y);
    if py <= 0.0 {
        return 0.0;
    }
    (max_row.ln() - py.ln()).max(0.0)
}

/// Leakage of every outcome, computed independently per output symbol.
pub fn pml_profile(j: &Joint) -> LeakageProfile {
    let indices: Vec<usize> = (0..j.channel().output_len()).collect();
    let values = par_map(&indices, |&y| pml(j, y));
    let outcomes: Vec<String> = j.channel().output_labels().to_vec();
    let mut best = 0usize;
    for i in 1..values.len() {
        if values[i] > values[best]
            || (values[i] == values[best] && outcomes[i] < outcomes[best])
        {
            best = i;
        }
    }
    LeakageProfile {
        sup: values[best],
        witness: outcomes[best].clone(),
        outcomes,
        values,
    }
}

/// Guessing-advantage lower bound on `pml(j, y)` realized by one concrete
/// attribute kernel `P(U|X)`.
///
/// The optimal estimator of `U` from a single observation guesses the
/// posterior mode, so the advantage is
/// `log max_u p(u|Y=y) - log max_u p(u)`. May be negative for unhelpful
/// kernels; it never exceeds `pml(j, y)`.
pub fn pml_randomized_function_lower(j: &Joint, y: usize, u_kernel: &Channel) -> Result<f64> {
    let p_u = push_forward(j.prior(), u_kernel)?;
    let posterior_u = push_forward(&j.posterior(y), u_kernel)?;
    Ok(posterior_u.max_prob().0.ln() - p_u.max_prob().0.ln())
}

/// Leakage about the secret given side information fixed to one value:
/// the caller supplies the channel and prior already conditioned on it.
pub fn conditional_pml(channel_given_z: &Channel, prior_given_z: &Pmf, y: usize) -> Result<f64> {
    let j = Joint::new(channel_given_z.clone(), prior_given_z.clone())?;
    Ok(pml(&j, y))
}

/// Largest leakage any prior can exhibit:
/// `log sup_y max_{x, x'} p(y|x) / p(y|x')`.
///
/// Infinite exactly when some output column mixes a zero entry with a
/// positive one. Columns that are zero in every row never occur and are
/// skipped. A constant channel has capacity zero.
pub fn leakage_capacity(c: &Channel) -> f64 {
    let mut best = 0.0f64;
    for y in 0..c.output_len() {
        let mut mx = 0.0f64;
        let mut mn = f64::INFINITY;
        for x in 0..c.input_len() {
            let v = c.prob(x, y);
            mx = mx.max(v);
            mn = mn.min(v);
        }
        if mx <= SUPPORT_FLOOR {
            continue;
        }
        if mn <= SUPPORT_FLOOR {
            return f64::INFINITY;
        }
        best = best.max(mx.ln() - mn.ln());
    }
    best
}

/// Largest leakage a specific marginal can ever admit,
/// `log 1 / min_x p(x)`. Requires full support.
pub fn epsilon_max(marginal: &Pmf) -> Result<f64> {
    if !marginal.is_full_support() {
        return Err(Error::DegenerateSupport(
            "epsilon_max needs a full-support marginal".into(),
        ));
    }
    Ok(-marginal.min_prob().0.ln())
}

/// Joint view of a derived attribute: given `P(U|X)`, returns the pair
/// `(P_U, P(Y|U))` as a [`Joint`], with `p(y|u) = sum_x p(x|u) p(y|x)`.
///
/// Attribute values with zero prior mass get the output marginal as their
/// row; they carry no mass, so the choice does not affect any leakage
/// quantity.
pub fn attribute_joint(j: &Joint, u_kernel: &Channel) -> Result<Joint> {
    let p_u = push_forward(j.prior(), u_kernel)?;
    let ny = j.channel().output_len();
    let marginal = j.output_marginal();
    let mut rows = vec![vec![0.0f64; ny]; p_u.len()];
    for (u, row) in rows.iter_mut().enumerate() {
        let pu = p_u.prob(u);
        if pu == 0.0 {
            row.copy_from_slice(marginal.probs());
            continue;
        }
        for x in 0..j.prior().len() {
            let weight = j.prior().prob(x) * u_kernel.prob(x, u) / pu;
            if weight == 0.0 {
                continue;
            }
            for (y, slot) in row.iter_mut().enumerate() {
                *slot += weight * j.channel().prob(x, y);
            }
        }
    }
    let channel = Channel::new(
        p_u.labels().to_vec(),
        j.channel().output_labels().to_vec(),
        rows,
    )?;
    Joint::new(channel, p_u)
}

/// Leakage of output `y` under a raw weight vector over the channel inputs.
///
/// Bypasses [`Pmf`] support semantics: the adversarial limit constructions
/// legitimately carry masses far below the generic support floor, and those
/// must enter the marginal at full precision. Support is exact positivity.
pub(crate) fn pml_with_weights(c: &Channel, weights: &[f64], y: usize) -> f64 {
    let mut max_row = 0.0f64;
    let mut py = 0.0f64;
    for (x, &w) in weights.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        let v = c.prob(x, y);
        py += w * v;
        max_row = max_row.max(v);
    }
    if max_row <= 0.0 || py <= 0.0 {
        return 0.0;
    }
    (max_row.ln() - py.ln()).max(0.0)
}

/// Family of priors over which an `(eps, family)`-style guarantee is
/// certified.
///
/// Explicit lists are evaluated exactly. The parametric families are
/// evaluated on documented grids and therefore produce lower estimates of
/// the true supremum:
///
/// * `SimplexGrid`: all full-support points of the resolution-`k` lattice
///   `{ (c_1/k, ..., c_d/k) : c_i >= 1 }` on the channel's input simplex;
/// * `ProductFamily`: i.i.d.-per-entry priors concentrated on the
///   least-likely database for each output, one member per pair of a
///   concentration parameter from `eps_sequence` and an output symbol;
/// * `PredicateFamily`: i.i.d.-per-entry priors where each entry satisfies
///   a predicate with probability `p`, swept over `grid_points` values of
///   `p` strictly inside `(c, 1-c)`, mass uniform within each predicate
///   class.
#[derive(Debug, Clone)]
pub enum PriorSet {
    Explicit(Vec<Pmf>),
    SimplexGrid { resolution: u32 },
    ProductFamily {
        schema: DatabaseSchema,
        eps_sequence: Vec<f64>,
    },
    PredicateFamily {
        schema: DatabaseSchema,
        predicate: Vec<bool>,
        c: f64,
        grid_points: u32,
    },
}

impl PriorSet {
    /// True when the family is evaluated on a grid rather than exactly.
    pub fn lower_estimate(&self) -> bool {
        !matches!(self, PriorSet::Explicit(_))
    }
}

/// Outcome of certifying `sup_{prior} sup_y pml <= eps` over a prior set.
#[derive(Debug, Clone)]
pub struct Certification {
    pub holds: bool,
    /// Set when the supremum was evaluated on a grid, so `holds` certifies
    /// only the evaluated members.
    pub lower_estimate: bool,
    pub eps: f64,
    pub worst_value: f64,
    pub worst_prior: Pmf,
    pub worst_outcome: String,
    pub members_evaluated: usize,
}

fn simplex_grid_members(labels: &[String], resolution: u32) -> Result<Vec<Pmf>> {
    let d = labels.len();
    if (resolution as usize) < d {
        return Err(Error::InvalidParameter(format!(
            "simplex grid resolution {resolution} below alphabet size {d}"
        )));
    }
    // Count compositions before materializing them.
    let mut count: u128 = 1;
    for i in 0..(d - 1) {
        count = count * (resolution as u128 - 1 - i as u128) / (i as u128 + 1);
        if count > 1_000_000 {
            return Err(Error::InvalidParameter(format!(
                "simplex grid with resolution {resolution} over {d} symbols has too many members"
            )));
        }
    }
    let mut members = Vec::new();
    let mut parts = vec![1u32; d];
    parts[d - 1] = resolution - (d as u32 - 1);
    loop {
        let probs: Vec<f64> = parts.iter().map(|&c| c as f64 / resolution as f64).collect();
        members.push(Pmf::new(labels.to_vec(), probs)?);
        // Advance to the next composition of `resolution` into d positive
        // parts, in lexicographic order of the leading entries.
        let mut i = d - 1;
        loop {
            if i == 0 {
                return Ok(members);
            }
            i -= 1;
            let tail: u32 = parts[i + 1..].iter().sum();
            if tail > (d - 1 - i) as u32 {
                parts[i] += 1;
                let remaining = resolution - parts[..=i].iter().sum::<u32>();
                for (offset, slot) in parts[i + 1..].iter_mut().enumerate() {
                    *slot = if offset == d - 2 - i {
                        remaining - (d - 2 - i) as u32
                    } else {
                        1
                    };
                }
                break;
            }
        }
    }
}

struct WeightedMember {
    weights: Vec<f64>,
    display: Pmf,
}

fn product_member(
    schema: &DatabaseSchema,
    per_entry: &[Pmf],
) -> WeightedMember {
    let n = schema.n();
    let count = schema.database_count();
    let mut weights = Vec::with_capacity(count);
    for x in 0..count {
        let mut w = 1.0f64;
        for (j, pmf) in per_entry.iter().enumerate().take(n) {
            w *= pmf.prob(schema.digit(x, j));
        }
        weights.push(w);
    }
    let display = Pmf::new(schema.database_labels().to_vec(), weights.clone())
        .expect("product weights are a valid pmf");
    WeightedMember { weights, display }
}

fn check_members_weighted(
    c: &Channel,
    members: Vec<WeightedMember>,
    eps: f64,
    lower_estimate: bool,
) -> Result<Certification> {
    if members.is_empty() {
        return Err(Error::EmptyPriorSet);
    }
    let evaluated = par_map(&members, |member| {
        let mut best_value = 0.0f64;
        let mut best_y = 0usize;
        for y in 0..c.output_len() {
            let v = pml_with_weights(c, &member.weights, y);
            if v > best_value
                || (v == best_value && c.output_labels()[y] < c.output_labels()[best_y])
            {
                best_value = v;
                best_y = y;
            }
        }
        (best_value, best_y)
    });
    let mut worst = 0usize;
    for (i, (v, _)) in evaluated.iter().enumerate() {
        if *v > evaluated[worst].0 {
            worst = i;
        }
    }
    let (worst_value, worst_y) = evaluated[worst];
    let members_evaluated = members.len();
    let worst_prior = members.into_iter().nth(worst).unwrap().display;
    Ok(Certification {
        holds: worst_value <= eps,
        lower_estimate,
        eps,
        worst_value,
        worst_prior,
        worst_outcome: c.output_labels()[worst_y].clone(),
        members_evaluated,
    })
}

/// Certify `sup_{prior in set} sup_y pml(prior, y) <= eps` for a channel.
///
/// Parametric families yield a grid lower estimate of the supremum; the
/// certification records that. Reports the worst member, outcome, and value.
pub fn check_eps_pml(c: &Channel, set: &PriorSet, eps: f64) -> Result<Certification> {
    if !(eps.is_finite() && eps >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "certification eps {eps} must be finite and nonnegative"
        )));
    }
    let members: Vec<WeightedMember> = match set {
        PriorSet::Explicit(list) => {
            if list.is_empty() {
                return Err(Error::EmptyPriorSet);
            }
            list.iter()
                .map(|p| {
                    if p.labels() != c.input_labels() {
                        return Err(Error::AlphabetMismatch(
                            "prior set member alphabet must match the channel input".into(),
                        ));
                    }
                    Ok(WeightedMember {
                        weights: p.probs().to_vec(),
                        display: p.clone(),
                    })
                })
                .collect::<Result<_>>()?
        }
        PriorSet::SimplexGrid { resolution } => {
            simplex_grid_members(c.input_labels(), *resolution)?
                .into_iter()
                .map(|p| WeightedMember {
                    weights: p.probs().to_vec(),
                    display: p,
                })
                .collect()
        }
        PriorSet::ProductFamily {
            schema,
            eps_sequence,
        } => {
            schema.check_matches_inputs(c)?;
            if eps_sequence.is_empty() {
                return Err(Error::EmptyPriorSet);
            }
            for &e in eps_sequence {
                if !(e > 0.0 && e < 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "construction eps {e} outside (0, 1)"
                    )));
                }
            }
            let mut members = Vec::new();
            for &e in eps_sequence {
                for y in 0..c.output_len() {
                    let column: Vec<f64> =
                        (0..c.input_len()).map(|x| c.prob(x, y)).collect();
                    if column.iter().all(|&v| v <= 0.0) {
                        continue;
                    }
                    let target = crate::prob::argmin_by_label(&column, c.input_labels());
                    let digits = schema.entries_of(target);
                    let per_entry: Vec<Pmf> = digits
                        .iter()
                        .map(|&d| {
                            Pmf::concentrated(schema.entry_alphabet().to_vec(), d, e)
                        })
                        .collect::<Result<_>>()?;
                    members.push(product_member(schema, &per_entry));
                }
            }
            members
        }
        PriorSet::PredicateFamily {
            schema,
            predicate,
            c: family_c,
            grid_points,
        } => {
            schema.check_matches_inputs(c)?;
            if predicate.len() != schema.entry_alphabet().len() {
                return Err(Error::DimensionMismatch(format!(
                    "{} predicate flags vs {} entry symbols",
                    predicate.len(),
                    schema.entry_alphabet().len()
                )));
            }
            let ones = predicate.iter().filter(|&&b| b).count();
            if ones == 0 || ones == predicate.len() {
                return Err(Error::InvalidParameter(
                    "predicate family needs both predicate classes nonempty".into(),
                ));
            }
            if !(*family_c >= 0.0 && *family_c < 0.5) {
                return Err(Error::InvalidParameter(format!(
                    "predicate family parameter c = {family_c} outside [0, 0.5)"
                )));
            }
            if *grid_points == 0 {
                return Err(Error::EmptyPriorSet);
            }
            let mut members = Vec::new();
            for t in 1..=*grid_points {
                let p = family_c
                    + (1.0 - 2.0 * family_c) * t as f64 / (*grid_points as f64 + 1.0);
                let entry_probs: Vec<f64> = predicate
                    .iter()
                    .map(|&b| {
                        if b {
                            p / ones as f64
                        } else {
                            (1.0 - p) / (predicate.len() - ones) as f64
                        }
                    })
                    .collect();
                let entry = Pmf::new(schema.entry_alphabet().to_vec(), entry_probs)?;
                let per_entry = vec![entry; schema.n()];
                members.push(product_member(schema, &per_entry));
            }
            members
        }
    };
    check_members_weighted(c, members, eps, set.lower_estimate())
}
