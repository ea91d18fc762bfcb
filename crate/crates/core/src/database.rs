//! Database-indexed mechanisms and privacy-parameter equivalences.
//!
//! A database is a tuple of `n` entries drawn from a shared finite alphabet;
//! the database alphabet is the row-major enumeration of all tuples with
//! entry 1 most significant. Differential privacy bounds the log-likelihood
//! ratio across databases differing in one entry, free-lunch privacy across
//! all pairs. Both parameters are also the limits of pointwise-maximal-
//! leakage suprema over ever more concentrated full-support priors; this
//! module builds those priors and reports the convergence traces.

use crate::error::{Error, Result};
use crate::leakage::{leakage_capacity, pml_with_weights};
use crate::par::par_map;
use crate::prob::{argmax_by_label, argmin_by_label, check_labels, Channel, Pmf, SUPPORT_FLOOR};

/// Hard cap on the number of databases enumerated exactly.
pub const MAX_DATABASES: u64 = 4096;

/// Construction concentration sequence used when none is supplied.
pub const DEFAULT_CONSTRUCTION_EPS: [f64; 6] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6];

/// Slack allowed when checking that a trace never decreases.
const MONOTONE_SLACK: f64 = 1e-12;

/// Entry alphabet and entry count, with the induced database alphabet.
///
/// Database labels concatenate entry symbols when every symbol is a single
/// character and comma-join them otherwise; symbols must be nonempty and
/// comma-free so labels stay unambiguous.
#[derive(Debug, Clone, PartialEq)]
pub struct DatabaseSchema {
    entry_alphabet: Vec<String>,
    n: usize,
    powers: Vec<usize>,
    rest_powers: Vec<usize>,
    database_labels: Vec<String>,
}

impl DatabaseSchema {
    pub fn new(entry_alphabet: Vec<String>, n: usize) -> Result<Self> {
        check_labels(&entry_alphabet)?;
        if entry_alphabet.len() < 2 {
            return Err(Error::InvalidParameter(
                "entry alphabet needs at least two symbols".into(),
            ));
        }
        if n == 0 {
            return Err(Error::InvalidParameter(
                "database needs at least one entry".into(),
            ));
        }
        for s in &entry_alphabet {
            if s.is_empty() || s.contains(',') {
                return Err(Error::InvalidParameter(format!(
                    "entry symbol {s:?} must be nonempty and comma-free"
                )));
            }
        }
        let k = entry_alphabet.len() as u128;
        let mut size: u128 = 1;
        for _ in 0..n {
            size *= k;
            if size > MAX_DATABASES as u128 {
                return Err(Error::DomainTooLarge {
                    size,
                    limit: MAX_DATABASES,
                });
            }
        }
        let count = size as usize;
        let k = entry_alphabet.len();
        let mut powers = vec![1usize; n];
        for j in (0..n - 1).rev() {
            powers[j] = powers[j + 1] * k;
        }
        let mut rest_powers = vec![1usize; n.saturating_sub(1)];
        if n >= 2 {
            for j in (0..n - 2).rev() {
                rest_powers[j] = rest_powers[j + 1] * k;
            }
        }
        let single_char = entry_alphabet.iter().all(|s| s.chars().count() == 1);
        let mut database_labels = Vec::with_capacity(count);
        for idx in 0..count {
            let symbols: Vec<&str> = (0..n)
                .map(|j| entry_alphabet[idx / powers[j] % k].as_str())
                .collect();
            database_labels.push(if single_char {
                symbols.concat()
            } else {
                symbols.join(",")
            });
        }
        Ok(DatabaseSchema {
            entry_alphabet,
            n,
            powers,
            rest_powers,
            database_labels,
        })
    }

    pub fn entry_alphabet(&self) -> &[String] {
        &self.entry_alphabet
    }

    pub fn entry_count(&self) -> usize {
        self.entry_alphabet.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn database_count(&self) -> usize {
        self.database_labels.len()
    }

    pub fn database_labels(&self) -> &[String] {
        &self.database_labels
    }

    /// Value of entry `pos` inside database `db`.
    pub fn digit(&self, db: usize, pos: usize) -> usize {
        assert!(db < self.database_count() && pos < self.n);
        db / self.powers[pos] % self.entry_count()
    }

    pub fn entries_of(&self, db: usize) -> Vec<usize> {
        (0..self.n).map(|pos| self.digit(db, pos)).collect()
    }

    pub fn index_of(&self, digits: &[usize]) -> Result<usize> {
        if digits.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "{} entry values for a database of {} entries",
                digits.len(),
                self.n
            )));
        }
        let mut idx = 0usize;
        for &d in digits {
            if d >= self.entry_count() {
                return Err(Error::InvalidParameter(format!(
                    "entry value index {d} outside alphabet of size {}",
                    self.entry_count()
                )));
            }
            idx = idx * self.entry_count() + d;
        }
        Ok(idx)
    }

    /// Number of joint settings of all entries except one.
    pub fn rest_count(&self) -> usize {
        self.database_count() / self.entry_count()
    }

    /// Database formed by entry `i = d` and the remaining entries set to the
    /// row-major tuple `rest`.
    pub fn compose(&self, i: usize, d: usize, rest: usize) -> usize {
        assert!(i < self.n && d < self.entry_count() && rest < self.rest_count());
        let k = self.entry_count();
        let mut idx = 0usize;
        let mut rj = 0usize;
        for pos in 0..self.n {
            let dig = if pos == i {
                d
            } else {
                let v = rest / self.rest_powers[rj] % k;
                rj += 1;
                v
            };
            idx = idx * k + dig;
        }
        idx
    }

    pub fn rest_digits(&self, rest: usize) -> Vec<usize> {
        assert!(rest < self.rest_count());
        let k = self.entry_count();
        self.rest_powers.iter().map(|&p| rest / p % k).collect()
    }

    pub fn rest_index(&self, digits: &[usize]) -> Result<usize> {
        if digits.len() + 1 != self.n {
            return Err(Error::DimensionMismatch(format!(
                "{} values for the {} remaining entries",
                digits.len(),
                self.n - 1
            )));
        }
        let mut idx = 0usize;
        for &d in digits {
            if d >= self.entry_count() {
                return Err(Error::InvalidParameter(format!(
                    "entry value index {d} outside alphabet of size {}",
                    self.entry_count()
                )));
            }
            idx = idx * self.entry_count() + d;
        }
        Ok(idx)
    }

    /// Display label for a setting of all entries except entry `i`.
    pub fn rest_label(&self, i: usize, rest: usize) -> String {
        assert!(i < self.n);
        if self.n == 1 {
            return "-".to_string();
        }
        let digits = self.rest_digits(rest);
        let single_char = self.entry_alphabet.iter().all(|s| s.chars().count() == 1);
        let symbols: Vec<&str> = digits
            .iter()
            .map(|&d| self.entry_alphabet[d].as_str())
            .collect();
        if single_char {
            symbols.concat()
        } else {
            symbols.join(",")
        }
    }

    pub fn rest_labels(&self, i: usize) -> Vec<String> {
        (0..self.rest_count())
            .map(|rest| self.rest_label(i, rest))
            .collect()
    }

    pub fn check_matches_inputs(&self, c: &Channel) -> Result<()> {
        if c.input_labels() != self.database_labels() {
            return Err(Error::AlphabetMismatch(
                "channel input alphabet must be the schema's database alphabet".into(),
            ));
        }
        Ok(())
    }
}

/// A channel whose inputs are whole databases under a fixed schema.
#[derive(Debug, Clone)]
pub struct DatabaseMechanism {
    schema: DatabaseSchema,
    channel: Channel,
}

impl DatabaseMechanism {
    pub fn new(schema: DatabaseSchema, channel: Channel) -> Result<Self> {
        schema.check_matches_inputs(&channel)?;
        Ok(DatabaseMechanism { schema, channel })
    }

    pub fn from_rows(
        schema: DatabaseSchema,
        output_labels: Vec<String>,
        rows: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let channel = Channel::new(schema.database_labels().to_vec(), output_labels, rows)?;
        Ok(DatabaseMechanism { schema, channel })
    }

    pub fn schema(&self) -> &DatabaseSchema {
        &self.schema
    }

    pub fn channel(&self) -> &Channel {
        &self.channel
    }

    pub fn output_len(&self) -> usize {
        self.channel.output_len()
    }

    /// True when every database gets the same output row; the only case in
    /// which the concentrated-prior traces attain their target exactly.
    pub fn rows_identical(&self) -> bool {
        (1..self.channel.input_len()).all(|x| self.channel.row(x) == self.channel.row(0))
    }
}

#[derive(Debug, Clone)]
enum PriorKind {
    Explicit(Pmf),
    Product(Vec<Pmf>),
}

/// Full-support distribution over databases, stored explicitly or as a
/// product of per-entry distributions.
///
/// Positivity is checked on the raw probabilities, not against the generic
/// support floor: the adversarial limit constructions legitimately produce
/// joint masses many orders of magnitude below it, and every operation here
/// consumes the raw weights.
#[derive(Debug, Clone)]
pub struct DatabasePrior {
    kind: PriorKind,
}

impl DatabasePrior {
    pub fn explicit(schema: &DatabaseSchema, pmf: Pmf) -> Result<Self> {
        if pmf.labels() != schema.database_labels() {
            return Err(Error::AlphabetMismatch(
                "explicit database prior must be labeled by the database alphabet".into(),
            ));
        }
        if pmf.probs().iter().any(|&p| p <= 0.0) {
            return Err(Error::DegenerateSupport(
                "database prior must put positive mass on every database".into(),
            ));
        }
        Ok(DatabasePrior {
            kind: PriorKind::Explicit(pmf),
        })
    }

    pub fn product(schema: &DatabaseSchema, entries: Vec<Pmf>) -> Result<Self> {
        if entries.len() != schema.n() {
            return Err(Error::DimensionMismatch(format!(
                "{} per-entry distributions for {} entries",
                entries.len(),
                schema.n()
            )));
        }
        for e in &entries {
            if e.labels() != schema.entry_alphabet() {
                return Err(Error::AlphabetMismatch(
                    "per-entry prior must be labeled by the entry alphabet".into(),
                ));
            }
            if e.probs().iter().any(|&p| p <= 0.0) {
                return Err(Error::DegenerateSupport(
                    "per-entry prior must put positive mass on every symbol".into(),
                ));
            }
        }
        Ok(DatabasePrior {
            kind: PriorKind::Product(entries),
        })
    }

    pub fn is_product(&self) -> bool {
        matches!(self.kind, PriorKind::Product(_))
    }

    pub fn entry_pmfs(&self) -> Option<&[Pmf]> {
        match &self.kind {
            PriorKind::Product(entries) => Some(entries),
            PriorKind::Explicit(_) => None,
        }
    }

    pub fn as_explicit(&self) -> Option<&Pmf> {
        match &self.kind {
            PriorKind::Explicit(p) => Some(p),
            PriorKind::Product(_) => None,
        }
    }

    /// Raw joint mass of every database, in schema order.
    pub fn weights(&self, schema: &DatabaseSchema) -> Vec<f64> {
        match &self.kind {
            PriorKind::Explicit(p) => p.probs().to_vec(),
            PriorKind::Product(entries) => (0..schema.database_count())
                .map(|x| {
                    (0..schema.n())
                        .map(|j| entries[j].prob(schema.digit(x, j)))
                        .product()
                })
                .collect(),
        }
    }

    /// Expanded joint distribution, for display and serialization.
    pub fn to_explicit(&self, schema: &DatabaseSchema) -> Pmf {
        match &self.kind {
            PriorKind::Explicit(p) => p.clone(),
            PriorKind::Product(_) => Pmf::new(
                schema.database_labels().to_vec(),
                self.weights(schema),
            )
            .expect("product weights form a valid pmf"),
        }
    }

    fn validate_for(&self, schema: &DatabaseSchema) -> Result<()> {
        match &self.kind {
            PriorKind::Explicit(p) => {
                if p.labels() != schema.database_labels() {
                    return Err(Error::AlphabetMismatch(
                        "database prior built for a different schema".into(),
                    ));
                }
            }
            PriorKind::Product(entries) => {
                if entries.len() != schema.n()
                    || entries.iter().any(|e| e.labels() != schema.entry_alphabet())
                {
                    return Err(Error::AlphabetMismatch(
                        "database prior built for a different schema".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Largest log-likelihood ratio across databases differing in one entry;
/// infinite when a zero row entry faces a positive one in such a pair.
pub fn dp_epsilon(m: &DatabaseMechanism) -> f64 {
    let schema = m.schema();
    let c = m.channel();
    let k = schema.entry_count();
    let mut best = 0.0f64;
    for i in 0..schema.n() {
        for rest in 0..schema.rest_count() {
            for y in 0..c.output_len() {
                let mut mx = 0.0f64;
                let mut mn = f64::INFINITY;
                for d in 0..k {
                    let v = c.prob(schema.compose(i, d, rest), y);
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
        }
    }
    best
}

/// Largest log-likelihood ratio across all database pairs; this is the
/// leakage capacity of the database channel and never falls below
/// [`dp_epsilon`].
pub fn free_lunch_epsilon(m: &DatabaseMechanism) -> f64 {
    leakage_capacity(m.channel())
}

/// Leakage about the whole database at output `y` under a database prior.
pub fn database_pml(m: &DatabaseMechanism, prior: &DatabasePrior, y: usize) -> Result<f64> {
    prior.validate_for(m.schema())?;
    if y >= m.output_len() {
        return Err(Error::InvalidParameter(format!(
            "output index {y} outside {} outputs",
            m.output_len()
        )));
    }
    Ok(pml_with_weights(
        m.channel(),
        &prior.weights(m.schema()),
        y,
    ))
}

/// Leakage about entry `i` alone at output `y`: the pointwise maximal
/// leakage of the joint obtained by marginalizing the database onto that
/// entry.
pub fn entry_pml(m: &DatabaseMechanism, prior: &DatabasePrior, i: usize, y: usize) -> Result<f64> {
    prior.validate_for(m.schema())?;
    let schema = m.schema();
    if i >= schema.n() {
        return Err(Error::InvalidParameter(format!(
            "entry index {i} outside {} entries",
            schema.n()
        )));
    }
    if y >= m.output_len() {
        return Err(Error::InvalidParameter(format!(
            "output index {y} outside {} outputs",
            m.output_len()
        )));
    }
    let weights = prior.weights(schema);
    let k = schema.entry_count();
    let mut mass = vec![0.0f64; k];
    let mut joint = vec![0.0f64; k];
    for (x, &w) in weights.iter().enumerate() {
        let d = schema.digit(x, i);
        mass[d] += w;
        joint[d] += w * m.channel().prob(x, y);
    }
    let py: f64 = joint.iter().sum();
    if py <= 0.0 {
        return Ok(0.0);
    }
    let mut max_row = 0.0f64;
    for d in 0..k {
        // Full support keeps every entry value conditioning-safe.
        max_row = max_row.max(joint[d] / mass[d]);
    }
    Ok((max_row.ln() - py.ln()).max(0.0))
}

/// Leakage about entry `i` at output `y`, conditioned on the remaining
/// entries being fixed to `d_minus_i` (row-major digits, positions in
/// increasing order skipping `i`).
pub fn conditional_entry_pml(
    m: &DatabaseMechanism,
    prior: &DatabasePrior,
    i: usize,
    d_minus_i: &[usize],
    y: usize,
) -> Result<f64> {
    prior.validate_for(m.schema())?;
    let schema = m.schema();
    if i >= schema.n() {
        return Err(Error::InvalidParameter(format!(
            "entry index {i} outside {} entries",
            schema.n()
        )));
    }
    if y >= m.output_len() {
        return Err(Error::InvalidParameter(format!(
            "output index {y} outside {} outputs",
            m.output_len()
        )));
    }
    let rest = schema.rest_index(d_minus_i)?;
    let weights = prior.weights(schema);
    let k = schema.entry_count();
    let mut cond_mass = 0.0f64;
    let mut column = Vec::with_capacity(k);
    let mut slice = Vec::with_capacity(k);
    for d in 0..k {
        let x = schema.compose(i, d, rest);
        cond_mass += weights[x];
        slice.push(weights[x]);
        column.push(m.channel().prob(x, y));
    }
    if cond_mass <= 0.0 {
        return Err(Error::ZeroProbabilityConditioning(format!(
            "remaining entries {:?} have probability zero",
            d_minus_i
        )));
    }
    let mut py = 0.0f64;
    let mut max_row = 0.0f64;
    for d in 0..k {
        py += slice[d] / cond_mass * column[d];
        max_row = max_row.max(column[d]);
    }
    if py <= 0.0 || max_row <= 0.0 {
        return Ok(0.0);
    }
    Ok((max_row.ln() - py.ln()).max(0.0))
}

/// Which concentrated prior to build.
#[derive(Debug, Clone)]
pub enum AdversarialConstruction {
    /// Product prior with mass `1 - eps` on a target value per entry.
    ProductTarget { target: Vec<usize> },
    /// Per-entry prior concentrated on the entry value minimizing the
    /// mechanism's likelihood of output `y` with the other entries fixed.
    ConditionalEntry {
        i: usize,
        rest: Vec<usize>,
        y: usize,
    },
    /// Kernel over the remaining entries: concentrated on the likelihood
    /// argmax row for entry value `d` and the argmin row for `d_prime`,
    /// uniform for other entry values.
    CorrelatedEntry {
        i: usize,
        d: usize,
        d_prime: usize,
        y: usize,
    },
}

/// Result of an adversarial construction; the variant follows the
/// construction kind.
#[derive(Debug, Clone)]
pub enum AdversarialPrior {
    Product(DatabasePrior),
    EntryPmf(Pmf),
    Kernel(Channel),
}

/// Build one of the concentrated priors driving the supremum traces, with
/// concentration parameter `eps` strictly inside `(0, 1)`.
pub fn adversarial_prior(
    m: &DatabaseMechanism,
    construction: &AdversarialConstruction,
    eps: f64,
) -> Result<AdversarialPrior> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "concentration parameter {eps} outside (0, 1)"
        )));
    }
    let schema = m.schema();
    let k = schema.entry_count();
    match construction {
        AdversarialConstruction::ProductTarget { target } => {
            if target.len() != schema.n() {
                return Err(Error::DimensionMismatch(format!(
                    "{} target values for {} entries",
                    target.len(),
                    schema.n()
                )));
            }
            let entries: Vec<Pmf> = target
                .iter()
                .map(|&d| {
                    if d >= k {
                        return Err(Error::InvalidParameter(format!(
                            "target value index {d} outside alphabet of size {k}"
                        )));
                    }
                    Pmf::concentrated(schema.entry_alphabet().to_vec(), d, eps)
                })
                .collect::<Result<_>>()?;
            Ok(AdversarialPrior::Product(DatabasePrior::product(
                schema, entries,
            )?))
        }
        AdversarialConstruction::ConditionalEntry { i, rest, y } => {
            if *i >= schema.n() || *y >= m.output_len() {
                return Err(Error::InvalidParameter(
                    "entry or output index out of range".into(),
                ));
            }
            let rest_idx = schema.rest_index(rest)?;
            let column: Vec<f64> = (0..k)
                .map(|d| m.channel().prob(schema.compose(*i, d, rest_idx), *y))
                .collect();
            let target = argmin_by_label(&column, schema.entry_alphabet());
            Ok(AdversarialPrior::EntryPmf(Pmf::concentrated(
                schema.entry_alphabet().to_vec(),
                target,
                eps,
            )?))
        }
        AdversarialConstruction::CorrelatedEntry { i, d, d_prime, y } => {
            if *i >= schema.n() || *y >= m.output_len() {
                return Err(Error::InvalidParameter(
                    "entry or output index out of range".into(),
                ));
            }
            if *d >= k || *d_prime >= k || d == d_prime {
                return Err(Error::InvalidParameter(
                    "correlated construction needs two distinct entry values".into(),
                ));
            }
            let rest_labels = schema.rest_labels(*i);
            let col = |dd: usize| -> Vec<f64> {
                (0..schema.rest_count())
                    .map(|rest| m.channel().prob(schema.compose(*i, dd, rest), *y))
                    .collect()
            };
            let amax = argmax_by_label(&col(*d), &rest_labels);
            let amin = argmin_by_label(&col(*d_prime), &rest_labels);
            let mut rows = Vec::with_capacity(k);
            for dd in 0..k {
                let row = if dd == *d {
                    Pmf::concentrated(rest_labels.clone(), amax, eps)?
                } else if dd == *d_prime {
                    Pmf::concentrated(rest_labels.clone(), amin, eps)?
                } else {
                    Pmf::uniform(rest_labels.clone())?
                };
                rows.push(row.probs().to_vec());
            }
            Ok(AdversarialPrior::Kernel(Channel::new(
                schema.entry_alphabet().to_vec(),
                rest_labels,
                rows,
            )?))
        }
    }
}

/// The six supremum formulations whose limits recover the privacy
/// parameters. Identifier strings are the stable names used by the
/// command-line interface and reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formulation {
    /// Per-entry leakage conditioned on the remaining entries, suprema over
    /// unrestricted per-entry priors.
    ConditionalEntryUnrestricted,
    /// Same conditional quantity evaluated through product database priors.
    ConditionalEntryProduct,
    /// Unconditioned per-entry leakage over product priors.
    EntryProduct,
    /// Whole-database leakage over unrestricted full-support priors.
    JointUnrestricted,
    /// Whole-database leakage over product priors.
    JointProduct,
    /// Per-entry leakage over correlated (non-product) priors.
    EntryUnrestricted,
}

impl Formulation {
    pub const ALL: [Formulation; 6] = [
        Formulation::ConditionalEntryUnrestricted,
        Formulation::ConditionalEntryProduct,
        Formulation::EntryProduct,
        Formulation::JointUnrestricted,
        Formulation::JointProduct,
        Formulation::EntryUnrestricted,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Formulation::ConditionalEntryUnrestricted => "4.2-1",
            Formulation::ConditionalEntryProduct => "4.2-2",
            Formulation::EntryProduct => "4.2-3",
            Formulation::JointUnrestricted => "4.5-1",
            Formulation::JointProduct => "4.5-2",
            Formulation::EntryUnrestricted => "4.5-3",
        }
    }

    pub fn from_id(id: &str) -> Option<Formulation> {
        Formulation::ALL.iter().copied().find(|f| f.id() == id)
    }

    /// True when the trace converges to the differential-privacy parameter;
    /// the remaining formulations converge to the free-lunch parameter.
    pub fn targets_dp(self) -> bool {
        matches!(
            self,
            Formulation::ConditionalEntryUnrestricted
                | Formulation::ConditionalEntryProduct
                | Formulation::EntryProduct
        )
    }
}

/// One evaluated point of a supremum trace.
#[derive(Debug, Clone, Copy)]
pub struct TracePoint {
    pub construction_eps: f64,
    pub value: f64,
}

/// Supremum trace along a decreasing concentration sequence; the limit
/// estimate is the final (most concentrated) value.
#[derive(Debug, Clone)]
pub struct SupremumTrace {
    pub formulation: Formulation,
    pub points: Vec<TracePoint>,
    pub limit_estimate: f64,
}

fn check_eps_sequence(eps_sequence: &[f64]) -> Result<()> {
    if eps_sequence.is_empty() {
        return Err(Error::InvalidParameter(
            "concentration sequence must be nonempty".into(),
        ));
    }
    for &e in eps_sequence {
        if !(e > 0.0 && e < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "concentration parameter {e} outside (0, 1)"
            )));
        }
    }
    for pair in eps_sequence.windows(2) {
        if pair[1] >= pair[0] {
            return Err(Error::InvalidParameter(
                "concentration sequence must be strictly decreasing".into(),
            ));
        }
    }
    Ok(())
}

fn concentrated_probs(k: usize, target: usize, eps: f64) -> Vec<f64> {
    Pmf::concentrated(
        (0..k).map(|i| i.to_string()).collect(),
        target,
        eps,
    )
    .expect("valid concentration")
    .probs()
    .to_vec()
}

/// Best candidate value for one formulation at one concentration parameter.
fn formulation_value(m: &DatabaseMechanism, f: Formulation, eps: f64) -> f64 {
    let schema = m.schema();
    let c = m.channel();
    let k = schema.entry_count();
    let n = schema.n();
    let mut best = 0.0f64;
    match f {
        Formulation::ConditionalEntryUnrestricted => {
            for i in 0..n {
                for rest in 0..schema.rest_count() {
                    for y in 0..c.output_len() {
                        let column: Vec<f64> = (0..k)
                            .map(|d| c.prob(schema.compose(i, d, rest), y))
                            .collect();
                        let mx = column.iter().fold(0.0f64, |a, &v| a.max(v));
                        if mx <= 0.0 {
                            continue;
                        }
                        let target = argmin_by_label(&column, schema.entry_alphabet());
                        let q = concentrated_probs(k, target, eps);
                        let py: f64 = q.iter().zip(&column).map(|(a, b)| a * b).sum();
                        if py <= 0.0 {
                            continue;
                        }
                        best = best.max((mx.ln() - py.ln()).max(0.0));
                    }
                }
            }
        }
        Formulation::ConditionalEntryProduct => {
            for i in 0..n {
                for rest in 0..schema.rest_count() {
                    let rest_digits = schema.rest_digits(rest);
                    for y in 0..c.output_len() {
                        let column: Vec<f64> = (0..k)
                            .map(|d| c.prob(schema.compose(i, d, rest), y))
                            .collect();
                        if column.iter().all(|&v| v <= 0.0) {
                            continue;
                        }
                        let target = argmin_by_label(&column, schema.entry_alphabet());
                        let prior = product_prior_with_entry(schema, i, target, eps);
                        let v = conditional_entry_pml(m, &prior, i, &rest_digits, y)
                            .expect("constructed prior is valid");
                        best = best.max(v);
                    }
                }
            }
        }
        Formulation::EntryProduct => {
            for i in 0..n {
                let rest_labels = schema.rest_labels(i);
                for y in 0..c.output_len() {
                    let mut targets: Vec<usize> = Vec::new();
                    for d in 0..k {
                        for d2 in 0..k {
                            if d == d2 {
                                continue;
                            }
                            let mut found: Option<(f64, usize)> = None;
                            for rest in 0..schema.rest_count() {
                                let num = c.prob(schema.compose(i, d, rest), y);
                                if num <= SUPPORT_FLOOR {
                                    continue;
                                }
                                let den = c.prob(schema.compose(i, d2, rest), y);
                                let ratio = if den <= SUPPORT_FLOOR {
                                    f64::INFINITY
                                } else {
                                    num / den
                                };
                                let take = match found {
                                    None => true,
                                    Some((r, at)) => {
                                        ratio > r
                                            || (ratio == r
                                                && rest_labels[rest] < rest_labels[at])
                                    }
                                };
                                if take {
                                    found = Some((ratio, rest));
                                }
                            }
                            if let Some((_, rest)) = found {
                                if !targets.contains(&rest) {
                                    targets.push(rest);
                                }
                            }
                        }
                    }
                    for &t in &targets {
                        let rest_digits = schema.rest_digits(t);
                        let mut entries = Vec::with_capacity(n);
                        let mut rj = 0usize;
                        for pos in 0..n {
                            if pos == i {
                                // Placeholder; replaced once the induced
                                // per-entry likelihoods are known.
                                entries.push(
                                    Pmf::uniform(schema.entry_alphabet().to_vec()).unwrap(),
                                );
                            } else {
                                entries.push(
                                    Pmf::concentrated(
                                        schema.entry_alphabet().to_vec(),
                                        rest_digits[rj],
                                        eps,
                                    )
                                    .unwrap(),
                                );
                                rj += 1;
                            }
                        }
                        let rest_weights: Vec<f64> = (0..schema.rest_count())
                            .map(|rest| {
                                let digits = schema.rest_digits(rest);
                                let mut w = 1.0f64;
                                let mut rr = 0usize;
                                for (pos, entry) in entries.iter().enumerate() {
                                    if pos == i {
                                        continue;
                                    }
                                    w *= entry.prob(digits[rr]);
                                    rr += 1;
                                }
                                w
                            })
                            .collect();
                        let induced: Vec<f64> = (0..k)
                            .map(|d| {
                                (0..schema.rest_count())
                                    .map(|rest| {
                                        rest_weights[rest]
                                            * c.prob(schema.compose(i, d, rest), y)
                                    })
                                    .sum()
                            })
                            .collect();
                        let target = argmin_by_label(&induced, schema.entry_alphabet());
                        entries[i] = Pmf::concentrated(
                            schema.entry_alphabet().to_vec(),
                            target,
                            eps,
                        )
                        .unwrap();
                        let prior = DatabasePrior::product(schema, entries)
                            .expect("constructed prior is valid");
                        let v = entry_pml(m, &prior, i, y).expect("valid indices");
                        best = best.max(v);
                    }
                }
            }
        }
        Formulation::JointUnrestricted => {
            for y in 0..c.output_len() {
                let column: Vec<f64> =
                    (0..c.input_len()).map(|x| c.prob(x, y)).collect();
                if column.iter().all(|&v| v <= 0.0) {
                    continue;
                }
                let target = argmin_by_label(&column, schema.database_labels());
                let pmf = Pmf::concentrated(
                    schema.database_labels().to_vec(),
                    target,
                    eps,
                )
                .unwrap();
                let prior = DatabasePrior::explicit(schema, pmf)
                    .expect("concentrated prior has full support");
                let v = database_pml(m, &prior, y).expect("valid index");
                best = best.max(v);
            }
        }
        Formulation::JointProduct => {
            for y in 0..c.output_len() {
                let column: Vec<f64> =
                    (0..c.input_len()).map(|x| c.prob(x, y)).collect();
                if column.iter().all(|&v| v <= 0.0) {
                    continue;
                }
                let target = argmin_by_label(&column, schema.database_labels());
                let digits = schema.entries_of(target);
                let entries: Vec<Pmf> = digits
                    .iter()
                    .map(|&d| {
                        Pmf::concentrated(schema.entry_alphabet().to_vec(), d, eps).unwrap()
                    })
                    .collect();
                let prior = DatabasePrior::product(schema, entries)
                    .expect("constructed prior is valid");
                let v = database_pml(m, &prior, y).expect("valid index");
                best = best.max(v);
            }
        }
        Formulation::EntryUnrestricted => {
            for i in 0..n {
                for y in 0..c.output_len() {
                    for d in 0..k {
                        for d2 in 0..k {
                            if d == d2 {
                                continue;
                            }
                            let kernel = match adversarial_prior(
                                m,
                                &AdversarialConstruction::CorrelatedEntry {
                                    i,
                                    d,
                                    d_prime: d2,
                                    y,
                                },
                                eps,
                            ) {
                                Ok(AdversarialPrior::Kernel(kernel)) => kernel,
                                _ => unreachable!("correlated construction yields a kernel"),
                            };
                            let induced: Vec<f64> = (0..k)
                                .map(|dd| {
                                    (0..schema.rest_count())
                                        .map(|rest| {
                                            kernel.prob(dd, rest)
                                                * c.prob(schema.compose(i, dd, rest), y)
                                        })
                                        .sum()
                                })
                                .collect();
                            let target =
                                argmin_by_label(&induced, schema.entry_alphabet());
                            let q = concentrated_probs(k, target, eps);
                            let mut weights = vec![0.0f64; schema.database_count()];
                            for dd in 0..k {
                                for rest in 0..schema.rest_count() {
                                    weights[schema.compose(i, dd, rest)] =
                                        q[dd] * kernel.prob(dd, rest);
                                }
                            }
                            let pmf = Pmf::new(
                                schema.database_labels().to_vec(),
                                weights,
                            )
                            .expect("kernel weights form a valid pmf");
                            let prior = DatabasePrior::explicit(schema, pmf)
                                .expect("kernel prior has full support");
                            let v = entry_pml(m, &prior, i, y).expect("valid indices");
                            best = best.max(v);
                        }
                    }
                }
            }
        }
    }
    best
}

fn product_prior_with_entry(
    schema: &DatabaseSchema,
    i: usize,
    target: usize,
    eps: f64,
) -> DatabasePrior {
    let entries: Vec<Pmf> = (0..schema.n())
        .map(|pos| {
            if pos == i {
                Pmf::concentrated(schema.entry_alphabet().to_vec(), target, eps).unwrap()
            } else {
                Pmf::uniform(schema.entry_alphabet().to_vec()).unwrap()
            }
        })
        .collect();
    DatabasePrior::product(schema, entries).expect("constructed prior is valid")
}

/// Evaluate one formulation's supremum along a strictly decreasing
/// concentration sequence.
pub fn pml_supremum(
    m: &DatabaseMechanism,
    formulation: Formulation,
    eps_sequence: &[f64],
) -> Result<SupremumTrace> {
    check_eps_sequence(eps_sequence)?;
    let values = par_map(eps_sequence, |&e| formulation_value(m, formulation, e));
    let points: Vec<TracePoint> = eps_sequence
        .iter()
        .zip(&values)
        .map(|(&construction_eps, &value)| TracePoint {
            construction_eps,
            value,
        })
        .collect();
    let limit_estimate = points.last().unwrap().value;
    Ok(SupremumTrace {
        formulation,
        points,
        limit_estimate,
    })
}

/// Verdict for one formulation's trace against its closed-form target.
#[derive(Debug, Clone)]
pub struct FormulationReport {
    pub trace: SupremumTrace,
    pub target: f64,
    /// `target - limit_estimate`; infinite when the target is unbounded.
    pub gap: f64,
    pub monotone: bool,
    /// Every trace value sits strictly below a finite target; vacuously true
    /// for unbounded targets.
    pub strictly_below: bool,
    pub passed: bool,
}

/// Joint verdict for all six formulations of one mechanism.
#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub dp_epsilon: f64,
    pub free_lunch_epsilon: f64,
    /// Set when the privacy parameters are infinite; traces are then
    /// required to diverge upward instead of closing a gap.
    pub unbounded: bool,
    pub rows_identical: bool,
    pub tolerance: f64,
    pub formulations: Vec<FormulationReport>,
    pub all_passed: bool,
}

/// Compute both privacy parameters and all six supremum traces with the
/// default concentration sequence; a formulation passes when its trace is
/// monotone and lands within `tolerance` of the target (or keeps growing
/// when the target is infinite).
pub fn verify_equivalences(m: &DatabaseMechanism, tolerance: f64) -> Result<EquivalenceReport> {
    verify_equivalences_with(m, tolerance, &DEFAULT_CONSTRUCTION_EPS)
}

/// [`verify_equivalences`] with an explicit concentration sequence.
pub fn verify_equivalences_with(
    m: &DatabaseMechanism,
    tolerance: f64,
    eps_sequence: &[f64],
) -> Result<EquivalenceReport> {
    if !(tolerance > 0.0 && tolerance.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "tolerance {tolerance} must be positive and finite"
        )));
    }
    check_eps_sequence(eps_sequence)?;
    let dp = dp_epsilon(m);
    let flp = free_lunch_epsilon(m);
    let tasks: Vec<(usize, f64)> = (0..Formulation::ALL.len())
        .flat_map(|fi| eps_sequence.iter().map(move |&e| (fi, e)))
        .collect();
    let values = par_map(&tasks, |&(fi, e)| {
        formulation_value(m, Formulation::ALL[fi], e)
    });
    let mut formulations = Vec::with_capacity(Formulation::ALL.len());
    for (fi, chunk) in values.chunks(eps_sequence.len()).enumerate() {
        let formulation = Formulation::ALL[fi];
        let points: Vec<TracePoint> = eps_sequence
            .iter()
            .zip(chunk)
            .map(|(&construction_eps, &value)| TracePoint {
                construction_eps,
                value,
            })
            .collect();
        let limit_estimate = points.last().unwrap().value;
        let target = if formulation.targets_dp() { dp } else { flp };
        let monotone = points
            .windows(2)
            .all(|w| w[1].value >= w[0].value - MONOTONE_SLACK);
        let strictly_below = if target.is_finite() {
            points.iter().all(|p| p.value < target)
        } else {
            true
        };
        let gap = target - limit_estimate;
        let passed = if target.is_finite() {
            monotone && gap.abs() <= tolerance
        } else {
            monotone && points.last().unwrap().value > points[0].value
        };
        formulations.push(FormulationReport {
            trace: SupremumTrace {
                formulation,
                points,
                limit_estimate,
            },
            target,
            gap,
            monotone,
            strictly_below,
            passed,
        });
    }
    let all_passed = formulations.iter().all(|f| f.passed);
    Ok(EquivalenceReport {
        dp_epsilon: dp,
        free_lunch_epsilon: flp,
        unbounded: dp.is_infinite() || flp.is_infinite(),
        rows_identical: m.rows_identical(),
        tolerance,
        formulations,
        all_passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn binary_schema(n: usize) -> DatabaseSchema {
        DatabaseSchema::new(labels(&["0", "1"]), n).unwrap()
    }

    /// Output depends on entry 1 only, through a 0.75/0.25 flip.
    fn flip_on_first(n: usize) -> DatabaseMechanism {
        let schema = binary_schema(n);
        let rows: Vec<Vec<f64>> = (0..schema.database_count())
            .map(|x| {
                if schema.digit(x, 0) == 0 {
                    vec![0.75, 0.25]
                } else {
                    vec![0.25, 0.75]
                }
            })
            .collect();
        DatabaseMechanism::from_rows(schema, labels(&["0", "1"]), rows).unwrap()
    }

    fn uniform_product(schema: &DatabaseSchema) -> DatabasePrior {
        let entries =
            vec![Pmf::uniform(schema.entry_alphabet().to_vec()).unwrap(); schema.n()];
        DatabasePrior::product(schema, entries).unwrap()
    }

    #[test]
    fn schema_enumeration_is_row_major() {
        let schema = binary_schema(2);
        assert_eq!(schema.database_labels(), &["00", "01", "10", "11"]);
        assert_eq!(schema.digit(2, 0), 1);
        assert_eq!(schema.digit(2, 1), 0);
        assert_eq!(schema.entries_of(3), vec![1, 1]);
        assert_eq!(schema.index_of(&[1, 0]).unwrap(), 2);
        // Entry 0 fixed to 1, remaining entry (position 1) set to 0.
        assert_eq!(schema.compose(0, 1, 0), 2);
        assert_eq!(schema.compose(1, 1, 1), 3);
        assert_eq!(schema.rest_label(0, 1), "1");
        let wide = DatabaseSchema::new(labels(&["lo", "hi"]), 2).unwrap();
        assert_eq!(wide.database_labels()[1], "lo,hi");
    }

    #[test]
    fn schema_guards() {
        assert!(matches!(
            DatabaseSchema::new(labels(&["0", "1"]), 13),
            Err(Error::DomainTooLarge { .. })
        ));
        assert!(DatabaseSchema::new(labels(&["0"]), 2).is_err());
        assert!(DatabaseSchema::new(labels(&["a,b", "c"]), 1).is_err());
    }

    #[test]
    fn single_entry_dp_is_capacity() {
        let m = flip_on_first(1);
        assert!((dp_epsilon(&m) - 3.0f64.ln()).abs() < 1e-15);
        assert!((free_lunch_epsilon(&m) - 3.0f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn two_entry_flip_parameters() {
        let m = flip_on_first(2);
        assert!((dp_epsilon(&m) - 3.0f64.ln()).abs() < 1e-15);
        assert!((free_lunch_epsilon(&m) - 3.0f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn xor_mechanism_parameters() {
        let schema = binary_schema(2);
        let rows: Vec<Vec<f64>> = (0..4)
            .map(|x| {
                if schema.digit(x, 0) ^ schema.digit(x, 1) == 0 {
                    vec![0.75, 0.25]
                } else {
                    vec![0.25, 0.75]
                }
            })
            .collect();
        let m = DatabaseMechanism::from_rows(schema, labels(&["0", "1"]), rows).unwrap();
        assert!((dp_epsilon(&m) - 3.0f64.ln()).abs() < 1e-15);
        assert!((free_lunch_epsilon(&m) - 3.0f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn constant_mechanism_has_zero_parameters() {
        let schema = binary_schema(2);
        let rows = vec![vec![0.5, 0.5]; 4];
        let m = DatabaseMechanism::from_rows(schema, labels(&["0", "1"]), rows).unwrap();
        assert_eq!(dp_epsilon(&m), 0.0);
        assert_eq!(free_lunch_epsilon(&m), 0.0);
    }

    #[test]
    fn zero_opposite_positive_is_unbounded() {
        let schema = binary_schema(1);
        let rows = vec![vec![1.0, 0.0], vec![0.5, 0.5]];
        let m = DatabaseMechanism::from_rows(schema, labels(&["0", "1"]), rows).unwrap();
        assert_eq!(dp_epsilon(&m), f64::INFINITY);
    }

    #[test]
    fn entry_pml_uniform_product() {
        let m = flip_on_first(2);
        let prior = uniform_product(m.schema());
        for y in 0..2 {
            let about_first = entry_pml(&m, &prior, 0, y).unwrap();
            assert!((about_first - 1.5f64.ln()).abs() < 1e-12);
            let about_second = entry_pml(&m, &prior, 1, y).unwrap();
            assert!(about_second.abs() < 1e-12);
        }
    }

    #[test]
    fn correlation_leaks_about_untouched_entry() {
        let m = flip_on_first(2);
        let correlated = DatabasePrior::explicit(
            m.schema(),
            Pmf::new(
                m.schema().database_labels().to_vec(),
                vec![0.49, 0.01, 0.01, 0.49],
            )
            .unwrap(),
        )
        .unwrap();
        let v = entry_pml(&m, &correlated, 1, 0).unwrap();
        assert!((v - 1.48f64.ln()).abs() < 1e-12);
        // Independence gives zero; correlation strictly beats it but can
        // never exceed the entry's own worst-case leakage.
        let independent = entry_pml(&m, &uniform_product(m.schema()), 1, 0).unwrap();
        assert!(v > independent);
        assert!(v <= 2.0f64.ln() + 1e-12);
    }

    #[test]
    fn conditional_entry_matches_single_entry_case() {
        let m = flip_on_first(2);
        let prior = uniform_product(m.schema());
        for rest in 0..2 {
            for y in 0..2 {
                let v = conditional_entry_pml(&m, &prior, 0, &[rest], y).unwrap();
                assert!((v - 1.5f64.ln()).abs() < 1e-12);
                let w = conditional_entry_pml(&m, &prior, 1, &[rest], y).unwrap();
                assert!(w.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn product_target_masses() {
        let m = flip_on_first(2);
        let built = adversarial_prior(
            &m,
            &AdversarialConstruction::ProductTarget { target: vec![1, 1] },
            0.1,
        )
        .unwrap();
        let prior = match built {
            AdversarialPrior::Product(p) => p,
            _ => panic!("product construction yields a product prior"),
        };
        let expected = [0.01, 0.09, 0.09, 0.81];
        for (w, e) in prior.weights(m.schema()).iter().zip(expected) {
            assert!((w - e).abs() < 1e-15);
        }
    }

    #[test]
    fn conditional_entry_construction_picks_argmin_row() {
        let m = flip_on_first(2);
        let built = adversarial_prior(
            &m,
            &AdversarialConstruction::ConditionalEntry {
                i: 0,
                rest: vec![0],
                y: 0,
            },
            0.1,
        )
        .unwrap();
        let pmf = match built {
            AdversarialPrior::EntryPmf(p) => p,
            _ => panic!("conditional construction yields a per-entry pmf"),
        };
        // p(y=0 | d_1) is minimized at d_1 = 1.
        assert!((pmf.prob(0) - 0.1).abs() < 1e-15);
        assert!((pmf.prob(1) - 0.9).abs() < 1e-15);
    }

    #[test]
    fn prior_constructors_reject_bad_input() {
        let schema = binary_schema(2);
        let degenerate = Pmf::new(
            schema.database_labels().to_vec(),
            vec![0.5, 0.5, 0.0, 0.0],
        )
        .unwrap();
        assert!(matches!(
            DatabasePrior::explicit(&schema, degenerate),
            Err(Error::DegenerateSupport(_))
        ));
        let short = vec![Pmf::uniform(schema.entry_alphabet().to_vec()).unwrap()];
        assert!(DatabasePrior::product(&schema, short).is_err());
    }

    #[test]
    fn equivalences_on_the_flip_instance() {
        let m = flip_on_first(2);
        let report = verify_equivalences(&m, 1e-4).unwrap();
        assert!((report.dp_epsilon - 3.0f64.ln()).abs() < 1e-12);
        assert!((report.free_lunch_epsilon - 3.0f64.ln()).abs() < 1e-12);
        assert!(!report.unbounded);
        assert!(report.all_passed);
        for f in &report.formulations {
            assert!(f.monotone);
            assert!(f.strictly_below);
            assert!(f.gap.abs() <= 1e-4);
            assert!(f.trace.limit_estimate <= f.target);
        }
    }

    #[test]
    fn equivalences_on_the_constant_instance() {
        let schema = binary_schema(2);
        let rows = vec![vec![0.5, 0.5]; 4];
        let m = DatabaseMechanism::from_rows(schema, labels(&["0", "1"]), rows).unwrap();
        let report = verify_equivalences(&m, 1e-12).unwrap();
        assert_eq!(report.dp_epsilon, 0.0);
        assert!(report.rows_identical);
        assert!(report.all_passed);
        for f in &report.formulations {
            assert_eq!(f.trace.limit_estimate, 0.0);
        }
    }

    #[test]
    fn equivalences_diverge_on_unbounded_instance() {
        let schema = binary_schema(1);
        let rows = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let m = DatabaseMechanism::from_rows(schema, labels(&["0", "1"]), rows).unwrap();
        let report = verify_equivalences(&m, 1e-4).unwrap();
        assert!(report.unbounded);
        assert!(report.all_passed);
        for f in &report.formulations {
            let first = f.trace.points.first().unwrap().value;
            let last = f.trace.points.last().unwrap().value;
            assert!(last > first);
            assert!(f.gap.is_infinite());
        }
    }

    #[test]
    fn supremum_trace_converges_for_each_formulation() {
        let m = flip_on_first(2);
        for f in Formulation::ALL {
            let trace = pml_supremum(&m, f, &DEFAULT_CONSTRUCTION_EPS).unwrap();
            assert!((trace.limit_estimate - 3.0f64.ln()).abs() < 1e-4, "{}", f.id());
            for w in trace.points.windows(2) {
                assert!(w[1].value >= w[0].value - 1e-12);
            }
        }
    }

    #[test]
    fn formulation_ids_round_trip() {
        for f in Formulation::ALL {
            assert_eq!(Formulation::from_id(f.id()), Some(f));
        }
        assert_eq!(Formulation::from_id("nope"), None);
    }

    #[test]
    fn eps_sequence_validation() {
        let m = flip_on_first(1);
        assert!(pml_supremum(&m, Formulation::JointUnrestricted, &[]).is_err());
        assert!(pml_supremum(&m, Formulation::JointUnrestricted, &[0.1, 0.1]).is_err());
        assert!(pml_supremum(&m, Formulation::JointUnrestricted, &[0.1, 1.5]).is_err());
    }
}
