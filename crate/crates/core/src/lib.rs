//! Pointwise maximal leakage (PML) for finite-alphabet mechanisms.
//!
//! A mechanism is a stochastic channel from a secret `X` to an observable
//! `Y`. The pointwise maximal leakage of an outcome `y` measures, in nats,
//! the largest multiplicative gain any adversary can obtain about any
//! randomized function of `X` from observing that particular `y`. For finite
//! alphabets it reduces to the max-ratio between posterior and prior, which
//! is what this crate computes exactly; the randomized-function view is kept
//! around as a lower-bound search for cross-checking.
//!
//! On top of the per-outcome quantity the crate provides:
//!
//! * leakage capacity (the prior-free supremum) and `(ε, P)`-style
//!   certification over explicit or parametric prior families
//!   ([`leakage`]);
//! * database-indexed mechanisms with differential-privacy and free-lunch
//!   parameters, plus the adversarial prior constructions whose leakage
//!   traces converge to those parameters ([`database`]);
//! * disclosure detection (posterior min-entropy collapse), entropy floors,
//!   and the two constructions that exhibit tight instances ([`disclosure`]);
//! * closed-form leakage for canonical mechanisms: randomized response,
//!   deterministic threshold counting queries, and the Laplace counting
//!   query together with its brute-force oracle ([`mechanisms`]);
//! * a seeded instance sampler for randomized verification ([`sampling`]).
//!
//! All quantities are in nats. Probabilities at or below
//! [`prob::SUPPORT_FLOOR`] are treated as exact zeros when deciding support
//! membership, and every ratio is evaluated in the log domain.
//!
//! ```
//! use pml_core::prob::{Channel, Joint, Pmf};
//! use pml_core::leakage::{leakage_capacity, pml_profile};
//!
//! // Binary symmetric mechanism that reports the secret incorrectly 25% of
//! // the time, observed under a uniform prior.
//! let labels = vec!["0".to_string(), "1".to_string()];
//! let channel = Channel::new(
//!     labels.clone(),
//!     labels.clone(),
//!     vec![vec![0.75, 0.25], vec![0.25, 0.75]],
//! )
//! .unwrap();
//! let prior = Pmf::uniform(labels).unwrap();
//! let joint = Joint::new(channel.clone(), prior).unwrap();
//!
//! let profile = pml_profile(&joint);
//! assert!((profile.sup - 1.5f64.ln()).abs() < 1e-12);
//! assert!((leakage_capacity(&channel) - 3.0f64.ln()).abs() < 1e-12);
//! ```

pub mod database;
pub mod disclosure;
pub mod error;
pub mod leakage;
pub mod mechanisms;
pub(crate) mod par;
pub mod prob;
pub mod sampling;

pub use error::{Error, Result};
pub use prob::{Channel, Joint, Pmf};
