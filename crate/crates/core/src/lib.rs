//! Model checking for threshold opinion diffusion over a network that
//! grows by similarity.
//!
//! A [`Model`] pairs an influence graph with a valuation of binary
//! features. Three updates act on it: diffusion (`[diff]`, △) spreads
//! features along influence links, network formation (`[net]`, □) links
//! similar agents, and the synchronous update (`[sync]`, ○) does both from
//! the same starting state. Formulas over these updates are evaluated by
//! [`satisfies`], rewritten into the static fragment by [`reduce`], and the
//! question of when ○ can be simulated by △ and □ alone is answered by
//! [`find_replacement`].
//!
//! ```
//! use netdyn_core::{new_model, parse, satisfies, LinkMode, Params, Rational};
//!
//! let half = Rational::new(1, 2)?;
//! let m = new_model(
//!     ["a", "b"],
//!     ["f", "g"],
//!     [("a", "b")],
//!     [("a", ["f"])],
//!     Params::new(half, half, LinkMode::Literal)?,
//! )?;
//! assert!(satisfies(&m, &parse("[diff] has(b,f)")?)?);
//! # Ok::<(), netdyn_core::Error>(())
//! ```

pub mod corpus;
pub mod error;
pub mod eval;
pub mod formula;
pub mod io;
pub mod model;
pub mod rational;
pub mod reduce;
pub mod replace;
pub mod sequence;

pub use error::{Error, Result};
pub use eval::{
    atomic_agreement, atoms, first_difference, satisfies, sequences_equivalent, EquivalenceReport,
    Evaluator,
};
pub use formula::{
    expand_macros, expand_pressure, expand_similarity, parse, psi_formula, Formula, PsiKind,
};
pub use io::{export_dot, load_model, model_from_json, model_to_json, save_model, ModelDocument};
pub use model::{new_model, AgentId, FeatureId, LinkMode, Model, Params, Signature};
pub use rational::Rational;
pub use reduce::{is_static, reduce, reduce_with, RewriteStep, RewriteTrace, Rule};
pub use replace::{
    brute_force_replaceable, check_psi, classify_sequence, find_replacement,
    find_replacement_multi, search_irreplaceable, ProofFacts, PsiSuite, ReplaceabilityVerdict,
    SearchConfig, SearchStrategy, Witness,
};
pub use sequence::{Update, UpdateSequence};
