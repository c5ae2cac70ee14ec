//! Seeded inputs shared by the benchmarks.

use std::sync::Arc;

use netdyn_core::corpus::{random_model, standard_signature};
use netdyn_core::{Formula, LinkMode, Model, Params, Rational, Signature, Update};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn half() -> Rational {
    Rational::new(1, 2).expect("valid")
}

/// A random literal-mode model with ω = τ = 1/2.
pub fn model(agents: usize, features: usize, seed: u64) -> Model {
    let sig = standard_signature(agents, features);
    let params = Params::new(half(), half(), LinkMode::Literal).expect("valid");
    random_model(&mut ChaCha8Rng::seed_from_u64(seed), &sig, params, 0.3, 0.4)
}

/// `count` models of one shape.
pub fn models(agents: usize, features: usize, count: usize) -> Vec<Model> {
    (0..count as u64)
        .map(|s| model(agents, features, s))
        .collect()
}

/// `[sync]^depth pressure(a,f)`, the worst case for reduction.
pub fn nested_pressure(sig: &Arc<Signature>, depth: usize) -> Formula {
    let a = sig.agents()[0].clone();
    let f = sig.features()[0].clone();
    (0..depth).fold(Formula::Pressure(a, f), |acc, _| {
        Formula::after(Update::Sync, acc)
    })
}
