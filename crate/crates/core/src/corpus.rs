//! Enumeration and sampling of models over a fixed signature.

use std::sync::Arc;

use rand::Rng;

use crate::model::{AgentId, FeatureId, LinkMode, Model, Params, Signature};

/// Agents `a, b, c, …` and features `f, g, h, …`; names get a numeric
/// suffix once the alphabet runs out.
pub fn standard_signature(agents: usize, features: usize) -> Arc<Signature> {
    let agent_names: Vec<AgentId> = (0..agents)
        .map(|i| {
            let name = if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("a{i}")
            };
            AgentId::new(&name).expect("valid name")
        })
        .collect();
    let feature_names: Vec<FeatureId> = (0..features)
        .map(|i| {
            let name = if i < 21 {
                ((b'f' + i as u8) as char).to_string()
            } else {
                format!("f{i}")
            };
            FeatureId::new(&name).expect("valid name")
        })
        .collect();
    Arc::new(Signature::new(agent_names, feature_names).expect("non-empty signature"))
}

/// Number of free bits in a model: one per admissible ordered pair and one
/// per (agent, feature).
pub fn model_bits(sig: &Signature, mode: LinkMode) -> usize {
    let n = sig.agent_count();
    let pairs = match mode {
        LinkMode::Literal => n * n,
        LinkMode::Irreflexive => n * (n - 1),
    };
    pairs + n * sig.feature_count()
}

/// Decodes a model from a little-endian bit vector of length
/// [`model_bits`]: admissible pairs first (row-major), then the valuation.
pub fn model_from_bits(sig: &Arc<Signature>, params: Params, bits: &[bool]) -> Model {
    let n = sig.agent_count();
    let mut influence = vec![false; n * n];
    let mut it = bits.iter().copied();
    for i in 0..n {
        for j in 0..n {
            if params.mode().allows_pair(i, j) {
                influence[i * n + j] = it.next().expect("enough bits");
            }
        }
    }
    let valuation: Vec<bool> = it.collect();
    Model::from_matrices(sig.clone(), params, influence, valuation).expect("well-formed bits")
}

fn bits_of(code: u64, len: usize) -> Vec<bool> {
    (0..len).map(|i| code >> i & 1 == 1).collect()
}

/// Every model over `sig` with the given parameters, in code order.
///
/// Panics if the signature has more than 40 free bits.
pub fn all_models(sig: Arc<Signature>, params: Params) -> impl Iterator<Item = Model> {
    let len = model_bits(&sig, params.mode());
    assert!(len <= 40, "exhaustive enumeration limited to 40 bits");
    (0..1u64 << len).map(move |code| model_from_bits(&sig, params, &bits_of(code, len)))
}

/// A model with each link present with probability `edge_p` and each
/// feature with probability `feature_p`.
pub fn random_model<R: Rng + ?Sized>(
    rng: &mut R,
    sig: &Arc<Signature>,
    params: Params,
    edge_p: f64,
    feature_p: f64,
) -> Model {
    let n = sig.agent_count();
    let pairs = model_bits(sig, params.mode()) - n * sig.feature_count();
    let mut bits: Vec<bool> = (0..pairs).map(|_| rng.gen_bool(edge_p)).collect();
    bits.extend((0..n * sig.feature_count()).map(|_| rng.gen_bool(feature_p)));
    model_from_bits(sig, params, &bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;

    #[test]
    fn names() {
        let sig = standard_signature(3, 3);
        let a: Vec<&str> = sig.agents().iter().map(|a| a.as_str()).collect();
        let f: Vec<&str> = sig.features().iter().map(|f| f.as_str()).collect();
        assert_eq!(a, ["a", "b", "c"]);
        assert_eq!(f, ["f", "g", "h"]);
    }

    #[test]
    fn enumeration_is_complete_and_distinct() {
        let sig = standard_signature(2, 1);
        let half = Rational::new(1, 2).unwrap();
        for mode in [LinkMode::Literal, LinkMode::Irreflexive] {
            let params = Params::new(half, half, mode).unwrap();
            let models: Vec<Model> = all_models(sig.clone(), params).collect();
            let expected = 1usize << model_bits(&sig, mode);
            assert_eq!(models.len(), expected);
            let distinct: std::collections::HashSet<_> = models.iter().cloned().collect();
            assert_eq!(distinct.len(), expected);
        }
    }
}
