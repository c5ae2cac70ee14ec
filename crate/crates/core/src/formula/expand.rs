//! Syntactic expansion of the pressure, similarity and ψ abbreviations.
//!
//! Expansions are exponential (up to 3^|A| disjuncts for pressure, 2^|F|
//! for similarity), so the evaluator never calls them; they exist for
//! printing, for the reducer's `--expand` output and as test oracles.

use std::sync::Arc;

use super::{Formula, PsiKind};
use crate::error::Result;
use crate::model::{LinkMode, Params, Signature};
use crate::sequence::Update;

fn subsets(len: usize) -> impl Iterator<Item = u32> {
    0..(1u32 << len)
}

/// f^τ_N(a): some non-empty exact set N of influencers of `agent` and some
/// G ⊆ N of `feature` holders with |G|/|N| ≥ τ.
///
/// In irreflexive mode `agent` is never its own influencer, so N ranges over
/// the other agents only.
pub fn expand_pressure(
    agent: &str,
    feature: &str,
    sig: &Signature,
    params: &Params,
) -> Result<Formula> {
    let target = sig.agent_index(agent)?;
    let k = sig.feature_index(feature)?;
    let candidates: Vec<usize> = (0..sig.agent_count())
        .filter(|&b| params.mode().allows_pair(b, target))
        .collect();
    assert!(
        candidates.len() < 32,
        "pressure expansion limited to 31 agents"
    );
    let a = &sig.agents()[target];
    let f = &sig.features()[k];
    let mut disjuncts = Vec::new();
    for n_mask in subsets(candidates.len()).filter(|&m| m != 0) {
        let n_size = n_mask.count_ones() as usize;
        // all G ⊆ N, ascending
        let mut g_mask = 0u32;
        loop {
            g_mask = (g_mask.wrapping_sub(n_mask)) & n_mask;
            if params.tau().le_ratio(g_mask.count_ones() as usize, n_size) {
                let mut lits = Vec::new();
                for (i, &b) in candidates.iter().enumerate() {
                    let edge = Formula::Edge(sig.agents()[b].clone(), a.clone());
                    lits.push(if n_mask >> i & 1 == 1 {
                        edge
                    } else {
                        Formula::not(edge)
                    });
                }
                for (i, &b) in candidates.iter().enumerate() {
                    if g_mask >> i & 1 == 1 {
                        lits.push(Formula::Has(sig.agents()[b].clone(), f.clone()));
                    }
                }
                disjuncts.push(Formula::conj(lits));
            }
            if g_mask == n_mask {
                break;
            }
        }
    }
    Ok(Formula::disj(disjuncts))
}

/// sim^ω_ab: some E ⊆ F with |E|/|F| ≥ ω on which `a` and `b` agree.
pub fn expand_similarity(a: &str, b: &str, sig: &Signature, params: &Params) -> Result<Formula> {
    let i = sig.agent_index(a)?;
    let j = sig.agent_index(b)?;
    let m = sig.feature_count();
    assert!(m < 32, "similarity expansion limited to 31 features");
    let (a, b) = (&sig.agents()[i], &sig.agents()[j]);
    let disjuncts = subsets(m)
        .filter(|e| params.omega().le_ratio(e.count_ones() as usize, m))
        .map(|e| {
            Formula::conj((0..m).filter(|k| e >> k & 1 == 1).map(|k| {
                let f = &sig.features()[k];
                Formula::iff(
                    Formula::Has(a.clone(), f.clone()),
                    Formula::Has(b.clone(), f.clone()),
                )
            }))
        });
    Ok(Formula::disj(disjuncts))
}

/// The ψ condition for `kind`, with `sim`/`pressure` left as macro nodes.
pub fn psi_formula(kind: PsiKind, sig: &Signature, mode: LinkMode) -> Formula {
    let agents = sig.agents();
    let pairs = || {
        (0..agents.len()).flat_map(move |i| {
            (0..agents.len())
                .filter(move |&j| mode.allows_pair(i, j))
                .map(move |j| (agents[i].clone(), agents[j].clone()))
        })
    };
    let agent_features = || {
        agents
            .iter()
            .flat_map(|a| sig.features().iter().map(move |f| (a.clone(), f.clone())))
    };
    match kind {
        PsiKind::Diff => Formula::conj(pairs().map(|(a, b)| {
            Formula::or(
                Formula::Edge(a.clone(), b.clone()),
                Formula::not(Formula::Sim(a, b)),
            )
        })),
        PsiKind::Net => Formula::conj(agent_features().map(|(a, f)| {
            Formula::or(
                Formula::Has(a.clone(), f.clone()),
                Formula::not(Formula::Pressure(a, f)),
            )
        })),
        PsiKind::DiffNet => Formula::conj(pairs().map(|(a, b)| {
            let sim = Formula::Sim(a.clone(), b.clone());
            Formula::implies(
                Formula::not(Formula::Edge(a, b)),
                Formula::iff(sim.clone(), Formula::after(Update::Diff, sim)),
            )
        })),
        PsiKind::NetDiff(n) => Formula::conj(agent_features().map(|(a, f)| {
            let pressure = Formula::Pressure(a.clone(), f.clone());
            let later = Formula::disj((0..n).map(|i| {
                let diffs =
                    (0..i).fold(pressure.clone(), |acc, _| Formula::after(Update::Diff, acc));
                Formula::after(Update::Net, diffs)
            }));
            Formula::implies(
                Formula::not(Formula::Has(a, f)),
                Formula::iff(pressure.clone(), later),
            )
        })),
    }
}

/// Replaces every macro node (including ψ) by its definition, recursively.
pub fn expand_macros(f: &Formula, sig: &Signature, params: &Params) -> Result<Formula> {
    let rec = |x: &Arc<Formula>| expand_macros(x, sig, params).map(Arc::new);
    Ok(match f {
        Formula::Sim(a, b) => expand_similarity(a.as_str(), b.as_str(), sig, params)?,
        Formula::Pressure(a, k) => expand_pressure(a.as_str(), k.as_str(), sig, params)?,
        Formula::Psi(kind) => expand_macros(&psi_formula(*kind, sig, params.mode()), sig, params)?,
        Formula::Not(x) => Formula::Not(rec(x)?),
        Formula::Dyn(op, x) => Formula::Dyn(*op, rec(x)?),
        Formula::And(l, r) => Formula::And(rec(l)?, rec(r)?),
        Formula::Or(l, r) => Formula::Or(rec(l)?, rec(r)?),
        Formula::Implies(l, r) => Formula::Implies(rec(l)?, rec(r)?),
        Formula::Iff(l, r) => Formula::Iff(rec(l)?, rec(r)?),
        Formula::True | Formula::False | Formula::Edge(..) | Formula::Has(..) => f.clone(),
    })
}
