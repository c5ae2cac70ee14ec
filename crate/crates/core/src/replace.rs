//! When can the synchronous update be replaced by diffusion and network
//! updates?
//!
//! On a given model, ○ coincides with △, □, △□ or □△ⁿ exactly when the
//! matching ψ condition holds, and any ○-free sequence that coincides with
//! ○ coincides with one of those four shapes. [`find_replacement`] decides
//! replaceability through the ψ conditions; [`brute_force_replaceable`]
//! answers the same question by enumerating sequences and serves as its
//! oracle.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{model_bits, model_from_bits, standard_signature};
use crate::error::{Error, Result};
use crate::eval::Evaluator;
use crate::formula::{psi_formula, Formula, PsiKind};
use crate::model::{AgentId, FeatureId, LinkMode, Model, Params, Signature};
use crate::rational::Rational;
use crate::sequence::{Update, UpdateSequence};

/// Upper bound on the number of sequences [`brute_force_replaceable`] may
/// enumerate.
pub const DEFAULT_SEQUENCE_CAP: u128 = 1 << 22;

fn check_index(model: &Model, kind: PsiKind) -> Result<()> {
    if let PsiKind::NetDiff(n) = kind {
        if n >= model.agent_count() {
            return Err(Error::BadIndex {
                n,
                agents: model.agent_count(),
            });
        }
    }
    Ok(())
}

/// M ⊨ ψ_kind. For □△ⁿ, `n` must be below the number of agents.
pub fn check_psi(model: &Model, kind: PsiKind) -> Result<bool> {
    check_index(model, kind)?;
    let psi = psi_formula(kind, model.signature(), model.mode());
    Evaluator::new(model).satisfies(&psi)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplaceabilityVerdict {
    /// The first canonical kind whose ψ condition holds.
    pub kind: Option<PsiKind>,
    /// The sequence for `kind`; verified to reproduce ○ on the model.
    pub sequence: Option<UpdateSequence>,
    /// ψ conditions that were evaluated and failed, in test order.
    pub failed: Vec<PsiKind>,
}

impl ReplaceabilityVerdict {
    pub fn replaceable(&self) -> bool {
        self.sequence.is_some()
    }
}

/// The ψ formulas of the canonical family for one signature and mode,
/// built once and reused across models.
pub struct PsiSuite {
    sig: Arc<Signature>,
    mode: LinkMode,
    formulas: Vec<(PsiKind, Formula)>,
}

impl PsiSuite {
    pub fn new(sig: Arc<Signature>, mode: LinkMode) -> Self {
        let formulas = PsiKind::canonical_family(sig.agent_count())
            .into_iter()
            .map(|k| (k, psi_formula(k, &sig, mode)))
            .collect();
        PsiSuite {
            sig,
            mode,
            formulas,
        }
    }

    /// Tests △, □, △□, □△¹, …, □△^(|A|-1) in that order and returns the
    /// first whose ψ condition holds.
    pub fn find_replacement(&self, model: &Model) -> Result<ReplaceabilityVerdict> {
        if **model.signature() != *self.sig || model.mode() != self.mode {
            return Err(Error::SignatureMismatch);
        }
        let mut eval = Evaluator::new(model);
        let mut failed = Vec::new();
        for (kind, psi) in &self.formulas {
            if eval.satisfies(psi)? {
                let seq = kind.sequence();
                if model.apply_sequence(&seq) != model.synchronous_update() {
                    return Err(Error::InvariantViolation(format!(
                        "{kind} holds but {} differs from sync",
                        seq.symbols()
                    )));
                }
                return Ok(ReplaceabilityVerdict {
                    kind: Some(*kind),
                    sequence: Some(seq),
                    failed,
                });
            }
            failed.push(*kind);
        }
        Ok(ReplaceabilityVerdict {
            kind: None,
            sequence: None,
            failed,
        })
    }
}

/// Decides whether ○ can be replaced on `model` by a sequence of △ and □.
pub fn find_replacement(model: &Model) -> Result<ReplaceabilityVerdict> {
    PsiSuite::new(model.signature().clone(), model.mode()).find_replacement(model)
}

/// All ○-free sequences of length `1..=max_len` in length-lexicographic
/// order (△ before □), each paired with the model it produces.
fn sequences_up_to(model: &Model, max_len: usize) -> Vec<(Vec<Update>, Model)> {
    let mut all = Vec::new();
    let mut level: Vec<(Vec<Update>, Model)> = vec![(Vec::new(), model.clone())];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(level.len() * 2);
        for (seq, m) in &level {
            for op in [Update::Diff, Update::Net] {
                let mut s = seq.clone();
                s.push(op);
                next.push((s, m.apply(op)));
            }
        }
        all.extend(next.iter().cloned());
        level = next;
    }
    all
}

fn check_budget(max_len: usize, cap: u128) -> Result<()> {
    if max_len == 0 {
        return Err(Error::InvalidConfig("max_len must be at least 1".into()));
    }
    let requested = 1u128.checked_shl(max_len as u32 + 1).unwrap_or(u128::MAX);
    if requested > cap {
        return Err(Error::BudgetExceeded { requested, cap });
    }
    Ok(())
}

/// The first ○-free sequence of length at most `max_len` (length-lex order)
/// that reproduces ○ on `model`.
pub fn brute_force_replaceable(model: &Model, max_len: usize) -> Result<Option<UpdateSequence>> {
    brute_force_replaceable_capped(model, max_len, DEFAULT_SEQUENCE_CAP)
}

pub fn brute_force_replaceable_capped(
    model: &Model,
    max_len: usize,
    cap: u128,
) -> Result<Option<UpdateSequence>> {
    check_budget(max_len, cap)?;
    let target = model.synchronous_update();
    Ok(sequences_up_to(model, max_len)
        .into_iter()
        .find(|(_, m)| *m == target)
        .map(|(s, _)| UpdateSequence::new(s).expect("non-empty")))
}

/// The default search bound: one more than the longest canonical sequence.
pub fn default_max_len(model: &Model) -> usize {
    model.agent_count() + 1
}

/// If `seq` reproduces ○ on `model`, a canonical kind reaching the same
/// model; `None` if it does not reproduce ○.
pub fn classify_sequence(model: &Model, seq: &UpdateSequence) -> Result<Option<PsiKind>> {
    if seq.contains_sync() {
        return Err(Error::UnexpectedSync);
    }
    let reached = model.apply_sequence(seq);
    if reached != model.synchronous_update() {
        return Ok(None);
    }
    let mut kinds = vec![PsiKind::Diff, PsiKind::Net, PsiKind::DiffNet];
    kinds.extend((1..=model.agent_count().max(seq.len())).map(PsiKind::NetDiff));
    kinds
        .into_iter()
        .find(|k| model.apply_sequence(&k.sequence()) == reached)
        .map(Some)
        .ok_or_else(|| {
            Error::InvariantViolation(format!(
                "{} reproduces sync but matches no canonical sequence",
                seq.symbols()
            ))
        })
}

/// A replacement for ○ repeated `steps` times, built stage by stage: stage
/// `i` must be replaceable on ○^i(M). `None` means some stage was not; a
/// replacement for the whole block may still exist.
pub fn find_replacement_multi(model: &Model, steps: usize) -> Result<Option<UpdateSequence>> {
    if steps == 0 {
        return Err(Error::InvalidConfig("steps must be at least 1".into()));
    }
    let suite = PsiSuite::new(model.signature().clone(), model.mode());
    let mut stage = model.clone();
    let mut parts: Vec<Update> = Vec::new();
    for _ in 0..steps {
        match suite.find_replacement(&stage)?.sequence {
            Some(s) => parts.extend(s.iter()),
            None => return Ok(None),
        }
        stage = stage.synchronous_update();
    }
    let seq = UpdateSequence::new(parts).expect("non-empty");
    if model.apply_sequence(&seq) != stage {
        return Err(Error::InvariantViolation(format!(
            "{} does not reproduce sync^{steps}",
            seq.symbols()
        )));
    }
    Ok(Some(seq))
}

/// Facts used in the argument that ○ is not replaceable on a model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofFacts {
    /// Some N_xy with M ⊭ △N_xy and M ⊨ ○N_xy.
    pub diff_misses_link: Option<(AgentId, AgentId)>,
    /// Some N_xy with M ⊭ △□N_xy and M ⊨ ○N_xy.
    pub diffnet_misses_link: Option<(AgentId, AgentId)>,
    /// Some h_z with M ⊭ □h_z and M ⊨ ○h_z.
    pub net_misses_feature: Option<(AgentId, FeatureId)>,
    /// M△□ is a fixpoint of both △ and □.
    pub diffnet_stable: bool,
    /// M□ is a fixpoint of both △ and □.
    pub net_stable: bool,
}

impl ProofFacts {
    pub fn of(model: &Model) -> Result<ProofFacts> {
        let sig = model.signature();
        let mut eval = Evaluator::new(model);
        let seq = |ops: &[Update], f: Formula| {
            Formula::after_sequence(&UpdateSequence::new(ops.to_vec()).expect("non-empty"), f)
        };
        let mut diff_misses_link = None;
        let mut diffnet_misses_link = None;
        for (i, x) in sig.agents().iter().enumerate() {
            for (j, y) in sig.agents().iter().enumerate() {
                if !model.mode().allows_pair(i, j) {
                    continue;
                }
                let atom = Formula::Edge(x.clone(), y.clone());
                if !eval.satisfies(&seq(&[Update::Sync], atom.clone()))? {
                    continue;
                }
                if diff_misses_link.is_none()
                    && !eval.satisfies(&seq(&[Update::Diff], atom.clone()))?
                {
                    diff_misses_link = Some((x.clone(), y.clone()));
                }
                if diffnet_misses_link.is_none()
                    && !eval.satisfies(&seq(&[Update::Diff, Update::Net], atom))?
                {
                    diffnet_misses_link = Some((x.clone(), y.clone()));
                }
            }
        }
        let mut net_misses_feature = None;
        'outer: for z in sig.agents() {
            for h in sig.features() {
                let atom = Formula::Has(z.clone(), h.clone());
                if eval.satisfies(&seq(&[Update::Sync], atom.clone()))?
                    && !eval.satisfies(&seq(&[Update::Net], atom))?
                {
                    net_misses_feature = Some((z.clone(), h.clone()));
                    break 'outer;
                }
            }
        }
        let stable = |m: &Model| m.diffusion_update() == *m && m.network_update() == *m;
        Ok(ProofFacts {
            diff_misses_link,
            diffnet_misses_link,
            net_misses_feature,
            diffnet_stable: stable(&model.diffusion_update().network_update()),
            net_stable: stable(&model.network_update()),
        })
    }

    pub fn all_hold(&self) -> bool {
        self.diff_misses_link.is_some()
            && self.diffnet_misses_link.is_some()
            && self.net_misses_feature.is_some()
            && self.diffnet_stable
            && self.net_stable
    }
}

impl fmt::Display for ProofFacts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |b: bool| if b { "yes" } else { "no" };
        match &self.diff_misses_link {
            Some((x, y)) => writeln!(f, "diff misses sync link: N({x},{y})")?,
            None => writeln!(f, "diff misses sync link: no")?,
        }
        match &self.diffnet_misses_link {
            Some((x, y)) => writeln!(f, "diff,net misses sync link: N({x},{y})")?,
            None => writeln!(f, "diff,net misses sync link: no")?,
        }
        match &self.net_misses_feature {
            Some((z, h)) => writeln!(f, "net misses sync feature: has({z},{h})")?,
            None => writeln!(f, "net misses sync feature: no")?,
        }
        writeln!(f, "diff,net result stable: {}", mark(self.diffnet_stable))?;
        write!(f, "net result stable: {}", mark(self.net_stable))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SearchStrategy {
    /// Exhaustive when the whole space fits in the budget, sampled otherwise.
    #[default]
    Auto,
    Exhaustive,
    Sampled,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub agents: usize,
    pub features: usize,
    pub omega: Rational,
    pub tau: Rational,
    pub mode: LinkMode,
    pub seed: u64,
    /// Maximum number of distinct candidates examined.
    pub budget: usize,
    pub strategy: SearchStrategy,
    /// Only accept witnesses on which every [`ProofFacts`] entry holds.
    pub require_proof_facts: bool,
}

impl SearchConfig {
    pub fn new(agents: usize, features: usize, omega: Rational, tau: Rational) -> Self {
        SearchConfig {
            agents,
            features,
            omega,
            tau,
            mode: LinkMode::Literal,
            seed: 0,
            budget: 100_000,
            strategy: SearchStrategy::Auto,
            require_proof_facts: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub model: Model,
    pub facts: ProofFacts,
    /// Candidates examined, including the witness.
    pub examined: usize,
}

/// Looks for a model on which ○ cannot be replaced by any sequence of △
/// and □ of length up to |A| + 1.
///
/// Candidates are drawn without repetition from a ChaCha stream seeded with
/// `cfg.seed` (sampled strategy) or visited in code order starting at a
/// seed-dependent offset (exhaustive strategy, at most 40 free bits).
pub fn search_irreplaceable(cfg: &SearchConfig) -> Result<Witness> {
    if cfg.agents == 0 || cfg.features == 0 {
        return Err(Error::InvalidConfig(
            "agent and feature counts must be positive".into(),
        ));
    }
    if cfg.budget == 0 {
        return Err(Error::InvalidConfig("budget must be positive".into()));
    }
    let params = Params::new(cfg.omega, cfg.tau, cfg.mode)?;
    let sig = standard_signature(cfg.agents, cfg.features);
    let len = model_bits(&sig, cfg.mode);
    let space = if len < 64 { Some(1u64 << len) } else { None };
    let exhaustive = match cfg.strategy {
        SearchStrategy::Exhaustive => {
            if len > 40 {
                return Err(Error::InvalidConfig(format!(
                    "{len} free bits is too many for exhaustive search"
                )));
            }
            true
        }
        SearchStrategy::Sampled => false,
        SearchStrategy::Auto => space.is_some_and(|s| s <= cfg.budget as u64),
    };
    let max_len = cfg.agents + 1;
    let mut examined = 0;
    let mut accept = |bits: &[bool]| -> Result<Option<Witness>> {
        examined += 1;
        let model = model_from_bits(&sig, params, bits);
        if brute_force_replaceable(&model, max_len)?.is_some() {
            return Ok(None);
        }
        let facts = ProofFacts::of(&model)?;
        if cfg.require_proof_facts && !facts.all_hold() {
            return Ok(None);
        }
        Ok(Some(Witness {
            model,
            facts,
            examined,
        }))
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    if exhaustive {
        let space = space.expect("bounded space");
        let offset = rng.gen_range(0..space);
        for i in 0..space.min(cfg.budget as u64) {
            let code = (offset + i) % space;
            let bits: Vec<bool> = (0..len).map(|b| code >> b & 1 == 1).collect();
            if let Some(w) = accept(&bits)? {
                return Ok(w);
            }
        }
    } else {
        let limit = space.map_or(cfg.budget as u64, |s| s.min(cfg.budget as u64));
        let mut seen: HashSet<Vec<bool>> = HashSet::new();
        while (seen.len() as u64) < limit {
            let bits: Vec<bool> = (0..len).map(|_| rng.gen_bool(0.5)).collect();
            if !seen.insert(bits.clone()) {
                continue;
            }
            if let Some(w) = accept(&bits)? {
                return Ok(w);
            }
        }
    }
    Err(Error::SearchExhausted { examined })
}
