//! Finite social-network models and the three monotone updates.
//!
//! A [`Model`] stores its influence relation and valuation as dense boolean
//! matrices indexed by the (sorted) positions of agents and features in its
//! [`Signature`]. Every update reads only the pre-update model, so the order
//! in which agents are visited never matters.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::sequence::{Update, UpdateSequence};

/// `[A-Za-z_][A-Za-z0-9_]*`
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

macro_rules! name_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(Arc<str>);

        impl $name {
            pub fn new(name: &str) -> Result<Self> {
                if !is_identifier(name) {
                    return Err(Error::InvalidIdentifier(name.to_string()));
                }
                Ok($name(Arc::from(name)))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl AsRef<str> for $name {
            fn as_ref(&self) -> &str {
                &self.0
            }
        }
    };
}

name_type!(
    /// Name of an agent.
    AgentId
);
name_type!(
    /// Name of a feature. Feature and agent names live in separate namespaces.
    FeatureId
);

/// Whether the network update may link an agent to itself.
///
/// In `Literal` mode every agent is similar to itself, so the first network
/// update adds all self-loops. `Irreflexive` mode forbids self-loops in
/// models, in updates and in the admissible atoms.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkMode {
    #[default]
    Literal,
    Irreflexive,
}

impl LinkMode {
    pub fn allows_pair(self, a: usize, b: usize) -> bool {
        self == LinkMode::Literal || a != b
    }
}

impl std::str::FromStr for LinkMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "literal" => Ok(LinkMode::Literal),
            "irreflexive" => Ok(LinkMode::Irreflexive),
            other => Err(Error::InvalidConfig(format!("unknown mode `{other}`"))),
        }
    }
}

/// Similarity threshold ω, influenceability threshold τ and link mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Params {
    omega: Rational,
    tau: Rational,
    mode: LinkMode,
}

impl Params {
    /// Requires `0 <= omega <= 1` and `0 < tau <= 1`.
    pub fn new(omega: Rational, tau: Rational, mode: LinkMode) -> Result<Self> {
        if omega < Rational::ZERO || omega > Rational::ONE {
            return Err(Error::ThresholdOutOfRange {
                which: "omega",
                value: omega.to_string(),
                range: "0 <= omega <= 1",
            });
        }
        if tau <= Rational::ZERO || tau > Rational::ONE {
            return Err(Error::ThresholdOutOfRange {
                which: "tau",
                value: tau.to_string(),
                range: "0 < tau <= 1",
            });
        }
        Ok(Params { omega, tau, mode })
    }

    pub fn omega(&self) -> Rational {
        self.omega
    }

    pub fn tau(&self) -> Rational {
        self.tau
    }

    pub fn mode(&self) -> LinkMode {
        self.mode
    }

    pub fn with_mode(self, mode: LinkMode) -> Params {
        Params { mode, ..self }
    }
}

/// The agents and features a model or formula ranges over, sorted by name.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    agents: Vec<AgentId>,
    features: Vec<FeatureId>,
}

impl Signature {
    pub fn new(
        agents: impl IntoIterator<Item = AgentId>,
        features: impl IntoIterator<Item = FeatureId>,
    ) -> Result<Self> {
        let mut agents: Vec<AgentId> = agents.into_iter().collect();
        let mut features: Vec<FeatureId> = features.into_iter().collect();
        if agents.is_empty() {
            return Err(Error::EmptyAgents);
        }
        if features.is_empty() {
            return Err(Error::EmptyFeatures);
        }
        agents.sort();
        features.sort();
        if let Some(w) = agents.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateAgent(w[0].to_string()));
        }
        if let Some(w) = features.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateFeature(w[0].to_string()));
        }
        Ok(Signature { agents, features })
    }

    pub fn from_names<S: AsRef<str>>(agents: &[S], features: &[S]) -> Result<Self> {
        Self::new(
            agents
                .iter()
                .map(|a| AgentId::new(a.as_ref()))
                .collect::<Result<Vec<_>>>()?,
            features
                .iter()
                .map(|f| FeatureId::new(f.as_ref()))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn agents(&self) -> &[AgentId] {
        &self.agents
    }

    pub fn features(&self) -> &[FeatureId] {
        &self.features
    }

    pub fn agent_count(&self) -> usize {
        self.agents.len()
    }

    pub fn feature_count(&self) -> usize {
        self.features.len()
    }

    pub fn agent_index(&self, name: &str) -> Result<usize> {
        self.agents
            .binary_search_by(|a| a.as_str().cmp(name))
            .map_err(|_| Error::UnknownAgent(name.to_string()))
    }

    pub fn feature_index(&self, name: &str) -> Result<usize> {
        self.features
            .binary_search_by(|f| f.as_str().cmp(name))
            .map_err(|_| Error::UnknownFeature(name.to_string()))
    }
}

/// A model ⟨N, V, ω, τ⟩ over a signature.
///
/// Equality is structural: same signature, parameters, influence relation
/// and valuation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Model {
    sig: Arc<Signature>,
    params: Params,
    /// `influence[i * n + j]`: agent `i` influences agent `j`.
    influence: Vec<bool>,
    /// `valuation[i * m + k]`: agent `i` has feature `k`.
    valuation: Vec<bool>,
}

/// Builds and validates a model from names.
///
/// `influence` holds `(influencer, influenced)` pairs. Agents missing from
/// `valuation` have no features.
pub fn new_model<A, F, E, V, S, T, Fs>(
    agents: A,
    features: F,
    influence: E,
    valuation: V,
    params: Params,
) -> Result<Model>
where
    A: IntoIterator,
    A::Item: AsRef<str>,
    F: IntoIterator,
    F::Item: AsRef<str>,
    E: IntoIterator<Item = (S, S)>,
    S: AsRef<str>,
    V: IntoIterator<Item = (T, Fs)>,
    T: AsRef<str>,
    Fs: IntoIterator,
    Fs::Item: AsRef<str>,
{
    let agents = agents
        .into_iter()
        .map(|a| AgentId::new(a.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    let features = features
        .into_iter()
        .map(|f| FeatureId::new(f.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    let sig = Arc::new(Signature::new(agents, features)?);
    let mut model = Model::empty(sig, params);
    for (a, b) in influence {
        model = model.with_edge(a.as_ref(), b.as_ref())?;
    }
    for (a, fs) in valuation {
        for f in fs {
            model = model.with_feature(a.as_ref(), f.as_ref())?;
        }
    }
    Ok(model)
}

impl Model {
    /// No links, no features.
    pub fn empty(sig: Arc<Signature>, params: Params) -> Model {
        let n = sig.agent_count();
        let m = sig.feature_count();
        Model {
            sig,
            params,
            influence: vec![false; n * n],
            valuation: vec![false; n * m],
        }
    }

    /// Builds a model from raw matrices (row-major, see field docs).
    pub fn from_matrices(
        sig: Arc<Signature>,
        params: Params,
        influence: Vec<bool>,
        valuation: Vec<bool>,
    ) -> Result<Model> {
        let n = sig.agent_count();
        let m = sig.feature_count();
        if influence.len() != n * n || valuation.len() != n * m {
            return Err(Error::InvariantViolation(
                "matrix dimensions do not match the signature".into(),
            ));
        }
        let model = Model {
            sig,
            params,
            influence,
            valuation,
        };
        model.check_mode()?;
        Ok(model)
    }

    fn check_mode(&self) -> Result<()> {
        if self.params.mode == LinkMode::Irreflexive {
            if let Some(i) = (0..self.agent_count()).find(|&i| self.edge(i, i)) {
                return Err(Error::SelfLoop(self.sig.agents[i].to_string()));
            }
        }
        Ok(())
    }

    pub fn with_edge(mut self, from: &str, to: &str) -> Result<Model> {
        let i = self.sig.agent_index(from)?;
        let j = self.sig.agent_index(to)?;
        if !self.params.mode.allows_pair(i, j) {
            return Err(Error::SelfLoop(from.to_string()));
        }
        let n = self.agent_count();
        self.influence[i * n + j] = true;
        Ok(self)
    }

    pub fn with_feature(mut self, agent: &str, feature: &str) -> Result<Model> {
        let i = self.sig.agent_index(agent)?;
        let k = self.sig.feature_index(feature)?;
        let m = self.feature_count();
        self.valuation[i * m + k] = true;
        Ok(self)
    }

    /// Same model under a different link mode; fails if it has self-loops
    /// and the new mode is irreflexive.
    pub fn with_mode(mut self, mode: LinkMode) -> Result<Model> {
        self.params = self.params.with_mode(mode);
        self.check_mode()?;
        Ok(self)
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn omega(&self) -> Rational {
        self.params.omega
    }

    pub fn tau(&self) -> Rational {
        self.params.tau
    }

    pub fn mode(&self) -> LinkMode {
        self.params.mode
    }

    pub fn agent_count(&self) -> usize {
        self.sig.agent_count()
    }

    pub fn feature_count(&self) -> usize {
        self.sig.feature_count()
    }

    /// Same signature and parameters.
    pub fn comparable(&self, other: &Model) -> bool {
        self.params == other.params && self.sig == other.sig
    }

    pub fn influence_matrix(&self) -> &[bool] {
        &self.influence
    }

    pub fn valuation_matrix(&self) -> &[bool] {
        &self.valuation
    }

    #[inline]
    pub fn edge(&self, from: usize, to: usize) -> bool {
        self.influence[from * self.agent_count() + to]
    }

    #[inline]
    pub fn has(&self, agent: usize, feature: usize) -> bool {
        self.valuation[agent * self.feature_count() + feature]
    }

    /// All influence pairs, in lexicographic order.
    pub fn edges(&self) -> Vec<(AgentId, AgentId)> {
        let n = self.agent_count();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.edge(i, j) {
                    out.push((self.sig.agents[i].clone(), self.sig.agents[j].clone()));
                }
            }
        }
        out
    }

    pub fn features_of(&self, agent: &str) -> Result<Vec<FeatureId>> {
        let i = self.sig.agent_index(agent)?;
        Ok(self.features_of_index(i))
    }

    pub(crate) fn features_of_index(&self, i: usize) -> Vec<FeatureId> {
        (0..self.feature_count())
            .filter(|&k| self.has(i, k))
            .map(|k| self.sig.features[k].clone())
            .collect()
    }

    /// N(a): the agents `b` with `(b, a)` in the influence relation.
    pub fn influencers(&self, agent: &str) -> Result<Vec<AgentId>> {
        let a = self.sig.agent_index(agent)?;
        Ok((0..self.agent_count())
            .filter(|&b| self.edge(b, a))
            .map(|b| self.sig.agents[b].clone())
            .collect())
    }

    pub fn has_pressure(&self, agent: &str, feature: &str) -> Result<bool> {
        let a = self.sig.agent_index(agent)?;
        let k = self.sig.feature_index(feature)?;
        Ok(self.pressure_at(a, k))
    }

    /// Fraction of features on which the two agents agree.
    pub fn similarity(&self, a: &str, b: &str) -> Result<Rational> {
        let i = self.sig.agent_index(a)?;
        let j = self.sig.agent_index(b)?;
        Rational::new(self.agreement(i, j) as i64, self.feature_count() as i64)
    }

    pub fn are_similar(&self, a: &str, b: &str) -> Result<bool> {
        let i = self.sig.agent_index(a)?;
        let j = self.sig.agent_index(b)?;
        Ok(self.similar_at(i, j))
    }

    /// |N_f(a)| / |N(a)| >= τ, false when N(a) is empty.
    pub fn pressure_at(&self, a: usize, k: usize) -> bool {
        let mut total = 0;
        let mut adopters = 0;
        for b in 0..self.agent_count() {
            if self.edge(b, a) {
                total += 1;
                if self.has(b, k) {
                    adopters += 1;
                }
            }
        }
        self.params.tau.le_ratio(adopters, total)
    }

    fn agreement(&self, i: usize, j: usize) -> usize {
        (0..self.feature_count())
            .filter(|&k| self.has(i, k) == self.has(j, k))
            .count()
    }

    pub fn similar_at(&self, i: usize, j: usize) -> bool {
        self.params
            .omega
            .le_ratio(self.agreement(i, j), self.feature_count())
    }

    fn diffused_valuation(&self) -> Vec<bool> {
        let m = self.feature_count();
        let mut next = self.valuation.clone();
        for a in 0..self.agent_count() {
            for k in 0..m {
                if !next[a * m + k] && self.pressure_at(a, k) {
                    next[a * m + k] = true;
                }
            }
        }
        next
    }

    fn linked_influence(&self) -> Vec<bool> {
        let n = self.agent_count();
        let mut next = self.influence.clone();
        for a in 0..n {
            for b in 0..n {
                if !next[a * n + b] && self.params.mode.allows_pair(a, b) && self.similar_at(a, b) {
                    next[a * n + b] = true;
                }
            }
        }
        next
    }

    /// M△: agents adopt every feature they are under pressure to adopt.
    pub fn diffusion_update(&self) -> Model {
        Model {
            valuation: self.diffused_valuation(),
            ..self.clone()
        }
    }

    /// M□: every similar pair becomes linked.
    pub fn network_update(&self) -> Model {
        Model {
            influence: self.linked_influence(),
            ..self.clone()
        }
    }

    /// M○: the network of M□ together with the valuation of M△.
    pub fn synchronous_update(&self) -> Model {
        Model {
            sig: self.sig.clone(),
            params: self.params,
            influence: self.linked_influence(),
            valuation: self.diffused_valuation(),
        }
    }

    pub fn apply(&self, update: Update) -> Model {
        match update {
            Update::Diff => self.diffusion_update(),
            Update::Net => self.network_update(),
            Update::Sync => self.synchronous_update(),
        }
    }

    pub fn apply_sequence(&self, seq: &UpdateSequence) -> Model {
        let mut iter = seq.iter();
        // sequences are non-empty
        let mut model = self.apply(iter.next().expect("non-empty sequence"));
        for u in iter {
            model = model.apply(u);
        }
        model
    }

    /// Applies `update` until the model stops changing. Returns the fixpoint
    /// and the number of applications that changed the model.
    ///
    /// Both updates only add links and features, so this terminates within
    /// `|A|·|F| + |A|²` effective steps.
    pub fn stabilize(&self, update: Update) -> (Model, usize) {
        let mut current = self.clone();
        let mut steps = 0;
        loop {
            let next = current.apply(update);
            if next == current {
                return (current, steps);
            }
            current = next;
            steps += 1;
        }
    }
}

impl fmt::Debug for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let valuation: Vec<(String, Vec<FeatureId>)> = (0..self.agent_count())
            .map(|i| (self.sig.agents[i].to_string(), self.features_of_index(i)))
            .collect();
        f.debug_struct("Model")
            .field("agents", &self.sig.agents)
            .field("features", &self.sig.features)
            .field("edges", &self.edges())
            .field("valuation", &valuation)
            .field("omega", &self.params.omega)
            .field("tau", &self.params.tau)
            .field("mode", &self.params.mode)
            .finish()
    }
}
