//! Shared helpers for the integration suites: a set-based reference
//! implementation of the three updates, small model corpora and seeded
//! formula generators.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use netdyn_core::corpus::{all_models, random_model, standard_signature};
use netdyn_core::{
    Formula, LinkMode, Model, ModelDocument, Params, PsiKind, Rational, Signature, Update,
};

pub fn r(p: i64, q: i64) -> Rational {
    Rational::new(p, q).unwrap()
}

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn fixture(name: &str) -> Model {
    netdyn_core::load_model(fixture_dir().join(name)).unwrap()
}

pub fn fixtures() -> Vec<(String, Model)> {
    let mut out: Vec<(String, Model)> = std::fs::read_dir(fixture_dir())
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            (name, netdyn_core::load_model(&p).unwrap())
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

pub fn mt() -> Model {
    fixture("mt.json")
}

/// A model as plain sets of names, with updates written directly from the
/// definitions. Thresholds are compared as `count * q >= p * total`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Naive {
    agents: Vec<String>,
    features: Vec<String>,
    edges: BTreeSet<(String, String)>,
    val: BTreeMap<String, BTreeSet<String>>,
    omega: (i64, i64),
    tau: (i64, i64),
    irreflexive: bool,
}

fn at_least(count: usize, total: usize, (p, q): (i64, i64)) -> bool {
    count as i64 * q >= p * total as i64
}

impl Naive {
    pub fn of(m: &Model) -> Naive {
        let doc = ModelDocument::from_model(m);
        Naive {
            agents: doc.agents,
            features: doc.features,
            edges: doc.edges.into_iter().map(|[a, b]| (a, b)).collect(),
            val: doc
                .valuation
                .into_iter()
                .map(|(a, fs)| (a, fs.into_iter().collect()))
                .collect(),
            omega: (doc.omega.numer(), doc.omega.denom()),
            tau: (doc.tau.numer(), doc.tau.denom()),
            irreflexive: doc.mode == LinkMode::Irreflexive,
        }
    }

    fn has(&self, a: &str, f: &str) -> bool {
        self.val.get(a).is_some_and(|fs| fs.contains(f))
    }

    fn pressure(&self, a: &str, f: &str) -> bool {
        let infl: Vec<&String> = self
            .agents
            .iter()
            .filter(|b| self.edges.contains(&((*b).clone(), a.to_string())))
            .collect();
        if infl.is_empty() {
            return false;
        }
        let holders = infl.iter().filter(|b| self.has(b, f)).count();
        at_least(holders, infl.len(), self.tau)
    }

    fn similar(&self, a: &str, b: &str) -> bool {
        let agree = self
            .features
            .iter()
            .filter(|f| self.has(a, f) == self.has(b, f))
            .count();
        at_least(agree, self.features.len(), self.omega)
    }

    pub fn diff(&self) -> Naive {
        let mut next = self.clone();
        for a in &self.agents {
            for f in &self.features {
                if self.pressure(a, f) {
                    next.val.entry(a.clone()).or_default().insert(f.clone());
                }
            }
        }
        next
    }

    pub fn net(&self) -> Naive {
        let mut next = self.clone();
        for a in &self.agents {
            for b in &self.agents {
                if self.irreflexive && a == b {
                    continue;
                }
                if self.similar(a, b) {
                    next.edges.insert((a.clone(), b.clone()));
                }
            }
        }
        next
    }

    pub fn sync(&self) -> Naive {
        let mut next = self.net();
        next.val = self.diff().val;
        next
    }

    pub fn apply(&self, u: Update) -> Naive {
        match u {
            Update::Diff => self.diff(),
            Update::Net => self.net(),
            Update::Sync => self.sync(),
        }
    }
}

pub const THRESHOLDS: [(i64, i64); 4] = [(1, 3), (1, 2), (2, 3), (1, 1)];

/// Every model with up to `max_agents` agents and `max_features` features,
/// for every (ω, τ) drawn from `thresholds` and both link modes.
pub fn small_corpus(
    max_agents: usize,
    max_features: usize,
    thresholds: &[(i64, i64)],
    modes: &[LinkMode],
) -> impl Iterator<Item = Model> {
    let mut specs = Vec::new();
    for agents in 1..=max_agents {
        for features in 1..=max_features {
            for &mode in modes {
                for &(op, oq) in thresholds {
                    for &(tp, tq) in thresholds {
                        let params = Params::new(r(op, oq), r(tp, tq), mode).unwrap();
                        specs.push((standard_signature(agents, features), params));
                    }
                }
            }
        }
    }
    specs
        .into_iter()
        .flat_map(|(sig, params)| all_models(sig, params))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_threshold(rng: &mut ChaCha8Rng, allow_zero: bool) -> Rational {
    let q = rng.gen_range(1..=6);
    let lo = if allow_zero { 0 } else { 1 };
    r(rng.gen_range(lo..=q), q)
}

/// A random model with `1..=max_agents` agents and `1..=max_features`
/// features, random thresholds and mode.
pub fn random_small_model(rng: &mut ChaCha8Rng, max_agents: usize, max_features: usize) -> Model {
    let agents = rng.gen_range(1..=max_agents);
    let features = rng.gen_range(1..=max_features);
    random_model_with(rng, agents, features)
}

pub fn random_model_with(rng: &mut ChaCha8Rng, agents: usize, features: usize) -> Model {
    let sig = standard_signature(agents, features);
    let mode = if rng.gen_bool(0.5) {
        LinkMode::Literal
    } else {
        LinkMode::Irreflexive
    };
    let params = Params::new(
        random_threshold(rng, true),
        random_threshold(rng, false),
        mode,
    )
    .unwrap();
    let edge_p = rng.gen_range(0.1..0.7);
    let feature_p = rng.gen_range(0.1..0.7);
    random_model(rng, &sig, params, edge_p, feature_p)
}

/// Generates formulas over a signature; `N(a,a)` is avoided in irreflexive
/// mode.
pub struct FormulaGen<'s> {
    pub sig: &'s Signature,
    pub mode: LinkMode,
    pub macros: bool,
}

impl FormulaGen<'_> {
    fn agent(&self, rng: &mut ChaCha8Rng) -> netdyn_core::AgentId {
        self.sig.agents().choose(rng).unwrap().clone()
    }

    fn feature(&self, rng: &mut ChaCha8Rng) -> netdyn_core::FeatureId {
        self.sig.features().choose(rng).unwrap().clone()
    }

    fn edge(&self, rng: &mut ChaCha8Rng) -> Formula {
        let a = self.agent(rng);
        let mut b = self.agent(rng);
        if self.mode == LinkMode::Irreflexive {
            if self.sig.agent_count() == 1 {
                return Formula::Has(a, self.feature(rng));
            }
            while b == a {
                b = self.agent(rng);
            }
        }
        Formula::Edge(a, b)
    }

    pub fn atom(&self, rng: &mut ChaCha8Rng) -> Formula {
        let choices = if self.macros { 6 } else { 3 };
        match rng.gen_range(0..choices) {
            0 => self.edge(rng),
            1 | 2 => Formula::Has(self.agent(rng), self.feature(rng)),
            3 => Formula::Sim(self.agent(rng), self.agent(rng)),
            4 => Formula::Pressure(self.agent(rng), self.feature(rng)),
            _ => match rng.gen_range(0..6) {
                0 => Formula::True,
                1 => Formula::False,
                2 => Formula::Psi(PsiKind::Diff),
                3 => Formula::Psi(PsiKind::Net),
                _ => Formula::Psi(PsiKind::DiffNet),
            },
        }
    }

    /// A formula of at most `size` connectives and at most `dyn_depth`
    /// nested update operators.
    pub fn formula(&self, rng: &mut ChaCha8Rng, size: usize, dyn_depth: usize) -> Formula {
        if size == 0 {
            return self.atom(rng);
        }
        let op = rng.gen_range(0..8);
        match op {
            0 | 1 if dyn_depth > 0 => {
                let u = *Update::ALL.choose(rng).unwrap();
                Formula::after(u, self.formula(rng, size - 1, dyn_depth - 1))
            }
            2 => Formula::not(self.formula(rng, size - 1, dyn_depth)),
            _ => {
                let left = rng.gen_range(0..size);
                let l = self.formula(rng, left, dyn_depth);
                let rr = self.formula(rng, size - 1 - left, dyn_depth);
                match op {
                    3 | 4 => Formula::and(l, rr),
                    5 => Formula::or(l, rr),
                    6 => Formula::implies(l, rr),
                    _ => Formula::iff(l, rr),
                }
            }
        }
    }

    /// A formula whose update operators are nested exactly `depth` deep
    /// along at least one branch.
    pub fn formula_with_depth(&self, rng: &mut ChaCha8Rng, size: usize, depth: usize) -> Formula {
        let mut f = self.formula(rng, size, depth);
        for _ in f.dynamic_depth()..depth {
            f = Formula::after(*Update::ALL.choose(rng).unwrap(), f);
        }
        f
    }
}

pub fn signature_of(m: &Model) -> Arc<Signature> {
    m.signature().clone()
}

/// All sequences over {△, □} of length `1..=max_len`.
pub fn sync_free_sequences(max_len: usize) -> Vec<Vec<Update>> {
    let mut all = Vec::new();
    let mut level = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for s in &level {
            for op in [Update::Diff, Update::Net] {
                let mut t: Vec<Update> = s.clone();
                t.push(op);
                next.push(t);
            }
        }
        all.extend(next.iter().cloned());
        level = next;
    }
    all
}

/// Instances of the twelve reduction axioms (four per update operator) as
/// biconditionals. Atom axioms are instantiated for every atom of the
/// signature; the `¬` and `∧` axioms for the supplied sub-formulas.
pub fn axiom_instances(
    sig: &Signature,
    mode: LinkMode,
    subformulas: &[Formula],
) -> Vec<(usize, Formula)> {
    let mut out = Vec::new();
    for (k, u) in Update::ALL.into_iter().enumerate() {
        let base = 4 * k;
        for (i, a) in sig.agents().iter().enumerate() {
            for (j, b) in sig.agents().iter().enumerate() {
                if mode == LinkMode::Irreflexive && i == j {
                    continue;
                }
                let n = Formula::Edge(a.clone(), b.clone());
                let rhs = match u {
                    Update::Diff => n.clone(),
                    _ => Formula::or(n.clone(), Formula::Sim(a.clone(), b.clone())),
                };
                out.push((base, Formula::iff(Formula::after(u, n), rhs)));
            }
            for f in sig.features() {
                let h = Formula::Has(a.clone(), f.clone());
                let rhs = match u {
                    Update::Net => h.clone(),
                    _ => Formula::or(h.clone(), Formula::Pressure(a.clone(), f.clone())),
                };
                out.push((base + 1, Formula::iff(Formula::after(u, h), rhs)));
            }
        }
        for (p, q) in subformulas.iter().zip(subformulas.iter().rev()) {
            out.push((
                base + 2,
                Formula::iff(
                    Formula::after(u, Formula::not(p.clone())),
                    Formula::not(Formula::after(u, p.clone())),
                ),
            ));
            out.push((
                base + 3,
                Formula::iff(
                    Formula::after(u, Formula::and(p.clone(), q.clone())),
                    Formula::and(Formula::after(u, p.clone()), Formula::after(u, q.clone())),
                ),
            ));
        }
    }
    out
}
