//! The satisfaction relation and sequence equivalence.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::formula::{psi_formula, Formula};
use crate::model::{LinkMode, Model};
use crate::sequence::{Update, UpdateSequence};

/// Evaluates formulas against one model.
///
/// Updated models reached through dynamic operators are memoized by the
/// sequence of updates that leads to them, so repeated sub-formulas such as
/// the ones in ψ□△ⁿ share their update work.
pub struct Evaluator<'m> {
    root: &'m Model,
    arena: Vec<Model>,
    index: HashMap<Vec<Update>, usize>,
    /// Values of shared sub-formulas during one `satisfies` call, keyed by
    /// node address and model slot.
    shared: HashMap<(usize, Option<usize>), bool>,
    /// ψ definitions built during the call, kept alive so their node
    /// addresses stay unique.
    scratch: Vec<Formula>,
}

impl<'m> Evaluator<'m> {
    pub fn new(root: &'m Model) -> Self {
        Evaluator {
            root,
            arena: Vec::new(),
            index: HashMap::new(),
            shared: HashMap::new(),
            scratch: Vec::new(),
        }
    }

    pub fn satisfies(&mut self, f: &Formula) -> Result<bool> {
        let mut path = Vec::new();
        let v = self.eval(&mut path, None, f);
        self.shared.clear();
        self.scratch.clear();
        v
    }

    fn child(
        &mut self,
        path: &mut Vec<Update>,
        slot: Option<usize>,
        f: &Arc<Formula>,
    ) -> Result<bool> {
        // unshared nodes are visited once anyway
        if Arc::strong_count(f) == 1 {
            return self.eval(path, slot, f);
        }
        let key = (Arc::as_ptr(f) as usize, slot);
        if let Some(&v) = self.shared.get(&key) {
            return Ok(v);
        }
        let v = self.eval(path, slot, f)?;
        self.shared.insert(key, v);
        Ok(v)
    }

    fn model(&self, slot: Option<usize>) -> &Model {
        match slot {
            None => self.root,
            Some(i) => &self.arena[i],
        }
    }

    fn slot(&mut self, path: &[Update]) -> Option<usize> {
        let (&last, parent) = path.split_last()?;
        if let Some(&i) = self.index.get(path) {
            return Some(i);
        }
        let parent_slot = self.slot(parent);
        let next = self.model(parent_slot).apply(last);
        self.arena.push(next);
        let i = self.arena.len() - 1;
        self.index.insert(path.to_vec(), i);
        Some(i)
    }

    fn eval(&mut self, path: &mut Vec<Update>, slot: Option<usize>, f: &Formula) -> Result<bool> {
        let m = self.model(slot);
        let sig = m.signature();
        Ok(match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Edge(a, b) => {
                let i = sig.agent_index(a.as_str())?;
                let j = sig.agent_index(b.as_str())?;
                if !m.mode().allows_pair(i, j) {
                    return Err(Error::InadmissibleAtom(a.to_string()));
                }
                m.edge(i, j)
            }
            Formula::Has(a, k) => {
                let i = sig.agent_index(a.as_str())?;
                let k = sig.feature_index(k.as_str())?;
                m.has(i, k)
            }
            Formula::Sim(a, b) => m.are_similar(a.as_str(), b.as_str())?,
            Formula::Pressure(a, k) => m.has_pressure(a.as_str(), k.as_str())?,
            Formula::Psi(kind) => {
                let psi = psi_formula(*kind, sig, m.mode());
                let v = self.eval(path, slot, &psi)?;
                self.scratch.push(psi);
                v
            }
            Formula::Not(x) => !self.child(path, slot, x)?,
            Formula::And(l, r) => self.child(path, slot, l)? && self.child(path, slot, r)?,
            Formula::Or(l, r) => self.child(path, slot, l)? || self.child(path, slot, r)?,
            Formula::Implies(l, r) => !self.child(path, slot, l)? || self.child(path, slot, r)?,
            Formula::Iff(l, r) => self.child(path, slot, l)? == self.child(path, slot, r)?,
            Formula::Dyn(op, x) => {
                path.push(*op);
                let child = self.slot(path);
                let v = self.child(path, child, x);
                path.pop();
                v?
            }
        })
    }
}

/// M ⊨ φ.
pub fn satisfies(model: &Model, f: &Formula) -> Result<bool> {
    Evaluator::new(model).satisfies(f)
}

/// Every atom of the model's signature, `N` atoms first, each group in
/// lexicographic order of names. In irreflexive mode `N(a,a)` is skipped.
pub fn atoms(model: &Model) -> Vec<Formula> {
    let sig = model.signature();
    let mut out = Vec::new();
    for (i, a) in sig.agents().iter().enumerate() {
        for (j, b) in sig.agents().iter().enumerate() {
            if model.mode() == LinkMode::Literal || i != j {
                out.push(Formula::Edge(a.clone(), b.clone()));
            }
        }
    }
    for a in sig.agents() {
        for f in sig.features() {
            out.push(Formula::Has(a.clone(), f.clone()));
        }
    }
    out
}

/// The first atom (in [`atoms`] order) on which the two models disagree.
pub fn first_difference(m1: &Model, m2: &Model) -> Result<Option<Formula>> {
    if !m1.comparable(m2) {
        return Err(Error::SignatureMismatch);
    }
    for atom in atoms(m1) {
        if satisfies(m1, &atom)? != satisfies(m2, &atom)? {
            return Ok(Some(atom));
        }
    }
    Ok(None)
}

/// Whether two models satisfy exactly the same atoms.
pub fn atomic_agreement(m1: &Model, m2: &Model) -> Result<bool> {
    Ok(first_difference(m1, m2)?.is_none())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    /// An atom satisfied by exactly one of the two updated models.
    pub witness: Option<Formula>,
}

impl EquivalenceReport {
    pub fn equivalent(&self) -> bool {
        self.witness.is_none()
    }
}

/// Whether `s1` and `s2` lead from `model` to the same model.
pub fn sequences_equivalent(
    model: &Model,
    s1: &UpdateSequence,
    s2: &UpdateSequence,
) -> EquivalenceReport {
    let m1 = model.apply_sequence(s1);
    let m2 = model.apply_sequence(s2);
    let witness = if m1 == m2 {
        None
    } else {
        // both come from the same model, so they are comparable
        first_difference(&m1, &m2).expect("comparable models")
    };
    EquivalenceReport { witness }
}
