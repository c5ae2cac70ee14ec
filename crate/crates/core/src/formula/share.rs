//! Structural sharing for formulas.
//!
//! Reduction output is exponential as a tree but highly repetitive. The
//! reducer builds it through an [`Interner`], so equal sub-formulas are one
//! `Arc`, and the walkers here visit each shared node once.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use super::{Formula, PsiKind};
use crate::model::{AgentId, FeatureId};
use crate::sequence::Update;

pub(crate) fn id(f: &Arc<Formula>) -> usize {
    Arc::as_ptr(f) as usize
}

/// Node identity given canonical children.
#[derive(PartialEq, Eq, Hash)]
enum Key {
    True,
    False,
    Edge(AgentId, AgentId),
    Has(AgentId, FeatureId),
    Sim(AgentId, AgentId),
    Pressure(AgentId, FeatureId),
    Psi(PsiKind),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
    Iff(usize, usize),
    Dyn(Update, usize),
}

fn key(f: &Formula) -> Key {
    match f {
        Formula::True => Key::True,
        Formula::False => Key::False,
        Formula::Edge(a, b) => Key::Edge(a.clone(), b.clone()),
        Formula::Has(a, k) => Key::Has(a.clone(), k.clone()),
        Formula::Sim(a, b) => Key::Sim(a.clone(), b.clone()),
        Formula::Pressure(a, k) => Key::Pressure(a.clone(), k.clone()),
        Formula::Psi(kind) => Key::Psi(*kind),
        Formula::Not(x) => Key::Not(id(x)),
        Formula::And(l, r) => Key::And(id(l), id(r)),
        Formula::Or(l, r) => Key::Or(id(l), id(r)),
        Formula::Implies(l, r) => Key::Implies(id(l), id(r)),
        Formula::Iff(l, r) => Key::Iff(id(l), id(r)),
        Formula::Dyn(op, x) => Key::Dyn(*op, id(x)),
    }
}

/// Hash-consing table. Every `Arc` it hands out stays alive as long as the
/// interner, so pointer identities are stable keys.
#[derive(Default)]
pub(crate) struct Interner {
    table: HashMap<Key, Arc<Formula>>,
    /// Foreign nodes already canonicalized; the foreign `Arc` is kept so
    /// its address cannot be reused.
    seen: HashMap<usize, (Arc<Formula>, Arc<Formula>)>,
}

impl Interner {
    /// The canonical node for `f`, whose children must already be
    /// canonical.
    pub(crate) fn node(&mut self, f: Formula) -> Arc<Formula> {
        self.table
            .entry(key(&f))
            .or_insert_with(|| Arc::new(f))
            .clone()
    }

    /// Canonicalizes an arbitrary formula, reusing its nodes where possible.
    pub(crate) fn deep(&mut self, f: &Arc<Formula>) -> Arc<Formula> {
        if let Some((_, canon)) = self.seen.get(&id(f)) {
            return canon.clone();
        }
        let rebuilt = match &**f {
            Formula::Not(x) => self.rebuild1(f, x, Formula::Not),
            Formula::Dyn(op, x) => {
                let op = *op;
                self.rebuild1(f, x, |c| Formula::Dyn(op, c))
            }
            Formula::And(l, r) => self.rebuild2(f, l, r, Formula::And),
            Formula::Or(l, r) => self.rebuild2(f, l, r, Formula::Or),
            Formula::Implies(l, r) => self.rebuild2(f, l, r, Formula::Implies),
            Formula::Iff(l, r) => self.rebuild2(f, l, r, Formula::Iff),
            _ => f.clone(),
        };
        let canon = self.table.entry(key(&rebuilt)).or_insert(rebuilt).clone();
        self.seen.insert(id(f), (f.clone(), canon.clone()));
        canon
    }

    pub(crate) fn deep_value(&mut self, f: &Formula) -> Arc<Formula> {
        self.deep(&Arc::new(f.clone()))
    }

    fn rebuild1(
        &mut self,
        f: &Arc<Formula>,
        x: &Arc<Formula>,
        make: impl FnOnce(Arc<Formula>) -> Formula,
    ) -> Arc<Formula> {
        let x2 = self.deep(x);
        if Arc::ptr_eq(&x2, x) {
            f.clone()
        } else {
            Arc::new(make(x2))
        }
    }

    fn rebuild2(
        &mut self,
        f: &Arc<Formula>,
        l: &Arc<Formula>,
        r: &Arc<Formula>,
        make: impl FnOnce(Arc<Formula>, Arc<Formula>) -> Formula,
    ) -> Arc<Formula> {
        let l2 = self.deep(l);
        let r2 = self.deep(r);
        if Arc::ptr_eq(&l2, l) && Arc::ptr_eq(&r2, r) {
            f.clone()
        } else {
            Arc::new(make(l2, r2))
        }
    }
}

/// Calls `visit` once per distinct node of `f`, parents before children.
/// `visit` returns whether to descend.
pub(crate) fn try_visit<E>(
    f: &Formula,
    mut visit: impl FnMut(&Formula) -> Result<bool, E>,
) -> Result<(), E> {
    let mut seen: HashSet<usize> = HashSet::new();
    if !visit(f)? {
        return Ok(());
    }
    let mut stack: Vec<&Arc<Formula>> = f.children();
    while let Some(node) = stack.pop() {
        if !seen.insert(id(node)) {
            continue;
        }
        if visit(node)? {
            stack.extend(node.children());
        }
    }
    Ok(())
}

/// Replaces every occurrence of `before` by `after`, visiting each shared
/// node once. Returns the new formula and the number of distinct nodes
/// replaced.
pub(crate) fn replace_all(f: &Formula, before: &Formula, after: &Formula) -> (Formula, usize) {
    struct Sub<'a> {
        before: &'a Formula,
        after: Arc<Formula>,
        memo: HashMap<usize, Arc<Formula>>,
        hits: usize,
    }
    impl Sub<'_> {
        fn arc(&mut self, f: &Arc<Formula>) -> Arc<Formula> {
            if let Some(done) = self.memo.get(&id(f)) {
                return done.clone();
            }
            let out = match self.node(f) {
                Some(g) => Arc::new(g),
                None => f.clone(),
            };
            self.memo.insert(id(f), out.clone());
            out
        }

        /// `None` when nothing below `f` changed.
        fn node(&mut self, f: &Formula) -> Option<Formula> {
            if f == self.before {
                self.hits += 1;
                return Some((*self.after).clone());
            }
            match f {
                Formula::Not(x) => {
                    let x2 = self.arc(x);
                    (!Arc::ptr_eq(&x2, x)).then_some(Formula::Not(x2))
                }
                Formula::Dyn(op, x) => {
                    let x2 = self.arc(x);
                    (!Arc::ptr_eq(&x2, x)).then_some(Formula::Dyn(*op, x2))
                }
                Formula::And(l, r)
                | Formula::Or(l, r)
                | Formula::Implies(l, r)
                | Formula::Iff(l, r) => {
                    let l2 = self.arc(l);
                    let r2 = self.arc(r);
                    if Arc::ptr_eq(&l2, l) && Arc::ptr_eq(&r2, r) {
                        return None;
                    }
                    Some(match f {
                        Formula::And(..) => Formula::And(l2, r2),
                        Formula::Or(..) => Formula::Or(l2, r2),
                        Formula::Implies(..) => Formula::Implies(l2, r2),
                        _ => Formula::Iff(l2, r2),
                    })
                }
                _ => None,
            }
        }
    }
    let mut sub = Sub {
        before,
        after: Arc::new(after.clone()),
        memo: HashMap::new(),
        hits: 0,
    };
    let out = sub.node(f).unwrap_or_else(|| f.clone());
    (out, sub.hits)
}

impl Formula {
    /// Number of distinct nodes, counting shared sub-formulas once.
    pub fn dag_size(&self) -> usize {
        let mut n = 0;
        let _ = try_visit::<()>(self, |_| {
            n += 1;
            Ok(true)
        });
        n
    }
}
