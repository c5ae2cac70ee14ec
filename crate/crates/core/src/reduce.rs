//! Translation of dynamic formulas into the static fragment.
//!
//! Every dynamic operator is pushed inward with the reduction axioms
//!
//! ```text
//! □N_ab ↔ N_ab ∨ sim_ab    △N_ab ↔ N_ab    ○N_ab ↔ N_ab ∨ sim_ab
//! □f_a ↔ f_a               △f_a ↔ f_a ∨ pressure(a,f)   ○f_a ↔ f_a ∨ pressure(a,f)
//! op(φ ∧ ψ) ↔ opφ ∧ opψ    op¬φ ↔ ¬opφ
//! ```
//!
//! innermost operator first, leftmost first among siblings. Derived
//! connectives and macros are only unfolded when an operator has to cross
//! them, so static parts of the input come out untouched.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::formula::share::{id, replace_all, try_visit, Interner};
use crate::formula::{expand_pressure, expand_similarity, psi_formula, Formula, PsiKind};
use crate::model::{Params, Signature};
use crate::sequence::Update;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    /// `op N_ab`
    Edge(Update),
    /// `op f_a`
    Feature(Update),
    /// `op (φ ∧ ψ)`
    And(Update),
    /// `op ¬φ`
    Not(Update),
    /// `op ⊤ ↔ ⊤`, `op ⊥ ↔ ⊥`
    Constant(Update),
    /// `∨`, `→` or `↔` rewritten with `¬` and `∧`.
    Desugar,
    ExpandSimilarity,
    ExpandPressure,
    ExpandPsi,
    /// A rewrite already derived for an identical sub-formula, applied to a
    /// new occurrence.
    Reuse,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Edge(op) => write!(f, "{op}-edge"),
            Rule::Feature(op) => write!(f, "{op}-feature"),
            Rule::And(op) => write!(f, "{op}-and"),
            Rule::Not(op) => write!(f, "{op}-not"),
            Rule::Constant(op) => write!(f, "{op}-constant"),
            Rule::Desugar => f.write_str("desugar"),
            Rule::ExpandSimilarity => f.write_str("expand-sim"),
            Rule::ExpandPressure => f.write_str("expand-pressure"),
            Rule::ExpandPsi => f.write_str("expand-psi"),
            Rule::Reuse => f.write_str("reuse"),
        }
    }
}

/// One rewrite. `before` and `after` are the sub-formulas exchanged; `path`
/// (child indices from the root of the formula as it stood before the step)
/// locates the occurrence the reducer was working on. Every other
/// occurrence of `before` is rewritten by the same step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteStep {
    pub rule: Rule,
    pub path: Vec<usize>,
    pub before: Formula,
    pub after: Formula,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RewriteTrace {
    pub steps: Vec<RewriteStep>,
}

impl RewriteTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Re-applies every step to `input`, replacing all occurrences of each
    /// step's `before`. A step must match at its recorded path, except
    /// [`Rule::Reuse`] steps, whose occurrences may already be gone.
    pub fn replay(&self, input: &Formula) -> Result<Formula> {
        let mut current = input.clone();
        for (i, step) in self.steps.iter().enumerate() {
            if step.rule != Rule::Reuse && current.at_path(&step.path) != Some(&step.before) {
                return Err(Error::InvariantViolation(format!(
                    "step {i} ({}) does not match the formula",
                    step.rule
                )));
            }
            current = replace_all(&current, &step.before, &step.after).0;
        }
        Ok(current)
    }
}

/// True iff `f` has no dynamic operator, directly or inside a ψ macro.
pub fn is_static(f: &Formula) -> bool {
    try_visit(f, |node| match node {
        Formula::Dyn(..) => Err(()),
        Formula::Psi(kind) if !psi_is_static(*kind) => Err(()),
        _ => Ok(true),
    })
    .is_ok()
}

fn psi_is_static(kind: PsiKind) -> bool {
    matches!(kind, PsiKind::Diff | PsiKind::Net | PsiKind::NetDiff(0))
}

/// Checks that every name in `f` belongs to `sig` and that no `N(a,a)` atom
/// appears in irreflexive mode.
pub fn check_names(f: &Formula, sig: &Signature, params: &Params) -> Result<()> {
    try_visit(f, |node| {
        match node {
            Formula::Edge(a, b) => {
                let i = sig.agent_index(a.as_str())?;
                let j = sig.agent_index(b.as_str())?;
                if !params.mode().allows_pair(i, j) {
                    return Err(Error::InadmissibleAtom(a.to_string()));
                }
            }
            Formula::Sim(a, b) => {
                sig.agent_index(a.as_str())?;
                sig.agent_index(b.as_str())?;
            }
            Formula::Has(a, k) | Formula::Pressure(a, k) => {
                sig.agent_index(a.as_str())?;
                sig.feature_index(k.as_str())?;
            }
            _ => {}
        }
        Ok(true)
    })
}

/// Reduces `f` to the static fragment, keeping `sim`, `pressure` and static
/// ψ macros folded.
///
/// The result shares equal sub-formulas, so its [`Formula::dag_size`] stays
/// small even when the printed form is very large.
pub fn reduce(f: &Formula, sig: &Signature, params: &Params) -> Result<(Formula, RewriteTrace)> {
    reduce_with(f, sig, params, false)
}

/// Like [`reduce`]; with `expand` every remaining macro is unfolded too, so
/// the output only mentions `N` and `has` atoms.
pub fn reduce_with(
    f: &Formula,
    sig: &Signature,
    params: &Params,
    expand: bool,
) -> Result<(Formula, RewriteTrace)> {
    check_names(f, sig, params)?;
    let mut r = Reducer {
        sig,
        params,
        trace: RewriteTrace::default(),
        pool: Interner::default(),
        reduced: HashMap::new(),
        pushed: HashMap::new(),
        expanded: HashMap::new(),
    };
    let input = r.pool.deep_value(f);
    let mut path = Vec::new();
    let mut out = r.reduce(&input, &mut path)?;
    if expand {
        out = r.expand_all(&out, &mut path)?;
    }
    debug_assert!(is_static(&out));
    // hand back the caller's own root when nothing changed
    let out = if Arc::ptr_eq(&out, &input) {
        f.clone()
    } else {
        (*out).clone()
    };
    Ok((out, r.trace))
}

struct Reducer<'a> {
    sig: &'a Signature,
    params: &'a Params,
    trace: RewriteTrace,
    pool: Interner,
    /// Keyed by canonical node address.
    reduced: HashMap<usize, Arc<Formula>>,
    pushed: HashMap<(Update, usize), Arc<Formula>>,
    expanded: HashMap<usize, Arc<Formula>>,
}

impl Reducer<'_> {
    fn record(&mut self, rule: Rule, path: &[usize], before: &Arc<Formula>, after: &Arc<Formula>) {
        self.trace.steps.push(RewriteStep {
            rule,
            path: path.to_vec(),
            before: (**before).clone(),
            after: (**after).clone(),
        });
    }

    fn with_child<T>(
        &mut self,
        path: &mut Vec<usize>,
        i: usize,
        go: impl FnOnce(&mut Self, &mut Vec<usize>) -> Result<T>,
    ) -> Result<T> {
        path.push(i);
        let out = go(self, path);
        path.pop();
        out
    }

    fn node(&mut self, f: Formula) -> Arc<Formula> {
        self.pool.node(f)
    }

    fn not(&mut self, x: Arc<Formula>) -> Arc<Formula> {
        self.node(Formula::Not(x))
    }

    fn and(&mut self, l: Arc<Formula>, r: Arc<Formula>) -> Arc<Formula> {
        self.node(Formula::And(l, r))
    }

    /// `φ ∨ ψ`, `φ → ψ` and `φ ↔ ψ` in terms of `¬` and `∧`.
    fn desugar(&mut self, f: &Formula) -> Arc<Formula> {
        match f {
            Formula::Or(l, r) => {
                let (nl, nr) = (self.not(l.clone()), self.not(r.clone()));
                let both = self.and(nl, nr);
                self.not(both)
            }
            Formula::Implies(l, r) => {
                let nr = self.not(r.clone());
                let both = self.and(l.clone(), nr);
                self.not(both)
            }
            Formula::Iff(l, r) => {
                let nr = self.not(r.clone());
                let nl = self.not(l.clone());
                let lr = self.and(l.clone(), nr);
                let rl = self.and(r.clone(), nl);
                let (a, b) = (self.not(lr), self.not(rl));
                self.and(a, b)
            }
            _ => unreachable!("desugar on a primitive connective"),
        }
    }

    fn macro_definition(&mut self, f: &Formula) -> Result<Option<(Rule, Arc<Formula>)>> {
        let (rule, def) = match f {
            Formula::Sim(a, b) => (
                Rule::ExpandSimilarity,
                expand_similarity(a.as_str(), b.as_str(), self.sig, self.params)?,
            ),
            Formula::Pressure(a, k) => (
                Rule::ExpandPressure,
                expand_pressure(a.as_str(), k.as_str(), self.sig, self.params)?,
            ),
            Formula::Psi(kind) => (
                Rule::ExpandPsi,
                psi_formula(*kind, self.sig, self.params.mode()),
            ),
            _ => return Ok(None),
        };
        Ok(Some((rule, self.pool.deep_value(&def))))
    }

    fn reuse(&mut self, path: &[usize], before: &Arc<Formula>, after: &Arc<Formula>) {
        if !Arc::ptr_eq(before, after) {
            self.record(Rule::Reuse, path, before, after);
        }
    }

    /// Reduces every dynamic operator at and below the canonical node `f`.
    fn reduce(&mut self, f: &Arc<Formula>, path: &mut Vec<usize>) -> Result<Arc<Formula>> {
        if let Some(done) = self.reduced.get(&id(f)).cloned() {
            self.reuse(path, f, &done);
            return Ok(done);
        }
        let out = match &**f {
            Formula::Dyn(op, body) => {
                let body = self.with_child(path, 0, |r, p| r.reduce(body, p))?;
                self.push(*op, &body, path)?
            }
            Formula::Psi(kind) if !psi_is_static(*kind) => {
                let def = self
                    .pool
                    .deep_value(&psi_formula(*kind, self.sig, self.params.mode()));
                self.record(Rule::ExpandPsi, path, f, &def);
                self.reduce(&def, path)?
            }
            Formula::Not(x) => {
                let x2 = self.with_child(path, 0, |r, p| r.reduce(x, p))?;
                if Arc::ptr_eq(&x2, x) {
                    f.clone()
                } else {
                    self.not(x2)
                }
            }
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Implies(l, r)
            | Formula::Iff(l, r) => {
                let l2 = self.with_child(path, 0, |s, p| s.reduce(l, p))?;
                let r2 = self.with_child(path, 1, |s, p| s.reduce(r, p))?;
                if Arc::ptr_eq(&l2, l) && Arc::ptr_eq(&r2, r) {
                    f.clone()
                } else {
                    self.node(match &**f {
                        Formula::And(..) => Formula::And(l2, r2),
                        Formula::Or(..) => Formula::Or(l2, r2),
                        Formula::Implies(..) => Formula::Implies(l2, r2),
                        _ => Formula::Iff(l2, r2),
                    })
                }
            }
            _ => f.clone(),
        };
        self.reduced.insert(id(f), out.clone());
        Ok(out)
    }

    /// Rewrites `op body` (sitting at `path`, with `body` static and
    /// canonical) into a static formula.
    fn push(
        &mut self,
        op: Update,
        body: &Arc<Formula>,
        path: &mut Vec<usize>,
    ) -> Result<Arc<Formula>> {
        let here = self.node(Formula::Dyn(op, body.clone()));
        if let Some(done) = self.pushed.get(&(op, id(body))).cloned() {
            self.reuse(path, &here, &done);
            return Ok(done);
        }
        let out = match &**body {
            Formula::Edge(a, b) => {
                let after = match op {
                    Update::Diff => body.clone(),
                    Update::Net | Update::Sync => {
                        let sim = self.node(Formula::Sim(a.clone(), b.clone()));
                        self.node(Formula::Or(body.clone(), sim))
                    }
                };
                self.record(Rule::Edge(op), path, &here, &after);
                after
            }
            Formula::Has(a, k) => {
                let after = match op {
                    Update::Net => body.clone(),
                    Update::Diff | Update::Sync => {
                        let p = self.node(Formula::Pressure(a.clone(), k.clone()));
                        self.node(Formula::Or(body.clone(), p))
                    }
                };
                self.record(Rule::Feature(op), path, &here, &after);
                after
            }
            Formula::True | Formula::False => {
                self.record(Rule::Constant(op), path, &here, body);
                body.clone()
            }
            Formula::Not(x) => {
                let inner = self.node(Formula::Dyn(op, x.clone()));
                let mid = self.not(inner);
                self.record(Rule::Not(op), path, &here, &mid);
                let x2 = self.with_child(path, 0, |r, p| r.push(op, x, p))?;
                self.not(x2)
            }
            Formula::And(l, r) => {
                let (dl, dr) = (
                    self.node(Formula::Dyn(op, l.clone())),
                    self.node(Formula::Dyn(op, r.clone())),
                );
                let mid = self.and(dl, dr);
                self.record(Rule::And(op), path, &here, &mid);
                let l2 = self.with_child(path, 0, |s, p| s.push(op, l, p))?;
                let r2 = self.with_child(path, 1, |s, p| s.push(op, r, p))?;
                self.and(l2, r2)
            }
            Formula::Or(..) | Formula::Implies(..) | Formula::Iff(..) => {
                let plain = self.desugar(body);
                let scoped = self.node(Formula::Dyn(op, plain.clone()));
                self.record(Rule::Desugar, path, &here, &scoped);
                self.push(op, &plain, path)?
            }
            Formula::Sim(..) | Formula::Pressure(..) | Formula::Psi(..) => {
                let (rule, def) = self.macro_definition(body)?.expect("macro node");
                let scoped = self.node(Formula::Dyn(op, def.clone()));
                self.record(rule, path, &here, &scoped);
                // only static ψ kinds reach this point
                self.push(op, &def, path)?
            }
            Formula::Dyn(..) => {
                return Err(Error::InvariantViolation(
                    "operator body is not static".into(),
                ))
            }
        };
        self.pushed.insert((op, id(body)), out.clone());
        Ok(out)
    }

    /// Unfolds every macro left in a static canonical formula.
    fn expand_all(&mut self, f: &Arc<Formula>, path: &mut Vec<usize>) -> Result<Arc<Formula>> {
        if let Some(done) = self.expanded.get(&id(f)).cloned() {
            self.reuse(path, f, &done);
            return Ok(done);
        }
        let out = if let Some((rule, def)) = self.macro_definition(f)? {
            self.record(rule, path, f, &def);
            self.expand_all(&def, path)?
        } else {
            match &**f {
                Formula::Not(x) => {
                    let x2 = self.with_child(path, 0, |r, p| r.expand_all(x, p))?;
                    if Arc::ptr_eq(&x2, x) {
                        f.clone()
                    } else {
                        self.not(x2)
                    }
                }
                Formula::And(l, r)
                | Formula::Or(l, r)
                | Formula::Implies(l, r)
                | Formula::Iff(l, r) => {
                    let l2 = self.with_child(path, 0, |s, p| s.expand_all(l, p))?;
                    let r2 = self.with_child(path, 1, |s, p| s.expand_all(r, p))?;
                    if Arc::ptr_eq(&l2, l) && Arc::ptr_eq(&r2, r) {
                        f.clone()
                    } else {
                        self.node(match &**f {
                            Formula::And(..) => Formula::And(l2, r2),
                            Formula::Or(..) => Formula::Or(l2, r2),
                            Formula::Implies(..) => Formula::Implies(l2, r2),
                            _ => Formula::Iff(l2, r2),
                        })
                    }
                }
                _ => f.clone(),
            }
        };
        self.expanded.insert(id(f), out.clone());
        Ok(out)
    }
}
