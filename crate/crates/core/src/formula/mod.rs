//! Formulas of the dynamic language and their concrete syntax.
//!
//! Besides the primitive atoms `N(a,b)` and `has(a,f)`, the AST carries the
//! abbreviations `sim(a,b)`, `pressure(a,f)` and the ψ family as macro
//! nodes. They are evaluated semantically and only expanded on request, see
//! [`expand`].

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::{AgentId, FeatureId};
use crate::sequence::{Update, UpdateSequence};

pub mod expand;
mod parser;
mod printer;
pub(crate) mod share;

pub use expand::{expand_macros, expand_pressure, expand_similarity, psi_formula};
pub use parser::parse;

/// The four shapes of sequence that can stand in for ○: △, □, △□ and □△ⁿ.
///
/// `NetDiff(0)` is □ itself; its ψ condition is equivalent to ψ□.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PsiKind {
    Diff,
    Net,
    DiffNet,
    NetDiff(usize),
}

impl PsiKind {
    /// The update sequence this kind names.
    pub fn sequence(self) -> UpdateSequence {
        let v = match self {
            PsiKind::Diff => vec![Update::Diff],
            PsiKind::Net => vec![Update::Net],
            PsiKind::DiffNet => vec![Update::Diff, Update::Net],
            PsiKind::NetDiff(n) => {
                let mut v = vec![Update::Net];
                v.extend(std::iter::repeat_n(Update::Diff, n));
                v
            }
        };
        UpdateSequence::new(v).expect("non-empty")
    }

    /// Kinds tried when looking for a replacement of ○ on a model with
    /// `agents` agents, shortest first: △, □, △□, □△¹ … □△^(|A|-1).
    pub fn canonical_family(agents: usize) -> Vec<PsiKind> {
        let mut kinds = vec![PsiKind::Diff, PsiKind::Net, PsiKind::DiffNet];
        kinds.extend((1..agents).map(PsiKind::NetDiff));
        kinds
    }
}

impl fmt::Display for PsiKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PsiKind::Diff => f.write_str("psi_diff"),
            PsiKind::Net => f.write_str("psi_net"),
            PsiKind::DiffNet => f.write_str("psi_diffnet"),
            PsiKind::NetDiff(n) => write!(f, "psi_netdiff({n})"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    /// N_ab: `a` influences `b`.
    Edge(AgentId, AgentId),
    /// f_a: agent `a` has feature `f`.
    Has(AgentId, FeatureId),
    /// sim^ω_ab macro.
    Sim(AgentId, AgentId),
    /// f^τ_N(a) macro.
    Pressure(AgentId, FeatureId),
    Psi(PsiKind),
    Not(Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Implies(Arc<Formula>, Arc<Formula>),
    Iff(Arc<Formula>, Arc<Formula>),
    Dyn(Update, Arc<Formula>),
}

impl Formula {
    pub fn edge(a: &str, b: &str) -> Result<Formula> {
        Ok(Formula::Edge(AgentId::new(a)?, AgentId::new(b)?))
    }

    pub fn has(a: &str, f: &str) -> Result<Formula> {
        Ok(Formula::Has(AgentId::new(a)?, FeatureId::new(f)?))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Arc::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Arc::new(l), Arc::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Arc::new(l), Arc::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Formula {
        Formula::Implies(Arc::new(l), Arc::new(r))
    }

    pub fn iff(l: Formula, r: Formula) -> Formula {
        Formula::Iff(Arc::new(l), Arc::new(r))
    }

    pub fn after(op: Update, f: Formula) -> Formula {
        Formula::Dyn(op, Arc::new(f))
    }

    /// Prefixes `f` with the operators of `seq`, first update outermost.
    pub fn after_sequence(seq: &UpdateSequence, f: Formula) -> Formula {
        seq.as_slice()
            .iter()
            .rev()
            .fold(f, |acc, &op| Formula::after(op, acc))
    }

    /// Left-nested conjunction; empty input gives `true`.
    pub fn conj(items: impl IntoIterator<Item = Formula>) -> Formula {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }

    /// Left-nested disjunction; empty input gives `false`.
    pub fn disj(items: impl IntoIterator<Item = Formula>) -> Formula {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::False)
    }

    pub fn children(&self) -> Vec<&Arc<Formula>> {
        match self {
            Formula::Not(x) | Formula::Dyn(_, x) => vec![x],
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Implies(l, r)
            | Formula::Iff(l, r) => {
                vec![l, r]
            }
            _ => vec![],
        }
    }

    /// `N(a,b)` or `has(a,f)`.
    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Edge(..) | Formula::Has(..))
    }

    pub fn node_count(&self) -> usize {
        1 + self
            .children()
            .iter()
            .map(|c| c.node_count())
            .sum::<usize>()
    }

    /// Maximum nesting of dynamic operators, not counting those hidden in
    /// ψ macros.
    pub fn dynamic_depth(&self) -> usize {
        let below = self
            .children()
            .iter()
            .map(|c| c.dynamic_depth())
            .max()
            .unwrap_or(0);
        match self {
            Formula::Dyn(..) => below + 1,
            _ => below,
        }
    }

    /// The sub-formula reached by following child indices.
    pub fn at_path(&self, path: &[usize]) -> Option<&Formula> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.children().get(i).and_then(|c| c.at_path(rest)),
        }
    }

    /// Copy of `self` with the sub-formula at `path` replaced.
    pub fn replace_at(&self, path: &[usize], new: Formula) -> Result<Formula> {
        let Some((&i, rest)) = path.split_first() else {
            return Ok(new);
        };
        let bad = || Error::InvariantViolation(format!("no child {i} on the rewrite path"));
        let sub = |c: &Arc<Formula>| c.replace_at(rest, new.clone()).map(Arc::new);
        Ok(match (self, i) {
            (Formula::Not(x), 0) => Formula::Not(sub(x)?),
            (Formula::Dyn(op, x), 0) => Formula::Dyn(*op, sub(x)?),
            (Formula::And(l, r), 0) => Formula::And(sub(l)?, r.clone()),
            (Formula::And(l, r), 1) => Formula::And(l.clone(), sub(r)?),
            (Formula::Or(l, r), 0) => Formula::Or(sub(l)?, r.clone()),
            (Formula::Or(l, r), 1) => Formula::Or(l.clone(), sub(r)?),
            (Formula::Implies(l, r), 0) => Formula::Implies(sub(l)?, r.clone()),
            (Formula::Implies(l, r), 1) => Formula::Implies(l.clone(), sub(r)?),
            (Formula::Iff(l, r), 0) => Formula::Iff(sub(l)?, r.clone()),
            (Formula::Iff(l, r), 1) => Formula::Iff(l.clone(), sub(r)?),
            _ => return Err(bad()),
        })
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Formula> {
        parse(s)
    }
}
