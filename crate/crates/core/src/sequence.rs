use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One of the three model updates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Update {
    /// Feature adoption under influence pressure (△).
    Diff,
    /// Link creation between similar agents (□).
    Net,
    /// Both at once, from the same pre-state (○).
    Sync,
}

impl Update {
    pub const ALL: [Update; 3] = [Update::Diff, Update::Net, Update::Sync];

    pub fn token(self) -> &'static str {
        match self {
            Update::Diff => "diff",
            Update::Net => "net",
            Update::Sync => "sync",
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Update::Diff => '△',
            Update::Net => '□',
            Update::Sync => '○',
        }
    }
}

impl fmt::Display for Update {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Update {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "diff" | "△" => Ok(Update::Diff),
            "net" | "□" => Ok(Update::Net),
            "sync" | "○" => Ok(Update::Sync),
            other => Err(Error::UnknownUpdate(other.to_string())),
        }
    }
}

/// A non-empty finite sequence of updates, applied left to right.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UpdateSequence(Vec<Update>);

impl UpdateSequence {
    pub fn new(updates: Vec<Update>) -> Result<Self> {
        if updates.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(UpdateSequence(updates))
    }

    pub fn single(update: Update) -> Self {
        UpdateSequence(vec![update])
    }

    /// `update` repeated `n` times; `n` must be positive.
    pub fn repeat(update: Update, n: usize) -> Result<Self> {
        Self::new(vec![update; n])
    }

    pub fn as_slice(&self) -> &[Update] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = Update> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; sequences are non-empty.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains_sync(&self) -> bool {
        self.0.contains(&Update::Sync)
    }

    pub fn then(&self, other: &UpdateSequence) -> UpdateSequence {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        UpdateSequence(v)
    }

    /// Compact symbolic form, e.g. `□△△`.
    pub fn symbols(&self) -> String {
        self.0.iter().map(|u| u.symbol()).collect()
    }
}

impl fmt::Display for UpdateSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, u) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(u.token())?;
        }
        Ok(())
    }
}

impl FromStr for UpdateSequence {
    type Err = Error;

    /// Comma-separated tokens, e.g. `diff,net,sync`.
    fn from_str(s: &str) -> Result<Self> {
        if s.trim().is_empty() {
            return Err(Error::EmptySequence);
        }
        let updates = s.split(',').map(str::parse).collect::<Result<Vec<_>>>()?;
        Self::new(updates)
    }
}
