//! Check lists shared by every verification routine.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
            Status::Inconclusive => "inconclusive",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// An ordered list of named checks.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, id: impl Into<String>, status: Status, witness: Option<String>) {
        self.checks.push(Check { id: id.into(), status, witness });
    }

    pub fn pass(&mut self, id: impl Into<String>) {
        self.push(id, Status::Pass, None);
    }

    pub fn fail(&mut self, id: impl Into<String>, witness: impl Into<String>) {
        self.push(id, Status::Fail, Some(witness.into()));
    }

    pub fn skip(&mut self, id: impl Into<String>, reason: impl Into<String>) {
        self.push(id, Status::Skip, Some(reason.into()));
    }

    pub fn inconclusive(&mut self, id: impl Into<String>, reason: impl Into<String>) {
        self.push(id, Status::Inconclusive, Some(reason.into()));
    }

    /// Pass when `ok`, otherwise fail with the lazily built witness.
    pub fn check(&mut self, id: impl Into<String>, ok: bool, witness: impl FnOnce() -> String) -> bool {
        if ok {
            self.pass(id);
        } else {
            self.fail(id, witness());
        }
        ok
    }

    /// Pass on `Ok`, fail with the error text on `Err`.
    pub fn record<T, E: fmt::Display>(&mut self, id: impl Into<String>, r: &Result<T, E>) -> bool {
        match r {
            Ok(_) => {
                self.pass(id);
                true
            }
            Err(e) => {
                self.fail(id, e.to_string());
                false
            }
        }
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    /// Append `other` with every id prefixed by `prefix`.
    pub fn extend_prefixed(&mut self, prefix: &str, other: Report) {
        self.checks.extend(other.checks.into_iter().map(|mut c| {
            c.id = format!("{prefix}{}", c.id);
            c
        }));
    }

    pub fn has_fail(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn status_of(&self, id: &str) -> Option<Status> {
        self.checks.iter().find(|c| c.id == id).map(|c| c.status)
    }

    pub fn get(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// `fail` if anything failed, else `inconclusive` if anything was
    /// inconclusive, else `pass`. Skipped checks do not count.
    pub fn overall(&self) -> Status {
        if self.has_fail() {
            Status::Fail
        } else if self.checks.iter().any(|c| c.status == Status::Inconclusive) {
            Status::Inconclusive
        } else {
            Status::Pass
        }
    }

    /// Failed checks formatted one per line.
    pub fn failures(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| c.status == Status::Fail)
            .map(|c| format!("{}: {}", c.id, c.witness.as_deref().unwrap_or("")))
            .collect()
    }
}
