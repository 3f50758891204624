//! Check reports shared by every verification operation.
//!
//! A failed check always carries a serialized counterexample; a report is
//! reproducible from the seed and inputs that produced it.

use serde::Serialize;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    /// Which verification produced this line, e.g. `axioms.coordinate`.
    pub check: String,
    /// The identity being verified, written as a formula.
    pub identity: String,
    pub status: Status,
    /// Number of instances evaluated (samples plus exhaustive cases).
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl CheckReport {
    pub fn pass(check: impl Into<String>, identity: impl Into<String>, samples: usize) -> Self {
        CheckReport {
            check: check.into(),
            identity: identity.into(),
            status: Status::Pass,
            samples,
            counterexample: None,
        }
    }

    pub fn fail(
        check: impl Into<String>,
        identity: impl Into<String>,
        samples: usize,
        witness: impl Into<String>,
    ) -> Self {
        CheckReport {
            check: check.into(),
            identity: identity.into(),
            status: Status::Fail,
            samples,
            counterexample: Some(witness.into()),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Build from a boolean outcome with a lazily formatted witness.
    pub fn from_outcome(
        check: impl Into<String>,
        identity: impl Into<String>,
        samples: usize,
        witness: Option<String>,
    ) -> Self {
        match witness {
            None => CheckReport::pass(check, identity, samples),
            Some(w) => CheckReport::fail(check, identity, samples, w),
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        };
        write!(f, "[{tag}] {} :: {} ({} cases)", self.check, self.identity, self.samples)?;
        if let Some(w) = &self.counterexample {
            write!(f, "\n       counterexample: {w}")?;
        }
        Ok(())
    }
}

/// A named bundle of check reports.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn new(name: impl Into<String>) -> Self {
        SuiteReport { name: name.into(), checks: Vec::new() }
    }

    pub fn push(&mut self, r: CheckReport) {
        self.checks.push(r);
    }

    pub fn extend_with(&mut self, rs: impl IntoIterator<Item = CheckReport>) {
        self.checks.extend(rs);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed())
    }

    pub fn first_failure(&self) -> Option<&CheckReport> {
        self.checks.iter().find(|c| !c.passed())
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "== {} ==", self.name)?;
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}
