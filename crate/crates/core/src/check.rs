//! Named pass/fail records shared by the structural check suites.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Pass,
    Fail(String),
    /// Hypothesis of the check does not apply to this instance.
    Skipped(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub checks: Vec<Check>,
}

impl CheckReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, name: &str, outcome: Outcome) {
        self.checks.push(Check { name: name.to_string(), outcome });
    }

    /// Records `Pass` when `ok`, otherwise `Fail(detail())`.
    pub fn expect(&mut self, name: &str, ok: bool, detail: impl FnOnce() -> String) {
        let outcome = if ok { Outcome::Pass } else { Outcome::Fail(detail()) };
        self.record(name, outcome);
    }

    pub fn skip(&mut self, name: &str, why: &str) {
        self.record(name, Outcome::Skipped(why.to_string()));
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| matches!(c.outcome, Outcome::Fail(_)))
    }

    pub fn count(&self, pred: impl Fn(&Outcome) -> bool) -> usize {
        self.checks.iter().filter(|c| pred(&c.outcome)).count()
    }

    pub fn get(&self, name: &str) -> Option<&Outcome> {
        self.checks.iter().find(|c| c.name == name).map(|c| &c.outcome)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            match &c.outcome {
                Outcome::Pass => writeln!(f, "  pass  {}", c.name)?,
                Outcome::Fail(why) => writeln!(f, "  FAIL  {}: {why}", c.name)?,
                Outcome::Skipped(why) => writeln!(f, "  skip  {}: {why}", c.name)?,
            }
        }
        Ok(())
    }
}
