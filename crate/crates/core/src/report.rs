use std::fmt;

use serde::{Deserialize, Serialize};

/// One checked instance inside a [`VerificationReport`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub instance: String,
    pub pass: bool,
    pub detail: String,
}

/// Pass/fail record of a verification suite, one entry per checked cell.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new(name: impl Into<String>) -> Self {
        VerificationReport {
            name: name.into(),
            checks: Vec::new(),
        }
    }

    pub fn record(&mut self, instance: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            instance: instance.into(),
            pass,
            detail: detail.into(),
        });
    }

    /// Appends another report's checks, prefixing each instance with its name.
    pub fn absorb(&mut self, other: VerificationReport) {
        for c in other.checks {
            self.checks.push(Check {
                instance: format!("{} {}", other.name, c.instance),
                ..c
            });
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn len(&self) -> usize {
        self.checks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.checks.is_empty()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let failed = self.failures().count();
        writeln!(
            f,
            "{}: {} checks, {} failed",
            self.name,
            self.checks.len(),
            failed
        )?;
        for c in &self.checks {
            let tag = if c.pass { "pass" } else { "FAIL" };
            writeln!(f, "  [{tag}] {} {}", c.instance, c.detail)?;
        }
        Ok(())
    }
}
