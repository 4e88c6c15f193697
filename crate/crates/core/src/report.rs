use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::strata::TautClass;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    /// Soft checks are logged but never fail the report.
    #[serde(default = "hard_default")]
    pub hard: bool,
}

fn hard_default() -> bool {
    true
}

/// A relation `lhs = rhs` with its residual. Classes are compared after
/// expanding every truncated Mumford factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationReport {
    pub genus: u32,
    pub variant: String,
    pub lhs: TautClass,
    pub rhs: TautClass,
    pub residual: TautClass,
    #[serde(default)]
    pub checks: Vec<Check>,
    /// Emitted for inspection only; never counts as a failure.
    #[serde(default)]
    pub report_only: bool,
}

impl RelationReport {
    pub fn new(genus: u32, variant: impl Into<String>, lhs: TautClass, rhs: TautClass) -> Result<Self> {
        let residual = lhs.expanded().sub(&rhs.expanded())?;
        Ok(RelationReport { genus, variant: variant.into(), lhs, rhs, residual, checks: vec![], report_only: false })
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into(), hard: true });
    }

    pub fn note(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into(), hard: false });
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.hard && !c.passed)
    }

    /// Residual empty and every recorded check passed.
    pub fn holds(&self) -> bool {
        self.residual.is_zero() && self.failed_checks().next().is_none()
    }
}
