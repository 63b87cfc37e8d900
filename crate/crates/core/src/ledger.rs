//! Exact comparisons recorded alongside results.

use std::fmt;

use crate::arith::{fmt_q, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Le,
    Lt,
    Eq,
    Ge,
}

impl fmt::Display for Rel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rel::Le => "<=",
            Rel::Lt => "<",
            Rel::Eq => "=",
            Rel::Ge => ">=",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub label: String,
    pub lhs: Q,
    pub rel: Rel,
    pub rhs: Q,
}

impl Check {
    pub fn new(label: impl Into<String>, lhs: Q, rel: Rel, rhs: Q) -> Self {
        Check { label: label.into(), lhs, rel, rhs }
    }

    pub fn holds(&self) -> bool {
        match self.rel {
            Rel::Le => self.lhs <= self.rhs,
            Rel::Lt => self.lhs < self.rhs,
            Rel::Eq => self.lhs == self.rhs,
            Rel::Ge => self.lhs >= self.rhs,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} {} {} [{}]",
            self.label,
            fmt_q(&self.lhs),
            self.rel,
            fmt_q(&self.rhs),
            if self.holds() { "ok" } else { "FAILED" }
        )
    }
}

/// First failing check, if any.
pub fn first_failure(checks: &[Check]) -> Option<&Check> {
    checks.iter().find(|c| !c.holds())
}
