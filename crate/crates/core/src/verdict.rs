//! Three-valued search outcomes and resource budgets.
//!
//! Every reachability search in this crate can hit an undecidable or merely
//! expensive instance, so "ran out of budget" is a first-class outcome and is
//! never conflated with rejection.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Limits for a single search. Both limits are strictly positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Maximum number of distinct configurations the search may record.
    pub max_configurations: u64,
    /// Maximum number of expansion steps the search may perform.
    pub max_steps: u64,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("budget limits must be strictly positive (got configurations={max_configurations}, steps={max_steps})")]
pub struct InvalidBudget {
    pub max_configurations: u64,
    pub max_steps: u64,
}

impl Budget {
    pub fn new(max_configurations: u64, max_steps: u64) -> Result<Self, InvalidBudget> {
        if max_configurations == 0 || max_steps == 0 {
            return Err(InvalidBudget {
                max_configurations,
                max_steps,
            });
        }
        Ok(Budget {
            max_configurations,
            max_steps,
        })
    }
}

impl Default for Budget {
    /// The default used by the command-line tools: 100000 configurations and
    /// 100000 steps.
    fn default() -> Self {
        Budget {
            max_configurations: 100_000,
            max_steps: 100_000,
        }
    }
}

/// What a bounded search concluded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictKind {
    /// An accepting configuration was reached.
    Accepted,
    /// The entire reachable configuration space was exhausted without finding
    /// an accepting configuration.
    Rejected,
    /// A budget limit was hit before the space was exhausted; nothing is known.
    BudgetExhausted,
}

impl VerdictKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictKind::Accepted => "accepted",
            VerdictKind::Rejected => "rejected",
            VerdictKind::BudgetExhausted => "budget-exhausted",
        }
    }
}

/// How two verdicts on the same word relate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Agreement {
    Match,
    Mismatch,
    /// At least one side ran out of budget, so nothing can be concluded.
    Inconclusive,
}

impl Agreement {
    pub fn of(left: VerdictKind, right: VerdictKind) -> Agreement {
        if left == VerdictKind::BudgetExhausted || right == VerdictKind::BudgetExhausted {
            Agreement::Inconclusive
        } else if left == right {
            Agreement::Match
        } else {
            Agreement::Mismatch
        }
    }
}

/// One word compared under two different engines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialEntry {
    pub word: Vec<crate::symbol::Symbol>,
    pub left: VerdictKind,
    pub right: VerdictKind,
    pub agreement: Agreement,
}

impl DifferentialEntry {
    pub fn new(word: Vec<crate::symbol::Symbol>, left: VerdictKind, right: VerdictKind) -> Self {
        DifferentialEntry {
            word,
            left,
            right,
            agreement: Agreement::of(left, right),
        }
    }
}

/// Result of comparing two engines over a list of words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DifferentialReport {
    pub entries: Vec<DifferentialEntry>,
}

impl DifferentialReport {
    pub fn new(entries: Vec<DifferentialEntry>) -> Self {
        DifferentialReport { entries }
    }

    fn count(&self, agreement: Agreement) -> usize {
        self.entries
            .iter()
            .filter(|e| e.agreement == agreement)
            .count()
    }

    pub fn matches(&self) -> usize {
        self.count(Agreement::Match)
    }

    pub fn mismatches(&self) -> usize {
        self.count(Agreement::Mismatch)
    }

    pub fn inconclusive(&self) -> usize {
        self.count(Agreement::Inconclusive)
    }

    /// Every word compared conclusively and agreed.
    pub fn is_clean(&self) -> bool {
        self.mismatches() == 0 && self.inconclusive() == 0
    }
}

/// Counters reported by every search, whatever its outcome.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Distinct configurations recorded (the initial one included).
    pub configurations: u64,
    /// Expansion steps performed.
    pub steps: u64,
}

/// Outcome of a bounded search, with an engine-specific witness for
/// acceptance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict<W> {
    pub kind: VerdictKind,
    /// Present only when `kind` is `Accepted`.
    pub witness: Option<W>,
    pub stats: SearchStats,
}

impl<W> Verdict<W> {
    pub fn accepted(witness: W, stats: SearchStats) -> Self {
        Verdict {
            kind: VerdictKind::Accepted,
            witness: Some(witness),
            stats,
        }
    }

    pub fn rejected(stats: SearchStats) -> Self {
        Verdict {
            kind: VerdictKind::Rejected,
            witness: None,
            stats,
        }
    }

    pub fn budget_exhausted(stats: SearchStats) -> Self {
        Verdict {
            kind: VerdictKind::BudgetExhausted,
            witness: None,
            stats,
        }
    }

    pub fn is_accepted(&self) -> bool {
        self.kind == VerdictKind::Accepted
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_budget_is_rejected() {
        assert!(Budget::new(0, 1).is_err());
        assert!(Budget::new(1, 0).is_err());
        assert!(Budget::new(1, 1).is_ok());
    }

    #[test]
    fn default_budget_matches_cli_documentation() {
        let b = Budget::default();
        assert_eq!(b.max_configurations, 100_000);
        assert_eq!(b.max_steps, 100_000);
    }
}
