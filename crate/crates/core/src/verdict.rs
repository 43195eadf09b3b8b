//! Three-valued verdicts with certificates.

use std::fmt;

use serde::Serialize;

/// Default cap on candidate evaluations for witness searches.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    True,
    False,
    Unknown,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }

    pub fn is_true(self) -> bool {
        self == Verdict::True
    }

    pub fn is_false(self) -> bool {
        self == Verdict::False
    }

    /// `Some(b)` for definite verdicts.
    pub fn definite(self) -> Option<bool> {
        match self {
            Verdict::True => Some(true),
            Verdict::False => Some(false),
            Verdict::Unknown => None,
        }
    }

    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::False, _) | (_, Verdict::False) => Verdict::False,
            (Verdict::True, Verdict::True) => Verdict::True,
            _ => Verdict::Unknown,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::True => "true",
            Verdict::False => "false",
            Verdict::Unknown => "unknown",
        })
    }
}

/// How much a verdict or table entry can be trusted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    /// Decided exactly.
    Exact,
    /// Relative to the stored stages of a sequence.
    StageRelative,
    /// Relative to a size cap on intermediate matrices.
    CapRelative,
    /// Relative to a truncation of an infinite structure.
    TruncationRelative,
    /// Established on a random sample only.
    Sampled,
}

impl Certificate {
    /// The weaker of two certificates.
    pub fn weaker(self, other: Certificate) -> Certificate {
        self.max(other)
    }
}

/// A budgeted decision with an optional witness.
#[derive(Clone, Debug, Serialize)]
pub struct Decision<W> {
    pub verdict: Verdict,
    pub certificate: Certificate,
    pub witness: Option<W>,
    /// Candidate evaluations spent.
    pub evaluations: u64,
}

impl<W> Decision<W> {
    pub fn exact(verdict: Verdict, witness: Option<W>, evaluations: u64) -> Decision<W> {
        Decision {
            verdict,
            certificate: Certificate::Exact,
            witness,
            evaluations,
        }
    }

    pub fn unknown(evaluations: u64) -> Decision<W> {
        Decision {
            verdict: Verdict::Unknown,
            certificate: Certificate::Exact,
            witness: None,
            evaluations,
        }
    }

    pub fn map_witness<V>(self, f: impl FnOnce(W) -> V) -> Decision<V> {
        Decision {
            verdict: self.verdict,
            certificate: self.certificate,
            witness: self.witness.map(f),
            evaluations: self.evaluations,
        }
    }
}

/// Counts candidate evaluations against a cap.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub limit: u64,
    pub spent: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Budget {
        Budget { limit, spent: 0 }
    }

    /// Charges `n` evaluations; returns false once the cap is exceeded.
    #[inline]
    pub fn charge(&mut self, n: u64) -> bool {
        self.spent = self.spent.saturating_add(n);
        self.spent <= self.limit
    }

    pub fn exhausted(&self) -> bool {
        self.spent > self.limit
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_BUDGET)
    }
}
