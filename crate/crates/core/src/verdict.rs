use std::collections::BTreeMap;
use std::fmt;

use rug::Rational;
use serde::Serialize;

use crate::rational::fmt_rational;

/// Three-way outcome of an executable check.
///
/// `Indeterminate` is only produced by checkers that evaluate logarithms or
/// exponentials at a caller-chosen precision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Holds,
    Fails { witness: String },
    Indeterminate { precision_bits: u32, report: String },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Holds => "HOLDS",
            Verdict::Fails { .. } => "FAILS",
            Verdict::Indeterminate { .. } => "INDETERMINATE",
        }
    }

    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn fails(&self) -> bool {
        matches!(self, Verdict::Fails { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Verdict plus the exact quantities that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub verdict: Verdict,
    /// The inequality under test was met with equality.
    pub equality: bool,
    pub values: BTreeMap<String, String>,
}

impl CheckOutcome {
    pub fn new(verdict: Verdict, equality: bool) -> Self {
        CheckOutcome { verdict, equality, values: BTreeMap::new() }
    }

    /// `lhs ≥ rhs` decided exactly; `lhs`/`rhs` are recorded under the given names.
    pub fn at_least(lhs_name: &str, lhs: &Rational, rhs_name: &str, rhs: &Rational) -> Self {
        let verdict = if lhs >= rhs {
            Verdict::Holds
        } else {
            Verdict::Fails { witness: format!("{lhs_name} = {} < {rhs_name} = {}", fmt_rational(lhs), fmt_rational(rhs)) }
        };
        CheckOutcome::new(verdict, lhs == rhs).with(lhs_name, fmt_rational(lhs)).with(rhs_name, fmt_rational(rhs))
    }

    /// `lhs = rhs` decided exactly.
    pub fn equal(lhs_name: &str, lhs: &Rational, rhs_name: &str, rhs: &Rational) -> Self {
        let verdict = if lhs == rhs {
            Verdict::Holds
        } else {
            Verdict::Fails { witness: format!("{lhs_name} = {} ≠ {rhs_name} = {}", fmt_rational(lhs), fmt_rational(rhs)) }
        };
        CheckOutcome::new(verdict, lhs == rhs).with(lhs_name, fmt_rational(lhs)).with(rhs_name, fmt_rational(rhs))
    }

    pub fn with(mut self, key: &str, value: impl Into<String>) -> Self {
        self.values.insert(key.to_string(), value.into());
        self
    }

    pub fn holds(&self) -> bool {
        self.verdict.holds()
    }
}
