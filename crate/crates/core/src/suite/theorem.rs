//! Runs an extremal search and compares it with the closed-form answer.
//!
//! | id           | problem                          | formula                | witness  | regime                 |
//! |--------------|----------------------------------|------------------------|----------|------------------------|
//! | `ekr`        | max intersecting                 | `C(n−1,k−1)`           | star     | `n > 2k`               |
//! | `ff-union`   | max union of 2 intersecting      | `C(n,k) − C(n−2,k)`    | `OR_2`   | `n > ½(3+√5)k`         |
//! | `main-union` | max union of r intersecting      | `C(n,k) − C(n−r,k)`    | `OR_r`   | explicit thresholds    |
//! | `matching`   | max family with `ν ≤ s`          | `C(n,k) − C(n−s,k)`    | `OR_s`   | `n ≥ (2s+1)k − s`      |
//!
//! `main-union` only has explicit thresholds for `r = 1` (EKR), `r = 2`
//! (either of the two above) and through the matching bound, so that is the
//! regime reported. Outside it the comparison is an observation.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{LabError, Result};
use crate::search::{
    ekr_regime, ff_regime, matching_regime, max_bounded_matching, max_intersecting, max_union_intersecting, or_bound,
    or_canonical, union_regime, SearchLimits, SearchOutcome, CANON_MAX,
};
use crate::verdict::{CheckOutcome, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremId {
    Ekr,
    FfUnion,
    MainUnion,
    Matching,
}

impl TheoremId {
    pub const ALL: [TheoremId; 4] = [TheoremId::Ekr, TheoremId::FfUnion, TheoremId::MainUnion, TheoremId::Matching];

    pub fn name(self) -> &'static str {
        match self {
            TheoremId::Ekr => "ekr",
            TheoremId::FfUnion => "ff-union",
            TheoremId::MainUnion => "main-union",
            TheoremId::Matching => "matching",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.name() == s.replace('_', "-"))
            .ok_or_else(|| LabError::param(format!("unknown theorem `{s}` (ekr, ff-union, main-union, matching)")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Regime {
    #[serde(rename = "IN-REGIME")]
    InRegime,
    #[serde(rename = "OUT-OF-REGIME")]
    OutOfRegime,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum TheoremStatus {
    /// In regime; optimum and every witness match.
    Confirmed,
    /// In regime; optimum matches but witnesses could not be canonicalized.
    OptimumOnly,
    /// In regime and the search disagrees with the formula.
    Contradicted,
    /// Out of regime and the search agrees anyway.
    Consistent,
    /// Out of regime and the search differs.
    Deviates,
    /// Budget ran out; nothing is claimed.
    Incomplete,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremReport {
    pub theorem: TheoremId,
    pub n: u32,
    pub k: u32,
    /// `r` or `s`; 1 for `ekr`.
    pub param: u32,
    pub regime: Regime,
    pub hypothesis: &'static str,
    pub formula: u64,
    pub optimum: u64,
    pub complete: bool,
    pub optimum_matches: bool,
    pub expected_witness: Vec<Vec<u32>>,
    pub witnesses: Vec<Vec<Vec<u32>>>,
    /// `None` when `n` is too large to canonicalize.
    pub witnesses_match: Option<bool>,
    pub unique_witness: bool,
    pub status: TheoremStatus,
    pub nodes: u64,
}

impl TheoremReport {
    /// The report as a check: HOLDS when confirmed, FAILS when contradicted,
    /// INDETERMINATE when incomplete; no verdict out of regime.
    pub fn outcome(&self) -> Option<CheckOutcome> {
        let verdict = match self.status {
            TheoremStatus::Confirmed | TheoremStatus::OptimumOnly => Verdict::Holds,
            TheoremStatus::Contradicted => Verdict::Fails {
                witness: format!("optimum {} vs formula {} (witnesses match: {:?})", self.optimum, self.formula, self.witnesses_match),
            },
            TheoremStatus::Incomplete => {
                Verdict::Indeterminate { precision_bits: 0, report: "search budget exhausted".into() }
            }
            TheoremStatus::Consistent | TheoremStatus::Deviates => return None,
        };
        Some(CheckOutcome::new(verdict, self.optimum == self.formula))
    }
}

pub fn verify_theorem(id: TheoremId, n: u32, k: u32, param: Option<u32>, limits: &SearchLimits) -> Result<TheoremReport> {
    let limits = SearchLimits { all_witnesses: true, ..limits.clone() };
    let (param, in_regime, hypothesis, outcome): (u32, bool, &'static str, SearchOutcome) = match id {
        TheoremId::Ekr => {
            if param.is_some_and(|p| p != 1) {
                return Err(LabError::param("ekr takes no r or s"));
            }
            (1, ekr_regime(n, k), "n > 2k", max_intersecting(n, k, &limits)?)
        }
        TheoremId::FfUnion => {
            if param.is_some_and(|p| p != 2) {
                return Err(LabError::param("ff-union is the r = 2 case"));
            }
            (2, ff_regime(n, k), "n > (3+√5)k/2", max_union_intersecting(n, k, 2, &limits)?)
        }
        TheoremId::MainUnion => {
            let r = param.ok_or_else(|| LabError::param("main-union needs r"))?;
            let hyp = match r {
                1 => "n > 2k",
                2 => "n > (3+√5)k/2 or n ≥ 5k − 2",
                _ => "n ≥ (2r+1)k − r",
            };
            (r, union_regime(n, k, r), hyp, max_union_intersecting(n, k, r, &limits)?)
        }
        TheoremId::Matching => {
            let s = param.ok_or_else(|| LabError::param("matching needs s"))?;
            (s, matching_regime(n, k, s), "n ≥ (2s+1)k − s", max_bounded_matching(n, k, s, &limits)?)
        }
    };
    let formula = or_bound(n, k, param);
    let expected = or_canonical(n, k, param.min(n))?;
    let witnesses_match =
        (n <= CANON_MAX && !outcome.witnesses.is_empty()).then(|| outcome.witnesses.iter().all(|w| *w == expected));
    let optimum_matches = outcome.optimum == formula;
    let status = match (outcome.complete, in_regime) {
        (false, _) => TheoremStatus::Incomplete,
        (true, true) => match (optimum_matches, witnesses_match) {
            (true, Some(true)) => TheoremStatus::Confirmed,
            (true, None) => TheoremStatus::OptimumOnly,
            _ => TheoremStatus::Contradicted,
        },
        (true, false) => {
            if optimum_matches && witnesses_match != Some(false) {
                TheoremStatus::Consistent
            } else {
                TheoremStatus::Deviates
            }
        }
    };
    Ok(TheoremReport {
        theorem: id,
        n,
        k,
        param,
        regime: if in_regime { Regime::InRegime } else { Regime::OutOfRegime },
        hypothesis,
        formula,
        optimum: outcome.optimum,
        complete: outcome.complete,
        optimum_matches,
        expected_witness: expected.family().member_sets(),
        witnesses: outcome.witnesses.iter().map(|w| w.family().member_sets()).collect(),
        witnesses_match,
        unique_witness: outcome.witnesses.len() == 1,
        status,
        nodes: outcome.stats.nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let limits = SearchLimits { workers: 2, ..SearchLimits::default() };
        let r = verify_theorem(TheoremId::MainUnion, 7, 2, Some(2), &limits).unwrap();
        assert_eq!((r.optimum, r.regime, r.status), (11, Regime::InRegime, TheoremStatus::Confirmed));
        assert!(r.unique_witness);
        let r = verify_theorem(TheoremId::Ekr, 5, 2, None, &limits).unwrap();
        assert_eq!((r.optimum, r.status), (4, TheoremStatus::Confirmed));
        let r = verify_theorem(TheoremId::Matching, 8, 2, Some(2), &limits).unwrap();
        assert_eq!((r.optimum, r.status), (13, TheoremStatus::Confirmed));
        let tight = SearchLimits { max_nodes: Some(5), ..limits };
        let r = verify_theorem(TheoremId::MainUnion, 9, 3, Some(2), &tight).unwrap();
        assert_eq!(r.status, TheoremStatus::Incomplete);
        assert!(r.outcome().unwrap().verdict.label() == "INDETERMINATE");
    }
}
