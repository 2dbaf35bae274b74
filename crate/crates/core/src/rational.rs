//! Exact rationals (backed by GMP) plus the outward-rounded intervals used by
//! the checkers that have to compare transcendental quantities.

use std::cmp::Ordering;

use rug::float::Round;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{LabError, Result};

pub type ExactRational = Rational;

/// Parses `a/b` or a bare integer `a`. Decimal notation is rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || LabError::param(format!("`{s}` is not a rational of the form a/b"));
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: Integer = num.parse().map_err(|_| bad())?;
    let den: Integer = den.parse().map_err(|_| bad())?;
    if den == 0 {
        return Err(bad());
    }
    Ok(Rational::from((num, den)))
}

/// Always `numerator/denominator`, e.g. `1/1` for one.
pub fn fmt_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::from((num, den))
}

/// Serde adapter storing a rational as its `a/b` string.
pub mod serde_str {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Checks `lo ≤ p ≤ hi` (or strict ends) and reports the admissible range.
pub(crate) fn require_prob(p: &Rational, range: ProbRange) -> Result<()> {
    let ok = match range {
        ProbRange::Closed01 => *p >= 0 && *p <= 1,
        ProbRange::Open01 => *p > 0 && *p < 1,
        ProbRange::UpToHalf => *p > 0 && *p <= ratio(1, 2),
    };
    if ok {
        Ok(())
    } else {
        Err(LabError::ProbabilityOutOfRange(fmt_rational(p), range.describe()))
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum ProbRange {
    Closed01,
    Open01,
    UpToHalf,
}

impl ProbRange {
    fn describe(self) -> &'static str {
        match self {
            ProbRange::Closed01 => "[0, 1]",
            ProbRange::Open01 => "(0, 1)",
            ProbRange::UpToHalf => "(0, 1/2]",
        }
    }
}

/// A closed interval `[lo, hi]` of MPFR floats, maintained with outward
/// rounding so the true value always lies inside.
#[derive(Clone, Debug)]
pub struct Interval {
    pub lo: Float,
    pub hi: Float,
}

impl Interval {
    pub fn from_rational(prec: u32, q: &Rational) -> Self {
        let lo = Float::with_val_round(prec, q, Round::Down).0;
        let hi = Float::with_val_round(prec, q, Round::Up).0;
        Interval { lo, hi }
    }

    /// Natural logarithm; the input interval must be strictly positive.
    pub fn ln(&self) -> Self {
        debug_assert!(self.lo > 0);
        let mut lo = self.lo.clone();
        lo.ln_round(Round::Down);
        let mut hi = self.hi.clone();
        hi.ln_round(Round::Up);
        Interval { lo, hi }
    }

    pub fn exp(&self) -> Self {
        let mut lo = self.lo.clone();
        lo.exp_round(Round::Down);
        let mut hi = self.hi.clone();
        hi.exp_round(Round::Up);
        Interval { lo, hi }
    }

    pub fn neg(&self) -> Self {
        Interval { lo: Float::with_val(self.hi.prec(), -&self.hi), hi: Float::with_val(self.lo.prec(), -&self.lo) }
    }

    pub fn mul(&self, other: &Interval) -> Self {
        let prec = self.lo.prec().max(other.lo.prec());
        let corners = [(&self.lo, &other.lo), (&self.lo, &other.hi), (&self.hi, &other.lo), (&self.hi, &other.hi)];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in corners {
            let d = Float::with_val_round(prec, a * b, Round::Down).0;
            let u = Float::with_val_round(prec, a * b, Round::Up).0;
            if lo.as_ref().is_none_or(|x| d < *x) {
                lo = Some(d);
            }
            if hi.as_ref().is_none_or(|x| u > *x) {
                hi = Some(u);
            }
        }
        Interval { lo: lo.unwrap(), hi: hi.unwrap() }
    }

    /// `Some(ordering)` when the intervals are separated (or both are the same
    /// point), `None` when they overlap.
    pub fn compare(&self, other: &Interval) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else if self.lo == self.hi && other.lo == other.hi && self.lo == other.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn midpoint_f64(&self) -> f64 {
        (self.lo.to_f64() + self.hi.to_f64()) / 2.0
    }

    pub fn width_f64(&self) -> f64 {
        Float::with_val(self.lo.prec(), &self.hi - &self.lo).to_f64()
    }
}

/// Exact logarithm: returns `e` with `base^e = x` when such a rational `e`
/// exists. Requires `0 < base < 1` and `0 < x ≤ 1`.
pub fn exact_log(base: &Rational, x: &Rational) -> Option<Rational> {
    if !(*base > 0 && *base < 1 && *x > 0 && *x <= 1) {
        return None;
    }
    if *x == 1 {
        return Some(Rational::new());
    }
    // base = g^m with g not a perfect power; then x = base^e forces x = g^w
    // for an integer w ≥ 1, and e = w/m.
    let (a, b) = (base.numer().clone(), base.denom().clone());
    let max_m = b.significant_bits();
    let mut m = 1u32;
    let mut g = base.clone();
    for cand in (2..=max_m).rev() {
        let ra = a.clone().root(cand);
        let rb = b.clone().root(cand);
        if ra.clone().pow(cand) == a && rb.clone().pow(cand) == b {
            m = cand;
            g = Rational::from((ra, rb));
            break;
        }
    }
    let mut cur = g.clone();
    let mut w = 1u32;
    while cur > *x {
        cur *= &g;
        w += 1;
    }
    (cur == *x).then(|| Rational::from((w, m)))
}

/// `base^exp` for a non-negative integer exponent.
pub fn pow_u(base: &Rational, exp: u32) -> Rational {
    Rational::from(base.pow(exp))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("2/6").unwrap(), ratio(1, 3));
        assert_eq!(parse_rational(" 3 ").unwrap(), ratio(3, 1));
        assert_eq!(parse_rational("-1/2").unwrap(), ratio(-1, 2));
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1/0").is_err());
        assert_eq!(fmt_rational(&ratio(3, 4)), "3/4");
        assert_eq!(fmt_rational(&ratio(1, 1)), "1/1");
    }

    #[test]
    fn exact_logs() {
        assert_eq!(exact_log(&ratio(1, 4), &ratio(1, 2)), Some(ratio(1, 2)));
        assert_eq!(exact_log(&ratio(1, 2), &ratio(1, 8)), Some(ratio(3, 1)));
        assert_eq!(exact_log(&ratio(4, 9), &ratio(8, 27)), Some(ratio(3, 2)));
        assert_eq!(exact_log(&ratio(1, 3), &ratio(1, 1)), Some(ratio(0, 1)));
        assert_eq!(exact_log(&ratio(1, 2), &ratio(3, 4)), None);
        assert_eq!(exact_log(&ratio(1, 3), &ratio(1, 2)), None);
    }

    #[test]
    fn interval_contains_ln_and_exp() {
        let x = Interval::from_rational(128, &ratio(7, 16)).ln();
        let truth = (7.0f64 / 16.0).ln();
        assert!(x.lo.to_f64() <= truth && truth <= x.hi.to_f64());
        let e = Interval::from_rational(128, &ratio(-1, 1)).exp();
        assert!(e.lo < e.hi);
        assert!((e.midpoint_f64() - (-1.0f64).exp()).abs() < 1e-15);
        let prod = x.mul(&x.neg());
        assert!(prod.hi < 0);
    }
}
