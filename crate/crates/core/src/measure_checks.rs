//! Executable checkers for the biased-measure toolbox: Russo's identity, the
//! biased Erdős–Ko–Rado bound, Harris/FKG, the biased isoperimetric
//! inequality, monotonicity of `log_p μ_p`, the Chernoff lower-tail bound, the
//! going-up lemma, the FKG union bound and influence duality.

use std::cmp::Ordering;

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::binom::binom;
use crate::construction::as_dictatorship;
use crate::error::{LabError, Result};
use crate::family::SetFamily;
use crate::measure::{binomial_lower_tail, binomial_tail, derivative_at, integral_of_influence, mu, total_influence};
use crate::rational::{exact_log, fmt_rational, ratio, require_prob, Interval, ProbRange};
use crate::verdict::{CheckOutcome, Verdict};

/// Precision used when a certified float comparison can settle a question
/// faster than exact big-integer arithmetic.
const FILTER_PRECISIONS: [u32; 3] = [256, 1024, 4096];

/// Above this many bits per side the exponent-cleared comparison is preceded
/// by a certified interval filter.
const EXACT_POWER_BIT_BUDGET: u64 = 1 << 26;

fn require_increasing(f: &SetFamily) -> Result<()> {
    if f.is_increasing() {
        Ok(())
    } else {
        Err(LabError::NotIncreasing)
    }
}

/// Russo's identity `d/dp μ_p(F) = I^p[F]` for increasing `F`, compared exactly.
pub fn check_russo(f: &SetFamily, p: &Rational) -> Result<CheckOutcome> {
    require_increasing(f)?;
    require_prob(p, ProbRange::Closed01)?;
    let derivative = derivative_at(f, p)?;
    let influence = total_influence(f, p)?;
    Ok(CheckOutcome::equal("derivative", &derivative, "total_influence", &influence))
}

/// `∫_p^{hi} I^q[F] dq = μ_{hi}(F) − μ_p(F)` for increasing `F`.
pub fn check_integral_identity(f: &SetFamily, p: &Rational, hi: &Rational) -> Result<CheckOutcome> {
    require_increasing(f)?;
    let integral = integral_of_influence(f, p, hi)?;
    let diff = mu(f, hi)? - mu(f, p)?;
    Ok(CheckOutcome::equal("integral", &integral, "measure_difference", &diff))
}

/// `μ_p(F) + μ_{1-p}(F*) = 1`.
pub fn check_measure_duality(f: &SetFamily, p: &Rational) -> Result<CheckOutcome> {
    require_prob(p, ProbRange::Closed01)?;
    let q = Rational::from(1 - p.clone());
    let sum = mu(f, p)? + mu(&f.dual(), &q)?;
    Ok(CheckOutcome::equal("sum", &sum, "one", &Rational::from(1)))
}

/// Biased EKR: an intersecting `F` has `μ_p(F) ≤ p` for `0 < p ≤ 1/2`, and for
/// `p < 1/2` equality forces a dictatorship. The outcome records the
/// dictatorship found (`dictatorship`), or `none`.
pub fn check_biased_ekr(f: &SetFamily, p: &Rational) -> Result<CheckOutcome> {
    if !f.is_intersecting() {
        return Err(LabError::NotIntersecting);
    }
    require_prob(p, ProbRange::UpToHalf)?;
    let measure = mu(f, p)?;
    let dictator = as_dictatorship(f);
    let mut out = CheckOutcome::at_least("p", p, "measure", &measure);
    if out.equality && *p < ratio(1, 2) && dictator.is_none() {
        out.verdict = Verdict::Fails { witness: "equality attained by a family that is not a dictatorship".into() };
    }
    Ok(out.with("dictatorship", dictator.map_or_else(|| "none".to_string(), |j| j.to_string())))
}

fn require_monotone(families: &[&SetFamily]) -> Result<()> {
    if families.iter().all(|f| f.is_increasing()) || families.iter().all(|f| f.is_decreasing()) {
        Ok(())
    } else {
        Err(LabError::NotMonotone)
    }
}

/// Harris: `μ_p(A ∩ B) ≥ μ_p(A) μ_p(B)` for two increasing (or two decreasing) families.
pub fn check_harris(a: &SetFamily, b: &SetFamily, p: &Rational) -> Result<CheckOutcome> {
    check_harris_many(&[a, b], p)
}

/// `μ_p(A_1 ∩ … ∩ A_r) ≥ Π μ_p(A_i)`.
pub fn check_harris_many(families: &[&SetFamily], p: &Rational) -> Result<CheckOutcome> {
    if families.is_empty() {
        return Err(LabError::param("at least one family is required"));
    }
    require_monotone(families)?;
    require_prob(p, ProbRange::Open01)?;
    let mut inter = families[0].clone();
    let mut product = Rational::from(1);
    for f in families {
        inter = inter.intersection(f)?;
        product *= mu(f, p)?;
    }
    let lhs = mu(&inter, p)?;
    Ok(CheckOutcome::at_least("measure_of_intersection", &lhs, "product_of_measures", &product))
}

/// Biased isoperimetry `p I^p[A] ≥ μ_p(A) log_p μ_p(A)` for increasing `A`.
///
/// Multiplying by `ln p < 0` turns the inequality into `p^{p I} ≤ μ^{μ}`.
/// Both exponents are rational; raising to their common denominator gives a
/// comparison of integer powers, settled with big integers. `μ ∈ {0, 1}` is
/// reported as holding (the limit of `x log x`).
pub fn check_biased_iso(a: &SetFamily, p: &Rational) -> Result<CheckOutcome> {
    require_increasing(a)?;
    require_prob(p, ProbRange::Open01)?;
    let measure = mu(a, p)?;
    let infl = total_influence(a, p)?;
    let lhs_coeff = Rational::from(p * &infl);
    let base = CheckOutcome::new(Verdict::Holds, false)
        .with("p_times_influence", fmt_rational(&lhs_coeff))
        .with("measure", fmt_rational(&measure));
    if measure == 0 || measure == 1 {
        return Ok(CheckOutcome { equality: lhs_coeff == 0, ..base.with("convention", "measure in {0,1}") });
    }
    let (ord, method) = compare_powers(p, &lhs_coeff, &measure);
    // ord compares p^{pI} with μ^{μ}
    let verdict = match ord {
        Ordering::Greater => Verdict::Fails {
            witness: format!(
                "p·I = {} < μ log_p μ with μ = {}",
                fmt_rational(&lhs_coeff),
                fmt_rational(&measure)
            ),
        },
        _ => Verdict::Holds,
    };
    Ok(CheckOutcome { verdict, equality: ord == Ordering::Equal, ..base.with("decided_by", method) })
}

/// Orders `base^{e1}` against `x^{e2}` for `0 < base, x < 1` and rational
/// `e1, e2 > 0`.
fn compare_powers(base: &Rational, e1: &Rational, x: &Rational) -> (Ordering, &'static str) {
    let d = Integer::from(e1.denom().lcm_ref(x.denom()));
    let mut xe = Rational::from(e1 * &d).into_numer_denom().0;
    let mut ye = Rational::from(x * &d).into_numer_denom().0;
    let g = Integer::from(xe.gcd_ref(&ye));
    xe /= &g;
    ye /= &g;
    let bits = |e: &Integer, q: &Rational| {
        let w = q.numer().significant_bits().max(q.denom().significant_bits()) as u64;
        e.to_u64().map(|e| e.saturating_mul(w)).unwrap_or(u64::MAX)
    };
    let cost = bits(&xe, base).saturating_add(bits(&ye, x));
    if cost > EXACT_POWER_BIT_BUDGET {
        // ln(base^{e1}) = e1 ln base versus e2 ln x, certified
        for prec in FILTER_PRECISIONS {
            let l = Interval::from_rational(prec, e1).mul(&Interval::from_rational(prec, base).ln());
            let r = Interval::from_rational(prec, x).mul(&Interval::from_rational(prec, x).ln());
            if let Some(ord) = l.compare(&r) {
                if ord != Ordering::Equal {
                    return (ord, "certified-interval");
                }
            }
        }
    }
    let (Some(xe), Some(ye)) = (xe.to_u32(), ye.to_u32()) else {
        panic!("exponents too large for an exact power comparison");
    };
    // (a/b)^X vs (c/d)^Y  <=>  a^X d^Y vs c^Y b^X
    let lhs = Integer::from(base.numer().pow(xe)) * Integer::from(x.denom().pow(ye));
    let rhs = Integer::from(x.numer().pow(ye)) * Integer::from(base.denom().pow(xe));
    (lhs.cmp(&rhs), "exponent-cleared")
}

/// `p ↦ log_p μ_p(A)` is non-increasing: checks `log_{p1} μ_{p1} ≥ log_{p2} μ_{p2}`.
///
/// When both logarithms are rational the comparison is exact. Otherwise
/// `ln μ1 · ln p2 ≥ ln μ2 · ln p1` is evaluated with outward-rounded
/// intervals at `precision` bits, and overlapping intervals give
/// `Indeterminate` so the caller can escalate.
pub fn check_logp_monotone(a: &SetFamily, p1: &Rational, p2: &Rational, precision: u32) -> Result<CheckOutcome> {
    require_increasing(a)?;
    require_prob(p1, ProbRange::Open01)?;
    require_prob(p2, ProbRange::Open01)?;
    if p1 >= p2 {
        return Err(LabError::param("need p1 < p2"));
    }
    let m1 = mu(a, p1)?;
    let m2 = mu(a, p2)?;
    if m1 == 0 {
        return Err(LabError::param("μ_{p1}(A) must be positive"));
    }
    if let (Some(l1), Some(l2)) = (exact_log(p1, &m1), exact_log(p2, &m2)) {
        let out = CheckOutcome::at_least("log_p1_mu1", &l1, "log_p2_mu2", &l2);
        return Ok(out.with("decided_by", "exact-rational-logs"));
    }
    let prec = precision.max(16);
    let ln_m1 = Interval::from_rational(prec, &m1).ln();
    let ln_m2 = Interval::from_rational(prec, &m2).ln();
    let ln_p1 = Interval::from_rational(prec, p1).ln();
    let ln_p2 = Interval::from_rational(prec, p2).ln();
    let lhs = ln_m1.mul(&ln_p2);
    let rhs = ln_m2.mul(&ln_p1);
    let approx_l1 = ln_m1.midpoint_f64() / ln_p1.midpoint_f64();
    let approx_l2 = ln_m2.midpoint_f64() / ln_p2.midpoint_f64();
    let verdict = match lhs.compare(&rhs) {
        Some(Ordering::Greater) | Some(Ordering::Equal) => Verdict::Holds,
        Some(Ordering::Less) => Verdict::Fails {
            witness: format!("log_p1 μ1 ≈ {approx_l1:.6} < log_p2 μ2 ≈ {approx_l2:.6}"),
        },
        None => Verdict::Indeterminate {
            precision_bits: prec,
            report: format!(
                "intervals overlap at {prec} bits (widths {:.3e}, {:.3e})",
                lhs.width_f64(),
                rhs.width_f64()
            ),
        },
    };
    Ok(CheckOutcome::new(verdict, false)
        .with("mu1", fmt_rational(&m1))
        .with("mu2", fmt_rational(&m2))
        .with("log_p1_mu1_approx", format!("{approx_l1:.12}"))
        .with("log_p2_mu2_approx", format!("{approx_l2:.12}"))
        .with("decided_by", "interval"))
}

/// Chernoff lower tail `Pr[X ≤ (1-δ)np] < exp(-δ² n p / 2)` for `X ~ Bin(n, p)`.
/// The tail is exact; the exponential is enclosed in an interval at
/// `precision` bits.
pub fn check_chernoff(n: u32, p: &Rational, delta: &Rational, precision: u32) -> Result<CheckOutcome> {
    require_prob(p, ProbRange::Open01)?;
    if !(*delta > 0 && *delta < 1) {
        return Err(LabError::param("δ must lie in (0, 1)"));
    }
    let threshold = Rational::from((1 - delta.clone()) * p.clone()) * n;
    let k = threshold.clone().floor().numer().to_u32().expect("threshold fits u32");
    let tail = binomial_lower_tail(n, p, k)?;
    let exponent = Rational::from(delta.clone().square() * p.clone()) * n / 2u32;
    let prec = precision.max(16);
    let bound = Interval::from_rational(prec, &exponent).neg().exp();
    let tail_iv = Interval::from_rational(prec, &tail);
    let verdict = match tail_iv.compare(&bound) {
        Some(Ordering::Less) => Verdict::Holds,
        Some(_) => Verdict::Fails {
            witness: format!("tail {} ≥ e^(-{})", fmt_rational(&tail), fmt_rational(&exponent)),
        },
        None => Verdict::Indeterminate {
            precision_bits: prec,
            report: format!("tail and bound indistinguishable at {prec} bits"),
        },
    };
    Ok(CheckOutcome::new(verdict, false)
        .with("threshold", fmt_rational(&threshold))
        .with("lower_tail", fmt_rational(&tail))
        .with("lower_tail_approx", format!("{:.12}", tail.to_f64()))
        .with("bound_exponent", fmt_rational(&exponent))
        .with("bound_approx", format!("{:.12}", bound.midpoint_f64())))
}

/// Going-up lemma: for `k`-uniform `G` with `|G| = α C(n,k)`,
/// `μ_p(G↑) ≥ α Pr[Bin(n,p) ≥ k]`.
pub fn check_going_up(g: &SetFamily, p: &Rational) -> Result<CheckOutcome> {
    require_prob(p, ProbRange::Closed01)?;
    let Some(k) = g.uniform_level()? else {
        let zero = Rational::new();
        return Ok(CheckOutcome::at_least("measure_of_up_closure", &zero, "alpha_times_tail", &zero));
    };
    let n = g.n();
    let alpha = Rational::from((g.len(), binom(n, k)));
    let rhs = alpha.clone() * binomial_tail(n, p, k)?;
    let lhs = mu(&g.up_closure(), p)?;
    Ok(CheckOutcome::at_least("measure_of_up_closure", &lhs, "alpha_times_tail", &rhs)
        .with("alpha", fmt_rational(&alpha)))
}

/// FKG union bound: intersecting `F_1, …, F_r` and `0 < p ≤ 1/2` give
/// `μ_p(F_1 ∪ … ∪ F_r) ≤ 1 − (1−p)^r`.
pub fn check_fkg_union(families: &[&SetFamily], p: &Rational) -> Result<CheckOutcome> {
    let first = families.first().ok_or_else(|| LabError::param("at least one family is required"))?;
    require_prob(p, ProbRange::UpToHalf)?;
    let mut union = SetFamily::empty(first.ground());
    for f in families {
        if !f.is_intersecting() {
            return Err(LabError::NotIntersecting);
        }
        union = union.union(f)?;
    }
    let r = families.len() as u32;
    let bound = Rational::from(1) - Rational::from(Rational::from(1 - p.clone()).pow(r));
    let lhs = mu(&union, p)?;
    Ok(CheckOutcome::at_least("bound", &bound, "measure_of_union", &lhs))
}

/// `I^p[F] = I^{1-p}[F*]`.
pub fn check_influence_duality(f: &SetFamily, p: &Rational) -> Result<CheckOutcome> {
    require_prob(p, ProbRange::Closed01)?;
    let q = Rational::from(1 - p.clone());
    let lhs = total_influence(f, p)?;
    let rhs = total_influence(&f.dual(), &q)?;
    Ok(CheckOutcome::equal("influence", &lhs, "dual_influence", &rhs))
}
