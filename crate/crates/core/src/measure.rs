//! Exact p-biased measures, influences and the measure polynomial
//! `q ↦ μ_q(F)`.
//!
//! Everything is evaluated in the level basis `q^l (1-q)^{n-l}`: a family is
//! summarised by its profile `(a_0, …, a_n)` and `μ_q(F) = Σ a_l q^l (1-q)^{n-l}`.
//! For `q = a/d` that sum is `Σ a_l a^l (d-a)^{n-l} / d^n`, an integer
//! computation followed by a single division.

use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::Serialize;

use crate::binom::{binom, binom_big};
use crate::error::{LabError, Result};
use crate::family::SetFamily;
use crate::rational::{require_prob, ProbRange};

/// Level counts `(a_0, …, a_n)` of a family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Profile {
    n: u32,
    counts: Vec<u64>,
}

impl Profile {
    pub fn new(n: u32, counts: Vec<u64>) -> Result<Self> {
        if counts.len() != n as usize + 1 {
            return Err(LabError::param(format!("profile of length {} for n = {n}", counts.len())));
        }
        for (l, &c) in counts.iter().enumerate() {
            if c > binom(n, l as u32) {
                return Err(LabError::param(format!("a_{l} = {c} exceeds C({n},{l})")));
            }
        }
        Ok(Profile { n, counts })
    }

    pub fn of(f: &SetFamily) -> Self {
        Profile { n: f.n(), counts: f.profile_counts() }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn measure(&self, p: &Rational) -> Rational {
        level_basis_eval(self.n, &self.counts, p)
    }
}

/// `Σ_l c_l p^l (1-p)^{n-l}` for arbitrary non-negative level weights.
pub fn level_basis_eval(n: u32, counts: &[u64], p: &Rational) -> Rational {
    let weights: Vec<Integer> = counts.iter().map(|&c| Integer::from(c)).collect();
    level_basis_eval_big(n, &weights, p)
}

fn level_basis_eval_big(n: u32, counts: &[Integer], p: &Rational) -> Rational {
    let a = p.numer().clone();
    let d = p.denom().clone();
    let b = Integer::from(&d - &a);
    let mut pow_a = vec![Integer::from(1)];
    let mut pow_b = vec![Integer::from(1)];
    for _ in 0..n {
        let next_a = Integer::from(pow_a.last().unwrap() * &a);
        pow_a.push(next_a);
        let next_b = Integer::from(pow_b.last().unwrap() * &b);
        pow_b.push(next_b);
    }
    let mut num = Integer::new();
    for (l, c) in counts.iter().enumerate() {
        if *c != 0 {
            num += Integer::from(&pow_a[l] * &pow_b[n as usize - l]) * c;
        }
    }
    let den = Integer::from((&d).pow(n));
    Rational::from((num, den))
}

/// `μ_p(F)`.
pub fn mu(f: &SetFamily, p: &Rational) -> Result<Rational> {
    require_prob(p, ProbRange::Closed01)?;
    Ok(Profile::of(f).measure(p))
}

/// Members whose membership flips when `element` is toggled.
pub fn boundary(f: &SetFamily, element: u32) -> Result<SetFamily> {
    if element == 0 || element > f.n() {
        return Err(LabError::ElementOutOfRange { element, n: f.n() });
    }
    f.symmetric_difference(&f.flip(element))
}

/// `Inf_i^p[F] = μ_p({S : F(S) ≠ F(S △ {i})})`.
pub fn influence(f: &SetFamily, element: u32, p: &Rational) -> Result<Rational> {
    require_prob(p, ProbRange::Closed01)?;
    Ok(Profile::of(&boundary(f, element)?).measure(p))
}

/// Level counts of all boundary sets, summed over the coordinates.
pub fn influence_counts(f: &SetFamily) -> Vec<u64> {
    let mut acc = vec![0u64; f.n() as usize + 1];
    for i in 1..=f.n() {
        let b = boundary(f, i).expect("coordinate in range");
        for (slot, c) in acc.iter_mut().zip(b.profile_counts()) {
            *slot += c;
        }
    }
    acc
}

/// `I^p[F] = Σ_i Inf_i^p[F]`.
pub fn total_influence(f: &SetFamily, p: &Rational) -> Result<Rational> {
    require_prob(p, ProbRange::Closed01)?;
    Ok(level_basis_eval(f.n(), &influence_counts(f), p))
}

/// Dense polynomial with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Rational::new());
        }
        Polynomial { coeffs }
    }

    /// Expands `Σ_l c_l q^l (1-q)^{n-l}` into monomials.
    pub fn from_level_basis(n: u32, counts: &[u64]) -> Self {
        let mut coeffs = vec![Integer::new(); n as usize + 1];
        for (l, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let rest = n - l as u32;
            for j in 0..=rest {
                let term = Integer::from(binom(rest, j)) * c;
                if j % 2 == 0 {
                    coeffs[l + j as usize] += term;
                } else {
                    coeffs[l + j as usize] -= term;
                }
            }
        }
        Polynomial::new(coeffs.into_iter().map(Rational::from).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn derivative(&self) -> Polynomial {
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(i, c)| Rational::from(c * i as u32)).collect();
        Polynomial::new(coeffs)
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Polynomial {
        let mut coeffs = vec![Rational::new()];
        coeffs.extend(self.coeffs.iter().enumerate().map(|(i, c)| Rational::from(c / (i as u32 + 1))));
        Polynomial::new(coeffs)
    }

    pub fn definite_integral(&self, lo: &Rational, hi: &Rational) -> Rational {
        let anti = self.antiderivative();
        anti.eval(hi) - anti.eval(lo)
    }
}

/// `q ↦ μ_q(F)`, kept both in the level basis and expanded.
#[derive(Clone, Debug)]
pub struct MeasurePolynomial {
    profile: Profile,
    expanded: Polynomial,
}

impl MeasurePolynomial {
    pub fn of(f: &SetFamily) -> Self {
        let profile = Profile::of(f);
        let expanded = Polynomial::from_level_basis(profile.n, &profile.counts);
        MeasurePolynomial { profile, expanded }
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn expanded(&self) -> &Polynomial {
        &self.expanded
    }

    pub fn eval(&self, q: &Rational) -> Rational {
        self.expanded.eval(q)
    }

    pub fn derivative(&self) -> Polynomial {
        self.expanded.derivative()
    }
}

pub fn measure_polynomial(f: &SetFamily) -> MeasurePolynomial {
    MeasurePolynomial::of(f)
}

/// `q ↦ I^q[F]` as an expanded polynomial.
pub fn influence_polynomial(f: &SetFamily) -> Polynomial {
    Polynomial::from_level_basis(f.n(), &influence_counts(f))
}

/// Exact derivative of `q ↦ μ_q(F)` at `p`.
pub fn derivative_at(f: &SetFamily, p: &Rational) -> Result<Rational> {
    require_prob(p, ProbRange::Closed01)?;
    Ok(MeasurePolynomial::of(f).derivative().eval(p))
}

/// `∫_{lo}^{hi} I^q[F] dq`, integrating the influence polynomial exactly.
pub fn integral_of_influence(f: &SetFamily, lo: &Rational, hi: &Rational) -> Result<Rational> {
    require_prob(lo, ProbRange::Closed01)?;
    require_prob(hi, ProbRange::Closed01)?;
    if lo > hi {
        return Err(LabError::param("integration bounds out of order"));
    }
    Ok(influence_polynomial(f).definite_integral(lo, hi))
}

/// `Pr[Bin(n, p) ≥ k]`, exactly.
pub fn binomial_tail(n: u32, p: &Rational, k: u32) -> Result<Rational> {
    require_prob(p, ProbRange::Closed01)?;
    let counts: Vec<Integer> = (0..=n).map(|j| if j >= k { binom_big(n, j) } else { Integer::new() }).collect();
    Ok(level_basis_eval_big(n, &counts, p))
}

/// `Pr[Bin(n, p) ≤ k]`, exactly.
pub fn binomial_lower_tail(n: u32, p: &Rational, k: u32) -> Result<Rational> {
    require_prob(p, ProbRange::Closed01)?;
    let counts: Vec<Integer> = (0..=n).map(|j| if j <= k { binom_big(n, j) } else { Integer::new() }).collect();
    Ok(level_basis_eval_big(n, &counts, p))
}
