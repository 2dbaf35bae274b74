//! Every checker and computation reachable from suites and the command line.
//! Parameters are `key=value` strings; families are given as expressions
//! (see [`super::expr`]) and probabilities as `a/b`.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use rug::Rational;
use serde_json::{json, Value};

use crate::construction::Construction;
use crate::cross::{
    check_cross_combination, check_hilton, check_indicator_claim, find_t, hilton_extremal_probe, min_sufficient_t0,
};
use crate::error::{LabError, Result};
use crate::family::{GroundSet, Mask, SetFamily};
use crate::measure::{
    binomial_tail, derivative_at, influence, integral_of_influence, measure_polynomial, mu, total_influence,
};
use crate::measure_checks::*;
use crate::rational::{fmt_rational, parse_rational};
use crate::search::{
    canonicalize, ff_crossover_scan, max_bounded_matching, max_intersecting, max_union_intersecting, SearchLimits,
    SearchOutcome,
};
use crate::shadows::{check_kk_chain, check_local_lym, kk_min_upper_shadow, lower_shadow, upper_shadow};
use crate::verdict::CheckOutcome;

use super::expr::{eval_families, eval_family};
use super::report::Record;
use super::theorem::{verify_theorem, TheoremId};

/// Settings shared by every check in a run.
#[derive(Clone, Debug)]
pub struct Context {
    /// Directory that `file(…)` paths are resolved against.
    pub base_dir: PathBuf,
    pub precision_bits: u32,
    pub limits: SearchLimits,
}

impl Default for Context {
    fn default() -> Self {
        Context { base_dir: PathBuf::from("."), precision_bits: 128, limits: SearchLimits::default() }
    }
}

pub struct CheckerInfo {
    pub id: &'static str,
    /// Parameter names; a trailing `?` marks an optional one.
    pub params: &'static [&'static str],
    pub summary: &'static str,
    run: fn(&Args) -> Result<Eval>,
}

impl CheckerInfo {
    pub fn accepts(&self, key: &str) -> bool {
        self.params.iter().any(|p| p.trim_end_matches('?') == key)
    }

    pub fn required(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.params.iter().copied().filter(|p| !p.ends_with('?'))
    }
}

#[derive(Default)]
struct Eval {
    outcome: Option<CheckOutcome>,
    values: BTreeMap<String, Value>,
}

impl Eval {
    fn check(outcome: CheckOutcome) -> Self {
        Eval { outcome: Some(outcome), values: BTreeMap::new() }
    }

    fn value(key: &str, v: impl Into<Value>) -> Self {
        Eval::default().with(key, v)
    }

    fn with(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.values.insert(key.to_string(), v.into());
        self
    }
}

struct Args<'a> {
    map: &'a BTreeMap<String, String>,
    ctx: &'a Context,
}

impl Args<'_> {
    fn raw(&self, key: &str) -> Result<&str> {
        self.map.get(key).map(String::as_str).ok_or_else(|| LabError::param(format!("missing parameter `{key}`")))
    }

    fn parse<T: std::str::FromStr>(&self, key: &str) -> Result<T> {
        let raw = self.raw(key)?;
        raw.trim().parse().map_err(|_| LabError::param(format!("parameter `{key}` = `{raw}` is not valid")))
    }

    fn parse_or<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T> {
        if self.map.contains_key(key) {
            self.parse(key)
        } else {
            Ok(default)
        }
    }

    fn q(&self, key: &str) -> Result<Rational> {
        parse_rational(self.raw(key)?)
    }

    fn n(&self) -> Result<Option<u32>> {
        if self.map.contains_key("n") {
            self.parse("n").map(Some)
        } else {
            Ok(None)
        }
    }

    fn fam(&self, key: &str) -> Result<SetFamily> {
        eval_family(self.raw(key)?, self.n()?, &self.ctx.base_dir)
    }

    fn fams(&self, key: &str) -> Result<Vec<SetFamily>> {
        eval_families(self.raw(key)?, self.n()?, &self.ctx.base_dir)
    }

    /// A comma-separated element list (possibly empty) on the ground set of `f`.
    fn mask(&self, key: &str, ground: GroundSet) -> Result<Mask> {
        let raw = self.map.get(key).map(String::as_str).unwrap_or("");
        let body = raw.trim().trim_start_matches('{').trim_end_matches('}');
        let mut elements = Vec::new();
        for tok in body.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            elements.push(tok.parse().map_err(|_| LabError::param(format!("bad element `{tok}` in `{key}`")))?);
        }
        ground.mask_of(&elements)
    }

    fn precision(&self) -> Result<u32> {
        self.parse_or("precision", self.ctx.precision_bits)
    }

    fn limits(&self) -> Result<SearchLimits> {
        let mut limits = self.ctx.limits.clone();
        limits.all_witnesses = self.parse_or("all_witnesses", limits.all_witnesses)?;
        Ok(limits)
    }
}

pub fn family_value(f: &SetFamily) -> Value {
    let mut v = json!({ "n": f.n(), "size": f.len(), "profile": f.profile_counts() });
    if f.len() <= 512 {
        v["members"] = json!(f.member_sets());
    }
    v
}

fn search_values(out: &SearchOutcome) -> Eval {
    let witnesses: Vec<Vec<Vec<u32>>> = out.witnesses.iter().map(|w| w.family().member_sets()).collect();
    Eval::value("optimum", out.optimum)
        .with("complete", out.complete)
        .with("witnesses", json!(witnesses))
        .with("nodes", out.stats.nodes)
        .with("prunes", out.stats.prunes)
        .with("units", out.stats.units)
        .with("maximal_families", out.stats.maximal_families)
}

fn q_value(q: &Rational) -> Value {
    Value::String(fmt_rational(q))
}

macro_rules! checker {
    ($id:literal, [$($p:literal),*], $summary:literal, $run:expr) => {
        CheckerInfo { id: $id, params: &[$($p),*], summary: $summary, run: $run }
    };
}

static REGISTRY: &[CheckerInfo] = &[
    // Families.
    checker!("build", ["n", "sets"], "family from explicit members `1,2;3;{}`", |a| {
        let ground = GroundSet::new(a.parse("n")?)?;
        let mut members = Vec::new();
        for part in a.raw("sets")?.split(';').filter(|s| !s.trim().is_empty()) {
            let body = part.trim().trim_start_matches('{').trim_end_matches('}');
            let mut set = Vec::new();
            for tok in body.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                set.push(tok.parse().map_err(|_| LabError::param(format!("bad element `{tok}`")))?);
            }
            members.push(set);
        }
        Ok(Eval::value("family", family_value(&SetFamily::build(ground, &members)?)))
    }),
    checker!("construct", ["n?", "f"], "evaluate a family expression", |a| {
        Ok(Eval::value("family", family_value(&a.fam("f")?)))
    }),
    checker!("slice", ["n?", "f", "l"], "members of size l", |a| {
        Ok(Eval::value("family", family_value(&a.fam("f")?.slice(a.parse("l")?)?)))
    }),
    checker!("up_closure", ["n?", "f"], "smallest increasing family containing f", |a| {
        Ok(Eval::value("family", family_value(&a.fam("f")?.up_closure())))
    }),
    checker!("dual", ["n?", "f"], "{S : [n]∖S ∉ F}", |a| Ok(Eval::value("family", family_value(&a.fam("f")?.dual())))),
    checker!("restrict", ["n?", "f", "b?", "c?"], "{S∖B : S ∈ F, S ∩ B = C} on [n]∖B", |a| {
        let f = a.fam("f")?;
        let b = a.mask("b", f.ground())?;
        let c = a.mask("c", f.ground())?;
        Ok(Eval::value("family", family_value(&f.restrict(b, c)?)))
    }),
    checker!("is_intersecting", ["n?", "f"], "every two members meet", |a| {
        Ok(Eval::value("intersecting", a.fam("f")?.is_intersecting()))
    }),
    checker!("are_cross_intersecting", ["n?", "a", "b"], "every member of a meets every member of b", |a| {
        Ok(Eval::value("cross_intersecting", a.fam("a")?.is_cross_intersecting(&a.fam("b")?)?))
    }),
    checker!("matching_number", ["n?", "f"], "largest number of pairwise disjoint members", |a| {
        Ok(Eval::value("matching_number", a.fam("f")?.matching_number()))
    }),
    checker!("boolean_algebra", ["n?", "f", "g?", "op"], "union|intersection|difference|symmetric-difference|complement", |a| {
        let f = a.fam("f")?;
        let out = match a.raw("op")? {
            "complement" => f.complement(),
            op => {
                let g = a.fam("g")?;
                match op {
                    "union" => f.union(&g)?,
                    "intersection" => f.intersection(&g)?,
                    "difference" => f.difference(&g)?,
                    "symmetric-difference" | "symmetric_difference" => f.symmetric_difference(&g)?,
                    other => return Err(LabError::param(format!("unknown operation `{other}`"))),
                }
            }
        };
        Ok(Eval::value("family", family_value(&out)))
    }),
    // Measures.
    checker!("mu", ["n?", "f", "p"], "p-biased measure", |a| Ok(Eval::value("mu", q_value(&mu(&a.fam("f")?, &a.q("p")?)?)))),
    checker!("influence", ["n?", "f", "i", "p"], "influence of element i", |a| {
        Ok(Eval::value("influence", q_value(&influence(&a.fam("f")?, a.parse("i")?, &a.q("p")?)?)))
    }),
    checker!("total_influence", ["n?", "f", "p"], "sum of all influences", |a| {
        Ok(Eval::value("total_influence", q_value(&total_influence(&a.fam("f")?, &a.q("p")?)?)))
    }),
    checker!("measure_polynomial", ["n?", "f"], "μ_p(F) as a polynomial in p", |a| {
        let poly = measure_polynomial(&a.fam("f")?);
        let coeffs: Vec<Value> = poly.expanded().coeffs().iter().map(q_value).collect();
        Ok(Eval::value("coefficients", coeffs).with("profile", json!(poly.profile().counts())))
    }),
    checker!("derivative_at", ["n?", "f", "p"], "d/dp μ_p(F)", |a| {
        Ok(Eval::value("derivative", q_value(&derivative_at(&a.fam("f")?, &a.q("p")?)?)))
    }),
    checker!("integral_of_influence", ["n?", "f", "lo", "hi"], "∫ I^q[F] dq over [lo, hi]", |a| {
        Ok(Eval::value("integral", q_value(&integral_of_influence(&a.fam("f")?, &a.q("lo")?, &a.q("hi")?)?)))
    }),
    checker!("binomial_tail", ["n", "p", "k"], "Pr[Bin(n,p) ≥ k]", |a| {
        Ok(Eval::value("tail", q_value(&binomial_tail(a.parse("n")?, &a.q("p")?, a.parse("k")?)?)))
    }),
    checker!("check_russo", ["n?", "f", "p"], "derivative equals total influence", |a| {
        Ok(Eval::check(check_russo(&a.fam("f")?, &a.q("p")?)?))
    }),
    checker!("check_integral_identity", ["n?", "f", "p", "hi"], "integrated influence equals measure difference", |a| {
        Ok(Eval::check(check_integral_identity(&a.fam("f")?, &a.q("p")?, &a.q("hi")?)?))
    }),
    checker!("check_measure_duality", ["n?", "f", "p"], "μ_p(F) + μ_{1−p}(F*) = 1", |a| {
        Ok(Eval::check(check_measure_duality(&a.fam("f")?, &a.q("p")?)?))
    }),
    checker!("check_biased_ekr", ["n?", "f", "p"], "intersecting families have μ_p ≤ p", |a| {
        Ok(Eval::check(check_biased_ekr(&a.fam("f")?, &a.q("p")?)?))
    }),
    checker!("check_harris", ["n?", "a", "b", "p"], "increasing families are positively correlated", |a| {
        Ok(Eval::check(check_harris(&a.fam("a")?, &a.fam("b")?, &a.q("p")?)?))
    }),
    checker!("check_harris_many", ["n?", "families", "p"], "correlation for several monotone families", |a| {
        let fams = a.fams("families")?;
        let refs: Vec<&SetFamily> = fams.iter().collect();
        Ok(Eval::check(check_harris_many(&refs, &a.q("p")?)?))
    }),
    checker!("check_biased_iso", ["n?", "f", "p"], "p·I^p[A] ≥ μ_p(A) log_p μ_p(A)", |a| {
        Ok(Eval::check(check_biased_iso(&a.fam("f")?, &a.q("p")?)?))
    }),
    checker!("check_logp_monotone", ["n?", "f", "p1", "p2", "precision?"], "log_p μ_p(A) is non-increasing in p", |a| {
        Ok(Eval::check(check_logp_monotone(&a.fam("f")?, &a.q("p1")?, &a.q("p2")?, a.precision()?)?))
    }),
    checker!("check_chernoff", ["n", "p", "delta", "precision?"], "lower-tail Chernoff bound", |a| {
        Ok(Eval::check(check_chernoff(a.parse("n")?, &a.q("p")?, &a.q("delta")?, a.precision()?)?))
    }),
    checker!("check_going_up", ["n?", "f", "p"], "μ_p(G↑) ≥ α Pr[Bin(n,p) ≥ k]", |a| {
        Ok(Eval::check(check_going_up(&a.fam("f")?, &a.q("p")?)?))
    }),
    checker!("check_fkg_union", ["n?", "families", "p"], "μ_p(F_1 ∪ … ∪ F_r) ≤ 1 − (1−p)^r", |a| {
        let fams = a.fams("families")?;
        let refs: Vec<&SetFamily> = fams.iter().collect();
        Ok(Eval::check(check_fkg_union(&refs, &a.q("p")?)?))
    }),
    checker!("check_influence_duality", ["n?", "f", "p"], "I^p[F] = I^{1−p}[F*]", |a| {
        Ok(Eval::check(check_influence_duality(&a.fam("f")?, &a.q("p")?)?))
    }),
    // Shadows and cross-intersecting bounds.
    checker!("upper_shadow", ["n?", "f"], "(k+1)-sets containing a member", |a| {
        Ok(Eval::value("family", family_value(&upper_shadow(&a.fam("f")?)?)))
    }),
    checker!("lower_shadow", ["n?", "f"], "(k−1)-sets contained in a member", |a| {
        Ok(Eval::value("family", family_value(&lower_shadow(&a.fam("f")?)?)))
    }),
    checker!("check_local_lym", ["n?", "f"], "upper shadow density is at least the density", |a| {
        Ok(Eval::check(check_local_lym(&a.fam("f")?)?))
    }),
    checker!("kk_min_upper_shadow", ["n", "k", "m"], "least upper shadow of m k-sets", |a| {
        Ok(Eval::value("min_upper_shadow", kk_min_upper_shadow(a.parse("n")?, a.parse("k")?, a.parse("m")?)?))
    }),
    checker!("check_kk_chain", ["n", "k", "r", "t"], "shadow chain above the Frankl–Füredi level counts", |a| {
        let (outcome, levels) = check_kk_chain(a.parse("n")?, a.parse("k")?, a.parse("r")?, a.parse("t")?)?;
        Ok(Eval::check(outcome).with("levels", serde_json::to_value(levels)?))
    }),
    checker!("check_hilton", ["n?", "a", "k", "b", "l", "t"], "cross-intersecting pair bound", |a| {
        Ok(Eval::check(check_hilton(&a.fam("a")?, a.parse("k")?, &a.fam("b")?, a.parse("l")?, a.parse("t")?)?))
    }),
    checker!("hilton_extremal_probe", ["n", "k", "l", "t"], "largest partner at the threshold size", |a| {
        let probe = hilton_extremal_probe(a.parse("n")?, a.parse("k")?, a.parse("l")?, a.parse("t")?)?;
        let mut eval = Eval::default();
        if let Value::Object(map) = serde_json::to_value(probe)? {
            eval.values.extend(map);
        }
        Ok(eval)
    }),
    checker!(
        "check_cross_combination",
        ["n", "g1", "k1", "g2", "k2", "c1", "t0"],
        "|G2| + C1|G1| < C(n,k2) for small nonempty G1",
        |a| {
            let (outcome, hyp) = check_cross_combination(
                &a.fam("g1")?,
                a.parse("k1")?,
                &a.fam("g2")?,
                a.parse("k2")?,
                &a.q("c1")?,
                a.parse("t0")?,
            )?;
            Ok(Eval::check(outcome).with("hypotheses", serde_json::to_value(hyp)?))
        }
    ),
    checker!("find_t", ["size", "n", "k1"], "t with C(n−t−1,k1−t−1) ≤ size ≤ C(n−t,k1−t)", |a| {
        Ok(Eval::value("t", find_t(a.parse("size")?, a.parse("n")?, a.parse("k1")?)?))
    }),
    checker!("min_sufficient_t0", ["n", "k1", "k2", "c1"], "smallest t0 making the combination bound hold", |a| {
        let probe = min_sufficient_t0(a.parse("n")?, a.parse("k1")?, a.parse("k2")?, &a.q("c1")?)?;
        let mut eval = Eval::default();
        if let Value::Object(map) = serde_json::to_value(probe)? {
            eval.values.extend(map);
        }
        Ok(eval)
    }),
    checker!("check_indicator_claim", ["n?", "families", "k"], "pointwise indicator inequality and its sum", |a| {
        let fams = a.fams("families")?;
        let refs: Vec<&SetFamily> = fams.iter().collect();
        let (outcome, report) = check_indicator_claim(&refs, a.parse("k")?)?;
        Ok(Eval::check(outcome)
            .with("union_size", report.union_size)
            .with("summed_bound", report.summed_bound)
            .with("violations", json!(report.violations)))
    }),
    // Search.
    checker!("canonicalize", ["n?", "f"], "least relabeling of the family", |a| {
        let c = canonicalize(&a.fam("f")?)?;
        Ok(Eval::value("canonical", family_value(c.family())))
    }),
    checker!("max_intersecting", ["n", "k", "all_witnesses?"], "largest intersecting k-uniform family", |a| {
        Ok(search_values(&max_intersecting(a.parse("n")?, a.parse("k")?, &a.limits()?)?))
    }),
    checker!(
        "max_union_intersecting",
        ["n", "k", "r", "all_witnesses?"],
        "largest union of r intersecting k-uniform families",
        |a| Ok(search_values(&max_union_intersecting(a.parse("n")?, a.parse("k")?, a.parse("r")?, &a.limits()?)?))
    ),
    checker!(
        "max_bounded_matching",
        ["n", "k", "s", "all_witnesses?"],
        "largest k-uniform family with matching number at most s",
        |a| Ok(search_values(&max_bounded_matching(a.parse("n")?, a.parse("k")?, a.parse("s")?, &a.limits()?)?))
    ),
    checker!(
        "ff_crossover_scan",
        ["k", "r", "n_lo", "n_hi", "t_lo?", "t_hi?", "search?"],
        "Frankl–Füredi level sizes against the OR bound",
        |a| {
            let ts: Vec<u32> = (a.parse_or("t_lo", 1)?..=a.parse_or("t_hi", 3)?).collect();
            let rows = ff_crossover_scan(
                a.parse("k")?,
                a.parse("r")?,
                a.parse("n_lo")?..=a.parse("n_hi")?,
                &ts,
                a.parse_or("search", false)?,
                &a.limits()?,
            )?;
            Ok(Eval::value("rows", serde_json::to_value(rows)?))
        }
    ),
    checker!("verify_theorem", ["theorem", "n", "k", "param?"], "extremal search against the closed formula", |a| {
        let id: TheoremId = a.raw("theorem")?.parse()?;
        let param = if a.map.contains_key("param") { Some(a.parse("param")?) } else { None };
        let report = verify_theorem(id, a.parse("n")?, a.parse("k")?, param, &a.ctx.limits)?;
        let outcome = report.outcome();
        let mut eval = Eval { outcome, values: BTreeMap::new() };
        if let Value::Object(map) = serde_json::to_value(&report)? {
            eval.values.extend(map);
        }
        Ok(eval)
    }),
];

pub fn registry() -> &'static [CheckerInfo] {
    REGISTRY
}

pub fn lookup(id: &str) -> Result<&'static CheckerInfo> {
    let norm = id.replace('-', "_");
    REGISTRY.iter().find(|c| c.id == norm).ok_or_else(|| LabError::UnknownChecker(id.to_string()))
}

/// Rejects unknown checkers, unknown parameter names and missing required ones.
pub fn validate(id: &str, params: &BTreeMap<String, String>) -> Result<&'static CheckerInfo> {
    let info = lookup(id)?;
    if let Some(key) = params.keys().find(|k| !info.accepts(k)) {
        return Err(LabError::param(format!("checker `{}` has no parameter `{key}`", info.id)));
    }
    if let Some(missing) = info.required().find(|p| !params.contains_key(*p)) {
        return Err(LabError::param(format!("checker `{}` needs parameter `{missing}`", info.id)));
    }
    Ok(info)
}

/// Runs one checker. Only an unknown checker id is an `Err`; every other
/// failure is recorded in the returned record.
pub fn run_check(id: &str, params: BTreeMap<String, String>, ctx: &Context) -> Result<Record> {
    let info = lookup(id)?;
    let mut record = Record::new(info.id, params);
    let start = Instant::now();
    let result = validate(id, &record.params).and_then(|_| (info.run)(&Args { map: &record.params, ctx }));
    match result {
        Ok(eval) => {
            if let Some(outcome) = &eval.outcome {
                record.apply_outcome(outcome);
            }
            record.values.extend(eval.values);
        }
        Err(e) => record.fail_with(&e),
    }
    record.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(record)
}

/// Named constructions available to suites without an expression.
pub fn construction_expr(c: &Construction) -> String {
    let list = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
    match c {
        Construction::Dictatorship(j) => format!("dict({j})"),
        Construction::OrFamily(r) => format!("or({})", list(r)),
        Construction::SupersetFamily(r) => format!("superset({})", list(r)),
        Construction::Subcube { b, c } => format!("subcube({};{})", list(b), list(c)),
        Construction::FranklFuredi { r, t } => format!("ff({r},{t})"),
        Construction::FullLevel(k) => format!("level({k})"),
        Construction::Empty => "empty".into(),
        Construction::Full => "full".into(),
    }
}
