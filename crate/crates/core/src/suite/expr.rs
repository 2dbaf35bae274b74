//! A small expression language naming families on `[n]`, so checks can be
//! written on one line and replayed from a report.
//!
//! ```text
//! dict(j)            all sets containing j
//! or(1,2,3)          all sets meeting {1,2,3}
//! superset(1,2)      all sets containing {1,2}
//! subcube(1,2;1)     {S : S ∩ {1,2} = {1}}
//! ff(r,t)            x_1 ∨ … ∨ x_{r-1} ∨ (x_r ∧ (x_{r+1} ∨ … ∨ x_{r+t}))
//! level(k)  empty  full
//! sets({1,2},{3},{}) explicit members
//! colex(k,m)         first m k-sets in colex order
//! star(j,k)          k-sets containing j
//! slice(E,l)  up(E)  down(E)  dual(E)  comp(E)
//! union(E,…)  inter(E,…)  diff(E,E)  symdiff(E,E)
//! rand_inc(seed)  rand_int(seed)  rand_unif(k,seed)
//! file(path)         family file, relative to the suite directory
//! ```
//!
//! Lists of families (for checks taking several) are separated by `|`.

use std::path::Path;

use crate::construction::Construction;
use crate::corpus;
use crate::error::{LabError, Result};
use crate::family::{GroundSet, SetFamily};
use crate::family_io::read_family_file;
use crate::shadows::ColexSegment;

/// Evaluates `text` on `[n]`. `n` may be omitted only for `file(…)`.
pub fn eval_family(text: &str, n: Option<u32>, base: &Path) -> Result<SetFamily> {
    let mut p = Parser { s: text.as_bytes(), pos: 0, n, base };
    let f = p.expr()?;
    p.ws();
    if p.pos != p.s.len() {
        return Err(p.err("trailing input"));
    }
    Ok(f)
}

pub fn eval_families(text: &str, n: Option<u32>, base: &Path) -> Result<Vec<SetFamily>> {
    text.split('|').map(|part| eval_family(part, n, base)).collect()
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    n: Option<u32>,
    base: &'a Path,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> LabError {
        let text = String::from_utf8_lossy(self.s);
        LabError::param(format!("family expression `{text}`: {msg} at offset {}", self.pos))
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c as char)))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a name"));
        }
        Ok(String::from_utf8_lossy(&self.s[start..self.pos]).to_ascii_lowercase())
    }

    fn number(&mut self) -> Result<u64> {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| self.err("expected a number"))
    }

    fn small(&mut self) -> Result<u32> {
        let v = self.number()?;
        u32::try_from(v).map_err(|_| self.err("number too large"))
    }

    /// Comma-separated elements up to (not including) `)`, `;` or `}`.
    fn elements(&mut self) -> Result<Vec<u32>> {
        let mut out = Vec::new();
        if matches!(self.peek(), Some(b')' | b';' | b'}')) {
            return Ok(out);
        }
        loop {
            out.push(self.small()?);
            if !self.eat(b',') {
                return Ok(out);
            }
        }
    }

    fn ground(&self) -> Result<GroundSet> {
        let n = self.n.ok_or_else(|| LabError::param("parameter `n` is required for this family"))?;
        GroundSet::new(n)
    }

    fn construction(&self, c: Construction) -> Result<SetFamily> {
        c.build(self.ground()?)
    }

    fn expr_list(&mut self) -> Result<Vec<SetFamily>> {
        let mut out = vec![self.expr()?];
        while self.eat(b',') {
            out.push(self.expr()?);
        }
        Ok(out)
    }

    fn fold(&self, list: Vec<SetFamily>, op: fn(&SetFamily, &SetFamily) -> Result<SetFamily>) -> Result<SetFamily> {
        let mut it = list.into_iter();
        let first = it.next().ok_or_else(|| self.err("empty argument list"))?;
        it.try_fold(first, |acc, f| op(&acc, &f))
    }

    fn expr(&mut self) -> Result<SetFamily> {
        let name = self.ident()?;
        let has_args = self.eat(b'(');
        let f = match (name.as_str(), has_args) {
            ("empty", false) => self.construction(Construction::Empty)?,
            ("full", false) => self.construction(Construction::Full)?,
            ("dict", true) => {
                let j = self.small()?;
                self.construction(Construction::Dictatorship(j))?
            }
            ("or", true) => {
                let r = self.elements()?;
                self.construction(Construction::OrFamily(r))?
            }
            ("superset", true) => {
                let r = self.elements()?;
                self.construction(Construction::SupersetFamily(r))?
            }
            ("subcube", true) => {
                let b = self.elements()?;
                self.expect(b';')?;
                let c = self.elements()?;
                self.construction(Construction::Subcube { b, c })?
            }
            ("ff", true) => {
                let r = self.small()?;
                self.expect(b',')?;
                let t = self.small()?;
                self.construction(Construction::FranklFuredi { r, t })?
            }
            ("level", true) => {
                let k = self.small()?;
                self.construction(Construction::FullLevel(k))?
            }
            ("star", true) => {
                let j = self.small()?;
                self.expect(b',')?;
                let k = self.small()?;
                self.construction(Construction::Dictatorship(j))?.slice(k)?
            }
            ("colex", true) => {
                let k = self.small()?;
                self.expect(b',')?;
                let m = self.number()?;
                ColexSegment::new(self.ground()?.n(), k, m)?.family()?
            }
            ("sets", true) => {
                let mut members = Vec::new();
                if self.peek() != Some(b')') {
                    loop {
                        self.expect(b'{')?;
                        members.push(self.elements()?);
                        self.expect(b'}')?;
                        if !self.eat(b',') {
                            break;
                        }
                    }
                }
                SetFamily::build(self.ground()?, &members)?
            }
            ("rand_inc", true) => {
                let seed = self.number()?;
                corpus::random_increasing(self.ground()?.n(), seed)?
            }
            ("rand_int", true) => {
                let seed = self.number()?;
                corpus::random_intersecting(self.ground()?.n(), seed)?
            }
            ("rand_unif", true) => {
                let k = self.small()?;
                self.expect(b',')?;
                let seed = self.number()?;
                corpus::random_uniform(self.ground()?.n(), k, seed)?
            }
            ("file", true) => {
                self.ws();
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos] != b')' {
                    self.pos += 1;
                }
                let raw = String::from_utf8_lossy(&self.s[start..self.pos]).trim().to_string();
                let f = read_family_file(&self.base.join(&raw))
                    .map_err(|e| LabError::param(format!("family file `{raw}`: {e}")))?;
                if let Some(n) = self.n {
                    if n != f.n() {
                        return Err(LabError::GroundMismatch { left: n, right: f.n() });
                    }
                }
                f
            }
            ("slice", true) => {
                let e = self.expr()?;
                self.expect(b',')?;
                let l = self.small()?;
                e.slice(l)?
            }
            ("up", true) => self.expr()?.up_closure(),
            ("down", true) => self.expr()?.down_closure(),
            ("dual", true) => self.expr()?.dual(),
            ("comp", true) => self.expr()?.complement(),
            ("union", true) => {
                let list = self.expr_list()?;
                self.fold(list, SetFamily::union)?
            }
            ("inter", true) => {
                let list = self.expr_list()?;
                self.fold(list, SetFamily::intersection)?
            }
            ("diff", true) | ("symdiff", true) => {
                let a = self.expr()?;
                self.expect(b',')?;
                let b = self.expr()?;
                if name == "diff" {
                    a.difference(&b)?
                } else {
                    a.symmetric_difference(&b)?
                }
            }
            _ => return Err(self.err(&format!("unknown family `{name}`"))),
        };
        if has_args {
            self.expect(b')')?;
        }
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str, n: u32) -> SetFamily {
        eval_family(s, Some(n), Path::new(".")).unwrap()
    }

    #[test]
    fn named_families() {
        assert_eq!(ev("dict(1)", 4).len(), 8);
        assert_eq!(ev("or(1,2)", 4).len(), 12);
        assert_eq!(ev("superset(1, 2)", 4).len(), 4);
        assert_eq!(ev("subcube(1,2;1)", 4).len(), 4);
        assert_eq!(ev("subcube(1,2;)", 4).len(), 4);
        assert_eq!(ev("level(2)", 5).len(), 10);
        assert_eq!(ev("star(1,2)", 5).len(), 4);
        assert_eq!(ev("colex(2,3)", 5).len(), 3);
        assert_eq!(ev("sets({1,2},{3},{})", 3).len(), 3);
        assert_eq!(ev("sets()", 3).len(), 0);
        assert_eq!(ev("slice(ff(2,2),3)", 6), ev("slice(ff(2, 2), 3)", 6));
        assert_eq!(ev("dual(dual(or(1,3)))", 5), ev("or(1,3)", 5));
        assert_eq!(ev("union(dict(1),dict(2))", 5), ev("or(1,2)", 5));
        assert_eq!(ev("diff(full,comp(dict(2)))", 5), ev("dict(2)", 5));
        assert_eq!(ev("up(sets({1}))", 4), ev("dict(1)", 4));
        assert_eq!(ev("rand_inc(9)", 6), corpus::random_increasing(6, 9).unwrap());
        assert_eq!(eval_families("dict(1)|dict(2)", Some(3), Path::new(".")).unwrap().len(), 2);
    }

    #[test]
    fn rejects_bad_input() {
        for bad in ["dict(9)", "nope", "dict(1", "or(1,2) x", "subcube(1;2)", "ff(3,3)"] {
            assert!(eval_family(bad, Some(4), Path::new(".")).is_err(), "{bad}");
        }
        assert!(eval_family("dict(1)", None, Path::new(".")).is_err());
    }
}
