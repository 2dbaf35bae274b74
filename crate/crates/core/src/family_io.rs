//! Text format for families.
//!
//! ```text
//! # comment
//! n=4
//! 1,2
//! 3
//! {}
//! mask=0xc
//! ```
//!
//! The first non-comment line gives the ground set. Every following line is a
//! member: comma-separated 1-based elements (optionally wrapped in braces),
//! `{}` for the empty set, or `mask=<hex>` with the characteristic mask.
//! Blank lines and `#` comments are ignored.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{LabError, Result};
use crate::family::{elements_of, GroundSet, Mask, SetFamily};

pub fn parse_family(text: &str) -> Result<SetFamily> {
    let mut ground: Option<GroundSet> = None;
    let mut masks: Vec<Mask> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let perr = |msg: String| LabError::Parse { line: line_no, msg };
        let Some(g) = ground else {
            let value = line
                .strip_prefix("n=")
                .ok_or_else(|| perr(format!("expected `n=<int>`, found `{line}`")))?;
            let n: u32 = value.trim().parse().map_err(|_| perr(format!("bad ground size `{value}`")))?;
            ground = Some(GroundSet::new(n).map_err(|e| perr(e.to_string()))?);
            continue;
        };
        let mask = if let Some(hex) = line.strip_prefix("mask=") {
            let hex = hex.trim();
            let digits = hex.strip_prefix("0x").or_else(|| hex.strip_prefix("0X")).unwrap_or(hex);
            let m = Mask::from_str_radix(digits, 16).map_err(|_| perr(format!("bad hex mask `{hex}`")))?;
            if m & !g.full_mask() != 0 {
                return Err(perr(format!("mask {hex} has bits outside [{}]", g.n())));
            }
            m
        } else {
            let body = line.trim_start_matches('{').trim_end_matches('}').trim();
            let mut elements = Vec::new();
            if !body.is_empty() {
                for tok in body.split(',') {
                    let e: u32 = tok.trim().parse().map_err(|_| perr(format!("bad element `{}`", tok.trim())))?;
                    elements.push(e);
                }
            }
            g.mask_of(&elements).map_err(|e| perr(e.to_string()))?
        };
        masks.push(mask);
    }
    let g = ground.ok_or(LabError::Parse { line: 0, msg: "missing `n=<int>` header".into() })?;
    SetFamily::from_masks(g, masks)
}

pub fn write_family(f: &SetFamily) -> String {
    let mut out = format!("n={}\n", f.n());
    for m in f.members() {
        if m == 0 {
            out.push_str("{}\n");
        } else {
            let parts: Vec<String> = elements_of(m).iter().map(u32::to_string).collect();
            let _ = writeln!(out, "{}", parts.join(","));
        }
    }
    out
}

pub fn read_family_file(path: &Path) -> Result<SetFamily> {
    parse_family(&std::fs::read_to_string(path)?)
}

pub fn write_family_file(path: &Path, f: &SetFamily) -> Result<()> {
    std::fs::write(path, write_family(f))?;
    Ok(())
}
