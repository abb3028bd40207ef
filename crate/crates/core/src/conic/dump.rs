//! Line-oriented text dump of a [`ConicProgram`].
//!
//! ```text
//! sparsos-conic 1
//! vars <n> rows <m>
//! cone free <k>          one line per block, in column order
//! cone nonneg <k>
//! cone soc <k>
//! cone rsoc <k>
//! cone psd <r>           side r, occupying r(r+1)/2 svec columns
//! a <nnz>
//! <row> <col> <value>    0-based triplets, row-major
//! b <m>
//! <value>                one per line
//! c <n>
//! <value>                one per line
//! end
//! ```
//!
//! Values use the shortest representation that round-trips exactly.
//! Blank lines and lines starting with `#` are ignored on input.

use std::fmt::Write as _;

use super::program::{Cone, ConicProgram};
use crate::error::{Error, Result};

pub fn dump(p: &ConicProgram) -> String {
    let mut s = String::new();
    writeln!(s, "sparsos-conic 1").unwrap();
    writeln!(s, "vars {} rows {}", p.nvars(), p.nrows()).unwrap();
    for cone in p.cones() {
        let (name, k) = match *cone {
            Cone::Free(k) => ("free", k),
            Cone::NonNeg(k) => ("nonneg", k),
            Cone::Soc(k) => ("soc", k),
            Cone::Rsoc(k) => ("rsoc", k),
            Cone::Psd(r) => ("psd", r),
        };
        writeln!(s, "cone {name} {k}").unwrap();
    }
    writeln!(s, "a {}", p.nnz()).unwrap();
    for (i, row) in p.rows().iter().enumerate() {
        for &(j, v) in row {
            writeln!(s, "{i} {j} {v:?}").unwrap();
        }
    }
    writeln!(s, "b {}", p.nrows()).unwrap();
    for v in p.b() {
        writeln!(s, "{v:?}").unwrap();
    }
    writeln!(s, "c {}", p.nvars()).unwrap();
    for v in p.c() {
        writeln!(s, "{v:?}").unwrap();
    }
    writeln!(s, "end").unwrap();
    s
}

pub fn parse(text: &str) -> Result<ConicProgram> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let mut next = |what: &str| {
        lines
            .next()
            .ok_or_else(|| Error::InvalidInput(format!("unexpected end of dump, expected {what}")))
    };
    let bad = |line: usize, msg: &str| Error::InvalidInput(format!("dump line {line}: {msg}"));
    let num = |line: usize, tok: Option<&str>| -> Result<f64> {
        tok.and_then(|t| t.parse().ok()).ok_or_else(|| bad(line, "expected a number"))
    };
    let int = |line: usize, tok: Option<&str>| -> Result<usize> {
        tok.and_then(|t| t.parse().ok()).ok_or_else(|| bad(line, "expected an integer"))
    };

    let (l, head) = next("header")?;
    if head != "sparsos-conic 1" {
        return Err(bad(l, "missing `sparsos-conic 1` header"));
    }
    let (l, sizes) = next("sizes")?;
    let t: Vec<&str> = sizes.split_whitespace().collect();
    if t.len() != 4 || t[0] != "vars" || t[2] != "rows" {
        return Err(bad(l, "expected `vars <n> rows <m>`"));
    }
    let n = int(l, Some(t[1]))?;
    let m = int(l, Some(t[3]))?;

    let mut p = ConicProgram::new();
    let (mut l, mut line) = next("cone or a")?;
    while let Some(rest) = line.strip_prefix("cone ") {
        let mut it = rest.split_whitespace();
        let kind = it.next().unwrap_or("");
        let k = int(l, it.next())?;
        let cone = match kind {
            "free" => Cone::Free(k),
            "nonneg" => Cone::NonNeg(k),
            "soc" => Cone::Soc(k),
            "rsoc" => Cone::Rsoc(k),
            "psd" => Cone::Psd(k),
            other => return Err(bad(l, &format!("unknown cone `{other}`"))),
        };
        p.add_cone(cone);
        (l, line) = next("cone or a")?;
    }
    if p.nvars() != n {
        return Err(bad(l, &format!("cones cover {} columns, header says {n}", p.nvars())));
    }
    let nnz = int(l, line.strip_prefix("a "))?;
    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); m];
    for _ in 0..nnz {
        let (l, line) = next("triplet")?;
        let mut it = line.split_whitespace();
        let i = int(l, it.next())?;
        let j = int(l, it.next())?;
        let v = num(l, it.next())?;
        if i >= m || j >= n {
            return Err(bad(l, "triplet index out of range"));
        }
        rows[i].push((j, v));
    }
    let (l, line) = next("b")?;
    if int(l, line.strip_prefix("b "))? != m {
        return Err(bad(l, "b length differs from row count"));
    }
    let mut b = Vec::with_capacity(m);
    for _ in 0..m {
        let (l, line) = next("b value")?;
        b.push(num(l, Some(line))?);
    }
    let (l, line) = next("c")?;
    if int(l, line.strip_prefix("c "))? != n {
        return Err(bad(l, "c length differs from column count"));
    }
    for j in 0..n {
        let (l, line) = next("c value")?;
        p.set_objective(j, num(l, Some(line))?);
    }
    let (l, line) = next("end")?;
    if line != "end" {
        return Err(bad(l, "expected `end`"));
    }
    for (row, rhs) in rows.into_iter().zip(b) {
        p.add_row(row, rhs);
    }
    Ok(p)
}
