//! Plain-text form of a resolution:
//!
//! ```text
//! resolution <group name>
//! p 2
//! order 2
//! minimal true
//! ranks 1 1
//! aug 1 2
//! 1 1
//! d 1 2 2
//! 1 1
//! 1 1
//! ```
//!
//! `aug` and each `d i` header give the full matrix shape, followed by the
//! rows as residues.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::fplinalg::FpMatrix;
use crate::gmodules::GModule;

use super::free::{FreeMap, FreeResolution};

pub fn resolution_to_text(res: &FreeResolution) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "resolution {}", res.group().name());
    let _ = writeln!(out, "p {}", res.p());
    let _ = writeln!(out, "order {}", res.group().order());
    let _ = writeln!(out, "minimal {}", res.is_minimal());
    let ranks: Vec<String> = res.ranks().iter().map(|r| r.to_string()).collect();
    let _ = writeln!(out, "ranks {}", ranks.join(" "));
    for i in 0..=res.length() {
        let m = res.full_matrix(i);
        if i == 0 {
            let _ = writeln!(out, "aug {} {}", m.rows(), m.cols());
        } else {
            let _ = writeln!(out, "d {i} {} {}", m.rows(), m.cols());
        }
        for r in 0..m.rows() {
            let row: Vec<String> = m.row(r).iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    line: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Result<Vec<&'a str>> {
        for (i, l) in self.inner.by_ref() {
            self.line = i + 1;
            let l = l.trim();
            if !l.is_empty() && !l.starts_with('#') {
                return Ok(l.split_whitespace().collect());
            }
        }
        Err(self.err("unexpected end of input"))
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            line: self.line,
            msg: msg.to_string(),
        }
    }

    fn keyed(&mut self, key: &str) -> Result<Vec<&'a str>> {
        let t = self.next()?;
        if t.first() != Some(&key) {
            return Err(self.err(&format!("expected `{key}`")));
        }
        Ok(t[1..].to_vec())
    }

    fn num<T: std::str::FromStr>(&self, s: &str) -> Result<T> {
        s.parse()
            .map_err(|_| self.err(&format!("bad number `{s}`")))
    }

    fn matrix(&mut self, p: u32, rows: usize, cols: usize) -> Result<FpMatrix> {
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows {
            let t = self.next()?;
            if t.len() != cols {
                return Err(self.err(&format!("expected {cols} entries")));
            }
            for s in t {
                let v: u32 = self.num(s)?;
                if v >= p {
                    return Err(self.err("entry not reduced"));
                }
                data.push(v);
            }
        }
        Ok(FpMatrix::from_data(p, rows, cols, data))
    }
}

/// Parses the text form against the module it resolves, checking that
/// every stored matrix is the equivariant extension of its generator
/// columns.
pub fn resolution_from_text(text: &str, target: &GModule) -> Result<FreeResolution> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        line: 0,
    };
    lines.keyed("resolution")?;
    let p: u32 = {
        let t = lines.keyed("p")?;
        lines.num(t.first().copied().unwrap_or(""))?
    };
    let order: usize = {
        let t = lines.keyed("order")?;
        lines.num(t.first().copied().unwrap_or(""))?
    };
    let group = target.group();
    if p != target.p() || order != group.order() {
        return Err(Error::GroupMismatch);
    }
    let minimal = matches!(lines.keyed("minimal")?.first(), Some(&"true"));
    let ranks: Vec<usize> = lines
        .keyed("ranks")?
        .iter()
        .map(|s| lines.num(s))
        .collect::<Result<_>>()?;
    if ranks.is_empty() {
        return Err(lines.err("no ranks"));
    }
    let shape = |lines: &Lines, t: &[&str]| -> Result<(usize, usize)> {
        if t.len() < 2 {
            return Err(lines.err("missing shape"));
        }
        Ok((lines.num(t[t.len() - 2])?, lines.num(t[t.len() - 1])?))
    };
    let t = lines.keyed("aug")?;
    let (r, c) = shape(&lines, &t)?;
    if r != target.dim() || c != ranks[0] * order {
        return Err(lines.err("augmentation shape"));
    }
    let aug = lines.matrix(p, r, c)?;
    let augmentation: Vec<Vec<u32>> = (0..ranks[0]).map(|k| aug.col(k * order)).collect();
    let mut boundaries = Vec::new();
    for i in 1..ranks.len() {
        let t = lines.keyed("d")?;
        let (r, c) = shape(&lines, &t)?;
        if r != ranks[i - 1] * order || c != ranks[i] * order {
            return Err(lines.err(&format!("boundary {i} shape")));
        }
        let m = lines.matrix(p, r, c)?;
        let map = FreeMap {
            src_rank: ranks[i],
            tgt_rank: ranks[i - 1],
            images: (0..ranks[i]).map(|k| m.col(k * order)).collect(),
        };
        if map.full_matrix(group, p) != m {
            return Err(lines.err(&format!("boundary {i} is not equivariant")));
        }
        boundaries.push(map);
    }
    let res = FreeResolution::from_parts(group, target.clone(), augmentation, boundaries, minimal);
    if res.full_matrix(0) != aug {
        return Err(Error::Parse {
            line: 0,
            msg: "augmentation is not equivariant".into(),
        });
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmodules::trivial_module;
    use crate::groups::{generate_group, Permutation};
    use crate::resolutions::free_resolution;
    use std::sync::Arc;

    #[test]
    fn roundtrip_z2() {
        let g =
            Arc::new(generate_group(2, &[Permutation::new(vec![1, 0]).unwrap()], "Z2").unwrap());
        let t = trivial_module(&g, 2, 1);
        let res = free_resolution(&t, 1, true).unwrap();
        let text = resolution_to_text(&res);
        assert_eq!(text, "resolution Z2\np 2\norder 2\nminimal true\nranks 1 1\naug 1 2\n1 1\nd 1 2 2\n1 1\n1 1\n");
        let back = resolution_from_text(&text, &t).unwrap();
        assert_eq!(back.boundaries(), res.boundaries());
        assert!(resolution_from_text("resolution Z2\np 2\n", &t).is_err());
    }
}
