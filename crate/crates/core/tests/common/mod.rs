#![allow(dead_code)]

use std::sync::Arc;

use modcoh::catalog::lookup;
use modcoh::gmodules::{
    direct_sum, permutation_module, regular_module, tensor_module, trivial_module, GModule,
};
use modcoh::groups::{all_subgroups, FiniteGroup};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn group(name: &str) -> Arc<FiniteGroup> {
    lookup(name).unwrap().build().unwrap()
}

/// Trivial, regular and all permutation modules of `g`.
pub fn base_modules(g: &Arc<FiniteGroup>, p: u32) -> Vec<GModule> {
    let mut out = vec![trivial_module(g, p, 1), regular_module(g, p)];
    for h in all_subgroups(g) {
        if h.order() > 1 && h.order() < g.order() {
            out.push(permutation_module(g, &h, p));
        }
    }
    out
}

/// A base module, a direct sum of two, or a tensor product of two, with
/// dimension at most `max_dim`.
pub fn random_module<R: Rng>(rng: &mut R, base: &[GModule], max_dim: usize) -> GModule {
    loop {
        let a = base.choose(rng).unwrap();
        let b = base.choose(rng).unwrap();
        let m = match rng.gen_range(0..3) {
            0 => a.clone(),
            1 => direct_sum(a, b).unwrap(),
            _ => tensor_module(a, b).unwrap(),
        };
        if m.dim() <= max_dim {
            return m;
        }
    }
}

/// Graded commutative algebra over F_2 given by generators and relations,
/// used as an oracle for products.
pub struct Presentation {
    pub degrees: Vec<usize>,
    /// Each relation is a list of exponent vectors summed mod 2.
    pub relations: Vec<Vec<Vec<usize>>>,
}

fn monomials(degrees: &[usize], n: usize) -> Vec<Vec<usize>> {
    fn go(degrees: &[usize], n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == degrees.len() {
            if n == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for e in 0..=n / degrees[k] {
            cur.push(e);
            go(degrees, n - e * degrees[k], k + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(degrees, n, 0, &mut Vec::new(), &mut out);
    out
}

fn mono_deg(degrees: &[usize], m: &[usize]) -> usize {
    m.iter().zip(degrees).map(|(e, d)| e * d).sum()
}

fn add(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Rank over F_2 of a list of bit rows.
fn rank2(mut rows: Vec<Vec<bool>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        if let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c]) {
            rows.swap(rank, piv);
            let pr = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row[c] {
                    row.iter_mut().zip(&pr).for_each(|(x, y)| *x ^= y);
                }
            }
            rank += 1;
        }
    }
    rank
}

impl Presentation {
    fn ideal_rows(&self, n: usize, basis: &[Vec<usize>]) -> Vec<Vec<bool>> {
        let mut rows = Vec::new();
        for r in &self.relations {
            let d = mono_deg(&self.degrees, &r[0]);
            if d > n {
                continue;
            }
            for m in monomials(&self.degrees, n - d) {
                let mut row = vec![false; basis.len()];
                for t in r {
                    let pos = basis.iter().position(|b| *b == add(&m, t)).unwrap();
                    row[pos] ^= true;
                }
                rows.push(row);
            }
        }
        rows
    }

    pub fn dim(&self, n: usize) -> usize {
        let basis = monomials(&self.degrees, n);
        basis.len() - rank2(self.ideal_rows(n, &basis))
    }

    /// `dim span{a·b : deg a = i, deg b = j}` in the quotient.
    pub fn span_dim(&self, i: usize, j: usize) -> usize {
        let n = i + j;
        let basis = monomials(&self.degrees, n);
        let ideal = self.ideal_rows(n, &basis);
        let base = rank2(ideal.clone());
        let mut rows = ideal;
        for a in monomials(&self.degrees, i) {
            for b in monomials(&self.degrees, j) {
                let mut row = vec![false; basis.len()];
                row[basis.iter().position(|m| *m == add(&a, &b)).unwrap()] = true;
                rows.push(row);
            }
        }
        rank2(rows) - base
    }
}

pub fn presentation(name: &str) -> Presentation {
    let p = |degrees: &[usize], relations: Vec<Vec<Vec<usize>>>| Presentation {
        degrees: degrees.to_vec(),
        relations,
    };
    match name {
        // x1 e1 y2 / (x e)
        "D8" => p(&[1, 1, 2], vec![vec![vec![1, 1, 0]]]),
        "V4" => p(&[1, 1], vec![]),
        // x1 y1 e4 / (x^2 + xy + y^2, x^2 y + x y^2)
        "Q8" => p(
            &[1, 1, 4],
            vec![
                vec![vec![2, 0, 0], vec![1, 1, 0], vec![0, 2, 0]],
                vec![vec![2, 1, 0], vec![1, 2, 0]],
            ],
        ),
        // u2 v3 w3 / (u^3 + v^2 + w^2 + v w)
        "A4" => p(
            &[2, 3, 3],
            vec![vec![
                vec![3, 0, 0],
                vec![0, 2, 0],
                vec![0, 0, 2],
                vec![0, 1, 1],
            ]],
        ),
        // x1 y2 c3 / (x c)
        "S4" => p(&[1, 2, 3], vec![vec![vec![1, 0, 1]]]),
        _ => panic!("no presentation for {name}"),
    }
}
