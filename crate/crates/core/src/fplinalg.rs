//! Dense linear algebra over the prime field `F_p`.
//!
//! Everything downstream (module actions, boundary maps, cochain
//! differentials) is an [`FpMatrix`]. Row reduction uses the fixed pivot
//! rule "first nonzero entry, scanning columns left to right and rows top
//! to bottom", so every basis produced here is canonical. Over `F_2` the
//! elimination runs on bit-packed rows; the result is identical.

use std::fmt;

use crate::error::{Error, Result};

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Inverse of a nonzero residue modulo the prime `p`.
pub fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0);
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p as i64, (a % p) as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    t.rem_euclid(p as i64) as u32
}

/// Reduce a signed integer into `[0, p)`.
pub fn reduce(x: i64, p: u32) -> u32 {
    x.rem_euclid(p as i64) as u32
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix(p={}, {}x{})", self.p, self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// Result of row reduction: the RREF matrix, its rank and pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: FpMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl FpMatrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        FpMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % p;
        }
        m
    }

    /// Builds a matrix from row-major data, reducing every entry mod `p`.
    pub fn from_data(p: u32, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length does not match shape");
        let data = data.into_iter().map(|x| x % p).collect();
        FpMatrix {
            p,
            rows,
            cols,
            data,
        }
    }

    /// Builds a matrix from signed rows; all rows must have equal length.
    pub fn from_rows(p: u32, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().map(|&x| reduce(x, p)));
        }
        FpMatrix {
            p,
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// Matrix whose rows are the given residue vectors.
    pub fn from_row_vecs(p: u32, cols: usize, rows: &[Vec<u32>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().map(|&x| x % p));
        }
        FpMatrix {
            p,
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// Matrix whose columns are the given residue vectors.
    pub fn from_col_vecs(p: u32, rows: usize, cols: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(p, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged columns");
            for (i, &x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x % p;
            }
        }
        m
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.p;
    }

    #[inline]
    pub fn add_at(&mut self, i: usize, j: usize, v: u32) {
        let e = &mut self.data[i * self.cols + j];
        *e = ((*e as u64 + v as u64) % self.p as u64) as u32;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.p, self.rows)
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        assert_eq!(self.p, other.p, "matrix product over different primes");
        let p = self.p as u64;
        let n = other.cols;
        let mut out = Self::zeros(self.p, self.rows, n);
        let mut acc = vec![0u64; n];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let orow = &other.data[k * n..(k + 1) * n];
                for (s, &b) in acc.iter_mut().zip(orow) {
                    *s += a * b as u64;
                }
                // keep the accumulator far from overflow for large p
                if p > 1 << 16 {
                    acc.iter_mut().for_each(|s| *s %= p);
                }
            }
            for (o, s) in out.data[i * n..(i + 1) * n].iter_mut().zip(&acc) {
                *o = (s % p) as u32;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        let p = self.p as u64;
        (0..self.rows)
            .map(|i| {
                let s: u64 = self
                    .row(i)
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| a as u64 * b as u64 % p)
                    .sum();
                (s % p) as u32
            })
            .collect()
    }

    pub fn add(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let p = self.p;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a + b) % p)
            .collect();
        FpMatrix {
            p,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let p = self.p;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a + p - b) % p)
            .collect();
        FpMatrix {
            p,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, c: u32) -> FpMatrix {
        let p = self.p as u64;
        let c = c as u64 % p;
        let data = self
            .data
            .iter()
            .map(|&a| (a as u64 * c % p) as u32)
            .collect();
        FpMatrix {
            p: self.p,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &FpMatrix) -> FpMatrix {
        let p = self.p as u64;
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Self::zeros(self.p, r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j) as u64;
                if a == 0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let v = (a * other.get(k, l) as u64 % p) as u32;
                        out.data[(i * other.rows + k) * c + j * other.cols + l] = v;
                    }
                }
            }
        }
        out
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(p: u32, cols: usize, parts: &[&FpMatrix]) -> FpMatrix {
        let mut data = Vec::new();
        let mut rows = 0;
        for m in parts {
            assert_eq!(m.cols, cols);
            data.extend_from_slice(&m.data);
            rows += m.rows;
        }
        FpMatrix {
            p,
            rows,
            cols,
            data,
        }
    }

    /// Places matrices with equal row counts side by side.
    pub fn hstack(p: u32, rows: usize, parts: &[&FpMatrix]) -> FpMatrix {
        let cols: usize = parts.iter().map(|m| m.cols).sum();
        let mut out = Self::zeros(p, rows, cols);
        let mut off = 0;
        for m in parts {
            assert_eq!(m.rows, rows);
            for i in 0..rows {
                out.data[i * cols + off..i * cols + off + m.cols].copy_from_slice(m.row(i));
            }
            off += m.cols;
        }
        out
    }

    pub fn rref(&self) -> Rref {
        let mut work = RowStore::from_matrix(self);
        let pivots = work.eliminate(self.cols);
        let rank = pivots.len();
        Rref {
            matrix: work.into_matrix(self.p, self.cols),
            rank,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        let mut work = RowStore::from_matrix(self);
        work.eliminate(self.cols).len()
    }

    /// Canonical basis of `{ v : self * v = 0 }`.
    pub fn kernel_basis(&self) -> FpSubspace {
        let r = self.rref();
        let p = self.p;
        let mut is_pivot = vec![false; self.cols];
        for &c in &r.pivots {
            is_pivot[c] = true;
        }
        let mut vecs = Vec::new();
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u32; self.cols];
            v[f] = 1;
            for (ri, &pc) in r.pivots.iter().enumerate() {
                let x = r.matrix.get(ri, f);
                if x != 0 {
                    v[pc] = (p - x) % p;
                }
            }
            vecs.push(v);
        }
        FpSubspace::from_vectors(p, self.cols, &vecs)
    }

    /// Column space as a canonical subspace of `F_p^rows`.
    pub fn image(&self) -> FpSubspace {
        let t = self.transpose();
        let rows: Vec<Vec<u32>> = (0..t.rows).map(|i| t.row(i).to_vec()).collect();
        FpSubspace::from_vectors(self.p, self.rows, &rows)
    }

    pub fn row_space(&self) -> FpSubspace {
        let rows: Vec<Vec<u32>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        FpSubspace::from_vectors(self.p, self.cols, &rows)
    }

    /// Some `x` with `self * x = b`, free variables set to zero, or `None`.
    pub fn solve(&self, b: &[u32]) -> Result<Option<Vec<u32>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has length {} but the matrix has {} rows",
                b.len(),
                self.rows
            )));
        }
        Ok(Solver::new(self).solve(b))
    }

    pub fn inverse(&self) -> Option<FpMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let s = Solver::new(self);
        if s.rank != self.rows {
            return None;
        }
        let cols: Vec<Vec<u32>> = (0..self.rows)
            .map(|j| {
                let mut e = vec![0; self.rows];
                e[j] = 1;
                s.solve(&e).expect("invertible")
            })
            .collect();
        Some(Self::from_col_vecs(self.p, self.rows, &cols))
    }
}

/// Row storage used during elimination; packed bits over `F_2`.
enum RowStore {
    F2 { words: usize, rows: Vec<Vec<u64>> },
    Fp { p: u32, rows: Vec<Vec<u32>> },
}

impl RowStore {
    fn from_matrix(m: &FpMatrix) -> Self {
        let rows = (0..m.rows).map(|i| m.row(i).to_vec()).collect();
        Self::from_rows(m.p, m.cols, rows)
    }

    fn from_rows(p: u32, cols: usize, rows: Vec<Vec<u32>>) -> Self {
        if p == 2 {
            let words = cols.div_ceil(64);
            let rows = rows.iter().map(|r| pack(r, words)).collect();
            RowStore::F2 { words, rows }
        } else {
            RowStore::Fp { p, rows }
        }
    }

    /// Gauss-Jordan elimination choosing pivots only among the first
    /// `limit` columns. Pivot rows end up first, in pivot order.
    fn eliminate(&mut self, limit: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        match self {
            RowStore::F2 { rows, .. } => {
                let n = rows.len();
                let mut r = 0;
                for c in 0..limit {
                    if r == n {
                        break;
                    }
                    let (w, b) = (c / 64, 1u64 << (c % 64));
                    let Some(found) = (r..n).find(|&i| rows[i][w] & b != 0) else {
                        continue;
                    };
                    rows.swap(r, found);
                    let pivot_row = std::mem::take(&mut rows[r]);
                    for (i, row) in rows.iter_mut().enumerate() {
                        if i != r && row[w] & b != 0 {
                            for (x, y) in row[w..].iter_mut().zip(&pivot_row[w..]) {
                                *x ^= *y;
                            }
                        }
                    }
                    rows[r] = pivot_row;
                    pivots.push(c);
                    r += 1;
                }
            }
            RowStore::Fp { p, rows } => {
                let p = *p;
                let n = rows.len();
                let mut r = 0;
                for c in 0..limit {
                    if r == n {
                        break;
                    }
                    let Some(found) = (r..n).find(|&i| rows[i][c] != 0) else {
                        continue;
                    };
                    rows.swap(r, found);
                    let mut pivot_row = std::mem::take(&mut rows[r]);
                    let inv = inv_mod(pivot_row[c], p) as u64;
                    if inv != 1 {
                        for x in pivot_row[c..].iter_mut() {
                            *x = (*x as u64 * inv % p as u64) as u32;
                        }
                    }
                    for (i, row) in rows.iter_mut().enumerate() {
                        if i == r || row[c] == 0 {
                            continue;
                        }
                        let f = (p - row[c]) as u64;
                        for (x, &y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                            if y != 0 {
                                *x = ((*x as u64 + f * y as u64) % p as u64) as u32;
                            }
                        }
                    }
                    rows[r] = pivot_row;
                    pivots.push(c);
                    r += 1;
                }
            }
        }
        pivots
    }

    fn row(&self, i: usize, cols: usize) -> Vec<u32> {
        match self {
            RowStore::F2 { rows, .. } => unpack(&rows[i], cols),
            RowStore::Fp { rows, .. } => rows[i].clone(),
        }
    }

    fn len(&self) -> usize {
        match self {
            RowStore::F2 { rows, .. } => rows.len(),
            RowStore::Fp { rows, .. } => rows.len(),
        }
    }

    fn into_matrix(self, p: u32, cols: usize) -> FpMatrix {
        let n = self.len();
        let mut data = Vec::with_capacity(n * cols);
        for i in 0..n {
            data.extend(self.row(i, cols));
        }
        FpMatrix {
            p,
            rows: n,
            cols,
            data,
        }
    }
}

fn pack(v: &[u32], words: usize) -> Vec<u64> {
    let mut out = vec![0u64; words];
    for (i, &x) in v.iter().enumerate() {
        if x & 1 == 1 {
            out[i / 64] |= 1 << (i % 64);
        }
    }
    out
}

fn unpack(w: &[u64], cols: usize) -> Vec<u32> {
    (0..cols)
        .map(|i| ((w[i / 64] >> (i % 64)) & 1) as u32)
        .collect()
}

/// Precomputed reduction of a fixed matrix `A` for repeated solves of
/// `A x = b`. Holds `T` with `T A = rref(A)`.
#[derive(Clone, Debug)]
pub struct Solver {
    p: u32,
    rows: usize,
    cols: usize,
    transform: FpMatrix,
    pivots: Vec<usize>,
    rank: usize,
}

impl Solver {
    pub fn new(a: &FpMatrix) -> Self {
        let p = a.p;
        let (rows, cols) = (a.rows, a.cols);
        let aug: Vec<Vec<u32>> = (0..rows)
            .map(|i| {
                let mut r = Vec::with_capacity(cols + rows);
                r.extend_from_slice(a.row(i));
                r.extend((0..rows).map(|j| u32::from(i == j)));
                r
            })
            .collect();
        let mut store = RowStore::from_rows(p, cols + rows, aug);
        let pivots = store.eliminate(cols);
        let mut t = FpMatrix::zeros(p, rows, rows);
        for i in 0..rows {
            let r = store.row(i, cols + rows);
            t.data[i * rows..(i + 1) * rows].copy_from_slice(&r[cols..]);
        }
        let rank = pivots.len();
        Solver {
            p,
            rows,
            cols,
            transform: t,
            pivots,
            rank,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.rows);
        let c = self.transform.mul_vec(b);
        if c[self.rank..].iter().any(|&x| x != 0) {
            return None;
        }
        let mut x = vec![0u32; self.cols];
        for (r, &pc) in self.pivots.iter().enumerate() {
            x[pc] = c[r] % self.p;
        }
        Some(x)
    }
}

/// A subspace of `F_p^n` held by its canonical (RREF) basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FpSubspace {
    ambient: usize,
    basis: FpMatrix,
    pivots: Vec<usize>,
}

impl FpSubspace {
    pub fn zero(p: u32, ambient: usize) -> Self {
        FpSubspace {
            ambient,
            basis: FpMatrix::zeros(p, 0, ambient),
            pivots: vec![],
        }
    }

    pub fn full(p: u32, ambient: usize) -> Self {
        FpSubspace {
            ambient,
            basis: FpMatrix::identity(p, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn from_vectors(p: u32, ambient: usize, vecs: &[Vec<u32>]) -> Self {
        let mut store = RowStore::from_rows(p, ambient, vecs.to_vec());
        let pivots = store.eliminate(ambient);
        let rank = pivots.len();
        let mut data = Vec::with_capacity(rank * ambient);
        for i in 0..rank {
            data.extend(store.row(i, ambient));
        }
        FpSubspace {
            ambient,
            basis: FpMatrix {
                p,
                rows: rank,
                cols: ambient,
                data,
            },
            pivots,
        }
    }

    pub fn p(&self) -> u32 {
        self.basis.p
    }
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }
    pub fn dim(&self) -> usize {
        self.basis.rows
    }
    pub fn basis(&self) -> &FpMatrix {
        &self.basis
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_vectors(&self) -> Vec<Vec<u32>> {
        (0..self.dim())
            .map(|i| self.basis.row(i).to_vec())
            .collect()
    }

    /// Remainder of `v` after clearing the pivot coordinates.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let p = self.p() as u64;
        let mut w = v.to_vec();
        for (r, &pc) in self.pivots.iter().enumerate() {
            let c = w[pc] as u64;
            if c == 0 {
                continue;
            }
            let f = p - c;
            for (x, &y) in w.iter_mut().zip(self.basis.row(r)) {
                if y != 0 {
                    *x = ((*x as u64 + f * y as u64) % p) as u32;
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.ambient);
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Coordinates of `v` in the canonical basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[u32]) -> Option<Vec<u32>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&pc| v[pc]).collect())
    }

    pub fn contains_subspace(&self, other: &FpSubspace) -> bool {
        (0..other.dim()).all(|i| self.contains(other.basis.row(i)))
    }

    pub fn sum(&self, other: &FpSubspace) -> FpSubspace {
        let mut v = self.basis_vectors();
        v.extend(other.basis_vectors());
        Self::from_vectors(self.p(), self.ambient, &v)
    }
}

/// `dim U - dim W` for `W ⊆ U`.
pub fn quotient_dim(u: &FpSubspace, w: &FpSubspace) -> Result<usize> {
    if u.ambient != w.ambient {
        return Err(Error::DimensionMismatch(format!(
            "ambient dimensions {} and {}",
            u.ambient, w.ambient
        )));
    }
    if !u.contains_subspace(w) {
        return Err(Error::NotContained);
    }
    Ok(u.dim() - w.dim())
}

/// Incrementally grown span; answers membership and independence queries.
///
/// Rows are kept in semi-echelon form: row `k` vanishes on the pivots of
/// rows inserted before it, so one ordered pass reduces any vector.
pub struct EchelonBuilder {
    p: u32,
    ambient: usize,
    store: RowStore,
    pivots: Vec<usize>,
}

impl EchelonBuilder {
    pub fn new(p: u32, ambient: usize) -> Self {
        EchelonBuilder {
            p,
            ambient,
            store: RowStore::from_rows(p, ambient, vec![]),
            pivots: vec![],
        }
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Inserts `v`; returns `true` when it enlarged the span.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.ambient);
        match &mut self.store {
            RowStore::F2 { words, rows } => {
                let mut w = pack(v, *words);
                for (row, &pc) in rows.iter().zip(&self.pivots) {
                    if (w[pc / 64] >> (pc % 64)) & 1 == 1 {
                        for (x, y) in w.iter_mut().zip(row) {
                            *x ^= *y;
                        }
                    }
                }
                match first_bit(&w) {
                    Some(pc) => {
                        rows.push(w);
                        self.pivots.push(pc);
                        true
                    }
                    None => false,
                }
            }
            RowStore::Fp { p, rows } => {
                let p = *p as u64;
                let mut w = v.to_vec();
                for (row, &pc) in rows.iter().zip(&self.pivots) {
                    let c = w[pc] as u64;
                    if c != 0 {
                        let f = p - c;
                        for (x, &y) in w.iter_mut().zip(row) {
                            if y != 0 {
                                *x = ((*x as u64 + f * y as u64) % p) as u32;
                            }
                        }
                    }
                }
                match w.iter().position(|&x| x != 0) {
                    Some(pc) => {
                        let inv = inv_mod(w[pc], p as u32) as u64;
                        for x in w.iter_mut() {
                            *x = (*x as u64 * inv % p) as u32;
                        }
                        rows.push(w);
                        self.pivots.push(pc);
                        true
                    }
                    None => false,
                }
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.ambient);
        match &self.store {
            RowStore::F2 { words, rows } => {
                let mut w = pack(v, *words);
                for (row, &pc) in rows.iter().zip(&self.pivots) {
                    if (w[pc / 64] >> (pc % 64)) & 1 == 1 {
                        for (x, y) in w.iter_mut().zip(row) {
                            *x ^= *y;
                        }
                    }
                }
                w.iter().all(|&x| x == 0)
            }
            RowStore::Fp { p, rows } => {
                let p = *p as u64;
                let mut w = v.to_vec();
                for (row, &pc) in rows.iter().zip(&self.pivots) {
                    let c = w[pc] as u64;
                    if c != 0 {
                        let f = p - c;
                        for (x, &y) in w.iter_mut().zip(row) {
                            if y != 0 {
                                *x = ((*x as u64 + f * y as u64) % p) as u32;
                            }
                        }
                    }
                }
                w.iter().all(|&x| x == 0)
            }
        }
    }

    pub fn to_subspace(&self) -> FpSubspace {
        let n = self.store.len();
        let rows: Vec<Vec<u32>> = (0..n).map(|i| self.store.row(i, self.ambient)).collect();
        FpSubspace::from_vectors(self.p, self.ambient, &rows)
    }
}

fn first_bit(w: &[u64]) -> Option<usize> {
    w.iter()
        .enumerate()
        .find(|(_, &x)| x != 0)
        .map(|(i, &x)| i * 64 + x.trailing_zeros() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        assert_eq!(FpMatrix::identity(2, 3).rank(), 3);
        assert_eq!(FpMatrix::zeros(5, 3, 4).rank(), 0);
        assert_eq!(FpMatrix::from_rows(2, &[vec![1, 1], vec![1, 1]]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        let inv = FpMatrix::from_rows(3, &[vec![1, 2], vec![0, 1]]);
        assert_eq!(inv.kernel_basis().dim(), 0);
        assert_eq!(FpMatrix::zeros(3, 2, 4).kernel_basis().dim(), 4);
        let k = FpMatrix::from_rows(2, &[vec![1, 1]]).kernel_basis();
        assert_eq!(k.basis_vectors(), vec![vec![1, 1]]);
    }

    #[test]
    fn solve_examples() {
        let id = FpMatrix::identity(7, 3);
        assert_eq!(id.solve(&[3, 5, 6]).unwrap(), Some(vec![3, 5, 6]));
        let z = FpMatrix::zeros(7, 2, 2);
        assert_eq!(z.solve(&[1, 0]).unwrap(), None);
        let a = FpMatrix::from_rows(2, &[vec![1, 1], vec![0, 0]]);
        assert_eq!(a.solve(&[1, 0]).unwrap(), Some(vec![1, 0]));
        assert!(matches!(a.solve(&[1]), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn quotient_examples() {
        let full = FpSubspace::full(2, 3);
        assert_eq!(quotient_dim(&full, &full).unwrap(), 0);
        assert_eq!(quotient_dim(&full, &FpSubspace::zero(2, 3)).unwrap(), 3);
        let k = FpMatrix::from_rows(2, &[vec![1, 1]]).kernel_basis();
        assert_eq!(quotient_dim(&k, &FpSubspace::zero(2, 2)).unwrap(), 1);
        assert_eq!(
            quotient_dim(&FpSubspace::zero(2, 2), &k),
            Err(Error::NotContained)
        );
    }

    #[test]
    fn odd_prime_rref() {
        let m = FpMatrix::from_rows(5, &[vec![2, 4, 1], vec![1, 2, 4]]);
        let r = m.rref();
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivots, vec![0, 2]);
        assert_eq!(r.matrix.row(0), &[1, 2, 0]);
        assert_eq!(r.matrix.row(1), &[0, 0, 1]);
    }

    #[test]
    fn inverse_roundtrip() {
        let m = FpMatrix::from_rows(7, &[vec![1, 2, 3], vec![0, 1, 4], vec![5, 6, 0]]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(FpMatrix::zeros(7, 2, 2).inverse().is_none());
    }

    #[test]
    fn echelon_builder_membership() {
        for p in [2, 3] {
            let mut e = EchelonBuilder::new(p, 4);
            assert!(e.insert(&[1, 1, 0, 0]));
            assert!(e.insert(&[0, 1, 1, 0]));
            assert!(!e.insert(&[1, 0, p - 1, 0]));
            assert!(e.contains(&[1, 2 % p, 1, 0]));
            assert!(!e.contains(&[0, 0, 0, 1]));
        }
    }

    #[test]
    fn inv_mod_small() {
        for p in [2u32, 3, 5, 7, 11, 13] {
            for a in 1..p {
                assert_eq!(a * inv_mod(a, p) % p, 1);
            }
        }
    }
}
