//! Cup products through a diagonal approximation, and splice complexes of
//! permutation modules.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::cohmaps::{CochainComplex, CohEngine, SubContext};
use crate::error::{Error, Result};
use crate::fplinalg::{FpMatrix, Solver};
use crate::gmodules::{permutation_module, GModule};
use crate::groups::{maximal_subgroups, FiniteGroup, Subgroup};
use crate::resolutions::FreeResolution;

/// Chain map `Δ: P → P ⊗ P` over the identity of `F_p`, with the diagonal
/// group action on the tensor product.
///
/// `components[n][k][i]` is the `(i, n − i)` part of `Δ(e_k)` for the
/// `k`-th generator of `P_n`, as an `(r_i|G|) × (r_{n-i}|G|)` matrix whose
/// entry `(a, b)` is the coefficient of `a ⊗ b`.
#[derive(Clone, Debug)]
pub struct DiagonalMap {
    res: FreeResolution,
    max_deg: usize,
    components: Vec<Vec<Vec<FpMatrix>>>,
}

/// `g·X` for the diagonal action on `P_i ⊗ P_j`.
fn act_tensor(group: &FiniteGroup, g: usize, x: &FpMatrix, ri: usize, rj: usize) -> FpMatrix {
    let n = group.order();
    let mut out = FpMatrix::zeros(x.p(), x.rows(), x.cols());
    let moved = |rank: usize| -> Vec<usize> {
        (0..rank * n)
            .map(|a| (a / n) * n + group.mul(g, a % n))
            .collect()
    };
    let (ma, mb) = (moved(ri), moved(rj));
    for a in 0..x.rows() {
        let row = x.row(a);
        for (b, &v) in row.iter().enumerate() {
            if v != 0 {
                out.set(ma[a], mb[b], v);
            }
        }
    }
    out
}

impl DiagonalMap {
    pub fn resolution(&self) -> &FreeResolution {
        &self.res
    }

    pub fn max_deg(&self) -> usize {
        self.max_deg
    }

    pub fn component(&self, n: usize, k: usize, i: usize) -> &FpMatrix {
        &self.components[n][k][i]
    }

    /// `Δ_n` applied to an arbitrary chain of `P_n`, component by
    /// component.
    pub fn apply(&self, n: usize, v: &[u32]) -> Vec<FpMatrix> {
        let group = self.res.group();
        let order = group.order();
        let p = self.res.p();
        let mut acc: Vec<FpMatrix> = (0..=n)
            .map(|i| FpMatrix::zeros(p, self.res.rank(i) * order, self.res.rank(n - i) * order))
            .collect();
        for k in 0..self.res.rank(n) {
            for x in 0..order {
                let c = v[k * order + x];
                if c == 0 {
                    continue;
                }
                for i in 0..=n {
                    let moved = act_tensor(
                        group,
                        x,
                        &self.components[n][k][i],
                        self.res.rank(i),
                        self.res.rank(n - i),
                    );
                    acc[i] = acc[i].add(&moved.scale(c));
                }
            }
        }
        acc
    }

    /// `D(Σ X_i)` in total degree `n − 1`, with
    /// `D(a ⊗ b) = da ⊗ b + (−1)^{|a|} a ⊗ db`.
    fn tensor_boundary(&self, n: usize, parts: &[FpMatrix]) -> Vec<FpMatrix> {
        let order = self.res.group().order();
        let p = self.res.p();
        let mut out: Vec<FpMatrix> = (0..n)
            .map(|i| {
                FpMatrix::zeros(
                    p,
                    self.res.rank(i) * order,
                    self.res.rank(n - 1 - i) * order,
                )
            })
            .collect();
        for (i, x) in parts.iter().enumerate() {
            let j = n - i;
            if i > 0 {
                out[i - 1] = out[i - 1].add(&self.res.full_matrix(i).mul(x));
            }
            if j > 0 {
                let t = x.mul(&self.res.full_matrix(j).transpose());
                out[i] = if i % 2 == 0 {
                    out[i].add(&t)
                } else {
                    out[i].sub(&t)
                };
            }
        }
        out
    }

    /// `D ∘ Δ_n = Δ_{n−1} ∘ d_n` on every generator, for `1 ≤ n ≤ max_deg`.
    pub fn verify_chain_map(&self) -> bool {
        (1..=self.max_deg).all(|n| {
            (0..self.res.rank(n)).all(|k| {
                let lhs = self.tensor_boundary(n, &self.components[n][k]);
                let rhs = self.apply(n - 1, &self.res.boundary(n).images[k]);
                lhs == rhs
            })
        })
    }

    /// `(ε ⊗ ε) ∘ Δ_0 = ε`.
    pub fn verify_counit(&self) -> bool {
        let order = self.res.group().order();
        let eps: Vec<u32> = (0..self.res.rank(0) * order)
            .map(|a| self.res.augmentation()[a / order][0])
            .collect();
        (0..self.res.rank(0)).all(|k| {
            let x = &self.components[0][k][0];
            let v = x.mul_vec(&eps);
            let total = eps
                .iter()
                .zip(&v)
                .fold(0u64, |s, (&a, &b)| s + a as u64 * b as u64)
                % self.res.p() as u64;
            total as u32 == self.res.augmentation()[k][0]
        })
    }
}

/// Builds `Δ` degree by degree from a contracting homotopy `s` of the
/// resolution (as a complex of vector spaces):
/// `Δ_n(e_k) = h(Δ_{n−1}(d e_k))` with `h = s ⊗ 1 + ηε ⊗ s`, where `η` is
/// the first basis element of `P_0`.
pub fn diagonal_approximation(res: &FreeResolution, max_deg: usize) -> Result<DiagonalMap> {
    let target = res.target();
    if target.dim() != 1 || !target.is_trivial_action() {
        return Err(Error::BadParameters(
            "diagonal needs a resolution of the trivial module".into(),
        ));
    }
    if res.length() < max_deg + 1 {
        return Err(Error::LengthTooSmall(max_deg + 1));
    }
    let group = res.group();
    let order = group.order();
    let p = res.p();
    let r0 = res.rank(0) * order;
    let eps: Vec<u32> = (0..r0).map(|a| res.augmentation()[a / order][0]).collect();
    let eta_index = (0..r0)
        .find(|&a| eps[a] != 0)
        .ok_or(Error::LiftFailure(0))?;
    let eta_scale = crate::fplinalg::inv_mod(eps[eta_index], p);
    let mut eta = vec![0u32; r0];
    eta[eta_index] = eta_scale;

    // contracting homotopy s_i: P_i → P_{i+1} as full matrices
    let mut homotopy: Vec<FpMatrix> = Vec::with_capacity(max_deg + 1);
    for i in 0..=max_deg {
        let solver: Arc<Solver> = res.solver(i + 1);
        let dim_i = res.rank(i) * order;
        let d_i = if i == 0 {
            None
        } else {
            Some(res.full_matrix(i))
        };
        let mut cols = Vec::with_capacity(dim_i);
        for b in 0..dim_i {
            let mut rhs = vec![0u32; dim_i];
            rhs[b] = 1;
            let correction: Vec<u32> = match &d_i {
                None => eta
                    .iter()
                    .map(|&e| (e as u64 * eps[b] as u64 % p as u64) as u32)
                    .collect(),
                Some(d) => homotopy[i - 1].mul_vec(&d.col(b)),
            };
            for (r, c) in rhs.iter_mut().zip(correction) {
                *r = (*r + p - c) % p;
            }
            cols.push(solver.solve(&rhs).ok_or(Error::LiftFailure(i + 1))?);
        }
        homotopy.push(FpMatrix::from_col_vecs(p, res.rank(i + 1) * order, &cols));
    }
    // f = ηε on P_0
    let f0 = FpMatrix::from_col_vecs(
        p,
        r0,
        &(0..r0)
            .map(|a| {
                eta.iter()
                    .map(|&e| (e as u64 * eps[a] as u64 % p as u64) as u32)
                    .collect()
            })
            .collect::<Vec<_>>(),
    );

    let mut diag = DiagonalMap {
        res: res.clone(),
        max_deg,
        components: Vec::with_capacity(max_deg + 1),
    };
    // Δ_0(e_k) = e_k ⊗ η
    let deg0: Vec<Vec<FpMatrix>> = (0..res.rank(0))
        .map(|k| {
            let mut x = FpMatrix::zeros(p, r0, r0);
            for (b, &e) in eta.iter().enumerate() {
                if e != 0 {
                    x.set(k * order, b, e);
                }
            }
            vec![x]
        })
        .collect();
    diag.components.push(deg0);
    for n in 1..=max_deg {
        let mut level = Vec::with_capacity(res.rank(n));
        for k in 0..res.rank(n) {
            let y = diag.apply(n - 1, &res.boundary(n).images[k]);
            let mut parts: Vec<FpMatrix> = (0..=n)
                .map(|i| FpMatrix::zeros(p, res.rank(i) * order, res.rank(n - i) * order))
                .collect();
            for (i, yi) in y.iter().enumerate() {
                parts[i + 1] = parts[i + 1].add(&homotopy[i].mul(yi));
                if i == 0 {
                    let j = n - 1;
                    parts[0] = parts[0].add(&f0.mul(yi).mul(&homotopy[j].transpose()));
                }
            }
            level.push(parts);
        }
        diag.components.push(level);
    }
    Ok(diag)
}

/// Cohomology ring of one group (or subgroup context) through a degree.
#[derive(Debug)]
pub struct CohRing {
    ctx: Arc<SubContext>,
    diag: DiagonalMap,
    p: u32,
}

impl CohRing {
    pub fn new(g: &Arc<FiniteGroup>, p: u32, max_deg: usize) -> Result<Self> {
        let engine = CohEngine::trivial(g, p, max_deg);
        CohRing::from_context(engine.whole(), p, max_deg)
    }

    /// Ring of a subgroup, on that subgroup's own resolution.
    pub fn for_subgroup(engine: &CohEngine, h: &Subgroup) -> Result<Self> {
        CohRing::from_context(engine.context(h), engine.p(), engine.max_deg())
    }

    fn from_context(ctx: Arc<SubContext>, p: u32, max_deg: usize) -> Result<Self> {
        let diag = diagonal_approximation(ctx.resolution(), max_deg)?;
        Ok(CohRing { ctx, diag, p })
    }

    pub fn max_deg(&self) -> usize {
        self.diag.max_deg
    }

    pub fn dim(&self, i: usize) -> usize {
        self.ctx.basis(i).dim()
    }

    pub fn diagonal(&self) -> &DiagonalMap {
        &self.diag
    }

    /// Class of the unit in `H^0`.
    pub fn unit(&self) -> Vec<u32> {
        let z = vec![1u32; self.ctx.basis(0).cochain_dim()];
        self.ctx
            .basis(0)
            .coordinates(&z)
            .expect("constant cochain is a cocycle")
    }

    /// `a ∪ b` for classes given by coordinates in the canonical bases.
    pub fn cup(&self, i: usize, a: &[u32], j: usize, b: &[u32]) -> Result<Vec<u32>> {
        if i + j > self.max_deg() {
            return Err(Error::DegreeMismatch(format!(
                "{i} + {j} exceeds {}",
                self.max_deg()
            )));
        }
        if a.len() != self.dim(i) || b.len() != self.dim(j) {
            return Err(Error::DegreeMismatch(
                "class length does not match the degree".into(),
            ));
        }
        let za = self.ctx.basis(i).cocycle(a, self.p);
        let zb = self.ctx.basis(j).cocycle(b, self.p);
        let z = self.cup_cocycles(i, &za, j, &zb);
        Ok(self
            .ctx
            .basis(i + j)
            .coordinates(&z)
            .expect("cup of cocycles is a cocycle"))
    }

    /// `(a ⊗ b) ∘ Δ` on cocycles.
    pub fn cup_cocycles(&self, i: usize, za: &[u32], j: usize, zb: &[u32]) -> Vec<u32> {
        let res = self.diag.resolution();
        let order = res.group().order();
        let p = self.p as u64;
        let expand = |z: &[u32]| -> Vec<u32> {
            z.iter()
                .flat_map(|&c| std::iter::repeat_n(c, order))
                .collect()
        };
        let (ea, eb) = (expand(za), expand(zb));
        (0..res.rank(i + j))
            .map(|k| {
                let x = self.diag.component(i + j, k, i);
                let xb = x.mul_vec(&eb);
                (ea.iter()
                    .zip(&xb)
                    .fold(0u64, |s, (&u, &v)| s + u as u64 * v as u64)
                    % p) as u32
            })
            .collect()
    }

    /// `dim span{a ∪ b : a ∈ H^i, b ∈ H^j}`.
    pub fn span_dim(&self, i: usize, j: usize) -> Result<usize> {
        let mut prods = Vec::new();
        for s in 0..self.dim(i) {
            for t in 0..self.dim(j) {
                let mut a = vec![0; self.dim(i)];
                let mut b = vec![0; self.dim(j)];
                a[s] = 1;
                b[t] = 1;
                prods.push(self.cup(i, &a, j, &b)?);
            }
        }
        Ok(FpMatrix::from_row_vecs(self.p, self.dim(i + j), &prods).rank())
    }

    /// CSV rows `i,j,span_dim,dim_h` for all `1 ≤ i ≤ j`, `i + j ≤ max_total`.
    pub fn product_table_csv(&self, max_total: usize) -> Result<String> {
        let mut out = String::from("i,j,span_dim,dim_h\n");
        for total in 2..=max_total.min(self.max_deg()) {
            for i in 1..=total / 2 {
                let j = total - i;
                let _ = writeln!(out, "{i},{j},{},{}", self.span_dim(i, j)?, self.dim(total));
            }
        }
        Ok(out)
    }
}

pub fn product_span_dims(g: &Arc<FiniteGroup>, p: u32, i: usize, j: usize) -> Result<usize> {
    CohRing::new(g, p, i + j)?.span_dim(i, j)
}

/// The spliced sequence
/// `F_p[P/H_n] → F_p[P/H_n] → F_p[P/H_{n−1}] → … → F_p[P/H_1]`, with
/// `t_i − 1` inside each segment and `N ∘ ε` at the seams, read as a
/// cochain complex.
#[derive(Clone, Debug)]
pub struct SpliceComplex {
    pub group: Arc<FiniteGroup>,
    pub p: u32,
    pub subgroups: Vec<Subgroup>,
    pub modules: Vec<GModule>,
    /// Least-index lift of a generator of `P/H_i`.
    pub lifts: Vec<usize>,
    pub complex: CochainComplex,
}

impl SpliceComplex {
    pub fn n(&self) -> usize {
        self.subgroups.len()
    }

    /// `F_p → F_p[P/H] → F_p[P/H] → F_p` is exact for every segment.
    pub fn segments_exact(&self) -> bool {
        self.modules.iter().zip(&self.lifts).all(|(m, &t)| {
            let d = m.dim();
            let tm1 = m.action(t).sub(&FpMatrix::identity(self.p, d));
            let ones = vec![1u32; d];
            let eps = FpMatrix::from_row_vecs(self.p, d, &[ones.clone()]);
            let unit = FpMatrix::from_col_vecs(self.p, d, &[ones]);
            tm1.mul(&unit).is_zero()
                && eps.mul(&tm1).is_zero()
                && tm1.rank() == d - 1
                && tm1.kernel_basis().dim() == 1
                && eps.rank() == 1
        })
    }
}

pub fn splice_complex(
    g: &Arc<FiniteGroup>,
    p: u32,
    subgroups: &[Subgroup],
) -> Result<SpliceComplex> {
    if subgroups.is_empty() {
        return Err(Error::EmptyInput("no maximal subgroups given".into()));
    }
    if !g.is_p_group(p) {
        return Err(Error::BadParameters(format!(
            "{} is not a {p}-group",
            g.name()
        )));
    }
    for h in subgroups {
        if h.index() != p as usize || !h.is_closed() {
            return Err(Error::NotMaximal(format!(
                "subgroup of order {} in {}",
                h.order(),
                g.name()
            )));
        }
    }
    let modules: Vec<GModule> = subgroups
        .iter()
        .map(|h| permutation_module(g, h, p))
        .collect();
    let lifts: Vec<usize> = subgroups
        .iter()
        .map(|h| {
            (0..g.order())
                .find(|&x| !h.contains(x))
                .expect("proper subgroup")
        })
        .collect();
    // H_n first
    let order: Vec<usize> = (0..subgroups.len()).rev().collect();
    let mut spaces = Vec::new();
    let mut diffs = Vec::new();
    for (pos, &s) in order.iter().enumerate() {
        let m = &modules[s];
        let d = m.dim();
        spaces.push(d);
        spaces.push(d);
        diffs.push(m.action(lifts[s]).sub(&FpMatrix::identity(p, d)));
        if let Some(&next) = order.get(pos + 1) {
            let dn = modules[next].dim();
            diffs.push(FpMatrix::from_data(p, dn, d, vec![1; dn * d]));
        }
    }
    let complex = CochainComplex::new(p, spaces, diffs)?;
    Ok(SpliceComplex {
        group: Arc::clone(g),
        p,
        subgroups: subgroups.to_vec(),
        modules,
        lifts,
        complex,
    })
}

/// Plain cohomology is one-dimensional in degrees `0` and `2n − 1` only.
pub fn sphere_cohomology_check(c: &SpliceComplex) -> bool {
    let top = 2 * c.n() - 1;
    c.complex.is_complex()
        && c.complex
            .cohomology_dims()
            .iter()
            .enumerate()
            .all(|(i, &d)| d == usize::from(i == 0 || i == top))
}

/// First tuple of `n` maximal subgroups, in lexicographic order of their
/// positions in [`maximal_subgroups`], whose splice complex passes
/// [`sphere_cohomology_check`]. Tuples longer than three are not searched.
pub fn find_sphere_splice(g: &Arc<FiniteGroup>, p: u32, n: usize) -> Result<Option<SpliceComplex>> {
    if n == 0 || n > 3 {
        return Err(Error::BadParameters(format!(
            "tuple length {n} outside 1..=3"
        )));
    }
    let maxs = maximal_subgroups(g, p);
    let m = maxs.len();
    let total = m.pow(n as u32);
    for code in 0..total {
        let mut idx = Vec::with_capacity(n);
        let mut c = code;
        for _ in 0..n {
            idx.push(c % m);
            c /= m;
        }
        idx.reverse();
        let tuple: Vec<Subgroup> = idx.iter().map(|&i| maxs[i].clone()).collect();
        let s = splice_complex(g, p, &tuple)?;
        if sphere_cohomology_check(&s) {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{make_cyclic, make_dihedral, make_elementary_abelian};
    use crate::gmodules::trivial_module;
    use crate::resolutions::free_resolution;

    #[test]
    fn z2_polynomial() {
        let g = Arc::new(make_cyclic(2).unwrap());
        let ring = CohRing::new(&g, 2, 8).unwrap();
        assert!(ring.diagonal().verify_chain_map());
        assert!(ring.diagonal().verify_counit());
        let x = vec![1u32];
        let mut pow = x.clone();
        for n in 2..=8 {
            pow = ring.cup(n - 1, &pow, 1, &x).unwrap();
            assert_eq!(pow, vec![1], "x^{n}");
        }
        let u = ring.unit();
        assert_eq!(ring.cup(0, &u, 3, &[1]).unwrap(), vec![1]);
    }

    #[test]
    fn z3_exterior() {
        let g = Arc::new(make_cyclic(3).unwrap());
        let ring = CohRing::new(&g, 3, 4).unwrap();
        assert_eq!(ring.cup(1, &[1], 1, &[1]).unwrap(), vec![0]);
        assert_eq!(ring.span_dim(1, 2).unwrap(), 1);
    }

    #[test]
    fn small_spans() {
        let d8 = Arc::new(make_dihedral(8).unwrap());
        assert_eq!(product_span_dims(&d8, 2, 1, 1).unwrap(), 2);
        let v4 = Arc::new(make_elementary_abelian(2, 2).unwrap());
        assert_eq!(product_span_dims(&v4, 2, 1, 1).unwrap(), 3);
    }

    #[test]
    fn d8_diagonal_degree_8() {
        let d8 = Arc::new(make_dihedral(8).unwrap());
        let res = free_resolution(&trivial_module(&d8, 2, 1), 9, true).unwrap();
        let diag = diagonal_approximation(&res, 8).unwrap();
        assert!(diag.verify_chain_map());
    }

    #[test]
    fn splices() {
        let z4 = Arc::new(make_cyclic(4).unwrap());
        let h = maximal_subgroups(&z4, 2);
        let s = splice_complex(&z4, 2, &h).unwrap();
        assert!(s.segments_exact());
        assert!(sphere_cohomology_check(&s));
        assert_eq!(s.complex.differentials[0].rank(), 1);
        assert!(matches!(
            splice_complex(&z4, 2, &[]),
            Err(Error::EmptyInput(_))
        ));
        let whole = Subgroup::whole(&z4);
        assert!(matches!(
            splice_complex(&z4, 2, &[whole]),
            Err(Error::NotMaximal(_))
        ));
        let d8 = Arc::new(make_dihedral(8).unwrap());
        let maxs = maximal_subgroups(&d8, 2);
        assert!(splice_complex(&d8, 2, &maxs).unwrap().segments_exact());
    }
}
