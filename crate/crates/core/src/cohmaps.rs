//! Cohomology with explicit cocycles, and the maps between groups:
//! restriction, transfer and conjugation.
//!
//! Every subgroup `H ≤ G` gets its own canonical resolution `R_H` of the
//! trivial module, and classes of `H` are always written in the basis
//! built from `R_H`. Maps between subgroups are computed on the common
//! resolution `R_G`, viewed as a free `H`-resolution, and transported with
//! comparison chain maps `R_H ⇄ R_G|_H`.
//!
//! A "`G`-level cochain" of degree `i` stores `f(x·e_k) ∈ N` for every
//! generator `e_k` of `P_i` in `R_G` and every `x ∈ G`, so it makes sense
//! for any subgroup at once.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::fplinalg::{EchelonBuilder, FpMatrix, FpSubspace, Solver};
use crate::gmodules::{trivial_module, GModule};
use crate::groups::{
    conjugate_subgroup, double_cosets, intersection, normalizer, sylow, FiniteGroup, Subgroup,
};
pub use crate::resolutions::CochainComplex;
use crate::resolutions::{
    cohomology_dims, default_resolution, evaluate_cochain, hom_complex, lift_chain_map, CosetChart,
    FreeMap, FreeResolution,
};

/// A basis of `H^i` given by cocycles, chosen as the canonical complement
/// of the coboundaries inside the cocycles.
#[derive(Clone, Debug)]
pub struct CohBasis {
    pub degree: usize,
    pub label: String,
    pub classes: Vec<Vec<u32>>,
    cochain_dim: usize,
    boundary_dim: usize,
    decompose: Arc<Solver>,
    cocycle_test: Arc<FpMatrix>,
}

impl CohBasis {
    fn new(complex: &CochainComplex, degree: usize, label: &str) -> Self {
        let p = complex.p;
        let n = complex.spaces[degree];
        let delta = complex
            .differentials
            .get(degree)
            .cloned()
            .unwrap_or_else(|| FpMatrix::zeros(p, 0, n));
        let cocycles = delta.kernel_basis();
        let boundaries = if degree == 0 {
            FpSubspace::zero(p, n)
        } else {
            complex.differentials[degree - 1].image()
        };
        let mut span = EchelonBuilder::new(p, n);
        for b in boundaries.basis_vectors() {
            span.insert(&b);
        }
        let mut classes = Vec::new();
        for z in cocycles.basis_vectors() {
            if span.dim() == cocycles.dim() {
                break;
            }
            if span.insert(&z) {
                classes.push(z);
            }
        }
        let mut cols = classes.clone();
        cols.extend(boundaries.basis_vectors());
        let decompose = Arc::new(Solver::new(&FpMatrix::from_col_vecs(p, n, &cols)));
        CohBasis {
            degree,
            label: label.to_string(),
            classes,
            cochain_dim: n,
            boundary_dim: boundaries.dim(),
            decompose,
            cocycle_test: Arc::new(delta),
        }
    }

    pub fn dim(&self) -> usize {
        self.classes.len()
    }

    pub fn cochain_dim(&self) -> usize {
        self.cochain_dim
    }

    pub fn coboundary_dim(&self) -> usize {
        self.boundary_dim
    }

    pub fn is_cocycle(&self, z: &[u32]) -> bool {
        self.cocycle_test.mul_vec(z).iter().all(|&c| c == 0)
    }

    /// Coordinates of the class of a cocycle.
    pub fn coordinates(&self, z: &[u32]) -> Option<Vec<u32>> {
        if !self.is_cocycle(z) {
            return None;
        }
        let x = self.decompose.solve(z)?;
        Some(x[..self.classes.len()].to_vec())
    }

    /// The cocycle `Σ c_j z_j`.
    pub fn cocycle(&self, coords: &[u32], p: u32) -> Vec<u32> {
        let mut out = vec![0u64; self.cochain_dim];
        for (c, z) in coords.iter().zip(&self.classes) {
            for (o, &v) in out.iter_mut().zip(z) {
                *o += *c as u64 * v as u64;
            }
        }
        out.into_iter().map(|s| (s % p as u64) as u32).collect()
    }
}

/// A linear map between two cohomology groups, in their canonical bases.
#[derive(Clone, Debug)]
pub struct CohMap {
    pub source: CohBasis,
    pub target: CohBasis,
    pub matrix: FpMatrix,
}

impl CohMap {
    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    /// Rows of the matrix as comma-separated residues.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for r in 0..self.matrix.rows() {
            let row: Vec<String> = self.matrix.row(r).iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }
}

/// Cohomology of one subgroup, tied to the common resolution `R_G`.
#[derive(Debug)]
pub struct SubContext {
    pub sub: Subgroup,
    group: Arc<FiniteGroup>,
    module: GModule,
    own: FreeResolution,
    chart: CosetChart,
    /// `R_H → R_G|_H`.
    phi: Vec<FreeMap>,
    /// `R_G|_H → R_H`.
    psi: Vec<FreeMap>,
    complex: CochainComplex,
    bases: Vec<CohBasis>,
}

impl SubContext {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }
    pub fn module(&self) -> &GModule {
        &self.module
    }
    pub fn resolution(&self) -> &FreeResolution {
        &self.own
    }
    pub fn complex(&self) -> &CochainComplex {
        &self.complex
    }
    pub fn basis(&self, i: usize) -> &CohBasis {
        &self.bases[i]
    }
    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(|b| b.dim()).collect()
    }
}

/// Shared state for all cohomology maps of `G` with coefficients in `N`
/// through a fixed degree.
#[derive(Debug)]
pub struct CohEngine {
    group: Arc<FiniteGroup>,
    module: GModule,
    max_deg: usize,
    res: FreeResolution,
    subs: Mutex<HashMap<Vec<usize>, Arc<SubContext>>>,
}

impl CohEngine {
    pub fn new(module: &GModule, max_deg: usize) -> Self {
        let group = Arc::clone(module.group());
        let res = default_resolution(&trivial_module(&group, module.p(), 1), max_deg + 1);
        CohEngine {
            group,
            module: module.clone(),
            max_deg,
            res,
            subs: Mutex::new(HashMap::new()),
        }
    }

    pub fn trivial(g: &Arc<FiniteGroup>, p: u32, max_deg: usize) -> Self {
        CohEngine::new(&trivial_module(g, p, 1), max_deg)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }
    pub fn p(&self) -> u32 {
        self.module.p()
    }
    pub fn max_deg(&self) -> usize {
        self.max_deg
    }
    pub fn resolution(&self) -> &FreeResolution {
        &self.res
    }

    fn check_degree(&self, i: usize) -> Result<()> {
        if i > self.max_deg {
            return Err(Error::DegreeMismatch(format!(
                "degree {i} beyond {}",
                self.max_deg
            )));
        }
        Ok(())
    }

    pub fn whole(&self) -> Arc<SubContext> {
        self.context(&Subgroup::whole(&self.group))
    }

    pub fn context(&self, h: &Subgroup) -> Arc<SubContext> {
        let key = h.members().to_vec();
        if let Some(c) = self.subs.lock().expect("poisoned").get(&key) {
            return Arc::clone(c);
        }
        let ctx = Arc::new(self.build_context(h));
        self.subs
            .lock()
            .expect("poisoned")
            .entry(key)
            .or_insert(ctx)
            .clone()
    }

    fn build_context(&self, h: &Subgroup) -> SubContext {
        let p = self.p();
        let whole = h.order() == self.group.order();
        let (restricted, chart, group) = if whole {
            (
                self.res.clone(),
                CosetChart::new(&self.group, h),
                Arc::clone(&self.group),
            )
        } else {
            let (r, c) = self.res.restrict(h);
            let g = Arc::clone(r.group());
            (r, c, g)
        };
        let module = if whole {
            self.module.clone()
        } else {
            crate::gmodules::restrict_along(&self.module, &group, h.members())
        };
        let (own, phi, psi) = if whole {
            let ident: Vec<FreeMap> = (0..=self.max_deg)
                .map(|i| {
                    let r = self.res.rank(i);
                    let n = group.order();
                    let images = (0..r)
                        .map(|k| {
                            let mut v = vec![0; r * n];
                            v[k * n] = 1;
                            v
                        })
                        .collect();
                    FreeMap {
                        src_rank: r,
                        tgt_rank: r,
                        images,
                    }
                })
                .collect();
            (restricted, ident.clone(), ident)
        } else {
            let own = default_resolution(&trivial_module(&group, p, 1), self.max_deg + 1);
            let phi =
                lift_chain_map(&own, &restricted, self.max_deg).expect("restriction is exact");
            let psi =
                lift_chain_map(&restricted, &own, self.max_deg).expect("own resolution is exact");
            (own, phi, psi)
        };
        let complex = hom_complex(&own, &module, self.max_deg).expect("resolution long enough");
        let label = format!(
            "H^*({})",
            if whole {
                self.group.name().to_string()
            } else {
                group.name().to_string()
            }
        );
        let bases = (0..=self.max_deg)
            .map(|i| CohBasis::new(&complex, i, &label))
            .collect();
        SubContext {
            sub: h.clone(),
            group,
            module,
            own,
            chart,
            phi,
            psi,
            complex,
            bases,
        }
    }

    fn gens_times_order(&self, i: usize) -> usize {
        self.res.rank(i) * self.group.order()
    }

    /// `G`-level cochain of an `H`-cocycle on `R_H`.
    fn lift(&self, ctx: &SubContext, i: usize, u: &[u32]) -> Vec<u32> {
        let d = self.module.dim();
        let n = self.group.order();
        let m = ctx.chart.cosets();
        let values: Vec<Vec<u32>> = ctx.psi[i]
            .images
            .iter()
            .map(|img| evaluate_cochain(&ctx.group, &ctx.module, u, img))
            .collect();
        let mut out = vec![0u32; self.gens_times_order(i) * d];
        for k in 0..self.res.rank(i) {
            for x in 0..n {
                let (j, h) = ctx.chart.split[x];
                let v = ctx.module.act(h, &values[k * m + j]);
                out[(k * n + x) * d..(k * n + x + 1) * d].copy_from_slice(&v);
            }
        }
        out
    }

    /// Class in `H^i(H)` of an `H`-equivariant `G`-level cochain.
    fn project(&self, ctx: &SubContext, i: usize, f: &[u32]) -> Vec<u32> {
        let d = self.module.dim();
        let n = self.group.order();
        let m = ctx.chart.cosets();
        let mut on_gens = vec![0u32; self.res.rank(i) * m * d];
        for k in 0..self.res.rank(i) {
            for (j, &t) in ctx.chart.reps.iter().enumerate() {
                let src = &f[(k * n + t) * d..(k * n + t + 1) * d];
                on_gens[(k * m + j) * d..(k * m + j + 1) * d].copy_from_slice(src);
            }
        }
        let cocycle: Vec<u32> = ctx.phi[i]
            .images
            .iter()
            .flat_map(|img| evaluate_cochain(&ctx.group, &ctx.module, &on_gens, img))
            .collect();
        ctx.bases[i]
            .coordinates(&cocycle)
            .expect("image of a cocycle is a cocycle")
    }

    /// `(c_g f)(x) = g·f(g^{-1} x)`.
    fn conjugate_cochain(&self, i: usize, f: &[u32], g: usize) -> Vec<u32> {
        let d = self.module.dim();
        let n = self.group.order();
        let gi = self.group.inv(g);
        let mut out = vec![0u32; f.len()];
        for k in 0..self.res.rank(i) {
            for x in 0..n {
                let y = self.group.mul(gi, x);
                let v = self.module.act(g, &f[(k * n + y) * d..(k * n + y + 1) * d]);
                out[(k * n + x) * d..(k * n + x + 1) * d].copy_from_slice(&v);
            }
        }
        out
    }

    /// `(tr f)(x) = Σ_j l_j·f(l_j^{-1} x)` over left coset representatives
    /// of `small` in `big`.
    fn transfer_cochain(&self, i: usize, f: &[u32], small: &Subgroup, big: &Subgroup) -> Vec<u32> {
        let d = self.module.dim();
        let n = self.group.order();
        let p = self.p() as u64;
        let reps = left_reps_within(&self.group, big, small);
        let mut acc = vec![0u64; f.len()];
        for &l in &reps {
            let li = self.group.inv(l);
            for k in 0..self.res.rank(i) {
                for x in 0..n {
                    let y = self.group.mul(li, x);
                    let v = self.module.act(l, &f[(k * n + y) * d..(k * n + y + 1) * d]);
                    for (a, b) in acc[(k * n + x) * d..(k * n + x + 1) * d].iter_mut().zip(v) {
                        *a += b as u64;
                    }
                }
            }
        }
        acc.into_iter().map(|s| (s % p) as u32).collect()
    }

    fn assemble(
        &self,
        src: &SubContext,
        tgt: &SubContext,
        i: usize,
        f: impl Fn(Vec<u32>) -> Vec<u32>,
    ) -> CohMap {
        let p = self.p();
        let sb = &src.bases[i];
        let tb = &tgt.bases[i];
        let cols: Vec<Vec<u32>> = sb
            .classes
            .iter()
            .map(|z| {
                let lifted = self.lift(src, i, z);
                self.project(tgt, i, &f(lifted))
            })
            .collect();
        CohMap {
            source: sb.clone(),
            target: tb.clone(),
            matrix: FpMatrix::from_col_vecs(p, tb.dim(), &cols),
        }
    }

    pub fn basis(&self, h: &Subgroup, i: usize) -> Result<CohBasis> {
        self.check_degree(i)?;
        Ok(self.context(h).bases[i].clone())
    }

    /// `res^big_small`.
    pub fn restriction(&self, big: &Subgroup, small: &Subgroup, i: usize) -> Result<CohMap> {
        self.check_degree(i)?;
        if !small.is_subgroup_of(big) {
            return Err(Error::NotContained);
        }
        let (b, s) = (self.context(big), self.context(small));
        Ok(self.assemble(&b, &s, i, |f| f))
    }

    /// `tr^big_small`.
    pub fn transfer(&self, small: &Subgroup, big: &Subgroup, i: usize) -> Result<CohMap> {
        self.check_degree(i)?;
        if !small.is_subgroup_of(big) {
            return Err(Error::NotContained);
        }
        let (s, b) = (self.context(small), self.context(big));
        Ok(self.assemble(&s, &b, i, |f| self.transfer_cochain(i, &f, small, big)))
    }

    /// `c_g: H^i(H) → H^i(gHg^{-1})`.
    pub fn conjugation(&self, h: &Subgroup, g: usize, i: usize) -> Result<CohMap> {
        self.check_degree(i)?;
        let k = conjugate_subgroup(h, g);
        let (src, tgt) = (self.context(h), self.context(&k));
        Ok(self.assemble(&src, &tgt, i, |f| self.conjugate_cochain(i, &f, g)))
    }

    /// `res^G_H ∘ tr^G_K = Σ_g tr^H_{H∩gKg⁻¹} ∘ res^{gKg⁻¹}_{H∩gKg⁻¹} ∘ c_g`
    /// over double coset representatives of `H\G/K`.
    pub fn double_coset_identity(&self, h: &Subgroup, k: &Subgroup, i: usize) -> Result<bool> {
        let g = Subgroup::whole(&self.group);
        let lhs = self
            .restriction(&g, h, i)?
            .matrix
            .mul(&self.transfer(k, &g, i)?.matrix);
        let p = self.p();
        let mut rhs = FpMatrix::zeros(p, lhs.rows(), lhs.cols());
        for &x in &double_cosets(&self.group, h, k).reps {
            let kx = conjugate_subgroup(k, x);
            let q = intersection(h, &kx);
            let term = self
                .transfer(&q, h, i)?
                .matrix
                .mul(&self.restriction(&kx, &q, i)?.matrix)
                .mul(&self.conjugation(k, x, i)?.matrix);
            rhs = rhs.add(&term);
        }
        Ok(lhs == rhs)
    }

    /// Stable classes in `H^i(P)` for a Sylow subgroup `P`.
    pub fn stable_subspace(&self, i: usize) -> Result<StableSubspace> {
        let p = self.p();
        let s = sylow(&self.group, p);
        let dim = self.basis(&s, i)?.dim();
        let mut blocks = Vec::new();
        for &g in &double_cosets(&self.group, &s, &s).reps {
            let sg = conjugate_subgroup(&s, g);
            let q = intersection(&s, &sg);
            let direct = self.restriction(&s, &q, i)?.matrix;
            let via = self
                .restriction(&sg, &q, i)?
                .matrix
                .mul(&self.conjugation(&s, g, i)?.matrix);
            blocks.push(direct.sub(&via));
        }
        let refs: Vec<&FpMatrix> = blocks.iter().collect();
        let stacked = FpMatrix::vstack(p, dim, &refs);
        let basis = stacked.kernel_basis();
        Ok(StableSubspace {
            degree: i,
            dim: basis.dim(),
            basis,
            sylow: s,
        })
    }

    /// Joint restriction to the given subgroups is injective in degree `i`.
    pub fn detects(&self, subgroups: &[Subgroup], i: usize) -> Result<bool> {
        let g = Subgroup::whole(&self.group);
        let dim = self.basis(&g, i)?.dim();
        let mut blocks = Vec::new();
        for h in subgroups {
            blocks.push(self.restriction(&g, h, i)?.matrix);
        }
        let refs: Vec<&FpMatrix> = blocks.iter().collect();
        Ok(FpMatrix::vstack(self.p(), dim, &refs).rank() == dim)
    }
}

/// Least-index representatives of the left cosets `l·small` inside `big`.
fn left_reps_within(g: &FiniteGroup, big: &Subgroup, small: &Subgroup) -> Vec<usize> {
    let mut seen = vec![false; g.order()];
    let mut reps = Vec::new();
    for &x in big.members() {
        if seen[x] {
            continue;
        }
        reps.push(x);
        for &s in small.members() {
            seen[g.mul(x, s)] = true;
        }
    }
    reps
}

#[derive(Clone, Debug)]
pub struct StableSubspace {
    pub degree: usize,
    pub dim: usize,
    /// Coordinates in the canonical basis of `H^i(P)`.
    pub basis: FpSubspace,
    pub sylow: Subgroup,
}

pub fn coh_basis(m: &GModule, i: usize) -> CohBasis {
    CohEngine::new(m, i).whole().bases[i].clone()
}

pub fn restriction(m: &GModule, h: &Subgroup, i: usize) -> Result<CohMap> {
    let e = CohEngine::new(m, i);
    e.restriction(&Subgroup::whole(e.group()), h, i)
}

pub fn transfer(m: &GModule, h: &Subgroup, i: usize) -> Result<CohMap> {
    let e = CohEngine::new(m, i);
    e.transfer(h, &Subgroup::whole(e.group()), i)
}

pub fn conjugation(m: &GModule, g: usize, h: &Subgroup, i: usize) -> Result<CohMap> {
    CohEngine::new(m, i).conjugation(h, g, i)
}

pub fn double_coset_identity_check(
    m: &GModule,
    h: &Subgroup,
    k: &Subgroup,
    i: usize,
) -> Result<bool> {
    CohEngine::new(m, i).double_coset_identity(h, k, i)
}

pub fn stable_subspace(g: &Arc<FiniteGroup>, p: u32, i: usize) -> Result<StableSubspace> {
    CohEngine::trivial(g, p, i).stable_subspace(i)
}

pub fn detection_check(
    g: &Arc<FiniteGroup>,
    p: u32,
    subgroups: &[Subgroup],
    i: usize,
) -> Result<bool> {
    CohEngine::trivial(g, p, i).detects(subgroups, i)
}

/// For abelian Sylow `P`: `dim H^i(G) = rank res^G_P = dim H^i(N_G(P))`
/// in every degree through `max_deg`.
pub fn abelian_sylow_check(g: &Arc<FiniteGroup>, p: u32, max_deg: usize) -> Result<bool> {
    let s = sylow(g, p);
    if !s.is_abelian() {
        return Err(Error::SylowNotAbelian(p));
    }
    let engine = CohEngine::trivial(g, p, max_deg);
    let whole = Subgroup::whole(g);
    let n = normalizer(g, &s);
    let n_dims = cohomology_dims(&n.as_group(), p, max_deg).dims;
    for i in 0..=max_deg {
        let dim = engine.basis(&whole, i)?.dim();
        let image = engine.restriction(&whole, &s, i)?.rank();
        if dim != image || dim != n_dims[i] {
            return Ok(false);
        }
    }
    Ok(true)
}
