//! Free `F_p[G]`-modules, equivariant maps between them and free
//! resolutions.
//!
//! A free module of rank `r` is stored as `F_p^{r·|G|}` with coordinate
//! `k·|G| + x` standing for the basis element `x·e_k`. An equivariant map
//! is determined by the images of the free generators `e_k`.

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::fplinalg::{EchelonBuilder, FpMatrix, FpSubspace, Solver};
use crate::gmodules::{augmentation_submodule, GModule};
use crate::groups::{right_coset_representatives, FiniteGroup, Subgroup};

/// Left translation `g·v` of a vector in a free module of the given rank.
pub fn translate(group: &FiniteGroup, g: usize, v: &[u32], rank: usize) -> Vec<u32> {
    let n = group.order();
    let mut out = vec![0u32; rank * n];
    for l in 0..rank {
        for x in 0..n {
            let c = v[l * n + x];
            if c != 0 {
                out[l * n + group.mul(g, x)] = c;
            }
        }
    }
    out
}

/// An equivariant map `F_p[G]^src → F_p[G]^tgt`, stored as the images of
/// the source generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeMap {
    pub src_rank: usize,
    pub tgt_rank: usize,
    pub images: Vec<Vec<u32>>,
}

impl FreeMap {
    pub fn zero(src_rank: usize, tgt_rank: usize, order: usize) -> Self {
        FreeMap {
            src_rank,
            tgt_rank,
            images: vec![vec![0; tgt_rank * order]; src_rank],
        }
    }

    pub fn apply(&self, group: &FiniteGroup, p: u32, v: &[u32]) -> Vec<u32> {
        let n = group.order();
        debug_assert_eq!(v.len(), self.src_rank * n);
        let mut acc = vec![0u64; self.tgt_rank * n];
        for k in 0..self.src_rank {
            let img = &self.images[k];
            for x in 0..n {
                let c = v[k * n + x] as u64;
                if c == 0 {
                    continue;
                }
                for l in 0..self.tgt_rank {
                    for y in 0..n {
                        let a = img[l * n + y];
                        if a != 0 {
                            acc[l * n + group.mul(x, y)] += c * a as u64;
                        }
                    }
                }
            }
        }
        acc.into_iter().map(|s| (s % p as u64) as u32).collect()
    }

    /// The `(tgt·|G|) × (src·|G|)` matrix over `F_p`.
    pub fn full_matrix(&self, group: &FiniteGroup, p: u32) -> FpMatrix {
        let n = group.order();
        let mut m = FpMatrix::zeros(p, self.tgt_rank * n, self.src_rank * n);
        for k in 0..self.src_rank {
            let img = &self.images[k];
            for x in 0..n {
                for l in 0..self.tgt_rank {
                    for y in 0..n {
                        let a = img[l * n + y];
                        if a != 0 {
                            m.set(l * n + group.mul(x, y), k * n + x, a);
                        }
                    }
                }
            }
        }
        m
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FreeMap, group: &FiniteGroup, p: u32) -> FreeMap {
        assert_eq!(other.tgt_rank, self.src_rank);
        let images = other
            .images
            .iter()
            .map(|v| self.apply(group, p, v))
            .collect();
        FreeMap {
            src_rank: other.src_rank,
            tgt_rank: self.tgt_rank,
            images,
        }
    }
}

/// A free resolution `… → P_1 → P_0 → M → 0`.
#[derive(Debug)]
pub struct FreeResolution {
    group: Arc<FiniteGroup>,
    p: u32,
    target: GModule,
    ranks: Vec<usize>,
    /// Images in `M` of the generators of `P_0`.
    augmentation: Vec<Vec<u32>>,
    /// `boundaries[i]` is `d_{i+1}: P_{i+1} → P_i`.
    boundaries: Vec<FreeMap>,
    minimal: bool,
    solvers: Vec<OnceLock<Arc<Solver>>>,
}

impl Clone for FreeResolution {
    fn clone(&self) -> Self {
        FreeResolution::from_parts(
            &self.group,
            self.target.clone(),
            self.augmentation.clone(),
            self.boundaries.clone(),
            self.minimal,
        )
    }
}

/// How generators are chosen at each stage.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorRule {
    /// Lift a basis of `K / I·K` (`p`-groups only).
    Minimal,
    /// Keep a canonical basis vector iff it is not in the submodule
    /// generated by the vectors already kept.
    Greedy,
    /// Greedy, plus one redundant generator at stage 0.
    GreedyPadded,
}

pub fn free_resolution(m: &GModule, length: usize, minimal: bool) -> Result<FreeResolution> {
    let rule = if minimal {
        GeneratorRule::Minimal
    } else {
        GeneratorRule::Greedy
    };
    free_resolution_with(m, length, rule)
}

/// Minimal for `p`-groups, greedy otherwise.
pub fn default_resolution(m: &GModule, length: usize) -> FreeResolution {
    let minimal = m.group().is_p_group(m.p());
    free_resolution(m, length, minimal).expect("rule matches the group")
}

pub fn free_resolution_with(
    m: &GModule,
    length: usize,
    rule: GeneratorRule,
) -> Result<FreeResolution> {
    let group = m.group();
    let p = m.p();
    if rule == GeneratorRule::Minimal && !group.is_p_group(p) {
        return Err(Error::MinimalityUnavailable {
            order: group.order(),
            p,
        });
    }
    let n = group.order();

    // stage 0: generators of M itself
    let mut augmentation = Vec::new();
    match rule {
        GeneratorRule::Minimal => {
            let mut span = EchelonBuilder::new(p, m.dim());
            for v in augmentation_submodule(m).basis_vectors() {
                span.insert(&v);
            }
            for j in 0..m.dim() {
                if span.dim() == m.dim() {
                    break;
                }
                let e = unit(m.dim(), j);
                if span.insert(&e) {
                    augmentation.push(e);
                }
            }
        }
        GeneratorRule::Greedy | GeneratorRule::GreedyPadded => {
            let mut span = EchelonBuilder::new(p, m.dim());
            for j in 0..m.dim() {
                if span.dim() == m.dim() {
                    break;
                }
                let e = unit(m.dim(), j);
                if !span.contains(&e) {
                    for g in 0..n {
                        span.insert(&m.act(g, &e));
                    }
                    augmentation.push(e);
                }
            }
            if rule == GeneratorRule::GreedyPadded {
                if let Some(first) = augmentation.first().cloned() {
                    augmentation.push(first);
                }
            }
        }
    }

    let mut ranks = vec![augmentation.len()];
    let mut boundaries: Vec<FreeMap> = Vec::new();
    let mut current = augmentation_matrix(m, &augmentation);
    for _ in 1..=length {
        let prev_rank = *ranks.last().expect("nonempty");
        let kernel = current.kernel_basis();
        let gens = select_generators(group, p, prev_rank, &kernel, rule == GeneratorRule::Minimal);
        let map = FreeMap {
            src_rank: gens.len(),
            tgt_rank: prev_rank,
            images: gens,
        };
        current = map.full_matrix(group, p);
        ranks.push(map.src_rank);
        boundaries.push(map);
    }
    let _ = n;
    Ok(FreeResolution::from_parts(
        group,
        m.clone(),
        augmentation,
        boundaries,
        rule == GeneratorRule::Minimal,
    ))
}

fn unit(dim: usize, j: usize) -> Vec<u32> {
    let mut e = vec![0; dim];
    e[j] = 1;
    e
}

fn augmentation_matrix(m: &GModule, gens: &[Vec<u32>]) -> FpMatrix {
    let n = m.group().order();
    let mut out = FpMatrix::zeros(m.p(), m.dim(), gens.len() * n);
    for (k, v) in gens.iter().enumerate() {
        for x in 0..n {
            let img = m.act(x, v);
            for (i, &c) in img.iter().enumerate() {
                if c != 0 {
                    out.set(i, k * n + x, c);
                }
            }
        }
    }
    out
}

/// Module generators for a `G`-stable subspace of a free module.
fn select_generators(
    group: &FiniteGroup,
    p: u32,
    rank: usize,
    kernel: &FpSubspace,
    minimal: bool,
) -> Vec<Vec<u32>> {
    let n = group.order();
    let ambient = rank * n;
    let basis = kernel.basis_vectors();
    let mut span = EchelonBuilder::new(p, ambient);
    let mut kept = Vec::new();
    if minimal {
        // seed with I·K
        for v in &basis {
            for &s in group.generators() {
                let sv = translate(group, s, v, rank);
                let diff: Vec<u32> = sv.iter().zip(v).map(|(&a, &b)| (a + p - b) % p).collect();
                span.insert(&diff);
            }
        }
        for v in basis {
            if span.dim() == kernel.dim() {
                break;
            }
            if span.insert(&v) {
                kept.push(v);
            }
        }
    } else {
        for v in basis {
            if span.dim() == kernel.dim() {
                break;
            }
            if !span.contains(&v) {
                for g in 0..n {
                    span.insert(&translate(group, g, &v, rank));
                }
                kept.push(v);
            }
        }
    }
    kept
}

impl FreeResolution {
    pub(crate) fn from_parts(
        group: &Arc<FiniteGroup>,
        target: GModule,
        augmentation: Vec<Vec<u32>>,
        boundaries: Vec<FreeMap>,
        minimal: bool,
    ) -> Self {
        let mut ranks = vec![augmentation.len()];
        ranks.extend(boundaries.iter().map(|b| b.src_rank));
        let solvers = (0..=boundaries.len()).map(|_| OnceLock::new()).collect();
        FreeResolution {
            group: Arc::clone(group),
            p: target.p(),
            target,
            ranks,
            augmentation,
            boundaries,
            minimal,
            solvers,
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }
    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn target(&self) -> &GModule {
        &self.target
    }
    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }
    pub fn rank(&self, i: usize) -> usize {
        self.ranks[i]
    }
    pub fn is_minimal(&self) -> bool {
        self.minimal
    }
    /// Highest degree `L` with `P_L` computed.
    pub fn length(&self) -> usize {
        self.boundaries.len()
    }
    pub fn augmentation(&self) -> &[Vec<u32>] {
        &self.augmentation
    }

    /// `d_i: P_i → P_{i-1}` for `i ≥ 1`.
    pub fn boundary(&self, i: usize) -> &FreeMap {
        &self.boundaries[i - 1]
    }

    pub fn boundaries(&self) -> &[FreeMap] {
        &self.boundaries
    }

    /// Full matrix of `ε` (`i = 0`) or of `d_i`.
    pub fn full_matrix(&self, i: usize) -> FpMatrix {
        if i == 0 {
            augmentation_matrix(&self.target, &self.augmentation)
        } else {
            self.boundary(i).full_matrix(&self.group, self.p)
        }
    }

    /// Cached solver for `ε` (`i = 0`) or `d_i`.
    pub fn solver(&self, i: usize) -> Arc<Solver> {
        Arc::clone(self.solvers[i].get_or_init(|| Arc::new(Solver::new(&self.full_matrix(i)))))
    }

    /// `ε(v)` for `v ∈ P_0`.
    pub fn augment(&self, v: &[u32]) -> Vec<u32> {
        let n = self.group.order();
        let p = self.p as u64;
        let mut acc = vec![0u64; self.target.dim()];
        for (k, m) in self.augmentation.iter().enumerate() {
            for x in 0..n {
                let c = v[k * n + x] as u64;
                if c == 0 {
                    continue;
                }
                for (a, b) in acc.iter_mut().zip(self.target.act(x, m)) {
                    *a += c * b as u64;
                }
            }
        }
        acc.into_iter().map(|s| (s % p) as u32).collect()
    }

    /// Checks `im d_{i+1} = ker d_i` (and surjectivity of `ε`) through the
    /// computed length, plus `d_i ∘ d_{i+1} = 0`.
    pub fn verify_exactness(&self) -> bool {
        let eps = self.full_matrix(0);
        if eps.rank() != self.target.dim() {
            return false;
        }
        let mut prev = eps;
        for i in 1..=self.length() {
            let d = self.full_matrix(i);
            if !prev.mul(&d).is_zero() {
                return false;
            }
            let ker = prev.kernel_basis();
            if d.rank() != ker.dim() {
                return false;
            }
            prev = d;
        }
        true
    }

    /// Each boundary lands in `I·P_{i-1}`: equivalently, every boundary
    /// image has vanishing augmentation on each free summand.
    pub fn verify_minimality(&self) -> bool {
        let n = self.group.order();
        let p = self.p as u64;
        self.group.is_p_group(self.p)
            && self.boundaries.iter().all(|b| {
                b.images.iter().all(|img| {
                    (0..b.tgt_rank).all(|l| {
                        img[l * n..(l + 1) * n]
                            .iter()
                            .map(|&c| c as u64)
                            .sum::<u64>()
                            % p
                            == 0
                    })
                })
            })
    }

    /// The same resolution viewed over a subgroup `H`: `P_i|_H` is free
    /// over `H` with generators `t_j·e_k` for right coset representatives
    /// `t_j` of `H\G`.
    pub fn restrict(&self, h: &Subgroup) -> (FreeResolution, CosetChart) {
        let chart = CosetChart::new(&self.group, h);
        let hg = h.as_group();
        let m = chart.cosets();
        let target = crate::gmodules::restrict_along(&self.target, &hg, h.members());
        let augmentation = (0..self.rank(0))
            .flat_map(|k| {
                let base = &self.augmentation[k];
                chart
                    .reps
                    .iter()
                    .map(move |&t| self.target.act(t, base))
                    .collect::<Vec<_>>()
            })
            .collect();
        let boundaries = self
            .boundaries
            .iter()
            .map(|b| {
                let mut images = Vec::with_capacity(b.src_rank * m);
                for k in 0..b.src_rank {
                    for &t in &chart.reps {
                        let moved = translate(&self.group, t, &b.images[k], b.tgt_rank);
                        images.push(chart.to_sub(&moved, b.tgt_rank));
                    }
                }
                FreeMap {
                    src_rank: b.src_rank * m,
                    tgt_rank: b.tgt_rank * m,
                    images,
                }
            })
            .collect();
        (
            FreeResolution::from_parts(&hg, target, augmentation, boundaries, false),
            chart,
        )
    }
}

/// Bookkeeping between a free `G`-module and the same module viewed as a
/// free `H`-module.
///
/// Generator `(k, j)` of the restriction (coordinate `(k·m + j)·|H| + h`)
/// is `t_j·e_k`, and `G`-coordinate `k·|G| + g` corresponds to
/// `g = h·t_j`.
#[derive(Clone, Debug)]
pub struct CosetChart {
    pub sub: Subgroup,
    /// Right coset representatives `t_j` of `H\G`.
    pub reps: Vec<usize>,
    /// For each `g`: `(j, local index of h)` with `g = h·t_j`.
    pub split: Vec<(usize, usize)>,
    order: usize,
}

impl CosetChart {
    pub fn new(g: &Arc<FiniteGroup>, h: &Subgroup) -> Self {
        let reps = right_coset_representatives(g, h);
        let mut split = vec![(usize::MAX, usize::MAX); g.order()];
        for (j, &t) in reps.iter().enumerate() {
            for (li, &x) in h.members().iter().enumerate() {
                split[g.mul(x, t)] = (j, li);
            }
        }
        CosetChart {
            sub: h.clone(),
            reps,
            split,
            order: g.order(),
        }
    }

    pub fn cosets(&self) -> usize {
        self.reps.len()
    }

    /// Re-express a vector of `F_p[G]^rank` in the `H`-basis.
    pub fn to_sub(&self, v: &[u32], rank: usize) -> Vec<u32> {
        let (n, m, hn) = (self.order, self.reps.len(), self.sub.order());
        let mut out = vec![0u32; v.len()];
        for k in 0..rank {
            for g in 0..n {
                let c = v[k * n + g];
                if c != 0 {
                    let (j, h) = self.split[g];
                    out[(k * m + j) * hn + h] = c;
                }
            }
        }
        out
    }

    /// Inverse of [`CosetChart::to_sub`].
    pub fn from_sub(&self, v: &[u32], rank: usize) -> Vec<u32> {
        let (n, m, hn) = (self.order, self.reps.len(), self.sub.order());
        let mut out = vec![0u32; v.len()];
        for k in 0..rank {
            for g in 0..n {
                let (j, h) = self.split[g];
                out[k * n + g] = v[(k * m + j) * hn + h];
            }
        }
        out
    }
}

/// Chain map `φ: S → T` over the identity of the common target module,
/// built degree by degree with the canonical solver of `T`'s boundaries.
/// `S` must be free (it is) and `T` exact through `degree`.
pub fn lift_chain_map(
    source: &FreeResolution,
    target: &FreeResolution,
    degree: usize,
) -> Result<Vec<FreeMap>> {
    let group = source.group();
    let p = source.p();
    let n = group.order();
    if target.length() < degree || source.length() < degree {
        return Err(Error::LengthTooSmall(degree));
    }
    let mut maps: Vec<FreeMap> = Vec::with_capacity(degree + 1);
    let s0 = target.solver(0);
    let mut images = Vec::new();
    for k in 0..source.rank(0) {
        let rhs = &source.augmentation()[k];
        images.push(s0.solve(rhs).ok_or(Error::LiftFailure(0))?);
    }
    maps.push(FreeMap {
        src_rank: source.rank(0),
        tgt_rank: target.rank(0),
        images,
    });
    for i in 1..=degree {
        let solver = target.solver(i);
        let prev = &maps[i - 1];
        let mut images = Vec::with_capacity(source.rank(i));
        for k in 0..source.rank(i) {
            let rhs = prev.apply(group, p, &source.boundary(i).images[k]);
            images.push(solver.solve(&rhs).ok_or(Error::LiftFailure(i))?);
        }
        maps.push(FreeMap {
            src_rank: source.rank(i),
            tgt_rank: target.rank(i),
            images,
        });
    }
    let _ = n;
    Ok(maps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmodules::{regular_module, trivial_module};
    use crate::groups::{generate_group, Permutation};

    fn cyclic(n: usize) -> Arc<FiniteGroup> {
        let g = Permutation::new((0..n).map(|i| (i + 1) % n).collect()).unwrap();
        Arc::new(generate_group(n, &[g], "Z").unwrap())
    }

    #[test]
    fn regular_module_is_its_own_resolution() {
        let g = cyclic(4);
        let r = free_resolution(&regular_module(&g, 2), 4, true).unwrap();
        assert_eq!(r.ranks(), &[1, 0, 0, 0, 0]);
        assert!(r.verify_exactness());
    }

    #[test]
    fn z2_trivial_periodic() {
        let g = cyclic(2);
        let r = free_resolution(&trivial_module(&g, 2, 1), 6, true).unwrap();
        assert_eq!(r.ranks(), &[1; 7]);
        assert!(r.verify_exactness());
        assert!(r.verify_minimality());
        // every boundary is multiplication by g - 1 = 1 + g over F_2
        for i in 1..=6 {
            assert_eq!(r.boundary(i).images[0], vec![1, 1]);
        }
    }

    #[test]
    fn minimal_needs_p_group() {
        let g = cyclic(6);
        assert_eq!(
            free_resolution(&trivial_module(&g, 2, 1), 2, true).unwrap_err(),
            Error::MinimalityUnavailable { order: 6, p: 2 }
        );
    }

    #[test]
    fn restriction_is_exact_resolution() {
        let g = cyclic(4);
        let r = free_resolution(&trivial_module(&g, 2, 1), 4, true).unwrap();
        let h = crate::groups::subgroup_closure(&g, &[2]);
        let (rh, chart) = r.restrict(&h);
        assert_eq!(rh.ranks(), &[2, 2, 2, 2, 2]);
        assert!(rh.verify_exactness());
        let v: Vec<u32> = (0..8).map(|i| (i % 2) as u32).collect();
        assert_eq!(chart.from_sub(&chart.to_sub(&v, 2), 2), v);
    }

    #[test]
    fn chain_map_between_resolutions() {
        let g = cyclic(4);
        let t = trivial_module(&g, 2, 1);
        let a = free_resolution(&t, 4, true).unwrap();
        let b = free_resolution_with(&t, 4, GeneratorRule::GreedyPadded).unwrap();
        let phi = lift_chain_map(&a, &b, 4).unwrap();
        for i in 1..=4 {
            let lhs = b.boundary(i).compose(&phi[i], &g, 2);
            let rhs = phi[i - 1].compose(a.boundary(i), &g, 2);
            assert_eq!(lhs, rhs);
        }
    }
}
