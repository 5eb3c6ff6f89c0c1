//! Finite-dimensional `F_p[G]`-modules.
//!
//! A module stores one action matrix per group element, indexed like the
//! group's element list. Vectors are columns: `g·v = action(g) * v`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fplinalg::{FpMatrix, FpSubspace};
use crate::groups::{coset_representatives, FiniteGroup, Subgroup};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GModule {
    group: Arc<FiniteGroup>,
    p: u32,
    dim: usize,
    action: Vec<FpMatrix>,
}

impl GModule {
    /// Builds a module from full action tables without checking them.
    pub fn from_action_table(
        group: &Arc<FiniteGroup>,
        p: u32,
        dim: usize,
        action: Vec<FpMatrix>,
    ) -> Self {
        assert_eq!(action.len(), group.order());
        GModule {
            group: Arc::clone(group),
            p,
            dim,
            action,
        }
    }

    /// Builds a module from one matrix per group generator: the table is
    /// completed by word evaluation and then checked exhaustively.
    pub fn from_generator_matrices(
        group: &Arc<FiniteGroup>,
        p: u32,
        dim: usize,
        mats: &[FpMatrix],
    ) -> Result<Self> {
        let gens = group.generators();
        if mats.len() != gens.len() {
            return Err(Error::NotARepresentation(format!(
                "{} matrices given for {} generators",
                mats.len(),
                gens.len()
            )));
        }
        if mats
            .iter()
            .any(|m| m.rows() != dim || m.cols() != dim || m.p() != p)
        {
            return Err(Error::NotARepresentation(format!(
                "matrices must be {dim}x{dim} over F_{p}"
            )));
        }
        let n = group.order();
        let mut action: Vec<Option<FpMatrix>> = vec![None; n];
        action[0] = Some(FpMatrix::identity(p, dim));
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (&s, m) in gens.iter().zip(mats) {
                let y = group.mul(x, s);
                if action[y].is_none() {
                    action[y] = Some(action[x].as_ref().expect("visited").mul(m));
                    queue.push_back(y);
                }
            }
        }
        let action: Vec<FpMatrix> = action
            .into_iter()
            .map(|a| a.expect("generators generate"))
            .collect();
        let module = GModule {
            group: Arc::clone(group),
            p,
            dim,
            action,
        };
        if !module.verify_representation() {
            return Err(Error::NotARepresentation(
                "action(g)·action(h) != action(gh) for some pair".to_string(),
            ));
        }
        Ok(module)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }
    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn action(&self, g: usize) -> &FpMatrix {
        &self.action[g]
    }
    pub fn actions(&self) -> &[FpMatrix] {
        &self.action
    }

    pub fn act(&self, g: usize, v: &[u32]) -> Vec<u32> {
        self.action[g].mul_vec(v)
    }

    /// Identity at the identity element and `ρ(g)ρ(h) = ρ(gh)` for all pairs.
    pub fn verify_representation(&self) -> bool {
        let n = self.group.order();
        self.action[0].is_identity()
            && (0..n).all(|g| {
                (0..n).all(|h| {
                    self.action[g].mul(&self.action[h]) == self.action[self.group.mul(g, h)]
                })
            })
    }

    pub fn is_trivial_action(&self) -> bool {
        self.action.iter().all(|m| m.is_identity())
    }

    fn same_context(&self, other: &GModule) -> bool {
        self.p == other.p && (Arc::ptr_eq(&self.group, &other.group) || *self.group == *other.group)
    }

    /// Per-element `(ρ_M(g), ρ_N(g))` equivariance check for a matrix `N x M`.
    pub fn is_equivariant(&self, target: &GModule, matrix: &FpMatrix) -> bool {
        self.group
            .generators()
            .iter()
            .all(|&g| matrix.mul(&self.action[g]) == target.action[g].mul(matrix))
    }
}

/// An equivariant linear map between two modules.
#[derive(Clone, Debug)]
pub struct ModuleHom {
    pub source: GModule,
    pub target: GModule,
    pub matrix: FpMatrix,
}

impl ModuleHom {
    pub fn new(source: &GModule, target: &GModule, matrix: FpMatrix) -> Result<Self> {
        if !source.same_context(target) {
            return Err(Error::GroupMismatch);
        }
        if matrix.rows() != target.dim || matrix.cols() != source.dim {
            return Err(Error::DimensionMismatch("hom matrix shape".into()));
        }
        if !source.is_equivariant(target, &matrix) {
            return Err(Error::NotARepresentation(
                "matrix is not equivariant".into(),
            ));
        }
        Ok(ModuleHom {
            source: source.clone(),
            target: target.clone(),
            matrix,
        })
    }
}

pub fn trivial_module(g: &Arc<FiniteGroup>, p: u32, dim: usize) -> GModule {
    let id = FpMatrix::identity(p, dim);
    GModule {
        group: Arc::clone(g),
        p,
        dim,
        action: vec![id; g.order()],
    }
}

/// `F_p[G]` with basis the group elements; `g` sends `e_x` to `e_{gx}`.
pub fn regular_module(g: &Arc<FiniteGroup>, p: u32) -> GModule {
    let n = g.order();
    let action = (0..n)
        .map(|a| {
            let mut m = FpMatrix::zeros(p, n, n);
            for x in 0..n {
                m.set(g.mul(a, x), x, 1);
            }
            m
        })
        .collect();
    GModule {
        group: Arc::clone(g),
        p,
        dim: n,
        action,
    }
}

/// `F_p[G/H]` with basis the left cosets in `coset_representatives` order.
pub fn permutation_module(g: &Arc<FiniteGroup>, h: &Subgroup, p: u32) -> GModule {
    let reps = coset_representatives(g, h);
    let coset_of = coset_lookup(g, h, &reps);
    let k = reps.len();
    let action = (0..g.order())
        .map(|a| {
            let mut m = FpMatrix::zeros(p, k, k);
            for (j, &r) in reps.iter().enumerate() {
                m.set(coset_of[g.mul(a, r)], j, 1);
            }
            m
        })
        .collect();
    GModule {
        group: Arc::clone(g),
        p,
        dim: k,
        action,
    }
}

/// For every element, the index of its left coset among `reps`.
fn coset_lookup(g: &Arc<FiniteGroup>, h: &Subgroup, reps: &[usize]) -> Vec<usize> {
    let mut coset_of = vec![usize::MAX; g.order()];
    for (j, &r) in reps.iter().enumerate() {
        for &m in h.members() {
            coset_of[g.mul(r, m)] = j;
        }
    }
    coset_of
}

/// `M|_H` as a module over `H.as_group()`.
pub fn restrict_module(m: &GModule, h: &Subgroup) -> GModule {
    restrict_along(m, &h.as_group(), h.members())
}

/// Restriction along an embedding: element `k` of `sub` is element
/// `embedding[k]` of `m.group()`.
pub fn restrict_along(m: &GModule, sub: &Arc<FiniteGroup>, embedding: &[usize]) -> GModule {
    let action = embedding.iter().map(|&e| m.action[e].clone()).collect();
    GModule {
        group: Arc::clone(sub),
        p: m.p,
        dim: m.dim,
        action,
    }
}

/// Induction from `H` to its parent group. `m` must live over a group
/// with the same element list as `h.as_group()`.
pub fn induce_module(m: &GModule, h: &Subgroup) -> GModule {
    let g = h.parent();
    let p = m.p;
    let reps = coset_representatives(g, h);
    let coset_of = coset_lookup(g, h, &reps);
    let (k, d) = (reps.len(), m.dim);
    let action = (0..g.order())
        .map(|a| {
            let mut out = FpMatrix::zeros(p, k * d, k * d);
            for (j, &r) in reps.iter().enumerate() {
                let ar = g.mul(a, r);
                let jj = coset_of[ar];
                // a·r = reps[jj]·x with x in H
                let x = g.mul(g.inv(reps[jj]), ar);
                let local = h.local_index(x).expect("coset decomposition");
                let blk = &m.action[local];
                for u in 0..d {
                    for v in 0..d {
                        out.set(jj * d + u, j * d + v, blk.get(u, v));
                    }
                }
            }
            out
        })
        .collect();
    GModule {
        group: Arc::clone(g),
        p,
        dim: k * d,
        action,
    }
}

/// `Hom(M, F_p)` with `g` acting by the transpose of `ρ(g^{-1})`.
pub fn dual_module(m: &GModule) -> GModule {
    let g = &m.group;
    let action = (0..g.order())
        .map(|a| m.action[g.inv(a)].transpose())
        .collect();
    GModule {
        group: Arc::clone(g),
        p: m.p,
        dim: m.dim,
        action,
    }
}

/// Diagonal action on `M ⊗ N` (Kronecker product of the actions).
pub fn tensor_module(m: &GModule, n: &GModule) -> Result<GModule> {
    if !m.same_context(n) {
        return Err(Error::GroupMismatch);
    }
    let action = m
        .action
        .iter()
        .zip(&n.action)
        .map(|(a, b)| a.kron(b))
        .collect();
    Ok(GModule {
        group: Arc::clone(&m.group),
        p: m.p,
        dim: m.dim * n.dim,
        action,
    })
}

pub fn direct_sum(m: &GModule, n: &GModule) -> Result<GModule> {
    if !m.same_context(n) {
        return Err(Error::GroupMismatch);
    }
    let d = m.dim + n.dim;
    let action = m
        .action
        .iter()
        .zip(&n.action)
        .map(|(a, b)| {
            let mut out = FpMatrix::zeros(m.p, d, d);
            for i in 0..m.dim {
                for j in 0..m.dim {
                    out.set(i, j, a.get(i, j));
                }
            }
            for i in 0..n.dim {
                for j in 0..n.dim {
                    out.set(m.dim + i, m.dim + j, b.get(i, j));
                }
            }
            out
        })
        .collect();
    Ok(GModule {
        group: Arc::clone(&m.group),
        p: m.p,
        dim: d,
        action,
    })
}

/// The fixed space `M^G = H^0(G, M)`.
pub fn invariants(m: &GModule) -> FpSubspace {
    let gens = m.group.generators();
    if gens.is_empty() || m.dim == 0 {
        return FpSubspace::full(m.p, m.dim);
    }
    let id = FpMatrix::identity(m.p, m.dim);
    let blocks: Vec<FpMatrix> = gens.iter().map(|&g| m.action[g].sub(&id)).collect();
    let refs: Vec<&FpMatrix> = blocks.iter().collect();
    FpMatrix::vstack(m.p, m.dim, &refs).kernel_basis()
}

/// `I·M` for the augmentation ideal `I`, as a subspace of `M`.
pub fn augmentation_submodule(m: &GModule) -> FpSubspace {
    let id = FpMatrix::identity(m.p, m.dim);
    let mut cols = Vec::new();
    for &g in m.group.generators() {
        let d = m.action[g].sub(&id);
        for j in 0..m.dim {
            cols.push(d.col(j));
        }
    }
    FpSubspace::from_vectors(m.p, m.dim, &cols)
}

/// `dim M/IM = dim H_0(G, M)`.
pub fn coinvariants(m: &GModule) -> usize {
    m.dim - augmentation_submodule(m).dim()
}

/// The submodule spanned by a `G`-stable subspace, in its canonical basis.
pub fn submodule(m: &GModule, sub: &FpSubspace) -> Result<GModule> {
    let basis = sub.basis_vectors();
    let k = basis.len();
    let mut action = Vec::with_capacity(m.group.order());
    for g in 0..m.group.order() {
        let mut mat = FpMatrix::zeros(m.p, k, k);
        for (j, b) in basis.iter().enumerate() {
            let img = m.act(g, b);
            let coords = sub
                .coordinates(&img)
                .ok_or_else(|| Error::NotARepresentation("subspace is not G-stable".into()))?;
            for (i, c) in coords.into_iter().enumerate() {
                mat.set(i, j, c);
            }
        }
        action.push(mat);
    }
    Ok(GModule {
        group: Arc::clone(&m.group),
        p: m.p,
        dim: k,
        action,
    })
}

/// Basis of `Hom_G(M, N)` as `dim N × dim M` matrices.
pub fn hom_space(m: &GModule, n: &GModule) -> Result<Vec<FpMatrix>> {
    if !m.same_context(n) {
        return Err(Error::GroupMismatch);
    }
    let (dm, dn) = (m.dim, n.dim);
    let p = m.p;
    // unknown X (dn × dm) flattened row-major; equations X ρ_M(g) - ρ_N(g) X = 0
    let gens = m.group.generators();
    let mut sys = FpMatrix::zeros(p, gens.len() * dn * dm, dn * dm);
    for (gi, &g) in gens.iter().enumerate() {
        let (a, b) = (&m.action[g], &n.action[g]);
        for i in 0..dn {
            for j in 0..dm {
                let row = gi * dn * dm + i * dm + j;
                // (X a)[i][j] = Σ_k X[i][k] a[k][j]
                for k in 0..dm {
                    sys.add_at(row, i * dm + k, a.get(k, j));
                }
                // (b X)[i][j] = Σ_k b[i][k] X[k][j]
                for k in 0..dn {
                    sys.add_at(row, k * dm + j, (p - b.get(i, k)) % p);
                }
            }
        }
    }
    let ker = sys.kernel_basis();
    Ok(ker
        .basis_vectors()
        .into_iter()
        .map(|v| FpMatrix::from_data(p, dn, dm, v))
        .collect())
}

/// Searches `Hom_G(M, N)` for an invertible element. Exhaustive when the
/// hom space has at most 4096 elements, otherwise tries basis elements and
/// pairwise sums.
pub fn find_module_isomorphism(m: &GModule, n: &GModule) -> Result<Option<FpMatrix>> {
    if m.dim != n.dim {
        return Ok(None);
    }
    let basis = hom_space(m, n)?;
    let p = m.p;
    let k = basis.len();
    let total = (p as u64).checked_pow(k as u32).unwrap_or(u64::MAX);
    let invertible = |x: &FpMatrix| x.rank() == m.dim;
    if total <= 4096 {
        for code in 1..total {
            let mut c = code;
            let mut acc = FpMatrix::zeros(p, n.dim, m.dim);
            for b in &basis {
                let coef = (c % p as u64) as u32;
                c /= p as u64;
                if coef != 0 {
                    acc = acc.add(&b.scale(coef));
                }
            }
            if invertible(&acc) {
                return Ok(Some(acc));
            }
        }
        return Ok(None);
    }
    for i in 0..k {
        if invertible(&basis[i]) {
            return Ok(Some(basis[i].clone()));
        }
        for j in 0..i {
            let s = basis[i].add(&basis[j]);
            if invertible(&s) {
                return Ok(Some(s));
            }
        }
    }
    Ok(None)
}
