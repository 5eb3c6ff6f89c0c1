use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fplinalg::FpMatrix;
use crate::gmodules::{dual_module, trivial_module, GModule};
use crate::groups::FiniteGroup;

use super::free::{default_resolution, free_resolution, translate, FreeResolution};
use super::series::DimSeries;

/// A cochain complex of finite-dimensional `F_p`-spaces. `differentials[i]`
/// maps degree `i` to degree `i + 1`; a missing trailing differential is
/// zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainComplex {
    pub p: u32,
    pub spaces: Vec<usize>,
    pub differentials: Vec<FpMatrix>,
}

impl CochainComplex {
    pub fn new(p: u32, spaces: Vec<usize>, differentials: Vec<FpMatrix>) -> Result<Self> {
        if differentials.len() >= spaces.len().max(1) {
            return Err(Error::DimensionMismatch("too many differentials".into()));
        }
        for (i, d) in differentials.iter().enumerate() {
            if d.cols() != spaces[i] || d.rows() != spaces[i + 1] {
                return Err(Error::DimensionMismatch(format!(
                    "differential {i} is {}x{}",
                    d.rows(),
                    d.cols()
                )));
            }
        }
        Ok(CochainComplex {
            p,
            spaces,
            differentials,
        })
    }

    fn differential_rank(&self, i: usize) -> usize {
        self.differentials.get(i).map_or(0, |d| d.rank())
    }

    /// `dim H^i` for every degree of the complex.
    pub fn cohomology_dims(&self) -> Vec<usize> {
        let ranks: Vec<usize> = (0..self.spaces.len())
            .map(|i| self.differential_rank(i))
            .collect();
        (0..self.spaces.len())
            .map(|i| {
                let incoming = if i == 0 { 0 } else { ranks[i - 1] };
                self.spaces[i] - ranks[i] - incoming
            })
            .collect()
    }

    pub fn is_complex(&self) -> bool {
        self.differentials
            .windows(2)
            .all(|w| w[1].mul(&w[0]).is_zero())
    }
}

/// `Hom_G(P_*, N)` through degree `max_deg`. A cochain in degree `i` is the
/// list of values `f(e_k) ∈ N`, so `C^i = N^{r_i}`.
pub fn hom_complex(res: &FreeResolution, n: &GModule, max_deg: usize) -> Result<CochainComplex> {
    check_pair(res.target(), n)?;
    if res.length() < max_deg + 1 {
        return Err(Error::LengthTooSmall(max_deg + 1));
    }
    let d = n.dim();
    let p = n.p();
    let spaces: Vec<usize> = (0..=max_deg + 1).map(|i| res.rank(i) * d).collect();
    let differentials = (0..=max_deg).map(|i| coboundary(res, n, i)).collect();
    CochainComplex::new(p, spaces, differentials)
}

/// `δ^i: C^i → C^{i+1}`, `(δf)(e_k) = f(d e_k)`.
pub fn coboundary(res: &FreeResolution, n: &GModule, i: usize) -> FpMatrix {
    let group = res.group();
    let order = group.order();
    let d = n.dim();
    let p = n.p();
    let map = res.boundary(i + 1);
    let mut out = FpMatrix::zeros(p, map.src_rank * d, map.tgt_rank * d);
    for (k, img) in map.images.iter().enumerate() {
        for l in 0..map.tgt_rank {
            let block = group_sum(n, &img[l * order..(l + 1) * order]);
            for a in 0..d {
                for b in 0..d {
                    let v = block.get(a, b);
                    if v != 0 {
                        out.set(k * d + a, l * d + b, v);
                    }
                }
            }
        }
    }
    out
}

/// `Σ_x c_x ρ(x)`.
pub(crate) fn group_sum(n: &GModule, coeffs: &[u32]) -> FpMatrix {
    let d = n.dim();
    let p = n.p() as u64;
    let mut acc = vec![0u64; d * d];
    for (x, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        for (a, &b) in acc.iter_mut().zip(n.action(x).data()) {
            *a += c as u64 * b as u64;
        }
    }
    FpMatrix::from_data(
        n.p(),
        d,
        d,
        acc.into_iter().map(|s| (s % p) as u32).collect(),
    )
}

/// Value of the cochain `f ∈ N^r` on a chain `v ∈ F_p[G]^r`.
pub fn evaluate_cochain(group: &FiniteGroup, n: &GModule, f: &[u32], v: &[u32]) -> Vec<u32> {
    let order = group.order();
    let d = n.dim();
    let p = n.p() as u64;
    let rank = if order == 0 { 0 } else { v.len() / order };
    let mut acc = vec![0u64; d];
    for l in 0..rank {
        let fl = &f[l * d..(l + 1) * d];
        if fl.iter().all(|&c| c == 0) {
            continue;
        }
        for x in 0..order {
            let c = v[l * order + x] as u64;
            if c == 0 {
                continue;
            }
            for (a, b) in acc.iter_mut().zip(n.act(x, fl)) {
                *a += c * b as u64;
            }
        }
    }
    acc.into_iter().map(|s| (s % p) as u32).collect()
}

fn check_pair(m: &GModule, n: &GModule) -> Result<()> {
    if m.p() != n.p() || !same_group(m.group(), n.group()) {
        return Err(Error::GroupMismatch);
    }
    Ok(())
}

pub(crate) fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub fn ext_dims(m: &GModule, n: &GModule, max_deg: usize) -> Result<DimSeries> {
    check_pair(m, n)?;
    let res = default_resolution(m, max_deg + 1);
    ext_dims_with(&res, n, max_deg)
}

/// Ext dimensions read off a given resolution of the first argument.
pub fn ext_dims_with(res: &FreeResolution, n: &GModule, max_deg: usize) -> Result<DimSeries> {
    let complex = hom_complex(res, n, max_deg)?;
    let mut dims = complex.cohomology_dims();
    dims.truncate(max_deg + 1);
    Ok(DimSeries::new(
        dims,
        n.p(),
        &format!("Ext({}, -)", res.group().name()),
    ))
}

pub fn cohomology_dims(g: &Arc<FiniteGroup>, p: u32, max_deg: usize) -> DimSeries {
    let k = trivial_module(g, p, 1);
    let mut s = ext_dims(&k, &k, max_deg).expect("same group and prime");
    s.label = format!("H*({}, F_{})", g.name(), p);
    s
}

/// `Ω^i(M)`: the kernel at stage `i` of the default resolution, in the
/// canonical kernel basis.
pub fn syzygy(m: &GModule, i: usize) -> Result<GModule> {
    if i == 0 {
        return Ok(m.clone());
    }
    let res = default_resolution(m, i - 1);
    let group = res.group();
    let rank = res.rank(i - 1);
    let kernel = res.full_matrix(i - 1).kernel_basis();
    let basis = kernel.basis_vectors();
    let pivots = kernel.pivots();
    let k = basis.len();
    let action = (0..group.order())
        .map(|g| {
            let cols: Vec<Vec<u32>> = basis
                .iter()
                .map(|b| {
                    let moved = translate(group, g, b, rank);
                    pivots.iter().map(|&c| moved[c]).collect()
                })
                .collect();
            FpMatrix::from_col_vecs(m.p(), k, &cols)
        })
        .collect();
    Ok(GModule::from_action_table(group, m.p(), k, action))
}

/// `r_i = dim H^i(P, M*)` for the minimal resolution of `M`.
pub fn minimal_rank_identity_check(m: &GModule, max_deg: usize) -> Result<bool> {
    let res = free_resolution(m, max_deg, true)?;
    let k = trivial_module(m.group(), m.p(), 1);
    let rhs = ext_dims(&k, &dual_module(m), max_deg)?;
    Ok(res.ranks()[..=max_deg] == rhs.dims[..])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmodules::regular_module;
    use crate::groups::{generate_group, Permutation};

    fn cyclic(n: usize) -> Arc<FiniteGroup> {
        let g = Permutation::new((0..n).map(|i| (i + 1) % n).collect()).unwrap();
        Arc::new(generate_group(n, &[g], "Z").unwrap())
    }

    fn klein() -> Arc<FiniteGroup> {
        let a = Permutation::new(vec![1, 0, 3, 2]).unwrap();
        let b = Permutation::new(vec![2, 3, 0, 1]).unwrap();
        Arc::new(generate_group(4, &[a, b], "V4").unwrap())
    }

    #[test]
    fn maschke() {
        assert_eq!(cohomology_dims(&cyclic(3), 2, 4).dims, vec![1, 0, 0, 0, 0]);
    }

    #[test]
    fn klein_four_kunneth() {
        assert_eq!(cohomology_dims(&klein(), 2, 4).dims, vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn cyclic_odd_prime() {
        assert_eq!(cohomology_dims(&cyclic(3), 3, 6).dims, vec![1; 7]);
        assert_eq!(cohomology_dims(&cyclic(6), 3, 6).dims, vec![1; 7]);
    }

    #[test]
    fn syzygies() {
        let g = cyclic(2);
        let t = trivial_module(&g, 2, 1);
        let o = syzygy(&t, 1).unwrap();
        assert_eq!(o.dim(), 1);
        assert!(o.is_trivial_action());
        assert_eq!(syzygy(&regular_module(&g, 2), 1).unwrap().dim(), 0);
        assert_eq!(syzygy(&t, 0).unwrap(), t);
    }

    #[test]
    fn rank_identity() {
        let g = cyclic(4);
        assert!(minimal_rank_identity_check(&trivial_module(&g, 2, 1), 5).unwrap());
        assert!(minimal_rank_identity_check(&regular_module(&g, 2), 5).unwrap());
    }

    #[test]
    fn mismatched_groups() {
        let a = trivial_module(&cyclic(2), 2, 1);
        let b = trivial_module(&cyclic(3), 2, 1);
        assert_eq!(ext_dims(&a, &b, 2).unwrap_err(), Error::GroupMismatch);
    }
}
