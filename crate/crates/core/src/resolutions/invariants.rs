use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gmodules::{restrict_module, trivial_module, GModule};
use crate::groups::{
    elementary_abelian_subgroups, is_elementary_abelian, maximal_subgroups, p_rank, sylow,
    FiniteGroup,
};

use super::ext::{cohomology_dims, ext_dims_with};
use super::free::free_resolution;
use super::series::{growth_rate, DimSeries};

/// Degree through which `Ext(M, k)` must vanish.
pub const PROJECTIVE_PROBE: usize = 2;
/// Default number of resolution stages used for growth rates.
pub const GROWTH_PROBE: usize = 12;

/// Over a `p`-group: `Ext^1(M, k) = Ext^2(M, k) = 0`. Otherwise the
/// Sylow restriction is tested.
pub fn is_projective(m: &GModule) -> bool {
    if m.dim() == 0 {
        return true;
    }
    let g = m.group();
    let p = m.p();
    if !g.is_p_group(p) {
        return is_projective(&restrict_module(m, &sylow(g, p)));
    }
    let res = free_resolution(m, PROJECTIVE_PROBE + 1, true).expect("p-group");
    let k = trivial_module(g, p, 1);
    let dims = ext_dims_with(&res, &k, PROJECTIVE_PROBE)
        .expect("same group")
        .dims;
    dims[1..].iter().all(|&d| d == 0)
}

/// Projectivity on every elementary abelian `p`-subgroup.
pub fn chouinard_projective(m: &GModule) -> bool {
    elementary_abelian_subgroups(m.group(), m.p())
        .iter()
        .all(|e| is_projective(&restrict_module(m, e)))
}

/// Projectivity on every maximal subgroup of a `p`-group that is not
/// elementary abelian.
pub fn maximal_subgroup_projectivity(m: &GModule) -> Result<bool> {
    let g = m.group();
    let p = m.p();
    if !g.is_p_group(p) {
        return Err(Error::BadParameters(format!(
            "{} is not a {p}-group",
            g.name()
        )));
    }
    if is_elementary_abelian(g, p) {
        return Err(Error::ElementaryAbelianInput);
    }
    Ok(maximal_subgroups(g, p)
        .iter()
        .all(|k| is_projective(&restrict_module(m, k))))
}

/// Growth rate of the minimal resolution of `M` (of its Sylow restriction
/// when the group is not a `p`-group), probing `probe_deg` stages.
pub fn complexity(m: &GModule, probe_deg: usize) -> Result<usize> {
    if m.dim() == 0 {
        return Ok(0);
    }
    let g = m.group();
    let p = m.p();
    if !g.is_p_group(p) {
        return complexity(&restrict_module(m, &sylow(g, p)), probe_deg);
    }
    let res = free_resolution(m, probe_deg, true)?;
    growth_rate(&DimSeries::new(res.ranks().to_vec(), p, "ranks"))
}

/// `max_E cx(M|_E)` over the elementary abelian `p`-subgroups.
pub fn complexity_over_elementary(m: &GModule, probe_deg: usize) -> Result<usize> {
    let mut best = 0;
    for e in elementary_abelian_subgroups(m.group(), m.p()) {
        best = best.max(complexity(&restrict_module(m, &e), probe_deg)?);
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KrullEstimate {
    pub pole_order: usize,
    pub p_rank: usize,
}

impl KrullEstimate {
    /// Quillen: the Krull dimension of `H^*(G, F_p)` is the `p`-rank.
    pub fn quillen_consistent(&self) -> bool {
        self.pole_order == self.p_rank
    }
}

/// Pole order at `t = 1` of the Poincaré series, read as the growth rate of
/// the dimension series.
pub fn krull_dimension_estimate(
    g: &Arc<FiniteGroup>,
    p: u32,
    max_deg: usize,
) -> Result<KrullEstimate> {
    let dims = cohomology_dims(g, p, max_deg);
    Ok(KrullEstimate {
        pole_order: growth_rate(&dims)?,
        p_rank: p_rank(g, p),
    })
}
