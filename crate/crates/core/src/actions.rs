//! Group-theoretic conditions for free actions on spheres, and the rank
//! invariants reported next to them.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{center, p_rank, prime_divisors, subgroup_closure, FiniteGroup};
use crate::resolutions::{cohomology_dims, krull_dimension_estimate};

pub fn p2_condition(g: &Arc<FiniteGroup>, p: u32) -> bool {
    p_rank(g, p) <= 1
}

fn involutions(g: &FiniteGroup) -> Vec<usize> {
    (1..g.order())
        .filter(|&x| g.element_order(x) == 2)
        .collect()
}

/// Every involution is central.
pub fn twop_condition(g: &Arc<FiniteGroup>) -> bool {
    let z = center(g);
    involutions(g).iter().all(|&t| z.contains(t))
}

/// Subgroups generated by two elements whose orders divide `n`, keeping
/// those of order exactly `n`. Every group of order `pq` is 2-generated.
fn two_generated_of_order(g: &Arc<FiniteGroup>, n: usize) -> Vec<Vec<usize>> {
    let cands: Vec<usize> = (0..g.order())
        .filter(|&x| n % g.element_order(x) == 0)
        .collect();
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (i, &a) in cands.iter().enumerate() {
        for &b in &cands[i..] {
            let h = subgroup_closure(g, &[a, b]);
            if h.order() == n && !out.iter().any(|m| m.as_slice() == h.members()) {
                out.push(h.members().to_vec());
            }
        }
    }
    out
}

fn all_cyclic(g: &Arc<FiniteGroup>, subgroups: &[Vec<usize>]) -> bool {
    subgroups
        .iter()
        .all(|m| m.iter().any(|&x| g.element_order(x) == m.len()))
}

/// Every subgroup of order `2p` is cyclic.
pub fn twop_cyclic_at(g: &Arc<FiniteGroup>, p: u32) -> bool {
    let n = 2 * p as usize;
    if g.order() % n != 0 {
        return true;
    }
    all_cyclic(g, &two_generated_of_order(g, n))
}

/// Every subgroup of order `2p` is cyclic, for every prime `p`.
pub fn twop_cyclic_form(g: &Arc<FiniteGroup>) -> bool {
    prime_divisors(g.order())
        .into_iter()
        .all(|p| twop_cyclic_at(g, p))
}

pub fn swan_condition(g: &Arc<FiniteGroup>) -> bool {
    prime_divisors(g.order())
        .into_iter()
        .all(|p| p2_condition(g, p))
}

/// Brute force: every abelian subgroup generated by two commuting elements
/// is cyclic (a non-cyclic abelian group contains a non-cyclic 2-generated
/// one).
pub fn abelian_subgroups_cyclic(g: &Arc<FiniteGroup>) -> bool {
    for a in 0..g.order() {
        for b in a + 1..g.order() {
            if g.mul(a, b) == g.mul(b, a) {
                let h = subgroup_closure(g, &[a, b]);
                if !h.members().iter().any(|&x| g.element_order(x) == h.order()) {
                    return false;
                }
            }
        }
    }
    true
}

pub fn mtw_condition(g: &Arc<FiniteGroup>) -> bool {
    swan_condition(g) && twop_condition(g)
}

/// Every subgroup of order `pq` (`p`, `q` primes, possibly equal) is cyclic.
pub fn wolf_pq_condition(g: &Arc<FiniteGroup>) -> bool {
    let primes = prime_divisors(g.order());
    for (i, &p) in primes.iter().enumerate() {
        for &q in &primes[i..] {
            let n = (p * q) as usize;
            if g.order() % n == 0 && !all_cyclic(g, &two_generated_of_order(g, n)) {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Periodicity {
    /// `r_p(G) ≤ 1`.
    pub condition: bool,
    /// Least `d` with `dims[i] = dims[i + d]` for `1 ≤ i ≤ max_deg − d`.
    pub observed_period: Option<usize>,
    /// The period is read off dimensions only, not from a periodicity class.
    pub dimension_level_only: bool,
}

pub fn periodicity_report(g: &Arc<FiniteGroup>, p: u32, max_deg: usize) -> Result<Periodicity> {
    if g.order() % p as usize != 0 {
        return Err(Error::BadParameters(format!(
            "{p} does not divide |{}|",
            g.name()
        )));
    }
    let condition = p2_condition(g, p);
    let observed_period = if condition {
        let dims = cohomology_dims(g, p, max_deg).dims;
        (1..=max_deg.max(1))
            .find(|&d| (1..=max_deg.saturating_sub(d)).all(|i| dims[i] == dims[i + d]))
    } else {
        None
    };
    Ok(Periodicity {
        condition,
        observed_period,
        dimension_level_only: true,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeReport {
    pub p: u32,
    pub p2_ok: bool,
    /// Subgroups of order `2p` are cyclic.
    pub twop_ok: bool,
    pub p_rank: usize,
    /// `r_p(Z(G))`.
    pub duflot_z: usize,
    pub krull_pole_order: usize,
    pub periodicity: Periodicity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub group: String,
    pub order: usize,
    pub primes: Vec<PrimeReport>,
    pub twop_milnor_ok: bool,
    pub twop_cyclic_ok: bool,
    pub twop_forms_agree: bool,
    pub swan_ok: bool,
    pub mtw_ok: bool,
    pub wolf_pq_ok: bool,
    pub wolf_scope: String,
    pub periodic_ok: bool,
    pub r_of_g: usize,
}

impl ConditionReport {
    pub fn krull_consistent(&self) -> bool {
        self.primes.iter().all(|r| r.krull_pole_order == r.p_rank)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    pub const CSV_HEADER: &'static str =
        "group,order,swan_ok,mtw_ok,twop_milnor_ok,twop_cyclic_ok,twop_forms_agree,wolf_pq_ok,periodic_ok,r_of_g,primes";

    /// One row; the `primes` column lists `p:p2_ok:twop_ok:p_rank:duflot_z:pole_order:period`
    /// separated by `;`.
    pub fn to_csv_row(&self) -> String {
        let primes: Vec<String> = self
            .primes
            .iter()
            .map(|r| {
                let period = r
                    .periodicity
                    .observed_period
                    .map_or("-".to_string(), |d| d.to_string());
                format!(
                    "{}:{}:{}:{}:{}:{}:{}",
                    r.p, r.p2_ok, r.twop_ok, r.p_rank, r.duflot_z, r.krull_pole_order, period
                )
            })
            .collect();
        let mut out = String::new();
        let _ = write!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.group,
            self.order,
            self.swan_ok,
            self.mtw_ok,
            self.twop_milnor_ok,
            self.twop_cyclic_ok,
            self.twop_forms_agree,
            self.wolf_pq_ok,
            self.periodic_ok,
            self.r_of_g,
            primes.join(";")
        );
        out
    }
}

/// All conditions, plus the Krull and Duflot numbers for every prime
/// dividing `|G|`. `max_deg` must be at least 5.
pub fn full_report(g: &Arc<FiniteGroup>, max_deg: usize) -> Result<ConditionReport> {
    let z = center(g).as_group();
    let mut primes = Vec::new();
    for p in prime_divisors(g.order()) {
        let krull = krull_dimension_estimate(g, p, max_deg)?;
        primes.push(PrimeReport {
            p,
            p2_ok: p2_condition(g, p),
            twop_ok: twop_cyclic_at(g, p),
            p_rank: krull.p_rank,
            duflot_z: p_rank(&z, p),
            krull_pole_order: krull.pole_order,
            periodicity: periodicity_report(g, p, max_deg)?,
        });
    }
    let swan_ok = primes.iter().all(|r| r.p2_ok);
    let twop_milnor_ok = twop_condition(g);
    let twop_cyclic_ok = primes.iter().all(|r| r.twop_ok);
    Ok(ConditionReport {
        group: g.name().to_string(),
        order: g.order(),
        r_of_g: primes.iter().map(|r| r.p_rank).max().unwrap_or(0),
        primes,
        twop_milnor_ok,
        twop_cyclic_ok,
        twop_forms_agree: twop_milnor_ok == twop_cyclic_ok,
        swan_ok,
        mtw_ok: swan_ok && twop_milnor_ok,
        wolf_pq_ok: wolf_pq_condition(g),
        wolf_scope: "pq-clause only".to_string(),
        periodic_ok: swan_ok,
    })
}
