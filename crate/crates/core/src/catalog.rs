//! Built-in groups and the Poincaré series expected for them.
//!
//! Expected answers are stored as rational functions `r(t)/∏(1 − t^d)`
//! read off ring presentations, never as lists of dimensions.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groups::{generate_group, generate_group_with_cap, FiniteGroup, Permutation};
use crate::resolutions::{expand_rational, DimSeries};

fn bad(msg: impl Into<String>) -> Error {
    Error::BadParameters(msg.into())
}

fn perm(images: Vec<usize>) -> Permutation {
    Permutation::new(images).expect("constructed as a bijection")
}

pub fn make_cyclic(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(bad("cyclic group of order 0"));
    }
    let gens = if n == 1 {
        vec![]
    } else {
        vec![perm((0..n).map(|i| (i + 1) % n).collect())]
    };
    generate_group(n, &gens, &format!("Z{n}"))
}

/// `(Z/p)^k` as a direct product of `k` cyclic groups on disjoint points.
pub fn make_elementary_abelian(p: u32, k: usize) -> Result<FiniteGroup> {
    if !crate::fplinalg::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let c = make_cyclic(p as usize)?;
    let mut g = make_cyclic(1)?;
    for _ in 0..k {
        g = make_direct_product(&g, &c)?;
    }
    let name = if p == 2 && k == 2 {
        "V4".to_string()
    } else {
        format!("E{}", (p as usize).pow(k as u32))
    };
    Ok(g.with_name(&name))
}

/// Dihedral group of order `2n` acting on the vertices of an `n`-gon.
pub fn make_dihedral(order: usize) -> Result<FiniteGroup> {
    if order < 6 || order % 2 != 0 {
        return Err(bad(format!("dihedral order {order}")));
    }
    let n = order / 2;
    let r = perm((0..n).map(|i| (i + 1) % n).collect());
    let s = perm((0..n).map(|i| (n - i) % n).collect());
    generate_group(n, &[r, s], &format!("D{order}"))
}

/// Generalized quaternion group of order `2^a ≥ 8`, in its regular
/// representation on the words `x^i y^j` (`x^{2m} = 1`, `y^2 = x^m`,
/// `y x y^{-1} = x^{-1}`).
pub fn make_quaternion(order: usize) -> Result<FiniteGroup> {
    if order < 8 || !order.is_power_of_two() {
        return Err(bad(format!("quaternion order {order}")));
    }
    let two_m = order / 2;
    let m = two_m / 2;
    let idx = |i: usize, j: usize| i % two_m + two_m * j;
    let mul = |a: usize, b: usize| {
        let (i, j) = (a % two_m, a / two_m);
        let (k, l) = (b % two_m, b / two_m);
        let k = if j == 1 { (two_m - k) % two_m } else { k };
        let extra = if j == 1 && l == 1 { m } else { 0 };
        idx(i + k + extra, (j + l) % 2)
    };
    let left = |g: usize| perm((0..order).map(|x| mul(g, x)).collect());
    generate_group(
        order,
        &[left(idx(1, 0)), left(idx(0, 1))],
        &format!("Q{order}"),
    )
}

pub fn make_symmetric(n: usize) -> Result<FiniteGroup> {
    if !(2..=6).contains(&n) {
        return Err(bad(format!("symmetric degree {n}")));
    }
    let cycle = perm((0..n).map(|i| (i + 1) % n).collect());
    let swap = Permutation::from_cycles(n, &[&[0, 1]])?;
    generate_group(n, &[cycle, swap], &format!("S{n}"))
}

pub fn make_alternating(n: usize) -> Result<FiniteGroup> {
    let gens = match n {
        4 => vec![
            Permutation::from_cycles(4, &[&[0, 1, 2]])?,
            Permutation::from_cycles(4, &[&[0, 1], &[2, 3]])?,
        ],
        5 => vec![
            Permutation::from_cycles(5, &[&[0, 1, 2]])?,
            Permutation::from_cycles(5, &[&[0, 1, 2, 3, 4]])?,
        ],
        6 => vec![
            Permutation::from_cycles(6, &[&[0, 1, 2]])?,
            Permutation::from_cycles(6, &[&[1, 2, 3, 4, 5]])?,
        ],
        _ => return Err(bad(format!("alternating degree {n}"))),
    };
    generate_group_with_cap(n, &gens, &format!("A{n}"), 400)
}

/// `L_3(2) = GL_3(F_2)` acting on the seven points of the Fano plane.
pub fn make_l32() -> Result<FiniteGroup> {
    let a = Permutation::from_cycles(7, &[&[0, 1, 2, 3, 4, 5, 6]])?;
    let b = Permutation::from_cycles(7, &[&[2, 4], &[5, 6]])?;
    generate_group(7, &[a, b], "L3(2)")
}

/// Direct product acting on the disjoint union of the two point sets.
pub fn make_direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<FiniteGroup> {
    let (da, db) = (a.degree(), b.degree());
    let mut gens = Vec::new();
    for &g in a.generators() {
        let mut im: Vec<usize> = a.element(g).images().to_vec();
        im.extend(da..da + db);
        gens.push(perm(im));
    }
    for &g in b.generators() {
        let mut im: Vec<usize> = (0..da).collect();
        im.extend(b.element(g).images().iter().map(|&x| x + da));
        gens.push(perm(im));
    }
    let name = match (a.order(), b.order()) {
        (1, _) => b.name().to_string(),
        (_, 1) => a.name().to_string(),
        _ => format!("{}x{}", a.name(), b.name()),
    };
    generate_group(da + db, &gens, &name)
}

/// `N ⋊ K` in its regular representation on pairs `(n, k)`, with
/// `(n, k)(n', k') = (n·φ_k(n'), kk')`. `action[s]` is the permutation of
/// `N`'s element indices by which the `s`-th generator of `K` acts.
pub fn make_semidirect(
    normal: &FiniteGroup,
    actor: &FiniteGroup,
    action: &[Vec<usize>],
) -> Result<FiniteGroup> {
    let (nn, nk) = (normal.order(), actor.order());
    if action.len() != actor.generators().len() {
        return Err(Error::NotAnAutomorphism(format!(
            "{} maps for {} generators",
            action.len(),
            actor.generators().len()
        )));
    }
    for (s, a) in action.iter().enumerate() {
        let mut seen = vec![false; nn];
        if a.len() != nn
            || a.iter()
                .any(|&x| x >= nn || std::mem::replace(&mut seen[x], true))
        {
            return Err(Error::NotAnAutomorphism(format!(
                "map {s} is not a bijection"
            )));
        }
        for x in 0..nn {
            for y in 0..nn {
                if a[normal.mul(x, y)] != normal.mul(a[x], a[y]) {
                    return Err(Error::NotAnAutomorphism(format!(
                        "map {s} is not a homomorphism"
                    )));
                }
            }
        }
    }
    // extend to all of K, checking that the assignment is a homomorphism
    let mut phi: Vec<Option<Vec<usize>>> = vec![None; nk];
    phi[0] = Some((0..nn).collect());
    let mut queue = VecDeque::from([0usize]);
    while let Some(k) = queue.pop_front() {
        let pk = phi[k].clone().expect("visited");
        for (s, &gs) in actor.generators().iter().enumerate() {
            let next = actor.mul(k, gs);
            let composed: Vec<usize> = action[s].iter().map(|&x| pk[x]).collect();
            match &phi[next] {
                Some(existing) if *existing != composed => {
                    return Err(Error::NotAnAutomorphism(
                        "assignment does not respect the relations of K".into(),
                    ))
                }
                Some(_) => {}
                None => {
                    phi[next] = Some(composed);
                    queue.push_back(next);
                }
            }
        }
    }
    let phi: Vec<Vec<usize>> = phi
        .into_iter()
        .map(|x| x.expect("K is generated"))
        .collect();
    let pair_mul = |(n1, k1): (usize, usize), (n2, k2): (usize, usize)| {
        (normal.mul(n1, phi[k1][n2]), actor.mul(k1, k2))
    };
    let left = |g: (usize, usize)| {
        perm(
            (0..nn * nk)
                .map(|x| {
                    let (n, k) = pair_mul(g, (x / nk, x % nk));
                    n * nk + k
                })
                .collect(),
        )
    };
    let mut gens: Vec<Permutation> = normal.generators().iter().map(|&g| left((g, 0))).collect();
    gens.extend(actor.generators().iter().map(|&g| left((0, g))));
    generate_group(
        nn * nk,
        &gens,
        &format!("{}:{}", normal.name(), actor.name()),
    )
}

/// An expected Poincaré series with its provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpectedRecord {
    pub p: u32,
    pub numerator: Vec<i64>,
    pub denominator: Vec<usize>,
    pub max_verified_degree: usize,
    pub source: &'static str,
}

impl ExpectedRecord {
    pub fn expand(&self, max_deg: usize) -> Vec<i64> {
        expand_rational(&self.numerator, &self.denominator, max_deg)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Construction {
    Cyclic(usize),
    Elementary(u32, usize),
    Dihedral(usize),
    Quaternion(usize),
    Alternating(usize),
    Symmetric(usize),
    L32,
    /// `Z/3 ⋊ Q_16`, the quaternion generator `y` inverting `Z/3`.
    Z3Q16,
}

impl Construction {
    fn describe(&self) -> String {
        match self {
            Construction::Cyclic(n) => format!("cyclic {n}"),
            Construction::Elementary(p, k) => format!("elementary {p} {k}"),
            Construction::Dihedral(n) => format!("dihedral {n}"),
            Construction::Quaternion(n) => format!("quaternion {n}"),
            Construction::Alternating(n) => format!("alternating {n}"),
            Construction::Symmetric(n) => format!("symmetric {n}"),
            Construction::L32 => "fano".into(),
            Construction::Z3Q16 => "semidirect Z3 Q16".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub construction: Construction,
    pub expected: Vec<ExpectedRecord>,
    /// Excluded from default runs.
    pub stretch: bool,
}

impl CatalogEntry {
    pub fn build(&self) -> Result<Arc<FiniteGroup>> {
        let g = match &self.construction {
            Construction::Cyclic(n) => make_cyclic(*n)?,
            Construction::Elementary(p, k) => make_elementary_abelian(*p, *k)?,
            Construction::Dihedral(n) => make_dihedral(*n)?,
            Construction::Quaternion(n) => make_quaternion(*n)?,
            Construction::Alternating(n) => make_alternating(*n)?,
            Construction::Symmetric(n) => make_symmetric(*n)?,
            Construction::L32 => make_l32()?,
            Construction::Z3Q16 => {
                let z3 = make_cyclic(3)?;
                let q16 = make_quaternion(16)?;
                let inv: Vec<usize> = (0..3).map(|x| z3.inv(x)).collect();
                let ident: Vec<usize> = (0..3).collect();
                make_semidirect(&z3, &q16, &[ident, inv])?
            }
        };
        Ok(Arc::new(g.with_name(self.name)))
    }

    pub fn record(&self, p: u32) -> Option<&ExpectedRecord> {
        self.expected.iter().find(|r| r.p == p)
    }
}

fn rec(
    p: u32,
    numerator: &[i64],
    denominator: &[usize],
    max_verified_degree: usize,
    source: &'static str,
) -> ExpectedRecord {
    ExpectedRecord {
        p,
        numerator: numerator.to_vec(),
        denominator: denominator.to_vec(),
        max_verified_degree,
        source,
    }
}

/// `Λ(x_1) ⊗ F_p[y_2]`, the cohomology of a cyclic `p`-group.
fn cyclic_rec(p: u32, source: &'static str) -> ExpectedRecord {
    rec(p, &[1, 1], &[2], 10, source)
}

pub fn catalog() -> Vec<CatalogEntry> {
    use Construction::*;
    let e = |name, construction, expected, stretch| CatalogEntry {
        name,
        construction,
        expected,
        stretch,
    };
    vec![
        e(
            "Z2",
            Cyclic(2),
            vec![rec(2, &[1], &[1], 10, "presentation: F2[x1]")],
            false,
        ),
        e(
            "Z3",
            Cyclic(3),
            vec![cyclic_rec(3, "presentation: L(x1) F3[y2]")],
            false,
        ),
        e(
            "Z4",
            Cyclic(4),
            vec![cyclic_rec(2, "cyclic: L(x1) F2[y2]")],
            false,
        ),
        e(
            "Z5",
            Cyclic(5),
            vec![cyclic_rec(5, "presentation: L(x1) F5[y2]")],
            false,
        ),
        e(
            "Z6",
            Cyclic(6),
            vec![
                cyclic_rec(2, "cyclic: Sylow Z2"),
                cyclic_rec(3, "cyclic: Sylow Z3"),
            ],
            false,
        ),
        e(
            "Z12",
            Cyclic(12),
            vec![
                cyclic_rec(2, "cyclic: Sylow Z4"),
                cyclic_rec(3, "cyclic: Sylow Z3"),
            ],
            false,
        ),
        e(
            "V4",
            Elementary(2, 2),
            vec![rec(2, &[1], &[1, 1], 8, "presentation: Kunneth F2[x1,x2]")],
            false,
        ),
        e(
            "E8",
            Elementary(2, 3),
            vec![rec(
                2,
                &[1],
                &[1, 1, 1],
                8,
                "presentation: Kunneth F2[x1,x2,x3]",
            )],
            false,
        ),
        e(
            "D6",
            Dihedral(6),
            vec![
                rec(
                    2,
                    &[1],
                    &[1],
                    8,
                    "derived: abelian Sylow Z2, self-normalizing",
                ),
                rec(3, &[1, 0, 0, 1], &[4], 8, "derived: (L(x1) F3[y2])^Z2"),
            ],
            false,
        ),
        e(
            "D8",
            Dihedral(8),
            vec![rec(
                2,
                &[1, 0, -1],
                &[1, 1, 2],
                8,
                "presentation: F2[x1,e1,y2]/(x1 e1)",
            )],
            false,
        ),
        e(
            "Q8",
            Quaternion(8),
            vec![rec(
                2,
                &[1, 2, 2, 1],
                &[4],
                8,
                "presentation: free F2[u4]-module",
            )],
            false,
        ),
        e(
            "Q16",
            Quaternion(16),
            vec![rec(
                2,
                &[1, 2, 2, 1],
                &[4],
                8,
                "derived: free F2[u4]-module",
            )],
            false,
        ),
        e(
            "A4",
            Alternating(4),
            vec![
                rec(
                    2,
                    &[1, 0, 0, 0, 0, 0, -1],
                    &[2, 3, 3],
                    7,
                    "presentation: F2[u2,v3,w3]/(u2^3+v3^2+w3^2+v3 w3)",
                ),
                rec(
                    3,
                    &[1, 1],
                    &[2],
                    7,
                    "derived: abelian Sylow Z3, self-normalizing",
                ),
            ],
            false,
        ),
        e(
            "S4",
            Symmetric(4),
            vec![
                rec(
                    2,
                    &[1, 0, 0, 0, -1],
                    &[1, 2, 3],
                    6,
                    "presentation: F2[x1,y2,c3]/(x1 c3)",
                ),
                rec(3, &[1, 0, 0, 1], &[4], 6, "derived: Sylow normalizer S3"),
            ],
            false,
        ),
        e("Z3:Q16", Z3Q16, vec![], false),
        e(
            "L3(2)",
            L32,
            vec![rec(
                2,
                &[1, 0, 0, 0, 0, 0, -1],
                &[2, 3, 3],
                6,
                "presentation: F2[u2,v3,w3]/(v3 w3)",
            )],
            true,
        ),
        e(
            "A6",
            Alternating(6),
            vec![rec(
                2,
                &[1, 0, 0, 0, 0, 0, -1],
                &[2, 3, 3],
                6,
                "presentation: F2[s2,s3,c3]/(c3 s3)",
            )],
            true,
        ),
    ]
}

pub fn lookup(name: &str) -> Result<CatalogEntry> {
    catalog()
        .into_iter()
        .find(|e| e.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::UnknownGroup(name.to_string()))
}

pub fn expected_dims(entry: &CatalogEntry, p: u32, max_deg: usize) -> Result<DimSeries> {
    let r = entry.record(p).ok_or_else(|| Error::NoExpectedData {
        name: entry.name.to_string(),
        p,
    })?;
    let dims = r
        .expand(max_deg)
        .into_iter()
        .map(|c| c.max(0) as usize)
        .collect();
    Ok(DimSeries::new(dims, p, &format!("expected {}", entry.name)))
}

/// Text form of the whole catalog, one block per entry.
pub fn manifest() -> String {
    let mut out = String::new();
    for e in catalog() {
        let _ = writeln!(out, "entry {}", e.name);
        let _ = writeln!(out, "construct {}", e.construction.describe());
        if e.stretch {
            let _ = writeln!(out, "stretch");
        }
        for r in &e.expected {
            let num: Vec<String> = r.numerator.iter().map(|c| c.to_string()).collect();
            let den: Vec<String> = r.denominator.iter().map(|c| c.to_string()).collect();
            let _ = writeln!(
                out,
                "expect p={} num=[{}] den=[{}] through={} source=\"{}\"",
                r.p,
                num.join(","),
                den.join(","),
                r.max_verified_degree,
                r.source
            );
        }
        out.push('\n');
    }
    out
}

/// Catalog groups up to `max_order`, with all their subgroups and pairwise
/// direct products, one representative per distinct element set.
pub fn closure_up_to(max_order: usize) -> Result<Vec<Arc<FiniteGroup>>> {
    let mut base = Vec::new();
    for e in catalog().iter().filter(|e| !e.stretch) {
        let g = e.build()?;
        if g.order() <= max_order {
            base.push(g);
        }
    }
    let mut out: Vec<Arc<FiniteGroup>> = Vec::new();
    let mut seen: HashMap<(String, usize), ()> = HashMap::new();
    let mut push = |g: Arc<FiniteGroup>, out: &mut Vec<Arc<FiniteGroup>>| {
        let key = (format!("{:?}", g.elements()), g.degree());
        if seen.insert(key, ()).is_none() {
            out.push(g);
        }
    };
    for g in &base {
        for h in crate::groups::all_subgroups(g) {
            push(h.as_group(), &mut out);
        }
    }
    for a in &base {
        for b in &base {
            if a.order() * b.order() <= max_order && a.order() > 1 && b.order() > 1 {
                push(Arc::new(make_direct_product(a, b)?), &mut out);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{p_rank, subgroup_closure};

    #[test]
    fn orders() {
        for (e, n) in catalog()
            .iter()
            .zip([2, 3, 4, 5, 6, 12, 4, 8, 6, 8, 8, 16, 12, 24, 48, 168, 360])
        {
            assert_eq!(e.build().unwrap().order(), n, "{}", e.name);
        }
    }

    #[test]
    fn quaternion_census() {
        let q = Arc::new(make_quaternion(8).unwrap());
        let invol = (1..8).filter(|&x| q.element_order(x) == 2).count();
        assert_eq!(invol, 1);
        assert_eq!(p_rank(&q, 2), 1);
        let q16 = make_quaternion(16).unwrap();
        assert_eq!((1..16).filter(|&x| q16.element_order(x) == 2).count(), 1);
    }

    #[test]
    fn a4_as_semidirect() {
        let v = make_elementary_abelian(2, 2).unwrap();
        let z3 = make_cyclic(3).unwrap();
        // permute the three involutions of V cyclically
        let invol: Vec<usize> = (1..4).collect();
        let mut a = vec![0; 4];
        for (i, &x) in invol.iter().enumerate() {
            a[x] = invol[(i + 1) % 3];
        }
        let g = Arc::new(make_semidirect(&v, &z3, &[a]).unwrap());
        assert_eq!(g.order(), 12);
        let has_order_six = crate::groups::all_subgroups(&g)
            .iter()
            .any(|h| h.order() == 6);
        assert!(!has_order_six);
        let bad = vec![0, 2, 1, 3];
        let err = make_semidirect(&v, &z3, &[bad]).unwrap_err();
        assert!(matches!(err, Error::NotAnAutomorphism(_)));
        let _ = subgroup_closure(&g, &[0]);
    }

    #[test]
    fn expected_series() {
        let d8 = lookup("D8").unwrap();
        assert_eq!(expected_dims(&d8, 2, 4).unwrap().dims, vec![1, 2, 3, 4, 5]);
        let q8 = lookup("q8").unwrap();
        assert_eq!(
            expected_dims(&q8, 2, 7).unwrap().dims,
            vec![1, 2, 2, 1, 1, 2, 2, 1]
        );
        assert_eq!(expected_dims(&q8, 2, 0).unwrap().dims, vec![1]);
        assert!(matches!(
            expected_dims(&q8, 3, 2),
            Err(Error::NoExpectedData { .. })
        ));
        let a4 = lookup("A4").unwrap();
        assert_eq!(
            expected_dims(&a4, 2, 7).unwrap().dims,
            vec![1, 0, 1, 2, 1, 2, 3, 2]
        );
        let s4 = lookup("S4").unwrap();
        assert_eq!(
            expected_dims(&s4, 2, 6).unwrap().dims,
            vec![1, 1, 2, 3, 3, 4, 5]
        );
        for e in catalog() {
            for r in &e.expected {
                assert!(r.expand(12).iter().all(|&c| c >= 0), "{}", e.name);
            }
        }
    }
}
