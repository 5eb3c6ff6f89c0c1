//! Acceptance run: one PASS/FAIL line per criterion. Exits non-zero if a
//! criterion fails that is not listed in `KNOWN_DIVERGENT`.

mod common;

use std::sync::Arc;
use std::time::Instant;

use common::{base_modules, group, presentation, random_module};
use modcoh::actions::{full_report, swan_condition, twop_condition, twop_cyclic_form};
use modcoh::catalog::{
    catalog, closure_up_to, make_cyclic, make_elementary_abelian, make_symmetric,
};
use modcoh::cohmaps::{abelian_sylow_check, CohEngine};
use modcoh::fplinalg::FpMatrix;
use modcoh::gmodules::{permutation_module, regular_module, trivial_module};
use modcoh::groups::{
    center, maximal_subgroups, p_rank, prime_divisors, sylow, FiniteGroup, Permutation, Subgroup,
};
use modcoh::products::{find_sphere_splice, sphere_cohomology_check, splice_complex, CohRing};
use modcoh::resolutions::{
    chouinard_projective, cohomology_dims, complexity, default_resolution, ext_dims_with,
    free_resolution_with, growth_rate, is_projective, krull_dimension_estimate,
    maximal_subgroup_projectivity, minimal_rank_identity_check, poincare_fit, GeneratorRule,
    GROWTH_PROBE,
};
use modcoh::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria whose failure is analysed and recorded rather than fixed.
const KNOWN_DIVERGENT: &[usize] = &[14];

/// Degree bounds and corpus sizes.
const RANK1_DEG: usize = 10;
const CORPUS_SIZE: usize = 50;
const CORPUS_SEED: u64 = 0x5eed_0010;
const CORPUS_MAX_DIM: usize = 48;
const PROPERTY_SEED: u64 = 0x5eed_0015;
const PROPERTY_CASES: usize = 24;
const CLOSURE_ORDER: usize = 100;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn all_ones(g: &Arc<FiniteGroup>, p: u32, n: usize) -> bool {
    cohomology_dims(g, p, n).dims.iter().all(|&d| d == 1)
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn c1() -> Outcome {
    let mut ok = true;
    for (n, p) in [(2, 2), (3, 3), (5, 5)] {
        ok &= all_ones(&Arc::new(make_cyclic(n).unwrap()), p, RANK1_DEG);
    }
    outcome(ok, "Z2, Z3, Z5 all ones through degree 10")
}

fn c2() -> Outcome {
    let mut ok = true;
    for n in [2, 3] {
        let g = Arc::new(make_elementary_abelian(2, n).unwrap());
        let dims = cohomology_dims(&g, 2, 8).dims;
        ok &= dims
            .iter()
            .enumerate()
            .all(|(i, &d)| d == binomial(n + i - 1, i));
    }
    outcome(ok, "(Z/2)^2, (Z/2)^3 binomial through degree 8")
}

fn c3() -> Outcome {
    let dims = cohomology_dims(&group("D8"), 2, 8).dims;
    outcome(dims == (1..=9).collect::<Vec<_>>(), format!("D8 {dims:?}"))
}

fn c4() -> Outcome {
    let s = cohomology_dims(&group("Q8"), 2, 12);
    let fit = poincare_fit(&s, &[4]).unwrap();
    let ok = s.dims[..9] == [1, 2, 2, 1, 1, 2, 2, 1, 1]
        && fit.as_ref().map(|f| f.numerator.clone()) == Some(vec![1, 2, 2, 1]);
    outcome(
        ok,
        format!(
            "Q8 {:?}, numerator {:?}",
            &s.dims[..9],
            fit.map(|f| f.numerator)
        ),
    )
}

fn c5() -> Outcome {
    let g = group("A4");
    let d2 = cohomology_dims(&g, 2, 7).dims;
    let ok3 = all_ones(&g, 3, 7);
    let sylow_ok = abelian_sylow_check(&g, 3, 7).unwrap();
    let ok = d2 == [1, 0, 1, 2, 1, 2, 3, 2] && ok3 && sylow_ok;
    outcome(
        ok,
        format!("A4 p=2 {d2:?}, p=3 all ones {ok3}, abelian Sylow {sylow_ok}"),
    )
}

fn c6() -> Outcome {
    let g = Arc::new(make_symmetric(4).unwrap().with_name("S4"));
    let dims = cohomology_dims(&g, 2, 6).dims;
    let el = |cycles: &[&[usize]]| {
        g.index_of(&Permutation::from_cycles(4, cycles).unwrap())
            .unwrap()
    };
    let v1 = modcoh::groups::subgroup_closure(&g, &[el(&[&[0, 1]]), el(&[&[2, 3]])]);
    let v2 =
        modcoh::groups::subgroup_closure(&g, &[el(&[&[0, 1], &[2, 3]]), el(&[&[0, 2], &[1, 3]])]);
    let engine = CohEngine::trivial(&g, 2, 4);
    let detects = (0..=4).all(|i| engine.detects(&[v1.clone(), v2.clone()], i).unwrap());
    let ok = dims == [1, 1, 2, 3, 3, 4, 5] && detects && v1.order() == 4 && v2.order() == 4;
    outcome(
        ok,
        format!("S4 {dims:?}, detected by V1 and V2 through degree 4: {detects}"),
    )
}

fn c7() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for name in ["A4", "S4"] {
        let g = group(name);
        let engine = CohEngine::trivial(&g, 2, 6);
        let stable: Vec<usize> = (0..=6)
            .map(|i| engine.stable_subspace(i).unwrap().dim)
            .collect();
        let dims = cohomology_dims(&g, 2, 6).dims;
        ok &= stable == dims;
        detail.push(format!("{name} {stable:?}"));
    }
    outcome(ok, detail.join(", "))
}

fn c8() -> Outcome {
    let mut ok = true;
    for (name, order) in [("Z4", 2usize), ("A4", 4), ("S4", 8)] {
        let g = group(name);
        let h = if order == 2 {
            Subgroup::from_members(&g, vec![0, g.pow(1, 2)])
        } else {
            sylow(&g, 2)
        };
        assert_eq!(h.order(), order);
        let engine = CohEngine::trivial(&g, 2, 4);
        let whole = Subgroup::whole(&g);
        let index = (h.index() % 2) as u32;
        for i in 0..=4 {
            let res = engine.restriction(&whole, &h, i).unwrap().matrix;
            let tr = engine.transfer(&h, &whole, i).unwrap().matrix;
            ok &= tr.mul(&res) == FpMatrix::identity(2, res.cols()).scale(index);
            ok &= engine.double_coset_identity(&h, &h, i).unwrap();
        }
    }
    outcome(ok, "(Z4,Z2), (A4,V), (S4,Sylow-2) through degree 4")
}

fn c9() -> Outcome {
    let mut ok = true;
    for name in ["Z2", "Z4", "Q8", "D8"] {
        let g = group(name);
        for m in [
            trivial_module(&g, 2, 1),
            regular_module(&g, 2),
            permutation_module(&g, &center(&g), 2),
        ] {
            ok &= minimal_rank_identity_check(&m, 6).unwrap();
        }
    }
    outcome(
        ok,
        "Z2, Z4, Q8, D8 with trivial, regular, center-coset modules through degree 6",
    )
}

fn c10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    let groups: Vec<_> = ["Z4", "Q8", "D8", "A4"].iter().map(|n| group(n)).collect();
    let bases: Vec<_> = groups.iter().map(|g| base_modules(g, 2)).collect();
    let (mut agree, mut projective, mut with_maximal) = (0, 0, 0);
    for _ in 0..CORPUS_SIZE {
        let k = rng.gen_range(0..groups.len());
        let m = random_module(&mut rng, &bases[k], CORPUS_MAX_DIM);
        let direct = is_projective(&m);
        let mut same = direct == chouinard_projective(&m);
        match maximal_subgroup_projectivity(&m) {
            Ok(v) => {
                with_maximal += 1;
                same &= v == direct;
            }
            Err(Error::BadParameters(_)) | Err(Error::ElementaryAbelianInput) => {}
            Err(e) => panic!("{e}"),
        }
        agree += usize::from(same);
        projective += usize::from(direct);
    }
    outcome(
        agree == CORPUS_SIZE,
        format!("{agree}/{CORPUS_SIZE} agree ({projective} projective, {with_maximal} with the maximal-subgroup test)"),
    )
}

fn c11() -> Outcome {
    let mut ok = true;
    let mut checked = 0;
    let mut direct_diverges = Vec::new();
    for e in catalog().iter().filter(|e| !e.stretch) {
        let g = e.build().unwrap();
        for p in prime_divisors(g.order()) {
            let c = complexity(&trivial_module(&g, p, 1), GROWTH_PROBE).unwrap();
            if !g.is_p_group(p) {
                let direct = growth_rate(&cohomology_dims(&g, p, GROWTH_PROBE)).unwrap();
                if direct != c {
                    direct_diverges.push(format!("{} p={p}: {direct} vs {c}", e.name));
                }
            }
            let r = p_rank(&g, p);
            let pole = krull_dimension_estimate(&g, p, GROWTH_PROBE)
                .unwrap()
                .pole_order;
            if !(c == r && r == pole) {
                println!(
                    "    {} p={p}: complexity {c}, rank {r}, pole {pole}",
                    e.name
                );
                ok = false;
            }
            checked += 1;
        }
    }
    outcome(
        ok,
        format!("{checked} (group, prime) pairs; growth of H^*(G) vs Sylow complexity diverges on {direct_diverges:?}"),
    )
}

fn c12() -> Outcome {
    let mut ok = true;
    let z2 = CohRing::new(&group("Z2"), 2, 8).unwrap();
    let x = vec![1];
    let mut pow = x.clone();
    for n in 2..=8 {
        pow = z2.cup(n - 1, &pow, 1, &x).unwrap();
        ok &= pow == vec![1];
    }
    let z3 = CohRing::new(&group("Z3"), 3, 2).unwrap();
    ok &= z3.cup(1, &[1], 1, &[1]).unwrap() == vec![0];
    let mut mismatches = Vec::new();
    for name in ["D8", "V4", "Q8", "A4", "S4"] {
        let ring = CohRing::new(&group(name), 2, 6).unwrap();
        let oracle = presentation(name);
        for n in 0..=6 {
            if ring.dim(n) != oracle.dim(n) {
                mismatches.push(format!("{name} dim {n}"));
            }
            for i in 0..=n {
                let (got, want) = (ring.span_dim(i, n - i).unwrap(), oracle.span_dim(i, n - i));
                if got != want {
                    mismatches.push(format!("{name} ({i},{}) {got} vs {want}", n - i));
                }
            }
        }
    }
    let a4 = CohRing::new(&group("A4"), 2, 6)
        .unwrap()
        .span_dim(3, 3)
        .unwrap();
    ok &= mismatches.is_empty() && a4 == 3;
    outcome(
        ok,
        format!("A4 span(3,3) = {a4}, mismatches {mismatches:?}"),
    )
}

fn c13() -> Outcome {
    let z4 = group("Z4");
    let maxs = maximal_subgroups(&z4, 2);
    let single = splice_complex(&z4, 2, &maxs[..1]).unwrap();
    let s1 = sphere_cohomology_check(&single) && single.segments_exact();
    let q8 = find_sphere_splice(&group("Q8"), 2, 2).unwrap();
    let s3 = q8
        .as_ref()
        .is_some_and(|c| sphere_cohomology_check(c) && c.segments_exact() && c.n() == 2);
    let dims = q8.map(|c| c.complex.cohomology_dims());
    outcome(s1 && s3, format!("Z4 S^1 {s1}, Q8 pair S^3 {s3} {dims:?}"))
}

fn c14() -> Outcome {
    let q8 = full_report(&group("Q8"), 8).unwrap();
    let q8_ok = q8.swan_ok
        && q8.mtw_ok
        && q8.twop_milnor_ok
        && q8.twop_cyclic_ok
        && q8.wolf_pq_ok
        && q8.periodic_ok;
    let d6 = full_report(&group("D6"), 8).unwrap();
    let d8 = full_report(&group("D8"), 8).unwrap();
    let fails_ok = !d6.mtw_ok && !d6.twop_milnor_ok && !d8.swan_ok && !d8.mtw_ok;
    let mut cyclic_ok = true;
    for n in [2, 3, 4, 5, 6, 7, 8, 9, 10, 12] {
        let r = full_report(&Arc::new(make_cyclic(n).unwrap()), 6).unwrap();
        cyclic_ok &= r.swan_ok && r.mtw_ok && r.wolf_pq_ok && r.twop_forms_agree;
    }
    let closure = closure_up_to(CLOSURE_ORDER).unwrap();
    let mut disagree = Vec::new();
    let mut disagree_swan = 0;
    for g in &closure {
        if twop_condition(g) != twop_cyclic_form(g) {
            disagree.push(format!("{}({})", g.name(), g.order()));
            disagree_swan += usize::from(swan_condition(g));
        }
    }
    let agree = disagree.is_empty();
    let shown: Vec<_> = disagree.iter().take(6).cloned().collect();
    outcome(
        q8_ok && fails_ok && cyclic_ok && agree,
        format!(
            "Q8 {q8_ok}, D6/D8 fail {fails_ok}, cyclic {cyclic_ok}; 2p forms disagree on {}/{} groups, {} of them satisfying p^2 (e.g. {})",
            disagree.len(),
            closure.len(),
            disagree_swan,
            shown.join(" ")
        ),
    )
}

fn c15() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(PROPERTY_SEED);
    let mut failed = Vec::new();

    // resolution independence
    for name in ["Z4", "Q8", "D8", "A4"] {
        let g = group(name);
        let base = base_modules(&g, 2);
        for _ in 0..3 {
            let m = random_module(&mut rng, &base, 24);
            let k = trivial_module(&g, 2, 1);
            let a = cohomology_of(&m, &k, GeneratorRule::Greedy);
            let b = cohomology_of(&m, &k, GeneratorRule::GreedyPadded);
            if a != b {
                failed.push(format!("independence {name}"));
            }
        }
    }

    // Maschke
    for (name, p) in [
        ("Z2", 3),
        ("Z3", 2),
        ("Z5", 3),
        ("D6", 5),
        ("Q8", 3),
        ("A4", 5),
    ] {
        let g = group(name);
        for m in base_modules(&g, p).into_iter().take(4) {
            let dims = ext_dims_with(&default_resolution(&trivial_module(&g, p, 1), 4), &m, 3)
                .unwrap()
                .dims;
            if dims[1..].iter().any(|&d| d != 0) {
                failed.push(format!("maschke {name} p={p}"));
            }
        }
    }

    // RREF canonicity and rank-nullity
    for _ in 0..PROPERTY_CASES {
        let p = [2, 3, 5, 7][rng.gen_range(0..4)];
        let (r, c) = (rng.gen_range(1..9), rng.gen_range(1..9));
        let a = FpMatrix::from_data(p, r, c, (0..r * c).map(|_| rng.gen_range(0..p)).collect());
        let mut e = FpMatrix::identity(p, r);
        for _ in 0..10 {
            let (i, j) = (rng.gen_range(0..r), rng.gen_range(0..r));
            let mut step = FpMatrix::identity(p, r);
            if i != j {
                step.set(i, j, rng.gen_range(0..p));
            } else {
                step.set(i, i, rng.gen_range(1..p));
            }
            e = step.mul(&e);
        }
        if e.mul(&a).rref().matrix != a.rref().matrix {
            failed.push("rref".into());
        }
        if a.rank() + a.kernel_basis().dim() != c {
            failed.push("rank-nullity".into());
        }
    }

    // cup products at p = 2
    for name in ["D8", "Q8", "A4"] {
        let ring = CohRing::new(&group(name), 2, 6).unwrap();
        for _ in 0..PROPERTY_CASES / 3 {
            let (i, j, k) = (
                rng.gen_range(1..3),
                rng.gen_range(1..3),
                rng.gen_range(1..3),
            );
            let a = random_class(&mut rng, ring.dim(i));
            let b = random_class(&mut rng, ring.dim(j));
            let c = random_class(&mut rng, ring.dim(k));
            let ab = ring.cup(i, &a, j, &b).unwrap();
            if ab != ring.cup(j, &b, i, &a).unwrap() {
                failed.push(format!("commutativity {name}"));
            }
            let left = ring.cup(i + j, &ab, k, &c).unwrap();
            let right = ring
                .cup(i, &a, j + k, &ring.cup(j, &b, k, &c).unwrap())
                .unwrap();
            if left != right {
                failed.push(format!("associativity {name}"));
            }
        }
    }

    // restriction is a ring map
    for (name, order) in [("D8", 4usize), ("A4", 4), ("S4", 8)] {
        let g = group(name);
        let engine = CohEngine::trivial(&g, 2, 5);
        let whole = Subgroup::whole(&g);
        let h = if name == "D8" {
            maximal_subgroups(&g, 2)[0].clone()
        } else {
            sylow(&g, 2)
        };
        assert_eq!(h.order(), order);
        let big = CohRing::for_subgroup(&engine, &whole).unwrap();
        let small = CohRing::for_subgroup(&engine, &h).unwrap();
        for _ in 0..PROPERTY_CASES / 3 {
            let (i, j) = (rng.gen_range(1..3), rng.gen_range(1..4));
            let a = random_class(&mut rng, big.dim(i));
            let b = random_class(&mut rng, big.dim(j));
            let res =
                |d: usize, v: &[u32]| engine.restriction(&whole, &h, d).unwrap().matrix.mul_vec(v);
            let lhs = res(i + j, &big.cup(i, &a, j, &b).unwrap());
            let rhs = small.cup(i, &res(i, &a), j, &res(j, &b)).unwrap();
            if lhs != rhs {
                failed.push(format!("naturality {name}"));
            }
        }
    }
    failed.dedup();
    outcome(
        failed.is_empty(),
        if failed.is_empty() {
            "all suites".to_string()
        } else {
            failed.join(", ")
        },
    )
}

fn cohomology_of(
    m: &modcoh::gmodules::GModule,
    k: &modcoh::gmodules::GModule,
    rule: GeneratorRule,
) -> Vec<usize> {
    let res = free_resolution_with(m, 5, rule).unwrap();
    ext_dims_with(&res, k, 4).unwrap().dims
}

fn random_class(rng: &mut ChaCha8Rng, dim: usize) -> Vec<u32> {
    (0..dim).map(|_| rng.gen_range(0..2)).collect()
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 15] = [
        ("rank-1 series", c1),
        ("Kunneth", c2),
        ("D8 series", c3),
        ("Q8 series and fit", c4),
        ("A4 series and abelian Sylow", c5),
        ("S4 series and detection", c6),
        ("stable elements", c7),
        ("transfer calculus", c8),
        ("minimal-resolution identity", c9),
        ("projectivity triad", c10),
        ("complexity, rank, pole order", c11),
        ("cup products", c12),
        ("splice spheres", c13),
        ("sphere-action conditions", c14),
        ("property suites", c15),
    ];
    let mut unexpected = Vec::new();
    for (k, (name, f)) in criteria.iter().enumerate() {
        let id = k + 1;
        let t = Instant::now();
        let o = f();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        let note = if !o.pass && KNOWN_DIVERGENT.contains(&id) {
            " [known divergence]"
        } else {
            ""
        };
        println!(
            "criterion {id:>2} {tag} {name}: {}{note} ({:.1?})",
            o.detail,
            t.elapsed()
        );
        if !o.pass && !KNOWN_DIVERGENT.contains(&id) {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
