use std::sync::Arc;

use modcoh::catalog::{make_cyclic, make_dihedral, make_quaternion};
use modcoh::fplinalg::FpMatrix;
use modcoh::gmodules::{direct_sum, regular_module, trivial_module};
use modcoh::groups::{generate_group, FiniteGroup, Permutation};
use modcoh::resolutions::{cohomology_dims, expand_rational, ext_dims, poincare_fit, DimSeries};
use proptest::prelude::*;

fn matrix(p: u32) -> impl Strategy<Value = FpMatrix> {
    (1usize..7, 1usize..7).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(0..p, r * c).prop_map(move |d| FpMatrix::from_data(p, r, c, d))
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, rng_algorithm: proptest::test_runner::RngAlgorithm::ChaCha, ..ProptestConfig::default() })]

    #[test]
    fn rank_nullity(a in matrix(5)) {
        prop_assert_eq!(a.rank() + a.kernel_basis().dim(), a.cols());
    }

    #[test]
    fn rref_idempotent(a in matrix(3)) {
        let r = a.rref().matrix;
        prop_assert_eq!(r.rref().matrix, r.clone());
        prop_assert_eq!(r.rank(), a.rank());
    }

    #[test]
    fn transpose_rank(a in matrix(2)) {
        prop_assert_eq!(a.transpose().rank(), a.rank());
    }

    #[test]
    fn solve_finds_image_vectors(a in matrix(7), seed in proptest::collection::vec(0u32..7, 6)) {
        let x: Vec<u32> = seed.into_iter().take(a.cols()).chain(std::iter::repeat(0)).take(a.cols()).collect();
        let b = a.mul_vec(&x);
        let y = a.solve(&b).unwrap().expect("b is in the image");
        prop_assert_eq!(a.mul_vec(&y), b);
    }

    #[test]
    fn random_permutations_generate_groups(images in Just((0..5usize).collect::<Vec<_>>()).prop_shuffle()) {
        let g = generate_group(5, &[Permutation::new(images).unwrap()], "C").unwrap();
        prop_assert!(g.verify_table());
        prop_assert_eq!(5 * 4 * 3 * 2 % g.order(), 0);
    }

    #[test]
    fn fit_recovers_series(num in proptest::collection::vec(0i64..4, 1..4), den in proptest::collection::vec(1usize..4, 1..3)) {
        let total: usize = den.iter().sum();
        let num: Vec<i64> = num.into_iter().take(total + 1).collect();
        let dims: Vec<usize> = expand_rational(&num, &den, 14).into_iter().map(|c| c as usize).collect();
        let fit = poincare_fit(&DimSeries::new(dims, 2, "synthetic"), &den).unwrap().expect("exact series");
        let mut want = num.clone();
        while want.len() > 1 && want.last() == Some(&0) {
            want.pop();
        }
        prop_assert_eq!(fit.numerator, want);
    }
}

fn groups() -> Vec<Arc<FiniteGroup>> {
    vec![
        Arc::new(make_cyclic(4).unwrap()),
        Arc::new(make_dihedral(8).unwrap()),
        Arc::new(make_quaternion(8).unwrap()),
    ]
}

#[test]
fn ext_is_additive() {
    for g in groups() {
        let k = trivial_module(&g, 2, 1);
        let m = direct_sum(&k, &regular_module(&g, 2)).unwrap();
        let sum = ext_dims(&m, &k, 4).unwrap().dims;
        let alone = cohomology_dims(&g, 2, 4).dims;
        let mut expected = alone.clone();
        expected[0] += 1;
        assert_eq!(sum, expected, "{}", g.name());
    }
}
