mod common;

use common::*;
use lsc_core::rng::rng_from_seed;
use lsc_core::{MatrixFq, PrimeField, Subspace};
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn metric_axioms(seed in any::<u64>(), ambient in 1usize..=11) {
        let mut rng = rng_from_seed(seed);
        let a = random_subspace(ambient, &mut rng);
        let b = random_subspace(ambient, &mut rng);
        let c = random_subspace(ambient, &mut rng);
        let ab = a.distance(&b).unwrap();
        prop_assert_eq!(ab, b.distance(&a).unwrap());
        prop_assert_eq!(ab == 0, a == b);
        prop_assert_eq!(a.distance(&a).unwrap(), 0);
        prop_assert!(a.distance(&c).unwrap() <= ab + b.distance(&c).unwrap());
    }

    #[test]
    fn dimension_formula(seed in any::<u64>(), ambient in 1usize..=11) {
        let mut rng = rng_from_seed(seed);
        let a = random_subspace(ambient, &mut rng);
        let b = random_subspace(ambient, &mut rng);
        let s = a.sum(&b).unwrap();
        let i = a.intersection(&b).unwrap();
        prop_assert_eq!(s.dim() + i.dim(), a.dim() + b.dim());
        prop_assert!(i.is_subspace_of(&a) && i.is_subspace_of(&b));
        prop_assert!(a.is_subspace_of(&s) && b.is_subspace_of(&s));
    }

    #[test]
    fn restricting_to_a_subspace_never_increases_the_defect(seed in any::<u64>(), ambient in 1usize..=11) {
        let mut rng = rng_from_seed(seed);
        let a = random_subspace(ambient, &mut rng);
        let b = random_subspace(ambient, &mut rng);
        let sub_dim = rng.gen_range(0..=a.dim());
        let a_sub = a.random_subspace(sub_dim, &mut rng).unwrap();
        prop_assert!(a_sub.is_subspace_of(&a));
        let lhs = a.dim() - a.intersection(&b).unwrap().dim();
        let rhs = a_sub.dim() - a_sub.intersection(&b).unwrap().dim();
        prop_assert!(lhs >= rhs);
    }

    #[test]
    fn modular_law(seed in any::<u64>(), ambient in 1usize..=9) {
        // A ⊆ C ⇒ A + (B ∩ C) = (A + B) ∩ C
        let mut rng = rng_from_seed(seed);
        let c = random_subspace(ambient, &mut rng);
        let a = c.random_subspace(rng.gen_range(0..=c.dim()), &mut rng).unwrap();
        let b = random_subspace(ambient, &mut rng);
        let left = a.sum(&b.intersection(&c).unwrap()).unwrap();
        let right = a.sum(&b).unwrap().intersection(&c).unwrap();
        prop_assert_eq!(left, right);
    }
}

#[test]
fn sum_and_intersection_match_enumeration() {
    let mut rng = rng_from_seed(7);
    for _ in 0..2_000 {
        let ambient = rng.gen_range(1..=10);
        let ra = rng.gen_range(0..=ambient + 1);
        let rb = rng.gen_range(0..=ambient + 1);
        let ma = random_rows(ambient, ra, &mut rng);
        let mb = random_rows(ambient, rb, &mut rng);
        let (a, b) = (Subspace::row_space(&ma), Subspace::row_space(&mb));
        let sa = span(&masks(&ma));
        let sb = span(&masks(&mb));
        assert_eq!(span_of(&a), sa);
        assert_eq!(a.dim(), dim_of(&sa));

        let mut union = masks(&ma);
        union.extend(masks(&mb));
        assert_eq!(span_of(&a.sum(&b).unwrap()), span(&union));

        let inter: std::collections::BTreeSet<u32> = sa.intersection(&sb).copied().collect();
        assert_eq!(span_of(&a.intersection(&b).unwrap()), inter);
        assert_eq!(a.distance(&b).unwrap(), dim_of(&span(&union)) - dim_of(&inter));
        for v in 0u32..(1 << ambient) {
            assert_eq!(a.contains(&from_mask(v, ambient)), sa.contains(&v));
        }
    }
}

#[test]
fn rref_is_canonical() {
    let mut rng = rng_from_seed(8);
    for _ in 0..1_000 {
        let ambient = rng.gen_range(1..=10);
        let a = random_subspace(ambient, &mut rng);
        let mixer = MatrixFq::random_full_row_rank(F2, a.dim(), a.dim(), &mut rng);
        let other = Subspace::row_space(&mixer.mul(a.basis()).unwrap());
        assert_eq!(a, other);
        assert_eq!(a.basis().rank(), a.dim());
        assert_eq!(rank_by_span(a.basis()), a.dim());
    }
}

#[test]
fn coordinate_zero_subspace_matches_enumeration() {
    let mut rng = rng_from_seed(9);
    for _ in 0..500 {
        let ambient = rng.gen_range(2..=10);
        let u = random_subspace(ambient, &mut rng);
        let coords: Vec<usize> = (0..ambient).filter(|_| rng.gen_bool(0.4)).collect();
        let restricted = u.vanishing_on(&coords);
        let expected: std::collections::BTreeSet<u32> = span_of(&u)
            .into_iter()
            .filter(|v| coords.iter().all(|&c| (v >> c) & 1 == 0))
            .collect();
        assert_eq!(span_of(&restricted), expected);

        let one_based: Vec<usize> = coords.iter().map(|c| c + 1).collect();
        let z = Subspace::coordinate_zero_subspace(F2, ambient, &one_based).unwrap();
        assert_eq!(u.intersection(&z).unwrap(), restricted);

        // stripping the vanishing coordinates preserves dimension
        assert_eq!(restricted.delete_coordinates(&coords).dim(), restricted.dim());
    }
}

#[test]
fn dump_round_trip() {
    let mut rng = rng_from_seed(10);
    for _ in 0..200 {
        let ambient = rng.gen_range(1..=11);
        let u = random_subspace(ambient, &mut rng);
        assert_eq!(Subspace::from_dump(&u.to_dump()).unwrap(), u);
    }
    let f13 = PrimeField::new(13).unwrap();
    for _ in 0..50 {
        let u = Subspace::random(f13, 6, rng.gen_range(0..=6), &mut rng).unwrap();
        assert_eq!(Subspace::from_dump(&u.to_dump()).unwrap(), u);
    }
}
