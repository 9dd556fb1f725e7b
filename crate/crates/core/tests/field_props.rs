use std::sync::Arc;

use lsc_core::{FieldParams, PrimeField};
use proptest::prelude::*;

fn gf256() -> Arc<FieldParams> {
    FieldParams::with_default_modulus(2, 8).unwrap()
}

fn gf27() -> Arc<FieldParams> {
    FieldParams::with_default_modulus(3, 3).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn binary_field_axioms(a in 0u128..256, b in 0u128..256, c in 0u128..256) {
        let p = gf256();
        let (a, b, c) = (p.element_from_index(a), p.element_from_index(b), p.element_from_index(c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &p.zero(), a.clone());
        prop_assert_eq!(&a * &p.one(), a.clone());
        prop_assert!((&a + &(-&a)).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inverse().unwrap()).is_one());
        }
        prop_assert_eq!((&a + &b).frobenius(1), &a.frobenius(1) + &b.frobenius(1));
        prop_assert_eq!(a.frobenius(1), &a * &a);
        prop_assert_eq!(a.frobenius(3).frobenius_inv(3), a.clone());
    }

    #[test]
    fn ternary_field_axioms(a in 0u128..27, b in 0u128..27, c in 0u128..27, lambda in 0u32..3) {
        let p = gf27();
        let (a, b, c) = (p.element_from_index(a), p.element_from_index(b), p.element_from_index(c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        prop_assert_eq!((&a + &b).frobenius(1), &a.frobenius(1) + &b.frobenius(1));
        prop_assert_eq!(a.frobenius(1), a.pow(3));
        prop_assert_eq!(a.scale(lambda).frobenius(1), a.frobenius(1).scale(lambda));
        if !b.is_zero() {
            prop_assert_eq!(&a.try_div(&b).unwrap() * &b, a.clone());
        }
    }

    #[test]
    fn prime_field_axioms(a in 0u32..251, b in 0u32..251, c in 0u32..251) {
        let f = PrimeField::new(251).unwrap();
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(f.sub(a, b), b), a);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
    }
}

#[test]
fn coordinate_bijection_for_small_binary_fields() {
    for m in 1..=8 {
        let p = FieldParams::with_default_modulus(2, m).unwrap();
        let all: Vec<_> = p.elements().collect();
        assert_eq!(all.len(), 1 << m);
        let mut seen = std::collections::BTreeSet::new();
        for (i, e) in all.iter().enumerate() {
            assert_eq!(e.to_index(), i as u128);
            assert_eq!(&p.element(e.coords().to_vec()).unwrap(), e);
            assert!(seen.insert(e.coords().to_vec()));
        }
    }
}

#[test]
fn multiplicative_group_is_cyclic_of_full_order() {
    let p = FieldParams::with_default_modulus(2, 4).unwrap();
    let alpha = p.basis_element(1);
    let mut x = p.one();
    for i in 1..=15 {
        x = &x * &alpha;
        assert_eq!(x.is_one(), i == 15);
    }
}
