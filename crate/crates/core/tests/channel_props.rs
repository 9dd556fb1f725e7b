mod common;

use common::*;
use lsc_core::channel::{apply, apply_exact, apply_matrix, ChannelMode, ChannelSpec};
use lsc_core::rng::rng_from_seed;
use lsc_core::{MatrixFq, Subspace};
use rand::Rng;

#[test]
fn exact_channel_contract() {
    let mut rng = rng_from_seed(1);
    for _ in 0..10_000 {
        let ambient = rng.gen_range(1..=11);
        let dim = rng.gen_range(0..=ambient);
        let v = Subspace::random(F2, ambient, dim, &mut rng).unwrap();
        let rho = rng.gen_range(0..=dim);
        let t = rng.gen_range(0..=ambient - dim);
        let out = apply_exact(&v, rho, t, &mut rng).unwrap();
        let u = &out.received;
        let common = v.intersection(u).unwrap();
        assert_eq!((out.rho, out.t), (rho, t));
        assert_eq!(common.dim(), dim - rho);
        assert_eq!(u.dim(), common.dim() + t);
        assert_eq!(v.distance(u).unwrap(), rho + t);
        // U = (V ∩ U) ⊕ E for any complement E of V ∩ U in U
        let e = complement(&common, u);
        assert_eq!(e.dim(), t);
        assert!(e.intersection(&v).unwrap().is_zero());
        assert_eq!(common.sum(&e).unwrap(), *u);
    }
}

/// A complement of `inner` inside `outer`, built greedily from `outer`'s basis.
fn complement(inner: &Subspace, outer: &Subspace) -> Subspace {
    let mut acc = inner.clone();
    let mut rows = MatrixFq::zeros(F2, 0, outer.ambient_dim());
    for r in 0..outer.dim() {
        let row = outer.basis().select_rows(&[r]);
        if !acc.contains(row.row(0)) {
            acc = acc.sum(&Subspace::row_space(&row)).unwrap();
            rows = rows.vstack(&row).unwrap();
        }
    }
    Subspace::row_space(&rows)
}

#[test]
fn matrix_channel_bounds() {
    let mut rng = rng_from_seed(2);
    for _ in 0..2_000 {
        let v = Subspace::random(F2, 11, 7, &mut rng).unwrap();
        let collected = rng.gen_range(0..=10);
        let errors = rng.gen_range(0..=4);
        let out = apply_matrix(&v, collected, errors, &mut rng).unwrap();
        assert!(out.rho <= 7);
        assert!(out.t <= errors);
        assert_eq!(v.distance(&out.received).unwrap(), out.rho + out.t);
        if errors == 0 {
            assert_eq!(out.t, 0);
            assert!(out.rho >= 7usize.saturating_sub(collected));
        }
    }
}

/// With `dim V = 2`, `collected = 4` and no errors, `ρ = 2 - rank(A)` for a
/// uniform `4 × 2` matrix `A`; compare against all 256 such matrices.
#[test]
fn matrix_channel_erasure_distribution_matches_enumeration() {
    let mut exact = [0usize; 3];
    for bits in 0u32..256 {
        let rows: Vec<Vec<u32>> = (0..4).map(|r| from_mask((bits >> (2 * r)) & 3, 2)).collect();
        let a = MatrixFq::from_rows(F2, 2, &rows).unwrap();
        exact[2 - rank_by_span(&a)] += 1;
    }
    assert_eq!(exact, [210, 45, 1]);

    let mut rng = rng_from_seed(3);
    let v = Subspace::random(F2, 4, 2, &mut rng).unwrap();
    let samples = 40_000;
    let mut seen = [0usize; 3];
    for _ in 0..samples {
        seen[apply_matrix(&v, 4, 0, &mut rng).unwrap().rho] += 1;
    }
    for rho in 0..3 {
        let p = exact[rho] as f64 / 256.0;
        let observed = seen[rho] as f64 / samples as f64;
        let sigma = (p * (1.0 - p) / samples as f64).sqrt();
        assert!((observed - p).abs() <= 5.0 * sigma + 1e-4, "rho={rho}: {observed} vs {p}");
    }
}

#[test]
fn seeded_channel_is_deterministic() {
    let mut rng = rng_from_seed(4);
    let v = Subspace::random(F2, 11, 7, &mut rng).unwrap();
    for seed in 0..100 {
        for mode in [
            ChannelMode::Exact { rho: 2, t: 2 },
            ChannelMode::Matrix { collected: 8, error_packets: 2 },
        ] {
            let spec = ChannelSpec { mode, seed };
            assert_eq!(apply(&v, &spec).unwrap(), apply(&v, &spec).unwrap());
        }
    }
}
