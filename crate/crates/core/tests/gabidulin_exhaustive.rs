mod common;

use std::sync::Arc;

use common::*;
use lsc_core::gabidulin::DEFAULT_ENUMERATION_CAP;
use lsc_core::rng::rng_from_seed;
use lsc_core::{
    DecodeFailure, ErasureHints, FieldParams, GabidulinCode, MatrixFq, RankCodeword,
};
use rand::Rng;

fn gf16() -> Arc<FieldParams> {
    FieldParams::new(2, 4, vec![1, 1, 0, 0, 1]).unwrap()
}

fn all_codewords(code: &GabidulinCode) -> Vec<(Vec<lsc_core::ExtFieldElement>, MatrixFq)> {
    let p = code.params().clone();
    (0..code.num_codewords().unwrap())
        .map(|i| {
            let msg = code.message_from_index(i);
            let x = code.encode(&msg).unwrap().to_matrix(&p);
            (msg, x)
        })
        .collect()
}

/// All `n × m` binary matrices of rank at most one.
fn rank_at_most_one(n: usize, m: usize) -> Vec<MatrixFq> {
    let mut out = vec![MatrixFq::zeros(F2, n, m)];
    for u in 1u32..(1 << n) {
        for v in 1u32..(1 << m) {
            let rows: Vec<Vec<u32>> = (0..n)
                .map(|i| if (u >> i) & 1 == 1 { from_mask(v, m) } else { vec![0; m] })
                .collect();
            out.push(MatrixFq::from_rows(F2, m, &rows).unwrap());
        }
    }
    out
}

#[test]
fn mrd_distance_is_attained_exactly() {
    let p = gf16();
    for n in [3, 4] {
        let code = GabidulinCode::new(&p, n, 1).unwrap();
        let words = all_codewords(&code);
        let mut min = usize::MAX;
        for i in 0..words.len() {
            for j in i + 1..words.len() {
                let diff = words[i].1.sub(&words[j].1).unwrap();
                min = min.min(rank_by_span(&diff));
            }
        }
        // n - k + 1 with k = 1
        assert_eq!(min, n);
        assert_eq!(min, code.min_rank_distance());
    }
}

#[test]
fn encoding_is_linear() {
    let p = gf16();
    let mut rng = rng_from_seed(1);
    for (n, k) in [(3, 1), (4, 1), (4, 2), (4, 4)] {
        let code = GabidulinCode::new(&p, n, k).unwrap();
        for _ in 0..500 {
            let u = code.random_message(&mut rng);
            let v = code.random_message(&mut rng);
            let sum: Vec<_> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
            let cu = code.encode(&u).unwrap().to_matrix(&p);
            let cv = code.encode(&v).unwrap().to_matrix(&p);
            let cs = code.encode(&sum).unwrap().to_matrix(&p);
            assert_eq!(cs, cu.add(&cv).unwrap());
        }
    }
}

#[test]
fn every_correctable_error_is_corrected_and_matches_oracle() {
    let p = gf16();
    for n in [3, 4] {
        let code = GabidulinCode::new(&p, n, 1).unwrap();
        let radius = (n - 1) / 2;
        assert_eq!(radius, 1);
        let errors = rank_at_most_one(n, 4);
        for (msg, x) in all_codewords(&code) {
            for e in &errors {
                let y = RankCodeword::from_matrix(&p, &x.add(e).unwrap()).unwrap();
                assert_eq!(code.decode(&y).unwrap(), Ok(msg.clone()));
                assert_eq!(
                    code.brute_force_decode(&y, DEFAULT_ENUMERATION_CAP).unwrap(),
                    Ok(msg.clone())
                );
            }
        }
    }
}

#[test]
fn never_disagrees_with_brute_force_on_arbitrary_words() {
    let p = gf16();
    let mut rng = rng_from_seed(2);
    for (n, k) in [(3, 1), (4, 1), (4, 2)] {
        let code = GabidulinCode::new(&p, n, k).unwrap();
        let radius = (n - k) / 2;
        let words = all_codewords(&code);
        for _ in 0..2_000 {
            let y = MatrixFq::random(F2, n, 4, &mut rng);
            let yw = RankCodeword::from_matrix(&p, &y).unwrap();
            let nearest = words
                .iter()
                .map(|(m, x)| (rank_by_span(&y.sub(x).unwrap()), m))
                .min_by_key(|(d, _)| *d)
                .unwrap();
            match code.decode(&yw).unwrap() {
                Ok(msg) => {
                    assert_eq!(&msg, nearest.1);
                    assert!(nearest.0 <= radius);
                }
                Err(_) => assert!(nearest.0 > radius),
            }
            if let Ok(msg) = code.brute_force_decode(&yw, DEFAULT_ENUMERATION_CAP).unwrap() {
                if nearest.0 <= radius {
                    assert_eq!(code.decode(&yw).unwrap(), Ok(msg));
                }
            }
        }
    }
}

/// Accepting `c` is right exactly when `2τ + μ + δ ≤ d - 1`.
#[test]
fn errors_and_erasures_match_residual_oracle() {
    let p = FieldParams::with_default_modulus(2, 6).unwrap();
    let mut rng = rng_from_seed(3);
    let code = GabidulinCode::new(&p, 6, 2).unwrap();
    let d = code.min_rank_distance();
    let mut decoded = 0;
    for _ in 0..3_000 {
        let msg = code.random_message(&mut rng);
        let x = code.encode(&msg).unwrap().to_matrix(&p);
        let mu = rng.gen_range(0..=2);
        let delta = rng.gen_range(0..=2);
        let tau = rng.gen_range(0..=1);
        if 2 * tau + mu + delta > d - 1 {
            continue;
        }
        // row erasures: X + L·A for a known n×mu L; column erasures: B·E for a known E
        let l = MatrixFq::random_full_row_rank(F2, mu, 6, &mut rng).transpose();
        let a = MatrixFq::random(F2, mu, 6, &mut rng);
        let e = MatrixFq::random_full_row_rank(F2, delta, 6, &mut rng);
        let b = MatrixFq::random(F2, 6, delta, &mut rng);
        let u = MatrixFq::random(F2, 6, tau, &mut rng);
        let v = MatrixFq::random(F2, tau, 6, &mut rng);
        let y = x
            .add(&l.mul(&a).unwrap())
            .unwrap()
            .add(&b.mul(&e).unwrap())
            .unwrap()
            .add(&u.mul(&v).unwrap())
            .unwrap();
        let hints = ErasureHints {
            row_erasures: (mu > 0).then_some(l),
            col_erasures: (delta > 0).then_some(e),
        };
        let yw = RankCodeword::from_matrix(&p, &y).unwrap();
        assert_eq!(code.decode_bounded(&yw, &hints).unwrap(), Ok(msg));
        decoded += 1;
    }
    assert!(decoded > 1_000);
}

#[test]
fn larger_and_odd_fields_correct_random_errors() {
    let mut rng = rng_from_seed(4);
    for (q, m, n, k) in [(2, 8, 8, 2), (3, 4, 4, 2), (5, 3, 3, 1)] {
        let p = FieldParams::with_default_modulus(q, m).unwrap();
        let f = p.base();
        let code = GabidulinCode::new(&p, n, k).unwrap();
        let radius = (n - k) / 2;
        for _ in 0..200 {
            let msg = code.random_message(&mut rng);
            let x = code.encode(&msg).unwrap().to_matrix(&p);
            let r = rng.gen_range(0..=radius);
            let e = MatrixFq::random(f, n, r, &mut rng).mul(&MatrixFq::random(f, r, m, &mut rng)).unwrap();
            let y = RankCodeword::from_matrix(&p, &x.add(&e).unwrap()).unwrap();
            assert_eq!(code.decode(&y).unwrap(), Ok(msg));
        }
    }
}

#[test]
fn beyond_radius_is_a_failure_not_a_panic() {
    let p = gf16();
    let code = GabidulinCode::new(&p, 4, 2).unwrap();
    let mut rng = rng_from_seed(5);
    let mut failures = 0;
    for _ in 0..500 {
        let y = RankCodeword::from_matrix(&p, &MatrixFq::random(F2, 4, 4, &mut rng)).unwrap();
        if let Err(f) = code.decode(&y).unwrap() {
            assert_eq!(f, DecodeFailure::RadiusExceeded);
            failures += 1;
        }
    }
    assert!(failures > 0);
}
