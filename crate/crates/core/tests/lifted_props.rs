mod common;

use std::sync::Arc;

use common::*;
use lsc_core::channel::apply_exact;
use lsc_core::gabidulin::DEFAULT_ENUMERATION_CAP;
use lsc_core::rng::rng_from_seed;
use lsc_core::{FieldParams, GabidulinCode, LiftedCode, MatrixFq, Subspace};

fn gf16() -> Arc<FieldParams> {
    FieldParams::new(2, 4, vec![1, 1, 0, 0, 1]).unwrap()
}

fn lifted(n: usize, k: usize) -> LiftedCode {
    LiftedCode::new(GabidulinCode::new(&gf16(), n, k).unwrap())
}

fn codewords(code: &LiftedCode) -> Vec<(MatrixFq, Subspace)> {
    let p = code.params().clone();
    (0..code.inner().num_codewords().unwrap())
        .map(|i| {
            let x = code
                .inner()
                .encode(&code.inner().message_from_index(i))
                .unwrap()
                .to_matrix(&p);
            let v = code.lift(&x).unwrap();
            (x, v)
        })
        .collect()
}

#[test]
fn lifted_distance_is_twice_rank_distance_exhaustively() {
    for n in [3, 4] {
        let code = lifted(n, 1);
        let words = codewords(&code);
        let mut min = usize::MAX;
        for i in 0..words.len() {
            for j in i + 1..words.len() {
                let (xi, vi) = &words[i];
                let (xj, vj) = &words[j];
                // subspace distance from the enumerated spans
                let si = span_of(vi);
                let sj = span_of(vj);
                let inter = si.intersection(&sj).count();
                let ds = 2 * (vi.dim() - inter.trailing_zeros() as usize);
                assert_eq!(ds, 2 * rank_by_span(&xi.sub(xj).unwrap()));
                assert_eq!(ds, vi.distance(vj).unwrap());
                min = min.min(ds);
            }
        }
        assert_eq!(min, code.min_subspace_distance());
    }
}

#[test]
fn subspace_decode_recovers_every_in_capability_outcome() {
    let mut rng = rng_from_seed(11);
    for n in [3, 4] {
        let code = lifted(n, 1);
        let d = code.min_subspace_distance();
        for rho in 0..=n {
            for t in 0..=4 {
                if 2 * (rho + t) >= d {
                    continue;
                }
                for _ in 0..1_000 {
                    let msg = code.inner().random_message(&mut rng);
                    let v = code.encode(&msg).unwrap();
                    let out = apply_exact(&v, rho, t, &mut rng).unwrap();
                    let dec = code.subspace_decode(&out.received).unwrap().unwrap();
                    assert_eq!(dec.subspace, v);
                    assert_eq!(dec.message, msg);
                }
            }
        }
    }
}

#[test]
fn subspace_decode_agrees_with_brute_force() {
    let mut rng = rng_from_seed(12);
    for n in [3, 4] {
        let code = lifted(n, 1);
        let d = code.min_subspace_distance();
        for rho in 0..=3 {
            for t in 0..=3 {
                for _ in 0..200 {
                    let msg = code.inner().random_message(&mut rng);
                    let v = code.encode(&msg).unwrap();
                    let out = apply_exact(&v, rho, t, &mut rng).unwrap();
                    let fast = code.subspace_decode(&out.received).unwrap();
                    let slow = code
                        .brute_force_subspace_decode(&out.received, DEFAULT_ENUMERATION_CAP)
                        .unwrap();
                    match (&fast, &slow) {
                        (Ok(a), Ok(b)) => assert_eq!(a.subspace, b.subspace),
                        (Ok(a), Err(_)) => panic!("decoder returned {:?} without a unique nearest codeword", a.message),
                        (Err(_), Ok(b)) => {
                            // the oracle may find a unique nearest codeword beyond the radius
                            assert!(2 * b.subspace.distance(&out.received).unwrap() >= d)
                        }
                        (Err(_), Err(_)) => {}
                    }
                    if 2 * (rho + t) < d {
                        assert!(fast.is_ok());
                    }
                }
            }
        }
    }
}
