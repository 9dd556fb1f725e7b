//! The operator channel: the receiver sees `U = V' ⊕ E` where `V' ⊆ V`
//! keeps `dim V - ρ` dimensions of the transmitted space (erasures) and `E`
//! is an error space of dimension `t` (errors).
//!
//! Two realizations are provided. [`apply_exact`] injects exactly the
//! requested `(ρ, t)`, which is what the decoding guarantees are phrased in.
//! [`apply_matrix`] mimics random linear network coding at the packet level
//! (`Y = A·B + D·Z`) and reports whatever `(ρ, t)` results.

use rand::Rng;
use thiserror::Error;

use crate::matrix::{LinalgError, MatrixFq};
use crate::subspace::Subspace;

/// Attempts per error dimension before [`apply_exact`] gives up.
pub const ERROR_SAMPLING_ATTEMPTS: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChannelError {
    #[error("rho = {rho} exceeds dim(V) = {dim}")]
    TooManyErasures { rho: usize, dim: usize },
    #[error("t = {t} exceeds ambient - dim(V) = {room}")]
    TooManyErrors { t: usize, room: usize },
    #[error("could not sample an error vector outside V + E after {0} attempts")]
    SamplingExhausted(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChannelMode {
    /// Exactly `rho` erasures and `t` errors.
    Exact { rho: usize, t: usize },
    /// `collected` random combinations of the transmitted basis plus
    /// `error_packets` random injected packets.
    Matrix {
        collected: usize,
        error_packets: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ChannelSpec {
    pub mode: ChannelMode,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChannelOutcome {
    pub transmitted: Subspace,
    pub received: Subspace,
    pub rho: usize,
    pub t: usize,
}

impl ChannelOutcome {
    fn from_spaces(transmitted: Subspace, received: Subspace) -> Result<Self, ChannelError> {
        let common = transmitted.intersection(&received)?.dim();
        Ok(ChannelOutcome {
            rho: transmitted.dim() - common,
            t: received.dim() - common,
            transmitted,
            received,
        })
    }
}

/// Runs the channel described by `spec`, drawing randomness from a fresh
/// generator seeded with `spec.seed`.
pub fn apply(v: &Subspace, spec: &ChannelSpec) -> Result<ChannelOutcome, ChannelError> {
    let mut rng = crate::rng::rng_from_seed(spec.seed);
    apply_with(v, spec.mode, &mut rng)
}

pub fn apply_with<R: Rng + ?Sized>(
    v: &Subspace,
    mode: ChannelMode,
    rng: &mut R,
) -> Result<ChannelOutcome, ChannelError> {
    match mode {
        ChannelMode::Exact { rho, t } => apply_exact(v, rho, t, rng),
        ChannelMode::Matrix {
            collected,
            error_packets,
        } => apply_matrix(v, collected, error_packets, rng),
    }
}

/// Exactly `rho` erasures and `t` errors.
///
/// `V'` is a random `(dim V - ρ)`-dimensional subspace of `V`; `E` is built
/// one vector at a time, rejecting vectors already in `V + E`, so that
/// `E ∩ V = {0}` and the realized `(ρ, t)` equal the requested ones.
pub fn apply_exact<R: Rng + ?Sized>(
    v: &Subspace,
    rho: usize,
    t: usize,
    rng: &mut R,
) -> Result<ChannelOutcome, ChannelError> {
    let dim = v.dim();
    if rho > dim {
        return Err(ChannelError::TooManyErasures { rho, dim });
    }
    let room = v.ambient_dim() - dim;
    if t > room {
        return Err(ChannelError::TooManyErrors { t, room });
    }
    let kept = v.random_subspace(dim - rho, rng)?;
    let f = v.field();
    let n = v.ambient_dim();
    let mut span = v.clone();
    let mut errors = MatrixFq::zeros(f, 0, n);
    for _ in 0..t {
        let mut accepted = None;
        for _ in 0..ERROR_SAMPLING_ATTEMPTS {
            let candidate = MatrixFq::random(f, 1, n, rng);
            if !span.contains(candidate.row(0)) {
                accepted = Some(candidate);
                break;
            }
        }
        let e = accepted.ok_or(ChannelError::SamplingExhausted(ERROR_SAMPLING_ATTEMPTS))?;
        span = span.sum(&Subspace::row_space(&e))?;
        errors = errors.vstack(&e)?;
    }
    let received = kept.sum(&Subspace::row_space(&errors))?;
    let outcome = ChannelOutcome::from_spaces(v.clone(), received)?;
    debug_assert_eq!((outcome.rho, outcome.t), (rho, t));
    Ok(outcome)
}

/// Packet-level channel `Y = A·B + D·Z` with uniform `A`, `D`, `Z`.
pub fn apply_matrix<R: Rng + ?Sized>(
    v: &Subspace,
    collected: usize,
    error_packets: usize,
    rng: &mut R,
) -> Result<ChannelOutcome, ChannelError> {
    let f = v.field();
    let a = MatrixFq::random(f, collected, v.dim(), rng);
    let z = MatrixFq::random(f, error_packets, v.ambient_dim(), rng);
    let d = MatrixFq::random(f, collected, error_packets, rng);
    let y = a.mul(v.basis())?.add(&d.mul(&z)?)?;
    ChannelOutcome::from_spaces(v.clone(), Subspace::row_space(&y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_field::PrimeField;
    use crate::rng::rng_from_seed;

    const F2: PrimeField = PrimeField::binary();

    fn v7() -> Subspace {
        let mut rng = rng_from_seed(1);
        Subspace::random(F2, 11, 7, &mut rng).unwrap()
    }

    #[test]
    fn exact_examples() {
        let v = v7();
        let mut rng = rng_from_seed(2);
        let o = apply_exact(&v, 0, 0, &mut rng).unwrap();
        assert_eq!(o.received, v);

        let o = apply_exact(&v, 2, 2, &mut rng).unwrap();
        assert_eq!(o.received.dim(), 7);
        assert_eq!(v.distance(&o.received).unwrap(), 4);

        let o = apply_exact(&v, 2, 1, &mut rng).unwrap();
        assert_eq!(o.received.dim(), 6);
        assert_eq!(v.distance(&o.received).unwrap(), 3);
    }

    #[test]
    fn exact_bounds() {
        let v = v7();
        let mut rng = rng_from_seed(3);
        assert!(matches!(
            apply_exact(&v, 8, 0, &mut rng),
            Err(ChannelError::TooManyErasures { .. })
        ));
        assert!(matches!(
            apply_exact(&v, 0, 5, &mut rng),
            Err(ChannelError::TooManyErrors { .. })
        ));
        // filling the ambient completely is allowed
        let o = apply_exact(&v, 0, 4, &mut rng).unwrap();
        assert_eq!(o.received.dim(), 11);
    }

    #[test]
    fn matrix_examples() {
        let v = v7();
        let mut rng = rng_from_seed(4);
        for _ in 0..50 {
            let o = apply_matrix(&v, 9, 0, &mut rng).unwrap();
            assert_eq!(o.t, 0);
            if o.received.dim() == 7 {
                assert_eq!(o.received, v);
            }
            let o = apply_matrix(&v, 5, 0, &mut rng).unwrap();
            assert_eq!(o.t, 0);
            assert!(o.rho >= 2);
            let o = apply_matrix(&v, 9, 2, &mut rng).unwrap();
            assert!(o.t <= 2 && o.rho <= 7);
        }
    }

    #[test]
    fn seeded_apply_is_deterministic() {
        let v = v7();
        let spec = ChannelSpec {
            mode: ChannelMode::Exact { rho: 1, t: 2 },
            seed: 99,
        };
        assert_eq!(apply(&v, &spec).unwrap(), apply(&v, &spec).unwrap());
    }
}
