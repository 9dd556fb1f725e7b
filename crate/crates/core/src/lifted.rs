//! Lifting a Gabidulin code into a constant-dimension subspace code.
//!
//! The lift of `X ∈ F_q^{n×m}` is the row space of `[I_n | X]`. Subspace
//! distance between lifts is twice the rank distance of the matrices, so the
//! lifted code has minimum subspace distance `2 (n - k + 1)`.

use std::sync::Arc;

use crate::finite_field::FieldParams;
use crate::gabidulin::{
    CodeError, DecodeFailure, ErasureHints, GabidulinCode, Message, RankCodeword,
};
use crate::matrix::{LinalgError, MatrixFq};
use crate::subspace::Subspace;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedCode {
    inner: GabidulinCode,
}

/// A successful subspace decode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedDecoded {
    pub message: Message,
    /// The decoded `n × m` matrix `X̂`.
    pub matrix: MatrixFq,
    /// `⟨[I_n | X̂]⟩`.
    pub subspace: Subspace,
}

/// A received subspace rewritten as a rank-metric decoding problem.
#[derive(Clone, Debug)]
pub struct Reduction {
    /// Payload rows aligned to the identity block; zero where a row is missing.
    pub received: RankCodeword,
    pub hints: ErasureHints,
}

impl LiftedCode {
    pub fn new(inner: GabidulinCode) -> Self {
        LiftedCode { inner }
    }

    pub fn inner(&self) -> &GabidulinCode {
        &self.inner
    }

    pub fn params(&self) -> &Arc<FieldParams> {
        self.inner.params()
    }

    pub fn n(&self) -> usize {
        self.inner.n()
    }

    pub fn k(&self) -> usize {
        self.inner.k()
    }

    pub fn m(&self) -> usize {
        self.inner.m()
    }

    /// `n + m`.
    pub fn ambient_dim(&self) -> usize {
        self.n() + self.m()
    }

    /// `2 d_R(inner)`.
    pub fn min_subspace_distance(&self) -> usize {
        2 * self.inner.min_rank_distance()
    }

    /// `⟨[I_n | X]⟩`.
    pub fn lift(&self, x: &MatrixFq) -> Result<Subspace, CodeError> {
        let q = self.params().base();
        if x.shape() != (self.n(), self.m()) || x.field() != q {
            return Err(CodeError::Linalg(LinalgError::ShapeMismatch {
                left: x.shape(),
                right: (self.n(), self.m()),
            }));
        }
        let basis = MatrixFq::identity(q, self.n()).hstack(x)?;
        Ok(Subspace::from_rref_unchecked(basis, (0..self.n()).collect()))
    }

    pub fn encode(&self, message: &[crate::finite_field::ExtFieldElement]) -> Result<Subspace, CodeError> {
        let x = self.inner.encode(message)?.to_matrix(self.params());
        self.lift(&x)
    }

    fn check_ambient(&self, u: &Subspace) -> Result<(), CodeError> {
        if u.ambient_dim() != self.ambient_dim() || u.field() != self.params().base() {
            return Err(CodeError::Linalg(LinalgError::AmbientMismatch {
                left: u.ambient_dim(),
                right: self.ambient_dim(),
            }));
        }
        Ok(())
    }

    /// Splits the canonical basis of `U` into rows pivoting inside the
    /// identity block, `[Â | ŷ]`, and rows pivoting in the payload,
    /// `[0 | Ê]`. Missing identity positions become row erasures:
    /// writing `r` for the payload rows placed at their pivot (zero
    /// elsewhere), a transmitted `X` satisfies `r - X = L̂ X_missing`
    /// up to errors, where `L̂` collects the non-pivot columns of `Â`
    /// with `-1` on the missing positions.
    pub fn reduce(&self, u: &Subspace) -> Result<Reduction, CodeError> {
        self.check_ambient(u)?;
        let params = self.params();
        let q = params.base();
        let n = self.n();
        let m = self.m();
        let basis = u.basis();
        let pivots = u.pivots();
        let split = pivots.iter().position(|&p| p >= n).unwrap_or(pivots.len());
        let identity_pivots = &pivots[..split];
        let missing: Vec<usize> = (0..n).filter(|c| !identity_pivots.contains(c)).collect();

        let mut r = MatrixFq::zeros(q, n, m);
        let mut l = MatrixFq::zeros(q, n, missing.len());
        for (row, &p) in identity_pivots.iter().enumerate() {
            for j in 0..m {
                r.set(p, j, basis.get(row, n + j));
            }
            for (col, &c) in missing.iter().enumerate() {
                l.set(p, col, basis.get(row, c));
            }
        }
        for (col, &c) in missing.iter().enumerate() {
            l.set(c, col, q.neg(1));
        }
        let payload_rows: Vec<usize> = (split..pivots.len()).collect();
        let payload_cols: Vec<usize> = (n..n + m).collect();
        let e_hat = basis.select_rows(&payload_rows).select_columns(&payload_cols);

        Ok(Reduction {
            received: RankCodeword::from_matrix(params, &r)?,
            hints: ErasureHints {
                row_erasures: (!missing.is_empty()).then_some(l),
                col_erasures: (e_hat.rows() > 0).then_some(e_hat),
            },
        })
    }

    /// Bounded-distance subspace decoding.
    ///
    /// Succeeds with the unique codeword `V` satisfying
    /// `2 d_S(V, U) < d_S(C)` whenever one exists, and fails otherwise.
    pub fn subspace_decode(&self, u: &Subspace) -> Result<Result<LiftedDecoded, DecodeFailure>, CodeError> {
        let reduction = self.reduce(u)?;
        let message = match self.inner.decode_bounded(&reduction.received, &reduction.hints)? {
            Ok(msg) => msg,
            Err(failure) => return Ok(Err(failure)),
        };
        let matrix = self.inner.encode(&message)?.to_matrix(self.params());
        let subspace = self.lift(&matrix)?;
        if 2 * subspace.distance(u)? >= self.min_subspace_distance() {
            return Ok(Err(DecodeFailure::RadiusExceeded));
        }
        Ok(Ok(LiftedDecoded {
            message,
            matrix,
            subspace,
        }))
    }

    /// Minimum subspace distance decoding by enumerating every codeword
    /// (test oracle). Ties yield [`DecodeFailure::Tie`].
    pub fn brute_force_subspace_decode(
        &self,
        u: &Subspace,
        cap: u128,
    ) -> Result<Result<LiftedDecoded, DecodeFailure>, CodeError> {
        self.check_ambient(u)?;
        let size = self.inner.num_codewords().unwrap_or(u128::MAX);
        if size > cap {
            return Err(CodeError::CapacityExceeded { size, cap });
        }
        let mut best: Option<(usize, LiftedDecoded)> = None;
        let mut tied = false;
        for idx in 0..size {
            let message = self.inner.message_from_index(idx);
            let matrix = self.inner.encode(&message)?.to_matrix(self.params());
            let subspace = self.lift(&matrix)?;
            let d = subspace.distance(u)?;
            match &best {
                Some((bd, _)) if d > *bd => {}
                Some((bd, _)) if d == *bd => tied = true,
                _ => {
                    best = Some((
                        d,
                        LiftedDecoded {
                            message,
                            matrix,
                            subspace,
                        },
                    ));
                    tied = false;
                }
            }
        }
        Ok(match best {
            Some((_, dec)) if !tied => Ok(dec),
            _ => Err(DecodeFailure::Tie),
        })
    }
}
