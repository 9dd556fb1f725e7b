//! Gabidulin codes: maximum-rank-distance codes built by evaluating
//! linearized polynomials at `F_q`-linearly independent points of `F_{q^m}`.
//!
//! A codeword is a vector of `n` extension-field symbols; expanding every
//! symbol into its `m` coordinates gives the `n × m` matrix over `F_q` that
//! the rank metric (and lifting) operates on.
//!
//! # Decoding
//!
//! [`GabidulinCode::decode_bounded`] is an errors-and-erasures decoder. The
//! error is modeled as `E = L·A + B·Ê + E'` where
//!
//! * `L` (`n × μ` over `F_q`, the *row erasures*) is known: it marks the
//!   directions in which whole codeword rows are unknown,
//! * `Ê` (`δ × m` over `F_q`, the *column erasures*) is known: the error
//!   values partly lie in its row space,
//! * `E'` is an unknown residual error of rank `τ`.
//!
//! Row erasures are removed by combining positions with the left kernel of
//! `L`, which yields a Gabidulin code of length `n - μ` on new evaluation
//! points. Column erasures are removed by applying the subspace polynomial
//! whose roots are the row space of `Ê`. What remains is an errors-only
//! problem solved by linearized interpolation: find `V` (q-degree `≤ t`)
//! and `N` with `V(y_i) = N(g_i)`; then `N = V ∘ h` and the message
//! polynomial follows by two exact left divisions. Decoding succeeds
//! whenever `2τ + μ + δ ≤ d - 1`.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::finite_field::{ExtFieldElement, FieldError, FieldParams};
use crate::matrix::{LinalgError, MatrixFq};

/// Default cap on the number of codewords the brute-force oracles enumerate.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("invalid code parameters: {0}")]
    Parameters(String),
    #[error("expected {expected} symbols, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("malformed erasure side information: {0}")]
    MalformedHints(String),
    #[error("enumeration of {size} codewords exceeds cap {cap}")]
    CapacityExceeded { size: u128, cap: u128 },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Why a bounded-distance decoder gave up.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DecodeFailure {
    /// No codeword lies within the decoding radius.
    RadiusExceeded,
    /// Several codewords are equally close (brute-force oracles only).
    Tie,
    /// The input could not be interpreted as a received word of this code.
    Malformed,
}

impl DecodeFailure {
    pub fn code(self) -> &'static str {
        match self {
            DecodeFailure::RadiusExceeded => "radius",
            DecodeFailure::Tie => "tie",
            DecodeFailure::Malformed => "malformed",
        }
    }
}

impl fmt::Display for DecodeFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// A linearized polynomial `Σ c_i x^{q^i}` over `F_{q^m}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearizedPoly {
    params: Arc<FieldParams>,
    /// `coeffs[i]` multiplies `x^{q^i}`; no trailing zeros.
    coeffs: Vec<ExtFieldElement>,
}

impl LinearizedPoly {
    pub fn new(params: &Arc<FieldParams>, mut coeffs: Vec<ExtFieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        LinearizedPoly {
            params: Arc::clone(params),
            coeffs,
        }
    }

    pub fn zero(params: &Arc<FieldParams>) -> Self {
        Self::new(params, Vec::new())
    }

    /// The identity map `x`.
    pub fn x(params: &Arc<FieldParams>) -> Self {
        Self::new(params, vec![params.one()])
    }

    pub fn coeffs(&self) -> &[ExtFieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The q-degree, `None` for the zero polynomial.
    pub fn q_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn coeff(&self, i: usize) -> ExtFieldElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.params.zero())
    }

    pub fn eval(&self, x: &ExtFieldElement) -> ExtFieldElement {
        let mut acc = self.params.zero();
        let mut power = x.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                power = power.frobenius(1);
            }
            if !c.is_zero() {
                acc = &acc + &(c * &power);
            }
        }
        acc
    }

    /// Composition `self ∘ inner`, i.e. `x ↦ self(inner(x))`.
    pub fn compose(&self, inner: &Self) -> Self {
        if self.is_zero() || inner.is_zero() {
            return Self::zero(&self.params);
        }
        let len = self.coeffs.len() + inner.coeffs.len() - 1;
        let mut out = vec![self.params.zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in inner.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * &b.frobenius(i));
                }
            }
        }
        Self::new(&self.params, out)
    }

    /// Exact left division: the `f` with `self = divisor ∘ f`, or `None`
    /// when `divisor` is zero or does not divide `self` on the left.
    pub fn left_divide(&self, divisor: &Self) -> Option<Self> {
        let a = divisor.q_degree()?;
        let Some(dn) = self.q_degree() else {
            return Some(Self::zero(&self.params));
        };
        if dn < a {
            return None;
        }
        let lead_inv = divisor.coeffs[a].inverse().ok()?;
        let deg_f = dn - a;
        let mut f = vec![self.params.zero(); deg_f + 1];
        // coefficient of x^{q^{a+j}} is Σ_i d_i f_{a+j-i}^{q^i}; solve from the top
        for j in (0..=deg_f).rev() {
            let mut rhs = self.coeff(a + j);
            for i in 0..a {
                let idx = a + j - i;
                if idx <= deg_f {
                    let di = &divisor.coeffs[i];
                    if !di.is_zero() {
                        rhs = &rhs - &(di * &f[idx].frobenius(i));
                    }
                }
            }
            f[j] = (&rhs * &lead_inv).frobenius_inv(a);
        }
        let f = Self::new(&self.params, f);
        (divisor.compose(&f) == *self).then_some(f)
    }

    /// The monic subspace polynomial whose root set is the `F_q`-span of
    /// `roots`, which must be linearly independent over `F_q`.
    pub fn subspace_polynomial(params: &Arc<FieldParams>, roots: &[ExtFieldElement]) -> Option<Self> {
        let q = params.q() as u64;
        let mut p = Self::x(params);
        for r in roots {
            let c = p.eval(r);
            if c.is_zero() {
                return None;
            }
            // (x^q - c^{q-1} x) ∘ p vanishes on span(previous roots, r)
            let step = Self::new(params, vec![-&c.pow(q - 1), params.one()]);
            p = step.compose(&p);
        }
        Some(p)
    }
}

/// A codeword (or received word) of a Gabidulin code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankCodeword {
    symbols: Vec<ExtFieldElement>,
}

impl RankCodeword {
    pub fn new(symbols: Vec<ExtFieldElement>) -> Self {
        RankCodeword { symbols }
    }

    pub fn symbols(&self) -> &[ExtFieldElement] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// The `n × m` matrix whose row `i` is the coordinate vector of symbol `i`.
    pub fn to_matrix(&self, params: &FieldParams) -> MatrixFq {
        let rows: Vec<Vec<u32>> = self.symbols.iter().map(|s| s.coords().to_vec()).collect();
        MatrixFq::from_rows(params.base(), params.m(), &rows).expect("symbols are well-formed")
    }

    pub fn from_matrix(params: &Arc<FieldParams>, x: &MatrixFq) -> Result<Self, CodeError> {
        if x.cols() != params.m() || x.field() != params.base() {
            return Err(CodeError::Parameters(format!(
                "matrix is {}x{} over F_{}, expected m = {} columns over F_{}",
                x.rows(),
                x.cols(),
                x.field().order(),
                params.m(),
                params.q()
            )));
        }
        let symbols = (0..x.rows())
            .map(|r| params.element(x.row(r).to_vec()))
            .collect::<Result<_, _>>()?;
        Ok(RankCodeword { symbols })
    }
}

/// Erasure side information for [`GabidulinCode::decode_bounded`].
#[derive(Clone, Debug, Default)]
pub struct ErasureHints {
    /// `n × μ` matrix over `F_q` of full column rank (row erasures).
    pub row_erasures: Option<MatrixFq>,
    /// `δ × m` matrix over `F_q` of full row rank (column erasures).
    pub col_erasures: Option<MatrixFq>,
}

impl ErasureHints {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn mu(&self) -> usize {
        self.row_erasures.as_ref().map_or(0, |l| l.cols())
    }

    pub fn delta(&self) -> usize {
        self.col_erasures.as_ref().map_or(0, |e| e.rows())
    }
}

pub type Message = Vec<ExtFieldElement>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GabidulinCode {
    params: Arc<FieldParams>,
    n: usize,
    k: usize,
    eval_points: Vec<ExtFieldElement>,
}

impl GabidulinCode {
    /// Code with the default evaluation points `1, α, …, α^{n-1}`.
    pub fn new(params: &Arc<FieldParams>, n: usize, k: usize) -> Result<Self, CodeError> {
        if n > params.m() {
            return Err(CodeError::Parameters(format!(
                "need n <= m, got n = {n}, m = {}",
                params.m()
            )));
        }
        let points = (0..n).map(|i| params.basis_element(i)).collect();
        Self::with_eval_points(params, k, points)
    }

    pub fn with_eval_points(
        params: &Arc<FieldParams>,
        k: usize,
        eval_points: Vec<ExtFieldElement>,
    ) -> Result<Self, CodeError> {
        let n = eval_points.len();
        if k == 0 || k > n || n > params.m() {
            return Err(CodeError::Parameters(format!(
                "need 1 <= k <= n <= m, got k = {k}, n = {n}, m = {}",
                params.m()
            )));
        }
        if eval_points.iter().any(|g| g.params() != params) {
            return Err(CodeError::Field(FieldError::FieldMismatch));
        }
        let points = RankCodeword::new(eval_points.clone()).to_matrix(params);
        if points.rank() != n {
            return Err(CodeError::Parameters(
                "evaluation points are not linearly independent over F_q".into(),
            ));
        }
        Ok(GabidulinCode {
            params: Arc::clone(params),
            n,
            k,
            eval_points,
        })
    }

    pub fn params(&self) -> &Arc<FieldParams> {
        &self.params
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.params.m()
    }

    pub fn eval_points(&self) -> &[ExtFieldElement] {
        &self.eval_points
    }

    /// `d_R = n - k + 1`.
    pub fn min_rank_distance(&self) -> usize {
        self.n - self.k + 1
    }

    /// `q^{m k}`, when it fits.
    pub fn num_codewords(&self) -> Option<u128> {
        (self.params.q() as u128).checked_pow((self.m() * self.k) as u32)
    }

    fn message_poly(&self, message: &[ExtFieldElement]) -> Result<LinearizedPoly, CodeError> {
        if message.len() != self.k {
            return Err(CodeError::WrongLength {
                expected: self.k,
                got: message.len(),
            });
        }
        if message.iter().any(|u| u.params() != &self.params) {
            return Err(CodeError::Field(FieldError::FieldMismatch));
        }
        Ok(LinearizedPoly::new(&self.params, message.to_vec()))
    }

    /// Evaluates `f = Σ u_j x^{q^j}` at the evaluation points.
    pub fn encode(&self, message: &[ExtFieldElement]) -> Result<RankCodeword, CodeError> {
        let f = self.message_poly(message)?;
        Ok(RankCodeword::new(
            self.eval_points.iter().map(|g| f.eval(g)).collect(),
        ))
    }

    pub fn random_message<R: Rng + ?Sized>(&self, rng: &mut R) -> Message {
        (0..self.k).map(|_| self.params.random(rng)).collect()
    }

    /// The message with the given index in `0..q^{mk}`.
    pub fn message_from_index(&self, mut index: u128) -> Message {
        let order = self.params.order().expect("field order fits in u128");
        (0..self.k)
            .map(|_| {
                let e = self.params.element_from_index(index % order);
                index /= order;
                e
            })
            .collect()
    }

    fn check_received(&self, received: &RankCodeword) -> Result<(), CodeError> {
        if received.len() != self.n {
            return Err(CodeError::WrongLength {
                expected: self.n,
                got: received.len(),
            });
        }
        if received.symbols.iter().any(|s| s.params() != &self.params) {
            return Err(CodeError::Field(FieldError::FieldMismatch));
        }
        Ok(())
    }

    fn check_hints(&self, hints: &ErasureHints) -> Result<(), CodeError> {
        let q = self.params.base();
        if let Some(l) = &hints.row_erasures {
            if l.field() != q || l.rows() != self.n || l.rank() != l.cols() {
                return Err(CodeError::MalformedHints(format!(
                    "row erasures must be an n x mu matrix of full column rank over F_{} (n = {})",
                    q.order(),
                    self.n
                )));
            }
        }
        if let Some(e) = &hints.col_erasures {
            if e.field() != q || e.cols() != self.m() || e.rank() != e.rows() {
                return Err(CodeError::MalformedHints(format!(
                    "column erasures must be a delta x m matrix of full row rank over F_{} (m = {})",
                    q.order(),
                    self.m()
                )));
            }
        }
        Ok(())
    }

    /// Errors-only bounded-distance decoding.
    pub fn decode(&self, received: &RankCodeword) -> Result<Result<Message, DecodeFailure>, CodeError> {
        self.decode_bounded(received, &ErasureHints::none())
    }

    /// Bounded-distance errors-and-erasures decoding.
    ///
    /// Returns the message of the unique codeword `c` whose residual error
    /// rank `τ` (the rank of `received - c` left over after discounting the
    /// supplied erasures) satisfies `2τ + μ + δ ≤ d_R - 1`, or a
    /// [`DecodeFailure`] when there is none. Without hints `τ` is simply
    /// `rank(received - c)`. Malformed inputs are reported as `Err`.
    pub fn decode_bounded(
        &self,
        received: &RankCodeword,
        hints: &ErasureHints,
    ) -> Result<Result<Message, DecodeFailure>, CodeError> {
        self.check_received(received)?;
        self.check_hints(hints)?;
        let params = &self.params;
        let mu = hints.mu();
        let delta = hints.delta();
        let n_eff = self.n - mu;
        let Some(slack) = n_eff.checked_sub(self.k + delta) else {
            return Ok(Err(DecodeFailure::RadiusExceeded));
        };
        let t = slack / 2;

        // Row erasures: combine positions with the left kernel of L.
        let (points, ys): (Vec<ExtFieldElement>, Vec<ExtFieldElement>) = match &hints.row_erasures {
            Some(l) if mu > 0 => {
                let w = l.transpose().kernel();
                debug_assert_eq!(w.rows(), n_eff);
                (0..w.rows())
                    .map(|r| {
                        let mut g = params.zero();
                        let mut y = params.zero();
                        for (i, &c) in w.row(r).iter().enumerate() {
                            if c != 0 {
                                g = &g + &self.eval_points[i].scale(c);
                                y = &y + &received.symbols[i].scale(c);
                            }
                        }
                        (g, y)
                    })
                    .unzip()
            }
            _ => (self.eval_points.clone(), received.symbols.clone()),
        };

        // Column erasures: annihilate the known error values.
        let lambda = match &hints.col_erasures {
            Some(e) if delta > 0 => {
                let roots = RankCodeword::from_matrix(params, e)?.symbols;
                LinearizedPoly::subspace_polynomial(params, &roots)
                    .ok_or_else(|| CodeError::MalformedHints("column erasures are dependent".into()))?
            }
            _ => LinearizedPoly::x(params),
        };
        let ys: Vec<ExtFieldElement> = ys.iter().map(|y| lambda.eval(y)).collect();

        // Interpolation: V(y_i) = N(g_i), deg_q V <= t, deg_q N <= t + delta + k - 1.
        let v_len = t + 1;
        let n_len = t + delta + self.k;
        let rows: Vec<Vec<ExtFieldElement>> = ys
            .iter()
            .zip(&points)
            .map(|(y, g)| {
                let mut row = Vec::with_capacity(v_len + n_len);
                let mut yp = y.clone();
                for i in 0..v_len {
                    if i > 0 {
                        yp = yp.frobenius(1);
                    }
                    row.push(yp.clone());
                }
                let mut gp = g.clone();
                for i in 0..n_len {
                    if i > 0 {
                        gp = gp.frobenius(1);
                    }
                    row.push(-&gp);
                }
                row
            })
            .collect();
        let Some(sol) = ext_kernel_vector(params, rows, v_len + n_len) else {
            return Ok(Err(DecodeFailure::RadiusExceeded));
        };
        let v_poly = LinearizedPoly::new(params, sol[..v_len].to_vec());
        let n_poly = LinearizedPoly::new(params, sol[v_len..].to_vec());
        let Some(h) = n_poly.left_divide(&v_poly) else {
            return Ok(Err(DecodeFailure::RadiusExceeded));
        };
        let Some(f) = h.left_divide(&lambda) else {
            return Ok(Err(DecodeFailure::RadiusExceeded));
        };
        if f.q_degree().is_some_and(|d| d >= self.k) {
            return Ok(Err(DecodeFailure::RadiusExceeded));
        }
        let mut message = f.coeffs.clone();
        message.resize(self.k, params.zero());

        // Accept only if the residual error is within the guaranteed radius.
        let codeword = self.encode(&message)?;
        let tau = self.residual_rank(received, &codeword, hints)?;
        if 2 * tau + mu + delta > self.min_rank_distance() - 1 {
            return Ok(Err(DecodeFailure::RadiusExceeded));
        }
        Ok(Ok(message))
    }

    /// `rank([L, r - c; 0, Ê]) - μ - δ`: the rank of the error not explained
    /// by the erasure side information.
    pub fn residual_rank(
        &self,
        received: &RankCodeword,
        codeword: &RankCodeword,
        hints: &ErasureHints,
    ) -> Result<usize, CodeError> {
        let f = self.params.base();
        let diff = received
            .to_matrix(&self.params)
            .sub(&codeword.to_matrix(&self.params))?;
        let mu = hints.mu();
        let delta = hints.delta();
        let left = hints
            .row_erasures
            .clone()
            .unwrap_or_else(|| MatrixFq::zeros(f, self.n, 0));
        let top = left.hstack(&diff)?;
        let full = match &hints.col_erasures {
            Some(e) => MatrixFq::zeros(f, e.rows(), mu).hstack(e)?,
            None => MatrixFq::zeros(f, 0, mu + self.m()),
        };
        Ok(top.vstack(&full)?.rank() - mu - delta)
    }

    /// Minimum-rank-distance decoding by exhaustive enumeration (test oracle).
    ///
    /// Returns the message of the unique codeword nearest to `received` in
    /// rank distance, or [`DecodeFailure::Tie`] when the minimum is shared.
    pub fn brute_force_decode(
        &self,
        received: &RankCodeword,
        cap: u128,
    ) -> Result<Result<Message, DecodeFailure>, CodeError> {
        self.check_received(received)?;
        let size = self.num_codewords().unwrap_or(u128::MAX);
        if size > cap {
            return Err(CodeError::CapacityExceeded { size, cap });
        }
        let r = received.to_matrix(&self.params);
        let mut best: Option<(usize, Message)> = None;
        let mut tied = false;
        for idx in 0..size {
            let msg = self.message_from_index(idx);
            let c = self.encode(&msg)?.to_matrix(&self.params);
            let d = r.sub(&c)?.rank();
            match &best {
                Some((bd, _)) if d > *bd => {}
                Some((bd, _)) if d == *bd => tied = true,
                _ => {
                    best = Some((d, msg));
                    tied = false;
                }
            }
        }
        Ok(match best {
            Some((_, msg)) if !tied => Ok(msg),
            _ => Err(DecodeFailure::Tie),
        })
    }
}

/// A nonzero vector `x` with `A x = 0` for the given rows of `A`, if any.
fn ext_kernel_vector(
    params: &Arc<FieldParams>,
    mut rows: Vec<Vec<ExtFieldElement>>,
    cols: usize,
) -> Option<Vec<ExtFieldElement>> {
    let mut pivots = Vec::new();
    let mut lead = 0;
    for c in 0..cols {
        if lead == rows.len() {
            break;
        }
        let Some(p) = (lead..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(lead, p);
        let inv = rows[lead][c].inverse().expect("pivot is nonzero");
        rows[lead] = rows[lead].iter().map(|x| x * &inv).collect();
        let pivot_row = rows[lead].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == lead || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = &*x - &(&factor * p);
                }
            }
        }
        pivots.push(c);
        lead += 1;
    }
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut x = vec![params.zero(); cols];
    x[free] = params.one();
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = -&rows[r][free];
    }
    Some(x)
}
