//! Arithmetic in a prime field `F_q` and in its degree-`m` extension `F_{q^m}`.
//!
//! Extension elements are stored as `m` coordinates over `F_q` in the
//! polynomial basis `1, α, …, α^{m-1}`, where `α` is a root of the field
//! modulus. Every element carries a shared handle to its [`FieldParams`], so
//! mixing elements of different fields is detected instead of silently
//! producing garbage.
//!
//! The `q`-power Frobenius map is `F_q`-linear; its matrix on the polynomial
//! basis is precomputed when the field is built, which makes the repeated
//! Frobenius evaluations of linearized polynomials cheap.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

/// Largest supported extension degree.
pub const MAX_EXTENSION_DEGREE: usize = 32;

/// Largest supported base field order (exclusive).
pub const MAX_BASE_ORDER: u32 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("base field order q = {0} is not a supported prime (need prime q < 65536)")]
    UnsupportedBase(u32),
    #[error("extension degree must be in 1..={MAX_EXTENSION_DEGREE}, got {0}")]
    UnsupportedDegree(usize),
    #[error("modulus must have degree {expected}, got {got}")]
    ModulusDegree { expected: usize, got: usize },
    #[error("modulus must be monic")]
    ModulusNotMonic,
    #[error("modulus is reducible over F_{0}")]
    ModulusReducible(u32),
    #[error("coefficient {value} is not an element of F_{q}")]
    CoefficientOutOfRange { value: u32, q: u32 },
    #[error("malformed modulus list {0:?}")]
    ModulusSyntax(String),
    #[error("expected {expected} coordinates, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
}

/// The prime field `F_q`. Elements are plain integers in `[0, q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    q: u32,
}

impl PrimeField {
    pub fn new(q: u32) -> Result<Self, FieldError> {
        if !(2..MAX_BASE_ORDER).contains(&q) || !is_prime(q) {
            return Err(FieldError::UnsupportedBase(q));
        }
        Ok(PrimeField { q })
    }

    /// `F_2`.
    pub const fn binary() -> Self {
        PrimeField { q: 2 }
    }

    #[inline]
    pub fn order(self) -> u32 {
        self.q
    }

    #[inline]
    pub fn contains(self, a: u32) -> bool {
        a < self.q
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.q as u64) as u32
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        // Fermat: a^(q-2)
        let mut result = 1u32;
        let mut base = a;
        let mut e = self.q - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        Some(result)
    }
}

fn is_prime(q: u32) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Primitive polynomials over `F_2` for `m = 1..=32`, stored as the exponents
/// of their non-leading terms.
const BINARY_MODULI: [&[usize]; MAX_EXTENSION_DEGREE] = [
    &[0],
    &[1, 0],
    &[1, 0],
    &[1, 0],
    &[2, 0],
    &[1, 0],
    &[1, 0],
    &[4, 3, 2, 0],
    &[4, 0],
    &[3, 0],
    &[2, 0],
    &[6, 4, 1, 0],
    &[4, 3, 1, 0],
    &[10, 6, 1, 0],
    &[1, 0],
    &[12, 3, 1, 0],
    &[3, 0],
    &[7, 0],
    &[5, 2, 1, 0],
    &[3, 0],
    &[2, 0],
    &[1, 0],
    &[5, 0],
    &[7, 2, 1, 0],
    &[3, 0],
    &[6, 2, 1, 0],
    &[5, 2, 1, 0],
    &[3, 0],
    &[2, 0],
    &[23, 2, 1, 0],
    &[3, 0],
    &[22, 2, 1, 0],
];

/// Parameters of `F_{q^m}`: base field, extension degree and modulus.
#[derive(Clone, Debug)]
pub struct FieldParams {
    base: PrimeField,
    m: usize,
    /// Monic modulus, constant term first, length `m + 1`.
    modulus: Vec<u32>,
    /// `frobenius_images[j]` holds the coordinates of `(α^j)^q`.
    frobenius_images: Vec<Vec<u32>>,
}

impl PartialEq for FieldParams {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for FieldParams {}

impl FieldParams {
    /// Builds `F_{q^m}` from an explicit modulus (constant term first).
    ///
    /// The modulus must be monic of degree exactly `m` and irreducible; the
    /// latter is checked by trial division against every monic polynomial of
    /// degree at most `m / 2`.
    pub fn new(q: u32, m: usize, modulus: Vec<u32>) -> Result<Arc<Self>, FieldError> {
        let base = PrimeField::new(q)?;
        if m == 0 || m > MAX_EXTENSION_DEGREE {
            return Err(FieldError::UnsupportedDegree(m));
        }
        if let Some(&value) = modulus.iter().find(|&&c| !base.contains(c)) {
            return Err(FieldError::CoefficientOutOfRange { value, q });
        }
        let degree = poly::degree(&modulus).unwrap_or(0);
        if degree != m || modulus.len() != m + 1 {
            return Err(FieldError::ModulusDegree {
                expected: m,
                got: degree,
            });
        }
        if modulus[m] != 1 {
            return Err(FieldError::ModulusNotMonic);
        }
        if !poly::is_irreducible(base, &modulus) {
            return Err(FieldError::ModulusReducible(q));
        }
        let mut params = FieldParams {
            base,
            m,
            modulus,
            frobenius_images: Vec::new(),
        };
        params.frobenius_images = (0..m)
            .map(|j| {
                let mut basis = vec![0; m];
                basis[j] = 1;
                params.pow_coords(&basis, q as u64)
            })
            .collect();
        Ok(Arc::new(params))
    }

    /// Builds `F_{q^m}` with the shipped default modulus.
    pub fn with_default_modulus(q: u32, m: usize) -> Result<Arc<Self>, FieldError> {
        let modulus = Self::default_modulus(q, m)?;
        Self::new(q, m, modulus)
    }

    /// The default modulus for `(q, m)`.
    ///
    /// For `q = 2` this is the fixed table of primitive polynomials (e.g.
    /// `x^4 + x + 1` for `m = 4`). For odd primes it is the smallest monic
    /// irreducible polynomial of degree `m` in the ordering that compares
    /// coefficient lists from the constant term upwards as base-`q` digits.
    pub fn default_modulus(q: u32, m: usize) -> Result<Vec<u32>, FieldError> {
        let base = PrimeField::new(q)?;
        if m == 0 || m > MAX_EXTENSION_DEGREE {
            return Err(FieldError::UnsupportedDegree(m));
        }
        if q == 2 {
            let mut modulus = vec![0; m + 1];
            modulus[m] = 1;
            for &e in BINARY_MODULI[m - 1] {
                modulus[e] = 1;
            }
            return Ok(modulus);
        }
        let mut candidate = vec![0u32; m + 1];
        candidate[m] = 1;
        loop {
            if poly::is_irreducible(base, &candidate) {
                return Ok(candidate);
            }
            // increment the low m coefficients as a base-q counter
            let mut i = 0;
            loop {
                candidate[i] += 1;
                if candidate[i] < q {
                    break;
                }
                candidate[i] = 0;
                i += 1;
                if i == m {
                    // every monic degree-m polynomial is reducible: impossible
                    unreachable!("no irreducible polynomial of degree {m} over F_{q}");
                }
            }
        }
    }

    /// Parses a modulus written as a comma-separated coefficient list,
    /// constant term first (`"1,1,0,0,1"` is `x^4 + x + 1`).
    pub fn parse_modulus(text: &str) -> Result<Vec<u32>, FieldError> {
        text.split(',')
            .map(|s| s.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| FieldError::ModulusSyntax(text.to_string()))
    }

    pub fn q(&self) -> u32 {
        self.base.q
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn base(&self) -> PrimeField {
        self.base
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Number of field elements, when it fits in `u128`.
    pub fn order(&self) -> Option<u128> {
        (self.q() as u128).checked_pow(self.m as u32)
    }

    pub fn zero(self: &Arc<Self>) -> ExtFieldElement {
        ExtFieldElement {
            params: Arc::clone(self),
            coords: vec![0; self.m],
        }
    }

    pub fn one(self: &Arc<Self>) -> ExtFieldElement {
        let mut e = self.zero();
        e.coords[0] = 1;
        e
    }

    /// `α^i` for `i < m`: the `i`-th polynomial basis element.
    pub fn basis_element(self: &Arc<Self>, i: usize) -> ExtFieldElement {
        assert!(i < self.m, "basis index {i} out of range for m = {}", self.m);
        let mut e = self.zero();
        e.coords[i] = 1;
        e
    }

    /// Builds an element from its `m` coordinates.
    pub fn element(self: &Arc<Self>, coords: Vec<u32>) -> Result<ExtFieldElement, FieldError> {
        if coords.len() != self.m {
            return Err(FieldError::WrongLength {
                expected: self.m,
                got: coords.len(),
            });
        }
        if let Some(&value) = coords.iter().find(|&&c| !self.base.contains(c)) {
            return Err(FieldError::CoefficientOutOfRange {
                value,
                q: self.q(),
            });
        }
        Ok(ExtFieldElement {
            params: Arc::clone(self),
            coords,
        })
    }

    /// The element whose coordinates are the base-`q` digits of `index`
    /// (coordinate 0 least significant).
    pub fn element_from_index(self: &Arc<Self>, mut index: u128) -> ExtFieldElement {
        let q = self.q() as u128;
        let mut e = self.zero();
        for c in e.coords.iter_mut() {
            *c = (index % q) as u32;
            index /= q;
        }
        e
    }

    /// Iterates over all `q^m` elements in index order.
    ///
    /// # Panics
    ///
    /// Panics if `q^m` overflows `u128`.
    pub fn elements(self: &Arc<Self>) -> impl Iterator<Item = ExtFieldElement> + '_ {
        let order = self.order().expect("field too large to enumerate");
        (0..order).map(move |i| self.element_from_index(i))
    }

    /// Uniformly random element.
    pub fn random<R: rand::Rng + ?Sized>(self: &Arc<Self>, rng: &mut R) -> ExtFieldElement {
        let q = self.q();
        ExtFieldElement {
            params: Arc::clone(self),
            coords: (0..self.m).map(|_| rng.gen_range(0..q)).collect(),
        }
    }

    fn mul_coords(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let f = self.base;
        let m = self.m;
        let mut prod = vec![0u32; 2 * m - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if bj != 0 {
                    prod[i + j] = f.add(prod[i + j], f.mul(ai, bj));
                }
            }
        }
        // reduce by the monic modulus from the top
        for d in (m..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (i, &mi) in self.modulus[..m].iter().enumerate() {
                if mi != 0 {
                    let idx = d - m + i;
                    prod[idx] = f.sub(prod[idx], f.mul(c, mi));
                }
            }
        }
        prod.truncate(m);
        prod
    }

    fn pow_coords(&self, a: &[u32], mut e: u64) -> Vec<u32> {
        let mut result = vec![0; self.m];
        result[0] = 1;
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul_coords(&result, &base);
            }
            base = self.mul_coords(&base, &base);
            e >>= 1;
        }
        result
    }

    fn frobenius_once(&self, a: &[u32]) -> Vec<u32> {
        let f = self.base;
        let mut out = vec![0u32; self.m];
        for (j, &aj) in a.iter().enumerate() {
            if aj == 0 {
                continue;
            }
            for (o, &img) in out.iter_mut().zip(&self.frobenius_images[j]) {
                *o = f.add(*o, f.mul(aj, img));
            }
        }
        out
    }
}

/// An element of `F_{q^m}`.
#[derive(Clone, PartialEq, Eq)]
pub struct ExtFieldElement {
    params: Arc<FieldParams>,
    coords: Vec<u32>,
}

impl fmt::Debug for ExtFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for ExtFieldElement {
    /// Coordinates in basis order, e.g. `[1,0,1,0]` for `1 + α²`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl std::hash::Hash for ExtFieldElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl ExtFieldElement {
    pub fn params(&self) -> &Arc<FieldParams> {
        &self.params
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<u32> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0] == 1 && self.coords[1..].iter().all(|&c| c == 0)
    }

    /// Inverse of [`FieldParams::element_from_index`].
    pub fn to_index(&self) -> u128 {
        let q = self.params.q() as u128;
        self.coords
            .iter()
            .rev()
            .fold(0u128, |acc, &c| acc * q + c as u128)
    }

    fn same_field(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.params, &other.params) || self.params == other.params
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FieldError> {
        if !self.same_field(other) {
            return Err(FieldError::FieldMismatch);
        }
        let f = self.params.base;
        Ok(ExtFieldElement {
            params: Arc::clone(&self.params),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, FieldError> {
        if !self.same_field(other) {
            return Err(FieldError::FieldMismatch);
        }
        let f = self.params.base;
        Ok(ExtFieldElement {
            params: Arc::clone(&self.params),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| f.sub(a, b))
                .collect(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, FieldError> {
        if !self.same_field(other) {
            return Err(FieldError::FieldMismatch);
        }
        Ok(ExtFieldElement {
            params: Arc::clone(&self.params),
            coords: self.params.mul_coords(&self.coords, &other.coords),
        })
    }

    /// Multiplication by a base field scalar.
    pub fn scale(&self, lambda: u32) -> Self {
        let f = self.params.base;
        ExtFieldElement {
            params: Arc::clone(&self.params),
            coords: self.coords.iter().map(|&a| f.mul(a, lambda)).collect(),
        }
    }

    pub fn inverse(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let inv = poly::inverse_mod(self.params.base, &self.coords, &self.params.modulus);
        let mut coords = inv;
        coords.resize(self.params.m, 0);
        Ok(ExtFieldElement {
            params: Arc::clone(&self.params),
            coords,
        })
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.try_mul(&other.inverse()?)
    }

    /// `a^(q^i)`.
    pub fn frobenius(&self, i: usize) -> Self {
        let mut coords = self.coords.clone();
        for _ in 0..(i % self.params.m) {
            coords = self.params.frobenius_once(&coords);
        }
        ExtFieldElement {
            params: Arc::clone(&self.params),
            coords,
        }
    }

    /// Inverse of [`frobenius`](Self::frobenius): `b` with `b^(q^i) = a`.
    pub fn frobenius_inv(&self, i: usize) -> Self {
        let m = self.params.m;
        self.frobenius((m - i % m) % m)
    }

    pub fn pow(&self, e: u64) -> Self {
        ExtFieldElement {
            params: Arc::clone(&self.params),
            coords: self.params.pow_coords(&self.coords, e),
        }
    }
}

impl Add for &ExtFieldElement {
    type Output = ExtFieldElement;

    /// # Panics
    ///
    /// Panics if the operands belong to different fields; use
    /// [`ExtFieldElement::try_add`] for a fallible version.
    fn add(self, rhs: Self) -> ExtFieldElement {
        self.try_add(rhs).expect("field mismatch in addition")
    }
}

impl Sub for &ExtFieldElement {
    type Output = ExtFieldElement;

    fn sub(self, rhs: Self) -> ExtFieldElement {
        self.try_sub(rhs).expect("field mismatch in subtraction")
    }
}

impl Mul for &ExtFieldElement {
    type Output = ExtFieldElement;

    fn mul(self, rhs: Self) -> ExtFieldElement {
        self.try_mul(rhs).expect("field mismatch in multiplication")
    }
}

impl Neg for &ExtFieldElement {
    type Output = ExtFieldElement;

    fn neg(self) -> ExtFieldElement {
        let f = self.params.base;
        ExtFieldElement {
            params: Arc::clone(&self.params),
            coords: self.coords.iter().map(|&a| f.neg(a)).collect(),
        }
    }
}

/// Dense polynomials over `F_q`, constant term first.
mod poly {
    use super::PrimeField;

    pub fn degree(p: &[u32]) -> Option<usize> {
        p.iter().rposition(|&c| c != 0)
    }

    fn trim(p: &mut Vec<u32>) {
        while p.last() == Some(&0) {
            p.pop();
        }
    }

    /// Remainder of `a` modulo a nonzero `b`.
    pub fn rem(f: PrimeField, a: &[u32], b: &[u32]) -> Vec<u32> {
        divrem(f, a, b).1
    }

    pub fn divrem(f: PrimeField, a: &[u32], b: &[u32]) -> (Vec<u32>, Vec<u32>) {
        let db = degree(b).expect("division by the zero polynomial");
        let lead_inv = f.inv(b[db]).expect("nonzero leading coefficient");
        let mut r = a.to_vec();
        trim(&mut r);
        let mut quot = vec![0u32; r.len().saturating_sub(db).max(1)];
        while let Some(dr) = degree(&r) {
            if dr < db {
                break;
            }
            let c = f.mul(r[dr], lead_inv);
            let shift = dr - db;
            quot[shift] = c;
            for (i, &bi) in b[..=db].iter().enumerate() {
                r[shift + i] = f.sub(r[shift + i], f.mul(c, bi));
            }
            trim(&mut r);
        }
        trim(&mut quot);
        (quot, r)
    }

    fn mul(f: PrimeField, a: &[u32], b: &[u32]) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u32; a.len() + b.len() - 1];
        for (i, &ai) in a.iter().enumerate() {
            for (j, &bj) in b.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(ai, bj));
            }
        }
        trim(&mut out);
        out
    }

    fn sub(f: PrimeField, a: &[u32], b: &[u32]) -> Vec<u32> {
        let n = a.len().max(b.len());
        let mut out: Vec<u32> = (0..n)
            .map(|i| f.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
            .collect();
        trim(&mut out);
        out
    }

    /// Inverse of `a` modulo the irreducible `modulus`, by extended Euclid.
    pub fn inverse_mod(f: PrimeField, a: &[u32], modulus: &[u32]) -> Vec<u32> {
        let (mut r0, mut r1) = (modulus.to_vec(), a.to_vec());
        trim(&mut r0);
        trim(&mut r1);
        let (mut s0, mut s1) = (Vec::<u32>::new(), vec![1u32]);
        while degree(&r1).is_some() {
            let (quot, rem) = divrem(f, &r0, &r1);
            let s2 = sub(f, &s0, &mul(f, &quot, &s1));
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant since the modulus is irreducible
        let c_inv = f.inv(r0[0]).expect("gcd is a unit");
        s0.iter().map(|&c| f.mul(c, c_inv)).collect()
    }

    /// Trial division by every monic polynomial of degree `1..=deg/2`.
    pub fn is_irreducible(f: PrimeField, p: &[u32]) -> bool {
        let Some(d) = degree(p) else {
            return false;
        };
        let q = f.order() as u64;
        for dd in 1..=d / 2 {
            let count = q.pow(dd as u32);
            let mut divisor = vec![0u32; dd + 1];
            divisor[dd] = 1;
            for idx in 0..count {
                let mut x = idx;
                for c in divisor.iter_mut().take(dd) {
                    *c = (x % q) as u32;
                    x /= q;
                }
                if degree(&rem(f, p, &divisor)).is_none() {
                    return false;
                }
            }
        }
        true
    }
}
