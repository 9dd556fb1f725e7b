//! Subspaces of `W = F_q^N` held in canonical form.
//!
//! A [`Subspace`] stores the reduced row echelon basis of its row space with
//! zero rows removed. RREF is canonical, so two subspaces are equal exactly
//! when their stored bases are entry-identical and derived `PartialEq` is
//! subspace equality.


use rand::Rng;

use crate::finite_field::PrimeField;
use crate::matrix::{LinalgError, MatrixFq};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    basis: MatrixFq,
    pivots: Vec<usize>,
}

impl Subspace {
    /// The row space of `m`, as a subspace of `F_q^{m.cols()}`.
    pub fn row_space(m: &MatrixFq) -> Self {
        let (basis, pivots) = m.rref();
        Subspace { basis, pivots }
    }

    /// The row space of `m` with an explicit ambient dimension check.
    pub fn row_space_in(m: &MatrixFq, ambient_dim: usize) -> Result<Self, LinalgError> {
        if m.cols() != ambient_dim {
            return Err(LinalgError::AmbientMismatch {
                left: m.cols(),
                right: ambient_dim,
            });
        }
        Ok(Self::row_space(m))
    }

    pub fn zero(field: PrimeField, ambient_dim: usize) -> Self {
        Subspace {
            basis: MatrixFq::zeros(field, 0, ambient_dim),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: PrimeField, ambient_dim: usize) -> Self {
        Subspace {
            basis: MatrixFq::identity(field, ambient_dim),
            pivots: (0..ambient_dim).collect(),
        }
    }

    /// Wraps a matrix that is already in RREF without zero rows.
    pub(crate) fn from_rref_unchecked(basis: MatrixFq, pivots: Vec<usize>) -> Self {
        debug_assert_eq!(Self::row_space(&basis).basis, basis);
        Subspace { basis, pivots }
    }

    pub fn field(&self) -> PrimeField {
        self.basis.field()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    /// The canonical basis.
    pub fn basis(&self) -> &MatrixFq {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    fn check_ambient(&self, other: &Self) -> Result<(), LinalgError> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(LinalgError::AmbientMismatch {
                left: self.ambient_dim(),
                right: other.ambient_dim(),
            });
        }
        if self.field() != other.field() {
            return Err(LinalgError::FieldMismatch {
                left: self.field().order(),
                right: other.field().order(),
            });
        }
        Ok(())
    }

    /// `V + U`.
    pub fn sum(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_ambient(other)?;
        Ok(Self::row_space(&self.basis.vstack(&other.basis)?))
    }

    /// `V ∩ U` by Zassenhaus block elimination: the RREF of
    /// `[[A, A], [B, 0]]` has its rows with a zero left half spanning the
    /// intersection in their right half.
    pub fn intersection(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_ambient(other)?;
        let n = self.ambient_dim();
        let f = self.field();
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(f, n));
        }
        let top = self.basis.hstack(&self.basis)?;
        let bottom = other.basis.hstack(&MatrixFq::zeros(f, other.dim(), n))?;
        let (r, pivots) = top.vstack(&bottom)?.rref();
        let rows: Vec<usize> = pivots
            .iter()
            .enumerate()
            .filter(|(_, &p)| p >= n)
            .map(|(i, _)| i)
            .collect();
        let right: Vec<usize> = (n..2 * n).collect();
        let block = r.select_rows(&rows).select_columns(&right);
        Ok(Self::row_space(&block))
    }

    pub fn is_direct_sum(&self, other: &Self) -> Result<bool, LinalgError> {
        Ok(self.intersection(other)?.is_zero())
    }

    /// Subspace distance `dim V + dim U - 2 dim(V ∩ U)`.
    pub fn distance(&self, other: &Self) -> Result<usize, LinalgError> {
        let inter = self.intersection(other)?.dim();
        Ok(self.dim() + other.dim() - 2 * inter)
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        if v.len() != self.ambient_dim() {
            return false;
        }
        // reduce v against the pivots; membership iff the residue vanishes
        let f = self.field();
        let mut residue = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            let c = residue[p];
            if c != 0 {
                for (x, &b) in residue.iter_mut().zip(self.basis.row(i)) {
                    *x = f.sub(*x, f.mul(c, b));
                }
            }
        }
        residue.iter().all(|&x| x == 0)
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.ambient_dim() == other.ambient_dim()
            && (0..self.dim()).all(|i| other.contains(self.basis.row(i)))
    }

    /// The subspace of all vectors of `F_q^ambient` vanishing on the given
    /// coordinates (1-based).
    pub fn coordinate_zero_subspace(
        field: PrimeField,
        ambient_dim: usize,
        zero_coords: &[usize],
    ) -> Result<Self, LinalgError> {
        let mut zeroed = vec![false; ambient_dim];
        for &c in zero_coords {
            if c == 0 || c > ambient_dim {
                return Err(LinalgError::CoordinateOutOfRange {
                    index: c,
                    ambient: ambient_dim,
                });
            }
            zeroed[c - 1] = true;
        }
        let free: Vec<usize> = (0..ambient_dim).filter(|&c| !zeroed[c]).collect();
        let mut basis = MatrixFq::zeros(field, free.len(), ambient_dim);
        for (i, &c) in free.iter().enumerate() {
            basis.set(i, c, 1);
        }
        Ok(Subspace {
            basis,
            pivots: free,
        })
    }

    /// `self ∩ {x : x_c = 0 for c in coords}` (0-based coordinates), computed
    /// by one Gauss-Jordan pass that eliminates the constrained columns first.
    pub fn vanishing_on(&self, coords: &[usize]) -> Self {
        let n = self.ambient_dim();
        let mut constrained = vec![false; n];
        for &c in coords {
            constrained[c] = true;
        }
        let mut order: Vec<usize> = (0..n).filter(|&c| constrained[c]).collect();
        order.extend((0..n).filter(|&c| !constrained[c]));
        let mut m = self.basis.clone();
        let pivots = m.rref_in_order(&order);
        let first_free_pivot = pivots
            .iter()
            .position(|p| !constrained[*p])
            .unwrap_or(pivots.len());
        let rows: Vec<usize> = (first_free_pivot..pivots.len()).collect();
        Self::row_space(&m.select_rows(&rows))
    }

    /// Drops the given coordinates (0-based), i.e. projects onto the rest.
    pub fn delete_coordinates(&self, coords: &[usize]) -> Self {
        let keep: Vec<usize> = (0..self.ambient_dim()).filter(|c| !coords.contains(c)).collect();
        Self::row_space(&self.basis.select_columns(&keep))
    }

    /// Places this subspace into `F_q^ambient_dim`, sending coordinate `i`
    /// to `positions[i]` and zero-filling the rest.
    pub fn embed(&self, ambient_dim: usize, positions: &[usize]) -> Self {
        assert_eq!(positions.len(), self.ambient_dim());
        let mut m = MatrixFq::zeros(self.field(), self.dim(), ambient_dim);
        for r in 0..self.dim() {
            for (c, &p) in positions.iter().enumerate() {
                m.set(r, p, self.basis.get(r, c));
            }
        }
        Self::row_space(&m)
    }

    /// A random subspace of the given dimension: a uniform `dim × N` matrix
    /// conditioned on full rank, canonicalized.
    pub fn random<R: Rng + ?Sized>(
        field: PrimeField,
        ambient_dim: usize,
        dim: usize,
        rng: &mut R,
    ) -> Result<Self, LinalgError> {
        if dim > ambient_dim {
            return Err(LinalgError::DimensionTooLarge {
                dim,
                limit: ambient_dim,
            });
        }
        Ok(Self::row_space(&MatrixFq::random_full_row_rank(
            field,
            dim,
            ambient_dim,
            rng,
        )))
    }

    /// A random `dim`-dimensional subspace of `self`, spanned by a full-rank
    /// random combination of the basis.
    pub fn random_subspace<R: Rng + ?Sized>(&self, dim: usize, rng: &mut R) -> Result<Self, LinalgError> {
        if dim > self.dim() {
            return Err(LinalgError::DimensionTooLarge {
                dim,
                limit: self.dim(),
            });
        }
        let a = MatrixFq::random_full_row_rank(self.field(), dim, self.dim(), rng);
        Ok(Self::row_space(&a.mul(&self.basis)?))
    }

    /// Fixture dump: a header line `ambient=N q=Q dim=D`, then one basis row
    /// per line as digits without separators (space-separated when q > 10).
    pub fn to_dump(&self) -> String {
        let mut s = format!(
            "ambient={} q={} dim={}\n",
            self.ambient_dim(),
            self.field().order(),
            self.dim()
        );
        let sep = if self.field().order() > 10 { " " } else { "" };
        for r in 0..self.dim() {
            let row: Vec<String> = self.basis.row(r).iter().map(u32::to_string).collect();
            s.push_str(&row.join(sep));
            s.push('\n');
        }
        s
    }

    /// Parses [`to_dump`](Self::to_dump) output. The rows need not be in
    /// canonical form; the result is canonicalized.
    pub fn from_dump(text: &str) -> Result<Self, LinalgError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let err = |line: usize, message: &str| LinalgError::Dump {
            line: line + 1,
            message: message.to_string(),
        };
        let (hline, header) = lines.next().ok_or_else(|| err(0, "missing header"))?;
        let mut ambient = None;
        let mut q = None;
        let mut dim = None;
        for token in header.split_whitespace() {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| err(hline, "expected key=value"))?;
            let value: usize = value.parse().map_err(|_| err(hline, "bad number"))?;
            match key {
                "ambient" => ambient = Some(value),
                "q" => q = Some(value),
                "dim" => dim = Some(value),
                _ => return Err(err(hline, "unknown header key")),
            }
        }
        let ambient = ambient.ok_or_else(|| err(hline, "missing ambient"))?;
        let q = q.ok_or_else(|| err(hline, "missing q"))?;
        let field = PrimeField::new(q as u32).map_err(|e| err(hline, &e.to_string()))?;
        let mut rows = Vec::new();
        for (ln, line) in lines {
            let valid = |v: Option<u32>| v.filter(|&d| d < q as u32);
            let row: Vec<u32> = if q > 10 {
                line.split_whitespace().map(|t| valid(t.parse().ok())).collect::<Option<_>>()
            } else {
                line.trim().chars().map(|c| valid(c.to_digit(10))).collect::<Option<_>>()
            }
            .ok_or_else(|| err(ln, "invalid symbol"))?;
            if row.len() != ambient {
                return Err(err(ln, "row length differs from ambient"));
            }
            rows.push(row);
        }
        if let Some(d) = dim {
            if d != rows.len() {
                return Err(err(hline, "dim does not match row count"));
            }
        }
        let m = MatrixFq::from_rows(field, ambient, &rows)?;
        Ok(Self::row_space(&m))
    }
}

/// Free-function form of [`Subspace::distance`].
pub fn subspace_distance(v: &Subspace, u: &Subspace) -> Result<usize, LinalgError> {
    v.distance(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    const F2: PrimeField = PrimeField::binary();

    fn span(rows: &[&str]) -> Subspace {
        Subspace::row_space(&MatrixFq::from_digit_rows(F2, rows).unwrap())
    }

    #[test]
    fn row_space_examples() {
        let z = Subspace::row_space(&MatrixFq::zeros(F2, 3, 5));
        assert_eq!(z.dim(), 0);
        assert_eq!(z, Subspace::zero(F2, 5));
        assert_eq!(Subspace::row_space(&MatrixFq::identity(F2, 4)).dim(), 4);
        assert_eq!(span(&["1100", "0110", "1010"]).dim(), 2);
        assert!(Subspace::row_space_in(&MatrixFq::zeros(F2, 1, 3), 4).is_err());
    }

    #[test]
    fn sum_and_intersection_examples() {
        let a = span(&["100"]);
        let b = span(&["010"]);
        assert_eq!(a.sum(&b).unwrap(), span(&["100", "010"]));
        assert_eq!(a.sum(&Subspace::zero(F2, 3)).unwrap(), a);
        assert_eq!(a.sum(&a).unwrap(), a);

        let x = span(&["100", "010"]);
        let y = span(&["010", "001"]);
        assert_eq!(x.intersection(&y).unwrap(), span(&["010"]));
        assert_eq!(x.intersection(&x).unwrap(), x);
        assert!(x.intersection(&Subspace::zero(F2, 3)).unwrap().is_zero());
        assert!(matches!(
            x.sum(&Subspace::zero(F2, 4)),
            Err(LinalgError::AmbientMismatch { .. })
        ));
    }

    #[test]
    fn direct_sum_examples() {
        let v = span(&["100"]);
        assert!(v.is_direct_sum(&Subspace::zero(F2, 3)).unwrap());
        assert!(!v.is_direct_sum(&v).unwrap());
        assert!(v.is_direct_sum(&span(&["110"])).unwrap());
    }

    #[test]
    fn distance_examples() {
        let v = span(&["1000", "0100"]);
        assert_eq!(v.distance(&v).unwrap(), 0);
        assert_eq!(v.distance(&span(&["0010", "0001"])).unwrap(), 4);
        assert_eq!(v.distance(&span(&["1000", "0010"])).unwrap(), 2);
    }

    #[test]
    fn coordinate_zero_examples() {
        assert_eq!(
            Subspace::coordinate_zero_subspace(F2, 3, &[]).unwrap(),
            Subspace::full(F2, 3)
        );
        assert!(Subspace::coordinate_zero_subspace(F2, 3, &[1, 2, 3])
            .unwrap()
            .is_zero());
        assert_eq!(
            Subspace::coordinate_zero_subspace(F2, 3, &[1]).unwrap(),
            span(&["010", "001"])
        );
        assert!(matches!(
            Subspace::coordinate_zero_subspace(F2, 3, &[4]),
            Err(LinalgError::CoordinateOutOfRange { .. })
        ));
        assert!(Subspace::coordinate_zero_subspace(F2, 3, &[0]).is_err());
    }

    #[test]
    fn vanishing_on_matches_intersection() {
        let u = span(&["11010", "01101", "10011"]);
        let coords = [0usize, 2];
        let z = Subspace::coordinate_zero_subspace(F2, 5, &[1, 3]).unwrap();
        assert_eq!(u.vanishing_on(&coords), u.intersection(&z).unwrap());
    }

    #[test]
    fn dump_round_trip() {
        let u = span(&["11010", "01101"]);
        let text = u.to_dump();
        assert!(text.starts_with("ambient=5 q=2 dim=2\n"));
        assert_eq!(Subspace::from_dump(&text).unwrap(), u);
        assert!(Subspace::from_dump("ambient=3 q=2\n1102\n").is_err());
        assert!(Subspace::from_dump("ambient=3 q=2\n11\n").is_err());
        let z = Subspace::zero(F2, 4);
        assert_eq!(Subspace::from_dump(&z.to_dump()).unwrap(), z);
    }

    #[test]
    fn embed_then_delete_is_identity() {
        let u = span(&["1101", "0111"]);
        let e = u.embed(7, &[0, 1, 5, 6]);
        assert_eq!(e.dim(), 2);
        assert_eq!(e.delete_coordinates(&[2, 3, 4]), u);
    }
}
