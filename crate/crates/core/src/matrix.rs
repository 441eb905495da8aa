//! Dense matrices over the exact rationals.

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix dimensions must be positive")]
    Empty,
    #[error("rows have unequal lengths")]
    Ragged,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
}

/// A `rows × cols` matrix of [`Scalar`]s stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        ExactMatrix {
            rows,
            cols,
            entries: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, Scalar::one())
    }

    /// `c · I`.
    pub fn scalar(n: usize, c: Scalar) -> Self {
        let mut m = Self::zeros(n, n);
        if !c.is_zero() {
            for i in 0..n {
                m.entries[i * n + i] = c.clone();
            }
        }
        m
    }

    pub fn diag(values: &[Scalar]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, v) in values.iter().enumerate() {
            m.entries[i * n + i] = v.clone();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        ExactMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self, MatrixError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if nrows == 0 || ncols == 0 {
            return Err(MatrixError::Empty);
        }
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(MatrixError::Ragged);
        }
        Ok(ExactMatrix {
            rows: nrows,
            cols: ncols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor from small integers.
    pub fn from_i64_rows<const C: usize>(rows: &[[i64; C]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect())
                .collect(),
        )
        .expect("non-empty rectangular literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Scalar) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    /// Returns `c` if the matrix equals `c · I`.
    pub fn as_scalar(&self) -> Option<Scalar> {
        if !self.is_square() {
            return None;
        }
        let c = self.get(0, 0).clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = self.get(i, j);
                let ok = if i == j { *x == c } else { x.is_zero() };
                if !ok {
                    return None;
                }
            }
        }
        Some(c)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x * c).collect(),
        }
    }

    /// `self += c · other`, skipping zero entries of `other`.
    pub fn add_scaled(&mut self, other: &ExactMatrix, c: &Scalar) -> Result<(), MatrixError> {
        self.check_same_shape(other, "add_scaled")?;
        if c.is_zero() {
            return Ok(());
        }
        for (x, y) in self.entries.iter_mut().zip(&other.entries) {
            if !y.is_zero() {
                *x += y * c;
            }
        }
        Ok(())
    }

    /// `self += c · I`.
    pub fn add_identity_scaled(&mut self, c: &Scalar) -> Result<(), MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if !c.is_zero() {
            for i in 0..self.rows {
                self.entries[i * self.cols + i] += c;
            }
        }
        Ok(())
    }

    fn check_same_shape(&self, other: &ExactMatrix, op: &'static str) -> Result<(), MatrixError> {
        if self.shape() != other.shape() {
            return Err(MatrixError::DimensionMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &ExactMatrix) -> Result<Self, MatrixError> {
        self.check_same_shape(other, "add")?;
        Ok(ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &ExactMatrix) -> Result<Self, MatrixError> {
        self.check_same_shape(other, "sub")?;
        Ok(ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn checked_mul(&self, other: &ExactMatrix) -> Result<Self, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::DimensionMismatch {
                op: "mul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>, MatrixError> {
        if v.len() != self.cols {
            return Err(MatrixError::DimensionMismatch {
                op: "mul_vec",
                left: self.shape(),
                right: (v.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    /// `ab − ba`.
    pub fn commutator(&self, other: &ExactMatrix) -> Result<Self, MatrixError> {
        if !self.is_square() || self.shape() != other.shape() {
            return Err(MatrixError::DimensionMismatch {
                op: "commutator",
                left: self.shape(),
                right: other.shape(),
            });
        }
        self.checked_mul(other)?.checked_sub(&other.checked_mul(self)?)
    }

    pub fn pow(&self, exp: u32) -> Result<Self, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut acc = Self::identity(self.rows);
        for _ in 0..exp {
            acc = acc.checked_mul(self)?;
        }
        Ok(acc)
    }

    pub fn rank(&self) -> usize {
        let rows = self.to_rows();
        let full = self.rows.min(self.cols);
        if modular_rank(&rows, self.cols) == full {
            return full;
        }
        let mut rows = rows;
        row_reduce(&mut rows, self.cols).len()
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// A basis of `{v : Av = 0}`; each basis vector has a 1 in its free
    /// coordinate.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        nullspace_of_rows(self.to_rows(), self.cols)
    }

    pub fn inverse(&self) -> Result<Self, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut aug: Vec<Vec<Scalar>> = (0..n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.extend((0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }));
                row
            })
            .collect();
        let pivots = row_reduce(&mut aug, n);
        if pivots.len() < n {
            return Err(MatrixError::Singular);
        }
        Ok(Self::from_fn(n, n, |i, j| aug[i][n + j].clone()))
    }

    /// `p · self · p⁻¹` given both `p` and its inverse.
    pub fn conjugate_by(&self, p: &ExactMatrix, p_inv: &ExactMatrix) -> Result<Self, MatrixError> {
        p.checked_mul(self)?.checked_mul(p_inv)
    }
}

/// `ab − ba` for square matrices of equal dimension.
pub fn matrix_commutator(a: &ExactMatrix, b: &ExactMatrix) -> Result<ExactMatrix, MatrixError> {
    a.commutator(b)
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.rows).map(|i| self.row(i)))
            .finish()
    }
}

impl Add for &ExactMatrix {
    type Output = ExactMatrix;
    fn add(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.checked_add(rhs).expect("matrix shapes must agree")
    }
}

impl Sub for &ExactMatrix {
    type Output = ExactMatrix;
    fn sub(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.checked_sub(rhs).expect("matrix shapes must agree")
    }
}

impl Mul for &ExactMatrix {
    type Output = ExactMatrix;
    fn mul(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.checked_mul(rhs).expect("inner dimensions must agree")
    }
}

impl Neg for &ExactMatrix {
    type Output = ExactMatrix;
    fn neg(self) -> ExactMatrix {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| -x).collect(),
        }
    }
}

/// Gauss–Jordan elimination restricted to the first `ncols` columns (extra
/// columns are carried along). Returns the pivot columns; on return the pivot
/// rows are `rows[0..pivots.len()]` in reduced row echelon form.
pub(crate) fn row_reduce(rows: &mut [Vec<Scalar>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..ncols {
        if next >= rows.len() {
            break;
        }
        let Some(found) = (next..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(found, next);
        let inv = rows[next][col].recip().expect("pivot is nonzero");
        for x in rows[next].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = rows[next].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == next || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(col);
        next += 1;
    }
    pivots
}

pub(crate) fn nullspace_of_rows(mut rows: Vec<Vec<Scalar>>, ncols: usize) -> Vec<Vec<Scalar>> {
    let pivots = row_reduce(&mut rows, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Scalar::zero(); ncols];
            v[free] = Scalar::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -&rows[r][free];
            }
            v
        })
        .collect()
}

const MODULUS: u64 = (1 << 61) - 1;

fn reduce_mod(n: &BigInt) -> u64 {
    let m = BigInt::from(MODULUS);
    n.mod_floor(&m).to_u64().expect("residue fits in u64")
}

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MODULUS as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        exp >>= 1;
    }
    acc
}

/// Rank of the row set modulo the prime `2⁶¹ − 1` after clearing denominators
/// row by row. This never exceeds the rank over ℚ.
pub(crate) fn modular_rank(rows: &[Vec<Scalar>], ncols: usize) -> usize {
    let mut reduced: Vec<Vec<u64>> = rows
        .iter()
        .map(|row| {
            let lcm = row
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter()
                .take(ncols)
                .map(|x| reduce_mod(&(x.numer() * (&lcm / x.denom()))))
                .collect()
        })
        .collect();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(found) = (rank..reduced.len()).find(|&i| reduced[i][col] != 0) else {
            continue;
        };
        reduced.swap(found, rank);
        let inv = pow_mod(reduced[rank][col], MODULUS - 2);
        let pivot: Vec<u64> = reduced[rank].iter().map(|&x| mul_mod(x, inv)).collect();
        for row in reduced.iter_mut().skip(rank + 1) {
            let factor = row[col];
            if factor == 0 {
                continue;
            }
            for (x, &p) in row.iter_mut().zip(&pivot) {
                let sub = mul_mod(factor, p);
                *x = (*x + MODULUS - sub) % MODULUS;
            }
        }
        rank += 1;
        if rank == reduced.len() {
            break;
        }
    }
    rank
}

/// Exact nullity of the row system, taking a modular shortcut when the
/// modular nullity already equals a known lower bound on the true nullity.
pub(crate) fn nullity_with_lower_bound(rows: Vec<Vec<Scalar>>, ncols: usize, lower: usize) -> usize {
    let modular = ncols - modular_rank(&rows, ncols);
    if modular <= lower {
        return lower.max(modular);
    }
    let mut rows = rows;
    ncols - row_reduce(&mut rows, ncols).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[[i64; 2]]) -> ExactMatrix {
        ExactMatrix::from_i64_rows(rows)
    }

    #[test]
    fn commutator_examples() {
        let e = m(&[[0, 1], [0, 0]]);
        let f = m(&[[0, 0], [1, 0]]);
        let h = m(&[[1, 0], [0, -1]]);
        assert_eq!(matrix_commutator(&e, &f).unwrap(), h);
        assert!(matrix_commutator(&e, &e).unwrap().is_zero());
        assert_eq!(matrix_commutator(&h, &e).unwrap(), m(&[[0, 2], [0, 0]]));
    }

    #[test]
    fn commutator_rejects_mismatched_shapes() {
        let a = ExactMatrix::identity(2);
        let b = ExactMatrix::identity(3);
        assert!(matches!(
            matrix_commutator(&a, &b),
            Err(MatrixError::DimensionMismatch { .. })
        ));
        let rect = ExactMatrix::zeros(2, 3);
        assert!(matrix_commutator(&rect, &rect).is_err());
    }

    #[test]
    fn product_requires_matching_inner_dimension() {
        let a = ExactMatrix::zeros(2, 3);
        let b = ExactMatrix::zeros(2, 3);
        assert!(a.checked_mul(&b).is_err());
        assert_eq!(a.checked_mul(&b.transpose()).unwrap().shape(), (2, 2));
    }

    #[test]
    fn from_rows_validation() {
        assert_eq!(ExactMatrix::from_rows(vec![]), Err(MatrixError::Empty));
        assert_eq!(
            ExactMatrix::from_rows(vec![vec![Scalar::one()], vec![]]),
            Err(MatrixError::Ragged)
        );
    }

    #[test]
    fn inverse_round_trip() {
        let a = ExactMatrix::from_rows(vec![
            vec![Scalar::from_int(2), Scalar::ratio(1, 3), Scalar::zero()],
            vec![Scalar::from_int(-1), Scalar::from_int(4), Scalar::ratio(5, 2)],
            vec![Scalar::zero(), Scalar::from_int(1), Scalar::from_int(1)],
        ])
        .unwrap();
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, ExactMatrix::identity(3));
        assert_eq!(&inv * &a, ExactMatrix::identity(3));
        assert_eq!(m(&[[1, 2], [2, 4]]).inverse(), Err(MatrixError::Singular));
    }

    #[test]
    fn rank_and_nullspace() {
        let a = ExactMatrix::from_i64_rows(&[[1, 2, 3], [2, 4, 6], [1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let kernel = a.nullspace();
        assert_eq!(kernel.len(), 1);
        assert!(a.mul_vec(&kernel[0]).unwrap().iter().all(Scalar::is_zero));
        assert_eq!(ExactMatrix::zeros(3, 4).nullity(), 4);
        assert_eq!(ExactMatrix::identity(5).rank(), 5);
    }

    #[test]
    fn modular_rank_never_exceeds_rational_rank() {
        // Entries divisible by the modulus collapse mod p but not over ℚ.
        let p = BigInt::from(MODULUS);
        let rows = vec![
            vec![Scalar::from(p.clone()), Scalar::zero()],
            vec![Scalar::zero(), Scalar::one()],
        ];
        assert_eq!(modular_rank(&rows, 2), 1);
        assert_eq!(nullity_with_lower_bound(rows, 2, 0), 0);
    }

    #[test]
    fn as_scalar_detects_multiples_of_identity() {
        assert_eq!(
            ExactMatrix::scalar(3, Scalar::ratio(-1, 2)).as_scalar(),
            Some(Scalar::ratio(-1, 2))
        );
        assert_eq!(m(&[[1, 0], [0, 2]]).as_scalar(), None);
        assert_eq!(m(&[[1, 1], [0, 1]]).as_scalar(), None);
    }

    #[test]
    fn pow_of_nilpotent() {
        let e = m(&[[0, 1], [0, 0]]);
        assert!(e.pow(2).unwrap().is_zero());
        assert_eq!(e.pow(0).unwrap(), ExactMatrix::identity(2));
    }
}
