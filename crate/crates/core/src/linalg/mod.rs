//! Exact integer and rational linear algebra.
//!
//! Conventions used throughout the crate:
//! * Hermite normal form is row-style: `U * A = H` with `U` unimodular, `H`
//!   upper triangular, `H[i][i] > 0` and `0 <= H[i][j] < H[j][j]` for `i < j`.
//! * Smith normal form: `U * A * V = S`, `S` diagonal, nonnegative, with each
//!   diagonal entry dividing the next.

mod normal_form;
pub(crate) mod ring;

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use normal_form::{hnf, snf, HnfResult, SnfResult};
pub(crate) use normal_form::{echelon_rows, hnf_small};

/// An integer vector.
pub type IntVec = Vec<BigInt>;

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidInput("matrix must have at least one row and column".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows<R: AsRef<[BigInt]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != cols) {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        let data = rows.iter().flat_map(|r| r.as_ref().iter().cloned()).collect();
        Self::new(rows.len(), cols, data)
    }

    /// Convenience constructor from small integers. Panics on ragged input.
    pub fn from_i64<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let rows: Vec<IntVec> = rows.iter().map(|r| to_int_vec(r.as_ref())).collect();
        Self::from_rows(&rows).expect("well-shaped matrix literal")
    }

    pub fn from_columns<R: AsRef<[BigInt]>>(cols: &[R]) -> Result<Self> {
        Ok(Self::from_rows(cols)?.transpose())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn diag<I: Into<BigInt> + Clone>(entries: &[I]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone().into();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> IntVec {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<IntVec> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Row-major entries.
    pub fn flatten(&self) -> &[BigInt] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<IntVec> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        Ok(bareiss_det(self.row_vecs()))
    }

    /// Returns `(adj, det)` with `self * adj = det * I`, for nonsingular input.
    pub fn adjugate(&self) -> Result<(IntMatrix, BigInt)> {
        let det = self.det()?;
        if det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        let n = self.rows;
        let inv = rational_inverse(self)?;
        let mut adj = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let v = &inv[i][j] * BigRational::from_integer(det.clone());
                debug_assert!(v.is_integer());
                adj[(i, j)] = v.to_integer();
            }
        }
        Ok((adj, det))
    }

    pub(crate) fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_i64()).collect())
            .collect()
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.row_vecs().iter().map(|r| DisplayRow(r))).finish()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:?}", DisplayRow(self.row(i)))?;
        }
        write!(f, "]")
    }
}

struct DisplayRow<'a>(&'a [BigInt]);

impl fmt::Debug for DisplayRow<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

pub fn to_int_vec(v: &[i64]) -> IntVec {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Nonnegative gcd of the entries; zero only for the zero vector.
pub fn gcd_vec(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

fn bareiss_det(mut a: Vec<IntVec>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * prev
}

fn rational_inverse(a: &IntMatrix) -> Result<Vec<Vec<BigRational>>> {
    let n = a.rows();
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> =
                a.row(i).iter().map(|x| BigRational::from_integer(x.clone())).collect();
            row.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            row
        })
        .collect();
    gauss_jordan(&mut m, n)?;
    Ok(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Reduces the left `n` columns of `m` to the identity in place.
fn gauss_jordan(m: &mut [Vec<BigRational>], n: usize) -> Result<()> {
    for k in 0..n {
        let p = (k..n).find(|&i| !m[i][k].is_zero()).ok_or(Error::SingularMatrix)?;
        m.swap(k, p);
        let pivot = m[k][k].clone();
        for x in m[k].iter_mut() {
            *x /= &pivot;
        }
        let pivot_row = m[k].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == k || row[k].is_zero() {
                continue;
            }
            let f = row[k].clone();
            for (t, s) in row.iter_mut().zip(&pivot_row) {
                *t -= &f * s;
            }
        }
    }
    Ok(())
}

/// Exact solution of `A x = b` for square `A`.
pub fn solve_rational(a: &IntMatrix, b: &[BigInt]) -> Result<Vec<BigRational>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch { expected: a.rows(), found: a.cols() });
    }
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch { expected: a.rows(), found: b.len() });
    }
    let n = a.rows();
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> =
                a.row(i).iter().map(|x| BigRational::from_integer(x.clone())).collect();
            row.push(BigRational::from_integer(b[i].clone()));
            row
        })
        .collect();
    gauss_jordan(&mut m, n)?;
    Ok(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Index of the lattice spanned by `vectors` in `Z^d`, with the invariant
/// factors (> 1) of the quotient group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeIndex {
    pub index: BigInt,
    pub invariant_factors: Vec<BigInt>,
}

pub fn lattice_index(vectors: &[IntVec]) -> Result<LatticeIndex> {
    let m = IntMatrix::from_rows(vectors)?;
    let dim = m.cols();
    let s = snf(&m).s;
    let diag: Vec<BigInt> = (0..s.rows().min(s.cols()))
        .map(|i| s[(i, i)].clone())
        .filter(|x| !x.is_zero())
        .collect();
    if diag.len() < dim {
        return Err(Error::NotFullRank { rank: diag.len(), dim });
    }
    let index = diag.iter().product();
    let invariant_factors = diag.into_iter().filter(|x| !x.is_one()).collect();
    Ok(LatticeIndex { index, invariant_factors })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(v: &[i64]) -> IntVec {
        to_int_vec(v)
    }

    fn cofactor_det(m: &[Vec<i64>]) -> i64 {
        let n = m.len();
        if n == 1 {
            return m[0][0];
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| *x).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * cofactor_det(&minor)
            })
            .sum()
    }

    #[test]
    fn gcd_vec_examples() {
        assert_eq!(gcd_vec(&iv(&[0, 0])), BigInt::zero());
        assert_eq!(gcd_vec(&iv(&[2, 4, 6])), BigInt::from(2));
        assert_eq!(gcd_vec(&iv(&[2, 5, 9])), BigInt::one());
        assert_eq!(gcd_vec(&iv(&[-4, 6])), BigInt::from(2));
    }

    #[test]
    fn det_examples() {
        assert_eq!(IntMatrix::identity(3).det().unwrap(), BigInt::one());
        assert_eq!(IntMatrix::diag(&[2, 8, 8, 8]).det().unwrap(), BigInt::from(1024));
        assert_eq!(IntMatrix::from_i64(&[[2, 1], [0, 1]]).det().unwrap(), BigInt::from(2));
        assert_eq!(IntMatrix::from_i64(&[[0, 1], [1, 0]]).det().unwrap(), BigInt::from(-1));
        assert_eq!(IntMatrix::from_i64(&[[1, 2], [2, 4]]).det().unwrap(), BigInt::zero());
    }

    #[test]
    fn det_matches_cofactor_expansion() {
        let cases: Vec<Vec<Vec<i64>>> = vec![
            vec![vec![3, -1, 4], vec![1, 5, -9], vec![2, 6, 5]],
            vec![vec![0, 2, 0, 1], vec![3, 0, 1, 0], vec![0, 1, 0, 4], vec![2, 0, 5, 0]],
            vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]],
        ];
        for c in cases {
            assert_eq!(IntMatrix::from_i64(&c).det().unwrap(), BigInt::from(cofactor_det(&c)));
        }
    }

    #[test]
    fn solve_examples() {
        let x = solve_rational(&IntMatrix::identity(2), &iv(&[3, -4])).unwrap();
        assert_eq!(x, vec![BigRational::from_integer(3.into()), BigRational::from_integer((-4).into())]);
        let x = solve_rational(&IntMatrix::diag(&[2, 3]), &iv(&[1, 1])).unwrap();
        assert_eq!(x, vec![BigRational::new(1.into(), 2.into()), BigRational::new(1.into(), 3.into())]);
        assert_eq!(
            solve_rational(&IntMatrix::from_i64(&[[1, 2], [2, 4]]), &iv(&[1, 1])),
            Err(Error::SingularMatrix)
        );
    }

    #[test]
    fn solve_facet_normal_of_projective_plane_simplex() {
        // Facet through e1 and e2: u.e1 = u.e2 = -1.
        let a = IntMatrix::from_i64(&[[1, 0], [0, 1]]);
        let u = solve_rational(&a, &iv(&[-1, -1])).unwrap();
        assert!(u.iter().all(|x| *x == BigRational::from_integer((-1).into())));
        // Facet through e1 and -e1-e2.
        let a = IntMatrix::from_i64(&[[1, 0], [-1, -1]]);
        let u = solve_rational(&a, &iv(&[-1, -1])).unwrap();
        assert_eq!(u, vec![BigRational::from_integer((-1).into()), BigRational::from_integer(2.into())]);
    }

    #[test]
    fn lattice_index_examples() {
        let li = lattice_index(&[iv(&[1, 0]), iv(&[0, 1])]).unwrap();
        assert_eq!(li.index, BigInt::one());
        assert!(li.invariant_factors.is_empty());

        let li = lattice_index(&[iv(&[2, 0]), iv(&[0, 3])]).unwrap();
        assert_eq!(li.index, BigInt::from(6));
        assert_eq!(li.invariant_factors, vec![BigInt::from(6)]);

        let li = lattice_index(&[iv(&[1, 0, 0]), iv(&[0, 1, 0]), iv(&[2, 5, 9]), iv(&[-4, -7, -9])]).unwrap();
        assert_eq!(li.index, BigInt::from(9));
        assert_eq!(li.invariant_factors, vec![BigInt::from(9)]);

        assert!(matches!(
            lattice_index(&[iv(&[1, 1]), iv(&[2, 2])]),
            Err(Error::NotFullRank { rank: 1, dim: 2 })
        ));
    }

    #[test]
    fn adjugate_inverts() {
        let a = IntMatrix::from_i64(&[[2, 1, 0], [0, 3, 1], [1, 0, 4]]);
        let (adj, det) = a.adjugate().unwrap();
        let prod = a.mul(&adj).unwrap();
        let expected = IntMatrix::diag(&[det.clone(), det.clone(), det]);
        assert_eq!(prod, expected);
    }
}
