use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::ring::{ext_gcd, Ring};
use super::IntMatrix;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HnfResult {
    pub h: IntMatrix,
    pub u: IntMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

type Rows<T> = Vec<Vec<T>>;

const BIG: &str = "BigInt arithmetic cannot overflow";

fn identity_rows<T: Ring>(n: usize) -> Rows<T> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one_elem() } else { T::zero_elem() }).collect())
        .collect()
}

/// `rows[i] <- a*rows[i] + b*rows[k]`, `rows[k] <- c*rows[i] + d*rows[k]`.
fn combine_rows<T: Ring>(rows: &mut Rows<T>, i: usize, k: usize, a: &T, b: &T, c: &T, d: &T) -> Option<()> {
    for col in 0..rows[i].len() {
        let x = rows[i][col].clone();
        let y = rows[k][col].clone();
        rows[i][col] = a.try_mul(&x)?.try_add(&b.try_mul(&y)?)?;
        rows[k][col] = c.try_mul(&x)?.try_add(&d.try_mul(&y)?)?;
    }
    Some(())
}

/// `rows[i] <- rows[i] - f*rows[k]`.
fn sub_multiple<T: Ring>(rows: &mut Rows<T>, i: usize, k: usize, f: &T) -> Option<()> {
    if f.is_zero_elem() {
        return Some(());
    }
    for col in 0..rows[i].len() {
        let v = rows[i][col].try_sub(&f.try_mul(&rows[k][col])?)?;
        rows[i][col] = v;
    }
    Some(())
}

fn negate_row<T: Ring>(rows: &mut Rows<T>, i: usize) -> Option<()> {
    for x in rows[i].iter_mut() {
        *x = x.try_neg()?;
    }
    Some(())
}

/// Row-style Hermite echelon form of an arbitrary matrix.
///
/// Returns the echelon form and, when `track` is set, the unimodular
/// transform `U` with `U * A = H`. Pivot entries are positive and entries
/// above a pivot are reduced into `[0, pivot)`. `None` signals overflow of
/// the ring.
pub(crate) fn echelon_rows<T: Ring>(mut a: Rows<T>, track: bool) -> Option<(Rows<T>, Option<Rows<T>>)> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut u: Option<Rows<T>> = track.then(|| identity_rows(m));
    let mut r = 0;
    for j in 0..n {
        if r == m {
            break;
        }
        for i in r + 1..m {
            if a[i][j].is_zero_elem() {
                continue;
            }
            if a[r][j].is_zero_elem() {
                a.swap(r, i);
                if let Some(u) = u.as_mut() {
                    u.swap(r, i);
                }
                continue;
            }
            let (g, x, y) = ext_gcd(&a[r][j], &a[i][j])?;
            let p = a[r][j].try_div_exact(&g)?;
            let q = a[i][j].try_div_exact(&g)?;
            let nq = q.try_neg()?;
            combine_rows(&mut a, r, i, &x, &y, &nq, &p)?;
            if let Some(u) = u.as_mut() {
                combine_rows(u, r, i, &x, &y, &nq, &p)?;
            }
        }
        if a[r][j].is_zero_elem() {
            continue;
        }
        if a[r][j].is_neg() {
            negate_row(&mut a, r)?;
            if let Some(u) = u.as_mut() {
                negate_row(u, r)?;
            }
        }
        for i in 0..r {
            let f = a[i][j].try_div_floor(&a[r][j])?;
            sub_multiple(&mut a, i, r, &f)?;
            if let Some(u) = u.as_mut() {
                sub_multiple(u, i, r, &f)?;
            }
        }
        r += 1;
    }
    Some((a, u))
}

/// Hermite normal form of a square nonsingular matrix: `U * A = H`.
pub fn hnf(a: &IntMatrix) -> Result<HnfResult> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch { expected: a.rows(), found: a.cols() });
    }
    if a.det()?.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let (h, u) = echelon_rows(a.row_vecs(), true).expect(BIG);
    Ok(HnfResult {
        h: IntMatrix::from_rows(&h)?,
        u: IntMatrix::from_rows(&u.expect("tracked"))?,
    })
}

/// Hermite normal form over machine integers, without the transform.
/// `None` means an intermediate value left the safe range.
pub(crate) fn hnf_small(a: Vec<Vec<i64>>) -> Option<Vec<Vec<i64>>> {
    echelon_rows(a, false).map(|(h, _)| h)
}

/// Smith normal form of an arbitrary integer matrix: `U * A * V = S`.
pub fn snf(a: &IntMatrix) -> SnfResult {
    let m = a.rows();
    let n = a.cols();
    let mut s: Rows<BigInt> = a.row_vecs();
    let mut u: Rows<BigInt> = identity_rows(m);
    let mut v: Rows<BigInt> = identity_rows(n);

    // Column operations on `s` are row operations on its transpose; keep
    // `v` transposed while working and fix it up at the end.
    let col_swap = |s: &mut Rows<BigInt>, vt: &mut Rows<BigInt>, a: usize, b: usize| {
        for row in s.iter_mut() {
            row.swap(a, b);
        }
        vt.swap(a, b);
    };
    let col_sub = |s: &mut Rows<BigInt>, vt: &mut Rows<BigInt>, j: usize, k: usize, f: &BigInt| {
        // column j -= f * column k
        for row in s.iter_mut() {
            let t = &row[j] - f * &row[k];
            row[j] = t;
        }
        let kk = vt[k].clone();
        for (x, y) in vt[j].iter_mut().zip(kk.iter()) {
            *x -= f * y;
        }
    };
    let mut vt = v.clone();

    for t in 0..m.min(n) {
        loop {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if s[i][j].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| s[i][j].abs() < s[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                // Trailing block is zero.
                return finish(s, u, vt, &mut v);
            };
            s.swap(t, pi);
            u.swap(t, pi);
            col_swap(&mut s, &mut vt, t, pj);

            let mut clean = true;
            for i in t + 1..m {
                if s[i][t].is_zero() {
                    continue;
                }
                let f = s[i][t].div_floor(&s[t][t]);
                sub_multiple(&mut s, i, t, &f).expect(BIG);
                sub_multiple(&mut u, i, t, &f).expect(BIG);
                if !s[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if s[t][j].is_zero() {
                    continue;
                }
                let f = s[t][j].div_floor(&s[t][t]);
                col_sub(&mut s, &mut vt, j, t, &f);
                if !s[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Enforce divisibility: fold an offending row into the pivot row.
            let p = s[t][t].clone();
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !s[i][j].is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    sub_multiple(&mut s, t, i, &minus_one).expect(BIG);
                    sub_multiple(&mut u, t, i, &minus_one).expect(BIG);
                }
                None => break,
            }
        }
        if s[t][t].is_negative() {
            negate_row(&mut s, t).expect(BIG);
            negate_row(&mut u, t).expect(BIG);
        }
    }
    finish(s, u, vt, &mut v)
}

fn finish(s: Rows<BigInt>, u: Rows<BigInt>, vt: Rows<BigInt>, v: &mut Rows<BigInt>) -> SnfResult {
    let n = vt.len();
    for i in 0..n {
        for j in 0..n {
            v[i][j] = vt[j][i].clone();
        }
    }
    SnfResult {
        s: IntMatrix::from_rows(&s).expect("shape preserved"),
        u: IntMatrix::from_rows(&u).expect("shape preserved"),
        v: IntMatrix::from_rows(v).expect("shape preserved"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_hnf(h: &IntMatrix) -> bool {
        let n = h.rows();
        (0..n).all(|i| {
            h[(i, i)].is_positive()
                && (0..i).all(|j| h[(i, j)].is_zero())
                && (0..i).all(|k| !h[(k, i)].is_negative() && h[(k, i)] < h[(i, i)])
        })
    }

    #[test]
    fn hnf_examples() {
        let id = IntMatrix::identity(3);
        let r = hnf(&id).unwrap();
        assert_eq!(r.h, id);
        assert_eq!(r.u, id);

        let d = IntMatrix::diag(&[2, 3]);
        let r = hnf(&d).unwrap();
        assert_eq!(r.h, d);
        assert_eq!(r.u, IntMatrix::identity(2));

        let swap = IntMatrix::from_i64(&[[0, 1], [1, 0]]);
        let r = hnf(&swap).unwrap();
        assert_eq!(r.h, IntMatrix::identity(2));
        assert_eq!(r.u.mul(&swap).unwrap(), r.h);
        assert_eq!(r.u.det().unwrap().abs(), BigInt::one());
    }

    #[test]
    fn hnf_rejects_singular() {
        assert_eq!(hnf(&IntMatrix::from_i64(&[[1, 2], [2, 4]])), Err(Error::SingularMatrix));
    }

    #[test]
    fn hnf_reduces_off_diagonal() {
        let a = IntMatrix::from_i64(&[[3, 7, -2], [1, 4, 9], [-5, 2, 6]]);
        let r = hnf(&a).unwrap();
        assert!(is_hnf(&r.h), "{}", r.h);
        assert_eq!(r.u.mul(&a).unwrap(), r.h);
        assert_eq!(r.h.det().unwrap(), a.det().unwrap().abs());
    }

    #[test]
    fn small_and_big_hnf_agree() {
        let rows = vec![vec![4i64, -3, 7], vec![2, 8, -1], vec![-6, 5, 3]];
        let small = hnf_small(rows.clone()).unwrap();
        let big = hnf(&IntMatrix::from_i64(&rows)).unwrap().h;
        assert_eq!(IntMatrix::from_i64(&small), big);
    }

    #[test]
    fn snf_examples() {
        let r = snf(&IntMatrix::identity(3));
        assert_eq!(r.s, IntMatrix::identity(3));

        let r = snf(&IntMatrix::diag(&[2, 4]));
        assert_eq!(r.s, IntMatrix::diag(&[2, 4]));

        let a = IntMatrix::from_i64(&[[2, 1], [0, 2]]);
        let r = snf(&a);
        assert_eq!(r.s, IntMatrix::diag(&[1, 4]));
        assert_eq!(r.u.mul(&a).unwrap().mul(&r.v).unwrap(), r.s);
    }

    #[test]
    fn snf_rectangular_and_zero() {
        let a = IntMatrix::from_i64(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16], [0, 0, 0]]);
        let r = snf(&a);
        assert_eq!(r.u.mul(&a).unwrap().mul(&r.v).unwrap(), r.s);
        assert_eq!(r.s[(0, 0)], BigInt::from(2));
        assert_eq!(r.s[(1, 1)], BigInt::from(6));
        assert_eq!(r.s[(2, 2)], BigInt::from(12));

        let z = IntMatrix::zeros(2, 3);
        assert_eq!(snf(&z).s, z);
    }
}
