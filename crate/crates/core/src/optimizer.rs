//! The rational optimization problem behind the multiplicity bound.
//!
//! Points of `X^n` are tuples with unit sum, weakly decreasing entries in
//! `[0, 1]` and `x_1...x_j <= x_{j+1} + ... + x_n` for every `j < n`. Sorted
//! barycentric coordinates of canonical simplices live there, and the
//! reciprocal objective `x_n / (x_1...x_{n-1})` bounds the multiplicity.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bounds::sylvester;
use crate::error::{Error, Result};

/// Default cap on `n` for the optimizer entry points.
pub const DEFAULT_N_CAP: usize = 20;

/// Positive, weakly decreasing rationals summing to one.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BaryVector {
    entries: Vec<BigRational>,
}

impl BaryVector {
    pub fn new(entries: Vec<BigRational>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidInput("empty barycentric vector".into()));
        }
        if entries.iter().any(|x| !x.is_positive()) {
            return Err(Error::InvalidInput("barycentric entries must be positive".into()));
        }
        if entries.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput("barycentric entries must be weakly decreasing".into()));
        }
        if entries.iter().sum::<BigRational>() != BigRational::one() {
            return Err(Error::InvalidInput("barycentric entries must sum to one".into()));
        }
        Ok(Self { entries })
    }

    pub fn from_unsorted(mut entries: Vec<BigRational>) -> Result<Self> {
        entries.sort_by(|a, b| b.cmp(a));
        Self::new(entries)
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }
}

impl fmt::Debug for BaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.iter().map(|x| x.to_string())).finish()
    }
}

/// Which defining condition of `X^n` fails first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Condition {
    SumOne,
    Ordered,
    /// `x_1...x_j <= x_{j+1} + ... + x_n` for this `j` (1-based).
    ProductTail(usize),
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::SumOne => write!(f, "sum_one"),
            Condition::Ordered => write!(f, "ordered"),
            Condition::ProductTail(j) => write!(f, "product_tail(j={j})"),
        }
    }
}

/// Exact membership test; on failure reports the first violated condition.
pub fn in_xn(x: &[BigRational]) -> std::result::Result<(), Condition> {
    if x.iter().sum::<BigRational>() != BigRational::one() {
        return Err(Condition::SumOne);
    }
    let one = BigRational::one();
    let ordered = x.first().is_none_or(|a| *a <= one)
        && x.windows(2).all(|w| w[0] >= w[1])
        && x.last().is_none_or(|a| !a.is_negative());
    if !ordered {
        return Err(Condition::Ordered);
    }
    let mut tail: BigRational = x.iter().sum();
    let mut prod = BigRational::one();
    for j in 1..x.len() {
        prod *= &x[j - 1];
        tail -= &x[j - 1];
        if prod > tail {
            return Err(Condition::ProductTail(j));
        }
    }
    Ok(())
}

fn check_nl(n: usize, l: usize) -> Result<()> {
    if l == 0 || l > n {
        return Err(Error::IndexOutOfRange { index: l as i64, range: "1 <= l <= n" });
    }
    if n > DEFAULT_N_CAP {
        return Err(Error::IndexOutOfRange { index: n as i64, range: "n <= 20" });
    }
    Ok(())
}

/// `(1/s_1, ..., 1/s_{l-1}, 1/((n-l+1)(s_l-1)), ...)` with `n - l + 1` equal tail entries.
pub fn candidate_vector(n: usize, l: usize) -> Result<Vec<BigRational>> {
    check_nl(n, l)?;
    let mut v = Vec::with_capacity(n);
    for i in 1..l {
        v.push(BigRational::new(BigInt::one(), sylvester(i)?));
    }
    let k = n - l + 1;
    let tail = BigRational::new(BigInt::one(), BigInt::from(k) * (sylvester(l)? - 1));
    v.extend(std::iter::repeat_n(tail, k));
    Ok(v)
}

/// `f_n(l) = (n-l+1)^{n-l-1} (s_l - 1)^{n-l}`. At `l = n` the exponent
/// `-1` hits the base 1, giving 1.
pub fn f_value(n: usize, l: usize) -> Result<BigRational> {
    check_nl(n, l)?;
    let r = n - l;
    let s: BigInt = sylvester(l)? - 1;
    let base = BigRational::from_integer(BigInt::from(r + 1));
    let power = if r == 0 { base.recip() } else { base.pow(r as i32 - 1) };
    Ok(power * BigRational::from_integer(s.pow(r as u32)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Maximum {
    pub argmax: Vec<usize>,
    pub value: BigRational,
}

/// Exhaustive maximization of `f_n` over `l = 1..n`.
pub fn maximize_f(n: usize) -> Result<Maximum> {
    if n < 2 {
        return Err(Error::IndexOutOfRange { index: n as i64, range: "n >= 2" });
    }
    let mut best = Maximum { argmax: Vec::new(), value: BigRational::zero() };
    for l in 1..=n {
        let v = f_value(n, l)?;
        if v > best.value {
            best = Maximum { argmax: vec![l], value: v };
        } else if v == best.value {
            best.argmax.push(l);
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaRow {
    pub r: usize,
    pub value: BigRational,
    pub within_bound: bool,
    pub equality: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaTable {
    pub n: usize,
    pub bound: BigRational,
    pub rows: Vec<LemmaRow>,
}

impl LemmaTable {
    /// Every row is within the bound, with equality exactly at `r = 2`.
    pub fn holds(&self) -> bool {
        self.rows.iter().all(|row| row.within_bound && row.equality == (row.r == 2))
    }
}

/// `(r+1)^{r-1} (s_{n-r} - 1)^r` against `3 (s_{n-2} - 1)^2` for `r = 0..n-1`.
pub fn lemma1_table(n: usize) -> Result<LemmaTable> {
    if n < 6 {
        return Err(Error::IndexOutOfRange { index: n as i64, range: "n >= 6" });
    }
    let s: BigInt = sylvester(n - 2)? - 1;
    let bound = BigRational::from_integer(BigInt::from(3) * &s * &s);
    let rows = (0..n)
        .map(|r| {
            let value = f_value(n, n - r)?;
            Ok(LemmaRow { r, within_bound: value <= bound, equality: value == bound, value })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LemmaTable { n, bound, rows })
}

/// `x_n / (x_1 ... x_{n-1})`.
pub fn mult_bound_from_bary(x: &BaryVector) -> BigRational {
    let e = x.entries();
    let (last, head) = e.split_last().expect("nonempty");
    let prod: BigRational = head.iter().product();
    last / prod
}
