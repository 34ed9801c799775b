//! Superlattice enumeration and classification of canonical simplices of a
//! given multiplicity over a fixed multiplicity-one simplex.
//!
//! A Hermite normal form `H` with determinant `m` (row convention, see
//! [`crate::linalg`]) stands for the superlattice `N = {x : H x in Z^d}` of
//! index `m`; distinct forms give distinct superlattices and every
//! superlattice arises once. In a basis of `N` the vertices of `S` become
//! `H v_i`, which is [`superlattice_image`].
//!
//! The canonicity test for one candidate avoids building the image: with
//! `D = m h`, every point of `N` has barycentric coordinates (scaled by `D`)
//! congruent to `Q z + k m lambda` for `z` in the box `prod [0, H_ii)` and
//! `0 <= k < h`, where `Q = adj(W_S) adj(H)`. A class with coordinate sum `D`
//! and all entries positive is an interior lattice point.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::bounds::{conrads_value, kas_bound};
use crate::equivalence::{automorphisms, canonical_key};
use crate::error::{Error, Result};
use crate::linalg::{hnf_small, IntMatrix};
use crate::simplex::{FanoSimplex, LatticeSimplex, DEFAULT_POINT_CAP};

/// Upper triangular, positive diagonal, entries above the diagonal reduced
/// modulo the diagonal entry of their column.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HnfMatrix {
    matrix: IntMatrix,
}

impl HnfMatrix {
    /// Validates the normal form conditions.
    pub fn new(matrix: IntMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: matrix.rows(), found: matrix.cols() });
        }
        let n = matrix.rows();
        for j in 0..n {
            let p = &matrix[(j, j)];
            if !p.is_positive() {
                return Err(Error::InvalidInput("diagonal entries must be positive".into()));
            }
            for i in 0..n {
                let x = &matrix[(i, j)];
                let ok = match i.cmp(&j) {
                    std::cmp::Ordering::Greater => x.is_zero(),
                    std::cmp::Ordering::Less => !x.is_negative() && x < p,
                    std::cmp::Ordering::Equal => true,
                };
                if !ok {
                    return Err(Error::InvalidInput(format!("entry ({i},{j}) violates the normal form")));
                }
            }
        }
        Ok(Self { matrix })
    }

    fn from_small(rows: &[Vec<i64>]) -> Self {
        Self { matrix: IntMatrix::from_i64(rows) }
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn det(&self) -> BigInt {
        (0..self.dim()).map(|i| self.matrix[(i, i)].clone()).product()
    }
}

impl std::fmt::Debug for HnfMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.matrix)
    }
}

fn divisors(m: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= m {
        if m.is_multiple_of(i) {
            small.push(i);
            if i * i != m {
                large.push(m / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Ordered factorizations of `m` into `d` positive factors, lexicographic.
fn factorizations(d: usize, m: u64) -> Vec<Vec<u64>> {
    fn rec(d: usize, m: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if d == 1 {
            prefix.push(m);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for q in divisors(m) {
            prefix.push(q);
            rec(d - 1, m / q, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, m, &mut Vec::with_capacity(d), &mut out);
    out
}

/// `sum over d_1 ... d_d = m of prod_j d_j^{j-1}`, the number of subgroups of
/// index `m` in `Z^d`.
pub fn count_sublattices(d: usize, m: u64) -> BigInt {
    if d == 0 || m == 0 {
        return BigInt::zero();
    }
    factorizations(d, m)
        .iter()
        .map(|t| t.iter().enumerate().map(|(j, x)| BigInt::from(*x).pow(j as u32)).product::<BigInt>())
        .sum()
}

/// Random access to the forms of determinant `m`, in enumeration order.
#[derive(Clone, Debug)]
pub struct HnfSpace {
    d: usize,
    diagonals: Vec<Vec<u64>>,
    /// `offsets[t]` is the index of the first form with diagonal `t`.
    offsets: Vec<u64>,
    total: u64,
}

impl HnfSpace {
    pub fn new(d: usize, m: u64) -> Result<Self> {
        if d == 0 || m == 0 {
            return Err(Error::InvalidInput("dimension and determinant must be positive".into()));
        }
        let diagonals = factorizations(d, m);
        let mut offsets = Vec::with_capacity(diagonals.len());
        let mut total: u64 = 0;
        for t in &diagonals {
            offsets.push(total);
            let mut n: u64 = 1;
            for (j, x) in t.iter().enumerate() {
                for _ in 0..j {
                    n = n.checked_mul(*x).ok_or_else(|| Error::InvalidInput("too many forms".into()))?;
                }
            }
            total = total.checked_add(n).ok_or_else(|| Error::InvalidInput("too many forms".into()))?;
        }
        Ok(Self { d, diagonals, offsets, total })
    }

    pub fn len(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// Writes form number `idx` into `rows` (a `d x d` buffer).
    fn fill(&self, idx: u64, rows: &mut [Vec<i64>]) {
        let t = self.offsets.partition_point(|&o| o <= idx) - 1;
        let diag = &self.diagonals[t];
        let mut rest = idx - self.offsets[t];
        for row in rows.iter_mut() {
            row.iter_mut().for_each(|x| *x = 0);
        }
        // The last position (row-major) varies fastest.
        for i in (0..self.d).rev() {
            for j in (i + 1..self.d).rev() {
                let radix = diag[j];
                rows[i][j] = (rest % radix) as i64;
                rest /= radix;
            }
        }
        for (i, x) in diag.iter().enumerate() {
            rows[i][i] = *x as i64;
        }
    }

    pub fn get(&self, idx: u64) -> Option<HnfMatrix> {
        if idx >= self.total {
            return None;
        }
        let mut rows = vec![vec![0i64; self.d]; self.d];
        self.fill(idx, &mut rows);
        Some(HnfMatrix::from_small(&rows))
    }
}

/// Every form of determinant `m`, each once, in a fixed order.
pub fn hnf_enumerate(d: usize, m: u64) -> Result<impl Iterator<Item = HnfMatrix>> {
    let space = HnfSpace::new(d, m)?;
    Ok((0..space.len()).map(move |i| space.get(i).expect("in range")))
}

/// `S` in coordinates of the superlattice given by `h`: vertices `H v_i`.
pub fn superlattice_image(s: &LatticeSimplex, h: &HnfMatrix) -> Result<LatticeSimplex> {
    s.linear_image(h.matrix())
}

#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    /// Skip forms that are not minimal in their orbit under the automorphisms.
    pub symmetry: bool,
    /// Worker threads; `None` uses the rayon default.
    pub jobs: Option<usize>,
    /// Bound on the lattice point scan per candidate.
    pub cap: u64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self { symmetry: true, jobs: None, cap: DEFAULT_POINT_CAP }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counters {
    pub scanned: u64,
    pub symmetry_skipped: u64,
    pub primitive_failures: u64,
    pub canonicity_failures: u64,
    pub accepted: u64,
}

impl Counters {
    fn merge(mut self, o: Counters) -> Counters {
        self.scanned += o.scanned;
        self.symmetry_skipped += o.symmetry_skipped;
        self.primitive_failures += o.primitive_failures;
        self.canonicity_failures += o.canonicity_failures;
        self.accepted += o.accepted;
        self
    }
}

#[derive(Clone, Debug)]
pub struct ClassInfo {
    pub representative: FanoSimplex,
    pub key: Vec<u8>,
    /// Lexicographically smallest form producing this class.
    pub witness: HnfMatrix,
    pub reflexive: bool,
    pub terminal: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct ClassificationResult {
    pub base: FanoSimplex,
    pub m: u64,
    /// Sorted by key.
    pub classes: Vec<ClassInfo>,
    pub counters: Counters,
}

enum Outcome {
    SymmetrySkip,
    NotPrimitive,
    NotCanonical,
    Accepted,
}

/// Precomputed data for the machine-word candidate test.
struct Context {
    d: usize,
    m: i64,
    dd: i128,
    h: i64,
    verts: Vec<Vec<i64>>,
    /// Scaled barycentric map on the first `d` homogeneous coordinates.
    b: Vec<Vec<i128>>,
    m_lambda: Vec<i128>,
    autos: Vec<Vec<Vec<i64>>>,
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    a.gcd(&b)
}

impl Context {
    fn new(s: &FanoSimplex, m: u64, opts: &ClassifyOptions) -> Result<Option<Self>> {
        let d = s.dim();
        let w = s.weight_system();
        let (adj, det) = s.homogeneous_matrix().adjugate()?;
        let sign = if det.is_negative() { -1 } else { 1 };
        let verts = s.vertices().iter().map(|v| v.iter().map(ToPrimitive::to_i64).collect::<Option<Vec<_>>>()).collect::<Option<Vec<_>>>();
        let adj = adj.to_i64_rows();
        let (Some(verts), Some(adj), Some(h), Some(m)) = (verts, adj, w.h().to_i64(), i64::try_from(m).ok()) else {
            return Ok(None);
        };
        let b: Vec<Vec<i128>> = adj.iter().map(|row| row[..d].iter().map(|x| (*x * sign) as i128).collect()).collect();
        let lambda: Vec<i128> = adj.iter().map(|row| (row[d] * sign) as i128).collect();
        debug_assert!(lambda.iter().zip(w.weights()).all(|(a, b)| BigInt::from(*a) == *b));
        let autos = if opts.symmetry {
            automorphisms(s)?
                .maps
                .iter()
                .filter(|a| !a.is_identity())
                .map(|a| a.matrix.to_i64_rows().expect("automorphism entries are small"))
                .collect()
        } else {
            Vec::new()
        };
        let dd = (m as i128).checked_mul(h as i128).filter(|x| *x < (1i128 << 60));
        let Some(dd) = dd else { return Ok(None) };
        Ok(Some(Self {
            d,
            m,
            dd,
            h,
            verts,
            b,
            m_lambda: lambda.iter().map(|l| l * m as i128).collect(),
            autos,
        }))
    }

    /// `None` when machine arithmetic is not enough.
    fn evaluate(&self, hm: &[Vec<i64>]) -> Option<Outcome> {
        let d = self.d;
        // Primitivity of every H v_i.
        for v in &self.verts {
            let mut g: i128 = 0;
            for row in hm {
                let mut s: i128 = 0;
                for (a, x) in row.iter().zip(v) {
                    s = s.checked_add((*a as i128).checked_mul(*x as i128)?)?;
                }
                g = gcd_i128(g, s);
            }
            if g != 1 {
                return Some(Outcome::NotPrimitive);
            }
        }
        if !self.orbit_minimal(hm) {
            return Some(Outcome::SymmetrySkip);
        }
        // adj(H) = m H^{-1}, by back substitution.
        let mut adj_h = vec![vec![0i128; d]; d];
        for j in 0..d {
            adj_h[j][j] = self.m as i128 / hm[j][j] as i128;
            for i in (0..j).rev() {
                let mut s: i128 = 0;
                for k in i + 1..=j {
                    s = s.checked_add((hm[i][k] as i128).checked_mul(adj_h[k][j])?)?;
                }
                debug_assert_eq!(s % hm[i][i] as i128, 0);
                adj_h[i][j] = -s / hm[i][i] as i128;
            }
        }
        let dd = self.dd;
        // Columns of Q = B adj(H), reduced mod D.
        let n = d + 1;
        let mut q_cols = vec![vec![0i128; n]; d];
        for (j, col) in q_cols.iter_mut().enumerate() {
            for (i, out) in col.iter_mut().enumerate() {
                let mut s: i128 = 0;
                for k in 0..=j {
                    s = s.checked_add(self.b[i][k].checked_mul(adj_h[k][j])?)?;
                }
                *out = s.rem_euclid(dd);
            }
        }
        let radices: Vec<i64> = (0..d).map(|i| hm[i][i]).collect();
        let mut digits = vec![0i64; d];
        let mut acc = vec![0i128; n];
        let mut a = vec![0i128; n];
        let mut interior = 0u32;
        loop {
            a.copy_from_slice(&acc);
            for _ in 0..self.h {
                let mut sum: i128 = 0;
                let mut positive = true;
                for x in &a {
                    sum += x;
                    positive &= *x > 0;
                }
                if sum == dd && positive {
                    interior += 1;
                    if interior > 1 {
                        return Some(Outcome::NotCanonical);
                    }
                }
                for (x, step) in a.iter_mut().zip(&self.m_lambda) {
                    *x += step;
                    if *x >= dd {
                        *x -= dd;
                    }
                }
            }
            let mut k = 0;
            loop {
                if k == d {
                    return Some(if interior == 1 { Outcome::Accepted } else { Outcome::NotCanonical });
                }
                digits[k] += 1;
                for (x, c) in acc.iter_mut().zip(&q_cols[k]) {
                    *x += c;
                    if *x >= dd {
                        *x -= dd;
                    }
                }
                if digits[k] < radices[k] {
                    break;
                }
                // H_kk copies of column k wrap to zero.
                digits[k] = 0;
                for (x, c) in acc.iter_mut().zip(&q_cols[k]) {
                    *x = (*x - c * radices[k] as i128).rem_euclid(dd);
                }
                k += 1;
            }
        }
    }

    fn orbit_minimal(&self, hm: &[Vec<i64>]) -> bool {
        let d = self.d;
        for a in &self.autos {
            let mut g = vec![vec![0i64; d]; d];
            let mut overflow = false;
            for i in 0..d {
                for j in 0..d {
                    let mut s: i64 = 0;
                    for k in 0..d {
                        match hm[i][k].checked_mul(a[k][j]).and_then(|p| s.checked_add(p)) {
                            Some(v) => s = v,
                            None => overflow = true,
                        }
                    }
                    g[i][j] = s;
                }
            }
            if overflow {
                continue;
            }
            if let Some(other) = hnf_small(g) {
                if other.as_slice() < hm {
                    return false;
                }
            }
        }
        true
    }
}

fn evaluate_big(s: &FanoSimplex, h: &HnfMatrix, cap: u64) -> Result<Outcome> {
    let image = superlattice_image(s, h)?;
    if FanoSimplex::try_from(image.clone()).is_err() {
        return Ok(Outcome::NotPrimitive);
    }
    Ok(if image.is_canonical_capped(cap)? { Outcome::Accepted } else { Outcome::NotCanonical })
}

#[derive(Default)]
struct Partial {
    counters: Counters,
    /// Key to smallest witness.
    found: BTreeMap<Vec<u8>, HnfMatrix>,
}

impl Partial {
    fn merge(mut self, other: Partial) -> Partial {
        self.counters = self.counters.merge(other.counters);
        for (k, h) in other.found {
            match self.found.get(&k) {
                Some(old) if old.matrix().flatten() <= h.matrix().flatten() => {}
                _ => {
                    self.found.insert(k, h);
                }
            }
        }
        self
    }
}

const CHUNK: u64 = 4096;

/// Canonical Fano simplices of multiplicity `m` whose restriction to the
/// vertex lattice is `s`, up to equivalence.
pub fn classify_mult_m(s: &FanoSimplex, m: u64, opts: &ClassifyOptions) -> Result<ClassificationResult> {
    if !s.multiplicity().index.is_one() {
        return Err(Error::InvalidInput("base simplex must have multiplicity one".into()));
    }
    let d = s.dim();
    let space = HnfSpace::new(d, m)?;
    let h_sum = s.weight_system().h().clone();
    let scan = BigInt::from(m) * &h_sum;
    if scan > BigInt::from(opts.cap) {
        return Err(Error::EnumerationCapExceeded { needed: scan.to_string(), cap: opts.cap });
    }
    let ctx = Context::new(s, m, opts)?;
    let autos_big: Vec<IntMatrix> = if opts.symmetry && ctx.is_none() {
        automorphisms(s)?.maps.into_iter().filter(|a| !a.is_identity()).map(|a| a.matrix).collect()
    } else {
        Vec::new()
    };

    let run_chunk = |c: u64| -> Result<Partial> {
        let mut part = Partial::default();
        let mut rows = vec![vec![0i64; d]; d];
        let end = ((c + 1) * CHUNK).min(space.len());
        for idx in c * CHUNK..end {
            space.fill(idx, &mut rows);
            let fast = ctx.as_ref().and_then(|ctx| ctx.evaluate(&rows));
            let outcome = match fast {
                Some(o) => o,
                None => {
                    let h = HnfMatrix::from_small(&rows);
                    if !orbit_minimal_big(&h, &autos_big) {
                        Outcome::SymmetrySkip
                    } else {
                        evaluate_big(s, &h, opts.cap)?
                    }
                }
            };
            part.counters.scanned += 1;
            match outcome {
                Outcome::SymmetrySkip => part.counters.symmetry_skipped += 1,
                Outcome::NotPrimitive => part.counters.primitive_failures += 1,
                Outcome::NotCanonical => part.counters.canonicity_failures += 1,
                Outcome::Accepted => {
                    part.counters.accepted += 1;
                    let h = HnfMatrix::from_small(&rows);
                    let key = canonical_key(&superlattice_image(s, &h)?)?;
                    part = part.merge(Partial { counters: Counters::default(), found: BTreeMap::from([(key, h)]) });
                }
            }
        }
        Ok(part)
    };

    let chunks = space.len().div_ceil(CHUNK);
    let work = || -> Result<Partial> {
        (0..chunks)
            .into_par_iter()
            .map(run_chunk)
            .try_reduce(Partial::default, |a, b| Ok(a.merge(b)))
    };
    let partial = match opts.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::InvalidInput(e.to_string()))?
            .install(work)?,
        None => work()?,
    };

    let classes = partial
        .found
        .into_iter()
        .map(|(key, witness)| {
            let image = superlattice_image(s, &witness)?;
            let representative = FanoSimplex::try_from(image)?;
            let reflexive = representative.is_reflexive();
            let terminal = representative.is_terminal_capped(opts.cap).ok();
            Ok(ClassInfo { representative, key, witness, reflexive, terminal })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ClassificationResult { base: s.clone(), m, classes, counters: partial.counters })
}

fn orbit_minimal_big(h: &HnfMatrix, autos: &[IntMatrix]) -> bool {
    autos.iter().all(|a| {
        let g = h.matrix().mul(a).expect("square");
        let other = crate::linalg::hnf(&g).expect("nonsingular").h;
        other.flatten() >= h.matrix().flatten()
    })
}

/// Keeps one form per orbit of the automorphism group of `s` acting on
/// superlattices: the lexicographically smallest.
pub fn symmetry_reduce<'a, I>(s: &LatticeSimplex, forms: I) -> Result<impl Iterator<Item = HnfMatrix> + 'a>
where
    I: IntoIterator<Item = HnfMatrix> + 'a,
{
    let autos: Vec<IntMatrix> =
        automorphisms(s)?.maps.into_iter().filter(|a| !a.is_identity()).map(|a| a.matrix).collect();
    Ok(forms.into_iter().filter(move |h| orbit_minimal_big(h, &autos)))
}

/// Largest `m` admitting a canonical simplex over `s`, scanning downward from
/// the multiplicity bound. When the weights are Gorenstein only divisors of
/// the integral bound are tried.
pub fn maximum_multiplicity(s: &FanoSimplex, opts: &ClassifyOptions) -> Result<(u64, ClassificationResult)> {
    let w = s.weight_system();
    let kas = kas_bound(&w).floor().to_integer();
    let top = kas.to_u64().ok_or_else(|| Error::InvalidInput(format!("bound {kas} too large to scan")))?;
    let conrads = conrads_value(&w);
    for m in (1..=top).rev() {
        if w.is_gorenstein() && conrads.is_integer() && !(conrads.to_integer() % BigInt::from(m)).is_zero() {
            continue;
        }
        let r = classify_mult_m(s, m, opts)?;
        if !r.classes.is_empty() {
            return Ok((m, r));
        }
    }
    Err(Error::InvalidInput("no canonical simplex found, not even the base".into()))
}
