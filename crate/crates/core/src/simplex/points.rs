//! Lattice point enumeration.
//!
//! Three strategies, tried in order:
//! * axis simplices `v + conv{0, a_1 e_{k_1}, ..., a_d e_{k_d}}` (any signs) are
//!   walked coordinate by coordinate with partial-sum pruning, so simplices
//!   with astronomically large boxes but few candidate points stay cheap;
//! * a bounding-box scan with exact barycentric sign tests when the box has
//!   at most `cap` points;
//! * otherwise the finite group `Z^{d+1} / <(v_i, 1)>` of order `Vol` is
//!   walked: its elements are the fractional barycentric coordinates of
//!   lattice points, and those with coordinate sum 1 are the non-vertex
//!   lattice points of the simplex.

use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::LatticeSimplex;
use crate::error::{Error, Result};
use crate::linalg::{snf, IntVec};

/// Default bound on enumeration work (box points, group order or visited nodes).
pub const DEFAULT_POINT_CAP: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PointCounts {
    pub interior: u64,
    /// Boundary points, vertices included.
    pub boundary: u64,
}

impl PointCounts {
    pub fn total(&self) -> u64 {
        self.interior + self.boundary
    }
}

/// A simplex `corner + conv{0, s_1 |a_1| e_{k_1}, ...}` with `s_i` the sign of `a_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxisForm {
    pub corner: IntVec,
    /// `(coordinate, signed length)`, sorted by absolute length.
    pub axes: Vec<(usize, BigInt)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Scope {
    Interior,
    Closure,
}

/// Callback receives a point and whether it is interior.
type Visitor<'a> = dyn FnMut(&[BigInt], bool) -> ControlFlow<()> + 'a;

impl LatticeSimplex {
    /// Recognizes axis simplices.
    pub fn axis_form(&self) -> Option<AxisForm> {
        let d = self.dim();
        'base: for (b, corner) in self.vertices.iter().enumerate() {
            let mut used = vec![false; d];
            let mut axes = Vec::with_capacity(d);
            for (i, v) in self.vertices.iter().enumerate() {
                if i == b {
                    continue;
                }
                let nz: Vec<usize> = (0..d).filter(|&k| v[k] != corner[k]).collect();
                if nz.len() != 1 || used[nz[0]] {
                    continue 'base;
                }
                used[nz[0]] = true;
                axes.push((nz[0], &v[nz[0]] - &corner[nz[0]]));
            }
            axes.sort_by(|x, y| x.1.abs().cmp(&y.1.abs()).then(x.0.cmp(&y.0)));
            return Some(AxisForm { corner: corner.clone(), axes });
        }
        None
    }

    pub fn lattice_points(&self) -> Result<Vec<IntVec>> {
        self.lattice_points_capped(DEFAULT_POINT_CAP)
    }

    pub fn lattice_points_capped(&self, cap: u64) -> Result<Vec<IntVec>> {
        let mut out = Vec::new();
        self.visit(cap, Scope::Closure, &mut |p, _| {
            out.push(p.to_vec());
            ControlFlow::Continue(())
        })?;
        out.sort();
        Ok(out)
    }

    pub fn interior_lattice_points(&self) -> Result<Vec<IntVec>> {
        self.interior_lattice_points_capped(DEFAULT_POINT_CAP)
    }

    pub fn interior_lattice_points_capped(&self, cap: u64) -> Result<Vec<IntVec>> {
        let mut out = Vec::new();
        self.visit(cap, Scope::Interior, &mut |p, _| {
            out.push(p.to_vec());
            ControlFlow::Continue(())
        })?;
        out.sort();
        Ok(out)
    }

    pub fn point_counts(&self, cap: u64) -> Result<PointCounts> {
        let mut c = PointCounts { interior: 0, boundary: 0 };
        self.visit(cap, Scope::Closure, &mut |_, interior| {
            if interior {
                c.interior += 1;
            } else {
                c.boundary += 1;
            }
            ControlFlow::Continue(())
        })?;
        Ok(c)
    }

    /// The origin is the only interior lattice point.
    pub fn is_canonical(&self) -> Result<bool> {
        self.is_canonical_capped(DEFAULT_POINT_CAP)
    }

    pub fn is_canonical_capped(&self, cap: u64) -> Result<bool> {
        let mut saw_origin = false;
        let mut other = false;
        self.visit(cap, Scope::Interior, &mut |p, _| {
            if p.iter().all(Zero::is_zero) {
                saw_origin = true;
                ControlFlow::Continue(())
            } else {
                other = true;
                ControlFlow::Break(())
            }
        })?;
        Ok(saw_origin && !other)
    }

    /// The lattice points are exactly the vertices and the origin.
    pub fn is_terminal(&self) -> Result<bool> {
        self.is_terminal_capped(DEFAULT_POINT_CAP)
    }

    pub fn is_terminal_capped(&self, cap: u64) -> Result<bool> {
        if !self.is_canonical_capped(cap)? {
            return Ok(false);
        }
        // An edge of lattice length > 1 carries a non-vertex point.
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                let diff: IntVec = a.iter().zip(b).map(|(x, y)| x - y).collect();
                if !crate::linalg::gcd_vec(&diff).is_one() {
                    return Ok(false);
                }
            }
        }
        let mut extra = false;
        self.visit(cap, Scope::Closure, &mut |p, _| {
            if p.iter().all(Zero::is_zero) || self.vertices.iter().any(|v| v.as_slice() == p) {
                ControlFlow::Continue(())
            } else {
                extra = true;
                ControlFlow::Break(())
            }
        })?;
        Ok(!extra)
    }

    fn visit(&self, cap: u64, scope: Scope, f: &mut Visitor<'_>) -> Result<()> {
        if let Some(axis) = self.axis_form() {
            return visit_axis(&axis, cap, scope, f);
        }
        let box_size = self.box_size();
        if box_size <= BigInt::from(cap) {
            return self.visit_box(scope, f);
        }
        let vol = self.volume();
        if vol <= BigInt::from(cap) {
            return self.visit_group(scope, f);
        }
        Err(Error::EnumerationCapExceeded { needed: box_size.min(vol).to_string(), cap })
    }

    fn bounds(&self) -> Vec<(BigInt, BigInt)> {
        (0..self.dim())
            .map(|k| {
                let lo = self.vertices.iter().map(|v| &v[k]).min().expect("nonempty").clone();
                let hi = self.vertices.iter().map(|v| &v[k]).max().expect("nonempty").clone();
                (lo, hi)
            })
            .collect()
    }

    fn box_size(&self) -> BigInt {
        self.bounds().iter().map(|(lo, hi)| hi - lo + 1).product()
    }

    fn visit_box(&self, scope: Scope, f: &mut Visitor<'_>) -> Result<()> {
        let (adj, det) = self.homogeneous_matrix().adjugate()?;
        let n = self.dim() + 1;
        let sign = if det.is_negative() { -1 } else { 1 };
        let bounds = self.bounds();
        let small_adj: Option<Vec<Vec<i64>>> = adj.to_i64_rows();
        let small_bounds: Option<Vec<(i64, i64)>> =
            bounds.iter().map(|(lo, hi)| Some((lo.to_i64()?, hi.to_i64()?))).collect();

        // Returns Some(interior) for points in the closed simplex.
        let classify_big = |y: &[BigInt]| -> Option<bool> {
            let mut interior = true;
            for i in 0..n {
                let mut s: BigInt = adj[(i, n - 1)].clone();
                for (k, yk) in y.iter().enumerate() {
                    s += &adj[(i, k)] * yk;
                }
                if sign < 0 {
                    s = -s;
                }
                if s.is_negative() {
                    return None;
                }
                if s.is_zero() {
                    interior = false;
                }
            }
            Some(interior)
        };

        if let (Some(adj64), Some(b64)) = (small_adj, small_bounds) {
            let mut y: Vec<i64> = b64.iter().map(|(lo, _)| *lo).collect();
            let mut ybig: IntVec = vec![BigInt::zero(); n - 1];
            loop {
                let class = classify_small(&adj64, &y, sign).or_else(|| {
                    for (b, v) in ybig.iter_mut().zip(&y) {
                        *b = BigInt::from(*v);
                    }
                    Some(classify_big(&ybig))
                });
                if let Some(Some(interior)) = class {
                    if scope == Scope::Closure || interior {
                        for (b, v) in ybig.iter_mut().zip(&y) {
                            *b = BigInt::from(*v);
                        }
                        if f(&ybig, interior).is_break() {
                            return Ok(());
                        }
                    }
                }
                // Odometer step.
                let mut k = 0;
                loop {
                    if k == y.len() {
                        return Ok(());
                    }
                    if y[k] < b64[k].1 {
                        y[k] += 1;
                        break;
                    }
                    y[k] = b64[k].0;
                    k += 1;
                }
            }
        }

        let mut y: IntVec = bounds.iter().map(|(lo, _)| lo.clone()).collect();
        loop {
            if let Some(interior) = classify_big(&y) {
                if (scope == Scope::Closure || interior) && f(&y, interior).is_break() {
                    return Ok(());
                }
            }
            let mut k = 0;
            loop {
                if k == y.len() {
                    return Ok(());
                }
                if y[k] < bounds[k].1 {
                    y[k] += 1;
                    break;
                }
                y[k] = bounds[k].0.clone();
                k += 1;
            }
        }
    }

    fn visit_group(&self, scope: Scope, f: &mut Visitor<'_>) -> Result<()> {
        // U W V = S  =>  W^{-1} = V S^{-1} U, so the fractional barycentric
        // coordinates of lattice points are V (k_j / s_j) mod 1.
        let w = self.homogeneous_matrix();
        let n = w.rows();
        let r = snf(&w);
        let diag: Vec<BigInt> = (0..n).map(|i| r.s[(i, i)].clone()).collect();
        let modulus = diag[n - 1].clone();
        let m = modulus.to_i128().ok_or_else(|| Error::EnumerationCapExceeded {
            needed: modulus.to_string(),
            cap: u64::MAX,
        })?;
        let radices: Vec<i128> = diag.iter().map(|s| s.to_i128().expect("divides the modulus")).collect();
        // Generator j contributes column j of V scaled by modulus / s_j.
        let gens: Vec<Vec<i128>> = (0..n)
            .map(|j| {
                let scale = &modulus / &diag[j];
                (0..n)
                    .map(|i| (&r.v[(i, j)] * &scale).mod_floor(&modulus).to_i128().expect("reduced"))
                    .collect()
            })
            .collect();

        if scope == Scope::Closure {
            for v in &self.vertices {
                if f(v, false).is_break() {
                    return Ok(());
                }
            }
        }
        let mut digits = vec![0i128; n];
        let mut acc = vec![0i128; n];
        loop {
            // Advance to the next group element; the first (zero) is the vertex class.
            let mut k = 0;
            loop {
                if k == n {
                    return Ok(());
                }
                digits[k] += 1;
                for (a, g) in acc.iter_mut().zip(&gens[k]) {
                    *a = (*a + g) % m;
                }
                if digits[k] < radices[k] {
                    break;
                }
                // s_k * gen_k is 0 mod m, so the accumulator is already wrapped.
                digits[k] = 0;
                k += 1;
            }
            if acc.iter().sum::<i128>() != m {
                continue;
            }
            let interior = acc.iter().all(|a| *a > 0);
            if scope == Scope::Interior && !interior {
                continue;
            }
            let d = self.dim();
            let point: IntVec = (0..d)
                .map(|c| {
                    let s: BigInt = self.vertices.iter().zip(&acc).map(|(v, a)| &v[c] * BigInt::from(*a)).sum();
                    debug_assert!(s.is_multiple_of(&modulus));
                    s / &modulus
                })
                .collect();
            if f(&point, interior).is_break() {
                return Ok(());
            }
        }
    }
}

/// `None` when the point is outside or the arithmetic would overflow;
/// overflow is signalled by the outer `Option` being `None` via a second pass.
fn classify_small(adj: &[Vec<i64>], y: &[i64], sign: i64) -> Option<Option<bool>> {
    let n = adj.len();
    let mut interior = true;
    for row in adj.iter().take(n) {
        let mut s: i128 = row[n - 1] as i128;
        for (a, yk) in row.iter().zip(y) {
            s = s.checked_add((*a as i128).checked_mul(*yk as i128)?)?;
        }
        s *= sign as i128;
        if s < 0 {
            return Some(None);
        }
        if s == 0 {
            interior = false;
        }
    }
    Some(Some(interior))
}

fn visit_axis(axis: &AxisForm, cap: u64, scope: Scope, f: &mut Visitor<'_>) -> Result<()> {
    // Points corner + sum t_i sign_i e_{k_i} with t >= 0 and sum t_i / |a_i| <= 1.
    // Scaled by L = lcm |a_i|: sum t_i c_i <= L with c_i = L / |a_i|.
    let lengths: Vec<BigInt> = axis.axes.iter().map(|(_, a)| a.abs()).collect();
    let l = lengths.iter().fold(BigInt::one(), |acc, a| acc.lcm(a));
    let c: Vec<BigInt> = lengths.iter().map(|a| &l / a).collect();
    // Minimum budget needed by the coordinates after position i (interior: t >= 1).
    let mut tail_min = vec![BigInt::zero(); c.len() + 1];
    for i in (0..c.len()).rev() {
        tail_min[i] = &tail_min[i + 1] + &c[i];
    }
    let mut walker = AxisWalker {
        axis,
        c: &c,
        l: &l,
        tail_min: &tail_min,
        scope,
        steps: 0,
        cap,
        t: vec![BigInt::zero(); c.len()],
        point: axis.corner.clone(),
    };
    match walker.walk(0, &BigInt::zero(), f) {
        Ok(_) => Ok(()),
        Err(e) => Err(e),
    }
}

struct AxisWalker<'a> {
    axis: &'a AxisForm,
    c: &'a [BigInt],
    l: &'a BigInt,
    tail_min: &'a [BigInt],
    scope: Scope,
    steps: u64,
    cap: u64,
    t: Vec<BigInt>,
    point: IntVec,
}

impl AxisWalker<'_> {
    fn walk(&mut self, i: usize, used: &BigInt, f: &mut Visitor<'_>) -> Result<ControlFlow<()>> {
        self.steps += 1;
        if self.steps > self.cap {
            return Err(Error::EnumerationCapExceeded { needed: format!("more than {}", self.cap), cap: self.cap });
        }
        if i == self.c.len() {
            let interior = self.t.iter().all(|t| t.is_positive()) && used < self.l;
            if self.scope == Scope::Interior && !interior {
                return Ok(ControlFlow::Continue(()));
            }
            return Ok(f(&self.point, interior));
        }
        let (lo, hi) = match self.scope {
            // used + t c_i + tail_min[i+1] < L
            Scope::Interior => {
                let room: BigInt = self.l - used - &self.tail_min[i + 1] - 1;
                if room.is_negative() {
                    return Ok(ControlFlow::Continue(()));
                }
                (BigInt::one(), room / &self.c[i])
            }
            Scope::Closure => (BigInt::zero(), (self.l - used) / &self.c[i]),
        };
        let (coord, ref signed) = self.axis.axes[i];
        let step = if signed.is_negative() { -BigInt::one() } else { BigInt::one() };
        let base = self.point[coord].clone();
        let mut t = lo;
        while t <= hi {
            self.t[i] = t.clone();
            self.point[coord] = &base + &step * &t;
            let next_used = used + &t * &self.c[i];
            if self.walk(i + 1, &next_used, f)?.is_break() {
                self.point[coord] = base;
                return Ok(ControlFlow::Break(()));
            }
            t += 1;
        }
        self.point[coord] = base;
        self.t[i] = BigInt::zero();
        Ok(ControlFlow::Continue(()))
    }
}
