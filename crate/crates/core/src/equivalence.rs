//! Affine unimodular equivalence of lattice simplices.
//!
//! Two simplices are equivalent when `x -> A x + w` with `A` in `GL_d(Z)`
//! and `w` integral maps one vertex set onto the other. Any such map is
//! determined by the induced vertex bijection, so the search runs over
//! bijections that respect per-vertex invariants.
//!
//! The per-vertex invariant is the list of invariant factors of the edge
//! matrix of the opposite facet, which is unchanged by affine unimodular
//! maps. When both simplices have a unique interior lattice point, the
//! barycentric weight of each vertex with respect to that point is used as
//! well.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{hnf, hnf_small, snf, IntMatrix, IntVec};
use crate::simplex::LatticeSimplex;

/// Largest dimension for which the factorial searches run.
pub const MAX_SEARCH_DIM: usize = 8;

/// Interior point enumeration budget used to find an anchor point.
const ANCHOR_CAP: u64 = 1_000_000;

/// `x -> matrix * x + translation`, sending source vertex `i` to target
/// vertex `vertex_permutation[i]`.
#[derive(Clone, PartialEq, Eq)]
pub struct UnimodularMap {
    pub matrix: IntMatrix,
    pub translation: IntVec,
    pub vertex_permutation: Vec<usize>,
}

impl UnimodularMap {
    pub fn apply(&self, x: &[BigInt]) -> IntVec {
        let mut y = self.matrix.mul_vec(x).expect("dimensions checked at construction");
        for (a, b) in y.iter_mut().zip(&self.translation) {
            *a += b;
        }
        y
    }

    pub fn is_identity(&self) -> bool {
        self.vertex_permutation.iter().enumerate().all(|(i, p)| i == *p)
    }
}

impl fmt::Debug for UnimodularMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UnimodularMap")
            .field("matrix", &self.matrix.row_vecs())
            .field("translation", &self.translation)
            .field("vertex_permutation", &self.vertex_permutation)
            .finish()
    }
}

/// Maps of a simplex onto itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomorphismGroup {
    pub maps: Vec<UnimodularMap>,
}

impl AutomorphismGroup {
    pub fn order(&self) -> usize {
        self.maps.len()
    }

    pub fn permutations(&self) -> Vec<Vec<usize>> {
        self.maps.iter().map(|m| m.vertex_permutation.clone()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Signature {
    facet: Vec<BigInt>,
    weight: Option<BigInt>,
}

fn guard(d: usize) -> Result<()> {
    if d > MAX_SEARCH_DIM {
        return Err(Error::FactorialGuard { dim: d });
    }
    Ok(())
}

fn facet_factors(s: &LatticeSimplex, skip: usize) -> Vec<BigInt> {
    let verts = s.vertices();
    let facet: Vec<&IntVec> = verts.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, v)| v).collect();
    let base = facet[0];
    let cols: Vec<IntVec> = facet[1..].iter().map(|v| v.iter().zip(base).map(|(a, b)| a - b).collect()).collect();
    let m = IntMatrix::from_columns(&cols).expect("facet has d - 1 edges");
    let r = snf(&m);
    (0..m.cols()).map(|i| r.s[(i, i)].clone()).collect()
}

/// The unique interior lattice point, if there is one and it is cheap to find.
fn anchor(s: &LatticeSimplex) -> Option<IntVec> {
    match s.interior_lattice_points_capped(ANCHOR_CAP) {
        Ok(mut pts) if pts.len() == 1 => pts.pop(),
        _ => None,
    }
}

fn signatures(s: &LatticeSimplex, anchor: Option<&IntVec>) -> Vec<Signature> {
    let weights = anchor.map(|p| {
        let neg: IntVec = p.iter().map(|x| -x).collect();
        s.translate(&neg).weights().expect("interior point").weights().to_vec()
    });
    (0..s.vertices().len())
        .map(|i| Signature { facet: facet_factors(s, i), weight: weights.as_ref().map(|w| w[i].clone()) })
        .collect()
}

fn sorted<T: Ord + Clone>(v: &[T]) -> Vec<T> {
    let mut v = v.to_vec();
    v.sort();
    v
}

/// Solves for the map sending `src[i]` to `dst[perm[i]]`; `None` if it is not
/// integral.
fn solve_map(src: &LatticeSimplex, dst: &LatticeSimplex, perm: &[usize], src_adj: &(IntMatrix, BigInt)) -> Option<UnimodularMap> {
    let d = src.dim();
    let t = dst.vertices();
    let base = &t[perm[0]];
    let mut mt = IntMatrix::zeros(d, d);
    for (col, &p) in perm[1..].iter().enumerate() {
        for row in 0..d {
            mt[(row, col)] = &t[p][row] - &base[row];
        }
    }
    let (adj, det) = src_adj;
    let num = mt.mul(adj).expect("square");
    if num.flatten().iter().any(|x| !(x % det).is_zero()) {
        return None;
    }
    let data = num.flatten().iter().map(|x| x / det).collect();
    let a = IntMatrix::new(d, d, data).expect("shape");
    if !a.det().expect("square").abs().is_one() {
        return None;
    }
    let image = a.mul_vec(&src.vertices()[0]).expect("shape");
    let translation: IntVec = base.iter().zip(&image).map(|(b, x)| b - x).collect();
    Some(UnimodularMap { matrix: a, translation, vertex_permutation: perm.to_vec() })
}

/// Walks every bijection `i -> perm[i]` with `src_sig[i] == dst_sig[perm[i]]`.
/// Stops when `f` returns true.
fn for_each_bijection(src_sig: &[Signature], dst_sig: &[Signature], f: &mut dyn FnMut(&[usize]) -> bool) {
    fn rec(
        i: usize,
        src: &[Signature],
        dst: &[Signature],
        used: &mut [bool],
        perm: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if i == src.len() {
            return f(perm);
        }
        for j in 0..dst.len() {
            if used[j] || dst[j] != src[i] {
                continue;
            }
            used[j] = true;
            perm.push(j);
            let stop = rec(i + 1, src, dst, used, perm, f);
            perm.pop();
            used[j] = false;
            if stop {
                return true;
            }
        }
        false
    }
    let mut used = vec![false; dst_sig.len()];
    let mut perm = Vec::with_capacity(src_sig.len());
    rec(0, src_sig, dst_sig, &mut used, &mut perm, f);
}

fn paired_signatures(a: &LatticeSimplex, b: &LatticeSimplex) -> (Vec<Signature>, Vec<Signature>) {
    match (anchor(a), anchor(b)) {
        (Some(pa), Some(pb)) => (signatures(a, Some(&pa)), signatures(b, Some(&pb))),
        _ => (signatures(a, None), signatures(b, None)),
    }
}

/// A map sending `a` onto `b`, if one exists.
pub fn is_equivalent(a: &LatticeSimplex, b: &LatticeSimplex) -> Result<Option<UnimodularMap>> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    guard(a.dim())?;
    if a.volume() != b.volume() {
        return Ok(None);
    }
    let (sa, sb) = paired_signatures(a, b);
    if sorted(&sa) != sorted(&sb) {
        return Ok(None);
    }
    let adj = a.edge_matrix(0).adjugate()?;
    let mut found = None;
    for_each_bijection(&sa, &sb, &mut |perm| {
        found = solve_map(a, b, perm, &adj);
        found.is_some()
    });
    Ok(found)
}

/// Every affine unimodular map of `s` onto itself, identity first.
pub fn automorphisms(s: &LatticeSimplex) -> Result<AutomorphismGroup> {
    guard(s.dim())?;
    let sig = signatures(s, anchor(s).as_ref());
    let adj = s.edge_matrix(0).adjugate()?;
    let mut maps = Vec::new();
    for_each_bijection(&sig, &sig, &mut |perm| {
        if let Some(m) = solve_map(s, s, perm, &adj) {
            maps.push(m);
        }
        false
    });
    Ok(AutomorphismGroup { maps })
}

/// Vertex orderings whose signature sequence is the sorted one.
fn consistent_orderings(sig: &[Signature], f: &mut dyn FnMut(&[usize])) {
    let target = sorted(sig);
    for_each_bijection(&target, sig, &mut |perm| {
        f(perm);
        false
    });
}

fn hnf_flat(m: &IntMatrix) -> Vec<BigInt> {
    if let Some(rows) = m.to_i64_rows() {
        if let Some(h) = hnf_small(rows) {
            return h.into_iter().flatten().map(BigInt::from).collect();
        }
    }
    hnf(m).expect("nonsingular").h.flatten().to_vec()
}

/// A byte string equal for two simplices exactly when they are equivalent.
pub fn canonical_key(s: &LatticeSimplex) -> Result<Vec<u8>> {
    let d = s.dim();
    guard(d)?;
    let sig = signatures(s, None);
    let verts = s.vertices();
    let mut best: Option<Vec<BigInt>> = None;
    consistent_orderings(&sig, &mut |order| {
        let base = &verts[order[0]];
        let mut m = IntMatrix::zeros(d, d);
        for (col, &k) in order[1..].iter().enumerate() {
            for row in 0..d {
                m[(row, col)] = &verts[k][row] - &base[row];
            }
        }
        let flat = hnf_flat(&m);
        if best.as_ref().is_none_or(|b| flat < *b) {
            best = Some(flat);
        }
    });
    let mut key = format!("d{d}|");
    for g in sorted(&sig) {
        let parts: Vec<String> = g.facet.iter().map(ToString::to_string).collect();
        key.push_str(&parts.join(","));
        key.push(';');
    }
    key.push('|');
    let parts: Vec<String> = best.expect("at least one ordering").iter().map(ToString::to_string).collect();
    key.push_str(&parts.join(","));
    Ok(key.into_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::to_int_vec;

    fn p2() -> LatticeSimplex {
        LatticeSimplex::from_i64(&[[1, 0], [0, 1], [-1, -1]]).unwrap()
    }

    fn s_star() -> LatticeSimplex {
        LatticeSimplex::axis(&to_int_vec(&[3, 3, 6])).unwrap()
    }

    fn mult_nine_p() -> LatticeSimplex {
        LatticeSimplex::from_i64(&[[1, 0, 0], [0, 1, 0], [2, 5, 9], [-4, -7, -9]]).unwrap()
    }

    fn image(s: &LatticeSimplex) -> LatticeSimplex {
        let a = IntMatrix::from_i64(&[[2, 1, 1], [1, 1, 0], [1, 1, 1]]);
        assert_eq!(a.det().unwrap().abs(), BigInt::from(1));
        let mut v = s.linear_image(&a).unwrap().translate(&to_int_vec(&[4, -7, 2])).into_vertices();
        v.rotate_left(1);
        v.swap(0, 2);
        LatticeSimplex::new(v).unwrap()
    }

    #[test]
    fn image_is_equivalent_with_witness() {
        for s in [s_star(), mult_nine_p()] {
            let t = image(&s);
            let m = is_equivalent(&s, &t).unwrap().expect("equivalent");
            for (i, v) in s.vertices().iter().enumerate() {
                assert_eq!(m.apply(v), t.vertices()[m.vertex_permutation[i]]);
            }
            assert_eq!(canonical_key(&s).unwrap(), canonical_key(&t).unwrap());
        }
    }

    #[test]
    fn multiplicity_nine_pair_is_inequivalent() {
        assert_eq!(is_equivalent(&s_star(), &mult_nine_p()).unwrap(), None);
        assert_ne!(canonical_key(&s_star()).unwrap(), canonical_key(&mult_nine_p()).unwrap());
    }

    #[test]
    fn reflexive_restriction_is_self_dual() {
        let s = LatticeSimplex::axis(&to_int_vec(&[2, 3, 10])).unwrap().restrict_to_vertex_lattice().unwrap();
        let dual = s.dual().unwrap().to_lattice_simplex().unwrap();
        assert!(is_equivalent(&s, &dual).unwrap().is_some());
    }

    #[test]
    fn automorphism_examples() {
        assert_eq!(automorphisms(&p2()).unwrap().order(), 6);

        let w = crate::simplex::WeightSystem::from_i64(&[4, 1, 1, 1, 1]).unwrap();
        let s = crate::simplex::FanoSimplex::from_weights(&w).unwrap();
        let g = automorphisms(&s).unwrap();
        let heavy = s.weight_system().weights().iter().position(|x| *x == BigInt::from(4)).unwrap();
        let perms = g.permutations();
        assert!(perms.iter().all(|p| p[heavy] == heavy));
        assert_eq!(g.order(), 24);

        let ex1 = LatticeSimplex::axis(&to_int_vec(&[2, 3, 10])).unwrap();
        let g = automorphisms(&ex1).unwrap();
        assert_eq!(g.order(), 1);
        assert!(g.maps[0].is_identity());
    }

    #[test]
    fn key_ignores_vertex_order() {
        let s = mult_nine_p();
        let mut v = s.vertices().to_vec();
        v.reverse();
        let r = LatticeSimplex::new(v).unwrap();
        assert_eq!(canonical_key(&s).unwrap(), canonical_key(&r).unwrap());
    }

    #[test]
    fn guards() {
        let big = LatticeSimplex::axis(&to_int_vec(&[2; 9])).unwrap();
        assert_eq!(canonical_key(&big), Err(Error::FactorialGuard { dim: 9 }));
        assert!(matches!(is_equivalent(&p2(), &s_star()), Err(Error::DimensionMismatch { .. })));
    }
}
