use fwps::equivalence::{canonical_key, is_equivalent};
use fwps::linalg::{hnf, snf, IntMatrix};
use fwps::optimizer::in_xn;
use fwps::simplex::{FanoSimplex, LatticeSimplex, WeightSystem};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

/// Laplace expansion; fine for the small sizes used here.
fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = BigInt::zero();
    for j in 0..n {
        let sub: Vec<Vec<BigInt>> =
            m[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect()).collect();
        let term = &m[0][j] * det(&sub);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

fn rows(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    m.row_vecs()
}

fn mat(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-9i64..=9, n), n)
}

/// Products of elementary row operations and sign flips.
fn unimodular(d: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec((0..d, 0..d, -3i64..=3), 0..12).prop_map(move |ops| {
        let mut m: Vec<Vec<BigInt>> = (0..d).map(|i| (0..d).map(|j| big((i == j) as i64)).collect()).collect();
        for (i, j, k) in ops {
            if i == j {
                m[i].iter_mut().for_each(|x| *x = -x.clone());
            } else {
                let src = m[j].clone();
                for (a, b) in m[i].iter_mut().zip(&src) {
                    *a += big(k) * b;
                }
            }
        }
        IntMatrix::from_rows(&m).unwrap()
    })
}

fn weights(n: usize) -> impl Strategy<Value = WeightSystem> {
    prop::collection::vec(1i64..=12, n).prop_filter_map("not a valid weight system", |w| {
        let ws = WeightSystem::from_i64(&w).ok()?;
        ws.is_well_formed().then_some(ws)
    })
}

fn image(s: &LatticeSimplex, a: &IntMatrix, t: &[i64]) -> LatticeSimplex {
    let t: Vec<BigInt> = t.iter().map(|&x| big(x)).collect();
    s.linear_image(a).unwrap().translate(&t)
}

fn fano_and_image(d: usize) -> impl Strategy<Value = (FanoSimplex, IntMatrix, Vec<i64>)> {
    (weights(d + 1), unimodular(d), prop::collection::vec(-20i64..=20, d))
        .prop_map(|(w, a, t)| (FanoSimplex::from_weights(&w).unwrap(), a, t))
}

fn sorted_desc(mut v: Vec<BigInt>) -> Vec<BigInt> {
    v.sort_by(|a, b| b.cmp(a));
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn hnf_is_reduced_and_unimodular(a in mat(4)) {
        let a = IntMatrix::from_i64(&a);
        let d = det(&rows(&a));
        prop_assume!(!d.is_zero());
        let r = hnf(&a).unwrap();
        prop_assert_eq!(r.u.mul(&a).unwrap(), r.h.clone());
        prop_assert!(det(&rows(&r.u)).abs().is_one());
        let h = rows(&r.h);
        let mut diag = BigInt::one();
        for i in 0..4 {
            prop_assert!(h[i][i].is_positive());
            diag *= &h[i][i];
            for j in 0..4 {
                if j < i {
                    prop_assert!(h[i][j].is_zero());
                } else if j > i {
                    prop_assert!(!h[i][j].is_negative() && h[i][j] < h[j][j]);
                }
            }
        }
        prop_assert_eq!(diag, d.abs());
    }

    #[test]
    fn snf_is_a_divisibility_chain(a in mat(3)) {
        let a = IntMatrix::from_i64(&a);
        let d = det(&rows(&a));
        let r = snf(&a);
        prop_assert_eq!(r.u.mul(&a).unwrap().mul(&r.v).unwrap(), r.s.clone());
        prop_assert!(det(&rows(&r.u)).abs().is_one());
        prop_assert!(det(&rows(&r.v)).abs().is_one());
        let s = rows(&r.s);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    prop_assert!(s[i][j].is_zero());
                }
            }
            prop_assert!(!s[i][i].is_negative());
            if i + 1 < 3 && !s[i][i].is_zero() {
                prop_assert!(s[i + 1][i + 1].is_multiple_of(&s[i][i]));
            }
        }
        prop_assert_eq!(s[0][0].clone() * &s[1][1] * &s[2][2], d.abs());
    }

    #[test]
    fn weighted_simplex_invariants(w in weights(4)) {
        let s = FanoSimplex::from_weights(&w).unwrap();
        prop_assert_eq!(s.volume(), w.h().clone());
        prop_assert!(s.multiplicity().index.is_one());
        prop_assert_eq!(s.weight_system().sorted_desc(), w.sorted_desc());
        prop_assert_eq!(s.is_reflexive(), w.is_gorenstein());
        if s.is_canonical().unwrap() {
            let b = s.barycentric().unwrap().sorted();
            prop_assert_eq!(in_xn(b.entries()), Ok(()));
        }
    }

    #[test]
    fn images_keep_invariants((s, a, t) in fano_and_image(3)) {
        let img = image(&s, &a, &t);
        prop_assert_eq!(img.volume(), s.volume());
        let linear = s.linear_image(&a).unwrap();
        prop_assert_eq!(linear.multiplicity(), s.multiplicity());
        prop_assert_eq!(
            sorted_desc(linear.weights().unwrap().weights().to_vec()),
            s.weight_system().sorted_desc()
        );
        prop_assert_eq!(img.volume(), &linear.multiplicity().index * linear.weights().unwrap().h());
    }

    #[test]
    fn equivalence_finds_valid_witnesses((s, a, t) in fano_and_image(3)) {
        let img = image(&s, &a, &t);
        let fwd = is_equivalent(&s, &img).unwrap().expect("image is equivalent");
        prop_assert!(det(&rows(&fwd.matrix)).abs().is_one());
        for (i, v) in s.vertices().iter().enumerate() {
            prop_assert_eq!(&fwd.apply(v), &img.vertices()[fwd.vertex_permutation[i]]);
        }
        let back = is_equivalent(&img, &s).unwrap().expect("equivalence is symmetric");
        for (i, v) in img.vertices().iter().enumerate() {
            prop_assert_eq!(&back.apply(v), &s.vertices()[back.vertex_permutation[i]]);
        }
    }

    #[test]
    fn canonical_key_is_invariant((s, a, t) in fano_and_image(3)) {
        let img = image(&s, &a, &t);
        prop_assert_eq!(canonical_key(&s).unwrap(), canonical_key(&img).unwrap());
    }

    #[test]
    fn different_weights_are_inequivalent(w1 in weights(4), w2 in weights(4)) {
        prop_assume!(w1.sorted_desc() != w2.sorted_desc());
        let a = FanoSimplex::from_weights(&w1).unwrap();
        let b = FanoSimplex::from_weights(&w2).unwrap();
        prop_assert!(is_equivalent(&a, &b).unwrap().is_none());
        prop_assert_ne!(canonical_key(&a).unwrap(), canonical_key(&b).unwrap());
    }
}
