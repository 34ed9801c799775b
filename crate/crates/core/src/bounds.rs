//! Sylvester numbers, multiplicity and degree bounds, and the simplices
//! attaining them.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::optimizer::{candidate_vector, BaryVector};
use crate::simplex::{FanoSimplex, LatticeSimplex, WeightSystem};

/// Largest Sylvester index served by default; `s_24` has about 1.7 million digits.
pub const DEFAULT_SYLVESTER_CAP: usize = 24;

/// Memoized Sylvester numbers `s_1 = 2`, `s_i = s_{i-1}^2 - s_{i-1} + 1`.
#[derive(Clone, Debug)]
pub struct SylvesterCache {
    cap: usize,
    values: Vec<BigInt>,
}

impl SylvesterCache {
    pub fn new(cap: usize) -> Self {
        Self { cap, values: Vec::new() }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn get(&mut self, i: usize) -> Result<BigInt> {
        if i == 0 || i > self.cap {
            return Err(Error::IndexOutOfRange { index: i as i64, range: "1 <= i <= sylvester cap" });
        }
        while self.values.len() < i {
            let next = match self.values.last() {
                None => BigInt::from(2),
                Some(s) => s * s - s + 1,
            };
            self.values.push(next);
        }
        Ok(self.values[i - 1].clone())
    }
}

impl Default for SylvesterCache {
    fn default() -> Self {
        Self::new(DEFAULT_SYLVESTER_CAP)
    }
}

fn global_cache() -> &'static Mutex<SylvesterCache> {
    static CACHE: OnceLock<Mutex<SylvesterCache>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(SylvesterCache::default()))
}

/// `s_i` for `1 <= i <= 24`.
pub fn sylvester(i: usize) -> Result<BigInt> {
    global_cache().lock().unwrap_or_else(|e| e.into_inner()).get(i)
}

fn int(x: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(x.into())
}

/// `h^{d-1}` over the product of all weights but one smallest.
pub fn kas_bound(w: &WeightSystem) -> BigRational {
    let d = w.dim() as u32;
    let min = w.weights().iter().min().expect("nonempty");
    let prod: BigInt = w.weights().iter().product::<BigInt>() / min;
    BigRational::new(w.h().pow(d - 1), prod)
}

/// `h^{d-1}` over the product of all weights.
pub fn conrads_value(w: &WeightSystem) -> BigRational {
    let d = w.dim() as u32;
    let prod: BigInt = w.weights().iter().product();
    BigRational::new(w.h().pow(d - 1), prod)
}

/// Whether `m` divides the (integral) Conrads value.
pub fn conrads_divides(m: &BigInt, w: &WeightSystem) -> Result<bool> {
    let v = conrads_value(w);
    if !v.is_integer() {
        return Err(Error::NonIntegralBound(v.to_string()));
    }
    if m.is_zero() {
        return Ok(false);
    }
    Ok((v.to_integer() % m).is_zero())
}

fn check_dim(d: usize, min: usize) -> Result<()> {
    if d < min {
        return Err(Error::IndexOutOfRange { index: d as i64, range: "dimension too small" });
    }
    Ok(())
}

/// Maximal multiplicity of a canonical simplex of dimension `d`.
pub fn main_bound(d: usize) -> Result<BigInt> {
    check_dim(d, 2)?;
    Ok(match d {
        2 | 3 => BigInt::from(d + 1).pow(d as u32 - 1),
        4 => BigInt::from(128),
        _ => {
            let s: BigInt = sylvester(d - 1)? - 1;
            BigInt::from(3) * &s * &s
        }
    })
}

fn axis_scales_extremal(d: usize) -> Result<Vec<BigInt>> {
    Ok(match d {
        2 | 3 => vec![BigInt::from(d + 1); d],
        4 => [2, 8, 8, 8].iter().map(|&x| BigInt::from(x)).collect(),
        _ => {
            let mut v = (1..=d - 2).map(sylvester).collect::<Result<Vec<_>>>()?;
            let t: BigInt = BigInt::from(3) * (sylvester(d - 1)? - 1);
            v.push(t.clone());
            v.push(t);
            v
        }
    })
}

/// The simplex of maximal multiplicity in dimension `d`.
pub fn extremal_simplex(d: usize) -> Result<FanoSimplex> {
    check_dim(d, 2)?;
    FanoSimplex::try_from(LatticeSimplex::axis(&axis_scales_extremal(d)?)?)
}

/// Weights of [`extremal_simplex`], sorted descending.
pub fn extremal_weights(d: usize) -> Result<WeightSystem> {
    check_dim(d, 2)?;
    let w = match d {
        2 | 3 => vec![BigInt::one(); d + 1],
        4 => [4, 1, 1, 1, 1].iter().map(|&x| BigInt::from(x)).collect(),
        _ => {
            let t: BigInt = BigInt::from(3) * (sylvester(d - 1)? - 1);
            let mut v = (1..=d - 2).map(|i| Ok(&t / sylvester(i)?)).collect::<Result<Vec<_>>>()?;
            v.extend([BigInt::one(), BigInt::one(), BigInt::one()]);
            v
        }
    };
    WeightSystem::new(w)
}

/// Canonical simplices of maximal volume. Dimension 3 has two, returned in
/// lexicographic order of their vertex lists.
pub fn volume_maximizer_simplex(d: usize) -> Result<Vec<FanoSimplex>> {
    check_dim(d, 3)?;
    let scale_sets: Vec<Vec<BigInt>> = if d == 3 {
        vec![
            [2, 6, 6].iter().map(|&x| BigInt::from(x)).collect(),
            [2, 3, 12].iter().map(|&x| BigInt::from(x)).collect(),
        ]
    } else {
        let mut v = (1..d).map(sylvester).collect::<Result<Vec<_>>>()?;
        v.push(BigInt::from(2) * (sylvester(d)? - 1));
        vec![v]
    };
    let mut out = scale_sets
        .iter()
        .map(|s| FanoSimplex::try_from(LatticeSimplex::axis(s)?))
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|a, b| a.vertices().cmp(b.vertices()));
    Ok(out)
}

/// `2 (s_d - 1)^2`, the volume bound for canonical simplices with `d >= 4`.
pub fn volume_bound(d: usize) -> Result<BigInt> {
    check_dim(d, 3)?;
    if d == 3 {
        return Ok(BigInt::from(72));
    }
    let s: BigInt = sylvester(d)? - 1;
    Ok(BigInt::from(2) * &s * &s)
}

/// `(2(s_d-1)/s_1, ..., 2(s_d-1)/s_{d-1}, 1, 1)`.
pub fn reflexive_volume_extremal_weights(d: usize) -> Result<WeightSystem> {
    check_dim(d, 4)?;
    let t: BigInt = BigInt::from(2) * (sylvester(d)? - 1);
    let mut v = (1..d).map(|i| Ok(&t / sylvester(i)?)).collect::<Result<Vec<_>>>()?;
    v.extend([BigInt::one(), BigInt::one()]);
    WeightSystem::new(v)
}

/// The conjectured degree bound `s_d^d / (s_d - 1)^{d-2}` for terminal
/// fake weighted projective spaces, with the weights expected to attain it.
pub fn terminal_conjecture(d: usize) -> Result<(BigRational, WeightSystem)> {
    check_dim(d, 2)?;
    let s = sylvester(d)?;
    let bound = BigRational::new(s.pow(d as u32), (&s - BigInt::one()).pow(d as u32 - 2));
    let t: BigInt = &s - 1;
    let mut v = (1..d).map(|i| Ok(&t / sylvester(i)?)).collect::<Result<Vec<_>>>()?;
    v.extend([BigInt::one(), BigInt::one()]);
    Ok((bound, WeightSystem::new(v)?))
}

/// Sorted barycentric coordinates forced on a simplex of maximal
/// multiplicity, `d >= 5`.
pub fn expected_bary(d: usize) -> Result<BaryVector> {
    check_dim(d, 5)?;
    BaryVector::new(candidate_vector(d + 1, d - 1)?)
}

/// Outcome of checking a bound against an explicit witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundCertificate {
    pub statement: &'static str,
    pub dim: usize,
    pub claimed: BigRational,
    pub witness: Option<LatticeSimplex>,
    /// Named computed invariants, rendered as strings.
    pub computed: Vec<(String, String)>,
    pub pass: bool,
}

/// Checks the extremal simplex: canonical, reflexive, multiplicity equal to
/// the bound, expected weights, volume identity and (for `d >= 5`) the
/// forced barycentric coordinates.
pub fn certify_main_bound(d: usize) -> Result<BoundCertificate> {
    let bound = main_bound(d)?;
    let s = extremal_simplex(d)?;
    let w = s.weight_system();
    let expected_w = extremal_weights(d)?;
    let mult = s.multiplicity().index;
    let canonical = s.is_canonical()?;
    let reflexive = s.is_reflexive();
    let volume = s.volume();
    let weights_ok = w.sorted_desc() == expected_w.sorted_desc();
    let volume_ok = volume == &bound * w.h();
    let bary_ok = if d >= 5 { s.barycentric()?.sorted() == expected_bary(d)? } else { true };
    let tight = kas_bound(&w) == int(bound.clone());
    let computed = vec![
        ("multiplicity".to_string(), mult.to_string()),
        ("weights".to_string(), w.to_string()),
        ("h".to_string(), w.h().to_string()),
        ("volume".to_string(), volume.to_string()),
        ("canonical".to_string(), canonical.to_string()),
        ("reflexive".to_string(), reflexive.to_string()),
        ("barycentric_matches".to_string(), bary_ok.to_string()),
        ("kas_bound_tight".to_string(), tight.to_string()),
    ];
    let pass = mult == bound && canonical && reflexive && weights_ok && volume_ok && bary_ok && tight;
    Ok(BoundCertificate {
        statement: "main_bound",
        dim: d,
        claimed: int(bound),
        witness: Some(s.into_simplex()),
        computed,
        pass,
    })
}

/// Checks the volume maximizers are canonical with the stated volume.
pub fn certify_volume_maximizers(d: usize) -> Result<Vec<BoundCertificate>> {
    let bound = volume_bound(d)?;
    volume_maximizer_simplex(d)?
        .into_iter()
        .map(|s| {
            let volume = s.volume();
            let canonical = s.is_canonical()?;
            Ok(BoundCertificate {
                statement: "volume_maximizer",
                dim: d,
                claimed: int(bound.clone()),
                computed: vec![
                    ("volume".to_string(), volume.to_string()),
                    ("canonical".to_string(), canonical.to_string()),
                ],
                pass: canonical && volume == bound,
                witness: Some(s.into_simplex()),
            })
        })
        .collect()
}

/// Checks that the candidate weights of the terminal conjecture attain the
/// conjectured degree.
pub fn certify_terminal_conjecture(d: usize) -> Result<BoundCertificate> {
    let (bound, w) = terminal_conjecture(d)?;
    let degree = w.anticanonical_degree();
    Ok(BoundCertificate {
        statement: "terminal_conjecture_degree",
        dim: d,
        computed: vec![("weights".to_string(), w.to_string()), ("degree".to_string(), degree.to_string())],
        pass: degree == bound,
        claimed: bound,
        witness: None,
    })
}

/// Checks the degree of the reflexive volume maximizer weights.
pub fn certify_reflexive_degree(d: usize) -> Result<BoundCertificate> {
    let w = reflexive_volume_extremal_weights(d)?;
    let bound = volume_bound(d)?;
    let degree = w.anticanonical_degree();
    Ok(BoundCertificate {
        statement: "reflexive_degree",
        dim: d,
        computed: vec![("weights".to_string(), w.to_string()), ("degree".to_string(), degree.to_string())],
        pass: degree == int(bound.clone()),
        claimed: int(bound),
        witness: None,
    })
}
