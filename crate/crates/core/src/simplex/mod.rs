//! Lattice simplices and their invariants.
//!
//! A [`LatticeSimplex`] is any full-dimensional simplex with integer
//! vertices; every invariant is defined for it. A [`FanoSimplex`] additionally
//! has the origin in its strict interior and primitive vertices.

mod dual;
mod points;
mod report;

use std::fmt;
use std::ops::Deref;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{echelon_rows, gcd_vec, lattice_index, solve_rational, to_int_vec, IntMatrix, IntVec};
use crate::optimizer::BaryVector;

pub use dual::DualSimplex;
pub use points::{AxisForm, PointCounts, DEFAULT_POINT_CAP};
pub use report::{SimplexFlags, SimplexReport};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LatticeSimplex {
    vertices: Vec<IntVec>,
}

impl LatticeSimplex {
    /// Validates `d + 1` affinely independent integer points in dimension `d >= 2`.
    pub fn new(vertices: Vec<IntVec>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::InvalidInput(format!("a simplex of dimension >= 2 needs >= 3 vertices, got {n}")));
        }
        let dim = n - 1;
        if let Some(v) = vertices.iter().find(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: v.len() });
        }
        let s = Self { vertices };
        if s.edge_matrix(0).det()?.is_zero() {
            return Err(Error::NotFullDim);
        }
        Ok(s)
    }

    /// Convenience constructor from small integer coordinates.
    pub fn from_i64<R: AsRef<[i64]>>(vertices: &[R]) -> Result<Self> {
        Self::new(vertices.iter().map(|v| to_int_vec(v.as_ref())).collect())
    }

    /// The simplex `conv{0, a_1 e_1, ..., a_d e_d} - (1, ..., 1)`.
    pub fn axis(scales: &[BigInt]) -> Result<Self> {
        let d = scales.len();
        let corner: IntVec = vec![-BigInt::one(); d];
        let mut vertices = vec![corner.clone()];
        for (i, a) in scales.iter().enumerate() {
            let mut v = corner.clone();
            v[i] += a;
            vertices.push(v);
        }
        Self::new(vertices)
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[IntVec] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<IntVec> {
        self.vertices
    }

    pub fn translate(&self, t: &[BigInt]) -> Self {
        let vertices = self
            .vertices
            .iter()
            .map(|v| v.iter().zip(t).map(|(a, b)| a + b).collect())
            .collect();
        Self { vertices }
    }

    /// Image under the linear map `x -> m x`. `m` must be nonsingular.
    pub fn linear_image(&self, m: &IntMatrix) -> Result<Self> {
        if m.rows() != self.dim() || m.cols() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: m.rows() });
        }
        let vertices = self.vertices.iter().map(|v| m.mul_vec(v)).collect::<Result<Vec<_>>>()?;
        Self::new(vertices)
    }

    /// Same simplex with vertices sorted lexicographically.
    pub fn sorted(&self) -> Self {
        let mut vertices = self.vertices.clone();
        vertices.sort();
        Self { vertices }
    }

    /// `d x d` matrix whose columns are `v_i - v_base` for `i != base`.
    pub fn edge_matrix(&self, base: usize) -> IntMatrix {
        let d = self.dim();
        let b = &self.vertices[base];
        let mut m = IntMatrix::zeros(d, d);
        for (col, v) in self.vertices.iter().enumerate().filter(|(i, _)| *i != base).map(|(_, v)| v).enumerate() {
            for row in 0..d {
                m[(row, col)] = &v[row] - &b[row];
            }
        }
        m
    }

    /// `(d+1) x (d+1)` matrix with columns `(v_i, 1)`.
    pub(crate) fn homogeneous_matrix(&self) -> IntMatrix {
        let n = self.vertices.len();
        let mut m = IntMatrix::zeros(n, n);
        for (j, v) in self.vertices.iter().enumerate() {
            for (i, x) in v.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
            m[(n - 1, j)] = BigInt::one();
        }
        m
    }

    /// Normalized volume: a unimodular simplex has volume 1.
    pub fn volume(&self) -> BigInt {
        self.edge_matrix(0).det().expect("square").abs()
    }

    /// Index of the sublattice generated by the vertices, with the invariant
    /// factors of the quotient group.
    pub fn multiplicity(&self) -> MultiplicityResult {
        let li = lattice_index(&self.vertices).expect("vertices of a full-dimensional simplex span rank d");
        MultiplicityResult { index: li.index, invariant_factors: li.invariant_factors }
    }

    /// Signed coefficients of the linear relation among the vertices, from the
    /// maximal minors of the vertex matrix.
    fn kernel_relation(&self) -> Vec<BigInt> {
        let d = self.dim();
        (0..=d)
            .map(|skip| {
                let cols: Vec<IntVec> =
                    self.vertices.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, v)| v.clone()).collect();
                let minor = IntMatrix::from_columns(&cols).expect("d columns of length d").det().expect("square");
                if skip % 2 == 0 {
                    minor
                } else {
                    -minor
                }
            })
            .collect()
    }

    pub fn contains_origin_strictly(&self) -> bool {
        self.weights().is_ok()
    }

    /// The reduced weights: coprime positive integers with `sum w_i v_i = 0`.
    pub fn weights(&self) -> Result<WeightSystem> {
        let mut rel = self.kernel_relation();
        if rel.iter().any(Zero::is_zero) {
            return Err(Error::OriginNotInterior);
        }
        let positive = rel[0].is_positive();
        if rel.iter().any(|x| x.is_positive() != positive) {
            return Err(Error::OriginNotInterior);
        }
        if !positive {
            rel.iter_mut().for_each(|x| *x = -&*x);
        }
        let g = gcd_vec(&rel);
        let weights = rel.into_iter().map(|x| x / &g).collect();
        WeightSystem::new(weights)
    }

    /// Barycentric coordinates of the origin with respect to the vertices.
    pub fn barycentric(&self) -> Result<Barycentric> {
        let w = self.weights()?;
        let h = w.h().clone();
        let coords = w.weights().iter().map(|l| BigRational::new(l.clone(), h.clone())).collect();
        Ok(Barycentric { coords })
    }

    /// Translates the unique interior lattice point to the origin.
    pub fn normalize_interior_point(&self) -> Result<Self> {
        let interior = self.interior_lattice_points()?;
        if interior.len() != 1 {
            return Err(Error::WrongInteriorCount(interior.len()));
        }
        let shift: IntVec = interior[0].iter().map(|x| -x).collect();
        Ok(self.translate(&shift))
    }

    /// Rewrites the vertices in a basis of the lattice they generate.
    /// Requires the origin in the interior.
    pub fn restrict_to_vertex_lattice(&self) -> Result<Self> {
        self.weights()?;
        let d = self.dim();
        let (echelon, _) = echelon_rows(self.vertices.clone(), false).expect("BigInt arithmetic cannot overflow");
        let basis = IntMatrix::from_rows(&echelon[..d])?;
        // Coordinates c with c^T B = v^T, i.e. B^T c = v.
        let bt = basis.transpose();
        let vertices = self
            .vertices
            .iter()
            .map(|v| {
                let c = solve_rational(&bt, v)?;
                Ok(c.into_iter()
                    .map(|x| {
                        debug_assert!(x.is_integer());
                        x.to_integer()
                    })
                    .collect())
            })
            .collect::<Result<Vec<IntVec>>>()?;
        Self::new(vertices)
    }
}

impl fmt::Debug for LatticeSimplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "conv{{")?;
        for (k, v) in self.vertices.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "(")?;
            for (j, x) in v.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        write!(f, "}}")
    }
}

/// A lattice simplex with the origin strictly inside and primitive vertices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FanoSimplex(LatticeSimplex);

impl FanoSimplex {
    pub fn new(vertices: Vec<IntVec>) -> Result<Self> {
        Self::try_from(LatticeSimplex::new(vertices)?)
    }

    pub fn from_i64<R: AsRef<[i64]>>(vertices: &[R]) -> Result<Self> {
        Self::try_from(LatticeSimplex::from_i64(vertices)?)
    }

    /// The simplex of the weighted projective space with the given weights:
    /// images of the standard basis of `Z^{d+1}` in `Z^{d+1} / Z w`.
    pub fn from_weights(w: &WeightSystem) -> Result<Self> {
        if !w.is_well_formed() {
            return Err(Error::NotWellFormed);
        }
        let n = w.weights().len();
        if n < 3 {
            return Err(Error::InvalidInput("need at least three weights".into()));
        }
        // U w = e_0 for a unimodular U; rows 1.. of U give the quotient map.
        let column: Vec<IntVec> = w.weights().iter().map(|x| vec![x.clone()]).collect();
        let (_, u) = echelon_rows(column, true).expect("BigInt arithmetic cannot overflow");
        let u = IntMatrix::from_rows(&u.expect("tracked"))?;
        let quotient: Vec<IntVec> = (1..n).map(|i| u.row(i).to_vec()).collect();
        // Normalize the coordinates so the result is deterministic and small.
        let (h, _) = echelon_rows(quotient, false).expect("BigInt arithmetic cannot overflow");
        let h = IntMatrix::from_rows(&h)?;
        let vertices = (0..n).map(|j| h.column(j)).collect();
        Self::new(vertices)
    }

    pub fn simplex(&self) -> &LatticeSimplex {
        &self.0
    }

    pub fn into_simplex(self) -> LatticeSimplex {
        self.0
    }

    pub fn weight_system(&self) -> WeightSystem {
        self.0.weights().expect("Fano simplex contains the origin")
    }
}

impl TryFrom<LatticeSimplex> for FanoSimplex {
    type Error = Error;

    fn try_from(s: LatticeSimplex) -> Result<Self> {
        s.weights()?;
        if let Some(index) = s.vertices.iter().position(|v| !gcd_vec(v).is_one()) {
            return Err(Error::NonPrimitiveVertex { index });
        }
        Ok(Self(s))
    }
}

impl Deref for FanoSimplex {
    type Target = LatticeSimplex;
    fn deref(&self) -> &LatticeSimplex {
        &self.0
    }
}

impl fmt::Debug for FanoSimplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fano{:?}", self.0)
    }
}

/// Validates a Fano simplex.
pub fn make_fano(vertices: Vec<IntVec>) -> Result<FanoSimplex> {
    FanoSimplex::new(vertices)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightSystem {
    weights: Vec<BigInt>,
    h: BigInt,
}

impl WeightSystem {
    /// Positive weights with gcd 1.
    pub fn new(weights: Vec<BigInt>) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::InvalidInput("a weight system needs at least two weights".into()));
        }
        if weights.iter().any(|w| !w.is_positive()) {
            return Err(Error::InvalidInput("weights must be positive".into()));
        }
        if !gcd_vec(&weights).is_one() {
            return Err(Error::InvalidInput("weights must be coprime".into()));
        }
        let h = weights.iter().sum();
        Ok(Self { weights, h })
    }

    pub fn from_i64(weights: &[i64]) -> Result<Self> {
        Self::new(to_int_vec(weights))
    }

    pub fn weights(&self) -> &[BigInt] {
        &self.weights
    }

    pub fn h(&self) -> &BigInt {
        &self.h
    }

    pub fn dim(&self) -> usize {
        self.weights.len() - 1
    }

    /// Weights sorted descending; equality of these is multiset equality.
    pub fn sorted_desc(&self) -> Vec<BigInt> {
        let mut w = self.weights.clone();
        w.sort_by(|a, b| b.cmp(a));
        w
    }

    /// Every `d` of the `d + 1` weights are coprime.
    pub fn is_well_formed(&self) -> bool {
        (0..self.weights.len()).all(|skip| {
            let g = self.weights.iter().enumerate().filter(|(i, _)| *i != skip).fold(BigInt::zero(), |g, (_, x)| g.gcd(x));
            g.is_one()
        })
    }

    /// Every weight divides `h`.
    pub fn is_gorenstein(&self) -> bool {
        self.weights.iter().all(|w| self.h.is_multiple_of(w))
    }

    /// `h^d / prod(weights)`, the degree of the anticanonical divisor of the
    /// weighted projective space.
    pub fn anticanonical_degree(&self) -> BigRational {
        let d = self.dim() as u32;
        let prod: BigInt = self.weights.iter().product();
        BigRational::new(self.h.pow(d), prod)
    }
}

impl fmt::Display for WeightSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, w) in self.weights.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityResult {
    pub index: BigInt,
    /// Invariant factors (> 1) of the quotient of the ambient lattice by the
    /// vertex lattice; empty for index 1.
    pub invariant_factors: Vec<BigInt>,
}

/// Barycentric coordinates of the origin, in vertex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Barycentric {
    coords: Vec<BigRational>,
}

impl Barycentric {
    pub fn in_vertex_order(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn sorted(&self) -> BaryVector {
        BaryVector::from_unsorted(self.coords.clone()).expect("positive coordinates summing to one")
    }
}
