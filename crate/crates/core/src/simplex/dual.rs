use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::{FanoSimplex, LatticeSimplex};
use crate::error::{Error, Result};
use crate::linalg::{solve_rational, IntMatrix};

/// Vertices of the dual polytope, one per facet, in the order of the
/// opposite vertices: `vertices[i]` is `-1` on every `v_j` with `j != i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualSimplex {
    pub vertices: Vec<Vec<BigRational>>,
    pub is_lattice: bool,
}

impl DualSimplex {
    /// The dual as a lattice simplex, when all vertices are integral.
    pub fn to_lattice_simplex(&self) -> Option<LatticeSimplex> {
        if !self.is_lattice {
            return None;
        }
        let vertices = self.vertices.iter().map(|v| v.iter().map(|x| x.to_integer()).collect()).collect();
        LatticeSimplex::new(vertices).ok()
    }
}

impl LatticeSimplex {
    /// Dual polytope. Needs the origin strictly inside.
    pub fn dual(&self) -> Result<DualSimplex> {
        self.weights()?;
        let d = self.dim();
        let rhs = vec![-BigInt::one(); d];
        let mut vertices = Vec::with_capacity(d + 1);
        for skip in 0..=d {
            let rows: Vec<Vec<BigInt>> =
                self.vertices.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, v)| v.clone()).collect();
            let a = IntMatrix::from_rows(&rows)?;
            vertices.push(solve_rational(&a, &rhs).map_err(|_| Error::SingularMatrix)?);
        }
        let is_lattice = vertices.iter().flatten().all(|x| x.is_integer());
        Ok(DualSimplex { vertices, is_lattice })
    }

    pub fn is_reflexive(&self) -> Result<bool> {
        Ok(self.dual()?.is_lattice)
    }
}

impl FanoSimplex {
    pub fn dual(&self) -> DualSimplex {
        self.simplex().dual().expect("Fano simplex contains the origin")
    }

    pub fn is_reflexive(&self) -> bool {
        self.dual().is_lattice
    }
}
