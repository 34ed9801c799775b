use num_bigint::BigInt;
use num_rational::BigRational;

use super::{LatticeSimplex, MultiplicityResult, PointCounts, WeightSystem};
use crate::bounds::{conrads_value, kas_bound};
use crate::error::Error;
use crate::optimizer::BaryVector;

/// Flags that depend on lattice point enumeration are `None` when the
/// enumeration cap was hit; weight-based entries are `None` when the origin
/// is not interior.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexFlags {
    pub fano: bool,
    pub well_formed: Option<bool>,
    pub canonical: Option<bool>,
    pub terminal: Option<bool>,
    pub reflexive: Option<bool>,
    pub gorenstein_weights: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexReport {
    pub dim: usize,
    pub weights: Option<WeightSystem>,
    /// Sorted descending.
    pub barycentric: Option<BaryVector>,
    pub multiplicity: MultiplicityResult,
    pub volume: BigInt,
    pub flags: SimplexFlags,
    pub kas_bound: Option<BigRational>,
    pub conrads_value: Option<BigRational>,
    pub anticanonical_degree: Option<BigRational>,
    pub points: Option<PointCounts>,
}

fn capped<T>(r: crate::Result<T>) -> crate::Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::EnumerationCapExceeded { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

impl LatticeSimplex {
    /// All invariants at once; point enumeration is bounded by `cap`.
    pub fn report(&self, cap: u64) -> crate::Result<SimplexReport> {
        let weights = self.weights().ok();
        let fano = super::FanoSimplex::try_from(self.clone()).is_ok();
        let (canonical, terminal, reflexive) = if weights.is_some() {
            (
                capped(self.is_canonical_capped(cap))?,
                capped(self.is_terminal_capped(cap))?,
                Some(self.is_reflexive()?),
            )
        } else {
            (Some(false), Some(false), None)
        };
        let flags = SimplexFlags {
            fano,
            well_formed: weights.as_ref().map(WeightSystem::is_well_formed),
            canonical,
            terminal,
            reflexive,
            gorenstein_weights: weights.as_ref().map(WeightSystem::is_gorenstein),
        };
        Ok(SimplexReport {
            dim: self.dim(),
            barycentric: self.barycentric().ok().map(|b| b.sorted()),
            multiplicity: self.multiplicity(),
            volume: self.volume(),
            kas_bound: weights.as_ref().map(kas_bound),
            conrads_value: weights.as_ref().map(conrads_value),
            anticanonical_degree: weights.as_ref().map(WeightSystem::anticanonical_degree),
            points: capped(self.point_counts(cap))?,
            weights,
            flags,
        })
    }
}
