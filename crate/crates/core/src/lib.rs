//! Exact arithmetic for lattice Fano simplices and the fake weighted
//! projective spaces they define.

pub mod bounds;
pub mod enumeration;
pub mod equivalence;
pub mod error;
pub mod linalg;
pub mod optimizer;
pub mod simplex;

pub use error::{Error, Result};
