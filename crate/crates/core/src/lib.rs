//! Degree-truncated KZ and cyclotomic associators over multi-precision
//! complex scalars, and numerical verification of the identities they
//! satisfy.

pub mod alphabet;
pub mod dsl;
pub mod error;
pub mod exact;
pub mod holonomy;
pub mod hom;
pub mod relations;
pub mod scalar;
pub mod serial;
pub mod series;
pub mod shuffle;
pub mod t4algebra;

pub use alphabet::{Alphabet, LinearElement};
pub use error::{Error, Pos, Result};
pub use exact::GaussRational;
pub use hom::GeneratorMap;
pub use scalar::Scalar;
pub use series::{Algebra, Backend, Series};
