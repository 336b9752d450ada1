//! Exact root multiplicities, characters and denominator identities for
//! symmetrizable Borcherds-Bozec algebras, with finite-field quiver and
//! flag-variety oracles.

pub mod arith;
pub mod bbzmult;
pub mod cartan;
pub mod error;
pub mod interp;
pub mod io;
pub mod kmweights;
pub mod monster;
pub mod quiver;
pub mod schofield;
pub mod series;
pub mod weyl;

pub use cartan::{BorcherdsCartanDatum, Label, RootVec, VertexKind, Weight, WeightBase};
pub use error::{Error, ErrorKind, Result};
pub use series::{DegreeBox, FormalSeries};
