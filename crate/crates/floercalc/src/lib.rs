//! Bordered Floer computations for the meridian of a knot after surgery.
//!
//! Starting from a reduced knot Floer complex over F₂[U], the crate builds the
//! type-DD bimodule of the complement of the knot together with its meridian,
//! pairs it with the 0- and ∞-filling modules, and sorts the resulting knot
//! Floer homology of the meridian by spin^c structure.

pub mod algebra;
pub mod builders;
pub mod cfk;
pub mod corpus;
pub mod error;
pub mod f2;
pub mod grading;
pub mod io;
pub mod iso;
pub mod modules;
pub mod pairing;

pub use algebra::{AlgebraElement, BiLabel, Chord, Idem};
pub use builders::Flavor;
pub use cfk::CfkComplex;
pub use error::{Error, Result, SchemaError};
pub use grading::{GradingElement, HfkMethod, SpincClass};
pub use modules::{DDModule, DModule, Role};
pub use pairing::{FillingModule, TensorComplex};
