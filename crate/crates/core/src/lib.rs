//! Deciding and refuting Whitney (a), Verdier (w) and (t^r) conditions for polynomial germs
//! through integral closure of modules and multiplicities.

pub mod checker;
pub mod curveprobe;
pub mod error;
pub mod grassmann;
pub mod jacobian;
pub mod localstd;
pub mod multiplicity;
pub mod parse;
pub mod poly;
pub mod rng;
pub mod scalar;
pub mod series;

pub use error::{Error, Result};
pub use localstd::{colength, Colength, ModuleVec, Submodule};
pub use parse::parse;
pub use poly::{Mono, Poly, Ring};
pub use scalar::{Field, Scalar};
