//! Finite semantic toolkit for bi-intuitionistic logic over co-trees, and a
//! decision procedure for the logic of the finite combs.

pub mod algebra;
pub mod combcheck;
pub mod decide;
pub mod error;
pub mod formula;
pub mod morphism;
pub mod pointset;
pub mod poset;
pub mod semantics;
pub mod structure;

pub use error::{Error, Result};
pub use formula::{parse, Formula};
pub use pointset::PointSet;
pub use poset::FinitePoset;
