//! Exact computations in category O for the Takiff Lie algebra `sl2 ⊗ C[x]/(x²)`.
//!
//! Modules are modelled as depth-truncated weight modules carrying explicit
//! rational action matrices. On top of that sit structural tools (singular
//! vectors, submodules, composition multiplicities, filtrations) and an Ext¹
//! solver for classical and thick category O.

pub mod algebra;
pub mod conformance;
pub mod error;
pub mod ext;
pub mod linalg;
pub mod module;
pub mod rational;
pub mod structure;
pub mod weight;

pub use algebra::{EnvelopingElement, Generator, LieElement, PbwMonomial};
pub use error::{Error, Result};
pub use module::{CategoryFlag, Character, TruncatedModule};
pub use rational::Q;
pub use weight::Weight;
