//! Constructive machinery for edge-colored connectivity, random Cayley graphs,
//! exact clique computation and small-doubling sets in finite abelian groups.

pub mod additive;
pub mod cayley;
pub mod clique;
pub mod coloring;
pub mod error;
pub mod fewcolor;
pub mod freiman;
pub mod groups;
pub mod rng;
mod unionfind;

pub use error::{Error, Result};
pub use groups::{Element, GroupSpec};
pub use unionfind::UnionFind;
