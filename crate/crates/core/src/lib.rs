//! Rooted-tree Hopf algebra and branched rough paths: exact algebra,
//! numerical lifts and extensions, and checks of the factorial decay bounds.

pub mod bounds;
pub mod character;
pub mod extension;
pub mod hopf;
pub mod lift;
pub mod poly;
pub mod scalar;
pub mod trees;

pub use character::Character;
pub use scalar::Scalar;
pub use trees::{Alphabet, Catalog, Forest, Label, RootedTree};
