//! Set-family primitives, k-sunflower search, split counting and the base-set extraction engine.
//!
//! Sets are bit vectors over a fixed universe `0..n`; families keep their members sorted, so
//! equality, iteration order and every report derived from them are canonical.

pub mod basesets;
pub mod budget;
pub mod error;
pub mod experiment;
pub mod extremal;
pub mod family;
pub mod gamma;
pub mod io;
pub mod random;
pub mod set;
pub mod split;
pub mod split_search;
pub mod sunflower;

pub use budget::Budget;
pub use error::{Error, Result};
pub use family::SetFamily;
pub use gamma::GammaBase;
pub use set::{GroundSet, Universe};
pub use split::{Split, Subsplit};
