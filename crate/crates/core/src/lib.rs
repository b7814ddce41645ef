//! Exact tools for finite abelian groups: sumsets, Fourier analysis, Bohr
//! sets and coset progressions, Freiman maps, model finding and covering.

pub mod bohr;
pub mod check;
pub mod covering;
pub mod error;
pub mod fourier;
pub mod generators;
pub mod freiman;
pub mod group;
pub mod model;
pub mod pipeline;
pub mod set;
pub mod sumset;
pub mod text;

pub use error::{Error, Result};
pub use group::{Character, GroupElement, GroupSpec, Limits, Subgroup};
pub use set::GroupSet;
