//! Exact computational models for equivariant localization on finite
//! groups: orbit categories, homotopy coends, Bredon chains,
//! representation rings and finite bornological coarse spaces.

pub mod bredon;
pub mod coarsespace;
pub mod error;
pub mod fingroup;
pub mod homalg;
pub mod linalg;
pub mod orbitcat;
pub mod repring;

pub use error::{Error, Result};
