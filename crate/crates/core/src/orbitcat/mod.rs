//! Explicit finite categories: orbit categories, family subcategories,
//! twisted arrow and comma categories.

mod category;
mod comma;
mod orbit;
mod slice;
mod twisted;

pub use category::{CategoryDump, Chain, FinCategory, Functor, Morphism};
pub use comma::{comma_over, CommaCategory, Variance};
pub use orbit::{coset_rep, subgroup_labels, OrbitCategory};
pub use slice::{slice_equivalence_check, SliceReport};
pub use twisted::TwistedArrow;

#[cfg(test)]
pub(crate) use category::tests as tests_support;
