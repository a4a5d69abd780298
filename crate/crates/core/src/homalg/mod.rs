//! Exact homological algebra: chain complexes over ℤ and ℚ, finite
//! simplicial sets, truncated homotopy colimits and homotopy coends.

mod bar;
mod coend;
mod complex;
mod simplicial;

pub use bar::{bar_augmentation, bar_map, hocolim_trunc, same_map, truncation_stable, BarComplex, ChainFunctor, Diagram};
pub use coend::{hocoend_map, hocoend_trunc, Bifunctor, CoendDiagram, CoendIndex, TableBifunctor};
pub use complex::{mapping_cone, quasi_iso_in_range, ranks_of, same_homology_upto, ChainComplex, ChainMap, HomologyGroup, Ring};
pub use simplicial::{coface, SimplexRef, SimplicialMap, SimplicialSetFin};
