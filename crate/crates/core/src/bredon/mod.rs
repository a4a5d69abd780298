//! Equivariant simplicial complexes, their fixed-point presheaves on the
//! orbit category, coend homology and the localization verifiers.

mod coefficients;
mod complex;
pub mod examples;
mod homology;
mod presheaf;
mod verify;

pub use coefficients::{parse_coefficients, parse_family, CoefficientSystem, RepStructure};
pub use complex::{barycentric_subdivision, equivariant_subdivision, gamma_fixed_subcomplex, ComplexFile, GSimplicialComplex};
pub use homology::{
    assembly_map, bredon_cellular, cellular_map, coend_eg, coend_eg_map, padded_ranks, projected_betti, projected_homology_map, Assembly,
    AssemblyReport, Cell, CellularComplex, Pairing,
};
pub use presheaf::{presheaf_xf, tilde_y, tilde_y_map, KanExtension, OrbitPresheaf, PresheafMap};
pub use verify::{
    compare_coends, localized_betti, verify_gamma_localization, verify_theorem_one, CoendComparison, FamilyVanishing, LocalizationMode,
    LocalizationReport, LocalizedDegree,
};
