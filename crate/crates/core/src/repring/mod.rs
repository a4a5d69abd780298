//! Character theory and the representation ring: exact cyclotomic
//! character tables, restriction, the ideal of a class, Segal elements and
//! rational localization.

mod cyclotomic;
mod ring;
mod table;

pub use cyclotomic::{cyclotomic_polynomial, Cyclotomic};
pub use ring::{
    character_value, check_restriction_is_ring_map, gamma_ideal_basis, in_gamma_ideal, indicator_multiplication, induce,
    module_vanishes_localized, multiply, rational_class_decomposition, rational_idempotents, rational_localize_map,
    restriction, restriction_matrix, segal_element, segal_element_with, FactorMap, LocalizedMap, RElement, RModule,
    RModuleMap, RationalClasses, Restriction, SegalWitness, SubgroupTable, VanishingReport,
};
pub use table::{character_table, supplied_table, CharacterTable, TABLE_ORDER_BOUND};
