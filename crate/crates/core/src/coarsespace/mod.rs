//! Finite bornological coarse spaces with group actions: completion, fixed
//! points, equivariant hom spaces from orbits, evaluation maps and the
//! flasqueness and complementary-pair conditions.

mod battery;
mod checks;
mod hom;
mod space;

pub use battery::{example_maps, example_spaces, fixed_point_restriction, orbit_union, run_coarse_battery, CoarseBatteryReport, ExampleSpace};
pub use checks::{complementary_pair_check, flasqueness_witness_check, flasqueness_witness_check_g, ComplementaryReport, FlasqueReport};
pub use hom::{
    check_restriction_functoriality, evaluation_map, orbit_hom_space, restriction_function, restriction_map, HomSpaceReport,
    OrbitHomSpace,
};
pub use space::{
    all_pairs, check_g_morphism, check_morphism, fixed_points, g_completion, tensor_min_max, BornCoarseSpace, CoarseMap,
    FixedPoints, GBornCoarseSpace, GSet, Pair, Rejection, SpaceFile,
};
