use std::sync::Arc;

use proptest::prelude::*;

use eqloc::bredon::examples::ordered;
use eqloc::bredon::{
    bredon_cellular, coend_eg, equivariant_subdivision, gamma_fixed_subcomplex, presheaf_xf, tilde_y, tilde_y_map, verify_theorem_one,
    CoefficientSystem, GSimplicialComplex,
};
use eqloc::coarsespace::{check_morphism, BornCoarseSpace};
use eqloc::fingroup::named::{battery, cyclic};
use eqloc::homalg::{CoendIndex, HomologyGroup, Ring};
use eqloc::orbitcat::OrbitCategory;

/// `ℤ/n` (n = 2 or 3) acting on up to six vertices through a product of
/// disjoint n-cycles, with random simplices of dimension ≤ 2 closed under
/// the action, subdivided until regular and ordered.
fn random_complex() -> impl Strategy<Value = GSimplicialComplex> {
    (2usize..=3, 3usize..=6)
        .prop_flat_map(|(n, v)| (Just(n), Just(v), 0..=(v / n), prop::collection::vec(prop::collection::btree_set(0..v, 1..=3), 1..4)))
        .prop_map(|(n, v, cycles, simplices)| {
            let mut image: Vec<usize> = (0..v).collect();
            for c in 0..cycles {
                for k in 0..n {
                    image[c * n + k] = c * n + (k + 1) % n;
                }
            }
            // keep the top dimension small for ℤ/3 so subdivisions stay cheap
            let cap = if n == 3 { 2 } else { 3 };
            let simplices: Vec<Vec<usize>> = simplices.into_iter().map(|s| s.into_iter().take(cap).collect()).collect();
            let mut closed = Vec::new();
            for s in &simplices {
                let mut t = s.clone();
                for _ in 0..n {
                    closed.push(t.clone());
                    t = t.iter().map(|&x| image[x]).collect();
                    t.sort_unstable();
                }
            }
            let x = GSimplicialComplex::new(Arc::new(cyclic(n)), v, &closed, &[image]).unwrap();
            ordered(equivariant_subdivision(&x))
        })
}

fn orbit(x: &GSimplicialComplex) -> Arc<OrbitCategory> {
    Arc::new(OrbitCategory::new(x.group().clone()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn orbit_categories_satisfy_the_laws(which in 0usize..6) {
        let g = Arc::new(battery()[which].clone());
        let o = OrbitCategory::new(g).unwrap();
        prop_assert!(o.category().check_laws().is_ok());
        prop_assert!(o.check_payload_composition());
        let back = o.category().opposite().opposite();
        prop_assert_eq!(back.composition_digest(), o.category().composition_digest());
    }

    #[test]
    fn coarse_identity_and_constant_maps(size in 1usize..8, pairs in prop::collection::vec((0usize..8, 0usize..8), 0..6), bounded in prop::collection::vec(0usize..8, 0..4)) {
        let pairs: Vec<(usize, usize)> = pairs.into_iter().map(|(a, b)| (a % size, b % size)).collect();
        let bounded: Vec<usize> = bounded.into_iter().map(|b| b % size).collect();
        let x = BornCoarseSpace::new(size, vec![pairs], vec![bounded]).unwrap();
        let id: Vec<usize> = (0..size).collect();
        prop_assert!(check_morphism(&id, &x, &x).is_ok());
        prop_assert!(x.same_structures(&x.regenerated()));
        // collapsing everything to one point of the maximal space is controlled,
        // and proper exactly when the whole carrier is bounded in x
        let point = BornCoarseSpace::max_max(1);
        let collapse = vec![0; size];
        prop_assert_eq!(check_morphism(&collapse, &x, &point).is_ok(), x.bounded_points().len() == size);
    }

    #[test]
    fn coend_agrees_with_cellular_chains(x in random_complex()) {
        let o = orbit(&x);
        let index = CoendIndex::new(o.category());
        let y = tilde_y(&x, &o).unwrap();
        prop_assert!(y.check().is_ok());
        for m in [CoefficientSystem::constant(o.clone(), Ring::ZZ), CoefficientSystem::representation_ring(o.clone()).unwrap()] {
            let top = x.dim() + 2;
            let coend = coend_eg(&index, &m, &y, top).certified_homology();
            let cellular = bredon_cellular(&x, &m).unwrap().complex.homology_upto(top - 1);
            let zero = HomologyGroup::zero();
            for k in 0..=x.dim() {
                prop_assert_eq!(coend.get(k).unwrap_or(&zero), cellular.get(k).unwrap_or(&zero));
            }
        }
    }

    #[test]
    fn kan_extension_is_empty_exactly_without_gamma_fixed_points(x in random_complex()) {
        let o = orbit(&x);
        let y = tilde_y(&x, &o).unwrap();
        let g = x.group().clone();
        for class in g.conjugacy_classes().iter().skip(1) {
            let family = g.family_of_gamma(class).unwrap();
            let kan = presheaf_xf(&y, &family, x.dim() + 2);
            let (fixed, _) = gamma_fixed_subcomplex(&x, class).unwrap();
            prop_assert_eq!(kan.presheaf.values.iter().all(|v| v.is_empty()), fixed.is_empty());
        }
    }

    #[test]
    fn fixed_point_inclusions_are_natural(x in random_complex()) {
        let o = orbit(&x);
        let g = x.group().clone();
        let class = g.conjugacy_classes()[1].clone();
        let (fixed, ids) = gamma_fixed_subcomplex(&x, &class).unwrap();
        let source = tilde_y(&fixed, &o).unwrap();
        let target = tilde_y(&x, &o).unwrap();
        let map = tilde_y_map(&fixed, &x, &ids, &o).unwrap();
        prop_assert!(map.check(&source, &target).is_ok());
    }

    #[test]
    fn theorem_one_holds_for_gamma_families(x in random_complex()) {
        let o = orbit(&x);
        let y = tilde_y(&x, &o).unwrap();
        let g = x.group().clone();
        for class in g.conjugacy_classes().iter().skip(1) {
            let family = g.family_of_gamma(class).unwrap();
            let e = CoefficientSystem::zero_on_family(o.clone(), &family, Ring::ZZ);
            prop_assert!(verify_theorem_one(&e, &family, &y, x.dim() + 2).unwrap().quasi_iso);
        }
    }
}
