use std::sync::Arc;

use super::space::{check_g_morphism, check_morphism, g_completion, tensor_min_max, BornCoarseSpace, CoarseMap, GBornCoarseSpace, GSet, Rejection};
use crate::error::{Error, Result};
use crate::orbitcat::OrbitCategory;

/// `X^(S) = Hom_G(S, X)` for an orbit `S = G/K`, with structures induced
/// from `B_G X` through evaluation at a base point.
#[derive(Clone, Debug)]
pub struct OrbitHomSpace {
    pub space: BornCoarseSpace,
    /// Value at the base point `eK` of each equivariant map.
    pub base_values: Vec<usize>,
    /// Full value table of each map, indexed by coset.
    pub maps: Vec<Vec<usize>>,
    /// Cosets of `K`, listed by smallest element.
    pub cosets: Vec<Vec<usize>>,
}

/// Builds `X^(G/K)` for the orbit-category object `object`. Structures are
/// computed at every base point and must agree.
pub fn orbit_hom_space(x: &GBornCoarseSpace, orbit: &OrbitCategory, object: usize) -> Result<OrbitHomSpace> {
    let g = &x.group;
    let k = orbit.subgroup(object);
    let (_, cosets) = GSet::cosets(g.clone(), k);
    let base_values = x.fixed_points_of(k);
    let maps: Vec<Vec<usize>> = base_values
        .iter()
        .map(|&v| cosets.iter().map(|c| x.act(c[0], v)).collect())
        .collect();
    let completed = g_completion(x);
    let space = completed.base.pullback(maps.len(), &|f| maps[f][0]);
    for s in 1..cosets.len() {
        let other = completed.base.pullback(maps.len(), &|f| maps[f][s]);
        if !other.same_structures(&space) {
            return Err(Error::StructureMismatch(format!("evaluation at coset {s} induces different structures")));
        }
    }
    Ok(OrbitHomSpace {
        space,
        base_values,
        maps,
        cosets,
    })
}

/// `φ*: X^(T) → X^(S)` for an orbit morphism `φ: S → T`, as a function on
/// carriers: a map `f` goes to `f ∘ φ`.
pub fn restriction_function(x: &GBornCoarseSpace, orbit: &OrbitCategory, m: usize, source: &OrbitHomSpace, target: &OrbitHomSpace) -> Vec<usize> {
    let payload = orbit.payload(m);
    target
        .base_values
        .iter()
        .map(|&v| {
            let image = x.act(payload, v);
            source.base_values.binary_search(&image).expect("translate of a fixed point is fixed by the smaller subgroup")
        })
        .collect()
}

/// `φ*` checked as a morphism of bornological coarse spaces.
pub fn restriction_map(
    x: &GBornCoarseSpace,
    orbit: &OrbitCategory,
    m: usize,
    source: &OrbitHomSpace,
    target: &OrbitHomSpace,
) -> std::result::Result<CoarseMap, Rejection> {
    let f = restriction_function(x, orbit, m, source, target);
    check_morphism(&f, &target.space, &source.space)
}

/// Summary of the hom-space checks over one orbit category.
#[derive(Clone, Debug, Default, serde::Serialize)]
pub struct HomSpaceReport {
    pub restrictions_checked: usize,
    pub restrictions_accepted: usize,
    pub composites_checked: usize,
    pub composites_agree: usize,
}

impl HomSpaceReport {
    pub fn passed(&self) -> bool {
        self.restrictions_checked == self.restrictions_accepted && self.composites_checked == self.composites_agree
    }
}

/// Every `φ*` is a morphism and `(ψ∘φ)* = φ*∘ψ*`.
pub fn check_restriction_functoriality(x: &GBornCoarseSpace, orbit: &OrbitCategory) -> Result<HomSpaceReport> {
    let cat = orbit.category();
    let spaces = (0..cat.object_count()).map(|a| orbit_hom_space(x, orbit, a)).collect::<Result<Vec<_>>>()?;
    let mut report = HomSpaceReport::default();
    let functions: Vec<Vec<usize>> = (0..cat.morphism_count())
        .map(|m| restriction_function(x, orbit, m, &spaces[cat.src(m)], &spaces[cat.dst(m)]))
        .collect();
    for m in 0..cat.morphism_count() {
        report.restrictions_checked += 1;
        if check_morphism(&functions[m], &spaces[cat.dst(m)].space, &spaces[cat.src(m)].space).is_ok() {
            report.restrictions_accepted += 1;
        }
    }
    for phi in 0..cat.morphism_count() {
        for &psi in cat.out_of(cat.dst(phi)) {
            report.composites_checked += 1;
            let composite = &functions[cat.compose(psi, phi)];
            let chained: Vec<usize> = functions[psi].iter().map(|&f| functions[phi][f]).collect();
            if *composite == chained {
                report.composites_agree += 1;
            }
        }
    }
    Ok(report)
}

/// `e_S: S_min,max ⊗ X^(S) → X`, `(s, f) ↦ f(s)`, checked as a G-morphism.
pub fn evaluation_map(x: &GBornCoarseSpace, orbit: &OrbitCategory, object: usize) -> Result<CoarseMap> {
    let hom = orbit_hom_space(x, orbit, object)?;
    let (s, _) = GSet::cosets(x.group.clone(), orbit.subgroup(object));
    let trivial = GBornCoarseSpace::trivial(hom.space.clone(), Arc::clone(&x.group));
    let source = tensor_min_max(&s, &trivial);
    let nf = hom.maps.len();
    let map: Vec<usize> = (0..source.size()).map(|i| hom.maps[i % nf.max(1)][i / nf.max(1)]).collect();
    check_g_morphism(&map, &source, x).map_err(|r| Error::MorphismCheckFailed(format!("evaluation map rejected: {r:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fingroup::named::cyclic;
    use crate::fingroup::Perm;

    fn swap(n: usize) -> GBornCoarseSpace {
        let g = Arc::new(cyclic(2));
        let perm: Perm = (0..n).map(|x| x ^ 1).collect();
        GBornCoarseSpace::new(BornCoarseSpace::new(n, vec![], vec![vec![0]]).unwrap(), g, &[perm]).unwrap()
    }

    #[test]
    fn hom_spaces_of_orbits() {
        let x = swap(2);
        let orb = OrbitCategory::new(x.group.clone()).unwrap();
        let free = orbit_hom_space(&x, &orb, 0).unwrap();
        // evaluation at e is a bijection onto X, structures from B_G X
        assert_eq!(free.base_values, vec![0, 1]);
        assert!(free.space.is_bounded(&[0, 1]));
        let fixed = orbit_hom_space(&x, &orb, 1).unwrap();
        assert_eq!(fixed.space.size(), 0);
        // the unique G/1 → G/G induces the inclusion of the empty space
        let m = orb.category().hom(0, 1)[0];
        assert_eq!(restriction_map(&x, &orb, m, &free, &fixed).unwrap().map, Vec::<usize>::new());
        let report = check_restriction_functoriality(&x, &orb).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn evaluation_maps() {
        let g = Arc::new(cyclic(2));
        let orb = OrbitCategory::new(g.clone()).unwrap();
        let x = GBornCoarseSpace::new(BornCoarseSpace::min_max(3), g, &[vec![1, 0, 2]]).unwrap();
        // G/G: the inclusion of the fixed point
        assert_eq!(evaluation_map(&x, &orb, 1).unwrap().map, vec![2]);
        // G/1: the action map
        let e = evaluation_map(&x, &orb, 0).unwrap();
        assert_eq!(e.map, vec![0, 1, 2, 1, 0, 2]);
        // with a non-invariant bornology the completion is what makes e_S proper
        let y = swap(4);
        assert!(evaluation_map(&y, &orb, 0).is_ok());
    }
}
