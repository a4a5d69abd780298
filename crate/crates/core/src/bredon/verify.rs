use serde::Serialize;

use super::coefficients::CoefficientSystem;
use super::complex::{gamma_fixed_subcomplex, GSimplicialComplex};
use super::homology::{bredon_cellular, cellular_map, coend_eg_map, projected_betti, projected_homology_map, Pairing};
use super::presheaf::{presheaf_xf, tilde_y, tilde_y_map, OrbitPresheaf, PresheafMap};
use crate::error::{Error, Result};
use crate::fingroup::Family;
use crate::homalg::{hocoend_trunc, quasi_iso_in_range, CoendIndex, HomologyGroup};
use crate::repring::{module_vanishes_localized, rational_localize_map, RModule, RModuleMap};

/// Outcome of comparing `E^G(A) → E^G(B)` for a presheaf map `A → B`.
#[derive(Clone, Debug, Serialize)]
pub struct CoendComparison {
    pub source_homology: Vec<HomologyGroup>,
    pub target_homology: Vec<HomologyGroup>,
    /// Degrees `0..=checked_through` were tested.
    pub checked_through: usize,
    pub quasi_iso: bool,
}

/// Builds both coends and tests the induced map on `[0, top − 2]`.
pub fn compare_coends(e: &CoefficientSystem, map: &PresheafMap, source: &OrbitPresheaf, target: &OrbitPresheaf, top: usize) -> CoendComparison {
    let top = top.max(2);
    let index = CoendIndex::new(e.orbit.category());
    let ps = Pairing::new(e, source);
    let pt = Pairing::new(e, target);
    let bs = hocoend_trunc(&index, &ps, top);
    let bt = hocoend_trunc(&index, &pt, top);
    let f = coend_eg_map(&index, (&ps, &bs), (&pt, &bt), map, source, target);
    CoendComparison {
        source_homology: bs.certified_homology(),
        target_homology: bt.certified_homology(),
        checked_through: top - 2,
        quasi_iso: quasi_iso_in_range(&f, &bs.complex, &bt.complex, 0, top - 2),
    }
}

/// Checks that `E^G(X^F) → E^G(X)` is a quasi-isomorphism in degrees
/// `[0, top − 2]` for `E` vanishing on the family `F`.
pub fn verify_theorem_one(e: &CoefficientSystem, family: &Family, x: &OrbitPresheaf, top: usize) -> Result<CoendComparison> {
    if !family.is_subgroup_closed {
        return Err(Error::NotAFamily("classes are not closed under subconjugation".into()));
    }
    if let Some(o) = e.nonvanishing_on(family) {
        return Err(Error::EDoesNotVanish(format!("value at {} has nonzero homology", e.orbit.category().object_label(o))));
    }
    let kan = presheaf_xf(x, family, top);
    Ok(compare_coends(e, &kan.counit, &kan.presheaf, x, top))
}

#[derive(Clone, Debug)]
pub enum LocalizationMode {
    /// Coend comparison with a coefficient system vanishing on `F(γ)`.
    VanishingCoefficients(CoefficientSystem),
    /// Cellular chains with `R(−)` coefficients, localized at the prime of `γ`.
    RationalRepresentationRing,
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalizedDegree {
    pub degree: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    pub is_iso: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyVanishing {
    pub subgroup_class: usize,
    pub vanishes: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalizationReport {
    pub gamma: usize,
    pub fixed_simplices: usize,
    /// Present in the coefficient-system mode.
    pub coend: Option<CoendComparison>,
    /// Present in the representation-ring mode: the localized map per degree.
    pub localized: Vec<LocalizedDegree>,
    /// Integral cellular homology of `X^γ` and `X` with `R(−)` coefficients.
    pub unlocalized_source: Vec<HomologyGroup>,
    pub unlocalized_target: Vec<HomologyGroup>,
    /// The inclusion before localization is a quasi-isomorphism.
    pub unlocalized_quasi_iso: Option<bool>,
    pub family_vanishing: Vec<FamilyVanishing>,
    pub verdict: bool,
}

/// Checks that the inclusion `X^γ → X` becomes an equivalence after
/// localizing at `γ`, in degrees up to `dim X`.
pub fn verify_gamma_localization(x: &GSimplicialComplex, gamma: usize, mode: &LocalizationMode, top: usize) -> Result<LocalizationReport> {
    x.require_regular()?;
    let g = x.group().clone();
    let class = g
        .conjugacy_classes()
        .get(gamma)
        .cloned()
        .ok_or_else(|| Error::InvalidGroup(format!("no element class {gamma}")))?;
    let family = g.family_of_gamma(&class)?;
    let (fixed, ids) = gamma_fixed_subcomplex(x, &class)?;
    let fixed_simplices = (0..=fixed.dim()).map(|k| fixed.count(k)).sum::<usize>() * usize::from(!fixed.is_empty());
    let mut report = LocalizationReport {
        gamma,
        fixed_simplices,
        coend: None,
        localized: Vec::new(),
        unlocalized_source: Vec::new(),
        unlocalized_target: Vec::new(),
        unlocalized_quasi_iso: None,
        family_vanishing: Vec::new(),
        verdict: false,
    };
    match mode {
        LocalizationMode::VanishingCoefficients(e) => {
            if let Some(o) = e.nonvanishing_on(&family) {
                return Err(Error::EDoesNotVanish(format!(
                    "value at {} has nonzero homology",
                    e.orbit.category().object_label(o)
                )));
            }
            let source = tilde_y(&fixed, &e.orbit)?;
            let target = tilde_y(x, &e.orbit)?;
            let map = tilde_y_map(&fixed, x, &ids, &e.orbit)?;
            let cmp = compare_coends(e, &map, &source, &target, top);
            report.verdict = cmp.quasi_iso;
            report.coend = Some(cmp);
        }
        LocalizationMode::RationalRepresentationRing => {
            let orbit = std::sync::Arc::new(crate::orbitcat::OrbitCategory::new(g.clone())?);
            let r = CoefficientSystem::representation_ring(orbit)?;
            let rep = r.rep.as_ref().expect("representation ring carries its structure");
            let cs = bredon_cellular(&fixed, &r)?;
            let ct = bredon_cellular(x, &r)?;
            let inc = cellular_map(&fixed, &cs, x, &ct, &ids, &r);
            let dim = x.dim();
            for n in 0..=dim {
                let factors = (0..rep.classes.len())
                    .map(|k| {
                        projected_homology_map(
                            &inc,
                            &cs.complex,
                            &ct.complex,
                            &|d| cs.projector(&r, k, d).expect("structured"),
                            &|d| ct.projector(&r, k, d).expect("structured"),
                            n,
                        )
                    })
                    .collect();
                let phi = RModuleMap { factors };
                let loc = rational_localize_map(&phi, &rep.classes, gamma);
                report.localized.push(LocalizedDegree {
                    degree: n,
                    source_dim: loc.map.source_dim,
                    target_dim: loc.map.target_dim,
                    is_iso: loc.is_iso,
                });
            }
            report.unlocalized_source = cs.complex.homology_upto(dim);
            report.unlocalized_target = ct.complex.homology_upto(dim);
            report.unlocalized_quasi_iso = Some(quasi_iso_in_range(&inc, &cs.complex, &ct.complex, 0, dim));
            for &h in &family.members {
                let sub = g.lattice()?.representative(h).clone();
                let v = module_vanishes_localized(&g, &RModule::Restricted(sub), gamma)?;
                report.family_vanishing.push(FamilyVanishing {
                    subgroup_class: h,
                    vanishes: v.vanishes,
                });
            }
            report.verdict = report.localized.iter().all(|d| d.is_iso) && report.family_vanishing.iter().all(|v| v.vanishes);
        }
    }
    Ok(report)
}

/// Dimension over ℚ of the `γ`-localized cellular homology of `X` with
/// `R(−)` coefficients, in degrees `0..=dim X`.
pub fn localized_betti(x: &GSimplicialComplex, gamma: usize) -> Result<Vec<usize>> {
    let g = x.group().clone();
    let orbit = std::sync::Arc::new(crate::orbitcat::OrbitCategory::new(g)?);
    let r = CoefficientSystem::representation_ring(orbit)?;
    let rep = r.rep.as_ref().expect("representation ring carries its structure");
    let k = rep.classes.class_of[gamma];
    let c = bredon_cellular(x, &r)?;
    Ok((0..=x.dim()).map(|n| projected_betti(&c.complex, &|d| c.projector(&r, k, d).expect("structured"), n)).collect())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::super::complex::equivariant_subdivision;
    use super::super::examples::*;
    use super::*;
    use crate::homalg::Ring;
    use crate::orbitcat::OrbitCategory;

    fn orbit(x: &GSimplicialComplex) -> Arc<OrbitCategory> {
        Arc::new(OrbitCategory::new(x.group().clone()).unwrap())
    }

    #[test]
    fn theorem_one_examples() {
        let free = free_pair();
        let o = orbit(&free);
        let y = tilde_y(&free, &o).unwrap();
        let z = CoefficientSystem::constant(o.clone(), Ring::ZZ);
        assert!(verify_theorem_one(&z, &Family::empty(), &y, 3).unwrap().quasi_iso);
        let ones = Family::new(free.group(), [0]).unwrap();
        let e = CoefficientSystem::zero_on_family(o.clone(), &ones, Ring::ZZ);
        let r = verify_theorem_one(&e, &ones, &y, 3).unwrap();
        assert!(r.quasi_iso);
        assert!(r.source_homology.iter().chain(&r.target_homology).all(HomologyGroup::is_zero));
        assert!(matches!(verify_theorem_one(&z, &ones, &y, 3), Err(Error::EDoesNotVanish(_))));
        let broken = Family {
            members: [1].into_iter().collect(),
            is_subgroup_closed: false,
        };
        assert!(matches!(verify_theorem_one(&e, &broken, &y, 3), Err(Error::NotAFamily(_))));
    }

    #[test]
    fn theorem_one_on_s3_faces() {
        let x = equivariant_subdivision(&s3_simplex_faces(&[vec![0, 3], vec![1, 3], vec![2, 3]]));
        let o = orbit(&x);
        let g = x.group();
        let transpositions = g.conjugacy_classes().iter().find(|c| c.size() == 3).unwrap().clone();
        let family = g.family_of_gamma(&transpositions).unwrap();
        let e = CoefficientSystem::zero_on_family(o.clone(), &family, Ring::ZZ);
        let y = tilde_y(&x, &o).unwrap();
        let r = verify_theorem_one(&e, &family, &y, x.dim() + 2).unwrap();
        assert!(r.quasi_iso);
    }

    #[test]
    fn reflection_circle_localization() {
        let c = reflection_circle();
        let r = verify_gamma_localization(&c, 1, &LocalizationMode::RationalRepresentationRing, 3).unwrap();
        assert!(r.verdict);
        assert_eq!((r.localized[0].source_dim, r.localized[0].target_dim), (2, 2));
        assert_eq!((r.localized[1].source_dim, r.localized[1].target_dim), (0, 0));
        assert_eq!((r.unlocalized_source[0].rank, r.unlocalized_target[0].rank), (4, 3));
        assert_eq!(r.unlocalized_quasi_iso, Some(false));
        assert!(r.family_vanishing.iter().all(|v| v.vanishes));
        assert_eq!(localized_betti(&c, 1).unwrap(), vec![2, 0]);
    }

    #[test]
    fn free_action_localizes_to_zero() {
        let free = free_pair();
        let r = verify_gamma_localization(&free, 1, &LocalizationMode::RationalRepresentationRing, 2).unwrap();
        assert_eq!(r.fixed_simplices, 0);
        assert!(r.verdict);
        assert_eq!(localized_betti(&free, 1).unwrap(), vec![0]);
        let o = orbit(&free);
        let ones = Family::new(free.group(), [0]).unwrap();
        let e = CoefficientSystem::zero_on_family(o, &ones, Ring::ZZ);
        let v = verify_gamma_localization(&free, 1, &LocalizationMode::VanishingCoefficients(e), 2).unwrap();
        assert!(v.verdict);
    }

    #[test]
    fn vanishing_mode_on_the_circle() {
        let c = reflection_circle();
        let o = orbit(&c);
        let ones = Family::new(c.group(), [0]).unwrap();
        let e = CoefficientSystem::zero_on_family(o.clone(), &ones, Ring::ZZ);
        let r = verify_gamma_localization(&c, 1, &LocalizationMode::VanishingCoefficients(e), 3).unwrap();
        assert!(r.verdict);
        let z = CoefficientSystem::constant(o, Ring::ZZ);
        let err = verify_gamma_localization(&c, 1, &LocalizationMode::VanishingCoefficients(z), 3);
        assert!(matches!(err, Err(Error::EDoesNotVanish(_))));
        assert!(matches!(
            verify_gamma_localization(&edge_swap(), 1, &LocalizationMode::RationalRepresentationRing, 3),
            Err(Error::NotRegular(_))
        ));
    }
}
