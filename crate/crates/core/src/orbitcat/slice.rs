use std::sync::Arc;

use serde::Serialize;

use super::category::Functor;
use super::comma::{comma_over, Variance};
use super::OrbitCategory;
use crate::error::{Error, Result};
use crate::fingroup::{Family, PermGroup, Subgroup};

/// Outcome of comparing `H_{F∩H}Orb` with the slice `G_F Orb / (G/H)`
/// along induction `H/L ↦ (G/L → G/H)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SliceReport {
    pub source_objects: usize,
    pub slice_objects: usize,
    pub functorial: bool,
    pub fully_faithful: bool,
    pub iso_class_bijection: bool,
    pub equivalence: bool,
}

pub fn slice_equivalence_check(g: &Arc<PermGroup>, h: &Subgroup, family: &Family) -> Result<SliceReport> {
    g.check_subgroup(h.members())?;
    let orb = OrbitCategory::new(g.clone())?;
    let lat = orb.lattice().clone();
    let (d, inc) = orb.full_subcategory_family(family);
    let (h_class, h_conj) = lat
        .conjugator_to_representative(g, h)
        .ok_or_else(|| Error::NotSubgroup("subgroup not found in the lattice".into()))?;
    let slice = comma_over(&d, &inc, orb.category(), h_class, Variance::Co);
    let d_of_c: Vec<Option<usize>> = {
        let mut v = vec![None; orb.category().morphism_count()];
        for (dm, &cm) in inc.mor.iter().enumerate() {
            v[cm] = Some(dm);
        }
        v
    };

    let hg = Arc::new(g.subgroup_as_group(h, "H"));
    let to_g: Vec<usize> = hg.elements().iter().map(|p| g.id_of(p).expect("subgroup element")).collect();
    let orb_h = OrbitCategory::new(hg.clone())?;
    let h_objects: Vec<usize> = (0..orb_h.object_count())
        .filter(|&l| {
            let members: Vec<usize> = sorted(orb_h.subgroup(l).members().iter().map(|&x| to_g[x]));
            let cls = lat.class_index(&Subgroup::from_sorted(members)).expect("classified");
            family.contains(cls)
        })
        .collect();
    let (src, inc_h) = orb_h.category().full_subcategory(&h_objects);

    // object data: (G-class, conjugator c with c⁻¹ L c = rep)
    let obj_data: Vec<(usize, usize)> = h_objects
        .iter()
        .map(|&l| {
            let members = sorted(orb_h.subgroup(l).members().iter().map(|&x| to_g[x]));
            lat.conjugator_to_representative(g, &Subgroup::from_sorted(members)).expect("classified")
        })
        .collect();
    let mut functor = Functor {
        obj: Vec::new(),
        mor: Vec::new(),
    };
    let mut well_defined = true;
    for &(k_class, c) in &obj_data {
        let m = orb
            .morphism_with_payload(k_class, h_class, g.mul(g.inv(c), h_conj))
            .expect("induced map exists");
        let t = inc.obj.iter().position(|&o| o == k_class).expect("class lies in the family");
        let o = slice.objects.iter().position(|&x| x == (t, m)).expect("slice object");
        functor.obj.push(o);
    }
    for m in 0..src.morphism_count() {
        let (a, b) = (src.src(m), src.dst(m));
        let (ka, ca) = obj_data[a];
        let (kb, cb) = obj_data[b];
        let hm = inc_h.mor[m];
        let x = to_g[orb_h.payload(hm)];
        let payload = g.mul(g.mul(g.inv(ca), x), cb);
        let image = orb
            .morphism_with_payload(ka, kb, payload)
            .and_then(|cm| d_of_c[cm])
            .and_then(|dm| {
                slice
                    .cat
                    .hom(functor.obj[a], functor.obj[b])
                    .iter()
                    .copied()
                    .find(|&sm| slice.projection.mor[sm] == dm)
            });
        match image {
            Some(sm) => functor.mor.push(sm),
            None => {
                well_defined = false;
                functor.mor.push(usize::MAX);
            }
        }
    }
    let functorial = well_defined && functor.check(&src, &slice.cat).is_ok();
    let fully_faithful = functorial
        && (0..src.object_count()).all(|a| {
            (0..src.object_count()).all(|b| {
                let mut images: Vec<usize> = src.hom(a, b).iter().map(|&m| functor.mor[m]).collect();
                images.sort_unstable();
                images.dedup();
                images.len() == src.hom(a, b).len()
                    && images.len() == slice.cat.hom(functor.obj[a], functor.obj[b]).len()
            })
        });
    let iso_class_bijection = functorial
        && (0..slice.cat.object_count())
            .all(|s| functor.obj.iter().any(|&fo| slice.cat.isomorphic(fo, s)))
        && (0..src.object_count()).all(|a| {
            (0..src.object_count()).all(|b| {
                src.isomorphic(a, b) == slice.cat.isomorphic(functor.obj[a], functor.obj[b])
            })
        });
    Ok(SliceReport {
        source_objects: src.object_count(),
        slice_objects: slice.cat.object_count(),
        functorial,
        fully_faithful,
        iso_class_bijection,
        equivalence: functorial && fully_faithful && iso_class_bijection,
    })
}

fn sorted(it: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut v: Vec<usize> = it.collect();
    v.sort_unstable();
    v
}
