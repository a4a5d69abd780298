use std::collections::HashMap;
use std::sync::Arc;

use super::category::{FinCategory, Functor, Morphism};
use crate::error::Result;
use crate::fingroup::{Family, PermGroup, Subgroup, SubgroupLattice};

/// The orbit category: one object `G/H` per subgroup class (ordered by
/// the class order, so `G/1` first and `G/G` last), morphisms
/// `G/H → G/K` given by cosets `gK` with `g⁻¹Hg ⊆ K`, acting as
/// `xH ↦ xgK`.
#[derive(Debug)]
pub struct OrbitCategory {
    group: Arc<PermGroup>,
    lattice: Arc<SubgroupLattice>,
    cat: FinCategory,
    payload: Vec<usize>,
    lookup: HashMap<(usize, usize, usize), usize>,
}

impl OrbitCategory {
    pub fn new(group: Arc<PermGroup>) -> Result<Self> {
        let lattice = group.lattice()?;
        let n = lattice.len();
        let g = &*group;
        let mut morphisms = Vec::new();
        let mut payload = Vec::new();
        let mut lookup = HashMap::new();
        for a in 0..n {
            let h = lattice.representative(a);
            for b in 0..n {
                let k = lattice.representative(b);
                let mut reps: Vec<usize> = (0..g.order())
                    .filter(|&x| {
                        let xi = g.inv(x);
                        h.members().iter().all(|&y| k.contains(g.conjugate(y, xi)))
                    })
                    .map(|x| coset_rep(g, x, k))
                    .collect();
                reps.sort_unstable();
                reps.dedup();
                for r in reps {
                    lookup.insert((a, b, r), morphisms.len());
                    morphisms.push(Morphism {
                        src: a,
                        dst: b,
                        label: format!("g{r}"),
                    });
                    payload.push(r);
                }
            }
        }
        let labels = (0..n).map(|a| subgroup_label(&lattice, a)).collect();
        let identities = (0..n).map(|a| lookup[&(a, a, 0)]).collect();
        let cat = FinCategory::build(labels, morphisms.clone(), identities, |gm, fm| {
            let (f, gg) = (&morphisms[fm], &morphisms[gm]);
            let r = coset_rep(g, g.mul(payload[fm], payload[gm]), lattice.representative(gg.dst));
            lookup[&(f.src, gg.dst, r)]
        })?;
        Ok(OrbitCategory {
            group,
            lattice,
            cat,
            payload,
            lookup,
        })
    }

    pub fn group(&self) -> &Arc<PermGroup> {
        &self.group
    }

    pub fn lattice(&self) -> &Arc<SubgroupLattice> {
        &self.lattice
    }

    pub fn category(&self) -> &FinCategory {
        &self.cat
    }

    pub fn object_count(&self) -> usize {
        self.cat.object_count()
    }

    /// Stabilizer subgroup of the base point of object `a`.
    pub fn subgroup(&self, a: usize) -> &Subgroup {
        self.lattice.representative(a)
    }

    /// Canonical (smallest) representative `g` of the payload coset `gK`.
    pub fn payload(&self, m: usize) -> usize {
        self.payload[m]
    }

    /// Morphisms `G/H → G/K`, ordered by coset representative.
    pub fn hom_set(&self, a: usize, b: usize) -> &[usize] {
        self.cat.hom(a, b)
    }

    /// The morphism `G/H_a → G/H_b` with payload coset `xH_b`, if any.
    pub fn morphism_with_payload(&self, a: usize, b: usize, x: usize) -> Option<usize> {
        let r = coset_rep(&self.group, x, self.lattice.representative(b));
        self.lookup.get(&(a, b, r)).copied()
    }

    /// Index of the terminal object `G/G`.
    pub fn terminal(&self) -> usize {
        self.object_count() - 1
    }

    /// Full subcategory on a family (objects in class order) with its
    /// inclusion functor.
    pub fn full_subcategory_family(&self, family: &Family) -> (FinCategory, Functor) {
        let objs: Vec<usize> = family.members.iter().copied().collect();
        self.cat.full_subcategory(&objs)
    }

    /// Full subcategory on the complement of a family.
    pub fn complement_subcategory(&self, family: &Family) -> (FinCategory, Functor) {
        let objs: Vec<usize> = (0..self.object_count()).filter(|c| !family.contains(*c)).collect();
        self.cat.full_subcategory(&objs)
    }

    /// Independent recomputation of a composite from payloads, used to
    /// validate the stored table.
    pub fn check_payload_composition(&self) -> bool {
        let g = &*self.group;
        let c = &self.cat;
        (0..c.morphism_count()).all(|f| {
            c.out_of(c.dst(f)).iter().all(|&h| {
                let hf = c.compose(h, f);
                let expect = coset_rep(g, g.mul(self.payload[f], self.payload[h]), self.subgroup(c.dst(h)));
                self.payload[hf] == expect
            })
        })
    }
}

/// Smallest element of the coset `xK`.
pub fn coset_rep(g: &PermGroup, x: usize, k: &Subgroup) -> usize {
    k.members().iter().map(|&y| g.mul(x, y)).min().expect("subgroups are nonempty")
}

/// Human label for a subgroup class: "1", "G", "C{n}" for cyclic,
/// "H{order}" otherwise, with "_a", "_b", … for repeated labels.
pub fn subgroup_labels(g: &PermGroup, lattice: &SubgroupLattice) -> Vec<String> {
    let base: Vec<String> = (0..lattice.len())
        .map(|a| {
            let h = lattice.representative(a);
            if a == lattice.top() {
                "G".to_string()
            } else if h.order() == 1 {
                "1".to_string()
            } else if h.members().iter().any(|&x| g.order_of(x) == h.order()) {
                format!("C{}", h.order())
            } else {
                format!("H{}", h.order())
            }
        })
        .collect();
    let mut out = base.clone();
    for (i, b) in base.iter().enumerate() {
        let dups: Vec<usize> = (0..base.len()).filter(|&j| &base[j] == b).collect();
        if dups.len() > 1 {
            let pos = dups.iter().position(|&j| j == i).unwrap();
            out[i] = format!("{b}_{}", (b'a' + pos as u8) as char);
        }
    }
    out
}

fn subgroup_label(lattice: &SubgroupLattice, a: usize) -> String {
    let h = lattice.representative(a);
    format!("G/{:?}", h.members())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fingroup::named::*;

    fn orb(g: PermGroup) -> OrbitCategory {
        OrbitCategory::new(Arc::new(g)).unwrap()
    }

    #[test]
    fn s3_objects_and_homs() {
        let c = orb(symmetric(3));
        assert_eq!(c.object_count(), 4);
        // classes: 0 = 1, 1 = C2, 2 = C3, 3 = S3
        assert_eq!(c.hom_set(1, 1).len(), 1);
        assert_eq!(c.hom_set(0, 1).len(), 3);
        assert_eq!(c.hom_set(1, 2).len(), 0);
        assert_eq!(c.hom_set(2, 2).len(), 2);
        assert_eq!(c.category().morphism_count(), 18);
    }

    #[test]
    fn end_of_free_orbit_is_the_group() {
        for g in battery() {
            let order = g.order();
            let c = orb(g);
            assert_eq!(c.hom_set(0, 0).len(), order);
            // the endomorphism monoid of G/1 is a group
            assert!(c.hom_set(0, 0).iter().all(|&m| c.category().inverse(m).is_some()));
        }
    }

    #[test]
    fn terminal_object() {
        for g in battery() {
            let c = orb(g);
            let t = c.terminal();
            for a in 0..c.object_count() {
                assert_eq!(c.hom_set(a, t).len(), 1);
                if a != t {
                    assert!(c.hom_set(t, a).is_empty());
                }
            }
        }
    }

    #[test]
    fn payload_condition_and_composition() {
        for g in battery() {
            let c = orb(g);
            let grp = c.group().clone();
            let cat = c.category();
            for m in 0..cat.morphism_count() {
                let (h, k) = (c.subgroup(cat.src(m)), c.subgroup(cat.dst(m)));
                let x = c.payload(m);
                assert!(h.members().iter().all(|&y| k.contains(grp.conjugate(y, grp.inv(x)))));
            }
            assert!(c.check_payload_composition());
        }
    }

    #[test]
    fn hom_sizes_count_fixed_points() {
        // |Hom(G/H, G/K)| = |(G/K)^H|, computed from the coset action
        let g = Arc::new(symmetric(4));
        let c = OrbitCategory::new(g.clone()).unwrap();
        for a in 0..c.object_count() {
            for b in 0..c.object_count() {
                let h = c.subgroup(a);
                let k = c.subgroup(b);
                let mut cosets: Vec<usize> = (0..g.order()).map(|x| coset_rep(&g, x, k)).collect();
                cosets.sort_unstable();
                cosets.dedup();
                let fixed = cosets
                    .iter()
                    .filter(|&&x| h.members().iter().all(|&y| coset_rep(&g, g.mul(y, x), k) == x))
                    .count();
                assert_eq!(c.hom_set(a, b).len(), fixed);
            }
        }
    }

    #[test]
    fn family_subcategories() {
        let g = Arc::new(symmetric(3));
        let c = OrbitCategory::new(g.clone()).unwrap();
        let all = Family::all(&g).unwrap();
        let (sub, inc) = c.full_subcategory_family(&all);
        assert_eq!(sub.morphism_count(), c.category().morphism_count());
        inc.check(&sub, c.category()).unwrap();
        let (empty, _) = c.full_subcategory_family(&Family::empty());
        assert_eq!(empty.object_count(), 0);
        let t = g.conjugacy_classes().iter().find(|k| k.size() == 3).unwrap();
        let f = g.family_of_gamma(t).unwrap();
        let (sub, inc) = c.full_subcategory_family(&f);
        assert_eq!(sub.object_count(), 2);
        assert_eq!(inc.obj, vec![0, 2]);
    }

    #[test]
    fn labels() {
        let g = dihedral(4);
        let lat = g.lattice().unwrap();
        let l = subgroup_labels(&g, &lat);
        assert_eq!(l[0], "1");
        assert_eq!(l.last().unwrap(), "G");
        assert!(l.iter().any(|s| s == "C4"));
        assert!(l.iter().any(|s| s == "C2_a"));
        assert!(l.iter().any(|s| s == "H4_b"));
    }
}
