use std::collections::{HashMap, HashSet};

use super::{minimal_generators, PermGroup, Perm, Subgroup};
use crate::error::{Error, Result};

/// Fixed-width bitset over element ids, used for subgroup dedup.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bits(Vec<u64>);

impl Bits {
    pub fn of(h: &Subgroup, n: usize) -> Self {
        let mut words = vec![0u64; n.div_ceil(64)];
        for &g in h.members() {
            words[g / 64] |= 1 << (g % 64);
        }
        Bits(words)
    }
}

/// One conjugacy class of subgroups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupClass {
    pub index: usize,
    pub representative: Subgroup,
    /// All conjugates, sorted.
    pub conjugates: Vec<Subgroup>,
}

impl SubgroupClass {
    pub fn order(&self) -> usize {
        self.representative.order()
    }

    pub fn size(&self) -> usize {
        self.conjugates.len()
    }
}

/// All subgroups of a group up to conjugacy, with the subconjugacy order.
#[derive(Debug)]
pub struct SubgroupLattice {
    classes: Vec<SubgroupClass>,
    lookup: HashMap<Bits, usize>,
    below: Vec<Vec<bool>>,
    order: usize,
}

impl SubgroupLattice {
    pub(super) fn build(g: &PermGroup) -> Self {
        let n = g.order();
        let mut seen: HashSet<Bits> = HashSet::new();
        let trivial = g.trivial_subgroup();
        seen.insert(Bits::of(&trivial, n));
        let mut all = vec![trivial];
        let mut frontier = 0;
        while frontier < all.len() {
            let h = all[frontier].clone();
            frontier += 1;
            let base = minimal_generators(g, &h);
            for x in 0..n {
                if h.contains(x) {
                    continue;
                }
                let mut gens = base.clone();
                gens.push(x);
                let k = g.generate(&gens);
                if seen.insert(Bits::of(&k, n)) {
                    all.push(k);
                }
            }
        }
        all.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.members().cmp(b.members())));

        let mut lookup: HashMap<Bits, usize> = HashMap::new();
        let mut classes = Vec::new();
        for h in &all {
            if lookup.contains_key(&Bits::of(h, n)) {
                continue;
            }
            let idx = classes.len();
            let mut conj: Vec<Subgroup> = (0..n).map(|s| g.conjugate_subgroup(h, s)).collect();
            conj.sort();
            conj.dedup();
            for c in &conj {
                lookup.insert(Bits::of(c, n), idx);
            }
            classes.push(SubgroupClass {
                index: idx,
                representative: h.clone(),
                conjugates: conj,
            });
        }
        let below = classes
            .iter()
            .map(|a| {
                classes
                    .iter()
                    .map(|b| {
                        b.order() % a.order() == 0 && a.conjugates.iter().any(|c| c.is_subset_of(&b.representative))
                    })
                    .collect()
            })
            .collect();
        SubgroupLattice {
            classes,
            lookup,
            below,
            order: n,
        }
    }

    pub fn classes(&self) -> &[SubgroupClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class(&self, i: usize) -> &SubgroupClass {
        &self.classes[i]
    }

    pub fn representative(&self, i: usize) -> &Subgroup {
        &self.classes[i].representative
    }

    /// Class index of an arbitrary subgroup.
    pub fn class_index(&self, h: &Subgroup) -> Option<usize> {
        self.lookup.get(&Bits::of(h, self.order)).copied()
    }

    /// Index of the class of the whole group (always last).
    pub fn top(&self) -> usize {
        self.classes.len() - 1
    }

    /// Whether some conjugate of class `a` is contained in class `b`.
    pub fn is_subconjugate(&self, a: usize, b: usize) -> bool {
        self.below[a][b]
    }

    /// Finds `c` with `c⁻¹ H c` equal to the class representative.
    pub fn conjugator_to_representative(&self, g: &PermGroup, h: &Subgroup) -> Option<(usize, usize)> {
        let idx = self.class_index(h)?;
        let rep = &self.classes[idx].representative;
        (0..g.order())
            .find(|&c| g.conjugate_subgroup(h, g.inv(c)) == *rep)
            .map(|c| (idx, c))
    }

    /// Class of the cyclic subgroup generated by `x`.
    pub fn cyclic_class(&self, g: &PermGroup, x: usize) -> usize {
        self.class_index(&g.generate(&[x])).expect("every subgroup is classified")
    }
}

/// `N_G(H)/H` realized as the regular permutation group on the cosets of
/// `H` in its normalizer, together with a section back into `G`.
#[derive(Debug)]
pub struct WeylGroup {
    pub group: PermGroup,
    pub normalizer: Subgroup,
    /// `section[w]` is an element of the normalizer mapping to `w`.
    pub section: Vec<usize>,
    /// For every element of `G`: its image in `W`, if it normalizes `H`.
    pub projection: Vec<Option<usize>>,
}

impl PermGroup {
    pub fn weyl_group(&self, h: &Subgroup) -> Result<WeylGroup> {
        self.check_subgroup(h.members())?;
        let normalizer = self.normalizer(h);
        let mut coset_of = vec![usize::MAX; self.order()];
        let mut cosets: Vec<Vec<usize>> = Vec::new();
        for &x in normalizer.members() {
            if coset_of[x] != usize::MAX {
                continue;
            }
            let mut c: Vec<usize> = h.members().iter().map(|&y| self.mul(x, y)).collect();
            c.sort_unstable();
            for &y in &c {
                coset_of[y] = cosets.len();
            }
            cosets.push(c);
        }
        let act = |x: usize| -> Perm { cosets.iter().map(|c| coset_of[self.mul(x, c[0])]).collect() };
        let gens: Vec<Perm> = minimal_generators(self, &normalizer).into_iter().map(act).collect();
        let group = PermGroup::new(format!("W({})", self.name()), cosets.len(), gens)
            .map_err(|e| Error::InvalidGroup(format!("Weyl group construction: {e}")))?;
        let mut section = vec![usize::MAX; group.order()];
        let mut projection = vec![None; self.order()];
        for &x in normalizer.members() {
            let w = group.id_of(&act(x)).expect("normalizer acts through W");
            projection[x] = Some(w);
            if section[w] == usize::MAX {
                section[w] = x;
            }
        }
        Ok(WeylGroup {
            group,
            normalizer,
            section,
            projection,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::named::*;
    use super::*;

    /// Brute force: every subset closed under product (via bitmask search on
    /// small groups).
    fn brute_subgroups(g: &PermGroup) -> Vec<Vec<usize>> {
        let n = g.order();
        assert!(n <= 12);
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            if mask & 1 == 0 {
                continue;
            }
            let members: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let closed = members
                .iter()
                .all(|&a| members.iter().all(|&b| mask >> g.mul(a, b) & 1 == 1));
            if closed {
                out.push(members);
            }
        }
        out
    }

    #[test]
    fn lattice_matches_brute_force() {
        for g in [cyclic(2), cyclic(3), cyclic(4), klein(), symmetric(3), dihedral(4), quaternion(), alternating4()] {
            let lat = g.lattice().unwrap();
            let brute = brute_subgroups(&g);
            let total: usize = lat.classes().iter().map(SubgroupClass::size).sum();
            assert_eq!(total, brute.len(), "{}", g.name());
            for s in &brute {
                assert!(lat.class_index(&Subgroup::from_sorted(s.clone())).is_some());
            }
        }
    }

    #[test]
    fn class_counts() {
        assert_eq!(trivial().lattice().unwrap().len(), 1);
        assert_eq!(cyclic(5).lattice().unwrap().len(), 2);
        let s3 = symmetric(3).lattice().unwrap();
        let orders: Vec<usize> = s3.classes().iter().map(SubgroupClass::order).collect();
        assert_eq!(orders, vec![1, 2, 3, 6]);
        assert_eq!(symmetric(4).lattice().unwrap().len(), 11);
        assert_eq!(alternating4().lattice().unwrap().len(), 5);
        assert_eq!(dihedral(4).lattice().unwrap().len(), 8);
        assert_eq!(quaternion().lattice().unwrap().len(), 6);
    }

    #[test]
    fn bound_is_enforced() {
        let s4 = symmetric(4);
        assert!(matches!(s4.lattice_with_bound(10), Err(Error::GroupTooLarge { order: 24, bound: 10 })));
    }

    #[test]
    fn subconjugacy() {
        let g = symmetric(3);
        let lat = g.lattice().unwrap();
        assert!(lat.is_subconjugate(0, 3));
        assert!(lat.is_subconjugate(1, 3));
        assert!(!lat.is_subconjugate(1, 2));
        assert!(!lat.is_subconjugate(3, 1));
    }

    #[test]
    fn weyl_examples() {
        let g = symmetric(3);
        assert_eq!(g.weyl_group(&g.whole()).unwrap().group.order(), 1);
        let w1 = g.weyl_group(&g.trivial_subgroup()).unwrap();
        assert_eq!(w1.group.order(), 6);
        let lat = g.lattice().unwrap();
        let c2 = lat.representative(1).clone();
        assert_eq!(g.weyl_group(&c2).unwrap().group.order(), 1);
        let c3 = lat.representative(2).clone();
        assert_eq!(g.weyl_group(&c3).unwrap().group.order(), 2);
    }

    #[test]
    fn weyl_order_is_index_in_normalizer() {
        for g in battery() {
            let lat = g.lattice().unwrap();
            for c in lat.classes() {
                let w = g.weyl_group(&c.representative).unwrap();
                assert_eq!(w.group.order() * c.order(), w.normalizer.order());
                for (wid, &x) in w.section.iter().enumerate() {
                    assert_eq!(w.projection[x], Some(wid));
                }
                // projection is a homomorphism
                for &a in w.normalizer.members() {
                    for &b in w.normalizer.members() {
                        let lhs = w.projection[g.mul(a, b)].unwrap();
                        let rhs = w.group.mul(w.projection[a].unwrap(), w.projection[b].unwrap());
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn weyl_rejects_non_subgroup() {
        let g = symmetric(3);
        assert!(g.weyl_group(&Subgroup::from_sorted(vec![0, 1, 2])).is_err());
    }
}
