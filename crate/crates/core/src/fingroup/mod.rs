//! Finite permutation groups and their subgroup/conjugacy combinatorics.
//!
//! Elements are stored once, sorted lexicographically by their image
//! vectors; everything downstream refers to elements by index into that
//! list. The identity is always element `0`.

mod family;
mod io;
pub mod named;
mod subgroups;

use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

pub use family::Family;
pub use io::{GroupFile, SuppliedCharacterTable};
pub use subgroups::{Bits, SubgroupClass, SubgroupLattice, WeylGroup};

/// Default bound on `|G|` for subgroup enumeration and character tables.
pub const DEFAULT_ORDER_BOUND: usize = 200;

/// Hard cap on element enumeration.
const ELEMENT_CAP: usize = 100_000;

/// A permutation of `{0..n-1}` given by its image vector.
pub type Perm = Vec<usize>;

pub fn compose(a: &[usize], b: &[usize]) -> Perm {
    // (a∘b)(x) = a(b(x))
    b.iter().map(|&x| a[x]).collect()
}

pub fn invert(a: &[usize]) -> Perm {
    let mut out = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        out[x] = i;
    }
    out
}

pub fn is_permutation(a: &[usize]) -> bool {
    let mut seen = vec![false; a.len()];
    for &x in a {
        if x >= a.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

/// A subgroup, as the sorted list of element ids of its parent group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    members: Vec<usize>,
}

impl Subgroup {
    pub fn from_sorted(members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Subgroup { members }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&g| other.contains(g))
    }
}

/// A conjugacy class of elements. The representative is the smallest
/// member in the canonical element order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementClass {
    pub representative: usize,
    pub members: Vec<usize>,
}

impl ElementClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }
}

/// A finite group given by permutation generators, with its full element
/// list and multiplication table cached.
#[derive(Clone, Debug)]
pub struct PermGroup {
    name: String,
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    table: Vec<u32>,
    inverses: Vec<usize>,
    generator_ids: Vec<usize>,
    classes: Vec<ElementClass>,
    class_of: Vec<usize>,
    orders: Vec<usize>,
    lattice: OnceLock<std::result::Result<Arc<SubgroupLattice>, Error>>,
    pub(crate) supplied_table: Option<SuppliedCharacterTable>,
}

impl PermGroup {
    pub fn new(name: impl Into<String>, degree: usize, generators: Vec<Perm>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidGroup("degree must be positive".into()));
        }
        for g in &generators {
            if g.len() != degree || !is_permutation(g) {
                return Err(Error::InvalidGroup(format!("generator {g:?} is not a permutation of 0..{degree}")));
            }
        }
        let identity: Perm = (0..degree).collect();
        let mut seen: HashMap<Perm, ()> = HashMap::new();
        seen.insert(identity.clone(), ());
        let mut queue = VecDeque::from([identity]);
        let mut all = Vec::new();
        while let Some(p) = queue.pop_front() {
            for s in &generators {
                let q = compose(s, &p);
                if !seen.contains_key(&q) {
                    if seen.len() >= ELEMENT_CAP {
                        return Err(Error::GroupTooLarge {
                            order: seen.len(),
                            bound: ELEMENT_CAP,
                        });
                    }
                    seen.insert(q.clone(), ());
                    queue.push_back(q);
                }
            }
            all.push(p);
        }
        all.sort();
        let n = all.len();
        let index: HashMap<Perm, usize> = all.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = index[&compose(&all[a], &all[b])] as u32;
            }
        }
        let inverses: Vec<usize> = all.iter().map(|p| index[&invert(p)]).collect();
        let generator_ids = generators.iter().map(|g| index[g]).collect();
        let mut group = PermGroup {
            name: name.into(),
            degree,
            generators,
            elements: all,
            index,
            table,
            inverses,
            generator_ids,
            classes: Vec::new(),
            class_of: Vec::new(),
            orders: Vec::new(),
            lattice: OnceLock::new(),
            supplied_table: None,
        };
        group.orders = (0..n).map(|g| group.element_order(g)).collect();
        group.compute_classes();
        Ok(group)
    }

    fn element_order(&self, g: usize) -> usize {
        let mut k = 1;
        let mut x = g;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    fn compute_classes(&mut self) {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for g in 0..n {
            if class_of[g] != usize::MAX {
                continue;
            }
            let mut members = vec![g];
            let mut queue = VecDeque::from([g]);
            class_of[g] = classes.len();
            while let Some(x) = queue.pop_front() {
                for &s in &self.generator_ids {
                    let y = self.conjugate(x, s);
                    if class_of[y] == usize::MAX {
                        class_of[y] = classes.len();
                        members.push(y);
                        queue.push_back(y);
                    }
                }
            }
            members.sort_unstable();
            classes.push(ElementClass {
                representative: members[0],
                members,
            });
        }
        self.classes = classes;
        self.class_of = class_of;
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn generator_ids(&self) -> &[usize] {
        &self.generator_ids
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn element(&self, g: usize) -> &Perm {
        &self.elements[g]
    }

    pub fn id_of(&self, p: &[usize]) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `s x s⁻¹`
    #[inline]
    pub fn conjugate(&self, x: usize, s: usize) -> usize {
        self.mul(self.mul(s, x), self.inv(s))
    }

    pub fn order_of(&self, g: usize) -> usize {
        self.orders[g]
    }

    pub fn power(&self, g: usize, k: usize) -> usize {
        let mut x = 0;
        for _ in 0..k {
            x = self.mul(x, g);
        }
        x
    }

    pub fn exponent(&self) -> usize {
        self.orders.iter().fold(1, |acc, &o| num_integer::lcm(acc, o))
    }

    pub fn is_abelian(&self) -> bool {
        self.classes.len() == self.order()
    }

    /// Element conjugacy classes, ordered by representative.
    pub fn conjugacy_classes(&self) -> &[ElementClass] {
        &self.classes
    }

    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g]
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_sorted((0..self.order()).collect())
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::from_sorted(vec![0])
    }

    /// Subgroup generated by the given elements.
    pub fn generate(&self, gens: &[usize]) -> Subgroup {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut members = vec![0];
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &s in gens {
                let y = self.mul(s, x);
                if !seen[y] {
                    seen[y] = true;
                    members.push(y);
                    queue.push_back(y);
                }
            }
        }
        members.sort_unstable();
        Subgroup::from_sorted(members)
    }

    /// Checks closure under product and inverse.
    pub fn check_subgroup(&self, members: &[usize]) -> Result<Subgroup> {
        let mut m: Vec<usize> = members.to_vec();
        m.sort_unstable();
        m.dedup();
        if m.iter().any(|&g| g >= self.order()) {
            return Err(Error::NotSubgroup("element id out of range".into()));
        }
        let h = Subgroup::from_sorted(m);
        if !h.contains(0) {
            return Err(Error::NotSubgroup("identity missing".into()));
        }
        for &a in h.members() {
            if !h.contains(self.inv(a)) {
                return Err(Error::NotSubgroup(format!("not closed under inverse at {a}")));
            }
            for &b in h.members() {
                if !h.contains(self.mul(a, b)) {
                    return Err(Error::NotSubgroup(format!("not closed under product at ({a},{b})")));
                }
            }
        }
        Ok(h)
    }

    /// `s H s⁻¹`
    pub fn conjugate_subgroup(&self, h: &Subgroup, s: usize) -> Subgroup {
        let mut m: Vec<usize> = h.members().iter().map(|&x| self.conjugate(x, s)).collect();
        m.sort_unstable();
        Subgroup::from_sorted(m)
    }

    pub fn normalizer(&self, h: &Subgroup) -> Subgroup {
        let members = (0..self.order()).filter(|&g| self.conjugate_subgroup(h, g) == *h).collect();
        Subgroup::from_sorted(members)
    }

    /// The subgroup as a permutation group in its own right (same degree).
    pub fn subgroup_as_group(&self, h: &Subgroup, name: impl Into<String>) -> PermGroup {
        let gens: Vec<Perm> = minimal_generators(self, h).iter().map(|&g| self.elements[g].clone()).collect();
        PermGroup::new(name, self.degree, gens).expect("subgroup of a valid group is valid")
    }

    /// The subgroup lattice up to conjugacy, bounded by [`DEFAULT_ORDER_BOUND`].
    pub fn lattice(&self) -> Result<Arc<SubgroupLattice>> {
        self.lattice_with_bound(DEFAULT_ORDER_BOUND)
    }

    pub fn lattice_with_bound(&self, bound: usize) -> Result<Arc<SubgroupLattice>> {
        if self.order() > bound {
            return Err(Error::GroupTooLarge {
                order: self.order(),
                bound,
            });
        }
        self.lattice
            .get_or_init(|| Ok(Arc::new(SubgroupLattice::build(self))))
            .clone()
    }

    /// Subgroup conjugacy classes sorted by order, then lexicographically.
    pub fn subgroup_classes(&self) -> Result<Vec<SubgroupClass>> {
        Ok(self.lattice()?.classes().to_vec())
    }

    /// Extends a homomorphism given on the generators to all elements.
    /// `images[i]` is the image of generator `i`, a permutation of `0..n`.
    pub fn action_from_generator_images(&self, images: &[Perm]) -> Result<Vec<Perm>> {
        if images.len() != self.generators.len() {
            return Err(Error::InvalidGroup(format!(
                "{} generator images given for {} generators",
                images.len(),
                self.generators.len()
            )));
        }
        let n = images.first().map_or(0, Vec::len);
        for im in images {
            if im.len() != n || !is_permutation(im) {
                return Err(Error::InvalidGroup(format!("action image {im:?} is not a permutation")));
            }
        }
        let mut act: Vec<Option<Perm>> = vec![None; self.order()];
        act[0] = Some((0..n).collect());
        let mut queue = VecDeque::from([0]);
        while let Some(g) = queue.pop_front() {
            for (i, &s) in self.generator_ids.iter().enumerate() {
                let h = self.mul(s, g);
                if act[h].is_none() {
                    act[h] = Some(compose(&images[i], act[g].as_ref().unwrap()));
                    queue.push_back(h);
                }
            }
        }
        let act: Vec<Perm> = act.into_iter().map(|a| a.expect("generators generate")).collect();
        for g in 0..self.order() {
            for (i, &s) in self.generator_ids.iter().enumerate() {
                if act[self.mul(s, g)] != compose(&images[i], &act[g]) {
                    return Err(Error::InvalidGroup("generator images do not define a homomorphism".into()));
                }
            }
        }
        Ok(act)
    }
}

/// A small generating set for `h` (greedy).
pub fn minimal_generators(g: &PermGroup, h: &Subgroup) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut cur = g.trivial_subgroup();
    for &x in h.members() {
        if !cur.contains(x) {
            gens.push(x);
            cur = g.generate(&gens);
        }
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;
    use named::*;

    #[test]
    fn class_sizes_partition_and_divide() {
        for g in battery() {
            let total: usize = g.conjugacy_classes().iter().map(ElementClass::size).sum();
            assert_eq!(total, g.order(), "{}", g.name());
            for c in g.conjugacy_classes() {
                assert_eq!(g.order() % c.size(), 0);
                assert_eq!(c.representative, c.members[0]);
            }
        }
    }

    #[test]
    fn class_examples() {
        assert_eq!(trivial().conjugacy_classes().len(), 1);
        let z4 = cyclic(4);
        assert_eq!(z4.conjugacy_classes().len(), 4);
        assert!(z4.conjugacy_classes().iter().all(|c| c.size() == 1));
        let s3 = symmetric(3);
        let sizes: Vec<usize> = s3.conjugacy_classes().iter().map(ElementClass::size).collect();
        assert_eq!(sizes, vec![1, 3, 2]);
    }

    #[test]
    fn orders_and_exponents() {
        assert_eq!(symmetric(4).order(), 24);
        assert_eq!(quaternion().order(), 8);
        assert_eq!(dihedral(4).order(), 8);
        assert_eq!(alternating4().order(), 12);
        assert_eq!(symmetric(3).exponent(), 6);
        assert_eq!(quaternion().exponent(), 4);
        assert!(!quaternion().is_abelian());
        assert!(klein().is_abelian());
    }

    #[test]
    fn rejects_bad_generators() {
        assert!(PermGroup::new("bad", 3, vec![vec![0, 0, 1]]).is_err());
        assert!(PermGroup::new("bad", 3, vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn action_extension_detects_non_homomorphisms() {
        let z2 = cyclic(2);
        assert!(z2.action_from_generator_images(&[vec![1, 0, 2]]).is_ok());
        let z3 = cyclic(3);
        // a transposition cannot be the image of an order-3 generator
        assert!(z3.action_from_generator_images(&[vec![1, 0]]).is_err());
    }
}
