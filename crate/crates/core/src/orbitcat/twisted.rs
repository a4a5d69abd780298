use std::collections::HashMap;

use super::category::{FinCategory, Morphism};
use crate::error::{Error, Result};

/// Twisted arrow category. Objects are the arrows `f: i → j` of the base;
/// a morphism `f ⇒ f′` is a pair `(u: i′ → i, v: j → j′)` with
/// `f′ = v∘f∘u`.
#[derive(Clone, Debug)]
pub struct TwistedArrow {
    pub cat: FinCategory,
    /// Base arrow of each object.
    pub arrow: Vec<usize>,
    /// `(u, v)` of each morphism.
    pub pair: Vec<(usize, usize)>,
}

impl TwistedArrow {
    pub fn new(base: &FinCategory) -> Self {
        let mut morphisms = Vec::new();
        let mut pair = Vec::new();
        let mut lookup: HashMap<(usize, usize, usize), usize> = HashMap::new();
        for f in 0..base.morphism_count() {
            let (i, j) = (base.src(f), base.dst(f));
            for i2 in 0..base.object_count() {
                for &u in base.hom(i2, i) {
                    for &v in base.out_of(j) {
                        let target = base.compose(v, base.compose(f, u));
                        lookup.insert((f, u, v), morphisms.len());
                        morphisms.push(Morphism {
                            src: f,
                            dst: target,
                            label: format!("({u},{v})"),
                        });
                        pair.push((u, v));
                    }
                }
            }
        }
        let identities = (0..base.morphism_count())
            .map(|f| lookup[&(f, base.identity(base.src(f)), base.identity(base.dst(f)))])
            .collect();
        let labels = (0..base.morphism_count())
            .map(|f| format!("{}:{}→{}", base.morphism(f).label, base.src(f), base.dst(f)))
            .collect();
        let cat = FinCategory::build(labels, morphisms.clone(), identities, |second, first| {
            let (u, v) = pair[first];
            let (u2, v2) = pair[second];
            lookup[&(morphisms[first].src, base.compose(u, u2), base.compose(v2, v))]
        })
        .expect("twisted arrow category of a valid category is valid");
        TwistedArrow {
            cat,
            arrow: (0..base.morphism_count()).collect(),
            pair,
        }
    }

    /// Checks that `f ↦ (src f, dst f)`, `(u,v) ↦ (u, v)` is a functor to
    /// `base^op × base`, recomputing composites in the base.
    pub fn check_projection(&self, base: &FinCategory) -> Result<()> {
        let tw = &self.cat;
        for o in 0..tw.object_count() {
            let f = self.arrow[o];
            let (u, v) = self.pair[tw.identity(o)];
            if u != base.identity(base.src(f)) || v != base.identity(base.dst(f)) {
                return Err(Error::InvalidCategory(format!("projection misses identity at {o}")));
            }
        }
        for m in 0..tw.morphism_count() {
            let (u, v) = self.pair[m];
            let (f, f2) = (self.arrow[tw.src(m)], self.arrow[tw.dst(m)]);
            if base.dst(u) != base.src(f) || base.src(v) != base.dst(f) || base.compose(v, base.compose(f, u)) != f2 {
                return Err(Error::InvalidCategory(format!("square of morphism {m} does not commute")));
            }
            for &m2 in tw.out_of(tw.dst(m)) {
                let (u2, v2) = self.pair[m2];
                if self.pair[tw.compose(m2, m)] != (base.compose(u, u2), base.compose(v2, v)) {
                    return Err(Error::InvalidCategory(format!("projection does not preserve {m2}∘{m}")));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::category::tests::*;
    use super::super::OrbitCategory;
    use super::*;
    use crate::fingroup::named::*;
    use std::sync::Arc;

    #[test]
    fn object_counts() {
        assert_eq!(TwistedArrow::new(&terminal_category()).cat.object_count(), 1);
        let arrow = arrow_category();
        let tw = TwistedArrow::new(&arrow);
        assert_eq!(tw.cat.object_count(), 3);
        tw.check_projection(&arrow).unwrap();
        // Tw of the orbit category of ℤ/2: End(G/1) = ℤ/2, one map G/1 → G/G, End(G/G) = 1
        let orb = OrbitCategory::new(Arc::new(cyclic(2))).unwrap();
        let tw = TwistedArrow::new(orb.category());
        assert_eq!(tw.cat.object_count(), 4);
        tw.check_projection(orb.category()).unwrap();
    }

    #[test]
    fn twisted_arrow_of_a_group_is_the_action_groupoid() {
        // for a one-object groupoid G, Tw has |G| objects and |G|³ morphisms,
        // and every object is isomorphic to the identity (conjugation action)
        let c = cyclic_monoid(3);
        let tw = TwistedArrow::new(&c);
        assert_eq!(tw.cat.morphism_count(), 27);
        assert_eq!(tw.cat.skeleton_objects().len(), 1);
    }

    #[test]
    fn s3_orbit_category() {
        let orb = OrbitCategory::new(Arc::new(symmetric(3))).unwrap();
        let tw = TwistedArrow::new(orb.category());
        assert_eq!(tw.cat.object_count(), 18);
        tw.check_projection(orb.category()).unwrap();
    }
}
