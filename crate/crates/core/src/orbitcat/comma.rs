use std::collections::HashMap;

use super::category::{FinCategory, Functor, Morphism};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variance {
    /// Objects `(T, f: ι(T) → S)`.
    Co,
    /// Objects `(T, f: S → ι(T))`.
    Contra,
}

/// A comma category of an inclusion `ι: D → C` over or under an object `S`,
/// with its projection to `D`.
#[derive(Clone, Debug)]
pub struct CommaCategory {
    pub cat: FinCategory,
    /// `(T, f)` for each object.
    pub objects: Vec<(usize, usize)>,
    pub projection: Functor,
}

/// Builds `ι ↓ S` (covariant) or `S ↓ ι` (contravariant). A morphism
/// `(T, f) → (T′, f′)` is `h: T → T′` in `D` with `f′∘ι(h) = f`
/// (covariant) or `ι(h)∘f = f′` (contravariant).
pub fn comma_over(d: &FinCategory, inc: &Functor, c: &FinCategory, s: usize, variance: Variance) -> CommaCategory {
    let mut objects = Vec::new();
    for t in 0..d.object_count() {
        let arrows = match variance {
            Variance::Co => c.hom(inc.obj[t], s),
            Variance::Contra => c.hom(s, inc.obj[t]),
        };
        for &f in arrows {
            objects.push((t, f));
        }
    }
    let index: HashMap<(usize, usize), usize> = objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();
    let mut morphisms = Vec::new();
    let mut proj_mor = Vec::new();
    let mut lookup: HashMap<(usize, usize, usize), usize> = HashMap::new();
    for (a, &(t, f)) in objects.iter().enumerate() {
        for &h in d.out_of(t) {
            let t2 = d.dst(h);
            let ih = inc.mor[h];
            let targets: Vec<usize> = match variance {
                Variance::Co => c
                    .hom(inc.obj[t2], s)
                    .iter()
                    .copied()
                    .filter(|&f2| c.compose(f2, ih) == f)
                    .collect(),
                Variance::Contra => vec![c.compose(ih, f)],
            };
            for f2 in targets {
                let b = index[&(t2, f2)];
                lookup.insert((a, h, b), morphisms.len());
                morphisms.push(Morphism {
                    src: a,
                    dst: b,
                    label: d.morphism(h).label.clone(),
                });
                proj_mor.push(h);
            }
        }
    }
    let identities = objects.iter().enumerate().map(|(a, &(t, _))| lookup[&(a, d.identity(t), a)]).collect();
    let labels = objects
        .iter()
        .map(|&(t, f)| format!("({}, {})", d.object_label(t), c.morphism(f).label))
        .collect();
    let cat = FinCategory::assemble(labels, morphisms.clone(), identities, |g, f| {
        lookup[&(morphisms[f].src, d.compose(proj_mor[g], proj_mor[f]), morphisms[g].dst)]
    })
    .expect("comma category of a valid inclusion is valid");
    let projection = Functor {
        obj: objects.iter().map(|&(t, _)| t).collect(),
        mor: proj_mor,
    };
    CommaCategory {
        cat,
        objects,
        projection,
    }
}

#[cfg(test)]
mod tests {
    use super::super::OrbitCategory;
    use super::*;
    use crate::fingroup::named::*;
    use crate::fingroup::Family;
    use std::sync::Arc;

    #[test]
    fn whole_category_comma_has_terminal_object() {
        let orb = OrbitCategory::new(Arc::new(symmetric(3))).unwrap();
        let c = orb.category();
        let id = Functor::identity(c);
        for s in 0..c.object_count() {
            let comma = comma_over(c, &id, c, s, Variance::Co);
            comma.cat.check_laws().unwrap();
            comma.projection.check(&comma.cat, c).unwrap();
            let term = comma.objects.iter().position(|&o| o == (s, c.identity(s))).unwrap();
            for a in 0..comma.cat.object_count() {
                assert_eq!(comma.cat.hom(a, term).len(), 1);
            }
        }
    }

    #[test]
    fn examples() {
        let g = Arc::new(symmetric(3));
        let orb = OrbitCategory::new(g.clone()).unwrap();
        let c = orb.category();
        // F⊥ = {C2, S3}
        let f = Family::new(&g, [0, 2]).unwrap();
        let (d, inc) = orb.complement_subcategory(&f);
        let comma = comma_over(&d, &inc, c, 0, Variance::Co);
        assert_eq!(comma.cat.object_count(), 0);

        let z2 = Arc::new(cyclic(2));
        let orb = OrbitCategory::new(z2.clone()).unwrap();
        let f = Family::new(&z2, [0]).unwrap();
        let (d, inc) = orb.complement_subcategory(&f);
        let comma = comma_over(&d, &inc, orb.category(), 0, Variance::Contra);
        assert_eq!(comma.cat.object_count(), 1);
        comma.cat.check_laws().unwrap();
    }

    #[test]
    fn covariant_comma_over_family_object_is_empty() {
        // for S with stabilizer in F, nothing outside F maps to S
        for g in battery() {
            let g = Arc::new(g);
            let orb = OrbitCategory::new(g.clone()).unwrap();
            for gamma in g.conjugacy_classes() {
                let f = g.family_of_gamma(gamma).unwrap();
                let (d, inc) = orb.complement_subcategory(&f);
                for &s in &f.members {
                    assert_eq!(comma_over(&d, &inc, orb.category(), s, Variance::Co).cat.object_count(), 0);
                }
            }
        }
    }
}
