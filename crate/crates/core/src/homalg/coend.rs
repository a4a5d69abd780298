use super::bar::{bar_map, hocolim_trunc, BarComplex, Diagram};
use super::complex::{ChainComplex, ChainMap};
use crate::orbitcat::{FinCategory, Functor, TwistedArrow};

/// A functor `I × I^op → Ch`: covariant in the first slot, contravariant
/// in the second.
pub trait Bifunctor {
    fn category(&self) -> &FinCategory;
    fn value(&self, i: usize, j: usize) -> &ChainComplex;
    /// For `u: i → i′` and `v: j′ → j`, the map `F(i, j) → F(i′, j′)`.
    fn map(&self, u: usize, v: usize) -> ChainMap;
}

/// The indexing category of a homotopy coend: a skeleton of `Tw(I)^op`
/// together with its inclusion into `Tw(I)^op`.
#[derive(Clone, Debug)]
pub struct CoendIndex {
    pub twisted: TwistedArrow,
    pub skeleton: FinCategory,
    pub inclusion: Functor,
}

impl CoendIndex {
    pub fn new(base: &FinCategory) -> Self {
        let twisted = TwistedArrow::new(base);
        let op = twisted.cat.opposite();
        let objects = op.skeleton_objects();
        let (skeleton, inclusion) = op.full_subcategory(&objects);
        CoendIndex {
            twisted,
            skeleton,
            inclusion,
        }
    }

    /// Base arrow behind a skeleton object.
    pub fn arrow(&self, object: usize) -> usize {
        self.twisted.arrow[self.inclusion.obj[object]]
    }

    /// `(u, v)` behind a skeleton morphism `f′ → f`, where `f′ = v∘f∘u`.
    pub fn pair(&self, morphism: usize) -> (usize, usize) {
        self.twisted.pair[self.inclusion.mor[morphism]]
    }
}

/// `F ∘ π^op` restricted to the skeleton: object `f: i → j` goes to `F(i, j)`.
pub struct CoendDiagram<'a> {
    index: &'a CoendIndex,
    base: &'a FinCategory,
    functor: &'a dyn Bifunctor,
}

impl<'a> CoendDiagram<'a> {
    pub fn new(index: &'a CoendIndex, functor: &'a dyn Bifunctor) -> Self {
        CoendDiagram {
            index,
            base: functor.category(),
            functor,
        }
    }

    pub fn ends(&self, object: usize) -> (usize, usize) {
        let f = self.index.arrow(object);
        (self.base.src(f), self.base.dst(f))
    }
}

impl Diagram for CoendDiagram<'_> {
    fn category(&self) -> &FinCategory {
        &self.index.skeleton
    }

    fn value(&self, object: usize) -> &ChainComplex {
        let (i, j) = self.ends(object);
        self.functor.value(i, j)
    }

    fn map(&self, morphism: usize) -> ChainMap {
        let (u, v) = self.index.pair(morphism);
        self.functor.map(u, v)
    }
}

/// Homotopy coend `∫^I F = hocolim_{Tw(I)^op} F∘π^op`, truncated at bar
/// degree `n`.
pub fn hocoend_trunc(index: &CoendIndex, functor: &dyn Bifunctor, n: usize) -> BarComplex {
    hocolim_trunc(&CoendDiagram::new(index, functor), n)
}

/// Map of homotopy coends induced by `eta(i, j): F(i, j) → F′(i, j)`.
pub fn hocoend_map(
    index: &CoendIndex,
    source: (&dyn Bifunctor, &BarComplex),
    target: (&dyn Bifunctor, &BarComplex),
    eta: &dyn Fn(usize, usize) -> ChainMap,
) -> ChainMap {
    let ds = CoendDiagram::new(index, source.0);
    let dt = CoendDiagram::new(index, target.0);
    bar_map(source.1, target.1, &ds, &dt, &|o| {
        let (i, j) = ds.ends(o);
        eta(i, j)
    })
}

/// A bifunctor stored as explicit tables, with maps computed on demand.
pub struct TableBifunctor<M: Fn(usize, usize) -> ChainMap> {
    pub category: FinCategory,
    pub values: Vec<Vec<ChainComplex>>,
    pub maps: M,
}

impl<M: Fn(usize, usize) -> ChainMap> Bifunctor for TableBifunctor<M> {
    fn category(&self) -> &FinCategory {
        &self.category
    }

    fn value(&self, i: usize, j: usize) -> &ChainComplex {
        &self.values[i][j]
    }

    fn map(&self, u: usize, v: usize) -> ChainMap {
        (self.maps)(u, v)
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use num_bigint::BigInt;
    use num_traits::Zero;

    use super::*;
    use crate::fingroup::named::cyclic;
    use crate::homalg::complex::{HomologyGroup, Ring};
    use crate::linalg::{QMatrix, SparseMatrix};
    use crate::orbitcat::tests_support::{codiscrete, terminal_category as terminal};
    use crate::orbitcat::OrbitCategory;

    fn permutation_matrix(rows: usize, cols: usize, image: impl Fn(usize) -> Option<usize>) -> SparseMatrix {
        SparseMatrix::from_triplets(rows, cols, (0..cols).filter_map(|c| image(c).map(|r| (r, c, BigInt::from(1)))))
    }

    /// `F(i, j) = ℚ[Hom(j, i)]` with `F(u, v)(h) = u∘h∘v`.
    fn hom_bifunctor(cat: FinCategory) -> TableBifunctor<impl Fn(usize, usize) -> ChainMap> {
        let n = cat.object_count();
        let values: Vec<Vec<ChainComplex>> = (0..n)
            .map(|i| (0..n).map(|j| ChainComplex::concentrated(Ring::QQ, cat.hom(j, i).len(), 0)).collect())
            .collect();
        let c2 = cat.clone();
        let maps = move |u: usize, v: usize| {
            let (i, i2, j2, j) = (c2.src(u), c2.dst(u), c2.src(v), c2.dst(v));
            let from = c2.hom(j, i);
            let to = c2.hom(j2, i2);
            let m = permutation_matrix(to.len(), from.len(), |c| {
                let h = c2.compose(u, c2.compose(from[c], v));
                to.iter().position(|&x| x == h)
            });
            ChainMap { components: vec![m] }
        };
        TableBifunctor {
            category: cat,
            values,
            maps,
        }
    }

    /// Strict coend of `ℚ[Hom(j, i)]`: the quotient of `⊕_c ℚ[End(c)]` by
    /// `g∘f ~ f∘g` for all composable `f: a → b`, `g: b → a`.
    fn strict_trace_rank(cat: &FinCategory) -> usize {
        let endos: Vec<usize> = (0..cat.object_count()).flat_map(|c| cat.hom(c, c).iter().copied()).collect();
        let pos = |m: usize| endos.iter().position(|&x| x == m).unwrap();
        let mut relations: Vec<Vec<BigInt>> = Vec::new();
        for f in 0..cat.morphism_count() {
            for &g in cat.hom(cat.dst(f), cat.src(f)) {
                let mut row = vec![BigInt::zero(); endos.len()];
                row[pos(cat.compose(g, f))] += 1;
                row[pos(cat.compose(f, g))] -= 1;
                relations.push(row);
            }
        }
        endos.len() - QMatrix::from_int_rows(&relations, endos.len()).rank()
    }

    #[test]
    fn terminal_index_returns_the_value() {
        let cat = terminal();
        let index = CoendIndex::new(&cat);
        let value = ChainComplex::concentrated(Ring::ZZ, 2, 1);
        let f = TableBifunctor {
            category: cat,
            values: vec![vec![value.clone()]],
            maps: |_, _| ChainMap::identity(&ChainComplex::concentrated(Ring::ZZ, 2, 1)),
        };
        let h = hocoend_trunc(&index, &f, 4).certified_homology();
        assert_eq!(h, value.homology_upto(3));
    }

    #[test]
    fn contractible_index() {
        let cat = codiscrete(2);
        let index = CoendIndex::new(&cat);
        let one = ChainComplex::concentrated(Ring::QQ, 1, 0);
        let f = TableBifunctor {
            category: cat,
            values: vec![vec![one.clone(); 2]; 2],
            maps: |_, _| ChainMap::identity(&ChainComplex::concentrated(Ring::QQ, 1, 0)),
        };
        let h = hocoend_trunc(&index, &f, 3).certified_homology();
        assert_eq!(h, vec![HomologyGroup::free(1), HomologyGroup::zero(), HomologyGroup::zero()]);
    }

    #[test]
    fn hom_coend_matches_strict_coequalizer() {
        let orb = OrbitCategory::new(Arc::new(cyclic(2))).unwrap();
        let cat = orb.category().clone();
        let expected = strict_trace_rank(&cat);
        let index = CoendIndex::new(&cat);
        let f = hom_bifunctor(cat);
        let h = hocoend_trunc(&index, &f, 3).certified_homology();
        assert_eq!(h[0].rank, expected);
        assert_eq!(expected, 3);
    }

    #[test]
    fn co_yoneda() {
        // F(i, j) = G(i) ⊗ ℚ[Hom(j, k)] has coend G(k)
        let orb = OrbitCategory::new(Arc::new(cyclic(2))).unwrap();
        let cat = orb.category().clone();
        let n = cat.object_count();
        let k = 0;
        // G = ℚ[Hom(·, G/1)] restricted covariantly: G(i) = ℚ[Hom(G/G, i)] ⊕ ℚ
        let g_of = |i: usize| cat.hom(n - 1, i).len() + 1;
        let values: Vec<Vec<ChainComplex>> = (0..n)
            .map(|i| (0..n).map(|j| ChainComplex::concentrated(Ring::QQ, g_of(i) * cat.hom(j, k).len(), 0)).collect())
            .collect();
        let c2 = cat.clone();
        let maps = move |u: usize, v: usize| {
            let (i, i2, j2, j) = (c2.src(u), c2.dst(u), c2.src(v), c2.dst(v));
            let (gi, gi2) = (c2.hom(n - 1, i), c2.hom(n - 1, i2));
            let (hj, hj2) = (c2.hom(j, k), c2.hom(j2, k));
            let m = permutation_matrix((gi2.len() + 1) * hj2.len(), (gi.len() + 1) * hj.len(), |c| {
                let (a, b) = (c / hj.len(), c % hj.len());
                let a2 = if a == gi.len() {
                    gi2.len()
                } else {
                    gi2.iter().position(|&x| x == c2.compose(u, gi[a]))?
                };
                let b2 = hj2.iter().position(|&x| x == c2.compose(hj[b], v))?;
                Some(a2 * hj2.len() + b2)
            });
            ChainMap { components: vec![m] }
        };
        let f = TableBifunctor {
            category: cat.clone(),
            values,
            maps,
        };
        let index = CoendIndex::new(&cat);
        let h = hocoend_trunc(&index, &f, 4).certified_homology();
        assert_eq!(h[0], HomologyGroup::free(g_of(k)));
        assert!(h[1..].iter().all(HomologyGroup::is_zero));
    }
}
