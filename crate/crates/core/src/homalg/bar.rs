use std::collections::HashMap;

use num_bigint::BigInt;

use super::complex::{ChainComplex, ChainMap, HomologyGroup, Ring};
use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;
use crate::orbitcat::{Chain, FinCategory};

/// A covariant functor from a finite category to chain complexes.
pub trait Diagram {
    fn category(&self) -> &FinCategory;
    fn value(&self, object: usize) -> &ChainComplex;
    /// `D(m): D(src m) → D(dst m)`.
    fn map(&self, morphism: usize) -> ChainMap;
}

/// A diagram with all values and maps stored explicitly.
#[derive(Clone, Debug)]
pub struct ChainFunctor {
    pub category: FinCategory,
    pub values: Vec<ChainComplex>,
    pub maps: Vec<ChainMap>,
}

impl ChainFunctor {
    /// Validates every map and functoriality on all composable pairs.
    pub fn new(category: FinCategory, values: Vec<ChainComplex>, maps: Vec<ChainMap>) -> Result<Self> {
        let f = ChainFunctor {
            category,
            values,
            maps,
        };
        f.check()?;
        Ok(f)
    }

    pub fn check(&self) -> Result<()> {
        let c = &self.category;
        if self.values.len() != c.object_count() || self.maps.len() != c.morphism_count() {
            return Err(Error::InvalidChainData("functor tables have the wrong size".into()));
        }
        for m in 0..c.morphism_count() {
            self.maps[m].check(&self.values[c.src(m)], &self.values[c.dst(m)])?;
        }
        for o in 0..c.object_count() {
            if !same_map(&self.maps[c.identity(o)], &ChainMap::identity(&self.values[o]), &self.values[o], &self.values[o]) {
                return Err(Error::InvalidChainData(format!("identity of object {o} is not sent to the identity")));
            }
        }
        for f in 0..c.morphism_count() {
            for &g in c.out_of(c.dst(f)) {
                let (a, b, t) = (&self.values[c.src(f)], &self.values[c.dst(f)], &self.values[c.dst(g)]);
                let composite = self.maps[g].compose(&self.maps[f], a, b, t);
                if !same_map(&self.maps[c.compose(g, f)], &composite, a, t) {
                    return Err(Error::InvalidChainData(format!("functoriality fails at {g}∘{f}")));
                }
            }
        }
        Ok(())
    }

    /// The constant functor with identity maps.
    pub fn constant(category: FinCategory, value: ChainComplex) -> Self {
        let maps = vec![ChainMap::identity(&value); category.morphism_count()];
        let values = vec![value; category.object_count()];
        ChainFunctor {
            category,
            values,
            maps,
        }
    }
}

impl Diagram for ChainFunctor {
    fn category(&self) -> &FinCategory {
        &self.category
    }

    fn value(&self, object: usize) -> &ChainComplex {
        &self.values[object]
    }

    fn map(&self, morphism: usize) -> ChainMap {
        self.maps[morphism].clone()
    }
}

/// Degreewise equality of two chain maps with the same source and target.
pub fn same_map(f: &ChainMap, g: &ChainMap, a: &ChainComplex, b: &ChainComplex) -> bool {
    (0..a.len().max(b.len())).all(|k| f.component(k, a, b) == g.component(k, a, b))
}

#[derive(Clone, Debug)]
struct Block {
    q: usize,
    chain: usize,
    p: usize,
    offset: usize,
    len: usize,
}

/// The totalized normalized bar complex of a diagram, truncated at a bar
/// degree, with its block layout kept for building induced maps.
#[derive(Clone, Debug)]
pub struct BarComplex {
    pub complex: ChainComplex,
    pub truncation: usize,
    chains: Vec<Vec<Chain>>,
    chain_index: Vec<HashMap<Chain, usize>>,
    blocks: Vec<Vec<Block>>,
    block_at: Vec<HashMap<(usize, usize), usize>>,
}

impl BarComplex {
    /// Homology in the degrees the truncation certifies (`0..truncation`).
    pub fn certified_homology(&self) -> Vec<HomologyGroup> {
        if self.truncation == 0 {
            return Vec::new();
        }
        self.complex.homology_upto(self.truncation - 1)
    }

    pub fn chain_count(&self, q: usize) -> usize {
        self.chains.get(q).map_or(0, Vec::len)
    }

    fn offset_of(&self, n: usize, q: usize, chain: &Chain) -> Option<&Block> {
        let c = *self.chain_index.get(q)?.get(chain)?;
        let b = *self.block_at.get(n)?.get(&(q, c))?;
        Some(&self.blocks[n][b])
    }
}

/// `hocolim` of a diagram as the total complex of the normalized bar
/// construction `B_q = ⊕_{c0→…→cq} D(c0)`, in total degrees `0..=n`.
/// Homology is exact in degrees `< n`. Chains starting at objects with zero
/// value are never built.
pub fn hocolim_trunc(d: &dyn Diagram, n: usize) -> BarComplex {
    let cat = d.category();
    let ring = (0..cat.object_count())
        .map(|o| d.value(o).ring())
        .find(|&r| r == Ring::QQ)
        .unwrap_or(Ring::ZZ);
    let live: Vec<usize> = (0..cat.object_count()).filter(|&o| !d.value(o).is_zero()).collect();

    let mut chains: Vec<Vec<Chain>> = vec![live
        .iter()
        .map(|&start| Chain {
            start,
            arrows: Vec::new(),
        })
        .collect()];
    for _ in 0..n {
        let prev = chains.last().unwrap();
        let mut next = Vec::new();
        for c in prev {
            let end = c.arrows.last().map_or(c.start, |&m| cat.dst(m));
            for &m in cat.out_of(end) {
                if !cat.is_identity(m) {
                    let mut arrows = c.arrows.clone();
                    arrows.push(m);
                    next.push(Chain { start: c.start, arrows });
                }
            }
        }
        chains.push(next);
    }
    let chain_index: Vec<HashMap<Chain, usize>> = chains
        .iter()
        .map(|level| level.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect())
        .collect();

    let mut blocks: Vec<Vec<Block>> = Vec::new();
    let mut block_at: Vec<HashMap<(usize, usize), usize>> = Vec::new();
    let mut ranks = Vec::new();
    for total in 0..=n {
        let mut bs = Vec::new();
        let mut at = HashMap::new();
        let mut offset = 0;
        for q in 0..=total {
            let p = total - q;
            for (ci, c) in chains[q].iter().enumerate() {
                let len = d.value(c.start).rank(p);
                if len == 0 {
                    continue;
                }
                at.insert((q, ci), bs.len());
                bs.push(Block {
                    q,
                    chain: ci,
                    p,
                    offset,
                    len,
                });
                offset += len;
            }
        }
        ranks.push(offset);
        blocks.push(bs);
        block_at.push(at);
    }

    let mut map_cache: HashMap<usize, ChainMap> = HashMap::new();
    let mut diffs = Vec::new();
    for total in 1..=n {
        let mut trip: Vec<(usize, usize, BigInt)> = Vec::new();
        for b in &blocks[total] {
            let chain = &chains[b.q][b.chain];
            let start_value = d.value(chain.start);
            let target = |q: usize, c: &Chain| -> Option<usize> {
                let ci = *chain_index[q].get(c)?;
                let bi = *block_at[total - 1].get(&(q, ci))?;
                Some(blocks[total - 1][bi].offset)
            };
            if b.q >= 1 {
                // d_0: apply the first arrow
                let f1 = chain.arrows[0];
                let rest = Chain {
                    start: cat.dst(f1),
                    arrows: chain.arrows[1..].to_vec(),
                };
                if let Some(off) = target(b.q - 1, &rest) {
                    let fm = map_cache.entry(f1).or_insert_with(|| d.map(f1));
                    let comp = fm.component(b.p, start_value, d.value(rest.start));
                    for (r, c, v) in comp.triplets() {
                        trip.push((off + r, b.offset + c, v.clone()));
                    }
                }
                // inner faces: compose adjacent arrows
                for i in 1..b.q {
                    let composite = cat.compose(chain.arrows[i], chain.arrows[i - 1]);
                    if cat.is_identity(composite) {
                        continue;
                    }
                    let mut arrows = chain.arrows[..i - 1].to_vec();
                    arrows.push(composite);
                    arrows.extend_from_slice(&chain.arrows[i + 1..]);
                    let merged = Chain {
                        start: chain.start,
                        arrows,
                    };
                    if let Some(off) = target(b.q - 1, &merged) {
                        let sign = if i % 2 == 0 { 1 } else { -1 };
                        for j in 0..b.len {
                            trip.push((off + j, b.offset + j, BigInt::from(sign)));
                        }
                    }
                }
                // last face: drop the last arrow
                let front = Chain {
                    start: chain.start,
                    arrows: chain.arrows[..b.q - 1].to_vec(),
                };
                if let Some(off) = target(b.q - 1, &front) {
                    let sign = if b.q % 2 == 0 { 1 } else { -1 };
                    for j in 0..b.len {
                        trip.push((off + j, b.offset + j, BigInt::from(sign)));
                    }
                }
            }
            if b.p >= 1 {
                if let Some(&bi) = block_at[total - 1].get(&(b.q, b.chain)) {
                    let off = blocks[total - 1][bi].offset;
                    let sign = if b.q % 2 == 0 { BigInt::from(1) } else { BigInt::from(-1) };
                    for (r, c, v) in start_value.differential(b.p).triplets() {
                        trip.push((off + r, b.offset + c, &sign * v));
                    }
                }
            }
        }
        diffs.push(SparseMatrix::from_triplets(ranks[total - 1], ranks[total], trip));
    }
    BarComplex {
        complex: ChainComplex::new_unchecked(ring, ranks, diffs),
        truncation: n,
        chains,
        chain_index,
        blocks,
        block_at,
    }
}

/// The map of bar complexes induced by a natural transformation with
/// components `eta(o): D(o) → D′(o)`, over the same category.
pub fn bar_map(
    source: &BarComplex,
    target: &BarComplex,
    d_source: &dyn Diagram,
    d_target: &dyn Diagram,
    eta: &dyn Fn(usize) -> ChainMap,
) -> ChainMap {
    let n = source.truncation.min(target.truncation);
    let mut cache: HashMap<usize, ChainMap> = HashMap::new();
    let components = (0..=n)
        .map(|total| {
            let mut trip = Vec::new();
            for b in &source.blocks[total] {
                let chain = &source.chains[b.q][b.chain];
                if let Some(tb) = target.offset_of(total, b.q, chain) {
                    let e = cache.entry(chain.start).or_insert_with(|| eta(chain.start));
                    let comp = e.component(b.p, d_source.value(chain.start), d_target.value(chain.start));
                    for (r, c, v) in comp.triplets() {
                        trip.push((tb.offset + r, b.offset + c, v.clone()));
                    }
                }
            }
            SparseMatrix::from_triplets(target.complex.rank(total), source.complex.rank(total), trip)
        })
        .collect();
    ChainMap { components }
}

/// The augmentation `hocolim D → T` given compatible maps `D(o) → T`
/// (a cocone): bar degree 0 maps through the cocone, higher bar degrees
/// map to zero.
pub fn bar_augmentation(
    source: &BarComplex,
    d: &dyn Diagram,
    target: &ChainComplex,
    cocone: &dyn Fn(usize) -> ChainMap,
) -> ChainMap {
    let n = source.truncation;
    let len = (n + 1).max(target.len());
    let components = (0..len)
        .map(|total| {
            let mut trip = Vec::new();
            if total <= n {
                for b in source.blocks[total].iter().filter(|b| b.q == 0) {
                    let o = source.chains[0][b.chain].start;
                    for (r, c, v) in cocone(o).component(b.p, d.value(o), target).triplets() {
                        trip.push((r, b.offset + c, v.clone()));
                    }
                }
            }
            SparseMatrix::from_triplets(target.rank(total), source.complex.rank(total), trip)
        })
        .collect();
    ChainMap { components }
}

/// Recomputes with one more bar degree and compares homology in the
/// degrees the smaller truncation certifies.
pub fn truncation_stable(d: &dyn Diagram, n: usize) -> bool {
    let a = hocolim_trunc(d, n).certified_homology();
    let b = hocolim_trunc(d, n + 1).certified_homology();
    a.iter().zip(b.iter()).all(|(x, y)| x == y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homalg::complex::{quasi_iso_in_range, HomologyGroup};
    use crate::orbitcat::Morphism;

    fn group_category(n: usize) -> FinCategory {
        let morphisms = (0..n).map(|k| Morphism { src: 0, dst: 0, label: format!("t{k}") }).collect();
        FinCategory::build(vec!["*".into()], morphisms, vec![0], |g, f| (g + f) % n).unwrap()
    }

    /// Independent oracle: the 2-periodic resolution of ℤ over ℤ[ℤ/2]
    /// tensored with the trivial module gives ℤ ←0− ℤ ←2− ℤ ←0− ℤ ←2− …
    fn z2_group_homology_oracle(top: usize) -> Vec<HomologyGroup> {
        (0..=top)
            .map(|k| match k {
                0 => HomologyGroup::free(1),
                k if k % 2 == 1 => HomologyGroup {
                    rank: 0,
                    torsion: vec![BigInt::from(2)],
                },
                _ => HomologyGroup::zero(),
            })
            .collect()
    }

    #[test]
    fn single_object_collapses() {
        let cat = group_category(1);
        let v = ChainComplex::concentrated(Ring::ZZ, 3, 0);
        let d = ChainFunctor::constant(cat, v);
        let bar = hocolim_trunc(&d, 4);
        assert_eq!(bar.certified_homology()[0], HomologyGroup::free(3));
        assert!(bar.certified_homology()[1..].iter().all(HomologyGroup::is_zero));
    }

    #[test]
    fn classifying_space_of_z2() {
        let d = ChainFunctor::constant(group_category(2), ChainComplex::concentrated(Ring::ZZ, 1, 0));
        let bar = hocolim_trunc(&d, 4);
        bar.complex.check_square_zero().unwrap();
        assert_eq!(bar.certified_homology(), z2_group_homology_oracle(3));
        let q = ChainFunctor::constant(group_category(2), ChainComplex::concentrated(Ring::QQ, 1, 0));
        let h = hocolim_trunc(&q, 4).certified_homology();
        assert_eq!(h[0], HomologyGroup::free(1));
        assert!(h[1..].iter().all(HomologyGroup::is_zero));
        assert!(truncation_stable(&d, 4));
    }

    #[test]
    fn classifying_space_of_z3() {
        // H_odd(ℤ/3; ℤ) = ℤ/3, H_even>0 = 0
        let d = ChainFunctor::constant(group_category(3), ChainComplex::concentrated(Ring::ZZ, 1, 0));
        let h = hocolim_trunc(&d, 4).certified_homology();
        assert_eq!(h[1].torsion, vec![BigInt::from(3)]);
        assert!(h[2].is_zero());
        assert_eq!(h[3].torsion, vec![BigInt::from(3)]);
    }

    #[test]
    fn functor_checks() {
        let cat = group_category(2);
        let v = ChainComplex::concentrated(Ring::ZZ, 1, 0);
        let neg = ChainMap {
            components: vec![SparseMatrix::from_triplets(1, 1, [(0, 0, BigInt::from(-1))])],
        };
        // sign representation is a functor
        let sign = ChainFunctor::new(cat.clone(), vec![v.clone()], vec![ChainMap::identity(&v), neg.clone()]);
        assert!(sign.is_ok());
        // sending the identity to −1 is not
        let bad = ChainFunctor::new(cat, vec![v.clone()], vec![neg.clone(), neg]);
        assert!(bad.is_err());
        // H_*(ℤ/2; ℤ_sign): ℤ/2, 0, ℤ/2, 0 in degrees 0..3
        let h = hocolim_trunc(&sign.unwrap(), 4).certified_homology();
        assert_eq!(h[0].torsion, vec![BigInt::from(2)]);
        assert!(h[1].is_zero());
        assert_eq!(h[2].torsion, vec![BigInt::from(2)]);
    }

    #[test]
    fn augmentation_to_terminal_value() {
        // arrow category a → b with constant ℤ: hocolim ≃ ℤ, augmentation to D(b) is a q.i.
        let morphisms = vec![
            Morphism { src: 0, dst: 0, label: "a".into() },
            Morphism { src: 1, dst: 1, label: "b".into() },
            Morphism { src: 0, dst: 1, label: "f".into() },
        ];
        let cat = FinCategory::build(vec!["a".into(), "b".into()], morphisms, vec![0, 1], |g, f| {
            if g == 1 && f == 1 {
                1
            } else if g == 0 && f == 0 {
                0
            } else {
                2
            }
        })
        .unwrap();
        let v = ChainComplex::concentrated(Ring::ZZ, 1, 0);
        let d = ChainFunctor::constant(cat, v.clone());
        let bar = hocolim_trunc(&d, 3);
        let aug = bar_augmentation(&bar, &d, &v, &|_| ChainMap::identity(&v));
        aug.check(&bar.complex, &v).unwrap();
        assert!(quasi_iso_in_range(&aug, &bar.complex, &v, 0, 1));
    }
}
