use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fingroup::{is_permutation, Perm, PermGroup, Subgroup};

/// A pair of carrier points.
pub type Pair = (usize, usize);

/// A bornological coarse space on `0..size`, stored by generators.
///
/// On a finite carrier the generated coarse structure is the set of subsets
/// of one equivalence relation (the closure of the generators under
/// diagonal, inverse and composition), and the generated bornology is the
/// set of subsets of the union of the generators. Both are cached.
#[derive(Clone, Debug)]
pub struct BornCoarseSpace {
    size: usize,
    coarse_generators: Vec<Vec<Pair>>,
    bornology_generators: Vec<Vec<usize>>,
    block: Vec<usize>,
    bounded: Vec<bool>,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

impl BornCoarseSpace {
    pub fn new(size: usize, coarse_generators: Vec<Vec<Pair>>, bornology_generators: Vec<Vec<usize>>) -> Result<Self> {
        for u in &coarse_generators {
            if let Some(&(a, b)) = u.iter().find(|&&(a, b)| a >= size || b >= size) {
                return Err(Error::InvalidChainData(format!("entourage pair ({a}, {b}) leaves the carrier of size {size}")));
            }
        }
        for b in &bornology_generators {
            if let Some(&x) = b.iter().find(|&&x| x >= size) {
                return Err(Error::InvalidChainData(format!("bounded set contains {x}, outside the carrier of size {size}")));
            }
        }
        let mut parent: Vec<usize> = (0..size).collect();
        for &(a, b) in coarse_generators.iter().flatten() {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        // canonical block label: smallest point of the block
        let mut block = vec![usize::MAX; size];
        let roots: Vec<usize> = (0..size).map(|x| find(&mut parent, x)).collect();
        for x in 0..size {
            if block[roots[x]] == usize::MAX {
                block[roots[x]] = x;
            }
        }
        let block = roots.iter().map(|&r| block[r]).collect();
        let mut bounded = vec![false; size];
        for &x in bornology_generators.iter().flatten() {
            bounded[x] = true;
        }
        Ok(BornCoarseSpace {
            size,
            coarse_generators,
            bornology_generators,
            block,
            bounded,
        })
    }

    pub fn empty() -> Self {
        Self::new(0, Vec::new(), Vec::new()).unwrap()
    }

    /// Diagonal coarse structure, every subset bounded.
    pub fn min_max(size: usize) -> Self {
        Self::new(size, Vec::new(), vec![(0..size).collect()]).unwrap()
    }

    /// Every subset an entourage and every subset bounded.
    pub fn max_max(size: usize) -> Self {
        Self::new(size, vec![all_pairs(size)], vec![(0..size).collect()]).unwrap()
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn coarse_generators(&self) -> &[Vec<Pair>] {
        &self.coarse_generators
    }

    pub fn bornology_generators(&self) -> &[Vec<usize>] {
        &self.bornology_generators
    }

    /// Label of the block of `x` in the largest entourage.
    pub fn block_of(&self, x: usize) -> usize {
        self.block[x]
    }

    pub fn close(&self, x: usize, y: usize) -> bool {
        self.block[x] == self.block[y]
    }

    pub fn is_entourage(&self, u: &[Pair]) -> bool {
        u.iter().all(|&(a, b)| self.close(a, b))
    }

    pub fn is_bounded(&self, b: &[usize]) -> bool {
        b.iter().all(|&x| self.bounded[x])
    }

    pub fn is_bounded_point(&self, x: usize) -> bool {
        self.bounded[x]
    }

    /// Union of all bounded sets.
    pub fn bounded_points(&self) -> Vec<usize> {
        (0..self.size).filter(|&x| self.bounded[x]).collect()
    }

    /// The largest entourage.
    pub fn max_entourage(&self) -> Vec<Pair> {
        let mut out = Vec::new();
        for a in 0..self.size {
            for b in 0..self.size {
                if self.close(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn is_covering(&self) -> bool {
        self.bounded.iter().all(|&b| b)
    }

    /// Bornology and coarse structure are compatible: `U[B]` is bounded for
    /// every entourage `U` and bounded `B`.
    pub fn is_compatible(&self) -> bool {
        (0..self.size).all(|a| !self.bounded[a] || (0..self.size).all(|b| !self.close(a, b) || self.bounded[b]))
    }

    /// Equality of the generated structures.
    pub fn same_structures(&self, other: &Self) -> bool {
        self.size == other.size && self.block == other.block && self.bounded == other.bounded
    }

    /// Generators read back from the closures.
    pub fn regenerated(&self) -> Self {
        Self::new(self.size, vec![self.max_entourage()], vec![self.bounded_points()]).unwrap()
    }

    /// Structures pulled back along `j: 0..size → carrier`.
    pub fn pullback(&self, size: usize, j: &dyn Fn(usize) -> usize) -> Self {
        let mut pairs = Vec::new();
        for a in 0..size {
            for b in 0..size {
                if a != b && self.close(j(a), j(b)) {
                    pairs.push((a, b));
                }
            }
        }
        let bounded = (0..size).filter(|&a| self.bounded[j(a)]).collect();
        Self::new(size, vec![pairs], vec![bounded]).unwrap()
    }

    /// Induced structures on a subset, reindexed by position.
    pub fn induced(&self, subset: &[usize]) -> Self {
        self.pullback(subset.len(), &|a| subset[a])
    }

    /// Same carrier and coarse structure, bornology generated by `gens`.
    pub fn with_bornology(&self, gens: Vec<Vec<usize>>) -> Self {
        Self::new(self.size, self.coarse_generators.clone(), gens).unwrap()
    }
}

pub fn all_pairs(size: usize) -> Vec<Pair> {
    (0..size).flat_map(|a| (0..size).map(move |b| (a, b))).collect()
}

/// Why a function fails to be a morphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Rejection {
    /// A generating entourage whose image is not an entourage.
    Entourage(Vec<Pair>),
    /// A generating bounded set whose preimage is not bounded.
    Bounded(Vec<usize>),
    /// `f(g·x) ≠ g·f(x)` for a group generator `g`.
    NotEquivariant { generator: usize, point: usize },
    /// The function is not total on the carrier or leaves the target.
    NotAFunction(String),
}

/// An accepted morphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoarseMap {
    pub source_size: usize,
    pub target_size: usize,
    pub map: Vec<usize>,
}

impl CoarseMap {
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }
}

/// Controlled and proper, tested on generators.
pub fn check_morphism(map: &[usize], x: &BornCoarseSpace, y: &BornCoarseSpace) -> std::result::Result<CoarseMap, Rejection> {
    if map.len() != x.size() {
        return Err(Rejection::NotAFunction(format!("{} values for a carrier of size {}", map.len(), x.size())));
    }
    if let Some(&v) = map.iter().find(|&&v| v >= y.size()) {
        return Err(Rejection::NotAFunction(format!("value {v} outside the target")));
    }
    for u in x.coarse_generators() {
        if u.iter().any(|&(a, b)| !y.close(map[a], map[b])) {
            return Err(Rejection::Entourage(u.clone()));
        }
    }
    for b in y.bornology_generators() {
        let pre: Vec<usize> = (0..x.size()).filter(|&a| b.contains(&map[a])).collect();
        if !x.is_bounded(&pre) {
            return Err(Rejection::Bounded(b.clone()));
        }
    }
    Ok(CoarseMap {
        source_size: x.size(),
        target_size: y.size(),
        map: map.to_vec(),
    })
}

/// A bornological coarse space with a group acting by coarse automorphisms.
/// The bornology need not be invariant; `g_completion` makes it so.
#[derive(Clone, Debug)]
pub struct GBornCoarseSpace {
    pub base: BornCoarseSpace,
    pub group: Arc<PermGroup>,
    /// `action[g]` is the permutation of the carrier induced by element `g`.
    pub action: Vec<Perm>,
}

impl GBornCoarseSpace {
    /// Validates that every element acts as a coarse automorphism.
    pub fn new(base: BornCoarseSpace, group: Arc<PermGroup>, generator_images: &[Perm]) -> Result<Self> {
        let action = if group.generators().is_empty() {
            vec![(0..base.size()).collect(); group.order()]
        } else {
            group.action_from_generator_images(generator_images)?
        };
        Self::from_action(base, group, action)
    }

    pub fn from_action(base: BornCoarseSpace, group: Arc<PermGroup>, action: Vec<Perm>) -> Result<Self> {
        if action.len() != group.order() {
            return Err(Error::InvalidGroup("action table has the wrong length".into()));
        }
        for (g, p) in action.iter().enumerate() {
            if p.len() != base.size() || !is_permutation(p) {
                return Err(Error::InvalidGroup(format!("element {g} does not act by a permutation")));
            }
            if let Some(u) = base.coarse_generators().iter().find(|u| u.iter().any(|&(a, b)| !base.close(p[a], p[b]))) {
                return Err(Error::MorphismCheckFailed(format!("element {g} does not preserve the entourage {u:?}")));
            }
        }
        Ok(GBornCoarseSpace { base, group, action })
    }

    pub fn trivial(base: BornCoarseSpace, group: Arc<PermGroup>) -> Self {
        let action = vec![(0..base.size()).collect(); group.order()];
        GBornCoarseSpace { base, group, action }
    }

    pub fn size(&self) -> usize {
        self.base.size()
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.action[g][x]
    }

    pub fn orbit(&self, x: usize) -> Vec<usize> {
        let mut o: Vec<usize> = self.action.iter().map(|p| p[x]).collect();
        o.sort_unstable();
        o.dedup();
        o
    }

    /// G-invariant entourages are cofinal.
    pub fn is_g_coarse(&self) -> bool {
        let e = self.base.max_entourage();
        self.action.iter().all(|p| e.iter().all(|&(a, b)| self.base.close(p[a], p[b])))
    }

    /// Every translate of a bounded set is bounded.
    pub fn bornology_invariant(&self) -> bool {
        self.action.iter().all(|p| (0..self.size()).all(|x| !self.base.is_bounded_point(x) || self.base.is_bounded_point(p[x])))
    }

    pub fn fixed_points_of(&self, h: &Subgroup) -> Vec<usize> {
        (0..self.size()).filter(|&x| h.members().iter().all(|&g| self.action[g][x] == x)).collect()
    }
}

/// A morphism of G-spaces: equivariant, controlled and proper.
pub fn check_g_morphism(
    map: &[usize],
    x: &GBornCoarseSpace,
    y: &GBornCoarseSpace,
) -> std::result::Result<CoarseMap, Rejection> {
    let f = check_morphism(map, &x.base, &y.base)?;
    for &g in x.group.generator_ids() {
        if let Some(p) = (0..x.size()).find(|&p| map[x.act(g, p)] != y.act(g, map[p])) {
            return Err(Rejection::NotEquivariant { generator: g, point: p });
        }
    }
    Ok(f)
}

/// A finite G-set.
#[derive(Clone, Debug)]
pub struct GSet {
    pub group: Arc<PermGroup>,
    pub action: Vec<Perm>,
}

impl GSet {
    pub fn point(group: Arc<PermGroup>) -> Self {
        let action = vec![vec![0]; group.order()];
        GSet { group, action }
    }

    /// `G/K` with cosets listed by smallest element; the coset `eK` is point 0.
    pub fn cosets(group: Arc<PermGroup>, k: &Subgroup) -> (Self, Vec<Vec<usize>>) {
        let g = &*group;
        let mut cosets: Vec<Vec<usize>> = Vec::new();
        let mut coset_of = vec![usize::MAX; g.order()];
        for x in 0..g.order() {
            if coset_of[x] != usize::MAX {
                continue;
            }
            let mut c: Vec<usize> = k.members().iter().map(|&y| g.mul(x, y)).collect();
            c.sort_unstable();
            for &y in &c {
                coset_of[y] = cosets.len();
            }
            cosets.push(c);
        }
        let action = (0..g.order())
            .map(|s| cosets.iter().map(|c| coset_of[g.mul(s, c[0])]).collect())
            .collect();
        (GSet { group, action }, cosets)
    }

    pub fn size(&self) -> usize {
        self.action.first().map_or(0, Vec::len)
    }
}

/// `S_min,max ⊗ X`: carrier `S × X` (index `s·|X| + x`), entourages
/// `diag_S × U`, bounded sets `S × B`, diagonal action.
pub fn tensor_min_max(s: &GSet, x: &GBornCoarseSpace) -> GBornCoarseSpace {
    let (ns, nx) = (s.size(), x.size());
    let idx = |a: usize, p: usize| a * nx + p;
    let coarse = x
        .base
        .coarse_generators()
        .iter()
        .map(|u| (0..ns).flat_map(|a| u.iter().map(move |&(p, q)| (idx(a, p), idx(a, q)))).collect())
        .collect();
    let born = x
        .base
        .bornology_generators()
        .iter()
        .map(|b| (0..ns).flat_map(|a| b.iter().map(move |&p| idx(a, p))).collect())
        .collect();
    let base = BornCoarseSpace::new(ns * nx, coarse, born).expect("indices are in range");
    let action = (0..x.group.order())
        .map(|g| {
            let mut p = vec![0; ns * nx];
            for a in 0..ns {
                for q in 0..nx {
                    p[idx(a, q)] = idx(s.action[g][a], x.act(g, q));
                }
            }
            p
        })
        .collect();
    GBornCoarseSpace {
        base,
        group: x.group.clone(),
        action,
    }
}

/// `B_G X`: bornology regenerated from the saturations `G·B`.
pub fn g_completion(x: &GBornCoarseSpace) -> GBornCoarseSpace {
    let gens = x
        .base
        .bornology_generators()
        .iter()
        .map(|b| {
            let mut s: Vec<usize> = b.iter().flat_map(|&p| x.orbit(p)).collect();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();
    GBornCoarseSpace {
        base: x.base.with_bornology(gens),
        group: x.group.clone(),
        action: x.action.clone(),
    }
}

/// `X^H` with structures induced from `B_G X` and the action of `W_G(H)`.
#[derive(Clone, Debug)]
pub struct FixedPoints {
    pub space: GBornCoarseSpace,
    /// Carrier point of `X` behind each fixed point.
    pub points: Vec<usize>,
}

pub fn fixed_points(x: &GBornCoarseSpace, h: &Subgroup) -> Result<FixedPoints> {
    let weyl = x.group.weyl_group(h)?;
    let completed = g_completion(x);
    let points = x.fixed_points_of(h);
    let base = completed.base.induced(&points);
    let position = |p: usize| points.binary_search(&p).expect("normalizer preserves fixed points");
    let action = weyl
        .section
        .iter()
        .map(|&n| points.iter().map(|&p| position(x.act(n, p))).collect())
        .collect();
    let space = GBornCoarseSpace::from_action(base, Arc::new(weyl.group), action)?;
    Ok(FixedPoints { space, points })
}

/// The JSON form of a space: generators plus optional action images.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpaceFile {
    pub carrier: usize,
    #[serde(default)]
    pub coarse_generators: Vec<Vec<Pair>>,
    #[serde(default)]
    pub bornology_generators: Vec<Vec<usize>>,
    #[serde(default)]
    pub action: Option<Vec<Perm>>,
}

impl SpaceFile {
    pub fn parse(text: &str, location: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse(location, e.to_string()))
    }

    pub fn into_space(self) -> Result<BornCoarseSpace> {
        BornCoarseSpace::new(self.carrier, self.coarse_generators, self.bornology_generators)
    }

    /// With the given group; a missing action means the trivial one.
    pub fn into_g_space(self, group: Arc<PermGroup>) -> Result<GBornCoarseSpace> {
        let images = self.action.clone();
        let base = self.into_space()?;
        match images {
            Some(images) => GBornCoarseSpace::new(base, group, &images),
            None => Ok(GBornCoarseSpace::trivial(base, group)),
        }
    }

    pub fn from_space(x: &BornCoarseSpace, action: Option<Vec<Perm>>) -> Self {
        SpaceFile {
            carrier: x.size(),
            coarse_generators: x.coarse_generators().to_vec(),
            bornology_generators: x.bornology_generators().to_vec(),
            action,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fingroup::named::cyclic;

    fn swap_space(n: usize, born: Vec<Vec<usize>>) -> GBornCoarseSpace {
        let g = Arc::new(cyclic(2));
        let perm: Perm = (0..n).map(|x| x ^ 1).collect();
        GBornCoarseSpace::new(BornCoarseSpace::new(n, Vec::new(), born).unwrap(), g, &[perm]).unwrap()
    }

    #[test]
    fn morphism_checks() {
        let x = BornCoarseSpace::max_max(2);
        let id = [0, 1];
        assert!(check_morphism(&id, &x, &x).is_ok());
        let y = BornCoarseSpace::min_max(2);
        assert_eq!(check_morphism(&id, &x, &y), Err(Rejection::Entourage(all_pairs(2))));
        let gen01 = BornCoarseSpace::new(2, vec![vec![(0, 1)]], vec![vec![0, 1]]).unwrap();
        assert_eq!(check_morphism(&id, &gen01, &y), Err(Rejection::Entourage(vec![(0, 1)])));
        // into a maximal target: proper iff point preimages are bounded
        let target = BornCoarseSpace::max_max(1);
        assert!(check_morphism(&[0, 0], &y, &target).is_ok());
        let unbounded = BornCoarseSpace::new(2, Vec::new(), vec![vec![0]]).unwrap();
        assert_eq!(check_morphism(&[0, 0], &unbounded, &target), Err(Rejection::Bounded(vec![0])));
    }

    #[test]
    fn closure_is_idempotent() {
        let x = BornCoarseSpace::new(5, vec![vec![(0, 1)], vec![(1, 2)]], vec![vec![3], vec![0, 4]]).unwrap();
        assert!(x.close(0, 2) && !x.close(0, 3));
        let again = x.regenerated();
        assert!(again.same_structures(&x));
        assert!(again.regenerated().same_structures(&again));
    }

    #[test]
    fn completion() {
        let x = swap_space(2, vec![vec![0]]);
        let b = g_completion(&x);
        assert!(b.base.is_bounded(&[0, 1]));
        let trivial = GBornCoarseSpace::trivial(BornCoarseSpace::new(3, vec![], vec![vec![1]]).unwrap(), Arc::new(cyclic(2)));
        assert!(g_completion(&trivial).base.same_structures(&trivial.base));
        // free action, singletons bounded: orbits become bounded
        let free = swap_space(4, vec![vec![0], vec![2]]);
        assert_eq!(g_completion(&free).base.bounded_points(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn fixed_point_spaces() {
        let g = Arc::new(cyclic(2));
        let x = GBornCoarseSpace::new(BornCoarseSpace::max_max(3), g.clone(), &[vec![1, 0, 2]]).unwrap();
        let f = fixed_points(&x, &g.whole()).unwrap();
        assert_eq!(f.points, vec![2]);
        assert_eq!(f.space.group.order(), 1);
        let f1 = fixed_points(&x, &g.trivial_subgroup()).unwrap();
        assert_eq!(f1.points, vec![0, 1, 2]);
        assert_eq!(f1.space.group.order(), 2);
    }

    #[test]
    fn tensor_with_sets() {
        let g = Arc::new(cyclic(2));
        let x = swap_space(2, vec![vec![0, 1]]);
        let pt = GSet::point(g.clone());
        assert!(tensor_min_max(&pt, &x).base.same_structures(&x.base));
        let (s, _) = GSet::cosets(g.clone(), &g.trivial_subgroup());
        let one = GBornCoarseSpace::trivial(BornCoarseSpace::max_max(1), g.clone());
        let t = tensor_min_max(&s, &one);
        assert_eq!(t.size(), 2);
        assert!(!t.base.close(0, 1) && t.base.is_covering());
        let xx = GBornCoarseSpace::trivial(BornCoarseSpace::max_max(2), g);
        let t = tensor_min_max(&s, &xx);
        assert!(t.base.close(0, 1) && !t.base.close(0, 2) && !t.base.close(1, 3));
    }

    #[test]
    fn space_file_round_trip() {
        let text = r#"{"carrier": 2, "coarse_generators": [[[0,1]]], "bornology_generators": [[0]], "action": [[1,0]]}"#;
        let f = SpaceFile::parse(text, "inline").unwrap();
        let x = f.clone().into_g_space(Arc::new(cyclic(2))).unwrap();
        assert!(!x.bornology_invariant());
        assert!(g_completion(&x).bornology_invariant());
        let bad = r#"{"carrier": 3, "coarse_generators": [[[0,2]]], "action": [[1,0,2]]}"#;
        assert!(SpaceFile::parse(bad, "inline").unwrap().into_g_space(Arc::new(cyclic(2))).is_err());
        let y = f.into_space().unwrap();
        assert!(y.close(0, 1));
        assert!(SpaceFile::parse("{}", "inline").is_err());
    }
}
