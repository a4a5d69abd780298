use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fingroup::{ElementClass, Perm, PermGroup, Subgroup};

/// A finite simplicial complex with a simplicial action of a finite group.
///
/// Simplices are increasing vertex lists, grouped by dimension and sorted
/// lexicographically inside each dimension. Complexes built by barycentric
/// subdivision remember the dimension of the simplex behind each vertex.
#[derive(Clone, Debug)]
pub struct GSimplicialComplex {
    group: Arc<PermGroup>,
    vertex_count: usize,
    action: Vec<Perm>,
    simplices: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
    levels: Option<Vec<usize>>,
}

/// On-disk form of a complex: generator images act on vertices.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexFile {
    pub vertices: usize,
    pub simplices: Vec<Vec<usize>>,
    pub action: Vec<Vec<usize>>,
}

impl ComplexFile {
    pub fn parse(text: &str, location: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse(location, e.to_string()))
    }

    pub fn into_complex(self, group: Arc<PermGroup>) -> Result<GSimplicialComplex> {
        GSimplicialComplex::new(group, self.vertices, &self.simplices, &self.action)
    }

    /// Lists maximal simplices only.
    pub fn from_complex(x: &GSimplicialComplex) -> Self {
        let simplices = x.maximal_simplices();
        let action = x.group.generator_ids().iter().map(|&g| x.action[g].clone()).collect();
        ComplexFile {
            vertices: x.vertex_count,
            simplices,
            action,
        }
    }
}

fn sorted(mut s: Vec<usize>) -> Vec<usize> {
    s.sort_unstable();
    s
}

impl GSimplicialComplex {
    /// Closes the listed simplices under faces; the action is given by
    /// generator images and must permute the simplices.
    pub fn new(group: Arc<PermGroup>, vertex_count: usize, simplices: &[Vec<usize>], generator_images: &[Perm]) -> Result<Self> {
        let action = if group.generators().is_empty() && generator_images.is_empty() {
            vec![(0..vertex_count).collect(); group.order()]
        } else {
            group.action_from_generator_images(generator_images)?
        };
        Self::from_action(group, vertex_count, simplices, action)
    }

    /// As [`GSimplicialComplex::new`] with the action listed for every
    /// group element.
    pub fn from_action(group: Arc<PermGroup>, vertex_count: usize, simplices: &[Vec<usize>], action: Vec<Perm>) -> Result<Self> {
        if action.len() != group.order() || action.iter().any(|p| p.len() != vertex_count) {
            return Err(Error::InvalidChainData("action must permute the vertices for every group element".into()));
        }
        let mut all: Vec<BTreeSet<Vec<usize>>> = Vec::new();
        for s in simplices {
            let s = sorted(s.clone());
            if s.is_empty() || s.windows(2).any(|w| w[0] == w[1]) || s.iter().any(|&v| v >= vertex_count) {
                return Err(Error::InvalidChainData(format!("{s:?} is not a simplex on {vertex_count} vertices")));
            }
            // every nonempty subset is a face
            let k = s.len();
            for mask in 1u64..(1u64 << k) {
                let face: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect();
                let d = face.len() - 1;
                if all.len() <= d {
                    all.resize(d + 1, BTreeSet::new());
                }
                all[d].insert(face);
            }
        }
        let simplices: Vec<Vec<Vec<usize>>> = all.into_iter().map(|l| l.into_iter().collect()).collect();
        let x = Self::assemble(group, vertex_count, action, simplices, None);
        for g in &x.action {
            for level in &x.simplices {
                for s in level {
                    let image = sorted(s.iter().map(|&v| g[v]).collect());
                    if !x.contains(&image) {
                        return Err(Error::StructureMismatch(format!("the action moves {s:?} off the complex")));
                    }
                }
            }
        }
        Ok(x)
    }

    fn assemble(group: Arc<PermGroup>, vertex_count: usize, action: Vec<Perm>, simplices: Vec<Vec<Vec<usize>>>, levels: Option<Vec<usize>>) -> Self {
        let index = simplices
            .iter()
            .map(|l| l.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        GSimplicialComplex {
            group,
            vertex_count,
            action,
            simplices,
            index,
            levels,
        }
    }

    pub fn group(&self) -> &Arc<PermGroup> {
        &self.group
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Top dimension (0 for the empty complex).
    pub fn dim(&self) -> usize {
        self.simplices.len().saturating_sub(1)
    }

    pub fn simplices(&self, k: usize) -> &[Vec<usize>] {
        self.simplices.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn count(&self, k: usize) -> usize {
        self.simplices(k).len()
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        self.index_of(s).is_some()
    }

    /// Position of a (sorted) simplex in its dimension.
    pub fn index_of(&self, s: &[usize]) -> Option<usize> {
        self.index.get(s.len().checked_sub(1)?)?.get(s).copied()
    }

    pub fn action(&self) -> &[Perm] {
        &self.action
    }

    pub fn act(&self, g: usize, v: usize) -> usize {
        self.action[g][v]
    }

    pub fn act_simplex(&self, g: usize, s: &[usize]) -> Vec<usize> {
        sorted(s.iter().map(|&v| self.action[g][v]).collect())
    }

    /// Vertex levels of a barycentric subdivision, if this complex is one.
    pub fn levels(&self) -> Option<&[usize]> {
        self.levels.as_deref()
    }

    pub fn maximal_simplices(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for (k, level) in self.simplices.iter().enumerate() {
            for s in level {
                let is_face = self.simplices.get(k + 1).is_some_and(|up| up.iter().any(|t| s.iter().all(|v| t.contains(v))));
                if !is_face {
                    out.push(s.clone());
                }
            }
        }
        out
    }

    /// Setwise stabilizer of a simplex.
    pub fn stabilizer(&self, s: &[usize]) -> Subgroup {
        let members = (0..self.group.order()).filter(|&g| self.act_simplex(g, s) == s).collect();
        Subgroup::from_sorted(members)
    }

    /// A group element and simplex where the setwise stabilizer moves a
    /// vertex, if any.
    pub fn regularity_violation(&self) -> Option<(usize, Vec<usize>)> {
        for level in &self.simplices {
            for s in level {
                for g in 0..self.group.order() {
                    if self.act_simplex(g, s) == *s && s.iter().any(|&v| self.action[g][v] != v) {
                        return Some((g, s.clone()));
                    }
                }
            }
        }
        None
    }

    /// Any `g` fixing a simplex setwise fixes it pointwise.
    pub fn is_regular(&self) -> bool {
        self.regularity_violation().is_none()
    }

    pub fn require_regular(&self) -> Result<()> {
        match self.regularity_violation() {
            None => Ok(()),
            Some((g, s)) => Err(Error::NotRegular(format!("element {g} fixes {s:?} setwise but not pointwise"))),
        }
    }

    /// Vertices fixed by every element of `h`.
    pub fn fixed_vertices(&self, h: &Subgroup) -> Vec<usize> {
        (0..self.vertex_count)
            .filter(|&v| h.members().iter().all(|&g| self.action[g][v] == v))
            .collect()
    }

    /// Full subcomplex on an invariant vertex set, relabelled in increasing
    /// order; returns the complex and the old id of each new vertex.
    pub fn full_subcomplex(&self, vertices: &[usize]) -> (GSimplicialComplex, Vec<usize>) {
        let keep: Vec<usize> = sorted(vertices.to_vec());
        let new_of: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut simplices: Vec<Vec<Vec<usize>>> = Vec::new();
        for level in &self.simplices {
            let l: Vec<Vec<usize>> = level
                .iter()
                .filter(|s| s.iter().all(|v| new_of.contains_key(v)))
                .map(|s| s.iter().map(|v| new_of[v]).collect())
                .collect();
            if l.is_empty() {
                break;
            }
            simplices.push(l);
        }
        let action = self
            .action
            .iter()
            .map(|g| keep.iter().map(|&v| new_of[&g[v]]).collect())
            .collect();
        let levels = self.levels.as_ref().map(|lv| keep.iter().map(|&v| lv[v]).collect());
        (Self::assemble(self.group.clone(), keep.len(), action, simplices, levels), keep)
    }

    /// Orbits of `k`-simplices, each listed as simplex indices, ordered by
    /// smallest member.
    pub fn orbits(&self, k: usize) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.count(k)];
        let mut out = Vec::new();
        for (i, s) in self.simplices(k).iter().enumerate() {
            if seen[i] {
                continue;
            }
            let mut orbit: Vec<usize> = (0..self.group.order())
                .map(|g| self.index[k][&self.act_simplex(g, s)])
                .collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &j in &orbit {
                seen[j] = true;
            }
            out.push(orbit);
        }
        out
    }

    /// Orbit index of each vertex, orbits numbered by smallest member.
    pub fn vertex_orbit_keys(&self) -> Vec<usize> {
        let mut key = vec![usize::MAX; self.vertex_count];
        let mut next = 0;
        for v in 0..self.vertex_count {
            if key[v] == usize::MAX {
                for g in &self.action {
                    key[g[v]] = next;
                }
                next += 1;
            }
        }
        key
    }

    /// A G-invariant vertex key that is injective on every simplex, so
    /// that sorting by it orders simplices compatibly with the action.
    /// Subdivision levels are used when present, orbit indices otherwise.
    pub fn invariant_order_key(&self) -> Option<Vec<usize>> {
        let distinct = |key: &[usize]| {
            self.simplices.iter().flatten().all(|s| {
                let mut k: Vec<usize> = s.iter().map(|&v| key[v]).collect();
                k.sort_unstable();
                k.windows(2).all(|w| w[0] != w[1])
            })
        };
        if let Some(l) = &self.levels {
            return Some(l.clone());
        }
        let orbit = self.vertex_orbit_keys();
        distinct(&orbit).then_some(orbit)
    }
}

/// Barycentric subdivision: vertices are the simplices of `x` (by
/// dimension, then lexicographically), simplices are strict chains.
pub fn barycentric_subdivision(x: &GSimplicialComplex) -> GSimplicialComplex {
    let mut id_of: HashMap<&[usize], usize> = HashMap::new();
    let mut levels = Vec::new();
    let mut flat: Vec<&Vec<usize>> = Vec::new();
    for (k, level) in x.simplices.iter().enumerate() {
        for s in level {
            id_of.insert(s.as_slice(), flat.len());
            flat.push(s);
            levels.push(k);
        }
    }
    // chains ending at each simplex, built upwards through proper faces
    let mut ending: Vec<Vec<Vec<usize>>> = Vec::with_capacity(flat.len());
    for (i, s) in flat.iter().enumerate() {
        let mut chains = vec![vec![i]];
        let k = s.len();
        for mask in 1u64..((1u64 << k) - 1) {
            let face: Vec<usize> = (0..k).filter(|b| mask >> b & 1 == 1).map(|b| s[b]).collect();
            let f = id_of[face.as_slice()];
            for c in &ending[f] {
                let mut c = c.clone();
                c.push(i);
                chains.push(c);
            }
        }
        ending.push(chains);
    }
    let mut simplices: Vec<Vec<Vec<usize>>> = Vec::new();
    for c in ending.into_iter().flatten() {
        let d = c.len() - 1;
        if simplices.len() <= d {
            simplices.resize(d + 1, Vec::new());
        }
        simplices[d].push(c);
    }
    for level in &mut simplices {
        level.sort();
    }
    let action = x
        .action
        .iter()
        .map(|g| {
            flat.iter()
                .map(|s| id_of[sorted(s.iter().map(|&v| g[v]).collect()).as_slice()])
                .collect()
        })
        .collect();
    GSimplicialComplex::assemble(x.group.clone(), flat.len(), action, simplices, Some(levels))
}

/// Returns `x` unchanged when it is already regular, otherwise its
/// barycentric subdivision (which is always regular: an element preserving
/// a chain of faces of distinct dimensions preserves each face).
pub fn equivariant_subdivision(x: &GSimplicialComplex) -> GSimplicialComplex {
    let mut y = x.clone();
    for _ in 0..2 {
        if y.is_regular() {
            return y;
        }
        y = barycentric_subdivision(&y);
    }
    debug_assert!(y.is_regular());
    y
}

/// `X^γ`: the union of the fixed subcomplexes `X^g`, `g ∈ γ`, as a full
/// subcomplex (regularity makes each `X^g` full), relabelled monotonically.
/// Also returns the old id of each vertex.
pub fn gamma_fixed_subcomplex(x: &GSimplicialComplex, gamma: &ElementClass) -> Result<(GSimplicialComplex, Vec<usize>)> {
    x.require_regular()?;
    let mut keep = BTreeSet::new();
    let mut simplices: Vec<Vec<Vec<usize>>> = Vec::new();
    for &g in &gamma.members {
        for (k, level) in x.simplices.iter().enumerate() {
            for s in level {
                if s.iter().all(|&v| x.action[g][v] == v) {
                    keep.extend(s.iter().copied());
                    if simplices.len() <= k {
                        simplices.resize(k + 1, Vec::new());
                    }
                    simplices[k].push(s.clone());
                }
            }
        }
    }
    let keep: Vec<usize> = keep.into_iter().collect();
    let (full, old) = x.full_subcomplex(&keep);
    // the union of the X^g need not be a full subcomplex of X; keep only
    // simplices fixed by some member of γ
    let new_of: HashMap<usize, usize> = old.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut levels: Vec<Vec<Vec<usize>>> = simplices
        .into_iter()
        .map(|l| {
            let mut l: Vec<Vec<usize>> = l.into_iter().map(|s| s.iter().map(|v| new_of[v]).collect()).collect();
            l.sort();
            l.dedup();
            l
        })
        .collect();
    while levels.last().is_some_and(Vec::is_empty) {
        levels.pop();
    }
    let sub = GSimplicialComplex::assemble(full.group.clone(), full.vertex_count, full.action.clone(), levels, full.levels.clone());
    Ok((sub, old))
}

#[cfg(test)]
mod tests {
    use super::super::examples::*;
    use super::*;
    use crate::fingroup::named::{cyclic, symmetric};

    #[test]
    fn construction_closes_faces_and_checks_the_action() {
        let g = Arc::new(cyclic(2));
        let x = GSimplicialComplex::new(g.clone(), 3, &[vec![0, 1, 2]], &[vec![1, 0, 2]]).unwrap();
        assert_eq!((x.count(0), x.count(1), x.count(2)), (3, 3, 1));
        assert!(GSimplicialComplex::new(g, 3, &[vec![0, 2]], &[vec![1, 0, 2]]).is_err());
    }

    #[test]
    fn subdivision_examples() {
        // trivial action: regular already
        let g = Arc::new(cyclic(1));
        let t = GSimplicialComplex::new(g, 2, &[vec![0, 1]], &[vec![0, 1]]).unwrap();
        let sd = barycentric_subdivision(&t);
        assert_eq!((sd.count(0), sd.count(1)), (3, 2));
        assert_eq!(sd.levels(), Some(&[0, 0, 1][..]));
        // reflection circle is regular and returned unchanged
        let c = reflection_circle();
        assert!(c.is_regular());
        let same = equivariant_subdivision(&c);
        assert_eq!(same.simplices, c.simplices);
        // swapping the ends of an edge: the midpoint becomes a fixed vertex
        let e = edge_swap();
        assert!(!e.is_regular());
        let s = equivariant_subdivision(&e);
        assert!(s.is_regular());
        assert_eq!(s.fixed_vertices(&s.group().whole()), vec![2]);
    }

    #[test]
    fn subdivision_counts_for_a_triangle() {
        let x = s3_triangle_boundary();
        assert!(!x.is_regular());
        let s = equivariant_subdivision(&x);
        assert_eq!((s.count(0), s.count(1)), (6, 6));
        assert!(s.is_regular());
        let full = GSimplicialComplex::new(Arc::new(symmetric(3)), 3, &[vec![0, 1, 2]], &[vec![1, 0, 2], vec![1, 2, 0]]).unwrap();
        let sd = barycentric_subdivision(&full);
        assert_eq!((sd.count(0), sd.count(1), sd.count(2)), (7, 12, 6));
    }

    #[test]
    fn gamma_fixed_examples() {
        let c = reflection_circle();
        let g = c.group().clone();
        let identity = &g.conjugacy_classes()[0];
        let (all, _) = gamma_fixed_subcomplex(&c, identity).unwrap();
        assert_eq!(all.simplices, c.simplices);
        let t = &g.conjugacy_classes()[1];
        let (fixed, old) = gamma_fixed_subcomplex(&c, t).unwrap();
        assert_eq!(old, vec![0, 2]);
        assert_eq!((fixed.count(0), fixed.count(1)), (2, 0));
        let free = free_pair();
        assert!(gamma_fixed_subcomplex(&free, t).unwrap().0.is_empty());
    }

    #[test]
    fn order_keys() {
        assert!(reflection_circle().invariant_order_key().is_some());
        // a 3-cycle on a triangle boundary has no orbit-compatible order
        let g = Arc::new(cyclic(3));
        let x = GSimplicialComplex::new(g, 3, &[vec![0, 1], vec![1, 2], vec![0, 2]], &[vec![1, 2, 0]]).unwrap();
        assert!(x.is_regular());
        assert!(x.invariant_order_key().is_none());
        assert!(barycentric_subdivision(&x).invariant_order_key().is_some());
    }

    #[test]
    fn file_round_trip() {
        let c = reflection_sphere();
        let f = ComplexFile::from_complex(&c);
        let text = serde_json::to_string(&f).unwrap();
        let back = ComplexFile::parse(&text, "mem").unwrap().into_complex(c.group().clone()).unwrap();
        assert_eq!(back.simplices, c.simplices);
    }
}
