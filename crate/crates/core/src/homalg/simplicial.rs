use num_bigint::BigInt;

use super::complex::{ChainComplex, ChainMap, Ring};
use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;

/// A possibly degenerate simplex `s*(y)`: the nondegenerate simplex `id` of
/// dimension `base` pulled back along the monotone surjection
/// `degeneracy: [n] → [base]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimplexRef {
    pub base: usize,
    pub id: usize,
    pub degeneracy: Vec<usize>,
}

impl SimplexRef {
    pub fn nondegenerate(dim: usize, id: usize) -> Self {
        SimplexRef {
            base: dim,
            id,
            degeneracy: (0..=dim).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.degeneracy.len() - 1
    }

    pub fn is_degenerate(&self) -> bool {
        self.degeneracy.len() != self.base + 1
    }

    /// Whether `s_i` of something: positions `i` and `i+1` collapse.
    pub fn collapses_at(&self, i: usize) -> bool {
        self.degeneracy[i] == self.degeneracy[i + 1]
    }
}

/// `δ_i: [n−1] → [n]`, the coface skipping `i`.
pub fn coface(n: usize, i: usize) -> Vec<usize> {
    (0..n).map(|k| if k < i { k } else { k + 1 }).collect()
}

/// A finite simplicial set, stored by its nondegenerate simplices and their
/// faces in normal form. Dimension is bounded by the stored levels.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimplicialSetFin {
    /// `faces[k][id]` lists `d_0 … d_k` of the nondegenerate `k`-simplex.
    faces: Vec<Vec<Vec<SimplexRef>>>,
}

impl SimplicialSetFin {
    pub fn empty() -> Self {
        SimplicialSetFin { faces: Vec::new() }
    }

    pub fn point() -> Self {
        SimplicialSetFin {
            faces: vec![vec![Vec::new()]],
        }
    }

    /// From face data; validates references and the simplicial identities.
    pub fn from_faces(faces: Vec<Vec<Vec<SimplexRef>>>) -> Result<Self> {
        for (k, level) in faces.iter().enumerate() {
            for (id, fs) in level.iter().enumerate() {
                let expected = if k == 0 { 0 } else { k + 1 };
                if fs.len() != expected {
                    return Err(Error::InvalidChainData(format!("simplex ({k},{id}) has {} faces", fs.len())));
                }
                for f in fs {
                    let ok = f.dim() + 1 == k
                        && f.base < faces.len()
                        && f.id < faces[f.base].len()
                        && f.degeneracy.first() == Some(&0)
                        && f.degeneracy.last() == Some(&f.base)
                        && f.degeneracy.windows(2).all(|w| w[1] == w[0] || w[1] == w[0] + 1);
                    if !ok {
                        return Err(Error::InvalidChainData(format!("bad face reference in ({k},{id})")));
                    }
                }
            }
        }
        let s = SimplicialSetFin { faces };
        s.check_face_identities()?;
        Ok(s)
    }

    pub(crate) fn from_faces_unchecked(faces: Vec<Vec<Vec<SimplexRef>>>) -> Self {
        SimplicialSetFin { faces }
    }

    /// From an ordered simplicial complex: `simplices[k]` lists the
    /// `k`-simplices as increasing vertex lists, closed under faces.
    pub fn from_ordered_complex(simplices: &[Vec<Vec<usize>>]) -> Result<Self> {
        use std::collections::HashMap;
        let mut index: Vec<HashMap<&[usize], usize>> = Vec::new();
        for level in simplices {
            index.push(level.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect());
        }
        let mut faces = Vec::new();
        for (k, level) in simplices.iter().enumerate() {
            let mut lf = Vec::new();
            for s in level {
                if s.len() != k + 1 || s.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::InvalidChainData(format!("simplex {s:?} is not an increasing {k}-simplex")));
                }
                let mut fs = Vec::new();
                if k > 0 {
                    for i in 0..=k {
                        let mut t = s.clone();
                        t.remove(i);
                        let id = *index[k - 1]
                            .get(t.as_slice())
                            .ok_or_else(|| Error::InvalidChainData(format!("face {t:?} of {s:?} missing")))?;
                        fs.push(SimplexRef::nondegenerate(k - 1, id));
                    }
                }
                lf.push(fs);
            }
            faces.push(lf);
        }
        while faces.last().is_some_and(|l: &Vec<Vec<SimplexRef>>| l.is_empty()) {
            faces.pop();
        }
        Ok(SimplicialSetFin { faces })
    }

    /// Number of stored levels (`dim + 1`, or 0 when empty).
    pub fn levels(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.first().is_none_or(|l| l.is_empty())
    }

    pub fn count(&self, k: usize) -> usize {
        self.faces.get(k).map_or(0, Vec::len)
    }

    pub fn faces_of(&self, k: usize, id: usize) -> &[SimplexRef] {
        &self.faces[k][id]
    }

    /// `θ*(x)` for a monotone `θ: [m] → [n]`, in normal form.
    pub fn pullback(&self, x: &SimplexRef, theta: &[usize]) -> SimplexRef {
        let comp: Vec<usize> = theta.iter().map(|&t| x.degeneracy[t]).collect();
        self.normalize(x.base, x.id, &comp)
    }

    /// `map*(y)` for the nondegenerate `y = (base, id)` and monotone
    /// `map: [m] → [base]`.
    fn normalize(&self, base: usize, id: usize, map: &[usize]) -> SimplexRef {
        // split map = inj ∘ sur
        let mut image: Vec<usize> = map.to_vec();
        image.dedup();
        let sur: Vec<usize> = {
            let mut out = Vec::with_capacity(map.len());
            let mut k = 0;
            for (i, &v) in map.iter().enumerate() {
                if i > 0 && v != map[i - 1] {
                    k += 1;
                }
                out.push(k);
            }
            out
        };
        if image.len() == base + 1 {
            return SimplexRef {
                base,
                id,
                degeneracy: sur,
            };
        }
        let missing = (0..=base).rev().find(|v| image.binary_search(v).is_err()).unwrap();
        let face = &self.faces[base][id][missing];
        let inj: Vec<usize> = image.iter().map(|&v| if v > missing { v - 1 } else { v }).collect();
        let through: Vec<usize> = sur.iter().map(|&s| inj[s]).collect();
        self.pullback(face, &through)
    }

    pub fn face(&self, x: &SimplexRef, i: usize) -> SimplexRef {
        self.pullback(x, &coface(x.dim(), i))
    }

    pub fn check_face_identities(&self) -> Result<()> {
        for k in 2..self.faces.len() {
            for id in 0..self.faces[k].len() {
                let x = SimplexRef::nondegenerate(k, id);
                for j in 1..=k {
                    for i in 0..j {
                        let lhs = self.face(&self.face(&x, j), i);
                        let rhs = self.face(&self.face(&x, i), j - 1);
                        if lhs != rhs {
                            return Err(Error::InvalidChainData(format!(
                                "face identity d{i}d{j} fails on ({k},{id})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Normalized chains: degenerate faces contribute zero.
    pub fn chains(&self, ring: Ring) -> ChainComplex {
        let ranks: Vec<usize> = self.faces.iter().map(Vec::len).collect();
        if ranks.iter().all(|&r| r == 0) {
            return ChainComplex::zero(ring);
        }
        let diffs = (1..ranks.len())
            .map(|k| {
                let mut trip = Vec::new();
                for (id, fs) in self.faces[k].iter().enumerate() {
                    for (i, f) in fs.iter().enumerate() {
                        if !f.is_degenerate() {
                            let sign = if i % 2 == 0 { 1 } else { -1 };
                            trip.push((f.id, id, BigInt::from(sign)));
                        }
                    }
                }
                SparseMatrix::from_triplets(ranks[k - 1], ranks[k], trip)
            })
            .collect();
        ChainComplex::new_unchecked(ring, ranks, diffs)
    }
}

/// A simplicial map, given by the images of nondegenerate simplices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMap {
    pub images: Vec<Vec<SimplexRef>>,
}

impl SimplicialMap {
    pub fn identity(x: &SimplicialSetFin) -> Self {
        SimplicialMap {
            images: (0..x.levels())
                .map(|k| (0..x.count(k)).map(|id| SimplexRef::nondegenerate(k, id)).collect())
                .collect(),
        }
    }

    pub fn empty_source() -> Self {
        SimplicialMap { images: Vec::new() }
    }

    pub fn apply(&self, target: &SimplicialSetFin, x: &SimplexRef) -> SimplexRef {
        target.pullback(&self.images[x.base][x.id], &x.degeneracy)
    }

    /// Checks dimensions and compatibility with faces.
    pub fn check(&self, source: &SimplicialSetFin, target: &SimplicialSetFin) -> Result<()> {
        for k in 0..source.levels() {
            if self.images.get(k).map_or(0, Vec::len) != source.count(k) {
                return Err(Error::InvalidChainData(format!("map has no image for some {k}-simplex")));
            }
            for id in 0..source.count(k) {
                let img = &self.images[k][id];
                if img.dim() != k || img.base >= target.levels() || img.id >= target.count(img.base) {
                    return Err(Error::InvalidChainData(format!("image of ({k},{id}) is out of range")));
                }
                for (i, f) in source.faces_of(k, id).iter().enumerate() {
                    if self.apply(target, f) != target.face(img, i) {
                        return Err(Error::InvalidChainData(format!("map does not commute with d{i} on ({k},{id})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn compose(&self, first: &SimplicialMap, middle: &SimplicialSetFin) -> SimplicialMap {
        SimplicialMap {
            images: first
                .images
                .iter()
                .map(|level| level.iter().map(|x| self.apply(middle, x)).collect())
                .collect(),
        }
    }

    /// Induced map on normalized chains.
    pub fn chain_map(&self, source: &SimplicialSetFin, target: &SimplicialSetFin) -> ChainMap {
        let len = source.levels().max(target.levels());
        ChainMap {
            components: (0..len)
                .map(|k| {
                    let trip = (0..source.count(k)).filter_map(|id| {
                        let img = &self.images[k][id];
                        (!img.is_degenerate()).then(|| (img.id, id, BigInt::from(1)))
                    });
                    SparseMatrix::from_triplets(target.count(k), source.count(k), trip)
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homalg::complex::HomologyGroup;

    fn boundary_of_triangle() -> SimplicialSetFin {
        SimplicialSetFin::from_ordered_complex(&[
            vec![vec![0], vec![1], vec![2]],
            vec![vec![0, 1], vec![0, 2], vec![1, 2]],
        ])
        .unwrap()
    }

    /// Δ¹ with both endpoints identified: one vertex, one edge.
    fn minimal_circle() -> SimplicialSetFin {
        SimplicialSetFin::from_faces(vec![
            vec![vec![]],
            vec![vec![SimplexRef::nondegenerate(0, 0), SimplexRef::nondegenerate(0, 0)]],
        ])
        .unwrap()
    }

    /// S² as Δ²/∂Δ²: one vertex and one 2-simplex with degenerate faces.
    fn minimal_sphere() -> SimplicialSetFin {
        let degenerate_edge = SimplexRef {
            base: 0,
            id: 0,
            degeneracy: vec![0, 0],
        };
        SimplicialSetFin::from_faces(vec![
            vec![vec![]],
            vec![],
            vec![vec![degenerate_edge.clone(), degenerate_edge.clone(), degenerate_edge]],
        ])
        .unwrap()
    }

    #[test]
    fn basic_chains() {
        assert!(SimplicialSetFin::empty().chains(Ring::ZZ).homology().is_empty());
        assert_eq!(SimplicialSetFin::point().chains(Ring::QQ).homology(), vec![HomologyGroup::free(1)]);
        let interval = SimplicialSetFin::from_ordered_complex(&[vec![vec![0], vec![1]], vec![vec![0, 1]]]).unwrap();
        assert_eq!(
            interval.chains(Ring::ZZ).homology(),
            vec![HomologyGroup::free(1), HomologyGroup::zero()]
        );
        let h = boundary_of_triangle().chains(Ring::ZZ).homology();
        assert_eq!(h, vec![HomologyGroup::free(1), HomologyGroup::free(1)]);
    }

    #[test]
    fn non_complex_simplicial_sets() {
        let c = minimal_circle();
        assert_eq!(c.chains(Ring::ZZ).homology(), vec![HomologyGroup::free(1), HomologyGroup::free(1)]);
        let s = minimal_sphere();
        assert_eq!(
            s.chains(Ring::ZZ).homology(),
            vec![HomologyGroup::free(1), HomologyGroup::zero(), HomologyGroup::free(1)]
        );
    }

    #[test]
    fn pullback_through_degeneracies() {
        let s = minimal_sphere();
        let top = SimplexRef::nondegenerate(2, 0);
        // any face of a face is the vertex
        for i in 0..3 {
            let f = s.face(&top, i);
            assert!(f.is_degenerate());
            assert_eq!(s.face(&f, 0), SimplexRef::nondegenerate(0, 0));
        }
        // s_0 of the top simplex, then d_0 gives it back
        let deg = SimplexRef {
            base: 2,
            id: 0,
            degeneracy: vec![0, 0, 1, 2],
        };
        assert_eq!(s.face(&deg, 0), top);
        assert_eq!(s.face(&deg, 1), top);
    }

    #[test]
    fn rejects_bad_face_identities() {
        // an edge whose faces are two different vertices, and a triangle
        // with inconsistent edges
        let e = |id| SimplexRef::nondegenerate(1, id);
        let v = |id| SimplexRef::nondegenerate(0, id);
        let bad = SimplicialSetFin::from_faces(vec![
            vec![vec![], vec![]],
            vec![vec![v(1), v(0)], vec![v(0), v(1)]],
            vec![vec![e(0), e(0), e(0)]],
        ]);
        assert!(bad.is_err());
    }

    #[test]
    fn maps_and_chain_maps() {
        let t = boundary_of_triangle();
        let id = SimplicialMap::identity(&t);
        id.check(&t, &t).unwrap();
        let cm = id.chain_map(&t, &t);
        let c = t.chains(Ring::ZZ);
        cm.check(&c, &c).unwrap();
        // collapse onto the minimal circle: edge 01 ↦ loop, others degenerate
        let circle = minimal_circle();
        let v = SimplexRef::nondegenerate(0, 0);
        let dv = SimplexRef {
            base: 0,
            id: 0,
            degeneracy: vec![0, 0],
        };
        let f = SimplicialMap {
            images: vec![vec![v.clone(), v.clone(), v], vec![SimplexRef::nondegenerate(1, 0), dv.clone(), dv]],
        };
        f.check(&t, &circle).unwrap();
        let fc = f.chain_map(&t, &circle);
        let cc = circle.chains(Ring::ZZ);
        fc.check(&c, &cc).unwrap();
        assert!(crate::homalg::complex::quasi_iso_in_range(&fc, &c, &cc, 0, 1));
    }
}
