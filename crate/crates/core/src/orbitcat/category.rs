use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Morphism {
    pub src: usize,
    pub dst: usize,
    pub label: String,
}

/// An explicit finite category with a total composition table.
#[derive(Clone, Debug)]
pub struct FinCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<usize>,
    homs: Vec<Vec<usize>>,
    out: Vec<Vec<usize>>,
    pos_out: Vec<usize>,
    comp: Vec<Vec<u32>>,
}

/// A chain `c0 → c1 → … → cq` of composable morphisms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chain {
    pub start: usize,
    pub arrows: Vec<usize>,
}

impl Chain {
    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }
}

impl FinCategory {
    /// Builds a category from explicit data; `compose(g, f)` returns `g∘f`
    /// for composable `f: a→b`, `g: b→c`. Unit and associativity laws are
    /// checked exhaustively.
    pub fn build(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<usize>,
        compose: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let cat = Self::assemble(objects, morphisms, identities, compose)?;
        cat.check_laws()?;
        Ok(cat)
    }

    /// Like [`FinCategory::build`] but only checks that the table is
    /// well-typed. For categories derived from already-checked ones.
    pub(crate) fn assemble(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<usize>,
        compose: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let n = objects.len();
        if identities.len() != n {
            return Err(Error::InvalidCategory("one identity per object required".into()));
        }
        let mut homs = vec![Vec::new(); n * n];
        let mut out = vec![Vec::new(); n];
        let mut pos_out = vec![0; morphisms.len()];
        for (id, m) in morphisms.iter().enumerate() {
            if m.src >= n || m.dst >= n {
                return Err(Error::InvalidCategory(format!("morphism {id} has endpoints out of range")));
            }
            homs[m.src * n + m.dst].push(id);
            pos_out[id] = out[m.src].len();
            out[m.src].push(id);
        }
        for (o, &i) in identities.iter().enumerate() {
            if i >= morphisms.len() || morphisms[i].src != o || morphisms[i].dst != o {
                return Err(Error::InvalidCategory(format!("identity of object {o} is not an endomorphism")));
            }
        }
        for h in &homs {
            let labels: HashSet<&str> = h.iter().map(|&m| morphisms[m].label.as_str()).collect();
            if labels.len() != h.len() {
                return Err(Error::InvalidCategory("duplicate morphism labels in a hom-set".into()));
            }
        }
        let mut comp = Vec::with_capacity(morphisms.len());
        for (fid, f) in morphisms.iter().enumerate() {
            let mut row = Vec::with_capacity(out[f.dst].len());
            for &g in &out[f.dst] {
                let gf = compose(g, fid);
                if gf >= morphisms.len() || morphisms[gf].src != f.src || morphisms[gf].dst != morphisms[g].dst {
                    return Err(Error::InvalidCategory(format!("composite of {g} and {fid} has wrong endpoints")));
                }
                row.push(gf as u32);
            }
            comp.push(row);
        }
        Ok(FinCategory {
            objects,
            morphisms,
            identities,
            homs,
            out,
            pos_out,
            comp,
        })
    }

    pub fn check_laws(&self) -> Result<()> {
        for (f, m) in self.morphisms.iter().enumerate() {
            if self.compose(self.identities[m.dst], f) != f || self.compose(f, self.identities[m.src]) != f {
                return Err(Error::InvalidCategory(format!("unit law fails at morphism {f}")));
            }
        }
        for f in 0..self.morphisms.len() {
            for &g in &self.out[self.morphisms[f].dst] {
                let gf = self.compose(g, f);
                for &h in &self.out[self.morphisms[g].dst] {
                    if self.compose(h, gf) != self.compose(self.compose(h, g), f) {
                        return Err(Error::InvalidCategory(format!("associativity fails at ({h},{g},{f})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn object_label(&self, o: usize) -> &str {
        &self.objects[o]
    }

    pub fn object_labels(&self) -> &[String] {
        &self.objects
    }

    pub fn morphism(&self, m: usize) -> &Morphism {
        &self.morphisms[m]
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn src(&self, m: usize) -> usize {
        self.morphisms[m].src
    }

    pub fn dst(&self, m: usize) -> usize {
        self.morphisms[m].dst
    }

    pub fn identity(&self, o: usize) -> usize {
        self.identities[o]
    }

    pub fn is_identity(&self, m: usize) -> bool {
        self.identities[self.morphisms[m].src] == m
    }

    pub fn hom(&self, a: usize, b: usize) -> &[usize] {
        &self.homs[a * self.objects.len() + b]
    }

    pub fn out_of(&self, a: usize) -> &[usize] {
        &self.out[a]
    }

    /// `g∘f`; panics if not composable.
    #[inline]
    pub fn compose(&self, g: usize, f: usize) -> usize {
        let fm = &self.morphisms[f];
        assert_eq!(fm.dst, self.morphisms[g].src, "morphisms {g} and {f} are not composable");
        self.comp[f][self.pos_out[g]] as usize
    }

    /// Whether `m` has a two-sided inverse.
    pub fn inverse(&self, m: usize) -> Option<usize> {
        let Morphism { src, dst, .. } = self.morphisms[m];
        self.hom(dst, src)
            .iter()
            .copied()
            .find(|&n| self.compose(n, m) == self.identities[src] && self.compose(m, n) == self.identities[dst])
    }

    pub fn isomorphic(&self, a: usize, b: usize) -> bool {
        self.hom(a, b).iter().any(|&m| self.inverse(m).is_some())
    }

    pub fn opposite(&self) -> FinCategory {
        let morphisms = self
            .morphisms
            .iter()
            .map(|m| Morphism {
                src: m.dst,
                dst: m.src,
                label: m.label.clone(),
            })
            .collect();
        FinCategory::assemble(self.objects.clone(), morphisms, self.identities.clone(), |g, f| self.compose(f, g))
            .expect("opposite of a valid category is valid")
    }

    /// Full subcategory on the given objects (in the given order) with its
    /// inclusion functor.
    pub fn full_subcategory(&self, objects: &[usize]) -> (FinCategory, Functor) {
        let mut new_of_old = vec![usize::MAX; self.morphisms.len()];
        let mut morphisms = Vec::new();
        let mut mor_map = Vec::new();
        for (i, &a) in objects.iter().enumerate() {
            for (j, &b) in objects.iter().enumerate() {
                for &m in self.hom(a, b) {
                    new_of_old[m] = morphisms.len();
                    morphisms.push(Morphism {
                        src: i,
                        dst: j,
                        label: self.morphisms[m].label.clone(),
                    });
                    mor_map.push(m);
                }
            }
        }
        let identities = objects.iter().map(|&a| new_of_old[self.identities[a]]).collect();
        let labels = objects.iter().map(|&a| self.objects[a].clone()).collect();
        let sub = FinCategory::assemble(labels, morphisms, identities, |g, f| {
            new_of_old[self.compose(mor_map[g], mor_map[f])]
        })
        .expect("full subcategory of a valid category is valid");
        let inclusion = Functor {
            obj: objects.to_vec(),
            mor: mor_map,
        };
        (sub, inclusion)
    }

    /// One representative (the smallest index) per isomorphism class.
    pub fn skeleton_objects(&self) -> Vec<usize> {
        let n = self.objects.len();
        let mut taken = vec![false; n];
        let mut reps = Vec::new();
        for a in 0..n {
            if taken[a] {
                continue;
            }
            reps.push(a);
            for b in a..n {
                if !taken[b] && (a == b || self.isomorphic(a, b)) {
                    taken[b] = true;
                }
            }
        }
        reps
    }

    /// Chains of exactly `q` composable non-identity morphisms.
    pub fn nondegenerate_chains(&self, q: usize) -> Vec<Chain> {
        let mut chains: Vec<Chain> = (0..self.objects.len())
            .map(|start| Chain {
                start,
                arrows: Vec::new(),
            })
            .collect();
        for _ in 0..q {
            let mut next = Vec::new();
            for c in &chains {
                let end = c.arrows.last().map_or(c.start, |&m| self.morphisms[m].dst);
                for &m in &self.out[end] {
                    if !self.is_identity(m) {
                        let mut arrows = c.arrows.clone();
                        arrows.push(m);
                        next.push(Chain { start: c.start, arrows });
                    }
                }
            }
            chains = next;
        }
        chains
    }

    /// Stable FNV-1a digest of the composition table.
    pub fn composition_digest(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |x: u64| {
            for b in x.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        };
        for (f, row) in self.comp.iter().enumerate() {
            eat(f as u64);
            for &gf in row {
                eat(gf as u64);
            }
        }
        h
    }

    /// Debug dump: objects, hom-set size matrix, composition digest.
    pub fn dump(&self) -> CategoryDump {
        let n = self.objects.len();
        CategoryDump {
            objects: self.objects.clone(),
            hom_sizes: (0..n).map(|a| (0..n).map(|b| self.hom(a, b).len()).collect()).collect(),
            composition_digest: format!("{:016x}", self.composition_digest()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CategoryDump {
    pub objects: Vec<String>,
    pub hom_sizes: Vec<Vec<usize>>,
    pub composition_digest: String,
}

/// A functor between finite categories, as object and morphism tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functor {
    pub obj: Vec<usize>,
    pub mor: Vec<usize>,
}

impl Functor {
    /// Exhaustive check of endpoints, identities and composition.
    pub fn check(&self, source: &FinCategory, target: &FinCategory) -> Result<()> {
        if self.obj.len() != source.object_count() || self.mor.len() != source.morphism_count() {
            return Err(Error::InvalidCategory("functor tables have the wrong size".into()));
        }
        for (m, mm) in source.morphisms().iter().enumerate() {
            let fm = self.mor[m];
            if target.src(fm) != self.obj[mm.src] || target.dst(fm) != self.obj[mm.dst] {
                return Err(Error::InvalidCategory(format!("functor misplaces morphism {m}")));
            }
        }
        for o in 0..source.object_count() {
            if self.mor[source.identity(o)] != target.identity(self.obj[o]) {
                return Err(Error::InvalidCategory(format!("functor does not preserve the identity of {o}")));
            }
        }
        for f in 0..source.morphism_count() {
            for &g in source.out_of(source.dst(f)) {
                if self.mor[source.compose(g, f)] != target.compose(self.mor[g], self.mor[f]) {
                    return Err(Error::InvalidCategory(format!("functor does not preserve {g}∘{f}")));
                }
            }
        }
        Ok(())
    }

    pub fn identity(c: &FinCategory) -> Functor {
        Functor {
            obj: (0..c.object_count()).collect(),
            mor: (0..c.morphism_count()).collect(),
        }
    }
}
