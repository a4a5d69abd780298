use std::collections::HashMap;
use std::sync::Arc;

use super::complex::GSimplicialComplex;
use crate::error::{Error, Result};
use crate::fingroup::Family;
use crate::homalg::{SimplexRef, SimplicialMap, SimplicialSetFin};
use crate::orbitcat::{comma_over, Chain, FinCategory, OrbitCategory, Variance};

/// A presheaf of finite simplicial sets on the orbit category.
#[derive(Clone, Debug)]
pub struct OrbitPresheaf {
    pub orbit: Arc<OrbitCategory>,
    pub values: Vec<SimplicialSetFin>,
    /// `maps[m]: X(dst m) → X(src m)`.
    pub maps: Vec<SimplicialMap>,
}

impl OrbitPresheaf {
    /// Checks every map and functoriality on all composable pairs.
    pub fn check(&self) -> Result<()> {
        let c = self.orbit.category();
        if self.values.len() != c.object_count() || self.maps.len() != c.morphism_count() {
            return Err(Error::InvalidChainData("presheaf tables have the wrong size".into()));
        }
        for m in 0..c.morphism_count() {
            self.maps[m].check(&self.values[c.dst(m)], &self.values[c.src(m)])?;
        }
        for o in 0..c.object_count() {
            if self.maps[c.identity(o)] != SimplicialMap::identity(&self.values[o]) {
                return Err(Error::InvalidChainData(format!("identity of object {o} acts nontrivially")));
            }
        }
        for f in 0..c.morphism_count() {
            for &g in c.out_of(c.dst(f)) {
                let chained = self.maps[f].compose(&self.maps[g], &self.values[c.dst(f)]);
                if chained != self.maps[c.compose(g, f)] {
                    return Err(Error::InvalidChainData(format!("presheaf functoriality fails at {g}∘{f}")));
                }
            }
        }
        Ok(())
    }

    /// Largest stored simplex dimension over all objects.
    pub fn dim(&self) -> usize {
        self.values.iter().map(|v| v.levels().saturating_sub(1)).max().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.values.iter().all(SimplicialSetFin::is_empty)
    }
}

/// Objectwise simplicial maps `X(S) → Y(S)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresheafMap {
    pub components: Vec<SimplicialMap>,
}

impl PresheafMap {
    /// Each component is simplicial and `Y(m)∘η = η∘X(m)` for every `m`.
    pub fn check(&self, source: &OrbitPresheaf, target: &OrbitPresheaf) -> Result<()> {
        let c = source.orbit.category();
        for o in 0..c.object_count() {
            self.components[o].check(&source.values[o], &target.values[o])?;
        }
        for m in 0..c.morphism_count() {
            let (a, b) = (c.src(m), c.dst(m));
            let down = target.maps[m].compose(&self.components[b], &target.values[b]);
            let across = self.components[a].compose(&source.maps[m], &source.values[a]);
            if down != across {
                return Err(Error::InvalidChainData(format!("naturality fails at morphism {m}")));
            }
        }
        Ok(())
    }
}

/// One fixed-point value: its vertices (ambient ids, in the local order)
/// and its simplices in local ids with their positions.
struct FixedValue {
    vertices: Vec<usize>,
    local: HashMap<usize, usize>,
    simplices: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
    value: SimplicialSetFin,
}

fn fixed_values(x: &GSimplicialComplex, orbit: &OrbitCategory) -> Result<Vec<FixedValue>> {
    x.require_regular()?;
    let key = x
        .invariant_order_key()
        .ok_or_else(|| Error::NotRegular("no invariant ordering of the simplices; subdivide first".into()))?;
    let mut out = Vec::new();
    for a in 0..orbit.object_count() {
        let mut vertices = x.fixed_vertices(orbit.subgroup(a));
        vertices.sort_by_key(|&v| (key[v], v));
        let local: HashMap<usize, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut simplices: Vec<Vec<Vec<usize>>> = Vec::new();
        for k in 0..=x.dim() {
            let mut level: Vec<Vec<usize>> = x
                .simplices(k)
                .iter()
                .filter(|s| s.iter().all(|v| local.contains_key(v)))
                .map(|s| {
                    let mut l: Vec<usize> = s.iter().map(|v| local[v]).collect();
                    l.sort_unstable();
                    l
                })
                .collect();
            if level.is_empty() {
                break;
            }
            level.sort();
            simplices.push(level);
        }
        let index = simplices
            .iter()
            .map(|l| l.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        let value = SimplicialSetFin::from_ordered_complex(&simplices)?;
        out.push(FixedValue {
            vertices,
            local,
            simplices,
            index,
            value,
        });
    }
    Ok(out)
}

/// The fixed-point presheaf `G/H ↦ X^H` of a regular complex. A morphism
/// `G/H → G/K` with payload `g` acts by `x ↦ g·x` on `X^K → X^H`.
pub fn tilde_y(x: &GSimplicialComplex, orbit: &Arc<OrbitCategory>) -> Result<OrbitPresheaf> {
    let fixed = fixed_values(x, orbit)?;
    let c = orbit.category();
    let maps = (0..c.morphism_count())
        .map(|m| {
            let (a, b, g) = (c.src(m), c.dst(m), orbit.payload(m));
            let (from, to) = (&fixed[b], &fixed[a]);
            SimplicialMap {
                images: from
                    .simplices
                    .iter()
                    .enumerate()
                    .map(|(k, level)| {
                        level
                            .iter()
                            .map(|s| {
                                let mut t: Vec<usize> = s.iter().map(|&v| to.local[&x.act(g, from.vertices[v])]).collect();
                                t.sort_unstable();
                                SimplexRef::nondegenerate(k, to.index[k][&t])
                            })
                            .collect()
                    })
                    .collect(),
            }
        })
        .collect();
    Ok(OrbitPresheaf {
        orbit: orbit.clone(),
        values: fixed.into_iter().map(|f| f.value).collect(),
        maps,
    })
}

/// `tilde_y(f)` for an equivariant simplicial map given on vertices. The
/// map must be weakly monotone for the invariant vertex orders.
pub fn tilde_y_map(x: &GSimplicialComplex, y: &GSimplicialComplex, vertex_map: &[usize], orbit: &Arc<OrbitCategory>) -> Result<PresheafMap> {
    for g in 0..x.group().order() {
        for v in 0..x.vertex_count() {
            if vertex_map[x.act(g, v)] != y.act(g, vertex_map[v]) {
                return Err(Error::MorphismCheckFailed(format!("vertex map is not equivariant at vertex {v}")));
            }
        }
    }
    let (fx, fy) = (fixed_values(x, orbit)?, fixed_values(y, orbit)?);
    let mut components = Vec::new();
    for (from, to) in fx.iter().zip(&fy) {
        let mut images = Vec::new();
        for level in &from.simplices {
            let mut li = Vec::new();
            for s in level {
                let image: Vec<usize> = s.iter().map(|&v| to.local[&vertex_map[from.vertices[v]]]).collect();
                if image.windows(2).any(|w| w[0] > w[1]) {
                    return Err(Error::MorphismCheckFailed("vertex map does not respect the simplex orders".into()));
                }
                let mut distinct = image.clone();
                distinct.dedup();
                let base = distinct.len() - 1;
                let id = *to.index.get(base).and_then(|ix| ix.get(&distinct)).ok_or_else(|| {
                    Error::MorphismCheckFailed(format!("image of {s:?} is not a simplex"))
                })?;
                let degeneracy = image.iter().map(|v| distinct.binary_search(v).unwrap()).collect();
                li.push(SimplexRef { base, id, degeneracy });
            }
            images.push(li);
        }
        components.push(SimplicialMap { images });
    }
    Ok(PresheafMap { components })
}

/// `X^F = Ind Res X` along the complement of a family, with its counit.
#[derive(Clone, Debug)]
pub struct KanExtension {
    pub presheaf: OrbitPresheaf,
    pub counit: PresheafMap,
}

struct CommaModel {
    /// `(T, f: S → T)` per object.
    objects: Vec<(usize, usize)>,
    index_cat: FinCategory,
    /// Orbit morphism `ι(h)` behind each comma morphism.
    base_morphism: Vec<usize>,
    object_of: HashMap<(usize, usize), usize>,
    morphism_of: HashMap<(usize, usize, usize), usize>,
}

/// Simplices `(σ, x)` of the diagonal of the simplicial replacement: `σ` a
/// chain in the indexing category (identities allowed) and `x` a possibly
/// degenerate simplex of the value at its start, not jointly degenerate.
struct Diagonal {
    simplices: Vec<Vec<(Chain, SimplexRef)>>,
    set: SimplicialSetFin,
}

fn surjections(n: usize, k: usize) -> Vec<Vec<usize>> {
    // choose the k positions (among 1..=n) where the value steps up
    let mut out = Vec::new();
    let mut steps = Vec::new();
    fn rec(start: usize, n: usize, left: usize, steps: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            let mut v = Vec::with_capacity(n + 1);
            let mut cur = 0;
            for i in 0..=n {
                if steps.contains(&i) {
                    cur += 1;
                }
                v.push(cur);
            }
            out.push(v);
            return;
        }
        for p in start..=n {
            steps.push(p);
            rec(p + 1, n, left - 1, steps, out);
            steps.pop();
        }
    }
    rec(1, n, k, &mut steps, &mut out);
    out
}

fn all_simplices(x: &SimplicialSetFin, n: usize) -> Vec<SimplexRef> {
    let mut out = Vec::new();
    for k in 0..=n.min(x.levels().saturating_sub(1)) {
        if x.count(k) == 0 {
            continue;
        }
        let surs = surjections(n, k);
        for id in 0..x.count(k) {
            for s in &surs {
                out.push(SimplexRef {
                    base: k,
                    id,
                    degeneracy: s.clone(),
                });
            }
        }
    }
    out
}

fn diagonal<'a>(cat: &FinCategory, value: &dyn Fn(usize) -> &'a SimplicialSetFin, map: &dyn Fn(usize) -> (&'a SimplicialMap, &'a SimplicialSetFin), top: usize) -> Diagonal {
    let mut nerve: Vec<Chain> = (0..cat.object_count()).map(|start| Chain { start, arrows: Vec::new() }).collect();
    let mut simplices: Vec<Vec<(Chain, SimplexRef)>> = Vec::new();
    let mut index: Vec<HashMap<(Chain, SimplexRef), usize>> = Vec::new();
    let mut faces: Vec<Vec<Vec<SimplexRef>>> = Vec::new();
    for n in 0..=top {
        if n > 0 {
            let mut next = Vec::new();
            for c in &nerve {
                let end = c.arrows.last().map_or(c.start, |&m| cat.dst(m));
                for &m in cat.out_of(end) {
                    let mut arrows = c.arrows.clone();
                    arrows.push(m);
                    next.push(Chain { start: c.start, arrows });
                }
            }
            nerve = next;
        }
        let mut level = Vec::new();
        for c in &nerve {
            for x in all_simplices(value(c.start), n) {
                let joint = (0..n).any(|i| cat.is_identity(c.arrows[i]) && x.collapses_at(i));
                if !joint {
                    level.push((c.clone(), x));
                }
            }
        }
        if level.is_empty() {
            break;
        }
        let lookup: HashMap<(Chain, SimplexRef), usize> = level.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let mut level_faces = Vec::with_capacity(level.len());
        if n > 0 {
            for (c, x) in &level {
                let mut fs = Vec::with_capacity(n + 1);
                for i in 0..=n {
                    let (chain, face) = if i == 0 {
                        let (f, target) = map(c.arrows[0]);
                        let rest = Chain {
                            start: cat.dst(c.arrows[0]),
                            arrows: c.arrows[1..].to_vec(),
                        };
                        let pushed = f.apply(target, &value(c.start).face(x, 0));
                        (rest, pushed)
                    } else if i == n {
                        let front = Chain {
                            start: c.start,
                            arrows: c.arrows[..n - 1].to_vec(),
                        };
                        (front, value(c.start).face(x, n))
                    } else {
                        let mut arrows = c.arrows[..i - 1].to_vec();
                        arrows.push(cat.compose(c.arrows[i], c.arrows[i - 1]));
                        arrows.extend_from_slice(&c.arrows[i + 1..]);
                        (Chain { start: c.start, arrows }, value(c.start).face(x, i))
                    };
                    fs.push(normal_form(cat, value(chain.start), &index, chain, face));
                }
                level_faces.push(fs);
            }
        } else {
            level_faces.resize(level.len(), Vec::new());
        }
        faces.push(level_faces);
        index.push(lookup);
        simplices.push(level);
    }
    Diagonal {
        simplices,
        set: SimplicialSetFin::from_faces_unchecked(faces),
    }
}

/// Writes `(σ, x)` as `s*(σ″, x″)` with `(σ″, x″)` jointly nondegenerate.
fn normal_form(cat: &FinCategory, value: &SimplicialSetFin, index: &[HashMap<(Chain, SimplexRef), usize>], chain: Chain, x: SimplexRef) -> SimplexRef {
    let m = chain.arrows.len();
    let collapse: Vec<bool> = (0..m).map(|i| cat.is_identity(chain.arrows[i]) && x.collapses_at(i)).collect();
    let mut sur = vec![0usize];
    for &c in &collapse {
        let last = *sur.last().unwrap();
        sur.push(if c { last } else { last + 1 });
    }
    let r = *sur.last().unwrap();
    let section: Vec<usize> = (0..=r).map(|t| sur.iter().position(|&s| s == t).unwrap()).collect();
    let arrows: Vec<usize> = (0..r)
        .map(|t| {
            let mut acc = chain.arrows[section[t]];
            for i in section[t] + 1..section[t + 1] {
                acc = cat.compose(chain.arrows[i], acc);
            }
            acc
        })
        .collect();
    let reduced = Chain { start: chain.start, arrows };
    let y = value.pullback(&x, &section);
    let id = index[r][&(reduced, y)];
    SimplexRef {
        base: r,
        id,
        degeneracy: sur,
    }
}

/// The homotopy left Kan extension of `X` restricted to the orbits outside
/// `family`, as a presheaf truncated at simplicial dimension `top`. At `S`
/// it is the diagonal of the simplicial replacement over the opposite of
/// the comma category `S ↓ ι`.
pub fn presheaf_xf(x: &OrbitPresheaf, family: &Family, top: usize) -> KanExtension {
    let orbit = &x.orbit;
    let c = orbit.category();
    let (d, inc) = orbit.complement_subcategory(family);
    let models: Vec<CommaModel> = (0..c.object_count())
        .map(|s| {
            let comma = comma_over(&d, &inc, c, s, Variance::Contra);
            let objects: Vec<(usize, usize)> = comma.objects.iter().map(|&(t, f)| (inc.obj[t], f)).collect();
            let base_morphism: Vec<usize> = comma.projection.mor.iter().map(|&h| inc.mor[h]).collect();
            let object_of = objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();
            let morphism_of = (0..comma.cat.morphism_count())
                .map(|m| ((comma.cat.src(m), comma.cat.dst(m), base_morphism[m]), m))
                .collect();
            CommaModel {
                objects,
                index_cat: comma.cat.opposite(),
                base_morphism,
                object_of,
                morphism_of,
            }
        })
        .collect();
    let diagonals: Vec<Diagonal> = models
        .iter()
        .map(|model| {
            let value = |o: usize| &x.values[model.objects[o].0];
            // an index arrow j: (T′,f′) → (T,f) comes from h: T → T′ and acts by X(h)
            let map = |j: usize| {
                let h = model.base_morphism[j];
                (&x.maps[h], &x.values[c.src(h)])
            };
            diagonal(&model.index_cat, &value, &map, top)
        })
        .collect();
    let counit = PresheafMap {
        components: diagonals
            .iter()
            .zip(&models)
            .enumerate()
            .map(|(s, (diag, model))| SimplicialMap {
                images: diag
                    .simplices
                    .iter()
                    .map(|level| {
                        level
                            .iter()
                            .map(|(chain, simplex)| {
                                let f = model.objects[chain.start].1;
                                x.maps[f].apply(&x.values[s], simplex)
                            })
                            .collect()
                    })
                    .collect(),
            })
            .collect(),
    };
    let maps = (0..c.morphism_count())
        .map(|phi| {
            let (small, big) = (c.src(phi), c.dst(phi));
            let (from, to) = (&models[big], &models[small]);
            let target_index: Vec<HashMap<&(Chain, SimplexRef), usize>> = diagonals[small]
                .simplices
                .iter()
                .map(|l| l.iter().enumerate().map(|(i, s)| (s, i)).collect())
                .collect();
            let move_object = |o: usize| {
                let (t, f) = from.objects[o];
                to.object_of[&(t, c.compose(f, phi))]
            };
            SimplicialMap {
                images: diagonals[big]
                    .simplices
                    .iter()
                    .enumerate()
                    .map(|(k, level)| {
                        level
                            .iter()
                            .map(|(chain, simplex)| {
                                let arrows = chain
                                    .arrows
                                    .iter()
                                    .map(|&j| {
                                        let (a, b) = (from.index_cat.dst(j), from.index_cat.src(j));
                                        to.morphism_of[&(move_object(a), move_object(b), from.base_morphism[j])]
                                    })
                                    .collect();
                                let moved = (
                                    Chain {
                                        start: move_object(chain.start),
                                        arrows,
                                    },
                                    simplex.clone(),
                                );
                                SimplexRef::nondegenerate(k, target_index[k][&moved])
                            })
                            .collect()
                    })
                    .collect(),
            }
        })
        .collect();
    KanExtension {
        presheaf: OrbitPresheaf {
            orbit: orbit.clone(),
            values: diagonals.into_iter().map(|d| d.set).collect(),
            maps,
        },
        counit,
    }
}

#[cfg(test)]
mod tests {
    use super::super::examples::*;
    use super::*;
    use crate::fingroup::named::{cyclic, symmetric, trivial};
    use crate::homalg::{ranks_of, Ring};

    fn orbit_of(x: &GSimplicialComplex) -> Arc<OrbitCategory> {
        Arc::new(OrbitCategory::new(x.group().clone()).unwrap())
    }

    #[test]
    fn fixed_point_presheaf_examples() {
        let c = reflection_circle();
        let orb = orbit_of(&c);
        let y = tilde_y(&c, &orb).unwrap();
        y.check().unwrap();
        assert_eq!((y.values[1].count(0), y.values[1].count(1)), (2, 0));
        assert_eq!((y.values[0].count(0), y.values[0].count(1)), (4, 4));

        let free = free_pair();
        let y = tilde_y(&free, &orbit_of(&free)).unwrap();
        assert!(y.values[1].is_empty());

        let t = Arc::new(trivial());
        let p = point(t);
        let y = tilde_y(&p, &orbit_of(&p)).unwrap();
        assert_eq!(y.values.len(), 1);
        assert_eq!(y.values[0].count(0), 1);

        assert!(matches!(tilde_y(&edge_swap(), &orbit_of(&edge_swap())), Err(Error::NotRegular(_))));
    }

    #[test]
    fn every_battery_presheaf_is_functorial() {
        for (label, x) in regular_battery() {
            let y = tilde_y(&x, &orbit_of(&x)).unwrap();
            y.check().unwrap_or_else(|e| panic!("{label}: {e}"));
        }
    }

    #[test]
    fn kan_extension_examples() {
        let free = free_pair();
        let orb = orbit_of(&free);
        let y = tilde_y(&free, &orb).unwrap();
        let ones = Family::new(free.group(), [0]).unwrap();
        let xf = presheaf_xf(&y, &ones, 3);
        assert!(xf.presheaf.is_empty());

        let c = reflection_circle();
        let orb = orbit_of(&c);
        let y = tilde_y(&c, &orb).unwrap();
        let xf = presheaf_xf(&y, &ones, 3);
        xf.presheaf.check().unwrap();
        xf.counit.check(&xf.presheaf, &y).unwrap();
        for v in &xf.presheaf.values {
            v.check_face_identities().unwrap();
            assert_eq!(ranks_of(&v.chains(Ring::ZZ).homology())[0], 2);
        }
    }

    #[test]
    fn empty_family_reproduces_the_homology() {
        for (label, x) in regular_battery().into_iter().filter(|(_, x)| x.group().order() <= 2) {
            let orb = orbit_of(&x);
            let y = tilde_y(&x, &orb).unwrap();
            let top = x.dim() + 2;
            let xf = presheaf_xf(&y, &Family::empty(), top);
            xf.counit.check(&xf.presheaf, &y).unwrap();
            for s in 0..orb.object_count() {
                let a = xf.presheaf.values[s].chains(Ring::ZZ).homology_upto(top - 1);
                let b = y.values[s].chains(Ring::ZZ).homology_upto(top - 1);
                assert_eq!(a, b, "{label} at {s}");
            }
        }
    }

    #[test]
    fn naturality_of_fixed_points() {
        // inclusion of the fixed subcomplex, and the identity
        let c = reflection_circle();
        let orb = orbit_of(&c);
        let t = &c.group().conjugacy_classes()[1];
        let (sub, old) = super::super::complex::gamma_fixed_subcomplex(&c, t).unwrap();
        let f = tilde_y_map(&sub, &c, &old, &orb).unwrap();
        f.check(&tilde_y(&sub, &orb).unwrap(), &tilde_y(&c, &orb).unwrap()).unwrap();
        let id: Vec<usize> = (0..4).collect();
        let y = tilde_y(&c, &orb).unwrap();
        tilde_y_map(&c, &c, &id, &orb).unwrap().check(&y, &y).unwrap();
        // collapsing the S3 triangle onto the fixed point of the cone
        let s3 = Arc::new(symmetric(3));
        let orb = Arc::new(OrbitCategory::new(s3.clone()).unwrap());
        let tri = super::super::complex::equivariant_subdivision(&s3_triangle_boundary());
        let pt = point(s3);
        let collapse = vec![0; tri.vertex_count()];
        let f = tilde_y_map(&tri, &pt, &collapse, &orb).unwrap();
        f.check(&tilde_y(&tri, &orb).unwrap(), &tilde_y(&pt, &orb).unwrap()).unwrap();
        let _ = cyclic(2);
    }
}
