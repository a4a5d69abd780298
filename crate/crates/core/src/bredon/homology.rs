use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::coefficients::CoefficientSystem;
use super::complex::GSimplicialComplex;
use super::presheaf::{OrbitPresheaf, PresheafMap};
use crate::error::{Error, Result};
use crate::fingroup::Family;
use crate::homalg::{
    bar_augmentation, hocoend_map, hocoend_trunc, hocolim_trunc, mapping_cone, quasi_iso_in_range, BarComplex, Bifunctor, ChainComplex,
    ChainFunctor, ChainMap, CoendIndex, HomologyGroup,
};
use crate::linalg::{QMatrix, SparseMatrix};
use crate::orbitcat::FinCategory;
use crate::repring::FactorMap;

/// `(S, T) ↦ E(S) ⊗ C_*(X(T))`, covariant in `S` and contravariant in `T`.
pub struct Pairing<'a> {
    e: &'a CoefficientSystem,
    x: &'a OrbitPresheaf,
    chains: Vec<ChainComplex>,
    values: Vec<Vec<ChainComplex>>,
}

impl<'a> Pairing<'a> {
    pub fn new(e: &'a CoefficientSystem, x: &'a OrbitPresheaf) -> Self {
        let ring = e.ring();
        let chains: Vec<ChainComplex> = x.values.iter().map(|v| v.chains(ring)).collect();
        let values = (0..chains.len())
            .map(|i| chains.iter().map(|c| e.value(i).tensor(c)).collect())
            .collect();
        Pairing { e, x, chains, values }
    }

    pub fn chains(&self, object: usize) -> &ChainComplex {
        &self.chains[object]
    }
}

impl Bifunctor for Pairing<'_> {
    fn category(&self) -> &FinCategory {
        self.e.orbit.category()
    }

    fn value(&self, i: usize, j: usize) -> &ChainComplex {
        &self.values[i][j]
    }

    fn map(&self, u: usize, v: usize) -> ChainMap {
        let c = self.e.orbit.category();
        let (i, i2, j2, j) = (c.src(u), c.dst(u), c.src(v), c.dst(v));
        let xv = self.x.maps[v].chain_map(&self.x.values[j], &self.x.values[j2]);
        ChainMap::tensor(self.e.map(u), &xv, self.e.value(i), self.e.value(i2), &self.chains[j], &self.chains[j2])
    }
}

/// `E^G(X)`: the homotopy coend of the pairing over the orbit category,
/// in total degrees `0..=top` (homology certified below `top`).
pub fn coend_eg(index: &CoendIndex, e: &CoefficientSystem, x: &OrbitPresheaf, top: usize) -> BarComplex {
    hocoend_trunc(index, &Pairing::new(e, x), top)
}

/// The map `E^G(X) → E^G(Y)` induced by a presheaf map.
pub fn coend_eg_map(
    index: &CoendIndex,
    source: (&Pairing, &BarComplex),
    target: (&Pairing, &BarComplex),
    eta: &PresheafMap,
    x: &OrbitPresheaf,
    y: &OrbitPresheaf,
) -> ChainMap {
    let e = source.0.e;
    hocoend_map(index, (source.0, source.1), (target.0, target.1), &|i, j| {
        let cj = eta.components[j].chain_map(&x.values[j], &y.values[j]);
        ChainMap::tensor(
            &ChainMap::identity(e.value(i)),
            &cj,
            e.value(i),
            e.value(i),
            source.0.chains(j),
            target.0.chains(j),
        )
    })
}

/// One orbit of cells: a representative simplex whose stabilizer is the
/// chosen representative of its subgroup class.
#[derive(Clone, Debug, Serialize)]
pub struct Cell {
    pub representative: Vec<usize>,
    pub object: usize,
    pub offset: usize,
    pub rank: usize,
}

/// Bredon cellular chains `C_n = ⊕ M(G/stab)` over orbits of simplices.
#[derive(Clone, Debug)]
pub struct CellularComplex {
    pub complex: ChainComplex,
    pub cells: Vec<Vec<Cell>>,
    locate: Vec<HashMap<Vec<usize>, (usize, usize)>>,
}

fn inversion_sign(v: &[usize]) -> i64 {
    let mut s = 1;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] > v[j] {
                s = -s;
            }
        }
    }
    s
}

impl CellularComplex {
    /// Cell, translating element `h` with `h·ρ = τ` as sets, and the sign
    /// comparing the orientation of `h·ρ` with the sorted order of `τ`.
    fn locate(&self, x: &GSimplicialComplex, tau: &[usize]) -> (usize, usize, i64) {
        let k = tau.len() - 1;
        let (cell, h) = self.locate[k][tau];
        let image: Vec<usize> = self.cells[k][cell].representative.iter().map(|&v| x.act(h, v)).collect();
        (cell, h, inversion_sign(&image))
    }

    /// Per-degree block projector for one rational class.
    pub fn projector(&self, e: &CoefficientSystem, class: usize, degree: usize) -> Option<QMatrix> {
        let rep = e.rep.as_ref()?;
        let n = self.complex.rank(degree);
        let mut p = QMatrix::zeros(n, n);
        for cell in self.cells.get(degree).into_iter().flatten() {
            let block = &rep.projectors[cell.object][class];
            for r in 0..cell.rank {
                for c in 0..cell.rank {
                    p.data[cell.offset + r][cell.offset + c] = block.data[r][c].clone();
                }
            }
        }
        Some(p)
    }
}

/// Bredon cellular chains of a regular complex with degree-0 coefficients.
/// Orientations come from the increasing vertex order of each simplex.
pub fn bredon_cellular(x: &GSimplicialComplex, m: &CoefficientSystem) -> Result<CellularComplex> {
    x.require_regular()?;
    if !m.is_degree_zero() {
        return Err(Error::InvalidChainData("cellular chains need degree-0 coefficients".into()));
    }
    let g = x.group();
    let orbit = &m.orbit;
    let lattice = orbit.lattice();
    let mut cells: Vec<Vec<Cell>> = Vec::new();
    let mut locate: Vec<HashMap<Vec<usize>, (usize, usize)>> = Vec::new();
    for k in 0..=x.dim() {
        if x.count(k) == 0 {
            break;
        }
        let mut level = Vec::new();
        let mut at = HashMap::new();
        let mut offset = 0;
        for orb in x.orbits(k) {
            let sigma = &x.simplices(k)[orb[0]];
            let (object, c) = lattice
                .conjugator_to_representative(g, &x.stabilizer(sigma))
                .expect("stabilizers are classified");
            let rho = x.act_simplex(g.inv(c), sigma);
            for h in 0..g.order() {
                at.entry(x.act_simplex(h, &rho)).or_insert((level.len(), h));
            }
            let rank = m.value(object).rank(0);
            level.push(Cell {
                representative: rho,
                object,
                offset,
                rank,
            });
            offset += rank;
        }
        cells.push(level);
        locate.push(at);
    }
    let mut out = CellularComplex {
        complex: ChainComplex::zero(m.ring()),
        cells,
        locate,
    };
    let ranks: Vec<usize> = out.cells.iter().map(|l| l.iter().map(|c| c.rank).sum()).collect();
    let mut diffs = Vec::new();
    for k in 1..ranks.len() {
        let mut trip = Vec::new();
        for cell in &out.cells[k] {
            for i in 0..=k {
                let mut tau = cell.representative.clone();
                tau.remove(i);
                let (target, h, eps) = out.locate(x, &tau);
                let t = &out.cells[k - 1][target];
                let mor = orbit
                    .morphism_with_payload(cell.object, t.object, h)
                    .expect("face stabilizers contain the cell stabilizer");
                let sign = BigInt::from(if i % 2 == 0 { eps } else { -eps });
                for (r, c, v) in m.matrix(mor).triplets() {
                    trip.push((t.offset + r, cell.offset + c, &sign * v));
                }
            }
        }
        diffs.push(SparseMatrix::from_triplets(ranks[k - 1], ranks[k], trip));
    }
    out.complex = if ranks.is_empty() {
        ChainComplex::zero(m.ring())
    } else {
        ChainComplex::new(m.ring(), ranks, diffs)?
    };
    Ok(out)
}

/// The map of cellular chains induced by an injective equivariant map of
/// complexes given on vertices.
pub fn cellular_map(
    sub: &GSimplicialComplex,
    sub_cells: &CellularComplex,
    x: &GSimplicialComplex,
    cells: &CellularComplex,
    vertex_map: &[usize],
    m: &CoefficientSystem,
) -> ChainMap {
    let len = sub_cells.complex.len().max(cells.complex.len());
    let components = (0..len)
        .map(|k| {
            let mut trip = Vec::new();
            for cell in sub_cells.cells.get(k).into_iter().flatten() {
                let image: Vec<usize> = cell.representative.iter().map(|&v| vertex_map[v]).collect();
                let mut tau = image.clone();
                tau.sort_unstable();
                let (target, h, eps) = cells.locate(x, &tau);
                let t = &cells.cells[k][target];
                let mor = m
                    .orbit
                    .morphism_with_payload(cell.object, t.object, h)
                    .expect("equivariant maps do not shrink stabilizers");
                let sign = BigInt::from(eps * inversion_sign(&image));
                for (r, c, v) in m.matrix(mor).triplets() {
                    trip.push((t.offset + r, cell.offset + c, &sign * v));
                }
            }
            SparseMatrix::from_triplets(cells.complex.rank(k), sub_cells.complex.rank(k), trip)
        })
        .collect();
    let _ = sub;
    ChainMap { components }
}

fn qmat(m: &SparseMatrix) -> QMatrix {
    let mut q = QMatrix::zeros(m.rows(), m.cols());
    for (r, c, v) in m.triplets() {
        q.data[r][c] = BigRational::from_integer(v.clone());
    }
    q
}

/// Homology of the image of a projector compatible with the differential,
/// over ℚ: boundary basis and chosen cycle representatives in degree `n`.
struct ProjectedHomology {
    boundaries: Vec<Vec<BigRational>>,
    representatives: Vec<Vec<BigRational>>,
}

fn projected_homology(c: &ChainComplex, p: &dyn Fn(usize) -> QMatrix, n: usize) -> ProjectedHomology {
    let space = |k: usize| QMatrix::from_columns(c.rank(k), &p(k).column_basis());
    let vn = space(n);
    let dn = qmat(&c.differential(n));
    let cycles: Vec<Vec<BigRational>> = if vn.cols == 0 {
        Vec::new()
    } else {
        dn.mul(&vn).kernel().iter().map(|coef| vn.mul(&QMatrix::from_columns(vn.cols, &[coef.clone()])).column(0)).collect()
    };
    let vup = space(n + 1);
    let boundaries = if vup.cols == 0 || c.rank(n) == 0 {
        Vec::new()
    } else {
        qmat(&c.differential(n + 1)).mul(&vup).column_basis()
    };
    let mut all = boundaries.clone();
    all.extend(cycles.iter().cloned());
    let representatives = if all.is_empty() {
        Vec::new()
    } else {
        let (_, pivots) = QMatrix::from_columns(c.rank(n), &all).rref();
        pivots.iter().filter(|&&i| i >= boundaries.len()).map(|&i| all[i].clone()).collect()
    };
    ProjectedHomology {
        boundaries,
        representatives,
    }
}

/// The map `H_n(P A) → H_n(P B)` over ℚ induced by `f`, where the
/// projectors commute with differentials and with `f`.
pub fn projected_homology_map(
    f: &ChainMap,
    a: &ChainComplex,
    b: &ChainComplex,
    pa: &dyn Fn(usize) -> QMatrix,
    pb: &dyn Fn(usize) -> QMatrix,
    n: usize,
) -> FactorMap {
    let ha = projected_homology(a, pa, n);
    let hb = projected_homology(b, pb, n);
    let (sd, td) = (ha.representatives.len(), hb.representatives.len());
    let mut matrix = QMatrix::zeros(td, sd);
    if sd > 0 && td > 0 {
        let mut basis = hb.boundaries.clone();
        basis.extend(hb.representatives.iter().cloned());
        let basis = QMatrix::from_columns(b.rank(n), &basis);
        let fq = qmat(&f.component(n, a, b));
        for (j, z) in ha.representatives.iter().enumerate() {
            let image = fq.mul(&QMatrix::from_columns(a.rank(n), &[z.clone()])).column(0);
            let coords = basis.solve_in_basis(&image).expect("chain maps send cycles to cycles");
            for i in 0..td {
                matrix.data[i][j] = coords[hb.boundaries.len() + i].clone();
            }
        }
    }
    FactorMap {
        source_dim: sd,
        target_dim: td,
        matrix,
    }
}

/// Dimension over ℚ of the projected homology in degree `n`.
pub fn projected_betti(c: &ChainComplex, p: &dyn Fn(usize) -> QMatrix, n: usize) -> usize {
    projected_homology(c, p, n).representatives.len()
}

/// The assembly map `hocolim_{orbits in F} E → E(G/G)` and its homology.
#[derive(Clone, Debug, Serialize)]
pub struct AssemblyReport {
    pub source_homology: Vec<HomologyGroup>,
    pub target_homology: Vec<HomologyGroup>,
    pub cone_homology: Vec<HomologyGroup>,
    /// Largest `m` such that the map is an isomorphism in degrees `≤ m`
    /// and onto in degree `m + 1` (within the certified range).
    pub iso_through: Option<usize>,
    /// Isomorphism in every certified degree.
    pub quasi_iso: bool,
    pub truncation: usize,
}

pub struct Assembly {
    pub bar: BarComplex,
    pub target: ChainComplex,
    pub map: ChainMap,
    pub report: AssemblyReport,
}

pub fn assembly_map(e: &CoefficientSystem, family: &Family, top: usize) -> Assembly {
    let orbit = &e.orbit;
    let c = orbit.category();
    let (sub, inc) = orbit.full_subcategory_family(family);
    let restricted = ChainFunctor {
        values: inc.obj.iter().map(|&o| e.value(o).clone()).collect(),
        maps: inc.mor.iter().map(|&m| e.map(m).clone()).collect(),
        category: sub,
    };
    let bar = hocolim_trunc(&restricted, top);
    let terminal = orbit.terminal();
    let target = e.value(terminal).clone();
    let map = bar_augmentation(&bar, &restricted, &target, &|o| e.map(c.hom(inc.obj[o], terminal)[0]).clone());
    let certified = top.saturating_sub(1);
    let cone = mapping_cone(&map, &bar.complex, &target);
    let cone_homology = cone.homology_upto(certified);
    let mut iso_through = None;
    for k in 0..certified {
        if cone_homology[..=k + 1].iter().all(HomologyGroup::is_zero) {
            iso_through = Some(k);
        } else {
            break;
        }
    }
    let quasi_iso = top >= 2 && quasi_iso_in_range(&map, &bar.complex, &target, 0, top - 2);
    let report = AssemblyReport {
        source_homology: bar.certified_homology(),
        target_homology: target.homology_upto(certified),
        cone_homology,
        iso_through,
        quasi_iso,
        truncation: top,
    };
    Assembly { bar, target, map, report }
}

/// Ranks over ℚ of a table of homology groups, padded to `len`.
pub fn padded_ranks(h: &[HomologyGroup], len: usize) -> Vec<usize> {
    (0..len).map(|k| h.get(k).map_or(0, |g| g.rank)).collect()
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::super::complex::equivariant_subdivision;
    use super::super::examples::*;
    use super::super::presheaf::tilde_y;
    use super::*;
    use crate::fingroup::named::{cyclic, symmetric};
    use crate::homalg::Ring;
    use crate::orbitcat::OrbitCategory;

    fn orbit(x: &GSimplicialComplex) -> Arc<OrbitCategory> {
        Arc::new(OrbitCategory::new(x.group().clone()).unwrap())
    }

    fn hz(rank: usize) -> HomologyGroup {
        HomologyGroup::free(rank)
    }

    #[test]
    fn cellular_examples() {
        let c = reflection_circle();
        let o = orbit(&c);
        let z = CoefficientSystem::constant(o.clone(), Ring::ZZ);
        let cc = bredon_cellular(&c, &z).unwrap();
        assert_eq!(cc.complex.homology(), vec![hz(1), hz(0)]);
        let r = CoefficientSystem::representation_ring(o.clone()).unwrap();
        let cr = bredon_cellular(&c, &r).unwrap();
        // vertex orbits {p}, {a,b}, {q}; edge orbits {pa,pb}, {aq,bq}
        assert_eq!(cr.complex.ranks(), &[5, 2]);
        let h = cr.complex.homology();
        assert_eq!((h[0].rank, h[1].rank), (3, 0));
        // a point with trivial action gives M(G/G)
        let p = point(c.group().clone());
        assert_eq!(bredon_cellular(&p, &r).unwrap().complex.ranks(), &[2]);
        assert!(bredon_cellular(&edge_swap(), &z).is_err());
    }

    #[test]
    fn coend_examples() {
        // E(G/1) = 0, E(G/G) = Z on the free pair: nothing survives
        let free = free_pair();
        let o = orbit(&free);
        let ones = Family::new(free.group(), [0]).unwrap();
        let e = CoefficientSystem::zero_on_family(o.clone(), &ones, Ring::ZZ);
        let index = CoendIndex::new(o.category());
        let y = tilde_y(&free, &o).unwrap();
        let bar = coend_eg(&index, &e, &y, 3);
        assert!(bar.certified_homology().iter().all(HomologyGroup::is_zero));
        // constant Z on the reflection circle: the quotient interval
        let c = reflection_circle();
        let y = tilde_y(&c, &o).unwrap();
        let z = CoefficientSystem::constant(o.clone(), Ring::ZZ);
        let h = coend_eg(&index, &z, &y, 3).certified_homology();
        assert_eq!(h, vec![hz(1), hz(0), hz(0)]);
    }

    #[test]
    fn coend_matches_cellular_on_small_cases() {
        let cases = vec![reflection_circle(), equivariant_subdivision(&edge_swap()), z4_reflection_circle()];
        for x in cases {
            let o = orbit(&x);
            let index = CoendIndex::new(o.category());
            let y = tilde_y(&x, &o).unwrap();
            for e in [
                CoefficientSystem::constant(o.clone(), Ring::ZZ),
                CoefficientSystem::constant(o.clone(), Ring::QQ),
                CoefficientSystem::representation_ring(o.clone()).unwrap(),
            ] {
                let top = x.dim() + 2;
                let a = coend_eg(&index, &e, &y, top).certified_homology();
                let b = bredon_cellular(&x, &e).unwrap().complex.homology_upto(top - 1);
                assert_eq!(a[..=x.dim()], b[..=x.dim()], "{}", e.label);
            }
        }
    }

    #[test]
    fn assembly_examples() {
        let o = Arc::new(OrbitCategory::new(Arc::new(cyclic(2))).unwrap());
        let ones = Family::new(o.group(), [0]).unwrap();
        let z = CoefficientSystem::constant(o.clone(), Ring::ZZ);
        let a = assembly_map(&z, &ones, 5);
        let h = &a.report.source_homology;
        assert_eq!(h[0], hz(1));
        assert_eq!(h[1].invariant_factors(), vec![BigInt::from(2)]);
        assert!(h[2].is_zero());
        assert_eq!(h[3].invariant_factors(), vec![BigInt::from(2)]);
        assert_eq!(a.report.iso_through, Some(0));
        assert!(!a.report.quasi_iso);
        let q = CoefficientSystem::constant(o.clone(), Ring::QQ);
        assert!(assembly_map(&q, &ones, 5).report.quasi_iso);
        let all = Family::all(o.group()).unwrap();
        assert!(assembly_map(&z, &all, 4).report.quasi_iso);
        let s3 = Arc::new(OrbitCategory::new(Arc::new(symmetric(3))).unwrap());
        let r = CoefficientSystem::representation_ring(s3.clone()).unwrap();
        assert!(assembly_map(&r, &Family::all(s3.group()).unwrap(), 3).report.quasi_iso);
    }
}
