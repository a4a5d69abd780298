use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::fingroup::Family;
use crate::homalg::{ChainComplex, ChainFunctor, ChainMap, Ring};
use crate::linalg::{QMatrix, SparseMatrix};
use crate::orbitcat::OrbitCategory;
use crate::repring::{indicator_multiplication, induce, rational_class_decomposition, Cyclotomic, RationalClasses, SubgroupTable};

/// Rational `R(G)`-module structure on a degree-0 coefficient system: the
/// action of each primitive idempotent of `R(G) ⊗ ℚ` on every value.
#[derive(Clone, Debug)]
pub struct RepStructure {
    pub classes: RationalClasses,
    /// `projectors[o][c]`: multiplication by the idempotent of rational
    /// class `c` on the value at object `o`.
    pub projectors: Vec<Vec<QMatrix>>,
}

/// A covariant functor on the orbit category with values in chain
/// complexes.
#[derive(Clone, Debug)]
pub struct CoefficientSystem {
    pub label: String,
    pub orbit: Arc<OrbitCategory>,
    pub functor: ChainFunctor,
    pub rep: Option<RepStructure>,
}

fn dense(m: &SparseMatrix) -> QMatrix {
    let d = m.to_dense();
    QMatrix::from_int_rows(&(0..d.rows()).map(|r| d.row(r).to_vec()).collect::<Vec<_>>(), d.cols())
}

impl CoefficientSystem {
    pub fn ring(&self) -> Ring {
        self.functor.values.first().map_or(Ring::ZZ, ChainComplex::ring)
    }

    pub fn value(&self, object: usize) -> &ChainComplex {
        &self.functor.values[object]
    }

    pub fn map(&self, morphism: usize) -> &ChainMap {
        &self.functor.maps[morphism]
    }

    /// Every value is concentrated in degree 0.
    pub fn is_degree_zero(&self) -> bool {
        self.functor.values.iter().all(|v| v.len() <= 1)
    }

    /// Degree-0 component of the structure map of a morphism.
    pub fn matrix(&self, morphism: usize) -> SparseMatrix {
        let c = self.orbit.category();
        self.map(morphism)
            .component(0, self.value(c.src(morphism)), self.value(c.dst(morphism)))
    }

    /// The constant system with value the ring in degree 0.
    pub fn constant(orbit: Arc<OrbitCategory>, ring: Ring) -> Self {
        let functor = ChainFunctor::constant(orbit.category().clone(), ChainComplex::concentrated(ring, 1, 0));
        CoefficientSystem {
            label: format!("constant:{ring}"),
            orbit,
            functor,
            rep: None,
        }
    }

    /// `ℤ` on orbits outside the family, 0 on it, identities in between.
    /// Functorial because families are closed under subconjugation.
    pub fn zero_on_family(orbit: Arc<OrbitCategory>, family: &Family, ring: Ring) -> Self {
        let c = orbit.category();
        let values: Vec<ChainComplex> = (0..c.object_count())
            .map(|o| {
                if family.contains(o) {
                    ChainComplex::zero(ring)
                } else {
                    ChainComplex::concentrated(ring, 1, 0)
                }
            })
            .collect();
        let maps = (0..c.morphism_count())
            .map(|m| {
                if family.contains(c.src(m)) {
                    ChainMap::zero(&values[c.src(m)], &values[c.dst(m)])
                } else {
                    ChainMap::identity(&values[c.src(m)])
                }
            })
            .collect();
        CoefficientSystem {
            label: format!("zero-on-family:{:?}", family.members),
            functor: ChainFunctor {
                category: c.clone(),
                values,
                maps,
            },
            orbit,
            rep: None,
        }
    }

    /// `G/H ↦ R(H)` over the irreducible basis. A morphism `G/H → G/K` with
    /// payload `g` conjugates by `g` and induces up to `K`. Carries the
    /// rational `R(G)`-module structure given by restricted idempotents.
    pub fn representation_ring(orbit: Arc<OrbitCategory>) -> Result<Self> {
        let g = orbit.group().clone();
        let c = orbit.category();
        let tables = (0..c.object_count())
            .map(|o| SubgroupTable::new(&g, orbit.subgroup(o)))
            .collect::<Result<Vec<_>>>()?;
        let values: Vec<ChainComplex> = tables
            .iter()
            .map(|t| ChainComplex::concentrated(Ring::ZZ, t.table.len(), 0))
            .collect();
        let mut maps = Vec::with_capacity(c.morphism_count());
        for m in 0..c.morphism_count() {
            let (a, b, x) = (c.src(m), c.dst(m), orbit.payload(m));
            let (h, k) = (orbit.subgroup(a), orbit.subgroup(b));
            let (th, tk) = (&tables[a], &tables[b]);
            let conjugated = g.conjugate_subgroup(h, g.inv(x));
            let mut trip = Vec::new();
            for (col, psi) in th.table.irreducibles.iter().enumerate() {
                let value_on = |y: usize| psi[th.class_of(g.conjugate(y, x))].clone();
                let induced: Vec<Cyclotomic> = (0..tk.table.class_count())
                    .map(|l| induce(&g, &conjugated, k, &value_on, tk.ambient_representative(l, &g)))
                    .collect();
                for (row, coef) in tk.table.decompose(&induced)?.into_iter().enumerate() {
                    trip.push((row, col, coef));
                }
            }
            let matrix = SparseMatrix::from_triplets(tk.table.len(), th.table.len(), trip);
            maps.push(ChainMap { components: vec![matrix] });
        }
        let classes = rational_class_decomposition(&g);
        let mut projectors = Vec::new();
        for t in &tables {
            let mut per = Vec::new();
            for ci in 0..classes.len() {
                let marked: Vec<bool> = (0..t.table.class_count())
                    .map(|l| classes.class_of[g.class_of(t.ambient_representative(l, &g))] == ci)
                    .collect();
                per.push(indicator_multiplication(&t.table, &marked)?);
            }
            projectors.push(per);
        }
        Ok(CoefficientSystem {
            label: "repring:R".into(),
            functor: ChainFunctor {
                category: c.clone(),
                values,
                maps,
            },
            orbit,
            rep: Some(RepStructure { classes, projectors }),
        })
    }

    /// Explicit values and maps, checked for functoriality.
    pub fn explicit(label: impl Into<String>, orbit: Arc<OrbitCategory>, values: Vec<ChainComplex>, maps: Vec<ChainMap>) -> Result<Self> {
        let functor = ChainFunctor::new(orbit.category().clone(), values, maps)?;
        Ok(CoefficientSystem {
            label: label.into(),
            orbit,
            functor,
            rep: None,
        })
    }

    /// First object of the family whose value has nonzero homology.
    pub fn nonvanishing_on(&self, family: &Family) -> Option<usize> {
        family
            .members
            .iter()
            .copied()
            .find(|&o| self.value(o).homology().iter().any(|h| !h.is_zero()))
    }

    /// Every structure map commutes with the idempotent projectors.
    pub fn check_rep_linear(&self) -> Result<()> {
        let Some(rep) = &self.rep else { return Ok(()) };
        let c = self.orbit.category();
        for m in 0..c.morphism_count() {
            let f = dense(&self.matrix(m));
            for k in 0..rep.classes.len() {
                let lhs = f.mul(&rep.projectors[c.src(m)][k]);
                let rhs = rep.projectors[c.dst(m)][k].mul(&f);
                if lhs != rhs {
                    return Err(Error::StructureMismatch(format!("morphism {m} is not linear over rational class {k}")));
                }
            }
        }
        Ok(())
    }

    /// Builds a system from a symbolic tag: `constant:Z`, `constant:Q`,
    /// `repring:R`, `zero-on-family:<classes>` (comma-separated subgroup
    /// class indices) or `zero-on-family:gamma=<element class>`.
    pub fn from_tag(tag: &str, orbit: Arc<OrbitCategory>) -> Result<Self> {
        let g = orbit.group().clone();
        match tag {
            "constant:Z" => Ok(Self::constant(orbit, Ring::ZZ)),
            "constant:Q" => Ok(Self::constant(orbit, Ring::QQ)),
            "repring:R" => Self::representation_ring(orbit),
            _ => {
                let spec = tag
                    .strip_prefix("zero-on-family:")
                    .ok_or_else(|| Error::parse("coefficients", format!("unknown coefficient tag {tag:?}")))?;
                let family = parse_family(&g, spec)?;
                Ok(Self::zero_on_family(orbit, &family, Ring::ZZ))
            }
        }
    }
}

/// A family given as `gamma=<element class>`, `all`, `empty`, or as
/// comma-separated subgroup class indices.
pub fn parse_family(g: &crate::fingroup::PermGroup, spec: &str) -> Result<Family> {
    let spec = spec.trim();
    if let Some(c) = spec.strip_prefix("gamma=") {
        let k: usize = c.parse().map_err(|_| Error::parse("family", format!("bad class index {c:?}")))?;
        let gamma = g
            .conjugacy_classes()
            .get(k)
            .ok_or_else(|| Error::parse("family", format!("no element class {k}")))?;
        let f = g.family_of_gamma(gamma)?;
        return Family::new(g, f.members);
    }
    match spec {
        "all" => Family::all(g),
        "empty" | "" => Ok(Family::empty()),
        _ => {
            let members = spec
                .split(',')
                .map(|s| s.trim().parse::<usize>().map_err(|_| Error::parse("family", format!("bad class index {s:?}"))))
                .collect::<Result<Vec<_>>>()?;
            Family::new(g, members)
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
struct ComplexData {
    ranks: Vec<usize>,
    #[serde(default)]
    differentials: Vec<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, Deserialize)]
struct ExplicitData {
    ring: Ring,
    values: Vec<ComplexData>,
    maps: BTreeMap<String, Vec<Vec<Vec<i64>>>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum CoefficientData {
    Tag(String),
    Explicit(ExplicitData),
}

fn matrix(rows: usize, cols: usize, data: &[Vec<i64>], what: &str) -> Result<SparseMatrix> {
    if data.len() != rows || data.iter().any(|r| r.len() != cols) {
        // an all-zero matrix may be written as []
        if data.is_empty() {
            return Ok(SparseMatrix::zeros(rows, cols));
        }
        return Err(Error::parse("coefficients", format!("{what} must be {rows}×{cols}")));
    }
    let trip = data
        .iter()
        .enumerate()
        .flat_map(|(r, row)| row.iter().enumerate().filter(|(_, v)| **v != 0).map(move |(c, v)| (r, c, BigInt::from(*v))));
    Ok(SparseMatrix::from_triplets(rows, cols, trip))
}

/// Parses a coefficient-system file: either a JSON string tag, or
/// `{"ring", "values": [{"ranks", "differentials"}], "maps": {"<morphism id>": [matrix per degree]}}`.
pub fn parse_coefficients(text: &str, orbit: Arc<OrbitCategory>) -> Result<CoefficientSystem> {
    let data: CoefficientData = serde_json::from_str(text).map_err(|e| Error::parse("coefficients", e.to_string()))?;
    let ex = match data {
        CoefficientData::Tag(t) => return CoefficientSystem::from_tag(&t, orbit),
        CoefficientData::Explicit(ex) => ex,
    };
    let c = orbit.category();
    if ex.values.len() != c.object_count() {
        return Err(Error::parse("coefficients", format!("{} values given for {} orbits", ex.values.len(), c.object_count())));
    }
    let values = ex
        .values
        .iter()
        .map(|v| {
            let diffs = (1..v.ranks.len())
                .map(|k| matrix(v.ranks[k - 1], v.ranks[k], v.differentials.get(k - 1).map_or(&[][..], Vec::as_slice), "differential"))
                .collect::<Result<Vec<_>>>()?;
            ChainComplex::new(ex.ring, v.ranks.clone(), diffs)
        })
        .collect::<Result<Vec<_>>>()?;
    let maps = (0..c.morphism_count())
        .map(|m| {
            let comps = ex
                .maps
                .get(&m.to_string())
                .ok_or_else(|| Error::parse("coefficients", format!("no value for morphism {m}")))?;
            let (a, b) = (&values[c.src(m)], &values[c.dst(m)]);
            let len = a.len().max(b.len());
            let components = (0..len)
                .map(|k| matrix(b.rank(k), a.rank(k), comps.get(k).map_or(&[][..], Vec::as_slice), "structure map"))
                .collect::<Result<Vec<_>>>()?;
            Ok(ChainMap { components })
        })
        .collect::<Result<Vec<_>>>()?;
    CoefficientSystem::explicit("explicit", orbit, values, maps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fingroup::named::{cyclic, klein, symmetric};

    fn orbit(g: crate::fingroup::PermGroup) -> Arc<OrbitCategory> {
        Arc::new(OrbitCategory::new(Arc::new(g)).unwrap())
    }

    #[test]
    fn representation_ring_is_a_functor_and_linear() {
        for g in [cyclic(2), cyclic(4), symmetric(3), klein()] {
            let r = CoefficientSystem::representation_ring(orbit(g)).unwrap();
            r.functor.check().unwrap();
            r.check_rep_linear().unwrap();
        }
    }

    #[test]
    fn induction_from_the_trivial_subgroup_is_regular() {
        // Z/2: G/1 → G/G sends the unit of R(1) to 1 + sign
        let r = CoefficientSystem::representation_ring(orbit(cyclic(2))).unwrap();
        let m = r.orbit.category().hom(0, 1)[0];
        let d = r.matrix(m).to_dense();
        assert_eq!((d.rows(), d.cols()), (2, 1));
        assert_eq!(d.column(0), vec![BigInt::from(1), BigInt::from(1)]);
        // S3: the regular character is 1 + sign + 2·standard
        let r = CoefficientSystem::representation_ring(orbit(symmetric(3))).unwrap();
        let m = r.orbit.category().hom(0, 3)[0];
        let mut col: Vec<i64> = r.matrix(m).to_dense().column(0).iter().map(|v| i64::try_from(v).unwrap()).collect();
        col.sort_unstable();
        assert_eq!(col, vec![1, 1, 2]);
    }

    #[test]
    fn zero_on_family_vanishes_exactly_there() {
        let o = orbit(symmetric(3));
        let f = Family::new(o.group(), [0, 2]).unwrap();
        let e = CoefficientSystem::zero_on_family(o.clone(), &f, Ring::ZZ);
        e.functor.check().unwrap();
        assert_eq!(e.nonvanishing_on(&f), None);
        assert_eq!(e.nonvanishing_on(&Family::all(o.group()).unwrap()), Some(1));
    }

    #[test]
    fn tags_and_files() {
        let o = orbit(cyclic(2));
        assert_eq!(CoefficientSystem::from_tag("constant:Q", o.clone()).unwrap().ring(), Ring::QQ);
        assert!(CoefficientSystem::from_tag("zero-on-family:gamma=1", o.clone()).is_ok());
        assert!(CoefficientSystem::from_tag("zero-on-family:1", o.clone()).is_err());
        assert!(CoefficientSystem::from_tag("nonsense", o.clone()).is_err());
        let text = r#"{"ring": "zz", "values": [{"ranks": [0]}, {"ranks": [1]}],
                      "maps": {"0": [[]], "1": [[]], "2": [[]], "3": [[[1]]]}}"#;
        let e = parse_coefficients(text, o.clone()).unwrap();
        assert_eq!(e.value(1).rank(0), 1);
        assert!(parse_coefficients(r#""repring:R""#, o).unwrap().rep.is_some());
    }
}
