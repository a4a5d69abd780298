use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::cyclotomic::Cyclotomic;
use super::table::{character_table, CharacterTable};
use crate::error::{Error, Result};
use crate::fingroup::{PermGroup, Subgroup};
use crate::linalg::{integer_kernel, IntMatrix, QMatrix};

/// An element of `R(G)` in the basis of irreducible characters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RElement(pub Vec<BigInt>);

impl RElement {
    pub fn zero(rank: usize) -> Self {
        RElement(vec![BigInt::zero(); rank])
    }

    pub fn unit(rank: usize) -> Self {
        Self::basis(rank, 0)
    }

    pub fn basis(rank: usize, i: usize) -> Self {
        let mut v = vec![BigInt::zero(); rank];
        v[i] = BigInt::one();
        RElement(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Class function of this virtual character.
    pub fn character(&self, t: &CharacterTable) -> Vec<Cyclotomic> {
        (0..t.class_count()).map(|k| character_value(t, self, k)).collect()
    }
}

impl fmt::Display for RElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| if c.is_one() { format!("[χ{i}]") } else { format!("{c}·[χ{i}]") })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + ").replace("+ -", "- "))
        }
    }
}

pub fn character_value(t: &CharacterTable, eta: &RElement, class: usize) -> Cyclotomic {
    let mut acc = Cyclotomic::zero(t.conductor);
    for (c, chi) in eta.0.iter().zip(&t.irreducibles) {
        if !c.is_zero() {
            acc = acc.add(&chi[class].scale_int(c));
        }
    }
    acc
}

/// Membership in `(γ) = {η : Tr η(g) = 0 for g ∈ γ}`.
pub fn in_gamma_ideal(t: &CharacterTable, eta: &RElement, gamma: usize) -> bool {
    character_value(t, eta, gamma).is_zero()
}

/// Product in `R(G)`, decomposed through inner products.
pub fn multiply(t: &CharacterTable, a: &RElement, b: &RElement) -> Result<RElement> {
    let (fa, fb) = (a.character(t), b.character(t));
    let prod: Vec<Cyclotomic> = fa.iter().zip(&fb).map(|(x, y)| x.mul(y)).collect();
    Ok(RElement(t.decompose(&prod)?))
}

/// Rational matrix of the evaluation `R(G) → ℚ(ζ)` at a class, one row per
/// power-basis coordinate, scaled to integer entries.
fn evaluation_rows(t: &CharacterTable, class: usize) -> Vec<Vec<BigInt>> {
    let phi = Cyclotomic::zero(t.conductor).coeffs().len();
    let mut rows = Vec::new();
    for coord in 0..phi {
        let row: Vec<BigRational> = t.irreducibles.iter().map(|chi| chi[class].lift(t.conductor).coeffs()[coord].clone()).collect();
        let den = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        rows.push(row.iter().map(|q| (q * BigRational::from_integer(den.clone())).to_integer()).collect());
    }
    rows
}

/// A ℤ-basis of the ideal `(γ)`.
pub fn gamma_ideal_basis(t: &CharacterTable, gamma: usize) -> Vec<RElement> {
    let rows = evaluation_rows(t, gamma);
    integer_kernel(&IntMatrix::from_rows(&rows)).into_iter().map(RElement).collect()
}

/// A subgroup as a group in its own right, with its character table and the
/// translation of ambient element ids.
#[derive(Clone, Debug)]
pub struct SubgroupTable {
    pub group: PermGroup,
    pub table: CharacterTable,
    local: HashMap<usize, usize>,
}

impl SubgroupTable {
    pub fn new(g: &PermGroup, h: &Subgroup) -> Result<Self> {
        let group = g.subgroup_as_group(h, format!("{}-sub{}", g.name(), h.order()));
        let table = character_table(&group)?;
        let local = h
            .members()
            .iter()
            .map(|&x| (x, group.id_of(g.element(x)).expect("member of the subgroup")))
            .collect();
        Ok(SubgroupTable { group, table, local })
    }

    /// Class (in the subgroup) of an ambient element lying in it.
    pub fn class_of(&self, x: usize) -> usize {
        self.group.class_of(self.local[&x])
    }

    /// Ambient id of the representative of a subgroup class.
    pub fn ambient_representative(&self, class: usize, g: &PermGroup) -> usize {
        let rep = self.group.conjugacy_classes()[class].representative;
        g.id_of(self.group.element(rep)).expect("subgroup element lies in the group")
    }
}

/// `res^G_H` with the subgroup data needed downstream.
#[derive(Clone, Debug)]
pub struct Restriction {
    /// Rows: irreducibles of H; columns: irreducibles of G.
    pub matrix: IntMatrix,
    pub sub: SubgroupTable,
}

pub fn restriction(g: &PermGroup, tg: &CharacterTable, h: &Subgroup) -> Result<Restriction> {
    let sub = SubgroupTable::new(g, h)?;
    let th = &sub.table;
    let reps: Vec<usize> = (0..th.class_count()).map(|l| g.class_of(sub.ambient_representative(l, g))).collect();
    let mut matrix = IntMatrix::zeros(th.len(), tg.len());
    for (j, chi) in tg.irreducibles.iter().enumerate() {
        let restricted: Vec<Cyclotomic> = reps.iter().map(|&k| chi[k].clone()).collect();
        let mult = th.decompose(&restricted)?;
        for (i, m) in mult.into_iter().enumerate() {
            if m.is_negative() {
                return Err(Error::CharacterTable("restriction has a negative multiplicity".into()));
            }
            matrix[(i, j)] = m;
        }
    }
    Ok(Restriction { matrix, sub })
}

/// The matrix of `R(G) → R(H)`.
pub fn restriction_matrix(g: &PermGroup, h: &Subgroup) -> Result<IntMatrix> {
    let tg = character_table(g)?;
    Ok(restriction(g, &tg, h)?.matrix)
}

/// Checks that restriction is a unital ring map on all pairs of irreducibles.
pub fn check_restriction_is_ring_map(tg: &CharacterTable, res: &Restriction) -> Result<()> {
    let th = &res.sub.table;
    let apply = |e: &RElement| RElement(res.matrix.mul_vec(&e.0));
    if apply(&RElement::unit(tg.len())) != RElement::unit(th.len()) {
        return Err(Error::CharacterTable("restriction does not preserve the unit".into()));
    }
    for a in 0..tg.len() {
        for b in a..tg.len() {
            let (ea, eb) = (RElement::basis(tg.len(), a), RElement::basis(tg.len(), b));
            let lhs = apply(&multiply(tg, &ea, &eb)?);
            let rhs = multiply(th, &apply(&ea), &apply(&eb))?;
            if lhs != rhs {
                return Err(Error::CharacterTable(format!("restriction is not multiplicative on ({a}, {b})")));
            }
        }
    }
    Ok(())
}

/// An element `η` with `η|_H = 0` and `Tr η(γ) ≠ 0`.
#[derive(Clone, Debug, Serialize)]
pub struct SegalWitness {
    pub eta: RElement,
    pub value: String,
}

fn normalize_sign(v: Vec<BigInt>) -> Vec<BigInt> {
    match v.iter().find(|c| !c.is_zero()) {
        Some(c) if c.is_negative() => v.into_iter().map(|c| -c).collect(),
        _ => v,
    }
}

/// First lattice vector (smallest ℓ¹ norm) on which the γ-evaluation is
/// nonzero, if any.
fn witness_in_lattice(t: &CharacterTable, lattice: Vec<Vec<BigInt>>, gamma: usize) -> Option<(RElement, Cyclotomic)> {
    let mut candidates: Vec<Vec<BigInt>> = lattice.into_iter().map(normalize_sign).collect();
    candidates.sort_by_key(|v| v.iter().map(|c| c.abs()).sum::<BigInt>());
    candidates.into_iter().find_map(|v| {
        let eta = RElement(v);
        let value = character_value(t, &eta, gamma);
        (!value.is_zero()).then_some((eta, value))
    })
}

/// Searches the kernel lattice of restriction to `h` for an element not
/// in `(γ)`.
pub fn segal_element(g: &PermGroup, h: &Subgroup, gamma: usize) -> Result<SegalWitness> {
    let tg = character_table(g)?;
    segal_element_with(g, &tg, h, gamma)
}

pub fn segal_element_with(g: &PermGroup, tg: &CharacterTable, h: &Subgroup, gamma: usize) -> Result<SegalWitness> {
    let res = restriction(g, tg, h)?;
    let kernel = integer_kernel(&res.matrix);
    if let Some((eta, value)) = witness_in_lattice(tg, kernel, gamma) {
        return Ok(SegalWitness {
            eta,
            value: value.to_string(),
        });
    }
    let meets = g.conjugacy_classes()[gamma].members.iter().any(|&x| h.contains(x));
    if meets {
        Err(Error::NoSuchElement(format!(
            "subgroup of order {} meets class {gamma}, so every η with η|H = 0 vanishes there",
            h.order()
        )))
    } else {
        Err(Error::NoSuchElement(format!(
            "theorem violation: subgroup of order {} misses class {gamma} yet the restriction kernel lies in (γ)",
            h.order()
        )))
    }
}

/// An `R(G)`-module described by what is needed to decide vanishing after
/// localization.
#[derive(Clone, Debug)]
pub enum RModule {
    /// `R(H)` through restriction; its annihilator is the restriction kernel.
    Restricted(Subgroup),
    /// A module with explicitly known annihilator generators.
    Annihilator(Vec<RElement>),
    /// No annihilator data available.
    Opaque(String),
}

#[derive(Clone, Debug, Serialize)]
pub struct VanishingReport {
    pub vanishes: bool,
    pub witness: Option<RElement>,
}

/// `M_(γ) = 0` is certified by an annihilator element outside `(γ)`.
pub fn module_vanishes_localized(g: &PermGroup, m: &RModule, gamma: usize) -> Result<VanishingReport> {
    let tg = character_table(g)?;
    let lattice = match m {
        RModule::Restricted(h) => integer_kernel(&restriction(g, &tg, h)?.matrix),
        RModule::Annihilator(gens) => gens.iter().map(|e| e.0.clone()).collect(),
        RModule::Opaque(_) => return Err(Error::UnsupportedModule),
    };
    let found = witness_in_lattice(&tg, lattice, gamma);
    Ok(VanishingReport {
        vanishes: found.is_some(),
        witness: found.map(|(e, _)| e),
    })
}

/// Partition of element classes into rational classes (`g ~ g^k`,
/// `gcd(k, ord g) = 1`); these index the field factors of `R(G) ⊗ ℚ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalClasses {
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
}

impl RationalClasses {
    /// Dimension over ℚ of each field factor.
    pub fn factor_dimensions(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

pub fn rational_class_decomposition(g: &PermGroup) -> RationalClasses {
    let r = g.conjugacy_classes().len();
    let mut class_of = vec![usize::MAX; r];
    let mut classes = Vec::new();
    for k in 0..r {
        if class_of[k] != usize::MAX {
            continue;
        }
        let x = g.conjugacy_classes()[k].representative;
        let o = g.order_of(x);
        let mut members: Vec<usize> = (1..=o.max(1))
            .filter(|e| e.gcd(&o) == 1)
            .map(|e| g.class_of(g.power(x, e)))
            .collect();
        members.sort_unstable();
        members.dedup();
        for &c in &members {
            class_of[c] = classes.len();
        }
        classes.push(members);
    }
    RationalClasses { classes, class_of }
}

/// Primitive idempotents of `R(G) ⊗ ℚ` in the irreducible basis, one per
/// rational class: `e_Γ = Σ_χ |G|⁻¹ Σ_{k∈Γ} |C_k| conj χ(g_k) · χ`.
pub fn rational_idempotents(t: &CharacterTable, rc: &RationalClasses) -> Result<Vec<Vec<BigRational>>> {
    rc.classes
        .iter()
        .map(|members| {
            t.irreducibles
                .iter()
                .map(|chi| {
                    let mut acc = Cyclotomic::zero(t.conductor);
                    for &k in members {
                        acc = acc.add(&chi[k].conj().scale_int(&BigInt::from(t.class_sizes[k])));
                    }
                    acc.scale(&BigRational::new(BigInt::one(), BigInt::from(t.order)))
                        .to_rational()
                        .ok_or_else(|| Error::CharacterTable("idempotent coefficient is irrational".into()))
                })
                .collect()
        })
        .collect()
}

/// Matrix (in the irreducible basis) of multiplication by the class
/// function that is 1 on the marked classes and 0 elsewhere. Rational when
/// the marked set is closed under the Galois action.
pub fn indicator_multiplication(t: &CharacterTable, marked: &[bool]) -> Result<QMatrix> {
    let n = t.len();
    let mut m = QMatrix::zeros(n, n);
    for a in 0..n {
        let f: Vec<Cyclotomic> = (0..t.class_count())
            .map(|k| if marked[k] { t.irreducibles[a][k].clone() } else { Cyclotomic::zero(t.conductor) })
            .collect();
        for b in 0..n {
            m.data[b][a] = t
                .inner(&f, &t.irreducibles[b])
                .to_rational()
                .ok_or_else(|| Error::CharacterTable("marked classes are not Galois stable".into()))?;
        }
    }
    Ok(m)
}

/// Induced class function `Ind_K^H` of a class function on `K ≤ H`
/// (both subgroups of an ambient group), given by its values on `K`.
pub fn induce(g: &PermGroup, k: &Subgroup, h: &Subgroup, value_on_k: &dyn Fn(usize) -> Cyclotomic, at: usize) -> Cyclotomic {
    let mut acc = Cyclotomic::zero(1);
    for &y in h.members() {
        let c = g.conjugate(at, y);
        if k.contains(c) {
            acc = acc.add(&value_on_k(c));
        }
    }
    acc.scale(&BigRational::new(BigInt::one(), BigInt::from(k.order())))
}

/// A map of `R(G) ⊗ ℚ`-modules, given factor by factor over the rational
/// classes.
#[derive(Clone, Debug)]
pub struct RModuleMap {
    pub factors: Vec<FactorMap>,
}

/// `matrix` is `target_dim × source_dim`.
#[derive(Clone, Debug)]
pub struct FactorMap {
    pub source_dim: usize,
    pub target_dim: usize,
    pub matrix: QMatrix,
}

impl FactorMap {
    pub fn is_iso(&self) -> bool {
        self.source_dim == self.target_dim && self.matrix.rank() == self.source_dim
    }
}

impl RModuleMap {
    pub fn identity(dims: &[usize]) -> Self {
        RModuleMap {
            factors: dims
                .iter()
                .map(|&d| FactorMap {
                    source_dim: d,
                    target_dim: d,
                    matrix: QMatrix::identity(d),
                })
                .collect(),
        }
    }

    pub fn zero(source: &[usize], target: &[usize]) -> Self {
        RModuleMap {
            factors: source
                .iter()
                .zip(target)
                .map(|(&s, &t)| FactorMap {
                    source_dim: s,
                    target_dim: t,
                    matrix: QMatrix::zeros(t, s),
                })
                .collect(),
        }
    }

    pub fn check(&self) -> Result<()> {
        for (i, f) in self.factors.iter().enumerate() {
            if f.matrix.rows != f.target_dim || f.matrix.cols != f.source_dim {
                return Err(Error::StructureMismatch(format!("factor {i} has inconsistent dimensions")));
            }
        }
        Ok(())
    }

    /// Isomorphism before localization: every factor is invertible.
    pub fn is_iso(&self) -> bool {
        self.factors.iter().all(FactorMap::is_iso)
    }
}

#[derive(Clone, Debug)]
pub struct LocalizedMap {
    pub rational_class: usize,
    pub map: FactorMap,
    pub is_iso: bool,
}

/// Localization at the prime of `γ`: projection to its rational-class factor.
pub fn rational_localize_map(phi: &RModuleMap, rc: &RationalClasses, gamma: usize) -> LocalizedMap {
    let rational_class = rc.class_of[gamma];
    let map = phi.factors[rational_class].clone();
    LocalizedMap {
        rational_class,
        is_iso: map.is_iso(),
        map,
    }
}
