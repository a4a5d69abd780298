use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{elimination_invariants, SparseMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ring {
    #[serde(rename = "zz")]
    ZZ,
    #[serde(rename = "qq")]
    QQ,
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ring::ZZ => "Z",
            Ring::QQ => "Q",
        })
    }
}

/// A nonnegatively graded complex of free modules with integer
/// differentials. Over ℚ the same matrices are read rationally; only
/// ranks are meaningful there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    ring: Ring,
    ranks: Vec<usize>,
    /// `diffs[k]: C_k → C_{k−1}`, with `diffs[0]` the empty map.
    diffs: Vec<SparseMatrix>,
}

/// One homology group: free rank plus torsion invariant factors (> 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn zero() -> Self {
        HomologyGroup {
            rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        HomologyGroup {
            rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Invariant factors `d₁|d₂|…`, torsion first and `0` for each free
    /// summand.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let mut v = self.torsion.clone();
        v.extend(std::iter::repeat(BigInt::zero()).take(self.rank));
        v
    }

    pub fn factor_string(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.invariant_factors().iter().map(|d| d.to_string()).collect::<Vec<_>>().join("|")
    }

    pub fn pretty(&self, ring: Ring) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push(ring.to_string()),
            r => parts.push(format!("{ring}^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        parts.join(" + ")
    }
}

impl ChainComplex {
    /// `diffs[k−1]` is `d_k: C_k → C_{k−1}` for `k = 1..ranks.len()`.
    pub fn new(ring: Ring, ranks: Vec<usize>, diffs: Vec<SparseMatrix>) -> Result<Self> {
        if ranks.is_empty() {
            if !diffs.is_empty() {
                return Err(Error::InvalidChainData("differentials without modules".into()));
            }
            return Ok(Self::zero(ring));
        }
        if diffs.len() + 1 != ranks.len() {
            return Err(Error::InvalidChainData(format!(
                "{} modules need {} differentials, got {}",
                ranks.len(),
                ranks.len() - 1,
                diffs.len()
            )));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.rows() != ranks[k] || d.cols() != ranks[k + 1] {
                return Err(Error::InvalidChainData(format!("d_{} has the wrong shape", k + 1)));
            }
        }
        let mut all = vec![SparseMatrix::zeros(0, ranks[0])];
        all.extend(diffs);
        let c = ChainComplex {
            ring,
            ranks,
            diffs: all,
        };
        c.check_square_zero()?;
        Ok(c)
    }

    pub(crate) fn new_unchecked(ring: Ring, ranks: Vec<usize>, diffs: Vec<SparseMatrix>) -> Self {
        let mut all = vec![SparseMatrix::zeros(0, ranks.first().copied().unwrap_or(0))];
        all.extend(diffs);
        ChainComplex {
            ring,
            ranks,
            diffs: all,
        }
    }

    pub fn zero(ring: Ring) -> Self {
        ChainComplex {
            ring,
            ranks: Vec::new(),
            diffs: Vec::new(),
        }
    }

    /// The free module of the given rank placed in one degree.
    pub fn concentrated(ring: Ring, rank: usize, degree: usize) -> Self {
        let mut ranks = vec![0; degree + 1];
        ranks[degree] = rank;
        let diffs = (1..=degree).map(|k| SparseMatrix::zeros(ranks[k - 1], ranks[k])).collect();
        Self::new_unchecked(ring, ranks, diffs)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn with_ring(mut self, ring: Ring) -> Self {
        self.ring = ring;
        self
    }

    /// Number of stored degrees (`top + 1`); `0` for the zero complex.
    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn rank(&self, k: usize) -> usize {
        self.ranks.get(k).copied().unwrap_or(0)
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Whether every module is zero.
    pub fn is_zero(&self) -> bool {
        self.ranks.iter().all(|&r| r == 0)
    }

    /// `d_k: C_k → C_{k−1}` (a zero matrix outside the stored range).
    pub fn differential(&self, k: usize) -> SparseMatrix {
        if k == 0 {
            return SparseMatrix::zeros(0, self.rank(0));
        }
        match self.diffs.get(k) {
            Some(d) => d.clone(),
            None => SparseMatrix::zeros(self.rank(k - 1), self.rank(k)),
        }
    }

    pub fn differential_ref(&self, k: usize) -> Option<&SparseMatrix> {
        if k == 0 {
            None
        } else {
            self.diffs.get(k)
        }
    }

    pub fn check_square_zero(&self) -> Result<()> {
        for k in 2..self.diffs.len() {
            if !self.diffs[k - 1].mul(&self.diffs[k]).is_zero() {
                return Err(Error::InvalidChainData(format!("d_{} ∘ d_{} ≠ 0", k - 1, k)));
            }
        }
        Ok(())
    }

    /// Homology in every stored degree.
    pub fn homology(&self) -> Vec<HomologyGroup> {
        let want_torsion = self.ring == Ring::ZZ;
        let inv: Vec<_> = (0..=self.len())
            .map(|k| match self.differential_ref(k) {
                Some(d) => elimination_invariants(d, want_torsion),
                None => elimination_invariants(&SparseMatrix::zeros(0, 0), false),
            })
            .collect();
        (0..self.len())
            .map(|k| HomologyGroup {
                rank: self.ranks[k] - inv[k].rank - inv[k + 1].rank,
                torsion: inv[k + 1].torsion.clone(),
            })
            .collect()
    }

    /// Homology in degrees `0..=top`, padding with zeros.
    pub fn homology_upto(&self, top: usize) -> Vec<HomologyGroup> {
        let mut h = self.homology();
        h.resize(top + 1, HomologyGroup::zero());
        h.truncate(top + 1);
        h
    }

    /// The complex restricted to degrees `0..=top`.
    pub fn truncated(&self, top: usize) -> ChainComplex {
        if self.len() <= top + 1 {
            return self.clone();
        }
        ChainComplex {
            ring: self.ring,
            ranks: self.ranks[..=top].to_vec(),
            diffs: self.diffs[..=top].to_vec(),
        }
    }

    pub fn shifted(&self, by: usize) -> ChainComplex {
        let mut ranks = vec![0; by];
        ranks.extend_from_slice(&self.ranks);
        let diffs = (1..ranks.len())
            .map(|k| {
                if k > by {
                    self.diffs[k - by].clone()
                } else {
                    SparseMatrix::zeros(ranks[k - 1], ranks[k])
                }
            })
            .collect();
        ChainComplex::new_unchecked(self.ring, ranks, diffs)
    }

    /// `(C ⊗ D)_n = ⊕_{p+q=n} C_p ⊗ D_q`, `d = d_C ⊗ 1 + (−1)^p 1 ⊗ d_D`.
    /// Basis of `C_p ⊗ D_q` is `i·rank(D_q) + j`, blocks ordered by `p`.
    pub fn tensor(&self, other: &ChainComplex) -> ChainComplex {
        let ring = if self.ring == Ring::QQ || other.ring == Ring::QQ { Ring::QQ } else { Ring::ZZ };
        if self.is_empty() || other.is_empty() {
            return ChainComplex::zero(ring);
        }
        let top = self.len() + other.len() - 2;
        let offsets = tensor_offsets(self, other, top);
        let ranks: Vec<usize> = (0..=top)
            .map(|n| (0..=n).map(|p| self.rank(p) * other.rank(n - p)).sum())
            .collect();
        let mut diffs = Vec::new();
        for n in 1..=top {
            let mut trip = Vec::new();
            for p in 0..=n {
                let q = n - p;
                let (cp, dq) = (self.rank(p), other.rank(q));
                if cp == 0 || dq == 0 {
                    continue;
                }
                let src = offsets[n][p];
                if p >= 1 {
                    let dc = self.differential(p);
                    let dst = offsets[n - 1][p - 1];
                    let w = other.rank(q);
                    for (r, c, v) in dc.triplets() {
                        for j in 0..dq {
                            trip.push((dst + r * w + j, src + c * dq + j, v.clone()));
                        }
                    }
                }
                if q >= 1 {
                    let dd = other.differential(q);
                    let dst = offsets[n - 1][p];
                    let w = other.rank(q - 1);
                    let sign = if p % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                    for i in 0..cp {
                        for (r, c, v) in dd.triplets() {
                            trip.push((dst + i * w + r, src + i * dq + c, &sign * v));
                        }
                    }
                }
            }
            diffs.push(SparseMatrix::from_triplets(ranks[n - 1], ranks[n], trip));
        }
        ChainComplex::new_unchecked(ring, ranks, diffs)
    }

    /// Direct sum, blocks in argument order.
    pub fn direct_sum(&self, other: &ChainComplex) -> ChainComplex {
        let len = self.len().max(other.len());
        let ranks: Vec<usize> = (0..len).map(|k| self.rank(k) + other.rank(k)).collect();
        let diffs = (1..len)
            .map(|k| {
                let a = self.differential(k);
                let b = other.differential(k);
                let trip: Vec<_> = a.shifted_triplets(0, 0).chain(b.shifted_triplets(self.rank(k - 1), self.rank(k))).collect();
                SparseMatrix::from_triplets(ranks[k - 1], ranks[k], trip)
            })
            .collect();
        ChainComplex::new_unchecked(self.ring, ranks, diffs)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let dense = |m: &SparseMatrix| -> Vec<Vec<String>> {
            let d = m.to_dense();
            (0..d.rows()).map(|r| d.row(r).iter().map(|v| v.to_string()).collect()).collect()
        };
        serde_json::json!({
            "ring": self.ring,
            "ranks": self.ranks,
            "differentials": (1..self.len()).map(|k| dense(&self.diffs[k])).collect::<Vec<_>>(),
        })
    }
}

pub(crate) fn tensor_offsets(a: &ChainComplex, b: &ChainComplex, top: usize) -> Vec<Vec<usize>> {
    (0..=top)
        .map(|n| {
            let mut acc = 0;
            (0..=n)
                .map(|p| {
                    let o = acc;
                    acc += a.rank(p) * b.rank(n - p);
                    o
                })
                .collect()
        })
        .collect()
}

/// A degreewise family of matrices `f_k: A_k → B_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    pub components: Vec<SparseMatrix>,
}

impl ChainMap {
    pub fn component(&self, k: usize, source: &ChainComplex, target: &ChainComplex) -> SparseMatrix {
        self.components
            .get(k)
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zeros(target.rank(k), source.rank(k)))
    }

    pub fn identity(c: &ChainComplex) -> ChainMap {
        ChainMap {
            components: c.ranks().iter().map(|&r| SparseMatrix::identity(r)).collect(),
        }
    }

    pub fn zero(source: &ChainComplex, target: &ChainComplex) -> ChainMap {
        let len = source.len().max(target.len());
        ChainMap {
            components: (0..len).map(|k| SparseMatrix::zeros(target.rank(k), source.rank(k))).collect(),
        }
    }

    /// Checks shapes and `f∘d = d∘f`.
    pub fn check(&self, source: &ChainComplex, target: &ChainComplex) -> Result<()> {
        let len = source.len().max(target.len());
        for k in 0..len {
            let f = self.component(k, source, target);
            if f.rows() != target.rank(k) || f.cols() != source.rank(k) {
                return Err(Error::InvalidChainData(format!("chain map component {k} has the wrong shape")));
            }
            if k >= 1 {
                let lhs = self.component(k - 1, source, target).mul(&source.differential(k));
                let rhs = target.differential(k).mul(&f);
                if lhs != rhs {
                    return Err(Error::InvalidChainData(format!("chain map does not commute in degree {k}")));
                }
            }
        }
        Ok(())
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &ChainMap, a: &ChainComplex, b: &ChainComplex, c: &ChainComplex) -> ChainMap {
        let len = a.len().max(c.len());
        ChainMap {
            components: (0..len)
                .map(|k| self.component(k, b, c).mul(&first.component(k, a, b)))
                .collect(),
        }
    }

    /// `f ⊗ g: A ⊗ C → B ⊗ D` in the basis of [`ChainComplex::tensor`].
    pub fn tensor(
        f: &ChainMap,
        g: &ChainMap,
        a: &ChainComplex,
        b: &ChainComplex,
        c: &ChainComplex,
        d: &ChainComplex,
    ) -> ChainMap {
        if a.is_empty() || c.is_empty() || b.is_empty() || d.is_empty() {
            return ChainMap { components: Vec::new() };
        }
        let top_s = a.len() + c.len() - 2;
        let top_t = b.len() + d.len() - 2;
        let top = top_s.max(top_t);
        let so = tensor_offsets(a, c, top);
        let to = tensor_offsets(b, d, top);
        let src = a.tensor(c);
        let tgt = b.tensor(d);
        let mut comps = Vec::new();
        for n in 0..=top {
            let mut trip = Vec::new();
            for p in 0..=n {
                let q = n - p;
                if a.rank(p) * c.rank(q) == 0 || b.rank(p) * d.rank(q) == 0 {
                    continue;
                }
                let fp = f.component(p, a, b);
                let gq = g.component(q, c, d);
                let (cw, dw) = (c.rank(q), d.rank(q));
                for (r1, c1, v1) in fp.triplets() {
                    for (r2, c2, v2) in gq.triplets() {
                        trip.push((to[n][p] + r1 * dw + r2, so[n][p] + c1 * cw + c2, v1 * v2));
                    }
                }
            }
            comps.push(SparseMatrix::from_triplets(tgt.rank(n), src.rank(n), trip));
        }
        ChainMap { components: comps }
    }
}

/// `Cone(f)_n = A_{n−1} ⊕ B_n`, `d(a, b) = (−d a, f a + d b)`.
pub fn mapping_cone(f: &ChainMap, a: &ChainComplex, b: &ChainComplex) -> ChainComplex {
    let ring = if a.ring() == Ring::QQ || b.ring() == Ring::QQ { Ring::QQ } else { Ring::ZZ };
    let len = (a.len() + 1).max(b.len());
    let ranks: Vec<usize> = (0..len).map(|n| if n == 0 { 0 } else { a.rank(n - 1) } + b.rank(n)).collect();
    let diffs = (1..len)
        .map(|n| {
            let off_src = if n >= 1 { a.rank(n - 1) } else { 0 };
            let off_dst = if n >= 2 { a.rank(n - 2) } else { 0 };
            let mut trip: Vec<(usize, usize, BigInt)> = Vec::new();
            if n >= 2 {
                for (r, c, v) in a.differential(n - 1).triplets() {
                    trip.push((r, c, -v));
                }
            }
            for (r, c, v) in f.component(n - 1, a, b).triplets() {
                trip.push((off_dst + r, c, v.clone()));
            }
            for (r, c, v) in b.differential(n).triplets() {
                trip.push((off_dst + r, off_src + c, v.clone()));
            }
            SparseMatrix::from_triplets(ranks[n - 1], ranks[n], trip)
        })
        .collect();
    ChainComplex::new_unchecked(ring, ranks, diffs)
}

/// Whether `f` induces isomorphisms on homology in degrees `lo..=hi`,
/// tested as vanishing of the cone's homology in `lo..=hi+1`.
pub fn quasi_iso_in_range(f: &ChainMap, a: &ChainComplex, b: &ChainComplex, lo: usize, hi: usize) -> bool {
    let cone = mapping_cone(f, a, b);
    let h = cone.homology_upto(hi + 1);
    h[lo..=hi + 1].iter().all(HomologyGroup::is_zero)
}

/// Whether two homology tables agree in degrees `0..=top`.
pub fn same_homology_upto(a: &[HomologyGroup], b: &[HomologyGroup], top: usize) -> bool {
    (0..=top).all(|k| {
        let z = HomologyGroup::zero();
        a.get(k).unwrap_or(&z) == b.get(k).unwrap_or(&z)
    })
}

/// Ranks only (for comparisons over ℚ).
pub fn ranks_of(h: &[HomologyGroup]) -> Vec<usize> {
    h.iter().map(|g| g.rank).collect()
}
