use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::Value;

use super::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::fingroup::PermGroup;

/// Largest group order handled by the eigenvector method; larger groups
/// need a table in their group file.
pub const TABLE_ORDER_BOUND: usize = 2000;

/// Complex character table with exact cyclotomic values.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub order: usize,
    pub conductor: usize,
    pub class_sizes: Vec<usize>,
    /// Class of the inverse of each class representative.
    pub inverse_class: Vec<usize>,
    /// `irreducibles[i][k]`: value of the i-th irreducible on class `k`.
    pub irreducibles: Vec<Vec<Cyclotomic>>,
    pub degrees: Vec<usize>,
}

impl CharacterTable {
    pub fn class_count(&self) -> usize {
        self.class_sizes.len()
    }

    pub fn len(&self) -> usize {
        self.irreducibles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreducibles.is_empty()
    }

    /// `⟨f, g⟩ = |G|⁻¹ Σ_k |C_k| f(k) conj(g(k))` for class functions.
    pub fn inner(&self, f: &[Cyclotomic], g: &[Cyclotomic]) -> Cyclotomic {
        let mut acc = Cyclotomic::zero(self.conductor);
        for k in 0..self.class_count() {
            acc = acc.add(&f[k].mul(&g[k].conj()).scale_int(&BigInt::from(self.class_sizes[k])));
        }
        acc.scale(&BigRational::new(BigInt::one(), BigInt::from(self.order)))
    }

    /// Multiplicities of the irreducibles in a virtual character.
    pub fn decompose(&self, f: &[Cyclotomic]) -> Result<Vec<BigInt>> {
        self.irreducibles
            .iter()
            .map(|chi| {
                self.inner(f, chi)
                    .to_integer()
                    .ok_or_else(|| Error::CharacterTable("class function is not a virtual character".into()))
            })
            .collect()
    }

    /// Exact row and column orthogonality plus `Σ deg² = |G|`.
    pub fn check_orthogonality(&self) -> Result<()> {
        let r = self.class_count();
        if self.len() != r {
            return Err(Error::CharacterTable(format!("{} irreducibles for {} classes", self.len(), r)));
        }
        for i in 0..r {
            for j in 0..r {
                let expect = Cyclotomic::integer(self.conductor, (i == j) as i64);
                if self.inner(&self.irreducibles[i], &self.irreducibles[j]) != expect {
                    return Err(Error::CharacterTable(format!("rows {i} and {j} are not orthonormal")));
                }
            }
        }
        for k in 0..r {
            for l in 0..r {
                let mut acc = Cyclotomic::zero(self.conductor);
                for chi in &self.irreducibles {
                    acc = acc.add(&chi[k].mul(&chi[l].conj()));
                }
                let expect = if k == l { (self.order / self.class_sizes[k]) as i64 } else { 0 };
                if acc != Cyclotomic::integer(self.conductor, expect) {
                    return Err(Error::CharacterTable(format!("columns {k} and {l} fail orthogonality")));
                }
            }
        }
        let total: usize = self.degrees.iter().map(|d| d * d).sum();
        if total != self.order {
            return Err(Error::CharacterTable(format!("sum of squared degrees is {total}, not {}", self.order)));
        }
        Ok(())
    }
}

/// The character table of `g`: computed when `|G|` is within bound,
/// otherwise read from the table supplied with the group.
pub fn character_table(g: &PermGroup) -> Result<CharacterTable> {
    if g.order() <= TABLE_ORDER_BOUND {
        let t = dixon(g)?;
        t.check_orthogonality()?;
        return Ok(t);
    }
    match g.supplied_character_table() {
        Some(_) => supplied_table(g),
        None => Err(Error::GroupTooLarge {
            order: g.order(),
            bound: TABLE_ORDER_BOUND,
        }),
    }
}

fn class_data(g: &PermGroup) -> (Vec<usize>, Vec<usize>) {
    let classes = g.conjugacy_classes();
    let sizes = classes.iter().map(|c| c.size()).collect();
    let inverse = classes.iter().map(|c| g.class_of(g.inv(c.representative))).collect();
    (sizes, inverse)
}

/// Reads and validates the table stored in the group file.
pub fn supplied_table(g: &PermGroup) -> Result<CharacterTable> {
    let s = g
        .supplied_character_table()
        .ok_or_else(|| Error::CharacterTable("no character table supplied".into()))?;
    let (class_sizes, inverse_class) = class_data(g);
    let r = class_sizes.len();
    if s.classes.len() != r {
        return Err(Error::CharacterTable(format!("{} classes supplied, group has {r}", s.classes.len())));
    }
    let mut column_of_class = vec![usize::MAX; r];
    for (col, perm) in s.classes.iter().enumerate() {
        let id = g
            .id_of(perm)
            .ok_or_else(|| Error::CharacterTable(format!("class representative {perm:?} is not in the group")))?;
        column_of_class[g.class_of(id)] = col;
    }
    if column_of_class.contains(&usize::MAX) {
        return Err(Error::CharacterTable("supplied representatives miss a class".into()));
    }
    let conductor = s.conductor.unwrap_or_else(|| g.exponent());
    let mut irreducibles = Vec::new();
    for row in &s.irreducibles {
        if row.len() != r {
            return Err(Error::CharacterTable("irreducible row has the wrong length".into()));
        }
        let values = (0..r)
            .map(|k| {
                let coeffs = row[column_of_class[k]].iter().map(parse_rational).collect::<Result<Vec<_>>>()?;
                Ok(Cyclotomic::from_poly(conductor, coeffs))
            })
            .collect::<Result<Vec<_>>>()?;
        irreducibles.push(values);
    }
    let degrees = irreducibles
        .iter()
        .map(|chi| {
            chi[0]
                .to_integer()
                .and_then(|d| usize::try_from(d).ok())
                .ok_or_else(|| Error::CharacterTable("degree is not a positive integer".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let t = CharacterTable {
        order: g.order(),
        conductor,
        class_sizes,
        inverse_class,
        irreducibles,
        degrees,
    };
    t.check_orthogonality()?;
    Ok(t)
}

fn parse_rational(v: &Value) -> Result<BigRational> {
    let bad = || Error::CharacterTable(format!("cannot read coefficient {v}"));
    match v {
        Value::Number(n) => n.as_i64().map(|i| BigRational::from_integer(BigInt::from(i))).ok_or_else(bad),
        Value::String(s) => {
            let (num, den) = s.split_once('/').unwrap_or((s, "1"));
            let num: BigInt = num.trim().parse().map_err(|_| bad())?;
            let den: BigInt = den.trim().parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(num, den))
        }
        _ => Err(bad()),
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn primitive_root(p: u64) -> u64 {
    let mut factors = Vec::new();
    let mut n = p - 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            factors.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        factors.push(n);
    }
    (2..p).find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1)).unwrap_or(1)
}

/// Null space of an `r × c` matrix over `F_p`.
fn kernel_mod(m: &[Vec<u64>], cols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut a: Vec<Vec<u64>> = m.to_vec();
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..cols {
        let Some(pr) = (row..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(row, pr);
        let inv = inv_mod(a[row][c], p);
        for v in a[row].iter_mut() {
            *v = *v * inv % p;
        }
        for i in 0..a.len() {
            if i != row && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..cols {
                    a[i][j] = (a[i][j] + p - f * a[row][j] % p) % p;
                }
            }
        }
        pivots.push(c);
        row += 1;
        if row == a.len() {
            break;
        }
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut x = vec![0u64; cols];
            x[f] = 1;
            for (r, &c) in pivots.iter().enumerate() {
                x[c] = (p - a[r][f]) % p;
            }
            x
        })
        .collect()
}

/// Dixon's method: simultaneous eigenvectors of the class-sum matrices over
/// `F_p` with `p ≡ 1 (mod exponent)`, lifted through eigenvalue
/// multiplicities.
fn dixon(g: &PermGroup) -> Result<CharacterTable> {
    let n = g.order();
    let e = g.exponent();
    let (class_sizes, inverse_class) = class_data(g);
    let r = class_sizes.len();
    let reps: Vec<usize> = g.conjugacy_classes().iter().map(|c| c.representative).collect();
    let p = (1..)
        .map(|k| k * e as u64 + 1)
        .find(|&p| p > 2 * n as u64 + 1 && is_prime(p))
        .expect("primes in arithmetic progressions exist");
    let z = pow_mod(primitive_root(p), (p - 1) / e as u64, p);

    // a[j][i][k] = #{(x, y) : x ∈ C_i, y ∈ C_j, xy = g_k}
    let mut a = vec![vec![vec![0u64; r]; r]; r];
    for (k, &gk) in reps.iter().enumerate() {
        for x in 0..n {
            let y = g.mul(g.inv(x), gk);
            a[g.class_of(y)][g.class_of(x)][k] += 1;
        }
    }

    let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..r)
        .map(|i| {
            let mut v = vec![0u64; r];
            v[i] = 1;
            v
        })
        .collect()];
    for (j, aj) in a.iter().enumerate().skip(1) {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let mut next = Vec::new();
        for space in spaces {
            if space.len() == 1 {
                next.push(space);
                continue;
            }
            // image of the basis under A_j, as columns W' = A_j W
            let aw: Vec<Vec<u64>> = space
                .iter()
                .map(|w| (0..r).map(|i| (0..r).fold(0, |acc, k| (acc + aj[i][k] % p * w[k]) % p)).collect())
                .collect();
            let mut found = 0;
            for lambda in 0..p {
                // rows i, columns basis index b: (A_j − λ) w_b
                let m: Vec<Vec<u64>> = (0..r)
                    .map(|i| space.iter().zip(aw.iter()).map(|(w, x)| (x[i] + p - lambda * w[i] % p) % p).collect())
                    .collect();
                let ker = kernel_mod(&m, space.len(), p);
                if ker.is_empty() {
                    continue;
                }
                found += ker.len();
                let sub = ker
                    .iter()
                    .map(|c| (0..r).map(|i| space.iter().zip(c).fold(0, |acc, (w, &cb)| (acc + w[i] * cb) % p)).collect())
                    .collect();
                next.push(sub);
                if found == space.len() {
                    break;
                }
            }
            if found != space.len() {
                return Err(Error::CharacterTable(format!("class matrix {j} is not diagonalizable mod {p}")));
            }
        }
        spaces = next;
    }
    if spaces.iter().any(|s| s.len() != 1) {
        return Err(Error::CharacterTable("class matrices do not separate the characters".into()));
    }

    let mut irreducibles = Vec::new();
    let mut degrees = Vec::new();
    for space in spaces {
        let v = &space[0];
        let scale = inv_mod(v[0], p);
        let w: Vec<u64> = v.iter().map(|x| x * scale % p).collect();
        let s = (0..r).fold(0, |acc, k| (acc + w[k] * w[inverse_class[k]] % p * inv_mod(class_sizes[k] as u64 % p, p)) % p);
        let d2 = n as u64 % p * inv_mod(s, p) % p;
        let d = (1..=n as u64)
            .take_while(|d| d * d <= n as u64)
            .find(|d| d * d % p == d2)
            .ok_or_else(|| Error::CharacterTable("no admissible degree".into()))?;
        let chi_mod: Vec<u64> = (0..r).map(|k| d * w[k] % p * inv_mod(class_sizes[k] as u64 % p, p) % p).collect();
        let mut values = Vec::with_capacity(r);
        for &gk in &reps {
            let o = g.order_of(gk);
            let step = (e / o) as u64;
            let inv_o = inv_mod(o as u64 % p, p);
            let mut poly = vec![BigRational::zero(); e];
            for j in 0..o {
                let mut m = 0;
                for l in 0..o {
                    let val = chi_mod[g.class_of(g.power(gk, l))];
                    let root = pow_mod(z, (p - 1 - (step * (j * l) as u64) % (p - 1)) % (p - 1), p);
                    m = (m + val * root) % p;
                }
                let m = m * inv_o % p;
                if m > d {
                    return Err(Error::CharacterTable("eigenvalue multiplicity out of range".into()));
                }
                poly[(step as usize * j) % e] += BigRational::from_integer(BigInt::from(m));
            }
            values.push(Cyclotomic::from_poly(e, poly));
        }
        irreducibles.push(values);
        degrees.push(d as usize);
    }

    // degree first, trivial character first among linear ones, then by values
    let mut order: Vec<usize> = (0..irreducibles.len()).collect();
    let key = |i: usize| {
        let trivial = irreducibles[i].iter().all(|v| *v == Cyclotomic::integer(e, 1));
        let vals: Vec<Vec<BigRational>> = irreducibles[i].iter().map(|v| v.coeffs().iter().map(|c| -c).collect()).collect();
        (degrees[i], !trivial, vals)
    };
    order.sort_by_key(|&i| key(i));
    Ok(CharacterTable {
        order: n,
        conductor: e,
        class_sizes,
        inverse_class,
        irreducibles: order.iter().map(|&i| irreducibles[i].clone()).collect(),
        degrees: order.iter().map(|&i| degrees[i]).collect(),
    })
}
