use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficients of the `m`-th cyclotomic polynomial, constant term first.
pub fn cyclotomic_polynomial(m: usize) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&m) {
        return p.clone();
    }
    assert!(m >= 1, "conductor must be positive");
    // x^m − 1 divided by Φ_d for every proper divisor d
    let mut num = vec![0i64; m + 1];
    num[0] = -1;
    num[m] = 1;
    for d in (1..m).filter(|d| m % d == 0) {
        let phi = cyclotomic_polynomial(d);
        num = exact_divide(&num, &phi);
    }
    let p = Arc::new(num);
    cache.lock().unwrap().insert(m, p.clone());
    p
}

fn exact_divide(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut q = vec![0i64; rem.len() - dd];
    for k in (0..q.len()).rev() {
        let c = rem[k + dd];
        q[k] = c;
        for (i, &d) in den.iter().enumerate() {
            rem[k + i] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

/// An element of `ℚ(ζ_m)` in the power basis `1, ζ, …, ζ^{φ(m)−1}`.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    conductor: usize,
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    /// Reduces an arbitrary polynomial in `ζ_m` to canonical form.
    pub fn from_poly(conductor: usize, poly: Vec<BigRational>) -> Self {
        let phi = cyclotomic_polynomial(conductor);
        let deg = phi.len() - 1;
        // first fold with ζ^m = 1, then reduce by the monic Φ_m
        let mut p = vec![BigRational::zero(); conductor.max(deg)];
        for (i, c) in poly.into_iter().enumerate() {
            p[i % conductor] += c;
        }
        for k in (deg..p.len()).rev() {
            if p[k].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut p[k]);
            for (i, &d) in phi.iter().enumerate().take(deg) {
                if d != 0 {
                    p[k - deg + i] -= &c * BigRational::from_integer(BigInt::from(d));
                }
            }
        }
        p.truncate(deg);
        Cyclotomic { conductor, coeffs: p }
    }

    pub fn zero(conductor: usize) -> Self {
        Self::from_poly(conductor, Vec::new())
    }

    pub fn rational(conductor: usize, q: BigRational) -> Self {
        Self::from_poly(conductor, vec![q])
    }

    pub fn integer(conductor: usize, n: i64) -> Self {
        Self::rational(conductor, BigRational::from_integer(BigInt::from(n)))
    }

    /// `ζ_m^k`.
    pub fn root(conductor: usize, k: usize) -> Self {
        let mut p = vec![BigRational::zero(); k % conductor + 1];
        p[k % conductor] = BigRational::one();
        Self::from_poly(conductor, p)
    }

    pub fn conductor(&self) -> usize {
        self.conductor
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if self.coeffs.iter().skip(1).all(Zero::is_zero) {
            Some(self.coeffs.first().cloned().unwrap_or_else(BigRational::zero))
        } else {
            None
        }
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.to_rational().filter(|q| q.is_integer()).map(|q| q.to_integer())
    }

    /// Image under `ζ ↦ ζ^k` (an automorphism when `gcd(k, m) = 1`).
    pub fn galois(&self, k: usize) -> Self {
        let m = self.conductor;
        let mut p = vec![BigRational::zero(); m];
        for (i, c) in self.coeffs.iter().enumerate() {
            p[(i * k) % m] += c;
        }
        Self::from_poly(m, p)
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        self.galois(self.conductor - 1)
    }

    /// The same number written over a multiple of the conductor.
    pub fn lift(&self, conductor: usize) -> Self {
        assert_eq!(conductor % self.conductor, 0, "conductor must be a multiple");
        if conductor == self.conductor {
            return self.clone();
        }
        let step = conductor / self.conductor;
        let mut p = vec![BigRational::zero(); conductor];
        for (i, c) in self.coeffs.iter().enumerate() {
            p[i * step] += c;
        }
        Self::from_poly(conductor, p)
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        let m = self.conductor.lcm(&other.conductor);
        (self.lift(m), other.lift(m))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        let coeffs = a.coeffs.iter().zip(b.coeffs.iter()).map(|(x, y)| x + y).collect();
        Cyclotomic {
            conductor: a.conductor,
            coeffs,
        }
    }

    pub fn neg(&self) -> Self {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|x| -x).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        let mut p = vec![BigRational::zero(); a.coeffs.len() + b.coeffs.len()];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    p[i + j] += x * y;
                }
            }
        }
        Self::from_poly(a.conductor, p)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|x| x * q).collect(),
        }
    }

    pub fn scale_int(&self, n: &BigInt) -> Self {
        self.scale(&BigRational::from_integer(n.clone()))
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.common(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.to_rational() {
            return write!(f, "{q}");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let a = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = if a.is_one() && i > 0 { String::new() } else { format!("{a}") };
            match i {
                0 => write!(f, "{mag}")?,
                1 if mag.is_empty() => write!(f, "E({})", self.conductor)?,
                1 => write!(f, "{mag}*E({})", self.conductor)?,
                _ if mag.is_empty() => write!(f, "E({})^{i}", self.conductor)?,
                _ => write!(f, "{mag}*E({})^{i}", self.conductor)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(105).iter().map(|c| c.abs()).max(), Some(2));
    }

    #[test]
    fn root_sums_vanish() {
        for m in 2..13 {
            let s = (0..m).fold(Cyclotomic::zero(m), |acc, k| acc.add(&Cyclotomic::root(m, k)));
            assert!(s.is_zero(), "m = {m}");
        }
        // ω + ω² = −1
        let w = Cyclotomic::root(3, 1);
        assert_eq!(w.add(&w.mul(&w)), Cyclotomic::integer(3, -1));
        assert_eq!(w.conj(), Cyclotomic::root(3, 2));
    }

    #[test]
    fn lifting_preserves_value() {
        let i = Cyclotomic::root(4, 1);
        assert_eq!(i.mul(&i), Cyclotomic::integer(4, -1));
        assert_eq!(i.lift(12), Cyclotomic::root(12, 3));
        assert_eq!(Cyclotomic::root(3, 1), Cyclotomic::root(6, 2));
        assert_eq!(Cyclotomic::root(2, 1).to_rational(), Some(q(-1)));
    }

    #[test]
    fn display() {
        assert_eq!(Cyclotomic::integer(5, 3).to_string(), "3");
        assert_eq!(Cyclotomic::root(3, 1).to_string(), "E(3)");
        assert_eq!(Cyclotomic::root(3, 2).to_string(), "-1 - E(3)");
    }
}
