//! The fixed battery of small groups used throughout the test suites.

use super::PermGroup;

fn build(name: &str, degree: usize, gens: Vec<Vec<usize>>) -> PermGroup {
    PermGroup::new(name, degree, gens).expect("named group generators are valid")
}

pub fn trivial() -> PermGroup {
    build("1", 1, vec![])
}

/// `ℤ/n` generated by an `n`-cycle.
pub fn cyclic(n: usize) -> PermGroup {
    let gen = (0..n).map(|i| (i + 1) % n).collect();
    build(&format!("Z{n}"), n, vec![gen])
}

pub fn klein() -> PermGroup {
    build("Z2xZ2", 4, vec![vec![1, 0, 3, 2], vec![2, 3, 0, 1]])
}

pub fn symmetric(n: usize) -> PermGroup {
    let mut t: Vec<usize> = (0..n).collect();
    if n > 1 {
        t.swap(0, 1);
    }
    let c = (0..n).map(|i| (i + 1) % n).collect();
    build(&format!("S{n}"), n, vec![t, c])
}

/// Symmetries of an `n`-gon, order `2n`.
pub fn dihedral(n: usize) -> PermGroup {
    let rot = (0..n).map(|i| (i + 1) % n).collect();
    let refl = (0..n).map(|i| (n - i) % n).collect();
    build(&format!("D{n}"), n, vec![rot, refl])
}

pub fn alternating4() -> PermGroup {
    build("A4", 4, vec![vec![1, 2, 0, 3], vec![1, 0, 3, 2]])
}

/// Quaternion group in its regular representation. Point `2u + s` stands
/// for `(−1)^s · u` with `u ∈ {1, i, j, k}`.
pub fn quaternion() -> PermGroup {
    // unit products: table[a][b] = (sign, unit) of u_a · u_b
    const T: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    let left = |unit: usize| -> Vec<usize> {
        (0..8)
            .map(|p| {
                let (u, s) = (p / 2, p % 2);
                let (ts, tu) = T[unit][u];
                2 * tu + (s ^ ts)
            })
            .collect()
    };
    build("Q8", 8, vec![left(1), left(2)])
}

/// Looks a battery group up by its conventional name.
pub fn by_name(name: &str) -> Option<PermGroup> {
    let g = match name {
        "1" | "trivial" => trivial(),
        "Z2" => cyclic(2),
        "Z3" => cyclic(3),
        "Z4" => cyclic(4),
        "Z5" => cyclic(5),
        "Z2xZ2" | "V4" => klein(),
        "S3" => symmetric(3),
        "D4" => dihedral(4),
        "Q8" => quaternion(),
        "A4" => alternating4(),
        "S4" => symmetric(4),
        _ => return None,
    };
    Some(g)
}

/// The acceptance battery: ℤ/2, ℤ/3, ℤ/4, ℤ/2×ℤ/2, S₃, D₄, Q₈, A₄, S₄.
pub fn battery() -> Vec<PermGroup> {
    vec![
        cyclic(2),
        cyclic(3),
        cyclic(4),
        klein(),
        symmetric(3),
        dihedral(4),
        quaternion(),
        alternating4(),
        symmetric(4),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quaternion_relations() {
        let q = quaternion();
        let i = q.id_of(&q.generators()[0]).unwrap();
        let j = q.id_of(&q.generators()[1]).unwrap();
        let minus_one = q.mul(i, i);
        assert_ne!(minus_one, 0);
        assert_eq!(q.mul(j, j), minus_one);
        assert_eq!(q.order_of(minus_one), 2);
        let ij = q.mul(i, j);
        assert_eq!(q.mul(ij, ij), minus_one);
        // exactly one involution
        assert_eq!((0..8).filter(|&x| q.order_of(x) == 2).count(), 1);
    }

    #[test]
    fn lookup() {
        assert_eq!(by_name("S4").unwrap().order(), 24);
        assert!(by_name("M11").is_none());
    }
}
