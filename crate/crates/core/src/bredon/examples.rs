//! Small G-simplicial complexes used by the verifiers and their tests.

use std::sync::Arc;

use super::complex::{barycentric_subdivision, equivariant_subdivision, GSimplicialComplex};
use crate::coarsespace::GSet;
use crate::fingroup::named::{cyclic, symmetric};
use crate::fingroup::{PermGroup, Subgroup};

fn build(group: PermGroup, n: usize, simplices: &[Vec<usize>], images: &[Vec<usize>]) -> GSimplicialComplex {
    GSimplicialComplex::new(Arc::new(group), n, simplices, images).expect("example complex is valid")
}

/// A single vertex with the trivial action.
pub fn point(group: Arc<PermGroup>) -> GSimplicialComplex {
    let images = vec![vec![0]; group.generators().len()];
    GSimplicialComplex::new(group, 1, &[vec![0]], &images).expect("point is valid")
}

/// The orbit `G/H` as a discrete complex.
pub fn orbit_points(group: Arc<PermGroup>, h: &Subgroup) -> GSimplicialComplex {
    let (set, _) = GSet::cosets(group.clone(), h);
    let simplices: Vec<Vec<usize>> = (0..set.size()).map(|v| vec![v]).collect();
    GSimplicialComplex::from_action(group, set.size(), &simplices, set.action).expect("orbit is valid")
}

/// Circle on `p = 0, a = 1, q = 2, b = 3` with `ℤ/2` swapping `a` and `b`.
pub fn reflection_circle() -> GSimplicialComplex {
    build(cyclic(2), 4, &[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]], &[vec![0, 3, 2, 1]])
}

/// Suspension of the reflection circle: a 2-sphere reflected across the
/// great circle through `p`, `q` and the poles `4`, `5`.
pub fn reflection_sphere() -> GSimplicialComplex {
    let mut tri = Vec::new();
    for e in [[0, 1], [1, 2], [2, 3], [0, 3]] {
        for pole in [4, 5] {
            tri.push(vec![e[0], e[1], pole]);
        }
    }
    build(cyclic(2), 6, &tri, &[vec![0, 3, 2, 1, 4, 5]])
}

/// One edge whose endpoints are swapped (not regular).
pub fn edge_swap() -> GSimplicialComplex {
    build(cyclic(2), 2, &[vec![0, 1]], &[vec![1, 0]])
}

/// Two points swapped by `ℤ/2`.
pub fn free_pair() -> GSimplicialComplex {
    build(cyclic(2), 2, &[vec![0], vec![1]], &[vec![1, 0]])
}

/// `ℤ/4` rotating a square.
pub fn rotating_square() -> GSimplicialComplex {
    build(cyclic(4), 4, &[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]], &[vec![1, 2, 3, 0]])
}

/// The rotating square coned off at a fixed centre `4`.
pub fn rotating_disk() -> GSimplicialComplex {
    let tri: Vec<Vec<usize>> = (0..4).map(|i| vec![i, (i + 1) % 4, 4]).collect();
    build(cyclic(4), 5, &tri, &[vec![1, 2, 3, 0, 4]])
}

/// `ℤ/4` acting on the reflection circle through its quotient `ℤ/2`.
pub fn z4_reflection_circle() -> GSimplicialComplex {
    build(cyclic(4), 4, &[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]], &[vec![0, 3, 2, 1]])
}

/// `S₃` permuting the vertices of a triangle boundary (not regular).
pub fn s3_triangle_boundary() -> GSimplicialComplex {
    build(symmetric(3), 3, &[vec![0, 1], vec![1, 2], vec![0, 2]], &[vec![1, 0, 2], vec![1, 2, 0]])
}

/// `S₃` permuting the vertices of a filled triangle (not regular).
pub fn s3_triangle() -> GSimplicialComplex {
    build(symmetric(3), 3, &[vec![0, 1, 2]], &[vec![1, 0, 2], vec![1, 2, 0]])
}

/// `S₃` permuting three vertices of the 3-simplex and fixing the fourth;
/// the faces of the boundary listed by `faces` (not regular in general).
pub fn s3_simplex_faces(faces: &[Vec<usize>]) -> GSimplicialComplex {
    build(symmetric(3), 4, faces, &[vec![1, 0, 2, 3], vec![1, 2, 0, 3]])
}

/// Subdivides once when the simplices admit no invariant vertex order.
pub fn ordered(x: GSimplicialComplex) -> GSimplicialComplex {
    match x.invariant_order_key() {
        Some(_) => x,
        None => barycentric_subdivision(&x),
    }
}

/// Labelled regular complexes over `ℤ/2`, `ℤ/4` and `S₃`, with dimension
/// at most 2.
pub fn regular_battery() -> Vec<(String, GSimplicialComplex)> {
    let z2 = Arc::new(cyclic(2));
    let z4 = Arc::new(cyclic(4));
    let s3 = Arc::new(symmetric(3));
    let mut out: Vec<(String, GSimplicialComplex)> = vec![
        ("Z2 point".into(), point(z2.clone())),
        ("Z2 free pair".into(), free_pair()),
        ("Z2 reflection circle".into(), reflection_circle()),
        ("Z2 subdivided edge swap".into(), equivariant_subdivision(&edge_swap())),
        ("Z2 reflection sphere".into(), reflection_sphere()),
        ("Z4 subdivided rotating square".into(), ordered(rotating_square())),
        ("Z4 subdivided rotating disk".into(), ordered(rotating_disk())),
        ("Z4 reflection circle".into(), z4_reflection_circle()),
        ("Z4 orbit G/C2".into(), orbit_points(z4.clone(), &z4.generate(&[2]))),
        ("S3 point".into(), point(s3.clone())),
        ("S3 free orbit".into(), orbit_points(s3.clone(), &s3.trivial_subgroup())),
        ("S3 orbit G/C2".into(), orbit_points(s3.clone(), &s3.generate(&[1]))),
        ("S3 subdivided triangle".into(), equivariant_subdivision(&s3_triangle_boundary())),
        ("S3 subdivided filled triangle".into(), equivariant_subdivision(&s3_triangle())),
        (
            "S3 cone on three points".into(),
            equivariant_subdivision(&s3_simplex_faces(&[vec![0, 3], vec![1, 3], vec![2, 3]])),
        ),
    ];
    out.retain(|(_, x)| x.is_regular() && x.invariant_order_key().is_some());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_is_regular_and_small() {
        let b = regular_battery();
        assert_eq!(b.len(), 15);
        for (label, x) in &b {
            assert!(x.dim() <= 2, "{label}");
        }
    }

    #[test]
    fn named_examples() {
        let s = reflection_sphere();
        assert!(s.is_regular());
        assert_eq!((s.count(0), s.count(1), s.count(2)), (6, 12, 8));
        assert_eq!(rotating_disk().fixed_vertices(&rotating_disk().group().whole()), vec![4]);
        let o = orbit_points(Arc::new(symmetric(3)), &symmetric(3).generate(&[1]));
        assert_eq!(o.vertex_count(), 3);
    }
}
