use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use eqloc::fingroup::named::battery;
use eqloc::fingroup::PermGroup;
use eqloc::homalg::{quasi_iso_in_range, ChainComplex, ChainMap, Ring};
use eqloc::linalg::{integer_kernel, smith_normal_form, IntMatrix, QMatrix, SparseMatrix};
use eqloc::repring::{character_table, check_restriction_is_ring_map, multiply, restriction, RElement};

fn perm(degree: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..degree).collect::<Vec<usize>>()).prop_shuffle()
}

fn small_group() -> impl Strategy<Value = PermGroup> {
    (2usize..=4)
        .prop_flat_map(|d| (Just(d), prop::collection::vec(perm(d), 1..=2)))
        .prop_map(|(d, gens)| PermGroup::new("random", d, gens).unwrap())
}

fn int_matrix(rows: usize, cols: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-6i64..=6, rows * cols).prop_map(move |v| IntMatrix::from_fn(rows, cols, |r, c| BigInt::from(v[r * cols + c])))
}

fn sparse(m: &IntMatrix) -> SparseMatrix {
    SparseMatrix::from_dense(m)
}

/// A three-term complex `C₂ → C₁ → C₀` with `d₂` built from the kernel of `d₁`.
fn chain_complex() -> impl Strategy<Value = ChainComplex> {
    (1usize..4, 1usize..5, 0usize..4)
        .prop_flat_map(|(r0, r1, r2)| (int_matrix(r0, r1), prop::collection::vec(-3i64..=3, 16), Just(r2)))
        .prop_map(|(d1, coeffs, r2)| {
            let kernel = integer_kernel(&d1);
            let r1 = d1.cols();
            let d2 = IntMatrix::from_fn(r1, r2, |r, c| {
                kernel
                    .iter()
                    .enumerate()
                    .map(|(k, v)| &v[r] * BigInt::from(coeffs[(k * 4 + c) % 16]))
                    .sum()
            });
            ChainComplex::new(Ring::ZZ, vec![d1.rows(), r1, r2], vec![sparse(&d1), sparse(&d2)]).unwrap()
        })
}

fn betti(c: &ChainComplex) -> Vec<usize> {
    c.clone().with_ring(Ring::QQ).homology().iter().map(|h| h.rank).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn group_axioms_and_class_equation(g in small_group(), picks in prop::collection::vec(any::<prop::sample::Index>(), 3)) {
        let n = g.order();
        let [a, b, c] = [picks[0].index(n), picks[1].index(n), picks[2].index(n)];
        prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
        prop_assert_eq!(g.mul(a, g.inv(a)), g.identity());
        prop_assert_eq!(g.identity(), 0);
        prop_assert_eq!(g.conjugacy_classes().iter().map(|k| k.size()).sum::<usize>(), n);
        for class in g.lattice().unwrap().classes() {
            prop_assert_eq!(n % class.order(), 0);
        }
    }

    #[test]
    fn conjugating_to_the_representative(g in small_group(), gens in prop::collection::vec(any::<prop::sample::Index>(), 1..3)) {
        let ids: Vec<usize> = gens.iter().map(|i| i.index(g.order())).collect();
        let h = g.generate(&ids);
        let lattice = g.lattice().unwrap();
        let (class, x) = lattice.conjugator_to_representative(&g, &h).unwrap();
        prop_assert_eq!(&g.conjugate_subgroup(&h, g.inv(x)), lattice.representative(class));
    }

    #[test]
    fn gamma_families_are_families(g in small_group()) {
        for class in g.conjugacy_classes() {
            let family = g.family_of_gamma(class).unwrap();
            prop_assert!(g.is_family(&family.members).unwrap());
            // the trivial subgroup (class 0) meets γ trivially unless γ = {e}
            prop_assert_eq!(family.contains(0), class.representative != g.identity());
        }
    }

    #[test]
    fn smith_form_is_a_unimodular_diagonalization(m in (1usize..6, 1usize..6).prop_flat_map(|(r, c)| int_matrix(r, c))) {
        let s = smith_normal_form(&m);
        prop_assert_eq!(&s.left.mul(&m).mul(&s.right), &s.diagonal);
        prop_assert!(s.left.determinant().abs().is_one() && s.right.determinant().abs().is_one());
        let f = s.invariant_factors();
        for w in f.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                if r != c || r >= s.rank {
                    prop_assert!(s.diagonal[(r, c)].is_zero());
                }
            }
        }
    }

    #[test]
    fn rational_rank_and_kernel(m in (1usize..6, 1usize..6).prop_flat_map(|(r, c)| int_matrix(r, c))) {
        let rows: Vec<Vec<BigInt>> = (0..m.rows()).map(|r| m.row(r).to_vec()).collect();
        let q = QMatrix::from_int_rows(&rows, m.cols());
        prop_assert_eq!(q.rank(), q.transpose().rank());
        let kernel = q.kernel();
        prop_assert_eq!(kernel.len(), m.cols() - q.rank());
        for v in kernel {
            prop_assert!(q.mul(&QMatrix::from_columns(m.cols(), &[v])).is_zero());
        }
    }

    #[test]
    fn euler_characteristic_is_homological(c in chain_complex()) {
        let chi_chains: i64 = (0..c.len()).map(|k| if k % 2 == 0 { c.rank(k) as i64 } else { -(c.rank(k) as i64) }).sum();
        let chi_homology: i64 = betti(&c).iter().enumerate().map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
        prop_assert_eq!(chi_chains, chi_homology);
    }

    #[test]
    fn kunneth_over_the_rationals(a in chain_complex(), b in chain_complex()) {
        let (ba, bb) = (betti(&a), betti(&b));
        let bt = betti(&a.tensor(&b));
        for (n, &r) in bt.iter().enumerate() {
            let expect: usize = (0..=n).map(|p| ba.get(p).copied().unwrap_or(0) * bb.get(n - p).copied().unwrap_or(0)).sum();
            prop_assert_eq!(r, expect);
        }
    }

    #[test]
    fn identity_is_a_quasi_isomorphism(c in chain_complex()) {
        prop_assert!(quasi_iso_in_range(&ChainMap::identity(&c), &c, &c, 0, c.len() - 1));
    }

    #[test]
    fn representation_ring_products(which in 0usize..9, picks in prop::collection::vec(-2i64..=2, 30)) {
        let g = &battery()[which];
        let t = character_table(g).unwrap();
        let n = t.len();
        let element = |off: usize| RElement((0..n).map(|i| BigInt::from(picks[(off + i) % picks.len()])).collect());
        let (a, b, c) = (element(0), element(7), element(13));
        let ab = multiply(&t, &a, &b).unwrap();
        prop_assert_eq!(&ab, &multiply(&t, &b, &a).unwrap());
        prop_assert_eq!(multiply(&t, &ab, &c).unwrap(), multiply(&t, &a, &multiply(&t, &b, &c).unwrap()).unwrap());
        for class in g.lattice().unwrap().classes() {
            let res = restriction(g, &t, &class.representative).unwrap();
            prop_assert!(check_restriction_is_ring_map(&t, &res).is_ok());
        }
    }
}
