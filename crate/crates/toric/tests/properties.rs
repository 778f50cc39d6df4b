//! Property tests for the exact-algebra kernel: ring axioms, division,
//! substitution homomorphy, and linear-algebra invariants.

use std::collections::BTreeMap;

use num_traits::Zero;
use proptest::prelude::*;

use toric::exactalg::{rat, MPoly, Monomial, QMatrix, Rat, VarId};

fn arb_rat() -> impl Strategy<Value = Rat> {
    (-12i64..=12, 1i64..=6).prop_map(|(p, q)| rat(p, q))
}

fn arb_var() -> impl Strategy<Value = VarId> {
    prop_oneof![
        (1u32..=2).prop_map(VarId::Base),
        (1u32..=3).prop_map(VarId::Face),
        Just(VarId::Param),
    ]
}

fn arb_monomial() -> impl Strategy<Value = Monomial> {
    proptest::collection::vec((arb_var(), 1u32..=3), 0..=3)
        .prop_map(|pairs| Monomial::from_pairs(&pairs))
}

fn arb_poly() -> impl Strategy<Value = MPoly> {
    proptest::collection::vec((arb_monomial(), arb_rat()), 0..=4).prop_map(|terms| {
        let mut p = MPoly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    })
}

fn arb_matrix(rows: usize, cols: usize) -> impl Strategy<Value = QMatrix> {
    proptest::collection::vec(-6i64..=6, rows * cols).prop_map(move |entries| {
        QMatrix::from_int_rows(
            &entries
                .chunks(cols)
                .map(|row| row.to_vec())
                .collect::<Vec<_>>(),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
    }

    #[test]
    fn exact_division_recovers_factor(a in arb_poly(), b in arb_poly()) {
        prop_assume!(!b.is_zero());
        let product = &a * &b;
        prop_assert_eq!(product.exact_divide(&b).unwrap(), a);
    }

    #[test]
    fn substitution_is_a_ring_homomorphism(p in arb_poly(), q in arb_poly()) {
        let mut map: BTreeMap<VarId, MPoly> = BTreeMap::new();
        map.insert(VarId::Face(1), &MPoly::var(VarId::Base(1)) + &MPoly::var(VarId::Base(2)));
        map.insert(VarId::Face(2), MPoly::zero());
        map.insert(VarId::Param, MPoly::constant(rat(1, 2)));
        let lhs = (&p * &q).substitute(&map);
        let rhs = &p.substitute(&map) * &q.substitute(&map);
        prop_assert_eq!(lhs, rhs);
        let sum = (&p + &q).substitute(&map);
        prop_assert_eq!(sum, &p.substitute(&map) + &q.substitute(&map));
    }

    #[test]
    fn homogeneous_components_sum_back(p in arb_poly()) {
        let mut total = MPoly::zero();
        let mut degree = 0;
        while degree <= p.coh_degree() {
            total = &total + &p.homogeneous_component(degree);
            degree += 2;
        }
        prop_assert_eq!(total, p);
    }

    #[test]
    fn inverse_multiplies_to_identity(m in arb_matrix(3, 3)) {
        if let Ok(inv) = m.inverse() {
            prop_assert_eq!(inv.mul(&m), QMatrix::identity(3));
            prop_assert_eq!(m.mul(&inv), QMatrix::identity(3));
        } else {
            prop_assert_eq!(m.determinant().unwrap(), Rat::from_integer(0.into()));
        }
    }

    #[test]
    fn rank_is_invariant_under_row_operations(
        m in arb_matrix(3, 4),
        scale in 1i64..=5,
        from in 0usize..3,
        to in 0usize..3,
    ) {
        let rank = m.rank();
        // swap two rows, scale one, add a multiple of another
        let mut rows: Vec<Vec<Rat>> = (0..3).map(|r| m.row(r)).collect();
        rows.swap(from, to);
        for v in rows[0].iter_mut() {
            *v = &*v * rat(scale, 1);
        }
        if from != to {
            let source = rows[from].clone();
            for (dst, s) in rows[to].iter_mut().zip(&source) {
                *dst = &*dst + &(s * rat(scale, 1));
            }
        }
        prop_assert_eq!(QMatrix::from_rows(rows).rank(), rank);
    }

    #[test]
    fn ratfun_equality_is_scaling_invariant(p in arb_poly(), c in arb_rat()) {
        prop_assume!(!c.is_zero() && !p.is_zero());
        use toric::exactalg::RatFun;
        let plain = RatFun::new(p.clone(), MPoly::one()).unwrap();
        let scaled = RatFun::new(p.scale(&c), MPoly::constant(c)).unwrap();
        prop_assert!(plain.eq_cross(&scaled));
    }
}
