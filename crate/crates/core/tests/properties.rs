//! Property tests for the algebraic invariants on randomly drawn inputs.

use mihopf::combo::{Combo, Q};
use mihopf::dynamics::{rp2_pool, translate, TranslationMap};
use mihopf::envelope::EnvIndex;
use mihopf::hopf::{check_antipode, check_coassoc};
use mihopf::index::*;
use mihopf::lie::*;
use mihopf::rational::Rational;
use mihopf::trees::{butcher_coassoc_defect, graft, trees_up_to_edges, Tree, TreeCombo};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn letter() -> impl Strategy<Value = Letter> {
    prop_oneof![
        (0u32..4).prop_map(Letter::K),
        prop_oneof![Just((1, 0)), Just((0, 1)), Just((2, 0)), Just((1, 1))].prop_map(|(a, b)| Letter::N(a, b)),
    ]
}

fn monomial() -> impl Strategy<Value = MultiIndex> {
    prop::collection::vec((letter(), 1u32..3), 0..4).prop_map(MultiIndex::from_pairs)
}

fn n_idx() -> impl Strategy<Value = NIdx> {
    (0u32..3, 0u32..2)
}

fn generator() -> impl Strategy<Value = Generator> {
    prop_oneof![
        1 => (1u8..3).prop_map(Generator::Del),
        4 => (monomial(), n_idx()).prop_map(|(g, n)| Generator::zd(g, n)),
    ]
}

fn small_rational() -> impl Strategy<Value = (i64, i64)> {
    (any::<i64>(), prop_oneof![1i64..1000, any::<i64>().prop_filter("nonzero", |d| *d != 0)])
}

fn hybrid(n: i64, d: i64) -> Q {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn big(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn same(x: &Q, y: &BigRational) -> bool {
    x.numer() == *y.numer() && x.denom() == *y.denom()
}

fn tree() -> impl Strategy<Value = Tree> {
    let pool = trees_up_to_edges(4);
    (0..pool.len()).prop_map(move |i| pool[i].clone())
}

fn graft_combo(a: &TreeCombo, b: &TreeCombo) -> TreeCombo {
    let mut out = TreeCombo::zero();
    for (t1, c1) in a.iter() {
        for (t2, c2) in b.iter() {
            out.add_scaled(&graft(t1, t2), &(c1 * c2));
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rational_arithmetic_matches_big_rationals((a, b) in small_rational(), (c, d) in small_rational()) {
        let (x, y) = (hybrid(a, b), hybrid(c, d));
        let (bx, by) = (big(a, b), big(c, d));
        prop_assert!(same(&(&x + &y), &(&bx + &by)));
        prop_assert!(same(&(&x - &y), &(&bx - &by)));
        prop_assert!(same(&(&x * &y), &(&bx * &by)));
        if c != 0 {
            prop_assert!(same(&(&x / &y), &(&bx / &by)));
        }
        prop_assert_eq!(x < y, bx < by);
        prop_assert_eq!(x == y, bx == by);
    }

    #[test]
    fn multi_index_text_and_json_round_trip(m in monomial()) {
        prop_assert_eq!(parse_multi_index(&m.to_string()).unwrap(), m.clone());
        let json = serde_json::to_string(&m).unwrap();
        prop_assert_eq!(serde_json::from_str::<MultiIndex>(&json).unwrap(), m);
    }

    #[test]
    fn generators_are_derivations(g in generator(), a in monomial(), b in monomial()) {
        let sa = Combo::basis(a.clone());
        let sb = Combo::basis(b.clone());
        let lhs = apply_generator(&g, &Combo::basis(a.mul(&b)));
        let rhs = &apply_generator(&g, &sa).mul(&sb) + &sa.mul(&apply_generator(&g, &sb));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn generator_pre_lie_identity(a in generator(), b in generator(), c in generator()) {
        let assoc = |x: &Generator, y: &Generator, z: &Generator| -> Option<LieElement> {
            let yz = pre_lie(y, z).ok()?;
            let xy = pre_lie(x, y).ok()?;
            let left = pre_lie_elements(&LieElement::basis(x.clone()), &yz).ok()?;
            let right = pre_lie_elements(&xy, &LieElement::basis(z.clone())).ok()?;
            Some(&left - &right)
        };
        if let (Some(l), Some(r)) = (assoc(&a, &b, &c), assoc(&b, &a, &c)) {
            prop_assert_eq!(l, r);
        }
    }

    #[test]
    fn grafting_is_pre_lie(a in tree(), b in tree(), c in tree()) {
        let (a, b, c) = (TreeCombo::basis(a), TreeCombo::basis(b), TreeCombo::basis(c));
        let assoc = |x: &TreeCombo, y: &TreeCombo, z: &TreeCombo| {
            &graft_combo(x, &graft_combo(y, z)) - &graft_combo(&graft_combo(x, y), z)
        };
        prop_assert_eq!(assoc(&a, &b, &c), assoc(&b, &a, &c));
    }

    #[test]
    fn butcher_coproduct_is_coassociative(t in tree()) {
        prop_assert!(butcher_coassoc_defect(&t).is_zero());
    }

    #[test]
    fn homogeneity_shifts_by_alpha_under_products(a in monomial(), b in monomial()) {
        let p = Params::with_alpha(mihopf::combo::qr(1, 4));
        let sum = &hom_value(&a, &p) + &hom_value(&b, &p);
        prop_assert_eq!(hom_value(&a.mul(&b), &p), &sum - &p.alpha);
    }

    #[test]
    fn shift_coproduct_is_coassociative_with_antipode(m1 in 0u32..4, m2 in 0u32..3) {
        let p = Params::with_alpha(mihopf::combo::qr(1, 4));
        let idx = EnvIndex::del((m1, m2));
        prop_assert!(check_coassoc(&idx, Mode::Full, &p));
        prop_assert!(check_antipode(&idx, Mode::Full, &p));
    }
}

fn translation() -> impl Strategy<Value = TranslationMap> {
    let pool: Vec<MultiIndex> = rp2_pool(3)
        .into_iter()
        .filter(|m| m.letters().all(|l| matches!(l, Letter::Z(1, _))))
        .collect();
    let n = pool.len();
    prop::collection::vec((0..n, -3i64..=3), 1..4).prop_map(move |terms| {
        let c = terms.into_iter().map(|(i, k)| (pool[i].clone(), mihopf::combo::q(k))).collect();
        TranslationMap::new(c).expect("populated z¹ series")
    })
}

fn rp2_series() -> impl Strategy<Value = mihopf::index::FormalSeries> {
    let pool = rp2_pool(3);
    let n = pool.len();
    prop::collection::vec((0..n, -2i64..=2), 1..4)
        .prop_map(move |terms| terms.into_iter().map(|(i, k)| (pool[i].clone(), mihopf::combo::q(k))).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn translations_compose_additively(c1 in translation(), c2 in translation(), s in rp2_series()) {
        let nested = translate(&c1, &translate(&c2, &s));
        prop_assert_eq!(nested, translate(&c1.sum(&c2), &s));
    }
}
