mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use uhfree_core::morphisms::{
    iso_test, solve_hom_in, submodule_closed, Category, HomParity, Submod,
};
use uhfree_core::normalform::{classify_sl11, classify_sl_m1, nil_factor, rationals, Sl11Class};
use uhfree_core::poly::{int, poly_gcd, rat, Poly, Rat, ShiftMap};
use uhfree_core::presentation::{
    act, build_mas, build_mas_bar, verify_pointwise, verify_relations, Grading, Mat2, VecF,
};
use uhfree_core::superlie::{full_basis, BasisIndex, Idx};

use common::{random_params, subsets, unimodular};

#[test]
fn mas_family_verifies_and_classifies() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for m in 1..=3 {
        for s in subsets(m) {
            for _ in 0..3 {
                let a = random_params(&mut rng, m);
                let p = build_mas(m, &a, &s).unwrap();
                assert!(verify_relations(&p).passed(), "M({a:?}, {s:?})");
                let c = classify_sl_m1(&p).unwrap();
                assert_eq!(c.params.s, s);
                assert!(c.params.scalar_ratio(&uhfree_core::normalform::CanonParams {
                    a: a.clone(),
                    s: s.clone(),
                    bar: false,
                })
                .is_some());
            }
        }
    }
}

#[test]
fn pointwise_and_matrix_checks_agree() {
    let s = BTreeSet::from([1]);
    let good = build_mas(2, &rationals(&[1, 3]), &s).unwrap();
    assert!(verify_relations(&good).passed());
    assert!(verify_pointwise(&good, 2).unwrap().is_empty());

    let x = BasisIndex::Root(Idx::Plain(2), Idx::Bar(1));
    let e = good.get(x).unwrap().scale(&int(2));
    let bad = good.clone().with(x, e).unwrap();
    assert!(!verify_relations(&bad).passed());
    assert!(!verify_pointwise(&bad, 2).unwrap().is_empty());
}

#[test]
fn conjugation_preserves_relations() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for s in subsets(2) {
        let p = build_mas(2, &random_params(&mut rng, 2), &s)
            .unwrap()
            .with_grading(Grading::Ungraded);
        let w = unimodular(&mut rng, 2);
        let q = p.conjugate(&w).unwrap();
        assert!(verify_relations(&q).passed());
        assert_eq!(q.conjugate(&w.inverse().unwrap()).unwrap(), p);
    }
}

#[test]
fn sl11_conjugates_return_home() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for class in [Sl11Class::One, Sl11Class::Two] {
        for _ in 0..20 {
            let w = unimodular(&mut rng, 1);
            let p = class.presentation().with_grading(Grading::Ungraded).conjugate(&w).unwrap();
            let (got, witness) = classify_sl11(&p).unwrap();
            assert_eq!(got, class);
            let back = p.conjugate(&witness).unwrap();
            assert_eq!(back.with_grading(Grading::G11), class.presentation());
        }
    }
}

#[test]
fn isomorphism_is_an_equivalence() {
    let s = BTreeSet::from([2]);
    let base = rationals(&[1, -2]);
    let scaled: Vec<Rat> = base.iter().map(|x| x * rat(3, 2)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let w = unimodular(&mut rng, 2);
    let p = build_mas(2, &base, &s).unwrap().with_grading(Grading::Ungraded);
    let q = build_mas(2, &scaled, &s).unwrap().with_grading(Grading::Ungraded);
    let r = q.conjugate(&w).unwrap();
    let cat = Category::Ungraded;
    assert!(iso_test(&p, &p, cat).unwrap().is_some());
    let pq = iso_test(&p, &q, cat).unwrap().unwrap();
    let qp = iso_test(&q, &p, cat).unwrap().unwrap();
    assert_eq!(&pq.gamma * &qp.gamma, int(1));
    assert!(iso_test(&q, &r, cat).unwrap().is_some());
    assert!(iso_test(&p, &r, cat).unwrap().is_some());
    let other = build_mas(2, &base, &BTreeSet::new()).unwrap().with_grading(Grading::Ungraded);
    assert!(iso_test(&p, &other, cat).unwrap().is_none());
}

#[test]
fn graded_bookkeeping() {
    let s = BTreeSet::from([1]);
    let a = rationals(&[2, 5]);
    let plain = build_mas(2, &a, &s).unwrap();
    let barred = build_mas_bar(2, &a, &s).unwrap();
    let odd = iso_test(&plain, &barred, Category::Super).unwrap().unwrap();
    assert!(odd.parity.is_odd());
    assert!(iso_test(&plain, &barred, Category::Even).unwrap().is_none());
    assert!(iso_test(&plain, &plain, Category::Even).unwrap().is_some());
}

#[test]
fn endomorphisms_are_even() {
    for m in 1..=2 {
        for s in subsets(m) {
            let p = build_mas(m, &rationals(&[1, 2][..m]), &s).unwrap();
            let sols = solve_hom_in(&p, &p, 2, Category::Super).unwrap();
            assert!(!sols.is_empty());
            assert!(sols.iter().all(|x| x.parity == HomParity::Even));
        }
    }
}

#[test]
fn submodules_from_polynomials_are_closed() {
    let x = Poly::var(1, 0);
    for m in 1..=3 {
        for s in subsets(m) {
            let p = build_mas(m, &rationals(&[1, -1, 2][..m]), &s).unwrap();
            for f in [Poly::one(1), x.clone(), &(&x - &Poly::constant(1, int(2))) * &x] {
                assert!(submodule_closed(&p, &Submod::new(f).unwrap()).unwrap());
            }
        }
    }
}

fn small_poly(nvars: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(
        (prop::collection::vec(0u32..=2, nvars), (-3i64..=3, 1i64..=2)),
        0..4,
    )
    .prop_map(move |ts| Poly::from_terms(nvars, ts.into_iter().map(|(e, (n, d))| (e, rat(n, d)))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn action_is_twisted_linear(f in small_poly(2), g0 in small_poly(2), g1 in small_poly(2), k in 0usize..7) {
        let p = build_mas(2, &rationals(&[1, 3]), &BTreeSet::from([2])).unwrap();
        let x = full_basis(2, 1)[k % full_basis(2, 1).len()];
        let v = VecF::new(g0, g1);
        let lhs = act(&p, x, &v.scale_poly(&f)).unwrap();
        let tau = match x {
            BasisIndex::Root(..) => p.shift_of(x).unwrap(),
            BasisIndex::Cartan(_) => ShiftMap::identity(2),
        };
        let rhs = act(&p, x, &v).unwrap().scale_poly(&tau.apply(&f));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn nil_factor_round_trip(
        theta in small_poly(2),
        alpha in small_poly(2),
        beta in small_poly(2),
        s in prop::collection::vec(-2i64..=2, 2),
    ) {
        prop_assume!(!theta.is_zero() && !(alpha.is_zero() && beta.is_zero()));
        let tau = ShiftMap::new(s);
        let ta = tau.apply(&alpha);
        let tb = tau.apply(&beta);
        let p = Mat2::new(
            &(&theta * &beta) * &ta,
            &(&(-&theta) * &alpha) * &ta,
            &(&theta * &beta) * &tb,
            &(&(-&theta) * &alpha) * &tb,
        );
        let np = nil_factor(&p, &tau).unwrap();
        prop_assert_eq!(np.reconstruct(&tau), p);
        prop_assert!(poly_gcd(&np.alpha, &np.beta).unwrap().is_constant());
    }
}
