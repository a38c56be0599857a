use num_complex::Complex64;
use proptest::prelude::*;
use tqlab::scalars::{eval_qrat, rational_reconstruct, EvalPoint, QRat, QSeries, RatFn, UPoly, Var};

fn laurent(terms: &[(i64, i64)]) -> QRat {
    terms.iter().fold(QRat::zero(), |acc, &(e, c)| &acc + &(&QRat::from_int(c) * &QRat::q_pow_int(e)))
}

fn qrat() -> impl Strategy<Value = QRat> {
    let poly = prop::collection::vec((-3i64..=3, -3i64..=3), 1..4);
    (poly.clone(), poly).prop_filter_map("zero denominator", |(n, d)| {
        let den = laurent(&d);
        if den.is_zero() {
            None
        } else {
            Some(&laurent(&n) / &den)
        }
    })
}

fn nonzero_qrat() -> impl Strategy<Value = QRat> {
    qrat().prop_filter("nonzero", |x| !x.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn addition_and_multiplication_commute(a in qrat(), b in qrat()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn distributive(a in qrat(), b in qrat(), c in qrat()) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn multiplicative_inverse(a in nonzero_qrat()) {
        prop_assert!((&a * &a.inv().unwrap()).is_one());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(a in qrat(), b in qrat(), seed in 0u64..1000) {
        let p = EvalPoint::random(seed);
        let (ea, eb) = (eval_qrat(&a, &p).unwrap(), eval_qrat(&b, &p).unwrap());
        let sum = eval_qrat(&(&a + &b), &p).unwrap();
        let prod = eval_qrat(&(&a * &b), &p).unwrap();
        let scale = 1.0 + ea.norm() + eb.norm() + ea.norm() * eb.norm();
        prop_assert!((sum - (ea + eb)).norm() < 1e-9 * scale);
        prop_assert!((prod - ea * eb).norm() < 1e-9 * scale);
    }

    #[test]
    fn log_inverts_exp(cs in prop::collection::vec(qrat(), 4)) {
        let mut coeffs = vec![QRat::zero()];
        coeffs.extend(cs);
        let s = QSeries::new(Var::Z, coeffs, 4);
        prop_assert_eq!(s.exp().unwrap().log().unwrap(), s);
    }

    #[test]
    fn reconstruction_round_trip(n0 in qrat(), n1 in qrat(), d1 in nonzero_qrat()) {
        let r = RatFn::new(UPoly::linear(n0, n1), UPoly::linear(QRat::one(), d1)).unwrap();
        let s = QSeries::from_ratfn(Var::Z, &r, 5).unwrap();
        prop_assert_eq!(rational_reconstruct(&s, 1).unwrap(), Some(r));
    }
}

#[test]
fn evaluation_respects_q_powers() {
    let p = EvalPoint::new(Complex64::new(1.3, 0.2)).unwrap();
    let x = eval_qrat(&QRat::q_pow_int(3), &p).unwrap();
    assert!((x - p.q.powi(3)).norm() < 1e-12);
}
