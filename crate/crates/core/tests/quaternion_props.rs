use proptest::prelude::*;

use quatorder::quadratic::{QuadRat, QuadRing, SquareFreeD};
use quatorder::quaternion::{find_zero_divisor, is_division, stufe, Basis, Quaternion, Stufe};
use quatorder::{format_unit, parse_unit};

fn sf(v: i64) -> SquareFreeD {
    SquareFreeD::new(v).unwrap()
}

fn coeff() -> impl Strategy<Value = (i64, i64, i64)> {
    (
        -40i64..40,
        -40i64..40,
        prop::sample::select(vec![1i64, 2, 3, 4]),
    )
}

fn quaternion(ds: &'static [i64]) -> impl Strategy<Value = Quaternion> {
    (
        prop::sample::select(ds),
        [coeff(), coeff(), coeff(), coeff()],
    )
        .prop_map(|(d, parts)| Quaternion::from_parts(sf(d), parts))
}

fn triple(ds: &'static [i64]) -> impl Strategy<Value = (Quaternion, Quaternion, Quaternion)> {
    prop::sample::select(ds).prop_flat_map(|d| {
        let q = move || {
            [coeff(), coeff(), coeff(), coeff()].prop_map(move |p| Quaternion::from_parts(sf(d), p))
        };
        (q(), q(), q())
    })
}

const DS: &[i64] = &[2, 3, 7, 15];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn norm_is_multiplicative((u, v, _) in triple(DS)) {
        prop_assert_eq!((&u * &v).norm(), &u.norm() * &v.norm());
    }

    #[test]
    fn square_identity(u in quaternion(DS)) {
        // u^2 = 2 u1 u - eta(u)
        let (trace, eta) = u.square_reduce();
        let rhs = &u.scale(&trace) - &Quaternion::scalar(u.d(), eta);
        prop_assert_eq!(&u * &u, rhs);
    }

    #[test]
    fn literal_round_trip(u in quaternion(&[1, 2, 3, 5, 7, 15, -2, -5])) {
        let text = format_unit(&u);
        prop_assert_eq!(parse_unit(u.d(), &text).unwrap(), u);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn associative((u, v, w) in triple(DS)) {
        prop_assert_eq!(&(&u * &v) * &w, &u * &(&v * &w));
    }

    #[test]
    fn inverse_and_conjugate((u, v, _) in triple(DS)) {
        prop_assume!(!u.norm().is_zero());
        prop_assert!((&u * &u.inverse().unwrap()).is_one());
        prop_assert_eq!((&u * &v).conj(), &v.conj() * &u.conj());
    }
}

#[test]
fn defining_relations() {
    for d in [1, 2, 3, 7, -2] {
        let d = sf(d);
        let [one, i, j, k] = Basis::ALL.map(|e| Quaternion::basis(d, e));
        let minus_one = -&one;
        assert_eq!(&i * &i, minus_one);
        assert_eq!(&j * &j, minus_one);
        assert_eq!(&k * &k, minus_one);
        assert_eq!(&i * &j, k);
        assert_eq!(&j * &i, -&k);
        assert_eq!(&j * &k, i);
        assert_eq!(&k * &i, j);
    }
}

#[test]
fn zero_divisors_exactly_off_the_division_classes() {
    for d in [1, 2, 3, 5, 6, 10] {
        let w = find_zero_divisor(sf(d), 5).unwrap_or_else(|| panic!("d = {d}"));
        assert!(
            w.in_order() && !w.is_zero() && w.norm().is_zero(),
            "d = {d}: {w}"
        );
        assert!(!is_division(sf(d)));
    }
    for d in [7, 15, 23] {
        assert!(find_zero_divisor(sf(d), 5).is_none(), "d = {d}");
        assert!(is_division(sf(d)));
    }
    let w = find_zero_divisor(sf(1), 1).unwrap();
    assert_eq!(format_unit(&w), "1s+1i");
}

#[test]
fn stufe_values() {
    assert_eq!(stufe(sf(1)), Stufe::One);
    assert_eq!(stufe(sf(2)), Stufe::Two);
    assert_eq!(stufe(sf(3)), Stufe::Two);
    assert_eq!(stufe(sf(7)), Stufe::Four);
    assert_eq!(stufe(sf(-5)), Stufe::Infinite);
    // level 4 exactly when -1 is not a sum of two squares in K, i.e. H(K) is a division ring
    for d in 1..=200 {
        if let Ok(d) = SquareFreeD::new(d) {
            assert_eq!(stufe(d) == Stufe::Four, is_division(d), "d = {}", d.get());
        }
    }
}

#[test]
fn order_membership_uses_the_ring_of_integers() {
    let d = sf(7);
    let ring = QuadRing::imaginary(d);
    let half = Quaternion::scalar(d, QuadRat::new(ring, 1, 1, 2));
    assert!(half.in_order());
    let d3 = sf(5);
    let not_integral = Quaternion::scalar(d3, QuadRat::new(QuadRing::imaginary(d3), 1, 1, 2));
    assert!(!not_integral.in_order());
}
