use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quatorder::freeness::{
    embed, gap_at, relation_search, schottky_certificate, FreenessError, SchottkyCertificate,
    DEFAULT_TAU,
};
use quatorder::parse_unit;
use quatorder::quadratic::{PellNorm, SquareFreeD};
use quatorder::quaternion::{Basis, Quaternion};
use quatorder::units;

fn sf(v: i64) -> SquareFreeD {
    SquareFreeD::new(v).unwrap()
}

fn q(d: i64, s: &str) -> Quaternion {
    parse_unit(sf(d), s).unwrap()
}

/// A Gauss unit or half-integer generator with permuted, sign-flipped coefficients.
fn random_unit(rng: &mut ChaCha8Rng, d: SquareFreeD) -> Quaternion {
    loop {
        let base = if rng.gen_bool(0.2) {
            let gens = units::s_generator_units(d).unwrap();
            gens.choose(rng).unwrap().unit().clone()
        } else {
            let target = if rng.gen_bool(0.5) {
                PellNorm::Plus
            } else {
                PellNorm::Minus
            };
            match units::gauss_unit(d, rng.gen_range(-8..=8), target) {
                Ok(r) => r.unit().clone(),
                Err(_) => continue,
            }
        };
        let mut order = Basis::ALL;
        order.shuffle(rng);
        let u = base.permute_coefficients(order);
        return if rng.gen_bool(0.5) { -&u } else { u };
    }
}

#[test]
fn determinant_is_the_norm() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for d in [7, 15, 23] {
        let d = sf(d);
        for _ in 0..1000 {
            let u = random_unit(&mut rng, d);
            let eta = u.norm().to_complex();
            let det = embed(&u).det();
            assert!(
                (det - eta).norm() < 1e-10 * (1.0 + eta.norm()),
                "{u}: det {det}, eta {eta}"
            );
        }
    }
}

#[test]
fn embedding_is_multiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for d in [7, 15, 23] {
        let d = sf(d);
        for _ in 0..300 {
            let (u, v) = (random_unit(&mut rng, d), random_unit(&mut rng, d));
            let direct = embed(&(&u * &v));
            let product = &embed(&u) * &embed(&v);
            assert!(direct.max_abs_diff(&product) < 1e-8, "{u} * {v}");
        }
    }
}

fn suite_cases() -> Vec<Vec<Quaternion>> {
    vec![
        vec![q(7, "3s+8i"), q(7, "3s+8j")],
        vec![q(7, "3s+8i"), q(7, "3s+8k")],
        vec![q(7, "3s+8i"), q(7, "3s+8j"), q(7, "3s+8k")],
        vec![q(7, "3s+8i")],
        vec![q(7, "6s+15i+5j+1k")],
        vec![q(7, "2s+5i+2j"), q(7, "2s+2i+5k")],
        vec![q(23, "5s+24i"), q(23, "5s+24j")],
    ]
}

fn certify(units: &[Quaternion]) -> SchottkyCertificate {
    schottky_certificate(units, 64, DEFAULT_TAU).unwrap_or_else(|e| panic!("{units:?}: {e}"))
}

#[test]
fn certificates_survive_the_exact_cross_check() {
    for units in suite_cases() {
        let cert = certify(&units);
        assert!(cert.min_gap > DEFAULT_TAU);
        assert_eq!(cert.circles.len(), 2 * units.len());
        assert_eq!(
            relation_search(&cert.generators, cert.m, 8).unwrap(),
            None,
            "{units:?} at m = {}",
            cert.m
        );
    }
}

#[test]
fn doubling_the_power_keeps_circles_apart() {
    let mut failures = Vec::new();
    for units in suite_cases() {
        let cert = certify(&units);
        let gap = gap_at(&cert.generators, 2 * cert.m, cert.conjugator);
        if !gap.is_some_and(|g| g > DEFAULT_TAU) {
            failures.push(format!("{units:?}: m = {}, gap at 2m {gap:?}", cert.m));
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn three_generator_family() {
    let units = [q(7, "3s+8i"), q(7, "3s+8j"), q(7, "3s+8k")];
    let cert = certify(&units);
    assert!(cert.m <= 64);
    assert_eq!(cert.circles.len(), 6);
}

#[test]
fn coincident_generators_never_certify() {
    let u = q(7, "3s+8i");
    for max_m in [1, 8, 64] {
        assert_eq!(
            schottky_certificate(&[u.clone(), u.clone()], max_m, DEFAULT_TAU).unwrap_err(),
            FreenessError::NotFound { max_m }
        );
    }
}

#[test]
fn certificate_records_the_circle_formula() {
    let units = [q(7, "3s+8i"), q(7, "3s+8j")];
    let cert = certify(&units);
    for (t, g) in cert.generators.iter().enumerate() {
        let m = cert.conjugator.apply(&embed(&g.pow(cert.m)));
        let [[a, _], [c, e]] = m.entries;
        let plus = cert.circles[2 * t];
        let minus = cert.circles[2 * t + 1];
        assert!((plus.center - (-e / c)).norm() < 1e-9);
        assert!((minus.center - a / c).norm() < 1e-9);
        assert!((plus.radius - 1.0 / c.norm()).abs() < 1e-12);
        assert_eq!(plus.radius, minus.radius);
    }
    assert!(cert
        .circles
        .iter()
        .all(|c| c.radius > 0.0 && c.center.re.is_finite() && c.center.im.is_finite()));
}

#[test]
fn relation_search_finds_short_relations() {
    let i = q(7, "i");
    let w = relation_search(&[i], 1, 4).unwrap().unwrap();
    assert_eq!(w.letters.len(), 4);
    let u = q(7, "3s+8i");
    let w = relation_search(&[u.clone(), u.inverse().unwrap()], 1, 8)
        .unwrap()
        .unwrap();
    assert_eq!(w.letters.len(), 2);
    // u2 = u1^2
    let w = relation_search(&[u.clone(), &u * &u], 1, 4)
        .unwrap()
        .unwrap();
    assert_eq!(w.letters.len(), 3);
    assert_eq!(w.to_string(), "u1^1 u1^1 u2^-1 = 1");
}
