//! Ping-pong certificates for free subgroups generated by unit powers.
//!
//! Units are sent into `M_2(C)` by
//! `x1 + xi*i + xj*j + xk*k -> [[x1 + xi*z, xj + xk*z], [-xj + xk*z, x1 - xi*z]]`
//! with `z = sqrt(-1)` and `sqrt(-d) -> z*sqrt(d)`. If the isometric circles of
//! `g^m` and `g^-m`, over all generators `g`, are pairwise disjoint, then the
//! powers `g^m` freely generate a free group.
//!
//! Many natural units embed diagonally (they fix infinity), so the search also
//! tries conjugating by a fixed list of rotations of the Riemann sphere. This
//! does not change the group up to isomorphism. The certificate records which
//! rotation it used.
//!
//! The geometry is floating point with a margin `tau`. [`relation_search`] is
//! the exact falsifier run alongside it.

use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::json::Coefficients;
use crate::quadratic::SquareFreeD;
use crate::quaternion::{Basis, Quaternion, QuaternionError, TorsionKind};

pub const DEFAULT_TAU: f64 = 1e-6;
/// `|c|` at or below this makes a matrix affine for our purposes.
pub const AFFINE_EPS: f64 = 1e-12;
pub const DEFAULT_CROSS_CHECK_LEN: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FreenessError {
    #[error("matrix fixes infinity (|c| = {0:e}); it has no isometric circle")]
    AffineElement(f64),
    #[error("no certificate with m <= {max_m}; this does not refute freeness")]
    NotFound { max_m: u32 },
    #[error("no generators given")]
    NoGenerators,
    #[error("generator {index} is not a unit of H(R)")]
    NotAUnit { index: usize },
    #[error("generator {index} has finite order {order}")]
    TorsionGenerator { index: usize, order: u32 },
    #[error("generators live over different fields")]
    MixedFields,
    #[error("m and max_len must be positive")]
    ZeroParameter,
    #[error(transparent)]
    Quaternion(#[from] QuaternionError),
}

pub type Result<T> = std::result::Result<T, FreenessError>;

#[derive(Debug, Clone, PartialEq)]
pub struct MobiusMatrix {
    pub entries: [[Complex64; 2]; 2],
    pub source: Option<Quaternion>,
}

impl MobiusMatrix {
    pub fn new(entries: [[Complex64; 2]; 2]) -> Self {
        MobiusMatrix {
            entries,
            source: None,
        }
    }

    pub fn identity() -> Self {
        let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        MobiusMatrix::new([[o, z], [z, o]])
    }

    pub fn det(&self) -> Complex64 {
        let [[a, b], [c, e]] = self.entries;
        a * e - b * c
    }

    /// Adjugate; the inverse when `det = 1`.
    pub fn adjugate(&self) -> Self {
        let [[a, b], [c, e]] = self.entries;
        MobiusMatrix::new([[e, -b], [-c, a]])
    }

    pub fn max_abs_diff(&self, other: &MobiusMatrix) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.entries[r][c] - other.entries[r][c]).norm());
            }
        }
        worst
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

impl Mul for &MobiusMatrix {
    type Output = MobiusMatrix;
    fn mul(self, rhs: &MobiusMatrix) -> MobiusMatrix {
        let (x, y) = (&self.entries, &rhs.entries);
        MobiusMatrix::new(std::array::from_fn(|r| {
            std::array::from_fn(|c| x[r][0] * y[0][c] + x[r][1] * y[1][c])
        }))
    }
}

pub fn embed(u: &Quaternion) -> MobiusMatrix {
    let z = Complex64::new(0.0, 1.0);
    let x = Basis::ALL.map(|e| u.coeff(e).to_complex());
    let [x1, xi, xj, xk] = x;
    MobiusMatrix {
        entries: [[x1 + xi * z, xj + xk * z], [-xj + xk * z, x1 - xi * z]],
        source: Some(u.clone()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsometricCircle {
    pub center: Complex64,
    pub radius: f64,
}

impl IsometricCircle {
    /// `|c1 - c2| - (r1 + r2)`; positive when the closed discs are disjoint.
    pub fn gap(&self, other: &IsometricCircle) -> f64 {
        (self.center - other.center).norm() - (self.radius + other.radius)
    }
}

impl Serialize for IsometricCircle {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("IsometricCircle", 2)?;
        st.serialize_field("center", &[self.center.re, self.center.im])?;
        st.serialize_field("radius", &self.radius)?;
        st.end()
    }
}

/// `|cz + e| = 1` for `[[a, b], [c, e]]`.
pub fn isometric_circle(m: &MobiusMatrix) -> Result<IsometricCircle> {
    let [[_, _], [c, e]] = m.entries;
    if c.norm() <= AFFINE_EPS {
        return Err(FreenessError::AffineElement(c.norm()));
    }
    Ok(IsometricCircle {
        center: -e / c,
        radius: 1.0 / c.norm(),
    })
}

/// Rotation of the sphere applied before reading off circles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Conjugator {
    Identity,
    /// The rotation in `SU(2)` sending `point` to infinity.
    PointToInfinity {
        point: Complex64,
    },
}

impl Conjugator {
    /// Identity first, then the eight face centres of the octahedron with
    /// vertices `0, inf, +-1, +-z`.
    pub fn candidates() -> Vec<Conjugator> {
        let upper = (1.0 + 3f64.sqrt()) / 2.0;
        let lower = (3f64.sqrt() - 1.0) / 2.0;
        let mut out = vec![Conjugator::Identity];
        for scale in [upper, lower] {
            for (re, im) in [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)] {
                out.push(Conjugator::PointToInfinity {
                    point: Complex64::new(re * scale, im * scale),
                });
            }
        }
        out
    }

    /// `T` with `T(point) = inf`; `T = t[[conj(p), 1], [-1, p]]`, `t = (1 + |p|^2)^(-1/2)`.
    pub fn matrix(&self) -> MobiusMatrix {
        match *self {
            Conjugator::Identity => MobiusMatrix::identity(),
            Conjugator::PointToInfinity { point: p } => {
                let t = 1.0 / (1.0 + p.norm_sqr()).sqrt();
                let one = Complex64::new(t, 0.0);
                MobiusMatrix::new([[p.conj() * t, one], [-one, p * t]])
            }
        }
    }

    /// `T M T^-1`.
    pub fn apply(&self, m: &MobiusMatrix) -> MobiusMatrix {
        if *self == Conjugator::Identity {
            return m.clone();
        }
        let t = self.matrix();
        &(&t * m) * &t.adjugate()
    }
}

impl Serialize for Conjugator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Conjugator::Identity => s.serialize_str("identity"),
            Conjugator::PointToInfinity { point } => {
                let mut st = s.serialize_struct("Conjugator", 1)?;
                st.serialize_field("to_infinity", &[point.re, point.im])?;
                st.end()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CrossCheck {
    pub max_len: usize,
    pub relations_found: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchottkyCertificate {
    pub d: SquareFreeD,
    pub m: u32,
    pub tau: f64,
    /// Units as supplied.
    pub units: Vec<Quaternion>,
    /// The units actually raised to the `m`-th power: norm `-1` units are squared.
    pub generators: Vec<Quaternion>,
    pub conjugator: Conjugator,
    /// `g1^m, g1^-m, g2^m, g2^-m, ...`
    pub circles: Vec<IsometricCircle>,
    pub min_gap: f64,
    pub cross_check: Option<CrossCheck>,
}

impl SchottkyCertificate {
    /// Runs [`relation_search`] on the generators at the certified `m`.
    pub fn cross_check(&mut self, max_len: usize) -> Result<CrossCheck> {
        let found = relation_search(&self.generators, self.m, max_len)?;
        let check = CrossCheck {
            max_len,
            relations_found: usize::from(found.is_some()),
        };
        self.cross_check = Some(check);
        Ok(check)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }
}

#[derive(Serialize)]
struct GeneratorDoc<'a> {
    unit: String,
    squared: bool,
    coefficients: Coefficients<'a>,
}

impl Serialize for SchottkyCertificate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let generators: Vec<GeneratorDoc> = self
            .units
            .iter()
            .zip(&self.generators)
            .map(|(u, g)| GeneratorDoc {
                unit: u.to_string(),
                squared: u != g,
                coefficients: Coefficients(g),
            })
            .collect();
        let mut st = s.serialize_struct("SchottkyCertificate", 9)?;
        st.serialize_field("d", &self.d)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("tau", &self.tau)?;
        st.serialize_field("generators", &generators)?;
        st.serialize_field("conjugator", &self.conjugator)?;
        st.serialize_field("circles", &self.circles)?;
        st.serialize_field("min_gap", &self.min_gap)?;
        st.serialize_field("cross_check", &self.cross_check)?;
        st.end()
    }
}

impl fmt::Display for SchottkyCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.units.iter().map(|u| u.to_string()).collect();
        writeln!(
            f,
            "free: <{}> raised to m = {} (tau = {:e})",
            names.join(", "),
            self.m,
            self.tau
        )?;
        match self.conjugator {
            Conjugator::Identity => writeln!(f, "conjugator: identity")?,
            Conjugator::PointToInfinity { point } => {
                writeln!(f, "conjugator: sends {point} to infinity")?
            }
        }
        for (t, c) in self.circles.iter().enumerate() {
            let sign = if t % 2 == 0 { "+" } else { "-" };
            writeln!(
                f,
                "  g{}^{sign}m: center {:.12e} {:+.12e}i, radius {:.12e}",
                t / 2 + 1,
                c.center.re,
                c.center.im,
                c.radius
            )?;
        }
        write!(f, "min gap {:.6e}", self.min_gap)?;
        if let Some(check) = self.cross_check {
            write!(
                f,
                "\nrelations of length <= {}: {}",
                check.max_len, check.relations_found
            )?;
        }
        Ok(())
    }
}

fn common_d(units: &[Quaternion]) -> Result<SquareFreeD> {
    let d = units.first().ok_or(FreenessError::NoGenerators)?.d();
    if units.iter().any(|u| u.d() != d) {
        return Err(FreenessError::MixedFields);
    }
    Ok(d)
}

/// Circles of `g^m` and `g^-m` for each generator, or `None` if one is affine.
fn circles_for(powers: &[MobiusMatrix], conj: Conjugator) -> Option<Vec<IsometricCircle>> {
    let mut out = Vec::with_capacity(2 * powers.len());
    for p in powers {
        let g = conj.apply(p);
        out.push(isometric_circle(&g).ok()?);
        out.push(isometric_circle(&g.adjugate()).ok()?);
    }
    Some(out)
}

fn min_pairwise_gap(circles: &[IsometricCircle]) -> f64 {
    let mut gap = f64::INFINITY;
    for a in 0..circles.len() {
        for b in a + 1..circles.len() {
            gap = gap.min(circles[a].gap(&circles[b]));
        }
    }
    gap
}

/// Smallest `m <= max_m` whose circles are pairwise disjoint with gap `> tau`.
///
/// Generators of finite order are rejected. Those of unknown order are
/// accepted; a certificate proves their order infinite anyway.
pub fn schottky_certificate(
    units: &[Quaternion],
    max_m: u32,
    tau: f64,
) -> Result<SchottkyCertificate> {
    let d = common_d(units)?;
    if max_m == 0 {
        return Err(FreenessError::ZeroParameter);
    }
    let mut generators = Vec::with_capacity(units.len());
    for (index, u) in units.iter().enumerate() {
        if !u.is_unit_of_order() {
            return Err(FreenessError::NotAUnit { index });
        }
        if let TorsionKind::FiniteOrder(order) = u.torsion_order()?.kind {
            return Err(FreenessError::TorsionGenerator { index, order });
        }
        generators.push(if u.norm().is_one() { u.clone() } else { u * u });
    }
    let conjugators = Conjugator::candidates();
    let mut exact: Vec<Quaternion> = generators.clone();
    for m in 1..=max_m {
        if m > 1 {
            for (p, g) in exact.iter_mut().zip(&generators) {
                *p = &*p * g;
            }
        }
        let powers: Vec<MobiusMatrix> = exact.iter().map(embed).collect();
        for &conj in &conjugators {
            let Some(circles) = circles_for(&powers, conj) else {
                continue;
            };
            let min_gap = min_pairwise_gap(&circles);
            if min_gap > tau {
                return Ok(SchottkyCertificate {
                    d,
                    m,
                    tau,
                    units: units.to_vec(),
                    generators,
                    conjugator: conj,
                    circles,
                    min_gap,
                    cross_check: None,
                });
            }
        }
    }
    Err(FreenessError::NotFound { max_m })
}

/// Gap of the circles at a fixed `m` and conjugator; `None` if any is affine.
pub fn gap_at(generators: &[Quaternion], m: u32, conj: Conjugator) -> Option<f64> {
    let powers: Vec<MobiusMatrix> = generators.iter().map(|g| embed(&g.pow(m))).collect();
    circles_for(&powers, conj).map(|c| min_pairwise_gap(&c))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Letter {
    /// 0-based index into the unit list.
    pub generator: usize,
    pub exponent: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationWord {
    pub letters: Vec<Letter>,
}

impl fmt::Display for RelationWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| format!("u{}^{}", l.generator + 1, l.exponent))
            .collect();
        write!(f, "{} = 1", parts.join(" "))
    }
}

/// First freely reduced word of length `<= max_len` in the letters `u_i^(+-m)`
/// that equals 1, by length and then letter order (`u1^m, u1^-m, u2^m, ...`).
/// Letters are only cancelled against their own inverse, so a list holding
/// both `u` and `u^-1` finds `u * u^-1` at length 2.
///
/// Words are multiplied in the reduction of `H(R)` modulo a large prime, a
/// ring homomorphism: a word that is not 1 there is not 1 exactly. Every word
/// that survives is then multiplied out exactly.
pub fn relation_search(
    units: &[Quaternion],
    m: u32,
    max_len: usize,
) -> Result<Option<RelationWord>> {
    let d = common_d(units)?;
    if m == 0 || max_len == 0 {
        return Err(FreenessError::ZeroParameter);
    }
    let mut letters = Vec::with_capacity(2 * units.len());
    for u in units {
        letters.push(u.pow(m));
        letters.push(u.pow_signed(-i64::from(m))?);
    }
    let search = WordSearch {
        reduced: letters.iter().map(ModQuat::reduce).collect(),
        letters,
        d,
    };
    for len in 1..=max_len {
        let mut word = Vec::with_capacity(len);
        if search.level(&ModQuat::one(), len, &mut word) {
            let exponent = i64::from(m);
            let letters = word
                .into_iter()
                .map(|t| Letter {
                    generator: t / 2,
                    exponent: if t % 2 == 0 { exponent } else { -exponent },
                })
                .collect();
            return Ok(Some(RelationWord { letters }));
        }
    }
    Ok(None)
}

/// `2^61 - 1`.
const P: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(P)) as u64
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    acc
}

fn big_mod(v: &num_bigint::BigInt) -> u64 {
    use num_integer::Integer;
    use num_traits::ToPrimitive;
    v.mod_floor(&num_bigint::BigInt::from(P))
        .to_u64()
        .expect("residue fits")
}

/// Image in `F_P[t]/(t^2 + d)`, coefficients `(a, b)` for `a + b*t`.
#[derive(Clone, Copy, PartialEq, Eq)]
struct ModQuat {
    c: [[u64; 2]; 4],
    neg_d: u64,
}

impl ModQuat {
    fn one() -> Self {
        ModQuat {
            c: [[1, 0], [0, 0], [0, 0], [0, 0]],
            neg_d: 0,
        }
    }

    fn reduce(q: &Quaternion) -> Self {
        let neg_d = big_mod(&num_bigint::BigInt::from(-q.d().get()));
        let c = Basis::ALL.map(|e| {
            let x = q.coeff(e);
            let inv = pow_mod(big_mod(x.den()), P - 2);
            [mul_mod(big_mod(x.a()), inv), mul_mod(big_mod(x.b()), inv)]
        });
        ModQuat { c, neg_d }
    }

    fn is_one(&self) -> bool {
        self.c == ModQuat::one().c
    }

    fn mul(&self, rhs: &ModQuat) -> ModQuat {
        let neg_d = rhs.neg_d;
        let f = |x: [u64; 2], y: [u64; 2]| -> [u64; 2] {
            let re = (mul_mod(x[0], y[0]) + mul_mod(neg_d, mul_mod(x[1], y[1]))) % P;
            let im = (mul_mod(x[0], y[1]) + mul_mod(x[1], y[0])) % P;
            [re, im]
        };
        let add = |x: [u64; 2], y: [u64; 2]| [(x[0] + y[0]) % P, (x[1] + y[1]) % P];
        let sub = |x: [u64; 2], y: [u64; 2]| [(x[0] + P - y[0]) % P, (x[1] + P - y[1]) % P];
        let [a1, b1, c1, d1] = self.c;
        let [a2, b2, c2, d2] = rhs.c;
        ModQuat {
            c: [
                sub(sub(sub(f(a1, a2), f(b1, b2)), f(c1, c2)), f(d1, d2)),
                sub(add(add(f(a1, b2), f(b1, a2)), f(c1, d2)), f(d1, c2)),
                add(add(sub(f(a1, c2), f(b1, d2)), f(c1, a2)), f(d1, b2)),
                add(sub(add(f(a1, d2), f(b1, c2)), f(c1, b2)), f(d1, a2)),
            ],
            neg_d,
        }
    }
}

struct WordSearch {
    letters: Vec<Quaternion>,
    reduced: Vec<ModQuat>,
    d: SquareFreeD,
}

impl WordSearch {
    fn exact_is_one(&self, word: &[usize]) -> bool {
        word.iter()
            .fold(Quaternion::one(self.d), |acc, &t| &acc * &self.letters[t])
            .is_one()
    }

    /// Extends `word` to exactly `remaining` more letters; true once it equals 1.
    fn level(&self, prefix: &ModQuat, remaining: usize, word: &mut Vec<usize>) -> bool {
        if remaining == 0 {
            return prefix.is_one() && self.exact_is_one(word);
        }
        for t in 0..self.reduced.len() {
            if word.last().is_some_and(|&last| last ^ 1 == t) {
                continue;
            }
            word.push(t);
            if self.level(&prefix.mul(&self.reduced[t]), remaining - 1, word) {
                return true;
            }
            word.pop();
        }
        false
    }
}
