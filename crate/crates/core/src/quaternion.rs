//! The quaternion algebra `H(K) = (-1, -1 / K)` over `K = Q(sqrt(-d))` and
//! its order `H(R) = R + Ri + Rj + Rk`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::quadratic::{QuadError, QuadInt, QuadRat, QuadRing, SquareFreeD};

/// Exponent limit for power iteration outside the division-ring case.
pub const TORSION_POWER_LIMIT: u32 = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuaternionError {
    #[error("operands belong to different algebras (d = {left} vs d = {right})")]
    AlgebraMismatch { left: i64, right: i64 },
    #[error("coefficient is not an element of Q(sqrt({expected}))")]
    CoefficientField { expected: i64 },
    #[error("element has zero norm and is not invertible")]
    ZeroNorm,
    #[error("{0} is not a unit of H(R)")]
    NotAUnit(String),
    #[error(transparent)]
    Quad(#[from] QuadError),
}

pub type Result<T> = std::result::Result<T, QuaternionError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    One,
    I,
    J,
    K,
}

impl Basis {
    pub const ALL: [Basis; 4] = [Basis::One, Basis::I, Basis::J, Basis::K];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Basis::One => "1",
            Basis::I => "i",
            Basis::J => "j",
            Basis::K => "k",
        }
    }

    pub fn parse(s: &str) -> Option<Basis> {
        match s {
            "1" => Some(Basis::One),
            "i" => Some(Basis::I),
            "j" => Some(Basis::J),
            "k" => Some(Basis::K),
            _ => None,
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl Serialize for Basis {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.symbol())
    }
}

/// `c1 + ci*i + cj*j + ck*k` with coefficients in `K = Q(sqrt(-d))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quaternion {
    d: SquareFreeD,
    c: [QuadRat; 4],
}

impl Quaternion {
    pub fn new(d: SquareFreeD, coeffs: [QuadRat; 4]) -> Result<Self> {
        let ring = QuadRing::imaginary(d);
        if coeffs.iter().any(|c| c.ring() != ring) {
            return Err(QuaternionError::CoefficientField {
                expected: ring.radicand(),
            });
        }
        Ok(Quaternion { d, c: coeffs })
    }

    /// Build from `(a, b, den)` triples meaning `(a + b*sqrt(-d))/den`.
    pub fn from_parts<T: Into<BigInt>>(d: SquareFreeD, parts: [(T, T, T); 4]) -> Self {
        let ring = QuadRing::imaginary(d);
        let c = parts.map(|(a, b, den)| QuadRat::new(ring, a, b, den));
        Quaternion { d, c }
    }

    /// Integer coefficients, no `sqrt(-d)` parts.
    pub fn from_integers(d: SquareFreeD, coeffs: [i64; 4]) -> Self {
        Quaternion::from_parts(d, coeffs.map(|a| (a, 0, 1)))
    }

    pub fn zero(d: SquareFreeD) -> Self {
        Quaternion::scalar(d, QuadRat::zero(QuadRing::imaginary(d)))
    }

    pub fn one(d: SquareFreeD) -> Self {
        Quaternion::scalar(d, QuadRat::one(QuadRing::imaginary(d)))
    }

    pub fn scalar(d: SquareFreeD, value: QuadRat) -> Self {
        let zero = QuadRat::zero(QuadRing::imaginary(d));
        Quaternion {
            d,
            c: [value, zero.clone(), zero.clone(), zero],
        }
    }

    pub fn basis(d: SquareFreeD, e: Basis) -> Self {
        Quaternion::zero(d).with_coeff(e, QuadRat::one(QuadRing::imaginary(d)))
    }

    /// Same element with the coefficient at `e` replaced.
    pub fn with_coeff(mut self, e: Basis, value: QuadRat) -> Self {
        assert_eq!(value.ring(), self.ring(), "coefficient outside K");
        self.c[e.index()] = value;
        self
    }

    pub fn d(&self) -> SquareFreeD {
        self.d
    }

    /// Ring of integers `R` of the coefficient field.
    pub fn ring(&self) -> QuadRing {
        QuadRing::imaginary(self.d)
    }

    pub fn coeff(&self, e: Basis) -> &QuadRat {
        &self.c[e.index()]
    }

    pub fn coeffs(&self) -> &[QuadRat; 4] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(QuadRat::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(QuadRat::is_zero)
    }

    fn check(&self, other: &Quaternion) -> Result<()> {
        if self.d == other.d {
            Ok(())
        } else {
            Err(QuaternionError::AlgebraMismatch {
                left: self.d.get(),
                right: other.d.get(),
            })
        }
    }

    pub fn try_mul(&self, rhs: &Quaternion) -> Result<Quaternion> {
        self.check(rhs)?;
        let [a1, b1, c1, d1] = &self.c;
        let [a2, b2, c2, d2] = &rhs.c;
        let m = |x: &QuadRat, y: &QuadRat| x * y;
        // i^2 = j^2 = -1, ij = -ji = k
        let one = &(&m(a1, a2) - &m(b1, b2)) - &(&m(c1, c2) + &m(d1, d2));
        let i = &(&m(a1, b2) + &m(b1, a2)) + &(&m(c1, d2) - &m(d1, c2));
        let j = &(&m(a1, c2) - &m(b1, d2)) + &(&m(c1, a2) + &m(d1, b2));
        let k = &(&m(a1, d2) + &m(b1, c2)) + &(&m(d1, a2) - &m(c1, b2));
        Ok(Quaternion {
            d: self.d,
            c: [one, i, j, k],
        })
    }

    pub fn try_add(&self, rhs: &Quaternion) -> Result<Quaternion> {
        self.check(rhs)?;
        Ok(Quaternion {
            d: self.d,
            c: std::array::from_fn(|t| &self.c[t] + &rhs.c[t]),
        })
    }

    pub fn scale(&self, k: &QuadRat) -> Quaternion {
        Quaternion {
            d: self.d,
            c: std::array::from_fn(|t| &self.c[t] * k),
        }
    }

    /// `eta(x) = x1^2 + xi^2 + xj^2 + xk^2` (the norm form with `a = b = -1`).
    pub fn norm(&self) -> QuadRat {
        self.c
            .iter()
            .map(|x| x * x)
            .fold(QuadRat::zero(self.ring()), |acc, x| &acc + &x)
    }

    pub fn conj(&self) -> Quaternion {
        Quaternion {
            d: self.d,
            c: [self.c[0].clone(), -&self.c[1], -&self.c[2], -&self.c[3]],
        }
    }

    pub fn inverse(&self) -> Result<Quaternion> {
        let n = self.norm().inverse().ok_or(QuaternionError::ZeroNorm)?;
        Ok(self.conj().scale(&n))
    }

    pub fn pow(&self, exp: u32) -> Quaternion {
        let mut result = Quaternion::one(self.d);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn pow_signed(&self, exp: i64) -> Result<Quaternion> {
        let base = if exp < 0 {
            self.inverse()?
        } else {
            self.clone()
        };
        let e = u32::try_from(exp.unsigned_abs()).expect("exponent fits in u32");
        Ok(base.pow(e))
    }

    /// Basis elements carrying a nonzero coefficient, in the order `1, i, j, k`.
    pub fn support(&self) -> Vec<Basis> {
        Basis::ALL
            .into_iter()
            .filter(|e| !self.coeff(*e).is_zero())
            .collect()
    }

    /// All four coefficients lie in `R`.
    pub fn in_order(&self) -> bool {
        self.c.iter().all(QuadRat::is_integral)
    }

    /// `u` is in `H(R)` and `eta(u)` is a unit of `R`.
    pub fn is_unit_of_order(&self) -> bool {
        self.in_order() && self.norm().to_quad_int().is_some_and(|n| n.is_unit())
    }

    /// Returns `(2*c1, eta(u))`, checking `u^2 = 2*c1*u - eta(u)` exactly.
    pub fn square_reduce(&self) -> (QuadRat, QuadRat) {
        let trace = &self.c[0] + &self.c[0];
        let norm = self.norm();
        let rhs = &self.scale(&trace) - &Quaternion::scalar(self.d, norm.clone());
        assert_eq!(&(self * self), &rhs, "u^2 = 2 u1 u - eta(u) failed");
        (trace, norm)
    }

    /// Reorder coefficients: the new coefficient at position `t` is the old
    /// coefficient at `order[t]`. Any permutation preserves `eta` and `H(R)`.
    pub fn permute_coefficients(&self, order: [Basis; 4]) -> Quaternion {
        Quaternion {
            d: self.d,
            c: order.map(|e| self.coeff(e).clone()),
        }
    }

    pub fn torsion_order(&self) -> Result<TorsionVerdict> {
        if !self.is_unit_of_order() {
            return Err(QuaternionError::NotAUnit(crate::literal::format_unit(self)));
        }
        if is_division(self.d) {
            return Ok(self.division_torsion());
        }
        let mut power = self.clone();
        for n in 1..=TORSION_POWER_LIMIT {
            if power.is_one() {
                return Ok(TorsionVerdict {
                    kind: TorsionKind::FiniteOrder(n),
                    justification: TorsionJustification::PowerIteration {
                        max_exponent: TORSION_POWER_LIMIT,
                    },
                });
            }
            power = &power * self;
        }
        Ok(TorsionVerdict {
            kind: TorsionKind::Unknown,
            justification: TorsionJustification::PowerIteration {
                max_exponent: TORSION_POWER_LIMIT,
            },
        })
    }

    fn division_torsion(&self) -> TorsionVerdict {
        let norm = self.norm();
        if !norm.is_one() {
            // units of R are +-1 here, so eta = -1
            return TorsionVerdict {
                kind: TorsionKind::Infinite,
                justification: TorsionJustification::NegativeNorm,
            };
        }
        let order = match self.c[0].as_integer().and_then(|t| i8::try_from(t).ok()) {
            Some(1) => 1,
            Some(-1) => 2,
            Some(0) => 4,
            _ => {
                return TorsionVerdict {
                    kind: TorsionKind::Infinite,
                    justification: TorsionJustification::TraceCriterion,
                }
            }
        };
        assert!(
            self.pow(order).is_one(),
            "torsion order {order} failed exact check"
        );
        if order == 4 {
            assert!(!self.pow(2).is_one());
        }
        TorsionVerdict {
            kind: TorsionKind::FiniteOrder(order),
            justification: TorsionJustification::TraceCriterion,
        }
    }
}

impl Mul for &Quaternion {
    type Output = Quaternion;
    fn mul(self, rhs: &Quaternion) -> Quaternion {
        self.try_mul(rhs).expect("algebra mismatch")
    }
}

impl Add for &Quaternion {
    type Output = Quaternion;
    fn add(self, rhs: &Quaternion) -> Quaternion {
        self.try_add(rhs).expect("algebra mismatch")
    }
}

impl Sub for &Quaternion {
    type Output = Quaternion;
    fn sub(self, rhs: &Quaternion) -> Quaternion {
        self.try_add(&-rhs).expect("algebra mismatch")
    }
}

impl Neg for &Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion {
            d: self.d,
            c: std::array::from_fn(|t| -&self.c[t]),
        }
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::literal::format_unit(self))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TorsionKind {
    FiniteOrder(u32),
    Infinite,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TorsionJustification {
    /// Division ring, `eta = 1`: torsion iff `c1` is `-1`, `0` or `1`.
    TraceCriterion,
    /// Division ring, `eta = -1`: never torsion.
    NegativeNorm,
    /// Exact powers up to `max_exponent`.
    PowerIteration { max_exponent: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TorsionVerdict {
    pub kind: TorsionKind,
    pub justification: TorsionJustification,
}

/// `{kind, order, justification, max_exponent?}` with `order` null unless finite.
impl Serialize for TorsionVerdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let (kind, order) = match self.kind {
            TorsionKind::FiniteOrder(n) => ("FiniteOrder", Some(n)),
            TorsionKind::Infinite => ("Infinite", None),
            TorsionKind::Unknown => ("Unknown", None),
        };
        let mut st = s.serialize_struct("TorsionVerdict", 4)?;
        st.serialize_field("kind", kind)?;
        st.serialize_field("order", &order)?;
        match self.justification {
            TorsionJustification::TraceCriterion => {
                st.serialize_field("justification", "TraceCriterion")?
            }
            TorsionJustification::NegativeNorm => {
                st.serialize_field("justification", "NegativeNorm")?
            }
            TorsionJustification::PowerIteration { max_exponent } => {
                st.serialize_field("justification", "PowerIteration")?;
                st.serialize_field("max_exponent", &max_exponent)?;
            }
        }
        st.end()
    }
}

impl fmt::Display for TorsionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TorsionKind::FiniteOrder(n) => write!(f, "order {n}"),
            TorsionKind::Infinite => f.write_str("infinite order"),
            TorsionKind::Unknown => {
                write!(f, "order unknown (no power <= {TORSION_POWER_LIMIT} is 1)")
            }
        }
    }
}

/// `H(Q(sqrt(-d)))` is a division ring.
pub fn is_division(d: SquareFreeD) -> bool {
    d.get() > 0 && d.residue(8) == 7
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stufe {
    One,
    Two,
    Four,
    Infinite,
}

impl Stufe {
    pub fn value(self) -> Option<u32> {
        match self {
            Stufe::One => Some(1),
            Stufe::Two => Some(2),
            Stufe::Four => Some(4),
            Stufe::Infinite => None,
        }
    }
}

impl fmt::Display for Stufe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(v) => write!(f, "{v}"),
            None => f.write_str("infinity"),
        }
    }
}

impl Serialize for Stufe {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.value() {
            Some(v) => s.serialize_u32(v),
            None => s.serialize_str("infinity"),
        }
    }
}

/// Level of `K = Q(sqrt(-d))`.
pub fn stufe(d: SquareFreeD) -> Stufe {
    match d.get() {
        v if v < 0 => Stufe::Infinite,
        1 => Stufe::One,
        _ if d.residue(8) == 7 => Stufe::Four,
        _ => Stufe::Two,
    }
}

fn small_int_key(t: i64) -> (u64, bool) {
    (t.unsigned_abs(), t < 0)
}

/// Elements `x + y*omega` of `R` with `max(|x|, |y|) <= h`, ordered by height,
/// then by `y`, then by `x` (each as `0, 1, -1, 2, -2, ...`).
fn coefficients_up_to(ring: QuadRing, h: i64) -> Vec<QuadInt> {
    let mut pairs: Vec<(i64, i64)> = (-h..=h)
        .flat_map(|x| (-h..=h).map(move |y| (x, y)))
        .collect();
    pairs.sort_by_key(|&(x, y)| (x.abs().max(y.abs()), small_int_key(y), small_int_key(x)));
    pairs
        .into_iter()
        .map(|(x, y)| QuadInt::new(ring, x, y))
        .collect()
}

/// A nonzero `u` in `H(R)` with `eta(u) = 0` and every coefficient of height
/// at most `bound`, searching heights `1, 2, ..., bound` in order.
pub fn find_zero_divisor(d: SquareFreeD, bound: u32) -> Option<Quaternion> {
    let ring = QuadRing::imaginary(d);
    for h in 1..=i64::from(bound) {
        let coeffs = coefficients_up_to(ring, h);
        let squares: Vec<QuadInt> = coeffs.iter().map(|c| c * c).collect();
        let n = coeffs.len();
        let pairs = || (0..n).flat_map(move |outer| (0..n).map(move |inner| (outer, inner)));

        // (c1, ci) keyed by c1^2 + ci^2; ci is the outer loop
        let mut first_pair: HashMap<QuadInt, (usize, usize)> = HashMap::new();
        let mut first_nonzero_null: Option<(usize, usize)> = None;
        for (ci, c1) in pairs() {
            let key = &squares[c1] + &squares[ci];
            if key.is_zero()
                && first_nonzero_null.is_none()
                && !(coeffs[c1].is_zero() && coeffs[ci].is_zero())
            {
                first_nonzero_null = Some((c1, ci));
            }
            first_pair.entry(key).or_insert((c1, ci));
        }

        for (cj, ck) in pairs() {
            let target = -&(&squares[cj] + &squares[ck]);
            let outer_zero = coeffs[cj].is_zero() && coeffs[ck].is_zero();
            let hit = if outer_zero {
                first_nonzero_null
            } else {
                first_pair.get(&target).copied()
            };
            if let Some((c1, ci)) = hit {
                let u = Quaternion {
                    d,
                    c: [&coeffs[c1], &coeffs[ci], &coeffs[cj], &coeffs[ck]].map(QuadInt::to_rat),
                };
                debug_assert!(u.norm().is_zero() && !u.is_zero());
                return Some(u);
            }
        }
    }
    None
}

/// Numerator triple `(a, b, den)` of a coefficient, `(a + b*sqrt(-d))/den`.
pub fn coefficient_parts(c: &QuadRat) -> (BigInt, BigInt, BigInt) {
    (c.a().clone(), c.b().clone(), c.den().clone())
}

impl Quaternion {
    /// `true` when the element is `+1` or `-1`.
    pub fn is_plus_minus_one(&self) -> bool {
        self.c[1..].iter().all(QuadRat::is_zero)
            && self.c[0].as_integer().is_some_and(|t| t.abs().is_one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sf(v: i64) -> SquareFreeD {
        SquareFreeD::new(v).unwrap()
    }

    fn q(d: i64, parts: [(i64, i64, i64); 4]) -> Quaternion {
        Quaternion::from_parts(sf(d), parts)
    }

    #[test]
    fn hamilton_relations() {
        let d = sf(7);
        let (one, i, j, k) = (
            Quaternion::one(d),
            Quaternion::basis(d, Basis::I),
            Quaternion::basis(d, Basis::J),
            Quaternion::basis(d, Basis::K),
        );
        assert_eq!(&i * &j, k);
        assert_eq!(&j * &i, -&k);
        assert_eq!(&i * &i, -&one);
        assert_eq!(&j * &j, -&one);
        assert_eq!(&k * &k, -&one);
        let u = q(7, [(0, 3, 1), (8, 0, 1), (0, 0, 1), (0, 0, 1)]);
        assert_eq!(&u * &one, u);
    }

    #[test]
    fn mixed_algebras_rejected() {
        let a = Quaternion::one(sf(7));
        let b = Quaternion::one(sf(15));
        assert!(matches!(
            a.try_mul(&b),
            Err(QuaternionError::AlgebraMismatch { .. })
        ));
    }

    #[test]
    fn norms() {
        let v = q(7, [(0, 6, 1), (15, 0, 1), (5, 0, 1), (1, 0, 1)]);
        assert_eq!(v.norm(), QuadRat::from_int(v.ring(), -1));
        assert!(Quaternion::one(sf(7)).norm().is_one());
        let u = q(7, [(0, 3, 1), (8, 0, 1), (0, 0, 1), (0, 0, 1)]);
        assert!(u.norm().is_one());
    }

    #[test]
    fn inverses() {
        let d = sf(7);
        let i = Quaternion::basis(d, Basis::I);
        assert_eq!(i.inverse().unwrap(), -&i);
        let u = q(7, [(0, 3, 1), (8, 0, 1), (0, 0, 1), (0, 0, 1)]);
        assert_eq!(u.inverse().unwrap(), u.conj());
        assert!((&u * &u.inverse().unwrap()).is_one());
        let zd = q(1, [(0, 1, 1), (1, 0, 1), (0, 0, 1), (0, 0, 1)]);
        assert_eq!(zd.inverse(), Err(QuaternionError::ZeroNorm));
    }

    #[test]
    fn supports() {
        let v = q(7, [(0, 6, 1), (15, 0, 1), (5, 0, 1), (1, 0, 1)]);
        assert_eq!(v.support(), Basis::ALL.to_vec());
        let u = q(7, [(0, 3, 1), (8, 0, 1), (0, 0, 1), (0, 0, 1)]);
        assert_eq!(u.support(), vec![Basis::One, Basis::I]);
        assert!(Quaternion::zero(sf(7)).support().is_empty());
    }

    #[test]
    fn order_membership() {
        assert!(q(7, [(1, 1, 2), (1, -1, 2), (2, 0, 1), (0, 0, 1)]).in_order());
        assert!(!q(7, [(1, 0, 2), (1, 0, 2), (1, 0, 2), (1, 0, 2)]).in_order());
        assert!(Quaternion::one(sf(7)).in_order());
        // d = 2: R = Z[sqrt(-2)] has no half-integers
        assert!(!q(2, [(1, 1, 2), (0, 0, 1), (0, 0, 1), (0, 0, 1)]).in_order());
    }

    #[test]
    fn units_of_order() {
        assert!(q(7, [(0, 6, 1), (15, 0, 1), (5, 0, 1), (1, 0, 1)]).is_unit_of_order());
        assert!(!Quaternion::from_integers(sf(7), [2, 1, 0, 0]).is_unit_of_order());
        assert!(Quaternion::basis(sf(7), Basis::K).is_unit_of_order());
        // d = 1: eta(sqrt(-1)) = -1, while eta(1 + sqrt(-1)) = 2 sqrt(-1) has norm 4
        assert!(q(1, [(0, 1, 1), (0, 0, 1), (0, 0, 1), (0, 0, 1)]).is_unit_of_order());
        assert!(!q(1, [(1, 1, 1), (0, 0, 1), (0, 0, 1), (0, 0, 1)]).is_unit_of_order());
    }

    #[test]
    fn square_reduction() {
        let i = Quaternion::basis(sf(7), Basis::I);
        let (t, n) = i.square_reduce();
        assert!(t.is_zero() && n.is_one());
        let u = q(7, [(0, 3, 1), (8, 0, 1), (0, 0, 1), (0, 0, 1)]);
        let (t, _) = u.square_reduce();
        assert_eq!(t, QuadRat::sqrt_multiple(u.ring(), 6));
        let (t, n) = Quaternion::one(sf(7)).square_reduce();
        assert_eq!(t, QuadRat::from_int(n.ring(), 2));
    }

    #[test]
    fn torsion_examples() {
        let d = sf(7);
        let i = Quaternion::basis(d, Basis::I);
        assert_eq!(i.torsion_order().unwrap().kind, TorsionKind::FiniteOrder(4));
        let v = q(7, [(0, 6, 1), (15, 0, 1), (5, 0, 1), (1, 0, 1)]);
        let t = v.torsion_order().unwrap();
        assert_eq!(t.kind, TorsionKind::Infinite);
        assert_eq!(t.justification, TorsionJustification::NegativeNorm);
        let u = q(7, [(0, 3, 1), (8, 0, 1), (0, 0, 1), (0, 0, 1)]);
        assert_eq!(u.torsion_order().unwrap().kind, TorsionKind::Infinite);
        assert_eq!(
            Quaternion::one(d).torsion_order().unwrap().kind,
            TorsionKind::FiniteOrder(1)
        );
        assert_eq!(
            (-&Quaternion::one(d)).torsion_order().unwrap().kind,
            TorsionKind::FiniteOrder(2)
        );
        assert!(matches!(
            Quaternion::from_integers(d, [2, 1, 0, 0]).torsion_order(),
            Err(QuaternionError::NotAUnit(_))
        ));
    }

    #[test]
    fn torsion_outside_division_case() {
        // d = 3: the sixth root of unity (1 + sqrt(-3))/2 is a central unit of order 6
        let w = q(3, [(1, 1, 2), (0, 0, 1), (0, 0, 1), (0, 0, 1)]);
        let t = w.torsion_order().unwrap();
        assert_eq!(t.kind, TorsionKind::FiniteOrder(6));
        // d = 2: sqrt(-2) i + j squares to 1
        let u = q(2, [(0, 0, 1), (0, 1, 1), (1, 0, 1), (0, 0, 1)]);
        assert_eq!(u.torsion_order().unwrap().kind, TorsionKind::FiniteOrder(2));
        // d = 2: 3 + 2 sqrt(-2) i comes from 3 + 2 sqrt 2 and has infinite order
        let u = q(2, [(3, 0, 1), (0, 2, 1), (0, 0, 1), (0, 0, 1)]);
        assert!(u.norm().is_one());
        assert_eq!(u.torsion_order().unwrap().kind, TorsionKind::Unknown);
    }

    #[test]
    fn division_and_stufe() {
        assert!(is_division(sf(7)));
        assert!(!is_division(sf(3)));
        assert!(is_division(sf(15)));
        assert!(!is_division(sf(-7)));
        assert_eq!(stufe(sf(7)), Stufe::Four);
        assert_eq!(stufe(sf(1)), Stufe::One);
        assert_eq!(stufe(sf(3)), Stufe::Two);
        assert_eq!(stufe(sf(-2)), Stufe::Infinite);
    }

    #[test]
    fn stufe_three_witness() {
        // ((1 + sqrt(-3))/2)^2 + ((1 - sqrt(-3))/2)^2 = -1
        let r = QuadRing::imaginary(sf(3));
        let a = QuadRat::new(r, 1, 1, 2);
        let b = QuadRat::new(r, 1, -1, 2);
        assert_eq!(&(&a * &a) + &(&b * &b), QuadRat::from_int(r, -1));
    }

    #[test]
    fn zero_divisor_examples() {
        let u = find_zero_divisor(sf(1), 1).unwrap();
        assert_eq!(u, q(1, [(0, 1, 1), (1, 0, 1), (0, 0, 1), (0, 0, 1)]));
        assert!(find_zero_divisor(sf(7), 3).is_none());
        let u = find_zero_divisor(sf(3), 2).unwrap();
        assert!(u.norm().is_zero() && !u.is_zero() && u.in_order());
    }

    #[test]
    fn permutation_preserves_norm() {
        let v = q(7, [(0, 6, 1), (15, 0, 1), (5, 0, 1), (1, 0, 1)]);
        let w = v.permute_coefficients([Basis::K, Basis::J, Basis::One, Basis::I]);
        assert_eq!(w.norm(), v.norm());
        assert_eq!(w.coeff(Basis::J), v.coeff(Basis::One));
    }
}
