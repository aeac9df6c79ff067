//! Exact arithmetic in quadratic fields `Q(sqrt(D))` and their rings of integers.
//!
//! Two representations are used side by side:
//!
//! * [`QuadInt`] stores `x + y*omega` over the integral basis `{1, omega}` where
//!   `omega = sqrt(D)` for `D = 2, 3 (mod 4)` and `omega = (1 + sqrt(D))/2` for
//!   `D = 1 (mod 4)`.
//! * [`QuadRat`] stores `(a + b*sqrt(D))/den` in lowest terms, which is what the
//!   quaternion coefficients and all external displays use.
//!
//! The module also hosts the integer solvers the unit constructors consume:
//! the Pell equation via continued fractions, Legendre three-squares
//! decompositions and the `m^2 + 2p^2 = n` enumerator.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

/// Default exhaustive-search bound for [`three_squares`].
pub const DEFAULT_THREE_SQUARES_BOUND: u64 = 1_000_000;

/// Default `y` bound for the brute-force Pell scan.
pub const DEFAULT_PELL_ORACLE_BOUND: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadError {
    #[error("{0} is not square-free")]
    NotSquareFree(i64),
    #[error("{0} is not an admissible value (0 and -1 are excluded)")]
    ExcludedParameter(i64),
    #[error("Q(sqrt({0})) is not a quadratic field")]
    NotAQuadraticField(i64),
    #[error("operands live in different rings: Q(sqrt({left})) vs Q(sqrt({right}))")]
    RingMismatch { left: i64, right: i64 },
    #[error("Pell equation needs a nonsquare D > 1, got {0}")]
    NotPellRadicand(i64),
    #[error("({x}, {y}) does not solve x^2 - {d}y^2 = +-1")]
    NotAPellSolution { d: i64, x: BigInt, y: BigInt },
    #[error("{n} = 4^{a}(8*{b} + 7) is not a sum of three squares")]
    NotRepresentable { n: u64, a: u32, b: u64 },
}

pub type Result<T> = std::result::Result<T, QuadError>;

pub fn is_square_free(v: i64) -> bool {
    if v == 0 {
        return false;
    }
    let mut n = v.unsigned_abs();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// A square-free integer other than `0` and `-1`.
///
/// This is the parameter `d` of the imaginary-quadratic family `Q(sqrt(-d))`;
/// negative values give real quadratic fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct SquareFreeD(i64);

impl SquareFreeD {
    pub fn new(value: i64) -> Result<Self> {
        if value == 0 || value == -1 {
            return Err(QuadError::ExcludedParameter(value));
        }
        if !is_square_free(value) {
            return Err(QuadError::NotSquareFree(value));
        }
        Ok(SquareFreeD(value))
    }

    pub fn get(self) -> i64 {
        self.0
    }

    /// `d mod m` in `0..m`.
    pub fn residue(self, m: i64) -> i64 {
        self.0.rem_euclid(m)
    }
}

impl fmt::Display for SquareFreeD {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum OmegaKind {
    /// `omega = sqrt(D)`
    Sqrt,
    /// `omega = (1 + sqrt(D))/2`
    HalfPlusSqrt,
}

/// The ring of integers of `Q(sqrt(radicand))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadRing {
    radicand: i64,
    omega: OmegaKind,
}

impl QuadRing {
    /// Ring of integers of `Q(sqrt(radicand))` for any square-free radicand
    /// other than `0` and `1`. Unlike [`ring_of`] this accepts `-1`, which is
    /// needed for `Q(sqrt(-d))` at `d = 1`.
    pub fn new(radicand: i64) -> Result<Self> {
        if radicand == 0 || radicand == 1 {
            return Err(QuadError::NotAQuadraticField(radicand));
        }
        if !is_square_free(radicand) {
            return Err(QuadError::NotSquareFree(radicand));
        }
        let omega = if radicand.rem_euclid(4) == 1 {
            OmegaKind::HalfPlusSqrt
        } else {
            OmegaKind::Sqrt
        };
        Ok(QuadRing { radicand, omega })
    }

    /// Ring of integers of `K = Q(sqrt(-d))`.
    pub fn imaginary(d: SquareFreeD) -> Self {
        QuadRing::new(-d.get())
            .expect("-d is square-free and not 0 or 1 for d in the admissible set")
    }

    pub fn radicand(&self) -> i64 {
        self.radicand
    }

    pub fn omega(&self) -> OmegaKind {
        self.omega
    }

    fn check(&self, other: &QuadRing) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(QuadError::RingMismatch {
                left: self.radicand,
                right: other.radicand,
            })
        }
    }
}

/// Ring of integers of `Q(sqrt(D))` for `D` in the admissible set.
pub fn ring_of(d: SquareFreeD) -> Result<QuadRing> {
    QuadRing::new(d.get())
}

/// `x + y*omega` in the ring of integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadInt {
    ring: QuadRing,
    pub x: BigInt,
    pub y: BigInt,
}

impl QuadInt {
    pub fn new(ring: QuadRing, x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        QuadInt {
            ring,
            x: x.into(),
            y: y.into(),
        }
    }

    pub fn from_int(ring: QuadRing, x: impl Into<BigInt>) -> Self {
        QuadInt::new(ring, x, 0)
    }

    pub fn zero(ring: QuadRing) -> Self {
        QuadInt::from_int(ring, 0)
    }

    pub fn one(ring: QuadRing) -> Self {
        QuadInt::from_int(ring, 1)
    }

    pub fn ring(&self) -> QuadRing {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// `max(|x|, |y|)` over the integral basis.
    pub fn height(&self) -> BigInt {
        self.x.abs().max(self.y.abs())
    }

    pub fn checked_add(&self, rhs: &QuadInt) -> Result<QuadInt> {
        self.ring.check(&rhs.ring)?;
        Ok(QuadInt::new(self.ring, &self.x + &rhs.x, &self.y + &rhs.y))
    }

    pub fn checked_sub(&self, rhs: &QuadInt) -> Result<QuadInt> {
        self.ring.check(&rhs.ring)?;
        Ok(QuadInt::new(self.ring, &self.x - &rhs.x, &self.y - &rhs.y))
    }

    pub fn checked_mul(&self, rhs: &QuadInt) -> Result<QuadInt> {
        self.ring.check(&rhs.ring)?;
        let d = BigInt::from(self.ring.radicand);
        let xx = &self.x * &rhs.x;
        let cross = &self.x * &rhs.y + &self.y * &rhs.x;
        let yy = &self.y * &rhs.y;
        Ok(match self.ring.omega {
            // omega^2 = D
            OmegaKind::Sqrt => QuadInt::new(self.ring, xx + yy * d, cross),
            // omega^2 = omega + (D - 1)/4
            OmegaKind::HalfPlusSqrt => {
                let c = (d - 1) / 4;
                QuadInt::new(self.ring, xx + &yy * c, cross + yy)
            }
        })
    }

    pub fn conj(&self) -> QuadInt {
        match self.ring.omega {
            OmegaKind::Sqrt => QuadInt::new(self.ring, self.x.clone(), -&self.y),
            // conj(omega) = 1 - omega
            OmegaKind::HalfPlusSqrt => QuadInt::new(self.ring, &self.x + &self.y, -&self.y),
        }
    }

    /// The field norm `a * conj(a)`.
    pub fn norm(&self) -> BigInt {
        let d = BigInt::from(self.ring.radicand);
        match self.ring.omega {
            OmegaKind::Sqrt => &self.x * &self.x - d * &self.y * &self.y,
            OmegaKind::HalfPlusSqrt => {
                &self.x * &self.x
                    + &self.x * &self.y
                    + &self.y * &self.y * ((BigInt::one() - d) / 4)
            }
        }
    }

    pub fn is_unit(&self) -> bool {
        let n = self.norm();
        n.is_one() || (-n).is_one()
    }

    pub fn pow(&self, exp: u32) -> QuadInt {
        let mut result = QuadInt::one(self.ring);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        result
    }

    /// Inverse of a unit, `None` otherwise.
    pub fn unit_inverse(&self) -> Option<QuadInt> {
        let n = self.norm();
        if n.is_one() {
            Some(self.conj())
        } else if (-&n).is_one() {
            Some(-&self.conj())
        } else {
            None
        }
    }

    /// Integer power with negative exponents allowed for units.
    pub fn pow_signed(&self, exp: i64) -> Option<QuadInt> {
        let base = if exp < 0 {
            self.unit_inverse()?
        } else {
            self.clone()
        };
        Some(base.pow(u32::try_from(exp.unsigned_abs()).ok()?))
    }

    pub fn to_rat(&self) -> QuadRat {
        match self.ring.omega {
            OmegaKind::Sqrt => QuadRat::new(self.ring, self.x.clone(), self.y.clone(), 1),
            // x + y(1 + sqrt D)/2 = (2x + y + y sqrt D)/2
            OmegaKind::HalfPlusSqrt => QuadRat::new(
                self.ring,
                BigInt::from(2) * &self.x + &self.y,
                self.y.clone(),
                2,
            ),
        }
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_rat().fmt(f)
    }
}

macro_rules! forward_ops {
    ($t:ty) => {
        impl Add for &$t {
            type Output = $t;
            fn add(self, rhs: &$t) -> $t {
                self.checked_add(rhs).expect("ring mismatch")
            }
        }
        impl Sub for &$t {
            type Output = $t;
            fn sub(self, rhs: &$t) -> $t {
                self.checked_sub(rhs).expect("ring mismatch")
            }
        }
        impl Mul for &$t {
            type Output = $t;
            fn mul(self, rhs: &$t) -> $t {
                self.checked_mul(rhs).expect("ring mismatch")
            }
        }
    };
}

forward_ops!(QuadInt);
forward_ops!(QuadRat);

impl Neg for &QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt::new(self.ring, -&self.x, -&self.y)
    }
}

/// `(a + b*sqrt(D))/den` in lowest terms with `den > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadRat {
    ring: QuadRing,
    a: BigInt,
    b: BigInt,
    den: BigInt,
}

impl QuadRat {
    /// Panics if `den` is zero.
    pub fn new(
        ring: QuadRing,
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        den: impl Into<BigInt>,
    ) -> Self {
        let (mut a, mut b, mut den) = (a.into(), b.into(), den.into());
        assert!(!den.is_zero(), "zero denominator");
        if den.is_negative() {
            a = -a;
            b = -b;
            den = -den;
        }
        let g = a.gcd(&b).gcd(&den);
        if !g.is_one() {
            a /= &g;
            b /= &g;
            den /= &g;
        }
        QuadRat { ring, a, b, den }
    }

    pub fn from_int(ring: QuadRing, a: impl Into<BigInt>) -> Self {
        QuadRat::new(ring, a, 0, 1)
    }

    pub fn zero(ring: QuadRing) -> Self {
        QuadRat::from_int(ring, 0)
    }

    pub fn one(ring: QuadRing) -> Self {
        QuadRat::from_int(ring, 1)
    }

    /// `m * sqrt(D)`
    pub fn sqrt_multiple(ring: QuadRing, m: impl Into<BigInt>) -> Self {
        QuadRat::new(ring, 0, m, 1)
    }

    pub fn ring(&self) -> QuadRing {
        self.ring
    }

    /// Rational part numerator.
    pub fn a(&self) -> &BigInt {
        &self.a
    }

    /// `sqrt(D)` part numerator.
    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.den.is_one()
    }

    /// The value as a rational integer, if it is one.
    pub fn as_integer(&self) -> Option<&BigInt> {
        (self.b.is_zero() && self.den.is_one()).then_some(&self.a)
    }

    /// `m` when the value is `m * sqrt(D)` with `m` a nonzero integer.
    pub fn as_sqrt_multiple(&self) -> Option<&BigInt> {
        (self.a.is_zero() && !self.b.is_zero() && self.den.is_one()).then_some(&self.b)
    }

    /// The value as an element of the ring of integers, if it lies there.
    pub fn to_quad_int(&self) -> Option<QuadInt> {
        match self.ring.omega {
            OmegaKind::Sqrt => {
                if self.den.is_one() {
                    Some(QuadInt::new(self.ring, self.a.clone(), self.b.clone()))
                } else {
                    None
                }
            }
            OmegaKind::HalfPlusSqrt => {
                // value = x + y/2 + (y/2) sqrt D
                let two_b = BigInt::from(2) * &self.b;
                let a_minus_b = &self.a - &self.b;
                if two_b.is_multiple_of(&self.den) && a_minus_b.is_multiple_of(&self.den) {
                    Some(QuadInt::new(
                        self.ring,
                        a_minus_b / &self.den,
                        two_b / &self.den,
                    ))
                } else {
                    None
                }
            }
        }
    }

    pub fn is_integral(&self) -> bool {
        self.to_quad_int().is_some()
    }

    pub fn checked_add(&self, rhs: &QuadRat) -> Result<QuadRat> {
        self.ring.check(&rhs.ring)?;
        if self.den == rhs.den {
            return Ok(QuadRat::new(
                self.ring,
                &self.a + &rhs.a,
                &self.b + &rhs.b,
                self.den.clone(),
            ));
        }
        Ok(QuadRat::new(
            self.ring,
            &self.a * &rhs.den + &rhs.a * &self.den,
            &self.b * &rhs.den + &rhs.b * &self.den,
            &self.den * &rhs.den,
        ))
    }

    pub fn checked_sub(&self, rhs: &QuadRat) -> Result<QuadRat> {
        self.checked_add(&-rhs)
    }

    pub fn checked_mul(&self, rhs: &QuadRat) -> Result<QuadRat> {
        self.ring.check(&rhs.ring)?;
        let d = BigInt::from(self.ring.radicand);
        Ok(QuadRat::new(
            self.ring,
            &self.a * &rhs.a + d * &self.b * &rhs.b,
            &self.a * &rhs.b + &self.b * &rhs.a,
            &self.den * &rhs.den,
        ))
    }

    pub fn conj(&self) -> QuadRat {
        QuadRat {
            ring: self.ring,
            a: self.a.clone(),
            b: -&self.b,
            den: self.den.clone(),
        }
    }

    /// `None` for zero.
    pub fn inverse(&self) -> Option<QuadRat> {
        if self.is_zero() {
            return None;
        }
        // den (a - b sqrt D) / (a^2 - D b^2)
        let n = &self.a * &self.a - BigInt::from(self.ring.radicand) * &self.b * &self.b;
        Some(QuadRat::new(
            self.ring,
            &self.den * &self.a,
            -(&self.den * &self.b),
            n,
        ))
    }

    pub fn scale(&self, k: &BigInt) -> QuadRat {
        QuadRat::new(self.ring, &self.a * k, &self.b * k, self.den.clone())
    }

    /// Approximate value in `C`, with `sqrt(D)` sent to the principal root.
    pub fn to_complex(&self) -> num_complex::Complex64 {
        use num_traits::ToPrimitive;
        let den = self.den.to_f64().unwrap_or(f64::INFINITY);
        let a = self.a.to_f64().unwrap_or(f64::NAN) / den;
        let b = self.b.to_f64().unwrap_or(f64::NAN) / den;
        let r = self.ring.radicand;
        if r > 0 {
            num_complex::Complex64::new(a + b * (r as f64).sqrt(), 0.0)
        } else {
            num_complex::Complex64::new(a, b * ((-r) as f64).sqrt())
        }
    }
}

impl Neg for &QuadRat {
    type Output = QuadRat;
    fn neg(self) -> QuadRat {
        QuadRat {
            ring: self.ring,
            a: -&self.a,
            b: -&self.b,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for QuadRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.ring.radicand;
        let surd = |b: &BigInt| -> String {
            if b.is_one() {
                format!("√{r}")
            } else {
                format!("{b}√{r}")
            }
        };
        let body = match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => self.a.to_string(),
            (true, false) if self.b == -BigInt::one() => format!("-√{r}"),
            (true, false) => surd(&self.b),
            (false, false) if self.b.is_negative() => format!("{} - {}", self.a, surd(&-&self.b)),
            (false, false) => format!("{} + {}", self.a, surd(&self.b)),
        };
        if self.den.is_one() {
            write!(f, "{body}")
        } else if self.a.is_zero() || self.b.is_zero() {
            write!(f, "{body}/{}", self.den)
        } else {
            write!(f, "({body})/{}", self.den)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PellNorm {
    Plus,
    Minus,
}

impl Serialize for PellNorm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i64(self.value())
    }
}

impl PellNorm {
    pub fn value(self) -> i64 {
        match self {
            PellNorm::Plus => 1,
            PellNorm::Minus => -1,
        }
    }

    pub fn from_value(v: i64) -> Option<Self> {
        match v {
            1 => Some(PellNorm::Plus),
            -1 => Some(PellNorm::Minus),
            _ => None,
        }
    }

    pub fn pow(self, n: u32) -> Self {
        if self == PellNorm::Minus && n % 2 == 1 {
            PellNorm::Minus
        } else {
            PellNorm::Plus
        }
    }
}

impl fmt::Display for PellNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PellNorm::Plus => "+1",
            PellNorm::Minus => "-1",
        })
    }
}

/// A solution of `x^2 - d*y^2 = norm` with `x, y >= 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PellSolution {
    d: i64,
    #[serde(serialize_with = "crate::json::big")]
    x: BigInt,
    #[serde(serialize_with = "crate::json::big")]
    y: BigInt,
    norm: PellNorm,
}

impl PellSolution {
    /// Validates the equation; the norm is read off from `x^2 - d*y^2`.
    pub fn new(d: i64, x: impl Into<BigInt>, y: impl Into<BigInt>) -> Result<Self> {
        let (x, y) = (x.into(), y.into());
        if d <= 1 || is_perfect_square(d as u64) {
            return Err(QuadError::NotPellRadicand(d));
        }
        let value = &x * &x - BigInt::from(d) * &y * &y;
        let norm = if value.is_one() {
            PellNorm::Plus
        } else if (-&value).is_one() {
            PellNorm::Minus
        } else {
            return Err(QuadError::NotAPellSolution { d, x, y });
        };
        if x.is_negative() || y.is_negative() {
            return Err(QuadError::NotAPellSolution { d, x, y });
        }
        Ok(PellSolution { d, x, y, norm })
    }

    /// The trivial solution `(1, 0)`.
    pub fn trivial(d: i64) -> Result<Self> {
        PellSolution::new(d, 1, 0)
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn x(&self) -> &BigInt {
        &self.x
    }

    pub fn y(&self) -> &BigInt {
        &self.y
    }

    pub fn norm(&self) -> PellNorm {
        self.norm
    }

    /// `x + y*sqrt(d)` as an element of `Z[sqrt(d)]`, when `d` is square-free
    /// and `Z[sqrt(d)]` is the full ring of integers (`d = 2, 3 mod 4`).
    pub fn to_quad_int(&self) -> Option<QuadInt> {
        let ring = QuadRing::new(self.d).ok()?;
        (ring.omega() == OmegaKind::Sqrt)
            .then(|| QuadInt::new(ring, self.x.clone(), self.y.clone()))
    }
}

impl fmt::Display for PellSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}√{} (norm {})", self.x, self.y, self.d, self.norm)
    }
}

pub fn is_perfect_square(n: u64) -> bool {
    let r = n.sqrt();
    r * r == n
}

fn check_pell_radicand(d: i64) -> Result<u64> {
    if d <= 1 || is_perfect_square(d as u64) {
        return Err(QuadError::NotPellRadicand(d));
    }
    Ok(d as u64)
}

/// Period of the continued fraction of `sqrt(d)`: returns `(a0, [a1, ..., aL])`
/// where `aL = 2*a0` closes the period.
pub fn sqrt_continued_fraction(d: u64) -> (u64, Vec<u64>) {
    let a0 = d.sqrt();
    let (mut m, mut q, mut a) = (0u64, 1u64, a0);
    let mut period = Vec::new();
    loop {
        m = q * a - m;
        q = (d - m * m) / q;
        a = (a0 + m) / q;
        period.push(a);
        if a == 2 * a0 {
            break;
        }
    }
    (a0, period)
}

/// Convergent `p_{L-1}/q_{L-1}` at the end of the first period, and `L`.
fn first_period_convergent(d: u64) -> (BigInt, BigInt, usize) {
    let (a0, period) = sqrt_continued_fraction(d);
    let len = period.len();
    let (mut p_prev, mut p) = (BigInt::one(), BigInt::from(a0));
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
    for &a in &period[..len - 1] {
        let a = BigInt::from(a);
        let p_next = &a * &p + &p_prev;
        let q_next = &a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
    }
    (p, q, len)
}

/// Least solution of `x^2 - d*y^2 = 1` with `y >= 1`, from the continued
/// fraction of `sqrt(d)`. Works over `Z[sqrt(d)]` for every nonsquare `d > 1`.
pub fn fundamental_pell(d: i64) -> Result<PellSolution> {
    let n = check_pell_radicand(d)?;
    let (p, q, len) = first_period_convergent(n);
    if len % 2 == 0 {
        PellSolution::new(d, p, q)
    } else {
        let dd = BigInt::from(d);
        PellSolution::new(d, &p * &p + dd * &q * &q, BigInt::from(2) * p * q)
    }
}

/// Least solution of `x^2 - d*y^2 = -1`, or `None` when the period of the
/// continued fraction of `sqrt(d)` is even.
pub fn negative_pell(d: i64) -> Result<Option<PellSolution>> {
    let n = check_pell_radicand(d)?;
    let (p, q, len) = first_period_convergent(n);
    if len % 2 == 1 {
        PellSolution::new(d, p, q).map(Some)
    } else {
        Ok(None)
    }
}

/// Coefficients of `(x + y*sqrt(d))^n`. `n = 0` yields `(1, 0)`.
pub fn pell_power(s: &PellSolution, n: u32) -> PellSolution {
    let d = BigInt::from(s.d);
    let (mut rx, mut ry) = (BigInt::one(), BigInt::zero());
    let (mut bx, mut by) = (s.x.clone(), s.y.clone());
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            let nx = &rx * &bx + &d * &ry * &by;
            let ny = &rx * &by + &ry * &bx;
            rx = nx;
            ry = ny;
        }
        let nx = &bx * &bx + &d * &by * &by;
        let ny = BigInt::from(2) * &bx * &by;
        bx = nx;
        by = ny;
        e >>= 1;
    }
    PellSolution {
        d: s.d,
        x: rx,
        y: ry,
        norm: s.norm.pow(n),
    }
}

/// `p^2 + q^2 + r^2 = n` with `p >= q >= r >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ThreeSquares {
    pub n: u64,
    pub p: u64,
    pub q: u64,
    pub r: u64,
}

/// `Some((a, b))` when `n = 4^a (8b + 7)`.
pub fn legendre_excluded(n: u64) -> Option<(u32, u64)> {
    if n == 0 {
        return None;
    }
    let mut m = n;
    let mut a = 0;
    while m.is_multiple_of(4) {
        m /= 4;
        a += 1;
    }
    (m % 8 == 7).then_some((a, m / 8))
}

/// Lexicographically greatest `(p, q, r)` with `p >= q >= r >= 0` and
/// `p^2 + q^2 + r^2 = n`, searching downward on `p`.
fn three_squares_search(n: u64) -> Option<ThreeSquares> {
    let mut p = n.sqrt();
    loop {
        let rest = n - p * p;
        // three squares with p the largest need rest <= 2p^2
        if rest as u128 > 2 * (p as u128) * (p as u128) {
            return None;
        }
        let mut q = rest.sqrt().min(p);
        while 2 * (q as u128) * (q as u128) >= rest as u128 {
            let r2 = rest - q * q;
            let r = r2.sqrt();
            if r * r == r2 {
                return Some(ThreeSquares { n, p, q, r });
            }
            if q == 0 {
                break;
            }
            q -= 1;
        }
        if p == 0 {
            return None;
        }
        p -= 1;
    }
}

/// [`three_squares_bounded`] with [`DEFAULT_THREE_SQUARES_BOUND`].
pub fn three_squares(n: u64) -> Result<ThreeSquares> {
    three_squares_bounded(n, DEFAULT_THREE_SQUARES_BOUND)
}

/// Three-squares decomposition. Inputs up to `bound` are decided purely by
/// exhaustive search; above it, Legendre's excluded form is rejected first so
/// the search only runs on instances known to terminate quickly.
pub fn three_squares_bounded(n: u64, bound: u64) -> Result<ThreeSquares> {
    if n > bound {
        if let Some((a, b)) = legendre_excluded(n) {
            return Err(QuadError::NotRepresentable { n, a, b });
        }
    }
    match three_squares_search(n) {
        Some(t) => Ok(t),
        None => {
            let (a, b) = legendre_excluded(n)
                .unwrap_or_else(|| panic!("{n} has no three-squares form yet is not 4^a(8b+7)"));
            Err(QuadError::NotRepresentable { n, a, b })
        }
    }
}

/// All `(m, p)` with `m, p >= 0` and `m^2 + 2p^2 = n`, ascending in `m`.
pub fn solve_m2_plus_2p2(n: u64) -> Vec<(u64, u64)> {
    (0..=n.sqrt())
        .filter_map(|m| {
            let rest = n - m * m;
            if !rest.is_multiple_of(2) {
                return None;
            }
            let p = (rest / 2).sqrt();
            (p * p == rest / 2).then_some((m, p))
        })
        .collect()
}
