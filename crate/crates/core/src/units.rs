//! Constructors and recognizers for explicit unit families of `H(R)`:
//! two-units `u_(eps)`, Pell units, Pell 3-units, Gauss units and the
//! half-integral generator-shaped units available when `d = 7 (mod 8)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

use crate::json;
use crate::quadratic::{
    self, solve_m2_plus_2p2, three_squares, OmegaKind, PellNorm, PellSolution, QuadError, QuadInt,
    QuadRat, QuadRing, SquareFreeD, ThreeSquares,
};
use crate::quaternion::{
    is_division, Basis, Quaternion, QuaternionError, TorsionJustification, TorsionKind,
    TorsionVerdict,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnitError {
    #[error("d = {d} is not {required}")]
    ResidueClass { d: i64, required: &'static str },
    #[error("H(Q(sqrt(-{0}))) is not a division ring (need d > 0, d = 7 mod 8)")]
    NotDivision(i64),
    #[error("basis elements must be pairwise distinct")]
    RepeatedBasis,
    #[error("{0} is not a unit of Z[sqrt(d)]")]
    NotAQuadraticUnit(String),
    #[error("Pell data is over D = {got}, expected D = {expected}")]
    FieldMismatch { expected: i64, got: i64 },
    #[error("norm -1 input would give a unit of norm 0")]
    DegenerateNorm,
    #[error("({p}, {m}) does not satisfy (2p - 1)^2 - {two_d} m^2 = 1")]
    NotAThreeUnitSolution { p: BigInt, m: BigInt, two_d: i64 },
    #[error("{0}")]
    NotATwoUnit(&'static str),
    #[error("two-units use different basis pairs")]
    PairMismatch,
    #[error("1 is not in the basis pair")]
    OneNotInSupport,
    #[error("products of two-units are two-units only when the integer part sits on 1")]
    NonMultiplicativePlacement,
    #[error("constructed element {unit} failed verification: {reason}")]
    Verification { unit: String, reason: String },
    #[error("d*m^2 + norm = {0} is outside the supported range")]
    OutOfRange(String),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Quaternion(#[from] QuaternionError),
}

pub type Result<T> = std::result::Result<T, UnitError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum UnitFamily {
    TwoUnit,
    PellUnit,
    PellThreeUnit,
    GaussUnit,
    SGenerator,
}

/// Ordered pair `(xi, psi)` of distinct basis elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct BasisPair {
    pub xi: Basis,
    pub psi: Basis,
}

impl BasisPair {
    pub fn new(xi: Basis, psi: Basis) -> Result<Self> {
        if xi == psi {
            return Err(UnitError::RepeatedBasis);
        }
        Ok(BasisPair { xi, psi })
    }

    pub fn contains(&self, e: Basis) -> bool {
        self.xi == e || self.psi == e
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct BasisTriple {
    pub xi: Basis,
    pub psi: Basis,
    pub phi: Basis,
}

impl BasisTriple {
    pub fn new(xi: Basis, psi: Basis, phi: Basis) -> Result<Self> {
        if xi == psi || psi == phi || xi == phi {
            return Err(UnitError::RepeatedBasis);
        }
        Ok(BasisTriple { xi, psi, phi })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PellSign {
    /// `j` gets `(1 + x)/2`, `k` gets `(1 - x)/2`.
    Upper,
    /// `j` gets `(1 - x)/2`, `k` gets `(1 + x)/2`.
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PellBranch {
    EvenY,
    /// `y` odd: the solution is squared first.
    OddYSquared,
}

/// The arithmetic data a unit was built from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Provenance {
    /// `eps = p + m*sqrt(d)`.
    QuadraticUnit {
        field: i64,
        #[serde(serialize_with = "json::big")]
        p: BigInt,
        #[serde(serialize_with = "json::big")]
        m: BigInt,
        pair: BasisPair,
    },
    Pell {
        field: i64,
        #[serde(serialize_with = "json::big")]
        x: BigInt,
        #[serde(serialize_with = "json::big")]
        y: BigInt,
        sign: PellSign,
        branch: PellBranch,
    },
    /// `(2p - 1) + m*sqrt(2d)` of norm 1.
    ThreeUnit {
        field: i64,
        #[serde(serialize_with = "json::big")]
        p: BigInt,
        #[serde(serialize_with = "json::big")]
        m: BigInt,
        triple: BasisTriple,
    },
    ThreeSquares {
        m: i64,
        squares: ThreeSquares,
    },
    /// Solution of `m^2 + 2p^2 = 2 + d`.
    Generator {
        m: u64,
        p: u64,
    },
}

/// A verified unit of `H(R)` together with how it was produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnitRecord {
    d: SquareFreeD,
    family: UnitFamily,
    #[serde(rename = "coefficients", serialize_with = "json::coefficients")]
    unit: Quaternion,
    norm: PellNorm,
    provenance: Provenance,
}

impl UnitRecord {
    /// Checks `eta(unit) = norm` and membership in `H(R)`.
    pub fn new(
        unit: Quaternion,
        family: UnitFamily,
        provenance: Provenance,
        norm: PellNorm,
    ) -> Result<Self> {
        let eta = unit.norm();
        if eta != QuadRat::from_int(unit.ring(), norm.value()) {
            return Err(UnitError::Verification {
                unit: unit.to_string(),
                reason: format!("eta = {eta}, expected {norm}"),
            });
        }
        if !unit.is_unit_of_order() {
            return Err(UnitError::Verification {
                unit: unit.to_string(),
                reason: "not in H(R)".into(),
            });
        }
        Ok(UnitRecord {
            d: unit.d(),
            family,
            unit,
            norm,
            provenance,
        })
    }

    pub fn unit(&self) -> &Quaternion {
        &self.unit
    }

    pub fn family(&self) -> UnitFamily {
        self.family
    }

    pub fn norm(&self) -> PellNorm {
        self.norm
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn d(&self) -> SquareFreeD {
        self.d
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("unit record serializes")
    }
}

impl fmt::Display for UnitRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (norm {})", self.unit, self.norm)
    }
}

fn surd(d: SquareFreeD, m: impl Into<BigInt>) -> QuadRat {
    QuadRat::sqrt_multiple(QuadRing::imaginary(d), m)
}

fn int(d: SquareFreeD, a: impl Into<BigInt>) -> QuadRat {
    QuadRat::from_int(QuadRing::imaginary(d), a)
}

fn real_ring(d: SquareFreeD) -> Result<QuadRing> {
    if d.get() <= 0 || !matches!(d.residue(4), 2 | 3) {
        return Err(UnitError::ResidueClass {
            d: d.get(),
            required: "positive and 2 or 3 mod 4",
        });
    }
    let ring = QuadRing::new(d.get())?;
    debug_assert_eq!(ring.omega(), OmegaKind::Sqrt);
    Ok(ring)
}

/// `u_(eps) = m*sqrt(-d)*xi + p*psi` for `eps = p + m*sqrt(d)` a unit of
/// `Z[sqrt(d)]`, so that `eta(u) = N(eps)`.
pub fn two_unit(d: SquareFreeD, eps: &QuadInt, pair: BasisPair) -> Result<UnitRecord> {
    let ring = real_ring(d)?;
    if eps.ring() != ring {
        return Err(UnitError::FieldMismatch {
            expected: d.get(),
            got: eps.ring().radicand(),
        });
    }
    let norm = PellNorm::from_value(eps.norm().to_i64().unwrap_or(0))
        .ok_or_else(|| UnitError::NotAQuadraticUnit(eps.to_string()))?;
    let (p, m) = (eps.x.clone(), eps.y.clone());
    let unit = Quaternion::zero(d)
        .with_coeff(pair.xi, surd(d, m.clone()))
        .with_coeff(pair.psi, int(d, p.clone()));
    UnitRecord::new(
        unit,
        UnitFamily::TwoUnit,
        Provenance::QuadraticUnit {
            field: d.get(),
            p,
            m,
            pair,
        },
        norm,
    )
}

/// [`two_unit`] fed by a Pell solution over `D = d`.
pub fn two_unit_from_pell(
    d: SquareFreeD,
    sol: &PellSolution,
    pair: BasisPair,
) -> Result<UnitRecord> {
    if sol.d() != d.get() {
        return Err(UnitError::FieldMismatch {
            expected: d.get(),
            got: sol.d(),
        });
    }
    let eps = sol.to_quad_int().ok_or(UnitError::ResidueClass {
        d: d.get(),
        required: "2 or 3 mod 4",
    })?;
    two_unit(d, &eps, pair)
}

fn two_unit_parts(u: &UnitRecord) -> Result<(QuadInt, BasisPair)> {
    match (&u.family, &u.provenance) {
        (UnitFamily::TwoUnit, Provenance::QuadraticUnit { field, p, m, pair }) => {
            let ring = QuadRing::new(*field)?;
            Ok((QuadInt::new(ring, p.clone(), m.clone()), *pair))
        }
        _ => Err(UnitError::NotATwoUnit("operand is not a two-unit")),
    }
}

/// `u_(mu) * u_(nu) = u_(mu*nu)`. Requires a shared pair whose `psi` is 1:
/// with `xi = 1` instead, the product is `psi * u_(mu*nu)`, not a two-unit.
pub fn two_unit_product(u: &UnitRecord, v: &UnitRecord) -> Result<UnitRecord> {
    let (mu, pu) = two_unit_parts(u)?;
    let (nu, pv) = two_unit_parts(v)?;
    if !pu.contains(Basis::One) || !pv.contains(Basis::One) {
        return Err(UnitError::OneNotInSupport);
    }
    if pu != pv {
        return Err(UnitError::PairMismatch);
    }
    if pu.psi != Basis::One {
        return Err(UnitError::NonMultiplicativePlacement);
    }
    let product = two_unit(u.d, &mu.checked_mul(&nu)?, pu)?;
    let direct = u.unit.try_mul(&v.unit)?;
    if direct != product.unit {
        return Err(UnitError::Verification {
            unit: direct.to_string(),
            reason: format!("differs from u_(mu nu) = {}", product.unit),
        });
    }
    Ok(product)
}

/// Order of `u_(eps)` when `1` is not in the pair: `c1 = 0` forces
/// `u^2 = -eta(u)`, hence order 2 or 4, confirmed by exact powers.
pub fn two_unit_torsion_check(
    d: SquareFreeD,
    eps: &QuadInt,
    pair: BasisPair,
) -> Result<TorsionVerdict> {
    if pair.contains(Basis::One) {
        return Err(UnitError::NotATwoUnit("pair must avoid 1"));
    }
    let u = two_unit(d, eps, pair)?.unit;
    let mut power = u.clone();
    for n in 1..=4 {
        if power.is_one() {
            return Ok(TorsionVerdict {
                kind: TorsionKind::FiniteOrder(n),
                justification: TorsionJustification::PowerIteration { max_exponent: 4 },
            });
        }
        power = &power * &u;
    }
    Err(UnitError::Verification {
        unit: u.to_string(),
        reason: "no power <= 4 equals 1".into(),
    })
}

/// Pell unit from `x^2 - d*y^2 = 1`, `d = 7 (mod 8)`:
/// `(y/2)sqrt(-d) + (y/2)sqrt(-d) i + ((1 +- x)/2) j + ((1 -+ x)/2) k`,
/// with odd `y` handled by squaring `x + y*sqrt(d)` first.
pub fn pell_unit(d: SquareFreeD, sol: &PellSolution, sign: PellSign) -> Result<UnitRecord> {
    if !is_division(d) {
        return Err(UnitError::NotDivision(d.get()));
    }
    if sol.d() != d.get() {
        return Err(UnitError::FieldMismatch {
            expected: d.get(),
            got: sol.d(),
        });
    }
    if sol.norm() == PellNorm::Minus {
        return Err(UnitError::DegenerateNorm);
    }
    let (x, y, branch) = if sol.y().is_even() {
        (sol.x().clone(), sol.y().clone(), PellBranch::EvenY)
    } else {
        let squared = quadratic::pell_power(sol, 2);
        (
            squared.x().clone(),
            squared.y().clone(),
            PellBranch::OddYSquared,
        )
    };
    assert!(x.is_odd(), "x is odd whenever x^2 - d y^2 = 1 with y even");
    let half_y: BigInt = &y / 2;
    let plus = (BigInt::one() + &x) / 2;
    let minus = (BigInt::one() - &x) / 2;
    let (cj, ck) = match sign {
        PellSign::Upper => (plus, minus),
        PellSign::Lower => (minus, plus),
    };
    let unit = Quaternion::new(
        d,
        [
            surd(d, half_y.clone()),
            surd(d, half_y),
            int(d, cj),
            int(d, ck),
        ],
    )?;
    UnitRecord::new(
        unit,
        UnitFamily::PellUnit,
        Provenance::Pell {
            field: d.get(),
            x: sol.x().clone(),
            y: sol.y().clone(),
            sign,
            branch,
        },
        PellNorm::Plus,
    )
}

/// `m*sqrt(-d)*xi + p*psi + (1 - p)*phi` for `(2p - 1)^2 - 2d*m^2 = 1`, `d = 3 (mod 4)`.
pub fn pell_three_unit(
    d: SquareFreeD,
    p: &BigInt,
    m: &BigInt,
    triple: BasisTriple,
) -> Result<UnitRecord> {
    if d.get() <= 0 || d.residue(4) != 3 {
        return Err(UnitError::ResidueClass {
            d: d.get(),
            required: "positive and 3 mod 4",
        });
    }
    let two_d = 2 * d.get();
    let t = BigInt::from(2) * p - 1;
    if &t * &t - BigInt::from(two_d) * m * m != BigInt::one() {
        return Err(UnitError::NotAThreeUnitSolution {
            p: p.clone(),
            m: m.clone(),
            two_d,
        });
    }
    let unit = Quaternion::zero(d)
        .with_coeff(triple.xi, surd(d, m.clone()))
        .with_coeff(triple.psi, int(d, p.clone()))
        .with_coeff(triple.phi, int(d, BigInt::one() - p));
    UnitRecord::new(
        unit,
        UnitFamily::PellThreeUnit,
        Provenance::ThreeUnit {
            field: two_d,
            p: p.clone(),
            m: m.clone(),
            triple,
        },
        PellNorm::Plus,
    )
}

/// [`pell_three_unit`] from a Pell solution over `2d`: `p = (x + 1)/2`, `m = y`.
pub fn pell_three_unit_from(
    d: SquareFreeD,
    sol: &PellSolution,
    triple: BasisTriple,
) -> Result<UnitRecord> {
    if sol.d() != 2 * d.get() {
        return Err(UnitError::FieldMismatch {
            expected: 2 * d.get(),
            got: sol.d(),
        });
    }
    if sol.norm() == PellNorm::Minus {
        return Err(UnitError::DegenerateNorm);
    }
    let p = (sol.x() + BigInt::one()) / 2;
    pell_three_unit(d, &p, sol.y(), triple)
}

/// `m*sqrt(-d) + p i + q j + r k` with `(p, q, r)` the three-squares
/// decomposition of `d*m^2 + norm`.
pub fn gauss_unit(d: SquareFreeD, m: i64, target: PellNorm) -> Result<UnitRecord> {
    if !is_division(d) {
        return Err(UnitError::NotDivision(d.get()));
    }
    let n = i128::from(d.get()) * i128::from(m) * i128::from(m) + i128::from(target.value());
    let n = u64::try_from(n).map_err(|_| UnitError::OutOfRange(n.to_string()))?;
    let squares = match three_squares(n) {
        Ok(t) => t,
        Err(e) => {
            assert!(
                m.rem_euclid(4) != 2,
                "d m^2 +- 1 is always a sum of three squares for m = 2 mod 4"
            );
            return Err(e.into());
        }
    };
    let unit = Quaternion::new(
        d,
        [
            surd(d, m),
            int(d, squares.p),
            int(d, squares.q),
            int(d, squares.r),
        ],
    )?;
    UnitRecord::new(
        unit,
        UnitFamily::GaussUnit,
        Provenance::ThreeSquares { m, squares },
        target,
    )
}

/// The `m` of the unique non-integer coefficient `m*sqrt(-d)`, when every
/// other coefficient is a rational integer.
fn single_surd(u: &Quaternion) -> Option<&BigInt> {
    let mut found = None;
    for c in u.coeffs() {
        if c.as_integer().is_some() {
            continue;
        }
        if found.is_some() {
            return None;
        }
        found = Some(c.as_sqrt_multiple()?);
    }
    found
}

/// Unit of `H(R)` with `|supp(u)| = l` for `l` in `{2, 3}` whose unique
/// non-integer coefficient has the form `m*sqrt(-d)`.
pub fn is_pell_l_unit(u: &Quaternion, l: usize) -> bool {
    matches!(l, 2 | 3) && u.is_unit_of_order() && u.support().len() == l && single_surd(u).is_some()
}

/// Same shape as [`is_pell_l_unit`] (any `l > 1`), plus `d*m^2 + eta(u)`
/// being a sum of three squares.
pub fn is_gauss_l_unit(u: &Quaternion, l: usize) -> bool {
    if l < 2 || !u.is_unit_of_order() || u.support().len() != l {
        return false;
    }
    let (Some(m), Some(eta)) = (single_surd(u), u.norm().as_integer().cloned()) else {
        return false;
    };
    let n = BigInt::from(u.d().get()) * m * m + eta;
    n.to_u64().is_some_and(|n| three_squares(n).is_ok())
}

/// Gauss unit of any support size.
pub fn is_gauss_unit(u: &Quaternion) -> bool {
    (2..=4).any(|l| is_gauss_l_unit(u, l))
}

/// `(m + sqrt(-d))/2 + ((m - sqrt(-d))/2) i + p j` for each solution of
/// `m^2 + 2p^2 = 2 + d` with `m` odd.
pub fn s_generator_units(d: SquareFreeD) -> Result<Vec<UnitRecord>> {
    if !is_division(d) {
        return Err(UnitError::ResidueClass {
            d: d.get(),
            required: "positive and 7 mod 8",
        });
    }
    let ring = QuadRing::imaginary(d);
    let n = u64::try_from(d.get() + 2).expect("d > 0");
    solve_m2_plus_2p2(n)
        .into_iter()
        .filter(|(m, _)| m % 2 == 1)
        .map(|(m, p)| {
            let unit = Quaternion::new(
                d,
                [
                    QuadRat::new(ring, m, 1, 2),
                    QuadRat::new(ring, m, -1, 2),
                    QuadRat::from_int(ring, p),
                    QuadRat::zero(ring),
                ],
            )?;
            UnitRecord::new(
                unit,
                UnitFamily::SGenerator,
                Provenance::Generator { m, p },
                PellNorm::Plus,
            )
        })
        .collect()
}

impl UnitRecord {
    /// `sqrt(-d)` multiplier of the unique non-integer coefficient, if any.
    pub fn surd_multiplier(&self) -> Option<BigInt> {
        single_surd(&self.unit).cloned()
    }
}
