//! Decision table for hyperbolicity of `U_1(RG)`, `R` the ring of integers
//! of `Q(sqrt(-d))` and `G` finite.
//!
//! The table is a union of sufficient clauses; its disjunction is the exact
//! boundary. Clauses overlap (for instance `C2` with `d > 0`), so each verdict
//! reports the first firing clause in a fixed priority order and
//! [`matching_clauses`] lists all of them.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::quadratic::SquareFreeD;
use crate::quaternion::{is_division, stufe, Stufe};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("malformed group `{0}`")]
    MalformedGroup(String),
    #[error("{0} is not abelian")]
    NotAbelian(String),
}

pub type Result<T> = std::result::Result<T, ClassifyError>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Group {
    Trivial,
    Cyclic(u64),
    /// Invariant factors `d1 | d2 | ... | dk`, each at least 2.
    Abelian(Vec<u64>),
    /// The quaternion group of order 8.
    K8,
    OtherNonAbelian(String),
}

impl Group {
    pub fn abelian(factors: Vec<u64>) -> Result<Self> {
        let g = Group::Abelian(factors);
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            Group::Cyclic(n) => *n >= 2,
            Group::Abelian(f) => {
                f.iter().all(|&x| x >= 2) && f.windows(2).all(|w| w[1] % w[0] == 0)
            }
            Group::OtherNonAbelian(label) => !label.is_empty(),
            Group::Trivial | Group::K8 => true,
        };
        if ok {
            Ok(())
        } else {
            Err(ClassifyError::MalformedGroup(self.to_string()))
        }
    }

    /// Invariant factors of an abelian group; `None` for non-abelian specs.
    pub fn invariant_factors(&self) -> Option<Vec<u64>> {
        match self {
            Group::Trivial => Some(Vec::new()),
            Group::Cyclic(n) => Some(vec![*n]),
            Group::Abelian(f) => Some(f.clone()),
            Group::K8 | Group::OtherNonAbelian(_) => None,
        }
    }

    /// `C_n` for some `n`, whichever variant spells it.
    pub fn cyclic_order(&self) -> Option<u64> {
        match self.invariant_factors()?.as_slice() {
            [n] => Some(*n),
            _ => None,
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::Trivial => f.write_str("1"),
            Group::Cyclic(n) => write!(f, "C{n}"),
            Group::Abelian(factors) => {
                let parts: Vec<String> = factors.iter().map(u64::to_string).collect();
                write!(f, "A[{}]", parts.join(","))
            }
            Group::K8 => f.write_str("K8"),
            Group::OtherNonAbelian(label) => write!(f, "NA:{label}"),
        }
    }
}

/// Accepts `1`, `C<n>`, `A[d1,d2,...]`, `K8` (or `Q8`) and `NA:<label>`.
impl FromStr for Group {
    type Err = ClassifyError;

    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || ClassifyError::MalformedGroup(s.to_string());
        let g = if t == "1" {
            Group::Trivial
        } else if t == "K8" || t == "Q8" {
            Group::K8
        } else if let Some(label) = t.strip_prefix("NA:") {
            Group::OtherNonAbelian(label.to_string())
        } else if let Some(n) = t.strip_prefix('C') {
            Group::Cyclic(n.parse().map_err(|_| bad())?)
        } else if let Some(body) = t.strip_prefix("A[").and_then(|r| r.strip_suffix(']')) {
            let factors = if body.is_empty() {
                Vec::new()
            } else {
                body.split(',')
                    .map(|x| x.parse().map_err(|_| bad()))
                    .collect::<Result<Vec<u64>>>()?
            };
            Group::Abelian(factors)
        } else {
            return Err(bad());
        };
        g.validate().map_err(|_| bad())?;
        Ok(g)
    }
}

impl Serialize for Group {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Largest invariant factor; 1 for the trivial group.
pub fn exponent(g: &Group) -> Result<u64> {
    g.validate()?;
    let factors = g
        .invariant_factors()
        .ok_or_else(|| ClassifyError::NotAbelian(g.to_string()))?;
    Ok(factors.last().copied().unwrap_or(1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RequiredD {
    Positive,
    Equals(i64),
}

impl RequiredD {
    fn holds(self, d: SquareFreeD) -> bool {
        match self {
            RequiredD::Positive => d.get() > 0,
            RequiredD::Equals(v) => d.get() == v,
        }
    }
}

impl fmt::Display for RequiredD {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RequiredD::Positive => f.write_str("d>0"),
            RequiredD::Equals(v) => write!(f, "d={v}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Clause {
    /// `G` is `C2` or `C3`, any `d`.
    C2C3AnyD,
    /// `G` abelian of exponent dividing `n`, with the paired condition on `d`.
    ExpDividesN {
        n: u64,
        required_d: RequiredD,
    },
    C4PositiveD,
    C8D1,
    /// `G = K8` and the level of `K` is 4.
    K8Stufe4,
    /// Trivial `G`: not one of the listed groups; `U_1(R)` is finite or
    /// virtually cyclic.
    TrivialGroup,
    NotInClassification,
}

impl Clause {
    pub fn tag(&self) -> &'static str {
        match self {
            Clause::C2C3AnyD => "C2C3_AnyD",
            Clause::ExpDividesN { .. } => "ExpDividesN",
            Clause::C4PositiveD => "C4_PositiveD",
            Clause::C8D1 => "C8_D1",
            Clause::K8Stufe4 => "K8_Stufe4",
            Clause::TrivialGroup => "TrivialGroup_Extension",
            Clause::NotInClassification => "NotInClassification",
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Clause::ExpDividesN { n, required_d } => write!(f, "ExpDividesN(n={n},{required_d})"),
            other => f.write_str(other.tag()),
        }
    }
}

impl Serialize for Clause {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    /// The 2-sphere.
    Sphere2,
}

impl Serialize for Boundary {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str("S2")
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("S²")
    }
}

#[derive(Debug, Clone, Serialize)]
struct ClauseDetail {
    n: u64,
    required_d: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HyperbolicVerdict {
    pub d: SquareFreeD,
    pub group: Group,
    pub hyperbolic: bool,
    pub clause: Clause,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "detail")]
    clause_detail: Option<Clause>,
    pub stufe: Stufe,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary: Option<Boundary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ends: Option<u32>,
}

fn detail<S: Serializer>(c: &Option<Clause>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match c {
        Some(Clause::ExpDividesN { n, required_d }) => ClauseDetail {
            n: *n,
            required_d: required_d.to_string(),
        }
        .serialize(s),
        _ => s.serialize_none(),
    }
}

impl HyperbolicVerdict {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("verdict serializes")
    }
}

impl fmt::Display for HyperbolicVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "d={:<4} G={:<8} hyperbolic={:<5} clause={} stufe={}",
            self.d.get(),
            self.group.to_string(),
            self.hyperbolic,
            self.clause,
            self.stufe
        )?;
        if let (Some(b), Some(e)) = (self.boundary, self.ends) {
            write!(f, " boundary={b} ends={e}")?;
        }
        Ok(())
    }
}

const EXPONENT_CLAUSES: [(u64, RequiredD); 3] = [
    (2, RequiredD::Positive),
    (6, RequiredD::Equals(3)),
    (4, RequiredD::Equals(1)),
];

/// Every positive clause that fires for `(d, g)`, in priority order.
pub fn matching_clauses(d: SquareFreeD, g: &Group) -> Result<Vec<Clause>> {
    g.validate()?;
    let mut out = Vec::new();
    if *g == Group::Trivial {
        out.push(Clause::TrivialGroup);
    }
    let cyclic = g.cyclic_order();
    if matches!(cyclic, Some(2 | 3)) {
        out.push(Clause::C2C3AnyD);
    }
    if let Some(factors) = g.invariant_factors() {
        let exp = factors.last().copied().unwrap_or(1);
        for (n, required_d) in EXPONENT_CLAUSES {
            if n % exp == 0 && required_d.holds(d) {
                out.push(Clause::ExpDividesN { n, required_d });
            }
        }
    }
    if cyclic == Some(4) && d.get() > 0 {
        out.push(Clause::C4PositiveD);
    }
    if cyclic == Some(8) && d.get() == 1 {
        out.push(Clause::C8D1);
    }
    if *g == Group::K8 && stufe(d) == Stufe::Four {
        debug_assert!(is_division(d));
        out.push(Clause::K8Stufe4);
    }
    Ok(out)
}

pub fn classify(d: SquareFreeD, g: &Group) -> Result<HyperbolicVerdict> {
    let clauses = matching_clauses(d, g)?;
    let clause = clauses
        .first()
        .copied()
        .unwrap_or(Clause::NotInClassification);
    let k8 = clause == Clause::K8Stufe4;
    Ok(HyperbolicVerdict {
        d,
        group: g.clone(),
        hyperbolic: clause != Clause::NotInClassification,
        clause,
        clause_detail: matches!(clause, Clause::ExpDividesN { .. }).then_some(clause),
        stufe: stufe(d),
        boundary: k8.then_some(Boundary::Sphere2),
        ends: k8.then_some(1),
    })
}

/// `classify` over `ds x catalog`, `d` outer; values of `d` outside the
/// admissible set (zero, `-1`, non-square-free) are skipped.
pub fn verdict_table(
    ds: impl IntoIterator<Item = i64>,
    catalog: &[Group],
) -> Result<Vec<HyperbolicVerdict>> {
    let mut rows = Vec::new();
    for d in ds {
        let Ok(d) = SquareFreeD::new(d) else { continue };
        for g in catalog {
            rows.push(classify(d, g)?);
        }
    }
    Ok(rows)
}

/// `C2, C3, C4, C5, C6, C8, A[2,2], A[2,4], A[6], K8`.
pub fn default_catalog() -> Vec<Group> {
    [
        "C2", "C3", "C4", "C5", "C6", "C8", "A[2,2]", "A[2,4]", "A[6]", "K8",
    ]
    .iter()
    .map(|s| s.parse().expect("catalog entries parse"))
    .collect()
}
