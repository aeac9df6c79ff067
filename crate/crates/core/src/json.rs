//! Serialization helpers shared by the JSON documents.

use num_bigint::BigInt;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::quadratic::QuadRat;
use crate::quaternion::Quaternion;

/// Writes a big integer as a plain JSON number, whatever its size.
pub(crate) fn big<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    let n: serde_json::Number = v
        .to_string()
        .parse()
        .expect("integer literal is a JSON number");
    n.serialize(s)
}

/// `{a, b, den}`, meaning `(a + b*sqrt(-d))/den`.
#[derive(Serialize)]
pub(crate) struct Coefficient<'a> {
    #[serde(serialize_with = "big")]
    a: &'a BigInt,
    #[serde(serialize_with = "big")]
    b: &'a BigInt,
    #[serde(serialize_with = "big")]
    den: &'a BigInt,
}

impl<'a> Coefficient<'a> {
    pub(crate) fn of(c: &'a QuadRat) -> Self {
        Coefficient {
            a: c.a(),
            b: c.b(),
            den: c.den(),
        }
    }
}

/// `[{a, b, den}; 4]` in the order `1, i, j, k`.
pub(crate) fn coefficients<S: Serializer>(u: &Quaternion, s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(4))?;
    for c in u.coeffs() {
        seq.serialize_element(&Coefficient::of(c))?;
    }
    seq.end()
}

/// Borrowing wrapper so a quaternion can sit inside derived documents.
pub(crate) struct Coefficients<'a>(pub &'a Quaternion);

impl Serialize for Coefficients<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        coefficients(self.0, s)
    }
}
