//! JSON schemas for fans, twist data, divisors and polytopes.
//!
//! Documents are byte-deterministic: fields are emitted in the documented
//! order, integers become JSON numbers when they fit below 2^53 and decimal
//! strings otherwise, and rationals are canonical gcd-reduced "p/q" strings
//! (plain integers when the denominator is one).

use std::fmt;
use std::str::FromStr;

use num::{BigInt, One, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cohomology::Divisor;
use crate::error::{Error, Result};
use crate::fan::{Cone, Fan, LatticeVector, RationalVector};
use crate::linalg::{Int, Rat};
use crate::polytope::VPolytope;
use crate::twist::TwistData;

const SAFE_INTEGER_LIMIT: i64 = 1 << 53;

/// An arbitrary-precision integer: a JSON number below 2^53 in magnitude,
/// a decimal string beyond.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonInt(pub Int);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match i64::try_from(&self.0) {
            Ok(v) if v.abs() < SAFE_INTEGER_LIMIT => serializer.serialize_i64(v),
            _ => serializer.serialize_str(&self.0.to_string()),
        }
    }
}

struct JsonIntVisitor;

impl Visitor<'_> for JsonIntVisitor {
    type Value = JsonInt;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a decimal string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<JsonInt, E> {
        Ok(JsonInt(Int::from(v)))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<JsonInt, E> {
        Ok(JsonInt(Int::from(v)))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<JsonInt, E> {
        BigInt::from_str(v)
            .map(JsonInt)
            .map_err(|_| E::custom(format!("invalid integer string: {v:?}")))
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<JsonInt, D::Error> {
        deserializer.deserialize_any(JsonIntVisitor)
    }
}

/// An exact rational: an integer (number or decimal string) or a canonical
/// "p/q" string with q > 0 and gcd(p, q) = 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonRat(pub Rat);

impl Serialize for JsonRat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.denom().is_one() {
            JsonInt(self.0.numer().clone()).serialize(serializer)
        } else {
            serializer.serialize_str(&rat_string(&self.0))
        }
    }
}

struct JsonRatVisitor;

impl Visitor<'_> for JsonRatVisitor {
    type Value = JsonRat;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a rational string \"p/q\"")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<JsonRat, E> {
        Ok(JsonRat(Rat::from_integer(Int::from(v))))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<JsonRat, E> {
        Ok(JsonRat(Rat::from_integer(Int::from(v))))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<JsonRat, E> {
        parse_rat(v)
            .map(JsonRat)
            .map_err(|_| E::custom(format!("invalid rational string: {v:?}")))
    }
}

impl<'de> Deserialize<'de> for JsonRat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<JsonRat, D::Error> {
        deserializer.deserialize_any(JsonRatVisitor)
    }
}

/// Canonical rational rendering: "p" when integral, "p/q" with q > 0
/// otherwise.
pub fn rat_string(r: &Rat) -> String {
    r.to_string()
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    match s.split_once('/') {
        None => Int::from_str(s)
            .map(Rat::from_integer)
            .map_err(|_| Error::Malformed(format!("invalid rational: {s:?}"))),
        Some((p, q)) => {
            let p = Int::from_str(p)
                .map_err(|_| Error::Malformed(format!("invalid numerator: {p:?}")))?;
            let q = Int::from_str(q)
                .map_err(|_| Error::Malformed(format!("invalid denominator: {q:?}")))?;
            if q.is_zero() {
                return Err(Error::Malformed("zero denominator".into()));
            }
            Ok(Rat::new(p, q))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct FanDoc {
    lattice_rank: usize,
    rays: Vec<Vec<JsonInt>>,
    maximal_cones: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct TwistDoc {
    base: FanDoc,
    fiber: FanDoc,
    phi: Vec<Vec<JsonInt>>,
}

#[derive(Serialize, Deserialize)]
struct DivisorDoc {
    coefficients: Vec<JsonRat>,
}

#[derive(Serialize, Deserialize)]
struct PolytopeDoc {
    rank: usize,
    vertices: Vec<Vec<JsonRat>>,
}

fn fan_to_doc(fan: &Fan) -> FanDoc {
    FanDoc {
        lattice_rank: fan.rank(),
        rays: fan
            .rays()
            .iter()
            .map(|r| r.0.iter().cloned().map(JsonInt).collect())
            .collect(),
        maximal_cones: fan
            .maximal_cones()
            .iter()
            .map(|c| c.ray_indices().to_vec())
            .collect(),
    }
}

fn fan_from_doc(doc: FanDoc) -> Result<Fan> {
    let rays = doc
        .rays
        .into_iter()
        .map(|r| LatticeVector(r.into_iter().map(|v| v.0).collect()))
        .collect();
    let cones = doc.maximal_cones.into_iter().map(Cone::new).collect();
    Fan::new(doc.lattice_rank, rays, cones)
}

pub fn fan_to_string(fan: &Fan) -> String {
    serde_json::to_string(&fan_to_doc(fan)).expect("fan serialization cannot fail")
}

pub fn fan_from_str(s: &str) -> Result<Fan> {
    let doc: FanDoc =
        serde_json::from_str(s).map_err(|e| Error::Malformed(format!("fan document: {e}")))?;
    fan_from_doc(doc)
}

pub fn twist_to_string(data: &TwistData) -> String {
    let doc = TwistDoc {
        base: fan_to_doc(data.base()),
        fiber: fan_to_doc(data.fiber()),
        phi: data
            .phi()
            .values()
            .iter()
            .map(|v| v.0.iter().cloned().map(JsonInt).collect())
            .collect(),
    };
    serde_json::to_string(&doc).expect("twist serialization cannot fail")
}

pub fn twist_from_str(s: &str) -> Result<TwistData> {
    let doc: TwistDoc =
        serde_json::from_str(s).map_err(|e| Error::Malformed(format!("twist document: {e}")))?;
    let base = fan_from_doc(doc.base)?;
    let fiber = fan_from_doc(doc.fiber)?;
    let values = doc
        .phi
        .into_iter()
        .map(|v| LatticeVector(v.into_iter().map(|x| x.0).collect()))
        .collect();
    TwistData::new(base, fiber, values)
}

pub fn divisor_to_string(divisor: &Divisor) -> String {
    let doc = DivisorDoc {
        coefficients: divisor
            .coefficients()
            .iter()
            .cloned()
            .map(JsonRat)
            .collect(),
    };
    serde_json::to_string(&doc).expect("divisor serialization cannot fail")
}

/// Parse a divisor against the fan it lives on (the coefficient count must
/// match the ray count).
pub fn divisor_from_str(fan: &Fan, s: &str) -> Result<Divisor> {
    let doc: DivisorDoc =
        serde_json::from_str(s).map_err(|e| Error::Malformed(format!("divisor document: {e}")))?;
    Divisor::new(fan, doc.coefficients.into_iter().map(|c| c.0).collect())
}

pub fn polytope_to_string(p: &VPolytope) -> String {
    let doc = PolytopeDoc {
        rank: p.rank(),
        vertices: p
            .vertices()
            .iter()
            .map(|v| v.0.iter().cloned().map(JsonRat).collect())
            .collect(),
    };
    serde_json::to_string(&doc).expect("polytope serialization cannot fail")
}

pub fn polytope_from_str(s: &str) -> Result<VPolytope> {
    let doc: PolytopeDoc =
        serde_json::from_str(s).map_err(|e| Error::Malformed(format!("polytope document: {e}")))?;
    VPolytope::from_points(
        doc.rank,
        doc.vertices
            .into_iter()
            .map(|v| RationalVector(v.into_iter().map(|c| c.0).collect()))
            .collect(),
    )
}
