// SPDX-License-Identifier: Apache-2.0

//! Field descriptors: `Q` and quadratic fields `Q(√m)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{is_squarefree, kronecker};
use crate::error::{Error, Result};

/// Discriminant of `Q(√m)` for squarefree `m ∉ {0, 1}`.
pub fn fundamental_disc(m: i64) -> Result<i64> {
    if m == 1 || !is_squarefree(m) {
        return Err(Error::NotSquarefree(m));
    }
    Ok(if m.rem_euclid(4) == 1 { m } else { 4 * m })
}

pub fn is_fundamental(d: i64) -> bool {
    if d == 1 || d == 0 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m)
        }
        _ => false,
    }
}

/// Squarefree `m` with `Q(√m)` of discriminant `d`.
pub fn radicand(d: i64) -> i64 {
    if d.rem_euclid(4) == 0 {
        d / 4
    } else {
        d
    }
}

/// Decomposition type of an odd prime in a quadratic field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

/// Splitting of the odd prime `p` in the quadratic field of discriminant `d`.
pub fn splitting(d: i64, p: u64) -> Splitting {
    match kronecker(d, p as i64) {
        1 => Splitting::Split,
        -1 => Splitting::Inert,
        _ => Splitting::Ramified,
    }
}

/// `Q(√m)` with its fundamental discriminant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadFieldData {
    m: i64,
    disc: i64,
}

impl QuadFieldData {
    pub fn new(m: i64) -> Result<Self> {
        Ok(QuadFieldData { m, disc: fundamental_disc(m)? })
    }

    pub fn from_disc(d: i64) -> Result<Self> {
        if !is_fundamental(d) {
            return Err(Error::NotFundamental(d));
        }
        Ok(QuadFieldData { m: radicand(d), disc: d })
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn is_real(&self) -> bool {
        self.m > 0
    }

    pub fn splitting(&self, p: u64) -> Splitting {
        splitting(self.disc, p)
    }
}

/// The base field of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Quadratic(QuadFieldData),
}

impl Field {
    pub fn quadratic(m: i64) -> Result<Self> {
        Ok(Field::Quadratic(QuadFieldData::new(m)?))
    }

    pub fn is_totally_real(&self) -> bool {
        match self {
            Field::Rational => true,
            Field::Quadratic(q) => q.is_real(),
        }
    }

    pub fn degree(&self) -> u32 {
        match self {
            Field::Rational => 1,
            Field::Quadratic(_) => 2,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => f.write_str("Q"),
            Field::Quadratic(q) => write!(f, "sqrt:{}", q.m),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" || s == "q" {
            return Ok(Field::Rational);
        }
        let m = s
            .strip_prefix("sqrt:")
            .and_then(|m| m.parse::<i64>().ok())
            .ok_or_else(|| Error::Precondition(format!("unrecognised field {s:?}; use Q or sqrt:<m>")))?;
        Field::quadratic(m)
    }
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fundamental_disc_examples() {
        assert_eq!(fundamental_disc(5).unwrap(), 5);
        assert_eq!(fundamental_disc(2).unwrap(), 8);
        assert_eq!(fundamental_disc(-1).unwrap(), -4);
        assert_eq!(fundamental_disc(-3).unwrap(), -3);
        assert!(fundamental_disc(12).is_err());
        assert!(fundamental_disc(1).is_err());
        assert!(fundamental_disc(0).is_err());
    }

    #[test]
    fn fundamental_disc_is_fundamental() {
        for m in -300i64..300 {
            if let Ok(d) = fundamental_disc(m) {
                assert!(is_fundamental(d), "{d}");
                assert_eq!(radicand(d), m);
            }
        }
        assert!(!is_fundamental(-16));
        assert!(!is_fundamental(20));
        assert!(is_fundamental(12));
        assert!(is_fundamental(-3));
    }

    #[test]
    fn splitting_examples() {
        assert_eq!(splitting(5, 5), Splitting::Ramified);
        assert_eq!(splitting(-23, 3), Splitting::Split);
        assert_eq!(splitting(8, 5), Splitting::Inert);
    }

    #[test]
    fn field_syntax() {
        assert_eq!("Q".parse::<Field>().unwrap(), Field::Rational);
        assert_eq!("sqrt:-6".parse::<Field>().unwrap().to_string(), "sqrt:-6");
        assert!("sqrt:4".parse::<Field>().is_err());
        assert!("Q(i)".parse::<Field>().is_err());
    }
}
