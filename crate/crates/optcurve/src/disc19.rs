//! Prime fields of discriminant -19 and the Hasse-Weil-Serre bound.
//!
//! A prime q qualifies when m = floor(2 sqrt(q)) satisfies m^2 - 4q = -19.
//! Writing q = (m^2 + 19) / 4 for odd m >= 11 parameterises all candidates,
//! so enumeration walks odd m and keeps the primes. Everything stays in
//! integer arithmetic; no floating point square roots are involved.

use crate::error::{Error, Result};
use crate::field::is_prime;
use serde::{Deserialize, Serialize};

/// Search target: the curve meets the upper or the lower Serre bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Maximal,
    Minimal,
}

impl Kind {
    /// +1 for maximal, -1 for minimal; the sign of count - (q + 1).
    pub fn sign(self) -> i64 {
        match self {
            Kind::Maximal => 1,
            Kind::Minimal => -1,
        }
    }

    pub fn flip(self) -> Kind {
        match self {
            Kind::Maximal => Kind::Minimal,
            Kind::Minimal => Kind::Maximal,
        }
    }
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Kind::Maximal => write!(f, "maximal"),
            Kind::Minimal => write!(f, "minimal"),
        }
    }
}

impl std::str::FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Kind> {
        match s {
            "max" | "maximal" => Ok(Kind::Maximal),
            "min" | "minimal" => Ok(Kind::Minimal),
            _ => Err(Error::InvalidInput(format!("unknown kind '{s}', expected max or min"))),
        }
    }
}

/// How a curve's point count sits relative to the Serre interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Maximal,
    Minimal,
    Neither,
}

impl Classification {
    pub fn matches(self, kind: Kind) -> bool {
        match (self, kind) {
            (Classification::Maximal, Kind::Maximal) => true,
            (Classification::Minimal, Kind::Minimal) => true,
            _ => false,
        }
    }

    pub fn as_kind(self) -> Option<Kind> {
        match self {
            Classification::Maximal => Some(Kind::Maximal),
            Classification::Minimal => Some(Kind::Minimal),
            Classification::Neither => None,
        }
    }
}

/// A prime field F_q with m^2 - 4q = -19, m = floor(2 sqrt(q)).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disc19Field {
    q: u64,
    m: u64,
}

impl Disc19Field {
    /// Validates primality, the discriminant equation and the floor identity.
    pub fn new(q: u64) -> Result<Disc19Field> {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        if q < 35 {
            return Err(Error::NotDisc19 { q });
        }
        let m = (4 * q - 19).isqrt();
        if m * m != 4 * q - 19 || m % 2 == 0 || m < 11 {
            return Err(Error::NotDisc19 { q });
        }
        // Independent floor check: m = floor(2 sqrt(q)).
        if !(m * m <= 4 * q && 4 * q < (m + 1) * (m + 1)) {
            return Err(Error::NotDisc19 { q });
        }
        Ok(Disc19Field { q, m })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// The trace bound m = floor(2 sqrt(q)).
    pub fn m(&self) -> u64 {
        self.m
    }

    /// The Serre count q + 1 + g m (maximal) or q + 1 - g m (minimal).
    pub fn optimal_count(&self, genus: u64, kind: Kind) -> u64 {
        let base = self.q + 1;
        match kind {
            Kind::Maximal => base + genus * self.m,
            Kind::Minimal => base - genus * self.m,
        }
    }

    /// Classifies a point count for a genus-g curve over this field.
    pub fn classify_count(&self, genus: u64, count: u64) -> Classification {
        if count == self.optimal_count(genus, Kind::Maximal) {
            Classification::Maximal
        } else if count == self.optimal_count(genus, Kind::Minimal) {
            Classification::Minimal
        } else {
            Classification::Neither
        }
    }
}

/// All discriminant -19 prime fields with q <= bound, ascending.
pub fn enumerate(bound: u64) -> Vec<Disc19Field> {
    let mut out = Vec::new();
    let mut m = 11u64;
    loop {
        let q = (m * m + 19) / 4;
        if q > bound {
            break;
        }
        if is_prime(q) {
            out.push(Disc19Field::new(q).expect("parameterisation yields valid fields"));
        }
        m += 2;
    }
    out
}
