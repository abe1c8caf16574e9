use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

/// Element of Z2 x Z2 x Z.
///
/// Ordering is lexicographic on `(eps1, eps2, n)`, which is the order
/// reports are emitted in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "[i64; 3]", try_from = "[i64; 3]")]
pub struct GradingDegree {
    eps1: u8,
    eps2: u8,
    n: i64,
}

impl GradingDegree {
    /// The Z2 components are reduced mod 2.
    pub fn new(eps1: i64, eps2: i64, n: i64) -> Self {
        GradingDegree {
            eps1: eps1.rem_euclid(2) as u8,
            eps2: eps2.rem_euclid(2) as u8,
            n,
        }
    }

    pub fn eps1(&self) -> u8 {
        self.eps1
    }

    pub fn eps2(&self) -> u8 {
        self.eps2
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn z2(&self) -> Z2Pair {
        Z2Pair::new(self.eps1, self.eps2)
    }
}

impl Add for GradingDegree {
    type Output = GradingDegree;

    fn add(self, rhs: GradingDegree) -> GradingDegree {
        GradingDegree {
            eps1: self.eps1 ^ rhs.eps1,
            eps2: self.eps2 ^ rhs.eps2,
            n: self.n + rhs.n,
        }
    }
}

impl fmt::Display for GradingDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.eps1, self.eps2, self.n)
    }
}

impl From<GradingDegree> for [i64; 3] {
    fn from(d: GradingDegree) -> Self {
        [d.eps1 as i64, d.eps2 as i64, d.n]
    }
}

impl TryFrom<[i64; 3]> for GradingDegree {
    type Error = String;

    fn try_from(v: [i64; 3]) -> Result<Self, Self::Error> {
        if !(0..=1).contains(&v[0]) || !(0..=1).contains(&v[1]) {
            return Err(format!("Z2 components must be 0 or 1, got {:?}", v));
        }
        Ok(GradingDegree::new(v[0], v[1], v[2]))
    }
}

/// The Z2 x Z2 part of a degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Z2Pair(pub u8, pub u8);

impl Z2Pair {
    pub fn new(a: u8, b: u8) -> Self {
        Z2Pair(a & 1, b & 1)
    }

    pub fn is_zero(&self) -> bool {
        self.0 == 0 && self.1 == 0
    }
}

impl Add for Z2Pair {
    type Output = Z2Pair;

    fn add(self, rhs: Z2Pair) -> Z2Pair {
        Z2Pair(self.0 ^ rhs.0, self.1 ^ rhs.1)
    }
}

impl fmt::Display for Z2Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}
