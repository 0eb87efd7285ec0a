//! Rational points of the circle group `Q/Z`, written additively as `[0, 1)`.

use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_integer::Integer;

use crate::error::{Error, Result};

/// A reduced fraction `p/q` with `0 ≤ p/q < 1`.
///
/// Addition is modulo one. The same type carries character values on finite
/// groups: the value of a character at a point is `exp(2πi·phase)`, so a phase is
/// exactly a point of `Q/Z` and unit modulus holds by construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CircleRational {
    num: u64,
    den: u64,
}

/// Pairing values `(x, γ)` are stored as their phase in `Q/Z`.
pub type RationalPhase = CircleRational;

impl CircleRational {
    pub const ZERO: CircleRational = CircleRational { num: 0, den: 1 };

    /// Reduces `num/den` modulo one. Negative numerators wrap around.
    pub fn new(num: i64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::ZeroDenominator);
        }
        let num = (num as i128).rem_euclid(den as i128) as u64;
        Ok(Self::reduced(num, den))
    }

    /// `num` must already be below `den`, and `den` nonzero.
    pub(crate) fn reduced(num: u64, den: u64) -> Self {
        debug_assert!(den > 0 && num < den);
        let g = num.gcd(&den);
        CircleRational { num: num / g, den: den / g }
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// `(self + other) mod 1`.
    ///
    /// # Panics
    ///
    /// If the reduced denominator of the sum does not fit in a `u64`.
    pub fn add(&self, other: &Self) -> Self {
        let l = (self.den as u128).lcm(&(other.den as u128));
        let a = self.num as u128 * (l / self.den as u128);
        let b = other.num as u128 * (l / other.den as u128);
        let s = (a + b) % l;
        let g = s.gcd(&l);
        let den = u64::try_from(l / g).expect("circle denominator overflows u64");
        CircleRational { num: (s / g) as u64, den }
    }

    pub fn neg(&self) -> Self {
        if self.num == 0 {
            *self
        } else {
            CircleRational { num: self.den - self.num, den: self.den }
        }
    }

    /// Whether the point lies in `{k/n : 0 ≤ k < n}`.
    pub fn lies_in_cyclic(&self, n: u64) -> bool {
        n > 0 && n.is_multiple_of(self.den)
    }

    /// The residue `k` with `self = k/n`, when it exists.
    pub fn residue_mod(&self, n: u64) -> Option<u64> {
        self.lies_in_cyclic(n).then(|| self.num * (n / self.den))
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

/// `circle_add` as a free function.
pub fn circle_add(a: &CircleRational, b: &CircleRational) -> CircleRational {
    a.add(b)
}

impl Ord for CircleRational {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for CircleRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Default for CircleRational {
    fn default() -> Self {
        Self::ZERO
    }
}

impl fmt::Display for CircleRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for CircleRational {
    type Err = Error;

    /// Accepts `p/q` or an integer `p`; the value is reduced modulo one.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::OutOfRange(alloc::format!("cannot parse {s:?} as a rational"));
        match s.split_once('/') {
            Some((p, q)) => {
                let p: i64 = p.trim().parse().map_err(|_| bad())?;
                let q: u64 = q.trim().parse().map_err(|_| bad())?;
                Self::new(p, q)
            }
            None => {
                let p: i64 = s.parse().map_err(|_| bad())?;
                Self::new(p, 1)
            }
        }
    }
}
