//! Non-negative rationals with exact comparison, enough for Farey work.

use core::cmp::Ordering;
use core::fmt;

/// A reduced non-negative fraction `num/den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: u64,
    den: u64,
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Ratio {
    /// Reduces `num/den`. Panics on a zero denominator.
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den).max(1);
        Ratio {
            num: num / g,
            den: den / g,
        }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Exact midpoint `(a + b)/2`.
    pub fn midpoint(a: Ratio, b: Ratio) -> Ratio {
        let num = a.num as u128 * b.den as u128 + b.num as u128 * a.den as u128;
        let den = 2 * a.den as u128 * b.den as u128;
        let g = {
            let (mut x, mut y) = (num, den);
            while y != 0 {
                let t = x % y;
                x = y;
                y = t;
            }
            x.max(1)
        };
        Ratio {
            num: u64::try_from(num / g).expect("midpoint numerator overflow"),
            den: u64::try_from(den / g).expect("midpoint denominator overflow"),
        }
    }

    /// Fractional part of `i · self`, as an exact reduced ratio.
    pub fn frac_mul(&self, i: u64) -> Ratio {
        let r = (i as u128 * self.num as u128) % self.den as u128;
        Ratio::new(r as u64, self.den)
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl core::str::FromStr for Ratio {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (p, q) = s
            .split_once('/')
            .ok_or_else(|| crate::error::invalid!("expected p/q, got {s:?}"))?;
        let p: u64 = p
            .trim()
            .parse()
            .map_err(|_| crate::error::invalid!("bad numerator in {s:?}"))?;
        let q: u64 = q
            .trim()
            .parse()
            .map_err(|_| crate::error::invalid!("bad denominator in {s:?}"))?;
        if q == 0 {
            return Err(crate::error::invalid!("zero denominator in {s:?}"));
        }
        Ok(Ratio::new(p, q))
    }
}
