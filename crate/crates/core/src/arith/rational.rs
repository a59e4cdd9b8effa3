//! Rational scalars and p-adic valuations.
//!
//! Valuations are additive and normalized (`v_p(p) = 1`). A multiplicative
//! absolute value condition `|a|_p <= 1` corresponds to `v_p(a) >= 0`, and
//! `|a|_p = 1` to `v_p(a) = 0`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::primes::is_prime;
use crate::error::{Error, Result};

/// Additive p-adic valuation; `Infinite` is the valuation of zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
            (Valuation::Infinite, _) => Ordering::Greater,
            (_, Valuation::Infinite) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("+inf"),
        }
    }
}

/// Exponent of the prime `p` in a nonzero integer.
pub fn int_valuation(n: &BigInt, p: u64) -> Valuation {
    if n.is_zero() {
        return Valuation::Infinite;
    }
    Valuation::Finite(uint_valuation(n.magnitude(), p) as i64)
}

pub(crate) fn uint_valuation(n: &BigUint, p: u64) -> u64 {
    if p == 2 {
        return n.trailing_zeros().unwrap_or(0);
    }
    let mut count = 0;
    let mut m = n.clone();
    let pb = BigUint::from(p);
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return count;
        }
        m = q;
        count += 1;
    }
}

/// Exponent of `p` in the rational `r`.
pub fn padic_valuation(r: &BigRational, p: u64) -> Result<Valuation> {
    if !is_prime(p) {
        return Err(Error::contract(format!("{p} is not prime")));
    }
    Ok(valuation_unchecked(r, p))
}

pub(crate) fn valuation_unchecked(r: &BigRational, p: u64) -> Valuation {
    if r.is_zero() {
        return Valuation::Infinite;
    }
    let num = uint_valuation(r.numer().magnitude(), p) as i64;
    let den = uint_valuation(r.denom().magnitude(), p) as i64;
    Valuation::Finite(num - den)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Renders a rational as `"a/b"`, or `"a"` when integral.
pub fn rational_to_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"a"`, `"-a"` or `"a/b"` (whitespace tolerated).
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let trimmed: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse {
        offset: 0,
        message: format!("not a rational number: {s:?}"),
    };
    let (num, den) = match trimmed.split_once('/') {
        Some((a, b)) => (a, b),
        None => (trimmed.as_str(), "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse {
            offset: 0,
            message: "zero denominator".into(),
        });
    }
    Ok(BigRational::new(num, den))
}

/// Total order used for canonical forms: compare numerators, then
/// denominators, lexicographically.
pub fn lex_cmp(a: &BigRational, b: &BigRational) -> Ordering {
    a.numer()
        .cmp(b.numer())
        .then_with(|| a.denom().cmp(b.denom()))
}

/// Naive absolute height `max(|num|, den)`, handy for box searches.
pub fn naive_height(r: &BigRational) -> BigInt {
    let n = r.numer().abs();
    let d = r.denom().clone();
    if n > d {
        n
    } else {
        d
    }
}

/// Serde adapter storing rationals as `"a/b"` strings.
pub mod serde_rational {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&rational_to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&rational_to_string(r))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigRational>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter()
                .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_examples() {
        assert_eq!(padic_valuation(&int(18), 3).unwrap(), Valuation::Finite(2));
        assert_eq!(padic_valuation(&rat(1, 2), 2).unwrap(), Valuation::Finite(-1));
        assert_eq!(padic_valuation(&int(0), 5).unwrap(), Valuation::Infinite);
        assert!(padic_valuation(&int(4), 4).is_err());
    }

    #[test]
    fn infinite_is_largest() {
        assert!(Valuation::Infinite > Valuation::Finite(i64::MAX));
        assert_eq!(Valuation::Finite(3) + Valuation::Infinite, Valuation::Infinite);
    }

    #[test]
    fn parse_and_print() {
        let r = parse_rational(" -6 / 4").unwrap();
        assert_eq!(rational_to_string(&r), "-3/2");
        assert_eq!(rational_to_string(&parse_rational("10/5").unwrap()), "2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }
}
