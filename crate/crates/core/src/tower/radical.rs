use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::arith::primes::is_prime;
use crate::arith::rational::rational_to_string;
use crate::arith::PrimeFactorization;
use crate::error::{Error, Result};

/// The positive real `prod p_i^{e_i}` with rational exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadicalElement {
    exponents: BTreeMap<u64, BigRational>,
    common_denominator: BigUint,
}

impl RadicalElement {
    pub fn one() -> Self {
        RadicalElement {
            exponents: BTreeMap::new(),
            common_denominator: BigUint::one(),
        }
    }

    pub fn new<I: IntoIterator<Item = (u64, BigRational)>>(exponents: I) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (p, e) in exponents {
            if !is_prime(p) {
                return Err(Error::contract(format!("{p} is not prime")));
            }
            if e.is_zero() {
                return Err(Error::contract(format!("zero exponent for {p}")));
            }
            if map.insert(p, e).is_some() {
                return Err(Error::contract(format!("prime {p} listed twice")));
            }
        }
        let common_denominator = map
            .values()
            .fold(BigInt::one(), |acc, e| acc.lcm(e.denom()))
            .magnitude()
            .clone();
        Ok(RadicalElement { exponents: map, common_denominator })
    }

    pub fn exponents(&self) -> &BTreeMap<u64, BigRational> {
        &self.exponents
    }

    pub fn exponent(&self, p: u64) -> BigRational {
        self.exponents.get(&p).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn common_denominator(&self) -> &BigUint {
        &self.common_denominator
    }

    /// `self^k` as a factorization; `k * e_i` must be integral.
    pub fn power(&self, k: &BigUint) -> Result<PrimeFactorization> {
        let k = BigRational::from_integer(BigInt::from(k.clone()));
        let mut out = PrimeFactorization::one();
        for (p, e) in &self.exponents {
            let m = e * &k;
            if !m.is_integer() {
                return Err(Error::contract(format!("{k} * {e} is not an integer")));
            }
            out.add_exponent(BigUint::from(*p), m.to_integer());
        }
        Ok(out)
    }

    /// `self^D` for the common denominator `D`: always a positive rational,
    /// an integer when all exponents are positive.
    pub fn cleared_power(&self) -> PrimeFactorization {
        self.power(&self.common_denominator).expect("common denominator clears every exponent")
    }

    pub fn is_integral_radical(&self) -> bool {
        self.exponents.values().all(|e| e.is_positive())
    }
}

impl fmt::Display for RadicalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .exponents
            .iter()
            .map(|(p, e)| {
                if e.is_one() {
                    p.to_string()
                } else {
                    format!("{p}^({})", rational_to_string(e))
                }
            })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

impl Serialize for RadicalElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let exps: BTreeMap<String, String> = self
            .exponents
            .iter()
            .map(|(p, e)| (p.to_string(), rational_to_string(e)))
            .collect();
        let mut st = s.serialize_struct("RadicalElement", 2)?;
        st.serialize_field("exponents", &exps)?;
        st.serialize_field("common_denominator", &self.common_denominator.to_string())?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;

    #[test]
    fn clearing_denominators() {
        let a = RadicalElement::new([(2, rat(1, 6)), (3, rat(1, 3))]).unwrap();
        assert_eq!(a.common_denominator(), &BigUint::from(6u32));
        assert_eq!(a.cleared_power(), PrimeFactorization::from_pairs(1, [(2, 1), (3, 2)]));
        assert_eq!(a.to_string(), "2^(1/6)*3^(1/3)");
        assert!(a.power(&BigUint::from(3u32)).is_err());
    }

    #[test]
    fn invalid_inputs() {
        assert!(RadicalElement::new([(4, rat(1, 2))]).is_err());
        assert!(RadicalElement::new([(2, rat(0, 1))]).is_err());
        assert!(RadicalElement::new([(2, rat(1, 2)), (2, rat(1, 3))]).is_err());
    }
}
