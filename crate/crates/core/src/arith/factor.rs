//! Integer factorization: trial division below 10^6, then Pollard-Brent rho
//! with a Miller-Rabin check on every reported factor.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::primes::{is_probable_prime, pollard_brent};
use crate::error::{Error, Result};

const TRIAL_LIMIT: u32 = 1_000_000;

/// Exponent as a JSON integer when it fits in i64, otherwise a string.
struct Exponent<'a>(&'a BigInt);

impl Serialize for Exponent<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(e) => s.serialize_i64(e),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

/// `sign * prod p^e` with pairwise distinct primes and nonzero exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimeFactorization {
    pub sign: i8,
    pub factors: BTreeMap<BigUint, BigInt>,
}

impl PrimeFactorization {
    pub fn one() -> Self {
        PrimeFactorization {
            sign: 1,
            factors: BTreeMap::new(),
        }
    }

    pub fn from_pairs<I: IntoIterator<Item = (u64, i64)>>(sign: i8, pairs: I) -> Self {
        let mut f = PrimeFactorization { sign, factors: BTreeMap::new() };
        for (p, e) in pairs {
            f.add_exponent(BigUint::from(p), BigInt::from(e));
        }
        f
    }

    /// Multiplies in `p^e`; `p` must be prime.
    pub fn add_exponent(&mut self, p: BigUint, e: BigInt) {
        let entry = self.factors.entry(p.clone()).or_insert_with(BigInt::zero);
        *entry += e;
        if entry.is_zero() {
            self.factors.remove(&p);
        }
    }

    pub fn exponent_of(&self, p: u64) -> BigInt {
        self.factors.get(&BigUint::from(p)).cloned().unwrap_or_default()
    }

    pub fn is_integral(&self) -> bool {
        self.factors.values().all(|e| e.is_positive())
    }

    /// Multiplies the factorization back out.
    pub fn to_rational(&self) -> BigRational {
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for (p, e) in &self.factors {
            let k = e.magnitude().to_u64().expect("exponent too large to expand");
            let pk = Pow::pow(p, k);
            if e.is_positive() {
                num *= pk;
            } else {
                den *= pk;
            }
        }
        let sign = if self.sign < 0 { Sign::Minus } else { Sign::Plus };
        BigRational::new(BigInt::from_biguint(sign, num), BigInt::from(den))
    }

    /// Number of decimal digits of the integer this represents, estimated
    /// from the logarithm (exact up to one digit).
    pub fn approx_decimal_digits(&self) -> f64 {
        self.factors
            .iter()
            .map(|(p, e)| e.to_f64().unwrap_or(f64::INFINITY) * p.to_f64().unwrap_or(f64::INFINITY).log10())
            .sum()
    }

    pub fn mul(&self, other: &PrimeFactorization) -> PrimeFactorization {
        let mut out = self.clone();
        out.sign *= other.sign;
        for (p, e) in &other.factors {
            out.add_exponent(p.clone(), e.clone());
        }
        out
    }

    pub fn pow(&self, k: i64) -> PrimeFactorization {
        let mut out = PrimeFactorization::one();
        out.sign = if self.sign < 0 && k % 2 != 0 { -1 } else { 1 };
        for (p, e) in &self.factors {
            out.add_exponent(p.clone(), e * k);
        }
        out
    }
}

impl fmt::Display for PrimeFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            f.write_str("-")?;
        }
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| if e.is_one() { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

impl Serialize for PrimeFactorization {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let factors: BTreeMap<String, Exponent> =
            self.factors.iter().map(|(p, e)| (p.to_string(), Exponent(e))).collect();
        let mut st = s.serialize_struct("PrimeFactorization", 2)?;
        st.serialize_field("sign", &self.sign)?;
        st.serialize_field("factors", &factors)?;
        st.end()
    }
}

fn trial_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_LIMIT as usize;
        let mut sieve = vec![true; n + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i <= n {
            if sieve[i] {
                for j in (i * i..=n).step_by(i) {
                    sieve[j] = false;
                }
            }
            i += 1;
        }
        (0..=n).filter(|&k| sieve[k]).map(|k| k as u32).collect()
    })
}

/// Default magnitude cap under which complete factorization is guaranteed.
pub fn default_factor_cap() -> BigUint {
    BigUint::one() << 64
}

/// Factors a nonzero integer with the default cap of 2^64.
pub fn factor_integer(n: &BigInt) -> Result<PrimeFactorization> {
    factor_integer_with_cap(n, &default_factor_cap())
}

pub fn factor_integer_with_cap(n: &BigInt, cap: &BigUint) -> Result<PrimeFactorization> {
    if n.is_zero() {
        return Err(Error::contract("cannot factor zero"));
    }
    let mut out = PrimeFactorization::one();
    out.sign = if n.sign() == Sign::Minus { -1 } else { 1 };
    let mut m = n.magnitude().clone();

    if let Some(small) = m.to_u64() {
        for (p, e) in super::primes::factor_u64(small) {
            out.add_exponent(BigUint::from(p), BigInt::from(e));
        }
        return Ok(out);
    }

    for &p in trial_primes() {
        let pb = BigUint::from(p);
        if &pb * &pb > m {
            break;
        }
        loop {
            let (q, r) = m.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            m = q;
            out.add_exponent(pb.clone(), BigInt::one());
        }
    }

    let mut stack = vec![m];
    while let Some(c) = stack.pop() {
        if c.is_one() {
            continue;
        }
        if is_probable_prime(&c) {
            out.add_exponent(c, BigInt::one());
            continue;
        }
        if let Some(small) = c.to_u64() {
            let f = pollard_brent(small);
            stack.push(BigUint::from(f));
            stack.push(BigUint::from(small / f));
            continue;
        }
        if &c > cap {
            return Err(Error::IncompleteFactorization {
                cofactor: c.to_string(),
            });
        }
        match rho_big(&c, 1 << 24) {
            Some(f) => {
                let g = &c / &f;
                stack.push(f);
                stack.push(g);
            }
            None => {
                return Err(Error::IncompleteFactorization {
                    cofactor: c.to_string(),
                })
            }
        }
    }
    Ok(out)
}

/// Factors numerator and denominator of a nonzero rational; denominator
/// primes receive negative exponents.
pub fn factor_rational(r: &BigRational) -> Result<PrimeFactorization> {
    let num = factor_integer(r.numer())?;
    let den = factor_integer(r.denom())?;
    Ok(num.mul(&den.pow(-1)))
}

/// Brent rho over big integers with an iteration budget.
fn rho_big(n: &BigUint, budget: u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let mut spent = 0u64;
    for c in 1u32..64 {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r = 1u64;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..(128.min(r - k)) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += 128;
            }
            spent += r;
            if spent > budget {
                return None;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fac(n: i64) -> PrimeFactorization {
        factor_integer(&BigInt::from(n)).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(fac(18), PrimeFactorization::from_pairs(1, [(2, 1), (3, 2)]));
        assert_eq!(fac(-1), PrimeFactorization::from_pairs(-1, []));
        assert_eq!(fac(281250), PrimeFactorization::from_pairs(1, [(2, 1), (3, 2), (5, 6)]));
        assert_eq!(fac(281250).to_rational(), BigRational::from_integer(281250.into()));
    }

    #[test]
    fn zero_is_rejected() {
        assert!(matches!(factor_integer(&BigInt::zero()), Err(Error::Contract(_))));
    }

    #[test]
    fn beyond_u64() {
        // (2^61 - 1) * (2^31 - 1) * 7^3
        let n = BigInt::from((1u64 << 61) - 1) * BigInt::from((1u64 << 31) - 1) * BigInt::from(343);
        // composite cofactor above 2^64 survives trial division
        assert!(factor_integer(&n).is_err());
        let f = factor_integer_with_cap(&n, &(BigUint::one() << 128)).unwrap();
        assert_eq!(f.to_rational().numer(), &n);
        assert_eq!(f.factors.len(), 3);
    }

    #[test]
    fn above_cap_composite_is_reported() {
        // product of two 80-bit primes: cofactor exceeds the 2^64 cap
        let p = BigInt::parse_bytes(b"1208925819614629174706189", 10).unwrap(); // 2^80 + 13
        let q = BigInt::parse_bytes(b"1208925819614629174706261", 10).unwrap(); // 2^80 + 85
        assert!(is_probable_prime(p.magnitude()) && is_probable_prime(q.magnitude()));
        let err = factor_integer(&(p * q)).unwrap_err();
        assert!(matches!(err, Error::IncompleteFactorization { .. }));
    }

    #[test]
    fn rational_factorization() {
        let r = BigRational::new(BigInt::from(-12), BigInt::from(35));
        let f = factor_rational(&r).unwrap();
        assert_eq!(f.exponent_of(5), BigInt::from(-1));
        assert_eq!(f.exponent_of(2), BigInt::from(2));
        assert_eq!(f.to_rational(), r);
    }
}
