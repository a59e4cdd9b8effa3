//! Heights as exact linear forms `sum q_p log p` with `q_p >= 0`.
//!
//! Numeric values come from interval enclosures: every `log p` is bracketed
//! by integers at scale `2^bits` using the atanh series with explicit
//! truncation bounds, and all later roundings go outward.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::arith::primes::is_prime;
use crate::arith::rational::rational_to_string;
use crate::error::{Error, Result};

pub const DEFAULT_PRECISION_BITS: u32 = 128;

/// `[lo, hi] / 2^bits`, guaranteed to contain the true value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigInt,
    pub hi: BigInt,
    pub bits: u32,
}

impl Interval {
    fn scaled(&self, q: &BigRational) -> (BigInt, BigInt) {
        let (n, d) = (q.numer(), q.denom());
        if n.is_negative() {
            ((&self.hi * n).div_floor(d), ceil_div(&(&self.lo * n), d))
        } else {
            ((&self.lo * n).div_floor(d), ceil_div(&(&self.hi * n), d))
        }
    }

    /// Sign of the enclosed value, if the interval excludes zero.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    /// Compares against `t` when the interval lies strictly on one side.
    pub fn cmp_rational(&self, t: &BigRational) -> Option<Ordering> {
        let scaled = BigInt::one() << self.bits;
        let t_num = t.numer() * &scaled;
        if &self.hi * t.denom() < t_num {
            Some(Ordering::Less)
        } else if &self.lo * t.denom() > t_num {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    /// Lower and upper bounds rounded outward to `digits` decimals.
    pub fn decimal_bounds(&self, digits: usize) -> (String, String) {
        let ten = BigInt::from(10u32).pow(digits as u32);
        let lo = (&self.lo * &ten).div_floor(&(BigInt::one() << self.bits));
        let hi = ceil_div(&(&self.hi * &ten), &(BigInt::one() << self.bits));
        (fixed_point_string(&lo, digits), fixed_point_string(&hi, digits))
    }

    /// The longest decimal truncation (at most `max_digits` places) shared by
    /// both endpoints, hence a correct truncation of the enclosed value.
    pub fn truncated_decimal(&self, max_digits: usize) -> String {
        let den = BigInt::one() << self.bits;
        for digits in (0..=max_digits).rev() {
            let ten = BigInt::from(10u32).pow(digits as u32);
            let lo = trunc_div(&(&self.lo * &ten), &den);
            let hi = trunc_div(&(&self.hi * &ten), &den);
            if lo == hi && (self.lo.sign() == self.hi.sign() || self.lo.is_zero() || self.hi.is_zero()) {
                return fixed_point_string(&lo, digits);
            }
        }
        "?".to_string()
    }
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

fn trunc_div(a: &BigInt, b: &BigInt) -> BigInt {
    a / b
}

fn fixed_point_string(v: &BigInt, digits: usize) -> String {
    let neg = v.is_negative();
    let s = v.magnitude().to_string();
    let body = if digits == 0 {
        s
    } else {
        let padded = format!("{s:0>width$}", width = digits + 1);
        let (int, frac) = padded.split_at(padded.len() - digits);
        format!("{int}.{frac}")
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// `atanh(a/b) * 2^bits` bracketed by integers, for `0 <= a/b <= 1/3`.
fn atanh_enclosure(a: u64, b: u64, bits: u32) -> (BigInt, BigInt) {
    debug_assert!(3 * a <= b);
    if a == 0 {
        return (BigInt::zero(), BigInt::zero());
    }
    let a2 = BigInt::from(a) * a;
    let b2 = BigInt::from(b) * b;
    let mut num = BigInt::from(a) << bits;
    let mut den = BigInt::from(b);
    let mut sum = BigInt::zero();
    let mut floors = 0u64;
    let mut k = 0u64;
    loop {
        let term = &num / (&den * (2 * k + 1));
        if term.is_zero() {
            break;
        }
        sum += term;
        floors += 1;
        num *= &a2;
        den *= &b2;
        k += 1;
    }
    // Each floor loses < 1 ulp. The first omitted term is < 1 ulp and the
    // tail is geometric with ratio <= 1/9, so it adds < 9/8 ulp.
    let hi = &sum + floors + 2u32;
    (sum, hi)
}

const GUARD_BITS: u32 = 16;

/// `log p * 2^bits` bracketed by integers.
pub fn log_enclosure(p: u64, bits: u32) -> (BigInt, BigInt) {
    let (lo, hi) = log_enclosure_raw(p, bits + GUARD_BITS);
    let den = BigInt::one() << GUARD_BITS;
    (lo.div_floor(&den), ceil_div(&hi, &den))
}

fn log_enclosure_raw(p: u64, bits: u32) -> (BigInt, BigInt) {
    assert!(p >= 1);
    // p = 2^k * m with 1 <= m < 2; log m = 2 atanh((p - 2^k)/(p + 2^k)).
    let k = 63 - p.leading_zeros();
    let pk = 1u64 << k;
    let (l2_lo, l2_hi) = atanh_enclosure(1, 3, bits);
    let (m_lo, m_hi) = if p == pk {
        (BigInt::zero(), BigInt::zero())
    } else {
        let (num, den) = ((p - pk) as u128, (p as u128) + (pk as u128));
        let g = num.gcd(&den);
        atanh_enclosure((num / g) as u64, (den / g) as u64, bits)
    };
    let two_k = BigInt::from(2 * k);
    (
        &two_k * l2_lo + BigInt::from(2) * m_lo,
        &two_k * l2_hi + BigInt::from(2) * m_hi,
    )
}

/// `sum q_p log p` with nonnegative rational `q_p`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct HeightValue {
    terms: BTreeMap<u64, BigRational>,
}

impl HeightValue {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn log_prime(p: u64) -> Result<Self> {
        Self::from_terms([(p, BigRational::one())])
    }

    pub fn from_terms<I: IntoIterator<Item = (u64, BigRational)>>(terms: I) -> Result<Self> {
        let mut out = HeightValue::zero();
        for (p, q) in terms {
            if !is_prime(p) {
                return Err(Error::contract(format!("{p} is not prime")));
            }
            if q.is_negative() {
                return Err(Error::contract(format!("negative coefficient {q} of log {p}")));
            }
            out.add_term(p, q);
        }
        Ok(out)
    }

    fn add_term(&mut self, p: u64, q: BigRational) {
        let e = self.terms.entry(p).or_insert_with(BigRational::zero);
        *e += q;
        if e.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn terms(&self) -> &BTreeMap<u64, BigRational> {
        &self.terms
    }

    pub fn coefficient(&self, p: u64) -> BigRational {
        self.terms.get(&p).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &HeightValue) -> HeightValue {
        let mut out = self.clone();
        for (p, q) in &other.terms {
            out.add_term(*p, q.clone());
        }
        out
    }

    pub fn mul_int(&self, k: &BigUint) -> HeightValue {
        let k = BigRational::from_integer(BigInt::from(k.clone()));
        self.map_coeffs(|q| q * &k)
    }

    pub fn div_int(&self, k: &BigUint) -> HeightValue {
        assert!(!k.is_zero());
        let k = BigRational::from_integer(BigInt::from(k.clone()));
        self.map_coeffs(|q| q / &k)
    }

    fn map_coeffs(&self, f: impl Fn(&BigRational) -> BigRational) -> HeightValue {
        let mut out = HeightValue::zero();
        for (p, q) in &self.terms {
            out.add_term(*p, f(q));
        }
        out
    }

    pub fn enclose(&self, bits: u32) -> Interval {
        enclose_terms(self.terms.iter().map(|(p, q)| (*p, q.clone())), bits)
    }

    /// Exact comparison. Distinct forms differ by the log of a rational
    /// other than 1, which is nonzero, so refinement terminates.
    pub fn compare(&self, other: &HeightValue) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        let mut diff: BTreeMap<u64, BigRational> = self.terms.clone();
        for (p, q) in &other.terms {
            let e = diff.entry(*p).or_insert_with(BigRational::zero);
            *e -= q;
        }
        let mut bits = 64;
        loop {
            if let Some(o) = enclose_terms(diff.iter().map(|(p, q)| (*p, q.clone())), bits).sign() {
                return o;
            }
            bits *= 2;
        }
    }

    /// Exact comparison with a rational. A nonzero form is the log of a
    /// rational other than 1, which is irrational, so equality only occurs
    /// for the zero form against 0.
    pub fn compare_rational(&self, t: &BigRational) -> Ordering {
        if self.is_zero() {
            return BigRational::zero().cmp(t);
        }
        let mut bits = 64;
        loop {
            if let Some(o) = self.enclose(bits).cmp_rational(t) {
                return o;
            }
            bits *= 2;
        }
    }

    pub fn report(&self, bits: u32) -> HeightReport {
        let iv = self.enclose(bits);
        let digits = ((bits.saturating_sub(8)) as f64 * std::f64::consts::LOG10_2) as usize;
        let (lower, upper) = iv.decimal_bounds(digits.max(1));
        HeightReport {
            exact: self.clone(),
            expression: self.to_string(),
            decimal: iv.truncated_decimal(digits),
            lower,
            upper,
            precision_bits: bits,
        }
    }
}

fn enclose_terms<I: IntoIterator<Item = (u64, BigRational)>>(terms: I, bits: u32) -> Interval {
    let mut lo = BigInt::zero();
    let mut hi = BigInt::zero();
    for (p, q) in terms {
        let (l, h) = log_enclosure(p, bits);
        let iv = Interval { lo: l, hi: h, bits };
        let (a, b) = iv.scaled(&q);
        lo += a;
        hi += b;
    }
    Interval { lo, hi, bits }
}

impl fmt::Display for HeightValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(p, q)| {
                if q.is_one() {
                    format!("log({p})")
                } else {
                    format!("{}*log({p})", rational_to_string(q))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl Serialize for HeightValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let m: BTreeMap<String, String> =
            self.terms.iter().map(|(p, q)| (p.to_string(), rational_to_string(q))).collect();
        m.serialize(s)
    }
}

/// A height with its exact form and a rigorous decimal enclosure.
#[derive(Debug, Clone, Serialize)]
pub struct HeightReport {
    pub exact: HeightValue,
    pub expression: String,
    /// Correct truncation of the true value.
    pub decimal: String,
    pub lower: String,
    pub upper: String,
    pub precision_bits: u32,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;
    use proptest::prelude::*;

    fn h(terms: &[(u64, i64, i64)]) -> HeightValue {
        HeightValue::from_terms(terms.iter().map(|&(p, n, d)| (p, rat(n, d)))).unwrap()
    }

    #[test]
    fn log_enclosures_contain_f64_values() {
        for p in [2u64, 3, 5, 7, 11, 37, 1_000_003] {
            let (lo, hi) = log_enclosure(p, 80);
            let scale = 2f64.powi(80);
            let l: f64 = lo.to_string().parse::<f64>().unwrap() / scale;
            let u: f64 = hi.to_string().parse::<f64>().unwrap() / scale;
            let t = (p as f64).ln();
            assert!(l <= t + 1e-15 && t <= u + 1e-15, "{p}: {l} {t} {u}");
            assert!(&hi - &lo <= BigInt::from(2));
        }
    }

    #[test]
    fn known_digits() {
        let r = HeightValue::log_prime(2).unwrap().report(128);
        assert!(r.decimal.starts_with("0.693147180559945309417232121458176568"), "{}", r.decimal);
        assert!(r.decimal.len() >= 35);
        let half_log2 = h(&[(2, 1, 2)]);
        assert!(half_log2.report(128).decimal.starts_with("0.3465735902799726547"));
    }

    #[test]
    fn exact_comparisons() {
        // log 8 = 3 log 2
        assert_eq!(h(&[(2, 3, 1)]).compare(&h(&[(2, 3, 1)])), Ordering::Equal);
        // log 3 > log 2
        assert_eq!(h(&[(3, 1, 1)]).compare(&h(&[(2, 1, 1)])), Ordering::Greater);
        // 2^10 = 1024 > 1000 = 2^3 5^3
        assert_eq!(h(&[(2, 10, 1)]).compare(&h(&[(2, 3, 1), (5, 3, 1)])), Ordering::Greater);
        assert_eq!(h(&[(2, 1, 2)]).compare_rational(&rat(1, 2)), Ordering::Less);
        assert_eq!(HeightValue::zero().compare_rational(&rat(0, 1)), Ordering::Equal);
    }

    #[test]
    fn rejects_bad_terms() {
        assert!(HeightValue::from_terms([(4, rat(1, 1))]).is_err());
        assert!(HeightValue::from_terms([(2, rat(-1, 1))]).is_err());
    }

    proptest! {
        #[test]
        fn enclosure_brackets_float(n in 1i64..50, d in 1i64..50, pi in 0usize..6) {
            let p = [2u64, 3, 5, 7, 11, 13][pi];
            let v = h(&[(p, n, d)]);
            let iv = v.enclose(96);
            let f = n as f64 / d as f64 * (p as f64).ln();
            let scale = 2f64.powi(96);
            let lo: f64 = iv.lo.to_string().parse::<f64>().unwrap() / scale;
            let hi: f64 = iv.hi.to_string().parse::<f64>().unwrap() / scale;
            prop_assert!(lo <= f * (1.0 + 1e-14) && f <= hi * (1.0 + 1e-14));
        }
    }
}
