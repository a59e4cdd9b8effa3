use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::rational::rational_to_string;
use super::zpoly::{self, ZPoly, DEFAULT_KARATSUBA_THRESHOLD};
use crate::error::{Error, Result};

/// Dense univariate polynomial over the rationals, coefficients ascending.
///
/// The coefficient vector never carries trailing zeros, so the zero
/// polynomial is the empty vector and the leading coefficient of anything
/// else is nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<BigRational>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        UniPoly::from_coeffs(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn constant(c: BigRational) -> Self {
        UniPoly::from_coeffs(vec![c])
    }

    /// `c * x^k`
    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut v = vec![BigRational::zero(); k + 1];
        v[k] = c;
        UniPoly::from_coeffs(v)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        UniPoly::from_coeffs(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn from_zpoly(p: &[BigInt]) -> Self {
        UniPoly::from_coeffs(p.iter().cloned().map(BigRational::from_integer).collect())
    }

    /// `content * p` for an integer polynomial `p`.
    pub fn from_scaled(content: &BigRational, p: &[BigInt]) -> Self {
        if content.is_zero() {
            return UniPoly::zero();
        }
        UniPoly::from_coeffs(
            p.iter()
                .map(|c| BigRational::from_integer(c.clone()) * content)
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Integer coefficients, if every coefficient is integral.
    pub fn integer_coeffs(&self) -> Option<ZPoly> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.numer().clone()))
            .collect()
    }

    /// Splits `self = content * primitive` with `primitive` in Z[x], its
    /// coefficients coprime and leading coefficient positive.
    pub fn to_primitive(&self) -> (BigRational, ZPoly) {
        if self.is_zero() {
            return (BigRational::zero(), Vec::new());
        }
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let scaled: ZPoly = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let (cont, prim) = zpoly::primitive_part(&scaled);
        (BigRational::new(cont, den), prim)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        if k.is_zero() {
            return UniPoly::zero();
        }
        UniPoly::from_coeffs(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn derivative(&self) -> Self {
        UniPoly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn mul_with_threshold(&self, other: &UniPoly, threshold: usize) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let (ca, pa) = self.to_primitive();
        let (cb, pb) = other.to_primitive();
        UniPoly::from_scaled(&(ca * cb), &zpoly::mul(&pa, &pb, threshold))
    }

    pub fn pow(&self, k: u32) -> UniPoly {
        let mut acc = UniPoly::one();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self(inner(x))`, by Horner's rule in the polynomial ring.
    pub fn compose(&self, inner: &UniPoly) -> UniPoly {
        self.compose_with_threshold(inner, DEFAULT_KARATSUBA_THRESHOLD)
    }

    pub fn compose_with_threshold(&self, inner: &UniPoly, threshold: usize) -> UniPoly {
        let mut acc = UniPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_with_threshold(inner, threshold);
            acc = &acc + &UniPoly::constant(c.clone());
        }
        acc
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        let Some(dd) = divisor.degree() else {
            return Err(Error::contract("division by the zero polynomial"));
        };
        let lc_inv = divisor.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        let Some(ds) = self.degree() else {
            return Ok((UniPoly::zero(), UniPoly::zero()));
        };
        if ds < dd {
            return Ok((UniPoly::zero(), self.clone()));
        }
        let mut q = vec![BigRational::zero(); ds - dd + 1];
        for i in (0..=ds - dd).rev() {
            let t = &rem[i + dd] * &lc_inv;
            if t.is_zero() {
                continue;
            }
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &t * c;
            }
            q[i] = t;
        }
        rem.truncate(dd);
        Ok((UniPoly::from_coeffs(q), UniPoly::from_coeffs(rem)))
    }

    /// Exact quotient; a nonzero remainder is an error, never truncated.
    pub fn exact_div(&self, divisor: &UniPoly) -> Result<UniPoly> {
        if divisor.is_zero() {
            return Err(Error::contract("division by the zero polynomial"));
        }
        if self.is_zero() {
            return Ok(UniPoly::zero());
        }
        let (ca, pa) = self.to_primitive();
        let (cb, pb) = divisor.to_primitive();
        match zpoly::exact_div(&pa, &pb) {
            Some(q) => Ok(UniPoly::from_scaled(&(ca / cb), &q)),
            None => Err(Error::contract(format!(
                "{divisor} does not divide {self} exactly"
            ))),
        }
    }

    /// Monic gcd over Q (zero if both inputs are zero).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (_, a) = self.to_primitive();
        let (_, b) = other.to_primitive();
        let g = zpoly::gcd(&a, &b);
        let p = UniPoly::from_zpoly(&g);
        match p.leading() {
            Some(lc) => p.scale(&lc.recip()),
            None => p,
        }
    }

    /// Squarefree part `self / gcd(self, self')`, made monic.
    pub fn squarefree_part(&self) -> UniPoly {
        if self.deg() == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        let q = self.exact_div(&g).expect("gcd divides its argument");
        let lc = q.leading().expect("nonzero").recip();
        q.scale(&lc)
    }
}

impl<'a> Add<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        self.mul_with_threshold(rhs, DEFAULT_KARATSUBA_THRESHOLD)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Add for UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: UniPoly) -> UniPoly {
        &self + &rhs
    }
}

impl Sub for UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: UniPoly) -> UniPoly {
        &self - &rhs
    }
}

impl Mul for UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: UniPoly) -> UniPoly {
        &self * &rhs
    }
}

/// Renders as an expression the parser reads back, e.g. `x^2 - 1/3*x + 2`.
impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mono = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            if mono.is_empty() {
                f.write_str(&rational_to_string(&mag))?;
            } else if mag.is_one() {
                f.write_str(&mono)?;
            } else if mag.is_integer() {
                write!(f, "{}{}", mag.numer(), mono)?;
            } else {
                write!(f, "{}*{}", rational_to_string(&mag), mono)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({self})")
    }
}

impl FromStr for UniPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        super::parse::parse_poly(s)
    }
}

impl serde::Serialize for UniPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for UniPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
