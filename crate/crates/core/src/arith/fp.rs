//! Polynomials over prime fields `F_p` (`p < 2^32`) and distinct-degree
//! factorization.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use super::poly::UniPoly;
use super::primes::{is_prime, pow_mod};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

/// Outcome of [`fp_factor_degrees`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "degrees", rename_all = "snake_case")]
pub enum FactorDegrees {
    /// Sorted degrees of the monic irreducible factors.
    Squarefree(Vec<usize>),
    /// `gcd(f, f') != 1`; the prime may ramify.
    NotSquarefree,
}

impl FpPoly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Result<Self> {
        if p >= 1 << 32 || !is_prime(p) {
            return Err(Error::contract(format!("modulus {p} is not a prime below 2^32")));
        }
        Ok(Self::raw(p, coeffs.into_iter().map(|c| c % p).collect()))
    }

    fn raw(p: u64, mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { p, coeffs }
    }

    /// Reduces a rational polynomial mod p; every denominator must be a unit.
    pub fn from_rational(f: &UniPoly, p: u64) -> Result<Self> {
        let mut cs = Vec::with_capacity(f.coeffs().len());
        let pb = BigInt::from(p);
        for c in f.coeffs() {
            let den = c.denom().mod_floor(&pb);
            if den.is_zero() {
                return Err(Error::contract(format!(
                    "coefficient {c} is not {p}-integral"
                )));
            }
            let num = c.numer().mod_floor(&pb);
            let num = num.iter_u64_digits().next().unwrap_or(0);
            let den = den.iter_u64_digits().next().unwrap_or(0);
            cs.push(mul(num, inv(den, p), p));
        }
        FpPoly::new(p, cs)
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn x(p: u64) -> Self {
        Self::raw(p, vec![0, 1])
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(&lc) => {
                let li = inv(lc, self.p);
                Self::raw(self.p, self.coeffs.iter().map(|&c| mul(c, li, self.p)).collect())
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let p = self.p;
        Self::raw(
            p,
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).copied().unwrap_or(0);
                    let b = other.coeffs.get(i).copied().unwrap_or(0);
                    (a + p - b) % p
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::raw(self.p, Vec::new());
        }
        let p = self.p;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a * b) % p;
            }
        }
        Self::raw(p, out)
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let p = self.p;
        let dd = d.degree().expect("division by zero polynomial");
        let li = inv(d.coeffs[dd], p);
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::raw(p, Vec::new()), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for i in (0..q.len()).rev() {
            let t = mul(r[i + dd], li, p);
            if t == 0 {
                continue;
            }
            q[i] = t;
            for (j, &c) in d.coeffs.iter().enumerate() {
                r[i + j] = (r[i + j] + p - mul(t, c, p)) % p;
            }
        }
        r.truncate(dd);
        (Self::raw(p, q), Self::raw(p, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let p = self.p;
        Self::raw(
            p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mul(c, i as u64 % p, p))
                .collect(),
        )
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u64, m: &Self) -> Self {
        let mut acc = Self::raw(self.p, vec![1]).rem(m);
        let mut base = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        let g = self.gcd(&self.derivative());
        g.degree() == Some(0)
    }

    /// Distinct-degree factorization of a squarefree polynomial:
    /// pairs `(d, g_d)` with `g_d` the product of the irreducible factors of
    /// degree `d`.
    pub fn distinct_degree_factorization(&self) -> Vec<(usize, FpPoly)> {
        let p = self.p;
        let mut out = Vec::new();
        let mut f = self.monic();
        let x = Self::x(p);
        let mut h = x.clone();
        let mut i = 0usize;
        while let Some(df) = f.degree() {
            if df < 2 * (i + 1) {
                break;
            }
            i += 1;
            h = h.pow_mod(p, &f);
            let g = f.gcd(&h.sub(&x));
            if g.degree().unwrap_or(0) > 0 {
                f = f.div_rem(&g).0;
                h = h.rem(&f);
                out.push((i, g));
            }
        }
        if let Some(df) = f.degree() {
            if df > 0 {
                out.push((df, f));
            }
        }
        out
    }
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpPoly(p={}, {:?})", self.p, self.coeffs)
    }
}

#[inline]
fn mul(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

fn inv(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Degrees of the irreducible factors of `f` over `F_p`, or the
/// not-squarefree signal.
pub fn fp_factor_degrees(f: &FpPoly) -> Result<FactorDegrees> {
    match f.degree() {
        None | Some(0) => {
            return Err(Error::contract("fp_factor_degrees needs degree >= 1"));
        }
        _ => {}
    }
    if !f.is_squarefree() {
        return Ok(FactorDegrees::NotSquarefree);
    }
    let mut degrees = Vec::new();
    for (d, g) in f.distinct_degree_factorization() {
        let count = g.degree().unwrap_or(0) / d;
        degrees.extend(std::iter::repeat_n(d, count));
    }
    degrees.sort_unstable();
    Ok(FactorDegrees::Squarefree(degrees))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fp(p: u64, cs: &[i64]) -> FpPoly {
        FpPoly::new(p, cs.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect()).unwrap()
    }

    #[test]
    fn examples() {
        use FactorDegrees::*;
        assert_eq!(fp_factor_degrees(&fp(7, &[-2, 0, 1])).unwrap(), Squarefree(vec![1, 1]));
        assert_eq!(fp_factor_degrees(&fp(3, &[-2, 0, 1])).unwrap(), Squarefree(vec![2]));
        assert_eq!(fp_factor_degrees(&fp(2, &[-2, 0, 1])).unwrap(), NotSquarefree);
        assert!(fp_factor_degrees(&fp(5, &[3])).is_err());
        assert!(FpPoly::new(9, vec![1, 1]).is_err());
    }

    #[test]
    fn sextic_mod_five() {
        // x^6 - 18 = x^6 - 3 mod 5: 3 is a non-square mod 5, so no linear factors
        let d = match fp_factor_degrees(&fp(5, &[-18, 0, 0, 0, 0, 0, 1])).unwrap() {
            FactorDegrees::Squarefree(d) => d,
            other => panic!("{other:?}"),
        };
        assert_eq!(d.iter().sum::<usize>(), 6);
        assert!(d.iter().all(|&k| k > 1));
    }

    fn random_monic(rng: &mut ChaCha8Rng, p: u64, deg: usize) -> FpPoly {
        let mut cs: Vec<u64> = (0..deg).map(|_| rng.gen_range(0..p)).collect();
        cs.push(1);
        FpPoly::new(p, cs).unwrap()
    }

    fn random_irreducible(rng: &mut ChaCha8Rng, p: u64, deg: usize) -> FpPoly {
        loop {
            let f = random_monic(rng, p, deg);
            if fp_factor_degrees(&f).unwrap() == FactorDegrees::Squarefree(vec![deg]) {
                return f;
            }
        }
    }

    // Irreducibility oracle independent of DDF: no factor of degree <= deg/2
    // among all monic polynomials (feasible for tiny p and deg).
    fn irreducible_by_search(f: &FpPoly) -> bool {
        let p = f.modulus();
        let n = f.degree().unwrap();
        for d in 1..=n / 2 {
            let total = p.pow(d as u32);
            for idx in 0..total {
                let mut cs = Vec::with_capacity(d + 1);
                let mut k = idx;
                for _ in 0..d {
                    cs.push(k % p);
                    k /= p;
                }
                cs.push(1);
                let g = FpPoly::new(p, cs).unwrap();
                if f.rem(&g).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn ddf_agrees_with_exhaustive_irreducibility() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let p = [2u64, 3, 5][rng.gen_range(0..3)];
            let deg = rng.gen_range(1..=5);
            let f = random_monic(&mut rng, p, deg);
            if let FactorDegrees::Squarefree(d) = fp_factor_degrees(&f).unwrap() {
                assert_eq!(d == vec![deg], irreducible_by_search(&f), "{f:?}");
            }
        }
    }

    #[test]
    fn products_of_irreducibles_recover_degrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let p = [3u64, 5, 7, 11, 13][rng.gen_range(0..5)];
            let mut degs: Vec<usize> = (0..rng.gen_range(1..5)).map(|_| rng.gen_range(1..6)).collect();
            let mut f = FpPoly::new(p, vec![1]).unwrap();
            let mut parts: Vec<FpPoly> = Vec::new();
            for &d in &degs {
                let g = loop {
                    let g = random_irreducible(&mut rng, p, d);
                    if !parts.contains(&g) {
                        break g;
                    }
                };
                f = f.mul(&g);
                parts.push(g);
            }
            degs.sort_unstable();
            let got = fp_factor_degrees(&f).unwrap();
            assert_eq!(got, FactorDegrees::Squarefree(degs.clone()));
            if let FactorDegrees::Squarefree(d) = got {
                assert_eq!(d.iter().sum::<usize>(), f.degree().unwrap());
            }
        }
    }
}
