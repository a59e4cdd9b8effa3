//! Escape bounds for periodic points.
//!
//! Archimedean: with `S = sum_{i<d} |a_i|` and `R = max(1, (S + 2) / |a_d|)`,
//! any `|x| > R` satisfies `|f(x)| > 2|x|`, so the orbit grows without bound.
//!
//! Non-archimedean: for a prime `p` put
//! `U_p = min( min_{i<d} (v(a_i) - v(a_d)) / (d - i), -v(a_d) / (d - 1) )`.
//! If `v_p(x) < U_p` the leading term dominates and `v_p(f(x)) < v_p(x)`, so
//! valuations decrease forever. Periodic points therefore satisfy
//! `v_p(x) >= ceil(U_p)`. For primes of good reduction `U_p = 0`, so only
//! the finitely many bad primes contribute denominators.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::factor::factor_integer_with_cap;
use crate::arith::rational::valuation_unchecked;
use crate::arith::UniPoly;
use crate::error::{Error, Result};
use crate::Limits;

#[derive(Debug, Clone)]
pub struct EscapeBounds {
    /// Every periodic point has absolute value at most this.
    pub radius: BigRational,
    /// `(p, m)`: every periodic point has `v_p >= m`. Only primes with
    /// `m != 0` or bad reduction are listed.
    pub prime_floors: Vec<(u64, i64)>,
    /// False when some bad prime could not be determined (factorization
    /// failed); the non-archimedean data is then partial.
    pub primes_complete: bool,
}

impl EscapeBounds {
    pub fn new(f: &UniPoly, limits: &Limits) -> Result<Self> {
        let d = f.degree().filter(|&d| d >= 2).ok_or_else(|| {
            Error::contract(format!("{f} must have degree >= 2"))
        })?;
        let lead = f.coeff(d);
        let s: BigRational = f.coeffs()[..d].iter().map(|c| c.abs()).sum();
        let two = BigRational::from_integer(BigInt::from(2));
        let r = (s + two) / lead.abs();
        let radius = if r < BigRational::one() { BigRational::one() } else { r };

        // Bad primes: divisors of the leading coefficient, and of every
        // coefficient denominator.
        let mut to_factor: Vec<BigInt> = vec![lead.numer().clone(), lead.denom().clone()];
        to_factor.extend(f.coeffs().iter().map(|c| c.denom().clone()));
        let mut primes: Vec<u64> = Vec::new();
        let mut primes_complete = true;
        for n in to_factor {
            if n.magnitude().is_one() || n.is_zero() {
                continue;
            }
            match factor_integer_with_cap(&n, &limits.factor_cap) {
                Ok(fac) => {
                    for p in fac.factors.keys() {
                        match p.to_u64() {
                            Some(p) => primes.push(p),
                            None => primes_complete = false,
                        }
                    }
                }
                Err(_) => primes_complete = false,
            }
        }
        primes.sort_unstable();
        primes.dedup();

        let mut prime_floors = Vec::new();
        for p in primes {
            let vd = valuation_unchecked(&lead, p).finite().expect("nonzero lead");
            let mut u = BigRational::new(BigInt::from(-vd), BigInt::from(d as i64 - 1));
            for (i, c) in f.coeffs()[..d].iter().enumerate() {
                if let Some(vi) = valuation_unchecked(c, p).finite() {
                    let q = BigRational::new(BigInt::from(vi - vd), BigInt::from((d - i) as i64));
                    if q < u {
                        u = q;
                    }
                }
            }
            let floor = u.ceil().to_integer().to_i64().unwrap_or(i64::MIN);
            if floor != 0 {
                prime_floors.push((p, floor));
            }
        }
        Ok(EscapeBounds {
            radius,
            prime_floors,
            primes_complete,
        })
    }

    /// True when `x` provably lies outside the set of periodic points (its
    /// forward orbit escapes).
    pub fn escapes(&self, x: &BigRational) -> bool {
        if x.abs() > self.radius {
            return true;
        }
        self.prime_floors.iter().any(|&(p, m)| {
            valuation_unchecked(x, p).finite().is_some_and(|v| v < m)
        })
    }

    /// Common denominator of all periodic points.
    pub fn denominator(&self) -> BigInt {
        self.prime_floors
            .iter()
            .filter(|(_, m)| *m < 0)
            .fold(BigInt::one(), |acc, &(p, m)| {
                acc * num_traits::pow(BigInt::from(p), (-m) as usize)
            })
    }

    /// Every rational that could be periodic: `k / D` with `|k| <= R D`,
    /// filtered by the valuation floors. Requires complete prime data.
    pub fn periodic_candidates(&self, limits: &Limits) -> Result<Vec<BigRational>> {
        if !self.primes_complete {
            return Err(Error::resource(
                "factor_cap",
                "bad primes of the map could not all be determined",
            ));
        }
        let den = self.denominator();
        let kmax = (&self.radius * BigRational::from_integer(den.clone())).floor().to_integer();
        let count = kmax.magnitude() * BigUint::from(2u32) + BigUint::one();
        if count > BigUint::from(limits.box_candidate_cap) {
            return Err(Error::resource(
                "box_candidate_cap",
                format!(
                    "{count} escape-box candidates exceed the cap {}",
                    limits.box_candidate_cap
                ),
            ));
        }
        let kmax = kmax.to_i64().expect("bounded by cap");
        let out = (-kmax..=kmax)
            .map(|k| BigRational::new(BigInt::from(k), den.clone()))
            .filter(|x| !self.escapes(x))
            .collect();
        Ok(out)
    }
}
