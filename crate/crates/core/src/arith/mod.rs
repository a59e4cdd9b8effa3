//! Exact arithmetic: rationals, valuations, integer factorization, dense
//! polynomials over Q and over prime fields, rational root finding and the
//! polynomial text format.

pub mod factor;
pub mod fp;
pub mod parse;
pub mod poly;
pub mod primes;
pub mod rational;
pub mod roots;
pub mod zpoly;

pub use factor::{factor_integer, factor_integer_with_cap, factor_rational, PrimeFactorization};
pub use fp::{fp_factor_degrees, FactorDegrees, FpPoly};
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
pub use parse::parse_poly;
pub use poly::UniPoly;
pub use primes::{is_prime, moebius};
pub use rational::{padic_valuation, Valuation};
pub use roots::rational_roots;

use crate::error::{Error, Result};

/// Eisenstein criterion at `p` for a monic integer polynomial.
pub fn is_eisenstein(f: &UniPoly, p: u64) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::contract(format!("{p} is not prime")));
    }
    let Some(d) = f.degree().filter(|&d| d >= 1) else {
        return Err(Error::contract("Eisenstein test needs degree >= 1"));
    };
    if !f.is_monic() {
        return Err(Error::contract(format!("{f} is not monic")));
    }
    let Some(coeffs) = f.integer_coeffs() else {
        return Err(Error::contract(format!("{f} has non-integer coefficients")));
    };
    let pb = BigInt::from(p);
    let divisible = coeffs[..d].iter().all(|c| (c % &pb) == BigInt::from(0));
    let sq = &pb * &pb;
    Ok(divisible && (&coeffs[0] % sq) != BigInt::from(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eisenstein_examples() {
        let f: UniPoly = "x^6 - 18".parse().unwrap();
        assert!(is_eisenstein(&f, 2).unwrap());
        assert!(!is_eisenstein(&f, 3).unwrap());
        assert!(!is_eisenstein(&"x^2 - 1".parse().unwrap(), 2).unwrap());
        assert!(is_eisenstein(&"2x^2 - 2".parse().unwrap(), 2).is_err());
        assert!(is_eisenstein(&"x^2 - 1/2".parse().unwrap(), 2).is_err());
    }
}
