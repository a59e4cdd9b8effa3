use num_bigint::BigInt;
use num_rational::BigRational;

use crate::arith::UniPoly;

/// Monic Chebyshev polynomial normalized by `C_d(z + 1/z) = z^d + z^-d`.
///
/// Uses `C_{k+1} = x C_k - C_{k-1}` with `C_0 = 2`, `C_1 = x`.
pub fn chebyshev(d: u64) -> UniPoly {
    let x = UniPoly::x();
    let mut prev = UniPoly::constant(BigRational::from_integer(BigInt::from(2)));
    let mut cur = x.clone();
    if d == 0 {
        return prev;
    }
    for _ in 1..d {
        let next = &(&x * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Checks `z^d C_d(z + 1/z) = z^{2d} + 1` in Q[z].
pub fn verify_chebyshev_identity(d: u64) -> bool {
    identity_holds(&chebyshev(d), d as usize)
}

fn identity_holds(c: &UniPoly, d: usize) -> bool {
    // z^d (z + 1/z)^i = (z^2 + 1)^i z^{d-i}
    let z2p1 = UniPoly::from_ints(&[1, 0, 1]);
    let mut lhs = UniPoly::zero();
    let mut pow = UniPoly::one();
    for (i, coeff) in c.coeffs().iter().enumerate() {
        if i > d {
            return false;
        }
        let term = UniPoly::monomial(coeff.clone(), d - i);
        lhs = &lhs + &(&term * &pow);
        pow = &pow * &z2p1;
    }
    let rhs = &UniPoly::monomial(BigRational::from_integer(BigInt::from(1)), 2 * d) + &UniPoly::one();
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(chebyshev(1), "x".parse().unwrap());
        assert_eq!(chebyshev(2), "x^2 - 2".parse().unwrap());
        assert_eq!(chebyshev(3), "x^3 - 3x".parse().unwrap());
        for d in [1, 2, 5, 8, 13] {
            assert!(verify_chebyshev_identity(d), "d = {d}");
        }
    }

    #[test]
    fn identity_detects_wrong_polynomials() {
        assert!(!identity_holds(&"x^2 - 1".parse().unwrap(), 2));
        assert!(!identity_holds(&"x^3 - 3x + 1".parse().unwrap(), 3));
        assert!(!identity_holds(&chebyshev(3), 2));
    }

    #[test]
    fn monic_integer() {
        for d in 1..12 {
            let c = chebyshev(d);
            assert_eq!(c.deg() as u64, d);
            assert!(c.is_monic() && c.has_integer_coeffs());
        }
    }
}
