//! Factor degrees of `x^D - a` over `F_p` without expanding the polynomial.
//!
//! With `p` coprime to `D a` the binomial is separable. If `o` is the order
//! of `a` in `F_p^*`, its roots are the `zeta^j` with `zeta` of order
//! `N = D o` and `j` in a fixed unit class mod `o`. The degree of a root of
//! order `m` is the order of `p` mod `m`, so only the distribution of
//! `gcd(j, N)` matters, and it splits over the primes of `N`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::primes::{factor_u64, is_prime, multiplicative_order, pow_mod};
use crate::error::{Error, Result};

/// Number of irreducible factors of each degree of `x^D - a` over `F_p`,
/// where `D = prod l^k` is given factored.
pub fn binomial_factor_degrees(d: &[(u64, u32)], a: u64, p: u64) -> Result<BTreeMap<u64, BigUint>> {
    if !is_prime(p) {
        return Err(Error::contract(format!("{p} is not prime")));
    }
    let a = a % p;
    if a == 0 {
        return Err(Error::contract(format!("constant vanishes mod {p}")));
    }
    if d.iter().any(|&(l, k)| l == p && k > 0) {
        return Err(Error::contract(format!("{p} divides the exponent")));
    }
    let o = multiplicative_order(a, p).expect("nonzero residue is a unit");
    let mut d_exp: BTreeMap<u64, u32> = BTreeMap::new();
    for &(l, k) in d {
        if k > 0 {
            *d_exp.entry(l).or_insert(0) += k;
        }
    }
    let o_exp: BTreeMap<u64, u32> = factor_u64(o).into_iter().collect();

    // Primes of o contribute a fixed order component l^{v_l(N)} to every
    // root; the other primes of D let v_l(j) range freely.
    let mut fixed_degree = 1u64;
    let mut fixed_mult = BigUint::one();
    for (&l, &vo) in &o_exp {
        let vd = d_exp.get(&l).copied().unwrap_or(0);
        let m = checked_prime_power(l, vo + vd)?;
        fixed_degree = checked_lcm(fixed_degree, multiplicative_order(p % m, m).unwrap())?;
        fixed_mult *= BigUint::from(l).pow(vd);
    }
    let mut roots_by_degree: BTreeMap<u64, BigUint> = BTreeMap::from([(fixed_degree, fixed_mult)]);
    for (&l, &v) in d_exp.iter().filter(|(l, _)| !o_exp.contains_key(l)) {
        let mut options: Vec<(u64, BigUint)> = vec![(1, BigUint::one())];
        for s in 1..=v {
            let m = checked_prime_power(l, s)?;
            let count = BigUint::from(l - 1) * BigUint::from(l).pow(s - 1);
            options.push((multiplicative_order(p % m, m).unwrap(), count));
        }
        let mut next: BTreeMap<u64, BigUint> = BTreeMap::new();
        for (deg, c) in &roots_by_degree {
            for (od, oc) in &options {
                *next.entry(checked_lcm(*deg, *od)?).or_insert_with(BigUint::zero) += c * oc;
            }
        }
        roots_by_degree = next;
    }
    roots_by_degree
        .into_iter()
        .map(|(deg, roots)| {
            let (q, r) = roots.div_rem(&BigUint::from(deg));
            if r.is_zero() {
                Ok((deg, q))
            } else {
                Err(Error::internal(format!("{roots} roots of degree {deg} do not form whole factors")))
            }
        })
        .collect()
}

fn checked_prime_power(l: u64, k: u32) -> Result<u64> {
    l.checked_pow(k)
        .ok_or_else(|| Error::resource("inertia_degree", format!("{l}^{k} exceeds 64 bits")))
}

fn checked_lcm(a: u64, b: u64) -> Result<u64> {
    let g = a.gcd(&b);
    (a / g)
        .checked_mul(b)
        .ok_or_else(|| Error::resource("inertia_degree", "inertia degree exceeds 64 bits"))
}

/// `prod p_i^{e_i} mod m` for exponents given as big integers.
pub(crate) fn residue_of_power_product<'a, I>(factors: I, m: u64) -> u64
where
    I: IntoIterator<Item = (u64, &'a BigUint)>,
{
    let phi_like = m - 1; // m prime and coprime to every base
    factors.into_iter().fold(1u64 % m, |acc, (base, e)| {
        let e = (e % BigUint::from(phi_like)).iter_u64_digits().next().unwrap_or(0);
        ((acc as u128 * pow_mod(base % m, e, m) as u128) % m as u128) as u64
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::fp::{fp_factor_degrees, FactorDegrees, FpPoly};
    use proptest::prelude::*;

    fn dense(d: u64, a: u64, p: u64) -> BTreeMap<u64, BigUint> {
        let mut c = vec![0u64; d as usize + 1];
        c[0] = (p - a % p) % p;
        c[d as usize] = 1;
        let FactorDegrees::Squarefree(degs) = fp_factor_degrees(&FpPoly::new(p, c).unwrap()).unwrap() else {
            panic!("binomial must be squarefree");
        };
        let mut out = BTreeMap::new();
        for g in degs {
            *out.entry(g as u64).or_insert_with(BigUint::zero) += 1u32;
        }
        out
    }

    fn counts(pairs: &[(u64, u32)]) -> BTreeMap<u64, BigUint> {
        pairs.iter().map(|&(d, c)| (d, BigUint::from(c))).collect()
    }

    #[test]
    fn small_examples() {
        // x^2 - 2 mod 3 irreducible; mod 7 splits.
        assert_eq!(binomial_factor_degrees(&[(2, 1)], 2, 3).unwrap(), counts(&[(2, 1)]));
        assert_eq!(binomial_factor_degrees(&[(2, 1)], 2, 7).unwrap(), counts(&[(1, 2)]));
        // x^6 - 18 mod 5
        assert_eq!(binomial_factor_degrees(&[(2, 1), (3, 1)], 18, 5).unwrap(), dense(6, 18, 5));
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(binomial_factor_degrees(&[(2, 1)], 3, 3).is_err());
        assert!(binomial_factor_degrees(&[(3, 1)], 2, 3).is_err());
        assert!(binomial_factor_degrees(&[(2, 1)], 2, 4).is_err());
    }

    #[test]
    fn power_product_residue() {
        let e = [(2u64, BigUint::from(1u32)), (3, BigUint::from(2u32)), (5, BigUint::from(6u32))];
        assert_eq!(residue_of_power_product(e.iter().map(|(p, e)| (*p, e)), 7), 281250 % 7);
    }

    proptest! {
        #[test]
        fn matches_dense_factorization(pi in 0usize..8, d in 1u64..60, a in 1u64..200) {
            let p = [3u64, 5, 7, 11, 13, 17, 19, 23][pi];
            prop_assume!(d % p != 0 && a % p != 0);
            let fd: Vec<(u64, u32)> = factor_u64(d);
            prop_assert_eq!(binomial_factor_degrees(&fd, a, p).unwrap(), dense(d, a, p));
        }
    }
}
