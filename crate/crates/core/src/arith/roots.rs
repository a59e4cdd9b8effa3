//! Rational roots of rational polynomials.
//!
//! Dynatomic polynomials have thousands of coefficients with thousands of
//! bits, so the rational root theorem (which needs the divisors of the
//! constant term) is not usable directly. Instead:
//!
//! 1. pass to the primitive integer polynomial `F` with leading coefficient `L`;
//! 2. pick a prime `p` not dividing `L` for which every root of `F mod p` is
//!    simple;
//! 3. every rational root `a/b` has `b | L`, so it reduces to one of those
//!    roots mod p; Hensel-lift each one to `p^k > 2 (|L| + max|F_i|)`, which
//!    bounds `|L * a/b|` (Cauchy);
//! 4. the symmetric residue of `L * r` over `L` is the only possible rational
//!    root in that residue class; keep it iff it is an exact root.
//!
//! The search is complete because step 3 covers every residue class that a
//! rational root could occupy. If no suitable prime turns up (the polynomial
//! has a repeated factor with roots mod every prime tried), we recurse on the
//! squarefree part.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::poly::UniPoly;
use super::primes::{is_prime, primes};
use super::zpoly::{self, ZPoly};
use crate::error::{Error, Result};

/// Number of admissible primes inspected before picking the one with the
/// fewest roots.
const PRIME_SAMPLE: usize = 6;
const MAX_PRIME: u64 = 20_000;
const REJECTIONS_BEFORE_SQUAREFREE: usize = 8;

// Large primes for cheap probabilistic rejection of false candidates before
// the exact check.
const FILTER_PRIMES: [u64; 3] = [
    2_305_843_009_213_693_951,
    4_611_686_018_427_387_847,
    9_223_372_036_854_775_783,
];

/// Distinct rational roots of a nonzero polynomial, sorted increasingly.
pub fn rational_roots(f: &UniPoly) -> Result<Vec<BigRational>> {
    if f.is_zero() {
        return Err(Error::contract("rational_roots of the zero polynomial"));
    }
    let (_, prim) = f.to_primitive();
    rational_roots_of_integer_poly(&prim)
}

/// Distinct rational roots of a nonzero integer polynomial, sorted.
pub fn rational_roots_of_integer_poly(f: &[BigInt]) -> Result<Vec<BigRational>> {
    if zpoly::degree(f).is_none() {
        return Err(Error::contract("rational_roots of the zero polynomial"));
    }
    let mut roots = integer_poly_roots(f)?;
    roots.sort();
    roots.dedup();
    Ok(roots)
}

fn integer_poly_roots(p: &[BigInt]) -> Result<Vec<BigRational>> {
    let mut out = Vec::new();
    // strip the factor x^k
    let first = p.iter().position(|c| !c.is_zero()).unwrap_or(0);
    if first > 0 {
        out.push(BigRational::zero());
    }
    let mut f: ZPoly = p[first..].to_vec();
    zpoly::trim(&mut f);
    let Some(deg) = zpoly::degree(&f) else {
        return Ok(out);
    };
    match deg {
        0 => {}
        1 => out.push(BigRational::new(-f[0].clone(), f[1].clone())),
        _ => out.extend(lifted_roots(&f)?),
    }
    Ok(out)
}

fn proper_squarefree_part(f: &[BigInt]) -> Result<Option<ZPoly>> {
    let g = zpoly::gcd(f, &zpoly::derivative(f));
    if zpoly::degree(&g).unwrap_or(0) == 0 {
        return Ok(None);
    }
    let sqf = zpoly::exact_div(f, &g)
        .ok_or_else(|| Error::internal("gcd does not divide its argument"))?;
    Ok(Some(zpoly::primitive_part(&sqf).1))
}

struct ModRoots {
    p: u64,
    roots: Vec<u64>,
}

fn roots_mod_p(f: &[BigInt], p: u64) -> Option<ModRoots> {
    let fp = zpoly::reduce_mod_u64(f, p);
    let dfp: Vec<u64> = fp
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| ((c as u128 * i as u128) % p as u128) as u64)
        .collect();
    let mut roots = Vec::new();
    for r in 0..p {
        if zpoly::eval_mod_u64(&fp, r, p) == 0 {
            if zpoly::eval_mod_u64(&dfp, r, p) == 0 {
                return None;
            }
            roots.push(r);
        }
    }
    Some(ModRoots { p, roots })
}

fn lifted_roots(f: &[BigInt]) -> Result<Vec<BigRational>> {
    let lc = f.last().expect("nonzero").clone();
    let mut best: Option<ModRoots> = None;
    let mut admissible = 0;
    let mut rejected = 0;
    let mut squarefree_checked = false;
    for p in primes().take_while(|&p| p <= MAX_PRIME) {
        if (&lc % p).is_zero() {
            continue;
        }
        let Some(mr) = roots_mod_p(f, p) else {
            rejected += 1;
            if admissible == 0 && rejected >= REJECTIONS_BEFORE_SQUAREFREE && !squarefree_checked {
                squarefree_checked = true;
                // Repeated roots mod many primes: likely a repeated factor.
                if let Some(sqf) = proper_squarefree_part(f)? {
                    return integer_poly_roots(&sqf);
                }
            }
            continue;
        };
        admissible += 1;
        let done = mr.roots.is_empty();
        if best.as_ref().is_none_or(|b| mr.roots.len() < b.roots.len()) {
            best = Some(mr);
        }
        if done || admissible >= PRIME_SAMPLE {
            break;
        }
    }
    let Some(mr) = best else {
        if !squarefree_checked {
            if let Some(sqf) = proper_squarefree_part(f)? {
                return integer_poly_roots(&sqf);
            }
        }
        return Err(Error::resource(
            "root-finding prime search",
            format!("no prime below {MAX_PRIME} separates the roots"),
        ));
    };
    debug_assert!(is_prime(mr.p));

    let max_coeff = f.iter().map(|c| c.abs()).max().unwrap_or_default();
    let bound: BigInt = (lc.abs() + max_coeff) * 2;
    let df = zpoly::derivative(f);
    let p = BigInt::from(mr.p);

    let mut out = Vec::new();
    for r0 in mr.roots {
        let (r, modulus) = hensel_lift(f, &df, BigInt::from(r0), &p, &bound)?;
        let mut y = (&lc * r).mod_floor(&modulus);
        if &y * 2 > modulus {
            y -= &modulus;
        }
        let cand = BigRational::new(y, lc.clone());
        if is_root(f, &cand) {
            out.push(cand);
        }
    }
    Ok(out)
}

/// Newton iteration doubling the p-adic precision until `p^k > bound`.
fn hensel_lift(
    f: &[BigInt],
    df: &[BigInt],
    r0: BigInt,
    p: &BigInt,
    bound: &BigInt,
) -> Result<(BigInt, BigInt)> {
    let mut modulus = p.clone();
    let mut r = r0;
    while &modulus <= bound {
        modulus = &modulus * &modulus;
        let fv = zpoly::eval_mod_big(f, &r, &modulus);
        let dv = zpoly::eval_mod_big(df, &r, &modulus);
        let inv = dv
            .modinv(&modulus)
            .ok_or_else(|| Error::internal("derivative not a unit during Hensel lifting"))?;
        r = (r - fv * inv).mod_floor(&modulus);
    }
    Ok((r, modulus))
}

fn is_root(f: &[BigInt], cand: &BigRational) -> bool {
    let (a, b) = (cand.numer(), cand.denom());
    for &q in &FILTER_PRIMES {
        let qb = BigInt::from(q);
        let bm = b.mod_floor(&qb);
        if bm.is_zero() {
            continue;
        }
        let x = (a * bm.modinv(&qb).expect("prime modulus")).mod_floor(&qb);
        if !zpoly::eval_mod_big(f, &x, &qb).is_zero() {
            return false;
        }
    }
    // exact: (b x - a) | F
    let linear: ZPoly = vec![-a.clone(), b.clone()];
    zpoly::exact_div(f, &linear).is_some()
}

/// True when `r` is a root of `f`.
pub fn is_rational_root(f: &UniPoly, r: &BigRational) -> bool {
    f.eval(r).is_zero()
}
