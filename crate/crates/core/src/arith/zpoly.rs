//! Dense integer polynomials (ascending coefficients). This is the working
//! representation behind [`UniPoly`](super::UniPoly): rational polynomials
//! are split into a rational content and a primitive integer part so the
//! expensive products and divisions stay in integer arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub const DEFAULT_KARATSUBA_THRESHOLD: usize = 32;

pub type ZPoly = Vec<BigInt>;

pub fn trim(p: &mut ZPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn degree(p: &[BigInt]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn add(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out: ZPoly = long.to_vec();
    for (o, s) in out.iter_mut().zip(short) {
        *o += s;
    }
    trim(&mut out);
    out
}

pub fn sub(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let mut out: ZPoly = a.to_vec();
    if out.len() < b.len() {
        out.resize(b.len(), BigInt::zero());
    }
    for (o, s) in out.iter_mut().zip(b) {
        *o -= s;
    }
    trim(&mut out);
    out
}

pub fn scale(a: &[BigInt], k: &BigInt) -> ZPoly {
    if k.is_zero() {
        return Vec::new();
    }
    a.iter().map(|c| c * k).collect()
}

/// Product using schoolbook multiplication below `threshold` coefficients
/// and Karatsuba splitting above it.
pub fn mul(a: &[BigInt], b: &[BigInt], threshold: usize) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    mul_into(a, b, &mut out, threshold.max(2));
    trim(&mut out);
    out
}

fn schoolbook_into(a: &[BigInt], b: &[BigInt], out: &mut [BigInt]) {
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
}

// Accumulates a*b into out (out.len() >= a.len() + b.len() - 1).
fn mul_into(a: &[BigInt], b: &[BigInt], out: &mut [BigInt], threshold: usize) {
    if a.len().min(b.len()) < threshold {
        schoolbook_into(a, b, out);
        return;
    }
    if a.len() != b.len() {
        // Unbalanced: slice the longer operand into chunks of the shorter length.
        let (long, short) = if a.len() > b.len() { (a, b) } else { (b, a) };
        for (k, chunk) in long.chunks(short.len()).enumerate() {
            let off = k * short.len();
            mul_into(chunk, short, &mut out[off..], threshold);
        }
        return;
    }
    let n = a.len();
    let half = n / 2;
    let (a0, a1) = a.split_at(half);
    let (b0, b1) = b.split_at(half);

    let mut z0 = vec![BigInt::zero(); 2 * half - 1];
    mul_into(a0, b0, &mut z0, threshold);
    let hi = n - half;
    let mut z2 = vec![BigInt::zero(); 2 * hi - 1];
    mul_into(a1, b1, &mut z2, threshold);

    let sa: Vec<BigInt> = (0..hi)
        .map(|i| a1[i].clone() + a0.get(i).cloned().unwrap_or_default())
        .collect();
    let sb: Vec<BigInt> = (0..hi)
        .map(|i| b1[i].clone() + b0.get(i).cloned().unwrap_or_default())
        .collect();
    let mut z1 = vec![BigInt::zero(); 2 * hi - 1];
    mul_into(&sa, &sb, &mut z1, threshold);
    for (i, c) in z0.iter().enumerate() {
        z1[i] -= c;
    }
    for (i, c) in z2.iter().enumerate() {
        z1[i] -= c;
    }

    for (i, c) in z0.into_iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in z1.into_iter().enumerate() {
        out[i + half] += c;
    }
    for (i, c) in z2.into_iter().enumerate() {
        out[i + 2 * half] += c;
    }
}

pub fn content(p: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in p {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Divides out the content and makes the leading coefficient positive.
/// Returns `(signed content, primitive part)`.
pub fn primitive_part(p: &[BigInt]) -> (BigInt, ZPoly) {
    let mut c = content(p);
    if c.is_zero() {
        return (BigInt::zero(), Vec::new());
    }
    if p.iter().rev().find(|x| !x.is_zero()).is_some_and(|l| l.is_negative()) {
        c = -c;
    }
    let prim = p.iter().map(|x| x / &c).collect::<ZPoly>();
    (c, prim)
}

/// Exact quotient `a / b` over the integers, or `None` if `b` does not
/// divide `a`. When `b` is primitive and the quotient exists over the
/// rationals it is integral (Gauss), so this also decides rational
/// divisibility of integer inputs.
pub fn exact_div(a: &[BigInt], b: &[BigInt]) -> Option<ZPoly> {
    let db = degree(b)?;
    let Some(da) = degree(a) else {
        return Some(Vec::new());
    };
    if da < db {
        return None;
    }
    let lc = &b[db];
    let mut rem: ZPoly = a[..=da].to_vec();
    let mut q = vec![BigInt::zero(); da - db + 1];
    for i in (0..=da - db).rev() {
        let top = &rem[i + db];
        if top.is_zero() {
            continue;
        }
        let (qi, r) = top.div_rem(lc);
        if !r.is_zero() {
            return None;
        }
        for (j, bj) in b[..=db].iter().enumerate() {
            if !bj.is_zero() {
                rem[i + j] -= &qi * bj;
            }
        }
        q[i] = qi;
    }
    if rem.iter().any(|c| !c.is_zero()) {
        return None;
    }
    trim(&mut q);
    Some(q)
}

pub fn derivative(p: &[BigInt]) -> ZPoly {
    let mut out: ZPoly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    trim(&mut out);
    out
}

/// Remainder of `a` by `b` after scaling `a` by `lc(b)^k` (pseudo-division).
pub fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let db = degree(b).expect("pseudo_rem by zero polynomial");
    let mut r: ZPoly = a.to_vec();
    trim(&mut r);
    let lc = b[db].clone();
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let t = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c *= &lc;
        }
        for (j, bj) in b[..=db].iter().enumerate() {
            r[shift + j] -= &t * bj;
        }
        trim(&mut r);
    }
    r
}

/// Primitive gcd over Z[x] (primitive PRS). Leading coefficient positive.
pub fn gcd(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let (_, mut x) = primitive_part(a);
    let (_, mut y) = primitive_part(b);
    if degree(&x).is_none() {
        return y;
    }
    if degree(&y).is_none() {
        return x;
    }
    if degree(&x) < degree(&y) {
        std::mem::swap(&mut x, &mut y);
    }
    while degree(&y).is_some() {
        let r = pseudo_rem(&x, &y);
        x = y;
        y = primitive_part(&r).1;
    }
    x
}

/// Evaluates at `x` modulo `m` (coefficients reduced on the fly).
pub fn eval_mod_u64(p: &[u64], x: u64, m: u64) -> u64 {
    let mut acc = 0u64;
    for &c in p.iter().rev() {
        acc = ((acc as u128 * x as u128 + c as u128) % m as u128) as u64;
    }
    acc
}

pub fn reduce_mod_u64(p: &[BigInt], m: u64) -> Vec<u64> {
    let mb = BigInt::from(m);
    p.iter()
        .map(|c| {
            let r = c.mod_floor(&mb);
            r.iter_u64_digits().next().unwrap_or(0)
        })
        .collect()
}

/// Evaluates at `x` modulo the big modulus `m`, result in `[0, m)`.
pub fn eval_mod_big(p: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in p.iter().rev() {
        acc = (acc * x + c).mod_floor(m);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(v: &[i64]) -> ZPoly {
        let mut p: ZPoly = v.iter().map(|&c| BigInt::from(c)).collect();
        trim(&mut p);
        p
    }

    proptest! {
        #[test]
        fn karatsuba_matches_schoolbook(
            a in proptest::collection::vec(-1000i64..1000, 1..90),
            b in proptest::collection::vec(-1000i64..1000, 1..90),
            t in 2usize..40,
        ) {
            let (a, b) = (z(&a), z(&b));
            prop_assert_eq!(mul(&a, &b, t), mul(&a, &b, usize::MAX));
        }

        #[test]
        fn exact_div_inverts_mul(
            a in proptest::collection::vec(-50i64..50, 1..20),
            b in proptest::collection::vec(-50i64..50, 1..10),
        ) {
            let (a, b) = (z(&a), z(&b));
            prop_assume!(degree(&b).is_some());
            let prod = mul(&a, &b, 4);
            prop_assert_eq!(exact_div(&prod, &b), Some(a));
        }
    }

    #[test]
    fn exact_div_detects_remainder() {
        assert_eq!(exact_div(&z(&[1, 0, 1]), &z(&[1, 1])), None);
        assert_eq!(exact_div(&z(&[-1, 0, 1]), &z(&[1, 1])), Some(z(&[-1, 1])));
        // 2x+2 divided by 2x: quotient not integral
        assert_eq!(exact_div(&z(&[2, 2]), &z(&[0, 2])), None);
    }

    #[test]
    fn polynomial_gcd() {
        // (x-1)^2 (x+2) and (x-1)(x+3)
        let a = mul(&mul(&z(&[-1, 1]), &z(&[-1, 1]), 32), &z(&[2, 1]), 32);
        let b = mul(&z(&[-1, 1]), &z(&[3, 1]), 32);
        assert_eq!(gcd(&a, &b), z(&[-1, 1]));
        assert_eq!(gcd(&a, &derivative(&a)), z(&[-1, 1]));
    }
}
