//! Polynomial dynamics over Q: iteration, dynatomic polynomials, periodic
//! orbits, backward orbits and the Chebyshev family.

mod chebyshev;
pub mod escape;
pub(crate) mod periodic;
mod preimage;

pub use chebyshev::{chebyshev, verify_chebyshev_identity};
pub use escape::EscapeBounds;
pub use periodic::{
    canonical_orbit, exact_period, exact_period_bounded, rational_periodic_points, rational_periodic_points_with,
    PeriodicOrbit,
};
pub use preimage::{preimage_tree, preimages, PreimageNode, PreimageTree};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::primes::{divisors, moebius};
use crate::arith::zpoly::{self, ZPoly};
use crate::arith::UniPoly;
use crate::error::{Error, Result};
use crate::Limits;

/// `f^k(x0)` by repeated exact evaluation; `f^0` is the identity.
pub fn iterate(f: &UniPoly, k: u64, x0: &BigRational) -> BigRational {
    let mut x = x0.clone();
    for _ in 0..k {
        x = f.eval(&x);
    }
    x
}

fn require_nonlinear(f: &UniPoly) -> Result<usize> {
    match f.degree() {
        Some(d) if d >= 2 => Ok(d),
        _ => Err(Error::contract(format!("{f} must have degree >= 2"))),
    }
}

/// Checks `(deg f)^k <= cap` without overflow.
pub(crate) fn check_degree_cap(deg: usize, k: u64, limits: &Limits) -> Result<()> {
    let mut acc: usize = 1;
    for _ in 0..k {
        acc = acc.saturating_mul(deg.max(1));
        if acc > limits.poly_degree_cap {
            return Err(Error::resource(
                "poly_degree_cap",
                format!(
                    "degree {deg}^{k} exceeds the symbolic degree cap {}",
                    limits.poly_degree_cap
                ),
            ));
        }
    }
    Ok(())
}

/// The expanded iterate `f^k`, `k >= 1`.
pub fn iterate_poly(f: &UniPoly, k: u64, limits: &Limits) -> Result<UniPoly> {
    if k == 0 {
        return Err(Error::contract("iterate_poly needs k >= 1"));
    }
    check_degree_cap(f.deg(), k, limits)?;
    Ok(Iterates::compute(f, k, limits)?.get(k))
}

/// Integer polynomial over a common denominator, `num / den`.
///
/// Iterates of a rational map are built in this form so that no gcd is
/// taken during composition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledPoly {
    pub num: ZPoly,
    pub den: BigInt,
}

impl ScaledPoly {
    pub fn to_unipoly(&self) -> UniPoly {
        UniPoly::from_scaled(&BigRational::new(BigInt::one(), self.den.clone()), &self.num)
    }

    /// `self - x`, still over the same denominator.
    fn minus_x(&self) -> ZPoly {
        let mut p = self.num.clone();
        if p.len() < 2 {
            p.resize(2, BigInt::zero());
        }
        p[1] -= &self.den;
        zpoly::trim(&mut p);
        p
    }
}

/// Dynatomic polynomial as `scale * primitive`, primitive in Z[x].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynatomicPoly {
    pub primitive: ZPoly,
    pub scale: BigRational,
}

impl DynatomicPoly {
    pub fn to_unipoly(&self) -> UniPoly {
        UniPoly::from_scaled(&self.scale, &self.primitive)
    }

    pub fn degree(&self) -> usize {
        zpoly::degree(&self.primitive).unwrap_or(0)
    }

    /// Distinct rational roots.
    pub fn rational_roots(&self) -> Result<Vec<BigRational>> {
        crate::arith::roots::rational_roots_of_integer_poly(&self.primitive)
    }
}

/// Expanded iterates `f, f^2, ..., f^m`, computed once by successive
/// composition and shared by every dynatomic polynomial of order `<= m`.
#[derive(Debug, Clone)]
pub struct Iterates {
    polys: Vec<ScaledPoly>,
}

impl Iterates {
    pub fn compute(f: &UniPoly, m: u64, limits: &Limits) -> Result<Self> {
        check_degree_cap(f.deg(), m, limits)?;
        let (content, prim) = f.to_primitive();
        // f = F / c with F integral
        let fnum: ZPoly = prim.iter().map(|a| a * content.numer()).collect();
        let c = content.denom().clone();
        let t = limits.karatsuba_threshold;
        let mut polys: Vec<ScaledPoly> = Vec::with_capacity(m as usize);
        let mut cur = ScaledPoly { num: fnum.clone(), den: c.clone() };
        for k in 1..=m {
            if k > 1 {
                cur = compose_scaled(&fnum, &c, &cur, t);
            }
            polys.push(cur.clone());
        }
        Ok(Iterates { polys })
    }

    pub fn len(&self) -> u64 {
        self.polys.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// `f^k`, `1 <= k <= len`, over its common denominator.
    pub fn scaled(&self, k: u64) -> &ScaledPoly {
        &self.polys[k as usize - 1]
    }

    /// `f^k` as a rational polynomial.
    pub fn get(&self, k: u64) -> UniPoly {
        self.scaled(k).to_unipoly()
    }

    /// `Phi_n = prod_{d | n} (f^d - x)^{mu(n/d)}`.
    pub fn dynatomic(&self, n: u64, threshold: usize) -> Result<DynatomicPoly> {
        if n == 0 || n > self.len() {
            return Err(Error::contract(format!("dynatomic order {n} out of range")));
        }
        let mut num: ZPoly = vec![BigInt::one()];
        let mut den: ZPoly = vec![BigInt::one()];
        // (f^d - x) = (G_d - D_d x) / D_d
        let mut scale = BigRational::one();
        for d in divisors(n) {
            let it = self.scaled(d);
            match moebius(n / d) {
                1 => {
                    num = zpoly::mul(&num, &it.minus_x(), threshold);
                    scale /= BigRational::from_integer(it.den.clone());
                }
                -1 => {
                    den = zpoly::mul(&den, &it.minus_x(), threshold);
                    scale *= BigRational::from_integer(it.den.clone());
                }
                _ => {}
            }
        }
        let (den_content, den_prim) = zpoly::primitive_part(&den);
        let q = zpoly::exact_div(&num, &den_prim).ok_or_else(|| {
            Error::internal(format!("dynatomic product for n = {n} is not a polynomial"))
        })?;
        scale /= BigRational::from_integer(den_content);
        let (q_content, primitive) = zpoly::primitive_part(&q);
        scale *= BigRational::from_integer(q_content);
        Ok(DynatomicPoly { primitive, scale })
    }
}

/// `F(g) / c` for `g = G / D`: numerator `sum F_i G^i D^{d-i}`, denominator `c D^d`.
fn compose_scaled(fnum: &[BigInt], c: &BigInt, g: &ScaledPoly, threshold: usize) -> ScaledPoly {
    let d = fnum.len() - 1;
    let mut acc: ZPoly = vec![fnum[d].clone()];
    let mut dpow = BigInt::one();
    for i in (0..d).rev() {
        dpow *= &g.den;
        acc = zpoly::mul(&acc, &g.num, threshold);
        if !fnum[i].is_zero() {
            let term = &fnum[i] * &dpow;
            if acc.is_empty() {
                acc.push(BigInt::zero());
            }
            acc[0] += term;
        }
    }
    zpoly::trim(&mut acc);
    ScaledPoly { num: acc, den: c * dpow }
}

/// The dynatomic polynomial `Phi_n(f)`.
pub fn dynatomic(f: &UniPoly, n: u64, limits: &Limits) -> Result<UniPoly> {
    require_nonlinear(f)?;
    if n == 0 {
        return Err(Error::contract("dynatomic needs n >= 1"));
    }
    Ok(Iterates::compute(f, n, limits)?
        .dynatomic(n, limits.karatsuba_threshold)?
        .to_unipoly())
}

/// `sum_{d | n} mu(n/d) deg^d`, the degree of `Phi_n` for a degree-`deg` map.
pub fn dynatomic_degree(deg: u64, n: u64) -> i128 {
    divisors(n)
        .into_iter()
        .map(|d| moebius(n / d) as i128 * (deg as i128).pow(d as u32))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};
    use proptest::prelude::*;

    fn p(s: &str) -> UniPoly {
        s.parse().unwrap()
    }

    #[test]
    fn iterate_examples() {
        assert_eq!(iterate(&p("x^2-1"), 0, &int(5)), int(5));
        assert_eq!(iterate(&p("x^2-1"), 2, &int(0)), int(0));
        assert_eq!(iterate(&p("x^2"), 3, &int(2)), int(256));
    }

    #[test]
    fn iterate_poly_examples() {
        let l = Limits::default();
        assert_eq!(iterate_poly(&p("x^2-1"), 2, &l).unwrap(), p("x^4 - 2x^2"));
        assert_eq!(iterate_poly(&p("x^2"), 3, &l).unwrap(), p("x^8"));
        assert_eq!(iterate_poly(&p("2x+1"), 2, &l).unwrap(), p("4x+3"));
        let err = iterate_poly(&p("x^2"), 13, &l).unwrap_err();
        assert!(matches!(err, Error::Resource { limit: "poly_degree_cap", .. }));
        assert!(iterate_poly(&p("x^2"), 0, &l).is_err());
    }

    #[test]
    fn dynatomic_examples() {
        let l = Limits::default();
        assert_eq!(dynatomic(&p("x^2"), 2, &l).unwrap(), p("x^2 + x + 1"));
        assert_eq!(dynatomic(&p("x^2-1"), 2, &l).unwrap(), p("x^2 + x"));
        assert_eq!(dynatomic(&p("x^2-3/4"), 2, &l).unwrap(), p("x^2 + x + 1/4"));
        assert!(dynatomic(&p("2x+1"), 2, &l).is_err());
    }

    #[test]
    fn dynatomic_degrees() {
        assert_eq!(dynatomic_degree(2, 1), 2);
        assert_eq!(dynatomic_degree(2, 2), 2);
        assert_eq!(dynatomic_degree(2, 6), 64 - 8 - 4 + 2);
        assert_eq!(dynatomic_degree(3, 4), 81 - 9);
    }

    #[test]
    fn moebius_inversion_round_trip() {
        let l = Limits::default();
        for f in ["x^2 + 1/3", "x^3 - 2x + 1"] {
            let f = p(f);
            let its = Iterates::compute(&f, 6, &l).unwrap();
            for n in 1..=6 {
                let prod = divisors(n)
                    .into_iter()
                    .map(|d| its.dynatomic(d, 32).unwrap().to_unipoly())
                    .fold(UniPoly::one(), |a, b| &a * &b);
                assert_eq!(prod, &its.get(n) - &UniPoly::x());
            }
        }
    }

    proptest! {
        #[test]
        fn iterate_composes(a in -3i64..3, b in -3i64..3, c in 1i64..4, j in 0u64..3, k in 0u64..3, n in -4i64..4, d in 1i64..4) {
            let f = UniPoly::from_coeffs(vec![rat(a, c), int(b), int(1)]);
            let x = rat(n, d);
            prop_assert_eq!(iterate(&f, j + k, &x), iterate(&f, j, &iterate(&f, k, &x)));
        }
    }
}
