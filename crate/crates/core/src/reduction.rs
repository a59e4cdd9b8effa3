//! Good reduction, the two-prime period bound, and certified enumeration
//! of rational periodic points.
//!
//! Good reduction at `p` means every coefficient is p-integral and the
//! leading coefficient is a p-unit (additive valuations: `v_p(a_i) >= 0`,
//! `v_p(a_d) = 0`). If `f` has good reduction at two distinct primes `p`,
//! `q` with inertia degrees `f_p`, `f_q`, every periodic point in the field
//! has period at most `(p^{2 f_p} - 1)(q^{2 f_q} - 1)`. Over Q all inertia
//! degrees are 1.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::arith::fp::{fp_factor_degrees, FactorDegrees, FpPoly};
use crate::arith::primes::{is_prime, primes};
use crate::arith::rational::{valuation_unchecked, Valuation};
use crate::arith::UniPoly;
use crate::dynamics::{
    exact_period_bounded, periodic::orbits_for_periods, EscapeBounds, Iterates, PeriodicOrbit,
};
use crate::error::{Error, Result};
use crate::{par, Limits};

fn require_nonlinear(f: &UniPoly) -> Result<usize> {
    match f.degree() {
        Some(d) if d >= 2 => Ok(d),
        _ => Err(Error::contract(format!("{f} must have degree >= 2"))),
    }
}

/// Per-prime record of the valuation test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoodReductionWitness {
    pub prime: u64,
    /// `v_p(a_i)` in ascending order of `i`; `null` for zero coefficients.
    pub valuations: Vec<Option<i64>>,
    pub good: bool,
}

impl GoodReductionWitness {
    pub fn compute(f: &UniPoly, p: u64) -> Self {
        let valuations: Vec<Valuation> = f.coeffs().iter().map(|c| valuation_unchecked(c, p)).collect();
        let d = valuations.len() - 1;
        let integral = valuations.iter().all(|v| *v >= Valuation::Finite(0));
        let good = integral && valuations[d] == Valuation::Finite(0);
        GoodReductionWitness {
            prime: p,
            valuations: valuations.into_iter().map(Valuation::finite).collect(),
            good,
        }
    }
}

pub fn has_good_reduction(f: &UniPoly, p: u64) -> Result<bool> {
    require_nonlinear(f)?;
    if !is_prime(p) {
        return Err(Error::contract(format!("{p} is not prime")));
    }
    Ok(GoodReductionWitness::compute(f, p).good)
}

/// The `count` smallest primes of good reduction.
pub fn good_reduction_primes(f: &UniPoly, count: usize) -> Result<Vec<u64>> {
    require_nonlinear(f)?;
    if count == 0 {
        return Err(Error::contract("count must be >= 1"));
    }
    // Only primes dividing a denominator or the leading numerator can fail,
    // so the scan terminates.
    Ok(primes()
        .filter(|&p| GoodReductionWitness::compute(f, p).good)
        .take(count)
        .collect())
}

/// Certificate that every periodic point has period at most `bound`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodBoundCertificate {
    pub primes: [u64; 2],
    pub inertia: [u32; 2],
    #[serde(serialize_with = "serialize_big")]
    pub bound: BigUint,
    pub good_reduction_witnesses: Vec<GoodReductionWitness>,
}

pub(crate) fn serialize_big<S: Serializer>(n: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match n.to_u64() {
        Some(v) => s.serialize_u64(v),
        None => s.serialize_str(&n.to_string()),
    }
}

/// `(p^{2 f_p} - 1)(q^{2 f_q} - 1)`.
pub fn two_prime_bound(p: u64, fp: u32, q: u64, fq: u32) -> BigUint {
    let one = BigUint::one();
    let a = BigUint::from(p).pow(2 * fp) - &one;
    let b = BigUint::from(q).pow(2 * fq) - &one;
    a * b
}

impl PeriodBoundCertificate {
    pub fn new(f: &UniPoly, primes: [u64; 2], inertia: [u32; 2]) -> Result<Self> {
        if primes[0] == primes[1] || !is_prime(primes[0]) || !is_prime(primes[1]) {
            return Err(Error::contract("certificate needs two distinct primes"));
        }
        let witnesses: Vec<_> = primes.iter().map(|&p| GoodReductionWitness::compute(f, p)).collect();
        if let Some(w) = witnesses.iter().find(|w| !w.good) {
            return Err(Error::contract(format!("{f} has bad reduction at {}", w.prime)));
        }
        Ok(PeriodBoundCertificate {
            primes,
            inertia,
            bound: two_prime_bound(primes[0], inertia[0], primes[1], inertia[1]),
            good_reduction_witnesses: witnesses,
        })
    }

    /// Re-derives the witnesses and the closed-form bound.
    pub fn recheck(&self, f: &UniPoly) -> bool {
        let [p, q] = self.primes;
        p != q
            && is_prime(p)
            && is_prime(q)
            && self.bound == two_prime_bound(p, self.inertia[0], q, self.inertia[1])
            && self
                .good_reduction_witnesses
                .iter()
                .all(|w| *w == GoodReductionWitness::compute(f, w.prime) && w.good)
    }

    pub fn bound_u64(&self) -> Option<u64> {
        self.bound.to_u64()
    }
}

/// Bound from the two smallest primes of good reduction (inertia 1 over Q).
pub fn period_bound(f: &UniPoly) -> Result<PeriodBoundCertificate> {
    let ps = good_reduction_primes(f, 2)?;
    PeriodBoundCertificate::new(f, [ps[0], ps[1]], [1, 1])
}

/// Complete list of rational periodic orbits with the certificate that
/// justifies stopping at the bound.
#[derive(Debug, Clone, Serialize)]
pub struct CertifiedPeriodicPoints {
    pub orbits: Vec<PeriodicOrbit>,
    pub certificate: PeriodBoundCertificate,
    /// True when every period up to the bound was covered.
    pub complete: bool,
    /// Periods decided through dynatomic polynomials.
    pub dynatomic_periods: Vec<u64>,
    /// Periods whose dynatomic degree exceeds the cap, decided instead by
    /// sweeping the escape box.
    pub escape_box_periods: Vec<u64>,
    /// Periods left undecided (only when `complete` is false).
    pub omitted_periods: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub incomplete_reason: Option<String>,
}

pub fn certified_rational_periodic_points(f: &UniPoly, limits: &Limits) -> Result<CertifiedPeriodicPoints> {
    let deg = require_nonlinear(f)?;
    let certificate = period_bound(f)?;
    let bound = certificate
        .bound_u64()
        .ok_or_else(|| Error::resource("period bound", "bound does not fit in 64 bits"))?;

    let mut dyn_max = 0u64;
    let mut reach: usize = 1;
    while dyn_max < bound {
        reach = reach.saturating_mul(deg);
        if reach > limits.poly_degree_cap {
            break;
        }
        dyn_max += 1;
    }
    let dynatomic_periods: Vec<u64> = (1..=dyn_max).collect();
    let skipped: Vec<u64> = (dyn_max + 1..=bound).collect();

    let mut orbits = if dyn_max > 0 {
        let its = Iterates::compute(f, dyn_max, limits)?;
        orbits_for_periods(f, &its, &dynatomic_periods, limits)?
    } else {
        Vec::new()
    };

    let mut escape_box_periods = Vec::new();
    let mut omitted_periods = Vec::new();
    let mut incomplete_reason = None;
    if !skipped.is_empty() {
        match box_sweep(f, bound, limits) {
            Ok(box_orbits) => {
                // The sweep sees every period; it must agree with the
                // dynatomic scan where both apply.
                let dyn_set: BTreeSet<_> = orbits.iter().cloned().collect();
                let box_low: BTreeSet<_> = box_orbits.iter().filter(|o| o.period <= dyn_max).cloned().collect();
                if dyn_set != box_low {
                    return Err(Error::internal(format!(
                        "escape-box sweep disagrees with dynatomic scan for {f}"
                    )));
                }
                orbits.extend(box_orbits.into_iter().filter(|o| o.period > dyn_max));
                escape_box_periods = skipped;
            }
            Err(e) if e.is_resource() => {
                incomplete_reason = Some(e.to_string());
                omitted_periods = skipped;
            }
            Err(e) => return Err(e),
        }
    }
    orbits.sort();
    orbits.dedup();
    Ok(CertifiedPeriodicPoints {
        orbits,
        certificate,
        complete: omitted_periods.is_empty(),
        dynatomic_periods,
        escape_box_periods,
        omitted_periods,
        incomplete_reason,
    })
}

/// Iterates every candidate of the escape box up to the period bound.
fn box_sweep(f: &UniPoly, bound: u64, limits: &Limits) -> Result<Vec<PeriodicOrbit>> {
    let bounds = EscapeBounds::new(f, limits)?;
    let candidates = bounds.periodic_candidates(limits)?;
    // an orbit of exact period n has n distinct candidates
    let horizon = bound.min(candidates.len() as u64);
    let found: Vec<Option<PeriodicOrbit>> = par::map(&candidates, |c| {
        exact_period_bounded(f, c, horizon, &bounds).map(|n| PeriodicOrbit::from_point(f, c, n))
    });
    let mut orbits: Vec<PeriodicOrbit> = found.into_iter().flatten().collect();
    orbits.sort();
    orbits.dedup();
    Ok(orbits)
}

/// Reduction pattern of a monic minimal polynomial at `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "degrees", rename_all = "snake_case")]
pub enum InertiaProfile {
    /// Degrees of the irreducible factors mod p, i.e. the inertia degrees
    /// of the primes above `p` when `p` is unramified.
    Unramified(Vec<usize>),
    /// The reduction is not squarefree: `p` may ramify, or the order
    /// `Z[alpha]` is not maximal at `p`.
    RamifiedOrIndistinct,
}

impl InertiaProfile {
    pub fn degrees(&self) -> Option<&[usize]> {
        match self {
            InertiaProfile::Unramified(d) => Some(d),
            InertiaProfile::RamifiedOrIndistinct => None,
        }
    }
}

/// Inertia degrees above `p` from the factorization of `minpoly mod p`.
/// Irreducibility over Q is the caller's responsibility.
pub fn inertia_profile(minpoly: &UniPoly, p: u64) -> Result<InertiaProfile> {
    if !minpoly.is_monic() || minpoly.deg() == 0 {
        return Err(Error::contract(format!("{minpoly} is not a monic polynomial of degree >= 1")));
    }
    let reduced = FpPoly::from_rational(minpoly, p)?;
    Ok(match fp_factor_degrees(&reduced)? {
        FactorDegrees::Squarefree(d) => InertiaProfile::Unramified(d),
        FactorDegrees::NotSquarefree => InertiaProfile::RamifiedOrIndistinct,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::int;

    fn p(s: &str) -> UniPoly {
        s.parse().unwrap()
    }

    #[test]
    fn good_reduction_examples() {
        assert!(has_good_reduction(&p("x^2 - 1"), 2).unwrap());
        assert!(!has_good_reduction(&p("x^2/3 + 1"), 3).unwrap());
        assert!(!has_good_reduction(&p("3x^2 + 1/2"), 2).unwrap());
        assert!(has_good_reduction(&p("x^2 - 1"), 4).is_err());
        assert!(has_good_reduction(&p("x - 1"), 2).is_err());
    }

    #[test]
    fn good_prime_scan() {
        assert_eq!(good_reduction_primes(&p("x^2 - 1"), 2).unwrap(), vec![2, 3]);
        assert_eq!(good_reduction_primes(&p("x^2/3 - 1"), 2).unwrap(), vec![2, 5]);
        assert_eq!(good_reduction_primes(&p("6x^3 + x"), 3).unwrap(), vec![5, 7, 11]);
    }

    #[test]
    fn bound_examples() {
        let c = period_bound(&p("x^2 - 1")).unwrap();
        assert_eq!((c.primes, c.inertia, c.bound_u64()), ([2, 3], [1, 1], Some(24)));
        let c = period_bound(&p("x^2/3 - 1")).unwrap();
        assert_eq!((c.primes, c.bound_u64()), ([2, 5], Some(72)));
        let f = p("x^3 + x + 1");
        let c = period_bound(&f).unwrap();
        assert_eq!((c.primes, c.bound_u64()), ([2, 3], Some(24)));
        assert!(c.recheck(&f));
        let mut forged = c.clone();
        forged.bound = BigUint::from(23u32);
        assert!(!forged.recheck(&f));
    }

    #[test]
    fn certified_examples() {
        let l = Limits::default();
        let r = certified_rational_periodic_points(&p("x^2 - 1"), &l).unwrap();
        assert!(r.complete);
        assert_eq!(r.orbits.len(), 1);
        assert_eq!(r.orbits[0].points, vec![int(-1), int(0)]);
        assert_eq!(r.dynatomic_periods, (1..=12).collect::<Vec<_>>());
        assert_eq!(r.escape_box_periods, (13..=24).collect::<Vec<_>>());

        let r = certified_rational_periodic_points(&p("x^2"), &l).unwrap();
        assert_eq!(r.orbits.iter().map(|o| o.points.clone()).collect::<Vec<_>>(), vec![vec![int(0)], vec![int(1)]]);

        let r = certified_rational_periodic_points(&p("x^2 + 1"), &l).unwrap();
        assert!(r.orbits.is_empty() && r.complete);
        assert_eq!(r.certificate.bound_u64(), Some(24));
    }

    #[test]
    fn incomplete_is_flagged() {
        let l = Limits { poly_degree_cap: 16, box_candidate_cap: 3, ..Limits::default() };
        let r = certified_rational_periodic_points(&p("x^2 - 1"), &l).unwrap();
        assert!(!r.complete);
        assert_eq!(r.dynatomic_periods, vec![1, 2, 3, 4]);
        assert_eq!(r.omitted_periods, (5..=24).collect::<Vec<_>>());
        assert!(r.incomplete_reason.is_some());
    }

    #[test]
    fn inertia_examples() {
        let m = p("x^2 - 2");
        assert_eq!(inertia_profile(&m, 7).unwrap(), InertiaProfile::Unramified(vec![1, 1]));
        assert_eq!(inertia_profile(&m, 3).unwrap(), InertiaProfile::Unramified(vec![2]));
        assert_eq!(inertia_profile(&m, 2).unwrap(), InertiaProfile::RamifiedOrIndistinct);
        assert!(inertia_profile(&p("2x^2 - 1"), 3).is_err());
    }
}
