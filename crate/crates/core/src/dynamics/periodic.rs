use std::cmp::Ordering;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{check_degree_cap, require_nonlinear, Iterates};
use crate::arith::rational::{lex_cmp, serde_rational};
use crate::arith::UniPoly;
use crate::error::{Error, Result};
use crate::{par, Limits};

/// A forward cycle `beta, f(beta), ..., f^{n-1}(beta)` of exact period `n`,
/// rotated so that the lexicographically smallest point (numerator, then
/// denominator) comes first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PeriodicOrbit {
    pub period: u64,
    #[serde(with = "serde_rational::vec")]
    pub points: Vec<BigRational>,
}

impl PeriodicOrbit {
    /// The orbit of `beta`, assumed to have exact period `n`.
    pub fn from_point(f: &UniPoly, beta: &BigRational, n: u64) -> Self {
        let mut points = Vec::with_capacity(n as usize);
        let mut x = beta.clone();
        for _ in 0..n {
            points.push(x.clone());
            x = f.eval(&x);
        }
        PeriodicOrbit {
            period: n,
            points: canonical_orbit(points),
        }
    }

    /// Re-checks that `f` permutes the points cyclically and that no proper
    /// divisor of the period returns to the start.
    pub fn verify(&self, f: &UniPoly) -> bool {
        let n = self.points.len();
        if n as u64 != self.period || n == 0 {
            return false;
        }
        let cyclic = (0..n).all(|i| f.eval(&self.points[i]) == self.points[(i + 1) % n]);
        cyclic && exact_period(f, &self.points[0], self.period) == Some(self.period)
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        self.points.contains(x)
    }
}

impl PartialOrd for PeriodicOrbit {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PeriodicOrbit {
    fn cmp(&self, other: &Self) -> Ordering {
        self.period.cmp(&other.period).then_with(|| {
            for (a, b) in self.points.iter().zip(&other.points) {
                match lex_cmp(a, b) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            self.points.len().cmp(&other.points.len())
        })
    }
}

/// Rotates a cycle so its minimal point comes first.
pub fn canonical_orbit(mut points: Vec<BigRational>) -> Vec<BigRational> {
    if let Some((idx, _)) = points
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| lex_cmp(a, b))
    {
        points.rotate_left(idx);
    }
    points
}

/// Smallest `n <= n_max` with `f^n(beta) = beta`.
pub fn exact_period(f: &UniPoly, beta: &BigRational, n_max: u64) -> Option<u64> {
    let mut x = beta.clone();
    for n in 1..=n_max {
        x = f.eval(&x);
        if &x == beta {
            return Some(n);
        }
    }
    None
}

/// Like [`exact_period`] but stops as soon as the orbit provably escapes.
pub fn exact_period_bounded(
    f: &UniPoly,
    beta: &BigRational,
    n_max: u64,
    bounds: &super::EscapeBounds,
) -> Option<u64> {
    if bounds.escapes(beta) {
        return None;
    }
    let mut x = beta.clone();
    for n in 1..=n_max {
        x = f.eval(&x);
        if &x == beta {
            return Some(n);
        }
        if bounds.escapes(&x) {
            return None;
        }
    }
    None
}

/// All rational orbits of exact period `n <= n_max`, with default limits.
pub fn rational_periodic_points(f: &UniPoly, n_max: u64) -> Result<Vec<PeriodicOrbit>> {
    rational_periodic_points_with(f, n_max, &Limits::default())
}

/// All rational orbits of exact period `n <= n_max`.
///
/// Candidates are the rational roots of the dynatomic polynomials; each is
/// re-verified by iteration since a root of `Phi_n` may have a smaller exact
/// period.
pub fn rational_periodic_points_with(
    f: &UniPoly,
    n_max: u64,
    limits: &Limits,
) -> Result<Vec<PeriodicOrbit>> {
    let deg = require_nonlinear(f)?;
    if n_max == 0 {
        return Err(Error::contract("n_max must be >= 1"));
    }
    for n in 1..=n_max {
        check_degree_cap(deg, n, limits).map_err(|_| {
            Error::resource(
                "poly_degree_cap",
                format!(
                    "period n = {n} needs degree {deg}^{n}, above the cap {}",
                    limits.poly_degree_cap
                ),
            )
        })?;
    }
    let its = Iterates::compute(f, n_max, limits)?;
    orbits_for_periods(f, &its, &(1..=n_max).collect::<Vec<_>>(), limits)
}

/// Dynatomic scan over the given periods using precomputed iterates.
pub(crate) fn orbits_for_periods(
    f: &UniPoly,
    its: &Iterates,
    periods: &[u64],
    limits: &Limits,
) -> Result<Vec<PeriodicOrbit>> {
    let per_n: Vec<Result<Vec<PeriodicOrbit>>> = par::map(periods, |&n| {
        let phi = its.dynatomic(n, limits.karatsuba_threshold)?;
        let mut orbits: Vec<PeriodicOrbit> = phi
            .rational_roots()?
            .into_iter()
            .filter(|r| exact_period(f, r, n) == Some(n))
            .map(|r| PeriodicOrbit::from_point(f, &r, n))
            .collect();
        orbits.sort();
        orbits.dedup();
        Ok(orbits)
    });
    let mut all = Vec::new();
    for r in per_n {
        all.extend(r?);
    }
    all.sort();
    all.dedup();
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    fn p(s: &str) -> UniPoly {
        s.parse().unwrap()
    }

    fn orbit(period: u64, pts: Vec<BigRational>) -> PeriodicOrbit {
        PeriodicOrbit { period, points: pts }
    }

    #[test]
    fn exact_period_examples() {
        assert_eq!(exact_period(&p("x^2-1"), &int(0), 10), Some(2));
        assert_eq!(exact_period(&p("x^2-3/4"), &rat(-1, 2), 10), Some(1));
        assert_eq!(exact_period(&p("x^2"), &int(2), 10), None);
    }

    #[test]
    fn periodic_point_examples() {
        assert_eq!(
            rational_periodic_points(&p("x^2-1"), 3).unwrap(),
            vec![orbit(2, vec![int(-1), int(0)])]
        );
        assert_eq!(
            rational_periodic_points(&p("x^2"), 3).unwrap(),
            vec![orbit(1, vec![int(0)]), orbit(1, vec![int(1)])]
        );
        assert_eq!(
            rational_periodic_points(&p("x^2-3/4"), 2).unwrap(),
            vec![orbit(1, vec![rat(-1, 2)]), orbit(1, vec![rat(3, 2)])]
        );
    }

    #[test]
    fn period_three_orbit() {
        // x^2 - 29/16 has the 3-cycle -1/4 -> -7/4 -> 5/4
        let f = p("x^2 - 29/16");
        let orbits = rational_periodic_points(&f, 3).unwrap();
        let three: Vec<_> = orbits.iter().filter(|o| o.period == 3).collect();
        assert_eq!(three.len(), 1);
        assert_eq!(three[0].points, vec![rat(-7, 4), rat(5, 4), rat(-1, 4)]);
        assert!(orbits.iter().all(|o| o.verify(&f)));
    }

    #[test]
    fn cap_breach_names_the_period() {
        let limits = Limits { poly_degree_cap: 64, ..Limits::default() };
        let err = rational_periodic_points_with(&p("x^2-1"), 8, &limits).unwrap_err();
        match err {
            Error::Resource { detail, .. } => assert!(detail.contains("n = 7"), "{detail}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn canonical_rotation() {
        assert_eq!(
            canonical_orbit(vec![int(0), int(-1)]),
            vec![int(-1), int(0)]
        );
        assert_eq!(
            canonical_orbit(vec![rat(5, 4), rat(-1, 4), rat(-7, 4)]),
            vec![rat(-7, 4), rat(5, 4), rat(-1, 4)]
        );
    }
}
