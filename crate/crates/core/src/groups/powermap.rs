//! Galois action on periodic points of `x^d` and of Chebyshev maps.
//!
//! Points of period dividing `n` for `x^d` are the roots of unity of order
//! dividing `m = d^n - 1`. Identifying `zeta^j` with `j mod m`, Frobenius
//! style multiplication by `d` is the dynamics, and the Galois group acts
//! through units `k mod m` by `j -> k j`.

use num_integer::Integer;
use serde::Serialize;

use super::Perm;
use crate::arith::primes::{euler_phi, factor_u64, multiplicative_order};
use crate::error::{Error, Result};
use crate::Limits;

fn modulus(d: u64, n: u64, limits: &Limits) -> Result<u64> {
    if d < 2 || n < 1 {
        return Err(Error::contract("need d >= 2 and n >= 1"));
    }
    let m = u32::try_from(n)
        .ok()
        .and_then(|n| d.checked_pow(n))
        .map(|x| x - 1)
        .filter(|&m| m <= limits.group_order_cap as u64)
        .ok_or_else(|| {
            Error::resource("group_order_cap", format!("{d}^{n} - 1 exceeds {}", limits.group_order_cap))
        })?;
    Ok(m)
}

/// Carmichael function: exponent of `(Z/m)^*`.
fn carmichael(m: u64) -> u64 {
    factor_u64(m).into_iter().fold(1u64, |acc, (p, k)| {
        let pk = p.pow(k);
        let l = if p == 2 && k >= 3 { pk / 4 } else { pk / p * (p - 1) };
        acc.lcm(&l)
    })
}

/// Orbits of `j -> d j` on the units mod `m`, each listed from its least
/// element.
fn unit_orbits(d: u64, m: u64) -> Vec<Vec<u64>> {
    let mut seen = vec![false; m as usize];
    let mut orbits = Vec::new();
    // gcd(0, m) = m, so 0 only counts when m = 1
    for j in 0..m {
        if seen[j as usize] || j.gcd(&m) != 1 {
            continue;
        }
        let mut orbit = vec![j];
        seen[j as usize] = true;
        let mut x = (j as u128 * d as u128 % m as u128) as u64;
        while x != j {
            seen[x as usize] = true;
            orbit.push(x);
            x = (x as u128 * d as u128 % m as u128) as u64;
        }
        orbits.push(orbit);
    }
    orbits
}

#[derive(Debug, Clone, Serialize)]
pub struct PowerMapReport {
    pub d: u64,
    pub n: u64,
    pub modulus: u64,
    pub unit_group_order: u64,
    pub unit_group_exponent: u64,
    pub order_of_d: u64,
    pub order_equals_n: bool,
    /// Exponent of the cyclic group generated by `d`, which is its order.
    pub cyclic_subgroup_exponent: u64,
    pub orbit_count: u64,
    pub all_orbits_size_n: bool,
    /// `<d>` is a normal abelian subgroup of exponent at least 25.
    pub exponent_at_least_25: bool,
}

pub fn powermap_galois(d: u64, n: u64, limits: &Limits) -> Result<PowerMapReport> {
    let m = modulus(d, n, limits)?;
    if d.gcd(&m) != 1 {
        return Err(Error::internal(format!("gcd({d}, {m}) != 1")));
    }
    let order_of_d = multiplicative_order(d % m.max(1), m).expect("d is a unit mod d^n - 1");
    let orbits = unit_orbits(d, m);
    Ok(PowerMapReport {
        d,
        n,
        modulus: m,
        unit_group_order: euler_phi(m),
        unit_group_exponent: carmichael(m),
        order_of_d,
        order_equals_n: order_of_d == n,
        cyclic_subgroup_exponent: order_of_d,
        orbit_count: orbits.len() as u64,
        all_orbits_size_n: orbits.iter().all(|o| o.len() as u64 == n),
        exponent_at_least_25: order_of_d >= 25,
    })
}

/// Element of `(Z/nZ)^r`: the shift by which `k` moves each orbit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitAction {
    pub modulus: u64,
    pub components: Vec<u64>,
    pub orbit_count: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitActionReport {
    pub d: u64,
    pub n: u64,
    pub k: u64,
    pub orbits: Vec<Vec<u64>>,
    pub stabilizes_all: bool,
    /// Present when `k` fixes every orbit.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub action: Option<OrbitAction>,
    /// Present otherwise: how `k` permutes the orbits (1-based).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orbit_permutation: Option<String>,
}

pub fn powermap_orbit_action(d: u64, n: u64, k: u64, limits: &Limits) -> Result<OrbitActionReport> {
    let m = modulus(d, n, limits)?;
    let k = k % m.max(1);
    if k.gcd(&m) != 1 {
        return Err(Error::contract(format!("{k} is not a unit mod {m}")));
    }
    let orbits = unit_orbits(d, m);
    let mut where_is = vec![usize::MAX; m as usize];
    for (i, o) in orbits.iter().enumerate() {
        for &x in o {
            where_is[x as usize] = i;
        }
    }
    let mulk = |x: u64| (x as u128 * k as u128 % m as u128) as u64;
    let images: Vec<usize> = orbits.iter().map(|o| where_is[mulk(o[0]) as usize]).collect();
    let stabilizes_all = images.iter().enumerate().all(|(i, &j)| i == j);
    let (action, orbit_permutation) = if stabilizes_all {
        let components = orbits
            .iter()
            .map(|o| o.iter().position(|&x| x == mulk(o[0])).unwrap() as u64)
            .collect();
        (Some(OrbitAction { modulus: n, components, orbit_count: orbits.len() }), None)
    } else {
        let p = Perm::from_images(images.iter().map(|&j| j as u32).collect())?;
        (None, Some(p.to_string()))
    };
    Ok(OrbitActionReport { d, n, k, orbits, stabilizes_all, action, orbit_permutation })
}

#[derive(Debug, Clone, Serialize)]
pub struct ChebyshevModulus {
    pub modulus: u64,
    /// Order of `d` in `(Z/m)^* / {+-1}`.
    pub order_of_d: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChebyshevGaloisReport {
    pub d: u64,
    pub n: u64,
    pub moduli: Vec<ChebyshevModulus>,
    pub exponent_at_least_25: bool,
}

/// Points of period dividing `n` for the degree-`d` Chebyshev map are
/// `zeta + 1/zeta` with `zeta^{d^n} = zeta^{+-1}`, i.e. `zeta` of order
/// dividing `d^n - 1` or `d^n + 1`; the dynamics is `j -> d j` on
/// residues up to sign.
pub fn chebyshev_galois(d: u64, n: u64, limits: &Limits) -> Result<ChebyshevGaloisReport> {
    let minus = modulus(d, n, limits)?;
    let plus = minus + 2;
    if plus > limits.group_order_cap as u64 {
        return Err(Error::resource("group_order_cap", format!("{d}^{n} + 1 exceeds the cap")));
    }
    let moduli: Vec<ChebyshevModulus> = [minus, plus]
        .into_iter()
        .filter(|&m| m > 2)
        .map(|m| {
            let mut x = d % m;
            let mut k = 1;
            while x != 1 && x != m - 1 {
                x = (x as u128 * d as u128 % m as u128) as u64;
                k += 1;
            }
            ChebyshevModulus { modulus: m, order_of_d: k }
        })
        .collect();
    let exponent_at_least_25 = moduli.iter().any(|c| c.order_of_d >= 25);
    Ok(ChebyshevGaloisReport { d, n, moduli, exponent_at_least_25 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l() -> Limits {
        Limits::default()
    }

    #[test]
    fn galois_examples() {
        for (d, n, m) in [(2, 3, 7), (3, 2, 8), (2, 4, 15)] {
            let r = powermap_galois(d, n, &l()).unwrap();
            assert_eq!((r.modulus, r.order_of_d), (m, n));
            assert!(r.order_equals_n && r.all_orbits_size_n);
            assert_eq!(r.orbit_count * n, r.unit_group_order);
        }
        assert_eq!(powermap_galois(2, 3, &l()).unwrap().unit_group_exponent, 6);
        assert_eq!(powermap_galois(3, 2, &l()).unwrap().unit_group_exponent, 2);
        assert!(powermap_galois(2, 40, &l()).unwrap_err().is_resource());
        assert!(powermap_galois(1, 3, &l()).is_err());
    }

    #[test]
    fn orbit_action_examples() {
        let r = powermap_orbit_action(2, 3, 2, &l()).unwrap();
        assert_eq!(r.orbits, vec![vec![1, 2, 4], vec![3, 6, 5]]);
        assert_eq!(r.action.unwrap().components, vec![1, 1]);
        let r = powermap_orbit_action(2, 3, 1, &l()).unwrap();
        assert_eq!(r.action.unwrap().components, vec![0, 0]);
        let r = powermap_orbit_action(2, 3, 3, &l()).unwrap();
        assert!(!r.stabilizes_all);
        assert_eq!(r.orbit_permutation.as_deref(), Some("(1 2)"));
        assert!(powermap_orbit_action(2, 4, 3, &l()).is_err());
    }

    #[test]
    fn d_always_acts_by_shift_one() {
        for d in 2..=4u64 {
            for n in 1..=6u64 {
                let Ok(r) = powermap_orbit_action(d, n, d, &l()) else { continue };
                let a = r.action.expect("d stabilizes every orbit");
                assert!(a.components.iter().all(|&c| c == 1 % n));
            }
        }
    }

    #[test]
    fn chebyshev_orders() {
        let r = chebyshev_galois(2, 3, &l()).unwrap();
        assert_eq!(r.moduli.iter().map(|c| c.modulus).collect::<Vec<_>>(), vec![7, 9]);
        assert!(r.moduli.iter().all(|c| c.order_of_d == 3));
    }
}
