//! The radical tower `alpha_0 = 1`, `alpha_n = (p_n alpha_{n-1})^{1/p_n}`
//! over distinct primes, with its certificates.
//!
//! Level `n` is `K_n = Q(alpha_n)` of degree `D_n = p_1...p_n`. The
//! minimal polynomial is `x^{D_n} - M_n` with
//! `M_n = prod_i p_i^{p_1...p_{i-1}}`, Eisenstein at `p_1`. Each step is
//! totally ramified above `p_1..p_n`, so inertia degrees freeze once a
//! prime starts ramifying, which feeds the two-prime period bound.

mod height;
mod inertia;
mod radical;

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

pub use height::{log_enclosure, HeightReport, HeightValue, Interval, DEFAULT_PRECISION_BITS};
pub use inertia::binomial_factor_degrees;
pub use radical::RadicalElement;

use crate::arith::primes::is_prime;
use crate::arith::rational::{rational_to_string, serde_rational};
use crate::arith::{rational_roots, PrimeFactorization, UniPoly};
use crate::error::{Error, Result};
use crate::par;
use crate::reduction::{inertia_profile, serialize_big, GoodReductionWitness, InertiaProfile, PeriodBoundCertificate};

/// `M_n` is expanded for display only below this many decimal digits.
pub const DISPLAY_DIGIT_CAP: f64 = 1e4;
/// Levels of degree up to this are also factored densely mod `p`.
pub const DENSE_INERTIA_DEGREE: u64 = 256;

#[derive(Debug, Clone, Serialize)]
pub struct EisensteinWitness {
    pub prime: u64,
    /// `v_p(M_n)`; Eisenstein needs exactly 1.
    #[serde(serialize_with = "serialize_bigint")]
    pub valuation: BigInt,
    pub holds: bool,
}

/// One line of the ramification bookkeeping for the step `K_{n-1} -> K_n`
/// at a prime `P` of `K_{n-1}` above `p_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RamificationEntry {
    pub index: usize,
    pub prime: u64,
    /// `v_{p_i}(p_n alpha_{n-1})`, read off the exponent vector.
    #[serde(with = "serde_rational")]
    pub exponent: BigRational,
    /// `e(P | p_i)` in `K_{n-1}`.
    #[serde(serialize_with = "serialize_big")]
    pub ramification_index: BigUint,
    /// `v_P(p_n alpha_{n-1}) = exponent * ramification_index`.
    #[serde(with = "serde_rational")]
    pub valuation: BigRational,
    /// The valuation is an integer dividing `D_{n-1}`.
    pub divides_degree: bool,
    /// `p_n` does not divide the valuation, so `P` is totally ramified.
    pub coprime_to_step_prime: bool,
}

impl RamificationEntry {
    fn holds(&self) -> bool {
        self.divides_degree && self.coprime_to_step_prime
    }
}

/// Total ramification of `K_n / K_{n-1}` above `p_1, ..., p_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RamificationCertificate {
    pub level: usize,
    pub step_prime: u64,
    #[serde(serialize_with = "serialize_big")]
    pub previous_degree: BigUint,
    /// At level 1 the Eisenstein polynomial `x^{p_1} - p_1` settles the
    /// base case on its own.
    pub eisenstein_base_case: bool,
    /// `p_n` is coprime to `D_{n-1} M_{n-1}`, so it is unramified in
    /// `K_{n-1}` and its primes there have index 1.
    pub step_prime_unramified_below: bool,
    pub entries: Vec<RamificationEntry>,
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offending_index: Option<usize>,
}

impl RamificationCertificate {
    /// Recomputes the certificate from the tower and re-validates every
    /// arithmetic claim in it.
    pub fn recheck(&self, tower: &Tower) -> bool {
        let Ok(fresh) = verify_total_ramification(tower, self.level) else {
            return false;
        };
        if fresh != *self {
            return false;
        }
        let d = BigRational::from_integer(BigInt::from(self.previous_degree.clone()));
        let step = BigInt::from(self.step_prime);
        self.entries.iter().all(|e| {
            let v = &e.exponent * BigRational::from_integer(BigInt::from(e.ramification_index.clone()));
            let divides = v.is_integer() && !v.is_zero() && (&d / &v).is_integer();
            let coprime = v.is_integer() && !(v.to_integer() % &step).is_zero();
            v == e.valuation && divides == e.divides_degree && coprime == e.coprime_to_step_prime
        }) && self.valid == self.entries.iter().all(RamificationEntry::holds)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TowerLevel {
    pub index: usize,
    pub prime: u64,
    pub alpha: RadicalElement,
    #[serde(serialize_with = "serialize_big")]
    pub degree: BigUint,
    /// `M_n`, kept factored.
    pub minpoly_constant: PrimeFactorization,
    /// Decimal expansion of `M_n` when it is short enough to print.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minpoly_constant_value: Option<String>,
    pub eisenstein_prime: u64,
    pub eisenstein: EisensteinWitness,
    pub ramification_certificate: RamificationCertificate,
    pub height: HeightValue,
}

#[derive(Debug, Clone, Serialize)]
pub struct Tower {
    pub primes: Vec<u64>,
    pub levels: Vec<TowerLevel>,
}

impl Tower {
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, n: usize) -> Result<&TowerLevel> {
        if n == 0 || n > self.depth() {
            return Err(Error::contract(format!("level {n} outside 1..={}", self.depth())));
        }
        Ok(&self.levels[n - 1])
    }

    /// `D_n`, with `D_0 = 1`.
    pub fn degree(&self, n: usize) -> BigUint {
        self.primes[..n].iter().fold(BigUint::one(), |acc, &p| acc * p)
    }

    /// Exponent vector of `alpha_n`, with `alpha_0 = 1`.
    pub fn exponents(&self, n: usize) -> BTreeMap<u64, BigRational> {
        if n == 0 {
            BTreeMap::new()
        } else {
            self.levels[n - 1].alpha.exponents().clone()
        }
    }

    /// `M_n` with `M_0 = 1`.
    pub fn minpoly_constant(&self, n: usize) -> PrimeFactorization {
        if n == 0 {
            PrimeFactorization::one()
        } else {
            self.levels[n - 1].minpoly_constant.clone()
        }
    }
}

fn serialize_bigint<S: Serializer>(n: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    match n.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.serialize_str(&n.to_string()),
    }
}

fn validate_primes(primes: &[u64], depth: usize) -> Result<()> {
    if depth == 0 || primes.len() < depth {
        return Err(Error::contract(format!(
            "depth must satisfy 1 <= depth <= {} (number of primes)",
            primes.len()
        )));
    }
    for (i, &p) in primes.iter().enumerate() {
        if !is_prime(p) {
            return Err(Error::contract(format!("{p} is not prime")));
        }
        if primes[..i].contains(&p) {
            return Err(Error::contract(format!("prime {p} is repeated")));
        }
    }
    Ok(())
}

/// Builds levels `1..=depth`. Every level re-derives
/// `alpha_n^{D_n} = M_n` from the exponent vector and compares it with the
/// recursion `M_n = p_n^{D_{n-1}} M_{n-1}`.
pub fn build_tower(primes: &[u64], depth: usize) -> Result<Tower> {
    validate_primes(primes, depth)?;
    let mut exps: BTreeMap<u64, BigRational> = BTreeMap::new();
    let mut degree = BigUint::one();
    let mut m = PrimeFactorization::one();
    let mut raw = Vec::with_capacity(depth);
    for (n, &p) in primes[..depth].iter().enumerate().map(|(i, p)| (i + 1, p)) {
        let pr = BigRational::from_integer(BigInt::from(p));
        let prev = exps.clone();
        *exps.entry(p).or_insert_with(BigRational::zero) += BigRational::one();
        for e in exps.values_mut() {
            *e /= &pr;
        }
        // p_n e^(n) - e^(n-1) must be the indicator of p_n
        for (&q, e) in &exps {
            let back = e * &pr - prev.get(&q).cloned().unwrap_or_else(BigRational::zero);
            let want = if q == p { BigRational::one() } else { BigRational::zero() };
            if back != want {
                return Err(Error::internal(format!("exponent recursion broken at level {n}, prime {q}")));
            }
        }
        let prev_degree = degree.clone();
        degree *= p;
        let mut step = PrimeFactorization::one();
        step.add_exponent(BigUint::from(p), BigInt::from(prev_degree));
        m = m.mul(&step);
        let alpha = RadicalElement::new(exps.clone())?;
        if alpha.power(&degree)? != m {
            return Err(Error::internal(format!("alpha_{n}^D_{n} differs from M_{n}")));
        }
        raw.push((n, p, alpha, degree.clone(), m.clone()));
    }
    let levels: Vec<TowerLevel> = raw
        .into_iter()
        .map(|(index, prime, alpha, degree, m)| {
            let value = (m.approx_decimal_digits() < DISPLAY_DIGIT_CAP)
                .then(|| m.to_rational().numer().to_string());
            let height = HeightValue::from_terms(alpha.exponents().iter().map(|(p, e)| (*p, e.clone())))?;
            Ok(TowerLevel {
                index,
                prime,
                alpha,
                degree,
                minpoly_constant: m,
                minpoly_constant_value: value,
                eisenstein_prime: primes[0],
                eisenstein: placeholder_eisenstein(primes[0]),
                ramification_certificate: placeholder_certificate(index, prime),
                height,
            })
        })
        .collect::<Result<_>>()?;
    let mut tower = Tower { primes: primes.to_vec(), levels };
    // Certificates only read the finished exponent data, so levels are
    // checked independently.
    let certs: Vec<Result<(EisensteinWitness, RamificationCertificate)>> =
        par::map_range(1, depth as u64 + 1, |n| {
            let n = n as usize;
            Ok((eisenstein_certificate(&tower.levels[n - 1])?, verify_total_ramification(&tower, n)?))
        });
    for (level, cert) in tower.levels.iter_mut().zip(certs) {
        let (e, r) = cert?;
        level.eisenstein = e;
        level.ramification_certificate = r;
    }
    Ok(tower)
}

fn placeholder_eisenstein(p: u64) -> EisensteinWitness {
    EisensteinWitness { prime: p, valuation: BigInt::zero(), holds: false }
}

fn placeholder_certificate(level: usize, p: u64) -> RamificationCertificate {
    RamificationCertificate {
        level,
        step_prime: p,
        previous_degree: BigUint::zero(),
        eisenstein_base_case: false,
        step_prime_unramified_below: false,
        entries: Vec::new(),
        valid: false,
        offending_index: None,
    }
}

/// `x^{D_n} - M_n` is Eisenstein at `p_1` iff `v_{p_1}(M_n) = 1`.
pub fn eisenstein_certificate(level: &TowerLevel) -> Result<EisensteinWitness> {
    let p = level.eisenstein_prime;
    let valuation = level.minpoly_constant.exponent_of(p);
    let holds = valuation.is_one() && level.minpoly_constant.is_integral();
    if !holds {
        return Err(Error::internal(format!(
            "level {} is not Eisenstein at {p}: v_{p}(M) = {valuation}",
            level.index
        )));
    }
    Ok(EisensteinWitness { prime: p, valuation, holds })
}

/// Certificate for the step `K_{n-1} -> K_n`.
///
/// Above `p_i` with `i < n`, `K_{n-1}` has ramification index
/// `p_i...p_{n-1}` (unramified up to level `i-1`, totally ramified after),
/// and `v_{p_i}(alpha_{n-1}) = e_i^{(n-1)}`. Above `p_n` the index is 1 and
/// the valuation of `p_n alpha_{n-1}` is 1. An integral valuation dividing
/// `D_{n-1}` is prime to `p_n`, which makes the radical extension totally
/// ramified there.
pub fn verify_total_ramification(tower: &Tower, n: usize) -> Result<RamificationCertificate> {
    tower.level(n)?;
    let pn = tower.primes[n - 1];
    let prev_degree = tower.degree(n - 1);
    let prev_exps = tower.exponents(n - 1);
    let prev_m = tower.minpoly_constant(n - 1);
    let d_rat = BigRational::from_integer(BigInt::from(prev_degree.clone()));
    let step = BigInt::from(pn);
    let entries: Vec<RamificationEntry> = (1..=n)
        .map(|i| {
            let pi = tower.primes[i - 1];
            let mut exponent = prev_exps.get(&pi).cloned().unwrap_or_else(BigRational::zero);
            if i == n {
                exponent += BigRational::one();
            }
            let ramification_index = tower.primes[i - 1..n - 1].iter().fold(BigUint::one(), |acc, &p| acc * p);
            let valuation = &exponent * BigRational::from_integer(BigInt::from(ramification_index.clone()));
            let divides_degree = valuation.is_integer() && !valuation.is_zero() && (&d_rat / &valuation).is_integer();
            let coprime_to_step_prime = valuation.is_integer() && !(valuation.to_integer() % &step).is_zero();
            RamificationEntry {
                index: i,
                prime: pi,
                exponent,
                ramification_index,
                valuation,
                divides_degree,
                coprime_to_step_prime,
            }
        })
        .collect();
    let step_prime_unramified_below =
        !(&prev_degree % pn).is_zero() && prev_m.exponent_of(pn).is_zero() && prev_m.is_integral();
    let offending_index = entries.iter().find(|e| !e.holds()).map(|e| e.index);
    Ok(RamificationCertificate {
        level: n,
        step_prime: pn,
        previous_degree: prev_degree,
        eisenstein_base_case: n == 1,
        step_prime_unramified_below,
        valid: offending_index.is_none() && step_prime_unramified_below,
        offending_index,
        entries,
    })
}

/// Heights `h(alpha_1..alpha_depth)`, each checked against the closed form
/// `(log M_n) / D_n`, the recurrence
/// `p_{n+1} h(alpha_{n+1}) = log p_{n+1} + h(alpha_n)` and `h < 1`.
pub fn tower_heights(tower: &Tower) -> Result<Vec<HeightValue>> {
    let hs: Vec<HeightValue> = tower.levels.iter().map(|l| l.height.clone()).collect();
    for (i, level) in tower.levels.iter().enumerate() {
        let closed = HeightValue::from_terms(level.minpoly_constant.factors.iter().map(|(p, e)| {
            (p.to_u64().expect("tower primes fit in u64"), BigRational::from_integer(e.clone()))
        }))?
        .div_int(&level.degree);
        if closed != hs[i] {
            return Err(Error::internal(format!("closed-form height mismatch at level {}", i + 1)));
        }
        if !recurrence_holds(&hs, &tower.primes, i)? {
            return Err(Error::internal(format!("height recurrence fails at level {}", i + 1)));
        }
        if hs[i].compare_rational(&BigRational::one()).is_ge() {
            return Err(Error::internal(format!("h(alpha_{}) >= 1", i + 1)));
        }
    }
    Ok(hs)
}

/// `p_n h(alpha_n) == log p_n + h(alpha_{n-1})` term by term, `n = i + 1`.
fn recurrence_holds(hs: &[HeightValue], primes: &[u64], i: usize) -> Result<bool> {
    let prev = if i == 0 { HeightValue::zero() } else { hs[i - 1].clone() };
    let p = primes[i];
    Ok(hs[i].mul_int(&BigUint::from(p)) == HeightValue::log_prime(p)?.add(&prev))
}

/// Exact check of the height recurrence at every level.
pub fn height_recurrence_identities(tower: &Tower) -> Result<Vec<bool>> {
    let hs: Vec<HeightValue> = tower.levels.iter().map(|l| l.height.clone()).collect();
    (0..hs.len()).map(|i| recurrence_holds(&hs, &tower.primes, i)).collect()
}

/// First level (1-based) whose height is below `eps`.
pub fn first_level_below(heights: &[HeightValue], eps: &BigRational) -> Option<usize> {
    heights.iter().position(|h| h.compare_rational(eps).is_lt()).map(|i| i + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InertiaMethod {
    /// Level 0 is Q itself.
    BaseField,
    /// Factored `x^D - M` densely and by the closed form; both agreed.
    DenseAndClosedForm,
    ClosedForm,
}

/// Inertia degrees of the primes above `p_i`, computed at level `i - 1`
/// and carried unchanged through the totally ramified steps up to `n`.
#[derive(Debug, Clone, Serialize)]
pub struct InertiaRecord {
    pub prime: u64,
    pub prime_index: usize,
    pub computed_at_level: usize,
    pub frozen_through_level: usize,
    /// Inertia degree -> number of primes above `p_i` with that degree.
    #[serde(serialize_with = "serialize_degree_counts")]
    pub degrees: BTreeMap<u64, BigUint>,
    pub min_degree: u64,
    pub method: InertiaMethod,
    /// Levels whose total-ramification certificate was checked to freeze
    /// the inertia.
    pub frozen_by: Vec<usize>,
}

fn serialize_degree_counts<S: Serializer>(m: &BTreeMap<u64, BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let out: BTreeMap<String, String> = m.iter().map(|(d, c)| (d.to_string(), c.to_string())).collect();
    out.serialize(s)
}

/// Inertia of `p_i` tracked to level `n` (`1 <= i <= n <= depth`).
pub fn tower_inertia_track(tower: &Tower, i: usize, n: usize) -> Result<InertiaRecord> {
    if i == 0 || i > n || n > tower.depth() {
        return Err(Error::contract(format!("need 1 <= i <= n <= {}, got i = {i}, n = {n}", tower.depth())));
    }
    let p = tower.primes[i - 1];
    let base = i - 1;
    let (degrees, method) = if base == 0 {
        (BTreeMap::from([(1u64, BigUint::one())]), InertiaMethod::BaseField)
    } else {
        let d = tower.degree(base);
        let m = tower.minpoly_constant(base);
        let a = inertia::residue_of_power_product(
            m.factors.iter().map(|(q, e)| {
                (q.to_u64().expect("tower primes fit in u64"), e.magnitude())
            }),
            p,
        );
        let d_factored: Vec<(u64, u32)> = tower.primes[..base].iter().map(|&q| (q, 1)).collect();
        let closed = binomial_factor_degrees(&d_factored, a, p)?;
        match d.to_u64().filter(|&d| d <= DENSE_INERTIA_DEGREE) {
            Some(dd) => {
                let minpoly = binomial_minpoly(dd, &m);
                let dense = match inertia_profile(&minpoly, p)? {
                    InertiaProfile::Unramified(degs) => {
                        let mut out: BTreeMap<u64, BigUint> = BTreeMap::new();
                        for g in degs {
                            *out.entry(g as u64).or_insert_with(BigUint::zero) += 1u32;
                        }
                        out
                    }
                    InertiaProfile::RamifiedOrIndistinct => {
                        return Err(Error::contract(format!(
                            "{p} looks ramified at level {base}; tower primes must be distinct"
                        )));
                    }
                };
                if dense != closed {
                    return Err(Error::internal(format!(
                        "dense and closed-form factor degrees of level {base} mod {p} disagree"
                    )));
                }
                (dense, InertiaMethod::DenseAndClosedForm)
            }
            None => (closed, InertiaMethod::ClosedForm),
        }
    };
    let mut frozen_by = Vec::new();
    for level in i..=n {
        let cert = &tower.levels[level - 1].ramification_certificate;
        let covers = cert.valid && cert.entries.iter().any(|e| e.index == i && e.holds());
        if !covers {
            return Err(Error::internal(format!("level {level} does not certify total ramification above {p}")));
        }
        frozen_by.push(level);
    }
    let min_degree = *degrees.keys().next().expect("at least one prime above p");
    Ok(InertiaRecord {
        prime: p,
        prime_index: i,
        computed_at_level: base,
        frozen_through_level: n,
        degrees,
        min_degree,
        method,
        frozen_by,
    })
}

fn binomial_minpoly(d: u64, m: &PrimeFactorization) -> UniPoly {
    let mut c = vec![BigRational::zero(); d as usize + 1];
    c[0] = -m.to_rational();
    c[d as usize] = BigRational::one();
    UniPoly::from_coeffs(c)
}

#[derive(Debug, Clone, Serialize)]
pub struct TrackedPrime {
    pub prime: u64,
    pub good_reduction: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_inertia: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Period bound valid in the whole tower for a rational-coefficient `f`.
#[derive(Debug, Clone, Serialize)]
pub struct TowerPeriodBound {
    pub certificate: PeriodBoundCertificate,
    pub inertia: [InertiaRecord; 2],
    pub tracked: Vec<TrackedPrime>,
}

/// Picks the two tracked primes of good reduction whose factors
/// `p^{2 f} - 1` (with `f` the least frozen inertia degree) are smallest.
pub fn tower_p2_bound(tower: &Tower, f: &UniPoly) -> Result<TowerPeriodBound> {
    if f.deg() < 2 {
        return Err(Error::contract(format!("{f} must have degree >= 2")));
    }
    let n = tower.depth();
    let mut tracked = Vec::new();
    let mut usable: Vec<(BigUint, InertiaRecord)> = Vec::new();
    for i in 1..=n {
        let p = tower.primes[i - 1];
        let good = GoodReductionWitness::compute(f, p).good;
        let mut entry = TrackedPrime { prime: p, good_reduction: good, min_inertia: None, note: None };
        if good {
            match tower_inertia_track(tower, i, n) {
                Ok(rec) => {
                    entry.min_inertia = Some(rec.min_degree);
                    match u32::try_from(rec.min_degree) {
                        Ok(fd) => usable.push((BigUint::from(p).pow(2 * fd) - 1u32, rec)),
                        Err(_) => entry.note = Some("inertia degree too large".into()),
                    }
                }
                Err(e) if e.is_resource() => entry.note = Some(e.to_string()),
                Err(e) => return Err(e),
            }
        }
        tracked.push(entry);
    }
    if usable.len() < 2 {
        return Err(Error::contract(format!(
            "only {} tracked prime(s) of good reduction for {f}; build a deeper or wider tower",
            usable.len()
        )));
    }
    usable.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.prime_index.cmp(&b.1.prime_index)));
    let mut chosen: Vec<InertiaRecord> = usable.into_iter().take(2).map(|(_, r)| r).collect();
    chosen.sort_by_key(|r| r.prime_index);
    let second = chosen.pop().unwrap();
    let first = chosen.pop().unwrap();
    let certificate = PeriodBoundCertificate::new(
        f,
        [first.prime, second.prime],
        [first.min_degree as u32, second.min_degree as u32],
    )?;
    Ok(TowerPeriodBound { certificate, inertia: [first, second], tracked })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepVerdict {
    /// No root of `f(x) - beta` lies in the level, and any root outside it
    /// would need a step of degree at most `deg f < p_{n+1}`.
    LeavesTower,
    /// Some preimages are rational; continue the backward orbit from them.
    DescendThenRecurse,
}

#[derive(Debug, Clone, Serialize)]
pub struct P1StepWitness {
    pub level: usize,
    pub next_prime: u64,
    pub degree: usize,
    #[serde(with = "serde_rational")]
    pub beta: BigRational,
    #[serde(with = "serde_rational::vec")]
    pub rational_preimages: Vec<BigRational>,
    pub verdict: StepVerdict,
}

/// Degree-gap witness for one backward step from a rational `beta`.
pub fn p1_step_witness(tower: &Tower, n: usize, f: &UniPoly, beta: &BigRational) -> Result<P1StepWitness> {
    let d = f.deg();
    if d < 2 {
        return Err(Error::contract(format!("{f} must have degree >= 2")));
    }
    if n > tower.depth() {
        return Err(Error::contract(format!("level {n} outside 0..={}", tower.depth())));
    }
    let Some(&next) = tower.primes.get(n) else {
        return Err(Error::contract(format!("the tower has no prime p_{} after level {n}", n + 1)));
    };
    if next <= d as u64 {
        return Err(Error::contract(format!(
            "next prime {next} does not exceed deg f = {d}; witness refused"
        )));
    }
    let shifted = f - &UniPoly::constant(beta.clone());
    let rational_preimages = rational_roots(&shifted)?;
    let verdict = if rational_preimages.is_empty() {
        StepVerdict::LeavesTower
    } else {
        StepVerdict::DescendThenRecurse
    };
    Ok(P1StepWitness {
        level: n,
        next_prime: next,
        degree: d,
        beta: beta.clone(),
        rational_preimages,
        verdict,
    })
}

/// Summary of all certificates of a tower.
#[derive(Debug, Clone, Serialize)]
pub struct TowerVerification {
    pub depth: usize,
    pub eisenstein: Vec<bool>,
    pub total_ramification: Vec<bool>,
    pub certificates_recheck: Vec<bool>,
    pub height_recurrence: Vec<bool>,
    pub all_valid: bool,
}

pub fn verify_tower(tower: &Tower) -> Result<TowerVerification> {
    let n = tower.depth();
    let eisenstein: Vec<bool> = tower
        .levels
        .iter()
        .map(|l| eisenstein_certificate(l).map(|w| w.holds).unwrap_or(false))
        .collect();
    let total_ramification: Vec<bool> = tower.levels.iter().map(|l| l.ramification_certificate.valid).collect();
    let certificates_recheck: Vec<bool> = par::map(&tower.levels, |l| l.ramification_certificate.recheck(tower));
    let height_recurrence = height_recurrence_identities(tower)?;
    let all_valid = [&eisenstein, &total_ramification, &certificates_recheck, &height_recurrence]
        .iter()
        .all(|v| v.iter().all(|&b| b));
    Ok(TowerVerification {
        depth: n,
        eisenstein,
        total_ramification,
        certificates_recheck,
        height_recurrence,
        all_valid,
    })
}

/// Text form of an exponent vector, e.g. `{"2": "1/6", "3": "1/3"}`.
pub fn exponent_strings(alpha: &RadicalElement) -> BTreeMap<String, String> {
    alpha
        .exponents()
        .iter()
        .map(|(p, e)| (p.to_string(), rational_to_string(e)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes::first_primes;
    use crate::arith::rational::{int, rat};
    use proptest::prelude::*;

    fn p(s: &str) -> UniPoly {
        s.parse().unwrap()
    }

    #[test]
    fn build_examples() {
        let t = build_tower(&[2, 3], 2).unwrap();
        let l2 = t.level(2).unwrap();
        assert_eq!(l2.alpha.to_string(), "2^(1/6)*3^(1/3)");
        assert_eq!(l2.minpoly_constant_value.as_deref(), Some("18"));
        assert_eq!(l2.degree, BigUint::from(6u32));

        let t = build_tower(&[2, 3, 5], 3).unwrap();
        let l3 = t.level(3).unwrap();
        assert_eq!(l3.minpoly_constant, PrimeFactorization::from_pairs(1, [(2, 1), (3, 2), (5, 6)]));
        assert_eq!(l3.degree, BigUint::from(30u32));

        let t = build_tower(&[7], 1).unwrap();
        assert_eq!(t.level(1).unwrap().alpha.to_string(), "7^(1/7)");
    }

    #[test]
    fn build_rejects_bad_input() {
        assert!(build_tower(&[2, 3, 2], 3).is_err());
        assert!(build_tower(&[2, 4], 2).is_err());
        assert!(build_tower(&[2, 3], 3).is_err());
        assert!(build_tower(&[2, 3], 0).is_err());
    }

    #[test]
    fn eisenstein_examples() {
        let t = build_tower(&[2, 3, 5], 3).unwrap();
        for l in &t.levels {
            assert!(eisenstein_certificate(l).unwrap().holds);
        }
        let t = build_tower(&[7], 1).unwrap();
        let w = eisenstein_certificate(&t.levels[0]).unwrap();
        assert_eq!((w.prime, w.valuation.clone()), (7, BigInt::one()));
    }

    #[test]
    fn ramification_examples() {
        let t = build_tower(&[2, 3, 5], 3).unwrap();
        let c = verify_total_ramification(&t, 2).unwrap();
        assert!(c.valid && c.recheck(&t));
        assert_eq!(c.entries[0].ramification_index, BigUint::from(2u32));
        assert_eq!(c.entries[0].exponent, rat(1, 2));
        let c = verify_total_ramification(&t, 3).unwrap();
        assert_eq!(c.previous_degree, BigUint::from(6u32));
        assert!(c.entries.iter().all(|e| e.valuation == int(1)));
        let c = verify_total_ramification(&build_tower(&[11], 1).unwrap(), 1).unwrap();
        assert!(c.valid && c.eisenstein_base_case);
        assert!(verify_total_ramification(&t, 4).is_err());
    }

    #[test]
    fn forged_certificate_fails_recheck() {
        let t = build_tower(&[2, 3, 5], 3).unwrap();
        let mut c = verify_total_ramification(&t, 3).unwrap();
        c.entries[1].valuation = int(5);
        assert!(!c.recheck(&t));
    }

    #[test]
    fn height_examples() {
        let t = build_tower(&[2, 3, 5], 3).unwrap();
        let hs = tower_heights(&t).unwrap();
        assert_eq!(hs[0], HeightValue::from_terms([(2, rat(1, 2))]).unwrap());
        let h2 = HeightValue::from_terms([(2, rat(1, 6)), (3, rat(2, 6))]).unwrap();
        assert_eq!(hs[1], h2);
        assert!(hs[1].report(128).decimal.starts_with("0.4817"));
        assert!(hs[2].report(128).decimal.starts_with("0.4182"));
        assert!(hs[2].compare(&hs[1]).is_lt());
    }

    #[test]
    fn consecutive_prime_heights() {
        let ps = first_primes(25);
        let t = build_tower(&ps, 25).unwrap();
        let hs = tower_heights(&t).unwrap();
        assert_eq!(first_level_below(&hs, &rat(1, 5)), Some(7));
        assert_eq!(first_level_below(&hs, &rat(1, 10)), Some(13));
        assert_eq!(first_level_below(&hs, &rat(1, 20)), Some(25));
        assert!(hs[11].compare_rational(&rat(12, 100)).is_lt());
        assert!(hs[11].compare_rational(&rat(1, 10)).is_gt());
    }

    #[test]
    fn inertia_examples() {
        let t = build_tower(&[2, 3], 2).unwrap();
        let r = tower_inertia_track(&t, 2, 2).unwrap();
        assert_eq!(r.degrees, BTreeMap::from([(2, BigUint::one())]));
        let r = tower_inertia_track(&t, 1, 2).unwrap();
        assert_eq!((r.min_degree, r.method), (1, InertiaMethod::BaseField));

        let t = build_tower(&[2, 3, 5], 3).unwrap();
        let r = tower_inertia_track(&t, 3, 3).unwrap();
        assert_eq!(r.method, InertiaMethod::DenseAndClosedForm);
        let reduced = FpPolyDegrees::of(&p("x^6 - 18"), 5);
        assert_eq!(r.degrees, reduced);
        assert!(tower_inertia_track(&t, 3, 2).is_err());
    }

    struct FpPolyDegrees;
    impl FpPolyDegrees {
        fn of(f: &UniPoly, q: u64) -> BTreeMap<u64, BigUint> {
            let InertiaProfile::Unramified(d) = inertia_profile(f, q).unwrap() else { panic!() };
            let mut out = BTreeMap::new();
            for g in d {
                *out.entry(g as u64).or_insert_with(BigUint::zero) += 1u32;
            }
            out
        }
    }

    #[test]
    fn deep_inertia_uses_closed_form() {
        let t = build_tower(&first_primes(12), 12).unwrap();
        let r = tower_inertia_track(&t, 12, 12).unwrap();
        assert_eq!(r.method, InertiaMethod::ClosedForm);
        let total: BigUint = r.degrees.iter().map(|(d, c)| c * d).sum();
        assert_eq!(total, t.degree(11));
    }

    #[test]
    fn p2_bound_examples() {
        let t = build_tower(&[5, 7], 2).unwrap();
        let b = tower_p2_bound(&t, &p("x^2 - 1")).unwrap();
        assert_eq!((b.certificate.primes, b.certificate.inertia), ([5, 7], [1, 1]));
        assert_eq!(b.certificate.bound_u64(), Some(1152));

        // 3 is inert in Q(sqrt 2), and that inertia persists up the tower.
        let t = build_tower(&[2, 3, 5], 3).unwrap();
        let b = tower_p2_bound(&t, &p("x^2 - 1")).unwrap();
        assert_eq!((b.certificate.primes, b.certificate.inertia), ([2, 3], [1, 2]));
        assert_eq!(b.certificate.bound_u64(), Some(240));

        let t = build_tower(&[2, 3], 2).unwrap();
        assert!(tower_p2_bound(&t, &p("x^2/3")).is_err());
    }

    #[test]
    fn p1_witness_examples() {
        let t = build_tower(&[2, 3, 5, 7], 4).unwrap();
        let w = p1_step_witness(&t, 2, &p("x^2"), &int(3)).unwrap();
        assert_eq!((w.next_prime, w.verdict), (5, StepVerdict::LeavesTower));
        let w = p1_step_witness(&t, 2, &p("x^2"), &int(4)).unwrap();
        assert_eq!(w.verdict, StepVerdict::DescendThenRecurse);
        assert_eq!(w.rational_preimages, vec![int(-2), int(2)]);
        let t = build_tower(&[3, 2], 2).unwrap();
        assert!(p1_step_witness(&t, 1, &p("x^3"), &int(3)).is_err());
    }

    #[test]
    fn exponent_json_shape() {
        let t = build_tower(&[2, 3], 2).unwrap();
        let m = exponent_strings(&t.levels[1].alpha);
        assert_eq!(m.get("2").map(String::as_str), Some("1/6"));
        assert_eq!(m.get("3").map(String::as_str), Some("1/3"));
    }

    fn prime_sequence() -> impl Strategy<Value = Vec<u64>> {
        proptest::sample::subsequence(first_primes(30), 1..8).prop_shuffle()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]
        #[test]
        fn random_towers_certify(ps in prime_sequence()) {
            let t = build_tower(&ps, ps.len()).unwrap();
            for n in 1..=ps.len() {
                let prev = t.exponents(n - 1);
                let cur = t.exponents(n);
                let pn = BigRational::from_integer(BigInt::from(ps[n - 1]));
                for (q, e) in &cur {
                    let back = e * &pn - prev.get(q).cloned().unwrap_or_else(BigRational::zero);
                    prop_assert_eq!(back, if *q == ps[n - 1] { int(1) } else { int(0) });
                }
                prop_assert_eq!(t.degree(n), t.levels[n - 1].degree.clone());
                prop_assert!(t.levels[n - 1].ramification_certificate.recheck(&t));
            }
            let v = verify_tower(&t).unwrap();
            prop_assert!(v.all_valid);
            prop_assert!(tower_heights(&t).is_ok());
        }
    }
}
