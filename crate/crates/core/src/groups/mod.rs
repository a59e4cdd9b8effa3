//! Finite permutation groups: closure enumeration, conjugacy classes,
//! normal subgroups as joins of normal closures of classes, exponents, and
//! the normal subgroups of products of alternating groups.

mod perm;
pub mod powermap;

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

pub use perm::{max_point, parse_cycles, Perm};
pub use powermap::{chebyshev_galois, powermap_galois, powermap_orbit_action, OrbitAction, OrbitActionReport, PowerMapReport};

use crate::error::{Error, Result};
use crate::reduction::serialize_big;
use crate::{par, Limits};

struct Enumerated {
    elements: Vec<Perm>,
    index: HashMap<Perm, u32>,
}

/// Permutation group on `{1..degree}` given by generators.
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    name: Option<String>,
    enumerated: OnceLock<Enumerated>,
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        PermGroup {
            degree: self.degree,
            generators: self.generators.clone(),
            name: self.name.clone(),
            enumerated: OnceLock::new(),
        }
    }
}

impl std::fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PermGroup")
            .field("name", &self.name)
            .field("degree", &self.degree)
            .field("generators", &self.generators)
            .finish()
    }
}

/// Membership set over the enumerated elements of a group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn insert(&mut self, i: u32) -> bool {
        let (w, b) = ((i / 64) as usize, i % 64);
        let fresh = self.0[w] & (1 << b) == 0;
        self.0[w] |= 1 << b;
        fresh
    }
    fn contains(&self, i: u32) -> bool {
        self.0[(i / 64) as usize] & (1 << (i % 64)) != 0
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn is_subset(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
    fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            (0..64).filter(move |b| word & (1 << b) != 0).map(move |b| (w * 64 + b) as u32)
        })
    }
}

/// A normal subgroup, described by generators (elements of the group).
#[derive(Debug, Clone, Serialize)]
pub struct NormalSubgroup {
    pub order: u64,
    pub name: Option<String>,
    pub generators: Vec<Perm>,
    #[serde(skip)]
    members: Bits,
}

impl NormalSubgroup {
    pub fn contains(&self, g: &PermGroup, x: &Perm) -> bool {
        g.enumerated
            .get()
            .and_then(|e| e.index.get(x))
            .is_some_and(|&i| self.members.contains(i))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjugacyClass {
    pub representative: Perm,
    pub size: usize,
    pub element_order: u64,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::contract("degree must be >= 1"));
        }
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::contract(format!("generator {g} does not act on 1..={degree}")));
        }
        Ok(PermGroup { degree, generators, name: None, enumerated: OnceLock::new() })
    }

    fn named(mut self, name: String) -> Self {
        self.name = Some(name);
        self
    }

    pub fn symmetric(n: usize) -> Result<Self> {
        let gens = match n {
            0 => return Err(Error::contract("S_0 is not supported")),
            1 => vec![],
            2 => vec![Perm::cycle(2)],
            _ => vec![Perm::from_cycles(n, &[vec![1, 2]])?, Perm::cycle(n)],
        };
        Ok(PermGroup::new(n, gens)?.named(format!("S{n}")))
    }

    pub fn alternating(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::contract("A_0 is not supported"));
        }
        let gens = (3..=n).map(|k| Perm::from_cycles(n, &[vec![1, 2, k]])).collect::<Result<_>>()?;
        Ok(PermGroup::new(n, gens)?.named(format!("A{n}")))
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::contract("C_0 is not supported"));
        }
        Ok(PermGroup::new(n, vec![Perm::cycle(n)])?.named(format!("C{n}")))
    }

    /// Symmetries of the `n`-gon, order `2n`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::contract("dihedral groups need n >= 3"));
        }
        let flip = Perm::from_images((0..n as u32).map(|i| (n as u32 - i) % n as u32).collect())?;
        Ok(PermGroup::new(n, vec![Perm::cycle(n), flip])?.named(format!("D{n}")))
    }

    /// Direct product acting on disjoint blocks of points.
    pub fn direct_product(factors: &[PermGroup]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::contract("empty direct product"));
        }
        let degree: usize = factors.iter().map(|f| f.degree).sum();
        let mut gens = Vec::new();
        for (i, f) in factors.iter().enumerate() {
            for g in &f.generators {
                gens.push(embed(factors, i, g));
            }
        }
        let name = factors
            .iter()
            .map(|f| f.name.clone().unwrap_or_else(|| "G".into()))
            .collect::<Vec<_>>()
            .join("x");
        Ok(PermGroup::new(degree, gens)?.named(name))
    }

    /// `S5`, `A6`, `C4`, `D5` or a product such as `A5xA5`.
    pub fn from_name(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(['x', 'X', '*']).map(str::trim).collect();
        let factors = parts.iter().map(|p| named_factor(p)).collect::<Result<Vec<_>>>()?;
        if factors.len() == 1 {
            Ok(factors.into_iter().next().unwrap())
        } else {
            PermGroup::direct_product(&factors)
        }
    }

    /// Group generated by cycle-notation permutations, e.g.
    /// `["(1 2)", "(1 2 3 4)"]`. The degree defaults to the largest point.
    pub fn from_generators(gens: &[&str], degree: Option<usize>) -> Result<Self> {
        let mut n = degree.unwrap_or(0);
        if degree.is_none() {
            for g in gens {
                n = n.max(max_point(g)?);
            }
        }
        let perms = gens.iter().map(|g| Perm::parse(g, n.max(1))).collect::<Result<_>>()?;
        PermGroup::new(n.max(1), perms)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    fn table(&self, limits: &Limits) -> Result<&Enumerated> {
        if let Some(e) = self.enumerated.get() {
            return Ok(e);
        }
        let cap = limits.group_order_cap;
        let id = Perm::identity(self.degree);
        let mut elements = vec![id.clone()];
        let mut index = HashMap::from([(id, 0u32)]);
        let mut head = 0;
        while head < elements.len() {
            let x = elements[head].clone();
            head += 1;
            for g in &self.generators {
                let y = x.then(g);
                if !index.contains_key(&y) {
                    if elements.len() >= cap {
                        return Err(Error::resource(
                            "group_order_cap",
                            format!("group has more than {cap} elements; use the structural checks instead"),
                        ));
                    }
                    index.insert(y.clone(), elements.len() as u32);
                    elements.push(y);
                }
            }
        }
        Ok(self.enumerated.get_or_init(|| Enumerated { elements, index }))
    }

    /// All elements, identity first, in breadth-first order from the
    /// generators.
    pub fn enumerate(&self, limits: &Limits) -> Result<&[Perm]> {
        Ok(&self.table(limits)?.elements)
    }

    pub fn order(&self, limits: &Limits) -> Result<u64> {
        Ok(self.enumerate(limits)?.len() as u64)
    }

    fn class_indices(&self, limits: &Limits) -> Result<Vec<Vec<u32>>> {
        let t = self.table(limits)?;
        let n = t.elements.len();
        let inverses: Vec<Perm> = self.generators.iter().map(Perm::inverse).collect();
        let mut seen = Bits::new(n);
        let mut classes = Vec::new();
        for start in 0..n as u32 {
            if seen.contains(start) {
                continue;
            }
            seen.insert(start);
            let mut class = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                let x = &t.elements[i as usize];
                for (g, gi) in self.generators.iter().zip(&inverses) {
                    let y = gi.then(x).then(g);
                    let j = t.index[&y];
                    if seen.insert(j) {
                        class.push(j);
                        queue.push_back(j);
                    }
                }
            }
            class.sort_unstable();
            classes.push(class);
        }
        Ok(classes)
    }

    pub fn conjugacy_classes(&self, limits: &Limits) -> Result<Vec<ConjugacyClass>> {
        let t = self.table(limits)?;
        Ok(self
            .class_indices(limits)?
            .into_iter()
            .map(|c| {
                let representative = t.elements[c[0] as usize].clone();
                ConjugacyClass {
                    element_order: representative.order(),
                    representative,
                    size: c.len(),
                }
            })
            .collect())
    }

    /// Subgroup generated by the given element indices.
    fn closure(&self, t: &Enumerated, gens: &[u32]) -> Bits {
        let mut members = Bits::new(t.elements.len());
        members.insert(0);
        let mut queue = VecDeque::from([0u32]);
        while let Some(i) = queue.pop_front() {
            let x = &t.elements[i as usize];
            for &g in gens {
                let j = t.index[&x.then(&t.elements[g as usize])];
                if members.insert(j) {
                    queue.push_back(j);
                }
            }
        }
        members
    }

    /// Normal closure of a conjugacy class: the subgroup it generates, with
    /// a short generating list picked greedily from the class.
    fn class_closure(&self, t: &Enumerated, class: &[u32]) -> (Vec<u32>, Bits) {
        let mut gens = Vec::new();
        let mut members = self.closure(t, &gens);
        for &c in class {
            if !members.contains(c) {
                gens.push(c);
                members = self.closure(t, &gens);
            }
        }
        (gens, members)
    }

    /// Every normal subgroup is generated by the classes it contains, so
    /// the normal subgroups are exactly the joins of normal closures of
    /// classes.
    pub fn normal_subgroups(&self, limits: &Limits) -> Result<Vec<NormalSubgroup>> {
        let t = self.table(limits)?;
        let classes = self.class_indices(limits)?;
        let closures = par::map(&classes, |c| self.class_closure(t, c));
        let mut found: Vec<(Vec<u32>, Bits)> = Vec::new();
        let mut seen: HashSet<Bits> = HashSet::new();
        for (g, m) in closures {
            if seen.insert(m.clone()) {
                found.push((g, m));
            }
        }
        let mut i = 0;
        while i < found.len() {
            for j in 0..i {
                let (a, b) = (&found[i].1, &found[j].1);
                if a.is_subset(b) || b.is_subset(a) {
                    continue;
                }
                let mut gens = found[i].0.clone();
                gens.extend(&found[j].0);
                let m = self.closure(t, &gens);
                if seen.insert(m.clone()) {
                    found.push((gens, m));
                }
            }
            i += 1;
        }
        let order = t.elements.len();
        let mut out: Vec<NormalSubgroup> = found
            .into_iter()
            .map(|(gens, members)| {
                let k = members.count();
                NormalSubgroup {
                    order: k as u64,
                    name: self.describe(t, &members, k, order),
                    generators: gens.iter().map(|&g| t.elements[g as usize].clone()).collect(),
                    members,
                }
            })
            .collect();
        out.sort_by(|a, b| a.order.cmp(&b.order).then_with(|| a.members.0.cmp(&b.members.0)));
        Ok(out)
    }

    fn describe(&self, t: &Enumerated, members: &Bits, k: usize, order: usize) -> Option<String> {
        if k == 1 {
            return Some("1".into());
        }
        if k == order {
            return self.name.clone();
        }
        let all_even = members.iter().all(|i| t.elements[i as usize].is_even());
        let group_has_odd = t.elements.iter().any(|p| !p.is_even());
        if all_even && group_has_odd && 2 * k == order {
            return Some(format!("A{}", self.degree));
        }
        if k == 4 && members.iter().all(|i| t.elements[i as usize].order() <= 2) {
            return Some("V4".into());
        }
        None
    }

    /// `g N g^{-1} = N` for every generator `g`.
    pub fn is_normal(&self, n: &NormalSubgroup, limits: &Limits) -> Result<bool> {
        let t = self.table(limits)?;
        Ok(self.generators.iter().all(|g| {
            n.members.iter().all(|i| {
                let c = t.elements[i as usize].conjugate_by(g);
                n.members.contains(t.index[&c])
            })
        }))
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self, limits: &Limits) -> Result<u64> {
        Ok(self
            .conjugacy_classes(limits)?
            .iter()
            .fold(1u64, |acc, c| acc.lcm(&c.element_order)))
    }

    pub fn exponent_report(&self, limits: &Limits) -> Result<ExponentReport> {
        let classes = self.conjugacy_classes(limits)?;
        let order = self.order(limits)?;
        let mut element_orders: Vec<u64> = classes.iter().map(|c| c.element_order).collect();
        element_orders.sort_unstable();
        element_orders.dedup();
        let exponent = element_orders.iter().fold(1u64, |acc, o| acc.lcm(o));
        let factorial_comparison = self
            .name
            .as_deref()
            .and_then(|n| n.strip_prefix('S'))
            .and_then(|n| n.parse::<u64>().ok())
            .filter(|&n| n <= 20)
            .map(|n| {
                let factorial: u64 = (1..=n).product();
                FactorialComparison {
                    n,
                    factorial,
                    equal: factorial == exponent,
                    note: (factorial != exponent).then(|| {
                        format!(
                            "the exponent of S{n} is lcm of its element orders = {exponent}, not {n}! = {factorial}"
                        )
                    }),
                }
            });
        Ok(ExponentReport {
            group: self.name.clone(),
            order,
            exponent,
            element_orders,
            divides_order: order % exponent == 0,
            factorial_comparison,
        })
    }
}

fn named_factor(s: &str) -> Result<PermGroup> {
    let bad = || Error::contract(format!("unknown group '{s}' (expected S<n>, A<n>, C<n> or D<n>)"));
    let mut chars = s.chars();
    let kind = chars.next().ok_or_else(bad)?;
    let n: usize = chars.as_str().parse().map_err(|_| bad())?;
    match kind.to_ascii_uppercase() {
        'S' => PermGroup::symmetric(n),
        'A' => PermGroup::alternating(n),
        'C' => PermGroup::cyclic(n),
        'D' => PermGroup::dihedral(n),
        _ => Err(bad()),
    }
}

/// `g` from factor `i`, extended by the identity on the other blocks.
fn embed(factors: &[PermGroup], i: usize, g: &Perm) -> Perm {
    let mut out: Option<Perm> = None;
    for (j, f) in factors.iter().enumerate() {
        let block = if j == i { g.clone() } else { Perm::identity(f.degree) };
        out = Some(match out {
            None => block,
            Some(p) => p.direct_sum(&block),
        });
    }
    out.expect("nonempty product")
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorialComparison {
    pub n: u64,
    pub factorial: u64,
    pub equal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExponentReport {
    pub group: Option<String>,
    pub order: u64,
    pub exponent: u64,
    pub element_orders: Vec<u64>,
    pub divides_order: bool,
    /// For symmetric groups: whether the exponent equals `n!`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factorial_comparison: Option<FactorialComparison>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GoursatMode {
    /// All normal subgroups of the product were enumerated.
    Exhaustive,
    /// Each factor was shown simple and the product classification applied.
    Structural,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SimplicityEvidence {
    /// Normal subgroups of `A_n` enumerated: only 1 and `A_n`.
    Computed,
    /// `A_n` is simple for `n >= 5`; too large to enumerate here.
    Theorem,
}

#[derive(Debug, Clone, Serialize)]
pub struct SubProduct {
    pub included: Vec<bool>,
    pub label: String,
    #[serde(serialize_with = "serialize_big")]
    pub order: BigUint,
}

#[derive(Debug, Clone, Serialize)]
pub struct GoursatReport {
    pub factors: Vec<usize>,
    pub mode: GoursatMode,
    /// Exhaustive mode was requested but the product exceeded the cap.
    pub fell_back: bool,
    #[serde(serialize_with = "serialize_big")]
    pub product_order: BigUint,
    pub normal_subgroups: Vec<SubProduct>,
    /// Every normal subgroup found is a product of some of the factors.
    pub all_sub_products: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub simplicity: Vec<(usize, SimplicityEvidence)>,
}

fn alternating_order(n: usize) -> BigUint {
    (3..=n).fold(BigUint::one(), |acc, k| acc * k)
}

fn sub_product(factors: &[usize], included: Vec<bool>) -> SubProduct {
    let label = factors
        .iter()
        .zip(&included)
        .map(|(n, &inc)| if inc { format!("A{n}") } else { "1".to_string() })
        .collect::<Vec<_>>()
        .join(" x ");
    let order = factors
        .iter()
        .zip(&included)
        .filter(|(_, &inc)| inc)
        .fold(BigUint::one(), |acc, (&n, _)| acc * alternating_order(n));
    SubProduct { included, label, order }
}

/// Normal subgroups of `A_{n_1} x ... x A_{n_r}`, all `n_i >= 5`.
pub fn goursat_normals_of_alternating_product(n_list: &[usize], limits: &Limits) -> Result<GoursatReport> {
    if n_list.is_empty() {
        return Err(Error::contract("need at least one factor"));
    }
    if let Some(n) = n_list.iter().find(|&&n| n < 5) {
        return Err(Error::contract(format!("A{n} is not simple; factors must be >= 5")));
    }
    let product_order = n_list.iter().fold(BigUint::one(), |acc, &n| acc * alternating_order(n));
    if product_order <= BigUint::from(limits.group_order_cap) {
        let factors: Vec<PermGroup> = n_list.iter().map(|&n| PermGroup::alternating(n)).collect::<Result<_>>()?;
        let g = PermGroup::direct_product(&factors)?;
        let normals = g.normal_subgroups(limits)?;
        let mut subs = Vec::new();
        let mut all_sub_products = true;
        for nsub in &normals {
            let included: Vec<bool> = (0..factors.len())
                .map(|i| factors[i].generators.iter().all(|x| nsub.contains(&g, &embed(&factors, i, x))))
                .collect();
            let sp = sub_product(n_list, included);
            if BigUint::from(nsub.order) != sp.order {
                all_sub_products = false;
            }
            subs.push(sp);
        }
        return Ok(GoursatReport {
            factors: n_list.to_vec(),
            mode: GoursatMode::Exhaustive,
            fell_back: false,
            product_order,
            normal_subgroups: subs,
            all_sub_products,
            simplicity: Vec::new(),
        });
    }
    let mut simplicity = Vec::new();
    let mut distinct: Vec<usize> = n_list.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    for &n in &distinct {
        let evidence = if alternating_order(n) <= BigUint::from(limits.group_order_cap) {
            let count = PermGroup::alternating(n)?.normal_subgroups(limits)?.len();
            if count != 2 {
                return Err(Error::internal(format!("A{n} has {count} normal subgroups")));
            }
            SimplicityEvidence::Computed
        } else {
            SimplicityEvidence::Theorem
        };
        simplicity.push((n, evidence));
    }
    let r = n_list.len();
    if r > 20 {
        return Err(Error::resource("group_order_cap", format!("2^{r} sub-products is too many to list")));
    }
    let mut subs: Vec<SubProduct> = (0..1u32 << r)
        .map(|mask| sub_product(n_list, (0..r).map(|i| mask & (1 << i) != 0).collect()))
        .collect();
    subs.sort_by(|a, b| a.order.cmp(&b.order));
    Ok(GoursatReport {
        factors: n_list.to_vec(),
        mode: GoursatMode::Structural,
        fell_back: true,
        product_order,
        normal_subgroups: subs,
        all_sub_products: true,
        simplicity,
    })
}
