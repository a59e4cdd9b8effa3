use clap::{Args, Subcommand};
use serde::Serialize;
use serde_json::{json, Map, Value};

use dynprop::arith::parse::parse_int_list;
use dynprop::arith::primes::{divisors, first_primes};
use dynprop::arith::rational::{parse_rational, rational_to_string};
use dynprop::arith::{parse_poly, BigRational, UniPoly};
use dynprop::dynamics::{
    chebyshev, dynatomic_degree, preimage_tree, rational_periodic_points_with, verify_chebyshev_identity, Iterates,
};
use dynprop::groups::powermap::{chebyshev_galois, powermap_galois, powermap_orbit_action};
use dynprop::groups::{goursat_normals_of_alternating_product, PermGroup};
use dynprop::reduction::{certified_rational_periodic_points, period_bound};
use dynprop::tower::{
    build_tower, first_level_below, height_recurrence_identities, p1_step_witness, tower_heights,
    tower_inertia_track, tower_p2_bound, verify_tower, Tower,
};
use dynprop::{Error, Result};

use crate::config::RunConfig;

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rational periodic orbits; certified complete unless --max-period is given
    PeriodicPoints {
        #[arg(long)]
        poly: String,
        /// Only search periods up to this bound, without a certificate
        #[arg(long)]
        max_period: Option<u64>,
    },
    /// The dynatomic polynomial Phi_n of f
    Dynatomic {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        n: u64,
        /// Also list its rational roots
        #[arg(long)]
        roots: bool,
        /// Also check that the product over d | n equals f^n(x) - x
        #[arg(long)]
        check: bool,
    },
    /// Two-prime period bound from good reduction over Q
    PeriodBound {
        #[arg(long)]
        poly: String,
    },
    /// Tree of rational backward orbits of a point
    PreimageTree {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        root: String,
        #[arg(long)]
        depth: usize,
    },
    /// Radical towers K_n = K_{n-1}(alpha_n)
    #[command(subcommand)]
    Tower(TowerCommand),
    /// Permutation group computations
    #[command(subcommand)]
    Group(GroupCommand),
    /// Galois action on the periodic points of x^d
    Powermap {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        n: u64,
        /// Describe how the unit k acts on the orbits
        #[arg(long)]
        k: Option<u64>,
    },
    /// Chebyshev polynomial C_d and its Galois action on period-n points
    Chebyshev {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        n: Option<u64>,
    },
}

#[derive(Debug, Args)]
pub struct TowerArgs {
    /// Comma-separated distinct primes; defaults to the first `depth` primes
    #[arg(long)]
    primes: Option<String>,
    /// Number of levels; defaults to the number of primes
    #[arg(long)]
    depth: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum TowerCommand {
    /// Levels with exponents, degrees, minimal polynomials and certificates
    Build(TowerArgs),
    /// Re-check every certificate of the tower
    Verify(TowerArgs),
    /// Exact heights with rigorous decimal enclosures
    Heights {
        #[command(flatten)]
        sel: TowerArgs,
        /// Report the first level whose height is below this (e.g. 0.1 or 1/10)
        #[arg(long)]
        eps: Option<String>,
    },
    /// Period bound valid in every level, for f with rational coefficients
    P2Bound {
        #[command(flatten)]
        sel: TowerArgs,
        #[arg(long)]
        poly: String,
    },
    /// Inertia degrees of p_i, frozen through level n
    Inertia {
        #[command(flatten)]
        sel: TowerArgs,
        /// 1-based index i of the tracked prime
        #[arg(long)]
        index: usize,
        /// Defaults to the tower depth
        #[arg(long)]
        level: Option<usize>,
    },
    /// Degree-gap witness for one backward step from a rational point
    P1Step {
        #[command(flatten)]
        sel: TowerArgs,
        #[arg(long)]
        level: usize,
        #[arg(long)]
        poly: String,
        #[arg(long)]
        beta: String,
    },
}

#[derive(Debug, Args)]
pub struct GroupArgs {
    /// Named group: S5, A6, C4, D5 or a product like A5xA6
    #[arg(long, conflicts_with = "gen")]
    group: Option<String>,
    /// Generator in cycle notation; repeat for several
    #[arg(long = "gen")]
    gen: Vec<String>,
    /// Degree for --gen; defaults to the largest point
    #[arg(long, requires = "gen")]
    degree: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum GroupCommand {
    /// Normal subgroups with generators and orders
    Normals(GroupArgs),
    /// Conjugacy classes
    Classes(GroupArgs),
    /// Exponent and element orders
    Exponent(GroupArgs),
    /// Normal subgroups of a product of alternating groups
    Goursat {
        /// Comma-separated degrees, each at least 5
        #[arg(long)]
        factors: String,
    },
}

/// A finished computation, ready for either output mode.
pub struct Report {
    pub command: &'static str,
    pub input: Value,
    pub result: Value,
}

fn to_json<T: Serialize>(x: &T) -> Result<Value> {
    serde_json::to_value(x).map_err(|e| Error::Internal(format!("serialization failed: {e}")))
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

fn poly(s: &str) -> Result<UniPoly> {
    parse_poly(s)
}

/// Accepts `a`, `a/b` and plain decimals such as `0.05`.
fn parse_threshold(s: &str) -> Result<BigRational> {
    let t = s.trim();
    match t.split_once('.') {
        Some((int, frac)) if !t.contains('/') => {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::Parse { offset: 0, message: format!("not a decimal number: {s:?}") });
            }
            let int = if int.is_empty() || int == "-" { format!("{int}0") } else { int.to_string() };
            let whole = parse_rational(&format!("{int}{frac}"))?;
            let scale = parse_rational(&format!("1{}", "0".repeat(frac.len())))?;
            Ok(whole / scale)
        }
        _ => parse_rational(t),
    }
}

fn tower_of(sel: &TowerArgs) -> Result<(Tower, Value)> {
    let primes = match &sel.primes {
        Some(s) => parse_int_list(s)?,
        None => first_primes(sel.depth.ok_or_else(|| Error::Contract("give --primes or --depth".into()))?),
    };
    let depth = sel.depth.unwrap_or(primes.len());
    let tower = build_tower(&primes, depth)?;
    Ok((tower, json!({"primes": primes, "depth": depth})))
}

fn group_of(sel: &GroupArgs) -> Result<PermGroup> {
    match (&sel.group, sel.gen.is_empty()) {
        (Some(name), _) => PermGroup::from_name(name),
        (None, false) => {
            let gens: Vec<&str> = sel.gen.iter().map(String::as_str).collect();
            PermGroup::from_generators(&gens, sel.degree)
        }
        (None, true) => Err(Error::Contract("give --group or at least one --gen".into())),
    }
}

fn group_input(sel: &GroupArgs) -> Value {
    match &sel.group {
        Some(g) => json!({"group": g}),
        None => json!({"generators": sel.gen, "degree": sel.degree}),
    }
}

pub fn run(cmd: &Command, cfg: &RunConfig) -> Result<Report> {
    let limits = cfg.limits();
    let report = match cmd {
        Command::PeriodicPoints { poly: p, max_period } => {
            let f = poly(p)?;
            let input = json!({"poly": f.to_string(), "max_period": max_period});
            let result = match max_period {
                Some(n) => {
                    let orbits = rational_periodic_points_with(&f, *n, &limits)?;
                    let verified = orbits.iter().all(|o| o.verify(&f));
                    json!({"mode": "bounded_search", "certified": false, "max_period": n,
                           "orbits": to_json(&orbits)?, "verified": verified})
                }
                None => {
                    let c = certified_rational_periodic_points(&f, &limits)?;
                    let verified = c.orbits.iter().all(|o| o.verify(&f)) && c.certificate.recheck(&f);
                    let head = json!({"mode": "certified", "certified": c.complete,
                                      "bound": to_json(&c.certificate)?["bound"].clone(), "verified": verified});
                    merge(head, to_json(&c)?)
                }
            };
            Report { command: "periodic-points", input, result }
        }
        Command::Dynatomic { poly: p, n, roots, check } => {
            let f = poly(p)?;
            if *n == 0 {
                return Err(Error::Contract("n must be >= 1".into()));
            }
            let its = Iterates::compute(&f, *n, &limits)?;
            let phi = its.dynatomic(*n, limits.karatsuba_threshold)?;
            let expected = dynatomic_degree(f.deg() as u64, *n);
            let mut result = json!({
                "n": n,
                "degree": phi.degree(),
                "expected_degree": expected as i64,
                "degree_matches": phi.degree() as i128 == expected,
                "polynomial": phi.to_unipoly().to_string(),
            });
            if *roots {
                let r: Vec<String> = phi.rational_roots()?.iter().map(rational_to_string).collect();
                result["rational_roots"] = json!(r);
            }
            if *check {
                let mut prod = UniPoly::one();
                for d in divisors(*n) {
                    prod = &prod * &its.dynatomic(d, limits.karatsuba_threshold)?.to_unipoly();
                }
                result["product_identity"] = json!(prod == &its.get(*n) - &UniPoly::x());
            }
            Report { command: "dynatomic", input: json!({"poly": f.to_string(), "n": n}), result }
        }
        Command::PeriodBound { poly: p } => {
            let f = poly(p)?;
            let c = period_bound(&f)?;
            let result = merge(to_json(&c)?, json!({"recheck": c.recheck(&f)}));
            Report { command: "period-bound", input: json!({"poly": f.to_string()}), result }
        }
        Command::PreimageTree { poly: p, root, depth } => {
            let f = poly(p)?;
            let r = parse_rational(root)?;
            let tree = preimage_tree(&f, &r, *depth, &limits)?;
            let head = json!({
                "terminated": tree.terminated(),
                "level_counts": tree.level_counts(),
                "longest_chain": tree.longest_chain(),
                "verified": tree.verify(&f),
            });
            Report {
                command: "preimage-tree",
                input: json!({"poly": f.to_string(), "root": rational_to_string(&r), "depth": depth}),
                result: merge(head, to_json(&tree)?),
            }
        }
        Command::Tower(t) => run_tower(t, cfg)?,
        Command::Group(g) => run_group(g, cfg)?,
        Command::Powermap { d, n, k } => {
            let galois = powermap_galois(*d, *n, &limits)?;
            let mut result = json!({"galois": to_json(&galois)?});
            if let Some(k) = k {
                result["orbit_action"] = to_json(&powermap_orbit_action(*d, *n, *k, &limits)?)?;
            }
            Report { command: "powermap", input: json!({"d": d, "n": n, "k": k}), result }
        }
        Command::Chebyshev { d, n } => {
            if *d < 2 {
                return Err(Error::Contract("d must be >= 2".into()));
            }
            let mut result = json!({
                "polynomial": chebyshev(*d).to_string(),
                "identity_holds": verify_chebyshev_identity(*d),
            });
            if let Some(n) = n {
                result["galois"] = to_json(&chebyshev_galois(*d, *n, &limits)?)?;
            }
            Report { command: "chebyshev", input: json!({"d": d, "n": n}), result }
        }
    };
    Ok(report)
}

fn run_tower(cmd: &TowerCommand, cfg: &RunConfig) -> Result<Report> {
    let report = match cmd {
        TowerCommand::Build(sel) => {
            let (tower, input) = tower_of(sel)?;
            Report { command: "tower build", input, result: to_json(&tower)? }
        }
        TowerCommand::Verify(sel) => {
            let (tower, input) = tower_of(sel)?;
            Report { command: "tower verify", input, result: to_json(&verify_tower(&tower)?)? }
        }
        TowerCommand::Heights { sel, eps } => {
            let (tower, mut input) = tower_of(sel)?;
            let heights = tower_heights(&tower)?;
            let one = BigRational::from_integer(1.into());
            let levels: Vec<Value> = heights
                .iter()
                .enumerate()
                .map(|(i, h)| Ok(merge(json!({"level": i + 1}), to_json(&h.report(cfg.precision_bits))?)))
                .collect::<Result<_>>()?;
            let mut result = json!({
                "levels": levels,
                "recurrence_identities": height_recurrence_identities(&tower)?,
                "all_below_one": heights.iter().all(|h| h.compare_rational(&one).is_lt()),
            });
            input["precision_bits"] = json!(cfg.precision_bits);
            if let Some(e) = eps {
                let t = parse_threshold(e)?;
                if t <= BigRational::from_integer(0.into()) {
                    return Err(Error::Contract("eps must be positive".into()));
                }
                input["eps"] = json!(rational_to_string(&t));
                result["first_level_below_eps"] = json!(first_level_below(&heights, &t));
            }
            Report { command: "tower heights", input, result }
        }
        TowerCommand::P2Bound { sel, poly: p } => {
            let (tower, mut input) = tower_of(sel)?;
            let f = poly(p)?;
            input["poly"] = json!(f.to_string());
            let b = tower_p2_bound(&tower, &f)?;
            let result = merge(
                json!({"bound": to_json(&b.certificate)?["bound"].clone(), "recheck": b.certificate.recheck(&f)}),
                to_json(&b)?,
            );
            Report { command: "tower p2-bound", input, result }
        }
        TowerCommand::Inertia { sel, index, level } => {
            let (tower, mut input) = tower_of(sel)?;
            let n = level.unwrap_or(tower.depth());
            input["index"] = json!(index);
            input["level"] = json!(n);
            Report { command: "tower inertia", input, result: to_json(&tower_inertia_track(&tower, *index, n)?)? }
        }
        TowerCommand::P1Step { sel, level, poly: p, beta } => {
            let (tower, mut input) = tower_of(sel)?;
            let f = poly(p)?;
            let b = parse_rational(beta)?;
            input["level"] = json!(level);
            input["poly"] = json!(f.to_string());
            input["beta"] = json!(rational_to_string(&b));
            Report { command: "tower p1-step", input, result: to_json(&p1_step_witness(&tower, *level, &f, &b)?)? }
        }
    };
    Ok(report)
}

fn run_group(cmd: &GroupCommand, cfg: &RunConfig) -> Result<Report> {
    let limits = cfg.limits();
    let report = match cmd {
        GroupCommand::Normals(sel) => {
            let g = group_of(sel)?;
            let normals = g.normal_subgroups(&limits)?;
            let mut all_normal = true;
            for n in &normals {
                all_normal &= g.is_normal(n, &limits)?;
            }
            let mut result = Map::new();
            result.insert("group".into(), json!(g.name()));
            result.insert("order".into(), json!(g.order(&limits)?));
            result.insert("count".into(), json!(normals.len()));
            result.insert("conjugation_closed".into(), json!(all_normal));
            result.insert("normal_subgroups".into(), to_json(&normals)?);
            Report { command: "group normals", input: group_input(sel), result: Value::Object(result) }
        }
        GroupCommand::Classes(sel) => {
            let g = group_of(sel)?;
            let classes = g.conjugacy_classes(&limits)?;
            let result = json!({
                "group": g.name(),
                "order": g.order(&limits)?,
                "count": classes.len(),
                "classes": to_json(&classes)?,
            });
            Report { command: "group classes", input: group_input(sel), result }
        }
        GroupCommand::Exponent(sel) => {
            let g = group_of(sel)?;
            Report { command: "group exponent", input: group_input(sel), result: to_json(&g.exponent_report(&limits)?)? }
        }
        GroupCommand::Goursat { factors } => {
            let ns: Vec<usize> = parse_int_list(factors)?.into_iter().map(|n| n as usize).collect();
            let r = goursat_normals_of_alternating_product(&ns, &limits)?;
            Report { command: "group goursat", input: json!({"factors": ns}), result: to_json(&r)? }
        }
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thresholds() {
        assert_eq!(parse_threshold("0.1").unwrap(), parse_rational("1/10").unwrap());
        assert_eq!(parse_threshold(".05").unwrap(), parse_rational("1/20").unwrap());
        assert_eq!(parse_threshold("3/7").unwrap(), parse_rational("3/7").unwrap());
        assert_eq!(parse_threshold("2").unwrap(), parse_rational("2").unwrap());
        assert!(parse_threshold("0.").is_err());
        assert!(parse_threshold("0.1e3").is_err());
    }
}
