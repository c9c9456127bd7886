//! `sumfree` — exact computations with sum-free and (k,l)-free subsets of
//! finite abelian groups.
//!
//! Groups are written as factor lists (`7x7`, `13`, `7x49`); subsets as
//! comma-separated element tuples (`"(0,2),(1,2)"`, or `"3,4"` for cyclic
//! groups). Reports go to stdout (JSON by default), telemetry to stderr.
//! Exit codes: 0 ok, 1 usage, 2 invalid argument, 3 incomplete search,
//! 4 theorem violation.

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;
use sumfree::classify::{classify_cyclic, classify_maximum, find_hom_preimage, MaximumVerdict};
use sumfree::construct::{
    exam_set, interval_set, kl_example, maxch_template, maximal_example_49, ExamParams,
};
use sumfree::density::{alpha, frac_str, group_type, lambda_conjecture, mu, GroupType};
use sumfree::group::{Group, Hom};
use sumfree::search::{
    enumerate_max_sumfree, max_klfree, max_sumfree, BoundKind, SearchConfig, SearchMode,
};
use sumfree::subset::{decompose, generated_subgroup, Subset};
use sumfree::verify::verify_group;
use sumfree::Error;

#[derive(Parser)]
#[command(
    name = "sumfree",
    version,
    about = "Exact sum-free set computations in finite abelian groups"
)]
struct Cli {
    /// Report format on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    output: Output,
    /// Seed for the randomized verification suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Extremal sum-free density of a group.
    Mu { group: String },
    /// Group-type taxonomy (I / II / III).
    Type { group: String },
    /// Properties of a given subset: density, sum-freeness, maximality,
    /// stabilizer, and whether it sits inside a cyclic-quotient preimage.
    Check {
        group: String,
        set: String,
        /// Also test (k,l)-freeness for this k (requires --l).
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        l: Option<u64>,
    },
    /// Classify a maximum sum-free set against the extremal templates.
    Classify { group: String, set: String },
    /// Build a named extremal family.
    Construct {
        group: String,
        /// interval | exam1 | exam2 | maxch1 | maxch2 | maxch3 | kl-example | maximal49
        #[arg(long)]
        family: String,
        /// Generators of the subgroup J, as a subset literal over S.
        #[arg(long = "J", alias = "j", default_value = "")]
        j: String,
        /// Base point b, as an element literal over S.
        #[arg(long, default_value = "")]
        b: String,
        /// Negate the template (maxch2).
        #[arg(long, default_value_t = false)]
        negated: bool,
        /// Parameter k for kl-example.
        #[arg(long)]
        k: Option<u64>,
    },
    /// Exhaustive maximum sum-free search.
    Search {
        group: String,
        /// max | all | orbits
        #[arg(long, default_value = "max")]
        mode: String,
        /// Budget in seconds.
        #[arg(long, default_value_t = 300)]
        budget: u64,
        /// naive | pairing
        #[arg(long, default_value = "pairing")]
        bound: String,
        /// Fold negation into orbit reduction.
        #[arg(long, default_value_t = false)]
        orbit_negation: bool,
    },
    /// Exhaustive maximum (k,l)-free search.
    Klfree {
        group: String,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        l: u64,
        #[arg(long, default_value_t = 300)]
        budget: u64,
    },
    /// Run the full verification battery for a group; nonzero exit on any
    /// violated identity.
    VerifyPaper {
        group: String,
        /// Cases per randomized suite.
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::IncompleteSearch { .. } => 3,
        Error::NoSpecialDirection | Error::TheoremViolation(_) => 4,
        _ => 2,
    }
}

fn coords(s: &Subset) -> Vec<Vec<u64>> {
    s.indices()
        .into_iter()
        .map(|i| s.group().coords_of(i))
        .collect()
}

fn subset_json(s: &Subset) -> Value {
    json!(coords(s))
}

/// Flat type fields: `"type"` plus `"p"` (type I) or `"k"` (type III).
fn put_type_fields(g: &Arc<Group>, obj: &mut serde_json::Map<String, Value>) {
    match group_type(g) {
        Ok(GroupType::TypeI { p }) => {
            obj.insert("type".into(), json!("I"));
            obj.insert("p".into(), json!(p));
        }
        Ok(GroupType::TypeII) => {
            obj.insert("type".into(), json!("II"));
        }
        Ok(GroupType::TypeIII { k }) => {
            obj.insert("type".into(), json!("III"));
            obj.insert("k".into(), json!(k));
        }
        Err(_) => {
            obj.insert("type".into(), Value::Null);
        }
    }
}

/// The standalone group for `S` (the factors other than the cyclic summand
/// `C` of the canonical decomposition), plus the factor index of `C`.
fn s_factor_view(g: &Arc<Group>) -> Result<(Arc<Group>, usize), Error> {
    let m = g.exponent();
    let c_index = (0..g.rank())
        .rev()
        .find(|&j| g.moduli()[j] == m)
        .ok_or_else(|| {
            Error::InvalidArgument(
                "no cyclic factor attains the exponent; pass J and b as full-group literals".into(),
            )
        })?;
    let s_moduli: Vec<u64> = g
        .moduli()
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != c_index)
        .map(|(_, &m)| m)
        .collect();
    let s_group = if s_moduli.is_empty() {
        Group::trivial()
    } else {
        Group::new(s_moduli)?
    };
    Ok((s_group, c_index))
}

fn embed_from_s(g: &Arc<Group>, c_index: usize, s_coords: &[u64]) -> Result<usize, Error> {
    let mut full = Vec::with_capacity(g.rank());
    let mut it = s_coords.iter();
    for j in 0..g.rank() {
        if j == c_index {
            full.push(0);
        } else {
            full.push(*it.next().ok_or_else(|| {
                Error::InvalidElement("S literal has too few coordinates".into())
            })?);
        }
    }
    g.index_of(&full)
}

/// Parse `--j` (generator list) and `--b` (single element) over S and embed
/// them into the full group.
fn parse_j_b(g: &Arc<Group>, j: &str, b: &str) -> Result<(Subset, usize), Error> {
    let (s_group, c_index) = s_factor_view(g)?;
    let j_gens = Subset::parse(&s_group, j)?;
    let gens: Vec<usize> = j_gens
        .indices()
        .into_iter()
        .map(|i| embed_from_s(g, c_index, &s_group.coords_of(i)))
        .collect::<Result<_, _>>()?;
    let j_subgroup = generated_subgroup(g, &gens);
    let b_idx = if b.trim().is_empty() {
        0
    } else {
        let b_set = Subset::parse(&s_group, b)?;
        let idxs = b_set.indices();
        if idxs.len() != 1 {
            return Err(Error::InvalidArgument(
                "b must be a single element of S".into(),
            ));
        }
        embed_from_s(g, c_index, &s_group.coords_of(idxs[0]))?
    };
    Ok((j_subgroup, b_idx))
}

fn hom_json(h: &Hom) -> Value {
    json!({"modulus": h.modulus(), "coeffs": h.coeffs()})
}

fn run(cli: &Cli) -> Result<(Value, Vec<String>), Error> {
    match &cli.cmd {
        Cmd::Mu { group } => {
            let g = Group::parse(group)?;
            let value = mu(&g);
            let mut lines = vec![format!("mu({}) = {}", g.spec_string(), frac_str(value))];
            if let Ok(t) = group_type(&g) {
                lines.push(format!("type {}", t.tag()));
            }
            let mut obj = serde_json::Map::new();
            obj.insert("group".into(), json!(g.spec_string()));
            obj.insert("n".into(), json!(g.order()));
            obj.insert("exponent".into(), json!(g.exponent()));
            obj.insert("mu".into(), json!(frac_str(value)));
            put_type_fields(&g, &mut obj);
            Ok((Value::Object(obj), lines))
        }
        Cmd::Type { group } => {
            let g = Group::parse(group)?;
            let t = group_type(&g)?;
            let lines = vec![format!("{} is type {}", g.spec_string(), t.tag())];
            let mut obj = serde_json::Map::new();
            obj.insert("group".into(), json!(g.spec_string()));
            obj.insert("n".into(), json!(g.order()));
            obj.insert("exponent".into(), json!(g.exponent()));
            put_type_fields(&g, &mut obj);
            Ok((Value::Object(obj), lines))
        }
        Cmd::Check { group, set, k, l } => {
            let g = Group::parse(group)?;
            let a = Subset::parse(&g, set)?;
            let sum_free = a.is_sum_free();
            let maximal = if sum_free {
                Some(a.is_maximal_sum_free()?)
            } else {
                None
            };
            let kl = match (k, l) {
                (Some(k), Some(l)) => Some(a.is_kl_free(*k, *l)?),
                (None, None) => None,
                _ => {
                    return Err(Error::InvalidArgument(
                        "--k and --l must be given together".into(),
                    ))
                }
            };
            let stab = a.stabilizer();
            let preimage_hom = find_hom_preimage(&a);
            let maximal_text = match maximal {
                Some(b) => b.to_string(),
                None => "n/a".to_string(),
            };
            let lines = vec![format!(
                "|A| = {}, density {}, sum-free: {sum_free}, maximal: {maximal_text}, |H(A)| = {}",
                a.len(),
                frac_str(alpha(&a)),
                stab.len()
            )];
            Ok((
                json!({
                    "group": g.spec_string(),
                    "set": coords(&a),
                    "size": a.len(),
                    "density": frac_str(alpha(&a)),
                    "mu": frac_str(mu(&g)),
                    "sum_free": sum_free,
                    "maximal": maximal,
                    "kl_free": kl,
                    "stabilizer": {"size": stab.len(), "elements": coords(&stab)},
                    "hom_preimage": preimage_hom.map(|h| hom_json(&h)),
                }),
                lines,
            ))
        }
        Cmd::Classify { group, set } => {
            let g = Group::parse(group)?;
            let a = Subset::parse(&g, set)?;
            if g.order() == g.exponent() {
                let v = classify_cyclic(&a)?;
                let lines = vec![format!(
                    "family {} via unit {}{}",
                    v.family,
                    v.unit,
                    if v.negated { " (negated)" } else { "" }
                )];
                Ok((
                    json!({
                        "verdict": format!("cyclic-family-{}", v.family),
                        "unit": v.unit,
                        "negated": v.negated,
                    }),
                    lines,
                ))
            } else {
                let c = classify_maximum(&a)?;
                let checks = json!({
                    "containment": c.report.containment,
                    "middle_full": c.report.middle_full,
                    "wing_low": c.report.wing_low,
                    "wing_high": c.report.wing_high,
                    "maximal_core": c.report.maximal_core,
                    "special_order": c.report.special.q,
                    "bound": frac_str(c.report.bound),
                });
                let (hom, j, b, negated) = match &c.verdict {
                    MaximumVerdict::IntervalPreimage { f } => (f.clone(), None, None, false),
                    MaximumVerdict::Variant2 { f, j, b, negated } => {
                        (f.clone(), Some(j.clone()), Some(*b), *negated)
                    }
                    MaximumVerdict::Variant3 { f, j, b } => {
                        (f.clone(), Some(j.clone()), Some(*b), false)
                    }
                };
                let lines = vec![format!("verdict {}", c.verdict.tag())];
                Ok((
                    json!({
                        "verdict": c.verdict.tag(),
                        "hom": hom.coeffs(),
                        "J": j.map(|j| subset_json(&j)),
                        "b": b.map(|b| g.coords_of(b)),
                        "negated": negated,
                        "checks": checks,
                    }),
                    lines,
                ))
            }
        }
        Cmd::Construct {
            group,
            family,
            j,
            b,
            negated,
            k,
        } => {
            let g = Group::parse(group)?;
            let a = match family.as_str() {
                "interval" => {
                    if g.rank() != 1 {
                        return Err(Error::InvalidArgument(
                            "interval family lives in a cyclic group".into(),
                        ));
                    }
                    interval_set(g.moduli()[0])
                }
                "exam1" | "exam2" => {
                    let (j_sub, b_idx) = parse_j_b(&g, j, b)?;
                    let variant = if family == "exam1" { 1 } else { 2 };
                    exam_set(&ExamParams::new(decompose(&g), j_sub, b_idx, variant)?)?
                }
                "maxch1" | "maxch2" | "maxch3" => {
                    let (j_sub, b_idx) = parse_j_b(&g, j, b)?;
                    let variant = family.as_bytes()[5] - b'0';
                    let f = decompose(&g).f;
                    maxch_template(&f, &j_sub, b_idx, variant, *negated)?
                }
                "kl-example" => {
                    let k =
                        k.ok_or_else(|| Error::InvalidArgument("kl-example requires --k".into()))?;
                    let (j_sub, _) = parse_j_b(&g, j, b)?;
                    kl_example(&g, k, &j_sub)?
                }
                "maximal49" => {
                    if g.moduli() != [7, 7] {
                        return Err(Error::InvalidArgument(
                            "maximal49 lives in the group 7x7".into(),
                        ));
                    }
                    maximal_example_49()
                }
                other => return Err(Error::InvalidArgument(format!("unknown family {other:?}"))),
            };
            let lines = vec![format!(
                "{} elements, density {}: {}",
                a.len(),
                frac_str(alpha(&a)),
                a.format()
            )];
            Ok((
                json!({
                    "group": g.spec_string(),
                    "family": family,
                    "set": coords(&a),
                    "literal": a.format(),
                    "size": a.len(),
                    "density": frac_str(alpha(&a)),
                    "sum_free": a.is_sum_free(),
                }),
                lines,
            ))
        }
        Cmd::Search {
            group,
            mode,
            budget,
            bound,
            orbit_negation,
        } => {
            let g = Group::parse(group)?;
            let mode = match mode.as_str() {
                "max" => SearchMode::MaxSize,
                "all" => SearchMode::EnumerateAll,
                "orbits" => SearchMode::EnumerateOrbits,
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "unknown mode {other:?} (max | all | orbits)"
                    )))
                }
            };
            let cfg = SearchConfig {
                mode,
                budget: Duration::from_secs(*budget),
                bound: match bound.as_str() {
                    "naive" => BoundKind::Naive,
                    "pairing" => BoundKind::Pairing,
                    other => {
                        return Err(Error::InvalidArgument(format!(
                            "unknown bound {other:?} (naive | pairing)"
                        )))
                    }
                },
                orbit_negation: *orbit_negation,
                ..Default::default()
            };
            let r = match mode {
                SearchMode::MaxSize => max_sumfree(&g, &cfg)?,
                _ => enumerate_max_sumfree(&g, &cfg)?,
            };
            let lines = vec![format!(
                "optimum {} ({} witnesses, {} nodes)",
                r.optimum,
                r.witnesses.len(),
                r.nodes_expanded
            )];
            Ok((
                json!({
                    "group": g.spec_string(),
                    "optimum": r.optimum,
                    "mu": frac_str(mu(&g)),
                    "complete": r.complete,
                    "nodes": r.nodes_expanded,
                    "orbit_count": r.orbit_count,
                    "witnesses": r.witnesses.iter().map(subset_json).collect::<Vec<_>>(),
                }),
                lines,
            ))
        }
        Cmd::Klfree {
            group,
            k,
            l,
            budget,
        } => {
            let g = Group::parse(group)?;
            let cfg = SearchConfig {
                budget: Duration::from_secs(*budget),
                ..Default::default()
            };
            let r = max_klfree(&g, *k, *l, &cfg)?;
            let lambda = lambda_conjecture(&g, *k, *l)?;
            let lines = vec![format!(
                "optimum {} vs lambda*n = {}",
                r.optimum,
                frac_str(lambda)
            )];
            Ok((
                json!({
                    "group": g.spec_string(),
                    "k": k,
                    "l": l,
                    "optimum": r.optimum,
                    "lambda": frac_str(lambda),
                    "complete": r.complete,
                    "nodes": r.nodes_expanded,
                    "witnesses": r.witnesses.iter().map(subset_json).collect::<Vec<_>>(),
                }),
                lines,
            ))
        }
        Cmd::VerifyPaper { group, trials } => {
            let g = Group::parse(group)?;
            let outcomes = verify_group(&g, cli.seed, *trials)?;
            let ok = outcomes.iter().all(|o| o.ok);
            let lines: Vec<String> = outcomes
                .iter()
                .map(|o| {
                    format!(
                        "{} {}: {}",
                        if o.ok { "pass" } else { "FAIL" },
                        o.name,
                        o.detail
                    )
                })
                .collect();
            let value = json!({
                "group": g.spec_string(),
                "ok": ok,
                "checks": outcomes
                    .iter()
                    .map(|o| json!({"name": o.name, "ok": o.ok, "detail": o.detail}))
                    .collect::<Vec<_>>(),
            });
            if !ok {
                // report goes to stdout, then the process exits nonzero
                print_report(cli.output, &value, &lines);
                return Err(Error::TheoremViolation(
                    "verification battery reported violations".into(),
                ));
            }
            Ok((value, lines))
        }
    }
}

fn print_report(output: Output, value: &Value, lines: &[String]) {
    match output {
        Output::Json => println!("{}", serde_json::to_string_pretty(value).unwrap()),
        Output::Text => {
            for line in lines {
                println!("{line}");
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own message; usage problems exit with 1
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok((value, lines)) => {
            print_report(cli.output, &value, &lines);
            ExitCode::SUCCESS
        }
        Err(e) => {
            // malformed group specs / literals are usage errors
            let code = match &e {
                Error::InvalidArgument(msg)
                    if msg.contains("group spec") || msg.contains("modulus") =>
                {
                    1
                }
                Error::InvalidElement(_) => 1,
                other => exit_code_for(other),
            };
            eprintln!("error: {e}");
            ExitCode::from(code)
        }
    }
}
