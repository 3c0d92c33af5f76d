//! Argument parsing and the five subcommands.
//!
//! Every command produces a [`Report`] carrying the text rendering, the JSON
//! object and the exit status, so that both output modes are built from the
//! same values.

use std::path::PathBuf;
use std::sync::Arc;

use clap::{ArgGroup, Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};

use chow_core::abgroup::{format_invariants, AbelianGroup};
use chow_core::chow::{
    chow_group, exact_sequence_of, find_trivial_chow_conductor, pic_cardinality, pic_chow_report,
    principal_divisor_test, PrincipalVerdict,
};
use chow_core::declared::declared_order;
use chow_core::divisor::{Divisor, Level};
use chow_core::orders::{
    conductor_exponents, conductor_violator, order_from_ideal, NonInvertiblePrime, OrderData, PlaceSource,
};
use chow_core::quadfield::{QuadField, SplitKind};
use chow_core::Error;

use crate::decl::{read_declared, DeclError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_BOUND: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "chow", version, about = "Chow groups, Picard groups and conductors of orders")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Chow group of an order and its decomposition
    Chow {
        #[command(flatten)]
        source: Source,
    },
    /// Decide whether a divisor of the order is principal
    Principal {
        #[command(flatten)]
        source: Source,
        /// `place:coeff,...`; the empty string is the zero divisor
        #[arg(long, allow_hyphen_values = true)]
        divisor: String,
        /// Reduction steps allowed in the principal ideal test
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Non-invertible primes, local Chow groups, Picard data
    OrderInfo {
        #[command(flatten)]
        source: Source,
        /// Norm bound for the search of a nonzero element with trivial divisor
        #[arg(long, default_value_t = 1000)]
        bound: u64,
    },
    /// Search a conductor whose order has trivial Chow group
    FindTrivial {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 100)]
        prime_budget: u64,
    },
    /// Furtwängler's test for an ideal of the maximal order
    ConductorTest {
        #[command(flatten)]
        source: Source,
        /// Exponents `place:k,...` of the ideal
        #[arg(long, allow_hyphen_values = true)]
        ideal: String,
    },
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("field").required(true).args(["disc", "data"])))]
pub struct Source {
    /// Fundamental discriminant of a quadratic field
    #[arg(long, allow_hyphen_values = true)]
    pub disc: Option<i64>,
    /// Declared-data file
    #[arg(long, conflicts_with = "disc")]
    pub data: Option<PathBuf>,
    /// Conductor f of the order Z + f·O_K
    #[arg(long, conflicts_with = "data")]
    pub conductor: Option<u64>,
    /// Order name or comma-separated record indices of the declared file
    #[arg(long, requires = "data")]
    pub order: Option<String>,
    /// Print one JSON object instead of text
    #[arg(long)]
    pub json: bool,
}

pub struct Report {
    pub code: i32,
    pub text: String,
    pub json: Value,
}

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SearchBound(_) | Error::ClassGroupBound { .. } => EXIT_BOUND,
            Error::Declared(_) | Error::Incomplete(_) => EXIT_DATA,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<DeclError> for Failure {
    fn from(e: DeclError) -> Self {
        Failure { code: EXIT_DATA, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

fn jnum(x: &BigInt) -> Value {
    x.to_i64().map(Value::from).unwrap_or_else(|| Value::String(x.to_string()))
}

fn jinv(g: &AbelianGroup) -> Value {
    Value::Array(g.invariant_factors().iter().map(jnum).collect())
}

struct Loaded {
    order: OrderData,
    field: Option<Arc<QuadField>>,
    /// Text description and JSON object of the order.
    name: String,
    info: Value,
}

fn load(source: &Source) -> Result<Loaded, Failure> {
    if let Some(d) = source.disc {
        let field = Arc::new(QuadField::new(d)?);
        let f = source.conductor.unwrap_or(1);
        let order = OrderData::from_conductor(field.clone(), f)?;
        let name = if f == 1 { format!("O_K, d_K = {d}") } else { format!("Z + {f}O_K, d_K = {d}") };
        let info = json!({ "backend": "quadratic", "disc": d, "conductor": f });
        return Ok(Loaded { order, field: Some(field), name, info });
    }
    let path = source.data.as_ref().ok_or_else(|| usage("one of --disc or --data is required"))?;
    let decl = read_declared(path)?;
    let sel = source.order.clone().unwrap_or_default();
    let order = declared_order(&decl, &sel)?;
    let shown = if sel.is_empty() { "maximal".to_string() } else { sel.clone() };
    let name = format!("{shown} from {}", path.display());
    let info = json!({
        "backend": "declared",
        "file": path.display().to_string(),
        "selection": shown,
        "description": decl.description,
    });
    Ok(Loaded { order, field: None, name, info })
}

fn quadratic_only(l: &Loaded, what: &str) -> Result<Arc<QuadField>, Failure> {
    l.field.clone().ok_or_else(|| usage(format!("{what} needs --disc")))
}

pub fn run(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::Chow { source } => cmd_chow(source),
        Command::Principal { source, divisor, bound } => cmd_principal(source, divisor, *bound),
        Command::OrderInfo { source, bound } => cmd_order_info(source, *bound),
        Command::FindTrivial { source, prime_budget } => cmd_find_trivial(source, *prime_budget),
        Command::ConductorTest { source, ideal } => cmd_conductor_test(source, ideal),
    }
}

pub fn json_requested(cli: &Cli) -> bool {
    match &cli.command {
        Command::Chow { source }
        | Command::Principal { source, .. }
        | Command::OrderInfo { source, .. }
        | Command::FindTrivial { source, .. }
        | Command::ConductorTest { source, .. } => source.json,
    }
}

fn local_text(primes: &[NonInvertiblePrime]) -> String {
    if primes.is_empty() {
        return "none".into();
    }
    let parts: Vec<String> =
        primes.iter().map(|q| format!("{} -> {}", q.label, format_invariants(&nontrivial(&q.g)))).collect();
    parts.join(", ")
}

fn nontrivial(g: &BigInt) -> Vec<BigInt> {
    if g.is_one() {
        Vec::new()
    } else {
        vec![g.clone()]
    }
}

fn cmd_chow(source: &Source) -> Result<Report, Failure> {
    let l = load(source)?;
    let pres = chow_group(&l.order)?;
    let seq = exact_sequence_of(&pres)?;
    let primes = l.order.noninvertible_primes();
    let mut head = format!("Chow: {}", seq.chow);
    if seq.non_split {
        let locals: Vec<BigInt> = seq.local_orders.iter().filter(|g| !g.is_one()).cloned().collect();
        head += &format!(" (non-split over {} by {})", seq.image, format_invariants(&locals));
    }
    let text = format!("{head}\nimage of Cl: {}\nlocal: {}\norder: {}\n", seq.image, local_text(primes), l.name);
    let local: Vec<Value> = primes.iter().map(|q| json!({ "prime": q.label.to_string(), "g": jnum(&q.g) })).collect();
    let json = json!({
        "command": "chow",
        "order": l.info,
        "chow": jinv(&seq.chow),
        "cardinality": seq.chow.cardinality().as_ref().map(jnum),
        "image": jinv(&seq.image),
        "local": local,
        "non_split": seq.non_split,
    });
    Ok(Report { code: EXIT_OK, text, json })
}

fn cmd_principal(source: &Source, divisor: &str, bound: Option<u64>) -> Result<Report, Failure> {
    let l = load(source)?;
    let d = l.order.normalize_divisor(&Divisor::parse(Level::Order, divisor)?)?;
    let verdict = principal_divisor_test(&l.order, &d, bound)?;
    let (line, principal, generator, step) = match &verdict {
        PrincipalVerdict::Generator(a) => {
            let s = l.field.as_ref().expect("generators come from quadratic fields").format(a);
            (format!("principal: {s}"), true, Some(s), None)
        }
        PrincipalVerdict::PrincipalNoGenerator => {
            ("principal (no generator: declared backend)".to_string(), true, None, None)
        }
        PrincipalVerdict::NotPrincipal { step } => (format!("not principal (step {step})"), false, None, Some(*step)),
    };
    let text = format!("divisor: {d}\n{line}\norder: {}\n", l.name);
    let json = json!({
        "command": "principal",
        "order": l.info,
        "divisor": d.to_string(),
        "principal": principal,
        "generator": generator,
        "step": step,
    });
    Ok(Report { code: if principal { EXIT_OK } else { EXIT_NEGATIVE }, text, json })
}

fn kind_name(q: &NonInvertiblePrime) -> &'static str {
    match q.places.first().map(|pl| &pl.source) {
        Some(PlaceSource::Quadratic(pl)) => match pl.kind {
            SplitKind::Split => "split",
            SplitKind::Inert => "inert",
            SplitKind::Ramified => "ramified",
        },
        _ => "declared",
    }
}

fn prime_line(q: &NonInvertiblePrime) -> String {
    let local = format_invariants(&nontrivial(&q.g));
    let ds: Vec<String> = q.places.iter().map(|pl| pl.degree.to_string()).collect();
    let es: Vec<String> = q.places.iter().map(|pl| pl.ramification.to_string()).collect();
    let places: Vec<String> = q.places.iter().map(|pl| pl.label.to_string()).collect();
    if q.places.len() == 1 {
        return format!("  {}: {}, d={}, g={}; local Chow {local}; e={}", q.label, kind_name(q), ds[0], q.g, es[0]);
    }
    let d = format!("({})", ds.join(","));
    format!(
        "  {}: {}, d={d}, e=({}), {d}→g={}; local Chow {local}; places {}",
        q.label,
        kind_name(q),
        es.join(","),
        q.g,
        places.join(" ")
    )
}

fn yes_no(b: Option<bool>) -> &'static str {
    match b {
        Some(true) => "yes",
        Some(false) => "no",
        None => "unknown",
    }
}

fn cmd_order_info(source: &Source, bound: u64) -> Result<Report, Failure> {
    let l = load(source)?;
    let o = &l.order;
    let cl = o.class_group()?.clone();
    let mut text = format!("order: {}\nclass group: {cl}\n", l.name);
    let primes = o.noninvertible_primes();
    if o.is_maximal() {
        text += "maximal order\n";
    } else {
        text += "non-invertible primes:\n";
        for q in primes {
            text += &prime_line(q);
            text.push('\n');
        }
    }

    let mut j =
        json!({ "command": "order-info", "order": l.info, "class_group": jinv(&cl), "maximal": o.is_maximal() });
    j["primes"] = primes
        .iter()
        .map(|q| {
            json!({
                "label": q.label.to_string(),
                "kind": kind_name(q),
                "residue_size": q.residue_size,
                "places": q.places.iter().map(|pl| json!({
                    "label": pl.label.to_string(),
                    "degree": pl.degree,
                    "ramification": pl.ramification,
                })).collect::<Vec<_>>(),
                "g": jnum(&q.g),
                "lambdas": q.lambdas.iter().map(jnum).collect::<Vec<_>>(),
            })
        })
        .collect();

    if let Some(field) = &l.field {
        let f = o.conductor().unwrap_or(1);
        let ok = conductor_violator(field, &conductor_exponents(field, f)?)?.is_none();
        let ring = if f == 1 { "O_K".to_string() } else { format!("{f}O_K") };
        text += &format!("conductor: {ring}, conductor ideal: {}\n", yes_no(Some(ok)));
        j["conductor_ideal"] = json!(ok);
    }

    let fix = o.prop_fix_report()?;
    let conds = [fix.condition5, fix.condition4, fix.condition3, fix.condition2];
    let summary = if o.is_maximal() {
        "all hold (vacuously, no non-invertible primes)".to_string()
    } else if conds.iter().all(|c| *c == Some(true)) {
        "all hold".to_string()
    } else if conds.iter().all(|c| *c == Some(false)) {
        "none hold".to_string()
    } else {
        format!(
            "(5) {}, (4) {}, (3) {}, (2) {}",
            yes_no(conds[0]),
            yes_no(conds[1]),
            yes_no(conds[2]),
            yes_no(conds[3])
        )
    };
    text += &format!(
        "Fix: {summary}\n  conductor squarefree: {}, residue fields F_2: {}, r_i >= 2: {}\n",
        yes_no(fix.cond_squarefree),
        yes_no(Some(fix.all_residue_f2)),
        yes_no(Some(fix.all_r_geq_2))
    );
    j["fix"] = json!({
        "condition5": fix.condition5,
        "condition4": fix.condition4,
        "condition3": fix.condition3,
        "condition2": fix.condition2,
        "conductor_squarefree": fix.cond_squarefree,
        "all_residue_f2": fix.all_residue_f2,
        "all_r_geq_2": fix.all_r_geq_2,
    });

    if l.field.is_some() {
        let pic = pic_cardinality(o)?;
        text += &format!(
            "Pic={} (h = {}, [O_K*:O*] = {}, |(O_K/F)*| = {}, |(O/F)*| = {})\n",
            pic.pic_cardinality, pic.cl_cardinality, pic.unit_index, pic.residue_units, pic.order_residue_units
        );
        j["pic"] = json!({
            "cardinality": jnum(&pic.pic_cardinality),
            "class_number": jnum(&pic.cl_cardinality),
            "unit_index": jnum(&pic.unit_index),
            "residue_units": jnum(&pic.residue_units),
            "order_residue_units": jnum(&pic.order_residue_units),
            "relative_unit_quotient": jnum(&pic.relative_unit_quotient),
        });
    } else {
        text += "Pic: unavailable for declared data\n";
        j["pic"] = Value::Null;
    }

    let pc = pic_chow_report(o)?;
    text += &format!("Pic -> Chow: injective {}, surjective {}\n", yes_no(pc.injective), yes_no(Some(pc.surjective)));
    for r in &pc.reasons {
        text += &format!("  {r}\n");
    }
    j["pic_to_chow"] = json!({ "injective": pc.injective, "surjective": pc.surjective, "reasons": pc.reasons });

    let chow = chow_group(o)?;
    text += &format!("Chow: {}\n", chow.group());
    j["chow"] = jinv(chow.group());

    if let (Some(field), false) = (&l.field, o.is_maximal()) {
        let w = o.divisor_kernel_witness(bound)?;
        match &w {
            Some(a) => text += &format!("kernel of div_O: {} is not a unit of O\n", field.format(a)),
            None => text += &format!("kernel of div_O: no witness up to norm {bound}\n"),
        }
        j["kernel_witness"] = json!(w.as_ref().map(|a| field.format(a)));
    }
    Ok(Report { code: EXIT_OK, text, json: j })
}

fn cmd_find_trivial(source: &Source, prime_budget: u64) -> Result<Report, Failure> {
    let l = load(source)?;
    let field = quadratic_only(&l, "find-trivial")?;
    let d = field.disc().clone();
    let h = field.class_number()?;
    match find_trivial_chow_conductor(&field, prime_budget)? {
        Some(found) => {
            let f = found.conductor;
            let order = OrderData::from_conductor(field.clone(), f)?;
            let chow = chow_group(&order)?;
            let gens: Vec<String> = found.generator_primes.iter().map(u64::to_string).collect();
            let gens_text = if gens.is_empty() { "none".to_string() } else { gens.join(" ") };
            let ring = if f == 1 { "O_K".to_string() } else { format!("Z + {f}O_K") };
            let text = format!(
                "d_K = {d}, h = {h}\nconductor: {f}\nprimes spanning Cl: {gens_text}\nChow({ring}): {}\n",
                chow.group()
            );
            let json = json!({
                "command": "find-trivial",
                "disc": jnum(&d),
                "class_number": jnum(&h),
                "found": true,
                "conductor": f,
                "generator_primes": found.generator_primes,
                "chow": jinv(chow.group()),
                "prime_budget": prime_budget,
            });
            Ok(Report { code: EXIT_OK, text, json })
        }
        None => {
            let text = format!("d_K = {d}, h = {h}\nnone found (prime budget {prime_budget})\n");
            let json = json!({
                "command": "find-trivial",
                "disc": jnum(&d),
                "class_number": jnum(&h),
                "found": false,
                "conductor": Value::Null,
                "prime_budget": prime_budget,
            });
            Ok(Report { code: EXIT_NEGATIVE, text, json })
        }
    }
}

fn cmd_conductor_test(source: &Source, ideal: &str) -> Result<Report, Failure> {
    let l = load(source)?;
    let field = quadratic_only(&l, "conductor-test")?;
    let exps = Divisor::parse(Level::Maximal, ideal)?;
    let violator = conductor_violator(&field, &exps)?;
    let (line, f) = match &violator {
        Some(v) => (format!("conductor ideal: no (violator: {v})"), None),
        None => {
            let f = order_from_ideal(field.clone(), &exps)?.conductor();
            (format!("conductor ideal: yes (of Z + {}O_K)", f.unwrap_or(1)), f)
        }
    };
    let text = format!("ideal: {exps}\n{line}\n");
    let json = json!({
        "command": "conductor-test",
        "disc": jnum(field.disc()),
        "ideal": exps.to_string(),
        "conductor_ideal": violator.is_none(),
        "violator": violator.as_ref().map(|v| v.to_string()),
        "order_conductor": f,
    });
    Ok(Report { code: if violator.is_none() { EXIT_OK } else { EXIT_NEGATIVE }, text, json })
}
