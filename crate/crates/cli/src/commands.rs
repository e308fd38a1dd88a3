use std::fmt::Write as _;
use std::path::Path;

use operadica::complexes::check_named;
use operadica::freeoperad::{quotient_dims_with, Budget, DimTable};
use operadica::koszul::{dims_series, quadratic_dual};
use operadica::models::{check_by_id, Interpretation, MODEL_IDS};
use operadica::presentation::{parse_with_params, render, Mode, Presentation};
use operadica::registry::{CheckKind, DimKind, Property, Registry, RegistryEntry, RegistryError, VerifyOptions};
use operadica::series::{catalog, koszul_series_compare, KoszulSeriesOutcome, PowerSeries, SeriesId, SeriesKind};
use operadica::Rational;
use serde_json::{json, Value};

use crate::{Cli, Command, ComplexAction, KindArg, ModeArg, ModelsAction, SourceArgs};

pub struct Doc {
    pub text: String,
    pub json: Value,
    pub code: u8,
}

impl Doc {
    fn ok(text: String, json: Value) -> Doc {
        Doc { text, json, code: 0 }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

fn usage(message: impl Into<String>) -> CliError {
    CliError { code: 2, message: message.into() }
}

impl From<RegistryError> for CliError {
    fn from(e: RegistryError) -> Self {
        usage(e.to_string())
    }
}

/// The invocation, for the json envelope.
pub fn echo() -> String {
    std::env::args().skip(1).collect::<Vec<_>>().join(" ")
}

pub fn run(cli: &Cli) -> Result<Doc, CliError> {
    let reg = Registry::load()?;
    match &cli.command {
        Command::Dims { src, max_arity, max_basis, mode } => dims(&reg, src, *max_arity, *max_basis, *mode),
        Command::Dual { src } => dual(&reg, src),
        Command::KoszulCheck { p, q, order } => koszul_check(&reg, p, q.as_deref(), *order),
        Command::Verify { name, all, ns_max, sym_max, series_order, checks } => {
            verify(&reg, name.as_deref(), *all, *ns_max, *sym_max, *series_order, checks)
        }
        Command::Models { action: ModelsAction::Check { id, size, operad } } => models_check(&reg, id, *size, operad.as_deref()),
        Command::Models { action: ModelsAction::List } => {
            let text = MODEL_IDS.iter().map(|m| format!("{m}\n")).collect();
            Ok(Doc::ok(text, json!(MODEL_IDS)))
        }
        Command::Complex { action: ComplexAction::Check { kind, size } } => complex_check(kind, *size),
        Command::List { property } => list(&reg, property.as_deref()),
        Command::Show { name } => show(&reg, name),
        Command::Series { expr, order, kind } => series(&reg, expr, *order, *kind),
    }
}

/// A file path, else a registry name.
fn load<'r>(reg: &'r Registry, src: &SourceArgs) -> Result<(Presentation, Option<&'r RegistryEntry>), CliError> {
    let mut params = Vec::new();
    for p in &src.params {
        let (k, v) = p.split_once('=').ok_or_else(|| usage(format!("expected NAME=VALUE, found `{p}`")))?;
        let v: Rational = v.trim().parse().map_err(|_| usage(format!("`{v}` is not a rational number")))?;
        params.push((k.trim().to_string(), v));
    }
    let params: Vec<(&str, Rational)> = params.iter().map(|(k, v)| (k.as_str(), v.clone())).collect();
    let path = Path::new(&src.source);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let p = parse_with_params(&text, &params).map_err(|e| usage(format!("{}:{e}", path.display())))?;
        return Ok((p, None));
    }
    let e = reg.get(&src.source).map_err(|_| usage(format!("`{}` is neither a file nor a registry entry", src.source)))?;
    let p = if params.is_empty() {
        e.presentation.clone()
    } else {
        parse_with_params(&e.source, &params).map_err(|err| usage(format!("{}: {err}", e.name)))?
    };
    Ok((p, Some(e)))
}

fn mode_str(m: Mode) -> &'static str {
    match m {
        Mode::Ns => "ns",
        Mode::Symmetric => "symmetric",
    }
}

fn table_json(t: &DimTable) -> Value {
    json!({
        "name": t.name,
        "mode": mode_str(t.mode),
        "arity": t.rows.iter().map(|r| r.arity).collect::<Vec<_>>(),
        "freeDim": t.rows.iter().map(|r| r.free_dim).collect::<Vec<_>>(),
        "quotientDim": t.rows.iter().map(|r| r.quotient_dim).collect::<Vec<_>>(),
        "truncated": t.truncated.as_ref().map(|x| json!({ "arity": x.arity, "basisSize": x.basis_size, "limit": x.limit })),
    })
}

fn dims(reg: &Registry, src: &SourceArgs, max_arity: Option<usize>, max_basis: Option<usize>, mode: Option<ModeArg>) -> Result<Doc, CliError> {
    let (mut p, entry) = load(reg, src)?;
    if let Some(m) = mode {
        p.mode = match m {
            ModeArg::Ns => Mode::Ns,
            ModeArg::Symmetric => Mode::Symmetric,
        };
    }
    let mut budget = Budget::default_for(&p);
    if let Some(a) = max_arity {
        budget.max_arity = a;
    }
    if let Some(b) = max_basis {
        budget.max_basis = b;
    }
    let mut notes = Vec::new();
    if let Some(cap) = entry.and_then(|e| e.max_arity) {
        if budget.max_arity > cap {
            notes.push(format!("the presentation lists generators up to arity {cap}; stopping there"));
            budget.max_arity = cap;
        }
    }
    let t = quotient_dims_with(&p, budget).map_err(|e| usage(e.to_string()))?;
    let mut text = format!("{} ({}), arities 1..{}\n", t.name, mode_str(t.mode), budget.max_arity);
    let _ = writeln!(text, "{:>4} {:>14} {:>14}", "n", "free", "quotient");
    for r in &t.rows {
        let _ = writeln!(text, "{:>4} {:>14} {:>14}", r.arity, r.free_dim, r.quotient_dim);
    }
    for n in &notes {
        let _ = writeln!(text, "note: {n}");
    }
    let mut code = 0;
    if let Some(x) = &t.truncated {
        let _ = writeln!(text, "truncated: arity {} needs {} monomials, budget {}", x.arity, x.basis_size, x.limit);
        code = 3;
    }
    let mut j = table_json(&t);
    j["notes"] = json!(notes);
    Ok(Doc { text, json: j, code })
}

fn dual(reg: &Registry, src: &SourceArgs) -> Result<Doc, CliError> {
    let (p, _) = load(reg, src)?;
    let d = quadratic_dual(&p).map_err(|e| usage(e.to_string()))?;
    let text = render(&d);
    Ok(Doc::ok(text.clone(), json!({ "name": d.name, "presentation": text })))
}

/// The series of a registry entry (closed form) or of engine dims.
fn series_of(reg: &Registry, name: &str, order: usize) -> Result<(PowerSeries, String, Option<String>), CliError> {
    if let Ok(e) = reg.get(name) {
        if let Some(id) = e.working_series() {
            let s = id.expand(order).map_err(|err| usage(err.to_string()))?;
            return Ok((s, format!("closed form of {}", e.name), e.dual.clone()));
        }
    }
    let (p, entry) = load(reg, &SourceArgs { source: name.to_string(), params: Vec::new() })?;
    let (s, how) = engine_series(&p, order)?;
    Ok((s, how, entry.and_then(|e| e.dual.clone())))
}

fn engine_series(p: &Presentation, order: usize) -> Result<(PowerSeries, String), CliError> {
    let mut budget = Budget::default_for(p);
    budget.max_arity = budget.max_arity.min(order);
    let t = quotient_dims_with(p, budget).map_err(|e| usage(e.to_string()))?;
    let top = t.rows.last().map_or(1, |r| r.arity);
    Ok((dims_series(p, &t.dims_by_arity(), top), format!("engine dims of {} to arity {top}", p.name)))
}

fn koszul_check(reg: &Registry, p: &str, q: Option<&str>, order: usize) -> Result<Doc, CliError> {
    let (fp, how_p, dual_name) = series_of(reg, p, order)?;
    let (fq, how_q) = match q.map(str::to_string).or(dual_name) {
        Some(q) => {
            let (s, how, _) = series_of(reg, &q, order)?;
            (s, how)
        }
        None => {
            let (pres, _) = load(reg, &SourceArgs { source: p.to_string(), params: Vec::new() })?;
            let d = quadratic_dual(&pres).map_err(|e| usage(e.to_string()))?;
            engine_series(&d, order)?
        }
    };
    // an ns series doubles as the exponential series of the symmetrized operad
    let (fp, fq) = if fp.kind() != fq.kind() {
        (fp.with_kind(SeriesKind::Exponential), fq.with_kind(SeriesKind::Exponential))
    } else {
        (fp, fq)
    };
    let res = koszul_series_compare(&fp, &fq).map_err(|e| usage(e.to_string()))?;
    let mut text = format!("P: {how_p}\nQ: {how_q}\n");
    let (code, j) = match &res {
        KoszulSeriesOutcome::Holds { order } => {
            let _ = writeln!(text, "pass: f_Q(-f_P(-t)) = t to order {order}");
            (0, json!({ "holds": true, "order": order }))
        }
        KoszulSeriesOutcome::Differs { degree, expected, found } => {
            let _ = writeln!(text, "fail: coefficient of t^{degree} is {found}, expected {expected}");
            (1, json!({ "holds": false, "degree": degree, "expected": expected.to_string(), "found": found.to_string() }))
        }
    };
    Ok(Doc { text, json: json!({ "p": how_p, "q": how_q, "outcome": j }), code })
}

fn verify(
    reg: &Registry,
    name: Option<&str>,
    all: bool,
    ns_max: usize,
    sym_max: usize,
    series_order: usize,
    checks: &[String],
) -> Result<Doc, CliError> {
    let mut opts = VerifyOptions { ns_max, sym_max, series_order, ..Default::default() };
    if !checks.is_empty() {
        opts.checks.clear();
        for c in checks {
            let k = CheckKind::parse(c).filter(|k| CheckKind::RUNNABLE.contains(k)).ok_or_else(|| usage(format!("unknown check `{c}`")))?;
            opts.checks.insert(k);
        }
    }
    let (text, json, failures) = match (name, all) {
        (Some(n), false) => {
            let rep = reg.verify(n, &opts)?;
            (rep.to_string(), serde_json::to_value(&rep).expect("json"), rep.hard_failures())
        }
        (None, true) => {
            let rep = reg.verify_all(&opts);
            (rep.to_string(), serde_json::to_value(&rep).expect("json"), rep.hard_failures())
        }
        _ => return Err(usage("give an entry name or --all")),
    };
    Ok(Doc { text, json, code: if failures > 0 { 1 } else { 0 } })
}

fn model_id(id: &str) -> Option<&'static str> {
    let id = id.to_ascii_lowercase();
    let full = match id.as_str() {
        "as" | "tensor" => "concat",
        "zinb" => "zinbiel",
        "dend" => "dendriform",
        "dup" => "duplicial",
        "dias" => "diassociative",
        "pre-lie" => "prelie",
        other => other,
    };
    MODEL_IDS.iter().copied().find(|m| *m == full)
}

fn models_check(reg: &Registry, id: &str, size: usize, operad: Option<&str>) -> Result<Doc, CliError> {
    let m = model_id(id).ok_or_else(|| usage(format!("unknown model `{id}` (known: {})", MODEL_IDS.join(", "))))?;
    let p = match operad {
        Some(o) => load(reg, &SourceArgs { source: o.to_string(), params: Vec::new() })?.0,
        None => reg
            .entries()
            .iter()
            .find(|e| e.model.as_ref().is_some_and(|(mid, _)| mid == m))
            .map(|e| e.presentation.clone())
            .ok_or_else(|| usage(format!("no registry entry uses the {m} model; pass --operad")))?,
    };
    let rep = check_by_id(m, &p, size, &Interpretation::native()).map_err(|e| usage(e.to_string()))?;
    let code = if rep.passed() { 0 } else { 1 };
    Ok(Doc { text: format!("{rep}\n"), json: serde_json::to_value(&rep).expect("json"), code })
}

fn complex_check(kind: &str, size: usize) -> Result<Doc, CliError> {
    let reps = check_named(kind, size).map_err(|e| usage(e.to_string()))?;
    let text = reps.iter().map(|r| format!("{r}\n")).collect();
    let code = if reps.iter().all(|r| r.passed()) { 0 } else { 1 };
    Ok(Doc { text, json: serde_json::to_value(&reps).expect("json"), code })
}

fn list(reg: &Registry, property: Option<&str>) -> Result<Doc, CliError> {
    let filter = match property {
        Some(s) => Some(Property::parse(s).ok_or_else(|| usage(format!("unknown property `{s}`")))?),
        None => None,
    };
    let entries: Vec<&RegistryEntry> = reg.entries().iter().filter(|e| filter.is_none_or(|p| e.properties.contains(&p))).collect();
    let width = entries.iter().map(|e| e.name.chars().count()).max().unwrap_or(0);
    let mut text = String::new();
    for e in &entries {
        let props: Vec<&str> = e.properties.iter().map(|p| p.as_str()).collect();
        let pad = width - e.name.chars().count();
        let _ = writeln!(text, "{}{}  {}  [{}]", e.name, " ".repeat(pad), e.title, props.join(", "));
    }
    let j: Vec<Value> = entries
        .iter()
        .map(|e| json!({ "name": e.name, "title": e.title, "properties": e.properties, "dual": e.dual }))
        .collect();
    Ok(Doc::ok(text, json!(j)))
}

fn show(reg: &Registry, name: &str) -> Result<Doc, CliError> {
    let e = reg.get(name)?;
    let mut text = format!("{} - {}\n", e.name, e.title);
    let props: Vec<&str> = e.properties.iter().map(|p| p.as_str()).collect();
    let _ = writeln!(text, "properties: {}", props.join(", "));
    if let Some(d) = &e.printed_dims {
        let vals: Vec<String> = e.printed_dims_by_arity().iter().map(|(a, v)| format!("{a}:{}", v.map_or("?".into(), |v| v.to_string()))).collect();
        let kind = match d.kind {
            DimKind::Ns => "ns",
            DimKind::Symmetric => "symmetric",
        };
        let _ = writeln!(text, "table ({kind}): {}", vals.join(" "));
    }
    if let Some(d) = &e.derived_dims {
        let vals: Vec<String> = d.iter().map(u64::to_string).collect();
        let _ = writeln!(text, "derived dims: {}", vals.join(", "));
    }
    for (k, v) in [("series", &e.series), ("corrected series", &e.series_fixed), ("sequence", &e.sequence), ("dual", &e.dual)] {
        if let Some(v) = v {
            let _ = writeln!(text, "{k}: {v}");
        }
    }
    if let Some((id, size)) = &e.model {
        let _ = writeln!(text, "model: {id} (size {size})");
    }
    if e.derived {
        let _ = writeln!(text, "presentation computed, not transcribed");
    }
    for c in &e.conflicts {
        let _ = writeln!(text, "conflict: {c}");
    }
    for n in &e.notes {
        let _ = writeln!(text, "note: {n}");
    }
    text.push('\n');
    text.push_str(&e.source);
    if !text.ends_with('\n') {
        text.push('\n');
    }
    Ok(Doc::ok(text, serde_json::to_value(e).expect("json")))
}

fn series(reg: &Registry, expr: &str, order: usize, kind: KindArg) -> Result<Doc, CliError> {
    let kind = match kind {
        KindArg::Ordinary => SeriesKind::Ordinary,
        KindArg::Exponential => SeriesKind::Exponential,
    };
    let (id, label) = if let Some((n, src, k)) = catalog().iter().find(|(n, _, _)| *n == expr) {
        (SeriesId::parse(src, *k).map_err(|e| usage(e.to_string()))?, format!("{n} = {src}"))
    } else if let Some(id) = reg.get(expr).ok().and_then(|e| e.working_series()) {
        (id, format!("series of {expr}"))
    } else {
        (SeriesId::parse(expr, kind).map_err(|e| usage(e.to_string()))?, expr.to_string())
    };
    let s = id.expand(order).map_err(|e| usage(e.to_string()))?;
    let coeffs: Vec<String> = s.coefficients().iter().map(|c| c.to_string()).collect();
    let dims: Vec<String> = s.dims().iter().map(|c| c.to_string()).collect();
    let text = format!("{label} ({})\ncoefficients: {}\ndims: {}\n", s.kind().as_str(), coeffs.join(", "), dims.join(", "));
    Ok(Doc::ok(text, json!({ "series": label, "kind": s.kind().as_str(), "coefficients": coeffs, "dims": dims })))
}
