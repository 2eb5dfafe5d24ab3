//! Report assembly for each subcommand.

use ribbon_koszul::compositions::{Composition, PartitionedComposition};
use ribbon_koszul::homology::{certify_koszul, ext_dims, tor_dims, KoszulMethod, KoszulTarget, TorTable};
use ribbon_koszul::multischur::{filtration_ledger, multischur, multischur_with, MultiContext, MultiPath};
use ribbon_koszul::schur::{schur, verify_duality, verify_ses};
use ribbon_koszul::symfunc::{self, Alphabets};
use ribbon_koszul::{EngineError, Field, Result};
use serde_json::{json, Value};

use crate::cache::{self, Cache, Record, StoredBases};
use crate::inputs::{self, Loaded};
use crate::{Command, Global};

fn status(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

fn composition(s: &str, flag: &str) -> Result<Composition> {
    s.parse().map_err(|e| EngineError::Parse(format!("--{flag}: {e}")))
}

fn partitioned_list(s: &str) -> Result<Vec<PartitionedComposition>> {
    s.split(';')
        .map(|p| p.parse().map_err(|e| EngineError::Parse(format!("--compositions entry {p:?}: {e}"))))
        .collect()
}

/// Single-alphabet character of a weighted module as a string.
fn character<F: Field>(weights: &[(Vec<i64>, usize)], vars: usize, degree: usize) -> Result<String> {
    let alphabets = Alphabets::uniform(1, vars, degree);
    Ok(symfunc::character_from_weights::<F>(&alphabets, weights)?.to_string())
}

/// Loaded inputs, before any computation.
enum Prepared<F: Field> {
    Single(Loaded<F>, ribbon_koszul::quadratic::Variant),
    Multi(Vec<Loaded<F>>, ribbon_koszul::quadratic::Variant),
    Nothing,
}

impl<F: Field> Prepared<F> {
    fn presentations(&self) -> Vec<&str> {
        match self {
            Prepared::Single(l, _) => l.presentations.iter().map(String::as_str).collect(),
            Prepared::Multi(ls, _) => ls.iter().flat_map(|l| l.presentations.iter().map(String::as_str)).collect(),
            Prepared::Nothing => Vec::new(),
        }
    }
}

fn prepare<F: Field>(global: &Global, command: &Command) -> Result<Prepared<F>> {
    let bound = global.degree_bound;
    Ok(match command {
        Command::Schur { ctx, .. } | Command::Ses { ctx, .. } | Command::Dual { ctx, .. } => {
            let (l, v) = inputs::context(ctx, bound, false)?;
            Prepared::Single(l, v)
        }
        Command::KoszulCheck { ctx, .. } | Command::Ext { ctx, .. } => {
            let (l, v) = inputs::context(ctx, bound, false)?;
            Prepared::Single(l, v)
        }
        Command::Tor { ctx, .. } => {
            let (l, v) = inputs::context(ctx, bound, true)?;
            Prepared::Single(l, v)
        }
        Command::Multischur { multi, .. } | Command::Filtration { multi, .. } => {
            let (ls, v) = inputs::factors(multi, bound)?;
            Prepared::Multi(ls, v)
        }
        Command::Symfunc { .. } => Prepared::Nothing,
    })
}

/// Reports that carry a realized module store its bases alongside.
fn stores_bases(command: &Command) -> bool {
    matches!(command, Command::Schur { .. } | Command::Multischur { .. })
}

fn valid_hit(command: &Command, record: &Record, report: &Value) -> bool {
    if !stores_bases(command) {
        return true;
    }
    match (&record.bases, report.get("dim").and_then(Value::as_u64)) {
        (Some(b), Some(d)) => b.dim() as u64 == d,
        _ => false,
    }
}

/// Runs one command, consulting and filling the cache when one is configured.
pub fn run<F: Field>(global: &Global, command: &Command, cache: Option<&Cache>) -> Result<Value> {
    let prepared = prepare::<F>(global, command)?;
    let descriptor = json!({
        "command": to_value(command),
        "field": F::kind().to_string(),
        "degree_bound": global.degree_bound,
        "presentations": prepared.presentations(),
    });
    let key = cache::key(&descriptor.to_string());
    if let Some(c) = cache {
        if let Some(record) = c.load(&key) {
            if let Ok(report) = serde_json::from_slice::<Value>(&record.report) {
                if valid_hit(command, &record, &report) {
                    eprintln!("cache hit {key}");
                    return Ok(report);
                }
            }
            eprintln!("cache record {key} failed validation, recomputing");
        }
    }
    let (report, bases) = compute(command, &prepared)?;
    if let Some(c) = cache {
        let record = Record { report: serde_json::to_vec(&report).expect("report serializes"), bases };
        if let Err(e) = c.store(&key, &record) {
            eprintln!("warning: cache write to {} failed: {e}", c.dir().display());
        }
    }
    Ok(report)
}

fn single<F: Field>(p: &Prepared<F>) -> (&Loaded<F>, ribbon_koszul::quadratic::Variant) {
    match p {
        Prepared::Single(l, v) => (l, *v),
        _ => unreachable!("single-context command"),
    }
}

fn multi<F: Field>(p: &Prepared<F>) -> Result<MultiContext<F>> {
    match p {
        Prepared::Multi(ls, v) => MultiContext::new(ls.iter().map(|l| l.ctx.clone()).collect(), *v),
        _ => unreachable!("multi-context command"),
    }
}

fn compute<F: Field>(command: &Command, prepared: &Prepared<F>) -> Result<(Value, Option<StoredBases>)> {
    let field = F::kind().to_string();
    match command {
        Command::Schur { composition: c, character: ch, .. } => {
            let (l, variant) = single(prepared);
            let alpha = composition(c, "composition")?;
            let module = schur(&l.ctx, variant, &alpha)?;
            let mut report = json!({
                "command": "schur",
                "algebra": l.ctx.algebra().name(),
                "field": field,
                "variant": variant.to_string(),
                "composition": alpha.to_string(),
                "dim": module.dim(),
                "status": "ok",
            });
            if module.is_weighted() {
                let w = module.weight_dims();
                report["weight_dims"] = to_value(&w);
                if *ch {
                    let degree = l.ctx.internal_degree(variant, alpha.weight());
                    report["character"] = json!(character::<F>(&w, l.ctx.algebra().generators().len(), degree)?);
                }
            } else if *ch {
                return Err(EngineError::Config("the algebra carries no weights".into()));
            }
            Ok((report, Some(StoredBases::of(&module.realization))))
        }
        Command::Ses { alpha, beta, .. } => {
            let (l, variant) = single(prepared);
            let r = verify_ses(&l.ctx, variant, &composition(alpha, "alpha")?, &composition(beta, "beta")?)?;
            let mut report = to_value(&r);
            report["command"] = json!("ses");
            report["field"] = json!(field);
            report["status"] = json!(status(r.exact));
            Ok((report, None))
        }
        Command::Dual { composition: c, .. } => {
            let (l, variant) = single(prepared);
            let r = verify_duality(&l.ctx, variant, &composition(c, "composition")?)?;
            let mut report = to_value(&r);
            report["command"] = json!("dual");
            report["field"] = json!(field);
            report["status"] = json!(status(r.equal));
            Ok((report, None))
        }
        Command::KoszulCheck { max_degree, method, module, .. } => {
            let (l, _) = single(prepared);
            let method: KoszulMethod = method.parse()?;
            let target = if *module { KoszulTarget::Module } else { KoszulTarget::Algebra };
            let cert = certify_koszul(&l.ctx, target, *max_degree, method)?;
            let mut report = to_value(&cert);
            report["command"] = json!("koszul-check");
            report["field"] = json!(field);
            report["status"] = json!(status(cert.verdict.is_pass()));
            Ok((report, None))
        }
        Command::Tor { max_i, uncertified, .. } => {
            let (l, _) = single(prepared);
            let table = tor_dims(&l.ctx, *max_i, !uncertified)?;
            Ok((table_report("tor", &field, &table), None))
        }
        Command::Ext { max_i, uncertified, .. } => {
            let (l, _) = single(prepared);
            let table = ext_dims(&l.ctx, *max_i, !uncertified)?;
            Ok((table_report("ext", &field, &table), None))
        }
        Command::Multischur { compositions, path, character: ch, .. } => {
            let mctx = multi(prepared)?;
            let alphas = partitioned_list(compositions)?;
            let module = match path.as_deref() {
                None => multischur(&mctx, &alphas)?,
                Some("lattice") => multischur_with(&mctx, &alphas, MultiPath::Lattice)?,
                Some("kernel") => multischur_with(&mctx, &alphas, MultiPath::Kernel)?,
                Some(other) => return Err(EngineError::Argument(format!("--path must be lattice or kernel, got {other:?}"))),
            };
            let mut report = json!({
                "command": "multischur",
                "factors": mctx.factors().iter().map(|c| c.algebra().name().to_string()).collect::<Vec<_>>(),
                "field": field,
                "variant": mctx.variant().to_string(),
                "compositions": alphas.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
                "path": to_value(&module.path),
                "dim": module.dim(),
                "status": "ok",
            });
            if *ch {
                let alphabets = multi_alphabets(&mctx, &alphas);
                report["character"] = json!(symfunc::multischur_character::<F>(&module, &alphabets)?.to_string());
            }
            Ok((report, Some(StoredBases::of(&module.realization))))
        }
        Command::Filtration { compositions, .. } => {
            let mctx = multi(prepared)?;
            let ledger = filtration_ledger(&mctx, &partitioned_list(compositions)?)?;
            let mut report = to_value(&ledger);
            report["command"] = json!("filtration");
            report["field"] = json!(field);
            let ok = ledger.balanced && ledger.weights_balanced.unwrap_or(true);
            report["status"] = json!(status(ok));
            Ok((report, None))
        }
        Command::Symfunc { character: kind, composition: c, alpha, d, vars } => {
            Ok((symfunc_report::<F>(kind, c.as_deref(), alpha.as_deref(), *d, *vars)?, None))
        }
    }
}

fn multi_alphabets<F: Field>(mctx: &MultiContext<F>, alphas: &[PartitionedComposition]) -> Alphabets {
    let sizes = mctx.factors().iter().map(|c| c.algebra().generators().len()).collect();
    let caps = mctx
        .factors()
        .iter()
        .zip(alphas)
        .map(|(c, a)| c.internal_degree(mctx.variant(), a.weight()))
        .collect();
    Alphabets { sizes, caps }
}

fn table_report(command: &str, field: &str, table: &TorTable) -> Value {
    let mut report = to_value(table);
    report["command"] = json!(command);
    report["field"] = json!(field);
    report["status"] = json!(if table.uncertified { "ok" } else { status(table.consistent) });
    report
}

fn need<'a>(x: Option<&'a str>, flag: &str) -> Result<&'a str> {
    x.ok_or_else(|| EngineError::Argument(format!("--{flag} is required")))
}

fn symfunc_report<F: Field>(kind: &str, c: Option<&str>, alpha: Option<&str>, d: usize, vars: usize) -> Result<Value> {
    let field = F::kind().to_string();
    match kind {
        "h" | "e" => {
            let deg: usize = need(c, "composition")?
                .trim()
                .parse()
                .map_err(|_| EngineError::Parse("--composition must be a degree for h and e".into()))?;
            let a = Alphabets::uniform(1, vars, deg);
            let p = if kind == "h" { symfunc::h::<F>(&a, 0, deg)? } else { symfunc::e::<F>(&a, 0, deg)? };
            Ok(json!({"command": "symfunc", "character": kind, "field": field, "degree": deg, "polynomial": p.to_string(), "status": "ok"}))
        }
        "ribbon" | "ribbon-ssyt" => {
            let alpha = composition(need(c, "composition")?, "composition")?;
            let a = Alphabets::uniform(1, vars, alpha.weight());
            let by_coarsening = symfunc::ribbon::<F>(&a, 0, &alpha)?;
            let by_tableaux = symfunc::ribbon_ssyt::<F>(&a, 0, &alpha)?;
            let shown = if kind == "ribbon" { &by_coarsening } else { &by_tableaux };
            Ok(json!({
                "command": "symfunc",
                "character": kind,
                "field": field,
                "composition": alpha.to_string(),
                "polynomial": shown.to_string(),
                "status": status(by_coarsening == by_tableaux),
            }))
        }
        "hg" => {
            let pc: PartitionedComposition = need(c, "composition")?
                .parse()
                .map_err(|e| EngineError::Parse(format!("--composition: {e}")))?;
            let a = Alphabets::uniform(1, vars, pc.weight());
            let r = symfunc::verify_hg_identity::<F>(&pc, &a)?;
            let mut report = to_value(&r);
            report["command"] = json!("symfunc");
            report["character"] = json!("hg");
            report["field"] = json!(field);
            report["status"] = json!(status(r.holds));
            Ok(report)
        }
        "segre" => {
            let parts = composition(need(alpha, "alpha")?, "alpha")?.parts().to_vec();
            let caps = parts.iter().map(|p| p + d).collect();
            let a = Alphabets::new(vec![vars; parts.len()], caps)?;
            let r = symfunc::verify_segre_identity::<F>(d, &parts, &a)?;
            let mut report = to_value(&r);
            report["command"] = json!("symfunc");
            report["character"] = json!("segre");
            report["field"] = json!(field);
            report["status"] = json!(status(r.corrected_holds));
            Ok(report)
        }
        other => Err(EngineError::Argument(format!(
            "unknown --character {other:?}; expected h, e, ribbon, ribbon-ssyt, hg or segre"
        ))),
    }
}

/// Aligned text rendering of a Tor or Ext table: one row per `i`, one column per `j`.
pub fn render_table(report: &Value) -> String {
    let entries = report["entries"].as_array().cloned().unwrap_or_default();
    let get = |e: &Value, k: &str| e[k].as_u64().unwrap_or(0);
    let mut is: Vec<u64> = entries.iter().map(|e| get(e, "i")).collect();
    let mut js: Vec<u64> = entries.iter().map(|e| get(e, "j")).collect();
    is.sort_unstable();
    is.dedup();
    js.sort_unstable();
    js.dedup();
    let cell = |i: u64, j: u64| -> String {
        let Some(e) = entries.iter().find(|e| get(e, "i") == i && get(e, "j") == j) else {
            return ".".into();
        };
        let bar = e["bar_strand"].as_u64();
        let closed = e["closed_form"].as_u64();
        match (bar, closed) {
            (Some(b), Some(c)) if b == c => format!("{b}*"),
            (Some(b), Some(c)) => format!("{b}!{c}"),
            (Some(b), None) => b.to_string(),
            (None, Some(c)) => format!("{c}c"),
            (None, None) => "?".into(),
        }
    };
    let mut rows: Vec<Vec<String>> = vec![std::iter::once("i\\j".to_string()).chain(js.iter().map(u64::to_string)).collect()];
    for &i in &is {
        rows.push(std::iter::once(i.to_string()).chain(js.iter().map(|&j| cell(i, j))).collect());
    }
    let width = rows.iter().flatten().map(String::len).max().unwrap_or(1);
    let mut out = format!("{} over {}: status {}\n", report["command"].as_str().unwrap_or(""), report["field"].as_str().unwrap_or(""), report["status"].as_str().unwrap_or(""));
    for r in rows {
        let line: Vec<String> = r.iter().map(|c| format!("{c:>width$}")).collect();
        out.push_str(line.join(" ").trim_end());
        out.push('\n');
    }
    out.push_str("* bar strand and closed form agree; c closed form only; ! disagreement\n");
    out
}
