//! Turning command-line arguments into algebras and their contexts.

use std::path::Path;

use ribbon_koszul::quadratic::{GradedContext, PresentationFile, QuadraticAlgebra, QuadraticModule, Side, Variant};
use ribbon_koszul::{EngineError, Field, Result};

use crate::{ContextArgs, MultiArgs};

/// A context together with the canonical serializations that identify it.
pub struct Loaded<F: Field> {
    pub ctx: GradedContext<F>,
    pub presentations: Vec<String>,
}

fn read_presentation(path: &str) -> Result<PresentationFile> {
    let text = std::fs::read_to_string(Path::new(path))
        .map_err(|e| EngineError::Config(format!("cannot read presentation {path:?}: {e}")))?;
    PresentationFile::parse(&text).map_err(|e| EngineError::Parse(format!("{path}: {e}")))
}

pub fn algebra<F: Field>(input: &str, dim: usize) -> Result<QuadraticAlgebra<F>> {
    let builtin = |m: usize| -> Result<usize> {
        if m == 0 {
            return Err(EngineError::Argument("--dim must be positive".into()));
        }
        Ok(m)
    };
    match input.trim() {
        "builtin:sym" => Ok(QuadraticAlgebra::symmetric(builtin(dim)?)),
        "builtin:ext" => Ok(QuadraticAlgebra::exterior(builtin(dim)?)),
        "builtin:tensor" => Ok(QuadraticAlgebra::tensor(builtin(dim)?)),
        other if other.starts_with("builtin:") => Err(EngineError::Argument(format!(
            "unknown built-in {other:?}; expected builtin:sym, builtin:ext or builtin:tensor"
        ))),
        path => read_presentation(path)?.algebra(),
    }
}

pub fn module<F: Field>(input: &str, alg: &QuadraticAlgebra<F>, side: Side) -> Result<QuadraticModule<F>> {
    let input = input.trim();
    let number = |s: &str, what: &str| {
        s.parse::<usize>().map_err(|_| EngineError::Parse(format!("bad {what} in module input {input:?}")))
    };
    if input == "trivial" {
        return Ok(QuadraticModule::trivial(alg, side, 0));
    }
    if let Some(t) = input.strip_prefix("trivial:") {
        return Ok(QuadraticModule::trivial(alg, side, number(t, "degree")?));
    }
    if input == "free" {
        return Ok(QuadraticModule::free(alg, side));
    }
    if let Some(r) = input.strip_prefix("trunc:") {
        return QuadraticModule::truncation(alg, side, number(r, "truncation degree")?);
    }
    let file = read_presentation(input)?;
    if !file.has_module() {
        return Err(EngineError::Parse(format!("{input}: no module section")));
    }
    let m = file.module::<F>().map_err(|e| EngineError::Parse(format!("{input}: {e}")))?;
    if m.side() != side {
        return Err(EngineError::Argument(format!("{input}: module is on the wrong side for this flag")));
    }
    Ok(m)
}

/// The variant determined by which modules are attached.
pub fn variant_of(right: bool, left: bool) -> Variant {
    match (right, left) {
        (false, false) => Variant::Algebra,
        (false, true) => Variant::LeftModule,
        (true, false) => Variant::RightModule,
        (true, true) => Variant::Double,
    }
}

fn build<F: Field>(
    alg: QuadraticAlgebra<F>,
    right: Option<&str>,
    left: Option<&str>,
    bound: usize,
) -> Result<Loaded<F>> {
    let mut presentations = vec![PresentationFile::from_algebra(&alg).canonical_json()];
    let mut ctx = GradedContext::new(alg.clone()).with_degree_bound(bound)?;
    if let Some(input) = right {
        let m = module(input, &alg, Side::Right)?;
        presentations.push(PresentationFile::from_algebra(&alg).with_module(&m).canonical_json());
        ctx = ctx.with_right(m)?;
    }
    if let Some(input) = left {
        let m = module(input, &alg, Side::Left)?;
        presentations.push(PresentationFile::from_algebra(&alg).with_module(&m).canonical_json());
        ctx = ctx.with_left(m)?;
    }
    Ok(Loaded { ctx, presentations })
}

/// The single context of a command. With `trivial_ends`, missing modules
/// default to the residue field.
pub fn context<F: Field>(args: &ContextArgs, bound: usize, trivial_ends: bool) -> Result<(Loaded<F>, Variant)> {
    let alg = algebra::<F>(&args.algebra, args.dim)?;
    let fill = |m: &Option<String>| m.clone().or_else(|| trivial_ends.then(|| "trivial".to_string()));
    let (right, left) = (fill(&args.right_module), fill(&args.left_module));
    let variant = variant_of(right.is_some(), left.is_some());
    Ok((build(alg, right.as_deref(), left.as_deref(), bound)?, variant))
}

fn split(list: &str) -> Vec<String> {
    list.split(',').map(|s| s.trim().to_string()).collect()
}

fn per_factor(list: &Option<String>, n: usize, what: &str) -> Result<Vec<Option<String>>> {
    match list {
        None => Ok(vec![None; n]),
        Some(l) => {
            let items = split(l);
            if items.len() != n {
                return Err(EngineError::Argument(format!("--{what} lists {} entries for {n} factors", items.len())));
            }
            Ok(items.into_iter().map(|s| (!s.is_empty() && s != "-").then_some(s)).collect())
        }
    }
}

/// The factor contexts of a multi-Schur command and their common variant.
pub fn factors<F: Field>(args: &MultiArgs, bound: usize) -> Result<(Vec<Loaded<F>>, Variant)> {
    let algebras = split(&args.algebras);
    let n = algebras.len();
    let dims = split(&args.dims)
        .iter()
        .map(|d| d.parse::<usize>().map_err(|_| EngineError::Parse(format!("bad entry {d:?} in --dims"))))
        .collect::<Result<Vec<_>>>()?;
    let dims = match dims.len() {
        1 => vec![dims[0]; n],
        k if k == n => dims,
        k => return Err(EngineError::Argument(format!("--dims lists {k} entries for {n} factors"))),
    };
    let rights = per_factor(&args.right_modules, n, "right-modules")?;
    let lefts = per_factor(&args.left_modules, n, "left-modules")?;
    let variant = variant_of(rights[0].is_some(), lefts[0].is_some());
    if rights.iter().zip(&lefts).any(|(r, l)| variant_of(r.is_some(), l.is_some()) != variant) {
        return Err(EngineError::Argument("every factor needs the same kind of end modules".into()));
    }
    let loaded = algebras
        .iter()
        .zip(dims)
        .zip(rights.iter().zip(&lefts))
        .map(|((a, d), (r, l))| build(algebra::<F>(a, d)?, r.as_deref(), l.as_deref(), bound))
        .collect::<Result<Vec<_>>>()?;
    Ok((loaded, variant))
}
