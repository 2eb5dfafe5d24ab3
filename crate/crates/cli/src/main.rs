mod cache;
mod commands;
mod inputs;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ribbon_koszul::quadratic::DEFAULT_DEGREE_BOUND;
use ribbon_koszul::{EngineError, FieldKind, Fp, Rational, Result};
use serde::Serialize;

use crate::cache::Cache;

/// Exact ribbon Schur modules and Koszulness checks for quadratic algebras.
#[derive(Parser, Debug)]
#[command(name = "ribbon-koszul", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Coefficient field: `rational` or `prime:P`.
    #[arg(long, global = true, default_value = "rational", value_parser = parse_field)]
    pub field: FieldKind,
    /// Largest internal degree any computation may reach.
    #[arg(long, global = true, default_value_t = DEFAULT_DEGREE_BOUND)]
    pub degree_bound: usize,
    /// Directory for cached reports. `RIBBON_KOSZUL_CACHE` takes precedence.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Worker threads for the internal pool.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format. `text` renders Tor and Ext tables; other reports stay JSON.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// One algebra with optional modules at the two ends.
#[derive(Args, Debug, Clone, Serialize)]
pub struct ContextArgs {
    /// `builtin:sym`, `builtin:ext`, `builtin:tensor`, or a presentation file.
    #[arg(long, default_value = "builtin:sym")]
    pub algebra: String,
    /// Number of generators for a built-in algebra.
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Right module at the left end: `trivial[:t]`, `free`, `trunc:r`, or a file.
    #[arg(long)]
    pub right_module: Option<String>,
    /// Left module at the right end: `trivial[:t]`, `free`, `trunc:r`, or a file.
    #[arg(long)]
    pub left_module: Option<String>,
}

/// Several factors for multi-Schur computations.
#[derive(Args, Debug, Clone, Serialize)]
pub struct MultiArgs {
    /// Comma-separated algebras, one per factor.
    #[arg(long)]
    pub algebras: String,
    /// Comma-separated generator counts, one per factor.
    #[arg(long)]
    pub dims: String,
    /// Comma-separated right modules, one per factor.
    #[arg(long)]
    pub right_modules: Option<String>,
    /// Comma-separated left modules, one per factor.
    #[arg(long)]
    pub left_modules: Option<String>,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Dimension (and optionally character) of a ribbon Schur module.
    Schur {
        #[command(flatten)]
        ctx: ContextArgs,
        #[arg(long)]
        composition: String,
        /// Include the weight character.
        #[arg(long)]
        character: bool,
    },
    /// Exactness of the concatenation sequence for a pair of compositions.
    Ses {
        #[command(flatten)]
        ctx: ContextArgs,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
    },
    /// Dimension of a Schur module against its dual computed independently.
    Dual {
        #[command(flatten)]
        ctx: ContextArgs,
        #[arg(long)]
        composition: String,
    },
    /// Koszulness certificate through a given degree.
    KoszulCheck {
        #[command(flatten)]
        ctx: ContextArgs,
        /// Last degree to certify.
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        /// `distributive`, `strand-homology` or `both`.
        #[arg(long, default_value = "both")]
        method: String,
        /// Certify the left module instead of the algebra.
        #[arg(long)]
        module: bool,
    },
    /// Tor between the two end modules (trivial when omitted).
    Tor {
        #[command(flatten)]
        ctx: ContextArgs,
        /// Largest homological degree.
        #[arg(long, default_value_t = 3)]
        max_i: usize,
        /// Skip the closed-form comparison.
        #[arg(long)]
        uncertified: bool,
    },
    /// Ext of the left module into the residue field.
    Ext {
        #[command(flatten)]
        ctx: ContextArgs,
        /// Largest homological degree.
        #[arg(long, default_value_t = 3)]
        max_i: usize,
        /// Skip the closed-form comparison.
        #[arg(long)]
        uncertified: bool,
    },
    /// Dimension of a multi-Schur module.
    Multischur {
        #[command(flatten)]
        multi: MultiArgs,
        /// Partitioned compositions separated by `;`, blocks by `|`.
        #[arg(long)]
        compositions: String,
        /// Force the `lattice` or `kernel` realization.
        #[arg(long)]
        path: Option<String>,
        #[arg(long)]
        character: bool,
    },
    /// Dimension ledger of the canonical filtration of a multi-Schur module.
    Filtration {
        #[command(flatten)]
        multi: MultiArgs,
        #[arg(long)]
        compositions: String,
    },
    /// Symmetric polynomials and character identities.
    Symfunc {
        /// `h`, `e`, `ribbon`, `ribbon-ssyt`, `hg` or `segre`.
        #[arg(long)]
        character: String,
        /// Composition (or `|`-partitioned composition for `hg`); a degree for `h` and `e`.
        #[arg(long)]
        composition: Option<String>,
        /// Comma-separated parts of α for `segre`.
        #[arg(long)]
        alpha: Option<String>,
        /// The `d` of the Segre identity.
        #[arg(long, default_value_t = 1)]
        d: usize,
        /// Variables per alphabet.
        #[arg(long, default_value_t = 2)]
        vars: usize,
    },
}

fn parse_field(s: &str) -> std::result::Result<FieldKind, String> {
    match s.trim() {
        "rational" | "Q" => Ok(FieldKind::Rational),
        other => {
            let p = other
                .strip_prefix("prime:")
                .ok_or_else(|| format!("expected `rational` or `prime:P`, got {other:?}"))?
                .parse::<u64>()
                .map_err(|e| format!("bad prime in {other:?}: {e}"))?;
            if !SUPPORTED.contains(&p) {
                return Err(format!("prime {p} is not supported; choose one of {SUPPORTED:?}"));
            }
            Ok(FieldKind::Prime { p })
        }
    }
}

const SUPPORTED: [u64; 6] = [2, 3, 5, 7, 32003, 65521];

macro_rules! dispatch {
    ($kind:expr, $f:ident => $body:expr) => {
        match $kind {
            FieldKind::Rational => {
                type $f = Rational;
                $body
            }
            FieldKind::Prime { p: 2 } => {
                type $f = Fp<2>;
                $body
            }
            FieldKind::Prime { p: 3 } => {
                type $f = Fp<3>;
                $body
            }
            FieldKind::Prime { p: 5 } => {
                type $f = Fp<5>;
                $body
            }
            FieldKind::Prime { p: 7 } => {
                type $f = Fp<7>;
                $body
            }
            FieldKind::Prime { p: 32003 } => {
                type $f = Fp<32003>;
                $body
            }
            FieldKind::Prime { p: 65521 } => {
                type $f = Fp<65521>;
                $body
            }
            FieldKind::Prime { p } => Err(EngineError::Config(format!("prime {p} is not supported"))),
        }
    };
}

fn cache_for(global: &Global) -> Option<Cache> {
    std::env::var_os("RIBBON_KOSZUL_CACHE")
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .or_else(|| global.cache_dir.clone())
        .map(Cache::new)
}

fn emit(global: &Global, text: &str) -> Result<()> {
    let io = |e: std::io::Error| EngineError::Config(format!("writing report: {e}"));
    match &global.out {
        Some(path) => std::fs::write(path, text).map_err(io),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(io)
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    if cli.global.degree_bound == 0 {
        return Err(EngineError::Config("--degree-bound must be at least 1".into()));
    }
    if let Some(n) = cli.global.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| EngineError::Config(format!("thread pool: {e}")))?;
    }
    let cache = cache_for(&cli.global);
    let report = dispatch!(cli.global.field, F => commands::run::<F>(&cli.global, &cli.command, cache.as_ref()))?;
    let text = match cli.global.format {
        Format::Text if matches!(cli.command, Command::Tor { .. } | Command::Ext { .. }) => commands::render_table(&report),
        _ => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
    };
    emit(&cli.global, &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
