use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hochschild::zoo::{self, Bundle, Dnr};
use hochschild::{Engine, Field};

/// Default cochain budget in scalars per cochain space.
pub const DEFAULT_BUDGET: u128 = 1 << 24;
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Parser, Debug)]
#[command(name = "hhbv", version, about = "Exact Hochschild cohomology with cup, bracket and BV operator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dimension, field, Frobenius status, Nakayama order, gradings.
    Info(Common),
    /// Table of `dim HH^n` and `dim HH^n(R)^{ν↑}` per degree.
    Hh(Common),
    /// Matrix of the induced BV operator on `HH^degree(R)^{ν↑}`.
    Bv(BvArgs),
    /// Run identity suites and report pass/fail per suite.
    Verify(VerifyArgs),
    /// Write the algebra in the JSON interchange format.
    Export(Common),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// `R(n, r)`; needs `--n` and `--r`.
    Dnr,
    /// `k[x]/(x^n)`.
    Truncated,
    /// Radical-square-zero cyclic quiver on `n` vertices.
    Cycle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Built-in family.
    #[arg(long, value_enum, conflicts_with = "input")]
    pub family: Option<Family>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub r: usize,
    /// Algebra file in the JSON interchange format.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// `Q` or `Fp:<p>`; ignored for `--input`, which records its own field.
    #[arg(long, default_value = "Q", value_parser = parse_field)]
    pub field: Field,
    #[arg(long, default_value_t = 2)]
    pub max_degree: usize,
    /// Largest cochain space, in scalars, the engine may build.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u128,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct BvArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 1)]
    pub degree: usize,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Comma-separated suite names; all applicable suites when absent.
    #[arg(long, value_delimiter = ',')]
    pub suite: Vec<String>,
    /// Random cases per degree for sampled suites.
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    /// Also reduce `Δχ_s` and `Δξ_s` at `s = 2n - 3` for `R(n, r)`.
    #[arg(long)]
    pub stretch: bool,
}

fn parse_field(s: &str) -> Result<Field, String> {
    s.parse::<Field>().map_err(|e| e.to_string())
}

/// An algebra to work on, with its `R(n, r)` presentation when built-in.
pub struct Subject {
    pub name: String,
    pub bundle: Bundle,
    pub dnr: Option<Arc<Dnr>>,
}

impl Subject {
    pub fn engine(&self, budget: u128) -> Engine {
        Engine::with_budget(self.bundle.alg.clone(), budget)
    }
}

pub fn load(c: &Common) -> Result<Subject, String> {
    if let Some(path) = &c.input {
        let bundle = zoo::load_algebra(path).map_err(|e| format!("{}: {e}", path.display()))?;
        return Ok(Subject { name: path.display().to_string(), bundle, dnr: None });
    }
    let family = c.family.ok_or("one of --family or --input is required")?;
    build(family, c.n, c.r, c.field)
}

pub fn build(family: Family, n: Option<usize>, r: usize, field: Field) -> Result<Subject, String> {
    let n = n.ok_or("--n is required with --family")?;
    let err = |e: hochschild::Error| e.to_string();
    Ok(match family {
        Family::Dnr => {
            let d = Arc::new(zoo::build_dnr(n, r, field).map_err(err)?);
            Subject { name: format!("R({n},{r}) over {field}"), bundle: d.bundle.clone(), dnr: Some(d) }
        }
        Family::Truncated => {
            Subject { name: format!("k[x]/(x^{n}) over {field}"), bundle: zoo::truncated_poly(n, field).map_err(err)?, dnr: None }
        }
        Family::Cycle => {
            Subject { name: format!("cycle({n}) over {field}"), bundle: zoo::nakayama_cycle(n, field).map_err(err)?, dnr: None }
        }
    })
}

/// Largest degree `≤ cap` whose `HH` computation stays within `budget`.
pub fn computable_degree(dim: usize, budget: u128, cap: usize) -> usize {
    // HH^n needs C^{n+1}, of size dim^{n+2}
    (0..=cap).take_while(|&n| (dim as u128).checked_pow(n as u32 + 2).is_some_and(|s| s <= budget)).last().unwrap_or(0)
}
