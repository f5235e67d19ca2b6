use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cotlab_core::bifunctor::{ext, tensor, HomModule};
use cotlab_core::cotorsion::{ClassSpec, Universe};
use cotlab_core::harness::{
    bundled, bundled_names, gen_random, run_suite, CheckKind, CheckSpec, FunctorSpec, HoveyInputs, PairSpec,
    RandomKind, RandomParams, RunReport, Scenario,
};
use cotlab_core::products::LemmaKind;
use cotlab_core::{Exec, FPModule, Matrix, Ring};

#[derive(Parser)]
#[command(name = "cotlab", version, about = "Exact homological algebra over Z/n")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Base seed; overrides the scenario seed for `run`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Random trials per sampled check; overrides the scenario value.
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Also write the JSON output to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Run every batch on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a module or a random value.
    Compute(Compute),
    /// List the members of a class among modules with few invariant factors.
    Enumerate {
        #[arg(long)]
        ring: u64,
        #[arg(long, default_value_t = 2)]
        max_factors: usize,
        #[arg(long, default_value = "all")]
        class: String,
    },
    /// Run one checker and report.
    Check(Check),
    /// Run a lemma battery.
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
    /// Run a bundled suite or a scenario file.
    Run {
        #[arg(long, conflicts_with_all = ["scenario", "list"])]
        suite: Option<String>,
        #[arg(long, conflicts_with = "list")]
        scenario: Option<PathBuf>,
        #[arg(long)]
        list: bool,
    },
}

#[derive(Args)]
struct Compute {
    #[arg(value_enum)]
    op: ComputeOp,
    #[arg(long)]
    ring: u64,
    /// A module: `zero`, invariant factors `2,4`, or presentation rows `2,2;0,4`.
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
    /// For `random`: module, morphism, ses or complex.
    #[arg(long, default_value = "module")]
    kind: String,
    #[arg(long, default_value_t = 2)]
    max_factors: usize,
    #[arg(long, default_value = "all")]
    class: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum ComputeOp {
    Tensor,
    Hom,
    Ext1,
    Ext2,
    Normal,
    Random,
}

#[derive(Args)]
struct Check {
    #[arg(value_enum)]
    what: CheckWhat,
    #[arg(long, default_value_t = 4)]
    ring: u64,
    /// `tensor`, `identity`, `tensor-with:d1,d2` or `basechange:m:n`.
    #[arg(long, default_value = "tensor")]
    functor: String,
    #[arg(long, default_value_t = 2)]
    arity: usize,
    /// The classes `d,e` used on every slot.
    #[arg(long, default_value = "flat,all")]
    pairs: String,
    /// Defaults to 2 for module-level checks and 1 for the others.
    #[arg(long)]
    max_factors: Option<usize>,
    /// Random complexes of each flavor in the sample pools.
    #[arg(long, default_value_t = 20)]
    random: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckWhat {
    Pair,
    Assumptions,
    Split1,
    Nsplit,
    Hovey,
    Quillen,
    Cotmain,
}

#[derive(Subcommand)]
enum Verify {
    Lemma {
        name: String,
        #[arg(long, default_value_t = 4)]
        ring: u64,
        #[arg(long, default_value_t = 2)]
        arity: usize,
        /// Classes `d,e` for the enumerated lemmas.
        #[arg(long)]
        pairs: Option<String>,
        #[arg(long, default_value_t = 2)]
        max_factors: usize,
    },
}

fn parse_module(s: &str, ring: Ring) -> Result<FPModule> {
    let s = s.trim();
    if s.is_empty() || s == "zero" || s == "0" {
        return Ok(FPModule::zero(ring));
    }
    let nums = |t: &str| -> Result<Vec<i64>> {
        t.split(',')
            .map(|x| x.trim().parse::<i64>().with_context(|| format!("bad entry {x:?} in {s:?}")))
            .collect()
    };
    if s.contains(';') {
        let rows: Vec<Vec<i64>> = s.split(';').filter(|r| !r.trim().is_empty()).map(nums).collect::<Result<_>>()?;
        return Ok(FPModule::new(Matrix::from_rows(ring, &rows)?));
    }
    let ds = nums(s)?
        .into_iter()
        .map(|d| u64::try_from(d).context("invariant factors are positive"))
        .collect::<Result<Vec<u64>>>()?;
    Ok(FPModule::from_invariants(ring, &ds)?)
}

fn parse_pair(s: &str) -> Result<(ClassSpec, ClassSpec)> {
    let (d, e) = s.split_once(',').context("expected --pairs d,e")?;
    Ok((ClassSpec::parse_simple(d)?, ClassSpec::parse_simple(e)?))
}

fn module_json(m: &FPModule) -> Value {
    json!({
        "describe": m.describe(),
        "invariants": m.invariants(),
        "cardinality": m.cardinality().to_string(),
        "module": m,
    })
}

fn need<'a>(x: &'a Option<String>, flag: &str) -> Result<&'a str> {
    x.as_deref().with_context(|| format!("{flag} is required"))
}

fn compute(c: &Compute, seed: u64) -> Result<Value> {
    let ring = Ring::new(c.ring)?;
    let a = || parse_module(need(&c.a, "--a")?, ring);
    let b = || parse_module(need(&c.b, "--b")?, ring);
    Ok(match c.op {
        ComputeOp::Tensor => module_json(&tensor(&a()?, &b()?)?),
        ComputeOp::Hom => module_json(HomModule::new(&a()?, &b()?)?.module()),
        ComputeOp::Ext1 => module_json(&ext(1, &a()?, &b()?)?),
        ComputeOp::Ext2 => module_json(&ext(2, &a()?, &b()?)?),
        ComputeOp::Normal => module_json(&a()?.normalized().0),
        ComputeOp::Random => {
            let params = RandomParams {
                ring,
                max_factors: c.max_factors,
                class: ClassSpec::parse_simple(&c.class)?,
            };
            gen_random(RandomKind::parse(&c.kind)?, &params, seed)?
        }
    })
}

fn enumerate(ring: u64, max_factors: usize, class: &str) -> Result<Value> {
    let u = Universe::enumerate(Ring::new(ring)?, max_factors);
    let members = ClassSpec::parse_simple(class)?.members(&u)?;
    Ok(json!({
        "ring": ring,
        "max_factors": max_factors,
        "class": class,
        "universe_size": u.len(),
        "members": members.iter().map(FPModule::describe).collect::<Vec<_>>(),
    }))
}

fn check_spec(c: &Check) -> Result<CheckSpec> {
    let ring = Ring::new(c.ring)?;
    let (d, e) = parse_pair(&c.pairs)?;
    let module_level = matches!(c.what, CheckWhat::Pair | CheckWhat::Assumptions | CheckWhat::Split1);
    let factors = c.max_factors.unwrap_or(if module_level { 2 } else { 1 });
    let pair_over = |n: u64| PairSpec::new(n, factors, d.clone(), e.clone());
    let arity = if matches!(c.what, CheckWhat::Split1 | CheckWhat::Quillen) { 1 } else { c.arity };
    let functor = FunctorSpec::parse(&c.functor, ring, arity)?;
    let (src_ring, tgt_ring) = match functor {
        FunctorSpec::BaseChange { from, to } => (from, to),
        _ => (c.ring, c.ring),
    };
    let n = functor.adjunction()?.arity();
    let pairs = || -> Result<Vec<PairSpec>> {
        let mut v = vec![pair_over(tgt_ring)?];
        v.extend((0..n).map(|_| pair_over(src_ring)).collect::<cotlab_core::Result<Vec<_>>>()?);
        Ok(v)
    };
    let kind = match c.what {
        CheckWhat::Pair => CheckKind::Cotorsion { pair: pair_over(c.ring)? },
        CheckWhat::Assumptions => CheckKind::Assumptions { pair: pair_over(c.ring)? },
        CheckWhat::Split1 => CheckKind::Split1 {
            functor,
            source: pair_over(src_ring)?,
            target: pair_over(tgt_ring)?,
        },
        CheckWhat::Nsplit => CheckKind::Nsplit { functor, pairs: pairs()? },
        CheckWhat::Hovey => CheckKind::Hovey {
            functor,
            pairs: pairs()?,
            inputs: HoveyInputs::Random,
        },
        CheckWhat::Quillen => CheckKind::Quillen {
            functor,
            source: pair_over(src_ring)?,
            target: pair_over(tgt_ring)?,
            random: c.random,
        },
        CheckWhat::Cotmain => CheckKind::CotMain {
            functor,
            pairs: pairs()?,
            random: c.random,
            force: false,
        },
    };
    Ok(CheckSpec::new(kind_name(c.what), kind))
}

fn kind_name(w: CheckWhat) -> &'static str {
    match w {
        CheckWhat::Pair => "pair",
        CheckWhat::Assumptions => "assumptions",
        CheckWhat::Split1 => "split1",
        CheckWhat::Nsplit => "nsplit",
        CheckWhat::Hovey => "hovey",
        CheckWhat::Quillen => "quillen",
        CheckWhat::Cotmain => "cotmain",
    }
}

fn single(name: &str, spec: CheckSpec, g: &Global) -> Scenario {
    let mut sc = Scenario::new(name, vec![spec]);
    sc.seed = g.seed.unwrap_or(0);
    if let Some(t) = g.trials {
        sc.trials = t;
    }
    sc
}

fn load_scenario(g: &Global, suite: Option<&str>, path: Option<&PathBuf>) -> Result<Scenario> {
    let mut sc = match (suite, path) {
        (Some(name), _) => bundled(name)?,
        (None, Some(p)) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Scenario::from_json(&text).with_context(|| format!("in scenario file {}", p.display()))?
        }
        (None, None) => bail!("give --suite, --scenario or --list"),
    };
    if let Some(s) = g.seed {
        sc.seed = s;
    }
    if let Some(t) = g.trials {
        sc.trials = t;
    }
    Ok(sc)
}

/// Writes to stdout; a closed pipe is not an error.
fn print(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

/// Prints `text` or the JSON form and writes the JSON to `--out`.
fn emit(json: &str, text: &str, g: &Global) -> Result<()> {
    if let Some(p) = &g.out {
        std::fs::write(p, json).with_context(|| format!("writing {}", p.display()))?;
    }
    match g.format {
        Format::Json => print(&format!("{json}\n")),
        Format::Text => print(text),
    }
}

fn value_text(v: &Value) -> String {
    if let Some(d) = v.get("describe").and_then(Value::as_str) {
        return format!("{d}\n");
    }
    if let Some(ms) = v.get("members").and_then(Value::as_array) {
        return ms.iter().filter_map(Value::as_str).map(|m| format!("{m}\n")).collect();
    }
    format!("{}\n", serde_json::to_string_pretty(v).expect("values serialize"))
}

fn emit_value(v: &Value, g: &Global) -> Result<()> {
    emit(&serde_json::to_string_pretty(v)?, &value_text(v), g)
}

fn emit_report(r: &RunReport, g: &Global) -> Result<ExitCode> {
    emit(&r.to_json(), &r.to_text(), g)?;
    Ok(if r.pass { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn main() -> Result<ExitCode> {
    let cli = Cli::parse();
    let g = &cli.global;
    let exec = if g.sequential { Exec::Sequential } else { Exec::Parallel };
    match &cli.command {
        Command::Compute(c) => emit_value(&compute(c, g.seed.unwrap_or(0))?, g)?,
        Command::Enumerate { ring, max_factors, class } => emit_value(&enumerate(*ring, *max_factors, class)?, g)?,
        Command::Check(c) => {
            let sc = single(&format!("check {}", kind_name(c.what)), check_spec(c)?, g);
            return emit_report(&run_suite(&sc, exec)?, g);
        }
        Command::Verify {
            what: Verify::Lemma { name, ring, arity, pairs, max_factors },
        } => {
            let lemma = LemmaKind::parse(name)?;
            let pair = match pairs {
                Some(p) => {
                    let (d, e) = parse_pair(p)?;
                    Some(PairSpec::new(*ring, *max_factors, d, e)?)
                }
                None => None,
            };
            let kind = CheckKind::Lemma {
                lemma,
                ring: Ring::new(*ring)?,
                arity: *arity,
                pair,
            };
            let sc = single(&format!("verify {name}"), CheckSpec::new(name.as_str(), kind), g);
            return emit_report(&run_suite(&sc, exec)?, g);
        }
        Command::Run { suite, scenario, list } => {
            if *list {
                let mut text = String::new();
                for name in bundled_names() {
                    text += &format!("{name}\t{} checks\n", bundled(name)?.checks.len());
                }
                print(&text)?;
                return Ok(ExitCode::SUCCESS);
            }
            let sc = load_scenario(g, suite.as_deref(), scenario.as_ref())?;
            return emit_report(&run_suite(&sc, exec)?, g);
        }
    }
    Ok(ExitCode::SUCCESS)
}
