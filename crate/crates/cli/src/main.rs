//! `hmf`: command-line access to the q-expansion toolkit.
//!
//! Every command prints a plain summary (series commands print their JSON)
//! and writes its JSON result to `--out` when given.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use hmf_core::coeff_ring::{AnyRing, Ring};
use hmf_core::eisenstein::{eisenstein_series, EisensteinSpec};
use hmf_core::hecke::{hecke_apply, HeckeContext};
use hmf_core::ideals::{IdealHNF, PrimeKind};
use hmf_core::io::{
    context_for, emit_tables, parse_character, small_generator, LoadedRun, ReportTables, RunConfig, SeriesJson,
};
use hmf_core::qexp::{AdelicSeries, SeriesContext};
use hmf_core::quad_field::QuadraticField;
use hmf_core::stability::{
    candidate_space, eigenforms, largest_stable_submodule, run_multicharacteristic, CandidateSpace, Eigenform,
};
use hmf_core::Error;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "hmf", version, about = "Hilbert modular forms over real quadratic fields through q-expansions")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Squarefree d > 1 of the field Q(sqrt d).
    #[arg(long, global = true, default_value_t = 6)]
    field: i64,
    /// Coefficient ring: q, z, fp:P, fq:P,N, loc:x;inv=P,.. (commands with a
    /// config file default to the configured ring).
    #[arg(long, global = true)]
    ring: Option<String>,
    /// Precision: coefficients of norm below this are kept.
    #[arg(long, global = true, default_value_t = 50)]
    bound: u64,
    /// Write the JSON result here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Discriminant, integral basis and units.
    FieldInfo,
    /// Integral ideals below the precision.
    Ideals {
        /// Only prime ideals.
        #[arg(long)]
        primes: bool,
    },
    /// Narrow class number and representatives.
    NarrowClass,
    /// Values of a character on the prime ideals below the precision.
    Character {
        #[arg(long = "char")]
        character: String,
    },
    /// The Eisenstein series E_k(eta, psi) as series JSON.
    Eisenstein {
        #[arg(long)]
        weight: i64,
        /// The character psi.
        #[arg(long = "char")]
        character: String,
        /// The character eta.
        #[arg(long, default_value = "trivial")]
        eta: String,
        /// Constant terms, one per narrow class (default all 0).
        #[arg(long, value_delimiter = ',')]
        constant: Vec<String>,
    },
    /// Product of two series.
    Mul { a: PathBuf, b: PathBuf },
    /// Inverse of a series with unit constant terms.
    Invert { a: PathBuf },
    /// T_m applied to a series.
    Hecke {
        series: PathBuf,
        /// Label of the ideal m.
        #[arg(long)]
        ideal: String,
        /// Label of the level.
        #[arg(long)]
        level: String,
        #[arg(long = "char", default_value = "trivial")]
        character: String,
    },
    /// Largest Hecke-stable submodule of a candidate space.
    Stability {
        #[arg(long)]
        config: PathBuf,
    },
    /// Eigenforms of the stable space over a field.
    Eigenforms {
        #[arg(long)]
        config: PathBuf,
        /// Split along the primes of norm up to this (default: the operator schedule).
        #[arg(long)]
        max_prime_norm: Option<u64>,
    },
    /// Run over Z[1/S] and rerun modulo each exceptional prime.
    Multichar {
        #[arg(long)]
        config: PathBuf,
    },
    /// Eigenvalue and frequency tables as CSV.
    EmitTables {
        #[arg(long)]
        config: PathBuf,
        /// Largest prime norm in the tables.
        #[arg(long)]
        max_norm: u64,
        /// Directory for eigenvalues.csv and frequencies.csv.
        #[arg(long)]
        dir: PathBuf,
        #[arg(long)]
        max_prime_norm: Option<u64>,
    },
}

struct Output {
    text: String,
    json: Value,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let validation = e.downcast_ref::<Error>().is_some_and(Error::is_validation);
            ExitCode::from(if validation { 2 } else { 1 })
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    let g = &cli.global;
    if let Some(n) = g.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global().context("thread pool")?;
    }
    let out = match &cli.command {
        Command::FieldInfo => field_info(g)?,
        Command::Ideals { primes } => ideals(g, *primes)?,
        Command::NarrowClass => narrow_class(g)?,
        Command::Character { character } => character_values(g, character)?,
        Command::Eisenstein { weight, character, eta, constant } => eisenstein(g, *weight, eta, character, constant)?,
        Command::Mul { a, b } => {
            let (a, b) = (read_series(a)?, read_series(b)?);
            let b = b.in_context(a.context())?;
            series_output(&a.mul(&b)?)
        }
        Command::Invert { a } => series_output(&read_series(a)?.invert()?),
        Command::Hecke { series, ideal, level, character } => hecke(series, ideal, level, character)?,
        Command::Stability { config } => stability(g, config)?,
        Command::Eigenforms { config, max_prime_norm } => {
            let (field, forms) = eigen_run(g, config, *max_prime_norm)?;
            let text = forms.iter().enumerate().map(|(i, f)| describe_form(&field, i, f)).collect::<String>();
            Output { text, json: Value::Array(forms.iter().map(form_json).collect()) }
        }
        Command::Multichar { config } => {
            let (cfg, dir) = RunConfig::load(config)?;
            let loaded = cfg.build(&dir, g.ring.as_deref())?;
            let outcome = run_multicharacteristic(&loaded.run)?;
            Output { text: outcome.report.render(), json: serde_json::to_value(&outcome.report)? }
        }
        Command::EmitTables { config, max_norm, dir, max_prime_norm } => {
            let (field, forms) = eigen_run(g, config, *max_prime_norm)?;
            let (paths, tables) = emit_tables(&field, &forms, *max_norm, dir)?;
            tables_output(&tables, &paths)
        }
    };
    print!("{}", out.text);
    if let Some(path) = &g.out {
        let mut s = serde_json::to_string_pretty(&out.json)?;
        s.push('\n');
        std::fs::write(path, s).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn field_of(g: &Global) -> anyhow::Result<QuadraticField> {
    Ok(QuadraticField::new(g.field)?)
}

fn context_of(g: &Global) -> anyhow::Result<Arc<SeriesContext>> {
    Ok(context_for(&field_of(g)?, &[], g.bound)?)
}

fn field_info(g: &Global) -> anyhow::Result<Output> {
    let k = field_of(g)?;
    let units = k.fundamental_unit();
    let omega = if k.omega_is_sqrt_d() { format!("sqrt({})", k.d()) } else { format!("(1 + sqrt({}))/2", k.d()) };
    let ctx = context_of(g)?;
    let json = json!({
        "d": k.d(),
        "discriminant": k.discriminant(),
        "w": omega,
        "fundamental_unit": units.fundamental_unit.to_string(),
        "unit_norm": units.norm_of_unit,
        "totally_positive_unit": units.totally_positive_fundamental_unit.to_string(),
        "narrow_class_number": ctx.h_plus(),
    });
    let text = format!(
        "K = Q(sqrt {})  discriminant {}\nO_K = Z[w], w = {}\nfundamental unit {} (norm {})\ntotally positive unit {}\nh+ = {}\n",
        k.d(),
        k.discriminant(),
        omega,
        units.fundamental_unit,
        units.norm_of_unit,
        units.totally_positive_fundamental_unit,
        ctx.h_plus()
    );
    Ok(Output { text, json })
}

fn kind_name(k: &PrimeKind) -> &'static str {
    match k {
        PrimeKind::Split => "split",
        PrimeKind::Inert => "inert",
        PrimeKind::Ramified => "ramified",
    }
}

fn ideals(g: &Global, only_primes: bool) -> anyhow::Result<Output> {
    let ctx = context_of(g)?;
    let k = ctx.field();
    let table = ctx.table();
    let mut rows = Vec::new();
    let mut text = String::new();
    if only_primes {
        for p in table.primes() {
            let gen = small_generator(k, &p.ideal).map(|a| a.to_string());
            text.push_str(&format!("{:>6}  {:<12} {:<9} {}\n", p.norm, p.ideal.label(), kind_name(&p.kind), gen.as_deref().unwrap_or("-")));
            rows.push(json!({"norm": p.norm, "ideal": p.ideal.label(), "kind": kind_name(&p.kind), "generator": gen}));
        }
    } else {
        for (i, id) in table.ideals().iter().enumerate() {
            let n = table.norm(i);
            text.push_str(&format!("{:>6}  {}\n", n, id.label()));
            rows.push(json!({"norm": n, "ideal": id.label()}));
        }
    }
    Ok(Output { text, json: json!({"field": k.d(), "bound": g.bound, "ideals": rows}) })
}

fn narrow_class(g: &Global) -> anyhow::Result<Output> {
    let ctx = context_of(g)?;
    let classes = ctx.classes();
    let reps: Vec<String> = classes.representatives().iter().map(|r| r.label()).collect();
    let mut text = format!("h+ = {}\n", classes.h_plus());
    for (i, r) in reps.iter().enumerate() {
        text.push_str(&format!("  class {i}: {r}\n"));
    }
    Ok(Output { text, json: json!({"field": ctx.field().d(), "h_plus": classes.h_plus(), "representatives": reps}) })
}

fn ring_or(g: &Global, default: &str) -> anyhow::Result<AnyRing> {
    Ok(AnyRing::from_descriptor(g.ring.as_deref().unwrap_or(default))?)
}

fn character_values(g: &Global, spec: &str) -> anyhow::Result<Output> {
    let ctx = context_of(g)?;
    let ring = ring_or(g, "q")?;
    let chi = parse_character(spec, &ring, ctx.classes())?;
    let mut rows = Vec::new();
    let mut text = format!("modulus {}  order {}\n", chi.modulus().label(), chi.order());
    for p in ctx.table().primes() {
        let v = ring.format(&chi.eval_prime(&p.ideal)?);
        text.push_str(&format!("{:>6}  {:<12} {}\n", p.norm, p.ideal.label(), v));
        rows.push(json!({"norm": p.norm, "ideal": p.ideal.label(), "value": v}));
    }
    let json = json!({"modulus": chi.modulus().label(), "order": chi.order(), "ring": ring.descriptor(), "values": rows});
    Ok(Output { text, json })
}

fn eisenstein(g: &Global, k: i64, eta: &str, psi: &str, constant: &[String]) -> anyhow::Result<Output> {
    let ctx = context_of(g)?;
    let ring = ring_or(g, "q")?;
    let eta = parse_character(eta, &ring, ctx.classes())?;
    let psi = parse_character(psi, &ring, ctx.classes())?;
    let constant = if constant.is_empty() {
        vec![ring.zero(); ctx.h_plus()]
    } else {
        constant.iter().map(|c| ring.parse(c)).collect::<hmf_core::Result<Vec<_>>>()?
    };
    let e = eisenstein_series(&ctx, &EisensteinSpec { eta, psi, k, constant, bound: g.bound })?;
    Ok(series_output(&e))
}

fn read_series(path: &Path) -> anyhow::Result<AdelicSeries<AnyRing>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(SeriesJson::from_json(&text).and_then(|s| s.to_series()).with_context(|| path.display().to_string())?)
}

fn series_output(f: &AdelicSeries<AnyRing>) -> Output {
    let s = SeriesJson::from_series(f);
    let mut text = s.to_json();
    text.push('\n');
    Output { text, json: serde_json::to_value(&s).expect("plain data") }
}

fn hecke(path: &Path, ideal: &str, level: &str, character: &str) -> anyhow::Result<Output> {
    let f = read_series(path)?;
    let ctx = f.context();
    let m = IdealHNF::parse_label(ctx.field(), ideal)?;
    let level = IdealHNF::parse_label(ctx.field(), level)?;
    let chi = parse_character(character, f.ring(), ctx.classes())?;
    Ok(series_output(&hecke_apply(&HeckeContext::new(level, chi), &m, &f)?))
}

fn load_run(g: &Global, config: &Path) -> anyhow::Result<LoadedRun> {
    let (cfg, dir) = RunConfig::load(config)?;
    Ok(cfg.build(&dir, g.ring.as_deref())?)
}

fn stable_space(loaded: &LoadedRun) -> anyhow::Result<(usize, CandidateSpace<AnyRing>, HeckeContext<AnyRing>)> {
    let run = &loaded.run;
    let hctx = HeckeContext::new(run.level.clone(), run.character.clone());
    let v0 = candidate_space(&run.multiplier, &run.basis, run.bound)?;
    let v = largest_stable_submodule(&v0, &hctx, run.schedule.as_deref())?;
    Ok((v0.rank(), v, hctx))
}

fn stability(g: &Global, config: &Path) -> anyhow::Result<Output> {
    let loaded = load_run(g, config)?;
    let (initial, v, _) = stable_space(&loaded)?;
    let exceptional: Vec<u64> = v.pivot_primes().into_iter().collect();
    let mut text = format!("ring {}  weight {}  precision {}\nrank {} -> {}\n", v.ring().descriptor(), v.weight(), v.bound(), initial, v.rank());
    for c in v.log() {
        text.push_str(&format!("  cut at {} (norm {}): {} -> {}\n", c.ideal, c.norm, c.rank_before, c.rank_after));
    }
    let l: Vec<String> = exceptional.iter().map(|p| p.to_string()).collect();
    text.push_str(&format!("exceptional primes: {{{}}}\n", l.join(", ")));
    let basis: Vec<Value> = v.all_series()?.iter().map(|s| serde_json::to_value(SeriesJson::from_series(s)).expect("plain data")).collect();
    let json = json!({
        "ring": v.ring().descriptor(),
        "weight": v.weight(),
        "bound": v.bound(),
        "initial_rank": initial,
        "rank": v.rank(),
        "trace": v.log(),
        "pivots": v.pivot_log(),
        "exceptional_primes": exceptional,
        "basis": basis,
    });
    Ok(Output { text, json })
}

fn eigen_run(g: &Global, config: &Path, max_prime_norm: Option<u64>) -> anyhow::Result<(QuadraticField, Vec<Eigenform>)> {
    let loaded = load_run(g, config)?;
    let (_, v, hctx) = stable_space(&loaded)?;
    let primes: Option<Vec<IdealHNF>> = max_prime_norm.map(|n| {
        v.context().table().primes().iter().filter(|p| p.norm <= n).map(|p| p.ideal.clone()).collect()
    });
    let forms = eigenforms(&v, &hctx, loaded.square_basis.as_deref(), primes.as_deref())?;
    Ok((v.context().field().clone(), forms))
}

fn describe_form(field: &QuadraticField, i: usize, f: &Eigenform) -> String {
    let mut s = format!(
        "f{}: over {}  eigenspace dimension {}  {}  squaring test {}\n",
        i + 1,
        f.ring.descriptor(),
        f.eigenspace_dim,
        if f.normalized { "normalized" } else { "unnormalized" },
        serde_json::to_value(f.verification).expect("plain data").as_str().unwrap_or("?")
    );
    for (p, a) in &f.eigenvalues {
        let gen = small_generator(field, p).map(|g| g.to_string()).unwrap_or_else(|| "-".into());
        s.push_str(&format!("  {:<12} {:<10} {}\n", p.label(), gen, f.ring.format(a)));
    }
    s
}

fn form_json(f: &Eigenform) -> Value {
    let eigenvalues: Vec<Value> = f.eigenvalues.iter().map(|(p, a)| json!({"ideal": p.label(), "value": f.ring.format(a)})).collect();
    json!({
        "ring": f.ring.descriptor(),
        "eigenspace_dim": f.eigenspace_dim,
        "normalized": f.normalized,
        "verification": f.verification,
        "eigenvalues": eigenvalues,
        "series": SeriesJson::from_series(&f.series),
    })
}

fn tables_output(t: &ReportTables, paths: &[PathBuf]) -> Output {
    let mut text = String::new();
    for w in &t.warnings {
        text.push_str(&format!("warning: {w}\n"));
    }
    for p in paths {
        text.push_str(&format!("wrote {}\n", p.display()));
    }
    Output { text, json: serde_json::to_value(t).expect("plain data") }
}
