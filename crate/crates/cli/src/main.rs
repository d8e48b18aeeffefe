//! `gdpa`: JSON-in, JSON-or-text-out front end to the gdpa kernel.

mod input;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gdpa::algebra::{recover_pi, AlgebraContext, ElementJson, GdpaElement, StructureConstants, StructureConstantsJson};
use gdpa::bivariate::bivariate_counterexample;
use gdpa::coherence::{a2_condition_check, check_batch, random_batch, A2Verdict, IdealSpec, IdealSpecJson, DEFAULT_SEARCH_LIMIT};
use gdpa::kinv::{h_invariant, ktors_demo, l_invariant, KClassSeries};
use gdpa::module::{
    hilbert_series, kernel_presentation, tor, torsion_submodule, HomMap, ModuleMap, PresentationJson, PresentedModule, TorsionVerdict,
};
use gdpa::pi::{pi_from_gcd_morphic, Admissibility, GcdSource, PiSequence, PiSpec};
use gdpa::ring::{Elem, Ring};
use gdpa::special::{make_special, special_resolve_field};
use input::{decode, load, CliError};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "gdpa", version, about = "Generalized divided power algebras and their graded modules")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Coefficient ring: Z, Q, Z/n, GF(p), Z(p) or Z[q].
    #[arg(long, global = true, default_value = "Z")]
    ring: String,
    /// π family: classical, all_ones, cyclotomic, cyclotomic_at, gcd_morphic or custom.
    #[arg(long, global = true, default_value = "classical")]
    family: String,
    /// Custom π values as a JSON object, e.g. '{"2":2,"3":2}'.
    #[arg(long, global = true)]
    values: Option<String>,
    /// Custom π value for indices not listed in --values.
    #[arg(long, global = true)]
    default: Option<String>,
    /// Evaluation point for cyclotomic_at.
    #[arg(long, global = true)]
    q0: Option<String>,
    /// GCD-morphic source: fibonacci, identity, ones or explicit.
    #[arg(long, global = true)]
    source: Option<String>,
    /// Comma-separated terms a(1), a(2), … for an explicit GCD-morphic source.
    #[arg(long, global = true)]
    seq: Option<String>,
    /// Full π specification as JSON (inline or a path); overrides the family flags.
    #[arg(long, global = true)]
    pi: Option<String>,
    /// Degree horizon for degreewise computations.
    #[arg(long, global = true, env = "GDPA_HORIZON")]
    horizon: Option<i64>,
    /// Seed for randomized inputs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    out: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// A module given as a JSON presentation or as a principal special module.
#[derive(Args)]
struct ModuleArgs {
    /// Presentation JSON, inline or a path.
    #[arg(long, conflicts_with = "special")]
    input: Option<String>,
    /// Comma-separated ideal generators for the special module M(a, h).
    #[arg(long, requires = "h")]
    special: Option<String>,
    /// Veronese period h for --special.
    #[arg(long)]
    h: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Generalized binomial coefficient C(n, m).
    Cbinom {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
    },
    /// π-sequence of a GCD-morphic integer sequence.
    PiDerive {
        #[arg(long, default_value_t = 20)]
        up_to: u64,
    },
    /// Admissibility scan of π up to a bound.
    PiCheck {
        #[arg(long, default_value_t = 30)]
        up_to: u64,
    },
    /// The h-transform π^[h].
    PiTransform {
        #[arg(long)]
        h: u64,
        #[arg(long, default_value_t = 20)]
        up_to: u64,
    },
    /// Graded pieces and rational Hilbert series.
    Hilbert {
        #[command(flatten)]
        module: ModuleArgs,
    },
    /// Presentation of a kernel: a module map from JSON, or the first syzygy of a module.
    Syzygy {
        /// Map JSON {source, target, map}, inline or a path.
        #[arg(long, conflicts_with_all = ["input", "special"])]
        map: Option<String>,
        #[command(flatten)]
        module: ModuleArgs,
    },
    /// Tor_i(M, k) through the horizon.
    Tor {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long, default_value_t = 3)]
        max_i: usize,
    },
    /// π-torsion submodule and torsion-freeness verdict.
    Torsion {
        #[command(flatten)]
        module: ModuleArgs,
    },
    /// Certified special resolution over a field.
    Special {
        #[command(flatten)]
        module: ModuleArgs,
    },
    /// Hilbert class H_M by rank, or the torsion-class demo with --demo-p.
    Kclass {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long)]
        demo_p: Option<u64>,
        /// Period for the demo; defaults to p.
        #[arg(long)]
        demo_h: Option<u64>,
    },
    /// Torsion class series L_M.
    LInvariant {
        #[command(flatten)]
        module: ModuleArgs,
        /// Deepest Tor used; defaults to what the horizon needs.
        #[arg(long)]
        max_i: Option<usize>,
    },
    /// Degree bound t_1(I/T(I)) ≤ (2N+3)d on one ideal or a random batch.
    BoundCheck {
        /// Ideal chain JSON {"chain": [[..], ..]}, inline or a path.
        #[arg(long, conflicts_with = "random")]
        ideal: Option<String>,
        /// Number of random ideals over Z with classical π.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 4)]
        max_d: usize,
        #[arg(long, default_value_t = DEFAULT_SEARCH_LIMIT)]
        limit: u64,
    },
    /// Whether a single a^[h](n) kills the torsion of k/a.
    A2Check {
        /// Comma-separated ideal generators.
        #[arg(long)]
        ideal: String,
        #[arg(long, default_value_t = 1)]
        h: u64,
        #[arg(long, default_value_t = DEFAULT_SEARCH_LIMIT)]
        limit: u64,
    },
    /// Syzygy of (y^[1], x^[1]) over Z_(p) not generated in lower bidegrees.
    Counterexample {
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        r: u32,
    },
    /// Recover π up to units from structure constants.
    RecoverPi {
        /// Structure-constant JSON, inline or a path; without it the table comes from the π flags.
        #[arg(long)]
        input: Option<String>,
        #[arg(long, default_value_t = 16)]
        up_to: u64,
    },
}

enum Status {
    Ok,
    /// Results are emitted but a precondition failed.
    Failed,
    /// Results are emitted but inconclusive or partial.
    Partial,
}

struct Report {
    json: Value,
    text: String,
    status: Status,
}

impl Report {
    fn new(json: Value, text: String) -> Self {
        Report { json, text, status: Status::Ok }
    }

    fn with(mut self, status: Status) -> Self {
        self.status = status;
        self
    }
}

type CliResult<T> = Result<T, CliError>;

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn parse_values(text: &str) -> CliResult<BTreeMap<String, String>> {
    let raw: BTreeMap<String, Value> = decode(text)?;
    raw.into_iter()
        .map(|(k, v)| match v {
            Value::Number(n) => Ok((k, n.to_string())),
            Value::String(s) => Ok((k, s)),
            _ => Err(CliError::Schema { pointer: format!("/{k}"), message: "expected a number or a string".into() }),
        })
        .collect()
}

fn ring(g: &Global) -> CliResult<Ring> {
    Ok(g.ring.parse()?)
}

fn pi_spec(g: &Global) -> CliResult<PiSpec> {
    if let Some(p) = &g.pi {
        return load(p);
    }
    let mut spec = PiSpec::simple(&g.family, ring(g)?);
    spec.values = g.values.as_deref().map(parse_values).transpose()?;
    spec.default = g.default.clone();
    spec.q0 = g.q0.clone();
    spec.source = g.source.clone();
    spec.a = g.seq.as_ref().map(|s| s.split(',').map(|x| x.trim().to_string()).collect());
    Ok(spec)
}

fn context(g: &Global) -> CliResult<Arc<AlgebraContext>> {
    Ok(AlgebraContext::from_spec(&pi_spec(g)?)?)
}

fn elements(r: &Ring, list: &str) -> CliResult<Vec<Elem>> {
    list.split(',').map(|s| r.parse(s.trim()).map_err(CliError::from)).collect()
}

fn module(g: &Global, m: &ModuleArgs) -> CliResult<PresentedModule> {
    if let Some(i) = &m.input {
        let j: PresentationJson = load(i)?;
        return Ok(PresentedModule::from_json(&j)?);
    }
    if let (Some(gens), Some(h)) = (&m.special, m.h) {
        let ctx = context(g)?;
        let ideal = elements(ctx.ring(), gens)?;
        return Ok(make_special(&ctx, &ideal, h)?);
    }
    Err(CliError::Usage("a module is required: pass --input or --special with --h".into()))
}

fn horizon(g: &Global, m: &PresentedModule) -> i64 {
    g.horizon.unwrap_or_else(|| m.default_horizon())
}

fn cbinom(g: &Global, n: u64, m: u64) -> CliResult<Report> {
    let pi = pi_spec(g)?.build()?;
    let c = pi.ring().format(&pi.c(n, m)?);
    Ok(Report::new(json!({ "n": n, "m": m, "value": c }), c))
}

fn sequence_report(pi: &PiSequence, up_to: u64, extra: Value) -> Report {
    let r = pi.ring();
    let rows: Vec<(u64, String, String)> = (1..=up_to).map(|n| (n, r.format(&pi.pi(n)), r.format(&pi.a(n)))).collect();
    let mut text = format!("{:>4}  {:>12}  {:>12}\n", "n", "pi_n", "a(n)");
    for (n, p, a) in &rows {
        let _ = writeln!(text, "{n:>4}  {p:>12}  {a:>12}");
    }
    let mut json = json!({
        "ring": r,
        "pi": rows.iter().map(|(n, p, _)| json!([n, p])).collect::<Vec<_>>(),
        "a": rows.iter().map(|(n, _, a)| json!([n, a])).collect::<Vec<_>>(),
    });
    if let (Value::Object(o), Value::Object(e)) = (&mut json, extra) {
        o.extend(e);
    }
    Report::new(json, text)
}

fn pi_derive(g: &Global, up_to: u64) -> CliResult<Report> {
    let src = match g.source.as_deref().unwrap_or("fibonacci") {
        "fibonacci" => GcdSource::Fibonacci,
        "identity" => GcdSource::Identity,
        "ones" => GcdSource::Ones,
        "explicit" => {
            let seq = g.seq.as_deref().ok_or_else(|| CliError::Usage("--source explicit needs --seq".into()))?;
            let v = seq
                .split(',')
                .map(|s| s.trim().parse::<BigInt>().map_err(|_| CliError::Usage(format!("`{s}` is not an integer"))))
                .collect::<CliResult<Vec<_>>>()?;
            GcdSource::Explicit(v)
        }
        other => return Err(CliError::Usage(format!("unknown source `{other}`"))),
    };
    let pi = pi_from_gcd_morphic(&ring(g)?, src, up_to)?;
    Ok(sequence_report(&pi, up_to, json!({ "spec": pi.to_spec() })))
}

fn pi_check(g: &Global, up_to: u64) -> CliResult<Report> {
    let pi = pi_spec(g)?.build()?;
    Ok(match pi.admissible_check(up_to)? {
        Admissibility::Admissible => Report::new(json!({ "admissible": true, "up_to": up_to }), format!("admissible up to {up_to}")),
        Admissibility::Violation(n, m) => Report::new(
            json!({ "admissible": false, "up_to": up_to, "violation": [n, m] }),
            format!("violation ({n},{m})"),
        )
        .with(Status::Failed),
    })
}

fn pi_transform(g: &Global, h: u64, up_to: u64) -> CliResult<Report> {
    let pi = Arc::new(pi_spec(g)?.build()?);
    let t = pi.h_transform(h)?;
    Ok(sequence_report(&t, up_to, json!({ "h": h })))
}

fn pieces_text(pieces: impl IntoIterator<Item = (i64, String)>) -> String {
    let mut text = String::new();
    for (n, s) in pieces {
        let _ = writeln!(text, "{n:>4}  {s}");
    }
    text
}

fn hilbert(g: &Global, m: &ModuleArgs) -> CliResult<Report> {
    let m = module(g, m)?;
    let hs = hilbert_series(&m, horizon(g, &m))?;
    let mut text = pieces_text(hs.pieces.iter().map(|(n, v)| (*n, v.describe())));
    let status = match &hs.fit {
        Some(f) => {
            let _ = writeln!(text, "fit: {f}");
            Status::Ok
        }
        None => {
            text.push_str("fit: none within the horizon\n");
            Status::Partial
        }
    };
    Ok(Report::new(to_value(&hs.to_json()), text).with(status))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MapJson {
    source: PresentationJson,
    target: PresentationJson,
    /// Images of the source generators, one element per target generator.
    map: Vec<Vec<ElementJson>>,
}

fn syzygy(g: &Global, map: Option<&str>, m: &ModuleArgs) -> CliResult<Report> {
    let f = match map {
        Some(arg) => {
            let j: MapJson = load(arg)?;
            let target = PresentedModule::from_json(&j.target)?;
            let ctx = target.context().clone();
            let source = PresentedModule::from_json_in(&ctx, &j.source)?;
            let cols = j
                .map
                .iter()
                .map(|col| col.iter().map(|e| GdpaElement::from_json(&ctx, e)).collect::<gdpa::error::Result<Vec<_>>>())
                .collect::<gdpa::error::Result<Vec<_>>>()?;
            let h = HomMap::from_elements(source.generators.clone(), target.generators.clone(), &cols)?;
            ModuleMap::new(source, target, h)?
        }
        None => {
            let target = module(g, m)?;
            let ctx = target.context().clone();
            let f0 = target.generators.clone();
            let source = PresentedModule::free(&ctx, f0.degrees().to_vec());
            let r = ctx.ring();
            let id = (0..f0.rank()).map(|j| (0..f0.rank()).map(|k| if j == k { r.one() } else { r.zero() }).collect()).collect();
            let h = HomMap::new(source.generators.clone(), f0, id)?;
            ModuleMap::new(source, target, h)?
        }
    };
    let bound = horizon(g, &f.target).max(horizon(g, &f.source));
    let k = kernel_presentation(&f, bound, None)?;
    let text = format!(
        "kernel generators in degrees {:?}\nrelations in degrees {:?}\ncomplete: {}\n",
        k.generator_degrees(),
        k.module.relation_degrees(),
        k.complete
    );
    let status = if k.complete { Status::Ok } else { Status::Partial };
    Ok(Report::new(to_value(&k.to_json()), text).with(status))
}

fn tor_cmd(g: &Global, m: &ModuleArgs, max_i: usize) -> CliResult<Report> {
    let m = module(g, m)?;
    let t = tor(&m, max_i, horizon(g, &m))?;
    let mut text = String::new();
    for i in 0..=max_i {
        let support: Vec<String> = t.support(i).iter().map(|&n| format!("{n}: {}", t.get(i, n).unwrap().describe())).collect();
        let _ = writeln!(text, "Tor_{i}: {}", if support.is_empty() { "0".into() } else { support.join(", ") });
    }
    if t.partial {
        text.push_str("partial: higher Tor may be nonzero in range\n");
    }
    let status = if t.partial { Status::Partial } else { Status::Ok };
    Ok(Report::new(to_value(&t.to_json()), text).with(status))
}

fn torsion(g: &Global, m: &ModuleArgs) -> CliResult<Report> {
    let m = module(g, m)?;
    let rep = torsion_submodule(&m, horizon(g, &m))?;
    let mut text = format!("verdict: {:?}\n", rep.verdict);
    text.push_str(&pieces_text(rep.pieces.iter().map(|(n, v)| (*n, v.describe()))));
    let _ = writeln!(text, "{}", rep.note);
    let status = if rep.verdict == TorsionVerdict::Inconclusive { Status::Partial } else { Status::Ok };
    Ok(Report::new(to_value(&rep.to_json(m.ring())), text).with(status))
}

fn special(g: &Global, m: &ModuleArgs) -> CliResult<Report> {
    let m = module(g, m)?;
    let res = special_resolve_field(&m, horizon(g, &m))?;
    let j = res.to_json();
    let mut text = format!("r = {}, certified through degree {}: {}\n", j.r, j.horizon, j.verdict.valid);
    for b in &j.blocks {
        let _ = writeln!(text, "  M(({}), {}) shifted by {}", b.ideal.join(", "), b.h, b.shift);
    }
    let status = if j.verdict.valid { Status::Ok } else { Status::Partial };
    Ok(Report::new(to_value(&j), text).with(status))
}

fn series_report(s: &KClassSeries, name: &str, horizon: i64) -> Report {
    let text = match &s.fit {
        Some(f) => format!("{name} = {f}\nexact through degree {}\n", s.exact_through),
        None => format!("{name}: no fit; exact through degree {}\n", s.exact_through),
    };
    let status = if s.fit_consistent() && s.exact_through >= horizon { Status::Ok } else { Status::Partial };
    Report::new(to_value(&s.to_json()), text).with(status)
}

fn kclass(g: &Global, m: &ModuleArgs, demo_p: Option<u64>, demo_h: Option<u64>) -> CliResult<Report> {
    if let Some(p) = demo_p {
        let rep = ktors_demo(p, demo_h.unwrap_or(p))?;
        let ok = rep.h_vanishes() && rep.l_matches() && rep.l_nonzero();
        return Ok(Report::new(to_value(&rep.to_json()), rep.text()).with(if ok { Status::Ok } else { Status::Partial }));
    }
    let m = module(g, m)?;
    let h = horizon(g, &m);
    Ok(series_report(&h_invariant(&m, h)?, "H", h))
}

fn l_invariant_cmd(g: &Global, m: &ModuleArgs, max_i: Option<usize>) -> CliResult<Report> {
    let m = module(g, m)?;
    let h = horizon(g, &m);
    let depth = max_i.unwrap_or((h - m.min_degree()).max(0) as usize);
    Ok(series_report(&l_invariant(&m, depth, h)?, "L", h))
}

fn bound_check(g: &Global, ideal: Option<&str>, random: Option<usize>, max_d: usize, limit: u64) -> CliResult<Report> {
    let specs = match (ideal, random) {
        (Some(arg), _) => {
            let j: IdealSpecJson = load(arg)?;
            vec![IdealSpec::from_json(&context(g)?, &j)?]
        }
        (None, Some(count)) => random_batch(count, max_d, g.seed)?,
        (None, None) => return Err(CliError::Usage("pass --ideal or --random".into())),
    };
    let mut reports = Vec::new();
    let mut text = format!("{:>4}  {:>2}  {:>8}  {:>8}  {:>6}  {:>6}  chain\n", "#", "d", "N", "bound", "t1", "pass");
    let mut all_pass = true;
    for (k, rep) in check_batch(&specs, limit).into_iter().enumerate() {
        let rep = rep?;
        all_pass &= rep.pass && rep.pass_chain;
        let n = rep.n.map_or(format!(">{}", rep.search_limit), |n| n.to_string());
        let t1 = rep.computed_t1.map_or("-".into(), |t| t.to_string());
        let chain: Vec<String> = rep.chain.chain.iter().map(|c| c.join(",")).collect();
        let _ = writeln!(text, "{k:>4}  {:>2}  {n:>8}  {:>8}  {t1:>6}  {:>6}  [{}]", rep.d, rep.bound, rep.pass, chain.join("; "));
        reports.push(rep);
    }
    let status = if all_pass { Status::Ok } else { Status::Partial };
    Ok(Report::new(json!({ "all_pass": all_pass, "reports": reports }), text).with(status))
}

fn a2_check(g: &Global, ideal: &str, h: u64, limit: u64) -> CliResult<Report> {
    let pi = Arc::new(pi_spec(g)?.build()?);
    let gens = elements(pi.ring(), ideal)?;
    let v = a2_condition_check(&pi, &gens, h, limit)?;
    let (text, status) = match &v {
        A2Verdict::Bounded { n, exponent } => (format!("bounded: n = {n} (torsion exponent {exponent})"), Status::Ok),
        A2Verdict::Unbounded => ("unbounded".to_string(), Status::Ok),
        A2Verdict::Inconclusive { searched } => (format!("inconclusive after {searched} terms"), Status::Partial),
    };
    Ok(Report::new(to_value(&v), text).with(status))
}

fn counterexample(p: u64, r: u32) -> CliResult<Report> {
    let rep = bivariate_counterexample(p, r)?;
    let q = rep.q();
    let text = format!(
        "p = {p}, r = {r}, bidegree ({q},{q})\nrelation identity: {}\nnew syzygies: {}\n",
        rep.identity_holds,
        rep.quotient.describe()
    );
    Ok(Report::new(to_value(&rep.to_json()), text))
}

fn recover(g: &Global, input: Option<&str>, up_to: u64) -> CliResult<Report> {
    let sc = match input {
        Some(arg) => {
            let j: StructureConstantsJson = load(arg)?;
            StructureConstants::from_json(&j)?
        }
        None => StructureConstants::from_pi(&pi_spec(g)?.build()?, up_to),
    };
    let rec = recover_pi(&sc)?;
    let r = &sc.ring;
    let values: Vec<(u64, String)> = rec.values.iter().map(|(n, v)| (*n, r.format(v))).collect();
    let mut text = format!("b = {:?}\n", rec.b);
    text.push_str(&pieces_text(values.iter().map(|(n, v)| (*n as i64, v.clone()))));
    Ok(Report::new(json!({ "ring": r, "pi": values, "b": rec.b }), text))
}

fn run(cli: &Cli) -> CliResult<Report> {
    let g = &cli.global;
    match &cli.command {
        Command::Cbinom { n, m } => cbinom(g, *n, *m),
        Command::PiDerive { up_to } => pi_derive(g, *up_to),
        Command::PiCheck { up_to } => pi_check(g, *up_to),
        Command::PiTransform { h, up_to } => pi_transform(g, *h, *up_to),
        Command::Hilbert { module } => hilbert(g, module),
        Command::Syzygy { map, module } => syzygy(g, map.as_deref(), module),
        Command::Tor { module, max_i } => tor_cmd(g, module, *max_i),
        Command::Torsion { module } => torsion(g, module),
        Command::Special { module } => special(g, module),
        Command::Kclass { module, demo_p, demo_h } => kclass(g, module, *demo_p, *demo_h),
        Command::LInvariant { module, max_i } => l_invariant_cmd(g, module, *max_i),
        Command::BoundCheck { ideal, random, max_d, limit } => bound_check(g, ideal.as_deref(), *random, *max_d, *limit),
        Command::A2Check { ideal, h, limit } => a2_check(g, ideal, *h, *limit),
        Command::Counterexample { p, r } => counterexample(*p, *r),
        Command::RecoverPi { input, up_to } => recover(g, input.as_deref(), *up_to),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(rep) => {
            match cli.global.out {
                Format::Json => println!("{}", serde_json::to_string_pretty(&rep.json).expect("valid JSON")),
                Format::Text => print!("{}{}", rep.text, if rep.text.ends_with('\n') { "" } else { "\n" }),
            }
            ExitCode::from(match rep.status {
                Status::Ok => 0,
                Status::Failed => 1,
                Status::Partial => 2,
            })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
