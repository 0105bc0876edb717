use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use difmod::cplx::{bass_numbers, bass_numbers_per_component, min_inj_resolution};
use difmod::dmod::{contractible_all4, dm_is_injective_object, dm_minimal_check, mu_d, strip_decompose, Provenance};
use difmod::fpmod::{injective_envelope, socle, HomSpace, ModElem, Submodule, TensorSpace};
use difmod::functors;
use difmod::verify::{self, Overrides, PROP_IDS};
use difmod::{Complex, DiffMod, Error, ModMap, Module, Ring};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "difmod", version, about = "Differential modules over Artinian chain rings")]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Rings.
    #[command(subcommand)]
    Ring(RingCmd),
    /// Finitely generated modules.
    #[command(subcommand)]
    Mod(ModCmd),
    /// Differential modules.
    #[command(subcommand)]
    Dm(DmCmd),
    /// Complexes and injective resolutions.
    #[command(subcommand)]
    Cx(CxCmd),
    /// Functors between complexes and differential modules.
    #[command(subcommand)]
    Fun(FunCmd),
    /// Run proposition suites.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum RingCmd {
    Info(RingArg),
}

#[derive(Args, Clone)]
struct RingArg {
    #[arg(long)]
    ring: String,
}

#[derive(Args, Clone)]
struct ModArg {
    #[arg(long)]
    ring: String,
    /// Exponent list such as "[2,1]", or a JSON document (inline or a path).
    #[arg(long)]
    module: String,
}

#[derive(Args, Clone)]
struct TwoMods {
    #[command(flatten)]
    m: ModArg,
    #[arg(long)]
    other: String,
}

#[derive(Args, Clone)]
struct MapArg {
    #[arg(long)]
    ring: String,
    #[arg(long)]
    dom: String,
    #[arg(long)]
    cod: String,
    /// Rows of entries, e.g. "[[2,0],[1,\"x\"]]".
    #[arg(long)]
    matrix: String,
}

#[derive(Subcommand)]
enum ModCmd {
    Normalize(ModArg),
    Hom(TwoMods),
    Ker(MapArg),
    Coker(MapArg),
    Soc(ModArg),
    Env(ModArg),
    Essential {
        #[command(flatten)]
        m: ModArg,
        /// Generators as rows of global coordinates.
        #[arg(long, default_value = "[]")]
        gens: String,
    },
    Tensor(TwoMods),
}

/// A differential module given as a document or as module plus matrix.
#[derive(Args, Clone)]
struct DmArg {
    #[arg(long)]
    input: Option<String>,
    #[arg(long)]
    ring: Option<String>,
    #[arg(long)]
    module: Option<String>,
    #[arg(long)]
    d: Option<String>,
}

#[derive(Subcommand)]
enum DmCmd {
    Make(DmArg),
    Cohomology(DmArg),
    Contractible(DmArg),
    Injective(DmArg),
    Minimal(DmArg),
    Strip(DmArg),
    Mu(DmArg),
}

/// A complex given as a document or as terms and differentials.
#[derive(Args, Clone)]
struct CxArg {
    #[arg(long)]
    input: Option<String>,
    #[arg(long)]
    ring: Option<String>,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    lo: i64,
    #[arg(long = "term")]
    terms: Vec<String>,
    #[arg(long = "diff")]
    diffs: Vec<String>,
}

#[derive(Args, Clone)]
struct ResolveArg {
    #[command(flatten)]
    m: ModArg,
    #[arg(long, default_value_t = 10)]
    length: usize,
}

#[derive(Subcommand)]
enum CxCmd {
    Make(CxArg),
    Cohomology(CxArg),
    Resolve(ResolveArg),
    Minimal(CxArg),
    Bass(ResolveArg),
}

#[derive(Subcommand)]
enum FunCmd {
    Exp {
        #[command(flatten)]
        dm: DmArg,
        #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
        from: i64,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        to: i64,
    },
    Comp(CxArg),
    CocompTrunc(ResolveArg),
    Boxtensor {
        #[command(flatten)]
        dm: DmArg,
        #[arg(long)]
        with: String,
    },
    Dhom {
        #[command(flatten)]
        dm: DmArg,
        #[arg(long)]
        with: String,
    },
    Adjcheck {
        /// `tensor-hom` or `exp-cocomp`.
        #[arg(long)]
        variant: String,
        /// Source differential module document.
        #[arg(long)]
        input: String,
        /// Module for `tensor-hom`.
        #[arg(long)]
        with: Option<String>,
        /// Target differential module (`tensor-hom`) or complex (`exp-cocomp`).
        #[arg(long)]
        target: String,
    },
    Lemma44 {
        #[command(flatten)]
        cx: CxArg,
        #[arg(long)]
        with: String,
    },
    Prop45(CxArg),
}

#[derive(Args, Clone)]
struct VerifyArgs {
    /// Proposition id; repeatable.
    #[arg(long = "prop")]
    props: Vec<String>,
    #[arg(long)]
    all: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Ring descriptor; repeatable.
    #[arg(long = "ring")]
    rings: Vec<String>,
    #[arg(long)]
    max_dim: Option<usize>,
    /// Include wall time in the reports (breaks byte-identical reruns).
    #[arg(long)]
    timing: bool,
}

enum Fail {
    Parse(String),
    Precondition(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        if e.is_parse() || matches!(e, Error::InvalidRing(_)) {
            Fail::Parse(e.to_string())
        } else {
            Fail::Precondition(e.to_string())
        }
    }
}

impl From<serde_json::Error> for Fail {
    fn from(e: serde_json::Error) -> Self {
        Fail::Parse(e.to_string())
    }
}

type Res<T> = std::result::Result<T, Fail>;

fn ring(s: &str) -> Res<Ring> {
    Ok(Ring::parse(s)?)
}

/// Inline JSON, or the contents of a file; a full report is unwrapped to
/// its `result`.
fn load_value(s: &str) -> Res<Value> {
    let t = s.trim_start();
    let text = if t.starts_with('{') || t.starts_with('[') {
        s.to_string()
    } else {
        std::fs::read_to_string(s).map_err(|e| Fail::Parse(format!("{s}: {e}")))?
    };
    let v: Value = serde_json::from_str(&text)?;
    Ok(match v {
        Value::Object(mut o) if o.contains_key("version") && o.contains_key("result") => o.remove("result").unwrap(),
        v => v,
    })
}

fn load<T: DeserializeOwned>(s: &str) -> Res<T> {
    Ok(serde_json::from_value(load_value(s)?)?)
}

fn module(r: &Ring, s: &str) -> Res<Module> {
    let t = s.trim_start();
    if t.starts_with('[') {
        return Ok(Module::parse_literal(r, s)?);
    }
    let m: Module = load(s)?;
    if m.ring() != r {
        return Err(Error::RingMismatch.into());
    }
    Ok(m)
}

fn rows(s: &str) -> Res<Vec<Vec<String>>> {
    let v: Value = serde_json::from_str(s)?;
    let bad = || Fail::Parse(format!("expected rows of entries, got `{s}`"));
    v.as_array()
        .ok_or_else(bad)?
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(bad)?
                .iter()
                .map(|x| match x {
                    Value::String(s) => Ok(s.clone()),
                    Value::Number(n) => Ok(n.to_string()),
                    _ => Err(bad()),
                })
                .collect()
        })
        .collect()
}

fn map_of(dom: &Module, cod: &Module, matrix: &str) -> Res<ModMap> {
    Ok(ModMap::from_global_matrix(dom, cod, &rows(matrix)?)?)
}

/// Coordinates `[c0, c1, ...]` over all generators in order.
fn elem(m: &Module, coords: &[String]) -> Res<ModElem> {
    if coords.len() != m.num_gens() {
        return Err(Fail::Parse(format!("element needs {} coordinates", m.num_gens())));
    }
    let r = m.ring();
    let mut v = m.zero_elem();
    let mut k = 0;
    for c in 0..r.num_components() {
        let cr = r.component(c);
        for i in 0..m.exps(c).len() {
            v.parts[c][i] = cr.parse_elem(&coords[k])?;
            k += 1;
        }
    }
    Ok(m.reduce(&v))
}

fn elem_coords(m: &Module, v: &ModElem) -> Vec<String> {
    let r = m.ring();
    (0..r.num_components()).flat_map(|c| v.parts[c].iter().map(move |x| r.component(c).format(x))).collect()
}

fn dm(a: &DmArg) -> Res<DiffMod> {
    if let Some(i) = &a.input {
        return load(i);
    }
    let (Some(r), Some(m)) = (&a.ring, &a.module) else {
        return Err(Fail::Parse("give --input, or --ring with --module and --d".into()));
    };
    let r = ring(r)?;
    let x = module(&r, m)?;
    let d = match &a.d {
        Some(s) => map_of(&x, &x, s)?,
        None => ModMap::zero(&x, &x),
    };
    Ok(DiffMod::new(x, d)?)
}

fn cx(a: &CxArg) -> Res<Complex> {
    if let Some(i) = &a.input {
        return load(i);
    }
    let Some(r) = &a.ring else {
        return Err(Fail::Parse("give --input, or --ring with --term and --diff".into()));
    };
    let r = ring(r)?;
    let terms: Vec<Module> = a.terms.iter().map(|t| module(&r, t)).collect::<Res<_>>()?;
    if terms.is_empty() {
        return Err(Fail::Parse("a complex needs at least one --term".into()));
    }
    if a.diffs.len() + 1 != terms.len() {
        return Err(Fail::Parse(format!("{} terms need {} differentials", terms.len(), terms.len() - 1)));
    }
    let diffs = a.diffs.iter().enumerate().map(|(k, s)| map_of(&terms[k], &terms[k + 1], s)).collect::<Res<_>>()?;
    Ok(Complex::new(&r, a.lo, terms, diffs)?)
}

fn sub_doc(s: &difmod::fpmod::Sub) -> Value {
    json!({ "module": s.module, "inclusion": s.inclusion })
}

fn ring_info(r: &Ring) -> Value {
    let comps: Vec<Value> = r
        .components()
        .iter()
        .map(|c| {
            json!({
                "descriptor": c.descriptor(),
                "m": c.m(),
                "prime": c.prime(),
                "uniformizer": c.uniformizer_symbol(),
                "residue_size": c.residue_size(),
                "order": c.quotient_size(c.m()),
            })
        })
        .collect();
    json!({
        "ring": r,
        "descriptor": r.descriptor(),
        "local": r.is_local(),
        "order": r.order(),
        "components": comps,
    })
}

fn run_mod(c: &ModCmd) -> Res<(Value, Value)> {
    Ok(match c {
        ModCmd::Normalize(a) => {
            let r = ring(&a.ring)?;
            let m = module(&r, &a.module)?;
            let cfg = json!({ "ring": a.ring, "module": a.module });
            let doc = json!({
                "module": m.canonical(),
                "length": m.length(),
                "mu": m.mu(),
                "free": m.is_free(),
                "cardinality": m.cardinality().map(|c| c.to_string()),
            });
            (cfg, doc)
        }
        ModCmd::Hom(t) | ModCmd::Tensor(t) => {
            let r = ring(&t.m.ring)?;
            let a = module(&r, &t.m.module)?;
            let b = module(&r, &t.other)?;
            let cfg = json!({ "ring": t.m.ring, "module": t.m.module, "other": t.other });
            let doc = if matches!(c, ModCmd::Hom(_)) {
                let h = HomSpace::new(&a, &b)?;
                json!({ "module": h.module, "normal_form": h.module.canonical(), "generators": h.generators() })
            } else {
                let t = TensorSpace::new(&a, &b)?;
                json!({ "module": t.module, "normal_form": t.module.canonical() })
            };
            (cfg, doc)
        }
        ModCmd::Ker(a) | ModCmd::Coker(a) => {
            let r = ring(&a.ring)?;
            let f = map_of(&module(&r, &a.dom)?, &module(&r, &a.cod)?, &a.matrix)?;
            let cfg = json!({ "ring": a.ring, "dom": a.dom, "cod": a.cod, "matrix": a.matrix });
            let doc = if matches!(c, ModCmd::Ker(_)) {
                sub_doc(&f.kernel())
            } else {
                let q = f.cokernel();
                json!({ "module": q.module, "projection": q.projection })
            };
            (cfg, doc)
        }
        ModCmd::Soc(a) => {
            let r = ring(&a.ring)?;
            let m = module(&r, &a.module)?;
            let s = socle(&m);
            (json!({ "ring": a.ring, "module": a.module }), json!({ "module": s.module, "inclusion": s.inclusion, "mu": s.mu }))
        }
        ModCmd::Env(a) => {
            let r = ring(&a.ring)?;
            let m = module(&r, &a.module)?;
            let (e, emb) = injective_envelope(&m);
            (json!({ "ring": a.ring, "module": a.module }), json!({ "module": e, "embedding": emb }))
        }
        ModCmd::Essential { m: a, gens } => {
            let r = ring(&a.ring)?;
            let m = module(&r, &a.module)?;
            let gs: Vec<ModElem> = rows(gens)?.iter().map(|g| elem(&m, g)).collect::<Res<_>>()?;
            let s = Submodule::new(&m, &gs)?;
            let nf = s.normal_form();
            let gens_out: Vec<Vec<String>> = gs.iter().map(|g| elem_coords(&m, g)).collect();
            (
                json!({ "ring": a.ring, "module": a.module, "gens": gens_out }),
                json!({ "essential": s.is_essential(), "submodule": sub_doc(&nf) }),
            )
        }
    })
}

fn dm_cfg(a: &DmArg) -> Value {
    json!({ "input": a.input, "ring": a.ring, "module": a.module, "d": a.d })
}

fn run_dm(c: &DmCmd) -> Res<(Value, Value)> {
    let a = match c {
        DmCmd::Make(a)
        | DmCmd::Cohomology(a)
        | DmCmd::Contractible(a)
        | DmCmd::Injective(a)
        | DmCmd::Minimal(a)
        | DmCmd::Strip(a)
        | DmCmd::Mu(a) => a,
    };
    let d = dm(a)?;
    let doc = match c {
        DmCmd::Make(_) => serde_json::to_value(&d)?,
        DmCmd::Cohomology(_) => {
            let h = d.cohomology();
            json!({ "module": h.module, "normal_form": h.module.canonical(), "acyclic": h.module.is_zero() })
        }
        DmCmd::Contractible(_) => {
            let c = contractible_all4(&d)?;
            json!({ "contractible": c.c1, "agree": c.agree(), "witnesses_verify": c.witnesses_verify(&d), "report": c })
        }
        DmCmd::Injective(_) => json!({ "injective": dm_is_injective_object(&d) }),
        DmCmd::Minimal(_) => json!({ "minimal": dm_minimal_check(&d)? }),
        DmCmd::Strip(_) => {
            let s = strip_decompose(&d)?;
            json!({ "verified": s.verify(&d), "decomposition": s })
        }
        DmCmd::Mu(_) => serde_json::to_value(mu_d(&d, &Provenance::input()))?,
    };
    Ok((dm_cfg(a), doc))
}

fn cx_cfg(a: &CxArg) -> Value {
    json!({ "input": a.input, "ring": a.ring, "lo": a.lo, "terms": a.terms, "diffs": a.diffs })
}

fn run_cx(c: &CxCmd) -> Res<(Value, Value)> {
    Ok(match c {
        CxCmd::Make(a) | CxCmd::Cohomology(a) | CxCmd::Minimal(a) => {
            let y = cx(a)?;
            let doc = match c {
                CxCmd::Make(_) => serde_json::to_value(&y)?,
                CxCmd::Cohomology(_) => {
                    let hs: Vec<Value> = y.degrees().map(|i| json!({ "degree": i, "module": y.cohomology(i) })).collect();
                    json!({ "cohomology": hs, "acyclic": y.is_acyclic() })
                }
                _ => json!({ "minimal": y.is_minimal()? }),
            };
            (cx_cfg(a), doc)
        }
        CxCmd::Resolve(a) | CxCmd::Bass(a) => {
            let r = ring(&a.m.ring)?;
            let m = module(&r, &a.m.module)?;
            let cfg = json!({ "ring": a.m.ring, "module": a.m.module, "length": a.length });
            let doc = if matches!(c, CxCmd::Resolve(_)) {
                let res = min_inj_resolution(&m, a.length);
                json!({ "verdict": res.verdict(), "resolution": res })
            } else if r.is_local() {
                serde_json::to_value(bass_numbers(&m, a.length)?)?
            } else {
                json!({ "per_component": bass_numbers_per_component(&m, a.length)? })
            };
            (cfg, doc)
        }
    })
}

fn run_fun(c: &FunCmd) -> Res<(Value, Value)> {
    Ok(match c {
        FunCmd::Exp { dm: a, from, to } => {
            let w = functors::exp_window(&dm(a)?, *from, *to)?;
            let mut cfg = dm_cfg(a);
            cfg["from"] = json!(from);
            cfg["to"] = json!(to);
            (cfg, serde_json::to_value(w)?)
        }
        FunCmd::Comp(a) => (cx_cfg(a), serde_json::to_value(functors::comp_cocomp_bounded(&cx(a)?)?)?),
        FunCmd::CocompTrunc(a) => {
            let r = ring(&a.m.ring)?;
            let m = module(&r, &a.m.module)?;
            let res = min_inj_resolution(&m, a.length);
            let t = functors::cocomp_truncated(&res, a.length)?;
            let mu = mu_d(&t.value, &t.provenance);
            let cfg = json!({ "ring": a.m.ring, "module": a.m.module, "length": a.length });
            (cfg, json!({ "dm": t.value, "provenance": t.provenance, "mu_d": mu }))
        }
        FunCmd::Boxtensor { dm: a, with } | FunCmd::Dhom { dm: a, with } => {
            let d = dm(a)?;
            let m = module(d.module().ring(), with)?;
            let out = if matches!(c, FunCmd::Boxtensor { .. }) { functors::boxtensor(&d, &m)? } else { functors::dhom(&m, &d)? };
            let mut cfg = dm_cfg(a);
            cfg["with"] = json!(with);
            (cfg, serde_json::to_value(out)?)
        }
        FunCmd::Adjcheck { variant, input, with, target } => {
            let x: DiffMod = load(input)?;
            let cfg = json!({ "variant": variant, "input": input, "with": with, "target": target });
            let rep = match variant.as_str() {
                "tensor-hom" => {
                    let w = with.as_ref().ok_or_else(|| Fail::Parse("tensor-hom needs --with".into()))?;
                    let m = module(x.module().ring(), w)?;
                    let y: DiffMod = load(target)?;
                    functors::adjunction_tensor_hom(&x, &m, &y)?
                }
                "exp-cocomp" => functors::adjunction_exp_cocomp(&x, &load::<Complex>(target)?)?,
                v => return Err(Fail::Parse(format!("unknown adjunction `{v}`"))),
            };
            (cfg, serde_json::to_value(rep)?)
        }
        FunCmd::Lemma44 { cx: a, with } => {
            let z = cx(a)?;
            let m = module(z.ring(), with)?;
            let rep = functors::lemma44_check(&m, &z)?;
            let mut cfg = cx_cfg(a);
            cfg["with"] = json!(with);
            (cfg, json!({ "holds": rep.holds(), "report": rep }))
        }
        FunCmd::Prop45(a) => {
            let rep = functors::prop45_check(&cx(a)?)?;
            (cx_cfg(a), json!({ "holds": rep.holds(), "report": rep }))
        }
    })
}

fn run_verify(a: &VerifyArgs) -> Res<(Value, Value, bool)> {
    let props: Vec<String> = if a.all {
        PROP_IDS.iter().map(|s| s.to_string()).collect()
    } else if a.props.is_empty() {
        return Err(Fail::Parse("give --prop <id> or --all".into()));
    } else {
        a.props.clone()
    };
    let o = Overrides {
        seed: a.seed,
        trials: a.trials,
        rings: (!a.rings.is_empty()).then(|| a.rings.clone()),
        max_dim: a.max_dim,
    };
    let mut reports = Vec::new();
    for p in &props {
        let cfg = verify::resolve_config(p, &o)?;
        reports.push(verify::run_suite_timed(p, &cfg, a.timing)?);
    }
    let failures: usize = reports.iter().map(|r| r.failures.len()).sum();
    let cfg = json!({
        "props": props,
        "seed": a.seed,
        "trials": a.trials,
        "rings": a.rings,
        "max_dim": a.max_dim,
        "timing": a.timing,
    });
    let doc = json!({ "failures": failures, "reports": reports });
    Ok((cfg, doc, failures == 0))
}

#[derive(Serialize)]
struct Report<'a> {
    version: &'a str,
    command: String,
    config: Value,
    result: Value,
}

fn command_name(c: &Cmd) -> String {
    let sub = match c {
        Cmd::Ring(_) => "info",
        Cmd::Mod(m) => match m {
            ModCmd::Normalize(_) => "normalize",
            ModCmd::Hom(_) => "hom",
            ModCmd::Ker(_) => "ker",
            ModCmd::Coker(_) => "coker",
            ModCmd::Soc(_) => "soc",
            ModCmd::Env(_) => "env",
            ModCmd::Essential { .. } => "essential",
            ModCmd::Tensor(_) => "tensor",
        },
        Cmd::Dm(m) => match m {
            DmCmd::Make(_) => "make",
            DmCmd::Cohomology(_) => "cohomology",
            DmCmd::Contractible(_) => "contractible",
            DmCmd::Injective(_) => "injective",
            DmCmd::Minimal(_) => "minimal",
            DmCmd::Strip(_) => "strip",
            DmCmd::Mu(_) => "mu",
        },
        Cmd::Cx(m) => match m {
            CxCmd::Make(_) => "make",
            CxCmd::Cohomology(_) => "cohomology",
            CxCmd::Resolve(_) => "resolve",
            CxCmd::Minimal(_) => "minimal",
            CxCmd::Bass(_) => "bass",
        },
        Cmd::Fun(m) => match m {
            FunCmd::Exp { .. } => "exp",
            FunCmd::Comp(_) => "comp",
            FunCmd::CocompTrunc(_) => "cocomp-trunc",
            FunCmd::Boxtensor { .. } => "boxtensor",
            FunCmd::Dhom { .. } => "dhom",
            FunCmd::Adjcheck { .. } => "adjcheck",
            FunCmd::Lemma44 { .. } => "lemma44",
            FunCmd::Prop45(_) => "prop45",
        },
        Cmd::Verify(_) => return "verify".into(),
    };
    let group = match c {
        Cmd::Ring(_) => "ring",
        Cmd::Mod(_) => "mod",
        Cmd::Dm(_) => "dm",
        Cmd::Cx(_) => "cx",
        Cmd::Fun(_) => "fun",
        Cmd::Verify(_) => "verify",
    };
    format!("{group} {sub}")
}

fn execute(cli: &Cli) -> Res<(Value, Value, bool)> {
    let ok = |(c, d): (Value, Value)| (c, d, true);
    Ok(match &cli.cmd {
        Cmd::Ring(RingCmd::Info(a)) => (json!({ "ring": a.ring }), ring_info(&ring(&a.ring)?), true),
        Cmd::Mod(c) => ok(run_mod(c)?),
        Cmd::Dm(c) => ok(run_dm(c)?),
        Cmd::Cx(c) => ok(run_cx(c)?),
        Cmd::Fun(c) => ok(run_fun(c)?),
        Cmd::Verify(a) => run_verify(a)?,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok((config, result, passed)) => {
            let report = Report { version: VERSION, command: command_name(&cli.cmd), config, result };
            let text = serde_json::to_string_pretty(&report).expect("reports serialize") + "\n";
            match &cli.out {
                Some(p) => {
                    if let Err(e) = std::fs::write(p, text) {
                        eprintln!("error: {}: {e}", p.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::from(if passed { 0 } else { 1 })
        }
        Err(Fail::Parse(m)) => {
            eprintln!("parse error: {m}");
            ExitCode::from(2)
        }
        Err(Fail::Precondition(m)) => {
            eprintln!("precondition violated: {m}");
            ExitCode::from(3)
        }
    }
}
