use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::mpsc;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use polyent::catalog;
use polyent::cone::{orbit, orbit_dedup, shannon_rays, symmetric_group, DdOptions};
use polyent::derive::{
    build_copy_system, build_gmaxe_system, build_maxe_system, explicit_copy, parse_copy_spec, parse_gmaxe_spec,
    parse_maxe_spec, precheck, CopyFlags, DerivedSystem,
};
use polyent::dist::parse_distribution;
use polyent::linear::{parse_rep, write_rep};
use polyent::lp::{feasible_with_system, implies, shannon_decompose, ConstraintSystem, FarkasCertificate, Feasibility, Implication, SparseVec};
use polyent::shannon::{shannon_basic, shannon_instances, submodular_instances};
use polyent::text::{parse_functional, parse_polymatroid, write_functional};
use polyent::{Error, GroundSet, InfoExpr, LinearFunctional, Polymatroid, SetFunction};

#[derive(Parser)]
#[command(name = "polyent", version, about = "Polymatroids, entropy profiles and derived inequalities")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized operations.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for cone and LP sections.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Abort ray enumeration beyond this many intermediate rays.
    #[arg(long, global = true)]
    max_rays: Option<usize>,
    /// Abort when a distribution has more cells than this.
    #[arg(long, global = true)]
    max_cells: Option<usize>,
    /// Wall-clock limit in seconds.
    #[arg(long, global = true)]
    timeout: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct SystemFlags {
    /// Use only the submodular basic inequalities.
    #[arg(long)]
    balanced: bool,
    /// Add the swap symmetry for partial copies as well.
    #[arg(long, alias = "assume-symmetric-acopy")]
    symmetric_acopy: bool,
    /// Turn vanishing maximum-entropy terms into equalities.
    #[arg(long)]
    exact_independence: bool,
}

#[derive(Subcommand)]
enum Command {
    /// List the basic inequalities on n elements.
    Shannon {
        #[arg(long)]
        n: usize,
    },
    /// Check the polymatroid axioms of a rank file or a linear representation.
    Check {
        file: PathBuf,
        /// For a representation: add a generic vector set over this subset (needs --seed).
        #[arg(long)]
        extend: Option<String>,
        #[arg(long, default_value_t = 1)]
        alpha: usize,
        #[arg(long, default_value = "z")]
        label: String,
    },
    /// Evaluate an information expression.
    Eval {
        #[arg(long)]
        expr: String,
        file: PathBuf,
    },
    /// Extreme rays of the basic-inequality cone.
    Rays {
        #[arg(long)]
        n: usize,
        /// Allow the five-element enumeration.
        #[arg(long)]
        long: bool,
    },
    /// Build a copy system; enumerate its consequences or test a target.
    Derive {
        spec: PathBuf,
        #[command(flatten)]
        flags: SystemFlags,
        #[arg(long)]
        target: Option<PathBuf>,
        /// Check a saved certificate instead of solving.
        #[arg(long)]
        verify: Option<PathBuf>,
    },
    /// Maximum-entropy system from `fix:` or `indep:` lines.
    Maxe {
        spec: PathBuf,
        #[command(flatten)]
        flags: SystemFlags,
        #[arg(long)]
        target: Option<PathBuf>,
        #[arg(long)]
        verify: Option<PathBuf>,
    },
    /// Maximum-entropy system over a map onto the base.
    Gmaxe {
        spec: PathBuf,
        #[command(flatten)]
        flags: SystemFlags,
        #[arg(long)]
        target: Option<PathBuf>,
        #[arg(long)]
        verify: Option<PathBuf>,
    },
    /// Does a system imply an inequality?
    Implies {
        /// Catalog name or functional file.
        #[arg(long)]
        ineq: String,
        /// Copy, maxe or gmaxe spec; the basic inequalities when omitted.
        #[arg(long)]
        system: Option<PathBuf>,
        #[command(flatten)]
        flags: SystemFlags,
        #[arg(long)]
        verify: Option<PathBuf>,
    },
    /// Write an inequality as a combination of basic ones.
    Decompose {
        #[arg(long)]
        ineq: String,
    },
    /// Entropy profile of a distribution.
    Profile { file: PathBuf },
    /// Advisories for each copy step.
    Precheck {
        spec: PathBuf,
        #[arg(long)]
        target: Option<PathBuf>,
    },
    /// Named inequalities.
    Catalog {
        #[command(subcommand)]
        action: Option<CatalogAction>,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    Show { name: String },
}

/// Failure modes mapped to exit codes.
#[derive(Debug)]
enum Fail {
    Usage(String),
    Cap(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        match e {
            Error::Cap(m) => Fail::Cap(m),
            other => Fail::Usage(other.to_string()),
        }
    }
}

struct Outcome {
    code: u8,
    text: String,
}

impl Outcome {
    fn ok(text: String) -> Outcome {
        Outcome { code: 0, text }
    }

    fn answer(yes: bool, text: String) -> Outcome {
        Outcome {
            code: if yes { 0 } else { 1 },
            text,
        }
    }
}

type Run = Result<Outcome, Fail>;

struct Ctx {
    json: bool,
    opts: DdOptions,
    max_cells: Option<usize>,
}

fn read(path: &Path) -> Result<String, Fail> {
    std::fs::read_to_string(path).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))
}

fn at<T>(path: &Path, r: polyent::Result<T>) -> Result<T, Fail> {
    r.map_err(|e| match e {
        Error::Cap(m) => Fail::Cap(m),
        other => Fail::Usage(format!("{}: {other}", path.display())),
    })
}

fn load_poly(path: &Path) -> Result<Polymatroid, Fail> {
    let text = read(path)?;
    at(path, parse_polymatroid(&text))
}

fn load_ineq(spec: &str) -> Result<LinearFunctional, Fail> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = read(path)?;
        return at(path, parse_functional(&text));
    }
    Ok(catalog::get(spec)?.functional())
}

/// Moves `e` onto `ground` when only the labels differ.
fn onto(e: &LinearFunctional, ground: &GroundSet) -> Result<LinearFunctional, Fail> {
    if e.ground() == ground {
        return Ok(e.clone());
    }
    Ok(e.relabeled(ground.clone())?)
}

fn poly_onto(f: &Polymatroid, ground: &GroundSet) -> Result<Polymatroid, Fail> {
    if f.ground() == ground {
        return Ok(f.clone());
    }
    if f.len() != ground.len() {
        return Err(Fail::Usage("target ground set does not match the system".into()));
    }
    Ok(Polymatroid::from_fn(ground.clone(), |s| f.at(s)))
}

#[derive(Clone, Copy)]
enum Kind {
    Copy,
    Maxe,
    Gmaxe,
}

fn kind_of(path: &Path, text: &str) -> Kind {
    match path.extension().and_then(|e| e.to_str()) {
        Some("copy") => return Kind::Copy,
        Some("maxe") => return Kind::Maxe,
        Some("gmaxe") => return Kind::Gmaxe,
        _ => {}
    }
    let has = |key: &str| text.lines().any(|l| l.trim_start().starts_with(key));
    if has("map:") {
        Kind::Gmaxe
    } else if has("fix:") || has("indep:") {
        Kind::Maxe
    } else {
        Kind::Copy
    }
}

fn build(path: &Path, kind: Kind, flags: &SystemFlags) -> Result<DerivedSystem, Fail> {
    let text = read(path)?;
    match kind {
        Kind::Copy => {
            let copy_flags = CopyFlags {
                balanced: flags.balanced,
                symmetric_acopy: flags.symmetric_acopy,
                ..CopyFlags::default()
            };
            let seq = at(path, parse_copy_spec(&text, copy_flags))?;
            Ok(build_copy_system(&seq)?)
        }
        Kind::Maxe => {
            let mut spec = at(path, parse_maxe_spec(&text))?;
            spec.exact_independence = flags.exact_independence;
            Ok(build_maxe_system(&spec)?)
        }
        Kind::Gmaxe => {
            let mut spec = at(path, parse_gmaxe_spec(&text))?;
            spec.exact_independence = flags.exact_independence;
            Ok(build_gmaxe_system(&spec)?)
        }
    }
}

fn sparse_json(sys: &ConstraintSystem, v: &SparseVec) -> Value {
    Value::Object(
        v.iter()
            .map(|(j, c)| (sys.vars[*j].clone(), Value::String(c.to_string())))
            .collect(),
    )
}

fn functional_json(e: &LinearFunctional) -> Value {
    let g = e.ground();
    Value::Object(
        e.coeffs()
            .map(|(s, c)| (g.display(s), Value::String(c.to_string())))
            .collect(),
    )
}

fn cert_json(sys: &ConstraintSystem, cert: &FarkasCertificate, ok: bool) -> Value {
    json!({
        "rows": cert.multipliers.iter().map(|(i, m)| json!({"tag": sys.rows[*i].tag, "weight": m.to_string()})).collect::<Vec<_>>(),
        "check": if ok { "OK" } else { "FAILED" },
    })
}

/// Reads `tag weight` lines back into row multipliers.
fn parse_certificate(sys: &ConstraintSystem, text: &str) -> Result<FarkasCertificate, Fail> {
    let mut multipliers = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        // status words and comments carry no multiplier
        if line.starts_with('#') || line.starts_with("check:") || !line.contains(char::is_whitespace) || line == "not implied" {
            continue;
        }
        let (tag, w) = line
            .rsplit_once(char::is_whitespace)
            .ok_or_else(|| Fail::Usage(format!("certificate line {}: expected `tag weight`", no + 1)))?;
        let tag = tag.trim();
        let mut hits = sys.rows.iter().enumerate().filter(|(_, r)| r.tag == tag).map(|(i, _)| i);
        let i = hits
            .next()
            .ok_or_else(|| Fail::Usage(format!("certificate line {}: no row tagged `{tag}`", no + 1)))?;
        if hits.next().is_some() {
            return Err(Fail::Usage(format!("certificate line {}: tag `{tag}` is ambiguous", no + 1)));
        }
        let w = polyent::num::parse_rational(w).map_err(|e| Fail::Usage(format!("certificate line {}: {e}", no + 1)))?;
        multipliers.push((i, w));
    }
    Ok(FarkasCertificate { multipliers })
}

fn verify_outcome(ctx: &Ctx, ok: bool) -> Outcome {
    let text = if ctx.json {
        json!({"check": if ok { "OK" } else { "FAILED" }}).to_string() + "\n"
    } else {
        format!("check: {}\n", if ok { "OK" } else { "FAILED" })
    };
    Outcome::answer(ok, text)
}

fn cmd_shannon(ctx: &Ctx, n: usize) -> Run {
    let g = GroundSet::letters(n)?;
    let list = shannon_instances(n);
    let basic = shannon_basic(&g)?;
    if ctx.json {
        let items: Vec<Value> = list
            .iter()
            .zip(&basic)
            .map(|(i, e)| json!({"tag": i.tag(&g), "functional": functional_json(e)}))
            .collect();
        return Ok(Outcome::ok(json!({"n": n, "count": list.len(), "inequalities": items}).to_string() + "\n"));
    }
    let mut out = format!("# {} basic inequalities on {}\n", list.len(), g);
    for (i, e) in list.iter().zip(&basic) {
        let _ = writeln!(out, "{}  {}", i.tag(&g), e.pretty());
    }
    Ok(Outcome::ok(out))
}

fn cmd_check(ctx: &Ctx, file: &Path, extend: Option<&str>, alpha: usize, label: &str, seed: Option<u64>) -> Run {
    let text = read(file)?;
    let is_rep = text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#')).is_some_and(|l| l.starts_with("prime:"));
    let mut prefix = String::new();
    let f = if is_rep {
        let mut rep = at(file, parse_rep(&text))?;
        if let Some(z) = extend {
            let seed = seed.ok_or_else(|| Fail::Usage("--extend picks random vectors; pass --seed".into()))?;
            let z = rep.ground().parse_subset(z)?;
            rep = rep.generic_principal_extension(z, alpha, label, seed)?;
            if !ctx.json {
                prefix = write_rep(&rep);
            }
        }
        rep.to_polymatroid()
    } else {
        if extend.is_some() {
            return Err(Fail::Usage("--extend needs a linear representation file".into()));
        }
        at(file, parse_polymatroid(&text))?
    };
    let verdict = f.check_polymatroid();
    let text = if ctx.json {
        json!({"polymatroid": verdict.is_ok(), "violation": verdict.as_ref().err().map(|e| e.to_string())}).to_string() + "\n"
    } else {
        match &verdict {
            Ok(()) => format!("{prefix}polymatroid\n"),
            Err(e) => format!("{prefix}{e}\n"),
        }
    };
    Ok(Outcome::answer(verdict.is_ok(), text))
}

fn cmd_eval(ctx: &Ctx, expr: &str, file: &Path) -> Run {
    let f = load_poly(file)?;
    let e = InfoExpr::parse(f.ground(), expr)?;
    let v = e.eval(&f)?;
    let text = if ctx.json {
        json!({"expr": e.to_string(), "value": v.to_string()}).to_string() + "\n"
    } else {
        format!("{v}\n")
    };
    Ok(Outcome::ok(text))
}

fn cmd_rays(ctx: &Ctx, n: usize, long: bool) -> Run {
    if n < 2 || n > 5 {
        return Err(Fail::Usage("rays: n must be between 2 and 5".into()));
    }
    if n == 5 && !long {
        return Err(Fail::Usage("rays: n = 5 runs for hours; pass --long".into()));
    }
    let g = GroundSet::letters(n)?;
    let rays = shannon_rays(&g, ctx.opts)?;
    let group = symmetric_group(n);
    let classes = orbit_dedup(&rays, &group);
    let class_of = |v: &[num_bigint::BigInt]| {
        let rep = orbit(v, &group).into_iter().next().expect("orbit contains the ray");
        classes.iter().position(|c| c.representative == rep).expect("class exists")
    };
    let polys: Vec<LinearFunctional> = rays.functionals(&g)?;
    if ctx.json {
        let items: Vec<Value> = polys
            .iter()
            .zip(&rays.rays)
            .map(|(e, v)| json!({"class": class_of(v), "ranks": functional_json(e)}))
            .collect();
        let cls: Vec<Value> = classes
            .iter()
            .map(|c| json!({"orbit_size": c.orbit_size, "members": c.members}))
            .collect();
        return Ok(Outcome::ok(
            json!({"n": n, "rays": rays.len(), "classes": classes.len(), "class_sizes": cls, "list": items}).to_string() + "\n",
        ));
    }
    let mut out = format!("# {} rays in {} orbit classes\n", rays.len(), classes.len());
    for (k, (e, v)) in polys.iter().zip(&rays.rays).enumerate() {
        let c = class_of(v);
        let _ = writeln!(out, "# ray {} class {} orbit {}", k + 1, c + 1, classes[c].orbit_size);
        out.push_str(&write_functional(e));
    }
    Ok(Outcome::ok(out))
}

fn describe_system(d: &DerivedSystem) -> String {
    let mut out = format!(
        "# base {} ground {} vars {} main {} rows {} classes {}\n",
        d.base,
        d.ground,
        d.sys.nvars(),
        d.sys.main,
        d.sys.rows.len(),
        d.classes
    );
    for n in &d.notes {
        let _ = writeln!(out, "# note: {n}");
    }
    out
}

fn system_verb(ctx: &Ctx, spec: &Path, kind: Kind, flags: &SystemFlags, target: Option<&Path>, verify: Option<&Path>) -> Run {
    let d = build(spec, kind, flags)?;
    match target {
        Some(t) => {
            let f = poly_onto(&load_poly(t)?, &d.base)?;
            let sys = d.with_main_fixed(&f)?;
            if let Some(cert) = verify {
                let c = parse_certificate(&sys, &read(cert)?)?;
                return Ok(verify_outcome(ctx, c.refutes(&sys)));
            }
            let (full, res) = feasible_with_system(&sys, None, None);
            let (feasible, cert_text, cert_value) = match &res {
                Feasibility::Infeasible(c) => {
                    let ok = c.refutes(&full);
                    (false, c.render(&full, ok), cert_json(&full, c, ok))
                }
                _ => (true, String::new(), Value::Null),
            };
            let text = if ctx.json {
                json!({"aux_vars": sys.nvars(), "rows": sys.rows.len(), "feasible": feasible, "certificate": cert_value}).to_string() + "\n"
            } else {
                format!(
                    "{}# reduced system: {} variables\n{}\n{}",
                    describe_system(&d),
                    sys.nvars(),
                    if feasible { "feasible" } else { "infeasible" },
                    cert_text
                )
            };
            Ok(Outcome::answer(feasible, text))
        }
        None => {
            if verify.is_some() {
                return Err(Fail::Usage("--verify needs --target here; use `implies` for inequalities".into()));
            }
            let news = d.new_inequalities(ctx.opts)?;
            if ctx.json {
                let items: Vec<Value> = news.iter().map(functional_json).collect();
                return Ok(Outcome::ok(
                    json!({"vars": d.sys.nvars(), "main": d.sys.main, "rows": d.sys.rows.len(), "classes": d.classes, "new": items})
                        .to_string()
                        + "\n",
                ));
            }
            let mut out = describe_system(&d);
            let _ = writeln!(out, "# {} consequences not implied by the basic inequalities", news.len());
            for e in &news {
                let _ = writeln!(out, "# {}", e.pretty());
                out.push_str(&write_functional(e));
            }
            Ok(Outcome::ok(out))
        }
    }
}

fn cmd_implies(ctx: &Ctx, ineq: &str, system: Option<&Path>, flags: &SystemFlags, verify: Option<&Path>) -> Run {
    let e = load_ineq(ineq)?;
    let (sys, target) = match system {
        Some(path) => {
            let text = read(path)?;
            let d = build(path, kind_of(path, &text), flags)?;
            let e = onto(&e, &d.base)?;
            let t = d.target(&e)?;
            (d.sys, t)
        }
        None => {
            let sys = ConstraintSystem::shannon(e.ground());
            let t = sys.target_from(&e)?;
            (sys, t)
        }
    };
    if let Some(cert) = verify {
        let c = parse_certificate(&sys, &read(cert)?)?;
        return Ok(verify_outcome(ctx, c.proves(&sys, &target)));
    }
    let res = implies(&sys, &target);
    let text = match &res {
        Implication::Yes(c) => {
            let ok = c.proves(&sys, &target);
            if ctx.json {
                json!({"implied": true, "certificate": cert_json(&sys, c, ok)}).to_string() + "\n"
            } else {
                format!("implied\n{}", c.render(&sys, ok))
            }
        }
        Implication::No(point) => {
            let witness = SparseVec::from_iter(point.iter().cloned().enumerate().filter(|(_, v)| !num_traits::Zero::is_zero(v)));
            if ctx.json {
                json!({"implied": false, "witness": sparse_json(&sys, &witness)}).to_string() + "\n"
            } else {
                let mut out = "not implied\n# witness point\n".to_string();
                for (j, v) in &witness {
                    let _ = writeln!(out, "{} {}", sys.vars[*j], v);
                }
                out
            }
        }
    };
    Ok(Outcome::answer(matches!(res, Implication::Yes(_)), text))
}

fn cmd_decompose(ctx: &Ctx, ineq: &str) -> Run {
    let e = load_ineq(ineq)?;
    let g = e.ground().clone();
    // submodular terms alone when they suffice, as for balanced functionals
    let b2 = submodular_instances(g.len());
    let res = shannon_decompose(&e, Some(&b2)).or_else(|_| shannon_decompose(&e, None));
    match res {
        Ok(parts) => {
            let total: polyent::Rational = parts.iter().map(|(_, w)| w.clone()).sum();
            let text = if ctx.json {
                let items: Vec<Value> = parts
                    .iter()
                    .map(|(i, w)| json!({"tag": i.tag(&g), "weight": w.to_string()}))
                    .collect();
                json!({"shannon": true, "total": total.to_string(), "terms": items}).to_string() + "\n"
            } else {
                let mut out = String::new();
                for (i, w) in &parts {
                    let _ = writeln!(out, "{} {}", i.tag(&g), w);
                }
                let _ = writeln!(out, "total: {total}");
                out
            };
            Ok(Outcome::ok(text))
        }
        Err(Error::Failed(msg)) => {
            let text = if ctx.json {
                json!({"shannon": false, "reason": msg}).to_string() + "\n"
            } else {
                format!("{msg}\n")
            };
            Ok(Outcome::answer(false, text))
        }
        Err(other) => Err(other.into()),
    }
}

fn cmd_profile(ctx: &Ctx, file: &Path) -> Run {
    let text = read(file)?;
    let d = at(file, parse_distribution(&text))?;
    if let Some(cap) = ctx.max_cells {
        let cells: usize = d.alphabets().iter().product();
        if cells > cap {
            return Err(Fail::Cap(format!("{cells} cells exceed --max-cells {cap}")));
        }
    }
    let p = d.profile();
    let out = if ctx.json {
        let g = d.ground();
        let map: serde_json::Map<String, Value> = g
            .nonempty_subsets()
            .zip(p.values())
            .map(|(s, v)| (g.display(s), json!(v)))
            .collect();
        json!({"profile": map}).to_string() + "\n"
    } else {
        p.to_text()
    };
    Ok(Outcome::ok(out))
}

fn cmd_precheck(ctx: &Ctx, spec: &Path, target: Option<&Path>) -> Run {
    let text = read(spec)?;
    let seq = at(spec, parse_copy_spec(&text, CopyFlags::default()))?;
    let f = match target {
        Some(t) => Some(poly_onto(&load_poly(t)?, &seq.ground0)?),
        None => None,
    };
    let mut items = Vec::new();
    let mut out = String::new();
    for (k, step) in seq.steps.iter().enumerate() {
        let ground = seq.ground_after(k)?;
        // the target lives on the base only
        let f_here = if k == 0 { f.as_ref() } else { None };
        let adv = precheck(step, &ground, f_here);
        let explicit = f_here.map(|f| explicit_copy(f, step).is_ok());
        let _ = writeln!(out, "step {}:", k + 1);
        if adv.is_empty() {
            out.push_str("  no advisory\n");
        }
        for a in &adv {
            let _ = writeln!(out, "  {}", a.describe(&ground));
        }
        if let Some(x) = explicit {
            let _ = writeln!(out, "  explicit copy of the target: {}", if x { "yes" } else { "no" });
        }
        items.push(json!({
            "step": k + 1,
            "advisories": adv.iter().map(|a| json!({"code": a.code(), "text": a.describe(&ground)})).collect::<Vec<_>>(),
            "explicit_copy": explicit,
        }));
    }
    if ctx.json {
        out = json!({"steps": items}).to_string() + "\n";
    }
    Ok(Outcome::ok(out))
}

fn cmd_catalog(ctx: &Ctx, action: Option<&CatalogAction>) -> Run {
    match action {
        None | Some(CatalogAction::List) => {
            let names = catalog::list();
            if ctx.json {
                let items: Vec<Value> = names
                    .iter()
                    .map(|n| {
                        let e = catalog::get(n).expect("listed names resolve");
                        json!({"name": n, "ground_size": e.ground_size(), "note": e.note})
                    })
                    .collect();
                return Ok(Outcome::ok(json!({"entries": items}).to_string() + "\n"));
            }
            let mut out = String::new();
            for n in names {
                let e = catalog::get(&n)?;
                let _ = writeln!(out, "{:<16} {}  >= 0", n, e.expr);
            }
            Ok(Outcome::ok(out))
        }
        Some(CatalogAction::Show { name }) => {
            let e = catalog::get(name)?;
            let f = e.functional();
            let out = if ctx.json {
                json!({"name": e.name, "expr": e.expr.to_string(), "note": e.note, "functional": functional_json(&f)}).to_string()
                    + "\n"
            } else {
                format!("# {}\n# {}  >= 0\n# {}\n{}", e.name, e.expr, e.note, write_functional(&f))
            };
            Ok(Outcome::ok(out))
        }
    }
}

fn dispatch(cli: &Cli) -> Run {
    let ctx = Ctx {
        json: cli.json,
        opts: DdOptions {
            max_rays: cli.max_rays,
        },
        max_cells: cli.max_cells,
    };
    match &cli.command {
        Command::Shannon { n } => cmd_shannon(&ctx, *n),
        Command::Check { file, extend, alpha, label } => cmd_check(&ctx, file, extend.as_deref(), *alpha, label, cli.seed),
        Command::Eval { expr, file } => cmd_eval(&ctx, expr, file),
        Command::Rays { n, long } => cmd_rays(&ctx, *n, *long),
        Command::Derive { spec, flags, target, verify } => {
            system_verb(&ctx, spec, Kind::Copy, flags, target.as_deref(), verify.as_deref())
        }
        Command::Maxe { spec, flags, target, verify } => {
            system_verb(&ctx, spec, Kind::Maxe, flags, target.as_deref(), verify.as_deref())
        }
        Command::Gmaxe { spec, flags, target, verify } => {
            system_verb(&ctx, spec, Kind::Gmaxe, flags, target.as_deref(), verify.as_deref())
        }
        Command::Implies { ineq, system, flags, verify } => {
            cmd_implies(&ctx, ineq, system.as_deref(), flags, verify.as_deref())
        }
        Command::Decompose { ineq } => cmd_decompose(&ctx, ineq),
        Command::Profile { file } => cmd_profile(&ctx, file),
        Command::Precheck { spec, target } => cmd_precheck(&ctx, spec, target.as_deref()),
        Command::Catalog { action } => cmd_catalog(&ctx, action.as_ref()),
    }
}

fn finish(res: Run) -> ExitCode {
    match res {
        Ok(o) => {
            print!("{}", o.text);
            ExitCode::from(o.code)
        }
        Err(Fail::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Fail::Cap(m)) => {
            eprintln!("resource cap: {m}");
            ExitCode::from(3)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs == 0 {
        eprintln!("error: --jobs must be at least 1");
        return ExitCode::from(2);
    }
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let Some(secs) = cli.timeout else {
        return finish(dispatch(&cli));
    };
    let (tx, rx) = mpsc::channel();
    std::thread::spawn(move || {
        let _ = tx.send(dispatch(&cli));
    });
    match rx.recv_timeout(Duration::from_secs(secs)) {
        Ok(res) => finish(res),
        Err(_) => finish(Err(Fail::Cap(format!("no answer within {secs} s")))),
    }
}
