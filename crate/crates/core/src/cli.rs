//! The `hilbfrob` command line. Exit codes: 0 when every requested check
//! passes, 1 when a check fails, 2 on usage errors.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::acceptance;
use crate::error::{Error, Result};
use crate::fock::{CheckConfig, FockSpace, Relation};
use crate::format;
use crate::hilbert::{HilbertAlgebra, Triples, DEFAULT_BUDGET};
use crate::kummer::KummerAlgebra;
use crate::models::{abelian_with_torsion, model, Model, MODEL_NAMES};
use crate::presentation::{AlgebraPresentation, Element};
use crate::scalar::Q;
use crate::series::{cover_series_for, hilbert_series_for, HodgeSeries};
use crate::validate::validate;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "hilbfrob", version, about = "Exact algebra for Hilbert schemes of points via Frobenius algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Table, global = true)]
    pub format: OutputFormat,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
}

#[derive(Debug, Args)]
pub struct Source {
    /// Built-in model name (see `models list`).
    #[arg(long, conflicts_with = "file")]
    pub model: Option<String>,
    /// Presentation file.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the axioms of a presentation.
    Validate {
        #[command(flatten)]
        source: Source,
    },
    /// List or export the built-in models.
    Models {
        #[command(subcommand)]
        action: ModelsAction,
    },
    /// Build H^[n] and print dimensions, the product table or a product.
    Hilbert {
        #[command(flatten)]
        source: Source,
        #[arg(short)]
        n: usize,
        /// Print graded dimensions.
        #[arg(long)]
        dims: bool,
        /// Print the product table of the invariant basis.
        #[arg(long)]
        table: bool,
        /// Multiply two elements (JSON text or file paths).
        #[arg(long, num_args = 2, value_names = ["X", "Y"])]
        multiply: Option<Vec<String>>,
        /// Check the ring axioms: `all` or a number of random triples.
        #[arg(long)]
        check_ring: Option<String>,
        /// Seed for random triples.
        #[arg(long, default_value_t = acceptance::RING_SEED)]
        seed: u64,
        /// Cap on the number of H_n basis vectors (overrides HILBFROB_BUDGET).
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Build the Kummer algebra K^[n] of a Hopf presentation.
    Kummer {
        #[command(flatten)]
        source: Source,
        #[arg(short)]
        n: usize,
        /// Weight the abelian model by (Z/k)^4 (defaults to k = n for `abelian`).
        #[arg(long)]
        torsion: Option<u32>,
        /// Write K^[n] as a presentation file (`-` for stdout).
        #[arg(long)]
        export: Option<PathBuf>,
        /// Print the Leray identity rows.
        #[arg(long)]
        leray: bool,
    },
    /// Hodge generating functions.
    Series {
        #[command(flatten)]
        source: Source,
        /// Truncation order in z.
        #[arg(short = 'N')]
        order: usize,
        /// Sum over all weights of the group.
        #[arg(long)]
        cover: bool,
        /// Twisting weight, as coordinates `a,b,...` (default: the level generator).
        #[arg(long)]
        weight: Option<String>,
        /// Shift bidegrees of z^n by (n, n).
        #[arg(long)]
        unshift: bool,
        /// Evaluate, e.g. `p=1,q=1` for Betti numbers by (unshifted) degree.
        #[arg(long)]
        eval: Option<String>,
    },
    /// Check operator relations on the Fock space.
    Fock {
        #[command(flatten)]
        source: Source,
        /// Comma-separated relations, or `all`.
        #[arg(long, default_value = "heisenberg")]
        check: String,
        #[arg(long, default_value_t = 4)]
        max_weight: i64,
        #[arg(long, default_value_t = 3)]
        max_level: i64,
        /// Use the model's canonical class in boundary relations.
        #[arg(long)]
        with_canonical: bool,
    },
    /// Run the acceptance suite.
    Selftest {
        /// Comma-separated criterion numbers (default: all).
        #[arg(long)]
        only: Option<String>,
        /// Continue after the first failure.
        #[arg(long)]
        keep_going: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum ModelsAction {
    List,
    Export {
        name: String,
        /// For `abelian`: weight by (Z/k)^4.
        #[arg(long)]
        torsion: Option<u32>,
    },
}

/// Errors the user can fix by changing the command line.
fn is_usage(e: &Error) -> bool {
    matches!(e, Error::UnknownModel(_) | Error::Parse(_) | Error::BudgetExceeded(..) | Error::BoundExceeded { .. })
}

pub fn main_with_args(args: impl IntoIterator<Item = String>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let mut out = std::io::stdout().lock();
    match run(&cli, &mut out) {
        Ok(code) => code,
        Err(Error::Parse(m)) if m.contains("Broken pipe") => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", e);
            if is_usage(&e) {
                EXIT_USAGE
            } else {
                EXIT_CHECK_FAILED
            }
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Parse(format!("I/O: {}", e))
}

fn load(source: &Source) -> Result<(AlgebraPresentation, Option<Model>)> {
    match (&source.model, &source.file) {
        (Some(name), None) => {
            let m = model(name)?;
            Ok((m.presentation.clone(), Some(m)))
        }
        (None, Some(path)) => Ok((format::read_file(path)?, None)),
        _ => Err(Error::Parse("give exactly one of --model or --file".into())),
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    if let Some(t) = cli.threads {
        // ignore the error if a pool already exists (e.g. repeated calls in tests)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
    let json = cli.format == OutputFormat::Json;
    match &cli.command {
        Command::Validate { source } => {
            let (h, _) = load(source)?;
            let report = validate(&h);
            if json {
                let checks: Vec<_> = report
                    .checks
                    .iter()
                    .map(|c| json!({"axiom": c.axiom, "passed": c.passed, "witness": c.witness}))
                    .collect();
                writeln!(out, "{}", json!({"passed": report.passed(), "checks": checks})).map_err(io)?;
            } else {
                write!(out, "{}", report).map_err(io)?;
            }
            Ok(if report.passed() { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        Command::Models { action } => models(action, json, out),
        Command::Hilbert { source, n, dims, table, multiply, check_ring, seed, budget } => {
            let (h, _) = load(source)?;
            let budget = budget.unwrap_or_else(crate::hilbert::budget_from_env);
            if budget == 0 {
                return Err(Error::Parse(format!("budget must be positive (default {})", DEFAULT_BUDGET)));
            }
            let alg = HilbertAlgebra::build_with_budget(&h, *n, budget)?;
            hilbert(&alg, *dims || (!*table && multiply.is_none() && check_ring.is_none()), *table, multiply, check_ring, *seed, json, out)
        }
        Command::Kummer { source, n, torsion, export, leray } => {
            let (mut h, m) = load(source)?;
            let is_abelian = m.as_ref().map(|m| m.name == "abelian").unwrap_or(false);
            if let Some(k) = torsion.or(if is_abelian { Some(*n as u32) } else { None }) {
                if !is_abelian {
                    return Err(Error::Parse("--torsion applies to the abelian model only".into()));
                }
                h = abelian_with_torsion(k)?;
            }
            let k = KummerAlgebra::build(&h, *n)?;
            kummer(&k, export.as_ref(), *leray, json, out)
        }
        Command::Series { source, order, cover, weight, unshift, eval } => {
            let (h, _) = load(source)?;
            let s = if *cover {
                cover_series_for(&h, *order)?
            } else {
                let w = match weight {
                    None => h.group().default_level_generator(),
                    Some(text) => {
                        let coords = text
                            .split(',')
                            .map(|x| x.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad weight `{}`", text))))
                            .collect::<Result<Vec<_>>>()?;
                        h.group().from_coords(&coords)?
                    }
                };
                hilbert_series_for(&h, w, *order)?
            };
            series(&s, *unshift, eval.as_deref(), json, out)
        }
        Command::Fock { source, check, max_weight, max_level, with_canonical } => {
            let (h, m) = load(source)?;
            let relations: Vec<Relation> = if check == "all" {
                Relation::ALL.to_vec()
            } else {
                check.split(',').map(|s| Relation::parse(s.trim())).collect::<Result<_>>()?
            };
            let canonical_class: Option<Element> =
                if *with_canonical { m.and_then(|m| m.canonical_class) } else { None };
            let fock = FockSpace::standard(&h)?;
            let cfg = CheckConfig { max_weight: *max_weight, max_level: *max_level, canonical_class };
            let mut all = true;
            let mut rows = Vec::new();
            for rel in relations {
                let r = fock.commutator_check(rel, &cfg)?;
                all &= r.passed();
                if json {
                    rows.push(json!({"relation": rel.name(), "passed": r.passed(), "cases": r.cases, "witness": r.witness}));
                } else {
                    writeln!(out, "{}", r).map_err(io)?;
                }
                if !r.passed() {
                    break;
                }
            }
            if json {
                writeln!(out, "{}", json!(rows)).map_err(io)?;
            }
            Ok(if all { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        Command::Selftest { only, keep_going } => {
            let ids: Vec<u8> = match only {
                None => acceptance::CRITERIA.iter().map(|(i, _)| *i).collect(),
                Some(s) => s
                    .split(',')
                    .map(|x| x.trim().parse::<u8>().map_err(|_| Error::Parse(format!("bad criterion `{}`", x))))
                    .collect::<Result<_>>()?,
            };
            let mut all = true;
            for id in ids {
                let o = acceptance::run(id);
                if json {
                    writeln!(
                        out,
                        "{}",
                        json!({"criterion": o.id, "passed": o.passed, "detail": o.detail, "tolerance": acceptance::TOLERANCE})
                    )
                    .map_err(io)?;
                } else {
                    writeln!(out, "{}", o).map_err(io)?;
                }
                out.flush().map_err(io)?;
                all &= o.passed;
                if !o.passed && !keep_going {
                    break;
                }
            }
            Ok(if all { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
    }
}

fn models(action: &ModelsAction, json: bool, out: &mut dyn Write) -> Result<i32> {
    match action {
        ModelsAction::List => {
            let mut rows = Vec::new();
            for name in MODEL_NAMES {
                let m = model(name)?;
                let h = &m.presentation;
                if json {
                    rows.push(json!({"name": name, "dim": h.dim(), "d": h.degree_d(), "group_order": h.group().order(), "note": m.note}));
                } else {
                    writeln!(out, "{:<12} dim {:>2}  d = {}  |G| = {}  {}", name, h.dim(), h.degree_d(), h.group().order(), m.note)
                        .map_err(io)?;
                }
            }
            if json {
                writeln!(out, "{}", json!(rows)).map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        ModelsAction::Export { name, torsion } => {
            let h = match torsion {
                Some(k) if name == "abelian" => abelian_with_torsion(*k)?,
                Some(_) => return Err(Error::Parse("--torsion applies to the abelian model only".into())),
                None => model(name)?.presentation,
            };
            writeln!(out, "{}", format::to_json(&h)).map_err(io)?;
            Ok(EXIT_OK)
        }
    }
}

fn read_element(alg: &HilbertAlgebra, text: &str) -> Result<crate::hilbert::HilbertElement> {
    let body = if text.trim_start().starts_with('[') {
        text.to_string()
    } else {
        std::fs::read_to_string(text).map_err(|e| Error::Parse(format!("{}: {}", text, e)))?
    };
    let v: serde_json::Value = serde_json::from_str(&body).map_err(|e| Error::Parse(e.to_string()))?;
    alg.element_from_json(&v)
}

#[allow(clippy::too_many_arguments)]
fn hilbert(
    alg: &HilbertAlgebra,
    dims: bool,
    table: bool,
    multiply: &Option<Vec<String>>,
    check_ring: &Option<String>,
    seed: u64,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32> {
    let h = alg.presentation();
    let g = h.group();
    let mut code = EXIT_OK;
    if dims {
        let d = alg.dims();
        if json {
            let rows: Vec<_> = d
                .iter()
                .map(|((w, k), c)| json!({"weight": g.display(*w).to_string(), "degree": k, "dim": c}))
                .collect();
            writeln!(out, "{}", json!({"n": alg.n(), "dim": alg.dim(), "dims": rows})).map_err(io)?;
        } else {
            writeln!(out, "dim H^[{}] = {}", alg.n(), alg.dim()).map_err(io)?;
            for ((w, k), c) in d {
                writeln!(out, "  weight {:<8} degree {:>3}: {}", g.display(w).to_string(), k, c).map_err(io)?;
            }
        }
    }
    if table {
        alg.fill_table();
        let mut rows = Vec::new();
        for i in 0..alg.dim() {
            for j in 0..alg.dim() {
                let p = alg.invariant_product(i, j);
                if p.is_empty() {
                    continue;
                }
                if json {
                    let terms: Vec<_> = p.iter().map(|(k, c)| json!([k, c.to_string()])).collect();
                    rows.push(json!({"i": i, "j": j, "product": terms}));
                } else {
                    let terms: Vec<String> = p.iter().map(|(k, c)| format!("{}·v{}", c, k)).collect();
                    writeln!(out, "v{} · v{} = {}", i, j, terms.join(" + ")).map_err(io)?;
                }
            }
        }
        if json {
            let basis: Vec<_> = (0..alg.dim()).map(|k| alg.element_to_json(&alg.invariant_element(k))).collect();
            writeln!(out, "{}", json!({"basis": basis, "table": rows})).map_err(io)?;
        }
    }
    if let Some(xy) = multiply {
        let x = read_element(alg, &xy[0])?;
        let y = read_element(alg, &xy[1])?;
        let p = alg.product(&x, &y)?;
        writeln!(out, "{}", alg.element_to_json(&p)).map_err(io)?;
    }
    if let Some(sel) = check_ring {
        let triples = if sel == "all" {
            Triples::All
        } else {
            let count = sel.parse().map_err(|_| Error::Parse(format!("--check-ring expects `all` or a count, got `{}`", sel)))?;
            Triples::Random { count, seed }
        };
        let r = alg.check_ring_axioms(triples);
        if json {
            writeln!(
                out,
                "{}",
                json!({"associativity": r.associativity, "commutativity": r.commutativity, "unit": r.unit, "passed": r.passed(), "witness": r.failure})
            )
            .map_err(io)?;
        } else {
            writeln!(out, "{}", r).map_err(io)?;
        }
        if !r.passed() {
            code = EXIT_CHECK_FAILED;
        }
    }
    Ok(code)
}

fn kummer(k: &KummerAlgebra, export: Option<&PathBuf>, leray: bool, json: bool, out: &mut dyn Write) -> Result<i32> {
    let n = k.hilbert().n();
    let mut code = EXIT_OK;
    let rows = if leray { k.leray_rows()? } else { Vec::new() };
    if rows.iter().any(|(_, l, r)| l != r) {
        code = EXIT_CHECK_FAILED;
    }
    if json {
        let dims: BTreeMap<String, usize> = k.dims_by_degree().into_iter().map(|(d, c)| (d.to_string(), c)).collect();
        let leray: Vec<_> = rows.iter().map(|(d, l, r)| json!({"degree": d, "fock": l, "h_times_k": r})).collect();
        writeln!(out, "{}", json!({"n": n, "dim": k.dim(), "dims_by_degree": dims, "leray": leray})).map_err(io)?;
    } else {
        writeln!(out, "dim K^[{}] = {} (H^[{}]: {}, ideal rank {})", n, k.dim(), n, k.hilbert().dim(), k.ideal_rank())
            .map_err(io)?;
        for (d, c) in k.dims_by_degree() {
            writeln!(out, "  degree {:>3}: {}", d, c).map_err(io)?;
        }
        if leray {
            writeln!(out, "Leray identity (degree, sum of Fock spaces, dim H ⊗ K):").map_err(io)?;
            for (d, l, r) in &rows {
                writeln!(out, "  {:>3}: {:>7} {:>7} {}", d, l, r, if l == r { "ok" } else { "MISMATCH" }).map_err(io)?;
            }
        }
    }
    if let Some(path) = export {
        let text = format::to_json(&k.to_presentation()?);
        if path.as_os_str() == "-" {
            writeln!(out, "{}", text).map_err(io)?;
        } else {
            std::fs::write(path, text + "\n").map_err(io)?;
        }
    }
    Ok(code)
}

fn qpow(x: &Q, e: i32) -> Result<Q> {
    if e >= 0 {
        Ok(x.pow(e as u32))
    } else if x.signum() == 0 {
        Err(Error::Parse("cannot evaluate a negative power at 0".into()))
    } else {
        Ok(x.recip().pow(e.unsigned_abs()))
    }
}

fn parse_eval(text: &str) -> Result<(Q, Q)> {
    let mut p = None;
    let mut q = None;
    for part in text.split(',') {
        let (k, v) = part.split_once('=').ok_or_else(|| Error::Parse(format!("bad --eval `{}`", text)))?;
        let v: Q = v.trim().parse()?;
        match k.trim() {
            "p" => p = Some(v),
            "q" => q = Some(v),
            other => return Err(Error::Parse(format!("unknown variable `{}` in --eval", other))),
        }
    }
    match (p, q) {
        (Some(p), Some(q)) => Ok((p, q)),
        _ => Err(Error::Parse("--eval needs both p and q".into())),
    }
}

fn series(s: &HodgeSeries, unshift: bool, eval: Option<&str>, json: bool, out: &mut dyn Write) -> Result<i32> {
    if let Some(text) = eval {
        let (p, q) = parse_eval(text)?;
        let s = s.unshifted();
        let betti = p == Q::from_int(1) && q == Q::from_int(1);
        let mut rows = Vec::new();
        for (n, c) in s.coeffs().iter().enumerate() {
            if betti {
                let b = c.by_total_degree();
                if json {
                    let m: BTreeMap<String, String> = b.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
                    rows.push(json!({"n": n, "betti": m, "total": c.total().to_string()}));
                } else {
                    let line: Vec<String> = b.iter().map(|(k, v)| format!("b{}={}", k, v)).collect();
                    writeln!(out, "n={}: {}  (total {})", n, line.join(" "), c.total()).map_err(io)?;
                }
            } else {
                let mut v = Q::from_int(0);
                for ((i, j), c) in c.terms() {
                    let c: Q = c.to_string().parse()?;
                    v += &(&(&c * &qpow(&p, *i)?) * &qpow(&q, *j)?);
                }
                if json {
                    rows.push(json!({"n": n, "value": v.to_string()}));
                } else {
                    writeln!(out, "n={}: {}", n, v).map_err(io)?;
                }
            }
        }
        if json {
            writeln!(out, "{}", json!(rows)).map_err(io)?;
        }
        return Ok(EXIT_OK);
    }
    let s = if unshift { s.unshifted() } else { s.clone() };
    if json {
        writeln!(out, "{}", s.to_json()).map_err(io)?;
    } else {
        for (n, c) in s.coeffs().iter().enumerate() {
            writeln!(out, "z^{}:", n).map_err(io)?;
            let (imin, imax, jmin, jmax) = c.terms().keys().fold((i32::MAX, i32::MIN, i32::MAX, i32::MIN), |a, (i, j)| {
                (a.0.min(*i), a.1.max(*i), a.2.min(*j), a.3.max(*j))
            });
            if c.is_zero() {
                writeln!(out, "  0").map_err(io)?;
                continue;
            }
            write!(out, "  {:>6}", "i\\j").map_err(io)?;
            for j in jmin..=jmax {
                write!(out, " {:>6}", j).map_err(io)?;
            }
            writeln!(out).map_err(io)?;
            for i in imin..=imax {
                write!(out, "  {:>6}", i).map_err(io)?;
                for j in jmin..=jmax {
                    write!(out, " {:>6}", c.coeff(i, j).to_string()).map_err(io)?;
                }
                writeln!(out).map_err(io)?;
            }
        }
    }
    Ok(EXIT_OK)
}
