//! `brunnian`: Milnor invariants, tree reduction, Conway polynomials and the
//! quadratic-law check from the command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error, 3 domain
//! refusal.

mod cache;

use std::path::PathBuf;
use std::process::ExitCode;

use brunnian::braid::{delete_strand, is_brunnian};
use brunnian::freegroup::is_trivial_braid;
use brunnian::generators::{family_generators, milnor_string_link, FamilySpec};
use brunnian::milnor::mu;
use brunnian::polyinv::{conway_skein, ConwaySource, Engine, DEFAULT_CROSSING_LIMIT};
use brunnian::quadratic::{fit_coefficients_with, vanishing_check_with, verify_with_source, VerificationReport};
use brunnian::treealg::{comb_basis_tree, parse_tree, reduce_to_basis};
use brunnian::{BraidWord, Error, InvariantFunctional, PdCode, Permutation, PureBraid, StringLinkPresentation};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cache::Cache;

#[derive(Parser)]
#[command(name = "brunnian", version, about = "Finite type invariants of Brunnian links")]
struct Cli {
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Directory of the Conway polynomial cache.
    #[arg(long, global = true, env = "BRUNNIAN_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    no_cache: bool,
    /// Fraction of cache hits to recompute and compare.
    #[arg(long, global = true, value_name = "RATE", default_value_t = 0.0)]
    verify_cache: f64,
    /// Seed for randomized choices (cache sampling).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Det,
    Skein,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Engine {
        match e {
            EngineArg::Det => Engine::Determinant,
            EngineArg::Skein => Engine::Skein,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Milnor invariant of a pure braid for a non-repeating index.
    Mu {
        #[arg(long)]
        strands: usize,
        #[arg(long)]
        braid: String,
        /// Comma-separated, the last entry names the longitude.
        #[arg(long, value_delimiter = ',', required = true)]
        index: Vec<usize>,
    },
    /// Fits the quadratic form of an invariant and checks it on a family.
    Verify {
        #[arg(long)]
        n: usize,
        /// `conway:a<k>` or `const:<v>`.
        #[arg(long)]
        invariant: String,
        /// Family spec, e.g. `powers:1:-3..3 conj:1:7:3`.
        #[arg(long)]
        family: String,
        #[arg(long, value_enum, default_value = "det")]
        engine: EngineArg,
        /// Also write the report here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Reduces a labeled tree to comb coordinates.
    TreeReduce { tree: String },
    /// Conway polynomial of a closed braid or a PD code.
    Conway {
        #[arg(long, requires = "braid")]
        strands: Option<usize>,
        #[arg(long, conflicts_with = "pd")]
        braid: Option<String>,
        /// PD code as JSON, or `@file`.
        #[arg(long)]
        pd: Option<String>,
        /// Defaults to `det` for braids; PD codes need `skein`.
        #[arg(long, value_enum)]
        engine: Option<EngineArg>,
    },
    /// Prints Milnor's string link for a permutation.
    MilnorLink {
        #[arg(long)]
        n: usize,
        /// One-line notation; the identity if omitted.
        #[arg(long)]
        sigma: Option<String>,
    },
    /// Lists the order on S_{n-1} and the comb trees.
    Basis {
        #[arg(long)]
        n: usize,
    },
    /// Deletes each strand of a pure braid and tests triviality.
    BrunnianCheck {
        #[arg(long)]
        strands: usize,
        #[arg(long)]
        braid: String,
    },
}

struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_)
            | Error::MalformedTree(_)
            | Error::MalformedPd(_)
            | Error::GeneratorOutOfRange { .. }
            | Error::BraidGeneratorOutOfRange { .. }
            | Error::StrandOutOfRange { .. }
            | Error::InvalidIndex(_)
            | Error::InvalidPermutation(_)
            | Error::UnknownInvariant(_)
            | Error::RankMismatch { .. }
            | Error::StrandMismatch { .. }
            | Error::CutoffMismatch { .. }
            | Error::InvalidCutoff(_)
            | Error::IndexTooLong { .. } => 2,
            Error::OddDiagonal { .. } | Error::Integrity(_) => 1,
            _ => 3,
        };
        Failure { code, msg: e.to_string() }
    }
}

fn input_error(msg: impl Into<String>) -> Failure {
    Failure { code: 2, msg: msg.into() }
}

/// What a command prints and how it exits.
struct Output {
    json: Value,
    text: String,
    code: u8,
}

impl Output {
    fn ok(json: Value, text: String) -> Self {
        Output { json, text, code: 0 }
    }
}

fn parse_pure(text: &str, strands: usize) -> Result<PureBraid, Failure> {
    let b = BraidWord::parse(text, strands)?;
    Ok(PureBraid::new(b)?)
}

fn cmd_mu(strands: usize, braid: &str, index: &[usize]) -> Result<Output, Failure> {
    let s = StringLinkPresentation::new(parse_pure(braid, strands)?)?;
    let v = mu(&s, index)?;
    Ok(Output::ok(json!(v), v.to_string()))
}

/// Degrees `d < 2n` where `a_d` can be non-zero on `n+1` components.
fn vanishing_degrees(n: usize) -> Vec<usize> {
    (n..2 * n).step_by(2).collect()
}

fn report_table(r: &VerificationReport) -> String {
    let mut out = format!("{} n={} order={}\n", r.invariant, r.n, r.order.join(","));
    for (k, v) in &r.coefficients {
        out.push_str(&format!("  f[{k}] = {v}\n"));
    }
    for row in &r.rows {
        let mu: Vec<String> = row.mu.iter().map(|(k, v)| format!("{k}:{v}")).collect();
        let f = row.f.map_or_else(|| "error".to_string(), |v| v.to_string());
        out.push_str(&format!(
            "  {:<28} mu[{}] f={} f(U)={} predicted={} {}\n",
            row.label,
            mu.join(" "),
            f,
            row.f_unlink,
            row.predicted,
            if row.matched { "ok" } else { "MISMATCH" }
        ));
    }
    out.push_str(&format!("  pass {} fail {}", r.summary.pass, r.summary.fail));
    out
}

fn cmd_verify(
    cache: &Cache,
    n: usize,
    invariant: &str,
    family: &str,
    engine: Engine,
    output: Option<&PathBuf>,
) -> Result<Output, Failure> {
    if n == 0 {
        return Err(input_error("n must be at least 1"));
    }
    let f = InvariantFunctional::parse(invariant)?.with_engine(engine);
    let spec: FamilySpec = family.parse()?;
    let fam = family_generators(n, &spec)?;
    let q = fit_coefficients_with(&f, n, cache)?;
    let report = verify_with_source(&q, &f, &fam, cache)?.with_family_spec(family);
    let vanishing = vanishing_check_with(n, &fam, &vanishing_degrees(n), cache)?;
    let passed = report.passed() && vanishing.passed();
    let mut json = serde_json::to_value(&report).expect("report serializes");
    json["vanishing"] = serde_json::to_value(&vanishing).expect("report serializes");
    if let Some(path) = output {
        let text = serde_json::to_string_pretty(&json).expect("value serializes");
        std::fs::write(path, text + "\n").map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    }
    let text = format!("{}\n{}", report_table(&report), report_table(&vanishing));
    Ok(Output {
        json,
        text,
        code: if passed { 0 } else { 1 },
    })
}

fn cmd_tree_reduce(tree: &str) -> Result<Output, Failure> {
    let t = parse_tree(tree)?;
    let v = reduce_to_basis(&t)?;
    let basis: Vec<String> = v.basis().iter().map(ToString::to_string).collect();
    let text = basis
        .iter()
        .zip(v.coords())
        .filter(|(_, c)| **c != 0)
        .map(|(s, c)| format!("{c} t_{s}"))
        .collect::<Vec<_>>()
        .join(" + ");
    Ok(Output::ok(
        json!({"n": v.degree(), "basis": basis, "coords": v.coords()}),
        if text.is_empty() { "0".into() } else { text },
    ))
}

fn cmd_conway(
    cache: &Cache,
    strands: Option<usize>,
    braid: Option<&str>,
    pd: Option<&str>,
    engine: Option<EngineArg>,
) -> Result<Output, Failure> {
    let p = match (braid, pd) {
        (Some(text), None) => {
            let m = strands.ok_or_else(|| input_error("--braid needs --strands"))?;
            let engine = engine.map_or(Engine::Determinant, Engine::from);
            cache.conway(&BraidWord::parse(text, m)?, engine)?
        }
        (None, Some(src)) => {
            if matches!(engine, Some(EngineArg::Det)) {
                return Err(input_error("the determinant engine needs a braid"));
            }
            let text = match src.strip_prefix('@') {
                Some(path) => std::fs::read_to_string(path).map_err(|e| input_error(format!("{path}: {e}")))?,
                None => src.to_string(),
            };
            let code = PdCode::from_json(&text)?;
            conway_skein(&code, DEFAULT_CROSSING_LIMIT)?
        }
        _ => return Err(input_error("give exactly one of --braid or --pd")),
    };
    let json: Value = serde_json::from_str(&p.to_json()).unwrap_or(Value::Null);
    Ok(Output::ok(json, p.to_string()))
}

fn parse_perm(text: &str) -> Result<Permutation, Failure> {
    text.parse::<Permutation>().map_err(Failure::from)
}

fn cmd_milnor_link(n: usize, sigma: Option<&str>) -> Result<Output, Failure> {
    if n == 0 {
        return Err(input_error("n must be at least 1"));
    }
    let sigma = match sigma {
        Some(s) => parse_perm(s)?,
        None => Permutation::identity(n - 1),
    };
    let s = milnor_string_link(n, &sigma)?;
    let word = s.braid().word();
    Ok(Output::ok(
        json!({
            "n": n,
            "sigma": sigma.to_string(),
            "strands": word.strands(),
            "braid": word.to_string(),
            "crossings": word.len(),
        }),
        word.to_string(),
    ))
}

fn cmd_basis(n: usize) -> Result<Output, Failure> {
    if n < 2 {
        return Err(input_error("n must be at least 2"));
    }
    let order = Permutation::all(n - 1);
    let mut rows = Vec::new();
    let mut text = Vec::new();
    for (i, s) in order.iter().enumerate() {
        let t = comb_basis_tree(n, s)?;
        rows.push(json!({"index": i, "sigma": s.to_string(), "tree": t.to_string()}));
        text.push(format!("{i:>3}  {s}  {t}"));
    }
    Ok(Output::ok(json!({"n": n, "basis": rows}), text.join("\n")))
}

fn cmd_brunnian_check(strands: usize, braid: &str) -> Result<Output, Failure> {
    let b = parse_pure(braid, strands)?;
    let deletions: Vec<Value> = (1..=strands)
        .map(|k| {
            let trivial = is_trivial_braid(delete_strand(&b, k).expect("strand in range").word());
            json!({"strand": k, "trivial": trivial})
        })
        .collect();
    let ok = is_brunnian(&StringLinkPresentation::new(b)?);
    Ok(Output {
        json: json!({"brunnian": ok, "deletions": deletions}),
        text: if ok { "brunnian".into() } else { "not brunnian".into() },
        code: if ok { 0 } else { 1 },
    })
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    if !(0.0..=1.0).contains(&cli.verify_cache) {
        return Err(input_error("--verify-cache takes a rate in [0, 1]"));
    }
    let cache = match (&cli.cache_dir, cli.no_cache) {
        (Some(dir), false) => Cache::new(Some(dir.clone()), cli.verify_cache, cli.seed),
        _ => Cache::disabled(),
    };
    match &cli.command {
        Command::Mu { strands, braid, index } => cmd_mu(*strands, braid, index),
        Command::Verify {
            n,
            invariant,
            family,
            engine,
            output,
        } => cmd_verify(&cache, *n, invariant, family, (*engine).into(), output.as_ref()),
        Command::TreeReduce { tree } => cmd_tree_reduce(tree),
        Command::Conway {
            strands,
            braid,
            pd,
            engine,
        } => cmd_conway(&cache, *strands, braid.as_deref(), pd.as_deref(), *engine),
        Command::MilnorLink { n, sigma } => cmd_milnor_link(*n, sigma.as_deref()),
        Command::Basis { n } => cmd_basis(*n),
        Command::BrunnianCheck { strands, braid } => cmd_brunnian_check(*strands, braid),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            if cli.pretty {
                println!("{}", out.text);
            } else {
                println!("{}", out.json);
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
