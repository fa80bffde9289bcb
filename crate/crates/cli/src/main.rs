use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use kshuffle::characters::{char_e, char_taut, char_tangent, char_tv_form, char_w, EMethod, TvForm, VirtualCharacter, WMethod};
use kshuffle::harness::{self, Mode, Perturbation, Relation, Report, Session};
use kshuffle::kaction::{apply, op_matrix, ActionOptions, KVector, Method, OpSpec, OperatorMatrix};
use kshuffle::partitions::{enumerate_syt, MultiPartition};
use kshuffle::scalars::{parse_poly, parse_ratfn, poly_to_json, ratfn_to_json, set_gcd_mode, GcdMode, LaurentPoly, RationalFn};
use kshuffle::shuffle::{build_ab, build_m, build_x, phi, wheel_check, AbKind, ShuffleElement, Sign};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "kshuffle", version, about = "Shuffle-algebra action on the K-theory of framed sheaves")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Rank (for verify: largest rank swept).
    #[arg(long, global = true)]
    r: Option<usize>,
    /// Degree: source degree for matrix/apply, truncation for verify.
    #[arg(long, global = true, allow_hyphen_values = true)]
    d: Option<i32>,
    /// Number of variables (X_m) or step; for verify, the largest k.
    #[arg(long, global = true)]
    k: Option<usize>,
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_sign)]
    sign: Option<Sign>,
    #[arg(long, global = true, value_enum, default_value = "exact")]
    mode: ModeArg,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value = "on")]
    gcd: OnOff,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Randomized,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum OnOff {
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Syt,
    Orderings,
    Residue,
}

#[derive(Subcommand)]
enum Cmd {
    /// Fixed-point characters.
    Char(CharArgs),
    /// Build a shuffle element and report its form, wheel conditions and phi.
    Shuffle(ShuffleArgs),
    /// Standard Young tableaux of a skew multipartition.
    Syt(SytArgs),
    /// One matrix coefficient <to| op |from>.
    Coeff(OpArgs),
    /// The block of an operator from K_d.
    Matrix(OpArgs),
    /// Apply an operator to a class given as lambda=value pairs.
    Apply(ApplyArgs),
    /// Run a relation suite (R1..R12 or `all`).
    Verify(VerifyArgs),
}

#[derive(Args)]
struct CharArgs {
    /// Universal complex at lambda.
    #[arg(long = "W", group = "which")]
    w: bool,
    /// Ext character between lambda and mu.
    #[arg(long = "E", group = "which")]
    e: bool,
    /// Tautological character at lambda.
    #[arg(long = "T", group = "which")]
    taut: bool,
    /// Tangent character at lambda.
    #[arg(long, group = "which")]
    tangent: bool,
    /// Tangent character of V^k at the pair (lambda smaller, mu larger).
    #[arg(long, group = "which")]
    tv: bool,
    #[arg(long)]
    lambda: String,
    #[arg(long)]
    mu: Option<String>,
    /// gamma|corners for W, taut|ffnr for E, lagrangian|relative|swapped for tv.
    #[arg(long)]
    method: Option<String>,
}

#[derive(Args)]
struct ShuffleArgs {
    /// X (with --m, --k), P (with --k and --index), A, B (with --k), or z (with --index).
    #[arg(long, default_value = "X")]
    element: String,
    #[arg(long)]
    m: Option<String>,
    /// The d of P_{k,d} or the exponent of z^d.
    #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
    index: i32,
}

#[derive(Args)]
struct SytArgs {
    /// Smaller multipartition.
    #[arg(long)]
    from: String,
    /// Larger multipartition.
    #[arg(long)]
    to: String,
}

#[derive(Args, Clone)]
struct OpArgs {
    /// X, P:k,d, A:k, B:k, a:k, b:k, p:n, H:n, baranovsky:k; X is implied by --m.
    #[arg(long, allow_hyphen_values = true)]
    op: Option<String>,
    /// Laurent polynomial m for X_m.
    #[arg(long, allow_hyphen_values = true)]
    m: Option<String>,
    #[arg(long)]
    from: Option<String>,
    #[arg(long)]
    to: Option<String>,
    #[arg(long, value_enum, default_value = "syt")]
    method: MethodArg,
    /// Tangent form for b_k.
    #[arg(long, default_value = "lagrangian")]
    tv: String,
}

#[derive(Args)]
struct ApplyArgs {
    #[command(flatten)]
    op: OpArgs,
    /// `lambda=value` pairs separated by `;`, or `unit` for sum [lambda]/g_lambda in K_d.
    #[arg(long)]
    vector: String,
}

#[derive(Args)]
struct VerifyArgs {
    /// R1..R12 or `all`.
    relation: String,
    #[arg(long, default_value_t = 3)]
    trials: u32,
    #[arg(long, default_value = "none")]
    perturb: String,
    /// Include wall-clock time in the report (breaks byte-identity).
    #[arg(long)]
    timing: bool,
}

enum CliError {
    Usage(String),
    Compute { name: &'static str, message: String },
}

type CliResult<T> = Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

macro_rules! compute {
    ($e:expr) => {
        $e.map_err(|err| CliError::Compute {
            name: err.name(),
            message: err.to_string(),
        })
    };
}

fn parse_sign(s: &str) -> Result<Sign, String> {
    Sign::parse(s).ok_or_else(|| format!("expected + or -, got `{s}`"))
}

fn parse_mp(s: &str, r: usize) -> CliResult<MultiPartition> {
    MultiPartition::parse_rank(s, r).map_err(|e| usage(e.to_string()))
}

fn parse_m(s: &str) -> CliResult<LaurentPoly> {
    parse_poly(s).map_err(|e| usage(format!("--m: {e}")))
}

fn rf_json(f: &RationalFn) -> Value {
    json!({ "text": f.to_string(), "terms": ratfn_to_json(f) })
}

fn envelope(kind: &str, body: Value) -> Value {
    let mut v = json!({ "schema": format!("kshuffle.{kind}"), "schema_version": SCHEMA_VERSION });
    if let (Some(obj), Value::Object(b)) = (v.as_object_mut(), body) {
        obj.extend(b);
    }
    v
}

struct Output {
    text: String,
    json: Value,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    set_gcd_mode(if cli.common.gcd == OnOff::On { GcdMode::On } else { GcdMode::Off });
    match run(&cli) {
        Ok((out, failed)) => {
            let body = match cli.common.format {
                Format::Json => serde_json::to_string_pretty(&out.json).expect("json") + "\n",
                Format::Text => out.text,
            };
            if let Some(path) = &cli.common.out {
                if let Err(e) = fs::write(path, body) {
                    eprintln!("error: IoError: cannot write {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            } else {
                print!("{body}");
            }
            if failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Compute { name, message }) => {
            if message.starts_with(name) {
                eprintln!("error: {message}");
            } else {
                eprintln!("error: {name}: {message}");
            }
            ExitCode::from(1)
        }
    }
}

/// Returns the output and whether a verification failed.
fn run(cli: &Cli) -> CliResult<(Output, bool)> {
    let c = &cli.common;
    match &cli.cmd {
        Cmd::Char(a) => cmd_char(c, a).map(|o| (o, false)),
        Cmd::Shuffle(a) => cmd_shuffle(c, a).map(|o| (o, false)),
        Cmd::Syt(a) => cmd_syt(c, a).map(|o| (o, false)),
        Cmd::Coeff(a) => cmd_coeff(c, a).map(|o| (o, false)),
        Cmd::Matrix(a) => cmd_matrix(c, a).map(|o| (o, false)),
        Cmd::Apply(a) => cmd_apply(c, a).map(|o| (o, false)),
        Cmd::Verify(a) => cmd_verify(c, a),
    }
}

fn char_output(kind: &str, lambda: &MultiPartition, mu: Option<&MultiPartition>, ch: &VirtualCharacter) -> Output {
    let weights: Vec<Value> = ch.weights().iter().map(|(m, n)| json!([m.to_string(), n])).collect();
    let mut text = format!("{kind} at {lambda}");
    if let Some(m) = mu {
        text += &format!(", {m}");
    }
    text += &format!(":\n  {}\n  rank {}\n", ch.poly(), ch.rank());
    Output {
        text,
        json: envelope(
            "char",
            json!({
                "character": kind,
                "lambda": lambda.to_string(),
                "mu": mu.map(|m| m.to_string()),
                "value": ch.poly().to_string(),
                "terms": poly_to_json(ch.poly()),
                "weights": weights,
                "rank": ch.rank().to_string(),
            }),
        ),
    }
}

fn cmd_char(c: &Common, a: &CharArgs) -> CliResult<Output> {
    let r = c.r.unwrap_or(1);
    let lambda = parse_mp(&a.lambda, r)?;
    let method = a.method.as_deref();
    if a.e || a.tv {
        let mu = parse_mp(a.mu.as_deref().ok_or_else(|| usage("--mu is required"))?, r)?;
        if a.e {
            let m = match method.unwrap_or("taut") {
                "taut" | "tautological" => EMethod::Tautological,
                "ffnr" => EMethod::Ffnr,
                other => return Err(usage(format!("unknown E method `{other}`"))),
            };
            return Ok(char_output("E", &lambda, Some(&mu), &char_e(&lambda, &mu, m)));
        }
        let form = parse_tv(method.unwrap_or("lagrangian"))?;
        let ch = compute!(char_tv_form(&lambda, &mu, form))?;
        return Ok(char_output("TV", &lambda, Some(&mu), &ch));
    }
    if a.taut {
        return Ok(char_output("T", &lambda, None, &char_taut(&lambda)));
    }
    if a.tangent {
        return Ok(char_output("tangent", &lambda, None, &char_tangent(&lambda)));
    }
    if a.w {
        let m = match method.unwrap_or("corners") {
            "gamma" => WMethod::Gamma,
            "corners" => WMethod::Corners,
            other => return Err(usage(format!("unknown W method `{other}`"))),
        };
        return Ok(char_output("W", &lambda, None, &char_w(&lambda, m)));
    }
    Err(usage("choose one of --W, --E, --T, --tangent, --tv"))
}

fn parse_tv(s: &str) -> CliResult<TvForm> {
    match s {
        "lagrangian" => Ok(TvForm::Lagrangian),
        "relative" => Ok(TvForm::Relative),
        "swapped" => Ok(TvForm::Swapped),
        other => Err(usage(format!("unknown tangent form `{other}`"))),
    }
}

fn cmd_shuffle(c: &Common, a: &ShuffleArgs) -> CliResult<Output> {
    let k = c.k.unwrap_or(1);
    let el: ShuffleElement = match a.element.as_str() {
        "X" => {
            let m = parse_m(a.m.as_deref().unwrap_or("1"))?;
            compute!(build_x(&m, k))?
        }
        "P" => compute!(build_x(&build_m(k, a.index), k))?,
        "A" => compute!(build_ab(AbKind::A, k))?,
        "B" => compute!(build_ab(AbKind::B, k))?,
        "z" => ShuffleElement::z_pow(a.index),
        other => return Err(usage(format!("unknown element `{other}`"))),
    };
    let sym = el.sym().clone();
    let numerator = el.numerator().ok().cloned();
    let wheel = wheel_check(&el).ok();
    let phi_value = phi(&sym, el.k()).ok();
    let mut text = format!("element {} in {} variable(s)\n  symmetric form: {sym}\n", a.element, el.k());
    match &numerator {
        Some(n) => text += &format!("  numerator: {n}\n"),
        None => text += "  not of shuffle form\n",
    }
    if let Some(w) = wheel {
        text += &format!("  wheel conditions: {}\n", if w { "hold" } else { "fail" });
    }
    if let Some(p) = &phi_value {
        text += &format!("  phi: {p}\n");
    }
    Ok(Output {
        text,
        json: envelope(
            "shuffle",
            json!({
                "element": a.element,
                "k": el.k(),
                "symmetric": rf_json(&sym),
                "numerator": numerator.as_ref().map(|n| n.to_string()),
                "wheel": wheel,
                "phi": phi_value.as_ref().map(rf_json),
            }),
        ),
    })
}

fn cmd_syt(c: &Common, a: &SytArgs) -> CliResult<Output> {
    let r = c.r.unwrap_or(1);
    let lower = parse_mp(&a.from, r)?;
    let upper = parse_mp(&a.to, r)?;
    let tabs = enumerate_syt(&lower, &upper);
    let mut text = format!("{} standard tableau(x) of shape {upper} / {lower}\n", tabs.len());
    let mut list = Vec::new();
    for tab in &tabs {
        let cells: Vec<String> = tab
            .filling()
            .iter()
            .map(|(b, label)| format!("{b}={label}"))
            .collect();
        text += &format!("  {}\n", cells.join(" "));
        list.push(json!(tab
            .filling()
            .iter()
            .map(|(b, label)| json!({"component": b.comp, "x": b.x, "y": b.y, "label": label}))
            .collect::<Vec<_>>()));
    }
    Ok(Output {
        text,
        json: envelope("syt", json!({"from": lower.to_string(), "to": upper.to_string(), "count": tabs.len(), "tableaux": list})),
    })
}

fn parse_op(c: &Common, a: &OpArgs) -> CliResult<OpSpec> {
    let k = c.k.unwrap_or(1);
    let spec = match (a.op.as_deref(), a.m.as_deref()) {
        (None, None) => return Err(usage("give --op or --m")),
        (None, Some(m)) | (Some("X"), Some(m)) => OpSpec::X { m: parse_m(m)?, k },
        (Some("X"), None) => return Err(usage("X needs --m")),
        (Some(s), _) => {
            let (name, args) = s.split_once(':').ok_or_else(|| usage(format!("operator `{s}` needs arguments, e.g. P:1,0")))?;
            let nums: Vec<i64> = args
                .split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|_| usage(format!("bad operator argument `{x}`"))))
                .collect::<CliResult<_>>()?;
            let pos = |i: usize| -> CliResult<usize> {
                match nums.get(i) {
                    Some(&n) if n >= 1 => Ok(n as usize),
                    _ => Err(usage(format!("`{s}`: argument {} must be a positive integer", i + 1))),
                }
            };
            let want = |n: usize| -> CliResult<()> {
                if nums.len() == n {
                    Ok(())
                } else {
                    Err(usage(format!("`{s}` takes {n} argument(s)")))
                }
            };
            match name {
                "P" => {
                    want(2)?;
                    OpSpec::P { k: pos(0)?, d: nums[1] as i32 }
                }
                "A" => {
                    want(1)?;
                    OpSpec::A { k: pos(0)? }
                }
                "B" => {
                    want(1)?;
                    OpSpec::B { k: pos(0)? }
                }
                "a" => {
                    want(1)?;
                    OpSpec::GeoA { k: pos(0)? }
                }
                "b" => {
                    want(1)?;
                    OpSpec::GeoB { k: pos(0)? }
                }
                "p" => {
                    want(1)?;
                    OpSpec::Power { n: pos(0)? as u32 }
                }
                "H" => {
                    want(1)?;
                    match nums[0] {
                        n if n >= 0 => OpSpec::H { n: n as u32 },
                        _ => return Err(usage("H:n needs n >= 0")),
                    }
                }
                "baranovsky" => {
                    want(1)?;
                    OpSpec::Baranovsky { k: pos(0)? }
                }
                other => return Err(usage(format!("unknown operator `{other}`"))),
            }
        }
    };
    Ok(spec)
}

fn op_options(a: &OpArgs) -> CliResult<ActionOptions> {
    Ok(ActionOptions {
        method: match a.method {
            MethodArg::Syt => Method::Syt,
            MethodArg::Orderings => Method::Orderings,
            MethodArg::Residue => Method::Residue,
        },
        tv: parse_tv(&a.tv)?,
        ..ActionOptions::default()
    })
}

fn sign_of(c: &Common) -> CliResult<Sign> {
    c.sign.ok_or_else(|| usage("--sign is required"))
}

fn cmd_coeff(c: &Common, a: &OpArgs) -> CliResult<Output> {
    let r = c.r.unwrap_or(1);
    let sign = sign_of(c)?;
    let spec = parse_op(c, a)?;
    let from = parse_mp(a.from.as_deref().ok_or_else(|| usage("--from is required"))?, r)?;
    let to = parse_mp(a.to.as_deref().ok_or_else(|| usage("--to is required"))?, r)?;
    let opts = op_options(a)?;
    let block = compute!(op_matrix(&spec, sign, r, from.size() as i32, &opts))?;
    if block.target != to.size() as i32 {
        return Err(usage(format!(
            "{} with sign {sign} maps K_{} to K_{}, but --to has degree {}",
            spec.label(),
            block.source,
            block.target,
            to.size()
        )));
    }
    let v = block.get(&from, &to);
    Ok(Output {
        text: format!("{v}\n"),
        json: envelope(
            "coeff",
            json!({"op": spec.label(), "sign": sign.to_string(), "r": r, "from": from.to_string(), "to": to.to_string(), "value": rf_json(&v)}),
        ),
    })
}

fn matrix_json(m: &OperatorMatrix) -> Value {
    let entries: Vec<Value> = m
        .entries()
        .map(|(l, mu, v)| json!({"from": l.to_string(), "to": mu.to_string(), "value": rf_json(v)}))
        .collect();
    json!({"rank": m.rank, "source": m.source, "target": m.target, "entries": entries})
}

fn cmd_matrix(c: &Common, a: &OpArgs) -> CliResult<Output> {
    let r = c.r.unwrap_or(1);
    let sign = sign_of(c)?;
    let spec = parse_op(c, a)?;
    let d = c.d.ok_or_else(|| usage("--d (source degree) is required"))?;
    let block = compute!(op_matrix(&spec, sign, r, d, &op_options(a)?))?;
    let mut body = matrix_json(&block);
    body["op"] = json!(spec.label());
    body["sign"] = json!(sign.to_string());
    Ok(Output {
        text: format!("{} ({sign})\n{block}", spec.label()),
        json: envelope("matrix", body),
    })
}

fn parse_vector(s: &str, r: usize, d: Option<i32>) -> CliResult<KVector> {
    if s.trim() == "unit" {
        let d = d.ok_or_else(|| usage("--vector unit needs --d"))?;
        return compute!(KVector::unit_class(r, d));
    }
    let mut v: Option<KVector> = None;
    for item in s.split(';').map(str::trim).filter(|x| !x.is_empty()) {
        let (l, val) = item.split_once('=').ok_or_else(|| usage(format!("expected lambda=value, got `{item}`")))?;
        let l = parse_mp(l.trim(), r)?;
        let val = parse_ratfn(val.trim()).map_err(|e| usage(format!("value `{val}`: {e}")))?;
        let deg = l.size() as i32;
        let cur = v.get_or_insert_with(|| KVector::zero(r, deg));
        if cur.degree != deg {
            return Err(usage("all vector entries must have the same degree"));
        }
        let prev = cur.get(&l);
        cur.insert(l, prev.add(&val));
    }
    v.ok_or_else(|| usage("empty vector"))
}

fn cmd_apply(c: &Common, a: &ApplyArgs) -> CliResult<Output> {
    let r = c.r.unwrap_or(1);
    let sign = sign_of(c)?;
    let spec = parse_op(c, &a.op)?;
    let v = parse_vector(&a.vector, r, c.d)?;
    let block = compute!(op_matrix(&spec, sign, r, v.degree, &op_options(&a.op)?))?;
    let out = compute!(apply(&block, &v))?;
    let entries: Vec<Value> = out.entries().map(|(l, x)| json!({"lambda": l.to_string(), "value": rf_json(x)})).collect();
    Ok(Output {
        text: format!("{out}\n"),
        json: envelope(
            "apply",
            json!({"op": spec.label(), "sign": sign.to_string(), "rank": r, "degree": out.degree, "entries": entries}),
        ),
    })
}

fn cmd_verify(c: &Common, a: &VerifyArgs) -> CliResult<(Output, bool)> {
    let perturb = Perturbation::parse(&a.perturb).ok_or_else(|| {
        let names: Vec<&str> = Perturbation::ALL.iter().map(|p| p.name()).collect();
        usage(format!("unknown perturbation `{}` (one of {})", a.perturb, names.join(", ")))
    })?;
    let defaults = Session::default();
    let s = Session {
        r: c.r.unwrap_or(defaults.r),
        max_d: c.d.unwrap_or(defaults.max_d),
        max_k: c.k.unwrap_or(defaults.max_k),
        mode: match c.mode {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Randomized => Mode::Randomized,
        },
        seed: c.seed,
        trials: a.trials,
        gcd: c.gcd == OnOff::On,
        perturb,
        timing: a.timing,
        ..defaults
    };
    if s.r == 0 || s.max_d < 0 {
        return Err(usage("--r must be >= 1 and --d >= 0"));
    }
    let reports: Vec<Report> = if a.relation.eq_ignore_ascii_case("all") {
        harness::verify_all(&s)
    } else {
        let rel = Relation::parse(&a.relation).map_err(|e| CliError::Compute {
            name: e.name(),
            message: e.to_string(),
        })?;
        vec![compute!(harness::verify(rel, &s))?]
    };
    let passed = reports.iter().all(|r| r.passed);
    let text: String = reports.iter().map(Report::to_text).collect::<Vec<_>>().join("\n");
    let json = if reports.len() == 1 {
        serde_json::to_value(&reports[0]).expect("report serializes")
    } else {
        envelope(
            "verify-all",
            json!({"passed": passed, "reports": reports}),
        )
    };
    Ok((Output { text, json }, !passed))
}
