//! Command-line surface for the trisum library.
//!
//! Forms are written as comma lists (`1,1,3,3`) for diagonal sums and as a
//! small document `{b:[...], c:[[i,j,v],...], shift:s}` (1-based indices,
//! bare or quoted keys) for cross-term sums. Output is JSON by default,
//! one record per line for batch queries; `--format csv` yields flat rows
//! and `--format lines` prints series as `n:a(n)`.
//!
//! Exit codes: 0 on success, 2 when a mathematical verification fails,
//! 1 on usage or parse errors.

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Map, Value};

use trisum::classnum::{self, Leaf};
use trisum::counterex;
use trisum::escalate::{self, TargetSet};
use trisum::forms::{CrossConfig, CrossSum, DiagonalSum};
use trisum::lattice::{self, CountConvention};
use trisum::qseries;

#[derive(Parser)]
#[command(
    name = "trisum",
    version,
    about = "Representability of integers by sums of triangular numbers",
    disable_help_subcommand = true
)]
struct Cli {
    /// Series precision used when a subcommand needs one.
    #[arg(long, global = true, default_value_t = 200)]
    precision: u64,

    /// Search cap for truants and escalation.
    #[arg(long, global = true, default_value_t = 10_000)]
    cap: u64,

    /// Worker threads for tree construction (results are identical for any
    /// value).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Lines,
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    Nonneg,
    All,
    Odd,
}

impl From<Convention> for CountConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Nonneg => CountConvention::Nonneg,
            Convention::All => CountConvention::All,
            Convention::Odd => CountConvention::Odd,
        }
    }
}

#[derive(Args)]
struct RangeArg {
    /// First (or only) value of n.
    #[arg(long)]
    n: u64,
    /// Last value of an inclusive range starting at --n.
    #[arg(long)]
    to: Option<u64>,
}

impl RangeArg {
    fn iter(&self) -> Result<std::ops::RangeInclusive<u64>, String> {
        let hi = self.to.unwrap_or(self.n);
        if hi < self.n {
            return Err("--to must not be below --n".into());
        }
        Ok(self.n..=hi)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Count representations of n by a form.
    Count {
        form: String,
        #[command(flatten)]
        range: RangeArg,
        /// Counting convention (defaults: nonneg for diagonal, all for cross).
        #[arg(long, value_enum)]
        conv: Option<Convention>,
    },
    /// Count all-odd representations of m by the corresponding diagonal
    /// quadratic form.
    OddCount {
        coeffs: String,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        to: Option<u64>,
    },
    /// Decide universality of a diagonal sum (represents 1, 2, 4, 5, 8).
    Universal { coeffs: String },
    /// Smallest nonnegative integer not represented, up to --cap.
    Truant { coeffs: String },
    /// Build the escalator tree.
    Escalate {
        /// `all` or an explicit comma list of targets.
        #[arg(long, default_value = "all")]
        targets: String,
        #[arg(long)]
        truant_cap: Option<u64>,
        #[arg(long, default_value_t = 10)]
        depth_cap: usize,
    },
    /// Verify the eta-product identity for the `[1,1,3,3]` counting series.
    EtaVerify,
    /// Hurwitz class numbers, stored exactly as 6H(N).
    Hurwitz {
        n: u64,
        #[arg(long)]
        to: Option<u64>,
    },
    /// Evaluate a class-number identity (a leaf such as `1,1,4`, or `all`).
    Identity {
        leaf: String,
        #[command(flatten)]
        range: RangeArg,
    },
    /// The multiplicative formula for the `[1,1,3,3]` counting function.
    #[command(name = "formula-1133")]
    Formula1133 {
        n: u64,
        /// Factorization of n+1 as `p^e,p^e,...` (verified before use).
        #[arg(long)]
        factors: Option<String>,
        #[arg(long, default_value_t = classnum::DEFAULT_TRIAL_BOUND)]
        trial_bound: u64,
    },
    /// Effective lower bound on how often a universal sum represents n.
    LowerBound { n: u64 },
    /// Build and verify the form missing exactly n.
    Counterexample {
        n: u64,
        #[arg(long = "N")]
        block_param: Option<u64>,
        #[arg(long, default_value_t = 200)]
        bound: u64,
    },
    /// The norm-m form whose smallest missed integer is T(m+1)-1.
    GapWitness {
        m: u64,
        #[arg(long = "N")]
        block_param: Option<u64>,
    },
    /// Add the normalization constant to a cross-term sum.
    Normalize { form: String },
    /// Upper bound on the norm over the odd-preserving class.
    Norm {
        form: String,
        #[arg(long, default_value_t = 0)]
        depth: u64,
    },
    /// Connected cross-term configurations with max |c| <= m, up to signed
    /// permutations.
    Blocks { m: u64 },
    /// Counting series of a form.
    Series {
        form: String,
        #[arg(long, value_enum)]
        conv: Option<Convention>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(verified) => {
            if verified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

// ---------------------------------------------------------------------------
// form syntax
// ---------------------------------------------------------------------------

enum FormArg {
    Diagonal(DiagonalSum),
    Cross(CrossSum),
}

fn parse_diagonal(s: &str) -> Result<DiagonalSum, String> {
    let coeffs: Result<Vec<u64>, _> = s.split(',').map(|p| p.trim().parse::<u64>()).collect();
    let coeffs = coeffs.map_err(|e| format!("bad coefficient list `{s}`: {e}"))?;
    DiagonalSum::new(coeffs).map_err(|e| e.to_string())
}

/// Quote bare identifiers used as keys so the relaxed document form
/// `{b:[...], c:[...], shift:0}` parses as JSON.
fn quote_bare_keys(s: &str) -> String {
    let bytes = s.as_bytes();
    let mut out = String::with_capacity(s.len() + 8);
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = &s[start..i];
            let mut j = i;
            while j < bytes.len() && bytes[j].is_ascii_whitespace() {
                j += 1;
            }
            if j < bytes.len() && bytes[j] == b':' {
                out.push('"');
                out.push_str(word);
                out.push('"');
            } else {
                out.push_str(word);
            }
        } else {
            out.push(c);
            i += 1;
        }
    }
    out
}

fn parse_cross(s: &str) -> Result<CrossSum, String> {
    let doc: Value = serde_json::from_str(&quote_bare_keys(s))
        .map_err(|e| format!("bad cross-sum document: {e}"))?;
    let obj = doc.as_object().ok_or("cross-sum document must be an object")?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "b" | "c" | "shift") {
            return Err(format!("unknown key `{key}` (expected b, c, shift)"));
        }
    }
    let b: Vec<u64> = obj
        .get("b")
        .and_then(Value::as_array)
        .ok_or("missing coefficient array `b`")?
        .iter()
        .map(|v| v.as_u64().ok_or("coefficients must be positive integers"))
        .collect::<Result<_, _>>()?;
    let mut entries = Vec::new();
    if let Some(c) = obj.get("c") {
        for triple in c.as_array().ok_or("`c` must be an array of [i,j,v] triples")? {
            let t = triple
                .as_array()
                .filter(|t| t.len() == 3)
                .ok_or("each entry of `c` must be [i,j,v]")?;
            let i = t[0].as_u64().ok_or("indices are 1-based positive integers")? as usize;
            let j = t[1].as_u64().ok_or("indices are 1-based positive integers")? as usize;
            let v = t[2].as_i64().ok_or("entries must be integers")?;
            if i == 0 || j == 0 {
                return Err("indices are 1-based".into());
            }
            entries.push((i - 1, j - 1, v));
        }
    }
    let shift = match obj.get("shift") {
        Some(v) => v.as_i64().ok_or("shift must be an integer")?,
        None => 0,
    };
    let config = CrossConfig::new(b.len(), &entries).map_err(|e| e.to_string())?;
    CrossSum::new(b, config, shift).map_err(|e| e.to_string())
}

fn parse_form(s: &str) -> Result<FormArg, String> {
    if s.trim_start().starts_with('{') {
        Ok(FormArg::Cross(parse_cross(s)?))
    } else {
        Ok(FormArg::Diagonal(parse_diagonal(s)?))
    }
}

fn cross_to_json(f: &CrossSum) -> Value {
    let c: Vec<Value> = f.config().entries().map(|((i, j), v)| json!([i + 1, j + 1, v])).collect();
    json!({ "b": f.coeffs(), "c": c, "shift": f.shift() })
}

// ---------------------------------------------------------------------------
// output
// ---------------------------------------------------------------------------

fn rational_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn bigint_value(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(n) => json!(n),
        None => json!(v.to_string()),
    }
}

/// Print a line, treating a closed pipe as a normal end of output.
fn out(line: std::fmt::Arguments<'_>) {
    use std::io::Write;
    if writeln!(std::io::stdout(), "{line}").is_err() {
        std::process::exit(0);
    }
}

macro_rules! outln {
    ($($arg:tt)*) => { out(format_args!($($arg)*)) };
}

fn csv_cell(v: &Value) -> String {
    let raw = match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    if raw.contains([',', '"', '\n']) {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw
    }
}

fn emit_records(records: &[Value], format: Format) {
    match format {
        Format::Csv => {
            let mut headers: Vec<String> = Vec::new();
            for r in records {
                if let Value::Object(m) = r {
                    for k in m.keys() {
                        if !headers.contains(k) {
                            headers.push(k.clone());
                        }
                    }
                }
            }
            headers.sort();
            outln!("{}", headers.join(","));
            for r in records {
                if let Value::Object(m) = r {
                    let row: Vec<String> =
                        headers.iter().map(|h| m.get(h).map_or(String::new(), csv_cell)).collect();
                    outln!("{}", row.join(","));
                }
            }
        }
        _ => {
            for r in records {
                outln!("{r}");
            }
        }
    }
}

// ---------------------------------------------------------------------------
// dispatch
// ---------------------------------------------------------------------------

fn run(cli: &Cli) -> Result<bool, String> {
    let lib = |e: trisum::Error| e.to_string();
    match &cli.command {
        Command::Count { form, range, conv } => {
            let mut records = Vec::new();
            match parse_form(form)? {
                FormArg::Diagonal(f) => {
                    let conv: CountConvention = conv.unwrap_or(Convention::Nonneg).into();
                    let hi = *range.iter()?.end();
                    let series = lattice::series_diagonal(&f, conv, hi).map_err(lib)?;
                    for n in range.iter()? {
                        records.push(json!({
                            "form": f.to_string(), "n": n, "convention": conv.name(),
                            "count": series[n as usize],
                        }));
                    }
                }
                FormArg::Cross(f) => {
                    let conv: CountConvention = conv.unwrap_or(Convention::All).into();
                    if conv != CountConvention::All {
                        return Err("cross-term sums are counted over all integer vectors".into());
                    }
                    let hi = *range.iter()?.end();
                    let series = lattice::series_cross(&f, hi).map_err(lib)?;
                    for n in range.iter()? {
                        records.push(json!({
                            "form": cross_to_json(&f), "n": n, "convention": conv.name(),
                            "count": series[n as usize],
                        }));
                    }
                }
            }
            emit_records(&records, cli.format);
            Ok(true)
        }
        Command::OddCount { coeffs, m, to } => {
            let f = parse_diagonal(coeffs)?.to_odd_form();
            let hi = to.unwrap_or(*m);
            if hi < *m {
                return Err("--to must not be below --m".into());
            }
            let series =
                lattice::series_quadratic(f.coeffs(), CountConvention::Odd, hi).map_err(lib)?;
            let records: Vec<Value> = (*m..=hi)
                .map(|m| json!({ "coeffs": coeffs, "m": m, "count": series[m as usize] }))
                .collect();
            emit_records(&records, cli.format);
            Ok(true)
        }
        Command::Universal { coeffs } => {
            let f = parse_diagonal(coeffs)?;
            let missed = escalate::first_missed_required_target(&f);
            emit_records(
                &[json!({ "form": f.to_string(), "universal": missed.is_none(), "missed": missed })],
                cli.format,
            );
            Ok(true)
        }
        Command::Truant { coeffs } => {
            let f = parse_diagonal(coeffs)?;
            let t = escalate::truant(&f, &TargetSet::AllNonneg, cli.cap);
            let mut record = Map::new();
            record.insert("form".into(), json!(f.to_string()));
            record.insert("truant".into(), json!(t));
            record.insert("cap".into(), json!(cli.cap));
            if t.is_none() {
                record
                    .insert("note".into(), json!("no truant up to cap; not a universality proof"));
            }
            emit_records(&[Value::Object(record)], cli.format);
            Ok(true)
        }
        Command::Escalate { targets, truant_cap, depth_cap } => {
            let targets = if targets == "all" {
                TargetSet::AllNonneg
            } else {
                let zs: Result<Vec<u64>, _> =
                    targets.split(',').map(|p| p.trim().parse::<u64>()).collect();
                TargetSet::explicit(zs.map_err(|e| format!("bad target list: {e}"))?)
            };
            let tree = escalate::escalator_tree(
                &targets,
                truant_cap.unwrap_or(cli.cap),
                *depth_cap,
                cli.threads,
            )
            .map_err(lib)?;
            outln!("{}", serde_json::to_string(&tree).expect("tree serializes"));
            Ok(true)
        }
        Command::EtaVerify => {
            let p = cli.precision;
            let (leading, eta) =
                qseries::eta_product(&[(2, 4), (6, 4), (1, -2), (3, -2)], p).map_err(lib)?;
            let f = DiagonalSum::new(vec![1, 1, 3, 3]).expect("positive");
            let theta = qseries::theta_diagonal(&f, CountConvention::Nonneg, p).map_err(lib)?;
            let matches_counts = leading == 1 && eta == theta;
            // multiplicativity of a(m) = s(m-1) on coprime pairs
            let mut multiplicative = true;
            let a = |m: u64| eta.coeff((m - 1) as usize);
            'outer: for m in 1..=p {
                for n in 1..=p / m {
                    if num_integer::gcd(m, n) == 1 && a(m * n) != &(a(m) * a(n)) {
                        multiplicative = false;
                        break 'outer;
                    }
                }
            }
            let holds = matches_counts && multiplicative;
            emit_records(
                &[json!({
                    "leading_power": leading,
                    "precision": p,
                    "matches_counts": matches_counts,
                    "multiplicative": multiplicative,
                    "holds": holds,
                })],
                cli.format,
            );
            Ok(holds)
        }
        Command::Hurwitz { n, to } => {
            let hi = to.unwrap_or(*n);
            if hi < *n {
                return Err("--to must not be below N".into());
            }
            let mut records = Vec::new();
            for m in *n..=hi {
                let h = classnum::hurwitz6(m).map_err(lib)?;
                records.push(json!({
                    "n": m,
                    "sixH": h.six_h,
                    "h": rational_string(&h.h()),
                    "is_discriminant": h.is_discriminant,
                }));
            }
            emit_records(&records, cli.format);
            Ok(true)
        }
        Command::Identity { leaf, range } => {
            let leaves: Vec<Leaf> = if leaf == "all" {
                Leaf::ALL.to_vec()
            } else {
                vec![leaf.parse::<Leaf>().map_err(lib)?]
            };
            let mut records = Vec::new();
            let mut all_hold = true;
            for leaf in leaves {
                for n in range.iter()? {
                    let report = classnum::identity_check(leaf, n).map_err(lib)?;
                    match report.outcome {
                        classnum::IdentityOutcome::Checked { lhs, rhs, relation, holds } => {
                            all_hold &= holds;
                            let six_rhs = rhs * BigRational::from(BigInt::from(6));
                            records.push(json!({
                                "leaf": leaf.name(), "n": n, "lhs": lhs,
                                "rhs_times_6": rational_string(&six_rhs),
                                "relation": relation.symbol(), "holds": holds,
                            }));
                        }
                        classnum::IdentityOutcome::SideCondition { reason } => {
                            records.push(json!({
                                "leaf": leaf.name(), "n": n,
                                "status": "side_condition", "reason": reason,
                            }));
                        }
                    }
                }
            }
            emit_records(&records, cli.format);
            Ok(all_hold)
        }
        Command::Formula1133 { n, factors, trial_bound } => {
            let count = match factors {
                Some(list) => {
                    let parsed: Result<Vec<(u64, u32)>, String> = list
                        .split(',')
                        .map(|part| {
                            let part = part.trim();
                            let (p, e) = match part.split_once('^') {
                                Some((p, e)) => (
                                    p.trim().parse::<u64>().map_err(|e| e.to_string())?,
                                    e.trim().parse::<u32>().map_err(|e| e.to_string())?,
                                ),
                                None => (part.parse::<u64>().map_err(|e| e.to_string())?, 1),
                            };
                            Ok((p, e))
                        })
                        .collect();
                    classnum::count_1133_formula_with(*n, &parsed?).map_err(lib)?
                }
                None => classnum::count_1133_formula(*n, *trial_bound).map_err(lib)?,
            };
            emit_records(&[json!({ "n": n, "count": count.to_string() })], cli.format);
            Ok(true)
        }
        Command::LowerBound { n } => {
            let profile = classnum::three_adic_profile(*n);
            emit_records(
                &[json!({
                    "n": n,
                    "bound": classnum::rep_lower_bound(*n).to_string(),
                    "v3": profile.v3,
                    "cofactor": profile.cofactor,
                })],
                cli.format,
            );
            Ok(true)
        }
        Command::Counterexample { n, block_param, bound } => {
            let spec = counterex::build_missing_one(*n, *block_param).map_err(lib)?;
            let report = counterex::verify_missing_one(&spec, *bound).map_err(lib)?;
            emit_records(
                &[json!({
                    "missing": spec.missing,
                    "block_param": spec.block_param,
                    "form": cross_to_json(&spec.assembled),
                    "checked_to": report.checked_to,
                    "failures": report.failures,
                    "passed": report.passed,
                })],
                cli.format,
            );
            Ok(report.passed)
        }
        Command::GapWitness { m, block_param } => {
            let w = counterex::max_gap_witness(*m, *block_param).map_err(lib)?;
            emit_records(
                &[json!({
                    "m": m,
                    "form": cross_to_json(&w.form),
                    "missed": w.missed,
                    "smallest_missed": w.smallest_missed,
                    "verified": w.verified,
                })],
                cli.format,
            );
            Ok(w.verified)
        }
        Command::Normalize { form } => {
            let FormArg::Cross(f) = parse_form(form)? else {
                return Err("normalize takes a cross-sum document".into());
            };
            let normalized = lattice::normalize(&f.with_shift(0));
            emit_records(
                &[json!({
                    "m_tilde": normalized.m_tilde,
                    "form": cross_to_json(&normalized.form),
                })],
                cli.format,
            );
            Ok(true)
        }
        Command::Norm { form, depth } => {
            let FormArg::Cross(f) = parse_form(form)? else {
                return Err("norm takes a cross-sum document".into());
            };
            let est = lattice::norm_estimate(&f, *depth);
            emit_records(
                &[json!({
                    "upper_bound": est.value,
                    "upper_bound_only": est.upper_bound_only,
                    "forms_examined": est.forms_examined,
                })],
                cli.format,
            );
            Ok(true)
        }
        Command::Blocks { m } => {
            let configs = escalate::enumerate_block_configs(*m).map_err(lib)?;
            let records: Vec<Value> = configs
                .iter()
                .map(|cfg| {
                    let c: Vec<Value> =
                        cfg.entries().map(|((i, j), v)| json!([i + 1, j + 1, v])).collect();
                    let greedy =
                        escalate::greedy_block_assignment(cfg).expect("blocks are connected");
                    json!({ "k": cfg.dim(), "c": c, "greedy_bound": greedy.bound })
                })
                .collect();
            emit_records(&records, cli.format);
            Ok(true)
        }
        Command::Series { form, conv } => {
            let series = match parse_form(form)? {
                FormArg::Diagonal(f) => {
                    let conv: CountConvention = conv.unwrap_or(Convention::Nonneg).into();
                    qseries::theta_diagonal(&f, conv, cli.precision).map_err(lib)?
                }
                FormArg::Cross(f) => {
                    let conv: CountConvention = conv.unwrap_or(Convention::All).into();
                    qseries::theta_cross(&f, conv, cli.precision).map_err(lib)?
                }
            };
            match cli.format {
                Format::Lines => {
                    for (n, a) in series.coeffs().iter().enumerate() {
                        outln!("{n}:{a}");
                    }
                }
                Format::Csv => {
                    outln!("n,a");
                    for (n, a) in series.coeffs().iter().enumerate() {
                        outln!("{n},{a}");
                    }
                }
                Format::Json => {
                    let coeffs: Vec<Value> = series.coeffs().iter().map(bigint_value).collect();
                    outln!("{}", json!({ "precision": series.precision(), "coeffs": coeffs }));
                }
            }
            Ok(true)
        }
    }
}
