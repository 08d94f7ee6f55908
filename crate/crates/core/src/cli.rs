//! Command-line front end.
//!
//! Exit codes: 0 success, 1 invalid input, 2 result truncated by the
//! enumeration budget, 3 disagreement with the brute-force oracle.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::config::{parse_rational, Config};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::harmonic::{
    block_reports, classify_with, density, partial_sum_exact_with, ClassifyOptions, DEFAULT_BUDGET,
    DEFAULT_I_WINDOW, DEFAULT_K_WINDOW,
};
use crate::missing_digits::DigitConstraint;
use crate::oracle;
use crate::presets::{preset_with, BaseParams, PRESETS};
use crate::{cmp_exact, Rational};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_TRUNCATED: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

/// Environment variable overriding the default enumeration budget.
pub const BUDGET_ENV: &str = "KEMPNER_LAB_BUDGET";

#[derive(Debug, Parser)]
#[command(name = "kempner-lab", version, about = "Missing-digit sets and their harmonic series")]
struct Cli {
    /// Built-in constraint (see `preset --list`); defaults to kempner10.
    #[arg(long, global = true, conflicts_with = "config")]
    preset: Option<String>,

    /// Base for the base-g-no-c preset.
    #[arg(long, global = true)]
    g: Option<u64>,

    /// Forbidden digit for the base-g-no-c preset.
    #[arg(long, global = true)]
    c: Option<u64>,

    /// JSON configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Run every data-parallel loop on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Digits of N, least significant first.
    Encode { n: String },
    /// The integer with digits c0,c1,... (least significant first).
    Decode { digits: String },
    /// Exact |A_k| for one block, or |A ∩ [1, N]|.
    #[command(group(ArgGroup::new("what").required(true).args(["k", "upto"])))]
    Count {
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        upto: Option<String>,
    },
    /// Whether N belongs to A.
    Member { n: String },
    /// Exact sum of 1/a over members a <= N.
    Sum {
        #[arg(long)]
        upto: String,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Per-block counts and reciprocal brackets for k = 0..=K.
    Blocks {
        #[arg(long)]
        max_k: Option<usize>,
        /// Cross-check small blocks against the oracle.
        #[arg(long)]
        check: bool,
    },
    /// Convergence verdict with the hypothesis that certifies it.
    Classify {
        /// Fixed δ as p/q or a decimal.
        #[arg(long)]
        delta: Option<String>,
        #[arg(long)]
        k_window: Option<u64>,
        #[arg(long)]
        i_window: Option<usize>,
    },
    /// A(n)/n at each listed n.
    Density {
        #[arg(long, value_delimiter = ',', required = true)]
        at: Vec<String>,
    },
    /// Cross-check counts and sums on [1, N] against the oracle.
    Verify {
        #[arg(long)]
        upto: u64,
    },
    /// List presets, or print one as a JSON configuration.
    #[command(group(ArgGroup::new("which").required(true).args(["list", "name"])))]
    Preset {
        #[arg(long)]
        list: bool,
        #[arg(long)]
        name: Option<String>,
    },
}

/// A command's result in every output format.
struct Report {
    json: Value,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    /// Human-readable rendering; the table is used when absent.
    text: Option<String>,
    code: i32,
}

impl Report {
    fn table(json: Value, header: Vec<&'static str>, rows: Vec<Vec<String>>) -> Self {
        Report {
            json,
            header,
            rows,
            text: None,
            code: EXIT_OK,
        }
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut s = self.header.join(",");
                s.push('\n');
                for row in &self.rows {
                    s.push_str(&row.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(","));
                    s.push('\n');
                }
                s
            }
            Format::Text => match &self.text {
                Some(t) => t.clone(),
                None => aligned(&self.header, &self.rows),
            },
        }
    }
}

fn csv_field(f: &str) -> String {
    if f.contains([',', '"', '\n']) {
        format!("\"{}\"", f.replace('"', "\"\""))
    } else {
        f.to_string()
    }
}

fn aligned(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, f) in widths.iter_mut().zip(row) {
            *w = (*w).max(f.len());
        }
    }
    let mut out = String::new();
    let mut line = |fields: Vec<&str>| {
        let cells: Vec<String> = fields.iter().zip(&widths).map(|(f, w)| format!("{f:>w$}")).collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    };
    line(header.to_vec());
    for row in rows {
        line(row.iter().map(String::as_str).collect());
    }
    out
}

fn rational_json(q: &Rational) -> Value {
    json!({ "num": q.numer().to_string(), "den": q.denom().to_string() })
}

fn parse_big(s: &str, what: &str) -> Result<BigUint> {
    s.trim()
        .parse::<BigUint>()
        .map_err(|_| Error::InputOutOfRange(format!("{what} `{s}` is not a nonnegative integer")))
}

fn parse_positive(s: &str, what: &str) -> Result<BigUint> {
    let n = parse_big(s, what)?;
    if n.is_zero() {
        return Err(Error::NonPositiveInput);
    }
    Ok(n)
}

struct Context {
    constraint: DigitConstraint,
    config: Option<Config>,
    exec: Exec,
    format: Format,
}

impl Context {
    fn budget(&self, flag: Option<u64>) -> Result<u64> {
        if let Some(b) = flag {
            return Ok(b);
        }
        if let Some(b) = self.config.as_ref().and_then(|c| c.params.budget) {
            return Ok(b);
        }
        match std::env::var(BUDGET_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| Error::InputOutOfRange(format!("{BUDGET_ENV} = `{v}` is not an integer"))),
            Err(_) => Ok(DEFAULT_BUDGET),
        }
    }

    fn params(&self) -> crate::config::Params {
        self.config.as_ref().map(|c| c.params.clone()).unwrap_or_default()
    }
}

/// Runs the CLI on `args` (program name first), writing reports to `out`
/// and diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let format = cli.format;
    match execute(cli) {
        Ok(report) => {
            let _ = out.write_all(report.render(format).as_bytes());
            report.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::BudgetExceeded { .. } => EXIT_TRUNCATED,
                _ => EXIT_INVALID,
            }
        }
    }
}

fn load(cli: &Cli) -> Result<(DigitConstraint, Option<Config>)> {
    let base = BaseParams {
        g: cli.g.unwrap_or(BaseParams::default().g),
        c: cli.c.unwrap_or(BaseParams::default().c),
    };
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path).map_err(|e| Error::ConfigInvalid {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        let config = Config::from_json(&text)?;
        return Ok((config.build()?, Some(config)));
    }
    let name = cli.preset.as_deref().unwrap_or("kempner10");
    Ok((preset_with(name, base)?, None))
}

fn execute(cli: Cli) -> Result<Report> {
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    if let Command::Preset { list, name } = &cli.command {
        return preset_report(*list, name.as_deref(), &cli);
    }
    let (constraint, config) = load(&cli)?;
    let ctx = Context {
        constraint,
        config,
        exec,
        format: cli.format,
    };
    match cli.command {
        Command::Encode { n } => encode(&ctx, &n),
        Command::Decode { digits } => decode(&ctx, &digits),
        Command::Count { k, upto } => count(&ctx, k, upto.as_deref()),
        Command::Member { n } => member(&ctx, &n),
        Command::Sum { upto, budget } => sum(&ctx, &upto, budget),
        Command::Blocks { max_k, check } => blocks(&ctx, max_k, check),
        Command::Classify { delta, k_window, i_window } => classify_cmd(&ctx, delta.as_deref(), k_window, i_window),
        Command::Density { at } => density_cmd(&ctx, &at),
        Command::Verify { upto } => verify(&ctx, upto),
        Command::Preset { .. } => unreachable!("handled above"),
    }
}

fn preset_report(list: bool, name: Option<&str>, cli: &Cli) -> Result<Report> {
    if list {
        let rows: Vec<Vec<String>> = PRESETS
            .iter()
            .map(|p| vec![p.name.to_string(), p.summary.to_string()])
            .collect();
        let json = Value::Array(
            PRESETS
                .iter()
                .map(|p| json!({ "name": p.name, "summary": p.summary }))
                .collect(),
        );
        return Ok(Report::table(json, vec!["name", "summary"], rows));
    }
    let name = name.expect("clap requires --list or --name");
    let base = BaseParams {
        g: cli.g.unwrap_or(BaseParams::default().g),
        c: cli.c.unwrap_or(BaseParams::default().c),
    };
    let config = Config::from_constraint(&preset_with(name, base)?);
    let json: Value = serde_json::to_value(&config).expect("config serializes");
    let mut text = config.to_json();
    text.push('\n');
    Ok(Report {
        json,
        header: vec!["config"],
        rows: vec![vec![config.to_json().replace('\n', " ")]],
        text: Some(text),
        code: EXIT_OK,
    })
}

fn encode(ctx: &Context, n: &str) -> Result<Report> {
    let n = parse_positive(n, "N")?;
    let numeral = ctx.constraint.sequence().to_digits(&n)?;
    let digits: Vec<String> = numeral.digits().iter().map(BigUint::to_string).collect();
    let rows = digits.iter().enumerate().map(|(i, d)| vec![i.to_string(), d.clone()]).collect();
    let mut report = Report::table(json!({ "n": n.to_string(), "digits": digits }), vec!["index", "digit"], rows);
    report.text = Some(format!("{}\n", digits.join(",")));
    Ok(report)
}

fn decode(ctx: &Context, digits: &str) -> Result<Report> {
    let digits = digits
        .split(',')
        .map(|d| parse_big(d, "digit"))
        .collect::<Result<Vec<_>>>()?;
    let n = ctx.constraint.sequence().from_digits(digits)?;
    let mut report = Report::table(json!({ "n": n.to_string() }), vec!["n"], vec![vec![n.to_string()]]);
    report.text = Some(format!("{n}\n"));
    Ok(report)
}

fn count(ctx: &Context, k: Option<usize>, upto: Option<&str>) -> Result<Report> {
    let c = &ctx.constraint;
    if let Some(k) = k {
        let b = c.block_count_exact(k);
        let json = json!({
            "k": k,
            "count": b.exact.to_string(),
            "product_bound": b.product_bound.to_string(),
            "empty": b.empty,
        });
        let row = vec![k.to_string(), b.exact.to_string(), b.product_bound.to_string(), b.empty.to_string()];
        let mut report = Report::table(json, vec!["k", "count", "product_bound", "empty"], vec![row]);
        report.text = Some(format!("{}\n", b.exact));
        return Ok(report);
    }
    let n = parse_big(upto.expect("clap requires --k or --upto"), "N")?;
    let count = c.count_upto(&n);
    let mut report = Report::table(
        json!({ "upto": n.to_string(), "count": count.to_string() }),
        vec!["upto", "count"],
        vec![vec![n.to_string(), count.to_string()]],
    );
    report.text = Some(format!("{count}\n"));
    Ok(report)
}

fn member(ctx: &Context, n: &str) -> Result<Report> {
    let n = parse_positive(n, "N")?;
    let is = ctx.constraint.is_member(&n)?;
    let mut report = Report::table(
        json!({ "n": n.to_string(), "member": is }),
        vec!["n", "member"],
        vec![vec![n.to_string(), is.to_string()]],
    );
    report.text = Some(format!("{is}\n"));
    Ok(report)
}

fn sum(ctx: &Context, upto: &str, budget: Option<u64>) -> Result<Report> {
    let n = parse_positive(upto, "N")?;
    let budget = ctx.budget(budget)?;
    let s = partial_sum_exact_with(&ctx.constraint, &n, budget, ctx.exec);
    let json = json!({
        "upto": n.to_string(),
        "sum": rational_json(&s.value),
        "terms": s.terms,
        "truncated": s.truncated,
        "budget": budget,
    });
    let row = vec![
        n.to_string(),
        s.value.numer().to_string(),
        s.value.denom().to_string(),
        s.terms.to_string(),
        s.truncated.to_string(),
    ];
    let mut report = Report::table(json, vec!["upto", "sum_num", "sum_den", "terms", "truncated"], vec![row]);
    let mut text = format!("{}\nterms: {}\n", s.value, s.terms);
    if s.truncated {
        let _ = writeln!(text, "truncated at a budget of {budget} terms");
        report.code = EXIT_TRUNCATED;
    }
    report.text = Some(text);
    Ok(report)
}

const BLOCK_HEADER: [&str; 12] = [
    "k",
    "g_k",
    "g_k1",
    "count",
    "bracket_lo_num",
    "bracket_lo_den",
    "bracket_hi_num",
    "bracket_hi_den",
    "cum_lo_num",
    "cum_lo_den",
    "cum_hi_num",
    "cum_hi_den",
];

/// Largest `g_{k+1}` for which `blocks --check` consults the oracle.
const CHECK_LIMIT: u64 = 1_000_000;

fn blocks(ctx: &Context, max_k: Option<usize>, check: bool) -> Result<Report> {
    let max_k = max_k.or(ctx.params().max_k).unwrap_or(8);
    let reports = block_reports(&ctx.constraint, max_k, ctx.exec);
    let mut rows = Vec::with_capacity(reports.len());
    let mut items = Vec::with_capacity(reports.len());
    for r in &reports {
        rows.push(vec![
            r.k.to_string(),
            r.g_k.to_string(),
            r.g_k1.to_string(),
            r.count.to_string(),
            r.bracket_lo.numer().to_string(),
            r.bracket_lo.denom().to_string(),
            r.bracket_hi.numer().to_string(),
            r.bracket_hi.denom().to_string(),
            r.cumulative_lo.numer().to_string(),
            r.cumulative_lo.denom().to_string(),
            r.cumulative_hi.numer().to_string(),
            r.cumulative_hi.denom().to_string(),
        ]);
        items.push(json!({
            "k": r.k,
            "g_k": r.g_k.to_string(),
            "g_k1": r.g_k1.to_string(),
            "count": r.count.to_string(),
            "bracket_lo": rational_json(&r.bracket_lo),
            "bracket_hi": rational_json(&r.bracket_hi),
            "cumulative_lo": rational_json(&r.cumulative_lo),
            "cumulative_hi": rational_json(&r.cumulative_hi),
        }));
    }
    let mut json = json!({ "blocks": items });
    let mut code = EXIT_OK;
    let mut check_lines = String::new();
    if check {
        let mut checked = Vec::new();
        for r in &reports {
            let Some(hi) = r.g_k1.to_u64().filter(|&h| h <= CHECK_LIMIT) else {
                continue;
            };
            let lo = r.g_k.to_u64().expect("g_k < g_k1");
            let o = oracle::oracle_report(&ctx.constraint, lo, hi - 1)?;
            let ok = BigUint::from(o.members) == r.count
                && cmp_exact(&r.bracket_lo, &o.sum).is_le()
                && cmp_exact(&o.sum, &r.bracket_hi).is_le();
            if !ok {
                code = EXIT_MISMATCH;
            }
            let _ = writeln!(check_lines, "check k = {}: {}", r.k, if ok { "ok" } else { "MISMATCH" });
            checked.push(json!({ "k": r.k, "ok": ok, "oracle_count": o.members }));
        }
        json["check"] = Value::Array(checked);
    }
    let header = BLOCK_HEADER.to_vec();
    let text = if ctx.format == Format::Text {
        let text_rows: Vec<Vec<String>> = reports
            .iter()
            .map(|r| {
                vec![
                    r.k.to_string(),
                    r.g_k.to_string(),
                    r.count.to_string(),
                    r.bracket_lo.to_string(),
                    r.bracket_hi.to_string(),
                    r.cumulative_lo.to_string(),
                    r.cumulative_hi.to_string(),
                ]
            })
            .collect();
        let mut t = aligned(&["k", "g_k", "count", "lo", "hi", "cum_lo", "cum_hi"], &text_rows);
        t.push_str(&check_lines);
        Some(t)
    } else {
        None
    };
    Ok(Report { json, header, rows, text, code })
}

fn classify_cmd(ctx: &Context, delta: Option<&str>, k_window: Option<u64>, i_window: Option<usize>) -> Result<Report> {
    let params = ctx.params();
    let delta = match delta {
        Some(s) => Some(parse_rational(s)?),
        None => ctx.config.as_ref().map(Config::delta).transpose()?.flatten(),
    };
    let options = ClassifyOptions {
        delta,
        k_window: k_window.or(params.k_window).unwrap_or(DEFAULT_K_WINDOW),
        i_window: i_window.or(params.i_window).unwrap_or(DEFAULT_I_WINDOW),
    };
    let cl = classify_with(&ctx.constraint, &options)?;
    let m = &cl.margin;
    let opt_rat = |q: &Option<Rational>| q.as_ref().map_or(Value::Null, rational_json);
    let json = json!({
        "verdict": cl.verdict.to_string(),
        "rule_fired": cl.rule_fired.map(|h| h.tag()),
        "margin": {
            "delta": opt_rat(&m.delta),
            "certified_from": m.certified_from.as_ref().map(BigUint::to_string),
            "window": m.window,
            "window_holds_from": m.window_holds_from,
            "window_slack": m.window_slack,
            "i0": m.i0,
            "tail_at_i0": opt_rat(&m.tail_at_i0),
            "tail_exact": m.tail_exact,
            "series_sum": opt_rat(&m.series_sum),
        },
        "attempts": cl.attempts.iter().map(|a| json!({
            "hypothesis": a.hypothesis.tag(),
            "holds": a.holds,
            "detail": a.detail,
        })).collect::<Vec<_>>(),
        "notes": cl.notes,
    });
    let show = |q: &Option<Rational>| q.as_ref().map_or(String::new(), Rational::to_string);
    let row = vec![
        cl.verdict.to_string(),
        cl.rule_fired.map_or(String::new(), |h| h.tag().to_string()),
        show(&m.delta),
        m.certified_from.as_ref().map_or(String::new(), BigUint::to_string),
        m.window_holds_from.map_or(String::new(), |k| k.to_string()),
        m.i0.map_or(String::new(), |i| i.to_string()),
        show(&m.tail_at_i0),
        show(&m.series_sum),
    ];
    let header = vec![
        "verdict",
        "rule_fired",
        "delta",
        "certified_from",
        "window_holds_from",
        "i0",
        "tail_at_i0",
        "series_sum",
    ];

    let mut t = String::new();
    let _ = writeln!(t, "verdict: {}", cl.verdict);
    if let Some(h) = cl.rule_fired {
        let _ = writeln!(t, "rule: {h}");
    }
    if let Some(d) = &m.delta {
        let _ = writeln!(t, "delta: {d}");
    }
    if let Some(k) = &m.certified_from {
        let _ = writeln!(t, "certified from k = {k}");
    }
    if let (Some(w), Some(slack)) = (m.window, m.window_slack) {
        match m.window_holds_from {
            Some(k0) => {
                let _ = writeln!(t, "spot-check: holds for every k in [{k0}, {w}], slack {slack:.4} at k = {w}");
            }
            None => {
                let _ = writeln!(t, "spot-check: fails at k = {w}");
            }
        }
    }
    if let Some(i0) = m.i0 {
        let _ = writeln!(t, "i0 = {i0}");
    }
    if let Some(tail) = &m.tail_at_i0 {
        let rel = if m.tail_exact { "=" } else { "<=" };
        let _ = writeln!(t, "tail at i0 {rel} {tail}");
    }
    if let Some(s) = &m.series_sum {
        let _ = writeln!(t, "series sum = {s}");
    }
    let _ = writeln!(t, "attempts:");
    for a in &cl.attempts {
        let _ = writeln!(t, "  {} [{}]: {}", a.hypothesis, if a.holds { "holds" } else { "fails" }, a.detail);
    }
    for n in &cl.notes {
        let _ = writeln!(t, "note: {n}");
    }
    let mut report = Report::table(json, header, vec![row]);
    report.text = Some(t);
    Ok(report)
}

fn density_cmd(ctx: &Context, at: &[String]) -> Result<Report> {
    let mut rows = Vec::new();
    let mut items = Vec::new();
    for s in at {
        let n = parse_positive(s, "n")?;
        let q = density(&ctx.constraint, &n)?;
        let approx = q.to_f64().unwrap_or(f64::NAN);
        rows.push(vec![n.to_string(), q.numer().to_string(), q.denom().to_string(), format!("{approx:.6}")]);
        items.push(json!({ "n": n.to_string(), "density": rational_json(&q) }));
    }
    Ok(Report::table(
        Value::Array(items),
        vec!["n", "density_num", "density_den", "approx"],
        rows,
    ))
}

fn verify(ctx: &Context, upto: u64) -> Result<Report> {
    if upto == 0 {
        return Err(Error::NonPositiveInput);
    }
    let c = &ctx.constraint;
    let members = oracle::oracle_members_with(c, 1, upto, ctx.exec)?;
    let mut checks: BTreeMap<&'static str, bool> = BTreeMap::new();

    let total = c.count_upto(&BigUint::from(upto));
    checks.insert("count_upto", total == BigUint::from(members.len()));

    // Running counts at a spread of members and just below them.
    let step = (members.len() / 1000).max(1);
    let running = members.iter().enumerate().step_by(step).all(|(i, &m)| {
        c.count_upto(&BigUint::from(m)) == BigUint::from(i + 1) && c.count_upto(&BigUint::from(m - 1)) == BigUint::from(i)
    });
    checks.insert("running_counts", running);

    let membership = members.iter().step_by(step).all(|&m| c.is_member(&BigUint::from(m)).unwrap_or(false));
    checks.insert("membership", membership);

    // Blocks lying entirely inside [1, upto].
    let seq = c.sequence();
    let mut block_ok = true;
    let mut k = 0;
    while let Some(hi) = seq.base_value(k + 1).to_u64().filter(|&h| h - 1 <= upto) {
        let lo = seq.base_value(k).to_u64().expect("g_k < g_k1");
        let in_block = members.partition_point(|&m| m < hi) - members.partition_point(|&m| m < lo);
        block_ok &= c.block_count_exact(k).exact == BigUint::from(in_block);
        k += 1;
    }
    checks.insert("block_counts", block_ok);

    let oracle_total = oracle::oracle_sum(c, 1, upto)?;
    let fast = partial_sum_exact_with(c, &BigUint::from(upto), members.len() as u64, ctx.exec);
    checks.insert(
        "sum",
        !fast.truncated && cmp_exact(&fast.value, &oracle_total).is_eq(),
    );

    let ok = checks.values().all(|v| *v);
    let rows = checks.iter().map(|(name, v)| vec![name.to_string(), v.to_string()]).collect();
    let json = json!({
        "upto": upto,
        "members": members.len(),
        "checks": checks,
        "ok": ok,
    });
    let mut report = Report::table(json, vec!["check", "ok"], rows);
    let mut t = format!("members in [1, {upto}]: {}\n", members.len());
    for (name, v) in &checks {
        let _ = writeln!(t, "{name}: {}", if *v { "ok" } else { "MISMATCH" });
    }
    report.text = Some(t);
    if !ok {
        report.code = EXIT_MISMATCH;
    }
    Ok(report)
}
