//! The `optcurve` binary: exact enumeration, search, verification and table
//! auditing for optimal curves over prime fields of discriminant -19.
//!
//! Exit codes: 0 success, 1 a verification or consistency check failed,
//! 2 invalid input or an operational error.

use anyhow::Context;
use clap::{Parser, Subcommand};
use optcurve::genus2::{construct_fibered_sextic, Genus2Curve, Genus2Recipe};
use optcurve::genus3::search::{self, SearchOutcome, SearchParams};
use optcurve::{
    elliptic, genus2, zeta, Disc19Field, EllipticCurve, Error, FieldCtx, Genus3Cover, Kind,
    LPolynomial, Poly,
};
use optcurve_cli::audit::audit_tables;
use optcurve_cli::dataset::{Dataset, TableId};
use optcurve_cli::fmt::{cover_eq, weq, xpoly};
use optcurve_cli::store::{Record, Store};
use optcurve_cli::table::{CurveTable, Format};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "optcurve",
    version,
    about = "Optimal curves of genus 1 to 3 over prime fields of discriminant -19"
)]
struct Cli {
    /// Output format for reports and tables.
    #[arg(long, global = true, default_value = "text", value_parser = parse_format)]
    format: Format,

    /// Worker threads for parallel searches (default: OPTCURVE_THREADS or all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Write the primary output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Append search records to this JSONL store and resume from it.
    #[arg(long, global = true)]
    store: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate the prime fields with discriminant -19 up to a bound.
    Fields {
        #[arg(long)]
        max: u64,
    },
    /// Genus 1: find or verify optimal elliptic curves.
    Elliptic {
        #[command(subcommand)]
        cmd: EllipticCmd,
    },
    /// Genus 2: construct, find or verify optimal curves.
    Genus2 {
        #[command(subcommand)]
        cmd: Genus2Cmd,
    },
    /// Genus 3: search for, verify or exhaustively scan double covers.
    Genus3 {
        #[command(subcommand)]
        cmd: Genus3Cmd,
    },
    /// Point counts over extensions and the zeta numerator L(t).
    Zeta {
        #[command(subcommand)]
        cmd: ZetaCmd,
    },
    /// Re-derive every embedded reference table row and report its status.
    Audit {
        /// Restrict to one table.
        #[arg(long, value_parser = parse_table_id)]
        table: Option<TableId>,
        /// Restrict to one field.
        #[arg(long)]
        q: Option<u64>,
    },
}

#[derive(Subcommand)]
enum EllipticCmd {
    /// Lexicographically first maximal and minimal curve per field.
    Find {
        #[arg(long, conflicts_with = "max")]
        q: Option<u64>,
        #[arg(long)]
        max: Option<u64>,
    },
    /// Count y^2 = x^3 + ax + b and classify it.
    Verify {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        /// Fail (exit 1) unless the curve has this kind.
        #[arg(long, value_parser = parse_kind)]
        expect: Option<Kind>,
    },
}

#[derive(Subcommand)]
enum Genus2Cmd {
    /// Build the fibered-product sextic from a cubic and a linear twist.
    Construct {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        #[arg(long)]
        alpha: u64,
        #[arg(long)]
        beta: u64,
    },
    /// First optimal genus 2 curve per field via the fibered construction.
    Find {
        #[arg(long, conflicts_with = "max")]
        q: Option<u64>,
        #[arg(long)]
        max: Option<u64>,
        #[arg(long, default_value = "both")]
        kind: KindArg,
    },
    /// Count a sextic z^2 = h(x) and check it against an optimal target.
    Verify {
        #[arg(long)]
        q: u64,
        /// Ascending coefficients c0,c1,...,c6.
        #[arg(long, value_delimiter = ',')]
        sextic: Vec<u64>,
        #[arg(long, value_parser = parse_kind)]
        expect: Option<Kind>,
    },
}

#[derive(Subcommand)]
enum Genus3Cmd {
    /// Search the declared form scope for optimal covers of each kind.
    Find {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value = "both")]
        kind: KindArg,
        /// Search scope: a single form or "all" for 1 through 3.
        #[arg(long, default_value = "1", value_parser = parse_forms)]
        forms: Forms,
    },
    /// Verify one cover z^2 = u(x) + v(x) y over y^2 = x^3 + ax + b.
    Verify {
        #[arg(long)]
        q: u64,
        #[arg(long, value_parser = parse_kind)]
        kind: Kind,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        /// Ascending coefficients of u: constant first.
        #[arg(long, value_delimiter = ',')]
        u: Vec<u64>,
        /// Ascending coefficients of v: constant first.
        #[arg(long, value_delimiter = ',')]
        v: Vec<u64>,
    },
    /// Exhaustively scan one normalized form, resumable and shardable.
    Exhaust {
        #[arg(long)]
        q: u64,
        #[arg(long, value_parser = parse_kind)]
        kind: Kind,
        #[arg(long)]
        form: u8,
        /// Base curve override; defaults to the lex-first optimal curve.
        #[arg(long)]
        a: Option<u64>,
        #[arg(long)]
        b: Option<u64>,
        /// Start index (must be a multiple of q).
        #[arg(long)]
        cursor: Option<u64>,
        /// Scan at most this many candidates.
        #[arg(long)]
        budget: Option<u64>,
        /// "i/n": scan the i-th of n equal slices (0-based).
        #[arg(long, value_parser = parse_shard)]
        shard: Option<(u64, u64)>,
        /// Stop at the first hit.
        #[arg(long)]
        stop_on_hit: bool,
    },
}

#[derive(Subcommand)]
enum ZetaCmd {
    /// L(t) of an elliptic curve from its point count.
    Elliptic {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
    },
    /// L(t) of a genus 2 sextic from counts over F_q and F_q^2.
    Genus2 {
        #[arg(long)]
        q: u64,
        #[arg(long, value_delimiter = ',')]
        sextic: Vec<u64>,
    },
    /// L(t) of a genus 3 cover from counts over F_q, F_q^2 and F_q^3.
    Genus3 {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        #[arg(long, value_delimiter = ',')]
        u: Vec<u64>,
        #[arg(long, value_delimiter = ',')]
        v: Vec<u64>,
    },
}

/// A kind filter that also admits "both".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum KindArg {
    One(Kind),
    Both,
}

impl KindArg {
    fn kinds(self) -> Vec<Kind> {
        match self {
            KindArg::One(k) => vec![k],
            KindArg::Both => vec![Kind::Maximal, Kind::Minimal],
        }
    }
}

impl std::str::FromStr for KindArg {
    type Err = Error;
    fn from_str(s: &str) -> optcurve::Result<KindArg> {
        if s == "both" {
            Ok(KindArg::Both)
        } else {
            Ok(KindArg::One(s.parse()?))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Forms {
    One(u8),
    All,
}

impl Forms {
    fn list(self) -> Vec<u8> {
        match self {
            Forms::One(f) => vec![f],
            Forms::All => vec![1, 2, 3],
        }
    }

    fn scope(self) -> String {
        match self {
            Forms::One(f) => format!("form {f} exhausted"),
            Forms::All => "forms 1-3 exhausted".to_string(),
        }
    }
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_table_id(s: &str) -> Result<TableId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_kind(s: &str) -> Result<Kind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_forms(s: &str) -> Result<Forms, String> {
    match s {
        "all" => Ok(Forms::All),
        "1" | "2" | "3" => Ok(Forms::One(s.parse().unwrap())),
        _ => Err(format!("unknown form scope '{s}', expected 1, 2, 3 or all")),
    }
}

fn parse_shard(s: &str) -> Result<(u64, u64), String> {
    let (i, n) = s
        .split_once('/')
        .ok_or_else(|| format!("shard '{s}' is not of the form i/n"))?;
    let i: u64 = i.parse().map_err(|_| format!("bad shard index '{i}'"))?;
    let n: u64 = n.parse().map_err(|_| format!("bad shard count '{n}'"))?;
    if n == 0 || i >= n {
        return Err(format!("shard {i}/{n} is out of range"));
    }
    Ok((i, n))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.or_else(|| {
        std::env::var("OPTCURVE_THREADS")
            .ok()
            .and_then(|s| s.parse().ok())
    });
    if let Some(n) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("optcurve: cannot configure {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("optcurve: {e:#}");
            ExitCode::from(error_code(&e))
        }
    }
}

/// 1 for failed mathematical checks, 2 for unusable input.
fn error_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::InconsistentCounts(_))
        | Some(Error::ExtensionCountUnsupported(_))
        | Some(Error::SplitCover) => 1,
        _ => 2,
    }
}

fn run(cli: &Cli) -> anyhow::Result<u8> {
    match &cli.cmd {
        Cmd::Fields { max } => fields(cli, *max),
        Cmd::Elliptic { cmd } => match cmd {
            EllipticCmd::Find { q, max } => elliptic_find(cli, *q, *max),
            EllipticCmd::Verify { q, a, b, expect } => elliptic_verify(cli, *q, *a, *b, *expect),
        },
        Cmd::Genus2 { cmd } => match cmd {
            Genus2Cmd::Construct {
                q,
                a,
                b,
                alpha,
                beta,
            } => genus2_construct(cli, *q, *a, *b, *alpha, *beta),
            Genus2Cmd::Find { q, max, kind } => genus2_find(cli, *q, *max, *kind),
            Genus2Cmd::Verify { q, sextic, expect } => genus2_verify(cli, *q, sextic, *expect),
        },
        Cmd::Genus3 { cmd } => match cmd {
            Genus3Cmd::Find { q, kind, forms } => genus3_find(cli, *q, *kind, *forms),
            Genus3Cmd::Verify {
                q,
                kind,
                a,
                b,
                u,
                v,
            } => genus3_verify(cli, *q, *kind, *a, *b, u, v),
            Genus3Cmd::Exhaust {
                q,
                kind,
                form,
                a,
                b,
                cursor,
                budget,
                shard,
                stop_on_hit,
            } => genus3_exhaust(
                cli,
                *q,
                *kind,
                *form,
                a.zip(*b),
                *cursor,
                *budget,
                *shard,
                *stop_on_hit,
            ),
        },
        Cmd::Zeta { cmd } => zeta_cmd(cli, cmd),
        Cmd::Audit { table, q } => audit_cmd(cli, *table, *q),
    }
}

fn emit(cli: &Cli, content: &str) -> anyhow::Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, content)
            .with_context(|| format!("write {}", path.display()))?,
        None => print!("{content}"),
    }
    Ok(())
}

fn fmt_class(class: optcurve::Classification) -> &'static str {
    match class {
        optcurve::Classification::Maximal => "maximal",
        optcurve::Classification::Minimal => "minimal",
        optcurve::Classification::Neither => "neither",
    }
}

fn fmt_lpoly(l: &LPolynomial) -> String {
    let mut parts = vec!["1".to_string()];
    for (k, &c) in l.coeffs.iter().enumerate().skip(1) {
        if c == 0 {
            continue;
        }
        let var = if k == 1 { "t".into() } else { format!("t^{k}") };
        if c < 0 {
            parts.push(format!("- {}{var}", if c == -1 { String::new() } else { (-c).to_string() }));
        } else {
            parts.push(format!("+ {}{var}", if c == 1 { String::new() } else { c.to_string() }));
        }
    }
    parts.join(" ")
}

fn fields(cli: &Cli, max: u64) -> anyhow::Result<u8> {
    let fields = optcurve::disc19::enumerate(max);
    let content = match cli.format {
        Format::Text => {
            let mut s = String::from("   q   m\n");
            for f in &fields {
                s.push_str(&format!("{:>4} {:>3}\n", f.q(), f.m()));
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("q,m\n");
            for f in &fields {
                s.push_str(&format!("{},{}\n", f.q(), f.m()));
            }
            s
        }
        Format::Json => {
            let rows: Vec<_> = fields
                .iter()
                .map(|f| json!({"q": f.q(), "m": f.m()}))
                .collect();
            serde_json::to_string_pretty(&rows)? + "\n"
        }
    };
    emit(cli, &content)?;
    Ok(0)
}

fn field_list(q: Option<u64>, max: Option<u64>) -> anyhow::Result<Vec<Disc19Field>> {
    match (q, max) {
        (Some(q), _) => Ok(vec![Disc19Field::new(q)?]),
        (None, Some(max)) => Ok(optcurve::disc19::enumerate(max)),
        (None, None) => Err(Error::InvalidInput("pass either --q or --max".into()).into()),
    }
}

fn elliptic_find(cli: &Cli, q: Option<u64>, max: Option<u64>) -> anyhow::Result<u8> {
    let mut table = CurveTable::new(
        "optimal elliptic curves",
        "lex-first (a, b) by exhaustive scan",
    );
    for field in field_list(q, max)? {
        let ctx = FieldCtx::new(field.q())?;
        let (emax, _) = elliptic::find_optimal(&field, &ctx, Kind::Maximal)?;
        let (emin, _) = elliptic::find_optimal(&field, &ctx, Kind::Minimal)?;
        table.push(
            field.q(),
            Some(weq(emax.a, emax.b)),
            Some(weq(emin.a, emin.b)),
        );
    }
    emit(cli, &table.render(cli.format))?;
    Ok(0)
}

fn elliptic_verify(
    cli: &Cli,
    q: u64,
    a: u64,
    b: u64,
    expect: Option<Kind>,
) -> anyhow::Result<u8> {
    let field = Disc19Field::new(q)?;
    let ctx = FieldCtx::new(q)?;
    let e = EllipticCurve::new(&ctx, a, b)?;
    let report = e.classify(&field, &ctx);
    let pass = expect.is_none_or(|k| report.class.matches(k));
    let content = match cli.format {
        Format::Json => {
            let mut v = serde_json::to_value(&report)?;
            v["expect"] = match expect {
                Some(k) => json!(k.to_string()),
                None => serde_json::Value::Null,
            };
            v["pass"] = json!(pass);
            serde_json::to_string_pretty(&v)? + "\n"
        }
        Format::Csv => format!(
            "q,a,b,count,trace,class,pass\n{q},{a},{b},{},{},{},{pass}\n",
            report.n1,
            report.trace,
            fmt_class(report.class)
        ),
        Format::Text => {
            let mut s = format!(
                "{} over F_{q}: count {}, trace {}, {}",
                weq(a, b),
                report.n1,
                report.trace,
                fmt_class(report.class)
            );
            if let Some(k) = expect {
                s.push_str(&format!(" (expected {k}: {})", if pass { "pass" } else { "FAIL" }));
            }
            s.push('\n');
            s
        }
    };
    emit(cli, &content)?;
    Ok(if pass { 0 } else { 1 })
}

fn genus2_construct(
    cli: &Cli,
    q: u64,
    a: u64,
    b: u64,
    alpha: u64,
    beta: u64,
) -> anyhow::Result<u8> {
    let field = Disc19Field::new(q)?;
    let ctx = FieldCtx::new(q)?;
    let e1 = EllipticCurve::new(&ctx, a, b)?;
    let recipe = Genus2Recipe::new(&ctx, e1, alpha, beta)?;
    let curve = construct_fibered_sextic(&ctx, &recipe)?;
    let count = curve.count(&ctx);
    let class = field.classify_count(2, count);
    let sextic = curve.sextic.coeffs().to_vec();
    let content = match cli.format {
        Format::Json => {
            serde_json::to_string_pretty(&json!({
                "q": q,
                "e1": {"a": a, "b": b},
                "alpha": alpha,
                "beta": beta,
                "sextic": sextic,
                "equation": format!("z^2={}", xpoly(&sextic)),
                "count": count,
                "class": fmt_class(class),
            }))? + "\n"
        }
        Format::Csv => format!(
            "q,alpha,beta,sextic,count,class\n{q},{alpha},{beta},{},{count},{}\n",
            xpoly(&sextic),
            fmt_class(class)
        ),
        Format::Text => format!(
            "fibered product of {} and (x+{beta} twist): z^2={}  count {count} ({})\n",
            weq(a, b),
            xpoly(&sextic),
            fmt_class(class)
        ),
    };
    emit(cli, &content)?;
    Ok(0)
}

fn genus2_find(cli: &Cli, q: Option<u64>, max: Option<u64>, kind: KindArg) -> anyhow::Result<u8> {
    let mut table = CurveTable::new(
        "optimal genus 2 curves",
        "first fibered-product recipe in lex order",
    );
    for field in field_list(q, max)? {
        let ctx = FieldCtx::new(field.q())?;
        let mut cells = [None, None];
        for k in kind.kinds() {
            let (_, curve) = genus2::find_optimal(&field, &ctx, k)?;
            let cell = Some(format!("z^2={}", xpoly(curve.sextic.coeffs())));
            match k {
                Kind::Maximal => cells[0] = cell,
                Kind::Minimal => cells[1] = cell,
            }
        }
        table.push(field.q(), cells[0].take(), cells[1].take());
    }
    emit(cli, &table.render(cli.format))?;
    Ok(0)
}

fn genus2_verify(
    cli: &Cli,
    q: u64,
    sextic: &[u64],
    expect: Option<Kind>,
) -> anyhow::Result<u8> {
    let field = Disc19Field::new(q)?;
    let ctx = FieldCtx::new(q)?;
    let (count, class, genus_ok, note) =
        match Genus2Curve::new(&ctx, Poly::from_coeffs(&ctx, sextic.to_vec())) {
            Ok(curve) => {
                let n = curve.count(&ctx);
                (n, field.classify_count(2, n), true, String::new())
            }
            Err(Error::NotSquarefree) => (
                0,
                optcurve::Classification::Neither,
                false,
                "sextic is not squarefree, so it is not a genus 2 model".into(),
            ),
            Err(e) => return Err(e.into()),
        };
    let pass = genus_ok && expect.is_none_or(|k| class.matches(k));
    let content = match cli.format {
        Format::Json => {
            serde_json::to_string_pretty(&json!({
                "q": q,
                "sextic": sextic,
                "count": count,
                "class": fmt_class(class),
                "genus2": genus_ok,
                "note": note,
                "pass": pass,
            }))? + "\n"
        }
        _ => {
            if genus_ok {
                format!(
                    "z^2={} over F_{q}: count {count} ({})  {}\n",
                    xpoly(sextic),
                    fmt_class(class),
                    if pass { "pass" } else { "FAIL" }
                )
            } else {
                format!("z^2={} over F_{q}: FAIL ({note})\n", xpoly(sextic))
            }
        }
    };
    emit(cli, &content)?;
    Ok(if pass { 0 } else { 1 })
}

fn genus3_verify(
    cli: &Cli,
    q: u64,
    kind: Kind,
    a: u64,
    b: u64,
    u: &[u64],
    v: &[u64],
) -> anyhow::Result<u8> {
    let field = Disc19Field::new(q)?;
    let ctx = FieldCtx::new(q)?;
    let e = EllipticCurve::new(&ctx, a, b)?;
    let cover = Genus3Cover::new(
        &ctx,
        e,
        Poly::from_coeffs(&ctx, u.to_vec()),
        Poly::from_coeffs(&ctx, v.to_vec()),
    )?;
    let report = cover.verify(&field, &ctx, kind);
    let content = match cli.format {
        Format::Json => serde_json::to_string_pretty(&report)? + "\n",
        _ => format!(
            "{}; {} over F_{q} ({kind}): count {}/{}, branch number {}, genus {}  {}\n",
            weq(a, b),
            cover_eq(u, v),
            report.count,
            report.target,
            report.branch_b,
            report.genus,
            if report.pass { "pass" } else { "FAIL" }
        ),
    };
    emit(cli, &content)?;
    Ok(if report.pass { 0 } else { 1 })
}

fn genus3_find(cli: &Cli, q: u64, kind: KindArg, forms: Forms) -> anyhow::Result<u8> {
    let field = Disc19Field::new(q)?;
    let ctx = FieldCtx::new(q)?;
    let mut cells = [None, None];
    let mut outcomes = Vec::new();
    for k in kind.kinds() {
        let (e, _) = elliptic::find_optimal(&field, &ctx, k)?;
        let mut found = None;
        for form in forms.list() {
            let params = SearchParams {
                form,
                cursor: 0,
                budget: None,
                stop_on_hit: true,
            };
            let outcome = search::search_form(&ctx, &field, e, k, params)?;
            let params_json = json!({
                "q": q, "kind": k.to_string(), "form": form, "a": e.a, "b": e.b,
            });
            record_outcome(cli, "genus3 find", &params_json, &outcome)?;
            let hit = outcome.hits.first().cloned();
            outcomes.push(outcome);
            if let Some(hit) = hit {
                found = Some(format!("{}; {}", weq(e.a, e.b), cover_eq(&hit.u, &hit.v)));
                break;
            }
        }
        match k {
            Kind::Maximal => cells[0] = found,
            Kind::Minimal => cells[1] = found,
        }
    }
    let scope = format!("{} over the lex-first optimal curve of each kind", forms.scope());
    let mut table = CurveTable::new("genus 3 optimal covers", &scope);
    table.push(q, cells[0].take(), cells[1].take());
    emit(cli, &table.render(cli.format))?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn genus3_exhaust(
    cli: &Cli,
    q: u64,
    kind: Kind,
    form: u8,
    e_override: Option<(u64, u64)>,
    cursor: Option<u64>,
    budget: Option<u64>,
    shard: Option<(u64, u64)>,
    stop_on_hit: bool,
) -> anyhow::Result<u8> {
    let field = Disc19Field::new(q)?;
    let ctx = FieldCtx::new(q)?;
    let e = match e_override {
        Some((a, b)) => EllipticCurve::new(&ctx, a, b)?,
        None => elliptic::find_optimal(&field, &ctx, kind)?.0,
    };
    let space = search::space_size(q, form);
    // Resolve the scan window [start, end); shards own disjoint block ranges.
    let (mut start, end) = if let Some((i, n)) = shard {
        if cursor.is_some() || budget.is_some() {
            return Err(Error::InvalidInput(
                "--shard replaces --cursor/--budget; pass one or the other".into(),
            )
            .into());
        }
        let blocks = space / q;
        (blocks * i / n * q, blocks * (i + 1) / n * q)
    } else {
        let s = cursor.unwrap_or(0);
        (s, budget.map_or(space, |b| (s + b).min(space)))
    };
    let params_json = json!({
        "q": q, "kind": kind.to_string(), "form": form, "a": e.a, "b": e.b,
        "shard": shard.map(|(i, n)| format!("{i}/{n}")),
    });
    if let Some(store_path) = &cli.store {
        let store = Store::open(store_path);
        if let Some(p) = store.resume_point("genus3 exhaust", &params_json)? {
            if p.complete || p.cursor >= end {
                emit(
                    cli,
                    &format!("scan already complete at cursor {}; nothing to do\n", p.cursor),
                )?;
                return Ok(0);
            }
            if cursor.is_none() {
                // Hit records may sit mid-block; restart at the block boundary.
                start = start.max(p.cursor / q * q);
            }
        }
    }
    let params = SearchParams {
        form,
        cursor: start,
        budget: Some(end - start),
        stop_on_hit,
    };
    let outcome = search::search_form(&ctx, &field, e, kind, params)?;
    record_outcome(cli, "genus3 exhaust", &params_json, &outcome)?;
    let content = match cli.format {
        Format::Json => serde_json::to_string_pretty(&outcome)? + "\n",
        Format::Csv => {
            let mut s = String::from("index,equation,count,branch_b\n");
            for h in &outcome.hits {
                s.push_str(&format!(
                    "{},{}; {},{},{}\n",
                    h.index,
                    weq(e.a, e.b),
                    cover_eq(&h.u, &h.v),
                    h.count,
                    h.branch_b
                ));
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for h in &outcome.hits {
                s.push_str(&format!(
                    "hit {}: {}; {}  count {} branch {}\n",
                    h.index,
                    weq(e.a, e.b),
                    cover_eq(&h.u, &h.v),
                    h.count,
                    h.branch_b
                ));
            }
            s.push_str(&format!(
                "form {form} over {}: scanned {} of {}, cursor {}, {}\n",
                weq(e.a, e.b),
                outcome.scanned,
                outcome.space,
                outcome.cursor,
                if outcome.complete { "complete" } else { "incomplete" }
            ));
            s
        }
    };
    emit(cli, &content)?;
    Ok(0)
}

/// Writes hits and the final outcome of one form scan to the JSONL store.
fn record_outcome(
    cli: &Cli,
    cmd: &str,
    params: &serde_json::Value,
    outcome: &SearchOutcome,
) -> anyhow::Result<()> {
    let Some(path) = &cli.store else {
        return Ok(());
    };
    let store = Store::open(path);
    for hit in &outcome.hits {
        let mut rec = Record::new(cmd, params.clone(), hit.index);
        rec.hit = Some(serde_json::to_value(hit)?);
        store.append(&rec)?;
    }
    let mut rec = Record::new(cmd, params.clone(), outcome.cursor);
    rec.report = Some(json!({
        "complete": outcome.complete,
        "scanned": outcome.scanned,
        "space": outcome.space,
    }));
    store.append(&rec)?;
    Ok(())
}

fn zeta_cmd(cli: &Cli, cmd: &ZetaCmd) -> anyhow::Result<u8> {
    let (q, genus, counts, label) = match cmd {
        ZetaCmd::Elliptic { q, a, b } => {
            let ctx = FieldCtx::new(*q)?;
            let e = EllipticCurve::new(&ctx, *a, *b)?;
            let counts = vec![zeta::elliptic_over_ext(&ctx, &e, 1)?];
            (*q, 1, counts, weq(*a, *b))
        }
        ZetaCmd::Genus2 { q, sextic } => {
            let ctx = FieldCtx::new(*q)?;
            let curve = Genus2Curve::new(&ctx, Poly::from_coeffs(&ctx, sextic.clone()))?;
            let counts = vec![
                zeta::genus2_over_ext(&ctx, &curve, 1)?,
                zeta::genus2_over_ext(&ctx, &curve, 2)?,
            ];
            (*q, 2, counts, format!("z^2={}", xpoly(sextic)))
        }
        ZetaCmd::Genus3 { q, a, b, u, v } => {
            let ctx = FieldCtx::new(*q)?;
            let e = EllipticCurve::new(&ctx, *a, *b)?;
            let cover = Genus3Cover::new(
                &ctx,
                e,
                Poly::from_coeffs(&ctx, u.to_vec()),
                Poly::from_coeffs(&ctx, v.to_vec()),
            )?;
            let counts = vec![
                zeta::genus3_over_ext(&ctx, &cover, 1)?,
                zeta::genus3_over_ext(&ctx, &cover, 2)?,
                zeta::genus3_over_ext(&ctx, &cover, 3)?,
            ];
            (*q, 3, counts, format!("{}; {}", weq(*a, *b), cover_eq(u, v)))
        }
    };
    let l = zeta::lpoly_from_counts(q, genus, &counts)?;
    let optimal = Disc19Field::new(q).ok().and_then(|field| {
        [Kind::Maximal, Kind::Minimal]
            .into_iter()
            .find(|&k| zeta::is_optimal(&field, &l, k))
    });
    let content = match cli.format {
        Format::Json => {
            serde_json::to_string_pretty(&json!({
                "q": q,
                "genus": genus,
                "curve": label,
                "counts": counts,
                "l": l.coeffs,
                "optimal": optimal.map(|k| k.to_string()),
            }))? + "\n"
        }
        Format::Csv => {
            let counts_s: Vec<String> = counts.iter().map(u64::to_string).collect();
            let coeffs_s: Vec<String> = l.coeffs.iter().map(i64::to_string).collect();
            format!(
                "q,genus,counts,l,optimal\n{q},{genus},{},{},{}\n",
                counts_s.join(";"),
                coeffs_s.join(";"),
                optimal.map_or("none".into(), |k| k.to_string())
            )
        }
        Format::Text => {
            let mut s = format!("{label} over F_{q}\n");
            for (r, n) in counts.iter().enumerate() {
                s.push_str(&format!("N_{} = {n}\n", r + 1));
            }
            s.push_str(&format!("L(t) = {}\n", fmt_lpoly(&l)));
            s.push_str(&format!(
                "optimal: {}\n",
                optimal.map_or("no".into(), |k| k.to_string())
            ));
            s
        }
    };
    emit(cli, &content)?;
    Ok(0)
}

fn audit_cmd(cli: &Cli, table: Option<TableId>, q: Option<u64>) -> anyhow::Result<u8> {
    let dataset = Dataset::embedded().filter(table, q);
    if dataset.rows.is_empty() {
        return Err(Error::InvalidInput("no dataset rows match the filter".into()).into());
    }
    let report = audit_tables(&dataset);
    let content = match cli.format {
        Format::Json => report.to_json() + "\n",
        Format::Csv => report.to_csv(),
        Format::Text => report.to_text(),
    };
    emit(cli, &content)?;
    if let Some(path) = &cli.store {
        let store = Store::open(path);
        let mut rec = Record::new(
            "audit",
            json!({"table": table.map(|t| t.to_string()), "q": q}),
            0,
        );
        rec.report = Some(serde_json::to_value(&report)?);
        store.append(&rec)?;
    }
    Ok(0)
}
