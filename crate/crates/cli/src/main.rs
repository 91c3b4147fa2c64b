use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use inhom_core::expansion::{gamma_value, m_value};
use inhom_core::ncf::{make_alpha, ncf_expand, NcfForm, PeriodTwoAlpha, DEFAULT_MAX_TERMS};
use inhom_core::oracle::{liminf_estimate, OracleMode, OracleReport, DEFAULT_WINDOWS};
use inhom_core::quadfield::QuadNum;
use inhom_core::spectrum::{
    applicable_classes, catalog_plan, class_tsequence, class_tsequences, delta_closed_form, euclidean_test,
    isolation_gap, spectrum_catalog, ClassId, Family, SpectrumCatalog, SpectrumError, DEFAULT_KMAX,
};
use inhom_core::m_star;

#[derive(Parser)]
#[command(name = "inhom", version, about = "Exact inhomogeneous spectra for [0; a, b, a, b, ...]^-")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Values above the first limit point, largest first
    Catalog(CatalogArgs),
    /// Compare every closed form with the value of its period
    Verify(VerifyArgs),
    /// Direct search for the minimum of n ||n eta - gamma|| over windows of n
    Oracle(OracleArgs),
    /// Largest values, gap and first limit point over a grid of (a, b)
    Sweep(SweepArgs),
    /// Negative continued fraction of p + q sqrt(N), or of eta when --a/--b are given
    Ncf(NcfArgs),
    /// Compare the largest value with 1/sqrt(disc) of the minimal polynomial
    Euclid(EuclidArgs),
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Decimal places in printed values
    #[arg(long, default_value_t = 15, value_parser = clap::value_parser!(u32).range(1..=200))]
    digits: u32,
}

#[derive(Args)]
struct Pair {
    #[arg(long)]
    a: i64,
    #[arg(long)]
    b: i64,
}

#[derive(Args)]
struct CatalogArgs {
    #[command(flatten)]
    pair: Pair,
    #[arg(long, default_value_t = DEFAULT_KMAX)]
    kmax: u32,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, requires = "b", conflicts_with = "grid")]
    a: Option<i64>,
    #[arg(long, requires = "a")]
    b: Option<i64>,
    /// `amin..amax,bmin..bmax`
    #[arg(long)]
    grid: Option<String>,
    #[arg(long, default_value_t = 4)]
    kmax: u32,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    pair: Pair,
    /// Class symbol: S0, S-1..S-9, Sk, Sk1..Sk12, S0t, S2k, S2k+1
    #[arg(long = "class")]
    class: String,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    t: Option<i64>,
    /// With --nmax, a single window instead of the three default decades
    #[arg(long, requires = "nmax")]
    nmin: Option<u64>,
    #[arg(long, requires = "nmin")]
    nmax: Option<u64>,
    /// Exact arithmetic at every n
    #[arg(long)]
    exact: bool,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct SweepArgs {
    /// `amin..amax,bmin..bmax`
    #[arg(long, default_value = "2..13,3..14")]
    grid: String,
    #[arg(long, default_value_t = DEFAULT_KMAX)]
    kmax: u32,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct NcfArgs {
    #[arg(long, requires = "b", conflicts_with_all = ["p", "q", "n"])]
    a: Option<i64>,
    #[arg(long, requires = "a")]
    b: Option<i64>,
    /// Rational part, e.g. 7/2
    #[arg(long, allow_hyphen_values = true, requires = "n")]
    p: Option<String>,
    /// Coefficient of sqrt(N), e.g. -1/2
    #[arg(long, allow_hyphen_values = true, requires = "n")]
    q: Option<String>,
    #[arg(long)]
    n: Option<i128>,
    #[arg(long, default_value_t = DEFAULT_MAX_TERMS)]
    max_terms: usize,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct EuclidArgs {
    #[command(flatten)]
    pair: Pair,
    #[command(flatten)]
    out: Output,
}

/// Failure kinds mapped onto exit codes.
enum Failure {
    Config(String),
    Verification,
}

type Run = Result<(), Failure>;

fn config<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Config(e.to_string())
}

fn alpha(a: i64, b: i64) -> Result<PeriodTwoAlpha, Failure> {
    make_alpha(a, b).map_err(config)
}

fn parse_range(s: &str) -> Result<(i64, i64), Failure> {
    let bad = || Failure::Config(format!("bad range {s:?}, expected lo..hi"));
    let (lo, hi) = s.trim().split_once("..").ok_or_else(bad)?;
    let lo = lo.trim().parse().map_err(|_| bad())?;
    let hi = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

/// Covered pairs inside `amin..amax,bmin..bmax` (both ends inclusive).
fn grid_pairs(grid: &str) -> Result<Vec<(i64, i64)>, Failure> {
    let (ar, br) = grid.split_once(',').ok_or_else(|| Failure::Config(format!("bad grid {grid:?}")))?;
    let (a0, a1) = parse_range(ar)?;
    let (b0, b1) = parse_range(br)?;
    if a0 < 2 {
        return Err(Failure::Config("grid needs a >= 2".into()));
    }
    let mut out = Vec::new();
    for a in a0..=a1 {
        for b in b0.max(a + 1)..=b1 {
            if a == 2 && b < 5 {
                continue;
            }
            out.push((a, b));
        }
    }
    Ok(out)
}

fn qjson(x: &QuadNum, digits: u32) -> Value {
    serde_json::to_value(x.json(digits)).expect("serialisable")
}

fn dec(x: &QuadNum, digits: u32) -> String {
    x.decimal(digits).text
}

fn emit(text: &str) {
    let mut out = io::stdout().lock();
    // a closed pipe is not an error worth reporting
    let _ = out.write_all(text.as_bytes());
}

fn print_json(v: &Value) {
    emit(&format!("{}\n", serde_json::to_string_pretty(v).expect("json")));
}

fn print_csv(header: &[&str], rows: &[Vec<String>]) {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("csv");
    for r in rows {
        w.write_record(r).expect("csv");
    }
    emit(&String::from_utf8(w.into_inner().expect("csv")).expect("utf8"));
}

fn print_table(header: &[&str], rows: &[Vec<String>]) {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        format!("{}\n", parts.join("  ").trim_end())
    };
    let mut s = line(header.to_vec());
    for r in rows {
        s.push_str(&line(r.iter().map(|c| c.as_str()).collect()));
    }
    emit(&s);
}

fn print_rows(format: Format, header: &[&str], rows: &[Vec<String>]) {
    match format {
        Format::Csv => print_csv(header, rows),
        _ => print_table(header, rows),
    }
}

fn catalog_json(cat: &SpectrumCatalog, digits: u32) -> Value {
    let al = &cat.alpha;
    let points: Vec<Value> = cat
        .points
        .iter()
        .map(|p| {
            json!({
                "label": p.label(),
                "family": p.limit_of.unwrap_or(p.class.family).symbol(),
                "k": if p.limit_of.is_some() { None } else { p.class.k },
                "t": p.class.t,
                "m_star": qjson(&p.m_star, digits),
                "m": qjson(&p.m, digits),
                "kind": p.kind.as_str(),
                "direction": p.direction.as_str(),
                "aliases": p.aliases.iter().map(|c| c.label()).collect::<Vec<_>>(),
                "source": match p.source { inhom_core::spectrum::ValueSource::ClosedForm => "closed_form", _ => "evaluator" },
            })
        })
        .collect();
    let families: Vec<Value> = cat
        .families
        .iter()
        .map(|f| {
            json!({
                "family": f.family.symbol(),
                "start_k": f.start_k,
                "direction": f.direction.as_str(),
                "limit": qjson(&f.limit, digits),
            })
        })
        .collect();
    let mut v = json!({
        "a": al.a(),
        "b": al.b(),
        "N": al.radicand(),
        "rho_star": qjson(&cat.points[0].m_star, digits),
        "rho_star_class": cat.rho_star.label(),
        "first_limit_point": qjson(&cat.first_limit_point, digits),
        "points": points,
        "families": families,
        "kmax": cat.truncation_k,
    });
    if let Some(o) = &cat.odd {
        v["odd_params"] = json!({"m": o.m, "r": o.r, "n": o.n, "s": o.s, "v": qjson(&o.v, digits)});
    }
    v
}

fn run_catalog(args: &CatalogArgs) -> Run {
    let al = alpha(args.pair.a, args.pair.b)?;
    let cat = spectrum_catalog(&al, args.kmax).map_err(config)?;
    let d = args.out.digits;
    if args.out.format == Format::Json {
        print_json(&catalog_json(&cat, d));
        return Ok(());
    }
    let rows: Vec<Vec<String>> = cat
        .points
        .iter()
        .map(|p| {
            vec![
                p.label(),
                p.kind.as_str().to_string(),
                p.direction.as_str().to_string(),
                dec(&p.m_star, d),
                dec(&p.m, d),
                p.aliases.iter().map(|c| c.label()).collect::<Vec<_>>().join(" "),
            ]
        })
        .collect();
    print_rows(args.out.format, &["label", "kind", "direction", "m_star", "m", "aliases"], &rows);
    Ok(())
}

struct Check {
    a: i64,
    b: i64,
    class: ClassId,
    period: usize,
    closed: Option<QuadNum>,
    evaluated: QuadNum,
}

impl Check {
    fn status(&self) -> &'static str {
        match &self.closed {
            None => "no-closed-form",
            Some(c) if *c == self.evaluated => "pass",
            Some(_) => "FAIL",
        }
    }
}

fn checks_for(a: i64, b: i64, kmax: u32) -> Result<Vec<Check>, Failure> {
    let al = alpha(a, b)?;
    let mut out = Vec::new();
    for cls in applicable_classes(&al, kmax).map_err(config)? {
        let closed = match delta_closed_form(&cls, &al) {
            Ok(v) => Some(v),
            Err(SpectrumError::Inapplicable(..)) => None,
            Err(e) => return Err(config(e)),
        };
        for (period, ts) in class_tsequences(&cls, &al).map_err(config)?.iter().enumerate() {
            out.push(Check { a, b, class: cls, period, closed: closed.clone(), evaluated: m_star(ts, &al) });
        }
    }
    Ok(out)
}

fn run_verify(args: &VerifyArgs) -> Run {
    let pairs = match (&args.grid, args.a, args.b) {
        (Some(g), _, _) => grid_pairs(g)?,
        (None, Some(a), Some(b)) => vec![(a, b)],
        _ => grid_pairs("2..13,3..14")?,
    };
    let per_pair: Vec<Result<Vec<Check>, Failure>> = pairs.par_iter().map(|&(a, b)| checks_for(a, b, args.kmax)).collect();
    let mut checks = Vec::new();
    for r in per_pair {
        checks.extend(r?);
    }
    let d = args.out.digits;
    let failed = checks.iter().filter(|c| c.status() == "FAIL").count();
    if args.out.format == Format::Json {
        let rows: Vec<Value> = checks
            .iter()
            .map(|c| {
                json!({
                    "a": c.a, "b": c.b, "class": c.class.label(), "family": c.class.family.symbol(),
                    "k": c.class.k, "t": c.class.t, "period": c.period, "status": c.status(),
                    "closed_form": c.closed.as_ref().map(|v| qjson(v, d)),
                    "evaluator": qjson(&c.evaluated, d),
                })
            })
            .collect();
        print_json(&json!({"checks": rows, "failed": failed, "total": checks.len()}));
    } else {
        let rows: Vec<Vec<String>> = checks
            .iter()
            .map(|c| {
                vec![
                    c.a.to_string(),
                    c.b.to_string(),
                    c.class.label(),
                    c.period.to_string(),
                    c.closed.as_ref().map(|v| dec(v, d)).unwrap_or_default(),
                    dec(&c.evaluated, d),
                    c.status().to_string(),
                ]
            })
            .collect();
        print_rows(args.out.format, &["a", "b", "class", "period", "closed_form", "evaluator", "status"], &rows);
        if args.out.format == Format::Table {
            emit(&format!("{} checked, {failed} failed\n", checks.len()));
        }
    }
    if failed > 0 {
        Err(Failure::Verification)
    } else {
        Ok(())
    }
}

fn report_json(r: &OracleReport, digits: u32) -> Value {
    json!({
        "n_lo": r.n_lo, "n_hi": r.n_hi, "argmin": r.argmin,
        "window_min": qjson(&r.window_min, digits), "exact_checks": r.exact_checks,
    })
}

fn run_oracle(args: &OracleArgs) -> Run {
    let al = alpha(args.pair.a, args.pair.b)?;
    let family: Family = args.class.parse().map_err(config)?;
    let cls = match family {
        Family::ZeroT => ClassId::zero_t(args.t.ok_or_else(|| Failure::Config("S0t needs --t".into()))?),
        f if f.has_k() => ClassId::member(f, args.k.ok_or_else(|| Failure::Config(format!("{} needs --k", f.symbol())))?),
        f => ClassId::single(f),
    };
    let ts = class_tsequence(&cls, &al).map_err(config)?;
    let gamma = gamma_value(&ts, &al);
    let exact = m_value(&m_star(&ts, &al), &al);
    let windows: Vec<(u64, u64)> = match (args.nmin, args.nmax) {
        (Some(lo), Some(hi)) => vec![(lo, hi)],
        _ => DEFAULT_WINDOWS.to_vec(),
    };
    let mode = if args.exact { OracleMode::Exact } else { OracleMode::Hybrid };
    let pos = liminf_estimate(&al, &gamma, &windows, mode).map_err(config)?;
    let neg = liminf_estimate(&al, &-&gamma, &windows, mode).map_err(config)?;
    let d = args.out.digits;
    let best = if pos.estimate < neg.estimate { &pos.estimate } else { &neg.estimate };
    let rel = ((best - &exact) / &exact).abs();
    if args.out.format == Format::Json {
        print_json(&json!({
            "a": al.a(), "b": al.b(), "class": cls.label(), "period": ts.to_string(),
            "exact_m": qjson(&exact, d),
            "positive_n": pos.rows.iter().map(|r| report_json(r, d)).collect::<Vec<_>>(),
            "negative_n": neg.rows.iter().map(|r| report_json(r, d)).collect::<Vec<_>>(),
            "stabilized": pos.stabilized && neg.stabilized,
            "estimate": qjson(best, d),
            "relative_deviation": dec(&rel, 6.max(d)),
            "mode": if args.exact { "exact" } else { "hybrid" },
        }));
        return Ok(());
    }
    let mut rows = Vec::new();
    for (sign, rep) in [("+", &pos), ("-", &neg)] {
        for r in &rep.rows {
            rows.push(vec![
                sign.to_string(),
                r.n_lo.to_string(),
                r.n_hi.to_string(),
                r.argmin.to_string(),
                dec(&r.window_min, d),
                dec(&exact, d),
            ]);
        }
    }
    print_rows(args.out.format, &["sign", "n_lo", "n_hi", "argmin", "window_min", "exact_m"], &rows);
    if args.out.format == Format::Table {
        emit(&format!("({},{}) {} period {}: relative deviation {}\n", al.a(), al.b(), cls.label(), ts, dec(&rel, 6)));
    }
    Ok(())
}

struct SweepRow {
    a: i64,
    b: i64,
    n: u64,
    rho_class: String,
    rho: QuadNum,
    second_class: String,
    second: QuadNum,
    gap: QuadNum,
    limit: QuadNum,
    euclidean: bool,
}

fn sweep_row(a: i64, b: i64, kmax: u32) -> Result<SweepRow, Failure> {
    let al = alpha(a, b)?;
    let cat = spectrum_catalog(&al, kmax).map_err(config)?;
    let gap = isolation_gap(&cat).map_err(config)?;
    let plan = catalog_plan(&al).map_err(config)?;
    let e = euclidean_test(&al).map_err(config)?;
    Ok(SweepRow {
        a,
        b,
        n: al.radicand(),
        rho_class: plan.rho_star.label(),
        rho: cat.points[0].m_star.clone(),
        second_class: cat.points[1].label(),
        second: cat.points[1].m_star.clone(),
        gap,
        limit: cat.first_limit_point.clone(),
        euclidean: e.verdict,
    })
}

fn run_sweep(args: &SweepArgs) -> Run {
    let pairs = grid_pairs(&args.grid)?;
    let rows: Vec<Result<SweepRow, Failure>> = pairs.par_iter().map(|&(a, b)| sweep_row(a, b, args.kmax)).collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    let d = args.out.digits;
    if args.out.format == Format::Json {
        let v: Vec<Value> = rows
            .iter()
            .map(|r| {
                let mut m = Map::new();
                m.insert("a".into(), json!(r.a));
                m.insert("b".into(), json!(r.b));
                m.insert("N".into(), json!(r.n));
                m.insert("rho_star_class".into(), json!(r.rho_class));
                m.insert("rho_star".into(), qjson(&r.rho, d));
                m.insert("second_class".into(), json!(r.second_class));
                m.insert("second".into(), qjson(&r.second, d));
                m.insert("gap".into(), qjson(&r.gap, d));
                m.insert("first_limit_point".into(), qjson(&r.limit, d));
                m.insert("norm_euclidean_candidate".into(), json!(r.euclidean));
                Value::Object(m)
            })
            .collect();
        print_json(&Value::Array(v));
        return Ok(());
    }
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.a.to_string(),
                r.b.to_string(),
                r.n.to_string(),
                r.rho_class.clone(),
                dec(&r.rho, d),
                r.second_class.clone(),
                dec(&r.second, d),
                dec(&r.gap, d),
                dec(&r.limit, d),
                r.euclidean.to_string(),
            ]
        })
        .collect();
    print_rows(
        args.out.format,
        &["a", "b", "N", "rho_star_class", "rho_star", "second_class", "second", "gap", "first_limit_point", "euclidean"],
        &table,
    );
    Ok(())
}

fn parse_rational(s: &str) -> Result<BigRational, Failure> {
    s.trim().parse().map_err(|_| Failure::Config(format!("bad rational {s:?}")))
}

fn run_ncf(args: &NcfArgs) -> Run {
    let x = match (args.a, args.b, args.n) {
        (Some(a), Some(b), _) => alpha(a, b)?.eta().clone(),
        (None, None, Some(n)) => {
            let p = parse_rational(args.p.as_deref().unwrap_or("0"))?;
            let q = parse_rational(args.q.as_deref().unwrap_or("1"))?;
            QuadNum::new(p, q, n).map_err(config)?
        }
        _ => return Err(Failure::Config("give --a and --b, or --n with optional --p and --q".into())),
    };
    let cf = ncf_expand(&x, args.max_terms).map_err(config)?;
    let form = match cf.form {
        NcfForm::Fractional => "fractional",
        NcfForm::Subtractive => "subtractive",
    };
    let d = args.out.digits;
    if args.out.format == Format::Json {
        print_json(&json!({
            "x": qjson(&x, d),
            "form": form,
            "integer_part": cf.integer_part.to_string(),
            "preperiod": cf.preperiod,
            "period": cf.period,
        }));
        return Ok(());
    }
    let join = |v: &[i64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    let rows = vec![vec![x.to_string(), form.to_string(), cf.integer_part.to_string(), join(&cf.preperiod), join(&cf.period)]];
    print_rows(args.out.format, &["x", "form", "integer_part", "preperiod", "period"], &rows);
    Ok(())
}

fn run_euclid(args: &EuclidArgs) -> Run {
    let al = alpha(args.pair.a, args.pair.b)?;
    let r = euclidean_test(&al).map_err(config)?;
    let d = args.out.digits;
    if args.out.format == Format::Json {
        print_json(&json!({
            "a": al.a(), "b": al.b(), "N": al.radicand(),
            "rho": qjson(&r.rho, d),
            "threshold": qjson(&r.threshold, d),
            "verdict": r.verdict,
            "points_above_threshold": r.points_above,
            "limit_above_threshold": r.limit_above,
        }));
        return Ok(());
    }
    let rows = vec![vec![
        al.a().to_string(),
        al.b().to_string(),
        dec(&r.rho, d),
        dec(&r.threshold, d),
        r.verdict.to_string(),
        r.points_above.to_string(),
    ]];
    print_rows(args.out.format, &["a", "b", "rho", "threshold", "verdict", "points_above"], &rows);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::Catalog(a) => run_catalog(a),
        Command::Verify(a) => run_verify(a),
        Command::Oracle(a) => run_oracle(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Ncf(a) => run_ncf(a),
        Command::Euclid(a) => run_euclid(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
