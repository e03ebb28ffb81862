//! Command-line front end for the plethysm engine.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use plethysm_core::characters::character_value;
use plethysm_core::counting::{count_matrices_dp, CountQuery, EntryDomain};
use plethysm_core::plethysm::{coefficient, decompose, foulkes_compare, Inner, PlethysmQuery};
use plethysm_core::qpoly::{isl_value, parse, PiecewiseQP};
use plethysm_core::rayfit::{default_periods, degree_bound, fit_ray, RayFit};
use plethysm_core::selftest::selftest;
use plethysm_core::symfunc::oracle_plethysm;
use plethysm_core::{BigRat, Partition};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "plethysm", version, about = "Exact plethysm multiplicities and quasi-polynomial tools")]
struct Cli {
    /// Print one JSON document instead of plain text.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

fn partition_arg(s: &str) -> std::result::Result<Partition, String> {
    s.parse::<Partition>().map_err(|e| e.to_string())
}

fn inner_arg(s: &str) -> std::result::Result<Inner, String> {
    s.parse::<Inner>().map_err(|e| e.to_string())
}

/// A comma-separated integer list.
#[derive(Clone, Debug)]
struct IntList(Vec<i64>);

fn list_arg(s: &str) -> std::result::Result<IntList, String> {
    if s.trim().is_empty() {
        return Ok(IntList(Vec::new()));
    }
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| format!("{x:?} is not an integer")))
        .collect::<std::result::Result<_, _>>()
        .map(IntList)
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Multiplicity of S^lambda in S^mu(S^k) (or S^mu(Λ^k)).
    Coeff {
        #[arg(long, value_parser = partition_arg)]
        mu: Partition,
        #[arg(long)]
        k: u64,
        #[arg(long, value_parser = partition_arg)]
        lambda: Partition,
        #[arg(long, default_value = "sym", value_parser = inner_arg)]
        inner: Inner,
    },
    /// Every irreducible in S^mu(S^k) (or S^mu(Λ^k)) with its multiplicity.
    Decompose {
        #[arg(long, value_parser = partition_arg)]
        mu: Partition,
        #[arg(long)]
        k: u64,
        #[arg(long, default_value = "sym", value_parser = inner_arg)]
        inner: Inner,
    },
    /// The same decomposition by brute-force symmetric polynomials, in a
    /// fixed number of variables.
    Oracle {
        #[arg(long, value_parser = partition_arg)]
        mu: Partition,
        #[arg(long)]
        k: u32,
        /// Number of variables (default |mu| for sym, |mu|·k for wedge).
        #[arg(long)]
        nvars: Option<usize>,
        #[arg(long, default_value = "sym", value_parser = inner_arg)]
        inner: Inner,
    },
    /// Number of (alpha, colsums)-matrices with row sums k.
    Count {
        #[arg(long, value_parser = partition_arg)]
        alpha: Partition,
        #[arg(long)]
        k: u64,
        #[arg(long, value_parser = list_arg, allow_hyphen_values = true)]
        colsums: IntList,
        /// Restrict entries to 0 and 1.
        #[arg(long)]
        binary: bool,
    },
    /// Symmetric-group character value chi_mu(rho).
    Character {
        #[arg(long, value_parser = partition_arg)]
        mu: Partition,
        #[arg(long, value_parser = partition_arg)]
        rho: Partition,
    },
    /// Fit a quasi-polynomial to s ↦ multiplicity of s·lambda in S^mu(S^{sk}).
    Rayfit {
        #[arg(long, value_parser = partition_arg)]
        mu: Partition,
        #[arg(long)]
        k: u64,
        #[arg(long, value_parser = partition_arg)]
        lambda: Partition,
        #[arg(long, default_value_t = 1)]
        smin: u64,
        #[arg(long)]
        smax: u64,
        /// Degree bound (default: the polytope dimension formula).
        #[arg(long)]
        degree: Option<usize>,
        /// Candidate periods, comma separated.
        #[arg(long, value_parser = list_arg)]
        periods: Option<IntList>,
    },
    /// Piecewise quasi-polynomial files.
    Qpoly {
        #[command(subcommand)]
        action: QpolyAction,
    },
    /// Compare S^a(S^b) with S^b(S^a).
    Foulkes {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
    },
    /// Run the fast self-check suites.
    Selftest,
}

#[derive(Subcommand, Debug)]
enum QpolyAction {
    /// Evaluate at one or more points, e.g. `--at s=7` or `--at b1=2,s=5`.
    Eval {
        file: PathBuf,
        #[arg(long, required = true)]
        at: Vec<String>,
        /// Print values the way isl does: `{ n }`, or `{  }` for zero.
        #[arg(long)]
        isl: bool,
    },
    /// Eliminate existential variables and redundant constraints.
    Simplify { file: PathBuf },
}

/// Plain text and JSON renderings of one result.
struct Output {
    plain: String,
    json: Value,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot start {n} worker threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli.command) {
        Ok(out) => {
            let text = if cli.json {
                serde_json::to_string_pretty(&out.json).expect("serialisable")
            } else {
                out.plain
            };
            // A closed pipe downstream is not an error worth a panic.
            let _ = writeln!(std::io::stdout(), "{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn multiplicity_table(map: &BTreeMap<Partition, num_bigint::BigUint>) -> (String, Value) {
    let mut lines = Vec::new();
    let mut obj = serde_json::Map::new();
    for (lambda, m) in map.iter().rev() {
        lines.push(format!("{lambda}\t{m}"));
        obj.insert(lambda.to_string(), Value::String(m.to_string()));
    }
    (lines.join("\n"), Value::Object(obj))
}

fn rat_string(x: &BigRat) -> String {
    x.to_string()
}

fn run(cmd: &Command) -> Result<Output> {
    let out = match cmd {
        Command::Coeff { mu, k, lambda, inner } => {
            let q = PlethysmQuery::new(mu.clone(), *k, lambda.clone(), *inner)?;
            let m = coefficient(&q)?;
            Output {
                plain: m.to_string(),
                json: json!({
                    "mu": mu.to_string(), "k": k, "lambda": lambda.to_string(),
                    "inner": inner.to_string(), "multiplicity": m.to_string(),
                }),
            }
        }
        Command::Decompose { mu, k, inner } => {
            let map = decompose(mu, *k, *inner)?;
            let (plain, table) = multiplicity_table(&map);
            Output {
                plain,
                json: json!({
                    "mu": mu.to_string(), "k": k, "inner": inner.to_string(), "decomposition": table,
                }),
            }
        }
        Command::Oracle { mu, k, nvars, inner } => {
            let d = mu.weight() as usize;
            let n = nvars.unwrap_or(match inner {
                Inner::Sym => d,
                Inner::Wedge => d * *k as usize,
            });
            let map = oracle_plethysm(mu, *k, n, *inner)?;
            let (plain, table) = multiplicity_table(&map);
            Output {
                plain,
                json: json!({
                    "mu": mu.to_string(), "k": k, "inner": inner.to_string(), "nvars": n,
                    "decomposition": table,
                }),
            }
        }
        Command::Count { alpha, k, colsums, binary } => {
            let domain = if *binary { EntryDomain::Binary } else { EntryDomain::Integer };
            let n = count_matrices_dp(&CountQuery::new(alpha.clone(), *k, colsums.0.clone(), domain));
            Output {
                plain: n.to_string(),
                json: json!({
                    "alpha": alpha.to_string(), "k": k, "colsums": colsums.0,
                    "domain": if *binary { "binary" } else { "integer" }, "count": n.to_string(),
                }),
            }
        }
        Command::Character { mu, rho } => {
            let v = character_value(mu, rho)?;
            Output {
                plain: v.to_string(),
                json: json!({ "mu": mu.to_string(), "rho": rho.to_string(), "value": v }),
            }
        }
        Command::Rayfit {
            mu,
            k,
            lambda,
            smin,
            smax,
            degree,
            periods,
        } => rayfit(mu, *k, lambda, *smin, *smax, *degree, periods.as_ref().map(|p| p.0.as_slice()))?,
        Command::Qpoly { action } => match action {
            QpolyAction::Eval { file, at, isl } => qpoly_eval(file, at, *isl)?,
            QpolyAction::Simplify { file } => {
                let qp = read_qpoly(file)?.simplify();
                let text = qp.to_string();
                Output {
                    json: json!({ "params": qp.params, "pieces": qp.pieces.len(), "text": text }),
                    plain: text,
                }
            }
        },
        Command::Foulkes { a, b } => {
            let report = foulkes_compare(*a, *b)?;
            let mut lines = vec![format!("lambda\tS^{a}(S^{b})\tS^{b}(S^{a})")];
            let mut rows = Vec::new();
            for r in &report.rows {
                lines.push(format!("{}\t{}\t{}", r.lambda, r.left, r.right));
                rows.push(json!({
                    "lambda": r.lambda.to_string(), "left": r.left.to_string(), "right": r.right.to_string(),
                }));
            }
            lines.push(format!("holds\t{}", report.holds));
            Output {
                plain: lines.join("\n"),
                json: json!({ "a": a, "b": b, "rows": rows, "holds": report.holds }),
            }
        }
        Command::Selftest => {
            let report = selftest();
            let mut lines = Vec::new();
            let mut suites = Vec::new();
            for s in &report.suites {
                let verdict = if s.passed { "PASS" } else { "FAIL" };
                lines.push(format!("{verdict}\t{}\t{} checks", s.name, s.checked));
                lines.extend(s.failures.iter().map(|f| format!("\t{f}")));
                suites.push(json!({
                    "name": s.name, "passed": s.passed, "checked": s.checked, "failures": s.failures,
                }));
            }
            Output {
                plain: lines.join("\n"),
                json: json!({ "passed": report.all_passed(), "suites": suites }),
            }
        }
    };
    Ok(out)
}

fn rayfit(
    mu: &Partition,
    k: u64,
    lambda: &Partition,
    smin: u64,
    smax: u64,
    degree: Option<usize>,
    periods: Option<&[i64]>,
) -> Result<Output> {
    PlethysmQuery::sym(mu.clone(), k, lambda.clone())?;
    let d = mu.weight() as usize;
    let bound = degree.unwrap_or_else(|| degree_bound(d, lambda));
    let periods: Vec<u64> = match periods {
        Some(p) => p
            .iter()
            .map(|&x| u64::try_from(x).ok().filter(|&x| x > 0).context("periods must be positive"))
            .collect::<Result<_>>()?,
        None => default_periods(d),
    };
    eprintln!("sampling s = {smin}..={smax} (degree bound {bound})");
    let fit = fit_ray(
        |s| {
            let q = PlethysmQuery::sym(mu.clone(), s * k, lambda.scaled(s))?;
            Ok(BigInt::from(coefficient(&q)?))
        },
        smin,
        smax,
        bound,
        &periods,
    )?;
    Ok(render_fit(&fit, bound))
}

fn render_fit(fit: &RayFit, bound: usize) -> Output {
    let mut lines = vec![
        format!("period\t{}", fit.period),
        format!("degree\t{}", fit.degree),
        format!("degree bound\t{bound}"),
        format!("window\t{}..={}", fit.s_min, fit.s_max),
    ];
    let mut classes = Vec::new();
    for (r, coeffs) in fit.coefficients.iter().enumerate() {
        let terms: Vec<String> = coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| match j {
                0 => rat_string(c),
                1 => format!("({})*s", rat_string(c)),
                _ => format!("({})*s^{j}", rat_string(c)),
            })
            .collect();
        lines.push(format!("s = {r} mod {}\t{}", fit.period, terms.join(" + ")));
        classes.push(Value::Array(coeffs.iter().map(|c| Value::String(rat_string(c))).collect()));
    }
    Output {
        plain: lines.join("\n"),
        json: json!({
            "period": fit.period, "degree": fit.degree, "degree_bound": bound,
            "s_min": fit.s_min, "s_max": fit.s_max, "coefficients": classes,
        }),
    }
}

fn read_qpoly(file: &PathBuf) -> Result<PiecewiseQP> {
    let text = std::fs::read_to_string(file).with_context(|| format!("cannot read {}", file.display()))?;
    parse(&text).with_context(|| format!("in {}", file.display()))
}

fn parse_point(spec: &str) -> Result<BTreeMap<String, BigInt>> {
    let mut point = BTreeMap::new();
    for item in spec.split(',') {
        let Some((name, value)) = item.split_once('=') else {
            bail!("point {spec:?} must look like name=value[,name=value…]");
        };
        let v: BigInt = value
            .trim()
            .parse()
            .with_context(|| format!("{value:?} is not an integer"))?;
        point.insert(name.trim().to_string(), v);
    }
    Ok(point)
}

fn qpoly_eval(file: &PathBuf, at: &[String], isl: bool) -> Result<Output> {
    let qp = read_qpoly(file)?;
    let mut lines = Vec::new();
    let mut results = Vec::new();
    for spec in at {
        let point = parse_point(spec)?;
        let v = qp.evaluate(&point)?;
        let shown = if isl { isl_value(&v) } else { rat_string(&v) };
        lines.push(if at.len() == 1 { shown } else { format!("{spec}\t{shown}") });
        let pt: serde_json::Map<String, Value> = point
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.to_string())))
            .collect();
        results.push(json!({ "point": pt, "value": rat_string(&v) }));
    }
    Ok(Output {
        plain: lines.join("\n"),
        json: json!({ "params": qp.params, "results": results }),
    })
}
