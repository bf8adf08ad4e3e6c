use std::f64::consts::LN_2;
use std::io::Write as _;

use hedgehog_core::algebra::{dimitrov_series, hankel_determinants, HankelEntry, IntPolynomial};
use hedgehog_core::chebyshev::{asymptotic_cstar, cstar, cstar_t, cstar_t_limit, precise};
use hedgehog_core::format_sig;
use hedgehog_core::geometry::{
    arc_maxima, hedgehog_from_polynomial, log_objective, spine_moduli, CircleConfiguration,
};
use hedgehog_core::optimize::{multistart_minimize, verify_cn_upper, OptimizationResult};
use hedgehog_core::reproduce::{self, CheckOutcome, ReproduceOptions};
use serde::Serialize;

use crate::args::{
    parse_n_list, Command, CstarArgs, Format, HankelArgs, ObjectiveArgs, OptimizeArgs, PolyArgs,
    ReproduceArgs,
};
use crate::table::{key_values, Table};
use crate::CliError;

/// Rendered output of one command.
pub struct Report {
    pub body: String,
    /// Set when an acceptance check failed or a search went below `C_n*`.
    pub failed_check: bool,
}

impl Report {
    fn ok(body: String) -> Self {
        Report {
            body,
            failed_check: false,
        }
    }
}

pub struct Ctx {
    pub format: Format,
    pub digits: usize,
    /// Print progress lines as they become available (text to a terminal).
    pub stream: bool,
}

impl Ctx {
    fn f(&self, x: f64) -> String {
        format_sig(x, self.digits)
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn run(command: &Command, ctx: &Ctx) -> Result<Report, CliError> {
    match command {
        Command::Cstar(a) => cmd_cstar(a, ctx),
        Command::Hedgehog(a) => cmd_hedgehog(a, ctx),
        Command::Hankel(a) => cmd_hankel(a, ctx),
        Command::Optimize(a) => cmd_optimize(a, ctx),
        Command::Verify(a) => cmd_verify(a, ctx),
        Command::Objective(a) => cmd_objective(a, ctx),
        Command::Reproduce(a) => cmd_reproduce(a, ctx),
        Command::Replay(_) => Err(CliError::Usage("replay cannot be nested".into())),
    }
}

#[derive(Serialize)]
struct CstarRow {
    n: u64,
    cstar: f64,
    asymptotic: f64,
    /// `cstar - asymptotic`, evaluated in extended precision.
    difference: f64,
    /// `2 nu^(2 terms + 1)`.
    tolerance: f64,
    power_sqrt_n: f64,
}

#[derive(Serialize)]
struct CstarTable {
    terms: usize,
    limit_power_sqrt_n: f64,
    rows: Vec<CstarRow>,
}

#[derive(Serialize)]
struct CstarTRow {
    n: u64,
    t: f64,
    value: f64,
    limit: f64,
    difference: f64,
}

fn cmd_cstar(a: &CstarArgs, ctx: &Ctx) -> Result<Report, CliError> {
    let ns = parse_n_list(&a.n).map_err(CliError::Usage)?;
    if let Some(t) = a.t {
        if !(t >= 1.0 && t.is_finite()) {
            return Err(CliError::Usage(format!("--t must be at least 1, got {t}")));
        }
        let limit = cstar_t_limit(t);
        let rows: Vec<CstarTRow> = ns
            .iter()
            .map(|&n| {
                let value = cstar_t(n, t).value;
                CstarTRow {
                    n,
                    t,
                    value,
                    limit,
                    difference: value - limit,
                }
            })
            .collect();
        if ctx.format == Format::Json {
            return Ok(Report::ok(to_json(&rows)?));
        }
        let mut table = Table::new(&["n", "t", "C_n*(t)", "limit", "difference"]);
        for r in &rows {
            table.push(vec![
                r.n.to_string(),
                ctx.f(r.t),
                ctx.f(r.value),
                ctx.f(r.limit),
                ctx.f(r.difference),
            ]);
        }
        return Ok(Report::ok(render_table(&table, ctx)));
    }

    let rows: Vec<CstarRow> = ns
        .iter()
        .map(|&n| {
            let c = cstar(n);
            let gap = precise::expansion_gap(n, a.terms);
            CstarRow {
                n,
                cstar: c.value,
                asymptotic: asymptotic_cstar(n, a.terms).value,
                difference: gap.difference,
                tolerance: gap.tolerance,
                power_sqrt_n: ((n as f64).sqrt() * c.log_value).exp(),
            }
        })
        .collect();
    let out = CstarTable {
        terms: a.terms,
        limit_power_sqrt_n: (2.0 * LN_2).sqrt().exp(),
        rows,
    };
    if ctx.format == Format::Json {
        return Ok(Report::ok(to_json(&out)?));
    }
    let mut table = Table::new(&["n", "C_n*", "asymptotic", "difference", "(C_n*)^sqrt(n)"]);
    for r in &out.rows {
        table.push(vec![
            r.n.to_string(),
            ctx.f(r.cstar),
            ctx.f(r.asymptotic),
            ctx.f(r.difference),
            ctx.f(r.power_sqrt_n),
        ]);
    }
    let mut body = render_table(&table, ctx);
    if ctx.format == Format::Text {
        body.push_str(&format!(
            "limit of (C_n*)^sqrt(n): e^sqrt(log 4) = {}\n",
            ctx.f(out.limit_power_sqrt_n)
        ));
    }
    Ok(Report::ok(body))
}

fn render_table(table: &Table, ctx: &Ctx) -> String {
    match ctx.format {
        Format::Csv => table.to_csv(),
        _ => table.to_text(),
    }
}

fn parse_poly(s: &str) -> Result<IntPolynomial, CliError> {
    IntPolynomial::parse(s).map_err(|e| CliError::Usage(format!("--poly: {e}")))
}

#[derive(Serialize)]
struct SpineRecord {
    modulus: f64,
    /// Radians in `[0, 2pi)`.
    argument: Option<f64>,
}

#[derive(Serialize)]
struct HedgehogRecord {
    polynomial: String,
    spines: Vec<SpineRecord>,
    measure: f64,
    log_measure: f64,
    dubinin_bound: f64,
}

fn cmd_hedgehog(a: &PolyArgs, ctx: &Ctx) -> Result<Report, CliError> {
    let p = parse_poly(&a.poly)?;
    let h = hedgehog_from_polynomial(&p)?;
    let rec = HedgehogRecord {
        polynomial: p.to_string(),
        spines: h
            .spines()
            .iter()
            .map(|s| SpineRecord {
                modulus: s.modulus,
                argument: s.argument,
            })
            .collect(),
        measure: h.measure(),
        log_measure: h.log_measure(),
        dubinin_bound: h.dubinin_bound(),
    };
    if ctx.format == Format::Json {
        return Ok(Report::ok(to_json(&rec)?));
    }
    let mut table = Table::new(&["spine", "modulus", "argument"]);
    for (i, s) in rec.spines.iter().enumerate() {
        table.push(vec![
            (i + 1).to_string(),
            ctx.f(s.modulus),
            s.argument.map(|x| ctx.f(x)).unwrap_or_default(),
        ]);
    }
    if ctx.format == Format::Csv {
        return Ok(Report::ok(table.to_csv()));
    }
    let mut body = key_values(&[("polynomial", rec.polynomial.clone())]);
    body.push_str(&table.to_text());
    body.push_str(&key_values(&[
        ("measure", ctx.f(rec.measure)),
        ("dubinin bound", ctx.f(rec.dubinin_bound)),
    ]));
    Ok(Report::ok(body))
}

#[derive(Serialize)]
struct HankelRecord<'a> {
    polynomial: String,
    kmax: usize,
    max_root_k: Option<MaxRoot>,
    entries: &'a [HankelEntry],
}

#[derive(Serialize)]
struct MaxRoot {
    k: usize,
    value: f64,
}

fn cmd_hankel(a: &HankelArgs, ctx: &Ctx) -> Result<Report, CliError> {
    let p = parse_poly(&a.poly)?;
    let kmax = a.kmax as usize;
    let series = dimitrov_series(&p, 2 * kmax - 2)?;
    let report = hankel_determinants(&series, kmax)?;
    let max = report.max_root_k();
    match ctx.format {
        Format::Csv => Ok(Report::ok(report.to_csv(ctx.digits))),
        Format::Json => Ok(Report::ok(to_json(&HankelRecord {
            polynomial: p.to_string(),
            kmax,
            max_root_k: max.map(|(k, value)| MaxRoot { k, value }),
            entries: &report.entries,
        })?)),
        Format::Text => {
            let mut table = Table::new(&["k", "A_k", "|A_k|^(1/k)", "|A_k|^(1/k^2)"]);
            for e in &report.entries {
                table.push(vec![
                    e.k.to_string(),
                    e.det.to_string(),
                    ctx.f(e.root_k),
                    ctx.f(e.root_k2),
                ]);
            }
            let mut body = table.to_text();
            match max {
                Some((k, v)) => body.push_str(&format!(
                    "summary: max_k |A_k|^(1/k) = {} at k = {k} (k <= {kmax})\n",
                    ctx.f(v)
                )),
                None => body.push_str("summary: every A_k vanishes\n"),
            }
            Ok(Report::ok(body))
        }
    }
}

#[derive(Serialize)]
struct OptimizeRecord<'a> {
    n: u64,
    cstar: f64,
    /// `best_objective - cstar`.
    gap: f64,
    #[serde(flatten)]
    result: &'a OptimizationResult,
}

fn configuration_table(c: &CircleConfiguration, ctx: &Ctx) -> Table {
    let mut t = Table::new(&["angle", "weight"]);
    for (a, w) in c.angles().iter().zip(c.weights()) {
        t.push(vec![ctx.f(*a), ctx.f(*w)]);
    }
    t
}

fn result_summary(r: &OptimizationResult, ctx: &Ctx) -> Vec<(&'static str, String)> {
    vec![
        ("best objective", ctx.f(r.best_objective)),
        ("starts", r.starts.to_string()),
        ("seed", r.seed.map(|s| s.to_string()).unwrap_or_default()),
        ("iterations", r.iterations_total.to_string()),
        ("converged fraction", ctx.f(r.converged_fraction)),
        ("iteration limit hit", r.iteration_limit.to_string()),
        ("distinct local optima", r.distinct_local_optima.to_string()),
    ]
}

fn cmd_optimize(a: &OptimizeArgs, ctx: &Ctx) -> Result<Report, CliError> {
    let r = multistart_minimize(a.n as usize, a.starts as usize, a.seed)?;
    let c = cstar(a.n).value;
    let rec = OptimizeRecord {
        n: a.n,
        cstar: c,
        gap: r.best_objective - c,
        result: &r,
    };
    match ctx.format {
        Format::Json => Ok(Report::ok(to_json(&rec)?)),
        Format::Csv => Ok(Report::ok(
            configuration_table(&r.best_config, ctx).to_csv(),
        )),
        Format::Text => {
            let mut pairs = vec![("n", a.n.to_string()), ("C_n*", ctx.f(c))];
            pairs.extend(result_summary(&r, ctx));
            pairs.push(("best - C_n*", ctx.f(rec.gap)));
            let mut body = key_values(&pairs);
            body.push_str("best configuration:\n");
            body.push_str(&configuration_table(&r.best_config, ctx).to_text());
            Ok(Report::ok(body))
        }
    }
}

fn cmd_verify(a: &OptimizeArgs, ctx: &Ctx) -> Result<Report, CliError> {
    let r = verify_cn_upper(a.n as usize, a.starts as usize, a.seed)?;
    let finding = r.below_construction;
    let body = match ctx.format {
        Format::Json => to_json(&r)?,
        Format::Csv | Format::Text => {
            let pairs = vec![
                ("n", r.n.to_string()),
                ("C_n*", ctx.f(r.cstar)),
                ("construction objective", ctx.f(r.construction_objective)),
                ("multistart best", ctx.f(r.multistart_best)),
                ("construction - C_n*", ctx.f(r.construction_gap)),
                ("multistart - C_n*", ctx.f(r.multistart_gap)),
                ("multistart - construction", ctx.f(r.search_gap)),
                ("below construction", finding.to_string()),
            ];
            if ctx.format == Format::Csv {
                let mut t = Table::new(&["quantity", "value"]);
                for (k, v) in pairs {
                    t.push(vec![k.to_string(), v]);
                }
                t.to_csv()
            } else {
                let mut s = key_values(&pairs);
                if finding {
                    s.push_str("FINDING: the search found a configuration below C_n*\n");
                }
                s
            }
        }
    };
    Ok(Report {
        body,
        failed_check: finding,
    })
}

#[derive(Serialize)]
struct ArcRecord {
    arc_start_angle: f64,
    arc_end_angle: f64,
    argmax_angle: f64,
    max_value: f64,
}

#[derive(Serialize)]
struct ObjectiveRecord {
    configuration: CircleConfiguration,
    arcs: Vec<ArcRecord>,
    objective: f64,
    log_objective: f64,
    /// Measure of the capacity-1 hedgehog with spines `(arc max)^2`.
    hedgehog_measure: f64,
    dubinin_bound: f64,
}

fn cmd_objective(a: &ObjectiveArgs, ctx: &Ctx) -> Result<Report, CliError> {
    let text = std::fs::read_to_string(&a.config)
        .map_err(|e| CliError::Io(format!("{}: {e}", a.config.display())))?;
    let c = CircleConfiguration::from_text(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", a.config.display())))?;
    let h = spine_moduli(&c);
    let lo = log_objective(&c);
    let rec = ObjectiveRecord {
        arcs: arc_maxima(&c)
            .per_arc
            .iter()
            .map(|m| ArcRecord {
                arc_start_angle: m.arc_start_angle,
                arc_end_angle: m.arc_end_angle,
                argmax_angle: m.argmax_angle,
                max_value: m.max_value,
            })
            .collect(),
        configuration: c,
        objective: lo.exp(),
        log_objective: lo,
        hedgehog_measure: h.measure(),
        dubinin_bound: h.dubinin_bound(),
    };
    if ctx.format == Format::Json {
        return Ok(Report::ok(to_json(&rec)?));
    }
    let mut t = Table::new(&["arc", "start", "end", "argmax", "max"]);
    for (i, m) in rec.arcs.iter().enumerate() {
        t.push(vec![
            (i + 1).to_string(),
            ctx.f(m.arc_start_angle),
            ctx.f(m.arc_end_angle),
            ctx.f(m.argmax_angle),
            ctx.f(m.max_value),
        ]);
    }
    if ctx.format == Format::Csv {
        return Ok(Report::ok(t.to_csv()));
    }
    let mut body = t.to_text();
    body.push_str(&key_values(&[
        ("objective", ctx.f(rec.objective)),
        ("hedgehog measure", ctx.f(rec.hedgehog_measure)),
        ("dubinin bound", ctx.f(rec.dubinin_bound)),
    ]));
    Ok(Report::ok(body))
}

#[derive(Serialize)]
struct ReproduceRecord<'a> {
    quick: bool,
    seed: u64,
    passed: usize,
    total: usize,
    checks: &'a [CheckOutcome],
}

fn cmd_reproduce(a: &ReproduceArgs, ctx: &Ctx) -> Result<Report, CliError> {
    let opts = ReproduceOptions {
        quick: a.quick,
        seed: a.seed,
        ..ReproduceOptions::default()
    };
    let stream = ctx.stream && ctx.format == Format::Text;
    let outcomes = reproduce::run_each(&opts, |o| {
        if stream {
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "{}", o.line());
            let _ = out.flush();
        }
    });
    let passed = outcomes.iter().filter(|o| o.ok()).count();
    let failed_check = passed < outcomes.len();
    let body = match ctx.format {
        Format::Json => to_json(&ReproduceRecord {
            quick: a.quick,
            seed: a.seed,
            passed,
            total: outcomes.len(),
            checks: &outcomes,
        })?,
        Format::Csv => {
            let mut t = Table::new(&["id", "name", "status", "seconds", "measured"]);
            for o in &outcomes {
                t.push(vec![
                    o.id.to_string(),
                    o.name.clone(),
                    if o.ok() { "PASS" } else { "FAIL" }.to_string(),
                    format!("{:.3}", o.seconds),
                    o.measured.clone(),
                ]);
            }
            t.to_csv()
        }
        Format::Text if stream => format!("{passed}/{} checks passed\n", outcomes.len()),
        Format::Text => reproduce::summary(&outcomes),
    };
    Ok(Report { body, failed_check })
}
