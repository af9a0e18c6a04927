//! Subcommand definitions and their pipelines.

use std::fmt::Write as _;

use clap::{Args, Subcommand};
use kneser_core::cxmachine::{self, CxContext};
use kneser_core::density::{self, DensityEstimate, FolnerFamily, DEFAULT_TAIL};
use kneser_core::finitegrp::{self, ScanMode, EXHAUSTIVE_BOUND};
use kneser_core::groups::library::groups_in_range;
use kneser_core::groups::{BoxParams, GroupDescriptor};
use kneser_core::ratio::{self, Q};
use kneser_core::scenarios::{self, ScenarioReport};
use kneser_core::setspec::{self, Builtin, SetExpr};
use kneser_core::structure;
use kneser_core::sturmian::{self, TorusInterval};
use kneser_core::{Error, Result};
use serde::Serialize;
use serde_json::{json, Value};

use crate::parse;

pub struct Outcome {
    pub pass: bool,
    pub report: Value,
    pub csv: Option<String>,
}

fn outcome(pass: bool, report: impl Serialize) -> Result<Outcome> {
    let report = serde_json::to_value(report).map_err(|e| Error::Resource(format!("report serialization: {e}")))?;
    Ok(Outcome { pass, report, csv: None })
}

fn series_csv(named: &[(&str, &DensityEstimate)]) -> String {
    let mut s = String::from("quantity,n,size,count,ratio\n");
    for (name, e) in named {
        for p in &e.series {
            let _ = writeln!(s, "{name},{},{},{},{}", p.n, p.size, p.count, p.ratio);
        }
    }
    s
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Upper and lower density of a set along a Følner family.
    Density(DensityArgs),
    /// Banach density on Z or Z^d from extremal windows.
    Banach(BanachArgs),
    /// Equidistribution of a rotation in an interval, with optional members.
    Sturmian(SturmianArgs),
    /// The Kneser-type inequality d(A+B) >= d*(A) + d(B) on Z at scale.
    KneserZ(KneserZArgs),
    /// Kemperman reductions on finite groups.
    Kemperman(KempermanArgs),
    /// Kneser's equality on finite abelian groups.
    KneserAbelian(KneserAbelianArgs),
    /// Periodic supersets, spread-out certificates, runs and containment.
    Structure(StructureArgs),
    /// The counterexample machine in Z[1/p] ⋊ Z.
    Cxmachine(CxArgs),
    /// Scenario reproductions on Z: base, e1, e2 and e3.
    Appendix(AppendixArgs),
    /// Følner defects |F Δ gF| / |F| along a family.
    FolnerDefect(FolnerArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Density(_) => "density",
            Command::Banach(_) => "banach",
            Command::Sturmian(_) => "sturmian",
            Command::KneserZ(_) => "kneser-z",
            Command::Kemperman(_) => "kemperman",
            Command::KneserAbelian(_) => "kneser-abelian",
            Command::Structure(_) => "structure",
            Command::Cxmachine(_) => "cxmachine",
            Command::Appendix(_) => "appendix",
            Command::FolnerDefect(_) => "folner-defect",
        }
    }
}

pub fn run(cmd: &Command, seed: u64) -> Result<Outcome> {
    match cmd {
        Command::Density(a) => density_cmd(a),
        Command::Banach(a) => banach_cmd(a),
        Command::Sturmian(a) => sturmian_cmd(a),
        Command::KneserZ(a) => kneser_z_cmd(a),
        Command::Kemperman(a) => kemperman_cmd(a, seed),
        Command::KneserAbelian(a) => kneser_abelian_cmd(a, seed),
        Command::Structure(a) => structure_cmd(a),
        Command::Cxmachine(a) => cx_cmd(a),
        Command::Appendix(a) => appendix_cmd(a),
        Command::FolnerDefect(a) => folner_cmd(a),
    }
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    /// Set expression as inline JSON or a file.
    #[arg(long)]
    expr: String,
    /// Z, Z^d, Z/m, Dinf, Z[1/p], a finite group name, or JSON.
    #[arg(long, default_value = "Z")]
    group: String,
    /// sym, initial, shifted:a,b, skew or rect.
    #[arg(long, default_value = "sym")]
    family: String,
    #[arg(long)]
    n: u64,
    /// Scales sampled up to n.
    #[arg(long, default_value_t = 20)]
    points: u64,
    /// Tail fraction used for the upper and lower estimates.
    #[arg(long, default_value_t = DEFAULT_TAIL)]
    tail: f64,
    /// Assert that both estimates lie within --tol of this value.
    #[arg(long)]
    expect: Option<f64>,
    #[arg(long, default_value_t = 0.01)]
    tol: f64,
}

fn density_cmd(a: &DensityArgs) -> Result<Outcome> {
    let group = parse::group(&a.group)?;
    let family = FolnerFamily::new(group, parse::family(&a.family)?)?;
    let expr = parse::expr(&a.expr)?;
    let est = density::density_along(&expr, &family, a.n, a.points, a.tail)?;
    let pass = a.expect.is_none_or(|v| (est.upper.value - v).abs() <= a.tol && (est.lower.value - v).abs() <= a.tol);
    let mut o = outcome(pass, json!({ "value": est.lower.value, "upper": est.upper, "lower": est.lower, "expect": a.expect, "tol": a.tol }))?;
    o.csv = Some(series_csv(&[("upper", &est.upper), ("lower", &est.lower)]));
    Ok(o)
}

#[derive(Debug, Args)]
pub struct BanachArgs {
    #[arg(long)]
    expr: String,
    #[arg(long, default_value = "Z")]
    group: String,
    /// Window side length L.
    #[arg(long)]
    len: u64,
    /// Window start range lo,hi (each coordinate on Z^d).
    #[arg(long, allow_hyphen_values = true)]
    search: String,
    /// Lower Banach density instead of upper.
    #[arg(long)]
    lower: bool,
}

fn banach_cmd(a: &BanachArgs) -> Result<Outcome> {
    let group = parse::group(&a.group)?;
    let expr = parse::expr(&a.expr)?;
    let est = density::banach_density(&group, &expr, !a.lower, a.len, parse::pair(&a.search)?)?;
    let mut o = outcome(true, &est)?;
    o.csv = Some(series_csv(&[("banach", &est)]));
    Ok(o)
}

#[derive(Debug, Args)]
pub struct SturmianArgs {
    /// golden, silver or p,q,r,d for (p + q√d)/r.
    #[arg(long, default_value = "golden")]
    alpha: String,
    /// Interval lo,hi with rational endpoints.
    #[arg(long, default_value = "0,3/10")]
    interval: String,
    #[arg(long, default_value_t = 100_000)]
    n: u64,
    /// Largest accepted |count/n − m(I)|.
    #[arg(long, default_value_t = 2e-3)]
    tol: f64,
    /// List members in lo,hi.
    #[arg(long, allow_hyphen_values = true)]
    members: Option<String>,
    /// Search |n| up to this bound for (I + I) ∩ (I + nα) = ∅.
    #[arg(long)]
    shift_bound: Option<u64>,
}

fn sturmian_cmd(a: &SturmianArgs) -> Result<Outcome> {
    let alpha = parse::alpha(&a.alpha)?;
    let interval = parse::interval(&a.interval)?;
    let eq = sturmian::equidistribution_check(&alpha, &interval, a.n)?;
    let members = match &a.members {
        Some(w) => {
            let (lo, hi) = parse::pair(w)?;
            let spec = sturmian::SturmianSpec::new(alpha, interval.clone())?;
            Some(setspec::sturmian_members(&spec, &BoxParams::Interval { lo, hi })?.int_members()?)
        }
        None => None,
    };
    let shift = a.shift_bound.map(|b| sturmian::find_shift_n(&alpha, &interval, b)).transpose()?;
    outcome(
        eq.discrepancy <= a.tol,
        json!({ "alpha": alpha.to_string(), "interval": interval, "equidistribution": eq, "tol": a.tol, "members": members, "shift_n": shift }),
    )
}

#[derive(Debug, Args)]
pub struct KneserZArgs {
    /// Spread-out set A (JSON or file).
    #[arg(long, required_unless_present = "suite")]
    a: Option<String>,
    /// Syndetic set B (JSON or file).
    #[arg(long, required_unless_present = "suite")]
    b: Option<String>,
    /// Run the built-in suite of twenty pairs instead.
    #[arg(long)]
    suite: bool,
    #[arg(long, default_value_t = 1_000_000)]
    n: u64,
    /// Largest gap allowed for B to count as syndetic.
    #[arg(long, default_value_t = 160)]
    gap_bound: u64,
    #[arg(long, default_value_t = 0.02)]
    slack: f64,
    /// Rotation of the suite.
    #[arg(long, default_value = "golden")]
    alpha: String,
}

fn kneser_z_cmd(a: &KneserZArgs) -> Result<Outcome> {
    if a.suite {
        let suite = scenarios::kneser_suite(parse::alpha(&a.alpha)?)?;
        let mut rows = Vec::new();
        let mut pass = true;
        for p in &suite {
            let r = scenarios::kneser_z_check(&p.a, &p.b, a.n, a.gap_bound, a.slack)?;
            pass &= r.pass;
            rows.push(json!({ "name": p.name, "a": p.a, "b": p.b, "result": r }));
        }
        return outcome(pass, json!({ "pairs": rows }));
    }
    let (ea, eb) = (a.a.as_deref().unwrap_or_default(), a.b.as_deref().unwrap_or_default());
    let r = scenarios::kneser_z_check(&parse::expr(ea)?, &parse::expr(eb)?, a.n, a.gap_bound, a.slack)?;
    outcome(r.pass, &r)
}

#[derive(Debug, Args)]
pub struct KempermanArgs {
    #[arg(long, default_value_t = 1)]
    order_min: usize,
    #[arg(long, default_value_t = 8)]
    order_max: usize,
    /// A single library group (overrides the order range).
    #[arg(long)]
    group: Option<String>,
    /// Random pairs per group above the exhaustive bound.
    #[arg(long, default_value_t = finitegrp::DEFAULT_SAMPLES)]
    samples: u64,
    /// Also check the I₁ enlargement on every group of order at most 8.
    #[arg(long)]
    i1: bool,
}

fn finite_groups(group: &Option<String>, lo: usize, hi: usize) -> Result<Vec<kneser_core::groups::FiniteGroup>> {
    match group {
        Some(name) => Ok(vec![kneser_core::groups::resolve_table(name)?]),
        None => {
            if lo > hi || hi > 16 {
                return Err(Error::Input(format!("order range {lo}..={hi} must lie in 1..=16")));
            }
            Ok(groups_in_range(lo, hi))
        }
    }
}

fn scan_mode(order: usize, bound: usize, samples: u64, seed: u64) -> ScanMode {
    if order <= bound {
        ScanMode::Exhaustive
    } else {
        ScanMode::Sampled { pairs: samples, seed }
    }
}

fn kemperman_cmd(a: &KempermanArgs, seed: u64) -> Result<Outcome> {
    let mut reports = Vec::new();
    for g in finite_groups(&a.group, a.order_min, a.order_max)? {
        reports.push(finitegrp::kemperman_verify(&g, scan_mode(g.order(), EXHAUSTIVE_BOUND, a.samples, seed))?);
    }
    let violations: u64 = reports.iter().map(|r| r.violations).sum();
    let mut i1 = Vec::new();
    if a.i1 {
        for g in finite_groups(&a.group, a.order_min, a.order_max.min(EXHAUSTIVE_BOUND))? {
            if g.order() <= EXHAUSTIVE_BOUND {
                i1.push(finitegrp::verify_i1_closure(&g)?);
            }
        }
    }
    let i1_failures: u64 = i1.iter().map(|r| r.failures).sum();
    outcome(
        violations == 0 && i1_failures == 0,
        json!({ "groups": reports, "violations": violations, "i1": i1, "i1_failures": i1_failures }),
    )
}

#[derive(Debug, Args)]
pub struct KneserAbelianArgs {
    #[arg(long, default_value_t = 1)]
    order_min: usize,
    #[arg(long, default_value_t = 10)]
    order_max: usize,
    #[arg(long)]
    group: Option<String>,
    /// Orders scanned exhaustively.
    #[arg(long, default_value_t = 10)]
    exhaustive_max: usize,
    #[arg(long, default_value_t = finitegrp::DEFAULT_SAMPLES)]
    samples: u64,
}

fn kneser_abelian_cmd(a: &KneserAbelianArgs, seed: u64) -> Result<Outcome> {
    let mut reports = Vec::new();
    for g in finite_groups(&a.group, a.order_min, a.order_max)? {
        if g.is_abelian() {
            reports.push(finitegrp::kneser_abelian_verify(&g, scan_mode(g.order(), a.exhaustive_max, a.samples, seed))?);
        } else if a.group.is_some() {
            return Err(Error::Precondition(format!("{} is not abelian", g.name())));
        }
    }
    let violations: u64 = reports.iter().map(|r| r.violations).sum();
    outcome(violations == 0, json!({ "groups": reports, "violations": violations }))
}

#[derive(Debug, Args)]
pub struct StructureArgs {
    #[arg(long)]
    expr: String,
    /// Window lo,hi.
    #[arg(long, allow_hyphen_values = true, default_value = "-100000,100000")]
    window: String,
    #[arg(long, default_value_t = 50)]
    m_max: u64,
    /// Length of the Banach windows (default: window / 100).
    #[arg(long)]
    banach_len: Option<u64>,
    /// Look for a periodic run: m,L.
    #[arg(long)]
    run: Option<String>,
    /// Sturmian spec (JSON or file) to check containment against.
    #[arg(long)]
    candidate: Option<String>,
    #[arg(long, default_value_t = 0.01)]
    tol: f64,
    /// Fail unless the set is spread-out at this scale.
    #[arg(long)]
    expect_spread_out: bool,
}

fn structure_cmd(a: &StructureArgs) -> Result<Outcome> {
    let expr = parse::expr(&a.expr)?;
    let window = parse::pair(&a.window)?;
    let witnesses = structure::detect_periodic_superset(&expr, window, a.m_max, a.banach_len)?;
    let spread = structure::spread_out_witness_z(&expr, window, a.m_max)?;
    let run = match &a.run {
        Some(s) => {
            let (m, l) = parse::pair(s)?;
            if m <= 0 || l <= 0 {
                return Err(Error::Input("run needs positive m and L".into()));
            }
            let w = setspec::materialize(
                &GroupDescriptor::IntLine,
                &expr,
                &BoxParams::Interval { lo: window.0, hi: window.1 },
            )?;
            Some(structure::find_periodic_run(&w, m as u64, l as u64, window)?)
        }
        None => None,
    };
    let containment = a
        .candidate
        .as_deref()
        .map(|c| structure::verify_sturmian_containment(&expr, &parse::sturmian_spec(c)?, window, a.tol))
        .transpose()?;
    let pass = containment.as_ref().is_none_or(|c| c.pass) && (!a.expect_spread_out || spread.spread_out);
    outcome(pass, json!({ "witnesses": witnesses, "spread": spread, "run": run, "containment": containment }))
}

#[derive(Debug, Args)]
pub struct CxArgs {
    #[arg(long, default_value_t = 2)]
    p: u64,
    #[arg(long, default_value = "1/5")]
    epsilon: String,
    #[arg(long, default_value = "golden")]
    alpha: String,
    /// Start of the interval of measure 2ε.
    #[arg(long, default_value = "0")]
    interval_lo: String,
    #[arg(long, default_value_t = 8)]
    scale: u32,
    /// skew or rect.
    #[arg(long, default_value = "skew")]
    form: String,
    #[arg(long, default_value_t = cxmachine::DEFAULT_TRANSLATES)]
    translates: i64,
    /// Box scale of the exhaustive product check.
    #[arg(long, default_value_t = 3)]
    check_scale: u32,
    /// Largest box scale compared against the brute-force ball oracle.
    #[arg(long, default_value_t = 2)]
    oracle_scale: u32,
    /// Also report thickness of S and non-syndeticity of S⁻¹S.
    #[arg(long)]
    l_lambda: bool,
    /// Largest acceptable independence error at the top scale.
    #[arg(long, default_value_t = 0.05)]
    independence_tol: f64,
}

fn cx_cmd(a: &CxArgs) -> Result<Outcome> {
    let ctx = CxContext::new(a.p)?;
    let eps = parse::ratio(&a.epsilon)?;
    let lo = parse::ratio(&a.interval_lo)?;
    let interval = TorusInterval::from_len(lo, eps * 2)?;
    let form = parse::form(&a.form)?;
    let cx1 = cxmachine::verify_cx1(&ctx, eps, parse::alpha(&a.alpha)?, interval, a.scale, form, a.translates, a.check_scale)?;
    let mk_box = |n: u32| match form {
        kneser_core::groups::SolvableBox::Skew => BoxParams::skew(a.p, n),
        kneser_core::groups::SolvableBox::Rect => BoxParams::rect(a.p, n),
    };
    let mut oracle = Vec::new();
    for n in 1..=a.oracle_scale {
        oracle.push(cxmachine::ball_oracle(&ctx, &mk_box(n)?)?);
    }
    let boxes = (1..=a.scale).map(mk_box).collect::<Result<Vec<_>>>()?;
    let independence = cxmachine::independence_check(
        &ctx,
        &SetExpr::builtin(Builtin::EvenLayers),
        &SetExpr::builtin(Builtin::S),
        &boxes,
        &[],
    )?;
    let top_error = independence.last().map_or(0.0, |p| p.error);
    let l_lambda = a.l_lambda.then(|| cxmachine::verify_prop_l_lambda(&ctx, a.scale, form, a.translates)).transpose()?;
    let pass = cx1.pass
        && oracle.iter().all(|o| o.pass)
        && top_error <= a.independence_tol
        && l_lambda.as_ref().is_none_or(|r| r.pass);
    outcome(pass, json!({ "cx1": cx1, "oracle": oracle, "independence": independence, "l_lambda": l_lambda }))
}

#[derive(Debug, Args)]
pub struct AppendixArgs {
    /// base, e1, e2 or e3.
    #[arg(long)]
    scenario: String,
    /// Interval measure m(I).
    #[arg(long = "mI")]
    m_i: String,
    /// Interval start.
    #[arg(long, default_value = "0")]
    lo: String,
    #[arg(long, default_value = "golden")]
    alpha: String,
    #[arg(long, default_value_t = 1_000_000)]
    n: u64,
    /// Re-run at 2n and require margins not to shrink by more than half.
    #[arg(long)]
    convergence: bool,
}

fn appendix_cmd(a: &AppendixArgs) -> Result<Outcome> {
    let alpha = parse::alpha(&a.alpha)?;
    let m: Q = parse::ratio(&a.m_i)?;
    let interval = if m == Q::from_integer(1) {
        TorusInterval::full()
    } else {
        TorusInterval::from_len(parse::ratio(&a.lo)?, m)?
    };
    let report = scenarios::run_named(&a.scenario, alpha, &interval, a.n)?;
    let convergence = if a.convergence {
        let fine = scenarios::run_named(&a.scenario, alpha, &interval, 2 * a.n)?;
        Some(scenarios::convergence(&report, &fine))
    } else {
        None
    };
    let pass = report.pass && convergence.as_ref().is_none_or(|c| c.iter().all(|x| x.ok));
    let csv = scenario_csv(&report);
    let mut o = outcome(
        pass,
        json!({ "scenario": report, "convergence": convergence, "measure": ratio::format_ratio(&m) }),
    )?;
    o.csv = Some(csv);
    Ok(o)
}

fn scenario_csv(r: &ScenarioReport) -> String {
    let named: Vec<(&str, &DensityEstimate)> =
        r.quantities.iter().filter_map(|q| q.estimate.as_ref().map(|e| (q.name.as_str(), e))).collect();
    series_csv(&named)
}

#[derive(Debug, Args)]
pub struct FolnerArgs {
    #[arg(long, default_value = "Z")]
    group: String,
    #[arg(long)]
    family: Option<String>,
    /// Element g: an integer, x:k in Z[1/p] ⋊ Z, or JSON.
    #[arg(long, allow_hyphen_values = true)]
    g: String,
    #[arg(long, default_value_t = 1)]
    n_min: u64,
    #[arg(long)]
    n_max: u64,
    /// Fail unless the defects strictly decrease.
    #[arg(long)]
    expect_decreasing: bool,
}

fn folner_cmd(a: &FolnerArgs) -> Result<Outcome> {
    let group = parse::group(&a.group)?;
    let family = match &a.family {
        Some(f) => FolnerFamily::new(group.clone(), parse::family(f)?)?,
        None => FolnerFamily::default_for(group.clone())?,
    };
    let g = parse::element(&a.g, &group)?;
    if a.n_min > a.n_max {
        return Err(Error::Input("n_min exceeds n_max".into()));
    }
    let mut rows = Vec::new();
    let mut defects = Vec::new();
    for n in a.n_min..=a.n_max {
        let d = density::folner_defect(&family, n, &g)?;
        rows.push(json!({ "n": n, "defect": ratio::format_ratio(&d), "value": ratio::to_f64(&d) }));
        defects.push(d);
    }
    let decreasing = defects.windows(2).all(|w| w[1] < w[0]);
    outcome(!a.expect_decreasing || decreasing, json!({ "element": g, "defects": rows, "decreasing": decreasing }))
}
