//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use kneser_core::cxmachine::{self, CxContext};
use kneser_core::density::{self, FamilyKind, FolnerFamily};
use kneser_core::finitegrp::{self, ScanMode};
use kneser_core::groups::library::{self, groups_in_range};
use kneser_core::groups::{BoxParams, GroupDescriptor, GroupElement, PowerFraction, SolvableBox};
use kneser_core::ratio::Q;
use kneser_core::scenarios;
use kneser_core::setspec::{Builtin, SetExpr};
use kneser_core::sturmian::{self, QuadIrr, TorusInterval};

const EQUI_N: u64 = 100_000;
const EQUI_TOL: f64 = 2e-3;
const EQUI_TIME: Duration = Duration::from_secs(1);
const KEMPERMAN_TIME: Duration = Duration::from_secs(300);
const SUITE_N: u64 = 1_000_000;
const SUITE_SLACK: f64 = 0.02;
const SUITE_TIME: Duration = Duration::from_secs(120);
const SCENARIO_N: u64 = 1_000_000;
const SCENARIO_TOL: f64 = 0.01;
const CX_SCALE: u32 = 8;
const CX_CLOSED_FORM_SCALE: u32 = 3;
const INDEPENDENCE_TOL: f64 = 0.05;
const MONOTONE_SLACK: f64 = 1e-12;

struct Outcome {
    pass: bool,
    detail: String,
}

fn iv(lo: (i64, i64), hi: (i64, i64)) -> TorusInterval {
    TorusInterval::new(Q::new(lo.0, lo.1), Q::new(hi.0, hi.1)).expect("valid interval")
}

fn equidistribution() -> Outcome {
    let t = Instant::now();
    let e = sturmian::equidistribution_check(&QuadIrr::golden(), &iv((0, 1), (3, 10)), EQUI_N).expect("count");
    let dt = t.elapsed();
    let err = (e.ratio - 0.3).abs();
    Outcome {
        pass: err <= EQUI_TOL && dt < EQUI_TIME,
        detail: format!("count={} |ratio-0.3|={err:.2e} time={dt:.2?}", e.count),
    }
}

fn kemperman() -> Outcome {
    let t = Instant::now();
    let exhaustive = ["Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z2xZ2", "Z2xZ4", "S3", "D4", "Q8"];
    let mut groups = 0;
    let mut pairs = 0;
    let mut violations = 0;
    for name in exhaustive {
        let g = library::by_name(name).expect("library group");
        let r = finitegrp::kemperman_verify(&g, ScanMode::Exhaustive).expect("scan");
        groups += 1;
        pairs += r.pairs_checked;
        violations += r.violations;
    }
    for g in groups_in_range(9, 16) {
        let mode = ScanMode::Sampled { pairs: finitegrp::DEFAULT_SAMPLES, seed: finitegrp::DEFAULT_SEED };
        let r = finitegrp::kemperman_verify(&g, mode).expect("scan");
        groups += 1;
        pairs += r.pairs_checked;
        violations += r.violations;
    }
    let dt = t.elapsed();
    Outcome {
        pass: violations == 0 && dt < KEMPERMAN_TIME,
        detail: format!("groups={groups} pairs={pairs} violations={violations} time={dt:.2?}"),
    }
}

fn kneser_abelian() -> Outcome {
    let mut groups = 0;
    let mut pairs = 0;
    let mut violations = 0;
    for g in groups_in_range(1, 10).into_iter().filter(|g| g.is_abelian()) {
        let r = finitegrp::kneser_abelian_verify(&g, ScanMode::Exhaustive).expect("scan");
        groups += 1;
        pairs += r.pairs_checked;
        violations += r.violations;
    }
    Outcome { pass: violations == 0, detail: format!("groups={groups} pairs={pairs} violations={violations}") }
}

fn i1_closure() -> Outcome {
    let mut groups = 0;
    let mut pairs = 0;
    let mut failures = 0;
    for g in groups_in_range(1, 8) {
        let r = finitegrp::verify_i1_closure(&g).expect("scan");
        groups += 1;
        pairs += r.pairs;
        failures += r.failures;
    }
    Outcome { pass: failures == 0, detail: format!("groups={groups} pairs={pairs} failures={failures}") }
}

fn kneser_suite() -> Outcome {
    let t = Instant::now();
    let suite = scenarios::kneser_suite(QuadIrr::golden()).expect("suite");
    let mut applicable = 0;
    let mut failed = Vec::new();
    let mut worst = f64::INFINITY;
    for pair in &suite {
        let r = scenarios::kneser_z_check(&pair.a, &pair.b, SUITE_N, scenarios::gap_bound(0.05), SUITE_SLACK)
            .expect("kneser check");
        if r.a_spread_out && r.b_syndetic && !r.ab_thick {
            applicable += 1;
            worst = worst.min(r.excess);
        }
        if !r.pass || !r.exact {
            failed.push(pair.name.clone());
        }
    }
    let dt = t.elapsed();
    Outcome {
        pass: failed.is_empty() && applicable > 0 && dt < SUITE_TIME,
        detail: format!(
            "pairs={} not_thick={applicable} min_excess={worst:.4} failed={failed:?} time={dt:.2?}",
            suite.len()
        ),
    }
}

fn scenario_suite() -> Outcome {
    let g = QuadIrr::golden();
    let runs = [
        ("e1", g, iv((0, 1), (3, 10))),
        ("e2", g, iv((0, 1), (2, 5))),
        ("e3", g, iv((0, 1), (1, 5))),
        ("e3", QuadIrr::silver(), iv((0, 1), (1, 5))),
    ];
    let mut parts = Vec::new();
    let mut pass = true;
    for (id, alpha, i) in runs {
        let r = scenarios::run_named(id, alpha, &i, SCENARIO_N).expect("scenario");
        pass &= r.pass && r.tol <= SCENARIO_TOL;
        let min_margin = r
            .assertions
            .iter()
            .filter(|a| matches!(a.relation, scenarios::Relation::Within { .. }))
            .map(|a| a.margin)
            .fold(f64::INFINITY, f64::min);
        let ab = r.quantity_value("lower_density_ab").unwrap_or(f64::NAN);
        parts.push(format!("{id}[{alpha}]: pass={} d(A+B)={ab:.4} min_density_margin={min_margin:.4}", r.pass));
    }
    Outcome { pass, detail: parts.join("; ") }
}

fn base_identities() -> Outcome {
    let r = scenarios::verify_base_identities(QuadIrr::golden(), &iv((0, 1), (3, 10)), SCENARIO_N).expect("base");
    let values: Vec<String> =
        r.assertions.iter().map(|a| format!("{}={:.4}~{:.2}", a.name, a.lhs, a.rhs)).collect();
    Outcome { pass: r.pass && r.assertions.len() == 4 && r.tol <= SCENARIO_TOL, detail: values.join(" ") }
}

fn counterexample_machine() -> Outcome {
    let ctx = CxContext::new(2).expect("p = 2");
    let r = cxmachine::verify_cx1(
        &ctx,
        Q::new(1, 5),
        QuadIrr::golden(),
        iv((0, 1), (2, 5)),
        CX_SCALE,
        SolvableBox::Skew,
        cxmachine::DEFAULT_TRANSLATES,
        CX_CLOSED_FORM_SCALE,
    )
    .expect("cx1");
    let proxies_ok = (0.45..=0.55).contains(&r.a.upper) && (0.15..=0.25).contains(&r.b.upper) && r.ab.upper <= 0.55;
    let mut balls = 0;
    let mut oracle_ok = true;
    for (p, max_n) in [(2u64, 4u32), (3, 2)] {
        let ctx = CxContext::new(p).expect("p >= 2");
        for n in 1..=max_n {
            for b in [BoxParams::skew(p, n).expect("box"), BoxParams::rect(p, n).expect("box")] {
                let o = cxmachine::ball_oracle(&ctx, &b).expect("oracle");
                oracle_ok &= o.pass;
                balls += 1;
            }
        }
    }
    Outcome {
        pass: r.pass && proxies_ok && oracle_ok,
        detail: format!(
            "d*(A)={:.4} d*(B)={:.4} d*(AB)={:.4} products_checked={} balls={balls} oracle_ok={oracle_ok}",
            r.a.upper, r.b.upper, r.ab.upper, r.closed_form_checked
        ),
    }
}

fn independence() -> Outcome {
    let ctx = CxContext::new(2).expect("p = 2");
    let c = SetExpr::builtin(Builtin::EvenLayers);
    let d = SetExpr::builtin(Builtin::S);
    let sample: Vec<GroupElement> = [(1i128, 0i32, 0i64), (3, -2, 1), (5, 1, -2), (-7, -3, 3)]
        .iter()
        .map(|&(j, e, k)| GroupElement::affine(PowerFraction::scaled(j, e, 2), k))
        .collect();
    let mut pass = true;
    let mut parts = Vec::new();
    // Skew errors must never increase; rectangle errors must strictly
    // decrease from their first peak at n = 2.
    for (form, first, strict) in [(SolvableBox::Skew, 1u32, false), (SolvableBox::Rect, 2, true)] {
        let boxes: Vec<BoxParams> = (first..=CX_SCALE)
            .map(|n| match form {
                SolvableBox::Skew => BoxParams::skew(2, n),
                SolvableBox::Rect => BoxParams::rect(2, n),
            })
            .collect::<Result<_, _>>()
            .expect("boxes");
        let series = cxmachine::independence_check(&ctx, &c, &d, &boxes, &sample).expect("independence");
        let errors: Vec<f64> = series.iter().map(|p| p.error).collect();
        let monotone = errors.windows(2).all(|w| if strict { w[1] < w[0] } else { w[1] <= w[0] + MONOTONE_SLACK });
        let last = *errors.last().expect("nonempty");
        pass &= monotone && last <= INDEPENDENCE_TOL;
        let shown: Vec<String> = errors.iter().map(|e| format!("{e:.4}")).collect();
        parts.push(format!("{form:?} n={first}..{CX_SCALE}: [{}]", shown.join(", ")));
    }
    Outcome { pass, detail: parts.join("; ") }
}

fn folner() -> Outcome {
    let line = FolnerFamily::new(GroupDescriptor::IntLine, FamilyKind::Symmetric).expect("family");
    let exact = (1..=200u64).all(|n| {
        density::folner_defect(&line, n, &GroupElement::Int(1)).expect("defect") == Q::new(2, 2 * n as i64 + 1)
    });
    let sol = FolnerFamily::default_for(GroupDescriptor::SolvablePk(2)).expect("family");
    let gens = [
        GroupElement::affine(PowerFraction::from_int(1, 2), 0),
        GroupElement::affine(PowerFraction::from_int(0, 2), 1),
    ];
    let mut decreasing = true;
    let mut parts = Vec::new();
    for g in &gens {
        let d: Vec<Q> = (2..=8).map(|n| density::folner_defect(&sol, n, g).expect("defect")).collect();
        decreasing &= d.windows(2).all(|w| w[1] < w[0]);
        let shown: Vec<String> = d.iter().map(|q| format!("{:.4}", kneser_core::ratio::to_f64(q))).collect();
        parts.push(format!("[{}]", shown.join(", ")));
    }
    Outcome {
        pass: exact && decreasing,
        detail: format!("line_exact={exact} solvable_decreasing={decreasing} defects={}", parts.join(" ")),
    }
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        ("equidistribution", equidistribution),
        ("kemperman", kemperman),
        ("kneser abelian equality", kneser_abelian),
        ("I1 closure", i1_closure),
        ("kneser-type inequality suite", kneser_suite),
        ("Sturmian scenarios", scenario_suite),
        ("base identities", base_identities),
        ("counterexample machine", counterexample_machine),
        ("independence", independence),
        ("folner defect", folner),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        failures += usize::from(!o.pass);
        println!("{tag} #{} {name} ({:.2?}): {}", i + 1, t.elapsed(), o.detail);
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
