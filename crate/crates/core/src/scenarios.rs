//! Reproductions of the Sturmian product-set constructions on `Z` with the symmetric
//! family `[−n, n]`, and the Kneser-type inequality check at scale.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::{self, DensityEstimate, FamilyKind, FolnerFamily, DEFAULT_TAIL};
use crate::error::{Error, Result};
use crate::groups::{BoxParams, GroupDescriptor};
use crate::ratio::{self, Q};
use crate::setspec::{self, SetExpr, WindowSet};
use crate::structure;
use crate::sturmian::{self, QuadIrr, SturmianSpec, TorusInterval};

/// Scales sampled per density series.
pub const SERIES_POINTS: u64 = 20;
/// Moduli scanned for periodic supersets.
pub const PERIODIC_M_MAX: u64 = 50;
/// Moduli scanned for periodic runs in sumsets.
pub const RUN_M_MAX: u64 = 6;
/// Search bound for the disjoint shift `n₀`.
pub const SHIFT_BOUND: u64 = 10_000;

/// `max(0.01, 20·ln n / n)`.
pub fn tol(n: u64) -> f64 {
    let n = n.max(2) as f64;
    (20.0 * n.ln() / n).max(0.01)
}

/// Gap bound used for syndeticity at scale of sets built from a Sturmian set
/// with interval measure `m`.
pub fn gap_bound(m: f64) -> u64 {
    ((8.0 / m).ceil() as u64).max(8)
}

/// Window length for thickness and Banach estimates at scale `n`.
pub fn window_len(n: u64) -> u64 {
    (n / 100).max(16)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Relation {
    /// `lhs ≤ rhs`.
    AtMost,
    /// `|lhs − rhs| ≤ tol`.
    Within { tol: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
    /// Nonnegative iff the assertion holds.
    pub margin: f64,
    pub holds: bool,
}

impl Assertion {
    pub fn at_most(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        let margin = rhs - lhs;
        Assertion { name: name.into(), lhs, rhs, relation: Relation::AtMost, margin, holds: margin >= 0.0 }
    }

    pub fn within(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let margin = tol - (lhs - rhs).abs();
        Assertion { name: name.into(), lhs, rhs, relation: Relation::Within { tol }, margin, holds: margin >= 0.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quantity {
    pub name: String,
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub estimate: Option<DensityEstimate>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub id: String,
    pub n: u64,
    pub tol: f64,
    pub params: BTreeMap<String, String>,
    pub quantities: Vec<Quantity>,
    pub assertions: Vec<Assertion>,
    pub pass: bool,
}

impl ScenarioReport {
    fn new(id: &str, n: u64, tol: f64, spec: &SturmianSpec) -> Self {
        let mut params = BTreeMap::new();
        params.insert("alpha".into(), spec.alpha.to_string());
        params.insert("interval_lo".into(), ratio::format_ratio(&spec.interval.lo()));
        params.insert("interval_measure".into(), ratio::format_ratio(&spec.interval.measure()));
        ScenarioReport { id: id.into(), n, tol, params, quantities: Vec::new(), assertions: Vec::new(), pass: false }
    }

    fn quantity(&mut self, name: &str, value: f64) -> f64 {
        self.quantities.push(Quantity { name: name.into(), value, estimate: None });
        value
    }

    fn estimate(&mut self, name: &str, e: DensityEstimate) -> f64 {
        let v = e.value;
        self.quantities.push(Quantity { name: name.into(), value: v, estimate: Some(e) });
        v
    }

    fn check(&mut self, a: Assertion) {
        self.assertions.push(a);
    }

    fn finish(mut self) -> Self {
        self.pass = self.assertions.iter().all(|a| a.holds);
        self
    }

    pub fn quantity_value(&self, name: &str) -> Option<f64> {
        self.quantities.iter().find(|q| q.name == name).map(|q| q.value)
    }

    pub fn assertion(&self, name: &str) -> Option<&Assertion> {
        self.assertions.iter().find(|a| a.name == name)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceCheck {
    pub name: String,
    pub margin_n: f64,
    pub margin_2n: f64,
    pub ok: bool,
}

/// Margins of `coarse` at `n` against `fine` at `2n`: no positive margin may
/// lose more than half.
pub fn convergence(coarse: &ScenarioReport, fine: &ScenarioReport) -> Vec<ConvergenceCheck> {
    coarse
        .assertions
        .iter()
        .filter_map(|a| {
            let b = fine.assertion(&a.name)?;
            let ok = b.holds && (a.margin <= 0.0 || b.margin >= 0.5 * a.margin);
            Some(ConvergenceCheck { name: a.name.clone(), margin_n: a.margin, margin_2n: b.margin, ok })
        })
        .collect()
}

fn measure(spec: &SturmianSpec) -> f64 {
    ratio::to_f64(&spec.interval.measure())
}

fn symmetric() -> FolnerFamily {
    FolnerFamily::new(GroupDescriptor::IntLine, FamilyKind::Symmetric).expect("symmetric family on Z")
}

fn window(expr: &SetExpr, n: u64) -> Result<WindowSet> {
    let n = n as i64;
    setspec::materialize(&GroupDescriptor::IntLine, expr, &BoxParams::Interval { lo: -n, hi: n })
}

fn lower_along(w: &WindowSet, n: u64) -> Result<DensityEstimate> {
    Ok(density::density_along_window(w, &symmetric(), n, SERIES_POINTS, DEFAULT_TAIL)?.lower)
}

fn banach_upper(expr: &SetExpr, n: u64) -> Result<DensityEstimate> {
    let len = window_len(n);
    let n = n as i64;
    density::banach_density(&GroupDescriptor::IntLine, expr, true, len, (-n, n - len as i64 + 1))
}

fn longest_run(w: &WindowSet) -> u64 {
    let (mut best, mut run) = (0u64, 0u64);
    for &b in &w.mask {
        run = if b { run + 1 } else { 0 };
        best = best.max(run);
    }
    best
}

fn max_gap(w: &WindowSet) -> u64 {
    let mut last = -1i64;
    let mut gap = 0u64;
    for (i, &b) in w.mask.iter().enumerate() {
        if b {
            gap = gap.max((i as i64 - last) as u64);
            last = i as i64;
        }
    }
    gap.max((w.mask.len() as i64 - last) as u64)
}

fn require_scale(n: u64) -> Result<()> {
    if n < 1000 {
        return Err(Error::pre(format!("scenarios need n >= 1000, got {n}")));
    }
    Ok(())
}

/// `C`, `C ∩ N`, `C ∩ (−N)` and `C ∪ N` for `C` the Sturmian set of `spec`.
struct Pieces {
    c: SetExpr,
    c_pos: SetExpr,
    c_neg: SetExpr,
}

fn pieces(spec: &SturmianSpec) -> Pieces {
    let c = SetExpr::sturmian(spec.clone());
    Pieces {
        c_pos: SetExpr::intersect(vec![c.clone(), SetExpr::naturals()]),
        c_neg: SetExpr::intersect(vec![c.clone(), SetExpr::neg_naturals()]),
        c,
    }
}

fn sturmian_spec(alpha: QuadIrr, interval: &TorusInterval) -> Result<SturmianSpec> {
    SturmianSpec::new(alpha, interval.clone())
}

/// Lower densities of `C ∩ N`, `C ∩ (−N)`, `C` and, when `m(I) < 1/2`,
/// `(C + C) ∩ N`.
pub fn verify_base_identities(alpha: QuadIrr, interval: &TorusInterval, n: u64) -> Result<ScenarioReport> {
    require_scale(n)?;
    let spec = sturmian_spec(alpha, interval)?;
    let m = measure(&spec);
    let t = tol(n);
    let mut r = ScenarioReport::new("base", n, t, &spec);
    let p = pieces(&spec);
    let d_pos = r.estimate("lower_density_c_pos", lower_along(&window(&p.c_pos, n)?, n)?);
    let d_neg = r.estimate("lower_density_c_neg", lower_along(&window(&p.c_neg, n)?, n)?);
    let d_c = r.estimate("lower_density_c", lower_along(&window(&p.c, n)?, n)?);
    r.check(Assertion::within("c_pos_half_measure", d_pos, m / 2.0, t));
    r.check(Assertion::within("c_neg_half_measure", d_neg, m / 2.0, t));
    r.check(Assertion::within("c_measure", d_c, m, t));
    if spec.interval.measure() * 2 < Q::from_integer(1) {
        let cc = SetExpr::intersect(vec![p.c.clone().product(p.c.clone()), SetExpr::naturals()]);
        let d_cc = r.estimate("lower_density_cc_pos", lower_along(&window(&cc, n)?, n)?);
        r.check(Assertion::within("cc_pos_measure", d_cc, m, t));
    }
    Ok(r.finish())
}

fn strict_below(interval: &TorusInterval, den: i64) -> Result<()> {
    if interval.measure() * den >= Q::from_integer(1) {
        return Err(Error::pre(format!(
            "need m(I) < 1/{den}, got {}",
            ratio::format_ratio(&interval.measure())
        )));
    }
    Ok(())
}

/// `A = C ∩ N`, `B = C ∪ N`: `A` has no periodic superset, `B` is syndetic,
/// `A + B` is thick and `d̲(A + B) < d*(A) + d̲(B)`.
pub fn run_e1(alpha: QuadIrr, interval: &TorusInterval, n: u64) -> Result<ScenarioReport> {
    require_scale(n)?;
    strict_below(interval, 3)?;
    let spec = sturmian_spec(alpha, interval)?;
    let m = measure(&spec);
    let t = tol(n);
    let mut r = ScenarioReport::new("e1", n, t, &spec);
    let p = pieces(&spec);
    let a = p.c_pos.clone();
    let b = SetExpr::union(vec![p.c.clone(), SetExpr::naturals()]);
    let ni = n as i64;

    let spread = structure::spread_out_witness_z(&a, (0, ni), PERIODIC_M_MAX)?;
    let witnesses = r.quantity("a_periodic_witnesses", spread.witness.iter().count() as f64);
    r.check(Assertion::at_most("a_no_periodic_superset", witnesses, 0.0));

    let wb = window(&b, n)?;
    let gap = r.quantity("b_max_gap", max_gap(&wb) as f64);
    r.check(Assertion::at_most("b_syndetic", gap, gap_bound(m) as f64));

    let wab = setspec::product_window(&GroupDescriptor::IntLine, &a, &b, &BoxParams::Interval { lo: -ni, hi: ni })?;
    let run = r.quantity("ab_longest_run", longest_run(&wab) as f64);
    r.check(Assertion::at_most("ab_thick", window_len(n) as f64, run));

    let d_star_a = r.estimate("upper_banach_a", banach_upper(&a, n)?);
    let d_b = r.estimate("lower_density_b", lower_along(&wb, n)?);
    let d_ab = r.estimate("lower_density_ab", lower_along(&wab, n)?);
    r.check(Assertion::within("a_banach_measure", d_star_a, m, t));
    r.check(Assertion::within("b_lower_density", d_b, (1.0 + m) / 2.0, t));
    r.check(Assertion::at_most("ab_upper_bound", d_ab, m + 0.5 + t));
    r.check(Assertion::at_most("ab_below_kneser_bound", d_ab + t, d_star_a + d_b - t));
    Ok(r.finish())
}

/// `A = B = C ∩ N`: `B` is not syndetic, `A + B` is not thick and
/// `d̲(A + B) < d*(A) + d̲(B)`.
pub fn run_e2(alpha: QuadIrr, interval: &TorusInterval, n: u64) -> Result<ScenarioReport> {
    require_scale(n)?;
    strict_below(interval, 2)?;
    let spec = sturmian_spec(alpha, interval)?;
    let m = measure(&spec);
    let t = tol(n);
    let mut r = ScenarioReport::new("e2", n, t, &spec);
    let b = pieces(&spec).c_pos;
    let ni = n as i64;

    let wb = window(&b, n)?;
    let gap = r.quantity("b_max_gap", max_gap(&wb) as f64);
    r.check(Assertion::at_most("b_not_syndetic", gap_bound(m) as f64 + 1.0, gap));

    let wab = setspec::product_window(&GroupDescriptor::IntLine, &b, &b, &BoxParams::Interval { lo: -ni, hi: ni })?;
    let run = r.quantity("ab_longest_run", longest_run(&wab) as f64);
    r.check(Assertion::at_most("ab_not_thick", run, window_len(n) as f64 - 1.0));

    let d_star_a = r.estimate("upper_banach_a", banach_upper(&b, n)?);
    let d_b = r.estimate("lower_density_b", lower_along(&wb, n)?);
    let d_ab = r.estimate("lower_density_ab", lower_along(&wab, n)?);
    r.check(Assertion::within("a_banach_measure", d_star_a, m, t));
    r.check(Assertion::within("b_lower_density", d_b, m / 2.0, t));
    r.check(Assertion::at_most("ab_upper_bound", d_ab, m + t));
    r.check(Assertion::at_most("ab_below_kneser_bound", d_ab + t, d_star_a + d_b - t));
    Ok(r.finish())
}

/// The sets of the equality construction: `A = (C ∩ N) ∪ {n₀}`, `B = C ∩ N`
/// with `(I + I) ∩ (I + n₀α) = ∅`.
pub fn e3_sets(alpha: QuadIrr, interval: &TorusInterval) -> Result<(i64, SetExpr, SetExpr)> {
    let n0 = sturmian::find_shift_n(&alpha, interval, SHIFT_BOUND)?;
    let spec = sturmian_spec(alpha, interval)?;
    let b = pieces(&spec).c_pos;
    let a = SetExpr::union(vec![b.clone(), SetExpr::ints([n0])]);
    Ok((n0, a, b))
}

/// Spread-out `A` with no periodic runs in `A + B` and
/// `d̲(A + B) = d*(A) + d̲(B) = 3·m(I)/2`.
pub fn run_e3(alpha: QuadIrr, interval: &TorusInterval, n: u64) -> Result<ScenarioReport> {
    require_scale(n)?;
    let (n0, a, b) = e3_sets(alpha, interval)?;
    let spec = sturmian_spec(alpha, interval)?;
    let m = measure(&spec);
    let t = tol(n);
    let mut r = ScenarioReport::new("e3", n, t, &spec);
    r.params.insert("n0".into(), n0.to_string());
    let ni = n as i64;

    let spread = structure::spread_out_witness_z(&a, (0, ni), PERIODIC_M_MAX)?;
    let witnesses = r.quantity("a_periodic_witnesses", spread.witness.iter().count() as f64);
    r.check(Assertion::at_most("a_spread_out", witnesses, 0.0));

    let wab = setspec::product_window(&GroupDescriptor::IntLine, &a, &b, &BoxParams::Interval { lo: -ni, hi: ni })?;
    let len = window_len(n);
    let runs = (1..=RUN_M_MAX)
        .into_par_iter()
        .map(|k| structure::find_periodic_run(&wab, k, len, (-ni, ni)).map(|w| w.is_some()))
        .collect::<Result<Vec<_>>>()?;
    let found = r.quantity("ab_periodic_runs", runs.iter().filter(|&&x| x).count() as f64);
    r.check(Assertion::at_most("ab_no_periodic_run", found, 0.0));

    let d_star_a = r.estimate("upper_banach_a", banach_upper(&a, n)?);
    let d_b = r.estimate("lower_density_b", lower_along(&window(&b, n)?, n)?);
    let d_ab = r.estimate("lower_density_ab", lower_along(&wab, n)?);
    r.check(Assertion::within("ab_equality", d_ab, 1.5 * m, t));
    r.check(Assertion::within("ab_equals_kneser_bound", d_ab, d_star_a + d_b, 2.0 * t));
    Ok(r.finish())
}

/// Runs a scenario by id: `base`, `e1`, `e2` or `e3`.
pub fn run_named(id: &str, alpha: QuadIrr, interval: &TorusInterval, n: u64) -> Result<ScenarioReport> {
    match id {
        "base" => verify_base_identities(alpha, interval, n),
        "e1" => run_e1(alpha, interval, n),
        "e2" => run_e2(alpha, interval, n),
        "e3" => run_e3(alpha, interval, n),
        other => Err(Error::input(format!("unknown scenario {other:?} (expected base, e1, e2 or e3)"))),
    }
}

/// Outcome of the Kneser-type inequality on `Z` at scale.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KneserZReport {
    pub n: u64,
    pub slack: f64,
    pub a_spread_out: bool,
    pub b_max_gap: u64,
    pub b_syndetic: bool,
    pub thick_len: u64,
    pub ab_longest_run: u64,
    pub ab_thick: bool,
    pub upper_banach_a: f64,
    pub lower_density_b: f64,
    pub lower_density_ab: f64,
    /// `d̲(A + B) − d*(A) − d̲(B)`.
    pub excess: f64,
    pub exact: bool,
    /// Hypotheses fail, `A + B` is thick, or the inequality holds within
    /// `slack`.
    pub pass: bool,
}

/// `d̲(A + B) ≥ d*(A) + d̲(B) − slack` whenever `A` is spread-out, `B` is
/// syndetic (gaps at most `gap_bound`) and `A + B` is not thick, all at
/// scale `n`.
pub fn kneser_z_check(a: &SetExpr, b: &SetExpr, n: u64, gap_bound: u64, slack: f64) -> Result<KneserZReport> {
    require_scale(n)?;
    let ni = n as i64;
    let spread = structure::spread_out_witness_z(a, (-ni, ni), PERIODIC_M_MAX)?;
    let wb = window(b, n)?;
    let b_max_gap = max_gap(&wb);
    let wab = setspec::product_window(&GroupDescriptor::IntLine, a, b, &BoxParams::Interval { lo: -ni, hi: ni })?;
    let thick_len = window_len(n);
    let run = longest_run(&wab);
    let upper_banach_a = banach_upper(a, n)?.value;
    let lower_density_b = lower_along(&wb, n)?.value;
    let lower_density_ab = lower_along(&wab, n)?.value;
    let excess = lower_density_ab - upper_banach_a - lower_density_b;
    let b_syndetic = b_max_gap <= gap_bound;
    let ab_thick = run >= thick_len;
    let applies = spread.spread_out && b_syndetic && !ab_thick;
    Ok(KneserZReport {
        n,
        slack,
        a_spread_out: spread.spread_out,
        b_max_gap,
        b_syndetic,
        thick_len,
        ab_longest_run: run,
        ab_thick,
        upper_banach_a,
        lower_density_b,
        lower_density_ab,
        excess,
        exact: wab.exact && wb.exact,
        pass: !applies || excess >= -slack,
    })
}

/// A named `(A, B)` pair for the inequality suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuitePair {
    pub name: String,
    pub a: SetExpr,
    pub b: SetExpr,
}

/// Twenty pairs with `A` Sturmian and `B` a syndetic union of Sturmian and
/// periodic sets, all Sturmian pieces sharing the rotation `alpha`.
pub fn kneser_suite(alpha: QuadIrr) -> Result<Vec<SuitePair>> {
    let st = |lo: (i64, i64), hi: (i64, i64)| -> Result<SetExpr> {
        let i = TorusInterval::new(Q::new(lo.0, lo.1), Q::new(hi.0, hi.1))?;
        Ok(SetExpr::sturmian(SturmianSpec::new(alpha, i)?))
    };
    let per = |m: u64, r: &[u64]| SetExpr::periodic(m, r.to_vec());
    let and = |x: SetExpr, y: SetExpr| SetExpr::intersect(vec![x, y]);
    let or = |x: SetExpr, y: SetExpr| SetExpr::union(vec![x, y]);
    let pairs: Vec<(&str, SetExpr, SetExpr)> = vec![
        ("st20_st30", st((0, 1), (1, 5))?, st((0, 1), (3, 10))?),
        ("st10_st25", st((0, 1), (1, 10))?, st((0, 1), (1, 4))?),
        ("st30_st30", st((0, 1), (3, 10))?, st((0, 1), (3, 10))?),
        ("st15_st40_shifted", st((1, 10), (1, 4))?, st((1, 2), (9, 10))?),
        ("st25_st50", st((0, 1), (1, 4))?, st((1, 5), (7, 10))?),
        ("st20_st30_even", st((0, 1), (1, 5))?, and(st((0, 1), (3, 10))?, per(2, &[0]))),
        ("st20_st40_mod3", st((0, 1), (1, 5))?, and(st((0, 1), (2, 5))?, per(3, &[0, 1]))),
        ("st10_st30_odd", st((0, 1), (1, 10))?, and(st((1, 5), (1, 2))?, per(2, &[1]))),
        ("st20_two_arcs", st((0, 1), (1, 5))?, or(st((0, 1), (1, 10))?, st((1, 2), (3, 5))?)),
        ("st15_two_arcs", st((1, 2), (13, 20))?, or(st((0, 1), (1, 5))?, st((2, 5), (1, 2))?)),
        ("st30_wrap", st((9, 10), (6, 5))?, st((0, 1), (1, 5))?),
        ("st05_st45", st((0, 1), (1, 20))?, st((0, 1), (9, 20))?),
        ("st20_evens", st((0, 1), (1, 5))?, per(2, &[0])),
        ("st20_mod5", st((0, 1), (1, 5))?, per(5, &[0, 2])),
        ("st30_st10_or_mod4", st((0, 1), (3, 10))?, or(st((0, 1), (1, 10))?, per(4, &[1]))),
        ("st10_mod7", st((0, 1), (1, 10))?, per(7, &[3])),
        ("st40_st40", st((0, 1), (2, 5))?, st((0, 1), (2, 5))?),
        ("st35_st50_even", st((0, 1), (7, 20))?, and(st((0, 1), (1, 2))?, per(2, &[0]))),
        ("st25_st25_cap_mod3", st((0, 1), (1, 4))?, and(st((1, 4), (1, 2))?, per(3, &[2]))),
        ("st20_st20_cup_st20", st((0, 1), (1, 5))?, or(st((0, 1), (1, 5))?, st((3, 5), (4, 5))?)),
    ];
    Ok(pairs.into_iter().map(|(n, a, b)| SuitePair { name: n.into(), a, b }).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn interval(num: i64, den: i64) -> TorusInterval {
        TorusInterval::new(Q::new(0, 1), Q::new(num, den)).unwrap()
    }

    #[test]
    fn tolerance_floor() {
        assert_eq!(tol(1_000_000), 0.01);
        assert!(tol(1000) > 0.1);
    }

    #[test]
    fn base_identities_small_scale() {
        let r = verify_base_identities(QuadIrr::golden(), &interval(3, 10), 100_000).unwrap();
        assert!(r.pass, "{r:#?}");
        assert_eq!(r.assertions.len(), 4);
        let full = verify_base_identities(QuadIrr::golden(), &TorusInterval::full(), 10_000).unwrap();
        assert_eq!(full.quantity_value("lower_density_c"), Some(1.0));
        assert_eq!(full.assertions.len(), 3);
    }

    #[test]
    fn preconditions() {
        let g = QuadIrr::golden();
        assert!(matches!(run_e1(g, &interval(17, 50), 10_000), Err(Error::Precondition(_))));
        assert!(matches!(run_e2(g, &interval(1, 2), 10_000), Err(Error::Precondition(_))));
        assert!(run_e3(g, &interval(17, 50), 10_000).is_err());
        assert!(run_named("e9", g, &interval(1, 5), 10_000).is_err());
    }

    #[test]
    fn scenarios_pass_at_small_scale() {
        let g = QuadIrr::golden();
        for (id, i) in [("e1", interval(3, 10)), ("e2", interval(2, 5)), ("e3", interval(1, 5))] {
            let r = run_named(id, g, &i, 200_000).unwrap();
            assert!(r.pass, "{id}: {r:#?}");
        }
    }

    #[test]
    fn kneser_check_equality_case() {
        let g = QuadIrr::golden();
        let a = SetExpr::sturmian(SturmianSpec::new(g, interval(1, 5)).unwrap());
        let b = SetExpr::sturmian(SturmianSpec::new(g, interval(3, 10)).unwrap());
        let r = kneser_z_check(&a, &b, 100_000, 64, 0.02).unwrap();
        assert!(r.a_spread_out && r.b_syndetic && !r.ab_thick);
        assert!(r.excess.abs() < 0.02, "{r:#?}");
        assert!(r.pass);
    }

    #[test]
    fn suite_has_twenty_pairs() {
        let s = kneser_suite(QuadIrr::golden()).unwrap();
        assert_eq!(s.len(), 20);
        let names: std::collections::BTreeSet<_> = s.iter().map(|p| p.name.clone()).collect();
        assert_eq!(names.len(), 20);
    }
}
