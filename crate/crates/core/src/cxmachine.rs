//! The counterexample machine in `G = Z[1/p] ⋊ Z` with
//! `(a, k)(b, l) = (a + p^k b, k + l)`.
//!
//! Subgroups: `N = Z[1/p] ⋊ {0}`, `Λ = Z ⋊ {0}`, `L = {0} ⋊ Z`. Every built-in
//! set is decided by the pair `(v_p(x), k)` alone, which makes box counts a
//! sum over valuation classes instead of an enumeration.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{BoxParams, GroupDescriptor, GroupElement, PowerFraction, SolvableBox};
use crate::ratio::Q;
use crate::setspec::{Builtin, SetExpr};
use crate::sturmian::{frac_in_interval, QuadIrr, TorusInterval};

/// Default half-width `R` of the right-translate family `F_n·(0, l)`, `|l| ≤ R`.
pub const DEFAULT_TRANSLATES: i64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CxContext {
    pub p: u64,
}

impl CxContext {
    pub fn new(p: u64) -> Result<Self> {
        if p < 2 {
            return Err(Error::input(format!("need p >= 2, got {p}")));
        }
        Ok(CxContext { p })
    }

    pub fn group(&self) -> GroupDescriptor {
        GroupDescriptor::SolvablePk(self.p)
    }
}

/// `v ≥ t` with `v(0) = +∞`.
fn at_least(v: Option<i32>, t: i64) -> bool {
    v.is_none_or(|v| v as i64 >= t)
}

pub fn member_s(a: &PowerFraction, k: i64) -> bool {
    at_least(a.valuation(), k)
}

/// Closed form: `x ∈ Z` for `k ≥ 0`, `v_p(x) ≥ k` for `k < 0`.
pub fn member_sinvs(a: &PowerFraction, k: i64) -> bool {
    at_least(a.valuation(), k.min(0))
}

pub fn member_t(a: &PowerFraction, k: i64) -> bool {
    !member_sinvs(a, k)
}

/// Membership in a built-in set. `p` only matters through the valuation
/// stored in `a`.
pub fn builtin_member(_p: u64, b: &Builtin, a: &PowerFraction, k: i64) -> bool {
    let even = k.rem_euclid(2) == 0;
    match b {
        Builtin::S => member_s(a, k),
        Builtin::SInvS => member_sinvs(a, k),
        Builtin::T => member_t(a, k),
        Builtin::EvenLayers => even,
        Builtin::Cx1A => even && member_s(a, k),
        Builtin::Cx1B { alpha, interval } => {
            (a.is_zero() && k == 0) || (!even && member_t(a, k) && frac_in_interval(k - 1, alpha, interval))
        }
        Builtin::Cx1AB => {
            if even {
                member_s(a, k)
            } else {
                !at_least(a.valuation(), k)
            }
        }
    }
}

fn affine(g: &GroupElement) -> Result<(PowerFraction, i64)> {
    g.as_affine().ok_or_else(|| Error::ty(format!("{g:?} is not an element of Z[1/p] ⋊ Z")))
}

/// `g = (0, k)` with `g F g⁻¹ ⊆ Λ` and `k ≥ 0` minimal.
pub fn contracting_conjugator(ctx: &CxContext, f: &[GroupElement]) -> Result<GroupElement> {
    let desc = ctx.group();
    let mut k = 0i64;
    for g in f {
        desc.check(g)?;
        let (a, l) = affine(g)?;
        if l != 0 {
            return Err(Error::pre(format!("{g:?} is not in N")));
        }
        if let Some(v) = a.valuation() {
            k = k.max(-(v as i64));
        }
    }
    let g = GroupElement::affine(PowerFraction::from_int(0, ctx.p), k);
    for x in desc.conjugate_set(&g, f)? {
        let (a, l) = affine(&x)?;
        debug_assert!(l == 0 && a.is_integer());
        if l != 0 || !a.is_integer() {
            return Err(Error::pre("conjugate left Λ"));
        }
    }
    Ok(g)
}

/// Whether membership in `expr` depends only on `(v_p(x), k)`.
pub fn valuation_layered(expr: &SetExpr) -> bool {
    match expr {
        SetExpr::Builtin { .. } => true,
        SetExpr::Union { sets } | SetExpr::Intersect { sets } => sets.iter().all(valuation_layered),
        SetExpr::Complement { set } => valuation_layered(set),
        _ => false,
    }
}

/// `|expr ∩ F·(0, l)|` for a `Z[1/p] ⋊ Z` box `F`.
pub fn count_in_box(ctx: &CxContext, expr: &SetExpr, b: &BoxParams, l: i64) -> Result<u64> {
    let desc = ctx.group();
    let BoxParams::Solvable { n, j, form } = b else {
        return Err(Error::ty("count_in_box needs a Z[1/p] ⋊ Z box"));
    };
    desc.box_size(b)?;
    expr.validate(&desc)?;
    if valuation_layered(expr) {
        return layered_count(ctx, expr, *n as i64, *j, *form, l);
    }
    let elems = desc.enumerate_box(b)?;
    let shift = GroupElement::affine(PowerFraction::from_int(0, ctx.p), l);
    let hits = elems
        .par_iter()
        .map(|g| {
            let h = desc.op(g, &shift)?;
            expr.member(&desc, &h)
        })
        .collect::<Result<Vec<bool>>>()?;
    Ok(hits.iter().filter(|&&b| b).count() as u64)
}

/// Number of `0 < |j| ≤ J` with `p^s | j`.
fn multiples(jmax: u64, p: u64, s: u32) -> u64 {
    match p.checked_pow(s) {
        Some(q) => 2 * (jmax / q),
        None => 0,
    }
}

fn layered_count(ctx: &CxContext, expr: &SetExpr, n: i64, jmax: u64, form: SolvableBox, l: i64) -> Result<u64> {
    let desc = ctx.group();
    let p = ctx.p;
    let mut smax = 0u32;
    while multiples(jmax, p, smax + 1) > 0 {
        smax += 1;
    }
    let mut total = 0u64;
    for k in -n..=n {
        let e = form.exponent(k, n);
        let big_k = k + l;
        let zero = GroupElement::affine(PowerFraction::from_int(0, p), big_k);
        if expr.member(&desc, &zero)? {
            total += 1;
        }
        for s in 0..=smax {
            let exact = multiples(jmax, p, s) - multiples(jmax, p, s + 1);
            if exact == 0 {
                continue;
            }
            let w = i32::try_from(e + s as i64).map_err(|_| Error::resource("valuation overflow"))?;
            let rep = GroupElement::affine(PowerFraction::scaled(1, w, p), big_k);
            if expr.member(&desc, &rep)? {
                total += exact;
            }
        }
    }
    Ok(total)
}

/// Relative frequencies over the right translates `F·(0, l)`, `|l| ≤ r`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TranslateDensity {
    /// Maximum over translates: a lower bound for `d*`.
    pub upper: f64,
    /// Minimum over translates: an upper bound for `d_*`.
    pub lower: f64,
    pub upper_shift: i64,
    pub lower_shift: i64,
    pub box_size: u64,
}

pub fn translate_density(ctx: &CxContext, expr: &SetExpr, b: &BoxParams, r: i64) -> Result<TranslateDensity> {
    let size = ctx.group().box_size(b)?;
    if size == 0 {
        return Err(Error::pre("empty box"));
    }
    let counts = (-r..=r)
        .map(|l| Ok((l, count_in_box(ctx, expr, b, l)?)))
        .collect::<Result<Vec<_>>>()?;
    let (upper_shift, hi) = counts.iter().copied().max_by_key(|&(l, c)| (c, -l.abs())).expect("r >= 0");
    let (lower_shift, lo) = counts.iter().copied().min_by_key(|&(l, c)| (c, l.abs())).expect("r >= 0");
    Ok(TranslateDensity {
        upper: hi as f64 / size as f64,
        lower: lo as f64 / size as f64,
        upper_shift,
        lower_shift,
        box_size: size,
    })
}

/// The sets `A`, `B` of the counterexample together with the closed form of
/// `AB`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cx1Sets {
    pub a: SetExpr,
    pub b: SetExpr,
    pub ab: SetExpr,
}

pub fn build_cx1(ctx: &CxContext, epsilon: Q, alpha: QuadIrr, interval: TorusInterval) -> Result<Cx1Sets> {
    let half = Q::new(1, 2);
    if epsilon <= Q::from_integer(0) || epsilon >= half {
        return Err(Error::pre("need 0 < epsilon < 1/2"));
    }
    if alpha.is_rational() {
        return Err(Error::input("rotation must be irrational"));
    }
    if interval.measure() != epsilon * 2 {
        return Err(Error::pre("interval measure must be 2·epsilon"));
    }
    let _ = ctx;
    Ok(Cx1Sets {
        a: SetExpr::builtin(Builtin::Cx1A),
        b: SetExpr::builtin(Builtin::Cx1B { alpha, interval }),
        ab: SetExpr::builtin(Builtin::Cx1AB),
    })
}

/// A factorization `x = a·b` with `a ∈ A`, `b ∈ B`, searched over odd layers
/// `l` of `b` below `K − v(X)`.
pub fn cx1ab_witness(
    ctx: &CxContext,
    alpha: &QuadIrr,
    interval: &TorusInterval,
    x: &GroupElement,
    search: u32,
) -> Result<Option<(GroupElement, GroupElement)>> {
    let desc = ctx.group();
    let (big_x, big_k) = affine(x)?;
    if big_k.rem_euclid(2) == 0 {
        return Ok(member_s(&big_x, big_k).then(|| (x.clone(), desc.identity())));
    }
    let Some(v) = big_x.valuation() else {
        return Ok(None);
    };
    if v as i64 >= big_k {
        return Ok(None);
    }
    let mut l = big_k - v as i64 - 1;
    if l.rem_euclid(2) == 0 {
        l -= 1;
    }
    for _ in 0..search {
        if frac_in_interval(l - 1, alpha, interval) {
            let y = big_x
                .shift(l - big_k)
                .ok_or_else(|| Error::resource("exponent overflow"))?;
            let b = GroupElement::affine(y, l);
            let a = desc.op(x, &desc.inverse(&b)?)?;
            return Ok(Some((a, b)));
        }
        l -= 2;
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cx1Report {
    pub p: u64,
    pub scale: u32,
    pub form: SolvableBox,
    pub translates: i64,
    pub epsilon: f64,
    pub a: TranslateDensity,
    pub b: TranslateDensity,
    pub ab: TranslateDensity,
    /// Pairwise products of `A` and `B` on a small box all satisfy the
    /// closed form of `AB`.
    pub closed_form_checked: u64,
    pub closed_form_ok: bool,
    pub pass: bool,
}

/// Density proxies of `A`, `B`, `AB` at box scale `n` plus an exhaustive
/// check of the closed form of `AB` on products from the scale-`check_n` box.
#[allow(clippy::too_many_arguments)]
pub fn verify_cx1(
    ctx: &CxContext,
    epsilon: Q,
    alpha: QuadIrr,
    interval: TorusInterval,
    n: u32,
    form: SolvableBox,
    r: i64,
    check_n: u32,
) -> Result<Cx1Report> {
    let sets = build_cx1(ctx, epsilon, alpha, interval)?;
    let b = match form {
        SolvableBox::Skew => BoxParams::skew(ctx.p, n)?,
        SolvableBox::Rect => BoxParams::rect(ctx.p, n)?,
    };
    let da = translate_density(ctx, &sets.a, &b, r)?;
    let db = translate_density(ctx, &sets.b, &b, r)?;
    let dab = translate_density(ctx, &sets.ab, &b, r)?;
    let (checked, ok) = check_ab_closed_form(ctx, &sets, check_n)?;
    let eps = num_traits::ToPrimitive::to_f64(&epsilon).unwrap_or(f64::NAN);
    let pass = ok
        && (0.45..=0.55).contains(&da.upper)
        && (eps - 0.05..=eps + 0.05).contains(&db.upper)
        && dab.upper <= 0.55;
    Ok(Cx1Report {
        p: ctx.p,
        scale: n,
        form,
        translates: r,
        epsilon: eps,
        a: da,
        b: db,
        ab: dab,
        closed_form_checked: checked,
        closed_form_ok: ok,
        pass,
    })
}

fn check_ab_closed_form(ctx: &CxContext, sets: &Cx1Sets, n: u32) -> Result<(u64, bool)> {
    let desc = ctx.group();
    let b = BoxParams::skew(ctx.p, n)?;
    let elems = desc.enumerate_box(&b)?;
    let keep = |s: &SetExpr| -> Result<Vec<GroupElement>> {
        let mut v = Vec::new();
        for g in &elems {
            if s.member(&desc, g)? {
                v.push(g.clone());
            }
        }
        Ok(v)
    };
    let a = keep(&sets.a)?;
    let bb = keep(&sets.b)?;
    crate::budget::check("pairwise products", (a.len() * bb.len()) as u64)?;
    let bad = a
        .par_iter()
        .map(|x| {
            for y in &bb {
                let z = desc.op(x, y)?;
                if !sets.ab.member(&desc, &z)? {
                    return Ok(1u64);
                }
            }
            Ok(0)
        })
        .collect::<Result<Vec<u64>>>()?;
    Ok(((a.len() * bb.len()) as u64, bad.iter().sum::<u64>() == 0))
}

/// One box of an independence series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndependencePoint {
    pub box_params: BoxParams,
    pub rho_c: f64,
    pub rho_d: f64,
    pub rho_cd: f64,
    pub error: f64,
}

/// `|ρ(C∩D) − ρ(C)ρ(D)|` on each box. `C` must be left `N`-invariant and `D`
/// left `L`-invariant; both are spot-checked on `sample`.
pub fn independence_check(
    ctx: &CxContext,
    c: &SetExpr,
    d: &SetExpr,
    boxes: &[BoxParams],
    sample: &[GroupElement],
) -> Result<Vec<IndependencePoint>> {
    let desc = ctx.group();
    c.validate(&desc)?;
    d.validate(&desc)?;
    let zero = PowerFraction::from_int(0, ctx.p);
    let n_moves: Vec<GroupElement> = [1i128, -1, 3]
        .iter()
        .map(|&j| GroupElement::affine(PowerFraction::scaled(j, -2, ctx.p), 0))
        .collect();
    let l_moves: Vec<GroupElement> = [1i64, -1, 2].iter().map(|&l| GroupElement::affine(zero, l)).collect();
    for h in sample {
        for (set, moves, what) in [(c, &n_moves, "N"), (d, &l_moves, "L")] {
            for g in moves {
                if set.member(&desc, &desc.op(g, h)?)? != set.member(&desc, h)? {
                    return Err(Error::input(format!("set is not {what}-invariant at {h:?}")));
                }
            }
        }
    }
    let cd = SetExpr::intersect(vec![c.clone(), d.clone()]);
    boxes
        .iter()
        .map(|b| {
            let size = desc.box_size(b)? as f64;
            let rho_c = count_in_box(ctx, c, b, 0)? as f64 / size;
            let rho_d = count_in_box(ctx, d, b, 0)? as f64 / size;
            let rho_cd = count_in_box(ctx, &cd, b, 0)? as f64 / size;
            Ok(IndependencePoint {
                box_params: b.clone(),
                rho_c,
                rho_d,
                rho_cd,
                error: (rho_cd - rho_c * rho_d).abs(),
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThicknessWitness {
    pub scale: u32,
    /// `g = (0, k)` with `F_n·g⁻¹ ⊆ S`.
    pub shift: i64,
    pub verified: bool,
    /// `d_*` proxy of `S⁻¹S` over the right translates of `F_n`.
    pub sinvs_lower: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LLambdaReport {
    pub p: u64,
    pub form: SolvableBox,
    pub points: Vec<ThicknessWitness>,
    /// `d_*` proxies of `S⁻¹S` never increase with the scale.
    pub lower_nonincreasing: bool,
    pub pass: bool,
}

/// Thickness of `S = LΛ` and non-syndeticity of `S⁻¹S` on boxes `n = 1..=scale`.
pub fn verify_prop_l_lambda(ctx: &CxContext, scale: u32, form: SolvableBox, r: i64) -> Result<LLambdaReport> {
    let s = SetExpr::builtin(Builtin::S);
    let sinvs = SetExpr::builtin(Builtin::SInvS);
    let desc = ctx.group();
    let mut points = Vec::new();
    for n in 1..=scale {
        let b = match form {
            SolvableBox::Skew => BoxParams::skew(ctx.p, n)?,
            SolvableBox::Rect => BoxParams::rect(ctx.p, n)?,
        };
        // (x, k)·(0, −l) ∈ S iff v(x) ≥ k − l; the worst layer decides.
        let n_i = n as i64;
        let shift = (-n_i..=n_i).map(|k| k - form.exponent(k, n_i)).max().unwrap_or(0);
        let size = desc.box_size(&b)?;
        let verified = count_in_box(ctx, &s, &b, -shift)? == size;
        let sinvs_lower = translate_density(ctx, &sinvs, &b, r)?.lower;
        points.push(ThicknessWitness { scale: n, shift, verified, sinvs_lower });
    }
    let lower_nonincreasing = points.windows(2).all(|w| w[1].sinvs_lower <= w[0].sinvs_lower + 1e-12);
    let pass = lower_nonincreasing && points.iter().all(|p| p.verified);
    Ok(LLambdaReport { p: ctx.p, form, points, lower_nonincreasing, pass })
}

/// Closed forms of `S` and `S⁻¹S` against brute force on one box.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallOracleReport {
    pub p: u64,
    pub box_params: BoxParams,
    pub ball_size: u64,
    /// Products `(0, k)·(m, 0)` formed for `S = LΛ`.
    pub s_products: u64,
    pub s_mismatches: u64,
    /// Left factors `s ∈ S` tried for each element of `S⁻¹S`.
    pub sinvs_factors: u64,
    pub sinvs_mismatches: u64,
    pub pass: bool,
}

/// Largest ball handled by [`ball_oracle`].
pub const BALL_ORACLE_LIMIT: u64 = 10_000;

fn pow_i128(p: u64, e: i64) -> Result<i128> {
    let e = u32::try_from(e.max(0)).map_err(|_| Error::resource("exponent too large"))?;
    (p as i128).checked_pow(e).ok_or_else(|| Error::resource("p^e overflows"))
}

/// Compares `member_s` with the products `L·Λ` landing in the box, and
/// `member_sinvs` with an exhaustive search for `s ∈ S`, `s·x ∈ S` over the
/// left factors `(p^a m, a)`, `|a| ≤ n`, `|m| ≤ M`, which contain a witness
/// for every element of the box.
pub fn ball_oracle(ctx: &CxContext, b: &BoxParams) -> Result<BallOracleReport> {
    let desc = ctx.group();
    let BoxParams::Solvable { n, j, form } = *b else {
        return Err(Error::ty("ball oracle needs a Z[1/p] ⋊ Z box"));
    };
    let size = desc.box_size(b)?;
    if size > BALL_ORACLE_LIMIT {
        return Err(Error::resource(format!("ball of {size} elements exceeds {BALL_ORACLE_LIMIT}")));
    }
    let p = ctx.p;
    let ni = n as i64;
    let elems = desc.enumerate_box(b)?;
    let zero = PowerFraction::from_int(0, p);

    let spread = (-ni..=ni).map(|k| form.exponent(k, ni) - k).max().unwrap_or(0);
    let m_s = j as i128 * pow_i128(p, spread)?;
    let mut hit = vec![false; elems.len()];
    let mut s_products = 0u64;
    for k in -ni..=ni {
        let l = GroupElement::affine(zero, k);
        for m in -m_s..=m_s {
            let g = desc.op(&l, &GroupElement::affine(PowerFraction::from_int(m, p), 0))?;
            s_products += 1;
            if let Some(i) = desc.box_index(b, &g) {
                hit[i] = true;
            }
        }
    }
    let s_mismatches = elems
        .iter()
        .zip(&hit)
        .filter(|(g, &h)| {
            let (a, k) = g.as_affine().expect("solvable element");
            member_s(&a, k) != h
        })
        .count() as u64;

    let top = (-ni..=ni).map(|k| form.exponent(k, ni)).max().unwrap_or(0);
    let m_l = j as i128 * pow_i128(p, top)?;
    let mut left = Vec::new();
    for a in -ni..=ni {
        for m in -m_l..=m_l {
            let x = PowerFraction::from_int(m, p)
                .shift(a)
                .ok_or_else(|| Error::resource("left factor overflows"))?;
            left.push(GroupElement::affine(x, a));
        }
    }
    let in_s = |g: &GroupElement| {
        let (a, k) = g.as_affine().expect("solvable element");
        a.coefficient_at(k, p).is_some()
    };
    let sinvs_mismatches = elems
        .par_iter()
        .map(|x| -> Result<u64> {
            let mut found = false;
            for s in &left {
                if in_s(&desc.op(s, x)?) {
                    found = true;
                    break;
                }
            }
            let (a, k) = x.as_affine().expect("solvable element");
            Ok((member_sinvs(&a, k) != found) as u64)
        })
        .sum::<Result<u64>>()?;
    Ok(BallOracleReport {
        p,
        box_params: b.clone(),
        ball_size: size,
        s_products,
        s_mismatches,
        sinvs_factors: left.len() as u64,
        sinvs_mismatches,
        pass: s_mismatches == 0 && sinvs_mismatches == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    fn pf(n: i128, d: i128) -> PowerFraction {
        PowerFraction::from_ratio(&Ratio::new(n, d), 2).unwrap()
    }

    fn el(n: i128, d: i128, k: i64) -> GroupElement {
        GroupElement::affine(pf(n, d), k)
    }

    #[test]
    fn conjugator_examples() {
        let ctx = CxContext::new(2).unwrap();
        let g = contracting_conjugator(&ctx, &[el(1, 2, 0), el(3, 4, 0)]).unwrap();
        assert_eq!(g, el(0, 1, 2));
        assert_eq!(contracting_conjugator(&ctx, &[el(5, 8, 0)]).unwrap(), el(0, 1, 3));
        assert_eq!(contracting_conjugator(&ctx, &[el(3, 1, 0), el(-4, 1, 0)]).unwrap(), el(0, 1, 0));
        assert!(contracting_conjugator(&ctx, &[el(1, 1, 1)]).is_err());
    }

    #[test]
    fn closed_form_examples() {
        assert!(member_s(&pf(0, 1), 17));
        assert!(member_s(&pf(1, 2), -1));
        assert!(!member_s(&pf(1, 2), 0));
        assert!(!member_sinvs(&pf(1, 2), 1));
        assert!(member_t(&pf(1, 2), 1));
        assert!(member_sinvs(&pf(3, 1), 5));
        assert!(member_sinvs(&pf(0, 1), 0));
        assert!(!builtin_member(2, &Builtin::Cx1A, &pf(2, 1), 2));
        assert!(builtin_member(2, &Builtin::Cx1A, &pf(4, 1), 2));
    }

    #[test]
    fn identity_in_b() {
        let b = Builtin::Cx1B { alpha: QuadIrr::golden(), interval: TorusInterval::new(Q::new(0, 1), Q::new(2, 5)).unwrap() };
        assert!(builtin_member(2, &b, &pf(0, 1), 0));
    }

    #[test]
    fn layered_count_matches_enumeration() {
        let ctx = CxContext::new(2).unwrap();
        let desc = ctx.group();
        let interval = TorusInterval::new(Q::new(0, 1), Q::new(2, 5)).unwrap();
        let exprs = [
            SetExpr::builtin(Builtin::S),
            SetExpr::builtin(Builtin::SInvS),
            SetExpr::builtin(Builtin::Cx1AB),
            SetExpr::builtin(Builtin::Cx1B { alpha: QuadIrr::golden(), interval }),
            SetExpr::intersect(vec![SetExpr::builtin(Builtin::EvenLayers), SetExpr::builtin(Builtin::S)]),
        ];
        for form in [SolvableBox::Rect, SolvableBox::Skew] {
            let b = BoxParams::Solvable { n: 3, j: 37, form };
            let elems = desc.enumerate_box(&b).unwrap();
            for e in &exprs {
                for l in [-5, 0, 2, 7] {
                    let shift = el(0, 1, l);
                    let brute = elems
                        .iter()
                        .filter(|g| e.member(&desc, &desc.op(g, &shift).unwrap()).unwrap())
                        .count() as u64;
                    assert_eq!(layered_count(&ctx, e, 3, 37, form, l).unwrap(), brute);
                }
            }
        }
    }

    #[test]
    fn witnesses_factor_ab() {
        let ctx = CxContext::new(2).unwrap();
        let desc = ctx.group();
        let alpha = QuadIrr::golden();
        let interval = TorusInterval::new(Q::new(0, 1), Q::new(2, 5)).unwrap();
        let sets = build_cx1(&ctx, Q::new(1, 5), alpha, interval.clone()).unwrap();
        for g in desc.enumerate_box(&BoxParams::skew(2, 2).unwrap()).unwrap() {
            let in_ab = sets.ab.member(&desc, &g).unwrap();
            let w = cx1ab_witness(&ctx, &alpha, &interval, &g, 200).unwrap();
            assert_eq!(in_ab, w.is_some(), "{g:?}");
            if let Some((a, b)) = w {
                assert!(sets.a.member(&desc, &a).unwrap());
                assert!(sets.b.member(&desc, &b).unwrap());
                assert_eq!(desc.op(&a, &b).unwrap(), g);
            }
        }
    }

    #[test]
    fn independence_trivial_cases() {
        let ctx = CxContext::new(2).unwrap();
        let even = SetExpr::builtin(Builtin::EvenLayers);
        let whole = SetExpr::union(vec![even.clone(), even.clone().complement()]);
        let boxes = [BoxParams::skew(2, 3).unwrap(), BoxParams::rect(2, 3).unwrap()];
        let s = SetExpr::builtin(Builtin::S);
        for p in independence_check(&ctx, &whole, &s, &boxes, &[]).unwrap() {
            assert_eq!(p.error, 0.0);
        }
        for p in independence_check(&ctx, &even, &whole, &boxes, &[]).unwrap() {
            assert_eq!(p.error, 0.0);
        }
    }

    #[test]
    fn non_invariant_sets_are_rejected() {
        let ctx = CxContext::new(2).unwrap();
        let s = SetExpr::builtin(Builtin::S);
        let even = SetExpr::builtin(Builtin::EvenLayers);
        let sample = [el(1, 1, 0), el(1, 4, 1)];
        assert!(independence_check(&ctx, &s, &even, &[], &sample).is_err());
        assert!(independence_check(&ctx, &even, &s, &[], &sample).is_ok());
    }

    #[test]
    fn ball_oracle_small_boxes() {
        let ctx = CxContext::new(2).unwrap();
        for n in 1..=3 {
            for b in [BoxParams::skew(2, n).unwrap(), BoxParams::rect(2, n).unwrap()] {
                let r = ball_oracle(&ctx, &b).unwrap();
                assert!(r.pass, "{r:?}");
            }
        }
        let r3 = ball_oracle(&CxContext::new(3).unwrap(), &BoxParams::skew(3, 2).unwrap()).unwrap();
        assert!(r3.pass, "{r3:?}");
        assert!(ball_oracle(&ctx, &BoxParams::skew(2, 5).unwrap()).is_err());
    }

    #[test]
    fn l_lambda_small() {
        let ctx = CxContext::new(2).unwrap();
        let r = verify_prop_l_lambda(&ctx, 4, SolvableBox::Skew, 16).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.points[1].shift, 2);
    }
}
