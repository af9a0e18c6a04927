//! Finite-scale density estimators along Følner families, Banach densities
//! from extremal windows, thickness and syndeticity at scale, and Følner
//! defects.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cxmachine::{self, CxContext};
use crate::error::{Error, Result};
use crate::groups::{BoxParams, GroupDescriptor, GroupElement, SolvableBox};
use crate::ratio::Q;
use crate::setspec::{self, SetExpr, WindowSet};

/// Fraction of the series used for tail statistics.
pub const DEFAULT_TAIL: f64 = 0.2;

/// Box shapes `n ↦ F_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilyKind {
    /// `[1, n]`.
    Initial,
    /// `[−n, n]`, or `[−n, n]^d` in `Z^d`, or `[−n, n] × {±1}` in `D∞`.
    Symmetric,
    /// `[a·n, (a + b)·n]` with `b ≥ 1`.
    Shifted { a: i64, b: i64 },
    /// `Z[1/p] ⋊ Z` boxes with `J = p^{2n}`.
    Solvable {
        #[serde(default = "skew")]
        form: SolvableBox,
    },
}

fn skew() -> SolvableBox {
    SolvableBox::Skew
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FolnerFamily {
    pub group: GroupDescriptor,
    pub kind: FamilyKind,
}

impl FolnerFamily {
    pub fn new(group: GroupDescriptor, kind: FamilyKind) -> Result<Self> {
        let ok = match (&group, &kind) {
            (GroupDescriptor::IntLine, FamilyKind::Initial | FamilyKind::Symmetric) => true,
            (GroupDescriptor::IntLine, FamilyKind::Shifted { b, .. }) => *b >= 1,
            (GroupDescriptor::IntLattice(_) | GroupDescriptor::DihedralInf, FamilyKind::Symmetric) => true,
            (GroupDescriptor::SolvablePk(_), FamilyKind::Solvable { .. }) => true,
            _ => false,
        };
        if !ok {
            return Err(Error::ty(format!("family {kind:?} does not fit group {}", group.name())));
        }
        Ok(FolnerFamily { group, kind })
    }

    /// The default family of a group.
    pub fn default_for(group: GroupDescriptor) -> Result<Self> {
        let kind = match group {
            GroupDescriptor::SolvablePk(_) => FamilyKind::Solvable { form: SolvableBox::Skew },
            _ => FamilyKind::Symmetric,
        };
        FolnerFamily::new(group, kind)
    }

    pub fn box_at(&self, n: u64) -> Result<BoxParams> {
        let ni = i64::try_from(n).map_err(|_| Error::resource("scale too large"))?;
        Ok(match (&self.group, &self.kind) {
            (GroupDescriptor::IntLine, FamilyKind::Initial) => BoxParams::Interval { lo: 1, hi: ni },
            (GroupDescriptor::IntLine, FamilyKind::Symmetric) => BoxParams::Interval { lo: -ni, hi: ni },
            (GroupDescriptor::IntLine, FamilyKind::Shifted { a, b }) => {
                BoxParams::Interval { lo: a * ni, hi: (a + b) * ni }
            }
            (GroupDescriptor::IntLattice(d), FamilyKind::Symmetric) => {
                BoxParams::Lattice { ranges: vec![[-ni, ni]; *d] }
            }
            (GroupDescriptor::DihedralInf, FamilyKind::Symmetric) => BoxParams::Dihedral { lo: -ni, hi: ni },
            (GroupDescriptor::SolvablePk(p), FamilyKind::Solvable { form }) => {
                let n = u32::try_from(n).map_err(|_| Error::resource("scale too large"))?;
                match form {
                    SolvableBox::Skew => BoxParams::skew(*p, n)?,
                    SolvableBox::Rect => BoxParams::rect(*p, n)?,
                }
            }
            _ => unreachable!("checked in new"),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityMode {
    UpperAlong,
    LowerAlong,
    BanachUpper,
    BanachLower,
}

/// One point of a convergence series. For Banach series `n` is the window
/// length `L`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub n: u64,
    pub size: u64,
    pub count: u64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityEstimate {
    pub mode: DensityMode,
    pub value: f64,
    pub n_max: u64,
    pub series: Vec<SeriesPoint>,
    /// `false` when some window came from an uncertified product-set
    /// approximation.
    pub exact: bool,
}

impl DensityEstimate {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,size,count,ratio\n");
        for p in &self.series {
            let _ = writeln!(s, "{},{},{},{}", p.n, p.size, p.count, p.ratio);
        }
        s
    }
}

/// Upper and lower densities along a family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlongEstimate {
    pub upper: DensityEstimate,
    pub lower: DensityEstimate,
}

/// Scales `⌈n_max·i/points⌉`, `i = 1..=points`, deduplicated.
pub fn scale_grid(n_max: u64, points: u64) -> Vec<u64> {
    let points = points.clamp(1, n_max.max(1));
    let mut v: Vec<u64> = (1..=points).map(|i| (n_max * i).div_ceil(points)).collect();
    v.dedup();
    v
}

fn tail(series: &[SeriesPoint], frac: f64) -> &[SeriesPoint] {
    let k = ((series.len() as f64 * frac).ceil() as usize).clamp(1, series.len());
    &series[series.len() - k..]
}

/// `|A ∩ F_n| / |F_n|` along `n ∈ scale_grid(n_max, points)` with tail
/// max/min as upper/lower estimates.
pub fn density_along(
    expr: &SetExpr,
    family: &FolnerFamily,
    n_max: u64,
    points: u64,
    tail_frac: f64,
) -> Result<AlongEstimate> {
    if n_max == 0 {
        return Err(Error::pre("n_max must be positive"));
    }
    expr.validate(&family.group)?;
    let grid = scale_grid(n_max, points);
    let (series, exact) = match &family.group {
        GroupDescriptor::IntLine => intline_series(expr, family, &grid)?,
        GroupDescriptor::SolvablePk(p) => {
            let ctx = CxContext::new(*p)?;
            let mut s = Vec::new();
            for &n in &grid {
                let b = family.box_at(n)?;
                let size = family.group.box_size(&b)?;
                let count = cxmachine::count_in_box(&ctx, expr, &b, 0)?;
                s.push(SeriesPoint { n, size, count, ratio: count as f64 / size as f64 });
            }
            (s, true)
        }
        _ => {
            let mut s = Vec::new();
            let mut exact = true;
            for &n in &grid {
                let w = setspec::materialize(&family.group, expr, &family.box_at(n)?)?;
                exact &= w.exact;
                let (size, count) = (w.len() as u64, w.count() as u64);
                s.push(SeriesPoint { n, size, count, ratio: count as f64 / size as f64 });
            }
            (s, exact)
        }
    };
    Ok(summarize(series, n_max, tail_frac, exact))
}

fn summarize(series: Vec<SeriesPoint>, n_max: u64, tail_frac: f64, exact: bool) -> AlongEstimate {
    let t = tail(&series, tail_frac);
    let hi = t.iter().map(|p| p.ratio).fold(f64::NEG_INFINITY, f64::max);
    let lo = t.iter().map(|p| p.ratio).fold(f64::INFINITY, f64::min);
    let mk = |mode, value| DensityEstimate { mode, value, n_max, series: series.clone(), exact };
    AlongEstimate { upper: mk(DensityMode::UpperAlong, hi), lower: mk(DensityMode::LowerAlong, lo) }
}

/// [`density_along`] for an integer family, reading counts from an already
/// materialized window that covers every box.
pub fn density_along_window(
    w: &WindowSet,
    family: &FolnerFamily,
    n_max: u64,
    points: u64,
    tail_frac: f64,
) -> Result<AlongEstimate> {
    let (BoxParams::Interval { lo, hi }, GroupDescriptor::IntLine) = (&w.window, &family.group) else {
        return Err(Error::ty("window densities need an integer window and family"));
    };
    if n_max == 0 {
        return Err(Error::pre("n_max must be positive"));
    }
    let grid = scale_grid(n_max, points);
    let boxes = interval_boxes(family, &grid)?;
    if boxes.iter().any(|&(a, b)| a < *lo || b > *hi) {
        return Err(Error::pre(format!("window [{lo}, {hi}] does not cover the family up to n = {n_max}")));
    }
    let pre = prefix_of(&w.mask);
    Ok(summarize(series_from(&pre, *lo, &grid, &boxes), n_max, tail_frac, w.exact))
}

fn interval_boxes(family: &FolnerFamily, grid: &[u64]) -> Result<Vec<(i64, i64)>> {
    grid.iter()
        .map(|&n| match family.box_at(n)? {
            BoxParams::Interval { lo, hi } => Ok((lo, hi)),
            _ => unreachable!("integer families use intervals"),
        })
        .collect()
}

fn series_from(pre: &[u64], lo: i64, grid: &[u64], boxes: &[(i64, i64)]) -> Vec<SeriesPoint> {
    grid.iter()
        .zip(boxes)
        .map(|(&n, &(a, b))| {
            let count = pre[(b - lo + 1) as usize] - pre[(a - lo) as usize];
            let size = (b - a + 1) as u64;
            SeriesPoint { n, size, count, ratio: count as f64 / size as f64 }
        })
        .collect()
}

fn prefix_of(mask: &[bool]) -> Vec<u64> {
    let mut pre = Vec::with_capacity(mask.len() + 1);
    pre.push(0u64);
    let mut acc = 0;
    for &b in mask {
        acc += b as u64;
        pre.push(acc);
    }
    pre
}

/// Materializes the hull of all boxes once and reads counts from prefix sums.
fn intline_series(expr: &SetExpr, family: &FolnerFamily, grid: &[u64]) -> Result<(Vec<SeriesPoint>, bool)> {
    let boxes = interval_boxes(family, grid)?;
    let lo = boxes.iter().map(|b| b.0).min().expect("nonempty grid");
    let hi = boxes.iter().map(|b| b.1).max().expect("nonempty grid");
    let w = setspec::materialize(&GroupDescriptor::IntLine, expr, &BoxParams::Interval { lo, hi })?;
    Ok((series_from(&prefix_of(&w.mask), lo, grid, &boxes), w.exact))
}

/// `pre[i] = |A ∩ [lo, lo + i)|`.
fn prefix(expr: &SetExpr, lo: i64, hi: i64) -> Result<(Vec<u64>, bool)> {
    let w = setspec::materialize(&GroupDescriptor::IntLine, expr, &BoxParams::Interval { lo, hi })?;
    Ok((prefix_of(&w.mask), w.exact))
}

/// `max_x |A ∩ [x, x + L)|` (or min) for `x ∈ [lo, hi]`, as an exact count.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowExtremum {
    pub len: u64,
    pub count: u64,
    pub at: i64,
}

fn extremal_windows(pre: &[u64], base: i64, lo: i64, hi: i64, len: u64, upper: bool) -> WindowExtremum {
    let l = len as usize;
    let (count, at) = (lo..=hi)
        .into_par_iter()
        .map(|x| {
            let i = (x - base) as usize;
            (pre[i + l] - pre[i], x)
        })
        .reduce_with(|a, b| {
            let better = if upper { b.0 > a.0 } else { b.0 < a.0 };
            if better || (b.0 == a.0 && b.1 < a.1) {
                b
            } else {
                a
            }
        })
        .expect("nonempty search range");
    WindowExtremum { len, count, at }
}

/// Banach density on `Z` from windows `[x, x + L)`, `x ∈ search`, with a
/// series over `L, L/2, L/4, …` reported in increasing order.
pub fn banach_density(
    group: &GroupDescriptor,
    expr: &SetExpr,
    upper: bool,
    len: u64,
    search: (i64, i64),
) -> Result<DensityEstimate> {
    if len == 0 {
        return Err(Error::pre("window length must be positive"));
    }
    if search.1 < search.0 {
        return Err(Error::pre("empty search range"));
    }
    match group {
        GroupDescriptor::IntLine => {}
        GroupDescriptor::IntLattice(_) => return lattice_banach(group, expr, upper, len, search),
        GroupDescriptor::SolvablePk(_) => {
            return Err(Error::unsupported(
                "Banach densities on Z[1/p] ⋊ Z are estimated from translated boxes (cxmachine::translate_density)",
            ))
        }
        other => return Err(Error::unsupported(format!("Banach density on {}", other.name()))),
    }
    expr.validate(group)?;
    let l = i64::try_from(len).map_err(|_| Error::resource("window too long"))?;
    let (pre, exact) = prefix(expr, search.0, search.1 + l - 1)?;
    let mut lens = vec![len];
    while *lens.last().expect("nonempty") > 1 {
        let next = lens.last().expect("nonempty") / 2;
        lens.push(next);
    }
    lens.reverse();
    let series: Vec<SeriesPoint> = lens
        .iter()
        .map(|&m| {
            let e = extremal_windows(&pre, search.0, search.0, search.1, m, upper);
            SeriesPoint { n: m, size: m, count: e.count, ratio: e.count as f64 / m as f64 }
        })
        .collect();
    let value = series.last().expect("nonempty").ratio;
    Ok(DensityEstimate {
        mode: if upper { DensityMode::BanachUpper } else { DensityMode::BanachLower },
        value,
        n_max: len,
        series,
        exact,
    })
}

/// Cubes `x + [0, L)^d` with `x ∈ search^d`, via a summed-volume table.
fn lattice_banach(
    group: &GroupDescriptor,
    expr: &SetExpr,
    upper: bool,
    len: u64,
    search: (i64, i64),
) -> Result<DensityEstimate> {
    let GroupDescriptor::IntLattice(d) = group else { unreachable!() };
    let d = *d;
    expr.validate(group)?;
    let l = len as i64;
    let side = (search.1 - search.0 + l) as usize;
    let hull = BoxParams::Lattice { ranges: vec![[search.0, search.1 + l - 1]; d] };
    let w = setspec::materialize(group, expr, &hull)?;
    // Summed-volume table with a zero border; strides over side + 1.
    let s1 = side + 1;
    let total = s1.pow(d as u32);
    crate::budget::check("summed-volume table", total as u64)?;
    let mut sv = vec![0u64; total];
    let coords = |mut idx: usize, s: usize| -> Vec<usize> {
        let mut c = vec![0; d];
        for i in (0..d).rev() {
            c[i] = idx % s;
            idx /= s;
        }
        c
    };
    let index = |c: &[usize]| c.iter().fold(0usize, |acc, &x| acc * s1 + x);
    for (i, &b) in w.mask.iter().enumerate() {
        let c: Vec<usize> = coords(i, side).into_iter().map(|x| x + 1).collect();
        sv[index(&c)] = b as u64;
    }
    for axis in 0..d {
        let stride = s1.pow((d - 1 - axis) as u32);
        for i in 0..total {
            if !(i / stride).is_multiple_of(s1) {
                sv[i] += sv[i - stride];
            }
        }
    }
    let cube = |x: &[usize]| -> u64 {
        let mut sum: i128 = 0;
        for mask in 0..(1usize << d) {
            let mut c = Vec::with_capacity(d);
            for (a, &xa) in x.iter().enumerate() {
                c.push(if mask >> a & 1 == 1 { xa } else { xa + len as usize });
            }
            let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
            sum += sign * sv[index(&c)] as i128;
        }
        sum as u64
    };
    let starts = (search.1 - search.0 + 1) as usize;
    let best = (0..starts.pow(d as u32))
        .map(|i| cube(&coords(i, starts)))
        .reduce(|a, b| if upper { a.max(b) } else { a.min(b) })
        .expect("nonempty search");
    let size = len.pow(d as u32);
    let value = best as f64 / size as f64;
    Ok(DensityEstimate {
        mode: if upper { DensityMode::BanachUpper } else { DensityMode::BanachLower },
        value,
        n_max: len,
        series: vec![SeriesPoint { n: len, size, count: best, ratio: value }],
        exact: w.exact,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThickVerdict {
    pub thick: bool,
    pub len: u64,
    /// `x` with `[x, x + L) ⊆ A`.
    pub witness: Option<i64>,
    pub exact: bool,
}

/// Looks for `[x, x + L) ⊆ A` with `x ∈ search`.
pub fn is_thick_at_scale(expr: &SetExpr, len: u64, search: (i64, i64)) -> Result<ThickVerdict> {
    if len == 0 {
        return Err(Error::pre("window length must be positive"));
    }
    let l = len as i64;
    let w = setspec::materialize(
        &GroupDescriptor::IntLine,
        expr,
        &BoxParams::Interval { lo: search.0, hi: search.1 + l - 1 },
    )?;
    let mut run = 0u64;
    let mut witness = None;
    for (i, &b) in w.mask.iter().enumerate() {
        run = if b { run + 1 } else { 0 };
        if run >= len {
            witness = Some(search.0 + i as i64 + 1 - l);
            break;
        }
    }
    Ok(ThickVerdict { thick: witness.is_some(), len, witness, exact: w.exact })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyndeticVerdict {
    pub syndetic: bool,
    pub gap_bound: u64,
    /// Largest distance between consecutive members, counting the range
    /// ends `lo − 1` and `hi + 1` as members.
    pub max_gap: u64,
    pub exact: bool,
}

pub fn is_syndetic_at_scale(expr: &SetExpr, gap_bound: u64, range: (i64, i64)) -> Result<SyndeticVerdict> {
    let w = setspec::materialize(&GroupDescriptor::IntLine, expr, &BoxParams::Interval { lo: range.0, hi: range.1 })?;
    let mut last = -1i64;
    let mut max_gap = 0u64;
    for (i, &b) in w.mask.iter().enumerate() {
        if b {
            max_gap = max_gap.max((i as i64 - last) as u64);
            last = i as i64;
        }
    }
    max_gap = max_gap.max((w.mask.len() as i64 - last) as u64);
    Ok(SyndeticVerdict { syndetic: max_gap <= gap_bound, gap_bound, max_gap, exact: w.exact })
}

/// Exact `|F_n Δ gF_n| / |F_n|` for left translation by `g`.
pub fn folner_defect(family: &FolnerFamily, n: u64, g: &GroupElement) -> Result<Q> {
    let desc = &family.group;
    desc.check(g)?;
    let b = family.box_at(n)?;
    let size = desc.box_size(&b)?;
    if size == 0 {
        return Err(Error::pre("empty box"));
    }
    let outside: u64 = match (&b, g) {
        (BoxParams::Interval { .. }, GroupElement::Int(t)) => t.unsigned_abs().min(size),
        _ => {
            let elems = desc.enumerate_box(&b)?;
            elems
                .par_iter()
                .map(|h| Ok(!desc.box_contains(&b, &desc.op(g, h)?) as u64))
                .collect::<Result<Vec<u64>>>()?
                .into_iter()
                .sum()
        }
    };
    let size = i64::try_from(size).map_err(|_| Error::resource("box too large"))?;
    Ok(Q::new(2 * outside as i64, size))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::PowerFraction;
    use crate::sturmian::{QuadIrr, SturmianSpec, TorusInterval};

    fn c(len: (i64, i64)) -> SetExpr {
        let i = TorusInterval::new(Q::new(0, 1), Q::new(len.0, len.1)).unwrap();
        SetExpr::sturmian(SturmianSpec::new(QuadIrr::golden(), i).unwrap())
    }

    fn sym() -> FolnerFamily {
        FolnerFamily::new(GroupDescriptor::IntLine, FamilyKind::Symmetric).unwrap()
    }

    #[test]
    fn evens_along_symmetric() {
        let e = density_along(&SetExpr::periodic(2, vec![0]), &sym(), 1000, 50, DEFAULT_TAIL).unwrap();
        assert!((e.upper.value - 0.5).abs() <= 1e-3);
        assert!((e.lower.value - 0.5).abs() <= 1e-3);
        assert!(e.upper.to_csv().starts_with("n,size,count,ratio\n"));
    }

    #[test]
    fn sturmian_union_half_line() {
        let b = SetExpr::union(vec![c((3, 10)), SetExpr::naturals()]);
        let e = density_along(&b, &sym(), 100_000, 50, DEFAULT_TAIL).unwrap();
        assert!((e.lower.value - 0.65).abs() <= 0.01, "{}", e.lower.value);
        let a = SetExpr::intersect(vec![c((3, 10)), SetExpr::naturals()]);
        let e = density_along(&a, &sym(), 100_000, 50, DEFAULT_TAIL).unwrap();
        assert!((e.lower.value - 0.15).abs() <= 0.01);
    }

    #[test]
    fn banach_examples() {
        let z = GroupDescriptor::IntLine;
        assert_eq!(banach_density(&z, &SetExpr::naturals(), true, 100, (-1000, 1000)).unwrap().value, 1.0);
        assert_eq!(banach_density(&z, &SetExpr::periodic(2, vec![0]), false, 100, (-1000, 1000)).unwrap().value, 0.5);
        let v = banach_density(&z, &c((3, 10)), true, 10_000, (0, 100_000)).unwrap().value;
        assert!((v - 0.3).abs() <= 5e-3);
        assert!(banach_density(&GroupDescriptor::SolvablePk(2), &SetExpr::builtin(crate::setspec::Builtin::S), true, 4, (0, 1)).is_err());
    }

    #[test]
    fn lattice_banach_counts_cubes() {
        let g = GroupDescriptor::IntLattice(2);
        let pts = SetExpr::explicit(
            [[0, 0], [1, 0], [0, 1], [1, 1], [5, 5]].iter().map(|v| GroupElement::IntVec(v.to_vec())).collect(),
        );
        assert_eq!(banach_density(&g, &pts, true, 2, (-3, 6)).unwrap().value, 1.0);
        assert_eq!(banach_density(&g, &pts, false, 2, (-3, 6)).unwrap().value, 0.0);
        assert_eq!(banach_density(&g, &pts, true, 3, (-3, 6)).unwrap().value, 4.0 / 9.0);
    }

    #[test]
    fn thick_and_syndetic_examples() {
        for l in [1, 5, 50] {
            assert!(is_thick_at_scale(&SetExpr::naturals(), l, (-100, 100)).unwrap().thick);
        }
        let v = is_thick_at_scale(&c((3, 10)), 4, (0, 1_000_000)).unwrap();
        assert!(!v.thick);
        let blocks = SetExpr::union(
            (1..=6).map(|k| SetExpr::ints((1i64 << k)..=((1i64 << k) + k))).collect(),
        );
        // [2^k, 2^k + k] has k + 1 points, so the first run of length L starts at 2^(L-1).
        assert_eq!(is_thick_at_scale(&blocks, 6, (0, 100)).unwrap().witness, Some(32));
        assert_eq!(is_thick_at_scale(&blocks, 6, (33, 100)).unwrap().witness, Some(64));
        let s = is_syndetic_at_scale(&SetExpr::periodic(2, vec![0]), 2, (0, 100)).unwrap();
        assert!(s.syndetic);
        assert_eq!(s.max_gap, 2);
        let a = SetExpr::intersect(vec![c((3, 10)), SetExpr::naturals()]);
        assert!(!is_syndetic_at_scale(&a, 100, (-1_000_000, 1_000_000)).unwrap().syndetic);
        // Return-time gaps of golden rotation into [0, 3/10] are 2, 3 and 5.
        let s = is_syndetic_at_scale(&c((3, 10)), 5, (-1_000_000, 1_000_000)).unwrap();
        assert!(s.syndetic, "{s:?}");
        assert_eq!(s.max_gap, 5);
    }

    #[test]
    fn folner_defect_examples() {
        let f = sym();
        assert_eq!(folner_defect(&f, 10, &GroupElement::Int(1)).unwrap(), Q::new(2, 21));
        assert_eq!(folner_defect(&f, 10, &GroupElement::Int(0)).unwrap(), Q::new(0, 1));
        let s = FolnerFamily::default_for(GroupDescriptor::SolvablePk(2)).unwrap();
        let gens = [
            GroupElement::affine(PowerFraction::from_int(1, 2), 0),
            GroupElement::affine(PowerFraction::from_int(0, 2), 1),
        ];
        for g in &gens {
            let d: Vec<Q> = (1..=4).map(|n| folner_defect(&s, n, g).unwrap()).collect();
            assert!(d.windows(2).all(|w| w[1] < w[0]), "{d:?}");
        }
        let id = GroupElement::affine(PowerFraction::from_int(0, 2), 0);
        assert_eq!(folner_defect(&s, 2, &id).unwrap(), Q::new(0, 1));
    }

    #[test]
    fn solvable_density_along() {
        let s = FolnerFamily::default_for(GroupDescriptor::SolvablePk(2)).unwrap();
        let even = SetExpr::builtin(crate::setspec::Builtin::EvenLayers);
        let e = density_along(&even, &s, 6, 6, DEFAULT_TAIL).unwrap();
        assert!((e.upper.value - 7.0 / 13.0).abs() < 1e-12);
    }

    #[test]
    fn families_reject_mismatched_groups() {
        assert!(FolnerFamily::new(GroupDescriptor::Cyclic(5), FamilyKind::Symmetric).is_err());
        assert!(FolnerFamily::new(GroupDescriptor::IntLine, FamilyKind::Shifted { a: 1, b: 0 }).is_err());
    }
}
