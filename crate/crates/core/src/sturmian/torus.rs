//! Intervals and arcs on the circle `T = R/Z`.
//!
//! [`TorusInterval`] is the user-facing closed interval with rational
//! endpoints. [`TorusArc`] allows quadratic-irrational endpoints and open ends;
//! it appears once intervals are translated by multiples of an irrational
//! rotation, reflected, or complemented.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::quadirr::QuadIrr;
use crate::error::{Error, Result};
use crate::ratio::{self, Q};

/// Closed interval `[lo, lo + len]` read modulo 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "IntervalRepr", into = "IntervalRepr")]
pub struct TorusInterval {
    lo: Q,
    len: Q,
}

#[derive(Serialize, Deserialize)]
struct IntervalRepr {
    lo: String,
    hi: String,
}

impl TryFrom<IntervalRepr> for TorusInterval {
    type Error = Error;

    fn try_from(v: IntervalRepr) -> Result<Self> {
        TorusInterval::new(ratio::parse_ratio(&v.lo)?, ratio::parse_ratio(&v.hi)?)
    }
}

impl From<TorusInterval> for IntervalRepr {
    fn from(v: TorusInterval) -> Self {
        IntervalRepr { lo: ratio::format_ratio(&v.lo), hi: ratio::format_ratio(&v.hi_raw()) }
    }
}

impl TorusInterval {
    /// `[lo, hi]` with `hi < lo` meaning the interval wraps through 0.
    /// `[0, 1]` is the whole circle.
    pub fn new(lo: Q, hi: Q) -> Result<Self> {
        let len = if hi >= lo { hi - lo } else { hi - lo + Q::one() };
        if len > Q::one() || len.is_negative() {
            return Err(Error::input(format!(
                "interval [{}, {}] is longer than the circle",
                ratio::format_ratio(&lo),
                ratio::format_ratio(&hi)
            )));
        }
        Ok(TorusInterval { lo: ratio::frac(&lo), len })
    }

    pub fn from_len(lo: Q, len: Q) -> Result<Self> {
        if len.is_negative() || len > Q::one() {
            return Err(Error::input("interval length must lie in [0, 1]"));
        }
        Ok(TorusInterval { lo: ratio::frac(&lo), len })
    }

    /// Closed interval of length `len` centred at 0.
    pub fn symmetric(len: Q) -> Result<Self> {
        Self::from_len(-len / 2, len)
    }

    pub fn full() -> Self {
        TorusInterval { lo: Q::zero(), len: Q::one() }
    }

    pub fn lo(&self) -> Q {
        self.lo
    }

    /// Upper end, possibly ≥ 1 when the interval wraps.
    pub fn hi_raw(&self) -> Q {
        self.lo + self.len
    }

    pub fn measure(&self) -> Q {
        self.len
    }

    pub fn is_full(&self) -> bool {
        self.len == Q::one()
    }

    pub fn wraps(&self) -> bool {
        self.lo + self.len > Q::one()
    }

    pub fn contains_ratio(&self, x: &Q) -> bool {
        let t = ratio::frac(&(x - self.lo));
        t <= self.len
    }

    pub fn to_arc(&self, d: i128) -> TorusArc {
        TorusArc {
            start: QuadIrr::from_ratio(&self.lo, d),
            len: QuadIrr::from_ratio(&self.len, d),
            closed_start: true,
            closed_end: true,
        }
    }
}

/// Sumset of two closed circle intervals: an interval of length
/// `min(1, |I| + |J|)`.
pub fn interval_sum(i: &TorusInterval, j: &TorusInterval) -> TorusInterval {
    let len = (i.len + j.len).min(Q::one());
    TorusInterval { lo: ratio::frac(&(i.lo + j.lo)), len }
}

/// `I + n·alpha`, with quadratic-irrational endpoints.
pub fn interval_translate(i: &TorusInterval, alpha: &QuadIrr, n: i64) -> TorusArc {
    i.to_arc(alpha.radicand()).translate(&alpha.mul_int(n as i128))
}

/// Exact disjointness of two closed circle intervals.
pub fn interval_disjoint(i: &TorusInterval, j: &TorusInterval) -> bool {
    let d = 5;
    arcs_disjoint(&i.to_arc(d), &j.to_arc(d))
}

pub fn arcs_disjoint(a: &TorusArc, b: &TorusArc) -> bool {
    let d = a.start.radicand();
    let r = arc_region(&ExactArith { d }, &[a.to_num(), b.to_num()])
        .expect("exact arithmetic always decides");
    !r.has_interior && r.points.is_empty()
}

/// Arc `{start + t : 0 ≤ t ≤ len}` modulo 1 with optionally open ends.
/// `len` lies in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusArc {
    pub start: QuadIrr,
    pub len: QuadIrr,
    pub closed_start: bool,
    pub closed_end: bool,
}

impl TorusArc {
    pub fn translate(&self, t: &QuadIrr) -> TorusArc {
        TorusArc { start: self.start.add(t).frac(), ..self.clone() }
    }

    /// Image under `y ↦ −y`.
    pub fn reflect(&self) -> TorusArc {
        TorusArc {
            start: self.start.add(&self.len).neg().frac(),
            len: self.len,
            closed_start: self.closed_end,
            closed_end: self.closed_start,
        }
    }

    pub fn complement(&self) -> TorusArc {
        let one = QuadIrr::from_int(1, self.len.radicand());
        TorusArc {
            start: self.start.add(&self.len).frac(),
            len: one.sub(&self.len),
            closed_start: !self.closed_end,
            closed_end: !self.closed_start,
        }
    }

    pub fn end(&self) -> QuadIrr {
        self.start.add(&self.len)
    }

    pub fn measure(&self) -> QuadIrr {
        self.len
    }

    pub fn contains(&self, y: &QuadIrr) -> bool {
        let t = y.sub(&self.start).frac();
        if self.len.is_zero() {
            return t.is_zero() && self.closed_start && self.closed_end;
        }
        if t.is_zero() {
            // Full-length arcs meet their own start from both sides.
            let full = self.len == QuadIrr::from_int(1, self.len.radicand());
            return self.closed_start || (full && self.closed_end);
        }
        match t.cmp(&self.len) {
            Ordering::Less => true,
            Ordering::Equal => self.closed_end,
            Ordering::Greater => false,
        }
    }

    pub(crate) fn to_num(&self) -> ArcN<QuadIrr> {
        ArcN {
            start: self.start,
            len: self.len,
            closed_start: self.closed_start,
            closed_end: self.closed_end,
        }
    }

    pub(crate) fn to_f64_arc(&self) -> ArcN<f64> {
        ArcN {
            start: self.start.to_f64(),
            len: self.len.to_f64(),
            closed_start: self.closed_start,
            closed_end: self.closed_end,
        }
    }
}

/// Arithmetic used by the arc-intersection routine. The float version answers
/// `None` whenever rounding could flip a comparison, so callers fall back to
/// the exact version.
pub(crate) trait Arith {
    type N: Clone;
    fn add(&self, a: &Self::N, b: &Self::N) -> Self::N;
    fn sub(&self, a: &Self::N, b: &Self::N) -> Self::N;
    fn frac(&self, a: &Self::N) -> Option<Self::N>;
    fn cmp(&self, a: &Self::N, b: &Self::N) -> Option<Ordering>;
    fn zero(&self) -> Self::N;
    fn one(&self) -> Self::N;
}

pub(crate) struct ExactArith {
    pub d: i128,
}

impl Arith for ExactArith {
    type N = QuadIrr;

    fn add(&self, a: &QuadIrr, b: &QuadIrr) -> QuadIrr {
        a.add(b)
    }

    fn sub(&self, a: &QuadIrr, b: &QuadIrr) -> QuadIrr {
        a.sub(b)
    }

    fn frac(&self, a: &QuadIrr) -> Option<QuadIrr> {
        Some(a.frac())
    }

    fn cmp(&self, a: &QuadIrr, b: &QuadIrr) -> Option<Ordering> {
        Some(a.cmp(b))
    }

    fn zero(&self) -> QuadIrr {
        QuadIrr::zero_in(self.d)
    }

    fn one(&self) -> QuadIrr {
        QuadIrr::from_int(1, self.d)
    }
}

/// Floats with a rounding margin `delta`.
pub(crate) struct FloatArith {
    pub delta: f64,
}

impl Arith for FloatArith {
    type N = f64;

    fn add(&self, a: &f64, b: &f64) -> f64 {
        a + b
    }

    fn sub(&self, a: &f64, b: &f64) -> f64 {
        a - b
    }

    fn frac(&self, a: &f64) -> Option<f64> {
        let f = a - a.floor();
        if f < self.delta || f > 1.0 - self.delta {
            None
        } else {
            Some(f)
        }
    }

    fn cmp(&self, a: &f64, b: &f64) -> Option<Ordering> {
        if (a - b).abs() < self.delta {
            None
        } else {
            a.partial_cmp(b)
        }
    }

    fn zero(&self) -> f64 {
        0.0
    }

    fn one(&self) -> f64 {
        1.0
    }
}

#[derive(Clone, Debug)]
pub(crate) struct ArcN<N> {
    pub start: N,
    pub len: N,
    pub closed_start: bool,
    pub closed_end: bool,
}

#[derive(Clone, Debug)]
struct Lin<N> {
    lo: N,
    hi: N,
    lo_closed: bool,
    hi_closed: bool,
}

/// Result of intersecting finitely many arcs.
#[derive(Clone, Debug)]
pub(crate) struct Region<N> {
    pub has_interior: bool,
    /// Isolated points of the intersection (absolute coordinates, not reduced
    /// modulo 1).
    pub points: Vec<N>,
}

fn lin_intersect<A: Arith>(ar: &A, a: &Lin<A::N>, b: &Lin<A::N>) -> Option<Option<Lin<A::N>>> {
    let (lo, lo_closed) = match ar.cmp(&a.lo, &b.lo)? {
        Ordering::Less => (b.lo.clone(), b.lo_closed),
        Ordering::Greater => (a.lo.clone(), a.lo_closed),
        Ordering::Equal => (a.lo.clone(), a.lo_closed && b.lo_closed),
    };
    let (hi, hi_closed) = match ar.cmp(&a.hi, &b.hi)? {
        Ordering::Less => (a.hi.clone(), a.hi_closed),
        Ordering::Greater => (b.hi.clone(), b.hi_closed),
        Ordering::Equal => (a.hi.clone(), a.hi_closed && b.hi_closed),
    };
    Some(match ar.cmp(&lo, &hi)? {
        Ordering::Greater => None,
        Ordering::Equal if !(lo_closed && hi_closed) => None,
        _ => Some(Lin { lo, hi, lo_closed, hi_closed }),
    })
}

/// Intersection of arcs, classified into "has an interior" and isolated
/// points. `None` means the arithmetic could not decide.
pub(crate) fn arc_region<A: Arith>(ar: &A, arcs: &[ArcN<A::N>]) -> Option<Region<A::N>> {
    let one = ar.one();
    let is_full_len = |a: &ArcN<A::N>| ar.cmp(&a.len, &one).map(|o| o == Ordering::Equal);
    let mut base_idx = None;
    for (i, a) in arcs.iter().enumerate() {
        if !is_full_len(a)? {
            base_idx = Some(i);
            break;
        }
    }
    let Some(bi) = base_idx else {
        // Circles minus at most one point each.
        return Some(Region { has_interior: true, points: Vec::new() });
    };
    let base = &arcs[bi];
    let mut current = vec![Lin {
        lo: ar.zero(),
        hi: base.len.clone(),
        lo_closed: base.closed_start,
        hi_closed: base.closed_end,
    }];
    if ar.cmp(&base.len, &ar.zero())? == Ordering::Equal && !(base.closed_start && base.closed_end) {
        return Some(Region { has_interior: false, points: Vec::new() });
    }
    for (j, arc) in arcs.iter().enumerate() {
        if j == bi {
            continue;
        }
        let offset = ar.frac(&ar.sub(&arc.start, &base.start))?;
        let hi1 = ar.add(&offset, &arc.len);
        let lo2 = ar.sub(&offset, &one);
        let hi2 = ar.sub(&hi1, &one);
        let pieces = [
            Lin { lo: offset, hi: hi1, lo_closed: arc.closed_start, hi_closed: arc.closed_end },
            Lin { lo: lo2, hi: hi2, lo_closed: arc.closed_start, hi_closed: arc.closed_end },
        ];
        let mut next = Vec::new();
        for cur in &current {
            for piece in &pieces {
                if let Some(x) = lin_intersect(ar, cur, piece)? {
                    next.push(x);
                }
            }
        }
        current = next;
        if current.is_empty() {
            break;
        }
    }
    let mut has_interior = false;
    let mut points = Vec::new();
    for l in current {
        match ar.cmp(&l.lo, &l.hi)? {
            Ordering::Less => has_interior = true,
            _ => points.push(ar.add(&base.start, &l.lo)),
        }
    }
    Some(Region { has_interior, points })
}
