//! Sturmian sets `{n : nα ∈ I + a}` and their twisted dihedral analogues.

mod quadirr;
mod torus;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use quadirr::QuadIrr;
pub use torus::{
    arcs_disjoint, interval_disjoint, interval_sum, interval_translate, TorusArc, TorusInterval,
};
pub(crate) use torus::{arc_region, ArcN, ExactArith, FloatArith};

use crate::error::{Error, Result};
use crate::ratio::{self, Q};

/// Torus offset `a = c + m·α`, together with the reflection component `η` of
/// a dihedral offset `(a, η)`. `η` is ignored for untwisted sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SturmianOffset {
    #[serde(with = "ratio::serde_ratio")]
    pub c: Q,
    pub m: i64,
    #[serde(default = "plus_one")]
    pub eta: i8,
}

fn plus_one() -> i8 {
    1
}

impl Default for SturmianOffset {
    fn default() -> Self {
        SturmianOffset { c: Q::zero(), m: 0, eta: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SturmianSpec {
    pub alpha: QuadIrr,
    pub interval: TorusInterval,
    #[serde(default)]
    pub offset: SturmianOffset,
    #[serde(default)]
    pub twisted: bool,
}

impl SturmianSpec {
    pub fn new(alpha: QuadIrr, interval: TorusInterval) -> Result<Self> {
        let spec = SturmianSpec { alpha, interval, offset: SturmianOffset::default(), twisted: false };
        spec.validate()?;
        Ok(spec)
    }

    pub fn twisted(alpha: QuadIrr, interval: TorusInterval, offset: SturmianOffset) -> Result<Self> {
        let spec = SturmianSpec { alpha, interval, offset, twisted: true };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_offset(mut self, offset: SturmianOffset) -> Self {
        self.offset = offset;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.alpha.is_rational() {
            return Err(Error::input("Sturmian rotation must be irrational"));
        }
        if self.offset.eta != 1 && self.offset.eta != -1 {
            return Err(Error::input("dihedral offset sign must be 1 or -1"));
        }
        Ok(())
    }

    /// `a = c + m·α`.
    pub fn offset_value(&self) -> QuadIrr {
        self.alpha.mul_int(self.offset.m as i128).add_ratio(&self.offset.c)
    }

    /// The arc `I + s·a` with `s = ±1`; an integer `n` lies in the (twisted
    /// layer of the) set iff `nα` lies in this arc.
    pub fn arc(&self, s: i64) -> TorusArc {
        let shift = self.offset_value().mul_int(s as i128);
        self.interval.to_arc(self.alpha.radicand()).translate(&shift)
    }

    /// Arc governing the untwisted set, or layer `δ` of a twisted one.
    pub fn layer_arc(&self, delta: i8) -> TorusArc {
        if self.twisted {
            self.arc((delta * self.offset.eta) as i64)
        } else {
            self.arc(1)
        }
    }

    pub fn tester(&self, delta: i8) -> ArcTester {
        ArcTester::new(self.alpha, self.layer_arc(delta))
    }

    /// Membership of `n` in the untwisted set.
    pub fn contains_int(&self, n: i64) -> bool {
        self.tester(1).contains(n)
    }

    /// Membership of `(n, δ)` in the twisted set.
    pub fn contains_dihedral(&self, n: i64, delta: i8) -> bool {
        self.tester(delta).contains(n)
    }
}

/// Decides `nα ∈ arc` for many `n`, using floats with a rounding margin and
/// exact arithmetic whenever the float answer is within the margin of a
/// boundary.
#[derive(Clone, Debug)]
pub struct ArcTester {
    alpha: QuadIrr,
    arc: TorusArc,
    af: f64,
    start_f: f64,
    len_f: f64,
    full: bool,
}

impl ArcTester {
    pub fn new(alpha: QuadIrr, arc: TorusArc) -> Self {
        let full = arc.len == QuadIrr::from_int(1, arc.len.radicand()) && arc.closed_start && arc.closed_end;
        ArcTester {
            af: alpha.to_f64(),
            start_f: arc.start.to_f64(),
            len_f: arc.len.to_f64(),
            alpha,
            arc,
            full,
        }
    }

    pub fn arc(&self) -> &TorusArc {
        &self.arc
    }

    pub fn exact(&self, n: i128) -> bool {
        self.arc.contains(&self.alpha.mul_int(n))
    }

    fn decide(&self, t: f64, delta: f64) -> Option<bool> {
        if t < delta || t > 1.0 - delta || (t - self.len_f).abs() < delta {
            None
        } else {
            Some(t < self.len_f)
        }
    }

    pub fn contains(&self, n: i64) -> bool {
        if self.full {
            return true;
        }
        let x = n as f64 * self.af - self.start_f;
        let t = x - x.floor();
        let delta = 1e-15 * ((n as f64).abs() * self.af.abs() + self.start_f.abs() + 2.0) * 4.0;
        self.decide(t, delta).unwrap_or_else(|| self.exact(n as i128))
    }

    /// `out[i] = (x0 + i)α ∈ arc`.
    pub fn fill(&self, x0: i64, out: &mut [bool]) {
        if self.full {
            out.fill(true);
            return;
        }
        let anchor = self.alpha.mul_int(x0 as i128).sub(&self.arc.start).frac().to_f64();
        for (i, slot) in out.iter_mut().enumerate() {
            let x = anchor + i as f64 * self.af;
            let t = x - x.floor();
            let delta = 4e-15 * (i as f64 * self.af.abs() + 2.0);
            *slot = self.decide(t, delta).unwrap_or_else(|| self.exact(x0 as i128 + i as i128));
        }
    }

    /// Parallel [`ArcTester::fill`] over chunks.
    pub fn fill_par(&self, x0: i64, out: &mut [bool]) {
        const CHUNK: usize = 1 << 16;
        out.par_chunks_mut(CHUNK)
            .enumerate()
            .for_each(|(c, chunk)| self.fill(x0 + (c * CHUNK) as i64, chunk));
    }
}

/// `{nα} ∈ I`, decided exactly.
pub fn frac_in_interval(n: i64, alpha: &QuadIrr, interval: &TorusInterval) -> bool {
    ArcTester::new(*alpha, interval.to_arc(alpha.radicand())).contains(n)
}

/// Smallest `|n| ≤ bound` (positive first on ties) with
/// `(I + I) ∩ (I + nα) = ∅`.
pub fn find_shift_n(alpha: &QuadIrr, interval: &TorusInterval, bound: u64) -> Result<i64> {
    if interval.measure() * 3 >= Q::one() {
        return Err(Error::pre(format!(
            "need m(I) < 1/3 for a disjoint shift, got {}",
            ratio::format_ratio(&interval.measure())
        )));
    }
    if alpha.is_rational() {
        return Err(Error::input("rotation must be irrational"));
    }
    let doubled = interval_sum(interval, interval).to_arc(alpha.radicand());
    for k in 1..=bound as i64 {
        for n in [k, -k] {
            if arcs_disjoint(&doubled, &interval_translate(interval, alpha, n)) {
                return Ok(n);
            }
        }
    }
    Err(Error::NotFound(format!("no disjoint shift with |n| <= {bound}")))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Equidistribution {
    pub n: u64,
    pub count: u64,
    pub ratio: f64,
    pub discrepancy: f64,
}

/// Exact count of `k ∈ [1, n]` with `{kα} ∈ I`.
pub fn equidistribution_check(alpha: &QuadIrr, interval: &TorusInterval, n: u64) -> Result<Equidistribution> {
    if n == 0 {
        return Err(Error::pre("equidistribution needs n >= 1"));
    }
    crate::budget::check("equidistribution window", n)?;
    let tester = ArcTester::new(*alpha, interval.to_arc(alpha.radicand()));
    let mut hits = vec![false; n as usize];
    tester.fill_par(1, &mut hits);
    let count = hits.iter().filter(|&&b| b).count() as u64;
    let ratio = count as f64 / n as f64;
    Ok(Equidistribution {
        n,
        count,
        ratio,
        discrepancy: (ratio - ratio::to_f64(&interval.measure())).abs(),
    })
}
