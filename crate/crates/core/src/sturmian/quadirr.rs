//! Exact numbers of the form `(p + q√d) / r`.
//!
//! Every comparison reduces to the sign of `a + b√d` for integers `a, b`,
//! which is decided by comparing `a²` against `b²d`. Arithmetic runs in `i128`
//! and falls back to big integers for the sign test when squares overflow.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratio::Q;

/// A number `(p + q√d) / r` with `r > 0`, `gcd(p, q, r) = 1` and `d > 1`
/// squarefree. `q = 0` gives a rational number living in the same field.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "QuadIrrRepr", into = "QuadIrrRepr")]
pub struct QuadIrr {
    p: i128,
    q: i128,
    r: i128,
    d: i128,
}

#[derive(Serialize, Deserialize)]
struct QuadIrrRepr {
    p: i64,
    q: i64,
    r: i64,
    d: i64,
}

impl TryFrom<QuadIrrRepr> for QuadIrr {
    type Error = Error;

    fn try_from(v: QuadIrrRepr) -> Result<Self> {
        QuadIrr::new(v.p, v.q, v.r, v.d)
    }
}

impl From<QuadIrr> for QuadIrrRepr {
    fn from(v: QuadIrr) -> Self {
        let narrow = |x: i128| i64::try_from(x).expect("quadratic irrational does not fit in i64");
        QuadIrrRepr { p: narrow(v.p), q: narrow(v.q), r: narrow(v.r), d: narrow(v.d) }
    }
}

fn is_squarefree(d: i128) -> bool {
    let mut k = 2i128;
    while k * k <= d {
        if d % (k * k) == 0 {
            return false;
        }
        k += 1;
    }
    true
}

fn isqrt_big(n: &BigInt) -> BigInt {
    n.sqrt()
}

fn overflow() -> ! {
    panic!("quadratic irrational arithmetic overflowed i128")
}

fn ck(v: Option<i128>) -> i128 {
    v.unwrap_or_else(|| overflow())
}

/// Sign of `a + b√d`.
fn sign_surd(a: i128, b: i128, d: i128) -> Ordering {
    let sa = a.cmp(&0);
    let sb = b.cmp(&0);
    if sb == Ordering::Equal {
        return sa;
    }
    if sa == Ordering::Equal || sa == sb {
        return sb;
    }
    // Opposite signs: compare a² with b²d.
    let lhs = a.checked_mul(a);
    let rhs = b.checked_mul(b).and_then(|b2| b2.checked_mul(d));
    let by_magnitude = match (lhs, rhs) {
        (Some(l), Some(r)) => l.cmp(&r),
        _ => {
            let l = BigInt::from(a) * BigInt::from(a);
            let r = BigInt::from(b) * BigInt::from(b) * BigInt::from(d);
            l.cmp(&r)
        }
    };
    // |a| dominates when a² > b²d, so the sign follows a.
    match by_magnitude {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    }
}

impl QuadIrr {
    /// Builds `(p + q√d)/r`, rejecting `r = 0` and non-squarefree `d ≤ 1`.
    pub fn new(p: i64, q: i64, r: i64, d: i64) -> Result<Self> {
        if r == 0 {
            return Err(Error::input("quadratic irrational with zero denominator"));
        }
        if d <= 1 || !is_squarefree(d as i128) {
            return Err(Error::input(format!("radicand {d} must be squarefree and > 1")));
        }
        Ok(Self::raw(p as i128, q as i128, r as i128, d as i128))
    }

    /// The golden-ratio conjugate `(√5 − 1)/2`.
    pub fn golden() -> Self {
        Self::raw(-1, 1, 2, 5)
    }

    /// `√2 − 1`.
    pub fn silver() -> Self {
        Self::raw(-1, 1, 1, 2)
    }

    fn raw(p: i128, q: i128, r: i128, d: i128) -> Self {
        let (mut p, mut q, mut r) = (p, q, r);
        if r < 0 {
            p = -p;
            q = -q;
            r = -r;
        }
        let g = p.gcd(&q).gcd(&r);
        if g > 1 {
            p /= g;
            q /= g;
            r /= g;
        }
        if p == 0 && q == 0 {
            r = 1;
        }
        QuadIrr { p, q, r, d }
    }

    pub fn from_ratio(v: &Q, d: i128) -> Self {
        Self::raw(*v.numer() as i128, 0, *v.denom() as i128, d)
    }

    pub fn from_int(n: i128, d: i128) -> Self {
        Self::raw(n, 0, 1, d)
    }

    pub fn zero_in(d: i128) -> Self {
        Self::raw(0, 0, 1, d)
    }

    pub fn parts(&self) -> (i128, i128, i128, i128) {
        (self.p, self.q, self.r, self.d)
    }

    pub fn radicand(&self) -> i128 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.q == 0
    }

    pub fn is_zero(&self) -> bool {
        self.p == 0 && self.q == 0
    }

    fn same_field(&self, other: &Self) {
        debug_assert!(
            self.d == other.d || self.q == 0 || other.q == 0,
            "mixing quadratic fields Q(√{}) and Q(√{})",
            self.d,
            other.d
        );
    }

    fn field_of(&self, other: &Self) -> i128 {
        if self.q != 0 {
            self.d
        } else {
            other.d
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.same_field(o);
        let p = ck(ck(self.p.checked_mul(o.r)).checked_add(ck(o.p.checked_mul(self.r))));
        let q = ck(ck(self.q.checked_mul(o.r)).checked_add(ck(o.q.checked_mul(self.r))));
        let r = ck(self.r.checked_mul(o.r));
        Self::raw(p, q, r, self.field_of(o))
    }

    pub fn neg(&self) -> Self {
        Self::raw(-self.p, -self.q, self.r, self.d)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul_int(&self, n: i128) -> Self {
        Self::raw(ck(self.p.checked_mul(n)), ck(self.q.checked_mul(n)), self.r, self.d)
    }

    pub fn add_ratio(&self, v: &Q) -> Self {
        self.add(&Self::from_ratio(v, self.d))
    }

    pub fn add_int(&self, n: i128) -> Self {
        Self::raw(ck(self.p.checked_add(ck(n.checked_mul(self.r)))), self.q, self.r, self.d)
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.same_field(o);
        let d = self.field_of(o);
        let p = ck(ck(self.p.checked_mul(o.p))
            .checked_add(ck(ck(self.q.checked_mul(o.q)).checked_mul(d))));
        let q = ck(ck(self.p.checked_mul(o.q)).checked_add(ck(self.q.checked_mul(o.p))));
        let r = ck(self.r.checked_mul(o.r));
        Self::raw(p, q, r, d)
    }

    pub fn signum(&self) -> Ordering {
        sign_surd(self.p, self.q, self.d)
    }

    /// `⌊(p + q√d)/r⌋`, exact.
    pub fn floor(&self) -> i128 {
        if self.q == 0 {
            return Integer::div_floor(&self.p, &self.r);
        }
        // q√d is irrational, so ⌊q√d⌋ = isqrt(q²d) or −isqrt(q²d) − 1.
        let s = match self.q.checked_mul(self.q).and_then(|x| x.checked_mul(self.d)) {
            Some(q2d) => {
                let t = isqrt_i128(q2d);
                if self.q > 0 {
                    t
                } else {
                    -t - 1
                }
            }
            None => {
                let q2d = BigInt::from(self.q) * BigInt::from(self.q) * BigInt::from(self.d);
                let t = isqrt_big(&q2d).to_i128().unwrap_or_else(|| overflow());
                if self.q > 0 {
                    t
                } else {
                    -t - 1
                }
            }
        };
        // p + q√d lies strictly between p + s and p + s + 1.
        Integer::div_floor(&ck(self.p.checked_add(s)), &self.r)
    }

    /// Representative of the class modulo 1 in `[0, 1)`.
    pub fn frac(&self) -> Self {
        self.add_int(-self.floor())
    }

    pub fn to_f64(&self) -> f64 {
        (self.p as f64 + self.q as f64 * (self.d as f64).sqrt()) / self.r as f64
    }

    /// Writes `self = c + k·alpha` with rational `c, k`; `alpha` must be
    /// irrational and in the same field.
    pub fn decompose(&self, alpha: &QuadIrr) -> (Ratio<i128>, Ratio<i128>) {
        assert!(!alpha.is_rational(), "decompose needs an irrational basis");
        self.same_field(alpha);
        // Irrational parts: q/r = k · (alpha.q/alpha.r).
        let k = Ratio::new(self.q * alpha.r, self.r * alpha.q);
        let alpha_rat = Ratio::new(alpha.p, alpha.r);
        let c = Ratio::new(self.p, self.r) - k * alpha_rat;
        (c, k)
    }
}

fn isqrt_i128(n: i128) -> i128 {
    debug_assert!(n >= 0);
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as i128;
    while x.checked_mul(x).is_none_or(|xx| xx > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|xx| xx <= n) {
        x += 1;
    }
    x
}

impl PartialOrd for QuadIrr {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadIrr {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sub(other).signum()
    }
}

impl fmt::Debug for QuadIrr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}√{})/{}", self.p, self.q, self.d, self.r)
    }
}

impl fmt::Display for QuadIrr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q == 0 {
            if self.r == 1 {
                write!(f, "{}", self.p)
            } else {
                write!(f, "{}/{}", self.p, self.r)
            }
        } else {
            write!(f, "({} + {}√{})/{} ≈ {:.6}", self.p, self.q, self.d, self.r, self.to_f64())
        }
    }
}
