//! Exact sumsets of integer sets built from half-lines, residue classes and
//! Sturmian sets sharing one rotation `α`.
//!
//! Each operand is compiled into a union of atoms. A structured atom is
//! `{n ∈ [lo, hi] : n mod m ∈ R, nα ∈ arc_i for all i} ∖ E` with `E` finite;
//! a finite atom is an explicit list. For a pair of atoms whose sum over the
//! output window only involves finitely many summands, both are materialized
//! on certified windows and convolved. Otherwise `x` lies in the sum iff the
//! residue constraints are compatible and the arcs `arc_i ∩ (xα − arc'_j)`
//! meet in an open set (then infinitely many summands exist by density of
//! `nα` along any arithmetic progression), or meet in a point realised by an
//! integer multiple of `α`.

use std::collections::BTreeSet;

use num_integer::Integer;
use rayon::prelude::*;

use super::{conv, intline, SetExpr};
use crate::error::{Error, Result};
use crate::groups::GroupElement;
use crate::sturmian::{arc_region, ArcN, ArcTester, ExactArith, FloatArith, QuadIrr, TorusArc};

const MAX_ATOMS: usize = 512;
const MAX_MODULUS: u64 = 1 << 12;

#[derive(Clone, Debug)]
struct Structured {
    lo: Option<i64>,
    hi: Option<i64>,
    modulus: u64,
    residues: Vec<bool>,
    arcs: Vec<TorusArc>,
    exclude: BTreeSet<i64>,
}

#[derive(Clone, Debug)]
enum Atom {
    Finite(Vec<i64>),
    Box(Structured),
}

impl Structured {
    fn full() -> Self {
        Structured { lo: None, hi: None, modulus: 1, residues: vec![true], arcs: Vec::new(), exclude: BTreeSet::new() }
    }

    fn contains(&self, n: i64, alpha: Option<&QuadIrr>) -> bool {
        if self.lo.is_some_and(|l| n < l) || self.hi.is_some_and(|h| n > h) {
            return false;
        }
        if !self.residues[n.rem_euclid(self.modulus as i64) as usize] || self.exclude.contains(&n) {
            return false;
        }
        match alpha {
            Some(a) => self.arcs.iter().all(|arc| arc.contains(&a.mul_int(n as i128))),
            None => self.arcs.is_empty(),
        }
    }

    fn fill(&self, lo: i64, hi: i64, alpha: Option<&QuadIrr>) -> Vec<bool> {
        let len = (hi - lo + 1).max(0) as usize;
        let m = self.modulus as i64;
        let mut mask: Vec<bool> = (0..len)
            .into_par_iter()
            .map(|i| {
                let x = lo + i as i64;
                !(self.lo.is_some_and(|l| x < l) || self.hi.is_some_and(|h| x > h))
                    && self.residues[x.rem_euclid(m) as usize]
            })
            .collect();
        if let Some(a) = alpha {
            let mut tmp = vec![false; len];
            for arc in &self.arcs {
                ArcTester::new(*a, arc.clone()).fill_par(lo, &mut tmp);
                mask.par_iter_mut().zip(&tmp).for_each(|(x, &y)| *x &= y);
            }
        }
        for &e in self.exclude.range(lo..=hi) {
            mask[(e - lo) as usize] = false;
        }
        mask
    }
}

impl Atom {
    fn bounds(&self) -> (Option<i64>, Option<i64>) {
        match self {
            Atom::Finite(v) => (v.first().copied(), v.last().copied()),
            Atom::Box(s) => (s.lo, s.hi),
        }
    }

    fn contains(&self, n: i64, alpha: Option<&QuadIrr>) -> bool {
        match self {
            Atom::Finite(v) => v.binary_search(&n).is_ok(),
            Atom::Box(s) => s.contains(n, alpha),
        }
    }

    fn fill(&self, lo: i64, hi: i64, alpha: Option<&QuadIrr>) -> Vec<bool> {
        match self {
            Atom::Finite(v) => {
                let mut mask = vec![false; (hi - lo + 1).max(0) as usize];
                for &x in v.iter().filter(|&&x| x >= lo && x <= hi) {
                    mask[(x - lo) as usize] = true;
                }
                mask
            }
            Atom::Box(s) => s.fill(lo, hi, alpha),
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

struct Compiler {
    alpha: Option<QuadIrr>,
}

fn unsupported(msg: &str) -> Error {
    Error::unsupported(msg.to_string())
}

impl Compiler {
    fn set_alpha(&mut self, a: &QuadIrr) -> Result<()> {
        match &self.alpha {
            None => {
                self.alpha = Some(*a);
                Ok(())
            }
            Some(b) if b == a => Ok(()),
            Some(_) => Err(unsupported("Sturmian sets with different rotations")),
        }
    }

    fn compile(&mut self, expr: &SetExpr) -> Result<Vec<Atom>> {
        let atoms = match expr {
            SetExpr::Explicit { elements } => {
                let mut v: Vec<i64> = elements
                    .iter()
                    .map(|g| g.as_int().ok_or_else(|| Error::ty("integer element expected")))
                    .collect::<Result<_>>()?;
                v.sort_unstable();
                v.dedup();
                vec![Atom::Finite(v)]
            }
            SetExpr::Singleton { element } => {
                vec![Atom::Finite(vec![element.as_int().ok_or_else(|| Error::ty("integer element expected"))?])]
            }
            SetExpr::Periodic { m, residues } => {
                if *m > MAX_MODULUS {
                    return Err(unsupported("period too large for symbolic sums"));
                }
                let mut r = vec![false; *m as usize];
                for &x in residues {
                    r[x as usize] = true;
                }
                vec![Atom::Box(Structured { modulus: *m, residues: r, ..Structured::full() })]
            }
            SetExpr::HalfLine { sign } => {
                let s = if *sign > 0 {
                    Structured { lo: Some(1), ..Structured::full() }
                } else {
                    Structured { hi: Some(-1), ..Structured::full() }
                };
                vec![Atom::Box(s)]
            }
            SetExpr::Sturmian { spec } => {
                self.set_alpha(&spec.alpha)?;
                vec![Atom::Box(Structured { arcs: vec![spec.arc(1)], ..Structured::full() })]
            }
            SetExpr::Union { sets } => {
                let mut all = Vec::new();
                for s in sets {
                    all.extend(self.compile(s)?);
                }
                all
            }
            SetExpr::Intersect { sets } => {
                let mut acc = vec![Atom::Box(Structured::full())];
                for s in sets {
                    let next = self.compile(s)?;
                    acc = self.intersect_dnf(&acc, &next)?;
                }
                acc
            }
            SetExpr::Complement { set } => {
                let inner = self.compile(set)?;
                let mut acc = vec![Atom::Box(Structured::full())];
                for atom in &inner {
                    acc = self.intersect_dnf(&acc, &self.complement_atom(atom))?;
                }
                acc
            }
            SetExpr::Translate { element: GroupElement::Int(t), set, .. } => {
                let inner = self.compile(set)?;
                inner.iter().map(|a| self.shift(a, *t)).collect::<Result<_>>()?
            }
            SetExpr::InverseSet { set } => {
                let inner = self.compile(set)?;
                inner.iter().map(|a| self.negate(a)).collect()
            }
            SetExpr::ProductSet { .. } => return Err(unsupported("nested product")),
            _ => return Err(Error::ty("set does not live in Z")),
        };
        let atoms: Vec<Atom> = atoms.into_iter().filter(|a| !self.is_empty(a)).collect();
        if atoms.len() > MAX_ATOMS {
            return Err(unsupported("expression too large for symbolic sums"));
        }
        Ok(atoms)
    }

    fn is_empty(&self, a: &Atom) -> bool {
        match a {
            Atom::Finite(v) => v.is_empty(),
            Atom::Box(s) => {
                if let (Some(l), Some(h)) = (s.lo, s.hi) {
                    if l > h {
                        return true;
                    }
                }
                if !s.residues.iter().any(|&r| r) {
                    return true;
                }
                if s.arcs.is_empty() {
                    return false;
                }
                let d = s.arcs[0].start.radicand();
                let nums: Vec<ArcN<QuadIrr>> = s.arcs.iter().map(TorusArc::to_num).collect();
                let r = arc_region(&ExactArith { d }, &nums).expect("exact arithmetic decides");
                // A single point is realised by at most one integer; keep the atom
                // and let membership tests decide.
                !r.has_interior && r.points.is_empty()
            }
        }
    }

    fn complement_atom(&self, a: &Atom) -> Vec<Atom> {
        match a {
            Atom::Finite(v) => vec![Atom::Box(Structured { exclude: v.iter().copied().collect(), ..Structured::full() })],
            Atom::Box(s) => {
                let mut out = Vec::new();
                if let Some(l) = s.lo {
                    out.push(Atom::Box(Structured { hi: Some(l - 1), ..Structured::full() }));
                }
                if let Some(h) = s.hi {
                    out.push(Atom::Box(Structured { lo: Some(h + 1), ..Structured::full() }));
                }
                if s.residues.iter().any(|&r| !r) {
                    out.push(Atom::Box(Structured {
                        modulus: s.modulus,
                        residues: s.residues.iter().map(|&r| !r).collect(),
                        ..Structured::full()
                    }));
                }
                for arc in &s.arcs {
                    out.push(Atom::Box(Structured { arcs: vec![arc.complement()], ..Structured::full() }));
                }
                if !s.exclude.is_empty() {
                    out.push(Atom::Finite(s.exclude.iter().copied().collect()));
                }
                out
            }
        }
    }

    fn intersect_dnf(&self, a: &[Atom], b: &[Atom]) -> Result<Vec<Atom>> {
        if a.len() * b.len() > MAX_ATOMS * 8 {
            return Err(unsupported("expression too large for symbolic sums"));
        }
        let mut out = Vec::new();
        for x in a {
            for y in b {
                let z = self.intersect(x, y)?;
                if !self.is_empty(&z) {
                    out.push(z);
                }
            }
        }
        if out.len() > MAX_ATOMS {
            return Err(unsupported("expression too large for symbolic sums"));
        }
        Ok(out)
    }

    fn intersect(&self, a: &Atom, b: &Atom) -> Result<Atom> {
        let alpha = self.alpha.as_ref();
        Ok(match (a, b) {
            (Atom::Finite(v), other) | (other, Atom::Finite(v)) => {
                Atom::Finite(v.iter().copied().filter(|&n| other.contains(n, alpha)).collect())
            }
            (Atom::Box(s), Atom::Box(t)) => {
                let lo = match (s.lo, t.lo) {
                    (Some(x), Some(y)) => Some(x.max(y)),
                    (x, y) => x.or(y),
                };
                let hi = match (s.hi, t.hi) {
                    (Some(x), Some(y)) => Some(x.min(y)),
                    (x, y) => x.or(y),
                };
                let l = s.modulus / gcd(s.modulus, t.modulus) * t.modulus;
                if l > MAX_MODULUS {
                    return Err(unsupported("combined period too large for symbolic sums"));
                }
                let residues = (0..l)
                    .map(|r| s.residues[(r % s.modulus) as usize] && t.residues[(r % t.modulus) as usize])
                    .collect();
                Atom::Box(Structured {
                    lo,
                    hi,
                    modulus: l,
                    residues,
                    arcs: s.arcs.iter().chain(&t.arcs).cloned().collect(),
                    exclude: s.exclude.union(&t.exclude).copied().collect(),
                })
            }
        })
    }

    fn shift(&self, a: &Atom, t: i64) -> Result<Atom> {
        Ok(match a {
            Atom::Finite(v) => Atom::Finite(v.iter().map(|x| x + t).collect()),
            Atom::Box(s) => {
                let m = s.modulus as i64;
                let mut residues = vec![false; s.modulus as usize];
                for (r, &on) in s.residues.iter().enumerate() {
                    if on {
                        residues[(r as i64 + t).rem_euclid(m) as usize] = true;
                    }
                }
                let arcs = if s.arcs.is_empty() {
                    Vec::new()
                } else {
                    let alpha = self.alpha.ok_or_else(|| Error::input("arc without a rotation"))?;
                    let shift = alpha.mul_int(t as i128);
                    s.arcs.iter().map(|arc| arc.translate(&shift)).collect()
                };
                Atom::Box(Structured {
                    lo: s.lo.map(|x| x + t),
                    hi: s.hi.map(|x| x + t),
                    modulus: s.modulus,
                    residues,
                    arcs,
                    exclude: s.exclude.iter().map(|x| x + t).collect(),
                })
            }
        })
    }

    fn negate(&self, a: &Atom) -> Atom {
        match a {
            Atom::Finite(v) => Atom::Finite(v.iter().rev().map(|x| -x).collect()),
            Atom::Box(s) => {
                let m = s.modulus as i64;
                let mut residues = vec![false; s.modulus as usize];
                for (r, &on) in s.residues.iter().enumerate() {
                    if on {
                        residues[(-(r as i64)).rem_euclid(m) as usize] = true;
                    }
                }
                Atom::Box(Structured {
                    lo: s.hi.map(|x| -x),
                    hi: s.lo.map(|x| -x),
                    modulus: s.modulus,
                    residues,
                    arcs: s.arcs.iter().map(TorusArc::reflect).collect(),
                    exclude: s.exclude.iter().map(|x| -x).collect(),
                })
            }
        }
    }
}

/// `(A + B) ∩ [lo, hi]` with an exactness flag.
pub(crate) fn sumset(a: &SetExpr, b: &SetExpr, lo: i64, hi: i64) -> Result<(Vec<bool>, bool)> {
    let mut c = Compiler { alpha: None };
    let compiled = c.compile(a).and_then(|da| Ok((da, c.compile(b)?)));
    match compiled {
        Ok((da, db)) => {
            let alpha = c.alpha;
            let len = (hi - lo + 1).max(0) as usize;
            let mut out = vec![false; len];
            for p in &da {
                for q in &db {
                    pair_into(p, q, lo, hi, alpha.as_ref(), &mut out)?;
                }
            }
            Ok((out, true))
        }
        Err(Error::Unsupported(_)) => fallback(a, b, lo, hi),
        Err(e) => Err(e),
    }
}

fn window_for(
    lo: i64,
    hi: i64,
    own: (Option<i64>, Option<i64>),
    other: (Option<i64>, Option<i64>),
) -> Option<(i64, i64)> {
    let wlo = match (own.0, other.1) {
        (Some(a), Some(b)) => a.max(lo - b),
        (Some(a), None) => a,
        (None, Some(b)) => lo - b,
        (None, None) => return None,
    };
    let whi = match (own.1, other.0) {
        (Some(a), Some(b)) => a.min(hi - b),
        (Some(a), None) => a,
        (None, Some(b)) => hi - b,
        (None, None) => return None,
    };
    Some((wlo, whi))
}

fn or_convolved(m1: &[bool], lo1: i64, m2: &[bool], lo2: i64, lo: i64, hi: i64, out: &mut [bool]) {
    let sum = conv::bool_sumset(m1, m2);
    let base = lo1 + lo2;
    for (k, &v) in sum.iter().enumerate() {
        let x = base + k as i64;
        if v && x >= lo && x <= hi {
            out[(x - lo) as usize] = true;
        }
    }
}

fn pair_into(p: &Atom, q: &Atom, lo: i64, hi: i64, alpha: Option<&QuadIrr>, out: &mut [bool]) -> Result<()> {
    let (bp, bq) = (p.bounds(), q.bounds());
    let infinite = (bp.1.is_none() && bq.0.is_none()) || (bp.0.is_none() && bq.1.is_none());
    if !infinite {
        let (Some(w1), Some(w2)) = (window_for(lo, hi, bp, bq), window_for(lo, hi, bq, bp)) else {
            unreachable!("finite pairs have finite windows");
        };
        if w1.0 > w1.1 || w2.0 > w2.1 {
            return Ok(());
        }
        crate::budget::check("sumset operand window", (w1.1 - w1.0 + 1 + w2.1 - w2.0 + 1) as u64)?;
        let m1 = p.fill(w1.0, w1.1, alpha);
        let m2 = q.fill(w2.0, w2.1, alpha);
        or_convolved(&m1, w1.0, &m2, w2.0, lo, hi, out);
        return Ok(());
    }
    let (Atom::Box(s), Atom::Box(t)) = (p, q) else {
        unreachable!("finite atoms are bounded");
    };
    symbolic_into(s, t, lo, alpha, out);
    Ok(())
}

fn symbolic_into(s: &Structured, t: &Structured, lo: i64, alpha: Option<&QuadIrr>, out: &mut [bool]) {
    let l = s.modulus / gcd(s.modulus, t.modulus) * t.modulus;
    let mut ok = vec![false; l as usize];
    for a in 0..l {
        if !s.residues[(a % s.modulus) as usize] {
            continue;
        }
        for b in 0..l {
            if t.residues[(b % t.modulus) as usize] {
                ok[((a + b) % l) as usize] = true;
            }
        }
    }
    if s.arcs.is_empty() && t.arcs.is_empty() {
        out.par_iter_mut().enumerate().for_each(|(i, slot)| {
            *slot |= ok[(lo + i as i64).rem_euclid(l as i64) as usize];
        });
        return;
    }
    let alpha = *alpha.expect("arcs come with a rotation");
    let d = alpha.radicand();
    let af = alpha.to_f64();
    let fixed: Vec<ArcN<f64>> = s.arcs.iter().map(TorusArc::to_f64_arc).collect();
    let reflected: Vec<TorusArc> = t.arcs.iter().map(TorusArc::reflect).collect();
    let anchors: Vec<f64> = reflected
        .iter()
        .map(|r| r.start.add(&alpha.mul_int(lo as i128)).frac().to_f64())
        .collect();
    let exact_at = |x: i64| -> bool {
        let xa = alpha.mul_int(x as i128);
        let mut arcs: Vec<ArcN<QuadIrr>> = s.arcs.iter().map(TorusArc::to_num).collect();
        arcs.extend(reflected.iter().map(|r| r.translate(&xa).to_num()));
        let region = arc_region(&ExactArith { d }, &arcs).expect("exact arithmetic decides");
        if region.has_interior {
            return true;
        }
        region.points.iter().any(|y| {
            let (c, k) = y.decompose(&alpha);
            if !c.is_integer() || !k.is_integer() {
                return false;
            }
            let a = k.to_integer();
            i64::try_from(a).is_ok_and(|a| s.contains(a, Some(&alpha)) && t.contains(x - a, Some(&alpha)))
        })
    };
    out.par_iter_mut().enumerate().for_each(|(i, slot)| {
        if *slot {
            return;
        }
        let x = lo + i as i64;
        if !ok[x.rem_euclid(l as i64) as usize] {
            return;
        }
        let shift = i as f64 * af;
        let mut arcs = fixed.clone();
        arcs.extend(reflected.iter().zip(&anchors).map(|(r, &anc)| ArcN {
            start: anc + shift,
            len: r.len.to_f64(),
            closed_start: r.closed_start,
            closed_end: r.closed_end,
        }));
        let delta = 1e-14 * (i as f64 * af.abs() + 8.0);
        *slot = match arc_region(&FloatArith { delta }, &arcs) {
            Some(r) if r.has_interior => true,
            Some(r) if r.points.is_empty() => false,
            _ => exact_at(x),
        };
    });
}

/// Sums outside the symbolic fragment: operand windows from support bounds,
/// inflated (and flagged inexact) when the bounds do not certify them.
fn fallback(a: &SetExpr, b: &SetExpr, lo: i64, hi: i64) -> Result<(Vec<bool>, bool)> {
    let len = (hi - lo + 1).max(0) as usize;
    let mut out = vec![false; len];
    if len == 0 {
        return Ok((out, true));
    }
    let (sa, sb) = (intline::support(a), intline::support(b));
    let infinite = (sa.1.is_none() && sb.0.is_none()) || (sa.0.is_none() && sb.1.is_none());
    let (w1, w2, mut exact) = if infinite {
        let w = hi - lo + 1;
        let clip = |s: (Option<i64>, Option<i64>), l: i64, h: i64| (s.0.map_or(l, |x| x.max(l)), s.1.map_or(h, |x| x.min(h)));
        (clip(sa, lo - w, hi + w), clip(sb, lo - w, hi + w), false)
    } else {
        let w1 = window_for(lo, hi, sa, sb).expect("finite pair");
        let w2 = window_for(lo, hi, sb, sa).expect("finite pair");
        (w1, w2, true)
    };
    if w1.0 > w1.1 || w2.0 > w2.1 {
        return Ok((out, exact));
    }
    let (m1, e1) = intline::materialize(a, w1.0, w1.1)?;
    let (m2, e2) = intline::materialize(b, w2.0, w2.1)?;
    exact &= e1 && e2;
    or_convolved(&m1, w1.0, &m2, w2.0, lo, hi, &mut out);
    Ok((out, exact))
}
