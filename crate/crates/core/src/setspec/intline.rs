//! Materialization of integer set expressions on intervals.

use rayon::prelude::*;

use super::{bohr, SetExpr};
use crate::error::{Error, Result};
use crate::groups::GroupElement;

/// Mask of `expr ∩ [lo, hi]` and whether it is certified exact.
pub(crate) fn materialize(expr: &SetExpr, lo: i64, hi: i64) -> Result<(Vec<bool>, bool)> {
    let len = if hi < lo { 0 } else { (hi - lo + 1) as usize };
    crate::budget::check("interval window", len as u64)?;
    let mut mask = vec![false; len];
    if len == 0 {
        return Ok((mask, true));
    }
    let mut exact = true;
    match expr {
        SetExpr::Explicit { elements } => {
            for g in elements {
                mark(&mut mask, lo, hi, g)?;
            }
        }
        SetExpr::Singleton { element } => mark(&mut mask, lo, hi, element)?,
        SetExpr::Periodic { m, residues } => {
            let mut table = vec![false; *m as usize];
            for &r in residues {
                table[r as usize] = true;
            }
            let m = *m as i64;
            mask.par_iter_mut().enumerate().for_each(|(i, slot)| {
                *slot = table[(lo + i as i64).rem_euclid(m) as usize];
            });
        }
        SetExpr::HalfLine { sign } => {
            for (i, slot) in mask.iter_mut().enumerate() {
                let x = lo + i as i64;
                *slot = if *sign > 0 { x >= 1 } else { x <= -1 };
            }
        }
        SetExpr::Sturmian { spec } => spec.tester(1).fill_par(lo, &mut mask),
        SetExpr::TwistedSturmian { .. } | SetExpr::Builtin { .. } => {
            return Err(Error::ty("set does not live in Z"));
        }
        SetExpr::Union { sets } => {
            for s in sets {
                let (m, e) = materialize(s, lo, hi)?;
                exact &= e;
                mask.par_iter_mut().zip(m).for_each(|(a, b)| *a |= b);
            }
        }
        SetExpr::Intersect { sets } => {
            mask.fill(true);
            for s in sets {
                let (m, e) = materialize(s, lo, hi)?;
                exact &= e;
                mask.par_iter_mut().zip(m).for_each(|(a, b)| *a &= b);
            }
        }
        SetExpr::Complement { set } => {
            let (m, e) = materialize(set, lo, hi)?;
            exact = e;
            mask = m.into_iter().map(|b| !b).collect();
        }
        SetExpr::Translate { element, set, .. } => {
            let t = match element {
                GroupElement::Int(t) => *t,
                _ => return Err(Error::ty("integer translate expected")),
            };
            let (m, e) = materialize(set, lo - t, hi - t)?;
            exact = e;
            mask = m;
        }
        SetExpr::InverseSet { set } => {
            let (mut m, e) = materialize(set, -hi, -lo)?;
            m.reverse();
            exact = e;
            mask = m;
        }
        SetExpr::ProductSet { left, right } => {
            let (m, e) = bohr::sumset(left, right, lo, hi)?;
            exact = e;
            mask = m;
        }
    }
    Ok((mask, exact))
}

fn mark(mask: &mut [bool], lo: i64, hi: i64, g: &GroupElement) -> Result<()> {
    match g {
        GroupElement::Int(x) => {
            if (lo..=hi).contains(x) {
                mask[(x - lo) as usize] = true;
            }
            Ok(())
        }
        _ => Err(Error::ty("integer element expected")),
    }
}

/// Conservative support bounds `[lo, hi]` (`None` = unbounded). Empty sets
/// may report `lo > hi`.
pub(crate) fn support(expr: &SetExpr) -> (Option<i64>, Option<i64>) {
    match expr {
        SetExpr::Explicit { elements } => {
            let xs: Vec<i64> = elements.iter().filter_map(GroupElement::as_int).collect();
            match (xs.iter().min(), xs.iter().max()) {
                (Some(&a), Some(&b)) => (Some(a), Some(b)),
                _ => (Some(1), Some(0)),
            }
        }
        SetExpr::Singleton { element } => match element.as_int() {
            Some(x) => (Some(x), Some(x)),
            None => (None, None),
        },
        SetExpr::HalfLine { sign } => {
            if *sign > 0 {
                (Some(1), None)
            } else {
                (None, Some(-1))
            }
        }
        SetExpr::Union { sets } => {
            let mut lo = Some(i64::MAX);
            let mut hi = Some(i64::MIN);
            for s in sets {
                let (a, b) = support(s);
                lo = match (lo, a) {
                    (Some(x), Some(y)) => Some(x.min(y)),
                    _ => None,
                };
                hi = match (hi, b) {
                    (Some(x), Some(y)) => Some(x.max(y)),
                    _ => None,
                };
            }
            (lo, hi)
        }
        SetExpr::Intersect { sets } => {
            let mut lo: Option<i64> = None;
            let mut hi: Option<i64> = None;
            for s in sets {
                let (a, b) = support(s);
                lo = match (lo, a) {
                    (Some(x), Some(y)) => Some(x.max(y)),
                    (x, y) => x.or(y),
                };
                hi = match (hi, b) {
                    (Some(x), Some(y)) => Some(x.min(y)),
                    (x, y) => x.or(y),
                };
            }
            (lo, hi)
        }
        SetExpr::Translate { element: GroupElement::Int(t), set, .. } => {
            let (a, b) = support(set);
            (a.map(|x| x + t), b.map(|x| x + t))
        }
        SetExpr::InverseSet { set } => {
            let (a, b) = support(set);
            (b.map(|x| -x), a.map(|x| -x))
        }
        SetExpr::ProductSet { left, right } => {
            let (a1, b1) = support(left);
            let (a2, b2) = support(right);
            (a1.zip(a2).map(|(x, y)| x + y), b1.zip(b2).map(|(x, y)| x + y))
        }
        _ => (None, None),
    }
}
