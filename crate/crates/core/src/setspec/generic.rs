//! Evaluation of set expressions on arbitrary element lists.

use std::collections::HashSet;

use rayon::prelude::*;

use super::{SetExpr, Side};
use crate::error::Result;
use crate::groups::{BoxParams, GroupDescriptor, GroupElement};

/// `mask[i] = elems[i] ∈ expr`, with `false` exactness when a product node
/// had to be approximated from inside `window`.
pub(crate) fn eval(
    desc: &GroupDescriptor,
    expr: &SetExpr,
    elems: &[GroupElement],
    window: &BoxParams,
) -> Result<(Vec<bool>, bool)> {
    if !expr.has_product() {
        let mask = elems
            .par_iter()
            .map(|g| expr.member_unchecked(desc, g))
            .collect::<Result<Vec<bool>>>()?;
        return Ok((mask, true));
    }
    match expr {
        SetExpr::Union { sets } | SetExpr::Intersect { sets } => {
            let is_union = matches!(expr, SetExpr::Union { .. });
            let mut mask = vec![!is_union; elems.len()];
            let mut exact = true;
            for s in sets {
                let (m, e) = eval(desc, s, elems, window)?;
                exact &= e;
                for (a, b) in mask.iter_mut().zip(m) {
                    if is_union {
                        *a |= b;
                    } else {
                        *a &= b;
                    }
                }
            }
            Ok((mask, exact))
        }
        SetExpr::Complement { set } => {
            let (m, e) = eval(desc, set, elems, window)?;
            Ok((m.into_iter().map(|b| !b).collect(), e))
        }
        SetExpr::Translate { element, side, set } => {
            let inv = desc.inverse(element)?;
            let moved = elems
                .iter()
                .map(|g| match side {
                    Side::Left => desc.op(&inv, g),
                    Side::Right => desc.op(g, &inv),
                })
                .collect::<Result<Vec<_>>>()?;
            eval(desc, set, &moved, window)
        }
        SetExpr::InverseSet { set } => {
            let moved = elems.iter().map(|g| desc.inverse(g)).collect::<Result<Vec<_>>>()?;
            eval(desc, set, &moved, window)
        }
        SetExpr::ProductSet { left, right } => product(desc, left, right, elems, window),
        _ => unreachable!("leaves have no product nodes"),
    }
}

fn product(
    desc: &GroupDescriptor,
    left: &SetExpr,
    right: &SetExpr,
    elems: &[GroupElement],
    window: &BoxParams,
) -> Result<(Vec<bool>, bool)> {
    let mut mask = vec![false; elems.len()];
    let mut exact = true;
    if let Some(a) = left.finite_support(desc)? {
        // x ∈ AB iff a⁻¹x ∈ B for some a ∈ A.
        for g in &a {
            let inv = desc.inverse(g)?;
            let moved = elems.iter().map(|x| desc.op(&inv, x)).collect::<Result<Vec<_>>>()?;
            let (m, e) = eval(desc, right, &moved, window)?;
            exact &= e;
            mask.iter_mut().zip(m).for_each(|(s, b)| *s |= b);
        }
        return Ok((mask, exact));
    }
    if let Some(b) = right.finite_support(desc)? {
        for g in &b {
            let inv = desc.inverse(g)?;
            let moved = elems.iter().map(|x| desc.op(x, &inv)).collect::<Result<Vec<_>>>()?;
            let (m, e) = eval(desc, left, &moved, window)?;
            exact &= e;
            mask.iter_mut().zip(m).for_each(|(s, b)| *s |= b);
        }
        return Ok((mask, exact));
    }
    // Finite groups: work in the whole group. Otherwise products of operand
    // elements inside the window give a subset of AB.
    let (domain, whole) = match desc {
        GroupDescriptor::Cyclic(_) | GroupDescriptor::FiniteTable(_) => (desc.enumerate_box(&BoxParams::Whole)?, true),
        _ => (desc.enumerate_box(window)?, false),
    };
    let (ma, ea) = eval(desc, left, &domain, window)?;
    let (mb, eb) = eval(desc, right, &domain, window)?;
    let a: Vec<&GroupElement> = domain.iter().zip(&ma).filter(|(_, &m)| m).map(|(g, _)| g).collect();
    let b: Vec<&GroupElement> = domain.iter().zip(&mb).filter(|(_, &m)| m).map(|(g, _)| g).collect();
    crate::budget::check("pairwise products", (a.len() as u64).saturating_mul(b.len() as u64))?;
    let prods: HashSet<GroupElement> = a
        .par_iter()
        .map(|x| b.iter().map(|y| desc.op(x, y)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    for (slot, g) in mask.iter_mut().zip(elems) {
        *slot = prods.contains(g);
    }
    Ok((mask, whole && ea && eb))
}
