//! Argument value parsers shared by the subcommands.

use std::path::Path;
use std::sync::Arc;

use kneser_core::density::FamilyKind;
use kneser_core::groups::{resolve_table, GroupDescriptor, GroupElement, PowerFraction, SolvableBox};
use kneser_core::ratio::{parse_ratio, Q};
use kneser_core::setspec::SetExpr;
use kneser_core::sturmian::{QuadIrr, SturmianSpec, TorusInterval};
use kneser_core::{Error, Result};
use num_rational::Ratio;

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Inline JSON when the value starts with `{`, a file path otherwise.
pub fn json_source(value: &str) -> Result<String> {
    let t = value.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        return Ok(value.to_string());
    }
    std::fs::read_to_string(Path::new(value)).map_err(|e| bad(format!("cannot read {value}: {e}")))
}

pub fn expr(value: &str) -> Result<SetExpr> {
    let text = json_source(value)?;
    serde_json::from_str(&text).map_err(|e| bad(format!("set expression: {e}")))
}

pub fn sturmian_spec(value: &str) -> Result<SturmianSpec> {
    let text = json_source(value)?;
    let spec: SturmianSpec = serde_json::from_str(&text).map_err(|e| bad(format!("Sturmian spec: {e}")))?;
    spec.validate()?;
    Ok(spec)
}

/// `Z`, `Z^d`, `Z/m`, `Dinf`, `Z[1/p]`, a finite-group name or table file, or
/// a JSON descriptor.
pub fn group(value: &str) -> Result<GroupDescriptor> {
    let v = value.trim();
    if v.starts_with('{') {
        return serde_json::from_str(v).map_err(|e| bad(format!("group descriptor: {e}")));
    }
    let desc = if v == "Z" {
        GroupDescriptor::IntLine
    } else if let Some(d) = v.strip_prefix("Z^") {
        GroupDescriptor::IntLattice(d.parse().map_err(|_| bad(format!("lattice dimension in {v}")))?)
    } else if let Some(m) = v.strip_prefix("Z/") {
        GroupDescriptor::Cyclic(m.parse().map_err(|_| bad(format!("modulus in {v}")))?)
    } else if v == "Dinf" {
        GroupDescriptor::DihedralInf
    } else if let Some(p) = v.strip_prefix("Z[1/").and_then(|r| r.strip_suffix(']')) {
        GroupDescriptor::SolvablePk(p.parse().map_err(|_| bad(format!("prime in {v}")))?)
    } else {
        GroupDescriptor::FiniteTable(Arc::new(resolve_table(v)?))
    };
    desc.validate()?;
    Ok(desc)
}

/// `sym`, `initial`, `shifted:a,b`, `skew` or `rect`.
pub fn family(value: &str) -> Result<FamilyKind> {
    Ok(match value {
        "sym" | "symmetric" => FamilyKind::Symmetric,
        "initial" => FamilyKind::Initial,
        "skew" => FamilyKind::Solvable { form: SolvableBox::Skew },
        "rect" => FamilyKind::Solvable { form: SolvableBox::Rect },
        other => {
            let rest = other.strip_prefix("shifted:").ok_or_else(|| bad(format!("unknown family {other:?}")))?;
            let (a, b) = pair(rest)?;
            FamilyKind::Shifted { a, b }
        }
    })
}

pub fn form(value: &str) -> Result<SolvableBox> {
    match value {
        "skew" => Ok(SolvableBox::Skew),
        "rect" => Ok(SolvableBox::Rect),
        other => Err(bad(format!("box form must be skew or rect, got {other:?}"))),
    }
}

/// `lo,hi` as integers.
pub fn pair(value: &str) -> Result<(i64, i64)> {
    let (a, b) = value.split_once(',').ok_or_else(|| bad(format!("expected lo,hi, got {value:?}")))?;
    let p = |s: &str| s.trim().parse::<i64>().map_err(|_| bad(format!("integer expected, got {s:?}")));
    Ok((p(a)?, p(b)?))
}

/// `golden`, `silver` or `p,q,r,d` for `(p + q√d)/r`.
pub fn alpha(value: &str) -> Result<QuadIrr> {
    match value {
        "golden" => Ok(QuadIrr::golden()),
        "silver" => Ok(QuadIrr::silver()),
        other => {
            let parts: Vec<i64> = other
                .split(',')
                .map(|s| s.trim().parse::<i64>().map_err(|_| bad(format!("rotation component {s:?}"))))
                .collect::<Result<_>>()?;
            match parts[..] {
                [p, q, r, d] => QuadIrr::new(p, q, r, d),
                _ => Err(bad("rotation must be golden, silver or p,q,r,d")),
            }
        }
    }
}

/// `lo,hi` with rational endpoints.
pub fn interval(value: &str) -> Result<TorusInterval> {
    let (a, b) = value.split_once(',').ok_or_else(|| bad(format!("expected lo,hi, got {value:?}")))?;
    TorusInterval::new(parse_ratio(a.trim())?, parse_ratio(b.trim())?)
}

pub fn ratio(value: &str) -> Result<Q> {
    parse_ratio(value)
}

/// An integer, `x:k` for `(x, k)` in `Z[1/p] ⋊ Z` with rational `x`, or JSON.
pub fn element(value: &str, group: &GroupDescriptor) -> Result<GroupElement> {
    let v = value.trim();
    if v.starts_with('{') || v.starts_with('"') {
        return serde_json::from_str(v).map_err(|e| bad(format!("group element: {e}")));
    }
    let g = match (group, v.split_once(':')) {
        (GroupDescriptor::SolvablePk(p), Some((x, k))) => {
            let x = parse_ratio(x.trim())?;
            let r = Ratio::new(*x.numer() as i128, *x.denom() as i128);
            let k = k.trim().parse::<i64>().map_err(|_| bad(format!("layer in {v:?}")))?;
            GroupElement::affine(PowerFraction::from_ratio(&r, *p)?, k)
        }
        (GroupDescriptor::IntLine, None) => GroupElement::Int(v.parse().map_err(|_| bad(format!("integer {v:?}")))?),
        (GroupDescriptor::Cyclic(_), None) => GroupElement::Res(v.parse().map_err(|_| bad(format!("residue {v:?}")))?),
        (GroupDescriptor::FiniteTable(_), None) => {
            GroupElement::TableIdx(v.parse().map_err(|_| bad(format!("table index {v:?}")))?)
        }
        _ => return Err(bad(format!("cannot read {v:?} as an element of {}; use JSON", group.name()))),
    };
    group.check(&g)?;
    Ok(g)
}
