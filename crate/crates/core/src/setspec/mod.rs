//! Symbolic subsets of the supported groups, exact membership, and
//! materialization on finite windows.

mod bohr;
pub(crate) mod conv;
mod generic;
mod intline;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::cxmachine;
use crate::error::{Error, Result};
use crate::groups::{BoxParams, GroupDescriptor, GroupElement};
use crate::sturmian::{QuadIrr, SturmianSpec, TorusInterval};

/// Which side a translate multiplies on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    #[default]
    Left,
    Right,
}

/// Named sets of the counterexample machine in `Z[1/p] ⋊ Z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Builtin {
    /// `S = {(x, k) : v_p(x) ≥ k}`.
    S,
    /// `S⁻¹S`.
    SInvS,
    /// The complement of `S⁻¹S`.
    T,
    /// `{(x, k) : k even}`.
    EvenLayers,
    /// `S ∩ {k even}`.
    Cx1A,
    /// `{(x, k) ∈ T : k odd, (k − 1)α ∈ I} ∪ {e}`.
    Cx1B { alpha: QuadIrr, interval: TorusInterval },
    /// Closed form of the product set `Cx1A · Cx1B`.
    Cx1AB,
}

/// A set expression. `ProductSet` nodes have no pointwise membership test and
/// are only evaluated on windows.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum SetExpr {
    Explicit { elements: Vec<GroupElement> },
    /// Integers congruent to one of `residues` modulo `m`.
    Periodic { m: u64, residues: Vec<u64> },
    /// `{1, 2, 3, …}` for sign `+1`, `{−1, −2, …}` for `−1`.
    HalfLine { sign: i8 },
    Sturmian { spec: SturmianSpec },
    TwistedSturmian { spec: SturmianSpec },
    Singleton { element: GroupElement },
    Union { sets: Vec<SetExpr> },
    Intersect { sets: Vec<SetExpr> },
    Complement { set: Box<SetExpr> },
    Translate {
        element: GroupElement,
        #[serde(default)]
        side: Side,
        set: Box<SetExpr>,
    },
    ProductSet { left: Box<SetExpr>, right: Box<SetExpr> },
    InverseSet { set: Box<SetExpr> },
    Builtin { builtin: Builtin },
}

impl SetExpr {
    pub fn explicit(elements: Vec<GroupElement>) -> Self {
        SetExpr::Explicit { elements }
    }

    pub fn ints(v: impl IntoIterator<Item = i64>) -> Self {
        SetExpr::Explicit { elements: v.into_iter().map(GroupElement::Int).collect() }
    }

    pub fn periodic(m: u64, residues: Vec<u64>) -> Self {
        SetExpr::Periodic { m, residues }
    }

    /// `{1, 2, 3, …}`.
    pub fn naturals() -> Self {
        SetExpr::HalfLine { sign: 1 }
    }

    /// `{−1, −2, …}`.
    pub fn neg_naturals() -> Self {
        SetExpr::HalfLine { sign: -1 }
    }

    pub fn sturmian(spec: SturmianSpec) -> Self {
        SetExpr::Sturmian { spec }
    }

    pub fn singleton(element: GroupElement) -> Self {
        SetExpr::Singleton { element }
    }

    pub fn union(sets: Vec<SetExpr>) -> Self {
        SetExpr::Union { sets }
    }

    pub fn intersect(sets: Vec<SetExpr>) -> Self {
        SetExpr::Intersect { sets }
    }

    pub fn complement(self) -> Self {
        SetExpr::Complement { set: Box::new(self) }
    }

    pub fn translate(self, element: GroupElement, side: Side) -> Self {
        SetExpr::Translate { element, side, set: Box::new(self) }
    }

    pub fn product(self, right: SetExpr) -> Self {
        SetExpr::ProductSet { left: Box::new(self), right: Box::new(right) }
    }

    pub fn inverse(self) -> Self {
        SetExpr::InverseSet { set: Box::new(self) }
    }

    pub fn builtin(builtin: Builtin) -> Self {
        SetExpr::Builtin { builtin }
    }

    pub fn has_product(&self) -> bool {
        match self {
            SetExpr::ProductSet { .. } => true,
            SetExpr::Union { sets } | SetExpr::Intersect { sets } => sets.iter().any(SetExpr::has_product),
            SetExpr::Complement { set } | SetExpr::Translate { set, .. } | SetExpr::InverseSet { set } => {
                set.has_product()
            }
            _ => false,
        }
    }

    /// Checks that every leaf fits the group.
    pub fn validate(&self, desc: &GroupDescriptor) -> Result<()> {
        let int_only = |what: &str| -> Result<()> {
            if matches!(desc, GroupDescriptor::IntLine) {
                Ok(())
            } else {
                Err(Error::ty(format!("{what} sets live in Z, not {}", desc.name())))
            }
        };
        match self {
            SetExpr::Explicit { elements } => elements.iter().try_for_each(|g| desc.check(g)),
            SetExpr::Singleton { element } => desc.check(element),
            SetExpr::Periodic { m, residues } => {
                int_only("periodic")?;
                if *m == 0 {
                    return Err(Error::input("period must be positive"));
                }
                if let Some(r) = residues.iter().find(|&&r| r >= *m) {
                    return Err(Error::input(format!("residue {r} is not in [0, {m})")));
                }
                Ok(())
            }
            SetExpr::HalfLine { sign } => {
                int_only("half-line")?;
                if *sign != 1 && *sign != -1 {
                    return Err(Error::input("half-line sign must be 1 or -1"));
                }
                Ok(())
            }
            SetExpr::Sturmian { spec } => {
                int_only("Sturmian")?;
                spec.validate()?;
                if spec.twisted {
                    return Err(Error::input("twisted spec inside an untwisted Sturmian node"));
                }
                Ok(())
            }
            SetExpr::TwistedSturmian { spec } => {
                if !matches!(desc, GroupDescriptor::DihedralInf) {
                    return Err(Error::ty("twisted Sturmian sets live in the infinite dihedral group"));
                }
                spec.validate()
            }
            SetExpr::Union { sets } | SetExpr::Intersect { sets } => sets.iter().try_for_each(|s| s.validate(desc)),
            SetExpr::Complement { set } | SetExpr::InverseSet { set } => set.validate(desc),
            SetExpr::Translate { element, set, .. } => {
                desc.check(element)?;
                set.validate(desc)
            }
            SetExpr::ProductSet { left, right } => {
                left.validate(desc)?;
                right.validate(desc)
            }
            SetExpr::Builtin { builtin } => match desc {
                GroupDescriptor::SolvablePk(_) => {
                    if let Builtin::Cx1B { alpha, .. } = builtin {
                        if alpha.is_rational() {
                            return Err(Error::input("rotation must be irrational"));
                        }
                    }
                    Ok(())
                }
                _ => Err(Error::ty("built-in sets live in Z[1/p] ⋊ Z")),
            },
        }
    }

    /// Exact membership. Fails on `ProductSet` nodes.
    pub fn member(&self, desc: &GroupDescriptor, g: &GroupElement) -> Result<bool> {
        desc.check(g)?;
        self.member_unchecked(desc, g)
    }

    fn member_unchecked(&self, desc: &GroupDescriptor, g: &GroupElement) -> Result<bool> {
        Ok(match self {
            SetExpr::Explicit { elements } => elements.contains(g),
            SetExpr::Singleton { element } => element == g,
            SetExpr::Periodic { m, residues } => {
                let n = int_of(desc, g)?;
                residues.contains(&(n.rem_euclid(*m as i64) as u64))
            }
            SetExpr::HalfLine { sign } => {
                let n = int_of(desc, g)?;
                if *sign > 0 {
                    n >= 1
                } else {
                    n <= -1
                }
            }
            SetExpr::Sturmian { spec } => spec.contains_int(int_of(desc, g)?),
            SetExpr::TwistedSturmian { spec } => match g {
                GroupElement::Dih { n, eps } => spec.contains_dihedral(*n, *eps),
                _ => return Err(Error::ty("twisted Sturmian membership needs a dihedral element")),
            },
            SetExpr::Union { sets } => {
                for s in sets {
                    if s.member_unchecked(desc, g)? {
                        return Ok(true);
                    }
                }
                false
            }
            SetExpr::Intersect { sets } => {
                for s in sets {
                    if !s.member_unchecked(desc, g)? {
                        return Ok(false);
                    }
                }
                true
            }
            SetExpr::Complement { set } => !set.member_unchecked(desc, g)?,
            SetExpr::Translate { element, side, set } => {
                let inv = desc.inverse(element)?;
                let y = match side {
                    Side::Left => desc.op(&inv, g)?,
                    Side::Right => desc.op(g, &inv)?,
                };
                set.member_unchecked(desc, &y)?
            }
            SetExpr::InverseSet { set } => set.member_unchecked(desc, &desc.inverse(g)?)?,
            SetExpr::ProductSet { .. } => {
                return Err(Error::unsupported(
                    "product sets have no pointwise membership test; use a window",
                ))
            }
            SetExpr::Builtin { builtin } => match (desc, g) {
                (GroupDescriptor::SolvablePk(p), GroupElement::Affine { a, k }) => {
                    cxmachine::builtin_member(*p, builtin, a, *k)
                }
                _ => return Err(Error::ty("built-in sets live in Z[1/p] ⋊ Z")),
            },
        })
    }

    /// The elements, when the set is syntactically finite.
    pub fn finite_support(&self, desc: &GroupDescriptor) -> Result<Option<Vec<GroupElement>>> {
        Ok(match self {
            SetExpr::Explicit { elements } => Some(dedup(elements.clone())),
            SetExpr::Singleton { element } => Some(vec![element.clone()]),
            SetExpr::Union { sets } => {
                let mut all = Vec::new();
                for s in sets {
                    match s.finite_support(desc)? {
                        Some(v) => all.extend(v),
                        None => return Ok(None),
                    }
                }
                Some(dedup(all))
            }
            SetExpr::Intersect { sets } => {
                let Some(pos) = sets.iter().position(|s| matches!(s.finite_support(desc), Ok(Some(_)))) else {
                    return Ok(None);
                };
                let cand = sets[pos].finite_support(desc)?.unwrap_or_default();
                if sets.iter().any(SetExpr::has_product) {
                    return Ok(None);
                }
                let mut keep = Vec::new();
                for g in cand {
                    let mut ok = true;
                    for (i, s) in sets.iter().enumerate() {
                        if i != pos && !s.member_unchecked(desc, &g)? {
                            ok = false;
                            break;
                        }
                    }
                    if ok {
                        keep.push(g);
                    }
                }
                Some(keep)
            }
            SetExpr::Translate { element, side, set } => match set.finite_support(desc)? {
                Some(v) => Some(dedup(
                    v.iter()
                        .map(|x| match side {
                            Side::Left => desc.op(element, x),
                            Side::Right => desc.op(x, element),
                        })
                        .collect::<Result<_>>()?,
                )),
                None => None,
            },
            SetExpr::InverseSet { set } => match set.finite_support(desc)? {
                Some(v) => Some(dedup(v.iter().map(|x| desc.inverse(x)).collect::<Result<_>>()?)),
                None => None,
            },
            SetExpr::ProductSet { left, right } => match (left.finite_support(desc)?, right.finite_support(desc)?) {
                (Some(a), Some(b)) => {
                    let mut out = Vec::with_capacity(a.len() * b.len());
                    for x in &a {
                        for y in &b {
                            out.push(desc.op(x, y)?);
                        }
                    }
                    Some(dedup(out))
                }
                _ => None,
            },
            _ => None,
        })
    }
}

fn dedup(v: Vec<GroupElement>) -> Vec<GroupElement> {
    let mut seen = HashSet::new();
    v.into_iter().filter(|g| seen.insert(g.clone())).collect()
}

fn int_of(desc: &GroupDescriptor, g: &GroupElement) -> Result<i64> {
    match (desc, g) {
        (GroupDescriptor::IntLine, GroupElement::Int(n)) => Ok(*n),
        _ => Err(Error::ty(format!("{g:?} is not an integer in Z"))),
    }
}

/// A set restricted to a window: `mask[i]` says whether the `i`-th element of
/// the window (in enumeration order) belongs to the set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowSet {
    pub window: BoxParams,
    pub mask: Vec<bool>,
    /// `false` when the mask is only guaranteed to be a subset of the true
    /// restriction (product sets without a certified inflation).
    pub exact: bool,
}

impl WindowSet {
    pub fn count(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn len(&self) -> usize {
        self.mask.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mask.is_empty()
    }

    pub fn members(&self, desc: &GroupDescriptor) -> Result<Vec<GroupElement>> {
        if let BoxParams::Interval { lo, .. } = self.window {
            return Ok(self.int_members_from(lo));
        }
        let elems = desc.enumerate_box(&self.window)?;
        Ok(elems.into_iter().zip(&self.mask).filter(|(_, &b)| b).map(|(g, _)| g).collect())
    }

    fn int_members_from(&self, lo: i64) -> Vec<GroupElement> {
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| GroupElement::Int(lo + i as i64))
            .collect()
    }

    /// Members of an integer window as plain integers.
    pub fn int_members(&self) -> Result<Vec<i64>> {
        match self.window {
            BoxParams::Interval { lo, .. } => {
                Ok(self.mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| lo + i as i64).collect())
            }
            _ => Err(Error::ty("integer members need an interval window")),
        }
    }
}

/// `mask[i] = member(expr, box[i])`. Product nodes are evaluated through
/// [`product_window`], which may clear the exactness flag.
pub fn materialize(desc: &GroupDescriptor, expr: &SetExpr, window: &BoxParams) -> Result<WindowSet> {
    expr.validate(desc)?;
    let size = desc.box_size(window)?;
    crate::budget::check("window materialization", size)?;
    match (desc, window) {
        (GroupDescriptor::IntLine, BoxParams::Interval { lo, hi }) => {
            let (mask, exact) = intline::materialize(expr, *lo, *hi)?;
            Ok(WindowSet { window: window.clone(), mask, exact })
        }
        _ => {
            let elems = desc.enumerate_box(window)?;
            let (mask, exact) = generic::eval(desc, expr, &elems, window)?;
            Ok(WindowSet { window: window.clone(), mask, exact })
        }
    }
}

/// `(A·B) ∩ out`. Exact whenever an inflation of the operand windows
/// certifies it; otherwise the result is a lower approximation and
/// `exact = false`.
pub fn product_window(desc: &GroupDescriptor, a: &SetExpr, b: &SetExpr, out: &BoxParams) -> Result<WindowSet> {
    let expr = a.clone().product(b.clone());
    materialize(desc, &expr, out)
}

/// Materializes an untwisted Sturmian set on an interval, or a twisted one on
/// a dihedral window.
pub fn sturmian_members(spec: &SturmianSpec, window: &BoxParams) -> Result<WindowSet> {
    let (desc, expr) = if spec.twisted {
        (GroupDescriptor::DihedralInf, SetExpr::TwistedSturmian { spec: spec.clone() })
    } else {
        (GroupDescriptor::IntLine, SetExpr::Sturmian { spec: spec.clone() })
    };
    materialize(&desc, &expr, window).map_err(|e| match e {
        Error::Type(m) => Error::Type(format!("Sturmian spec does not match the window: {m}")),
        other => other,
    })
}
