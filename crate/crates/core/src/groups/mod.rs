//! Exact arithmetic for the supported groups and enumeration of finite boxes.

pub mod finite;
pub mod library;
mod power;

use std::collections::HashSet;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use finite::{bits, quotients_of, quotients_of_bounded, FiniteGroup, Quotient};
pub use power::{int_valuation, PowerFraction};

use crate::budget;
use crate::error::{Error, Result};

/// One of the supported groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupDescriptor {
    /// `(Z, +)`.
    IntLine,
    /// `(Z^d, +)`.
    IntLattice(usize),
    /// `Z/mZ`.
    Cyclic(u64),
    /// A finite group given by its Cayley table.
    FiniteTable(Arc<FiniteGroup>),
    /// `Z ⋊ {−1, 1}` with `(m, ε)(m', ε') = (m + εm', εε')`.
    DihedralInf,
    /// `Z[1/p] ⋊ Z` with `(a, k)(b, l) = (a + p^k b, k + l)`.
    SolvablePk(u64),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum DescriptorRepr {
    IntLine,
    IntLattice { dim: usize },
    Cyclic { m: u64 },
    FiniteTable { id: String },
    DihedralInf,
    SolvablePk { p: u64 },
}

impl Serialize for GroupDescriptor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match self {
            GroupDescriptor::IntLine => DescriptorRepr::IntLine,
            GroupDescriptor::IntLattice(d) => DescriptorRepr::IntLattice { dim: *d },
            GroupDescriptor::Cyclic(m) => DescriptorRepr::Cyclic { m: *m },
            GroupDescriptor::FiniteTable(g) => DescriptorRepr::FiniteTable { id: g.name().to_string() },
            GroupDescriptor::DihedralInf => DescriptorRepr::DihedralInf,
            GroupDescriptor::SolvablePk(p) => DescriptorRepr::SolvablePk { p: *p },
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupDescriptor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let desc = match DescriptorRepr::deserialize(d)? {
            DescriptorRepr::IntLine => GroupDescriptor::IntLine,
            DescriptorRepr::IntLattice { dim } => GroupDescriptor::IntLattice(dim),
            DescriptorRepr::Cyclic { m } => GroupDescriptor::Cyclic(m),
            DescriptorRepr::FiniteTable { id } => {
                GroupDescriptor::FiniteTable(Arc::new(resolve_table(&id).map_err(serde::de::Error::custom)?))
            }
            DescriptorRepr::DihedralInf => GroupDescriptor::DihedralInf,
            DescriptorRepr::SolvablePk { p } => GroupDescriptor::SolvablePk(p),
        };
        desc.validate().map_err(serde::de::Error::custom)?;
        Ok(desc)
    }
}

/// A finite table by library name, or else by file path.
pub fn resolve_table(id: &str) -> Result<FiniteGroup> {
    if let Some(g) = library::by_name(id) {
        return Ok(g);
    }
    let text = std::fs::read_to_string(id)
        .map_err(|e| Error::input(format!("unknown group {id:?} and unreadable as a file: {e}")))?;
    FiniteGroup::parse(id, &text)
}

/// An element of one of the supported groups.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupElement {
    Int(i64),
    IntVec(Vec<i64>),
    Res(u64),
    Dih { n: i64, eps: i8 },
    Affine { a: PowerFraction, k: i64 },
    TableIdx(usize),
}

impl GroupElement {
    pub fn affine(a: PowerFraction, k: i64) -> Self {
        GroupElement::Affine { a, k }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            GroupElement::Int(n) => Some(*n),
            _ => None,
        }
    }

    pub fn as_affine(&self) -> Option<(PowerFraction, i64)> {
        match self {
            GroupElement::Affine { a, k } => Some((*a, *k)),
            _ => None,
        }
    }
}

fn mismatch(desc: &GroupDescriptor, g: &GroupElement) -> Error {
    Error::ty(format!("element {g:?} does not belong to {}", desc.name()))
}

fn overflow() -> Error {
    Error::resource("group arithmetic overflowed")
}

impl GroupDescriptor {
    pub fn name(&self) -> String {
        match self {
            GroupDescriptor::IntLine => "Z".into(),
            GroupDescriptor::IntLattice(d) => format!("Z^{d}"),
            GroupDescriptor::Cyclic(m) => format!("Z/{m}"),
            GroupDescriptor::FiniteTable(g) => g.name().to_string(),
            GroupDescriptor::DihedralInf => "Z:{-1,1}".into(),
            GroupDescriptor::SolvablePk(p) => format!("Z[1/{p}]:Z"),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GroupDescriptor::IntLattice(0) => Err(Error::input("lattice dimension must be at least 1")),
            GroupDescriptor::Cyclic(0) => Err(Error::input("cyclic modulus must be at least 1")),
            GroupDescriptor::SolvablePk(p) if *p < 2 => Err(Error::input("p must be at least 2")),
            _ => Ok(()),
        }
    }

    pub fn is_abelian(&self) -> bool {
        match self {
            GroupDescriptor::IntLine | GroupDescriptor::IntLattice(_) | GroupDescriptor::Cyclic(_) => true,
            GroupDescriptor::FiniteTable(g) => g.is_abelian(),
            GroupDescriptor::DihedralInf | GroupDescriptor::SolvablePk(_) => false,
        }
    }

    /// Fails with a type error unless `g` is a (normalized) element.
    pub fn check(&self, g: &GroupElement) -> Result<()> {
        let ok = match (self, g) {
            (GroupDescriptor::IntLine, GroupElement::Int(_)) => true,
            (GroupDescriptor::IntLattice(d), GroupElement::IntVec(v)) => v.len() == *d,
            (GroupDescriptor::Cyclic(m), GroupElement::Res(r)) => r < m,
            (GroupDescriptor::FiniteTable(t), GroupElement::TableIdx(i)) => *i < t.order(),
            (GroupDescriptor::DihedralInf, GroupElement::Dih { eps, .. }) => *eps == 1 || *eps == -1,
            (GroupDescriptor::SolvablePk(p), GroupElement::Affine { a, .. }) => a.is_normalized(*p),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(mismatch(self, g))
        }
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            GroupDescriptor::IntLine => GroupElement::Int(0),
            GroupDescriptor::IntLattice(d) => GroupElement::IntVec(vec![0; *d]),
            GroupDescriptor::Cyclic(_) => GroupElement::Res(0),
            GroupDescriptor::FiniteTable(t) => GroupElement::TableIdx(t.identity()),
            GroupDescriptor::DihedralInf => GroupElement::Dih { n: 0, eps: 1 },
            GroupDescriptor::SolvablePk(_) => GroupElement::Affine { a: PowerFraction::ZERO, k: 0 },
        }
    }

    pub fn op(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        self.check(h)?;
        Ok(match (self, g, h) {
            (GroupDescriptor::IntLine, GroupElement::Int(a), GroupElement::Int(b)) => {
                GroupElement::Int(a.checked_add(*b).ok_or_else(overflow)?)
            }
            (GroupDescriptor::IntLattice(_), GroupElement::IntVec(a), GroupElement::IntVec(b)) => GroupElement::IntVec(
                a.iter()
                    .zip(b)
                    .map(|(x, y)| x.checked_add(*y).ok_or_else(overflow))
                    .collect::<Result<_>>()?,
            ),
            (GroupDescriptor::Cyclic(m), GroupElement::Res(a), GroupElement::Res(b)) => {
                GroupElement::Res(((*a as u128 + *b as u128) % *m as u128) as u64)
            }
            (GroupDescriptor::FiniteTable(t), GroupElement::TableIdx(a), GroupElement::TableIdx(b)) => {
                GroupElement::TableIdx(t.mul(*a, *b))
            }
            (GroupDescriptor::DihedralInf, GroupElement::Dih { n, eps }, GroupElement::Dih { n: n2, eps: e2 }) => {
                let m = n.checked_add(*eps as i64 * n2).ok_or_else(overflow)?;
                GroupElement::Dih { n: m, eps: eps * e2 }
            }
            (GroupDescriptor::SolvablePk(p), GroupElement::Affine { a, k }, GroupElement::Affine { a: b, k: l }) => {
                let moved = b.shift(*k).ok_or_else(overflow)?;
                GroupElement::Affine {
                    a: a.add(&moved, *p).ok_or_else(overflow)?,
                    k: k.checked_add(*l).ok_or_else(overflow)?,
                }
            }
            _ => return Err(mismatch(self, g)),
        })
    }

    pub fn inverse(&self, g: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        Ok(match (self, g) {
            (GroupDescriptor::IntLine, GroupElement::Int(a)) => GroupElement::Int(a.checked_neg().ok_or_else(overflow)?),
            (GroupDescriptor::IntLattice(_), GroupElement::IntVec(v)) => GroupElement::IntVec(v.iter().map(|x| -x).collect()),
            (GroupDescriptor::Cyclic(m), GroupElement::Res(r)) => GroupElement::Res((m - r) % m),
            (GroupDescriptor::FiniteTable(t), GroupElement::TableIdx(i)) => GroupElement::TableIdx(t.inv(*i)),
            (GroupDescriptor::DihedralInf, GroupElement::Dih { n, eps }) => GroupElement::Dih { n: -(*eps as i64) * n, eps: *eps },
            (GroupDescriptor::SolvablePk(_), GroupElement::Affine { a, k }) => GroupElement::Affine {
                a: a.neg().shift(-k).ok_or_else(overflow)?,
                k: -k,
            },
            _ => return Err(mismatch(self, g)),
        })
    }

    /// `{ g f g⁻¹ : f ∈ F }`, duplicates removed, first-occurrence order.
    pub fn conjugate_set(&self, g: &GroupElement, set: &[GroupElement]) -> Result<Vec<GroupElement>> {
        let gi = self.inverse(g)?;
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for f in set {
            let c = self.op(&self.op(g, f)?, &gi)?;
            if seen.insert(c.clone()) {
                out.push(c);
            }
        }
        Ok(out)
    }

    fn check_box(&self, b: &BoxParams) -> Result<()> {
        let ok = match (self, b) {
            (GroupDescriptor::IntLine, BoxParams::Interval { .. }) => true,
            (GroupDescriptor::IntLattice(d), BoxParams::Lattice { ranges }) => ranges.len() == *d,
            (GroupDescriptor::DihedralInf, BoxParams::Dihedral { .. }) => true,
            (GroupDescriptor::SolvablePk(_), BoxParams::Solvable { .. }) => true,
            (GroupDescriptor::Cyclic(_) | GroupDescriptor::FiniteTable(_), BoxParams::Whole) => true,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::ty(format!("box {b:?} does not fit group {}", self.name())))
        }
    }

    /// Number of elements in a box.
    pub fn box_size(&self, b: &BoxParams) -> Result<u64> {
        self.check_box(b)?;
        let span = |lo: i64, hi: i64| if hi < lo { 0 } else { (hi as i128 - lo as i128 + 1) as u64 };
        Ok(match (self, b) {
            (_, BoxParams::Interval { lo, hi }) => span(*lo, *hi),
            (_, BoxParams::Lattice { ranges }) => ranges.iter().map(|r| span(r[0], r[1])).product(),
            (_, BoxParams::Dihedral { lo, hi }) => 2 * span(*lo, *hi),
            (_, BoxParams::Solvable { n, j, .. }) => (2 * *n as u64 + 1) * (2 * j + 1),
            (GroupDescriptor::Cyclic(m), BoxParams::Whole) => *m,
            (GroupDescriptor::FiniteTable(t), BoxParams::Whole) => t.order() as u64,
            _ => unreachable!("checked above"),
        })
    }

    /// Exact, duplicate-free enumeration in a fixed order matching
    /// [`GroupDescriptor::box_index`].
    pub fn enumerate_box(&self, b: &BoxParams) -> Result<Vec<GroupElement>> {
        let size = self.box_size(b)?;
        budget::check("box enumeration", size)?;
        let mut out = Vec::with_capacity(size as usize);
        match (self, b) {
            (_, BoxParams::Interval { lo, hi }) => out.extend((*lo..=*hi).map(GroupElement::Int)),
            (_, BoxParams::Lattice { ranges }) => {
                let mut cur: Vec<i64> = ranges.iter().map(|r| r[0]).collect();
                if size > 0 {
                    loop {
                        out.push(GroupElement::IntVec(cur.clone()));
                        let mut i = ranges.len();
                        loop {
                            if i == 0 {
                                return Ok(out);
                            }
                            i -= 1;
                            if cur[i] < ranges[i][1] {
                                cur[i] += 1;
                                break;
                            }
                            cur[i] = ranges[i][0];
                        }
                    }
                }
            }
            (_, BoxParams::Dihedral { lo, hi }) => {
                for n in *lo..=*hi {
                    out.push(GroupElement::Dih { n, eps: -1 });
                    out.push(GroupElement::Dih { n, eps: 1 });
                }
            }
            (GroupDescriptor::SolvablePk(p), BoxParams::Solvable { n, j, form }) => {
                let (n, jm) = (*n as i64, *j as i128);
                for k in -n..=n {
                    let e = form.exponent(k, n);
                    for jj in -jm..=jm {
                        out.push(GroupElement::Affine { a: PowerFraction::scaled(jj, e as i32, *p), k });
                    }
                }
            }
            (GroupDescriptor::Cyclic(m), BoxParams::Whole) => out.extend((0..*m).map(GroupElement::Res)),
            (GroupDescriptor::FiniteTable(t), BoxParams::Whole) => out.extend((0..t.order()).map(GroupElement::TableIdx)),
            _ => unreachable!("checked above"),
        }
        Ok(out)
    }

    /// Position of `g` in [`GroupDescriptor::enumerate_box`], if present.
    pub fn box_index(&self, b: &BoxParams, g: &GroupElement) -> Option<usize> {
        match (self, b, g) {
            (GroupDescriptor::IntLine, BoxParams::Interval { lo, hi }, GroupElement::Int(x)) => {
                (lo <= x && x <= hi).then(|| (x - lo) as usize)
            }
            (GroupDescriptor::IntLattice(_), BoxParams::Lattice { ranges }, GroupElement::IntVec(v)) => {
                if v.len() != ranges.len() {
                    return None;
                }
                let mut idx = 0usize;
                for (x, r) in v.iter().zip(ranges) {
                    if *x < r[0] || *x > r[1] {
                        return None;
                    }
                    idx = idx * (r[1] - r[0] + 1) as usize + (x - r[0]) as usize;
                }
                Some(idx)
            }
            (GroupDescriptor::DihedralInf, BoxParams::Dihedral { lo, hi }, GroupElement::Dih { n, eps }) => {
                (lo <= n && n <= hi).then(|| 2 * (n - lo) as usize + usize::from(*eps == 1))
            }
            (GroupDescriptor::SolvablePk(p), BoxParams::Solvable { n, j, form }, GroupElement::Affine { a, k }) => {
                let n = *n as i64;
                if k.abs() > n {
                    return None;
                }
                let jj = a.coefficient_at(form.exponent(*k, n), *p)?;
                if jj.unsigned_abs() > *j as u128 {
                    return None;
                }
                let width = 2 * *j as usize + 1;
                Some((k + n) as usize * width + (jj + *j as i128) as usize)
            }
            (GroupDescriptor::Cyclic(m), BoxParams::Whole, GroupElement::Res(r)) => (r < m).then_some(*r as usize),
            (GroupDescriptor::FiniteTable(t), BoxParams::Whole, GroupElement::TableIdx(i)) => {
                (*i < t.order()).then_some(*i)
            }
            _ => None,
        }
    }

    pub fn box_contains(&self, b: &BoxParams, g: &GroupElement) -> bool {
        self.box_index(b, g).is_some()
    }
}

/// Shape of a `Z[1/p] ⋊ Z` box `{(j·p^e(k), k) : |k| ≤ n, |j| ≤ J}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolvableBox {
    /// `e(k) = −n`: the plain rectangle.
    #[default]
    Rect,
    /// `e(k) = k − n`: layers scaled with `k`, which makes the boxes a left
    /// Følner sequence when `J = p^{2n}`.
    Skew,
}

impl SolvableBox {
    pub fn exponent(&self, k: i64, n: i64) -> i64 {
        match self {
            SolvableBox::Rect => -n,
            SolvableBox::Skew => k - n,
        }
    }
}

/// A finite window of group elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum BoxParams {
    /// `[lo, hi] ⊂ Z`.
    Interval { lo: i64, hi: i64 },
    /// Product of closed ranges in `Z^d`.
    Lattice { ranges: Vec<[i64; 2]> },
    /// `[lo, hi] × {−1, 1}`.
    Dihedral { lo: i64, hi: i64 },
    /// `{(j·p^e(k), k) : |k| ≤ n, |j| ≤ j}`.
    Solvable {
        n: u32,
        j: u64,
        #[serde(default)]
        form: SolvableBox,
    },
    /// All of a finite group.
    Whole,
}

impl BoxParams {
    /// The skewed `Z[1/p] ⋊ Z` box of scale `n` with `J = p^{2n}`.
    pub fn skew(p: u64, n: u32) -> Result<Self> {
        let j = p
            .checked_pow(2 * n)
            .ok_or_else(|| Error::resource(format!("p^(2n) overflows for p = {p}, n = {n}")))?;
        Ok(BoxParams::Solvable { n, j, form: SolvableBox::Skew })
    }

    pub fn rect(p: u64, n: u32) -> Result<Self> {
        let j = p
            .checked_pow(2 * n)
            .ok_or_else(|| Error::resource(format!("p^(2n) overflows for p = {p}, n = {n}")))?;
        Ok(BoxParams::Solvable { n, j, form: SolvableBox::Rect })
    }
}
