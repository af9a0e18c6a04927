//! Finite groups given by Cayley tables, with subgroup and quotient
//! enumeration.
//!
//! Text format: a line `order n`, then `n` rows of `n` zero-based indices
//! separated by single spaces, then an optional row of `n` labels.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;
use std::hash::Hash;

use crate::error::{Error, Result};

/// Largest order supported by the `u64` subset masks.
pub const MAX_ORDER: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl FiniteGroup {
    /// Validates closure, identity, inverses and associativity.
    pub fn from_table(name: impl Into<String>, rows: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::input("Cayley table is empty"));
        }
        if n > MAX_ORDER {
            return Err(Error::resource(format!("group order {n} exceeds {MAX_ORDER}")));
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(Error::input(format!("expected {n} labels, found {}", l.len())));
            }
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::input(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            for &v in row {
                if v >= n {
                    return Err(Error::input(format!("entry {v} in row {i} is out of range")));
                }
            }
            table.extend_from_slice(row);
        }
        let mul = |a: usize, b: usize| table[a * n + b];
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| mul(e, g) == g && mul(g, e) == g))
            .ok_or_else(|| Error::input("Cayley table has no identity"))?;
        let mut inverse = vec![usize::MAX; n];
        for (g, slot) in inverse.iter_mut().enumerate() {
            let h = (0..n)
                .find(|&h| mul(g, h) == identity && mul(h, g) == identity)
                .ok_or_else(|| Error::input(format!("element {g} has no inverse")))?;
            *slot = h;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = mul(a, b);
                for c in 0..n {
                    if mul(ab, c) != mul(a, mul(b, c)) {
                        return Err(Error::input(format!("table is not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(FiniteGroup { name: name.into(), order: n, table, identity, inverse, labels })
    }

    /// Closure of `gens` under `mul`; element 0 is the identity `id`.
    pub fn from_generators<T, F>(name: impl Into<String>, id: T, gens: &[T], mul: F) -> Result<Self>
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        let mut elems = vec![id.clone()];
        let mut index: HashMap<T, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in gens {
                let x = mul(&elems[i], g);
                if !index.contains_key(&x) {
                    if elems.len() >= MAX_ORDER {
                        return Err(Error::resource("generated group exceeds the supported order"));
                    }
                    index.insert(x.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(x);
                }
            }
        }
        let rows = elems
            .iter()
            .map(|a| elems.iter().map(|b| index[&mul(a, b)]).collect())
            .collect();
        Self::from_table(name, rows, None)
    }

    pub fn parse(name: impl Into<String>, text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::parse("empty Cayley table file"))?;
        let n: usize = header
            .trim()
            .strip_prefix("order")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| Error::parse(format!("expected 'order n', found {header:?}")))?;
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let line = lines.next().ok_or_else(|| Error::parse(format!("missing table row {i}")))?;
            let row = line
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| Error::parse(format!("bad index {t:?} in row {i}"))))
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        let labels = lines.next().map(|l| l.split_whitespace().map(str::to_owned).collect());
        if let Some(extra) = lines.next() {
            return Err(Error::parse(format!("unexpected trailing line {extra:?}")));
        }
        Self::from_table(name, rows, labels).map_err(|e| match e {
            Error::Input(m) => Error::Parse(m),
            other => other,
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("order {}\n", self.order);
        for a in 0..self.order {
            let row: Vec<String> = (0..self.order).map(|b| self.mul(a, b).to_string()).collect();
            let _ = writeln!(s, "{}", row.join(" "));
        }
        if let Some(l) = &self.labels {
            let _ = writeln!(s, "{}", l.join(" "));
        }
        s
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.order {
            return Err(Error::input("label count does not match the order"));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn full_mask(&self) -> u64 {
        if self.order == 64 {
            u64::MAX
        } else {
            (1u64 << self.order) - 1
        }
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// Subgroup generated by the elements of `mask`.
    pub fn closure(&self, mask: u64) -> u64 {
        let mut h = mask | (1u64 << self.identity);
        loop {
            let mut next = h;
            for a in bits(h) {
                for b in bits(h) {
                    next |= 1u64 << self.mul(a, b);
                }
            }
            if next == h {
                return h;
            }
            h = next;
        }
    }

    pub fn is_subgroup(&self, mask: u64) -> bool {
        mask & (1u64 << self.identity) != 0
            && bits(mask).all(|a| bits(mask).all(|b| mask & (1u64 << self.mul(a, self.inv(b))) != 0))
    }

    /// Every subgroup, as masks, sorted by size then value.
    pub fn subgroups(&self) -> Vec<u64> {
        let cyclic: BTreeSet<u64> = (0..self.order).map(|g| self.closure(1u64 << g)).collect();
        let mut all = cyclic.clone();
        let mut frontier: Vec<u64> = cyclic.iter().copied().collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &h in &frontier {
                for &c in &cyclic {
                    let j = self.closure(h | c);
                    if all.insert(j) {
                        next.push(j);
                    }
                }
            }
            frontier = next;
        }
        let mut v: Vec<u64> = all.into_iter().collect();
        v.sort_by_key(|m| (m.count_ones(), *m));
        v
    }

    pub fn is_normal(&self, h: u64) -> bool {
        (0..self.order).all(|g| {
            bits(h).all(|x| h & (1u64 << self.mul(self.mul(g, x), self.inv(g))) != 0)
        })
    }

    pub fn normal_subgroups(&self) -> Vec<u64> {
        self.subgroups().into_iter().filter(|&h| self.is_normal(h)).collect()
    }

    /// Left-translate of a mask: `g·S`.
    pub fn left_translate(&self, g: usize, s: u64) -> u64 {
        bits(s).fold(0, |acc, x| acc | 1u64 << self.mul(g, x))
    }

    pub fn right_translate(&self, s: u64, g: usize) -> u64 {
        bits(s).fold(0, |acc, x| acc | 1u64 << self.mul(x, g))
    }

    pub fn inverse_mask(&self, s: u64) -> u64 {
        bits(s).fold(0, |acc, x| acc | 1u64 << self.inv(x))
    }

    /// Quotient `K/H` with its projection, verified to be a surjective
    /// homomorphism.
    pub fn quotient(&self, h: u64) -> Result<Quotient> {
        if !self.is_subgroup(h) || !self.is_normal(h) {
            return Err(Error::input("quotient needs a normal subgroup"));
        }
        let mut projection = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        // Identity coset first so the quotient identity is index 0.
        for g in std::iter::once(self.identity).chain(0..self.order) {
            if projection[g] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(g);
            for x in bits(self.left_translate(g, h)) {
                projection[x] = id;
            }
        }
        let rows = reps
            .iter()
            .map(|&a| reps.iter().map(|&b| projection[self.mul(a, b)]).collect())
            .collect();
        let group = FiniteGroup::from_table(format!("{}/{:#x}", self.name, h), rows, None)?;
        for a in 0..self.order {
            for b in 0..self.order {
                if projection[self.mul(a, b)] != group.mul(projection[a], projection[b]) {
                    return Err(Error::input("coset projection is not a homomorphism"));
                }
            }
        }
        Ok(Quotient { normal: h, group, projection })
    }

    /// Projects a mask along a quotient map.
    pub fn project(&self, q: &Quotient, s: u64) -> u64 {
        bits(s).fold(0, |acc, x| acc | 1u64 << q.projection[x])
    }

    /// Preimage of a quotient mask.
    pub fn preimage(&self, q: &Quotient, s: u64) -> u64 {
        (0..self.order).filter(|&x| s & (1u64 << q.projection[x]) != 0).fold(0, |acc, x| acc | 1u64 << x)
    }
}

#[derive(Clone, Debug)]
pub struct Quotient {
    pub normal: u64,
    pub group: FiniteGroup,
    pub projection: Vec<usize>,
}

/// Default order bound for quotient enumeration.
pub const QUOTIENT_BOUND: usize = 16;

/// All quotients `K/H` by normal subgroups, smallest quotient first.
pub fn quotients_of(k: &FiniteGroup) -> Result<Vec<Quotient>> {
    quotients_of_bounded(k, QUOTIENT_BOUND)
}

pub fn quotients_of_bounded(k: &FiniteGroup, bound: usize) -> Result<Vec<Quotient>> {
    if k.order() > bound {
        return Err(Error::resource(format!("group order {} exceeds the bound {bound}", k.order())));
    }
    let mut qs = k.normal_subgroups().into_iter().map(|h| k.quotient(h)).collect::<Result<Vec<_>>>()?;
    qs.sort_by_key(|q| (q.group.order(), q.normal));
    Ok(qs)
}

/// Iterator over set bit positions.
pub fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::library;

    #[test]
    fn rejects_non_groups() {
        assert!(FiniteGroup::from_table("x", vec![vec![0, 0], vec![0, 1]], None).is_err());
        assert!(FiniteGroup::from_table("x", vec![vec![0, 1], vec![1, 1]], None).is_err());
        assert!(FiniteGroup::from_table("x", vec![vec![0, 2], vec![1, 0]], None).is_err());
    }

    #[test]
    fn text_round_trip_is_bit_exact() {
        let text = "order 3\n0 1 2\n1 2 0\n2 0 1\ne a b\n";
        let g = FiniteGroup::parse("z3", text).unwrap();
        assert_eq!(g.to_text(), text);
        assert_eq!(FiniteGroup::parse("z3", &g.to_text()).unwrap(), g);
        let s3 = library::symmetric(3);
        assert_eq!(FiniteGroup::parse(s3.name(), &s3.to_text()).unwrap(), s3);
        assert!(FiniteGroup::parse("bad", "order 2\n0 1\n").is_err());
    }

    #[test]
    fn z6_quotients() {
        let z6 = library::cyclic(6);
        let qs = quotients_of(&z6).unwrap();
        let mut normals: Vec<u64> = qs.iter().map(|q| q.normal).collect();
        normals.sort();
        assert_eq!(normals, vec![0b1, 0b1001, 0b10101, 0b111111]);
        let orders: Vec<usize> = qs.iter().map(|q| q.group.order()).collect();
        assert_eq!(orders, vec![1, 2, 3, 6]);
    }

    #[test]
    fn simple_and_nonabelian_quotients() {
        let z5 = library::cyclic(5);
        assert_eq!(quotients_of(&z5).unwrap().len(), 2);
        let s3 = library::symmetric(3);
        let sizes: Vec<u32> = s3.normal_subgroups().iter().map(|h| h.count_ones()).collect();
        assert_eq!(sizes, vec![1, 3, 6]);
        assert_eq!(s3.subgroups().len(), 6);
    }

    #[test]
    fn quotient_bound() {
        let big = library::cyclic(17);
        assert!(matches!(quotients_of(&big), Err(Error::Resource(_))));
    }
}
