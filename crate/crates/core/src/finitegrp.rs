//! Product sets of subsets of finite groups: Kemperman and Kneser structure
//! checks, reductions to quotients, the `I₁` enlargement, stabilizers and
//! spread-out tests. Subsets are `u64` bit masks over table indices.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{bits, quotients_of, FiniteGroup, Quotient};

/// Largest order scanned over all subset pairs.
pub const EXHAUSTIVE_BOUND: usize = 8;
/// Default number of sampled pairs for larger groups.
pub const DEFAULT_SAMPLES: u64 = 100_000;
pub const DEFAULT_SEED: u64 = 0x5eed;

fn check_mask(k: &FiniteGroup, m: u64) -> Result<()> {
    if m & !k.full_mask() != 0 {
        return Err(Error::input(format!("mask {m:#x} has bits beyond order {}", k.order())));
    }
    Ok(())
}

/// `I⁻¹J`.
pub fn product_mask(k: &FiniteGroup, i: u64, j: u64) -> u64 {
    bits(i).fold(0, |acc, x| acc | k.left_translate(k.inv(x), j))
}

/// `IJ`.
pub fn product_ij(k: &FiniteGroup, i: u64, j: u64) -> u64 {
    bits(i).fold(0, |acc, x| acc | k.left_translate(x, j))
}

/// `IJ⁻¹`.
pub fn product_ij_inv(k: &FiniteGroup, i: u64, j: u64) -> u64 {
    product_ij(k, i, k.inverse_mask(j))
}

/// `{g : gI = I}`.
pub fn stabilizer_mask(k: &FiniteGroup, i: u64) -> u64 {
    let s = (0..k.order()).filter(|&g| k.left_translate(g, i) == i).fold(0u64, |acc, g| acc | 1 << g);
    debug_assert!(k.is_subgroup(s));
    s
}

/// `I·U = K` for every proper subgroup `U`, the trivial one included.
pub fn spread_out_mask(k: &FiniteGroup, i: u64) -> bool {
    spread_out_with(k, &proper_subgroups(k), i)
}

fn proper_subgroups(k: &FiniteGroup) -> Vec<u64> {
    k.subgroups().into_iter().filter(|&u| u != k.full_mask()).collect()
}

fn spread_out_with(k: &FiniteGroup, proper: &[u64], i: u64) -> bool {
    proper.iter().all(|&u| product_ij(k, i, u) == k.full_mask())
}

/// `|X|/|K| = |Y|/|M|` compared exactly.
fn same_measure(x: u64, kn: usize, y: u64, mn: usize) -> bool {
    x.count_ones() as usize * mn == y.count_ones() as usize * kn
}

/// A quotient `M = K/N` with projected sets `I_o = p(I)`, `J_o = p(J)`,
/// both proper, and `m_K(I⁻¹J) = m_M(I_o⁻¹J_o)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionWitness {
    pub normal: u64,
    pub quotient_order: usize,
    pub projection: Vec<usize>,
    pub i_o: u64,
    pub j_o: u64,
}

impl ReductionWitness {
    /// Re-checks every defining property against `K`, `I`, `J` and `M`.
    pub fn verify(&self, k: &FiniteGroup, m: &FiniteGroup, i: u64, j: u64) -> bool {
        let proj = |s: u64| bits(s).fold(0u64, |acc, x| acc | 1 << self.projection[x]);
        let pre = |s: u64| (0..k.order()).filter(|&x| s >> self.projection[x] & 1 == 1).fold(0u64, |a, x| a | 1 << x);
        m.order() == self.quotient_order
            && self.i_o == proj(i)
            && self.j_o == proj(j)
            && i & !pre(self.i_o) == 0
            && j & !pre(self.j_o) == 0
            && self.i_o != m.full_mask()
            && self.j_o != m.full_mask()
            && same_measure(product_mask(k, i, j), k.order(), product_mask(m, self.i_o, self.j_o), m.order())
    }
}

/// First quotient (smallest `M`) giving a reduction of `(I, J)`.
pub fn find_reduction(k: &FiniteGroup, quotients: &[Quotient], i: u64, j: u64) -> Option<ReductionWitness> {
    let prod = product_mask(k, i, j);
    quotients.iter().find_map(|q| {
        let m = &q.group;
        let i_o = k.project(q, i);
        let j_o = k.project(q, j);
        let ok = i_o != m.full_mask()
            && j_o != m.full_mask()
            && same_measure(prod, k.order(), product_mask(m, i_o, j_o), m.order());
        ok.then(|| ReductionWitness {
            normal: q.normal,
            quotient_order: m.order(),
            projection: q.projection.clone(),
            i_o,
            j_o,
        })
    })
}

/// `I₁` with `I₁⁻¹ = ∩_{y ∈ J_o} (I_o⁻¹J_o)·y⁻¹`.
pub fn enlarge_i1(m: &FiniteGroup, i_o: u64, j_o: u64) -> Result<u64> {
    check_mask(m, i_o)?;
    check_mask(m, j_o)?;
    if j_o == 0 {
        return Err(Error::pre("J_o must be nonempty"));
    }
    let p = product_mask(m, i_o, j_o);
    let inv_i1 = bits(j_o).fold(m.full_mask(), |acc, y| acc & m.right_translate(p, m.inv(y)));
    Ok(m.inverse_mask(inv_i1))
}

/// Checks `I_o ⊆ I₁`, `I₁⁻¹J_o = I_o⁻¹J_o` and, for every `s`,
/// `s⁻¹J_o ⊆ I_o⁻¹J_o ⟹ s ∈ I₁`.
pub fn i1_postconditions(m: &FiniteGroup, i_o: u64, j_o: u64) -> Result<bool> {
    let i1 = enlarge_i1(m, i_o, j_o)?;
    let p = product_mask(m, i_o, j_o);
    let maximal = (0..m.order()).all(|s| {
        let moved = m.left_translate(m.inv(s), j_o);
        moved & !p != 0 || i1 >> s & 1 == 1
    });
    Ok(i_o & !i1 == 0 && product_mask(m, i1, j_o) == p && maximal)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ScanMode {
    Exhaustive,
    Sampled { pairs: u64, seed: u64 },
}

impl ScanMode {
    /// Exhaustive up to [`EXHAUSTIVE_BOUND`], sampled beyond.
    pub fn default_for(order: usize) -> Self {
        if order <= EXHAUSTIVE_BOUND {
            ScanMode::Exhaustive
        } else {
            ScanMode::Sampled { pairs: DEFAULT_SAMPLES, seed: DEFAULT_SEED }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub i: u64,
    pub j: u64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KempermanReport {
    pub group: String,
    pub order: usize,
    pub scan: ScanMode,
    pub pairs_checked: u64,
    /// Pairs with `m(I⁻¹J) < min(1, m(I) + m(J))`.
    pub small_pairs: u64,
    pub violations: u64,
    pub first_violation: Option<Violation>,
    /// Distinct quotient orders used by the witnesses.
    pub witness_orders: Vec<usize>,
}

impl KempermanReport {
    pub fn pass(&self) -> bool {
        self.violations == 0
    }
}

/// Nonempty pairs `(I, J)` visited by a scan.
fn pairs(k: &FiniteGroup, scan: ScanMode) -> Vec<(u64, u64)> {
    let full = k.full_mask();
    match scan {
        ScanMode::Exhaustive => (1..=full).flat_map(|i| (1..=full).map(move |j| (i, j))).collect(),
        ScanMode::Sampled { pairs, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ k.order() as u64);
            let n = k.order();
            let pick = |rng: &mut ChaCha8Rng| {
                let size = rng.gen_range(1..=n);
                let mut idx: Vec<usize> = (0..n).collect();
                let (chosen, _) = idx.partial_shuffle(rng, size);
                chosen.iter().fold(0u64, |acc, &x| acc | 1 << x)
            };
            (0..pairs).map(|_| (pick(&mut rng), pick(&mut rng))).collect()
        }
    }
}

fn small(k: &FiniteGroup, i: u64, j: u64, prod: u64) -> bool {
    let n = k.order() as u32;
    let p = prod.count_ones();
    p < n && p < i.count_ones() + j.count_ones()
}

#[derive(Default)]
struct Tally {
    checked: u64,
    small: u64,
    violations: u64,
    first: Option<Violation>,
    orders: Vec<usize>,
}

impl Tally {
    fn merge(mut self, o: Tally) -> Tally {
        self.checked += o.checked;
        self.small += o.small;
        self.violations += o.violations;
        if self.first.is_none() {
            self.first = o.first;
        }
        for x in o.orders {
            if !self.orders.contains(&x) {
                self.orders.push(x);
            }
        }
        self
    }

    fn fail(&mut self, i: u64, j: u64, reason: &str) {
        self.violations += 1;
        if self.first.is_none() {
            self.first = Some(Violation { i, j, reason: reason.to_string() });
        }
    }
}

fn scan<F>(k: &FiniteGroup, scan: ScanMode, check: F) -> KempermanReport
where
    F: Fn(u64, u64, u64, &mut Tally) + Sync,
{
    let list = pairs(k, scan);
    let t = list
        .par_chunks(4096)
        .map(|chunk| {
            let mut t = Tally::default();
            for &(i, j) in chunk {
                t.checked += 1;
                let prod = product_mask(k, i, j);
                if small(k, i, j, prod) {
                    t.small += 1;
                    check(i, j, prod, &mut t);
                }
            }
            t
        })
        .reduce(Tally::default, Tally::merge);
    let mut orders = t.orders;
    orders.sort_unstable();
    KempermanReport {
        group: k.name().to_string(),
        order: k.order(),
        scan,
        pairs_checked: t.checked,
        small_pairs: t.small,
        violations: t.violations,
        first_violation: t.first,
        witness_orders: orders,
    }
}

/// For every nonempty pair with `m(I⁻¹J) < 1` and `m(I⁻¹J) < m(I) + m(J)`:
/// neither set is spread-out, a reduction exists, and the enlargement `I₁`
/// of the witness satisfies its postconditions.
pub fn kemperman_verify(k: &FiniteGroup, mode: ScanMode) -> Result<KempermanReport> {
    let quotients = quotients_of(k)?;
    let proper = proper_subgroups(k);
    let by_normal: Vec<(u64, &FiniteGroup)> = quotients.iter().map(|q| (q.normal, &q.group)).collect();
    Ok(scan(k, mode, |i, j, _prod, t| {
        if spread_out_with(k, &proper, i) || spread_out_with(k, &proper, j) {
            return t.fail(i, j, "spread-out set with a small product");
        }
        let Some(w) = find_reduction(k, &quotients, i, j) else {
            return t.fail(i, j, "no reduction");
        };
        let m = by_normal.iter().find(|(n, _)| *n == w.normal).expect("witness quotient").1;
        if !w.verify(k, m, i, j) {
            return t.fail(i, j, "witness does not verify");
        }
        match i1_postconditions(m, w.i_o, w.j_o) {
            Ok(true) => {}
            _ => return t.fail(i, j, "I1 postconditions"),
        }
        if !t.orders.contains(&w.quotient_order) {
            t.orders.push(w.quotient_order);
        }
    }))
}

/// For abelian `K` and every nonempty pair with a small product: a quotient
/// `M` with `Stab_M(I_o)` trivial and
/// `m_M(I_o⁻¹J_o) = m_M(I_o) + m_M(J_o) − 1/|M|`.
pub fn kneser_abelian_verify(k: &FiniteGroup, mode: ScanMode) -> Result<KempermanReport> {
    if !k.is_abelian() {
        return Err(Error::pre(format!("{} is not abelian", k.name())));
    }
    let quotients = quotients_of(k)?;
    Ok(scan(k, mode, |i, j, prod, t| {
        // The stabilizer of the product set gives the witness; other
        // quotients are tried only if it fails.
        let h = stabilizer_mask(k, prod);
        let first = quotients.iter().position(|q| q.normal == h);
        let order = first.into_iter().chain(0..quotients.len());
        let found = order.map(|idx| &quotients[idx]).find(|q| kneser_holds(k, q, i, j));
        match found {
            Some(q) => {
                if !t.orders.contains(&q.group.order()) {
                    t.orders.push(q.group.order());
                }
            }
            None => t.fail(i, j, "no quotient with Kneser equality"),
        }
    }))
}

fn kneser_holds(k: &FiniteGroup, q: &Quotient, i: u64, j: u64) -> bool {
    let m = &q.group;
    let i_o = k.project(q, i);
    let j_o = k.project(q, j);
    let p = product_mask(m, i_o, j_o).count_ones();
    stabilizer_mask(m, i_o) == 1 << m.identity()
        && same_measure(product_mask(k, i, j), k.order(), product_mask(m, i_o, j_o), m.order())
        && p + 1 == i_o.count_ones() + j_o.count_ones()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct I1Report {
    pub group: String,
    pub pairs: u64,
    pub failures: u64,
}

/// `I₁` postconditions for every `(I_o, J_o)` with `J_o ≠ ∅`.
pub fn verify_i1_closure(m: &FiniteGroup) -> Result<I1Report> {
    if m.order() > EXHAUSTIVE_BOUND {
        return Err(Error::resource(format!("exhaustive I1 scan limited to order {EXHAUSTIVE_BOUND}")));
    }
    let full = m.full_mask();
    let failures = (0..=full)
        .into_par_iter()
        .map(|i| (1..=full).filter(|&j| !i1_postconditions(m, i, j).unwrap_or(false)).count() as u64)
        .sum();
    Ok(I1Report { group: m.name().to_string(), pairs: (full + 1) * full, failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::library::{by_name, cyclic};

    fn mask(xs: &[usize]) -> u64 {
        xs.iter().fold(0, |a, &x| a | 1 << x)
    }

    #[test]
    fn product_examples() {
        let z6 = cyclic(6);
        assert_eq!(product_mask(&z6, mask(&[0, 2, 4]), mask(&[0, 2, 4])), mask(&[0, 2, 4]));
        let z5 = cyclic(5);
        assert_eq!(product_mask(&z5, mask(&[0, 1]), mask(&[0, 1])), mask(&[4, 0, 1]));
        let s3 = by_name("S3").unwrap();
        for j in 1..64u64 {
            assert_eq!(product_mask(&s3, 1 << s3.identity(), j), j);
        }
    }

    #[test]
    fn products_match_pairwise_oracle() {
        for k in crate::groups::library::groups_in_range(1, 6) {
            let full = k.full_mask();
            for i in 0..=full {
                for j in 0..=full {
                    let mut want = 0u64;
                    let mut ij = 0u64;
                    for a in bits(i) {
                        for b in bits(j) {
                            want |= 1 << k.mul(k.inv(a), b);
                            ij |= 1 << k.mul(a, b);
                        }
                    }
                    assert_eq!(product_mask(&k, i, j), want);
                    assert_eq!(product_ij(&k, i, j), ij);
                }
            }
        }
    }

    #[test]
    fn reduction_examples() {
        let z6 = cyclic(6);
        let qs = quotients_of(&z6).unwrap();
        let w = find_reduction(&z6, &qs, mask(&[0, 2, 4]), mask(&[0, 2, 4])).unwrap();
        assert_eq!(w.normal, mask(&[0, 2, 4]));
        assert_eq!(w.quotient_order, 2);
        assert_eq!(w.i_o, 1);
        let z5 = cyclic(5);
        let qs = quotients_of(&z5).unwrap();
        let w = find_reduction(&z5, &qs, mask(&[0, 1]), mask(&[0, 1])).unwrap();
        assert_eq!(w.quotient_order, 5);
        assert!(find_reduction(&z5, &qs, z5.full_mask(), mask(&[0])).is_none());
    }

    #[test]
    fn i1_examples() {
        let z5 = cyclic(5);
        assert_eq!(enlarge_i1(&z5, mask(&[0, 1]), mask(&[0, 1])).unwrap(), mask(&[0, 1]));
        let z4 = cyclic(4);
        assert_eq!(enlarge_i1(&z4, mask(&[0, 1]), mask(&[0, 2])).unwrap(), z4.full_mask());
        assert_eq!(enlarge_i1(&z4, mask(&[1, 3]), mask(&[0])).unwrap(), mask(&[1, 3]));
        assert!(enlarge_i1(&z4, 1, 0).is_err());
    }

    #[test]
    fn stabilizer_and_spread_out() {
        let z6 = cyclic(6);
        assert_eq!(stabilizer_mask(&z6, z6.full_mask()), z6.full_mask());
        assert_eq!(stabilizer_mask(&z6, mask(&[0, 2, 4])), mask(&[0, 2, 4]));
        assert_eq!(stabilizer_mask(&cyclic(5), mask(&[0, 1])), 1);
        let z4 = cyclic(4);
        assert!(spread_out_mask(&z4, z4.full_mask()));
        assert!(!spread_out_mask(&z4, mask(&[0, 2])));
        assert!(!spread_out_mask(&z4, mask(&[0, 1])));
    }

    #[test]
    fn kemperman_small_groups() {
        for name in ["Z6", "S3"] {
            let r = kemperman_verify(&by_name(name).unwrap(), ScanMode::Exhaustive).unwrap();
            assert!(r.pass(), "{r:?}");
            assert!(r.small_pairs > 0);
        }
        let q8 = by_name("Q8").unwrap();
        let r = kemperman_verify(&q8, ScanMode::Sampled { pairs: 2000, seed: 1 }).unwrap();
        assert!(r.pass());
    }

    #[test]
    fn kneser_examples() {
        for n in 2..=7 {
            let r = kneser_abelian_verify(&cyclic(n), ScanMode::Exhaustive).unwrap();
            assert!(r.pass(), "{r:?}");
        }
        assert!(kneser_abelian_verify(&by_name("S3").unwrap(), ScanMode::Exhaustive).is_err());
    }

    #[test]
    fn i1_closure_small() {
        let r = verify_i1_closure(&by_name("S3").unwrap()).unwrap();
        assert_eq!(r.failures, 0);
    }

    #[test]
    fn sampling_is_deterministic() {
        let k = cyclic(10);
        let mode = ScanMode::Sampled { pairs: 500, seed: 9 };
        assert_eq!(kemperman_verify(&k, mode).unwrap(), kemperman_verify(&k, mode).unwrap());
    }
}
