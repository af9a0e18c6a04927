//! Built-in finite groups: every group of order at most 16, up to
//! isomorphism, plus a few constructors.

use super::finite::FiniteGroup;

pub fn cyclic(n: usize) -> FiniteGroup {
    let rows = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    FiniteGroup::from_table(format!("Z{n}"), rows, None).expect("cyclic table is a group")
}

pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> FiniteGroup {
    let (m, n) = (g.order(), h.order());
    let rows = (0..m * n)
        .map(|x| (0..m * n).map(|y| g.mul(x / n, y / n) * n + h.mul(x % n, y % n)).collect())
        .collect();
    FiniteGroup::from_table(format!("{}x{}", g.name(), h.name()), rows, None).expect("product of groups")
}

fn product_of(parts: &[usize], name: &str) -> FiniteGroup {
    let mut g = cyclic(parts[0]);
    for &k in &parts[1..] {
        g = direct_product(&g, &cyclic(k));
    }
    g.with_name(name)
}

/// Dihedral group of the regular `n`-gon, of order `2n`.
pub fn dihedral(n: usize) -> FiniteGroup {
    let n = n as i64;
    let mul = |a: &(i64, u8), b: &(i64, u8)| {
        let r = if a.1 == 0 { a.0 + b.0 } else { a.0 - b.0 };
        (r.rem_euclid(n), a.1 ^ b.1)
    };
    FiniteGroup::from_generators(format!("D{n}"), (0, 0), &[(1 % n, 0), (0, 1)], mul).expect("dihedral group")
}

/// Dicyclic group of order `4n`; `n = 2` is the quaternion group.
pub fn dicyclic(n: usize) -> FiniteGroup {
    let n = n as i64;
    let mul = |a: &(i64, u8), b: &(i64, u8)| match (a.1, b.1) {
        (0, e) => ((a.0 + b.0).rem_euclid(2 * n), e),
        (_, 0) => ((a.0 - b.0).rem_euclid(2 * n), 1),
        _ => ((a.0 - b.0 + n).rem_euclid(2 * n), 0),
    };
    let name = match n {
        2 => "Q8".to_string(),
        4 => "Q16".to_string(),
        _ => format!("Dic{n}"),
    };
    FiniteGroup::from_generators(name, (0, 0), &[(1, 0), (0, 1)], mul).expect("dicyclic group")
}

pub fn quaternion() -> FiniteGroup {
    dicyclic(2)
}

/// `Z_m ⋊ Z_n` with the generator of `Z_n` acting by `x ↦ r·x`.
pub fn metacyclic(m: usize, n: usize, r: usize, name: &str) -> FiniteGroup {
    let (m, n, r) = (m as u64, n as u64, r as u64);
    let pow = |k: u64| (0..k).fold(1u64, |acc, _| acc * r % m);
    assert_eq!(pow(n), 1 % m, "r^n must be 1 mod m");
    let mul = |a: &(u64, u64), b: &(u64, u64)| ((a.0 + pow(a.1) * b.0) % m, (a.1 + b.1) % n);
    FiniteGroup::from_generators(name, (0, 0), &[(1, 0), (0, 1 % n)], mul).expect("metacyclic group")
}

fn compose(p: &[u8], q: &[u8]) -> Vec<u8> {
    q.iter().map(|&i| p[i as usize]).collect()
}

/// Symmetric group on `n ≤ 5` points.
pub fn symmetric(n: usize) -> FiniteGroup {
    let id: Vec<u8> = (0..n as u8).collect();
    let mut swap = id.clone();
    if n > 1 {
        swap.swap(0, 1);
    }
    let cycle: Vec<u8> = (0..n as u8).map(|i| (i + 1) % n as u8).collect();
    FiniteGroup::from_generators(format!("S{n}"), id, &[swap, cycle], |p, q| compose(p, q)).expect("symmetric group")
}

pub fn alternating4() -> FiniteGroup {
    FiniteGroup::from_generators("A4", vec![0, 1, 2, 3], &[vec![1, 2, 0, 3], vec![1, 0, 3, 2]], |p, q| compose(p, q))
        .expect("alternating group")
}

type Gauss = (i64, i64);
type Mat = [Gauss; 4];

fn gmul(a: Gauss, b: Gauss) -> Gauss {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn gadd(a: Gauss, b: Gauss) -> Gauss {
    (a.0 + b.0, a.1 + b.1)
}

fn matmul(a: &Mat, b: &Mat) -> Mat {
    [
        gadd(gmul(a[0], b[0]), gmul(a[1], b[2])),
        gadd(gmul(a[0], b[1]), gmul(a[1], b[3])),
        gadd(gmul(a[2], b[0]), gmul(a[3], b[2])),
        gadd(gmul(a[2], b[1]), gmul(a[3], b[3])),
    ]
}

/// The group generated by the Pauli matrices `X, Y, Z` (order 16).
pub fn pauli() -> FiniteGroup {
    let id: Mat = [(1, 0), (0, 0), (0, 0), (1, 0)];
    let x: Mat = [(0, 0), (1, 0), (1, 0), (0, 0)];
    let y: Mat = [(0, 0), (0, -1), (0, 1), (0, 0)];
    let z: Mat = [(1, 0), (0, 0), (0, 0), (-1, 0)];
    FiniteGroup::from_generators("Pauli", id, &[x, y, z], matmul).expect("Pauli group")
}

/// `(Z_2 × Z_2) ⋊ Z_4`, the generator of `Z_4` swapping the two factors.
pub fn z2sq_by_z4() -> FiniteGroup {
    let swap = |v: u8, k: u8| if k % 2 == 1 { ((v & 1) << 1) | (v >> 1) } else { v };
    let mul = |a: &(u8, u8), b: &(u8, u8)| (a.0 ^ swap(b.0, a.1), (a.1 + b.1) % 4);
    FiniteGroup::from_generators("Z2^2:Z4", (0, 0), &[(1, 0), (0, 1)], mul).expect("semidirect product")
}

/// All groups of the given order (up to isomorphism), for orders `1..=16`.
pub fn groups_of_order(n: usize) -> Vec<FiniteGroup> {
    match n {
        4 => vec![cyclic(4), product_of(&[2, 2], "Z2xZ2")],
        6 => vec![cyclic(6), symmetric(3)],
        8 => vec![
            cyclic(8),
            product_of(&[2, 4], "Z2xZ4"),
            product_of(&[2, 2, 2], "Z2^3"),
            dihedral(4),
            quaternion(),
        ],
        9 => vec![cyclic(9), product_of(&[3, 3], "Z3xZ3")],
        10 => vec![cyclic(10), dihedral(5)],
        12 => vec![cyclic(12), product_of(&[2, 6], "Z2xZ6"), alternating4(), dihedral(6), dicyclic(3)],
        14 => vec![cyclic(14), dihedral(7)],
        16 => vec![
            cyclic(16),
            product_of(&[4, 4], "Z4xZ4"),
            product_of(&[2, 8], "Z2xZ8"),
            product_of(&[2, 2, 4], "Z2^2xZ4"),
            product_of(&[2, 2, 2, 2], "Z2^4"),
            dihedral(8),
            dicyclic(4),
            metacyclic(8, 2, 3, "SD16"),
            metacyclic(8, 2, 5, "M16"),
            metacyclic(4, 4, 3, "Z4:Z4"),
            direct_product(&cyclic(2), &dihedral(4)).with_name("Z2xD4"),
            direct_product(&cyclic(2), &quaternion()).with_name("Z2xQ8"),
            pauli(),
            z2sq_by_z4(),
        ],
        1 | 2 | 3 | 5 | 7 | 11 | 13 | 15 => vec![cyclic(n)],
        _ => Vec::new(),
    }
}

/// Every group of order in `lo..=hi`.
pub fn groups_in_range(lo: usize, hi: usize) -> Vec<FiniteGroup> {
    (lo..=hi).flat_map(groups_of_order).collect()
}

/// Looks a group up by the name used in this library (for example `S3`,
/// `Q8`, `Z2xZ4`, `Dic3`).
pub fn by_name(name: &str) -> Option<FiniteGroup> {
    if let Some(rest) = name.strip_prefix('Z') {
        if let Ok(n) = rest.parse::<usize>() {
            return (1..=64).contains(&n).then(|| cyclic(n));
        }
    }
    if let Some(rest) = name.strip_prefix('D') {
        if let Ok(n) = rest.parse::<usize>() {
            return (1..=32).contains(&n).then(|| dihedral(n));
        }
    }
    if let Some(rest) = name.strip_prefix('S') {
        if let Ok(n) = rest.parse::<usize>() {
            return (1..=4).contains(&n).then(|| symmetric(n));
        }
    }
    if let Some(rest) = name.strip_prefix("Dic") {
        if let Ok(n) = rest.parse::<usize>() {
            return (1..=16).contains(&n).then(|| dicyclic(n));
        }
    }
    (1..=16).flat_map(groups_of_order).find(|g| g.name() == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::finite::bits;

    fn signature(g: &FiniteGroup) -> (bool, Vec<usize>, usize, usize, usize) {
        let mut orders: Vec<usize> = (0..g.order()).map(|x| g.element_order(x)).collect();
        orders.sort();
        let center = (0..g.order()).filter(|&a| (0..g.order()).all(|b| g.mul(a, b) == g.mul(b, a))).count();
        (g.is_abelian(), orders, center, g.subgroups().len(), g.normal_subgroups().len())
    }

    #[test]
    fn orders_and_counts() {
        let counts = [1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5, 1, 2, 1, 14];
        for (i, &c) in counts.iter().enumerate() {
            let gs = groups_of_order(i + 1);
            assert_eq!(gs.len(), c, "order {}", i + 1);
            for g in &gs {
                assert_eq!(g.order(), i + 1, "{}", g.name());
            }
        }
    }

    #[test]
    fn groups_of_each_order_are_pairwise_non_isomorphic() {
        for n in 1..=16 {
            let sigs: Vec<_> = groups_of_order(n).iter().map(signature).collect();
            for i in 0..sigs.len() {
                for j in 0..i {
                    assert_ne!(sigs[i], sigs[j], "order {n}: groups {i} and {j} look isomorphic");
                }
            }
        }
    }

    #[test]
    fn named_lookups() {
        assert_eq!(by_name("S3").unwrap().order(), 6);
        assert_eq!(by_name("Q8").unwrap().order(), 8);
        assert!(!by_name("Q8").unwrap().is_abelian());
        assert_eq!(by_name("Z2xZ4").unwrap().order(), 8);
        assert_eq!(by_name("Pauli").unwrap().order(), 16);
        assert!(by_name("nope").is_none());
    }

    #[test]
    fn quaternion_has_one_involution() {
        let q = quaternion();
        let involutions = (0..8).filter(|&g| q.element_order(g) == 2).count();
        assert_eq!(involutions, 1);
        let center: u64 = (0..8).filter(|&a| (0..8).all(|b| q.mul(a, b) == q.mul(b, a))).map(|a| 1u64 << a).sum();
        assert_eq!(bits(center).count(), 2);
    }
}
