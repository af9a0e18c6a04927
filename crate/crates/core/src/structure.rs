//! Structure detectors for integer sets on finite windows: periodic
//! supersets, spread-out certificates, periodic runs and Sturmian
//! containment.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::banach_density;
use crate::error::{Error, Result};
use crate::groups::{BoxParams, GroupDescriptor};
use crate::ratio;
use crate::setspec::{self, SetExpr, WindowSet};
use crate::sturmian::SturmianSpec;

/// A proper periodic set `P_m = {x : x mod m ∈ residues}` containing
/// `A ∩ window`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodicWitness {
    pub m: u64,
    pub residues: Vec<u64>,
    pub density: f64,
    /// `|P_m|/m < d*(A) + 1/m`.
    pub margin: bool,
    /// `A ∩ window = P_m ∩ window`.
    pub exact: bool,
}

fn window_mask(expr: &SetExpr, lo: i64, hi: i64) -> Result<WindowSet> {
    if hi < lo {
        return Err(Error::pre("empty window"));
    }
    setspec::materialize(&GroupDescriptor::IntLine, expr, &BoxParams::Interval { lo, hi })
}

/// Window length used for `d*` when none is given: one hundredth of the
/// window, at least 1.
pub fn default_banach_len(lo: i64, hi: i64) -> u64 {
    (((hi - lo + 1) / 100).max(1)) as u64
}

fn banach_upper(expr: &SetExpr, lo: i64, hi: i64, len: u64) -> Result<f64> {
    let len = len.min((hi - lo + 1) as u64).max(1);
    Ok(banach_density(&GroupDescriptor::IntLine, expr, true, len, (lo, hi + 1 - len as i64))?.value)
}

/// Residue sets of `A ∩ window` modulo `m = 1..=m_max` that are proper.
pub fn detect_periodic_superset(
    expr: &SetExpr,
    window: (i64, i64),
    m_max: u64,
    banach_len: Option<u64>,
) -> Result<Vec<PeriodicWitness>> {
    let (lo, hi) = window;
    let w = window_mask(expr, lo, hi)?;
    let d_star = banach_upper(expr, lo, hi, banach_len.unwrap_or_else(|| default_banach_len(lo, hi)))?;
    let members: Vec<i64> = w.int_members()?;
    let found: Vec<Option<PeriodicWitness>> = (1..=m_max)
        .into_par_iter()
        .map(|m| {
            let mut hit = vec![false; m as usize];
            for &x in &members {
                hit[x.rem_euclid(m as i64) as usize] = true;
            }
            let k = hit.iter().filter(|&&b| b).count();
            if k == m as usize {
                return None;
            }
            let residues: Vec<u64> = (0..m).filter(|&r| hit[r as usize]).collect();
            let density = k as f64 / m as f64;
            let exact = w
                .mask
                .iter()
                .enumerate()
                .all(|(i, &b)| b == hit[(lo + i as i64).rem_euclid(m as i64) as usize]);
            Some(PeriodicWitness { m, residues, density, margin: density < d_star + 1.0 / m as f64, exact })
        })
        .collect();
    Ok(found.into_iter().flatten().collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpreadVerdict {
    pub spread_out: bool,
    pub window: (i64, i64),
    pub m_max: u64,
    pub witness: Option<PeriodicWitness>,
}

/// Spread-out at scale: no proper periodic superset with the density margin
/// for `m ≤ m_max`.
pub fn spread_out_witness_z(expr: &SetExpr, window: (i64, i64), m_max: u64) -> Result<SpreadVerdict> {
    let witness = detect_periodic_superset(expr, window, m_max, None)?.into_iter().find(|w| w.margin);
    Ok(SpreadVerdict { spread_out: witness.is_none(), window, m_max, witness })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicRun {
    pub x: i64,
    pub r: u64,
}

/// `x ∈ range` and `r = x mod m` with `{y ∈ [x, x + L) : y ≡ r} ⊆ A`, the run
/// lying inside the materialized window.
pub fn find_periodic_run(a: &WindowSet, m: u64, len: u64, range: (i64, i64)) -> Result<Option<PeriodicRun>> {
    let BoxParams::Interval { lo, hi } = a.window else {
        return Err(Error::ty("periodic runs need an interval window"));
    };
    if m == 0 || len == 0 {
        return Err(Error::pre("m and L must be positive"));
    }
    let need = len.div_ceil(m) as usize;
    let step = m as usize;
    let x_hi = range.1.min(hi - len as i64 + 1);
    let x_lo = range.0.max(lo);
    if x_hi < x_lo {
        return Ok(None);
    }
    // run[i]: consecutive members at i, i + m, i + 2m, ... (computed backwards).
    let n = a.mask.len();
    let mut run = vec![0u32; n + step];
    for i in (0..n).rev() {
        run[i] = if a.mask[i] { run[i + step] + 1 } else { 0 };
    }
    let hit = (x_lo..=x_hi).find(|&x| run[(x - lo) as usize] as usize >= need);
    Ok(hit.map(|x| PeriodicRun { x, r: x.rem_euclid(m as i64) as u64 }))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContainmentVerdict {
    pub contained: bool,
    /// First member of `A` outside the candidate, if any.
    pub first_outside: Option<i64>,
    pub interval_measure: f64,
    pub banach_upper: f64,
    pub density_ok: bool,
    pub pass: bool,
}

/// `A ∩ window ⊆ candidate` and `|m(I) − d*(A)| ≤ tol`.
pub fn verify_sturmian_containment(
    expr: &SetExpr,
    candidate: &SturmianSpec,
    window: (i64, i64),
    tol: f64,
) -> Result<ContainmentVerdict> {
    if candidate.twisted {
        return Err(Error::ty("containment is checked against untwisted Sturmian sets"));
    }
    let (lo, hi) = window;
    let a = window_mask(expr, lo, hi)?;
    let c = setspec::sturmian_members(candidate, &BoxParams::Interval { lo, hi })?;
    let first_outside = a.mask.iter().zip(&c.mask).position(|(&x, &y)| x && !y).map(|i| lo + i as i64);
    let d_star = banach_upper(expr, lo, hi, default_banach_len(lo, hi))?;
    let measure = ratio::to_f64(&candidate.interval.measure());
    let density_ok = (measure - d_star).abs() <= tol;
    Ok(ContainmentVerdict {
        contained: first_outside.is_none(),
        first_outside,
        interval_measure: measure,
        banach_upper: d_star,
        density_ok,
        pass: first_outside.is_none() && density_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::Q;
    use crate::sturmian::{QuadIrr, TorusInterval};

    fn spec(hi: (i64, i64)) -> SturmianSpec {
        SturmianSpec::new(QuadIrr::golden(), TorusInterval::new(Q::new(0, 1), Q::new(hi.0, hi.1)).unwrap()).unwrap()
    }

    #[test]
    fn periodic_examples() {
        let odd = SetExpr::periodic(2, vec![1]);
        let w = detect_periodic_superset(&odd, (-1000, 1000), 10, None).unwrap();
        assert_eq!(w[0].m, 2);
        assert_eq!(w[0].residues, vec![1]);
        assert!(w[0].margin && w[0].exact);
        let a = SetExpr::periodic(4, vec![0, 1]);
        let w = detect_periodic_superset(&a, (0, 999), 10, None).unwrap();
        assert_eq!(w[0].m, 4);
        assert_eq!(w[0].density, 0.5);
        let c = SetExpr::sturmian(spec((3, 10)));
        assert!(detect_periodic_superset(&c, (-1_000_000, 1_000_000), 50, None).unwrap().is_empty());
    }

    #[test]
    fn minimal_period_is_first_exact_witness() {
        for (m, res) in [(6u64, vec![0u64, 4]), (5, vec![1, 2, 3]), (12, vec![0, 3, 4, 8])] {
            let a = SetExpr::periodic(m, res);
            let w = detect_periodic_superset(&a, (0, 599), 600, None).unwrap();
            assert_eq!(w.iter().find(|w| w.exact).unwrap().m, m);
        }
    }

    #[test]
    fn spread_out_examples() {
        let c = SetExpr::sturmian(spec((3, 10)));
        assert!(spread_out_witness_z(&c, (-100_000, 100_000), 50).unwrap().spread_out);
        let v = spread_out_witness_z(&SetExpr::periodic(2, vec![0]), (-1000, 1000), 50).unwrap();
        assert_eq!(v.witness.unwrap().m, 2);
    }

    #[test]
    fn periodic_run_examples() {
        let d = GroupDescriptor::IntLine;
        let n = setspec::materialize(&d, &SetExpr::naturals(), &BoxParams::Interval { lo: -50, hi: 200 }).unwrap();
        assert_eq!(find_periodic_run(&n, 1, 30, (-50, 200)).unwrap(), Some(PeriodicRun { x: 1, r: 0 }));
        let evens = SetExpr::intersect(vec![SetExpr::periodic(2, vec![0]), SetExpr::ints(0..=1_000_000)]);
        let w = setspec::materialize(&d, &evens, &BoxParams::Interval { lo: 0, hi: 1_000_000 }).unwrap();
        assert_eq!(find_periodic_run(&w, 2, 10_000, (0, 1_000_000)).unwrap().unwrap().r, 0);
        assert!(find_periodic_run(&w, 1, 2, (0, 1_000_000)).unwrap().is_none());
    }

    #[test]
    fn runs_are_monotone_in_length() {
        let c = SetExpr::union(vec![SetExpr::sturmian(spec((1, 2))), SetExpr::periodic(3, vec![1])]);
        let w = setspec::materialize(&GroupDescriptor::IntLine, &c, &BoxParams::Interval { lo: 0, hi: 5000 }).unwrap();
        for m in 1..=6 {
            for l in [4, 8, 16, 64] {
                if let Some(r) = find_periodic_run(&w, m, l, (0, 4000)).unwrap() {
                    for l2 in 1..l {
                        let r2 = find_periodic_run(&w, m, l2, (r.x, r.x)).unwrap();
                        assert_eq!(r2, Some(r.clone()));
                    }
                }
            }
        }
    }

    #[test]
    fn containment_examples() {
        let s = spec((3, 10));
        let c = SetExpr::sturmian(s.clone());
        assert!(verify_sturmian_containment(&c, &s, (-100_000, 100_000), 0.01).unwrap().pass);
        let small = SetExpr::sturmian(spec((1, 5)));
        let v = verify_sturmian_containment(&small, &spec((1, 2)), (-100_000, 100_000), 0.01).unwrap();
        assert!(v.contained && !v.density_ok && !v.pass);
        let v = verify_sturmian_containment(&SetExpr::periodic(2, vec![0]), &spec((1, 2)), (0, 10_000), 0.01).unwrap();
        assert!(!v.contained);
    }
}
