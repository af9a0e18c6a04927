use kneser_core::groups::{BoxParams, GroupDescriptor};
use kneser_core::ratio::Q;
use kneser_core::setspec::{self, SetExpr};
use kneser_core::structure::{detect_periodic_superset, find_periodic_run, spread_out_witness_z, verify_sturmian_containment};
use kneser_core::sturmian::{QuadIrr, SturmianSpec, TorusInterval};
use proptest::prelude::*;

fn sturmian(alpha: QuadIrr, lo: Q, hi: Q) -> SturmianSpec {
    SturmianSpec::new(alpha, TorusInterval::new(lo, hi).unwrap()).unwrap()
}

fn naive_run(mask: &[bool], lo: i64, m: u64, len: u64, range: (i64, i64)) -> Option<(i64, u64)> {
    let hi = lo + mask.len() as i64 - 1;
    let start = range.0.max(lo);
    let end = range.1.min(hi - len as i64 + 1);
    (start..=end)
        .find(|&x| (x..x + len as i64).step_by(m as usize).all(|y| mask[(y - lo) as usize]))
        .map(|x| (x, x.rem_euclid(m as i64) as u64))
}

#[test]
fn sturmian_sets_are_spread_out() {
    for alpha in [QuadIrr::golden(), QuadIrr::silver()] {
        for hi in [Q::new(1, 10), Q::new(3, 10), Q::new(1, 2), Q::new(4, 5)] {
            let c = SetExpr::sturmian(sturmian(alpha, Q::new(0, 1), hi));
            let v = spread_out_witness_z(&c, (-50_000, 50_000), 50).unwrap();
            assert!(v.spread_out, "alpha {alpha}, m(I) {hi}: {:?}", v.witness);
        }
    }
}

#[test]
fn thinned_periodic_sets_keep_their_superset() {
    let c = SetExpr::sturmian(sturmian(QuadIrr::golden(), Q::new(0, 1), Q::new(1, 2)));
    let a = SetExpr::intersect(vec![SetExpr::periodic(3, vec![1]), c]);
    let w = detect_periodic_superset(&a, (-30_000, 30_000), 12, None).unwrap();
    let three = w.iter().find(|w| w.m == 3).expect("mod 3 witness");
    assert_eq!(three.residues, vec![1]);
    assert!(!three.exact);
    // d*(A) is about 1/6 here, so 1/3 < 1/6 + 1/3 holds.
    assert!(three.margin);
    assert!(!spread_out_witness_z(&a, (-30_000, 30_000), 12).unwrap().spread_out);
}

#[test]
fn sumset_of_positive_sturmian_halves_has_no_long_runs() {
    let c = SetExpr::sturmian(sturmian(QuadIrr::golden(), Q::new(0, 1), Q::new(1, 5)));
    let pos = SetExpr::intersect(vec![c, SetExpr::naturals()]);
    let (lo, hi) = (-200_000, 200_000);
    let w = setspec::product_window(&GroupDescriptor::IntLine, &pos, &pos, &BoxParams::Interval { lo, hi }).unwrap();
    for m in 1..=6 {
        assert_eq!(find_periodic_run(&w, m, 2_000, (lo, hi)).unwrap(), None, "m = {m}");
    }
}

#[test]
fn positive_half_is_contained_in_its_sturmian_set() {
    let spec = sturmian(QuadIrr::silver(), Q::new(1, 10), Q::new(2, 5));
    let c = SetExpr::sturmian(spec.clone());
    let pos = SetExpr::intersect(vec![c, SetExpr::naturals()]);
    let v = verify_sturmian_containment(&pos, &spec, (-100_000, 100_000), 0.01).unwrap();
    assert!(v.pass, "{v:?}");
    let other = sturmian(QuadIrr::silver(), Q::new(1, 2), Q::new(4, 5));
    let v = verify_sturmian_containment(&pos, &other, (-100_000, 100_000), 0.01).unwrap();
    assert!(!v.contained);
    assert!(v.first_outside.unwrap() > 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn runs_agree_with_direct_scan(
        bits in proptest::collection::vec(prop::bool::weighted(0.8), 1..300),
        lo in -100i64..100,
        m in 1u64..6,
        len in 1u64..40,
    ) {
        let members: Vec<i64> = bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| lo + i as i64).collect();
        let hi = lo + bits.len() as i64 - 1;
        let w = setspec::materialize(&GroupDescriptor::IntLine, &SetExpr::ints(members), &BoxParams::Interval { lo, hi }).unwrap();
        let got = find_periodic_run(&w, m, len, (lo, hi)).unwrap().map(|r| (r.x, r.r));
        prop_assert_eq!(got, naive_run(&bits, lo, m, len, (lo, hi)));
    }

    #[test]
    fn periodic_sets_are_their_own_witness(m in 2u64..12, mask in 1u64..4095) {
        let residues: Vec<u64> = (0..m).filter(|r| mask >> r & 1 == 1).collect();
        prop_assume!(!residues.is_empty() && residues.len() < m as usize);
        let p = SetExpr::periodic(m, residues.clone());
        let w = detect_periodic_superset(&p, (-600, 600), m, None).unwrap();
        let own = w.iter().find(|w| w.m == m).expect("own period");
        prop_assert_eq!(&own.residues, &residues);
        prop_assert!(own.exact && own.margin);
        prop_assert!(!spread_out_witness_z(&p, (-600, 600), m).unwrap().spread_out);
    }
}
