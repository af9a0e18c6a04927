use kneser_core::groups::{BoxParams, GroupDescriptor};
use kneser_core::ratio::Q;
use kneser_core::scenarios::{self, convergence, run_named};
use kneser_core::setspec::{self, SetExpr};
use kneser_core::sturmian::{QuadIrr, TorusInterval};

fn iv(num: i64, den: i64) -> TorusInterval {
    TorusInterval::new(Q::new(0, 1), Q::new(num, den)).unwrap()
}

fn window(expr: &SetExpr, lo: i64, hi: i64) -> Vec<bool> {
    setspec::materialize(&GroupDescriptor::IntLine, expr, &BoxParams::Interval { lo, hi }).unwrap().mask
}

#[test]
fn e3_sumset_matches_pairwise_sums() {
    for alpha in [QuadIrr::golden(), QuadIrr::silver()] {
        let (n0, a, b) = scenarios::e3_sets(alpha, &iv(1, 5)).unwrap();
        let (lo, hi) = (-5_000i64, 5_000i64);
        let got = setspec::product_window(&GroupDescriptor::IntLine, &a, &b, &BoxParams::Interval { lo, hi }).unwrap();
        assert!(got.exact);
        // Every member is at least -|n0|, so summands above hi + |n0| never land in the window.
        let reach = hi + n0.abs() + 1;
        let members = |e: &SetExpr| -> Vec<i64> {
            window(e, -reach, reach).iter().enumerate().filter(|(_, &x)| x).map(|(i, _)| i as i64 - reach).collect()
        };
        let (ma, mb) = (members(&a), members(&b));
        assert!(ma.contains(&n0));
        let mut want = vec![false; (hi - lo + 1) as usize];
        for &x in &ma {
            for &y in &mb {
                let s = x + y;
                if (lo..=hi).contains(&s) {
                    want[(s - lo) as usize] = true;
                }
            }
        }
        assert_eq!(got.mask, want, "alpha = {alpha}");
    }
}

#[test]
fn margins_survive_doubling() {
    let g = QuadIrr::golden();
    for (id, i) in [("base", iv(3, 10)), ("e1", iv(3, 10)), ("e2", iv(2, 5)), ("e3", iv(1, 5))] {
        let coarse = run_named(id, g, &i, 100_000).unwrap();
        let fine = run_named(id, g, &i, 200_000).unwrap();
        assert!(coarse.pass && fine.pass, "{id}");
        for c in convergence(&coarse, &fine) {
            assert!(c.ok, "{id}: {c:?}");
        }
    }
}

#[test]
fn other_measures_and_rotations() {
    let g = QuadIrr::golden();
    let s = QuadIrr::silver();
    let e1 = run_named("e1", g, &iv(1, 5), 300_000).unwrap();
    assert!(e1.pass);
    let ab = e1.quantity_value("lower_density_ab").unwrap();
    assert!((ab - 0.7).abs() < 0.01 && ab < 0.8);
    let e2 = run_named("e2", s, &iv(1, 5), 300_000).unwrap();
    assert!(e2.pass);
    assert!((e2.quantity_value("lower_density_ab").unwrap() - 0.2).abs() < 0.01);
    let e3 = run_named("e3", s, &iv(1, 5), 300_000).unwrap();
    assert!(e3.pass);
    assert_eq!(e3.params["n0"], "1");
    assert!(run_named("e9", g, &iv(1, 5), 10_000).is_err());
    assert!(run_named("e3", g, &iv(1, 5), 999).is_err());
}

#[test]
fn reports_list_both_sides() {
    let r = run_named("e2", QuadIrr::golden(), &iv(2, 5), 50_000).unwrap();
    for a in &r.assertions {
        assert!(a.lhs.is_finite() && a.rhs.is_finite(), "{a:?}");
        assert_eq!(a.holds, a.margin >= 0.0);
    }
    let back: scenarios::ScenarioReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(back, r);
}
