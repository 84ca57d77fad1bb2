mod common;

use common::*;
use khwidth::goeritz;
use khwidth::khovanov::{euler, reduced_kh, reduced_kh_with, skein_check, width, Backend, KhOptions, SkeinCase};
use khwidth::{corpus, tau, BigradedRanks, Error, PlanarDiagram, Slope};
use proptest::prelude::*;

fn kh(d: &PlanarDiagram) -> BigradedRanks {
    reduced_kh(d, Backend::Scan).unwrap()
}

fn link(name: &str) -> PlanarDiagram {
    corpus::load(name).unwrap().link().unwrap().clone()
}

#[test]
fn trefoil_is_one_column() {
    let r = kh(&link("trefoil"));
    let expect: Vec<((i32, i32), u64)> = vec![((-2, 2), 1), ((-2, 6), 1), ((-2, 8), 1)];
    assert_eq!(r.entries().clone().into_iter().collect::<Vec<_>>(), expect);
    assert_eq!(width(&r).width, 1);
    assert_eq!(r.total_rank(), 3);
}

#[test]
fn hopf_has_rank_two_width_one() {
    let r = reduced_kh(&link("hopf"), Backend::Naive).unwrap();
    assert_eq!(r.total_rank(), 2);
    assert_eq!(width(&r).width, 1);
    assert_eq!(r, kh(&link("hopf")));
}

#[test]
fn unknot_and_unlink() {
    let r = kh(&link("unknot"));
    assert_eq!(r.entries().clone().into_iter().collect::<Vec<_>>(), vec![((0, 0), 1)]);
    let u = kh(&link("unlink2"));
    assert_eq!(u.total_rank(), 2);
    assert_eq!(euler(&u), 0);
}

#[test]
fn ten_124_has_two_adjacent_columns() {
    let r = kh(&link("10_124"));
    let cols: Vec<(i32, u64)> = r.columns().into_iter().collect();
    assert_eq!(cols.len(), 2);
    assert_eq!(cols[1].0 - cols[0].0, 2);
    let mut totals: Vec<u64> = cols.iter().map(|c| c.1).collect();
    totals.sort();
    assert_eq!(totals, vec![3, 4]);
    for (d, _) in &cols {
        assert!(r.column(*d).values().all(|&n| n == 1));
    }
    assert_eq!(width(&r).width, 2);
    assert_eq!(euler(&r), 1);
    assert_eq!(r.entries().len(), 7);
}

#[test]
fn capacity_is_enforced() {
    let d = link("10_124");
    let err = reduced_kh_with(&d, KhOptions { backend: Backend::Naive, capacity: 8 }).unwrap_err();
    assert!(matches!(err, Error::Capacity { crossings: 10, cap: 8 }));
}

#[test]
fn backends_agree_on_small_corpus_diagrams() {
    for f in corpus::all().unwrap() {
        if let Some(d) = f.link() {
            if d.len() <= 12 {
                assert_eq!(reduced_kh(d, Backend::Naive).unwrap(), kh(d), "{}", f.name);
            }
        }
    }
}

#[test]
fn backends_agree_on_small_tangle_closures() {
    let t = corpus::load("trefoil-tangle").unwrap().tangle().unwrap().clone();
    for n in [-1, 1] {
        let d = tau(&t, Slope::integer(n)).unwrap();
        assert!(d.len() <= 14);
        assert_eq!(reduced_kh(&d, Backend::Naive).unwrap(), kh(&d), "tau({n})");
    }
}

#[test]
fn euler_characteristic_is_determinant_on_corpus() {
    for f in corpus::all().unwrap() {
        if let Some(d) = f.link() {
            let r = kh(d);
            assert_eq!(euler(&r), goeritz::determinant(d).unwrap(), "{}", f.name);
            assert_eq!(r.total_rank() % 2, euler(&r) % 2, "{}", f.name);
            assert!(r.parity_ok(), "{}", f.name);
        }
    }
}

#[test]
fn zero_determinant_forces_thickness() {
    let d = link("fig8-tau0");
    assert_eq!(goeritz::determinant(&d).unwrap(), 0);
    assert!(width(&kh(&d)).width >= 2);
    let t = corpus::load("trefoil-tangle").unwrap().tangle().unwrap().clone();
    let d = tau(&t, Slope::integer(0)).unwrap();
    assert_eq!(goeritz::determinant(&d).unwrap(), 0);
    assert!(width(&kh(&d)).width >= 2);
}

#[test]
fn basepoint_does_not_matter() {
    for name in ["hopf", "4_1", "10_124"] {
        let d = link(name);
        let base = kh(&d);
        for e in d.edges() {
            let moved = d.clone().with_basepoint(Some(e)).unwrap();
            assert_eq!(kh(&moved), base, "{name} at edge {e}");
        }
    }
}

#[test]
fn skein_triangles_at_the_terminal_crossing() {
    let t = corpus::load("fig8").unwrap().tangle().unwrap().clone();
    let d = tau(&t, Slope::integer(1)).unwrap();
    let c = khwidth::tangle::terminal_crossing(&t, Slope::integer(1)).unwrap();
    let rep = skein_check(&d, c, Backend::Scan).unwrap();
    assert_eq!(rep.case, SkeinCase::DegenerateZero);
    assert!(rep.support_ok);

    let tref = closure(2, &[1, 1, 1]);
    let rep = skein_check(&tref, 0, Backend::Naive).unwrap();
    assert_eq!(rep.dets.0, 3);
    assert!(rep.support_ok);

    let unlink = link("unlink2");
    let hopf_like = closure(2, &[1, -1]);
    assert_eq!(goeritz::determinant(&unlink).unwrap(), 0);
    let rep = skein_check(&hopf_like, 0, Backend::Naive).unwrap();
    assert_eq!(rep.case, SkeinCase::Inapplicable);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn reidemeister_invariance(
        (s, w) in braid_strategy(7),
        moves in prop::collection::vec((0u8..5, 0usize..16, any::<bool>()), 1..=3),
    ) {
        let base = kh(&closure(s, &w));
        let (mut s2, mut w2) = (s, w.clone());
        for (kind, at, sign) in moves {
            (s2, w2) = apply_move(s2, &w2, kind, at, sign);
        }
        let moved = kh(&closure(s2, &w2));
        prop_assert!(moved.relative_eq(&base));
        prop_assert_eq!(moved, base);
    }

    #[test]
    fn mirror_negates_gradings((s, w) in braid_strategy(9)) {
        let d = closure(s, &w);
        prop_assert_eq!(kh(&d.mirror()), kh(&d).negated());
    }

    #[test]
    fn rank_and_euler_share_parity((s, w) in braid_strategy(10)) {
        let r = kh(&closure(s, &w));
        prop_assert_eq!(r.total_rank() % 2, euler(&r) % 2);
        prop_assert!(r.parity_ok());
    }
}
