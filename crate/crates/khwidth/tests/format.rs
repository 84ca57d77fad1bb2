mod common;

use common::*;
use khwidth::format::{parse, write_link, Body, Fixture};
use khwidth::khovanov::{reduced_kh, Backend};
use khwidth::slopes::SlopeSystem;
use khwidth::{corpus, tau, Error, Slope};
use proptest::prelude::*;

#[test]
fn every_corpus_file_parses() {
    let all = corpus::all().unwrap();
    assert_eq!(all.len(), corpus::FIXTURES.len());
    for (name, _) in corpus::FIXTURES {
        assert_eq!(&corpus::load(name).unwrap().name, name);
    }
    assert!(matches!(corpus::load("missing"), Err(Error::Invalid(_))));
}

#[test]
fn tangle_metadata() {
    let f = corpus::load("trefoil-tangle").unwrap();
    assert_eq!(f.system, Some(SlopeSystem::knot()));
    assert_eq!(f.provenance.as_deref(), Some("search-derived"));
    assert!(f.tangle().is_some() && f.link().is_none());
}

#[test]
fn pd_orientation_flag() {
    let ccw = parse("link h\npd ccw\nX 1 3 2 4\nX 3 1 4 2\n").unwrap();
    let cw = parse("link h\npd cw\nX 1 4 2 3\nX 3 2 4 1\n").unwrap();
    let (a, b) = (ccw.link().unwrap(), cw.link().unwrap());
    assert_eq!(reduced_kh(a, Backend::Naive).unwrap(), reduced_kh(b, Backend::Naive).unwrap());
}

#[test]
fn errors_carry_line_numbers() {
    let cases = [
        ("link a\nbraid 2: 1 x 1\n", 2),
        ("link a\n\nX 1 2 3\n", 3),
        ("link a\nfrobnicate\n", 2),
        ("braid 2: 1\n", 1),
        ("link a\nlink b\n", 2),
        ("tangle t\nbraid 3: 1 2\n", 2),
        ("link a\nbraid 2 cut 1: 1 | 1\n", 2),
        ("link a\nlambda_M 1\n", 2),
    ];
    for (text, line) in cases {
        match parse(text) {
            Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
            other => panic!("{text:?} gave {other:?}"),
        }
    }
    assert!(matches!(parse("link a\nbraid 2: 3\n"), Err(Error::Parse { .. })));
    assert!(parse("link a\npd\nX 0 1 2 3\n").is_err());
}

#[test]
fn closures_round_trip_through_text() {
    let t = corpus::load("fig8").unwrap().tangle().unwrap().clone();
    let d = tau(&t, Slope::integer(0)).unwrap();
    let text = write_link(&d);
    let back = parse(&text).unwrap();
    let e = back.link().unwrap();
    assert_eq!(e.pd_rows(), d.pd_rows());
    assert_eq!(reduced_kh(e, Backend::Scan).unwrap(), reduced_kh(&d, Backend::Scan).unwrap());
    let unknot = parse(&write_link(&khwidth::PlanarDiagram::unknot())).unwrap();
    assert_eq!(unknot.link().unwrap().loops(), 1);
}

#[test]
fn fixtures_round_trip_through_json() {
    for f in corpus::all().unwrap() {
        let s = serde_json::to_string(&f).unwrap();
        let g: Fixture = serde_json::from_str(&s).unwrap();
        assert_eq!(g, f);
        if let Body::Link(d) = &f.body {
            let r = reduced_kh(d, Backend::Scan).unwrap();
            let back: khwidth::BigradedRanks = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
            assert_eq!(back, r);
        }
    }
}

proptest! {
    #[test]
    fn braid_text_round_trip((s, w) in braid_strategy(10)) {
        let letters: Vec<String> = w.iter().map(|l| l.to_string()).collect();
        let text = format!("# random\nlink r\nbraid {s}: {}\n", letters.join(" "));
        let f = parse(&text).unwrap();
        let d = f.link().unwrap();
        let direct = closure(s, &w);
        prop_assert_eq!(d.crossings(), direct.crossings());
        let again = parse(&write_link(d)).unwrap();
        let e = again.link().unwrap();
        prop_assert_eq!(e.pd_rows(), d.pd_rows());
        prop_assert_eq!(e.loops(), d.loops());
    }
}
