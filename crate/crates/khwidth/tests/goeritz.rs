mod common;

use common::*;
use khwidth::goeritz::{self, signature_and_det};
use khwidth::khovanov::{euler, jones, reduced_kh, Backend};
use khwidth::{corpus, PlanarDiagram};

fn link(name: &str) -> PlanarDiagram {
    corpus::load(name).unwrap().link().unwrap().clone()
}

#[test]
fn determinants() {
    for (name, det) in [("unknot", 1), ("trefoil", 3), ("4_1", 5), ("cinquefoil", 5), ("10_124", 1), ("hopf", 2), ("unlink2", 0), ("fig8-tau0", 0)] {
        assert_eq!(goeritz::determinant(&link(name)).unwrap(), det, "{name}");
    }
}

#[test]
fn signatures() {
    for (name, sig) in [("unknot", 0), ("trefoil", -2), ("4_1", 0), ("cinquefoil", -4), ("10_124", -8)] {
        assert_eq!(goeritz::signature(&link(name)).unwrap(), sig, "{name}");
    }
    assert_eq!(goeritz::signature(&link("trefoil").mirror()).unwrap(), 2);
}

#[test]
fn goeritz_matrix_of_figure_eight() {
    let d = link("4_1");
    let col = goeritz::checkerboard(&d).unwrap();
    let g = goeritz::goeritz(&d, &col);
    assert_eq!(g.det_g.unsigned_abs(), 5);
    assert_eq!(g.g.len(), col.white_regions.len() - 1);
}

#[test]
fn exact_signature_of_small_forms() {
    assert_eq!(signature_and_det(&[vec![-2, 1], vec![1, -2]]), (-2, 3));
    assert_eq!(signature_and_det(&[vec![0, 1], vec![1, 0]]), (0, -1));
    assert_eq!(signature_and_det(&[vec![0, 0], vec![0, 3]]), (1, 0));
    let m = vec![vec![2, 1, 0], vec![1, -3, 1], vec![0, 1, 0]];
    let (s, d) = signature_and_det(&m);
    assert_eq!((s, d.unsigned_abs() as u64), signature_det(&m));
}

#[test]
fn corpus_identities() {
    for f in corpus::all().unwrap() {
        let Some(d) = f.link() else { continue };
        let det = goeritz::determinant(d).unwrap();
        let r = reduced_kh(d, Backend::Scan).unwrap();
        assert_eq!(euler(&r), det, "{}", f.name);
        assert_eq!(jones(&r).unwrap().abs_at_minus_one(), det, "{}", f.name);
        assert_eq!(
            goeritz::signature_with(d, false).unwrap(),
            goeritz::signature_with(d, true).unwrap(),
            "{}",
            f.name
        );
        assert_eq!(goeritz::signature(&d.mirror()).unwrap(), -goeritz::signature(d).unwrap(), "{}", f.name);
    }
}
