use std::fs;
use std::path::{Path, PathBuf};

use parafermion::diagram::{evaluate, normalize, parse, serialize, Evaluation, Slice};
use parafermion::fock::LinearOp;
use parafermion::Error;

fn dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn json_files(p: &Path) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = fs::read_dir(p)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    v.sort();
    v
}

fn load(name: &str) -> parafermion::diagram::Diagram {
    parse(&fs::read_to_string(dir().join(format!("{name}.json"))).unwrap()).unwrap()
}

#[test]
fn at_least_thirty_fixtures() {
    assert!(json_files(&dir()).len() >= 30);
}

#[test]
fn every_fixture_round_trips() {
    for f in json_files(&dir()) {
        let dg = parse(&fs::read_to_string(&f).unwrap()).unwrap_or_else(|e| panic!("{f:?}: {e}"));
        let text = serialize(&dg);
        let again = parse(&text).unwrap();
        assert_eq!(again, dg, "{f:?}");
        assert_eq!(serialize(&again), text, "{f:?}: canonical form is stable");
    }
}

#[test]
fn every_fixture_normalizes_soundly() {
    for f in json_files(&dir()) {
        let dg = parse(&fs::read_to_string(&f).unwrap()).unwrap();
        let (out, _) = normalize(&dg);
        let dev = evaluate(&dg)
            .unwrap()
            .max_abs_diff(&evaluate(&out).unwrap())
            .unwrap();
        assert!(dev < 1e-9, "{f:?}: {dev}");
    }
}

#[test]
fn every_malformed_fixture_is_rejected_with_a_position() {
    let files = json_files(&dir().join("malformed"));
    assert!(files.len() >= 8);
    for f in files {
        let text = fs::read_to_string(&f).unwrap();
        let err = parse(&text).and_then(|dg| evaluate(&dg).map(|_| ()));
        match err {
            Err(Error::Parse { position, .. }) => assert!(!position.is_empty(), "{f:?}"),
            Err(Error::Arity { .. } | Error::GradedInsertion { .. }) => {}
            other => panic!("{f:?}: unexpected {other:?}"),
        }
    }
}

#[test]
fn identity_wire_evaluates_to_identity() {
    let Evaluation::Op(op) = evaluate(&load("identity_wire_d2")).unwrap() else {
        panic!("expected an operator")
    };
    assert_eq!(op.max_abs_diff(&LinearOp::identity(2)).unwrap(), 0.0);
}

#[test]
fn swap_fixtures_reduce_to_one_crossing() {
    for d in [2, 3, 5] {
        let (out, steps) = normalize(&load(&format!("swap_d{d}")));
        assert_eq!(out.slices, vec![Slice::Crossing { pos: 1, sign: 1 }]);
        assert_eq!(out.prefactor.delta_exp, -2);
        assert!((out.prefactor.coeff.norm() - 1.0).abs() < 1e-12);
        assert!(!steps.is_empty());
    }
}

#[test]
fn relay_fixtures_carry_the_helper_constant() {
    for (name, h) in [
        ("relay_d2_h1", 1),
        ("relay_d2_h2", 2),
        ("relay_d2_h3", 3),
        ("relay_d3_h1", 1),
    ] {
        let (out, _) = normalize(&load(name));
        assert_eq!(
            out.slices,
            vec![Slice::Crossing { pos: 1, sign: 1 }],
            "{name}"
        );
        assert_eq!(out.prefactor.delta_exp, -2 * (h + 1), "{name}");
    }
}
