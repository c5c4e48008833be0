//! The JSON files under `fixtures/` agree with the programmatic fixtures.

mod common;

use cuntzwalk::fixtures;
use cuntzwalk::{LabeledWalk, SpectralSystem};

fn load(name: &str) -> String {
    std::fs::read_to_string(common::fixture_dir().join(format!("{name}.json"))).unwrap()
}

fn close(a: &LabeledWalk, b: &LabeledWalk) -> bool {
    a.vertices() == b.vertices()
        && a.labels() == b.labels()
        && a.edges().zip(b.edges()).all(|((i, l, e), (j, m, f))| {
            i == j && l == m && e.target == f.target && (e.alpha - f.alpha).norm() < 1e-15
        })
        && a.edges().count() == b.edges().count()
}

#[test]
fn walk_files_match_fixtures() {
    let mut expected: Vec<(String, LabeledWalk)> = fixtures::all()
        .into_iter()
        .filter(|(n, _)| *n != "z3-cayley")
        .map(|(n, w)| (n.to_string(), w))
        .collect();
    for m in [3, 6, 9] {
        expected.push((format!("ring-{m}"), fixtures::cyclic_walk(m)));
    }
    for (name, w) in expected {
        let parsed = LabeledWalk::from_json(&load(&name)).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(
            close(&parsed, &w),
            "{name} differs from the built-in fixture"
        );
        assert!(parsed.ensure_operator_ready(1e-12).is_ok(), "{name}");
    }
}

#[test]
fn system_files_parse() {
    let cantor = SpectralSystem::from_json(&load("cantor4")).unwrap();
    assert_eq!(
        (cantor.r(), cantor.digits(), cantor.frequencies()),
        (4, &[0, 2][..], &[0, 1][..])
    );
    let leb = SpectralSystem::from_json(&load("lebesgue")).unwrap();
    assert_eq!(
        (leb.r(), leb.digits(), leb.frequencies()),
        (2, &[0, 1][..], &[0, 1][..])
    );
    assert!(cantor.check_assumptions(1e-10).passed && leb.check_assumptions(1e-10).passed);
}

#[test]
fn unknown_system_fields_are_rejected() {
    assert!(SpectralSystem::from_json(r#"{"R":4,"B":[0,2],"L":[0,1],"extra":1}"#).is_err());
}
