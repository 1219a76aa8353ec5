use smforge::tower::TowerParams;
use smforge::verify::*;
use smforge::Error;

#[test]
fn every_suite_passes_at_desk_scale() {
    let p = TowerParams::default();
    for suite in SUITES {
        let rows = run_suite(suite, &p, 1).unwrap();
        assert!(!rows.is_empty(), "{suite}");
        let failed: Vec<_> = rows.iter().filter(|r| !r.passed).collect();
        assert!(failed.is_empty(), "{suite}: {failed:?}");
    }
}

#[test]
fn m1_suite_over_two_letters() {
    let rows = run_suite("m1", &TowerParams::new(&["a", "b"], 2, 3, 3), 1).unwrap();
    assert!(rows.iter().all(|r| r.passed), "{}", write_rows(&rows));
    let formula = rows.iter().filter(|r| r.provenance == Provenance::Formula).count();
    // every reduced word of length <= 2 over {a,b}
    assert_eq!(formula, 17);
}

#[test]
fn unknown_suite() {
    let err = run_suite("nope", &TowerParams::default(), 1).unwrap_err();
    assert_eq!(err, Error::UnknownSuite("nope".into()));
}

#[test]
fn rows_are_tab_separated() {
    let rows = run_suite("m3", &TowerParams::default(), 1).unwrap();
    let text = write_rows(&rows);
    assert_eq!(text.lines().count(), rows.len());
    assert!(text.lines().all(|l| l.split('\t').count() == 4));
}

#[test]
fn seeds_make_suites_reproducible() {
    let p = TowerParams::default();
    assert_eq!(run_suite("diagrams", &p, 9).unwrap(), run_suite("diagrams", &p, 9).unwrap());
}
