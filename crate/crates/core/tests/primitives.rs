use smforge::combinators::{lr, rl};
use smforge::search::{bounded_reach, SearchBudget};
use smforge::{FreeWord, Machine};

fn ab() -> Vec<String> {
    vec!["a".into(), "b".into()]
}

/// End states with the input back in its sector.
fn finish(m: &Machine, v: &FreeWord) -> smforge::AdmissibleWord {
    let s = m.inputs()[0];
    m.configuration_with(&m.end_states().unwrap(), &[(s, m.copy_word(s, v).unwrap())]).unwrap()
}

/// Shortest computations found by breadth-first search, independent of any
/// hand-built history.
fn standard_lengths(m: &Machine) {
    for v in FreeWord::enumerate(&ab(), 4) {
        let start = m.input_configuration(&v).unwrap();
        let out = bounded_reach(m, &start, &finish(m, &v), &SearchBudget::new(2 * v.len() + 3)).unwrap();
        let c = out.witness().unwrap_or_else(|| panic!("{} on {v}: {out:?}", m.name()));
        assert_eq!(c.len(), 2 * v.len() + 1, "{} on {v}", m.name());
        assert!(c.words.iter().all(|x| x.a_len() == v.len()), "{} on {v}", m.name());
    }
}

#[test]
fn lr_standard_computation() {
    standard_lengths(&Machine::new(lr(&ab()).unwrap()).unwrap());
}

#[test]
fn rl_standard_computation() {
    standard_lengths(&Machine::new(rl(&ab()).unwrap()).unwrap());
}

#[test]
fn lr_history_reads_the_input_twice() {
    let m = Machine::new(lr(&ab()).unwrap()).unwrap();
    let v = FreeWord::parse("abA").unwrap();
    let h = m.parse_history("zeta1(a)^-1 zeta1(b) zeta1(a) zeta12 zeta2(a) zeta2(b) zeta2(a)^-1").unwrap();
    let c = m.run(&m.input_configuration(&v).unwrap(), &h).unwrap();
    assert_eq!(c.last(), &finish(&m, &v));
}
