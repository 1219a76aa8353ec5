use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smforge::combinators::lr;
use smforge::diagram::*;
use smforge::machine::inverse_rule;
use smforge::metrics::MetricParams;
use smforge::tower::*;
use smforge::word::free_reduce;
use smforge::{AdmissibleWord, Computation, FreeWord, Lit, Machine};

fn alph(s: &str) -> Vec<String> {
    s.chars().map(|c| c.to_string()).collect()
}

fn w(s: &str) -> FreeWord {
    FreeWord::parse(s).unwrap()
}

fn assert_sound(d: &Diagram) {
    let rep = d.check();
    assert!(rep.is_ok(), "{:?}", rep.problems);
}

fn word_lits(m: &Machine, x: &AdmissibleWord) -> Vec<Lit> {
    smforge::presentation::word_lits(m, x)
}

/// Random reduced computation from a random input configuration.
fn random_computation(m: &Machine, rng: &mut ChaCha8Rng, alphabet: &[String], max_len: usize) -> Option<Computation> {
    let len = rng.gen_range(0..=4);
    let x = FreeWord::new((0..len).map(|_| Lit::signed(alphabet[rng.gen_range(0..alphabet.len())].clone(), rng.gen_bool(0.5))));
    let x = FreeWord::new(free_reduce(x.letters().iter().cloned()));
    let mut cur = m.input_configuration(&x).ok()?;
    let mut words = vec![cur.clone()];
    let mut history: Vec<usize> = Vec::new();
    let steps = rng.gen_range(1..=max_len);
    for _ in 0..steps {
        let rules: Vec<usize> = m
            .admissible_rules(&cur)
            .into_iter()
            .filter(|&r| history.last() != Some(&inverse_rule(r)))
            .collect();
        if rules.is_empty() {
            break;
        }
        let r = rules[rng.gen_range(0..rules.len())];
        cur = m.apply(&cur, r).unwrap();
        history.push(r);
        words.push(cur.clone());
    }
    (!history.is_empty()).then_some(Computation { history, words })
}

#[test]
fn tau_band_of_m1() {
    let m = build_m1(&alph("a"), 2).unwrap();
    let x = m.input_configuration(&w("a")).unwrap();
    let r = m.rule_index("tau1(a)").unwrap();
    let r = if m.is_admissible(&x, r) { r } else { inverse_rule(r) };
    let d = theta_band(&m, &x, r).unwrap();
    assert_eq!(d.count(CellKind::ThetaQ), 5);
    assert_eq!(d.count(CellKind::ThetaA), 1);
    assert_sound(&d);
}

#[test]
fn locked_band_has_only_q_cells() {
    let m = build_m(&TowerParams::new(&["a"], 2, 2, 3)).unwrap();
    let acc = m.accept_configuration().unwrap();
    let locks_all = |r: usize| m.real_sectors().all(|s| m.rule(r).locks(s));
    let rules: Vec<usize> = m.admissible_rules(&acc).into_iter().filter(|&r| locks_all(r)).collect();
    assert!(!rules.is_empty());
    for r in rules {
        let d = theta_band(&m, &acc, r).unwrap();
        assert_eq!(d.count(CellKind::ThetaA), 0);
        assert_eq!(d.area(), m.num_parts());
    }
}

#[test]
fn bands_match_rule_application() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let m = build_m1(&alph("ab"), 2).unwrap();
    let mut checked = 0;
    while checked < 200 {
        let Some(c) = random_computation(&m, &mut rng, &alph("ab"), 6) else { continue };
        let i = rng.gen_range(0..c.len());
        let d = theta_band(&m, &c.words[i], c.history[i]).unwrap();
        assert_eq!(d.path_label(&d.tbot(0)), word_lits(&m, &c.words[i]));
        assert_eq!(d.path_label(&d.ttop(0)), word_lits(&m, &c.words[i + 1]));
        // cell count of a band against its a-length and base length
        let la = c.words[i].a_len() as i64;
        let lb = c.words[i].q_len() as i64;
        let cells = d.area() as i64;
        assert!(la - lb <= cells && cells <= la + 3 * lb);
        assert_sound(&d);
        checked += 1;
    }
}

#[test]
fn lr_standard_computation() {
    let m = Machine::new(lr(&alph("a")).unwrap()).unwrap();
    let h = m.parse_history("zeta1(a) zeta12 zeta2(a)").unwrap();
    let x = m.input_configuration(&w("a")).unwrap();
    let c = m.run(&x, &h).unwrap();
    let d = trapezium(&m, &c).unwrap();
    assert_eq!(d.bands.len(), 3);
    assert_eq!(d.read_computation(&m).unwrap(), c);
    assert_sound(&d);
    let one = trapezium(&m, &m.run(&x, &h[..1]).unwrap()).unwrap();
    assert_eq!(one, theta_band(&m, &x, h[0]).unwrap());
    assert!(trapezium(&m, &m.run(&x, &[]).unwrap()).is_err());
}

#[test]
fn m1_trapezium() {
    let m = build_m1(&alph("a"), 2).unwrap();
    let h = canonical_accepting_m1(&m, 2, &w("a")).unwrap();
    let c = m.run(&m.input_configuration(&w("aa")).unwrap(), &h).unwrap();
    let d = trapezium(&m, &c).unwrap();
    assert_eq!(d.bands.len(), 7);
    assert_eq!(d.area(), 49);
    assert_sound(&d);
}

#[test]
fn random_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let machines = [
        (build_m1(&alph("ab"), 2).unwrap(), alph("ab")),
        (Machine::new(lr(&alph("ab")).unwrap()).unwrap(), alph("ab")),
        (build_m2(&alph("a"), 2, 2).unwrap(), alph("a")),
        (build_m3(&alph("ab"), 2, 2).unwrap(), alph("ab")),
    ];
    let mut done = 0;
    while done < 500 {
        let (m, a) = &machines[done % machines.len()];
        let Some(c) = random_computation(m, &mut rng, a, 20) else { continue };
        let d = trapezium(m, &c).unwrap();
        assert_eq!(d.read_computation(m).unwrap(), c);
        assert_sound(&d);
        done += 1;
    }
}

#[test]
fn disk_of_the_accept_configuration() {
    let m = build_m1(&alph("a"), 2).unwrap();
    let acc = m.accept_configuration().unwrap();
    let d = disk_diagram(&m, &m.run(&acc, &[]).unwrap()).unwrap();
    assert_eq!(d.area(), 1);
    assert_eq!(d.count(CellKind::Hub), 1);
    let p = MetricParams::default();
    let q = Rational64::from_integer(acc.len() as i64);
    assert_eq!(d.weight(&p), p.c1 * q * q);
    assert_sound(&d);
}

#[test]
fn disk_of_an_input() {
    let p = TowerParams::new(&["a"], 2, 2, 3);
    let m = build_m(&p).unwrap();
    let x = config_i(&m, &w("aa")).unwrap();
    let c = m.run(&x, &canonical_accepting_m(&m, &p, &w("a"), 1).unwrap()).unwrap();
    let d = disk_diagram(&m, &c).unwrap();
    assert_eq!(d.boundary_label(), word_lits(&m, &x));
    assert_eq!(d.area(), trapezium(&m, &c).unwrap().area() + 1);
    assert_eq!(d.count(CellKind::Hub), 1);
    assert_sound(&d);
    let bad = m.run(&config_i(&m, &w("a")).unwrap(), &[]).unwrap();
    assert!(disk_diagram(&m, &bad).is_err());
}

fn project(m: &Machine, d: &Diagram) -> FreeWord {
    let hw = m.hardware();
    FreeWord::new(free_reduce(d.boundary_label().into_iter().map(|l| {
        let origin = hw.tape_origin(hw.letter(&l.name).unwrap().index()).unwrap().to_string();
        Lit::signed(origin, l.inv)
    })))
}

#[test]
fn un_diagrams() {
    let p = TowerParams::new(&["a", "b"], 2, 2, 3);
    let m = build_m(&p).unwrap();
    for u in ["a", "ab"] {
        let d = un_diagram(&m, &p, &w(u)).unwrap();
        assert_eq!(project(&m, &d), w(u).pow(2));
        assert_eq!(d.count(CellKind::Hub), 2);
        assert_sound(&d);
    }
    assert!(un_diagram(&m, &p, &w("1")).is_err());
}

#[test]
fn exports_are_deterministic() {
    let m = Machine::new(lr(&alph("ab")).unwrap()).unwrap();
    let h = m.parse_history("zeta1(b) zeta1(a) zeta12 zeta2(a) zeta2(b)").unwrap();
    let c = m.run(&m.input_configuration(&w("ab")).unwrap(), &h).unwrap();
    let a = trapezium(&m, &c).unwrap();
    let b = trapezium(&m, &c).unwrap();
    assert_eq!(write_dot(&a), write_dot(&b));
    assert_eq!(write_cells(&a), write_cells(&b));
    assert_eq!(write_cells(&a).lines().filter(|l| l.starts_with("cell ")).count(), a.area());
}

#[test]
fn empty_diagram_metrics() {
    let d = Diagram::default();
    assert_eq!(d.area(), 0);
    assert_eq!(d.weight(&MetricParams::default()), Rational64::from_integer(0));
}

#[test]
fn necklace_of_a_disk() {
    let p = TowerParams::new(&["a"], 2, 2, 3);
    let m = build_m(&p).unwrap();
    let d = un_diagram(&m, &p, &w("a")).unwrap();
    // the contour of the u^n diagram has only a-edges
    assert_eq!(d.necklace().0.len(), 0);
    let m1 = build_m1(&alph("a"), 2).unwrap();
    let h = canonical_accepting_m1(&m1, 2, &w("a")).unwrap();
    let t = trapezium(&m1, &m1.run(&m1.input_configuration(&w("aa")).unwrap(), &h).unwrap()).unwrap();
    let n = t.necklace();
    assert_eq!(n.whites(), 14);
    assert_eq!(n.blacks(), 10);
    let mu = n.mixture(4);
    for k in 0..n.0.len() {
        assert_eq!(n.rotated(k).mixture(4), mu);
    }
}
