use smforge::decide::*;
use smforge::search::*;
use smforge::tower::*;
use smforge::{AdmissibleWord, FreeWord, Lit, Machine};

fn alph(s: &str) -> Vec<String> {
    s.chars().map(|c| c.to_string()).collect()
}

fn w(s: &str) -> FreeWord {
    FreeWord::parse(s).unwrap()
}

/// Independent oracle: `x` is `u^n` for a reduced `u` iff its cyclically
/// reduced core is the `n`-fold repetition of a word.
fn is_nth_power(x: &FreeWord, n: usize) -> bool {
    let l = x.letters();
    let mut i = 0;
    let mut j = l.len();
    while j >= i + 2 && l[j - 1] == l[i].clone().inverse_lit() {
        i += 1;
        j -= 1;
    }
    let core = &l[i..j];
    if core.len() % n != 0 {
        return false;
    }
    let p = core.len() / n;
    (0..core.len()).all(|t| core[t] == core[t % p.max(1)])
}

trait InvLit {
    fn inverse_lit(self) -> Lit;
}

impl InvLit for Lit {
    fn inverse_lit(self) -> Lit {
        Lit::signed(self.name, !self.inv)
    }
}

fn input(m: &Machine, x: &FreeWord) -> AdmissibleWord {
    m.input_configuration(x).unwrap()
}

#[test]
fn oracle_sanity() {
    assert!(is_nth_power(&w("aa"), 2));
    assert!(is_nth_power(&w("1"), 2));
    assert!(is_nth_power(&w("baaB"), 2));
    assert!(is_nth_power(&w("abab"), 2));
    assert!(!is_nth_power(&w("aab"), 2));
    assert!(!is_nth_power(&w("abAB"), 2));
    assert!(is_nth_power(&w("aaa"), 3));
}

#[test]
fn budget_zero_gives_the_empty_computation() {
    let m = build_m1(&alph("a"), 2).unwrap();
    let cs = enumerate_reduced(&m, &input(&m, &w("aa")), &SearchBudget::new(0)).unwrap();
    assert_eq!(cs.len(), 1);
    assert!(cs[0].is_empty());
}

#[test]
fn budget_one_at_the_accept_configuration() {
    let m = build_m1(&alph("a"), 2).unwrap();
    let acc = m.accept_configuration().unwrap();
    let cs = enumerate_reduced(&m, &acc, &SearchBudget::new(1)).unwrap();
    let admissible = (0..m.rules().len()).filter(|&r| m.is_admissible(&acc, r)).count();
    assert_eq!(cs.len(), 1 + admissible);
    assert!(cs[1..].iter().all(|c| c.len() == 1));
}

#[test]
fn stream_contains_the_canonical_computation() {
    let m = build_m1(&alph("a"), 2).unwrap();
    let w0 = input(&m, &w("aa"));
    let h = canonical_accepting_m1(&m, 2, &w("a")).unwrap();
    let cs = enumerate_reduced(&m, &w0, &SearchBudget::new(7)).unwrap();
    assert!(cs.iter().any(|c| c.history == h));
    let mut last: Option<&Vec<usize>> = None;
    for c in &cs {
        assert!(c.is_reduced());
        if let Some(p) = last {
            assert!((p.len(), p) < (c.history.len(), &c.history), "length-lexicographic order");
        }
        last = Some(&c.history);
    }
}

#[test]
fn enumeration_does_not_depend_on_workers() {
    let m = build_m1(&alph("ab"), 2).unwrap();
    let w0 = input(&m, &w("abab"));
    let one = enumerate_reduced(&m, &w0, &SearchBudget::new(6).with_workers(1)).unwrap();
    let many = enumerate_reduced(&m, &w0, &SearchBudget::new(6).with_workers(4)).unwrap();
    assert!(one.len() > 512);
    assert_eq!(one, many);
}

#[test]
fn frontier_cap_is_reported() {
    let m = build_m1(&alph("ab"), 2).unwrap();
    let w0 = input(&m, &w("abab"));
    let err = enumerate_reduced(&m, &w0, &SearchBudget::new(8).with_frontier_cap(Some(10))).unwrap_err();
    assert!(matches!(err, smforge::Error::BudgetExceeded { .. }));
}

#[test]
fn decide_small_examples() {
    let m = build_m1(&alph("a"), 2).unwrap();
    match decide_accept_m1(&m, &input(&m, &w("aa"))).unwrap() {
        Decision::Accepted { witness, count } => {
            assert_eq!(witness.len(), 7);
            assert_eq!(count, Some(1));
            assert_eq!(witness.last(), &m.accept_configuration().unwrap());
        }
        d => panic!("a^2 not accepted: {d:?}"),
    }
    assert!(decide_accept_m1(&m, &input(&m, &w("aaa"))).unwrap().is_rejected());
    match decide_accept_m1(&m, &m.accept_configuration().unwrap()).unwrap() {
        Decision::Accepted { witness, .. } => assert!(witness.is_empty()),
        d => panic!("accept configuration not accepted: {d:?}"),
    }
}

#[test]
fn m1_unique_accepting_computation() {
    for n in [2, 3] {
        let m = build_m1(&alph("a"), n).unwrap();
        let acc_len = m.accept_configuration().unwrap().len();
        for u in ["1", "a", "A"] {
            let w0 = input(&m, &w(u).pow(n as i64));
            let bound = m1_length_bound(n, w0.len(), acc_len);
            let c = count_accepting_blocks(&m, &w0, bound).unwrap();
            assert_eq!(c.count, 1, "u = {u}, n = {n}");
            assert_eq!(c.histories[0], canonical_accepting_m1(&m, n, &w(u)).unwrap());
        }
    }
}

#[test]
fn m1_rejections() {
    for (a, n, x) in [("ab", 2, "ab"), ("ab", 2, "aab"), ("a", 2, "aaa"), ("ab", 3, "ab"), ("ab", 3, "aab")] {
        let m = build_m1(&alph(a), n).unwrap();
        let d = decide_accept_m1(&m, &input(&m, &w(x))).unwrap();
        assert!(d.is_rejected(), "{x} at n = {n}: {d:?}");
    }
}

#[test]
fn short_bound_is_budget_exceeded() {
    let m = build_m1(&alph("a"), 2).unwrap();
    let err = decide_accept_m1_with_bound(&m, &input(&m, &w("aaa")), 5).unwrap_err();
    assert!(matches!(err, smforge::Error::BudgetExceeded { .. }));
}

#[test]
fn decisions_agree_with_root_extraction() {
    for (a, n) in [("a", 2), ("a", 3), ("ab", 2), ("ab", 3)] {
        let m = build_m1(&alph(a), n).unwrap();
        for x in FreeWord::enumerate(&alph(a), 4) {
            let d = decide_accept_m1(&m, &input(&m, &x)).unwrap();
            assert!(!matches!(d, Decision::Incomplete(_)), "{x} at n = {n}: {d:?}");
            assert_eq!(d.is_accepted(), is_nth_power(&x, n), "{x} at n = {n}: {d:?}");
            if let Decision::Accepted { witness, .. } = &d {
                let again = m.run(witness.initial(), &witness.history).unwrap();
                assert_eq!(again.last(), &m.accept_configuration().unwrap());
            }
        }
    }
}

#[test]
fn time_function_of_m1() {
    let m = build_m1(&alph("a"), 2).unwrap();
    let rows = time_function(&m, 2, &SearchBudget::new(9).with_frontier_cap(Some(200_000))).unwrap();
    assert_eq!(rows[0].time, Some(3));
    assert_eq!(rows[2].time, Some(7));
}

#[test]
fn m3_search_finds_the_canonical_computation() {
    let m = build_m3(&alph("a"), 2, 2).unwrap();
    let w0 = input(&m, &w("aa"));
    let h = canonical_accepting_m3(&m, 2, 2, &w("a")).unwrap();
    let out = bounded_accept(&m, &w0, &SearchBudget::new(h.len())).unwrap();
    let c = out.witness().expect("witness within the canonical length");
    assert_eq!(c.history, h);
}

#[test]
fn m1_no_turn() {
    let m = build_m1(&alph("a"), 2).unwrap();
    let end = m.end_states().unwrap();
    let sigma: Vec<usize> = m
        .rules()
        .iter()
        .enumerate()
        .filter(|(_, r)| r.id.starts_with("sigma"))
        .map(|(i, _)| i)
        .collect();
    let mut checked = 0;
    for x in FreeWord::enumerate(&alph("a"), 2) {
        for y in FreeWord::enumerate(&alph("a"), 2) {
            let w0 = m
                .configuration_with(&end, &[(3, m.copy_word(3, &x).unwrap()), (4, m.copy_word(4, &y).unwrap())])
                .unwrap();
            walk_reduced(&m, &w0, &SearchBudget::new(12), &|_: &[usize], _: &AdmissibleWord| Visit::Expand, |h, word| {
                checked += 1;
                let at_end = word.state_letters().iter().map(|l| l.index()).collect::<Vec<_>>() == end;
                assert!(!(at_end && h.iter().any(|r| sigma.contains(r))), "turn in {}", m.format_history(h));
            })
            .unwrap();
        }
    }
    assert!(checked > 1000);
}

#[test]
fn controlled_histories_of_m2() {
    let (n, k) = (2, 3);
    for (a, len, extra) in [("a", 2, 9), ("ab", 1, 7)] {
        let m = build_m2(&alph(a), n, k).unwrap();
        let mut found = 0;
        for w0 in controlled_starts(&m, n, k, len).unwrap() {
            let budget = SearchBudget::new(w0.a_len() + extra);
            for c in controlled_computations(&m, n, k, &w0, &budget).unwrap() {
                found += 1;
                assert_eq!(c.len(), w0.a_len() + 3, "{}", m.format_history(&c.history));
                assert!(c.words.iter().all(|x| x.a_len() == w0.a_len()));
            }
        }
        assert!(found > 0);
    }
}

#[test]
fn certificate_groups_are_groups() {
    for g in certificate_groups() {
        let o = g.order() as u16;
        for x in 0..o {
            assert_eq!(g.mul(x, g.inv(x)), 0);
            for y in 0..o {
                for z in 0..o {
                    assert_eq!(g.mul(g.mul(x, y), z), g.mul(x, g.mul(y, z)));
                }
            }
        }
    }
}
