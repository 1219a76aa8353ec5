//! Runtime check suites behind `smforge verify-lemmas`.
//!
//! Each suite returns one row per check. A row says where its expected
//! value comes from: a closed formula, a plain measurement, or a search
//! that is only complete within its budget.

use std::fmt;

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decide::{count_accepting_blocks, decide_accept_m1, m1_length_bound, Decision};
use crate::diagram::{area_table, trapezium, un_diagram};
use crate::error::{Error, Result};
use crate::format::{parse_machine, parse_trace, write_machine, write_trace};
use crate::machine::{inverse_rule, Machine};
use crate::metrics::{modified_length, Bead, MetricParams, Necklace};
use crate::presentation::GenKind;
use crate::search::{controlled_computations, controlled_starts, SearchBudget};
use crate::tower::*;
use crate::word::{free_reduce, FreeWord, Lit};
use crate::{AdmissibleWord, Computation};

pub const SUITES: &[&str] = &["core", "m1", "m2", "m3", "m", "metrics", "diagrams"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Formula,
    Measured,
    BudgetBounded,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Formula => "formula",
            Provenance::Measured => "measured",
            Provenance::BudgetBounded => "budget-bounded",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckRow {
    pub name: String,
    pub passed: bool,
    pub provenance: Provenance,
    pub detail: String,
}

impl CheckRow {
    fn new(name: impl Into<String>, passed: bool, provenance: Provenance, detail: impl Into<String>) -> Self {
        CheckRow {
            name: name.into(),
            passed,
            provenance,
            detail: detail.into(),
        }
    }
}

/// `name TAB PASS|FAIL TAB provenance TAB detail`.
pub fn write_rows(rows: &[CheckRow]) -> String {
    rows.iter()
        .map(|r| {
            format!(
                "{}\t{}\t{}\t{}\n",
                r.name,
                if r.passed { "PASS" } else { "FAIL" },
                r.provenance,
                r.detail
            )
        })
        .collect()
}

pub fn run_suite(name: &str, p: &TowerParams, seed: u64) -> Result<Vec<CheckRow>> {
    p.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match name {
        "core" => core(p, &mut rng),
        "m1" => m1(p),
        "m2" => m2(p),
        "m3" => m3(p),
        "m" => m_language(p),
        "metrics" => metrics(&mut rng),
        "diagrams" => diagrams(p, &mut rng),
        _ => Err(Error::UnknownSuite(name.to_string())),
    }
}

fn random_word(rng: &mut ChaCha8Rng, alphabet: &[String], max_len: usize) -> FreeWord {
    let len = rng.gen_range(0..=max_len);
    FreeWord::new((0..len).map(|_| Lit::signed(alphabet[rng.gen_range(0..alphabet.len())].clone(), rng.gen_bool(0.5))))
}

/// Random reduced computation of at most `max_len` steps from a random input.
fn random_computation(m: &Machine, rng: &mut ChaCha8Rng, alphabet: &[String], max_len: usize) -> Result<Option<Computation>> {
    let mut cur = m.input_configuration(&random_word(rng, alphabet, 4))?;
    let mut words = vec![cur.clone()];
    let mut history: Vec<usize> = Vec::new();
    for _ in 0..rng.gen_range(1..=max_len) {
        let rules: Vec<usize> = m
            .admissible_rules(&cur)
            .into_iter()
            .filter(|&r| history.last() != Some(&inverse_rule(r)))
            .collect();
        if rules.is_empty() {
            break;
        }
        let r = rules[rng.gen_range(0..rules.len())];
        cur = m.apply(&cur, r)?;
        history.push(r);
        words.push(cur.clone());
    }
    Ok((!history.is_empty()).then_some(Computation { history, words }))
}

fn core(p: &TowerParams, rng: &mut ChaCha8Rng) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    let mut bad = 0;
    for _ in 0..1000 {
        let len = rng.gen_range(0..30);
        let lits: Vec<Lit> = (0..len)
            .map(|_| Lit::signed(p.alphabet[rng.gen_range(0..p.alphabet.len())].clone(), rng.gen_bool(0.5)))
            .collect();
        let once = free_reduce(lits);
        if free_reduce(once.clone()) != once {
            bad += 1;
        }
    }
    rows.push(CheckRow::new("free reduction is idempotent", bad == 0, Provenance::Measured, format!("1000 words, {bad} failures")));

    let m1 = build_m1(&p.alphabet, p.n)?;
    let (mut steps, mut bad) = (0, 0);
    for _ in 0..50 {
        let mut cur = m1.input_configuration(&random_word(rng, &p.alphabet, 4))?;
        for _ in 0..10 {
            let rules = m1.admissible_rules(&cur);
            for &r in &rules {
                let next = m1.apply(&cur, r)?;
                steps += 1;
                if m1.apply(&next, inverse_rule(r)).ok().as_ref() != Some(&cur) {
                    bad += 1;
                }
            }
            if rules.is_empty() {
                break;
            }
            cur = m1.apply(&cur, rules[rng.gen_range(0..rules.len())])?;
        }
    }
    rows.push(CheckRow::new("inverse rule undoes a rule", bad == 0, Provenance::Measured, format!("{steps} applications on M1")));

    let machines = [
        build_m1(&p.alphabet, p.n)?,
        build_m2(&p.alphabet, p.n, p.k)?,
        build_m3(&p.alphabet, p.n, p.k)?,
        build_m4(&p.alphabet, p.n, p.k)?,
        build_m(p)?,
    ];
    for m in &machines {
        let text = write_machine(m.spec());
        let again = parse_machine(&text).map(|s| write_machine(&s));
        rows.push(CheckRow::new(
            format!("machine format round trip {}", m.name()),
            again.as_ref() == Ok(&text),
            Provenance::Measured,
            format!("{} rules", m.num_positive_rules()),
        ));
    }

    let u = FreeWord::new(p.alphabet.iter().map(|a| Lit::new(a.clone())));
    let c = m1.run(&m1.input_configuration(&u.pow(p.n as i64))?, &canonical_accepting_m1(&m1, p.n, &u)?)?;
    let back = parse_trace(&m1, &write_trace(&m1, &c));
    rows.push(CheckRow::new("trace round trip", back.as_ref() == Ok(&c), Provenance::Measured, format!("{} steps", c.len())));
    Ok(rows)
}

/// `x` is `u^n` for a reduced `u` iff its cyclically reduced core is an
/// `n`-fold repetition.
pub fn is_nth_power(x: &FreeWord, n: usize) -> bool {
    let l = x.letters();
    let (mut i, mut j) = (0, l.len());
    while j >= i + 2 && l[j - 1].name == l[i].name && l[j - 1].inv != l[i].inv {
        i += 1;
        j -= 1;
    }
    let core = &l[i..j];
    if core.len() % n != 0 {
        return false;
    }
    let period = (core.len() / n).max(1);
    (0..core.len()).all(|t| core[t] == core[t % period])
}

fn m1(p: &TowerParams) -> Result<Vec<CheckRow>> {
    let n = p.n;
    let m = build_m1(&p.alphabet, n)?;
    let acc = m.accept_configuration()?;
    let mut rows = Vec::new();
    for u in FreeWord::enumerate(&p.alphabet, 2) {
        let expected = 2 * n * u.len() + 2 * n - 1;
        let h = canonical_accepting_m1(&m, n, &u)?;
        let ends = m.run(&m.input_configuration(&u.pow(n as i64))?, &h)?.last() == &acc;
        rows.push(CheckRow::new(
            format!("accepting length u={u}"),
            ends && h.len() == expected,
            Provenance::Formula,
            format!("2n|u|+2n-1 = {expected}, got {}", h.len()),
        ));
    }
    if p.alphabet.len() == 1 {
        for u in FreeWord::enumerate(&p.alphabet, 1) {
            let w0 = m.input_configuration(&u.pow(n as i64))?;
            let bound = m1_length_bound(n, w0.len(), acc.len());
            let c = count_accepting_blocks(&m, &w0, bound)?;
            rows.push(CheckRow::new(
                format!("unique accepting computation u={u}"),
                c.count == 1,
                Provenance::Measured,
                format!("{} within the complete bound {bound}", c.count),
            ));
        }
    }
    let (mut agree, mut total) = (0, 0);
    for x in FreeWord::enumerate(&p.alphabet, 3) {
        let d = decide_accept_m1(&m, &m.input_configuration(&x)?)?;
        total += 1;
        if !matches!(d, Decision::Incomplete(_)) && d.is_accepted() == is_nth_power(&x, n) {
            agree += 1;
        }
    }
    rows.push(CheckRow::new(
        "decisions match root extraction",
        agree == total,
        Provenance::Measured,
        format!("{agree}/{total} inputs of length <= 3"),
    ));
    Ok(rows)
}

fn m2(p: &TowerParams) -> Result<Vec<CheckRow>> {
    let m = build_m2(&p.alphabet, p.n, p.k)?;
    let mut rows = vec![CheckRow::new(
        "rule count",
        m.num_positive_rules() == m2_rule_count(p.alphabet.len(), p.n, p.k),
        Provenance::Formula,
        format!("{}", m.num_positive_rules()),
    )];
    let (len, extra) = if p.alphabet.len() == 1 { (2, 9) } else { (1, 7) };
    let (mut found, mut bad) = (0, 0);
    for w0 in controlled_starts(&m, p.n, p.k, len)? {
        let budget = SearchBudget::new(w0.a_len() + extra);
        for c in controlled_computations(&m, p.n, p.k, &w0, &budget)? {
            found += 1;
            if c.len() != w0.a_len() + 3 || c.words.iter().any(|x| x.a_len() != w0.a_len()) {
                bad += 1;
            }
        }
    }
    rows.push(CheckRow::new(
        "controlled history length |W0|_a+3",
        found > 0 && bad == 0,
        Provenance::BudgetBounded,
        format!("{found} controlled computations, {bad} off formula"),
    ));
    Ok(rows)
}

fn m3(p: &TowerParams) -> Result<Vec<CheckRow>> {
    let (n, k) = (p.n, p.k);
    let m = build_m3(&p.alphabet, n, k)?;
    let acc = m.accept_configuration()?;
    let mut rows = Vec::new();
    for u in FreeWord::enumerate(&p.alphabet, 2) {
        let h = canonical_accepting_m3(&m, n, k, &u)?;
        let ends = m.run(&m.input_configuration(&u.pow(n as i64))?, &h)?.last() == &acc;
        let expected = 2 * k * u.len() + 2 * k + 1;
        let got = designated_subcomputation(&m, &h, n).map(|(i, j)| j - i);
        rows.push(CheckRow::new(
            format!("designated subcomputation u={u}"),
            ends && got == Some(expected),
            Provenance::Formula,
            format!("2k|u|+2k+1 = {expected}, got {got:?}"),
        ));
    }
    Ok(rows)
}

fn m_language(p: &TowerParams) -> Result<Vec<CheckRow>> {
    let m = build_m(p)?;
    let acc = m.accept_configuration()?;
    let mut rows = Vec::new();
    let accepts = |start: &AdmissibleWord, h: &[usize]| m.run(start, h).map(|c| c.last() == &acc).unwrap_or(false);
    for u in FreeWord::enumerate(&p.alphabet, 1) {
        let un = u.pow(p.n as i64);
        let (i, j) = (config_i(&m, &un)?, config_j(&m, &un)?);
        let h1 = canonical_accepting_m(&m, p, &u, 1)?;
        let h2 = canonical_accepting_m(&m, p, &u, 2)?;
        rows.push(CheckRow::new(format!("I(u^n) accepted u={u}"), accepts(&i, &h1), Provenance::Measured, format!("{} steps", h1.len())));
        rows.push(CheckRow::new(format!("J(u^n) accepted u={u}"), accepts(&j, &h2), Provenance::Measured, format!("{} steps", h2.len())));
        if !u.is_empty() {
            rows.push(CheckRow::new(
                format!("I(u^n) refuses machine 2 u={u}"),
                !m.is_admissible(&i, h2[0]),
                Provenance::Measured,
                m.rule(h2[0]).id.clone(),
            ));
        }
    }
    Ok(rows)
}

fn brute_length(k: &[GenKind], delta: Rational64) -> Rational64 {
    let Some((&first, rest)) = k.split_first() else { return Rational64::from_integer(0) };
    let cost = if first == GenKind::A { delta } else { Rational64::from_integer(1) };
    let mut best = cost + brute_length(rest, delta);
    if let Some(&second) = rest.first() {
        let kinds = [first, second];
        if kinds.contains(&GenKind::Theta) && kinds.contains(&GenKind::A) {
            best = best.min(Rational64::from_integer(1) + brute_length(&rest[1..], delta));
        }
    }
    best
}

fn brute_pairs(o: &Necklace, j: usize) -> usize {
    let n = o.0.len();
    let mut count = 0;
    for x in 0..n {
        for y in 0..n {
            if x != y && o.0[x] == Bead::White && o.0[y] == Bead::White {
                let blacks = (1..(y + n - x) % n).filter(|s| o.0[(x + s) % n] == Bead::Black).count();
                count += usize::from(blacks >= j);
            }
        }
    }
    count
}

fn metrics(rng: &mut ChaCha8Rng) -> Result<Vec<CheckRow>> {
    let delta = MetricParams::default().delta;
    let symbols = [GenKind::Q, GenKind::Theta, GenKind::A, GenKind::A];
    let (mut words, mut bad) = (0, 0);
    let mut layer = vec![Vec::new()];
    for _ in 0..=6 {
        let mut next = Vec::new();
        for w in &layer {
            words += 1;
            if modified_length(w, delta) != brute_length(w, delta) {
                bad += 1;
            }
            for &s in &symbols {
                let mut v: Vec<GenKind> = w.clone();
                v.push(s);
                next.push(v);
            }
        }
        layer = next;
    }
    let mut rows = vec![CheckRow::new(
        "modified length matches all factorizations",
        bad == 0,
        Provenance::Measured,
        format!("{words} words, {bad} mismatches"),
    )];
    let mut failures = [0usize; 5];
    for _ in 0..1000 {
        let mut beads = vec![Bead::White; rng.gen_range(0..=8)];
        beads.extend(vec![Bead::Black; rng.gen_range(0..=8)]);
        for i in (1..beads.len()).rev() {
            beads.swap(i, rng.gen_range(0..=i));
        }
        let o = Necklace(beads);
        let big_j = rng.gen_range(1..=4);
        let mu = o.mixture(big_j);
        let x = o.whites();
        failures[0] += usize::from(mu != (1..=big_j).map(|j| brute_pairs(&o, j)).sum::<usize>());
        failures[1] += usize::from(mu > big_j * x * x);
        for i in 0..o.0.len() {
            let mu2 = o.without(i).mixture(big_j);
            match o.0[i] {
                Bead::White => failures[2] += usize::from(mu2 > mu || mu2 + 2 * big_j * x <= mu),
                Bead::Black => failures[3] += usize::from(mu2 > mu),
            }
        }
        let blacks: Vec<usize> = (0..o.0.len()).filter(|&i| o.0[i] == Bead::Black).collect();
        let y = blacks.len();
        let arc = |a: usize, b: usize, c: Bead| {
            let n = o.0.len();
            (1..(b + n - a) % n).filter(|s| o.0[(a + s) % n] == c).count()
        };
        for i1 in 0..y {
            for s2 in 1..y {
                for s3 in s2 + 1..y {
                    let (v1, v2, v3) = (blacks[i1], blacks[(i1 + s2) % y], blacks[(i1 + s3) % y]);
                    if arc(v1, v3, Bead::Black) <= big_j {
                        let y1y2 = arc(v1, v2, Bead::White) * arc(v2, v3, Bead::White);
                        failures[4] += usize::from(o.without(v2).mixture(big_j) + y1y2 > mu);
                    }
                }
            }
        }
    }
    let names = [
        "mixture equals sum of #P_j",
        "mixture (1): at most J x^2",
        "mixture (2): removing a white bead",
        "mixture (3): removing a black bead",
        "mixture (4): removing a middle black bead",
    ];
    for (name, f) in names.iter().zip(failures) {
        rows.push(CheckRow::new(*name, f == 0, Provenance::Measured, format!("1000 necklaces, {f} failures")));
    }
    Ok(rows)
}

fn diagrams(p: &TowerParams, rng: &mut ChaCha8Rng) -> Result<Vec<CheckRow>> {
    let m = build_m1(&p.alphabet, p.n)?;
    let (mut done, mut bad) = (0, 0);
    while done < 200 {
        let Some(c) = random_computation(&m, rng, &p.alphabet, 20)? else { continue };
        let d = trapezium(&m, &c)?;
        if d.read_computation(&m).ok().as_ref() != Some(&c) || !d.check().is_ok() {
            bad += 1;
        }
        done += 1;
    }
    let mut rows = vec![CheckRow::new(
        "trapezium round trip and band structure",
        bad == 0,
        Provenance::Measured,
        format!("200 computations, {bad} failures"),
    )];
    let mm = build_m(p)?;
    for u in FreeWord::enumerate(&p.alphabet, 1).into_iter().skip(1) {
        let d = un_diagram(&mm, p, &u)?;
        let rep = d.check();
        rows.push(CheckRow::new(
            format!("u^n diagram u={u}"),
            rep.is_ok(),
            Provenance::Measured,
            format!("area {}, {} problems", d.area(), rep.problems.len()),
        ));
    }
    for r in area_table(&mm, p, &[1, 2])? {
        rows.push(CheckRow::new(
            format!("area u={}", r.u),
            true,
            Provenance::Measured,
            format!("{} ({:.2} per |u|^2)", r.area, r.ratio),
        ));
    }
    Ok(rows)
}
