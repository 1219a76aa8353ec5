//! Deciding acceptance by M1.
//!
//! Over a one-letter alphabet every phase of M1 has a single working rule,
//! so a reduced history is a sequence of blocks `rho^j` separated by
//! transition rules. The locks of a transition are linear conditions on
//! `j`, which either fix `j` or leave it free, and the search below walks
//! these blocks instead of single rules. With the length bound
//! `(30n^2+24n) max(‖W_0‖, ‖W_ac‖)` it counts every accepting reduced
//! history, so it is complete.
//!
//! For larger alphabets a rejection is certified by mapping the machine
//! onto a smaller one: a homomorphism onto the one-letter alphabet
//! (followed by the complete count above), or onto a finite group, where
//! reachability is a finite search. Every computation maps to a
//! computation of the image, so an image without an accepting computation
//! proves rejection. Witnesses for accepted words come from a bounded
//! breadth-first search.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use crate::admissible::AdmissibleWord;
use crate::computation::Computation;
use crate::error::{Error, Result};
use crate::machine::{inverse_rule, Letter, Machine, RuleIdx};
use crate::search::{bounded_accept, SearchBudget, SearchOutcome};
use crate::step::StepKind;
use crate::tower::build_m1;

/// Node budget of one block search.
pub const BLOCK_NODE_CAP: u64 = 50_000_000;
/// Node budget of one finite-quotient search.
const QUOTIENT_NODE_CAP: usize = 2_000_000;
/// Accepting histories kept by a count.
const KEPT_HISTORIES: usize = 16;

/// `(30n^2+24n) max(‖W_0‖, ‖W_ac‖)`, the length bound for M1.
pub fn m1_length_bound(n: usize, w0_len: usize, wac_len: usize) -> usize {
    (30 * n * n + 24 * n) * w0_len.max(wac_len)
}

/// The exponent `n` and the input alphabet of an M1 machine.
pub fn m1_shape(m1: &Machine) -> Result<(usize, Vec<String>)> {
    let transitions = m1
        .positive_rules()
        .filter(|&r| matches!(m1.rule(r).step.kind, StepKind::Transition(..)))
        .count();
    if m1.num_parts() != 5 || transitions % 2 == 0 {
        return Err(Error::InvalidParams(format!("{} does not have the shape of M1", m1.name())));
    }
    Ok(((transitions + 1) / 2, crate::search::input_alphabet(m1)))
}

fn check_standard_base(m: &Machine, w: &AdmissibleWord) -> Result<()> {
    let base = w.base(m.hardware());
    if base.len() != m.num_parts() || base.iter().enumerate().any(|(j, &(p, inv))| inv || p != j) {
        return Err(Error::NotAdmissibleWord("expected a configuration (standard base)".into()));
    }
    Ok(())
}

fn sign(l: Letter) -> i64 {
    if l.is_inv() {
        -1
    } else {
        1
    }
}

// ---------------------------------------------------------------- block search

/// Result of counting accepting histories.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcceptCount {
    pub bound: usize,
    /// Number of reduced accepting histories of length at most `bound`.
    pub count: u64,
    /// The first few of them, shortest first.
    pub histories: Vec<Vec<RuleIdx>>,
    /// Search nodes visited.
    pub nodes: u64,
}

/// A machine whose sectors have at most one letter, with integer sector contents.
struct Blocks<'a> {
    m: &'a Machine,
    sectors: Vec<usize>,
    end: Vec<u32>,
    /// Exponent change per rule and sector.
    delta: Vec<Vec<i64>>,
    working: HashMap<Vec<u32>, RuleIdx>,
    moves: HashMap<Vec<u32>, Vec<RuleIdx>>,
}

struct Walk {
    bound: usize,
    count: u64,
    found: Vec<Vec<RuleIdx>>,
    nodes: u64,
}

/// `j` values compatible with a set of linear conditions `c + j d = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Solve {
    Free,
    Forced(i64),
    Never,
}

fn solve(conds: impl Iterator<Item = (i64, i64)>) -> Solve {
    let mut out = Solve::Free;
    for (c, d) in conds {
        let j = if d == 0 {
            if c != 0 {
                return Solve::Never;
            }
            continue;
        } else if c % d != 0 {
            return Solve::Never;
        } else {
            -c / d
        };
        out = match out {
            Solve::Free => Solve::Forced(j),
            Solve::Forced(k) if k == j => out,
            _ => return Solve::Never,
        };
    }
    out
}

impl<'a> Blocks<'a> {
    fn new(m: &'a Machine) -> Result<Self> {
        let hw = m.hardware();
        let sectors: Vec<usize> = m.real_sectors().collect();
        for &s in &sectors {
            if hw.sector_letters(s).len() > 1 {
                return Err(Error::InvalidParams("block search needs one letter per sector".into()));
            }
        }
        let np = m.num_parts();
        let mut delta = Vec::with_capacity(m.rules().len());
        let mut working = HashMap::new();
        let mut moves: HashMap<Vec<u32>, Vec<RuleIdx>> = HashMap::new();
        for (r, rule) in m.rules().iter().enumerate() {
            let mut d = vec![0i64; np + 1];
            for (j, p) in rule.parts.iter().enumerate() {
                if let Some(l) = p.left {
                    d[hw.left_sector(j)] += sign(l);
                }
                if let Some(x) = p.right {
                    d[j + 1] += sign(x);
                }
            }
            delta.push(d);
            let from: Vec<u32> = rule.parts.iter().map(|p| p.from).collect();
            let to: Vec<u32> = rule.parts.iter().map(|p| p.to).collect();
            if from == to {
                if rule.positive && working.insert(from, r).is_some() {
                    return Err(Error::InvalidParams("block search needs one working rule per phase".into()));
                }
            } else {
                moves.entry(from).or_default().push(r);
            }
        }
        Ok(Blocks {
            m,
            sectors,
            end: m.end_states()?,
            delta,
            working,
            moves,
        })
    }

    fn contents(&self, w: &AdmissibleWord) -> Vec<i64> {
        let hw = self.m.hardware();
        let mut c = vec![0i64; self.m.num_parts() + 1];
        for v in w.sectors(hw) {
            c[v.sector] = v.tape.iter().map(|&l| sign(l)).sum();
        }
        c
    }

    /// Can the working rule of `states` run a block of nonzero length from `c`?
    fn block_allowed(&self, rho: Option<RuleIdx>, c: &[i64]) -> bool {
        rho.is_some_and(|r| {
            let rule = self.m.rule(r);
            self.sectors.iter().all(|&s| !rule.locks(s) || c[s] == 0)
        })
    }

    /// Block lengths `j` with `|j| <= lim` making `c + j d` satisfy `cond`.
    fn choices(&self, rho: Option<RuleIdx>, c: &[i64], lim: usize, locked: &[usize]) -> Vec<i64> {
        let d = rho.map(|r| &self.delta[r]);
        let s = solve(locked.iter().map(|&s| (c[s], d.map_or(0, |d| d[s]))));
        let lim = lim as i64;
        let nonzero = self.block_allowed(rho, c);
        match s {
            Solve::Never => Vec::new(),
            Solve::Forced(j) => {
                if j.abs() <= lim && (j == 0 || nonzero) {
                    vec![j]
                } else {
                    Vec::new()
                }
            }
            Solve::Free => {
                let mut v = vec![0];
                if nonzero {
                    for j in 1..=lim {
                        v.push(j);
                        v.push(-j);
                    }
                }
                v
            }
        }
    }

    fn push_block(h: &mut Vec<RuleIdx>, rho: Option<RuleIdx>, j: i64) {
        if let Some(r) = rho {
            let r = if j < 0 { inverse_rule(r) } else { r };
            h.extend(std::iter::repeat(r).take(j.unsigned_abs() as usize));
        }
    }

    fn walk(&self, st: &[u32], c: &[i64], last: Option<RuleIdx>, left: usize, h: &mut Vec<RuleIdx>, out: &mut Walk) -> Result<()> {
        out.nodes += 1;
        if out.nodes > BLOCK_NODE_CAP {
            return Err(Error::BudgetExceeded {
                partial: out.count as usize,
            });
        }
        let rho = self.working.get(st).copied();
        if st == self.end.as_slice() {
            for j in self.choices(rho, c, left, &self.sectors) {
                out.count += 1;
                if out.found.len() < KEPT_HISTORIES {
                    let mut full = h.clone();
                    Self::push_block(&mut full, rho, j);
                    out.found.push(full);
                }
            }
        }
        if left == 0 {
            return Ok(());
        }
        let Some(moves) = self.moves.get(st) else {
            return Ok(());
        };
        for &t in moves {
            let rule = self.m.rule(t);
            let locked: Vec<usize> = self.sectors.iter().copied().filter(|&s| rule.locks(s)).collect();
            for j in self.choices(rho, c, left - 1, &locked) {
                if j == 0 && last == Some(inverse_rule(t)) {
                    continue;
                }
                let mut next = c.to_vec();
                for &s in &self.sectors {
                    next[s] += j * rho.map_or(0, |r| self.delta[r][s]) + self.delta[t][s];
                }
                let to: Vec<u32> = rule.parts.iter().map(|p| p.to).collect();
                let mark = h.len();
                Self::push_block(h, rho, j);
                h.push(t);
                self.walk(&to, &next, Some(t), left - 1 - j.unsigned_abs() as usize, h, out)?;
                h.truncate(mark);
            }
        }
        Ok(())
    }
}

/// Counts the reduced accepting histories of length at most `bound` from a
/// configuration of a machine with one-letter sectors and one working rule
/// per state tuple (M1 over a one-letter alphabet).
pub fn count_accepting_blocks(m: &Machine, w0: &AdmissibleWord, bound: usize) -> Result<AcceptCount> {
    check_standard_base(m, w0)?;
    let b = Blocks::new(m)?;
    let states: Vec<u32> = w0.state_letters().iter().map(|l| l.index()).collect();
    let mut out = Walk {
        bound,
        count: 0,
        found: Vec::new(),
        nodes: 0,
    };
    let mut h = Vec::new();
    b.walk(&states, &b.contents(w0), None, bound, &mut h, &mut out)?;
    out.found.sort_by_key(|h| h.len());
    Ok(AcceptCount {
        bound: out.bound,
        count: out.count,
        histories: out.found,
        nodes: out.nodes,
    })
}

// ---------------------------------------------------------------- finite groups

/// A finite group given by its multiplication table; element 0 is the identity.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    pub name: String,
    order: usize,
    mul: Vec<u16>,
    inv: Vec<u16>,
    /// Elements used as images of generators.
    pub generators: Vec<u16>,
    labels: Vec<String>,
}

impl FiniteGroup {
    fn from_fn(name: String, order: usize, mul: impl Fn(usize, usize) -> usize, generators: Vec<u16>, label: impl Fn(usize) -> String) -> Self {
        let mut table = vec![0u16; order * order];
        for a in 0..order {
            for b in 0..order {
                table[a * order + b] = mul(a, b) as u16;
            }
        }
        let inv = (0..order)
            .map(|a| (0..order).find(|&b| table[a * order + b] == 0).expect("group element has an inverse") as u16)
            .collect();
        FiniteGroup {
            name,
            order,
            mul: table,
            inv,
            generators,
            labels: (0..order).map(label).collect(),
        }
    }

    /// `Z/m`.
    pub fn cyclic(m: usize) -> Self {
        FiniteGroup::from_fn(format!("Z/{m}"), m, |a, b| (a + b) % m, (1..m as u16).collect(), |a| a.to_string())
    }

    /// Upper unitriangular 3x3 matrices over `Z/m`; `(x,y,z)(x',y',z') = (x+x', y+y', z+z'+xy')`.
    pub fn heisenberg(m: usize) -> Self {
        let dec = move |e: usize| (e % m, (e / m) % m, e / (m * m));
        let enc = move |x: usize, y: usize, z: usize| x % m + m * (y % m) + m * m * (z % m);
        let generators = (1..m * m).map(|e| e as u16).collect();
        FiniteGroup::from_fn(
            format!("H(Z/{m})"),
            m * m * m,
            |a, b| {
                let (x, y, z) = dec(a);
                let (u, v, w) = dec(b);
                enc(x + u, y + v, z + w + x * v)
            },
            generators,
            move |e| {
                let (x, y, z) = dec(e);
                format!("({x},{y},{z})")
            },
        )
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.order + b as usize]
    }

    pub fn inv(&self, a: u16) -> u16 {
        self.inv[a as usize]
    }

    pub fn label(&self, a: u16) -> &str {
        &self.labels[a as usize]
    }

    pub fn pow(&self, a: u16, n: usize) -> u16 {
        (0..n).fold(0, |acc, _| self.mul(acc, a))
    }

    /// Membership table of the set of `n`-th powers.
    pub fn nth_powers(&self, n: usize) -> Vec<bool> {
        let mut v = vec![false; self.order];
        for a in 0..self.order as u16 {
            v[self.pow(a, n) as usize] = true;
        }
        v
    }
}

// ---------------------------------------------------------------- decisions

/// Why a word is rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// The complete block search found no accepting history.
    Exhausted { bound: usize, nodes: u64 },
    /// The image under `letter -> a^e` has no accepting history.
    OneLetterImage { exponents: Vec<(String, i64)>, bound: usize },
    /// The image over a finite group cannot reach the accept configuration.
    Quotient { group: String, images: Vec<(String, String)>, explored: usize },
    /// Breadth-first search visited every reachable word.
    Unreachable { explored: usize },
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::Exhausted { bound, nodes } => {
                write!(f, "no accepting history of length <= {bound} ({nodes} block nodes)")
            }
            Certificate::OneLetterImage { exponents, bound } => {
                let map: Vec<String> = exponents.iter().map(|(x, e)| format!("{x}->a^{e}")).collect();
                write!(f, "image under {} has no accepting history of length <= {bound}", map.join(","))
            }
            Certificate::Quotient { group, images, explored } => {
                let map: Vec<String> = images.iter().map(|(x, g)| format!("{x}->{g}")).collect();
                write!(f, "image over {group} under {} never accepts ({explored} states)", map.join(","))
            }
            Certificate::Unreachable { explored } => {
                write!(f, "all {explored} reachable words visited")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    Accepted {
        witness: Computation,
        /// Number of accepting histories within the length bound, when it was counted.
        count: Option<u64>,
    },
    Rejected(Certificate),
    Incomplete(String),
}

impl Decision {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Decision::Accepted { .. })
    }

    pub fn is_rejected(&self) -> bool {
        matches!(self, Decision::Rejected(_))
    }
}

/// Decides whether a configuration of M1 is accepted, using the length bound.
pub fn decide_accept_m1(m1: &Machine, w0: &AdmissibleWord) -> Result<Decision> {
    let (n, _) = m1_shape(m1)?;
    let bound = m1_length_bound(n, w0.len(), m1.accept_configuration()?.len());
    decide_accept_m1_with_bound(m1, w0, bound)
}

/// [`decide_accept_m1`] with an explicit length bound. A bound below the
/// lemma value can only give an acceptance or `BudgetExceeded`.
pub fn decide_accept_m1_with_bound(m1: &Machine, w0: &AdmissibleWord, bound: usize) -> Result<Decision> {
    let (n, alphabet) = m1_shape(m1)?;
    check_standard_base(m1, w0)?;
    let full = m1_length_bound(n, w0.len(), m1.accept_configuration()?.len());
    let short = bound < full;
    if alphabet.len() == 1 {
        let c = count_accepting_blocks(m1, w0, bound)?;
        return match c.histories.first() {
            Some(h) => Ok(Decision::Accepted {
                witness: m1.run(w0, h)?,
                count: Some(c.count),
            }),
            None if short => Err(Error::BudgetExceeded { partial: 0 }),
            None => Ok(Decision::Rejected(Certificate::Exhausted { bound, nodes: c.nodes })),
        };
    }
    let wac_len = m1.accept_configuration()?.len();
    let witness_search = |slack: Option<usize>| -> Result<SearchOutcome> {
        let mut budget = SearchBudget::new(bound);
        if let Some(s) = slack {
            budget = budget.with_word_norm(w0.len().max(wac_len) + s);
        }
        bounded_accept(m1, w0, &budget)
    };
    // Witnesses usually stay among words no longer than the start, where
    // the reachable set is small; try that first.
    if let SearchOutcome::Accepted(c) = witness_search(Some(0))? {
        return Ok(Decision::Accepted { witness: c, count: None });
    }
    if !short {
        if let Some(cert) = one_letter_certificate(m1, n, &alphabet, w0, bound)? {
            return Ok(Decision::Rejected(cert));
        }
        if let Some(cert) = quotient_certificate(m1, n, &alphabet, w0)? {
            return Ok(Decision::Rejected(cert));
        }
    }
    let mut last_reason = String::new();
    for slack in [Some(2), Some(4), None] {
        match witness_search(slack)? {
            SearchOutcome::Accepted(c) => return Ok(Decision::Accepted { witness: c, count: None }),
            SearchOutcome::Rejected { explored } => {
                return Ok(Decision::Rejected(Certificate::Unreachable { explored }))
            }
            SearchOutcome::Incomplete { reason, .. } => last_reason = reason,
        }
    }
    if short {
        return Err(Error::BudgetExceeded { partial: 0 });
    }
    Ok(Decision::Incomplete(format!(
        "no certificate found and the witness search stopped: {last_reason}"
    )))
}

/// Is `w0` the input configuration of some word?
fn is_input_configuration(m1: &Machine, w0: &AdmissibleWord) -> Result<bool> {
    let hw = m1.hardware();
    let start: Vec<Letter> = m1.start_states()?.iter().map(|&q| Letter::state(q, false)).collect();
    Ok(w0.state_letters() == start && w0.sectors(hw).all(|v| v.tape.is_empty() || m1.inputs().contains(&v.sector)))
}

/// Tries every map `letter -> a^e`, `e` in `{-1, 0, 1}`.
fn one_letter_certificate(m1: &Machine, n: usize, alphabet: &[String], w0: &AdmissibleWord, bound: usize) -> Result<Option<Certificate>> {
    let image = build_m1(&["a".to_string()], n)?;
    let hw = m1.hardware();
    let ihw = image.hardware();
    let states: Vec<u32> = w0
        .state_letters()
        .iter()
        .map(|&q| ihw.letter(hw.name(q)).map(|l| l.index()))
        .collect::<Result<_>>()?;
    let is_input = is_input_configuration(m1, w0)?;
    let total = 3usize.pow(alphabet.len() as u32);
    for code in 0..total {
        let exps: Vec<i64> = (0..alphabet.len())
            .map(|i| (code / 3usize.pow(i as u32) % 3) as i64 - 1)
            .collect();
        let exponent = |l: Letter| {
            let o = hw.tape_origin(l.index()).unwrap_or_default();
            let i = alphabet.iter().position(|a| a == o).expect("tape letter of the input alphabet");
            exps[i] * sign(l)
        };
        if is_input {
            // the image of an input a^(kn) is accepted, so it certifies nothing
            let e: i64 = w0.letters().iter().filter(|l| !l.is_state()).map(|&l| exponent(l)).sum();
            if e % n as i64 == 0 {
                continue;
            }
        }
        let mut contents = Vec::new();
        for v in w0.sectors(hw) {
            let e: i64 = v.tape.iter().map(|&l| exponent(l)).sum();
            let a = Letter::tape(ihw.sector_letters(v.sector)[0], e < 0);
            contents.push((v.sector, vec![a; e.unsigned_abs() as usize]));
        }
        let start = image.configuration_with(&states, &contents)?;
        if count_accepting_blocks(&image, &start, bound)?.count == 0 {
            return Ok(Some(Certificate::OneLetterImage {
                exponents: alphabet.iter().cloned().zip(exps).collect(),
                bound,
            }));
        }
    }
    Ok(None)
}

/// The groups tried by [`quotient_certificate`], smallest first.
pub fn certificate_groups() -> Vec<FiniteGroup> {
    vec![
        FiniteGroup::cyclic(3),
        FiniteGroup::cyclic(4),
        FiniteGroup::heisenberg(2),
        FiniteGroup::heisenberg(3),
        FiniteGroup::heisenberg(4),
    ]
}

fn quotient_certificate(m1: &Machine, n: usize, alphabet: &[String], w0: &AdmissibleWord) -> Result<Option<Certificate>> {
    let hw = m1.hardware();
    let is_input = is_input_configuration(m1, w0)?;
    for g in certificate_groups() {
        let powers = g.nth_powers(n);
        let gens = &g.generators;
        let total = gens.len().pow(alphabet.len() as u32);
        for code in 0..total {
            let images: Vec<u16> = (0..alphabet.len())
                .map(|i| gens[code / gens.len().pow(i as u32) % gens.len()])
                .collect();
            let map = |l: Letter| -> u16 {
                let o = hw.tape_origin(l.index()).unwrap_or_default();
                let i = alphabet.iter().position(|a| a == o).expect("tape letter of the input alphabet");
                if l.is_inv() {
                    g.inv(images[i])
                } else {
                    images[i]
                }
            };
            if is_input {
                // the quotient accepts whenever the input maps to an n-th power
                let x = w0.letters().iter().filter(|l| !l.is_state()).fold(0, |acc, &l| g.mul(acc, map(l)));
                if powers[x as usize] {
                    continue;
                }
            }
            if let Some(explored) = quotient_unreachable(m1, &g, &map, w0) {
                return Ok(Some(Certificate::Quotient {
                    group: g.name.clone(),
                    images: alphabet
                        .iter()
                        .cloned()
                        .zip(images.iter().map(|&e| g.label(e).to_string()))
                        .collect(),
                    explored,
                }));
            }
        }
    }
    Ok(None)
}

/// `Some(states explored)` if the image of `w0` over `g` cannot reach the
/// accept configuration; `None` if it can or the search is too large.
fn quotient_unreachable(m: &Machine, g: &FiniteGroup, map: &dyn Fn(Letter) -> u16, w0: &AdmissibleWord) -> Option<usize> {
    let hw = m.hardware();
    let np = m.num_parts();
    let sectors: Vec<usize> = m.real_sectors().collect();
    // per rule: state tuple change and, per sector, the left and right factors
    let effects: Vec<(Vec<u32>, Vec<u32>, Vec<(u16, u16)>)> = m
        .rules()
        .iter()
        .map(|rule| {
            let mut f = vec![(0u16, 0u16); np + 1];
            for (j, p) in rule.parts.iter().enumerate() {
                if let Some(l) = p.left {
                    let s = hw.left_sector(j);
                    f[s].1 = g.mul(f[s].1, map(l));
                }
                if let Some(x) = p.right {
                    f[j + 1].0 = g.mul(map(x), f[j + 1].0);
                }
            }
            (
                rule.parts.iter().map(|p| p.from).collect(),
                rule.parts.iter().map(|p| p.to).collect(),
                f,
            )
        })
        .collect();
    let mut start = vec![0u16; np + 1];
    for v in w0.sectors(hw) {
        start[v.sector] = v.tape.iter().fold(0, |acc, &l| g.mul(acc, map(l)));
    }
    let states: Vec<u32> = w0.state_letters().iter().map(|l| l.index()).collect();
    let end = m.end_states().ok()?;
    let goal = (end, vec![0u16; np + 1]);
    let mut seen: HashSet<(Vec<u32>, Vec<u16>)> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert((states.clone(), start.clone()));
    queue.push_back((states, start));
    while let Some((st, c)) = queue.pop_front() {
        if (st.clone(), c.clone()) == goal {
            return None;
        }
        for (r, (from, to, f)) in effects.iter().enumerate() {
            if *from != st {
                continue;
            }
            let rule = m.rule(r);
            if sectors.iter().any(|&s| rule.locks(s) && c[s] != 0) {
                continue;
            }
            let mut next = c.clone();
            for &s in &sectors {
                next[s] = g.mul(g.mul(f[s].0, c[s]), f[s].1);
            }
            let key = (to.clone(), next);
            if !seen.contains(&key) {
                if seen.len() >= QUOTIENT_NODE_CAP {
                    return None;
                }
                seen.insert(key.clone());
                queue.push_back(key);
            }
        }
    }
    Some(seen.len())
}
