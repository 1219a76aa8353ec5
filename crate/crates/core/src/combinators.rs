//! Machine-building combinators: primitive machines, embedding into a
//! larger base, concatenation, fusing, parallel copies, cyclization and union.
//!
//! All combinators work on [`MachineSpec`] values; compile with
//! [`Machine::new`](crate::machine::Machine::new) to validate.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::machine::{Domain, MachineSpec, PartRuleSpec, PartSpec, RuleSpec, SectorSpec, TapeSpec};
use crate::step::Step;
use crate::word::{Invertible, Lit};

/// Lower-case letter stem of a part name: `Q0` -> `q0`, `{t}` -> `t`.
pub fn part_stem(part: &str) -> String {
    part.chars()
        .filter(|c| *c != '{' && *c != '}')
        .flat_map(char::to_lowercase)
        .collect()
}

fn copy_letters(alphabet: &[String], suffix: &str) -> Vec<TapeSpec> {
    alphabet
        .iter()
        .map(|a| TapeSpec {
            name: format!("{a}_{suffix}"),
            origin: Some(a.clone()),
        })
        .collect()
}

fn empty_sector() -> SectorSpec {
    SectorSpec {
        name: "-".into(),
        letters: Vec::new(),
    }
}

fn tape(a: &str, suffix: &str, inv: bool) -> Option<Lit> {
    Some(Lit::signed(format!("{a}_{suffix}"), inv))
}

fn primitive(name: &str, alphabet: &[String], runner: &str, input: usize) -> Result<MachineSpec> {
    if alphabet.is_empty() {
        return Err(Error::EmptyAlphabet);
    }
    let r1 = format!("{runner}(1)");
    let r2 = format!("{runner}(2)");
    let mid = runner.to_uppercase();
    Ok(MachineSpec {
        name: name.into(),
        cyclic: false,
        parts: vec![
            PartSpec {
                name: "Q(1)".into(),
                states: vec!["q(1)".into()],
                start: Some("q(1)".into()),
                end: Some("q(1)".into()),
            },
            PartSpec {
                name: mid.clone(),
                states: vec![r1.clone(), r2.clone()],
                start: Some(r1),
                end: Some(r2),
            },
            PartSpec {
                name: "Q(2)".into(),
                states: vec!["q(2)".into()],
                start: Some("q(2)".into()),
                end: Some("q(2)".into()),
            },
        ],
        sectors: vec![
            empty_sector(),
            SectorSpec {
                name: format!("Q(1){mid}"),
                letters: copy_letters(alphabet, "1"),
            },
            SectorSpec {
                name: format!("{mid}Q(2)"),
                letters: copy_letters(alphabet, "2"),
            },
            empty_sector(),
        ],
        inputs: vec![input],
        rules: Vec::new(),
    })
}

fn primitive_rule(id: String, step: Step, from: &str, to: &str, left: Option<Lit>, right: Option<Lit>, lock: Option<usize>) -> RuleSpec {
    let mut domains = vec![Domain::Full; 4];
    if let Some(s) = lock {
        domains[s] = Domain::Empty;
    }
    RuleSpec {
        id,
        step,
        inner_transition: false,
        parts: vec![
            PartRuleSpec::fix("q(1)"),
            PartRuleSpec::moving(from, to).with_left(left).with_right(right),
            PartRuleSpec::fix("q(2)"),
        ],
        domains,
    }
}

/// `LR(Y)`: the running letter walks left through the input, then back right.
pub fn lr(alphabet: &[String]) -> Result<MachineSpec> {
    let mut m = primitive("LR", alphabet, "p", 1)?;
    for a in alphabet {
        m.rules.push(primitive_rule(
            format!("zeta1({a})"),
            Step::work("1"),
            "p(1)",
            "p(1)",
            tape(a, "1", true),
            tape(a, "2", false),
            None,
        ));
    }
    m.rules.push(primitive_rule("zeta12".into(), Step::transition("1", "2"), "p(1)", "p(2)", None, None, Some(1)));
    for a in alphabet {
        m.rules.push(primitive_rule(
            format!("zeta2({a})"),
            Step::work("2"),
            "p(2)",
            "p(2)",
            tape(a, "1", false),
            tape(a, "2", true),
            None,
        ));
    }
    Ok(m)
}

/// `RL(Y)`: the mirror image of [`lr`]; the input sits right of the runner.
pub fn rl(alphabet: &[String]) -> Result<MachineSpec> {
    let mut m = primitive("RL", alphabet, "r", 2)?;
    for a in alphabet {
        m.rules.push(primitive_rule(
            format!("xi1({a})"),
            Step::work("1"),
            "r(1)",
            "r(1)",
            tape(a, "1", false),
            tape(a, "2", true),
            None,
        ));
    }
    m.rules.push(primitive_rule("xi12".into(), Step::transition("1", "2"), "r(1)", "r(2)", None, None, Some(2)));
    for a in alphabet {
        m.rules.push(primitive_rule(
            format!("xi2({a})"),
            Step::work("2"),
            "r(2)",
            "r(2)",
            tape(a, "1", true),
            tape(a, "2", false),
            None,
        ));
    }
    Ok(m)
}

/// Hardware shape without states or rules.
#[derive(Clone, Debug)]
pub struct Skeleton {
    pub name: String,
    pub cyclic: bool,
    pub parts: Vec<String>,
    /// Indexed like [`MachineSpec::sectors`].
    pub sectors: Vec<SectorSpec>,
    pub inputs: Vec<usize>,
}

impl Skeleton {
    pub fn of(spec: &MachineSpec) -> Self {
        Skeleton {
            name: spec.name.clone(),
            cyclic: spec.cyclic,
            parts: spec.parts.iter().map(|p| p.name.clone()).collect(),
            sectors: spec.sectors.clone(),
            inputs: spec.inputs.clone(),
        }
    }

    fn left_sector(&self, j: usize) -> usize {
        if j == 0 && self.cyclic {
            self.parts.len()
        } else {
            j
        }
    }
}

/// How a machine sits inside a larger base.
#[derive(Clone, Debug)]
pub struct Embedding {
    /// Names the new states and rule ids.
    pub tag: String,
    /// Replaces the step of every rule when set.
    pub step: Option<Step>,
    /// For each host part, the sub part it carries (others get an idle state).
    pub part_map: Vec<Option<usize>>,
    /// For each sub sector, the host sector it is identified with.
    pub sector_map: Vec<Option<usize>>,
    /// Host sectors outside the image that stay unlocked.
    pub open: Vec<usize>,
}

/// Per-sector effect of a rule: left multiplier, right multiplier, locked.
#[derive(Clone, Debug, Default)]
struct SectorAction {
    lmul: Option<Lit>,
    rmul: Option<Lit>,
    locked: bool,
}

fn sector_actions(parts: usize, cyclic: bool, rule: &RuleSpec) -> Vec<SectorAction> {
    let mut acts = vec![SectorAction::default(); parts + 1];
    for (j, p) in rule.parts.iter().enumerate() {
        let ls = if j == 0 && cyclic { parts } else { j };
        acts[ls].rmul = p.left.clone();
        acts[j + 1].lmul = p.right.clone();
    }
    for (s, a) in acts.iter_mut().enumerate() {
        a.locked = rule.locks(s);
    }
    acts
}

/// Name of an embedded state: single-state parts collapse to the tag.
fn embedded_state(host_part: &str, tag: &str, sub_part: &PartSpec, state: &str) -> String {
    let stem = part_stem(host_part);
    if sub_part.states.len() == 1 {
        format!("{stem}({tag})")
    } else {
        let k = sub_part.states.iter().position(|s| s == state).expect("state of part") + 1;
        format!("{stem}({tag}.{k})")
    }
}

/// The idle state an embedded machine uses in host parts it does not touch.
pub fn idle_state(host_part: &str, tag: &str) -> String {
    format!("{}({tag})", part_stem(host_part))
}

pub fn embed(sub: &MachineSpec, host: &Skeleton, e: &Embedding) -> Result<MachineSpec> {
    let hp = host.parts.len();
    if e.part_map.len() != hp || e.sector_map.len() != sub.sectors.len() {
        return Err(Error::ShapeMismatch(format!("embedding of {} into {} has wrong map sizes", sub.name, host.name)));
    }
    let mut parts = Vec::with_capacity(hp);
    for (h, m) in e.part_map.iter().enumerate() {
        let name = &host.parts[h];
        parts.push(match m {
            Some(j) => {
                let sp = sub.parts.get(*j).ok_or_else(|| Error::ShapeMismatch(format!("no sub part {j}")))?;
                let rename = |s: &String| embedded_state(name, &e.tag, sp, s);
                PartSpec {
                    name: name.clone(),
                    states: sp.states.iter().map(rename).collect(),
                    start: sp.start.as_ref().map(rename),
                    end: sp.end.as_ref().map(rename),
                }
            }
            None => {
                let idle = idle_state(name, &e.tag);
                PartSpec {
                    name: name.clone(),
                    states: vec![idle.clone()],
                    start: Some(idle.clone()),
                    end: Some(idle),
                }
            }
        });
    }
    let image: BTreeSet<usize> = e.sector_map.iter().flatten().copied().collect();
    let map_letter = |lit: &Lit, sub_sector: usize, host_sector: usize| -> Result<Lit> {
        let origin = sub.sectors[sub_sector]
            .letters
            .iter()
            .find(|t| t.name == lit.name)
            .and_then(|t| t.origin.clone())
            .ok_or_else(|| Error::ShapeMismatch(format!("letter {} has no origin", lit.name)))?;
        let target = host.sectors[host_sector]
            .letters
            .iter()
            .find(|t| t.origin.as_deref() == Some(origin.as_str()))
            .ok_or_else(|| Error::ShapeMismatch(format!("host sector {} has no copy of {origin}", host.sectors[host_sector].name)))?;
        Ok(Lit::signed(target.name.clone(), lit.inv))
    };
    let mut rules = Vec::with_capacity(sub.rules.len());
    for r in &sub.rules {
        let acts = sector_actions(sub.parts.len(), sub.cyclic, r);
        let mut host_acts = vec![SectorAction::default(); hp + 1];
        for (h, a) in host_acts.iter_mut().enumerate() {
            a.locked = !image.contains(&h) && !e.open.contains(&h);
        }
        for (s, act) in acts.iter().enumerate() {
            let Some(h) = e.sector_map[s] else {
                if act.lmul.is_some() || act.rmul.is_some() {
                    return Err(Error::ShapeMismatch(format!("rule {} writes to unmapped sector {s}", r.id)));
                }
                continue;
            };
            host_acts[h] = SectorAction {
                lmul: act.lmul.as_ref().map(|l| map_letter(l, s, h)).transpose()?,
                rmul: act.rmul.as_ref().map(|l| map_letter(l, s, h)).transpose()?,
                locked: act.locked,
            };
        }
        let mut rparts = Vec::with_capacity(hp);
        for (h, m) in e.part_map.iter().enumerate() {
            let (from, to) = match m {
                Some(j) => (
                    embedded_state(&host.parts[h], &e.tag, &sub.parts[*j], &r.parts[*j].from),
                    embedded_state(&host.parts[h], &e.tag, &sub.parts[*j], &r.parts[*j].to),
                ),
                None => {
                    let idle = idle_state(&host.parts[h], &e.tag);
                    (idle.clone(), idle)
                }
            };
            rparts.push(PartRuleSpec {
                from,
                to,
                left: host_acts[host.left_sector(h)].rmul.clone(),
                right: host_acts[h + 1].lmul.clone(),
            });
        }
        rules.push(RuleSpec {
            id: format!("{}[{}]", r.id, e.tag),
            step: e.step.clone().unwrap_or_else(|| r.step.clone()),
            inner_transition: r.inner_transition,
            parts: rparts,
            domains: host_acts
                .iter()
                .map(|a| if a.locked { Domain::Empty } else { Domain::Full })
                .collect(),
        });
    }
    let inputs = sub
        .inputs
        .iter()
        .filter_map(|&s| e.sector_map.get(s).copied().flatten())
        .collect();
    Ok(MachineSpec {
        name: format!("{}[{}]", sub.name, e.tag),
        cyclic: host.cyclic,
        parts,
        sectors: host.sectors.clone(),
        inputs,
        rules,
    })
}

/// Which sectors a transition rule locks.
#[derive(Clone, Debug)]
pub enum Locks {
    /// Locked iff every working rule of the source or every working rule
    /// of the target locks it.
    Auto,
    Explicit(Vec<usize>),
}

#[derive(Clone, Debug)]
pub struct Transition {
    pub id: String,
    pub from: usize,
    pub to: usize,
    pub step: Step,
    pub inner: bool,
    pub locks: Locks,
}

/// Sectors locked by every non-connecting rule of `a` or every one of `b`.
pub fn auto_locks(a: &MachineSpec, b: &MachineSpec) -> Vec<usize> {
    let all_lock = |m: &MachineSpec, s: usize| {
        let mut it = m.rules.iter().filter(|r| !r.inner_transition).peekable();
        it.peek().is_some() && it.all(|r| r.locks(s))
    };
    a.real_sectors()
        .filter(|&s| all_lock(a, s) || all_lock(b, s))
        .collect()
}

fn check_shape(a: &MachineSpec, b: &MachineSpec) -> Result<()> {
    let names = |m: &MachineSpec| m.parts.iter().map(|p| p.name.clone()).collect::<Vec<_>>();
    if a.cyclic != b.cyclic || names(a) != names(b) || a.sectors != b.sectors {
        return Err(Error::ShapeMismatch(format!("{} and {} have different hardware shapes", a.name, b.name)));
    }
    Ok(())
}

fn merge_parts(target: &mut [PartSpec], more: &[PartSpec]) {
    for (t, m) in target.iter_mut().zip(more) {
        for s in &m.states {
            if !t.states.contains(s) {
                t.states.push(s.clone());
            }
        }
    }
}

/// Concatenates submachines with transition rules. Start letters come
/// from the first submachine and end letters from the last.
pub fn concatenate(name: &str, subs: &[MachineSpec], transitions: &[Transition]) -> Result<MachineSpec> {
    let first = subs.first().ok_or_else(|| Error::ShapeMismatch("nothing to concatenate".into()))?;
    for s in &subs[1..] {
        check_shape(first, s)?;
    }
    let mut parts = first.parts.clone();
    for s in &subs[1..] {
        merge_parts(&mut parts, &s.parts);
    }
    let last = subs.last().expect("nonempty");
    for (p, l) in parts.iter_mut().zip(&last.parts) {
        p.end = l.end.clone();
    }
    let mut rules: Vec<RuleSpec> = subs.iter().flat_map(|s| s.rules.iter().cloned()).collect();
    for t in transitions {
        let (a, b) = match (subs.get(t.from), subs.get(t.to)) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::ShapeMismatch(format!("transition {} refers to a missing submachine", t.id))),
        };
        let locked = match &t.locks {
            Locks::Auto => auto_locks(a, b),
            Locks::Explicit(v) => v.clone(),
        };
        let mut domains = vec![Domain::Full; parts.len() + 1];
        for s in locked {
            domains[s] = Domain::Empty;
        }
        let tparts = a
            .parts
            .iter()
            .zip(&b.parts)
            .map(|(pa, pb)| match (&pa.end, &pb.start) {
                (Some(e), Some(s)) => Ok(PartRuleSpec::moving(e.clone(), s.clone())),
                _ => Err(Error::ShapeMismatch(format!("part {} lacks start or end letters", pa.name))),
            })
            .collect::<Result<Vec<_>>>()?;
        rules.push(RuleSpec {
            id: t.id.clone(),
            step: t.step.clone(),
            inner_transition: t.inner,
            parts: tparts,
            domains,
        });
    }
    let mut seen = BTreeSet::new();
    for r in &rules {
        if !seen.insert(r.id.clone()) {
            return Err(Error::DuplicateSymbol(r.id.clone()));
        }
    }
    Ok(MachineSpec {
        name: name.into(),
        cyclic: first.cyclic,
        parts,
        sectors: first.sectors.clone(),
        inputs: first.inputs.clone(),
        rules,
    })
}

fn inverse_spec(r: &RuleSpec) -> RuleSpec {
    RuleSpec {
        id: format!("{}^-1", r.id),
        parts: r
            .parts
            .iter()
            .map(|p| PartRuleSpec {
                from: p.to.clone(),
                to: p.from.clone(),
                left: p.left.as_ref().map(Invertible::inverse),
                right: p.right.as_ref().map(Invertible::inverse),
            })
            .collect(),
        ..r.clone()
    }
}

/// Rules that act as one rule of `a` and one rule of `b` at once. Both
/// machines must share the host shape and touch disjoint parts; a `b`
/// rule id may carry `^-1` to use its inverse.
pub fn fuse(name: &str, a: &MachineSpec, b: &MachineSpec, pairs: &[(String, String, String)]) -> Result<MachineSpec> {
    check_shape(a, b)?;
    let find = |m: &MachineSpec, id: &str| -> Result<RuleSpec> {
        let (base, inv) = match id.strip_suffix("^-1") {
            Some(x) => (x, true),
            None => (id, false),
        };
        let r = m.rule(base).ok_or_else(|| Error::UnknownSymbol(id.into()))?;
        Ok(if inv { inverse_spec(r) } else { r.clone() })
    };
    let idle = |p: &PartRuleSpec, part: &PartSpec| p.from == p.to && p.left.is_none() && p.right.is_none() && part.states.len() == 1;
    let mut parts = a.parts.clone();
    merge_parts(&mut parts, &b.parts);
    for (j, p) in parts.iter_mut().enumerate() {
        let (pa, pb) = (&a.parts[j], &b.parts[j]);
        // the part belongs to whichever machine has more than an idle letter in it
        let src = if pa.states.len() == 1 && pb.states.len() > 1 { pb } else { pa };
        p.states = src.states.clone();
        p.start = src.start.clone();
        p.end = src.end.clone();
        if pa.states.len() > 1 && pb.states.len() > 1 {
            return Err(Error::ShapeMismatch(format!("both machines run in part {}", p.name)));
        }
        if pa.states.len() == 1 && pb.states.len() == 1 && pa.states != pb.states {
            return Err(Error::ShapeMismatch(format!("idle letters differ in part {}", p.name)));
        }
    }
    let mut rules = Vec::new();
    for (ia, ib, id) in pairs {
        let (ra, rb) = (find(a, ia)?, find(b, ib)?);
        let mut rparts = Vec::new();
        for j in 0..parts.len() {
            let (x, y) = (&ra.parts[j], &rb.parts[j]);
            let pick = if idle(x, &a.parts[j]) {
                y.clone()
            } else if idle(y, &b.parts[j]) || x == y {
                x.clone()
            } else {
                return Err(Error::ShapeMismatch(format!("{ia} and {ib} both act on part {}", parts[j].name)));
            };
            rparts.push(pick);
        }
        let domains = ra
            .domains
            .iter()
            .zip(&rb.domains)
            .map(|(x, y)| if *x == Domain::Empty || *y == Domain::Empty { Domain::Empty } else { Domain::Full })
            .collect();
        rules.push(RuleSpec {
            id: id.clone(),
            step: ra.step.clone(),
            inner_transition: ra.inner_transition,
            parts: rparts,
            domains,
        });
    }
    Ok(MachineSpec {
        name: name.into(),
        cyclic: a.cyclic,
        parts,
        sectors: a.sectors.clone(),
        inputs: a.inputs.clone(),
        rules,
    })
}

/// Prepends a one-letter part and closes the base into a circle. The two
/// new sectors carry no letters and are locked by every rule.
pub fn cyclize(m: &MachineSpec, part: &str, state: &str) -> Result<MachineSpec> {
    if m.cyclic {
        return Err(Error::AlreadyCyclic);
    }
    let n = m.parts.len();
    let mut parts = vec![PartSpec {
        name: part.into(),
        states: vec![state.into()],
        start: Some(state.into()),
        end: Some(state.into()),
    }];
    parts.extend(m.parts.iter().cloned());
    let mut sectors = vec![
        empty_sector(),
        SectorSpec {
            name: format!("{part}{}", m.parts[0].name),
            letters: Vec::new(),
        },
    ];
    sectors.extend(m.sectors[1..n].iter().cloned());
    sectors.push(SectorSpec {
        name: format!("{}{part}", m.parts[n - 1].name),
        letters: Vec::new(),
    });
    let rules = m
        .rules
        .iter()
        .map(|r| {
            let mut rparts = vec![PartRuleSpec::fix(state)];
            rparts.extend(r.parts.iter().cloned());
            let mut domains = vec![Domain::Full, Domain::Empty];
            domains.extend(r.domains[1..n].iter().cloned());
            domains.push(Domain::Empty);
            RuleSpec {
                parts: rparts,
                domains,
                ..r.clone()
            }
        })
        .collect();
    Ok(MachineSpec {
        name: format!("cyc({})", m.name),
        cyclic: true,
        parts,
        sectors,
        inputs: m.inputs.iter().map(|i| i + 1).collect(),
        rules,
    })
}

/// Prepends a one-letter part. The new sector between it and the old first
/// part is locked by every rule.
pub fn extend_left(m: &MachineSpec, part: &str, state: &str, sector: SectorSpec) -> Result<MachineSpec> {
    if m.cyclic {
        return Err(Error::ShapeMismatch("cannot extend a cyclic base".into()));
    }
    let n = m.parts.len();
    let mut parts = vec![PartSpec {
        name: part.into(),
        states: vec![state.into()],
        start: Some(state.into()),
        end: Some(state.into()),
    }];
    parts.extend(m.parts.iter().cloned());
    let mut sectors = vec![empty_sector(), sector];
    sectors.extend(m.sectors[1..=n].iter().cloned());
    let rules = m
        .rules
        .iter()
        .map(|r| {
            let mut rparts = vec![PartRuleSpec::fix(state)];
            rparts.extend(r.parts.iter().cloned());
            let mut domains = vec![Domain::Full, Domain::Empty];
            domains.extend(r.domains[1..=n].iter().cloned());
            RuleSpec {
                parts: rparts,
                domains,
                ..r.clone()
            }
        })
        .collect();
    Ok(MachineSpec {
        name: format!("{}+{part}", m.name),
        cyclic: false,
        parts,
        sectors,
        inputs: m.inputs.iter().map(|i| i + 1).collect(),
        rules,
    })
}

/// Suffix marking the copy a symbol belongs to.
pub fn coordinate_name(name: &str, c: usize) -> String {
    format!("{name}@{c}")
}

/// Splits `x@c` into `(x, c)`.
pub fn split_coordinate(name: &str) -> Option<(&str, usize)> {
    let (base, c) = name.rsplit_once('@')?;
    Some((base, c.parse().ok()?))
}

/// `copies` coordinate-tagged copies of the base of `m`, every rule acting
/// on all of them at once. `extra_lock(c, s)` locks sector `s` of copy `c`
/// (1-based) in every rule; insertions into such a sector are dropped.
pub fn parallel(m: &MachineSpec, copies: usize, extra_lock: &dyn Fn(usize, usize) -> bool) -> Result<MachineSpec> {
    if copies == 0 {
        return Err(Error::InvalidParams("parallel needs at least one copy".into()));
    }
    let p = m.parts.len();
    let tag_lit = |l: &Lit, c: usize| Lit::signed(coordinate_name(&l.name, c), l.inv);
    let mut parts = Vec::with_capacity(copies * p);
    let mut sectors = Vec::with_capacity(copies * p + 1);
    let rename_sector = |s: &SectorSpec, c: usize| SectorSpec {
        name: if s.name == "-" { "-".into() } else { coordinate_name(&s.name, c) },
        letters: s
            .letters
            .iter()
            .map(|t| TapeSpec {
                name: coordinate_name(&t.name, c),
                origin: t.origin.clone(),
            })
            .collect(),
    };
    sectors.push(rename_sector(&m.sectors[0], 1));
    let mut inputs = Vec::new();
    for c in 1..=copies {
        let off = (c - 1) * p;
        for part in &m.parts {
            let tag = |s: &String| coordinate_name(s, c);
            parts.push(PartSpec {
                name: coordinate_name(&part.name, c),
                states: part.states.iter().map(tag).collect(),
                start: part.start.as_ref().map(tag),
                end: part.end.as_ref().map(tag),
            });
        }
        for s in &m.sectors[1..=p] {
            sectors.push(rename_sector(s, c));
        }
        inputs.extend(m.inputs.iter().map(|i| off + i));
    }
    let mut rules = Vec::with_capacity(m.rules.len());
    for r in &m.rules {
        if m.cyclic && r.parts[0].left.is_some() {
            // would write into the neighbouring copy
            return Err(Error::ShapeMismatch(format!("rule {} writes across the wrap sector", r.id)));
        }
        let mut rparts = Vec::with_capacity(copies * p);
        let mut domains = vec![Domain::Full; copies * p + 1];
        for c in 1..=copies {
            let off = (c - 1) * p;
            let locked_here = |s: usize| extra_lock(c, s);
            for (j, part) in r.parts.iter().enumerate() {
                let ls = if j == 0 && m.cyclic { p } else { j };
                rparts.push(PartRuleSpec {
                    from: coordinate_name(&part.from, c),
                    to: coordinate_name(&part.to, c),
                    left: part.left.as_ref().filter(|_| !locked_here(ls)).map(|l| tag_lit(l, c)),
                    right: part.right.as_ref().filter(|_| !locked_here(j + 1)).map(|l| tag_lit(l, c)),
                });
            }
            for s in 1..=p {
                domains[off + s] = if locked_here(s) {
                    Domain::Empty
                } else {
                    r.domains[s].clone()
                };
                if let Domain::Subset(v) = &domains[off + s] {
                    domains[off + s] = Domain::Subset(v.iter().map(|x| coordinate_name(x, c)).collect());
                }
            }
        }
        rules.push(RuleSpec {
            parts: rparts,
            domains,
            ..r.clone()
        });
    }
    Ok(MachineSpec {
        name: format!("{}^{copies}", m.name),
        cyclic: m.cyclic,
        parts,
        sectors,
        inputs,
        rules,
    })
}

/// Renames states and rule ids; the hardware shape is unchanged.
pub fn rename(m: &MachineSpec, state: &dyn Fn(&str) -> String, rule: &dyn Fn(&str) -> String) -> MachineSpec {
    let mut out = m.clone();
    for p in &mut out.parts {
        p.states = p.states.iter().map(|s| state(s)).collect();
        p.start = p.start.as_deref().map(state);
        p.end = p.end.as_deref().map(state);
    }
    for r in &mut out.rules {
        r.id = rule(&r.id);
        for p in &mut r.parts {
            p.from = state(&p.from);
            p.to = state(&p.to);
        }
    }
    out
}

/// A machine with one state per part and no rules.
pub fn trivial(host: &Skeleton, state: &dyn Fn(&str) -> String) -> MachineSpec {
    MachineSpec {
        name: host.name.clone(),
        cyclic: host.cyclic,
        parts: host
            .parts
            .iter()
            .map(|p| {
                let s = state(p);
                PartSpec {
                    name: p.clone(),
                    states: vec![s.clone()],
                    start: Some(s.clone()),
                    end: Some(s),
                }
            })
            .collect(),
        sectors: host.sectors.clone(),
        inputs: host.inputs.clone(),
        rules: Vec::new(),
    }
}

/// Both rule sets on the union of the state sets. Start and end letters
/// are taken from `a`.
pub fn union(name: &str, a: &MachineSpec, b: &MachineSpec) -> Result<MachineSpec> {
    check_shape(a, b)?;
    let mut parts = a.parts.clone();
    merge_parts(&mut parts, &b.parts);
    let mut ids: HashMap<&str, ()> = HashMap::new();
    for r in a.rules.iter().chain(&b.rules) {
        if ids.insert(&r.id, ()).is_some() {
            return Err(Error::DuplicateSymbol(r.id.clone()));
        }
    }
    Ok(MachineSpec {
        name: name.into(),
        cyclic: a.cyclic,
        parts,
        sectors: a.sectors.clone(),
        inputs: a.inputs.clone(),
        rules: a.rules.iter().chain(&b.rules).cloned().collect(),
    })
}
