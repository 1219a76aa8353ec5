//! Line oriented text formats for machines and computations.
//!
//! Machine files look like
//!
//! ```text
//! machine LR
//! cyclic false
//! part Q(1) start=q(1) end=q(1) : q(1)
//! sector 1 Q(1)P : a_1=a
//! input 1
//! rule zeta1(a)
//! step work 1
//! map q(1) -> q(1)
//! map p(1) -> p(1) left a_1^-1 right a_2
//! lock 2
//! end
//! ```
//!
//! The writer is canonical, so `write(parse(write(m))) == write(m)`.

use std::fmt::Write as _;

use crate::admissible::AdmissibleWord;
use crate::computation::Computation;
use crate::error::{parse_err, Error, Result};
use crate::machine::{Domain, Machine, MachineSpec, PartRuleSpec, PartSpec, RuleSpec, SectorSpec, TapeSpec};
use crate::step::{Step, StepKind};
use crate::word::Lit;

pub fn write_machine(spec: &MachineSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "machine {}", spec.name);
    let _ = writeln!(out, "cyclic {}", spec.cyclic);
    for p in &spec.parts {
        let _ = writeln!(
            out,
            "part {} start={} end={} : {}",
            p.name,
            p.start.as_deref().unwrap_or("-"),
            p.end.as_deref().unwrap_or("-"),
            p.states.join(" ")
        );
    }
    for (i, s) in spec.sectors.iter().enumerate() {
        let _ = write!(out, "sector {i} {} :", s.name);
        for l in &s.letters {
            match &l.origin {
                Some(o) => {
                    let _ = write!(out, " {}={o}", l.name);
                }
                None => {
                    let _ = write!(out, " {}", l.name);
                }
            }
        }
        out.push('\n');
    }
    out.push_str("input");
    for i in &spec.inputs {
        let _ = write!(out, " {i}");
    }
    out.push('\n');
    for r in &spec.rules {
        write_rule(&mut out, r);
    }
    out
}

fn write_rule(out: &mut String, r: &RuleSpec) {
    let _ = writeln!(out, "rule {}", r.id);
    let _ = match &r.step.kind {
        StepKind::Work(l) => write!(out, "step work {l}"),
        StepKind::Transition(a, b) => write!(out, "step transition {a} {b}"),
        StepKind::Named(l) => write!(out, "step named {l}"),
    };
    if let Some(j) = r.step.machine {
        let _ = write!(out, " machine {j}");
    }
    out.push('\n');
    if r.inner_transition {
        out.push_str("inner\n");
    }
    for p in &r.parts {
        let _ = write!(out, "map {} -> {}", p.from, p.to);
        if let Some(l) = &p.left {
            let _ = write!(out, " left {l}");
        }
        if let Some(l) = &p.right {
            let _ = write!(out, " right {l}");
        }
        out.push('\n');
    }
    let locks: Vec<String> = r
        .domains
        .iter()
        .enumerate()
        .filter(|(_, d)| **d == Domain::Empty)
        .map(|(i, _)| i.to_string())
        .collect();
    if !locks.is_empty() {
        let _ = writeln!(out, "lock {}", locks.join(" "));
    }
    for (i, d) in r.domains.iter().enumerate() {
        if let Domain::Subset(v) = d {
            let _ = writeln!(out, "domain {i} : {}", v.join(" "));
        }
    }
    out.push_str("end\n");
}

fn opt_name(s: &str) -> Option<String> {
    (s != "-").then(|| s.to_string())
}

pub fn parse_machine(text: &str) -> Result<MachineSpec> {
    let mut spec = MachineSpec {
        name: String::new(),
        cyclic: false,
        parts: Vec::new(),
        sectors: Vec::new(),
        inputs: Vec::new(),
        rules: Vec::new(),
    };
    let mut current: Option<RuleSpec> = None;
    let mut seen_name = false;
    for (idx, raw) in text.lines().enumerate() {
        let ln = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
        if let Some(rule) = current.as_mut() {
            match key {
                "step" => rule.step = parse_step(rest).ok_or_else(|| parse_err(ln, "bad step line"))?,
                "inner" => rule.inner_transition = true,
                "map" => rule.parts.push(parse_map(rest).ok_or_else(|| parse_err(ln, "bad map line"))?),
                "lock" => {
                    for t in rest.split_whitespace() {
                        let s: usize = t.parse().map_err(|_| parse_err(ln, "bad sector index"))?;
                        *domain_slot(&mut rule.domains, s, ln)? = Domain::Empty;
                    }
                }
                "domain" => {
                    let (s, letters) = rest.split_once(':').ok_or_else(|| parse_err(ln, "missing `:`"))?;
                    let s: usize = s.trim().parse().map_err(|_| parse_err(ln, "bad sector index"))?;
                    *domain_slot(&mut rule.domains, s, ln)? =
                        Domain::Subset(letters.split_whitespace().map(str::to_string).collect());
                }
                "end" => {
                    let rule = current.take().expect("inside rule");
                    if rule.parts.len() != spec.parts.len() {
                        return Err(parse_err(ln, format!("rule {} has the wrong number of parts", rule.id)));
                    }
                    spec.rules.push(rule);
                }
                _ => return Err(parse_err(ln, format!("unexpected `{key}` inside a rule"))),
            }
            continue;
        }
        match key {
            "machine" => {
                spec.name = rest.trim().to_string();
                seen_name = true;
            }
            "cyclic" => {
                spec.cyclic = match rest.trim() {
                    "true" => true,
                    "false" => false,
                    _ => return Err(parse_err(ln, "cyclic must be true or false")),
                }
            }
            "part" => {
                let (head, states) = rest.split_once(':').ok_or_else(|| parse_err(ln, "missing `:`"))?;
                let h: Vec<&str> = head.split_whitespace().collect();
                if h.len() != 3 {
                    return Err(parse_err(ln, "expected `part NAME start=S end=E : STATES`"));
                }
                let start = h[1].strip_prefix("start=").ok_or_else(|| parse_err(ln, "missing start="))?;
                let end = h[2].strip_prefix("end=").ok_or_else(|| parse_err(ln, "missing end="))?;
                spec.parts.push(PartSpec {
                    name: h[0].to_string(),
                    states: states.split_whitespace().map(str::to_string).collect(),
                    start: opt_name(start),
                    end: opt_name(end),
                });
            }
            "sector" => {
                let (head, letters) = rest.split_once(':').ok_or_else(|| parse_err(ln, "missing `:`"))?;
                let h: Vec<&str> = head.split_whitespace().collect();
                if h.len() != 2 {
                    return Err(parse_err(ln, "expected `sector INDEX NAME : LETTERS`"));
                }
                let i: usize = h[0].parse().map_err(|_| parse_err(ln, "bad sector index"))?;
                if i != spec.sectors.len() {
                    return Err(parse_err(ln, "sectors must be listed in order"));
                }
                spec.sectors.push(SectorSpec {
                    name: h[1].to_string(),
                    letters: letters
                        .split_whitespace()
                        .map(|t| match t.split_once('=') {
                            Some((n, o)) => TapeSpec {
                                name: n.to_string(),
                                origin: Some(o.to_string()),
                            },
                            None => TapeSpec {
                                name: t.to_string(),
                                origin: None,
                            },
                        })
                        .collect(),
                });
            }
            "input" => {
                spec.inputs = rest
                    .split_whitespace()
                    .map(|t| t.parse().map_err(|_| parse_err(ln, "bad input sector")))
                    .collect::<Result<_>>()?;
            }
            "rule" => {
                current = Some(RuleSpec {
                    id: rest.trim().to_string(),
                    step: Step::work(""),
                    inner_transition: false,
                    parts: Vec::new(),
                    domains: vec![Domain::Full; spec.parts.len() + 1],
                });
            }
            _ => return Err(parse_err(ln, format!("unknown key `{key}`"))),
        }
    }
    if current.is_some() {
        return Err(parse_err(text.lines().count(), "unterminated rule"));
    }
    if !seen_name {
        return Err(parse_err(1, "missing `machine` line"));
    }
    Ok(spec)
}

fn domain_slot(domains: &mut [Domain], s: usize, ln: usize) -> Result<&mut Domain> {
    domains
        .get_mut(s)
        .ok_or_else(|| parse_err(ln, format!("sector {s} out of range")))
}

fn parse_step(rest: &str) -> Option<Step> {
    let t: Vec<&str> = rest.split_whitespace().collect();
    let (kind, used) = match t.first()? {
        &"work" => (StepKind::Work(t.get(1)?.to_string()), 2),
        &"transition" => (StepKind::Transition(t.get(1)?.to_string(), t.get(2)?.to_string()), 3),
        &"named" => (StepKind::Named(t.get(1)?.to_string()), 2),
        _ => return None,
    };
    let machine = match &t[used..] {
        [] => None,
        ["machine", j] => Some(j.parse().ok()?),
        _ => return None,
    };
    Some(Step { kind, machine })
}

fn parse_map(rest: &str) -> Option<PartRuleSpec> {
    let t: Vec<&str> = rest.split_whitespace().collect();
    if t.len() < 3 || t[1] != "->" {
        return None;
    }
    let mut p = PartRuleSpec::moving(t[0], t[2]);
    let mut i = 3;
    while i < t.len() {
        let lit: Lit = t.get(i + 1)?.parse().ok()?;
        match t[i] {
            "left" if p.left.is_none() => p.left = Some(lit),
            "right" if p.right.is_none() => p.right = Some(lit),
            _ => return None,
        }
        i += 2;
    }
    Some(p)
}

/// `step_index TAB rule_id TAB word`, one line per word; the initial word has rule `-`.
pub fn write_trace(m: &Machine, c: &Computation) -> String {
    let mut out = String::new();
    for (i, w) in c.words.iter().enumerate() {
        let rule = if i == 0 { "-" } else { m.rule(c.history[i - 1]).id.as_str() };
        let _ = writeln!(out, "{i}\t{rule}\t{}", m.format_word(w));
    }
    out
}

/// Parses a trace and re-runs it, checking every recorded word.
pub fn parse_trace(m: &Machine, text: &str) -> Result<Computation> {
    let mut history = Vec::new();
    let mut recorded = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let ln = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 3 {
            return Err(parse_err(ln, "expected three tab separated columns"));
        }
        let i: usize = cols[0].parse().map_err(|_| parse_err(ln, "bad step index"))?;
        if i != recorded.len() {
            return Err(parse_err(ln, format!("expected step {}", recorded.len())));
        }
        if i == 0 {
            if cols[1] != "-" {
                return Err(parse_err(ln, "the initial word has rule `-`"));
            }
        } else {
            history.push(m.rule_index(cols[1]).map_err(|e| parse_err(ln, e.to_string()))?);
        }
        recorded.push(m.parse_word(cols[2]).map_err(|e| parse_err(ln, e.to_string()))?);
    }
    let first: &AdmissibleWord = recorded.first().ok_or_else(|| parse_err(1, "empty trace"))?;
    let c = m.run(first, &history)?;
    if c.words != recorded {
        let bad = c.words.iter().zip(&recorded).position(|(a, b)| a != b).unwrap_or(0);
        return Err(Error::Parse {
            line: bad + 1,
            msg: "recorded word differs from the computed one".into(),
        });
    }
    Ok(c)
}
