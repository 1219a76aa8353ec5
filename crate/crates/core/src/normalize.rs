//! Rules in the general `U_i -> V_i` form and their normalization to
//! one-letter-base parts.

use crate::error::{Error, Result};
use crate::machine::{Domain, Machine, MachineSpec, PartRuleSpec, RuleSpec};
use crate::step::Step;
use crate::word::{free_reduce, invert_word, Lit};

/// One part `U -> V` whose base is a run of consecutive parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawPart {
    pub lhs: Vec<Lit>,
    pub rhs: Vec<Lit>,
    /// Locks the sector to the right of the last state letter.
    pub locked: bool,
}

impl RawPart {
    pub fn parse(lhs: &str, rhs: &str, locked: bool) -> Result<Self> {
        let p = |s: &str| s.split_whitespace().map(str::parse).collect::<Result<Vec<Lit>>>();
        Ok(RawPart {
            lhs: p(lhs)?,
            rhs: p(rhs)?,
            locked,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawRule {
    pub id: String,
    pub step: Step,
    pub parts: Vec<RawPart>,
}

/// Hardware plus rules in general form. Rules already present in `spec`
/// are kept as they are.
#[derive(Clone, Debug)]
pub struct RawMachine {
    pub spec: MachineSpec,
    pub raw_rules: Vec<RawRule>,
}

/// Splits every raw part into one-letter-base parts. The tape words around
/// a state letter become single-letter insertions; a raw part whose tape
/// change does not reduce to at most one letter per side is rejected.
pub fn normalize_rules(raw: &RawMachine) -> Result<Machine> {
    let mut spec = raw.spec.clone();
    let hw_machine = Machine::new(MachineSpec {
        rules: Vec::new(),
        ..raw.spec.clone()
    })?;
    let hw = hw_machine.hardware();
    let n = spec.parts.len();
    for rule in &raw.raw_rules {
        let bad = |reason: String| Error::NotNormalizable {
            rule: rule.id.clone(),
            reason,
        };
        let mut parts: Vec<Option<PartRuleSpec>> = vec![None; n];
        let mut domains = vec![Domain::Full; n + 1];
        for rp in &rule.parts {
            let (lq, lt) = split_side(hw, &rp.lhs).map_err(bad)?;
            let (rq, rt) = split_side(hw, &rp.rhs).map_err(bad)?;
            if lq.len() != rq.len() || lq.is_empty() {
                return Err(bad("both sides need the same nonempty base".into()));
            }
            let first = lq[0].0;
            for (k, ((pl, _), (pr, _))) in lq.iter().zip(&rq).enumerate() {
                if *pl != first + k || *pr != *pl {
                    return Err(bad("a part's base must be consecutive and equal on both sides".into()));
                }
            }
            let last = first + lq.len() - 1;
            for (k, ((p, from), (_, to))) in lq.iter().zip(&rq).enumerate() {
                if parts[*p].is_some() {
                    return Err(bad(format!("part {} is covered twice", spec.parts[*p].name)));
                }
                // multiplying the sector on the right by u^-1 v, or on the left by v u^-1
                let left = if k == 0 {
                    one_letter(&lt[0], &rt[0], true).map_err(bad)?
                } else {
                    None
                };
                let right = one_letter(&lt[k + 1], &rt[k + 1], false).map_err(bad)?;
                parts[*p] = Some(PartRuleSpec {
                    from: from.clone(),
                    to: to.clone(),
                    left,
                    right,
                });
            }
            if rp.locked {
                domains[last + 1] = Domain::Empty;
            }
        }
        let parts = parts
            .into_iter()
            .enumerate()
            .map(|(j, p)| p.ok_or_else(|| bad(format!("part {} is not covered", spec.parts[j].name))))
            .collect::<Result<Vec<_>>>()?;
        spec.rules.push(RuleSpec {
            id: rule.id.clone(),
            step: rule.step.clone(),
            inner_transition: false,
            parts,
            domains,
        });
    }
    Machine::new(spec)
}

type Side = (Vec<(usize, String)>, Vec<Vec<Lit>>);

/// State letters with their parts, and the tape words around them.
fn split_side(hw: &crate::machine::Hardware, side: &[Lit]) -> std::result::Result<Side, String> {
    let mut states = Vec::new();
    let mut tapes = vec![Vec::new()];
    for l in side {
        let letter = hw.letter(&l.name).map_err(|e| e.to_string())?;
        if letter.is_state() {
            if l.inv {
                return Err("raw parts use positive state letters".into());
            }
            states.push((hw.state_part(letter.index()), l.name.clone()));
            tapes.push(Vec::new());
        } else {
            tapes.last_mut().expect("nonempty").push(l.clone());
        }
    }
    Ok((states, tapes))
}

fn one_letter(u: &[Lit], v: &[Lit], on_right: bool) -> std::result::Result<Option<Lit>, String> {
    let w = if on_right {
        free_reduce(invert_word(u).into_iter().chain(v.iter().cloned()))
    } else {
        free_reduce(v.iter().cloned().chain(invert_word(u)))
    };
    match w.len() {
        0 => Ok(None),
        1 => Ok(w.into_iter().next()),
        k => Err(format!("tape change of length {k} needs a longer part")),
    }
}
