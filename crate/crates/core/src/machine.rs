//! Hardware, rules and machines.
//!
//! Machines are described by a name based [`MachineSpec`] (what the
//! combinators and the text format manipulate) and compiled into a
//! [`Machine`] with interned letters for fast rule application.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::step::Step;
use crate::word::{Invertible, Lit};

/// A letter of an admissible word: a state or tape symbol with a sign.
///
/// Packed as: bit 31 set for state letters, bit 30 for inverses, the rest
/// is the index into the hardware's state or tape table.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u32);

const STATE_BIT: u32 = 1 << 31;
const INV_BIT: u32 = 1 << 30;
const INDEX_MASK: u32 = INV_BIT - 1;

impl Letter {
    pub fn state(index: u32, inv: bool) -> Self {
        Letter(STATE_BIT | if inv { INV_BIT } else { 0 } | index)
    }

    pub fn tape(index: u32, inv: bool) -> Self {
        Letter(if inv { INV_BIT } else { 0 } | index)
    }

    pub fn is_state(self) -> bool {
        self.0 & STATE_BIT != 0
    }

    pub fn is_inv(self) -> bool {
        self.0 & INV_BIT != 0
    }

    pub fn index(self) -> u32 {
        self.0 & INDEX_MASK
    }

    /// The positive letter with the same symbol.
    pub fn positive(self) -> Self {
        Letter(self.0 & !INV_BIT)
    }

    pub fn inverse(self) -> Self {
        Letter(self.0 ^ INV_BIT)
    }
}

impl Invertible for Letter {
    fn inverse(&self) -> Self {
        Letter::inverse(*self)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = if self.is_state() { 'q' } else { 'a' };
        let s = if self.is_inv() { "^-1" } else { "" };
        write!(f, "{k}{}{s}", self.index())
    }
}

/// Per-sector domain of a rule.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Domain {
    Full,
    /// Locked sector.
    Empty,
    /// Explicit subset of the sector alphabet; never produced by the tower.
    Subset(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartSpec {
    pub name: String,
    pub states: Vec<String>,
    pub start: Option<String>,
    pub end: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TapeSpec {
    pub name: String,
    /// The letter of the input alphabet this is a copy of, if any.
    pub origin: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SectorSpec {
    pub name: String,
    pub letters: Vec<TapeSpec>,
}

/// One part of a rule in normal form: `from -> left to right`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartRuleSpec {
    pub from: String,
    pub to: String,
    pub left: Option<Lit>,
    pub right: Option<Lit>,
}

impl PartRuleSpec {
    pub fn fix(q: impl Into<String>) -> Self {
        let q = q.into();
        PartRuleSpec {
            from: q.clone(),
            to: q,
            left: None,
            right: None,
        }
    }

    pub fn moving(from: impl Into<String>, to: impl Into<String>) -> Self {
        PartRuleSpec {
            from: from.into(),
            to: to.into(),
            left: None,
            right: None,
        }
    }

    pub fn with_left(mut self, l: Option<Lit>) -> Self {
        self.left = l;
        self
    }

    pub fn with_right(mut self, r: Option<Lit>) -> Self {
        self.right = r;
        self
    }
}

/// A positive rule; its inverse is derived.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RuleSpec {
    pub id: String,
    pub step: Step,
    /// Set on connecting rules that live inside one step (the χ rules).
    pub inner_transition: bool,
    pub parts: Vec<PartRuleSpec>,
    /// Indexed by sector; length `parts.len() + 1`.
    pub domains: Vec<Domain>,
}

impl RuleSpec {
    pub fn locks(&self, sector: usize) -> bool {
        matches!(self.domains.get(sector), Some(Domain::Empty))
    }
}

/// Name based description of a machine.
///
/// Sector `j` lies between part `j-1` and part `j`. Sectors `0` and `N`
/// (for `N` parts) are the outer positions of a non-cyclic machine and
/// carry no letters; in a cyclic machine sector `N` is the wrap-around
/// sector after the last part and sector `0` is unused.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MachineSpec {
    pub name: String,
    pub cyclic: bool,
    pub parts: Vec<PartSpec>,
    pub sectors: Vec<SectorSpec>,
    pub inputs: Vec<usize>,
    pub rules: Vec<RuleSpec>,
}

impl MachineSpec {
    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    /// Sectors that can hold letters: interior ones, plus the wrap for cyclic machines.
    pub fn real_sectors(&self) -> std::ops::Range<usize> {
        let n = self.parts.len();
        if self.cyclic {
            1..n + 1
        } else {
            1..n
        }
    }

    pub fn part_index(&self, name: &str) -> Option<usize> {
        self.parts.iter().position(|p| p.name == name)
    }

    pub fn sector_index(&self, name: &str) -> Option<usize> {
        self.sectors.iter().position(|s| s.name == name)
    }

    pub fn rule(&self, id: &str) -> Option<&RuleSpec> {
        self.rules.iter().find(|r| r.id == id)
    }

    /// Sector that receives the left insertion of part `j`.
    pub fn left_sector(&self, j: usize) -> usize {
        if j == 0 && self.cyclic {
            self.parts.len()
        } else {
            j
        }
    }
}

/// Compiled part of a rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RulePart {
    pub from: u32,
    pub to: u32,
    pub left: Option<Letter>,
    pub right: Option<Letter>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompiledDomain {
    Full,
    Empty,
    Subset(Vec<u32>),
}

impl CompiledDomain {
    pub fn contains(&self, tape_index: u32) -> bool {
        match self {
            CompiledDomain::Full => true,
            CompiledDomain::Empty => false,
            CompiledDomain::Subset(v) => v.binary_search(&tape_index).is_ok(),
        }
    }
}

/// A compiled rule, positive or negative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub id: String,
    pub step: Step,
    pub inner_transition: bool,
    pub positive: bool,
    pub parts: Vec<RulePart>,
    pub domains: Vec<CompiledDomain>,
}

impl Rule {
    pub fn locks(&self, sector: usize) -> bool {
        matches!(self.domains.get(sector), Some(CompiledDomain::Empty))
    }
}

/// Index of a rule in [`Machine::rules`]; positive rules have even indices
/// and `r ^ 1` is the inverse of `r`.
pub type RuleIdx = usize;

pub fn inverse_rule(r: RuleIdx) -> RuleIdx {
    r ^ 1
}

/// Interned hardware.
#[derive(Clone, Debug)]
pub struct Hardware {
    pub cyclic: bool,
    num_parts: usize,
    q_names: Vec<String>,
    q_part: Vec<u32>,
    a_names: Vec<String>,
    a_sector: Vec<u32>,
    a_origin: Vec<Option<String>>,
    part_states: Vec<Vec<u32>>,
    part_start: Vec<Option<u32>>,
    part_end: Vec<Option<u32>>,
    sector_letters: Vec<Vec<u32>>,
    lookup: HashMap<String, Letter>,
}

impl Hardware {
    fn from_spec(spec: &MachineSpec) -> Result<Self> {
        let n = spec.parts.len();
        if n == 0 {
            return Err(Error::InvalidHardware("no parts".into()));
        }
        if spec.sectors.len() != n + 1 {
            return Err(Error::InvalidHardware(format!(
                "{} parts need {} sector entries, got {}",
                n,
                n + 1,
                spec.sectors.len()
            )));
        }
        let mut hw = Hardware {
            cyclic: spec.cyclic,
            num_parts: n,
            q_names: Vec::new(),
            q_part: Vec::new(),
            a_names: Vec::new(),
            a_sector: Vec::new(),
            a_origin: Vec::new(),
            part_states: Vec::new(),
            part_start: Vec::new(),
            part_end: Vec::new(),
            sector_letters: Vec::new(),
            lookup: HashMap::new(),
        };
        for (j, p) in spec.parts.iter().enumerate() {
            if p.states.is_empty() {
                return Err(Error::InvalidHardware(format!("part {} has no states", p.name)));
            }
            let mut ids = Vec::new();
            for s in &p.states {
                let idx = hw.q_names.len() as u32;
                if hw.lookup.insert(s.clone(), Letter::state(idx, false)).is_some() {
                    return Err(Error::DuplicateSymbol(s.clone()));
                }
                hw.q_names.push(s.clone());
                hw.q_part.push(j as u32);
                ids.push(idx);
            }
            let find = |name: &Option<String>| -> Result<Option<u32>> {
                match name {
                    None => Ok(None),
                    Some(s) => p
                        .states
                        .iter()
                        .position(|x| x == s)
                        .map(|i| Some(ids[i]))
                        .ok_or_else(|| {
                            Error::InvalidHardware(format!("`{s}` is not a state of part {}", p.name))
                        }),
                }
            };
            hw.part_start.push(find(&p.start)?);
            hw.part_end.push(find(&p.end)?);
            hw.part_states.push(ids);
        }
        for (j, s) in spec.sectors.iter().enumerate() {
            let usable = if spec.cyclic { j >= 1 } else { j >= 1 && j < n };
            if !usable && !s.letters.is_empty() {
                return Err(Error::InvalidHardware(format!(
                    "sector {j} cannot carry tape letters"
                )));
            }
            let mut ids = Vec::new();
            for l in &s.letters {
                let idx = hw.a_names.len() as u32;
                if hw.lookup.insert(l.name.clone(), Letter::tape(idx, false)).is_some() {
                    return Err(Error::DuplicateSymbol(l.name.clone()));
                }
                hw.a_names.push(l.name.clone());
                hw.a_sector.push(j as u32);
                hw.a_origin.push(l.origin.clone());
                ids.push(idx);
            }
            hw.sector_letters.push(ids);
        }
        for name in hw.lookup.keys() {
            if name.is_empty() || name.contains(char::is_whitespace) || name.ends_with("^-1") {
                return Err(Error::InvalidHardware(format!("bad symbol name `{name}`")));
            }
        }
        Ok(hw)
    }

    pub fn num_parts(&self) -> usize {
        self.num_parts
    }

    pub fn num_states(&self) -> usize {
        self.q_names.len()
    }

    pub fn num_tape(&self) -> usize {
        self.a_names.len()
    }

    pub fn state_part(&self, q: u32) -> usize {
        self.q_part[q as usize] as usize
    }

    pub fn tape_sector(&self, a: u32) -> usize {
        self.a_sector[a as usize] as usize
    }

    pub fn tape_origin(&self, a: u32) -> Option<&str> {
        self.a_origin[a as usize].as_deref()
    }

    pub fn part_states(&self, part: usize) -> &[u32] {
        &self.part_states[part]
    }

    pub fn start_state(&self, part: usize) -> Option<u32> {
        self.part_start[part]
    }

    pub fn end_state(&self, part: usize) -> Option<u32> {
        self.part_end[part]
    }

    pub fn sector_letters(&self, sector: usize) -> &[u32] {
        &self.sector_letters[sector]
    }

    /// The sector receiving left insertions of part `j`.
    pub fn left_sector(&self, j: usize) -> usize {
        if j == 0 && self.cyclic {
            self.num_parts
        } else {
            j
        }
    }

    pub fn name(&self, l: Letter) -> &str {
        if l.is_state() {
            &self.q_names[l.index() as usize]
        } else {
            &self.a_names[l.index() as usize]
        }
    }

    pub fn format_letter(&self, l: Letter) -> String {
        if l.is_inv() {
            format!("{}^-1", self.name(l))
        } else {
            self.name(l).to_string()
        }
    }

    pub fn letter(&self, name: &str) -> Result<Letter> {
        self.lookup
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn lit(&self, lit: &Lit) -> Result<Letter> {
        let l = self.letter(&lit.name)?;
        Ok(if lit.inv { l.inverse() } else { l })
    }

    pub fn parse_letter(&self, token: &str) -> Result<Letter> {
        let lit: Lit = token.parse()?;
        self.lit(&lit)
    }

    /// The copy of input letter `lit` in `sector`, if the sector has one.
    pub fn copy_in_sector(&self, sector: usize, lit: &Lit) -> Option<Letter> {
        self.sector_letters[sector]
            .iter()
            .find(|&&a| self.a_origin[a as usize].as_deref() == Some(lit.name.as_str()))
            .map(|&a| Letter::tape(a, lit.inv))
    }

    /// Sector of the window between two consecutive state letters, if the
    /// window is one of the admissible shapes.
    pub fn window_sector(&self, x: Letter, y: Letter) -> Option<usize> {
        let n = self.num_parts;
        let px = self.state_part(x.index());
        let py = self.state_part(y.index());
        match (x.is_inv(), y.is_inv()) {
            (false, false) => {
                if py == px + 1 {
                    Some(py)
                } else if self.cyclic && px + 1 == n && py == 0 {
                    Some(n)
                } else {
                    None
                }
            }
            (true, true) => {
                if px == py + 1 {
                    Some(px)
                } else if self.cyclic && py + 1 == n && px == 0 {
                    Some(n)
                } else {
                    None
                }
            }
            // q u q^-1: the sector to the right of q
            (false, true) => (x.index() == y.index()).then_some(px + 1),
            // q^-1 u q: the sector to the left of q
            (true, false) => (x.index() == y.index()).then(|| self.left_sector(px)),
        }
    }
}

/// A compiled machine: hardware plus an inverse-closed rule list.
#[derive(Clone, Debug)]
pub struct Machine {
    spec: MachineSpec,
    hw: Hardware,
    rules: Vec<Rule>,
    rule_lookup: HashMap<String, RuleIdx>,
}

impl PartialEq for Machine {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Machine {
    pub fn new(spec: MachineSpec) -> Result<Self> {
        let hw = Hardware::from_spec(&spec)?;
        let n = spec.parts.len();
        for &i in &spec.inputs {
            if !spec.real_sectors().contains(&i) {
                return Err(Error::InvalidHardware(format!("input sector {i} out of range")));
            }
        }
        let mut rules = Vec::with_capacity(2 * spec.rules.len());
        let mut rule_lookup = HashMap::new();
        for rs in &spec.rules {
            let bad = |reason: String| Error::InvalidRule {
                rule: rs.id.clone(),
                reason,
            };
            if rs.id.is_empty() || rs.id.contains(char::is_whitespace) || rs.id.ends_with("^-1") {
                return Err(bad("bad rule id".into()));
            }
            if rs.parts.len() != n {
                return Err(bad(format!("has {} parts, machine has {n}", rs.parts.len())));
            }
            if rs.domains.len() != n + 1 {
                return Err(bad(format!("has {} domains, expected {}", rs.domains.len(), n + 1)));
            }
            let mut domains = Vec::with_capacity(n + 1);
            for (j, d) in rs.domains.iter().enumerate() {
                let real = spec.real_sectors().contains(&j);
                domains.push(match d {
                    _ if !real => CompiledDomain::Full,
                    Domain::Full => CompiledDomain::Full,
                    Domain::Empty => CompiledDomain::Empty,
                    Domain::Subset(names) => {
                        let mut ids = Vec::new();
                        for s in names {
                            let l = hw.letter(s)?;
                            if l.is_state() || hw.tape_sector(l.index()) != j {
                                return Err(bad(format!("`{s}` is not a letter of sector {j}")));
                            }
                            ids.push(l.index());
                        }
                        ids.sort_unstable();
                        ids.dedup();
                        CompiledDomain::Subset(ids)
                    }
                });
            }
            if spec.cyclic {
                domains[0] = domains[n].clone();
            }
            let mut parts = Vec::with_capacity(n);
            for (j, p) in rs.parts.iter().enumerate() {
                let from = hw.letter(&p.from)?;
                let to = hw.letter(&p.to)?;
                if !from.is_state() || hw.state_part(from.index()) != j {
                    return Err(bad(format!("`{}` is not a state of part {j}", p.from)));
                }
                if !to.is_state() || hw.state_part(to.index()) != j {
                    return Err(bad(format!("`{}` is not a state of part {j}", p.to)));
                }
                let insertion = |lit: &Option<Lit>, sector: usize| -> Result<Option<Letter>> {
                    let Some(lit) = lit else { return Ok(None) };
                    let l = hw.lit(lit)?;
                    if l.is_state() || hw.tape_sector(l.index()) != sector {
                        return Err(bad(format!("`{lit}` does not belong to sector {sector}")));
                    }
                    if !domains[sector].contains(l.index()) {
                        return Err(bad(format!("inserts `{lit}` outside the domain of sector {sector}")));
                    }
                    Ok(Some(l))
                };
                let left = insertion(&p.left, hw.left_sector(j))?;
                let right = insertion(&p.right, j + 1)?;
                parts.push(RulePart {
                    from: from.index(),
                    to: to.index(),
                    left,
                    right,
                });
            }
            let pos = Rule {
                id: rs.id.clone(),
                step: rs.step.clone(),
                inner_transition: rs.inner_transition,
                positive: true,
                parts,
                domains,
            };
            let neg = Rule {
                id: format!("{}^-1", rs.id),
                step: rs.step.clone(),
                inner_transition: rs.inner_transition,
                positive: false,
                parts: pos
                    .parts
                    .iter()
                    .map(|p| RulePart {
                        from: p.to,
                        to: p.from,
                        left: p.left.map(Letter::inverse),
                        right: p.right.map(Letter::inverse),
                    })
                    .collect(),
                domains: pos.domains.clone(),
            };
            if rule_lookup.insert(pos.id.clone(), rules.len()).is_some() {
                return Err(Error::DuplicateSymbol(pos.id));
            }
            rule_lookup.insert(neg.id.clone(), rules.len() + 1);
            rules.push(pos);
            rules.push(neg);
        }
        Ok(Machine {
            spec,
            hw,
            rules,
            rule_lookup,
        })
    }

    pub fn spec(&self) -> &MachineSpec {
        &self.spec
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn hardware(&self) -> &Hardware {
        &self.hw
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, r: RuleIdx) -> &Rule {
        &self.rules[r]
    }

    pub fn num_positive_rules(&self) -> usize {
        self.rules.len() / 2
    }

    pub fn positive_rules(&self) -> impl Iterator<Item = RuleIdx> + '_ {
        (0..self.rules.len()).step_by(2)
    }

    pub fn rule_index(&self, id: &str) -> Result<RuleIdx> {
        self.rule_lookup
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownSymbol(id.to_string()))
    }

    pub fn inputs(&self) -> &[usize] {
        &self.spec.inputs
    }

    pub fn num_parts(&self) -> usize {
        self.hw.num_parts
    }

    /// Sectors of the standard base that can be locked.
    pub fn real_sectors(&self) -> std::ops::Range<usize> {
        self.spec.real_sectors()
    }

    /// Interior sectors locked by a rule.
    pub fn locked_sectors(&self, r: RuleIdx) -> Vec<usize> {
        self.real_sectors().filter(|&s| self.rules[r].locks(s)).collect()
    }

    pub fn sector_name(&self, s: usize) -> &str {
        &self.spec.sectors[s].name
    }

    pub fn format_history(&self, h: &[RuleIdx]) -> String {
        h.iter()
            .map(|&r| self.rules[r].id.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn parse_history(&self, s: &str) -> Result<Vec<RuleIdx>> {
        s.split_whitespace().map(|t| self.rule_index(t)).collect()
    }
}

impl fmt::Display for Machine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} parts, {} positive rules{}",
            self.spec.name,
            self.num_parts(),
            self.num_positive_rules(),
            if self.spec.cyclic { ", cyclic" } else { "" }
        )
    }
}
