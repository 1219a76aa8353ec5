//! Group presentations of a machine: `M(S)`, `G(S)`, a-relators and disk relators.
//!
//! For a positive rule `θ` over parts `0..=s` the generators are
//! `θ:<id>:0 .. θ:<id>:s`, one per sector between consecutive parts, with
//! `θ_{s+1} = θ_0`. The part `q_i -> v_i q_i' u_{i+1}` gives the relator
//! `q_i θ_{i+1} (θ_i v_i q_i' u_{i+1})^-1`, and every domain letter `a`
//! of sector `i` gives `[θ_i, a]`.

use std::collections::HashSet;
use std::fmt::{self, Write as _};

use crate::admissible::AdmissibleWord;
use crate::error::{Error, Result};
use crate::machine::{CompiledDomain, Letter, Machine, RuleIdx};
use crate::word::{cyclic_canonical, free_reduce, FreeWord, Lit};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GenKind {
    Q,
    A,
    Theta,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub kind: GenKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RelatorTag {
    ThetaQ,
    ThetaA,
    Hub,
    Disk,
    ARelator,
}

impl fmt::Display for RelatorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RelatorTag::ThetaQ => "(theta,q)",
            RelatorTag::ThetaA => "(theta,a)",
            RelatorTag::Hub => "hub",
            RelatorTag::Disk => "disk",
            RelatorTag::ARelator => "a-relator",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relator {
    pub tag: RelatorTag,
    pub word: Vec<Lit>,
}

/// Letter counts of a relator by generator kind.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Shape {
    pub theta: usize,
    pub q: usize,
    pub a: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub name: String,
    pub generators: Vec<Generator>,
    pub relators: Vec<Relator>,
    seen: HashSet<Vec<Lit>>,
}

pub fn theta_name(rule_id: &str, i: usize) -> String {
    format!("θ:{rule_id}:{i}")
}

fn letter_lit(m: &Machine, l: Letter) -> Lit {
    Lit::signed(m.hardware().name(l), l.is_inv())
}

/// The word of an admissible word over the generators.
pub fn word_lits(m: &Machine, w: &AdmissibleWord) -> Vec<Lit> {
    w.letters().iter().map(|&l| letter_lit(m, l)).collect()
}

impl Presentation {
    fn empty(name: String, generators: Vec<Generator>) -> Self {
        Presentation {
            name,
            generators,
            relators: Vec::new(),
            seen: HashSet::new(),
        }
    }

    /// Adds a relator unless it equals an existing one up to cyclic
    /// permutation and inversion. Returns whether it was added.
    pub fn push(&mut self, tag: RelatorTag, word: Vec<Lit>) -> bool {
        let key = cyclic_canonical(&word);
        if !self.seen.insert(key) {
            return false;
        }
        self.relators.push(Relator { tag, word });
        true
    }

    pub fn count(&self, tag: RelatorTag) -> usize {
        self.relators.iter().filter(|r| r.tag == tag).count()
    }

    pub fn kind_of(&self, name: &str) -> Option<GenKind> {
        self.generators.iter().find(|g| g.name == name).map(|g| g.kind)
    }

    pub fn shape(&self, r: &Relator) -> Shape {
        let mut s = Shape::default();
        for l in &r.word {
            match self.kind_of(&l.name) {
                Some(GenKind::Theta) => s.theta += 1,
                Some(GenKind::Q) => s.q += 1,
                Some(GenKind::A) => s.a += 1,
                None => {}
            }
        }
        s
    }

    /// Every relator letter is a declared generator.
    pub fn is_well_formed(&self) -> bool {
        let names: HashSet<&str> = self.generators.iter().map(|g| g.name.as_str()).collect();
        self.relators.iter().all(|r| r.word.iter().all(|l| names.contains(l.name.as_str())))
    }
}

/// `M(S)`: generators and the (θ,q)- and (θ,a)-relators.
pub fn presentation_m(m: &Machine) -> Presentation {
    let hw = m.hardware();
    let np = m.num_parts();
    let mut gens = Vec::new();
    for j in 0..np {
        for &q in hw.part_states(j) {
            gens.push(Generator {
                name: hw.name(Letter::state(q, false)).to_string(),
                kind: GenKind::Q,
            });
        }
    }
    for s in 0..=np {
        for &a in hw.sector_letters(s) {
            gens.push(Generator {
                name: hw.name(Letter::tape(a, false)).to_string(),
                kind: GenKind::A,
            });
        }
    }
    let positive: Vec<RuleIdx> = m.positive_rules().collect();
    for &r in &positive {
        for i in 0..np {
            gens.push(Generator {
                name: theta_name(&m.rule(r).id, i),
                kind: GenKind::Theta,
            });
        }
    }
    let mut p = Presentation::empty(format!("M({})", m.name()), gens);
    for &r in &positive {
        let rule = m.rule(r);
        let th = |i: usize, inv: bool| Lit::signed(theta_name(&rule.id, i % np), inv);
        for (i, part) in rule.parts.iter().enumerate() {
            // q_i θ_{i+1} u^-1 q'^-1 v^-1 θ_i^-1
            let mut w = vec![Lit::new(hw.name(Letter::state(part.from, false))), th(i + 1, false)];
            if let Some(u) = part.right {
                w.push(letter_lit(m, u.inverse()));
            }
            w.push(Lit::signed(hw.name(Letter::state(part.to, false)), true));
            if let Some(v) = part.left {
                w.push(letter_lit(m, v.inverse()));
            }
            w.push(th(i, true));
            p.push(RelatorTag::ThetaQ, w);
        }
    }
    for &r in &positive {
        let rule = m.rule(r);
        for i in 0..np {
            // θ_i sits in the sector left of part i
            let s = hw.left_sector(i);
            let letters: Vec<u32> = match &rule.domains[s] {
                CompiledDomain::Full => hw.sector_letters(s).to_vec(),
                CompiledDomain::Empty => Vec::new(),
                CompiledDomain::Subset(v) => v.clone(),
            };
            for a in letters {
                let a = hw.name(Letter::tape(a, false)).to_string();
                let t = theta_name(&rule.id, i);
                p.push(
                    RelatorTag::ThetaA,
                    vec![Lit::new(t.clone()), Lit::new(a.clone()), Lit::signed(t, true), Lit::signed(a, true)],
                );
            }
        }
    }
    p
}

/// `G(S)`: `M(S)` plus the hub relator `W_ac`.
pub fn presentation_g(m: &Machine) -> Result<Presentation> {
    let mut p = presentation_m(m);
    p.name = format!("G({})", m.name());
    let hub = word_lits(m, &m.accept_configuration()?);
    p.push(RelatorTag::Hub, hub);
    Ok(p)
}

/// `G_Ω(S)`: `G(S)` plus a copy, in the first input sector, of every word
/// from `omega`. Words that reduce to the empty word add nothing.
pub fn presentation_omega(m: &Machine, omega: impl IntoIterator<Item = FreeWord>) -> Result<Presentation> {
    let mut p = presentation_g(m)?;
    p.name = format!("G_Omega({})", m.name());
    let s = *m
        .inputs()
        .first()
        .ok_or_else(|| Error::InvalidHardware("machine has no input sector".into()))?;
    for w in omega {
        let copy = m.copy_word(s, &w)?;
        let lits: Vec<Lit> = free_reduce(copy.iter().map(|&l| letter_lit(m, l)));
        if !lits.is_empty() {
            p.push(RelatorTag::ARelator, lits);
        }
    }
    Ok(p)
}

/// Disk relators `W` for accepted configurations, each given with an
/// accepting history that is checked before the relator is produced.
pub fn disk_relators<'a, I>(m: &'a Machine, configs: I) -> impl Iterator<Item = Result<Vec<Lit>>> + 'a
where
    I: IntoIterator<Item = (AdmissibleWord, Vec<RuleIdx>)>,
    I::IntoIter: 'a,
{
    configs.into_iter().map(move |(w, h)| {
        let acc = m.accept_configuration()?;
        let base = w.base(m.hardware());
        if base.len() != m.num_parts() || base.iter().enumerate().any(|(j, &(p, inv))| inv || p != j) {
            return Err(Error::NotAccepted(format!("{} is not a configuration", m.format_word(&w))));
        }
        match m.run(&w, &h) {
            Ok(c) if c.last() == &acc => Ok(word_lits(m, &w)),
            _ => Err(Error::NotAccepted(m.format_word(&w))),
        }
    })
}

/// Adds disk relators to `p`, dropping any that repeat a relator already
/// present (the hub in particular). Returns the number added.
pub fn add_disks<I>(p: &mut Presentation, m: &Machine, configs: I) -> Result<usize>
where
    I: IntoIterator<Item = (AdmissibleWord, Vec<RuleIdx>)>,
{
    let mut added = 0;
    for r in disk_relators(m, configs) {
        if p.push(RelatorTag::Disk, r?) {
            added += 1;
        }
    }
    Ok(added)
}

fn write_word(out: &mut String, w: &[Lit]) {
    for (i, l) in w.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{l}");
    }
}

/// Generator manifest, then one relator per line (`tag TAB word`).
pub fn write_presentation(p: &Presentation) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "presentation {}", p.name);
    for (kind, label) in [(GenKind::Q, "q"), (GenKind::A, "a"), (GenKind::Theta, "theta")] {
        out.push_str("generators ");
        out.push_str(label);
        for g in p.generators.iter().filter(|g| g.kind == kind) {
            out.push(' ');
            out.push_str(&g.name);
        }
        out.push('\n');
    }
    let _ = writeln!(out, "relators {}", p.relators.len());
    for r in &p.relators {
        let _ = write!(out, "{}\t", r.tag);
        write_word(&mut out, &r.word);
        out.push('\n');
    }
    out
}

/// A flat form for computer algebra systems: generators are renamed
/// `x1, x2, ..`, relators are products with `*` and `^-1`.
pub fn write_flat(p: &Presentation) -> String {
    let index = |name: &str| p.generators.iter().position(|g| g.name == name).map_or(0, |i| i + 1);
    let mut out = String::new();
    let _ = writeln!(out, "# {}", p.name);
    for (i, g) in p.generators.iter().enumerate() {
        let _ = writeln!(out, "# x{} = {}", i + 1, g.name);
    }
    let gens: Vec<String> = (1..=p.generators.len()).map(|i| format!("x{i}")).collect();
    let _ = writeln!(out, "generators {}", gens.join(" "));
    for r in &p.relators {
        let factors: Vec<String> = r
            .word
            .iter()
            .map(|l| format!("x{}{}", index(&l.name), if l.inv { "^-1" } else { "" }))
            .collect();
        let _ = writeln!(out, "relator {}", factors.join("*"));
    }
    out
}

// ---------------------------------------------------------------- a-relator oracles

/// Answer of an a-relator oracle about a word over the input alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certified {
    /// Trivial in the Burnside group, with a reason.
    Trivial(String),
    /// Nontrivial in the Burnside group, with a reason.
    Nontrivial(String),
    Unknown(String),
}

/// Decides (sometimes) whether a word is trivial in `B(A, n)`.
pub trait ARelatorOracle {
    fn certify(&self, w: &FreeWord) -> Certified;
}

/// Trivial iff the word freely reduces to the empty word; otherwise unknown.
pub struct FreeTrivial;

impl ARelatorOracle for FreeTrivial {
    fn certify(&self, w: &FreeWord) -> Certified {
        if w.is_empty() {
            Certified::Trivial("freely trivial".into())
        } else {
            Certified::Unknown("not freely trivial".into())
        }
    }
}

/// Checks a caller-supplied expression of the word as a product of
/// conjugates `c u^{±n} c^-1`.
pub struct PowerProduct {
    pub n: usize,
    /// `(c, u, inverted)` factors.
    pub factors: Vec<(FreeWord, FreeWord, bool)>,
}

impl ARelatorOracle for PowerProduct {
    fn certify(&self, w: &FreeWord) -> Certified {
        let mut prod = FreeWord::empty();
        for (c, u, inv) in &self.factors {
            let e = if *inv { -(self.n as i64) } else { self.n as i64 };
            prod = prod.mul(&c.mul(&u.pow(e)).mul(&c.inverse()));
        }
        if &prod == w {
            Certified::Trivial(format!("product of {} conjugates of {}-th powers", self.factors.len(), self.n))
        } else {
            Certified::Unknown("the supplied factors do not multiply to the word".into())
        }
    }
}

/// Exponent sums modulo `n`. A nonzero sum proves nontriviality; zero sums
/// are only a necessary condition and answer `Unknown`.
pub struct ExponentAbelianized {
    pub n: usize,
}

impl ARelatorOracle for ExponentAbelianized {
    fn certify(&self, w: &FreeWord) -> Certified {
        let n = self.n as i64;
        for g in w.support() {
            let e: i64 = w.letters().iter().filter(|l| l.name == g).map(|l| if l.inv { -1 } else { 1 }).sum();
            if e.rem_euclid(n) != 0 {
                return Certified::Nontrivial(format!("exponent sum of {g} is {e}, not divisible by {n}"));
            }
        }
        Certified::Unknown("exponent sums vanish mod n (necessary condition only)".into())
    }
}
