//! The tower of machines recognizing `{u^n}`: `M1` (phase machine), `M2`
//! (phases interleaved with primitive runners), `M3` (loading), `M4`
//! (cyclic), `M5,1`/`M5,2` (parallel copies) and the final machine `M`.
//!
//! Naming: M1 tape letters are `a_1 .. a_4`; from M2 on every sector is
//! a copy of the input alphabet with letters `a_<SECTOR>`, e.g. `a_Q0P1`.
//! Copies in the parallel machines carry `@c`, and the two halves of `M`
//! prefix their own states and rules with `1:` and `2:`.

use serde::{Deserialize, Serialize};

use crate::admissible::AdmissibleWord;
use crate::combinators::{
    concatenate, cyclize, embed, extend_left, fuse, lr, parallel, rename, rl, split_coordinate, trivial, union,
    Embedding, Locks, Skeleton, Transition,
};
use crate::error::{Error, Result};
use crate::machine::{inverse_rule, Domain, Machine, MachineSpec, PartRuleSpec, PartSpec, RuleIdx, RuleSpec, SectorSpec, TapeSpec};
use crate::step::Step;
use crate::word::{FreeWord, Lit};

/// Parameters of the tower. The group-theoretic statements need `n`, `k`
/// and `L` far larger than anything that runs; these are desk values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerParams {
    pub alphabet: Vec<String>,
    pub n: usize,
    pub k: usize,
    #[serde(rename = "L")]
    pub l: usize,
}

impl Default for TowerParams {
    fn default() -> Self {
        TowerParams {
            alphabet: vec!["a".into()],
            n: 2,
            k: 3,
            l: 3,
        }
    }
}

impl TowerParams {
    pub fn new(alphabet: &[&str], n: usize, k: usize, l: usize) -> Self {
        TowerParams {
            alphabet: alphabet.iter().map(|s| s.to_string()).collect(),
            n,
            k,
            l,
        }
    }

    /// Reads `alphabet`, `n`, `k` and `L` from TOML; missing keys take the defaults.
    pub fn from_toml(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            alphabet: Option<Vec<String>>,
            n: Option<usize>,
            k: Option<usize>,
            #[serde(rename = "L")]
            l: Option<usize>,
        }
        let raw: Raw = toml::from_str(text).map_err(|e| Error::InvalidParams(e.message().to_string()))?;
        let d = TowerParams::default();
        let p = TowerParams {
            alphabet: raw.alphabet.unwrap_or(d.alphabet),
            n: raw.n.unwrap_or(d.n),
            k: raw.k.unwrap_or(d.k),
            l: raw.l.unwrap_or(d.l),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_alphabet(&self.alphabet)?;
        check_n(self.n)?;
        if self.k < 2 {
            return Err(Error::InvalidParams(format!("k = {} but at least 2 is needed", self.k)));
        }
        if self.l < 3 {
            return Err(Error::InvalidParams(format!("L = {} but at least 3 is needed", self.l)));
        }
        Ok(())
    }
}

fn check_alphabet(alphabet: &[String]) -> Result<()> {
    if alphabet.is_empty() {
        return Err(Error::EmptyAlphabet);
    }
    for (i, a) in alphabet.iter().enumerate() {
        let ok = a.starts_with(|c: char| c.is_ascii_lowercase())
            && a.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit());
        if !ok {
            return Err(Error::InvalidParams(format!("alphabet letter `{a}` must be lower case alphanumeric")));
        }
        if alphabet[..i].contains(a) {
            return Err(Error::InvalidParams(format!("alphabet letter `{a}` repeats")));
        }
    }
    Ok(())
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParams(format!("n = {n} but at least 2 is needed")));
    }
    Ok(())
}

fn empty_sector() -> SectorSpec {
    SectorSpec {
        name: "-".into(),
        letters: Vec::new(),
    }
}

fn copy_sector(alphabet: &[String], name: &str, suffix: &str) -> SectorSpec {
    SectorSpec {
        name: name.into(),
        letters: alphabet
            .iter()
            .map(|a| TapeSpec {
                name: format!("{a}_{suffix}"),
                origin: Some(a.clone()),
            })
            .collect(),
    }
}

fn one_state_part(name: &str, state: String) -> PartSpec {
    PartSpec {
        name: name.into(),
        states: vec![state.clone()],
        start: Some(state.clone()),
        end: Some(state),
    }
}

fn rule_id(id: &str, inv: bool) -> String {
    if inv {
        format!("{id}^-1")
    } else {
        id.to_string()
    }
}

// ---------------------------------------------------------------- M1

const M1_PARTS: [&str; 5] = ["Q0", "Q1", "Q2", "Q3", "Q4"];

/// `M1(i)`: the working rules `tau_i(a)` of phase `i`.
fn m1_phase(alphabet: &[String], n: usize, i: usize) -> MachineSpec {
    let mut sectors = vec![empty_sector()];
    for j in 1..=4 {
        sectors.push(copy_sector(alphabet, &format!("Q{}Q{j}", j - 1), &j.to_string()));
    }
    sectors.push(empty_sector());
    let state = |j: usize| format!("q{j}({i})");
    let mut rules = Vec::new();
    for a in alphabet {
        let t = |s: usize, inv: bool| Some(Lit::signed(format!("{a}_{s}"), inv));
        // (part, left, right) insertions, then locked sectors
        let (acts, locks): (Vec<(usize, Option<Lit>, Option<Lit>)>, Vec<usize>) = if i == 1 {
            (vec![(1, t(1, true), None), (2, None, t(3, false))], vec![2, 4])
        } else if i == 2 * n {
            (vec![(2, None, t(3, true)), (4, t(4, false), None)], vec![1, 2])
        } else if i == 2 * n - 1 {
            (vec![(1, t(1, true), None), (2, t(2, true), t(3, false)), (4, t(4, true), None)], vec![])
        } else if i % 2 == 0 {
            (vec![(2, t(2, false), t(3, true))], vec![4])
        } else {
            (vec![(1, t(1, true), None), (2, t(2, true), t(3, false))], vec![4])
        };
        let mut parts: Vec<PartRuleSpec> = (0..5).map(|j| PartRuleSpec::fix(state(j))).collect();
        for (j, l, r) in acts {
            parts[j] = PartRuleSpec::fix(state(j)).with_left(l).with_right(r);
        }
        let mut domains = vec![Domain::Full; 6];
        for s in locks {
            domains[s] = Domain::Empty;
        }
        rules.push(RuleSpec {
            id: format!("tau{i}({a})"),
            step: Step::work(i.to_string()),
            inner_transition: false,
            parts,
            domains,
        });
    }
    MachineSpec {
        name: format!("M1({i})"),
        cyclic: false,
        parts: M1_PARTS.iter().enumerate().map(|(j, p)| one_state_part(p, state(j))).collect(),
        sectors,
        inputs: vec![1],
        rules,
    }
}

/// Sectors locked by `sigma(i,i+1)`.
fn sigma_locks(n: usize, i: usize) -> Vec<usize> {
    if i == 1 {
        vec![2, 4]
    } else if i == 2 * n - 1 {
        vec![1, 2]
    } else if i % 2 == 0 {
        vec![3, 4]
    } else {
        vec![2, 4]
    }
}

pub fn m1_spec(alphabet: &[String], n: usize) -> Result<MachineSpec> {
    check_alphabet(alphabet)?;
    check_n(n)?;
    let phases: Vec<MachineSpec> = (1..=2 * n).map(|i| m1_phase(alphabet, n, i)).collect();
    let transitions: Vec<Transition> = (1..2 * n)
        .map(|i| Transition {
            id: format!("sigma({i},{})", i + 1),
            from: i - 1,
            to: i,
            step: Step::transition(i.to_string(), (i + 1).to_string()),
            inner: false,
            locks: Locks::Explicit(sigma_locks(n, i)),
        })
        .collect();
    concatenate("M1", &phases, &transitions)
}

pub fn build_m1(alphabet: &[String], n: usize) -> Result<Machine> {
    Machine::new(m1_spec(alphabet, n)?)
}

/// Letters of `u` in the order a phase reads them, with the rule sign.
fn phase_reading(u: &FreeWord, backwards: bool) -> Vec<Lit> {
    let mut v = u.letters().to_vec();
    if backwards {
        v.reverse();
    }
    v
}

/// The accepting history of the input configuration with input `u^n`.
pub fn canonical_accepting_m1(m1: &Machine, n: usize, u: &FreeWord) -> Result<Vec<RuleIdx>> {
    let mut h = Vec::new();
    for i in 1..=2 * n {
        for x in phase_reading(u, i % 2 == 1) {
            h.push(m1.rule_index(&rule_id(&format!("tau{i}({})", x.name), x.inv))?);
        }
        if i < 2 * n {
            h.push(m1.rule_index(&format!("sigma({i},{})", i + 1))?);
        }
    }
    Ok(h)
}

// ---------------------------------------------------------------- M2

/// Parts of the standard base of M2.
pub const M2_PARTS: [&str; 9] = ["Q0", "P1", "Q1", "R1", "Q2", "R2", "Q3", "P4", "Q4"];

fn m2_skeleton(alphabet: &[String]) -> Skeleton {
    let mut sectors = vec![empty_sector()];
    for w in M2_PARTS.windows(2) {
        let name = format!("{}{}", w[0], w[1]);
        sectors.push(copy_sector(alphabet, &name, &name));
    }
    sectors.push(empty_sector());
    Skeleton {
        name: "M2".into(),
        cyclic: false,
        parts: M2_PARTS.iter().map(|s| s.to_string()).collect(),
        sectors,
        inputs: vec![1],
    }
}

fn sector_of(skel: &Skeleton, name: &str) -> usize {
    skel.sectors.iter().position(|s| s.name == name).expect("known sector")
}

/// Places a primitive machine on three consecutive parts of M2.
fn place_primitive(
    prim: &MachineSpec,
    skel: &Skeleton,
    first_part: usize,
    tag: String,
    step: usize,
    open: &[&str],
) -> Result<MachineSpec> {
    let mut part_map = vec![None; skel.parts.len()];
    for k in 0..3 {
        part_map[first_part + k] = Some(k);
    }
    let e = Embedding {
        tag,
        step: Some(Step::work(step.to_string())),
        part_map,
        sector_map: vec![None, Some(first_part + 1), Some(first_part + 2), None],
        open: open.iter().map(|s| sector_of(skel, s)).collect(),
    };
    embed(prim, skel, &e)
}

/// All real sectors of `skel` except `keep`.
fn all_but(skel: &Skeleton, keep: &[&str]) -> Vec<usize> {
    let n = skel.parts.len();
    let real = if skel.cyclic { 1..n + 1 } else { 1..n };
    real.filter(|&s| !keep.contains(&skel.sectors[s].name.as_str())).collect()
}

/// `M2(s)` for one step `s` in `2..=4n`.
fn m2_step(alphabet: &[String], n: usize, k: usize, s: usize, skel: &Skeleton, prev: Option<&MachineSpec>) -> Result<MachineSpec> {
    let (lr_m, rl_m) = (lr(alphabet)?, rl(alphabet)?);
    if s % 2 == 0 {
        // a copy of M1(s/2) on Q0 Q1 Q2 Q3 Q4
        let e = Embedding {
            tag: s.to_string(),
            step: Some(Step::work(s.to_string())),
            part_map: vec![Some(0), None, Some(1), None, Some(2), None, Some(3), None, Some(4)],
            sector_map: vec![None, Some(1), Some(4), Some(6), Some(7), None],
            open: vec![],
        };
        return embed(&m1_phase(alphabet, n, s / 2), skel, &e);
    }
    if s == 4 * n - 1 {
        let mut subs = Vec::with_capacity(k);
        for j in 1..=k {
            let tag = format!("{s}.{j}");
            let right = place_primitive(&rl_m, skel, 4, tag.clone(), s, &["Q3P4", "P4Q4"])?;
            let left = place_primitive(&lr_m, skel, 6, tag.clone(), s, &["Q2R2", "R2Q3"])?;
            let mut pairs = Vec::new();
            for a in alphabet {
                pairs.push((format!("xi1({a})[{tag}]"), format!("zeta1({a})[{tag}]^-1"), format!("fused1({a})[{tag}]")));
            }
            pairs.push((format!("xi12[{tag}]"), format!("zeta12[{tag}]"), format!("fused12[{tag}]")));
            for a in alphabet {
                pairs.push((format!("xi2({a})[{tag}]"), format!("zeta2({a})[{tag}]^-1"), format!("fused2({a})[{tag}]")));
            }
            subs.push(fuse(&format!("M2({tag})"), &right, &left, &pairs)?);
        }
        let chis: Vec<Transition> = (1..k)
            .map(|j| Transition {
                id: format!("chi({j},{})", j + 1),
                from: j - 1,
                to: j,
                step: Step::work(s.to_string()),
                inner: true,
                locks: Locks::Explicit(all_but(skel, &["R2Q3", "Q3P4"])),
            })
            .collect();
        return concatenate(&format!("M2({s})"), &subs, &chis);
    }
    // LR on Q0 P1 Q1, then RL on Q2 R2 Q3 (s = 4l-1) or Q1 R1 Q2 (s = 4l+1)
    let (rl_first, rl_input) = if s % 4 == 3 { (4, "R2Q3") } else { (2, "R1Q2") };
    let minus = place_primitive(&lr_m, skel, 0, format!("{s}-"), s, &[rl_input])?;
    let plus = place_primitive(&rl_m, skel, rl_first, format!("{s}+"), s, &["Q0P1"])?;
    let bare = concatenate(&format!("M2({s})"), &[minus.clone(), plus.clone()], &[])?;
    let prev = prev.ok_or_else(|| Error::InvalidParams("odd step without a predecessor".into()))?;
    let locks = crate::combinators::auto_locks(prev, &bare);
    concatenate(
        &format!("M2({s})"),
        &[minus, plus],
        &[Transition {
            id: format!("chi({s})"),
            from: 0,
            to: 1,
            step: Step::work(s.to_string()),
            inner: true,
            locks: Locks::Explicit(locks),
        }],
    )
}

pub fn m2_spec(alphabet: &[String], n: usize, k: usize) -> Result<MachineSpec> {
    check_alphabet(alphabet)?;
    check_n(n)?;
    if k == 0 {
        return Err(Error::InvalidParams("k must be positive".into()));
    }
    let skel = m2_skeleton(alphabet);
    let mut steps: Vec<MachineSpec> = Vec::with_capacity(4 * n - 1);
    for s in 2..=4 * n {
        let step = m2_step(alphabet, n, k, s, &skel, steps.last())?;
        steps.push(step);
    }
    let transitions: Vec<Transition> = (2..4 * n)
        .map(|s| Transition {
            id: format!("theta({s},{})", s + 1),
            from: s - 2,
            to: s - 1,
            step: Step::transition(s.to_string(), (s + 1).to_string()),
            inner: false,
            locks: Locks::Auto,
        })
        .collect();
    concatenate("M2", &steps, &transitions)
}

pub fn build_m2(alphabet: &[String], n: usize, k: usize) -> Result<Machine> {
    Machine::new(m2_spec(alphabet, n, k)?)
}

/// Positive rule count of M2 predicted from its definition.
pub fn m2_rule_count(alphabet_len: usize, n: usize, k: usize) -> usize {
    let m = alphabet_len;
    let phases = 2 * n * m;
    let runners = (2 * n - 2) * (2 * (2 * m + 1) + 1);
    let fused = k * (2 * m + 1) + (k - 1);
    phases + runners + fused + (4 * n - 2)
}

// ---------------------------------------------------------------- M3, M4

pub fn m3_spec(alphabet: &[String], n: usize, k: usize) -> Result<MachineSpec> {
    let m2 = m2_spec(alphabet, n, k)?;
    let grown = extend_left(&m2, "P0", "p0(M2)", copy_sector(alphabet, "P0Q0", "P0Q0"))?;
    let skel = Skeleton::of(&grown);
    let load = {
        let mut m = trivial(&skel, &|p| format!("{}(1)", crate::combinators::part_stem(p)));
        m.name = "M3(1)".into();
        m.inputs = vec![1];
        let q0 = "q0(1)";
        for a in alphabet {
            let mut parts: Vec<PartRuleSpec> = m.parts.iter().map(|p| PartRuleSpec::fix(p.states[0].clone())).collect();
            parts[1] = PartRuleSpec::fix(q0)
                .with_left(Some(Lit::signed(format!("{a}_P0Q0"), true)))
                .with_right(Some(Lit::new(format!("{a}_Q0P1"))));
            let mut domains = vec![Domain::Empty; parts.len() + 1];
            domains[0] = Domain::Full;
            domains[1] = Domain::Full;
            domains[2] = Domain::Full;
            *domains.last_mut().expect("outer") = Domain::Full;
            m.rules.push(RuleSpec {
                id: format!("load({a})"),
                step: Step::work("1"),
                inner_transition: false,
                parts,
                domains,
            });
        }
        m
    };
    let mut out = concatenate(
        "M3",
        &[load, grown],
        &[Transition {
            id: "theta(1,2)".into(),
            from: 0,
            to: 1,
            step: Step::transition("1", "2"),
            inner: false,
            locks: Locks::Explicit(all_but(&skel, &["Q0P1"])),
        }],
    )?;
    out.inputs = vec![1];
    Ok(out)
}

pub fn build_m3(alphabet: &[String], n: usize, k: usize) -> Result<Machine> {
    Machine::new(m3_spec(alphabet, n, k)?)
}

pub fn m4_spec(alphabet: &[String], n: usize, k: usize) -> Result<MachineSpec> {
    let mut m = cyclize(&m3_spec(alphabet, n, k)?, "{t}", "t")?;
    m.name = "M4".into();
    Ok(m)
}

pub fn build_m4(alphabet: &[String], n: usize, k: usize) -> Result<Machine> {
    Machine::new(m4_spec(alphabet, n, k)?)
}

// ---------------------------------------------------------------- M5, M

/// Sector of M4 that holds the input.
pub const M4_INPUT_SECTOR: usize = 2;

/// The special input sector of M5,2 and M: the input sector of copy 1.
pub const SPECIAL_SECTOR: usize = M4_INPUT_SECTOR;

pub fn m51_spec(p: &TowerParams) -> Result<MachineSpec> {
    p.validate()?;
    let mut m = parallel(&m4_spec(&p.alphabet, p.n, p.k)?, p.l, &|_, _| false)?;
    m.name = "M5,1".into();
    Ok(m)
}

pub fn m52_spec(p: &TowerParams) -> Result<MachineSpec> {
    p.validate()?;
    let mut m = parallel(&m4_spec(&p.alphabet, p.n, p.k)?, p.l, &|c, s| c == 1 && s == M4_INPUT_SECTOR)?;
    m.name = "M5,2".into();
    Ok(m)
}

pub fn build_m51(p: &TowerParams) -> Result<Machine> {
    Machine::new(m51_spec(p)?)
}

pub fn build_m52(p: &TowerParams) -> Result<Machine> {
    Machine::new(m52_spec(p)?)
}

fn is_t_state(s: &str) -> bool {
    s.starts_with("t@")
}

/// Copy of `m5` as the half `j` of M: prefixed names, shared `t` letters.
fn half(m5: &MachineSpec, j: u8) -> MachineSpec {
    let mut m = rename(
        m5,
        &|s| if is_t_state(s) { s.to_string() } else { format!("{j}:{s}") },
        &|r| format!("{j}:{r}"),
    );
    for r in &mut m.rules {
        r.step.machine = Some(j);
    }
    m
}

/// One-letter machine using `prefix@PART` letters; `t` parts keep their letter.
fn terminal(skel: &Skeleton, prefix: &str) -> MachineSpec {
    trivial(skel, &|p| match split_coordinate(p) {
        Some(("{t}", c)) => format!("t@{c}"),
        _ => format!("{prefix}@{p}"),
    })
}

pub fn m_spec(p: &TowerParams) -> Result<MachineSpec> {
    let m51 = m51_spec(p)?;
    let m52 = m52_spec(p)?;
    let skel = Skeleton::of(&m51);
    let start = terminal(&skel, "s");
    let end = terminal(&skel, "e");
    let inputs: Vec<&str> = m51.inputs.iter().map(|&i| skel.sectors[i].name.as_str()).collect();
    let mut halves = Vec::new();
    for (j, m5) in [(1u8, &m51), (2u8, &m52)] {
        let mut s_locks = all_but(&skel, &inputs);
        if j == 2 {
            s_locks.push(SPECIAL_SECTOR);
            s_locks.sort_unstable();
        }
        halves.push(concatenate(
            &format!("M_{j}"),
            &[start.clone(), half(m5, j), end.clone()],
            &[
                Transition {
                    id: format!("theta(s)_{j}"),
                    from: 0,
                    to: 1,
                    step: Step::named("s").with_machine(Some(j)),
                    inner: false,
                    locks: Locks::Explicit(s_locks),
                },
                Transition {
                    id: format!("theta(a)_{j}"),
                    from: 1,
                    to: 2,
                    step: Step::named("a").with_machine(Some(j)),
                    inner: false,
                    locks: Locks::Explicit(all_but(&skel, &[])),
                },
            ],
        )?);
    }
    let mut m = union("M", &halves[0], &halves[1])?;
    m.inputs = m51.inputs.clone();
    Ok(m)
}

pub fn build_m(p: &TowerParams) -> Result<Machine> {
    Machine::new(m_spec(p)?)
}

// ---------------------------------------------------------------- configurations

/// `I(w)`: start letters, `w` in every input sector.
pub fn config_i(m: &Machine, w: &FreeWord) -> Result<AdmissibleWord> {
    m.input_configuration(w)
}

/// `J(w)`: like `I(w)` with the special input sector empty.
pub fn config_j(m: &Machine, w: &FreeWord) -> Result<AdmissibleWord> {
    let contents = m
        .inputs()
        .iter()
        .filter(|&&s| s != SPECIAL_SECTOR)
        .map(|&s| Ok((s, m.copy_word(s, w)?)))
        .collect::<Result<Vec<_>>>()?;
    m.configuration_with(&m.start_states()?, &contents)
}

/// `W_ac`: end letters, every sector empty.
pub fn config_accept(m: &Machine) -> Result<AdmissibleWord> {
    m.accept_configuration()
}

// ---------------------------------------------------------------- canonical runs

/// Applies rules by id and reads sector contents by name, for machines that
/// contain M2 (possibly renamed and copied).
struct Driver<'a> {
    m: &'a Machine,
    word: AdmissibleWord,
    history: Vec<RuleIdx>,
    /// Prepended to rule ids, e.g. `1:`.
    rule_prefix: String,
    /// Appended to sector names, e.g. `@3`.
    sector_suffix: String,
}

impl<'a> Driver<'a> {
    fn new(m: &'a Machine, word: AdmissibleWord) -> Self {
        Driver {
            m,
            word,
            history: Vec::new(),
            rule_prefix: String::new(),
            sector_suffix: String::new(),
        }
    }

    fn push(&mut self, id: &str, inv: bool) -> Result<()> {
        let r = self.m.rule_index(&format!("{}{id}", self.rule_prefix))?;
        let r = if inv { inverse_rule(r) } else { r };
        self.word = self.m.apply(&self.word, r)?;
        self.history.push(r);
        Ok(())
    }

    /// Projection of a sector of the (standard base) current word.
    fn content(&self, sector: &str) -> Result<FreeWord> {
        let name = format!("{sector}{}", self.sector_suffix);
        let s = self
            .m
            .spec()
            .sector_index(&name)
            .ok_or_else(|| Error::UnknownSymbol(name.clone()))?;
        Ok(self.word.project_window(self.m.hardware(), s - 1))
    }

    fn read(&mut self, template: &str, letters: &[Lit]) -> Result<()> {
        for x in letters {
            self.push(&template.replace("{}", &x.name), x.inv)?;
        }
        Ok(())
    }

    /// `LR` on the content of its input sector: right to left, connect, left to right.
    fn run_lr(&mut self, tag: &str, input: &str) -> Result<()> {
        let v = self.content(input)?;
        self.read(&format!("zeta1({{}})[{tag}]"), &phase_reading(&v, true))?;
        self.push(&format!("zeta12[{tag}]"), false)?;
        self.read(&format!("zeta2({{}})[{tag}]"), &phase_reading(&v, false))
    }

    fn run_rl(&mut self, tag: &str, input: &str, prefix: &str) -> Result<()> {
        let v = self.content(input)?;
        self.read(&format!("{prefix}1({{}})[{tag}]"), &phase_reading(&v, false))?;
        self.push(&format!("{prefix}12[{tag}]"), false)?;
        self.read(&format!("{prefix}2({{}})[{tag}]"), &phase_reading(&v, true))
    }

    /// The M2 part of the accepting computation, from the start letters of
    /// `M2(2)` with `u^n` in `Q0P1`.
    fn m2(&mut self, u: &FreeWord, n: usize, k: usize) -> Result<()> {
        for s in 2..=4 * n {
            if s % 2 == 0 {
                let i = s / 2;
                self.read(&format!("tau{i}({{}})[{s}]"), &phase_reading(u, i % 2 == 1))?;
            } else if s == 4 * n - 1 {
                for j in 1..=k {
                    self.run_rl(&format!("{s}.{j}"), "R2Q3", "fused")?;
                    if j < k {
                        self.push(&format!("chi({j},{})", j + 1), false)?;
                    }
                }
            } else {
                self.run_lr(&format!("{s}-"), "Q0P1")?;
                self.push(&format!("chi({s})"), false)?;
                let input = if s % 4 == 3 { "R2Q3" } else { "R1Q2" };
                self.run_rl(&format!("{s}+"), input, "xi")?;
            }
            if s < 4 * n {
                self.push(&format!("theta({s},{})", s + 1), false)?;
            }
        }
        Ok(())
    }

    /// Loading `u^n` into `Q0P1`, then the M2 part.
    fn m3(&mut self, u: &FreeWord, n: usize, k: usize) -> Result<()> {
        self.read("load({})", &phase_reading(&u.pow(n as i64), true))?;
        self.push("theta(1,2)", false)?;
        self.m2(u, n, k)
    }
}

/// Accepting history of M2 from the input configuration with `u^n`.
pub fn canonical_accepting_m2(m2: &Machine, n: usize, k: usize, u: &FreeWord) -> Result<Vec<RuleIdx>> {
    let mut d = Driver::new(m2, m2.input_configuration(&u.pow(n as i64))?);
    d.m2(u, n, k)?;
    Ok(d.history)
}

/// Accepting history of M3 (or M4, which has the same rule ids).
pub fn canonical_accepting_m3(m3: &Machine, n: usize, k: usize, u: &FreeWord) -> Result<Vec<RuleIdx>> {
    let mut d = Driver::new(m3, m3.input_configuration(&u.pow(n as i64))?);
    d.m3(u, n, k)?;
    Ok(d.history)
}

/// Accepting history of `I(u^n)` (machine 1) or `J(u^n)` (machine 2) in M,
/// using only rules of that machine.
pub fn canonical_accepting_m(m: &Machine, p: &TowerParams, u: &FreeWord, machine: u8) -> Result<Vec<RuleIdx>> {
    if machine != 1 && machine != 2 {
        return Err(Error::InvalidParams(format!("machine index {machine} is not 1 or 2")));
    }
    let w = u.pow(p.n as i64);
    let start = if machine == 1 { config_i(m, &w)? } else { config_j(m, &w)? };
    let mut d = Driver::new(m, start);
    d.sector_suffix = format!("@{}", p.l);
    d.push(&format!("theta(s)_{machine}"), false)?;
    d.rule_prefix = format!("{machine}:");
    d.m3(u, p.n, p.k)?;
    d.rule_prefix.clear();
    d.push(&format!("theta(a)_{machine}"), false)?;
    Ok(d.history)
}

/// Index range `[i, j)` of the run `theta(4n-2,4n-1) .. theta(4n-1,4n)` in a history.
pub fn designated_subcomputation(m: &Machine, h: &[RuleIdx], n: usize) -> Option<(usize, usize)> {
    let enter = format!("theta({},{})", 4 * n - 2, 4 * n - 1);
    let leave = format!("theta({},{})", 4 * n - 1, 4 * n);
    let id = |r: RuleIdx| m.rule(r).id.rsplit(':').next().unwrap_or_default().to_string();
    let i = h.iter().position(|&r| id(r) == enter)?;
    let j = h[i..].iter().position(|&r| id(r) == leave)? + i;
    Some((i, j + 1))
}

// ---------------------------------------------------------------- components and bases

/// Number of parts in one copy of the base of M4.
pub const M4_BASE_LEN: usize = 11;

/// `W(i)`: the subword of a standard-base word of M between `{t}@i` and `Q4@i`.
pub fn component(m: &Machine, w: &AdmissibleWord, i: usize) -> Result<AdmissibleWord> {
    let hw = m.hardware();
    let base = w.base(hw);
    if base.len() != m.num_parts() || base.iter().enumerate().any(|(j, &(p, inv))| inv || p != j) {
        return Err(Error::NotAdmissibleWord("component needs the standard base".into()));
    }
    let copies = m.num_parts() / M4_BASE_LEN;
    if i == 0 || i > copies {
        return Err(Error::InvalidParams(format!("no component {i}")));
    }
    let letters = w.letters();
    let qpos: Vec<usize> = letters.iter().enumerate().filter(|(_, l)| l.is_state()).map(|(p, _)| p).collect();
    let from = qpos[(i - 1) * M4_BASE_LEN];
    let to = qpos[i * M4_BASE_LEN - 1];
    AdmissibleWord::new(hw, letters[from..=to].to_vec())
}

/// Moves every letter of `v` from its (single) coordinate to coordinate `j`.
pub fn coordinate_shift(m: &Machine, v: &AdmissibleWord, j: usize) -> Result<AdmissibleWord> {
    let hw = m.hardware();
    let mut coord = None;
    let mut out = Vec::with_capacity(v.len());
    for &l in v.letters() {
        let name = hw.name(l);
        let (stem, c) = split_coordinate(name).ok_or_else(|| Error::MixedCoordinates(format!("`{name}` has no coordinate")))?;
        match coord {
            None => coord = Some(c),
            Some(c0) if c0 != c => {
                return Err(Error::MixedCoordinates(format!("coordinates {c0} and {c}")));
            }
            _ => {}
        }
        let shifted = hw.letter(&format!("{stem}@{j}"))?;
        out.push(if l.is_inv() { shifted.inverse() } else { shifted });
    }
    AdmissibleWord::new(hw, out)
}

/// Base of a word as part names with signs.
pub fn base_word(m: &Machine, w: &AdmissibleWord) -> Vec<Lit> {
    w.base(m.hardware())
        .into_iter()
        .map(|(p, inv)| Lit::signed(m.spec().parts[p].name.clone(), inv))
        .collect()
}

/// `pi(B)`: the base with coordinates forgotten.
pub fn reverted_base(b: &[Lit]) -> Vec<Lit> {
    b.iter()
        .map(|l| match split_coordinate(&l.name) {
            Some((stem, _)) => Lit::signed(stem, l.inv),
            None => l.clone(),
        })
        .collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BaseFlags {
    pub revolving: bool,
    pub faulty: bool,
    pub pararevolving: bool,
    pub hyperfaulty: bool,
    pub tight: bool,
}

/// Same first and last letter, length at least 2, and no proper subword
/// of length at least 2 with that property.
pub fn is_revolving(b: &[Lit]) -> bool {
    if b.len() < 2 || b[0] != b[b.len() - 1] {
        return false;
    }
    // a proper subword with equal ends exists iff some letter repeats
    // inside b[..len-1] or inside b[1..]
    let distinct = |s: &[Lit]| {
        let mut seen = std::collections::HashSet::new();
        s.iter().all(|l| seen.insert(l))
    };
    distinct(&b[..b.len() - 1]) && distinct(&b[1..])
}

fn is_unreduced(b: &[Lit]) -> bool {
    b.windows(2).any(|w| w[0].name == w[1].name && w[0].inv != w[1].inv)
}

/// `u x v x` with `x v x` revolving and no letter of `u` inside `x v x`.
pub fn is_tight(b: &[Lit]) -> bool {
    (0..b.len()).any(|i| is_revolving(&b[i..]) && b[..i].iter().all(|l| !b[i..].contains(l)))
}

pub fn base_predicates(b: &[Lit]) -> BaseFlags {
    let pi = reverted_base(b);
    let revolving = is_revolving(b);
    let pararevolving = is_revolving(&pi);
    BaseFlags {
        revolving,
        faulty: revolving && is_unreduced(b),
        pararevolving,
        hyperfaulty: pararevolving && is_unreduced(&pi),
        tight: is_tight(b),
    }
}

/// Parses a base word such as `Q4@1 {t}@2 Q1@2^-1`.
pub fn parse_base(s: &str) -> Result<Vec<Lit>> {
    s.split_whitespace().map(str::parse).collect()
}
