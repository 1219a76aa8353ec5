//! Admissible words and rule application.

use std::fmt;

use crate::error::{Error, Result};
use crate::machine::{Hardware, Letter, Machine, RuleIdx};
use crate::word::{push_reduced, FreeWord, Lit};

/// `q0^e u1 q1^e ... uk qk^e`, stored as one flat reduced letter sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdmissibleWord {
    letters: Vec<Letter>,
}

/// A maximal tape subword together with the sector it lives in.
#[derive(Clone, Copy, Debug)]
pub struct SectorView<'a> {
    /// Position of the window among all windows of the word.
    pub window: usize,
    pub sector: usize,
    pub tape: &'a [Letter],
}

impl AdmissibleWord {
    /// Validates `letters` as an admissible word over `hw`.
    pub fn new(hw: &Hardware, letters: Vec<Letter>) -> Result<Self> {
        let bad = |msg: String| Err(Error::NotAdmissibleWord(msg));
        match (letters.first(), letters.last()) {
            (Some(f), Some(l)) if f.is_state() && l.is_state() => {}
            (None, _) => return bad("word has no state letters".into()),
            _ => return bad("word must start and end with state letters".into()),
        }
        for l in &letters {
            let max = if l.is_state() { hw.num_states() } else { hw.num_tape() };
            if l.index() as usize >= max {
                return bad(format!("letter {l:?} does not exist"));
            }
        }
        let mut prev_q = letters[0];
        let mut tape_start = 1;
        for i in 1..letters.len() {
            let y = letters[i];
            if !y.is_state() {
                continue;
            }
            let tape = &letters[tape_start..i];
            let Some(sector) = hw.window_sector(prev_q, y) else {
                return bad(format!(
                    "window {} .. {} has no admissible shape",
                    hw.format_letter(prev_q),
                    hw.format_letter(y)
                ));
            };
            for (k, a) in tape.iter().enumerate() {
                if hw.tape_sector(a.index()) != sector {
                    return bad(format!(
                        "tape letter {} does not belong to sector {sector}",
                        hw.format_letter(*a)
                    ));
                }
                if k > 0 && tape[k - 1] == a.inverse() {
                    return bad("tape word is not freely reduced".into());
                }
            }
            if tape.is_empty() && prev_q == y.inverse() {
                return bad("word is not reduced (q q^-1)".into());
            }
            prev_q = y;
            tape_start = i + 1;
        }
        Ok(AdmissibleWord { letters })
    }

    /// Parses space separated signed symbols.
    pub fn parse(hw: &Hardware, s: &str) -> Result<Self> {
        let letters = s
            .split_whitespace()
            .map(|t| hw.parse_letter(t))
            .collect::<Result<Vec<_>>>()?;
        AdmissibleWord::new(hw, letters)
    }

    /// A word with the standard base: one state per part, sector contents in order.
    pub fn configuration(hw: &Hardware, states: &[u32], sectors: &[Vec<Letter>]) -> Result<Self> {
        let n = hw.num_parts();
        if states.len() != n || sectors.len() + 1 != n {
            return Err(Error::NotAdmissibleWord(format!(
                "a configuration needs {n} states and {} sectors",
                n - 1
            )));
        }
        let mut letters = Vec::new();
        for (j, &q) in states.iter().enumerate() {
            if j > 0 {
                letters.extend_from_slice(&sectors[j - 1]);
            }
            letters.push(Letter::state(q, false));
        }
        AdmissibleWord::new(hw, letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// The state letters in order.
    pub fn state_letters(&self) -> Vec<Letter> {
        self.letters.iter().copied().filter(|l| l.is_state()).collect()
    }

    /// The base: the part of each state letter, with its sign.
    pub fn base(&self, hw: &Hardware) -> Vec<(usize, bool)> {
        self.letters
            .iter()
            .filter(|l| l.is_state())
            .map(|l| (hw.state_part(l.index()), l.is_inv()))
            .collect()
    }

    /// |W|_a
    pub fn a_len(&self) -> usize {
        self.letters.iter().filter(|l| !l.is_state()).count()
    }

    /// |W|_q
    pub fn q_len(&self) -> usize {
        self.letters.iter().filter(|l| l.is_state()).count()
    }

    /// ‖W‖, the length of the word.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Tape subwords between consecutive state letters, with their sectors.
    pub fn sectors<'a>(&'a self, hw: &'a Hardware) -> impl Iterator<Item = SectorView<'a>> + 'a {
        let mut qpos = self
            .letters
            .iter()
            .enumerate()
            .filter(|(_, l)| l.is_state())
            .map(|(i, _)| i)
            .collect::<Vec<_>>()
            .into_iter();
        let mut prev = qpos.next();
        let mut window = 0;
        std::iter::from_fn(move || {
            let i = prev?;
            let j = qpos.next()?;
            prev = Some(j);
            let sector = hw
                .window_sector(self.letters[i], self.letters[j])
                .expect("validated word");
            let v = SectorView {
                window,
                sector,
                tape: &self.letters[i + 1..j],
            };
            window += 1;
            Some(v)
        })
    }

    /// Tape word of the `w`-th window.
    pub fn window_tape(&self, w: usize) -> &[Letter] {
        let mut seen = 0;
        let mut start = None;
        for (i, l) in self.letters.iter().enumerate() {
            if l.is_state() {
                if let Some(s) = start {
                    if seen == w + 1 {
                        return &self.letters[s..i];
                    }
                }
                seen += 1;
                start = Some(i + 1);
            }
        }
        &[]
    }

    /// Natural projection to the free group on the origins of tape letters.
    pub fn project(&self, hw: &Hardware) -> FreeWord {
        FreeWord::new(self.letters.iter().filter(|l| !l.is_state()).filter_map(|l| {
            hw.tape_origin(l.index())
                .map(|o| Lit::signed(o, l.is_inv()))
        }))
    }

    /// Projection of the tape word in one window.
    pub fn project_window(&self, hw: &Hardware, w: usize) -> FreeWord {
        FreeWord::new(self.window_tape(w).iter().filter_map(|l| {
            hw.tape_origin(l.index())
                .map(|o| Lit::signed(o, l.is_inv()))
        }))
    }

    pub fn display<'a>(&'a self, hw: &'a Hardware) -> WordDisplay<'a> {
        WordDisplay { w: self, hw }
    }

    pub(crate) fn from_raw(letters: Vec<Letter>) -> Self {
        AdmissibleWord { letters }
    }
}

pub struct WordDisplay<'a> {
    w: &'a AdmissibleWord,
    hw: &'a Hardware,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &l) in self.w.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(self.hw.name(l))?;
            if l.is_inv() {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

impl Machine {
    /// Why `w` is not `r`-admissible, or `None` if it is.
    pub fn admissibility_failure(&self, w: &AdmissibleWord, r: RuleIdx) -> Option<String> {
        let hw = self.hardware();
        let rule = self.rule(r);
        for &l in w.letters() {
            if l.is_state() {
                let part = hw.state_part(l.index());
                if rule.parts[part].from != l.index() {
                    return Some(format!(
                        "state letter {} is not in Q({})",
                        hw.format_letter(l),
                        rule.id
                    ));
                }
            } else {
                let s = hw.tape_sector(l.index());
                if !rule.domains[s].contains(l.index()) {
                    let what = if rule.locks(s) { "locked" } else { "restricted" };
                    return Some(format!(
                        "tape letter {} lies in {what} sector {}",
                        hw.format_letter(l),
                        self.sector_name(s)
                    ));
                }
            }
        }
        None
    }

    pub fn is_admissible(&self, w: &AdmissibleWord, r: RuleIdx) -> bool {
        let hw = self.hardware();
        let rule = self.rule(r);
        w.letters().iter().all(|&l| {
            if l.is_state() {
                rule.parts[hw.state_part(l.index())].from == l.index()
            } else {
                rule.domains[hw.tape_sector(l.index())].contains(l.index())
            }
        })
    }

    /// `W·θ`, reduced.
    pub fn apply(&self, w: &AdmissibleWord, r: RuleIdx) -> Result<AdmissibleWord> {
        if let Some(reason) = self.admissibility_failure(w, r) {
            return Err(Error::NotAdmissible {
                rule: self.rule(r).id.clone(),
                reason,
            });
        }
        Ok(self.apply_unchecked(w, r))
    }

    /// `W·θ` without the admissibility check; callers must have checked it.
    pub fn apply_unchecked(&self, w: &AdmissibleWord, r: RuleIdx) -> AdmissibleWord {
        let hw = self.hardware();
        let rule = self.rule(r);
        let mut out: Vec<Letter> = Vec::with_capacity(w.letters.len() + 2 * hw.num_parts());
        let last = w.letters.len() - 1;
        for (i, &l) in w.letters.iter().enumerate() {
            if l.is_state() {
                let p = &rule.parts[hw.state_part(l.index())];
                // q -> v q' u, and q^-1 -> u^-1 q'^-1 v^-1
                let (before, after) = if l.is_inv() {
                    (p.right.map(Letter::inverse), p.left.map(Letter::inverse))
                } else {
                    (p.left, p.right)
                };
                // Insertions falling outside the word (possible only at the
                // ends of a cyclic word) are dropped.
                if let Some(x) = before.filter(|_| i > 0) {
                    push_reduced(&mut out, x);
                }
                out.push(Letter::state(p.to, l.is_inv()));
                if let Some(x) = after.filter(|_| i < last) {
                    out.push(x);
                }
            } else {
                push_reduced(&mut out, l);
            }
        }
        debug_assert_eq!(
            out.iter().filter(|l| l.is_state()).count(),
            w.q_len(),
            "rule application changed the base length"
        );
        AdmissibleWord::from_raw(out)
    }

    /// Admissible positive and negative rules, in rule order.
    pub fn admissible_rules(&self, w: &AdmissibleWord) -> Vec<RuleIdx> {
        (0..self.rules().len()).filter(|&r| self.is_admissible(w, r)).collect()
    }

    /// Configuration with the given state per part and sector contents
    /// (sectors not listed are empty).
    pub fn configuration_with(
        &self,
        states: &[u32],
        contents: &[(usize, Vec<Letter>)],
    ) -> Result<AdmissibleWord> {
        let n = self.num_parts();
        let mut sectors = vec![Vec::new(); n - 1];
        for (s, t) in contents {
            if *s == 0 || *s >= n {
                return Err(Error::NotAdmissibleWord(format!("sector {s} is not interior")));
            }
            sectors[s - 1] = t.clone();
        }
        AdmissibleWord::configuration(self.hardware(), states, &sectors)
    }

    pub fn start_states(&self) -> Result<Vec<u32>> {
        let hw = self.hardware();
        (0..self.num_parts())
            .map(|j| {
                hw.start_state(j)
                    .ok_or_else(|| Error::InvalidHardware(format!("part {j} has no start letter")))
            })
            .collect()
    }

    pub fn end_states(&self) -> Result<Vec<u32>> {
        let hw = self.hardware();
        (0..self.num_parts())
            .map(|j| {
                hw.end_state(j)
                    .ok_or_else(|| Error::InvalidHardware(format!("part {j} has no end letter")))
            })
            .collect()
    }

    /// Copy of an input-alphabet word in one sector.
    pub fn copy_word(&self, sector: usize, w: &FreeWord) -> Result<Vec<Letter>> {
        w.letters()
            .iter()
            .map(|l| {
                self.hardware().copy_in_sector(sector, l).ok_or_else(|| {
                    Error::UnknownSymbol(format!("{} in sector {}", l.name, self.sector_name(sector)))
                })
            })
            .collect()
    }

    /// The input configuration with `w` copied into every input sector.
    pub fn input_configuration(&self, w: &FreeWord) -> Result<AdmissibleWord> {
        let contents = self
            .inputs()
            .iter()
            .map(|&s| Ok((s, self.copy_word(s, w)?)))
            .collect::<Result<Vec<_>>>()?;
        self.configuration_with(&self.start_states()?, &contents)
    }

    /// End states, every sector empty.
    pub fn accept_configuration(&self) -> Result<AdmissibleWord> {
        self.configuration_with(&self.end_states()?, &[])
    }

    pub fn format_word(&self, w: &AdmissibleWord) -> String {
        w.display(self.hardware()).to_string()
    }

    pub fn parse_word(&self, s: &str) -> Result<AdmissibleWord> {
        AdmissibleWord::parse(self.hardware(), s)
    }
}
