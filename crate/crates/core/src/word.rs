//! Words in free groups over named generators.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Anything that has a formal inverse inside a free group.
pub trait Invertible: Clone + PartialEq {
    fn inverse(&self) -> Self;
}

/// Push `x` onto a freely reduced word, cancelling against the last letter.
pub fn push_reduced<T: Invertible>(word: &mut Vec<T>, x: T) {
    if word.last() == Some(&x.inverse()) {
        word.pop();
    } else {
        word.push(x);
    }
}

/// Free reduction; stack based, so it runs in linear time.
pub fn free_reduce<T: Invertible>(letters: impl IntoIterator<Item = T>) -> Vec<T> {
    let mut out = Vec::new();
    for x in letters {
        push_reduced(&mut out, x);
    }
    out
}

pub fn invert_word<T: Invertible>(w: &[T]) -> Vec<T> {
    w.iter().rev().map(Invertible::inverse).collect()
}

/// Split a reduced word as `c v c^-1` with `v` cyclically reduced.
pub fn cyclic_core<T: Invertible>(w: &[T]) -> (Vec<T>, Vec<T>) {
    let mut i = 0;
    let mut j = w.len();
    while j >= i + 2 && w[j - 1] == w[i].inverse() {
        i += 1;
        j -= 1;
    }
    (w[..i].to_vec(), w[i..j].to_vec())
}

/// Least cyclic rotation of `w` or of `w^-1`; two cyclically reduced words
/// define the same relator up to conjugation and inversion iff these agree.
pub fn cyclic_canonical<T: Invertible + Ord>(w: &[T]) -> Vec<T> {
    let (_, core) = cyclic_core(&free_reduce(w.iter().cloned()));
    let inv = invert_word(&core);
    let mut best: Option<Vec<T>> = None;
    for cand in [&core, &inv] {
        for r in 0..cand.len().max(1) {
            let mut rot = cand[r..].to_vec();
            rot.extend_from_slice(&cand[..r]);
            if best.as_ref().map_or(true, |b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.unwrap_or_default()
}

/// A signed generator, printed as `name` or `name^-1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit {
    pub name: String,
    pub inv: bool,
}

impl Lit {
    pub fn new(name: impl Into<String>) -> Self {
        Lit {
            name: name.into(),
            inv: false,
        }
    }

    pub fn signed(name: impl Into<String>, inv: bool) -> Self {
        Lit {
            name: name.into(),
            inv,
        }
    }
}

impl Invertible for Lit {
    fn inverse(&self) -> Self {
        Lit {
            name: self.name.clone(),
            inv: !self.inv,
        }
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inv {
            write!(f, "{}^-1", self.name)
        } else {
            f.write_str(&self.name)
        }
    }
}

impl FromStr for Lit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, inv) = match s.strip_suffix("^-1") {
            Some(n) => (n, true),
            None => (s, false),
        };
        if name.is_empty() || name.contains(char::is_whitespace) {
            return Err(Error::Invalid(format!("bad letter `{s}`")));
        }
        Ok(Lit::signed(name, inv))
    }
}

/// A freely reduced word over named generators.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeWord(Vec<Lit>);

impl FreeWord {
    pub fn empty() -> Self {
        FreeWord(Vec::new())
    }

    /// Builds the reduced form of the product of `lits`.
    pub fn new(lits: impl IntoIterator<Item = Lit>) -> Self {
        FreeWord(free_reduce(lits))
    }

    pub fn letters(&self) -> &[Lit] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        FreeWord(invert_word(&self.0))
    }

    pub fn mul(&self, other: &FreeWord) -> Self {
        FreeWord::new(self.0.iter().chain(other.0.iter()).cloned())
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut out = FreeWord::empty();
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Names of the generators occurring in the word, in first-use order.
    pub fn support(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for l in &self.0 {
            if !out.contains(&l.name) {
                out.push(l.name.clone());
            }
        }
        out
    }

    /// Parses `1`, compact words such as `abA` (upper case = inverse) or
    /// space separated tokens `a b^-1 c^3`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(FreeWord::empty());
        }
        let mut lits = Vec::new();
        if s.contains(char::is_whitespace) || s.contains('^') {
            for tok in s.split_whitespace() {
                if tok == "1" {
                    continue;
                }
                let (name, exp) = match tok.split_once('^') {
                    Some((n, e)) => (
                        n,
                        e.parse::<i64>()
                            .map_err(|_| Error::Invalid(format!("bad exponent in `{tok}`")))?,
                    ),
                    None => (tok, 1),
                };
                if name.is_empty() {
                    return Err(Error::Invalid(format!("bad token `{tok}`")));
                }
                for _ in 0..exp.unsigned_abs() {
                    lits.push(Lit::signed(name, exp < 0));
                }
            }
        } else {
            for c in s.chars() {
                if !c.is_alphabetic() {
                    return Err(Error::Invalid(format!("bad letter `{c}` in `{s}`")));
                }
                if c.is_uppercase() {
                    lits.push(Lit::signed(c.to_lowercase().to_string(), true));
                } else {
                    lits.push(Lit::new(c.to_string()));
                }
            }
        }
        Ok(FreeWord::new(lits))
    }

    /// All reduced words of length at most `max_len` over `alphabet`, shortest first.
    pub fn enumerate(alphabet: &[String], max_len: usize) -> Vec<FreeWord> {
        let mut out = vec![FreeWord::empty()];
        let mut layer = vec![FreeWord::empty()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for a in alphabet {
                    for inv in [false, true] {
                        let l = Lit::signed(a.clone(), inv);
                        if w.0.last() == Some(&l.inverse()) {
                            continue;
                        }
                        let mut v = w.0.clone();
                        v.push(l);
                        next.push(FreeWord(v));
                    }
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for FreeWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FreeWord::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms_agree() {
        let a = FreeWord::parse("abA").unwrap();
        let b = FreeWord::parse("a b a^-1").unwrap();
        assert_eq!(a, b);
        assert_eq!(FreeWord::parse("a^3").unwrap().len(), 3);
        assert!(FreeWord::parse("aA").unwrap().is_empty());
        assert_eq!(FreeWord::parse("1").unwrap(), FreeWord::empty());
    }

    #[test]
    fn display_round_trips() {
        let w = FreeWord::parse("a b^-1 c").unwrap();
        assert_eq!(w.to_string(), "a b^-1 c");
        assert_eq!(FreeWord::parse(&w.to_string()).unwrap(), w);
        assert_eq!(FreeWord::empty().to_string(), "1");
    }

    #[test]
    fn cyclic_canonical_identifies_rotations_and_inverses() {
        let w = FreeWord::parse("abAB").unwrap();
        let r = FreeWord::parse("bABa").unwrap();
        let i = w.inverse();
        let c = cyclic_canonical(w.letters());
        assert_eq!(c, cyclic_canonical(r.letters()));
        assert_eq!(c, cyclic_canonical(i.letters()));
        // conjugates reduce to the same core
        let conj = FreeWord::parse("c").unwrap().mul(&w).mul(&FreeWord::parse("C").unwrap());
        assert_eq!(c, cyclic_canonical(conj.letters()));
    }

    #[test]
    fn enumerate_counts_reduced_words() {
        let alpha = vec!["a".to_string(), "b".to_string()];
        // 1 + 4 + 12 + 36
        assert_eq!(FreeWord::enumerate(&alpha, 3).len(), 53);
    }
}
