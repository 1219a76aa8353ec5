//! Modified length of words, cell weights and mixtures of necklaces.

use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::presentation::{GenKind, Presentation};
use crate::word::Lit;

/// `δ`, `C₁` and the mixture depth `J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricParams {
    pub delta: Rational64,
    pub c1: Rational64,
    pub j: usize,
}

impl Default for MetricParams {
    fn default() -> Self {
        MetricParams {
            delta: Rational64::new(1, 100),
            c1: Rational64::from_integer(100),
            j: 4,
        }
    }
}

impl MetricParams {
    pub fn new(delta: Rational64, c1: Rational64, j: usize) -> crate::Result<Self> {
        if delta <= Rational64::zero() || delta >= Rational64::one() || c1 <= Rational64::zero() || j == 0 {
            return Err(crate::Error::InvalidParams(format!(
                "need 0 < delta < 1, C1 > 0, J > 0 (got {delta}, {c1}, {j})"
            )));
        }
        Ok(MetricParams { delta, c1, j })
    }
}

fn letter_cost(k: GenKind, delta: Rational64) -> Rational64 {
    match k {
        GenKind::A => delta,
        GenKind::Q | GenKind::Theta => Rational64::one(),
    }
}

fn is_syllable(x: GenKind, y: GenKind) -> bool {
    matches!((x, y), (GenKind::Theta, GenKind::A) | (GenKind::A, GenKind::Theta))
}

/// Minimal cost of a factorization into letters (q and θ cost 1, a costs
/// `δ`) and (θ,a)-syllables (cost 1). A syllable has two letters, so the
/// minimum is a two-term recurrence.
pub fn modified_length(kinds: &[GenKind], delta: Rational64) -> Rational64 {
    let mut best = vec![Rational64::zero(); kinds.len() + 1];
    for i in 1..=kinds.len() {
        let mut b = best[i - 1] + letter_cost(kinds[i - 1], delta);
        if i >= 2 && is_syllable(kinds[i - 2], kinds[i - 1]) {
            b = b.min(best[i - 2] + Rational64::one());
        }
        best[i] = b;
    }
    best[kinds.len()]
}

/// Kinds of the letters of `w`; `None` if some letter is not a generator of `p`.
pub fn kinds_of(p: &Presentation, w: &[Lit]) -> Option<Vec<GenKind>> {
    w.iter().map(|l| p.kind_of(&l.name)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Bead {
    White,
    Black,
}

/// Beads on a circle, listed counterclockwise.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Necklace(pub Vec<Bead>);

impl Necklace {
    pub fn whites(&self) -> usize {
        self.0.iter().filter(|&&b| b == Bead::White).count()
    }

    pub fn blacks(&self) -> usize {
        self.0.len() - self.whites()
    }

    pub fn rotated(&self, k: usize) -> Necklace {
        let mut v = self.0.clone();
        if !v.is_empty() {
            let k = k % v.len();
            v.rotate_left(k);
        }
        Necklace(v)
    }

    pub fn without(&self, i: usize) -> Necklace {
        let mut v = self.0.clone();
        v.remove(i);
        Necklace(v)
    }

    /// `#P_j`: ordered pairs of distinct white beads whose counterclockwise
    /// arc holds at least `j` black beads.
    pub fn pairs(&self, j: usize) -> usize {
        self.arc_counts().filter(|&c| c >= j).count()
    }

    /// `μ_J = Σ_{j=1..J} #P_j`; each pair contributes `min(blacks on its arc, J)`.
    pub fn mixture(&self, big_j: usize) -> usize {
        self.arc_counts().map(|c| c.min(big_j)).sum()
    }

    /// Black beads strictly inside the arc of every ordered white pair.
    fn arc_counts(&self) -> impl Iterator<Item = usize> + '_ {
        let n = self.0.len();
        (0..n).filter(move |&i| self.0[i] == Bead::White).flat_map(move |i| {
            let mut blacks = 0;
            let mut out = Vec::new();
            for step in 1..n {
                match self.0[(i + step) % n] {
                    Bead::Black => blacks += 1,
                    Bead::White => out.push(blacks),
                }
            }
            out
        })
    }
}
