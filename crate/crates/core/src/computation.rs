//! Computations: an initial word and a history, with the derived word sequence.

use crate::admissible::AdmissibleWord;
use crate::error::{Error, Result};
use crate::machine::{inverse_rule, Machine, RuleIdx};
use crate::step::StepHistory;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Computation {
    pub history: Vec<RuleIdx>,
    /// `W_0 .. W_t`; always one longer than the history.
    pub words: Vec<AdmissibleWord>,
}

impl Computation {
    pub fn initial(&self) -> &AdmissibleWord {
        &self.words[0]
    }

    pub fn last(&self) -> &AdmissibleWord {
        self.words.last().expect("computation has an initial word")
    }

    pub fn len(&self) -> usize {
        self.history.len()
    }

    pub fn is_empty(&self) -> bool {
        self.history.is_empty()
    }

    /// No two consecutive rules are mutually inverse.
    pub fn is_reduced(&self) -> bool {
        is_reduced(&self.history)
    }

    /// The subcomputation `W_i -> .. -> W_j`.
    pub fn sub(&self, i: usize, j: usize) -> Computation {
        Computation {
            history: self.history[i..j].to_vec(),
            words: self.words[i..=j].to_vec(),
        }
    }

    /// The same computation read backwards.
    pub fn inverse(&self) -> Computation {
        Computation {
            history: self.history.iter().rev().map(|&r| inverse_rule(r)).collect(),
            words: self.words.iter().rev().cloned().collect(),
        }
    }

    /// max_i |W_i|_a
    pub fn max_a_len(&self) -> usize {
        self.words.iter().map(AdmissibleWord::a_len).max().unwrap_or(0)
    }
}

pub fn is_reduced(h: &[RuleIdx]) -> bool {
    h.windows(2).all(|w| w[1] != inverse_rule(w[0]))
}

/// Freely reduce a history.
pub fn reduce_history(h: &[RuleIdx]) -> Vec<RuleIdx> {
    let mut out: Vec<RuleIdx> = Vec::with_capacity(h.len());
    for &r in h {
        if out.last() == Some(&inverse_rule(r)) {
            out.pop();
        } else {
            out.push(r);
        }
    }
    out
}

pub fn invert_history(h: &[RuleIdx]) -> Vec<RuleIdx> {
    h.iter().rev().map(|&r| inverse_rule(r)).collect()
}

impl Machine {
    /// Runs `h` from `w`, failing at the first inapplicable rule.
    pub fn run(&self, w: &AdmissibleWord, h: &[RuleIdx]) -> Result<Computation> {
        let mut words = Vec::with_capacity(h.len() + 1);
        words.push(w.clone());
        for (i, &r) in h.iter().enumerate() {
            let cur = words.last().expect("nonempty");
            if let Some(reason) = self.admissibility_failure(cur, r) {
                return Err(Error::FailsAtStep {
                    index: i,
                    rule: self.rule(r).id.clone(),
                    reason,
                });
            }
            let next = self.apply_unchecked(cur, r);
            assert_eq!(next.base(self.hardware()), cur.base(self.hardware()), "rule application must preserve the base");
            words.push(next);
        }
        Ok(Computation {
            history: h.to_vec(),
            words,
        })
    }

    /// Final word only; cheaper than [`Machine::run`] for long histories.
    pub fn run_to_end(&self, w: &AdmissibleWord, h: &[RuleIdx]) -> Result<AdmissibleWord> {
        let mut cur = w.clone();
        for (i, &r) in h.iter().enumerate() {
            if let Some(reason) = self.admissibility_failure(&cur, r) {
                return Err(Error::FailsAtStep {
                    index: i,
                    rule: self.rule(r).id.clone(),
                    reason,
                });
            }
            cur = self.apply_unchecked(&cur, r);
        }
        Ok(cur)
    }

    pub fn step_history(&self, h: &[RuleIdx]) -> StepHistory {
        StepHistory::from_steps(h.iter().map(|&r| {
            let rule = self.rule(r);
            (&rule.step, rule.positive)
        }))
    }
}
