//! Step labels attached to rules and the step histories they induce.

use std::fmt;

/// What a rule does at the level of submachines.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StepKind {
    /// A working rule of the submachine with this label.
    Work(String),
    /// A transition rule from the first submachine to the second.
    Transition(String, String),
    /// A standalone transition letter such as `(s)` or `(a)`.
    Named(String),
}

/// Step label of a rule; `machine` distinguishes the two halves of the final machine.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Step {
    pub kind: StepKind,
    pub machine: Option<u8>,
}

impl Step {
    pub fn work(label: impl Into<String>) -> Self {
        Step {
            kind: StepKind::Work(label.into()),
            machine: None,
        }
    }

    pub fn transition(from: impl Into<String>, to: impl Into<String>) -> Self {
        Step {
            kind: StepKind::Transition(from.into(), to.into()),
            machine: None,
        }
    }

    pub fn named(label: impl Into<String>) -> Self {
        Step {
            kind: StepKind::Named(label.into()),
            machine: None,
        }
    }

    pub fn with_machine(mut self, machine: Option<u8>) -> Self {
        self.machine = machine;
        self
    }

    pub fn is_work(&self) -> bool {
        matches!(self.kind, StepKind::Work(_))
    }
}

/// One letter of a step history.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StepLetter {
    pub step: Step,
    /// Set for transition letters read backwards. Work letters are never inverted.
    pub inv: bool,
}

impl fmt::Display for StepLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.step.kind {
            StepKind::Work(l) => write!(f, "({l})")?,
            StepKind::Transition(a, b) => {
                let (x, y) = if self.inv { (b, a) } else { (a, b) };
                if x.chars().count() == 1 && y.chars().count() == 1 {
                    write!(f, "({x}{y})")?;
                } else {
                    write!(f, "({x},{y})")?;
                }
            }
            StepKind::Named(l) => write!(f, "({l})")?,
        }
        if let Some(j) = self.step.machine {
            write!(f, "_{j}")?;
        }
        if self.inv && matches!(self.step.kind, StepKind::Named(_)) {
            f.write_str("^-1")?;
        }
        Ok(())
    }
}

/// Factorization of a history into maximal same-step runs and transition letters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct StepHistory(pub Vec<StepLetter>);

impl StepHistory {
    /// Builds the full step history from the step and sign of each rule.
    pub fn from_steps<'a>(steps: impl IntoIterator<Item = (&'a Step, bool)>) -> Self {
        let mut out: Vec<StepLetter> = Vec::new();
        for (step, positive) in steps {
            if step.is_work() {
                if out.last().map_or(false, |l| &l.step == step) {
                    continue;
                }
                out.push(StepLetter {
                    step: step.clone(),
                    inv: false,
                });
            } else {
                out.push(StepLetter {
                    step: step.clone(),
                    inv: !positive,
                });
            }
        }
        StepHistory(out)
    }

    /// Drops transition letters standing between two work letters, the
    /// usual shorthand `(1)(2)` for `(1)(12)(2)`.
    pub fn canonical(&self) -> StepHistory {
        let v = &self.0;
        let mut out = Vec::new();
        for (i, l) in v.iter().enumerate() {
            let between_work = !l.step.is_work()
                && matches!(l.step.kind, StepKind::Transition(..))
                && i > 0
                && i + 1 < v.len()
                && v[i - 1].step.is_work()
                && v[i + 1].step.is_work();
            if !between_work {
                out.push(l.clone());
            }
        }
        StepHistory(out)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True if the rendered history contains `pattern` as a run of letters.
    pub fn contains_subword(&self, pattern: &[String]) -> bool {
        let rendered: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        pattern.is_empty() || rendered.windows(pattern.len()).any(|w| w == pattern)
    }
}

impl fmt::Display for StepHistory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}
