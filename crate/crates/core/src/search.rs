//! Bounded enumeration of reduced computations and acceptance search.
//!
//! Levels are expanded breadth first. Each level is split into chunks
//! handled by scoped worker threads, and the chunk results are joined in
//! order, so the output never depends on the number of workers.

use std::collections::HashMap;

use crate::admissible::AdmissibleWord;
use crate::computation::Computation;
use crate::error::{Error, Result};
use crate::machine::{inverse_rule, Letter, Machine, RuleIdx};
use crate::word::FreeWord;

/// Default cap on the size of one search level.
pub const DEFAULT_FRONTIER_CAP: usize = 2_000_000;

/// Levels smaller than this are expanded on the calling thread.
const PARALLEL_THRESHOLD: usize = 512;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_history_length: usize,
    /// Words longer than this are dropped. `None` (the default) keeps the
    /// search complete.
    pub max_word_norm: Option<usize>,
    /// A level larger than this aborts the search.
    pub frontier_cap: Option<usize>,
    /// Worker threads; `None` uses [`worker_count`].
    pub workers: Option<usize>,
}

impl SearchBudget {
    pub fn new(max_history_length: usize) -> Self {
        SearchBudget {
            max_history_length,
            max_word_norm: None,
            frontier_cap: Some(DEFAULT_FRONTIER_CAP),
            workers: None,
        }
    }

    pub fn with_word_norm(mut self, norm: usize) -> Self {
        self.max_word_norm = Some(norm);
        self
    }

    pub fn with_frontier_cap(mut self, cap: Option<usize>) -> Self {
        self.frontier_cap = cap;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers.max(1));
        self
    }

    fn worker_count(&self) -> usize {
        self.workers.unwrap_or_else(worker_count)
    }
}

/// Worker count: `SMFORGE_THREADS` if set, otherwise the available parallelism.
pub fn worker_count() -> usize {
    std::env::var("SMFORGE_THREADS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// What to do with a newly reached computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Visit {
    /// Report it and extend it further.
    Expand,
    /// Report it but do not extend it.
    Leaf,
    /// Drop it.
    Prune,
}

struct Node {
    history: Vec<RuleIdx>,
    word: AdmissibleWord,
    expand: bool,
}

fn children<F>(m: &Machine, node: &Node, budget: &SearchBudget, filter: &F) -> Vec<Node>
where
    F: Fn(&[RuleIdx], &AdmissibleWord) -> Visit,
{
    if !node.expand {
        return Vec::new();
    }
    let last = node.history.last().copied();
    let mut out = Vec::new();
    for r in m.admissible_rules(&node.word) {
        if Some(inverse_rule(r)) == last {
            continue;
        }
        let word = m.apply_unchecked(&node.word, r);
        if budget.max_word_norm.is_some_and(|b| word.len() > b) {
            continue;
        }
        let mut history = node.history.clone();
        history.push(r);
        let expand = match filter(&history, &word) {
            Visit::Prune => continue,
            Visit::Leaf => false,
            Visit::Expand => true,
        };
        out.push(Node { history, word, expand });
    }
    out
}

/// Expands a level; chunks go to scoped workers and are joined in order.
fn map_level<T, U, G>(items: &[T], workers: usize, f: &G) -> Vec<U>
where
    T: Sync,
    U: Send,
    G: Fn(&T) -> Vec<U> + Sync,
{
    if workers <= 1 || items.len() < PARALLEL_THRESHOLD {
        return items.iter().flat_map(f).collect();
    }
    let chunk = items.len().div_ceil(workers);
    std::thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|c| s.spawn(move || c.iter().flat_map(f).collect::<Vec<U>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("search worker panicked"))
            .collect()
    })
}

/// Calls `visit` on every reduced computation from `w0` within the budget
/// that `filter` does not prune, in length-lexicographic order of histories
/// (rules compared by index). Returns the number of visited computations.
pub fn walk_reduced<F, V>(m: &Machine, w0: &AdmissibleWord, budget: &SearchBudget, filter: &F, mut visit: V) -> Result<usize>
where
    F: Fn(&[RuleIdx], &AdmissibleWord) -> Visit + Sync,
    V: FnMut(&[RuleIdx], &AdmissibleWord),
{
    let workers = budget.worker_count();
    let mut level = vec![Node {
        history: Vec::new(),
        word: w0.clone(),
        expand: true,
    }];
    let mut emitted = 0;
    for depth in 0..=budget.max_history_length {
        for node in &level {
            visit(&node.history, &node.word);
            emitted += 1;
        }
        if depth == budget.max_history_length {
            break;
        }
        let next = map_level(&level, workers, &|n: &Node| children(m, n, budget, filter));
        if next.is_empty() {
            break;
        }
        if budget.frontier_cap.is_some_and(|cap| next.len() > cap) {
            return Err(Error::BudgetExceeded { partial: emitted });
        }
        level = next;
    }
    Ok(emitted)
}

/// Every reduced computation from `w0` within the budget, each exactly once,
/// in length-lexicographic order.
pub fn enumerate_reduced(m: &Machine, w0: &AdmissibleWord, budget: &SearchBudget) -> Result<Vec<Computation>> {
    let mut histories = Vec::new();
    walk_reduced(m, w0, budget, &|_: &[RuleIdx], _: &AdmissibleWord| Visit::Expand, |h, _| {
        histories.push(h.to_vec())
    })?;
    histories.iter().map(|h| m.run(w0, h)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    /// A shortest computation reaching the target.
    Accepted(Computation),
    /// Every word reachable from the start was visited; the target is not among them.
    Rejected { explored: usize },
    /// The budget ran out first.
    Incomplete { explored: usize, reason: String },
}

impl SearchOutcome {
    pub fn witness(&self) -> Option<&Computation> {
        match self {
            SearchOutcome::Accepted(c) => Some(c),
            _ => None,
        }
    }
}

/// Breadth-first search for a computation from `w0` to `target`, with
/// words deduplicated, so a witness found is a shortest one.
pub fn bounded_reach(m: &Machine, w0: &AdmissibleWord, target: &AdmissibleWord, budget: &SearchBudget) -> Result<SearchOutcome> {
    // (word, parent index, rule)
    let mut nodes: Vec<(AdmissibleWord, usize, RuleIdx)> = vec![(w0.clone(), usize::MAX, usize::MAX)];
    let mut seen: HashMap<AdmissibleWord, usize> = HashMap::from([(w0.clone(), 0)]);
    let mut level: Vec<usize> = vec![0];
    let mut pruned = false;
    let workers = budget.worker_count();
    let witness = |nodes: &[(AdmissibleWord, usize, RuleIdx)], mut i: usize| -> Result<Computation> {
        let mut h = Vec::new();
        while nodes[i].1 != usize::MAX {
            h.push(nodes[i].2);
            i = nodes[i].1;
        }
        h.reverse();
        m.run(w0, &h)
    };
    if w0 == target {
        return Ok(SearchOutcome::Accepted(witness(&nodes, 0)?));
    }
    for _ in 0..budget.max_history_length {
        let expand = |&i: &usize| -> Vec<(usize, RuleIdx, AdmissibleWord, bool)> {
            let w = &nodes[i].0;
            m.admissible_rules(w)
                .into_iter()
                .map(|r| {
                    let next = m.apply_unchecked(w, r);
                    let keep = budget.max_word_norm.map_or(true, |b| next.len() <= b);
                    (i, r, next, keep)
                })
                .collect()
        };
        let cands = map_level(&level, workers, &expand);
        let mut next_level = Vec::new();
        for (parent, r, w, keep) in cands {
            if !keep {
                pruned = true;
                continue;
            }
            if seen.contains_key(&w) {
                continue;
            }
            let idx = nodes.len();
            seen.insert(w.clone(), idx);
            let hit = &w == target;
            nodes.push((w, parent, r));
            if hit {
                return Ok(SearchOutcome::Accepted(witness(&nodes, idx)?));
            }
            next_level.push(idx);
        }
        if next_level.is_empty() {
            return Ok(if pruned {
                SearchOutcome::Incomplete {
                    explored: nodes.len(),
                    reason: format!("words longer than {} were pruned", budget.max_word_norm.unwrap_or(0)),
                }
            } else {
                SearchOutcome::Rejected { explored: nodes.len() }
            });
        }
        if budget.frontier_cap.is_some_and(|cap| next_level.len() > cap) {
            return Ok(SearchOutcome::Incomplete {
                explored: nodes.len(),
                reason: format!("frontier exceeded {}", budget.frontier_cap.unwrap_or(0)),
            });
        }
        level = next_level;
    }
    Ok(SearchOutcome::Incomplete {
        explored: nodes.len(),
        reason: format!("no witness of length at most {}", budget.max_history_length),
    })
}

/// [`bounded_reach`] with the accept configuration as target.
pub fn bounded_accept(m: &Machine, w0: &AdmissibleWord, budget: &SearchBudget) -> Result<SearchOutcome> {
    bounded_reach(m, w0, &m.accept_configuration()?, budget)
}

/// Letters of the first input sector, by origin.
pub fn input_alphabet(m: &Machine) -> Vec<String> {
    let hw = m.hardware();
    let Some(&s) = m.inputs().first() else {
        return Vec::new();
    };
    hw.sector_letters(s)
        .iter()
        .filter_map(|&a| hw.tape_origin(a).map(str::to_string))
        .collect()
}

/// One row of a time function table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TimeRow {
    /// Bound on `|W|_a` of the input configurations.
    pub size: usize,
    /// Largest minimal accepting time among the accepted inputs found so far.
    pub time: Option<usize>,
    pub accepted: usize,
    pub rejected: usize,
    pub incomplete: usize,
}

/// Tabulates `T(s)` for `s <= size_limit` over input configurations
/// `I(w)`, using [`bounded_accept`] for each input.
pub fn time_function(m: &Machine, size_limit: usize, budget: &SearchBudget) -> Result<Vec<TimeRow>> {
    let alphabet = input_alphabet(m);
    let copies = m.inputs().len().max(1);
    let words = FreeWord::enumerate(&alphabet, size_limit / copies);
    let mut per_size: Vec<(usize, SearchOutcome)> = Vec::new();
    for w in &words {
        let start = m.input_configuration(w)?;
        per_size.push((start.a_len(), bounded_accept(m, &start, budget)?));
    }
    let mut rows = Vec::new();
    for size in 0..=size_limit {
        let mut row = TimeRow {
            size,
            time: None,
            accepted: 0,
            rejected: 0,
            incomplete: 0,
        };
        for (_, out) in per_size.iter().filter(|(a, _)| *a <= size) {
            match out {
                SearchOutcome::Accepted(c) => {
                    row.accepted += 1;
                    row.time = Some(row.time.map_or(c.len(), |t| t.max(c.len())));
                }
                SearchOutcome::Rejected { .. } => row.rejected += 1,
                SearchOutcome::Incomplete { .. } => row.incomplete += 1,
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

// ---------------------------------------------------------------- controlled runs of M2

/// The rules bounding the runs of the zipped step of M2:
/// `theta(4n-2,4n-1), chi(1,2), .., chi(k-1,k), theta(4n-1,4n)`.
pub fn zipped_boundaries(m2: &Machine, n: usize, k: usize) -> Result<Vec<RuleIdx>> {
    let mut ids = vec![format!("theta({},{})", 4 * n - 2, 4 * n - 1)];
    ids.extend((1..k).map(|j| format!("chi({j},{})", j + 1)));
    ids.push(format!("theta({},{})", 4 * n - 1, 4 * n));
    ids.iter().map(|id| m2.rule_index(id)).collect()
}

/// `Some(j)` if `h` is `b[j-1] H' b[j]` or its inverse, with no boundary
/// rule inside `H'`.
pub fn controlled_index(bounds: &[RuleIdx], h: &[RuleIdx]) -> Option<usize> {
    if h.len() < 2 {
        return None;
    }
    let pos = |r: RuleIdx| bounds.iter().position(|&b| b == r);
    let is_bound = |r: RuleIdx| pos(r).is_some() || pos(inverse_rule(r)).is_some();
    if h[1..h.len() - 1].iter().any(|&r| is_bound(r)) {
        return None;
    }
    let (first, last) = (h[0], h[h.len() - 1]);
    match (pos(first), pos(last)) {
        (Some(i), Some(j)) if j == i + 1 => return Some(j),
        _ => {}
    }
    match (pos(inverse_rule(first)), pos(inverse_rule(last))) {
        (Some(i), Some(j)) if i == j + 1 => Some(i),
        _ => None,
    }
}

/// Every controlled computation from `w0` within the budget.
pub fn controlled_computations(
    m2: &Machine,
    n: usize,
    k: usize,
    w0: &AdmissibleWord,
    budget: &SearchBudget,
) -> Result<Vec<Computation>> {
    let bounds = zipped_boundaries(m2, n, k)?;
    let is_bound = |r: RuleIdx| bounds.contains(&r) || bounds.contains(&inverse_rule(r));
    let filter = |h: &[RuleIdx], _: &AdmissibleWord| {
        if !is_bound(h[0]) {
            Visit::Prune
        } else if h.len() > 1 && is_bound(h[h.len() - 1]) {
            Visit::Leaf
        } else {
            Visit::Expand
        }
    };
    let mut found = Vec::new();
    walk_reduced(m2, w0, budget, &filter, |h, _| {
        if controlled_index(&bounds, h).is_some() {
            found.push(h.to_vec());
        }
    })?;
    found.iter().map(|h| m2.run(w0, h)).collect()
}

/// Standard-base words where a boundary rule (or its inverse) can start a
/// controlled computation: the rule's source states, with every unlocked
/// sector filled by a reduced word of length at most `max_len`.
pub fn controlled_starts(m2: &Machine, n: usize, k: usize, max_len: usize) -> Result<Vec<AdmissibleWord>> {
    let bounds = zipped_boundaries(m2, n, k)?;
    let alphabet = input_alphabet(m2);
    let words = FreeWord::enumerate(&alphabet, max_len);
    let mut out = Vec::new();
    for (i, &b) in bounds.iter().enumerate() {
        // b[0] starts forwards, b[k] backwards, the chi rules both ways
        let mut rules = Vec::new();
        if i < bounds.len() - 1 {
            rules.push(b);
        }
        if i > 0 {
            rules.push(inverse_rule(b));
        }
        for r in rules {
            let rule = m2.rule(r);
            let states: Vec<u32> = rule.parts.iter().map(|p| p.from).collect();
            let open: Vec<usize> = m2.real_sectors().filter(|&s| !rule.locks(s)).collect();
            let mut fills: Vec<Vec<(usize, Vec<Letter>)>> = vec![Vec::new()];
            for &s in &open {
                let mut next = Vec::new();
                for f in &fills {
                    for w in &words {
                        let mut g = f.clone();
                        g.push((s, m2.copy_word(s, w)?));
                        next.push(g);
                    }
                }
                fills = next;
            }
            for f in fills {
                out.push(m2.configuration_with(&states, &f)?);
            }
        }
    }
    Ok(out)
}

