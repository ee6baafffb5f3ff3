//! Exhaustive optimal solvers for small instances.
//!
//! `oms_opt` maximizes utility over sequences of at most k *full* merges;
//! `ope_opt` does the same over *partial* merges, where each step may
//! replace any non-overlapping subset of a pair's occurrences. Both run a
//! depth-first branch-and-bound: subtrees are cut when the utility so far
//! plus the packing bound on the remainder cannot beat the incumbent, and
//! states that coincide after relabeling symbols by first occurrence share a
//! memo entry. Budgets cap instance size, visited nodes, and wall time;
//! exceeding nodes or time degrades the result to a lower bound instead of
//! an error.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use crate::bounds;
use crate::error::{Error, Result};
use crate::text::{MergeRule, MergeSequence, Pair, PartialSequence, PartialStep, Symbol, Text};

/// Caps for the exponential searches. `max_len`/`max_k` reject an instance
/// up front; `max_nodes`/`time_limit` stop a running search gracefully.
#[derive(Clone, Debug)]
pub struct SearchBudget {
    pub max_len: usize,
    pub max_k: usize,
    pub max_nodes: u64,
    pub time_limit: Duration,
}

impl Default for SearchBudget {
    /// Sized for full-merge search.
    fn default() -> Self {
        Self {
            max_len: 24,
            max_k: 6,
            max_nodes: 2_000_000,
            time_limit: Duration::from_secs(10),
        }
    }
}

impl SearchBudget {
    /// Sized for partial-merge search, whose branching is much wider.
    pub fn partial_default() -> Self {
        Self {
            max_len: 14,
            max_k: 3,
            max_nodes: 2_000_000,
            time_limit: Duration::from_secs(10),
        }
    }

    /// Opt-in budget for showcase instances beyond the defaults.
    pub fn extended() -> Self {
        Self {
            max_len: 40,
            max_k: 8,
            max_nodes: 20_000_000,
            time_limit: Duration::from_secs(120),
        }
    }

    pub fn with_max_nodes(mut self, max_nodes: u64) -> Self {
        self.max_nodes = max_nodes;
        self
    }

    pub fn with_time_limit(mut self, time_limit: Duration) -> Self {
        self.time_limit = time_limit;
        self
    }

    fn admit(&self, text: &Text, k: usize) -> Result<()> {
        if text.len() > self.max_len {
            return Err(Error::BudgetExceeded(format!(
                "text length {} exceeds budget cap {}",
                text.len(),
                self.max_len
            )));
        }
        if k > self.max_k {
            return Err(Error::BudgetExceeded(format!(
                "k = {k} exceeds budget cap {}",
                self.max_k
            )));
        }
        Ok(())
    }
}

/// Outcome of a bounded search. When `exact` is false the search ran out of
/// nodes or time and `utility` is only a lower bound (still witnessed).
#[derive(Clone, Debug)]
pub struct SearchResult<W> {
    pub utility: usize,
    pub witness: W,
    pub exact: bool,
    pub nodes: u64,
}

/// Exact maximum utility over sequences of at most k full merges.
pub fn oms_opt(text: &Text, k: usize, budget: &SearchBudget) -> Result<SearchResult<MergeSequence>> {
    budget.admit(text, k)?;
    let mut engine = Engine::<FullMerges>::new(budget);
    let (utility, path) = engine.run(text, k);
    let witness = MergeSequence::from_pairs(text, &path);
    debug_assert_eq!(witness.utility(text).unwrap(), utility);
    Ok(SearchResult {
        utility,
        witness,
        exact: !engine.exhausted,
        nodes: engine.nodes,
    })
}

/// Exact maximum utility over sequences of at most k partial merges.
pub fn ope_opt(
    text: &Text,
    k: usize,
    budget: &SearchBudget,
) -> Result<SearchResult<PartialSequence>> {
    budget.admit(text, k)?;
    let mut engine = Engine::<SubsetMerges>::new(budget);
    let (utility, path) = engine.run(text, k);
    let mut steps = Vec::with_capacity(path.len());
    let mut cur = text.clone();
    for (pair, positions) in path {
        let rule = MergeRule {
            left: pair.0,
            right: pair.1,
            out: Symbol(cur.alphabet().len() as u32),
        };
        let step = PartialStep { rule, positions };
        cur = cur.apply_step(&step).expect("witness step replays");
        steps.push(step);
    }
    let witness = PartialSequence::new(steps);
    debug_assert_eq!(witness.utility(text).unwrap(), utility);
    Ok(SearchResult {
        utility,
        witness,
        exact: !engine.exhausted,
        nodes: engine.nodes,
    })
}

/// Utility of a hand-specified full-merge sequence.
pub fn replay_full(text: &Text, seq: &MergeSequence) -> Result<usize> {
    seq.utility(text)
}

/// Utility of a hand-specified partial sequence.
pub fn replay_partial(text: &Text, seq: &PartialSequence) -> Result<usize> {
    seq.utility(text)
}

/// Search actions for one solver flavor, in actual symbol ids.
trait Mode {
    type Act: Clone;

    /// All actions applicable to `text`, each with its utility, in the
    /// deterministic order the search explores them.
    fn enumerate(text: &Text) -> Vec<(Self::Act, usize)>;
    fn apply(text: &Text, act: &Self::Act) -> Text;
    /// Rewrites the action's symbol ids through `to_canon` (indexed by
    /// actual id) so it can live in the relabeling-invariant memo.
    fn to_canon(act: &Self::Act, to_canon: &[u32]) -> Self::Act;
    /// Inverse of `to_canon` via `from_canon` (indexed by canonical id).
    fn from_canon(act: &Self::Act, from_canon: &[Symbol]) -> Self::Act;
}

struct FullMerges;

impl Mode for FullMerges {
    type Act = Pair;

    fn enumerate(text: &Text) -> Vec<(Pair, usize)> {
        let mut acts: Vec<(Pair, usize)> = text
            .pair_stats()
            .iter()
            .map(|(&p, s)| (p, s.replaceable))
            .collect();
        acts.sort_by_key(|&((l, r), _)| (l.0, r.0));
        acts
    }

    fn apply(text: &Text, &(left, right): &Pair) -> Text {
        let rule = MergeRule {
            left,
            right,
            out: Symbol(text.alphabet().len() as u32),
        };
        text.apply_rule(&rule).expect("fresh output symbol")
    }

    fn to_canon(&(l, r): &Pair, to_canon: &[u32]) -> Pair {
        (
            Symbol(to_canon[l.0 as usize]),
            Symbol(to_canon[r.0 as usize]),
        )
    }

    fn from_canon(&(l, r): &Pair, from_canon: &[Symbol]) -> Pair {
        (from_canon[l.0 as usize], from_canon[r.0 as usize])
    }
}

struct SubsetMerges;

impl Mode for SubsetMerges {
    type Act = (Pair, Vec<usize>);

    fn enumerate(text: &Text) -> Vec<((Pair, Vec<usize>), usize)> {
        let mut pairs: Vec<Pair> = text.pair_stats().keys().copied().collect();
        pairs.sort_by_key(|&(l, r)| (l.0, r.0));
        let mut acts = Vec::new();
        for pair in pairs {
            let occ = text.occurrences(pair);
            let mut subset = Vec::new();
            push_subsets(&occ, 0, &mut subset, &mut |s| {
                acts.push(((pair, s.to_vec()), s.len()));
            });
        }
        // Large replacements first: deep dives reach strong incumbents
        // early, which is what makes the packing-bound pruning effective.
        acts.sort_by(|a, b| {
            b.1.cmp(&a.1)
                .then_with(|| (a.0 .0 .0 .0, a.0 .0 .1 .0).cmp(&(b.0 .0 .0 .0, b.0 .0 .1 .0)))
                .then_with(|| a.0 .1.cmp(&b.0 .1))
        });
        acts
    }

    fn apply(text: &Text, (pair, positions): &(Pair, Vec<usize>)) -> Text {
        let step = PartialStep {
            rule: MergeRule {
                left: pair.0,
                right: pair.1,
                out: Symbol(text.alphabet().len() as u32),
            },
            positions: positions.clone(),
        };
        text.apply_step(&step).expect("enumerated subset is valid")
    }

    fn to_canon((pair, positions): &(Pair, Vec<usize>), to_canon: &[u32]) -> (Pair, Vec<usize>) {
        (FullMerges::to_canon(pair, to_canon), positions.clone())
    }

    fn from_canon(
        (pair, positions): &(Pair, Vec<usize>),
        from_canon: &[Symbol],
    ) -> (Pair, Vec<usize>) {
        (FullMerges::from_canon(pair, from_canon), positions.clone())
    }
}

/// Emits every non-empty set of pairwise non-overlapping occurrences.
fn push_subsets(occ: &[usize], i: usize, cur: &mut Vec<usize>, emit: &mut impl FnMut(&[usize])) {
    if i == occ.len() {
        if !cur.is_empty() {
            emit(cur);
        }
        return;
    }
    if cur.last().map_or(true, |&last| occ[i] >= last + 2) {
        cur.push(occ[i]);
        push_subsets(occ, i + 1, cur, emit);
        cur.pop();
    }
    push_subsets(occ, i + 1, cur, emit);
}

/// Text relabeled by first symbol occurrence, plus both id mappings.
fn canonical(text: &Text) -> (Vec<u32>, Vec<u32>, Vec<Symbol>) {
    let mut to_canon = vec![u32::MAX; text.alphabet().len()];
    let mut from_canon = Vec::new();
    let mut pattern = Vec::with_capacity(text.len());
    for &s in text.symbols() {
        let slot = &mut to_canon[s.0 as usize];
        if *slot == u32::MAX {
            *slot = from_canon.len() as u32;
            from_canon.push(s);
        }
        pattern.push(*slot);
    }
    (pattern, to_canon, from_canon)
}

struct Engine<'a, M: Mode> {
    budget: &'a SearchBudget,
    deadline: Instant,
    nodes: u64,
    exhausted: bool,
    best: Option<usize>,
    best_path: Vec<M::Act>,
    /// (canonical text, remaining budget) -> (exact subtree value, best
    /// canonical action). Only fully explored subtrees are stored, so every
    /// stored best-action chain can be replayed.
    memo: HashMap<(Vec<u32>, usize), (usize, Option<M::Act>)>,
}

impl<'a, M: Mode> Engine<'a, M> {
    fn new(budget: &'a SearchBudget) -> Self {
        Self {
            budget,
            deadline: Instant::now() + budget.time_limit,
            nodes: 0,
            exhausted: false,
            best: None,
            best_path: Vec::new(),
            memo: HashMap::new(),
        }
    }

    fn run(&mut self, text: &Text, k: usize) -> (usize, Vec<M::Act>) {
        let mut stack = Vec::new();
        self.search(text, k, 0, &mut stack);
        (self.best.unwrap_or(0), std::mem::take(&mut self.best_path))
    }

    fn record(&mut self, prefix: usize, stack: &[M::Act], tail: Vec<M::Act>) {
        self.best = Some(prefix);
        self.best_path = stack.to_vec();
        self.best_path.extend(tail);
    }

    /// Follows the memo's best-action chain from `text` with `rem` budget.
    fn reconstruct(&self, text: &Text, mut rem: usize) -> Vec<M::Act> {
        let mut cur = text.clone();
        let mut tail = Vec::new();
        while rem > 0 {
            let (pattern, _, from_canon) = canonical(&cur);
            match self.memo.get(&(pattern, rem)) {
                Some((_, Some(act))) => {
                    let act = M::from_canon(act, &from_canon);
                    cur = M::apply(&cur, &act);
                    tail.push(act);
                    rem -= 1;
                }
                _ => break,
            }
        }
        tail
    }

    /// Returns (value, complete). `value` is the best additional utility
    /// found below this state; it is exact when `complete` is true, and the
    /// state is then memoized. Incomplete values are safe lower bounds.
    fn search(&mut self, text: &Text, rem: usize, prefix: usize, stack: &mut Vec<M::Act>) -> (usize, bool) {
        if self.best.map_or(true, |b| prefix > b) {
            self.record(prefix, stack, Vec::new());
        }
        if rem == 0 || text.len() < 2 {
            return (0, true);
        }
        self.nodes += 1;
        if self.nodes >= self.budget.max_nodes
            || (self.nodes % 512 == 0 && Instant::now() >= self.deadline)
        {
            self.exhausted = true;
        }
        if self.exhausted {
            return (0, false);
        }
        let (pattern, to_canon, _) = canonical(text);
        if let Some((value, _)) = self.memo.get(&(pattern.clone(), rem)) {
            let value = *value;
            if self.best.map_or(true, |b| prefix + value > b) {
                let tail = self.reconstruct(text, rem);
                self.record(prefix + value, stack, tail);
            }
            return (value, true);
        }
        let bound = bounds::pk(text, rem).0;
        if let Some(b) = self.best {
            // This subtree cannot beat the incumbent; its exact value is
            // not needed for the global optimum.
            if prefix + bound <= b {
                return (0, false);
            }
        }
        let mut node_best = 0;
        let mut best_act: Option<M::Act> = None;
        let mut best_child_complete = true;
        let mut all_complete = true;
        let mut capped = false;
        for (act, utility) in M::enumerate(text) {
            let child = M::apply(text, &act);
            stack.push(act.clone());
            let (value, complete) = self.search(&child, rem - 1, prefix + utility, stack);
            stack.pop();
            all_complete &= complete;
            if utility + value > node_best {
                node_best = utility + value;
                best_act = Some(act);
                best_child_complete = complete || value == 0;
            }
            if node_best == bound {
                // Nothing can exceed the packing bound, so the value is
                // already exact; remaining siblings are redundant.
                capped = true;
                break;
            }
            if self.exhausted {
                all_complete = false;
                break;
            }
        }
        let exact = capped || all_complete;
        if exact && best_child_complete {
            let canon_act = best_act.as_ref().map(|a| M::to_canon(a, &to_canon));
            self.memo.insert((pattern, rem), (node_best, canon_act));
            (node_best, true)
        } else {
            (node_best, false)
        }
    }
}
