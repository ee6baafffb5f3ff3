//! Greedy pair-merge training.
//!
//! Each round merges the pair whose full merge replaces the most occurrences
//! (its utility), breaking ties toward the pair whose first occurrence in the
//! current text is leftmost. That tie-break is total: a text position hosts
//! exactly one pair, so two distinct pairs cannot share a first occurrence.

use serde_json::json;

use crate::error::Result;
use crate::text::{MergeRule, MergeSequence, Pair, Symbol, Text};

/// One training round: the merged pair, how many occurrences it replaced,
/// and the text length afterwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub pair: Pair,
    pub utility: usize,
    pub len_after: usize,
}

/// The decision log of a training run.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
}

impl Trace {
    pub fn total_utility(&self) -> usize {
        self.steps.iter().map(|s| s.utility).sum()
    }

    /// JSON form: `{"steps":[{"pair":[l,r],"utility":u,"len":n}..],"total":U}`.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "steps": self
                .steps
                .iter()
                .map(|s| json!({
                    "pair": [s.pair.0.id(), s.pair.1.id()],
                    "utility": s.utility,
                    "len": s.len_after,
                }))
                .collect::<Vec<_>>(),
            "total": self.total_utility(),
        })
    }
}

/// Result of a training run. `truncated` is set when the text ran out of
/// pairs before `k` merges were performed.
#[derive(Clone, Debug)]
pub struct TrainOutcome {
    pub seq: MergeSequence,
    pub trace: Trace,
    pub truncated: bool,
    pub encoded: Text,
}

impl TrainOutcome {
    pub fn utility(&self) -> usize {
        self.trace.total_utility()
    }
}

/// The pair the greedy trainer would merge next, if any: maximal replaceable
/// count, ties broken by leftmost first occurrence in the current text.
pub fn choose_pair(text: &Text) -> Option<Pair> {
    let stats = text.pair_stats();
    stats
        .iter()
        .max_by(|a, b| {
            (a.1.replaceable, std::cmp::Reverse(a.1.first_occurrence))
                .cmp(&(b.1.replaceable, std::cmp::Reverse(b.1.first_occurrence)))
        })
        .map(|(pair, _)| *pair)
}

/// Trains up to `k` greedy merges on `text`.
pub fn train(text: &Text, k: usize) -> Result<TrainOutcome> {
    let mut cur = text.clone();
    let mut seq = MergeSequence::empty();
    let mut trace = Trace::default();
    let mut truncated = false;
    for _ in 0..k {
        let Some(pair) = choose_pair(&cur) else {
            truncated = true;
            break;
        };
        let utility = cur.replaceable_count(pair);
        let rule = MergeRule {
            left: pair.0,
            right: pair.1,
            out: Symbol(cur.alphabet().len() as u32),
        };
        cur = cur.apply_rule(&rule)?;
        seq.push(rule);
        trace.steps.push(TraceStep {
            pair,
            utility,
            len_after: cur.len(),
        });
    }
    Ok(TrainOutcome {
        seq,
        trace,
        truncated,
        encoded: cur,
    })
}

/// Total utility of a `k`-round training run.
pub fn utility(text: &Text, k: usize) -> usize {
    train(text, k).expect("greedy training cannot fail").utility()
}
