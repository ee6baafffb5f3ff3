//! Packing-based upper bounds on merge utility.
//!
//! A *pair packing* is a set of text positions, pairwise at distance >= 2,
//! that all host the same two-symbol string. A *k-packing* is a union of k
//! pair packings with no position shared between them; `pk` computes the
//! maximum k-packing size, which upper-bounds the utility of any sequence of
//! k (full or partial) merges. `fk` is the looser top-k pair-frequency total.

use std::collections::HashMap;

use serde_json::json;

use crate::error::{Error, Result};
use crate::text::{MergeSequence, Pair, PartialSequence, Text};

/// A checkable witness for a k-packing: position groups in the original text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingCertificate {
    /// The packing budget: at most this many groups.
    pub k: usize,
    pub groups: Vec<Vec<usize>>,
}

impl PackingCertificate {
    pub fn size(&self) -> usize {
        self.groups.iter().map(|g| g.len()).sum()
    }

    /// Checks every structural invariant against the text the certificate
    /// refers to: group count within budget, positions sorted and pairwise at
    /// distance >= 2 inside each group, one common pair per group, and no
    /// position reused across groups.
    pub fn validate(&self, text: &Text) -> Result<()> {
        if self.groups.len() > self.k {
            return Err(Error::Format(format!(
                "certificate has {} groups but budget {}",
                self.groups.len(),
                self.k
            )));
        }
        let mut seen: HashMap<usize, usize> = HashMap::new();
        for (gi, group) in self.groups.iter().enumerate() {
            for w in group.windows(2) {
                if w[1] < w[0] + 2 {
                    return Err(Error::Format(format!(
                        "group {gi}: positions {} and {} overlap or are unsorted",
                        w[0], w[1]
                    )));
                }
            }
            let mut pair: Option<Pair> = None;
            for &p in group {
                let here = text.pair_at(p).ok_or_else(|| {
                    Error::Format(format!("group {gi}: position {p} out of bounds"))
                })?;
                if let Some(q) = pair {
                    if q != here {
                        return Err(Error::Format(format!(
                            "group {gi}: position {p} hosts a different pair"
                        )));
                    }
                } else {
                    pair = Some(here);
                }
                if let Some(other) = seen.insert(p, gi) {
                    return Err(Error::Format(format!(
                        "position {p} appears in groups {other} and {gi}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// JSON form: `{"k":k,"groups":[[..],..],"size":n}` (0-based positions).
    pub fn to_json(&self) -> serde_json::Value {
        json!({ "k": self.k, "groups": self.groups, "size": self.size() })
    }
}

/// Per-pair gain data: how much one or two pair packings of this pair can
/// cover. A third packing of the same pair never helps.
struct PairGain {
    first: usize,
    marginals: [usize; 2],
    groups: [Vec<usize>; 2],
}

/// Occurrence structure per pair. For `xy` with distinct symbols, all
/// occurrences are pairwise at distance >= 2, so one packing takes them all.
/// For `xx`, occurrences chain inside runs; alternating positions fill one
/// packing, the remainder a second.
fn pair_gains(text: &Text) -> Vec<PairGain> {
    let symbols = text.symbols();
    let mut occ: Vec<(Pair, Vec<usize>)> = Vec::new();
    let mut index: HashMap<Pair, usize> = HashMap::new();
    for i in 0..symbols.len().saturating_sub(1) {
        let pair = (symbols[i], symbols[i + 1]);
        let at = *index.entry(pair).or_insert_with(|| {
            occ.push((pair, Vec::new()));
            occ.len() - 1
        });
        occ[at].1.push(i);
    }
    occ.into_iter()
        .map(|((x, y), positions)| {
            let first = positions[0];
            if x != y {
                PairGain {
                    first,
                    marginals: [positions.len(), 0],
                    groups: [positions, Vec::new()],
                }
            } else {
                // Split each run's occurrence chain into alternating halves.
                let mut even = Vec::new();
                let mut odd = Vec::new();
                let mut take_even = true;
                let mut prev = usize::MAX;
                for &p in &positions {
                    if prev != usize::MAX && p != prev + 1 {
                        take_even = true; // new run
                    }
                    if take_even {
                        even.push(p);
                    } else {
                        odd.push(p);
                    }
                    take_even = !take_even;
                    prev = p;
                }
                let gain = PairGain {
                    first,
                    marginals: [even.len(), odd.len()],
                    groups: [even, odd],
                };
                // The gain curve must be concave for greedy allocation.
                assert!(gain.marginals[0] >= gain.marginals[1]);
                gain
            }
        })
        .collect()
}

/// Maximum k-packing size together with a certificate realizing it.
///
/// Distinct pairs occupy disjoint positions, so the problem decomposes per
/// pair; each pair's gain curve is concave, so allocating the k packing slots
/// to the largest marginal gains is exact (checked against
/// [`pk_bruteforce`] in tests).
pub fn pk(text: &Text, k: usize) -> (usize, PackingCertificate) {
    let gains = pair_gains(text);
    let mut candidates: Vec<(usize, usize, usize, usize)> = Vec::new();
    for (gi, g) in gains.iter().enumerate() {
        for copy in 0..2 {
            if g.marginals[copy] > 0 {
                candidates.push((g.marginals[copy], g.first, copy, gi));
            }
        }
    }
    candidates.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut total = 0;
    let mut groups = Vec::new();
    for &(gain, _, copy, gi) in candidates.iter().take(k) {
        total += gain;
        groups.push(gains[gi].groups[copy].clone());
    }
    let cert = PackingCertificate { k, groups };
    debug_assert!(cert.validate(text).is_ok());
    debug_assert_eq!(cert.size(), total);
    (total, cert)
}

/// Total occurrence count (overlap-counting) of the k most frequent pairs.
pub fn fk(text: &Text, k: usize) -> usize {
    let stats = text.pair_stats();
    let mut freqs: Vec<(usize, usize)> = stats
        .values()
        .map(|s| (s.freq, s.first_occurrence))
        .collect();
    freqs.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    freqs.iter().take(k).map(|f| f.0).sum()
}

/// Converts a partial merge sequence into a k-packing of size equal to its
/// utility: each replacement is charged to the original-text index of the
/// last symbol encoded by its left component. Replacements of one step all
/// land on occurrences of the same original two-symbol string, so each step
/// yields one pair packing.
pub fn packing_from_partial(text: &Text, seq: &PartialSequence) -> Result<PackingCertificate> {
    let mut cur = text.clone();
    // Original-text span (inclusive) encoded by each current symbol.
    let mut spans: Vec<(usize, usize)> = (0..text.len()).map(|i| (i, i)).collect();
    let mut groups = Vec::with_capacity(seq.len());
    for step in seq.steps() {
        let next = cur.apply_step(step)?;
        let mut group = Vec::with_capacity(step.positions.len());
        let mut new_spans = Vec::with_capacity(next.len());
        let mut taken = 0usize;
        let mut i = 0usize;
        while i < cur.len() {
            if taken < step.positions.len() && i == step.positions[taken] {
                group.push(spans[i].1);
                new_spans.push((spans[i].0, spans[i + 1].1));
                taken += 1;
                i += 2;
            } else {
                new_spans.push(spans[i]);
                i += 1;
            }
        }
        spans = new_spans;
        cur = next;
        groups.push(group);
    }
    let cert = PackingCertificate {
        k: seq.len(),
        groups,
    };
    cert.validate(text)?;
    Ok(cert)
}

/// [`packing_from_partial`] for a full-merge sequence.
pub fn packing_from_merges(text: &Text, seq: &MergeSequence) -> Result<PackingCertificate> {
    packing_from_partial(text, &seq.to_partial(text)?)
}

/// Exact maximum k-packing size by exhaustive search over position subsets
/// and group assignments. Only safe pruning (remaining positions cannot beat
/// the incumbent) is applied. Capped at 20 symbols and k <= 4.
pub fn pk_bruteforce(text: &Text, k: usize) -> Result<usize> {
    if text.len() > 20 {
        return Err(Error::SizeCapExceeded(format!(
            "pk_bruteforce caps at 20 symbols, got {}",
            text.len()
        )));
    }
    if k > 4 {
        return Err(Error::SizeCapExceeded(format!(
            "pk_bruteforce caps at k = 4, got {k}"
        )));
    }
    if text.len() < 2 || k == 0 {
        return Ok(0);
    }
    let pairs: Vec<Pair> = (0..text.len() - 1)
        .map(|i| text.pair_at(i).unwrap())
        .collect();
    let mut best = 0usize;
    let mut groups: Vec<(Pair, usize)> = Vec::with_capacity(k);
    assign(&pairs, k, 0, 0, &mut groups, &mut best);
    Ok(best)
}

fn assign(
    pairs: &[Pair],
    k: usize,
    i: usize,
    placed: usize,
    groups: &mut Vec<(Pair, usize)>,
    best: &mut usize,
) {
    if placed > *best {
        *best = placed;
    }
    if i == pairs.len() || placed + (pairs.len() - i) <= *best {
        return;
    }
    let pair = pairs[i];
    for g in 0..groups.len() {
        if groups[g].0 == pair && i >= groups[g].1 + 2 {
            let old = groups[g].1;
            groups[g].1 = i;
            assign(pairs, k, i + 1, placed + 1, groups, best);
            groups[g].1 = old;
        }
    }
    if groups.len() < k {
        groups.push((pair, i));
        assign(pairs, k, i + 1, placed + 1, groups, best);
        groups.pop();
    }
    assign(pairs, k, i + 1, placed, groups, best);
}
