//! One-shot partial encoder over the most frequent pairs.
//!
//! Rank the k most frequent pairs, pool all their occurrence positions,
//! sparsify the pooled list so no two surviving positions are adjacent, and
//! replace every survivor in a single pass (one partial step per pair). The
//! even/odd removal rule keeps at least half the pooled occurrences, so the
//! achieved utility is at least half of the top-k frequency total — and at
//! least half of what any partial encoding with budget k can reach.

use std::collections::HashMap;

use crate::text::{Pair, PartialSequence, Text};

/// The k most frequent pairs of a text plus the pooled, sorted list of all
/// their occurrence start positions.
#[derive(Clone, Debug)]
pub struct FrequentPairSet {
    /// Chosen pairs in rank order (frequency descending, ties by earliest
    /// first occurrence).
    pub pairs: Vec<Pair>,
    /// All occurrence positions of the chosen pairs, ascending.
    pub indices: Vec<usize>,
    /// Pooled occurrence count; equals `indices.len()`.
    pub total: usize,
}

/// Selects the k most frequent pairs (overlap-counting frequency). Fewer
/// than k distinct pairs means all of them are taken.
pub fn top_k_pairs(text: &Text, k: usize) -> FrequentPairSet {
    let stats = text.pair_stats();
    let mut ranked: Vec<(Pair, usize, usize)> = stats
        .iter()
        .map(|(&p, s)| (p, s.freq, s.first_occurrence))
        .collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.2.cmp(&b.2)));
    ranked.truncate(k);
    let pairs: Vec<Pair> = ranked.iter().map(|r| r.0).collect();
    let chosen: std::collections::HashSet<Pair> = pairs.iter().copied().collect();
    let indices: Vec<usize> = (0..text.len().saturating_sub(1))
        .filter(|&i| chosen.contains(&text.pair_at(i).unwrap()))
        .collect();
    let total = indices.len();
    FrequentPairSet {
        pairs,
        indices,
        total,
    }
}

/// Removes even-ranked entries that are adjacent to a neighbor, leaving no
/// two surviving positions at distance 1.
///
/// Ranks and neighbors refer to the *original* list: entry `i[2l-1]`
/// (1-based) is dropped exactly when it sits next to `i[2l-2]` or `i[2l]`.
/// All odd-ranked entries survive, so at least half the list remains; and a
/// surviving even-ranked entry is non-adjacent to both neighbors, so the
/// output has no adjacent pair.
pub fn sparsify(indices: &[usize]) -> Vec<usize> {
    debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
    indices
        .iter()
        .enumerate()
        .filter(|&(rank, &idx)| {
            if rank % 2 == 0 {
                return true; // odd 1-based rank
            }
            let prev_adjacent = idx == indices[rank - 1] + 1;
            let next_adjacent = rank + 1 < indices.len() && idx == indices[rank + 1] - 1;
            !(prev_adjacent || next_adjacent)
        })
        .map(|(_, &idx)| idx)
        .collect()
}

/// Maximum-size subset with no two entries at distance 1, via a keep-first
/// scan. Never smaller than what [`sparsify`] retains.
pub fn greedy_sparsify(indices: &[usize]) -> Vec<usize> {
    debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
    let mut kept: Vec<usize> = Vec::with_capacity(indices.len());
    for &idx in indices {
        if kept.last().map_or(true, |&last| idx != last + 1) {
            kept.push(idx);
        }
    }
    kept
}

/// Runs the full pipeline: top-k pairs, pooled-index sparsification, then
/// one partial step per pair replacing its surviving occurrences. Returns
/// the sequence together with its utility (the survivor count).
pub fn evenodd(text: &Text, k: usize) -> (PartialSequence, usize) {
    let fps = top_k_pairs(text, k);
    let survivors = sparsify(&fps.indices);
    let mut by_pair: HashMap<Pair, Vec<usize>> = HashMap::new();
    for &idx in &survivors {
        by_pair
            .entry(text.pair_at(idx).unwrap())
            .or_default()
            .push(idx);
    }
    let groups: Vec<(Pair, Vec<usize>)> = fps
        .pairs
        .iter()
        .filter_map(|p| by_pair.remove(p).map(|positions| (*p, positions)))
        .collect();
    let seq = PartialSequence::from_base_positions(text, &groups)
        .expect("sparsified positions are pairwise non-adjacent and host their pairs");
    (seq, survivors.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds;
    use crate::text::{decode, Symbol};
    use proptest::prelude::*;

    /// Cyclic four-letter text with a fresh separator per block.
    fn ring_text() -> Text {
        Text::from_codepoints("abcd0bc1bcda2cd3cdab4da5dabc6ab")
    }

    fn label_pair(t: &Text, p: Pair) -> String {
        format!("{}{}", t.alphabet().label(p.0), t.alphabet().label(p.1))
    }

    #[test]
    fn ring_top_pairs_pool_sixteen_occurrences() {
        let t = ring_text();
        let fps = top_k_pairs(&t, 4);
        let labels: Vec<String> = fps.pairs.iter().map(|&p| label_pair(&t, p)).collect();
        assert_eq!(labels, ["ab", "bc", "cd", "da"]);
        assert_eq!(fps.total, 16);
        assert_eq!(
            fps.indices,
            [0, 1, 2, 5, 8, 9, 10, 13, 16, 17, 18, 21, 24, 25, 26, 29]
        );
    }

    #[test]
    fn ring_sparsify_keeps_twelve() {
        let t = ring_text();
        let fps = top_k_pairs(&t, 4);
        assert_eq!(
            sparsify(&fps.indices),
            [0, 2, 5, 8, 10, 13, 16, 18, 21, 24, 26, 29]
        );
    }

    #[test]
    fn ring_utility_is_twelve() {
        let t = ring_text();
        let (seq, utility) = evenodd(&t, 4);
        assert_eq!(utility, 12);
        assert_eq!(seq.utility(&t).unwrap(), 12);
        assert_eq!(seq.len(), 4);
        let encoded = seq.apply(&t).unwrap();
        assert_eq!(encoded.len(), t.len() - 12);
        let restored = decode(&encoded, &seq.rules());
        assert_eq!(restored.symbols(), t.symbols());
    }

    #[test]
    fn sparsify_examples() {
        assert_eq!(sparsify(&[1, 2, 3, 4, 5]), [1, 3, 5]);
        assert_eq!(sparsify(&[0, 2, 4, 9]), [0, 2, 4, 9]);
        assert_eq!(sparsify(&[]), Vec::<usize>::new());
        assert_eq!(sparsify(&[7]), [7]);
    }

    #[test]
    fn greedy_sparsify_examples() {
        assert_eq!(greedy_sparsify(&[1, 2, 3, 4, 5]), [1, 3, 5]);
        assert_eq!(greedy_sparsify(&[1, 2]), [1]);
        assert_eq!(greedy_sparsify(&[0, 2, 4]), [0, 2, 4]);
    }

    #[test]
    fn run_of_identical_symbols() {
        let t = Text::from_codepoints("aaaa");
        let fps = top_k_pairs(&t, 1);
        assert_eq!(fps.pairs, [(Symbol(0), Symbol(0))]);
        assert_eq!(fps.total, 3);
        let (seq, utility) = evenodd(&t, 1);
        assert_eq!(utility, 2);
        assert_eq!(seq.apply(&t).unwrap().len(), 2);
    }

    #[test]
    fn zero_budget_is_empty() {
        let t = ring_text();
        let fps = top_k_pairs(&t, 0);
        assert!(fps.pairs.is_empty());
        assert_eq!(fps.total, 0);
        let (seq, utility) = evenodd(&t, 0);
        assert_eq!(seq.len(), 0);
        assert_eq!(utility, 0);
    }

    /// Largest non-adjacent subset by exhaustive enumeration.
    fn best_subset_size(indices: &[usize]) -> usize {
        let n = indices.len();
        let mut best = 0;
        for mask in 0u32..(1 << n) {
            let chosen: Vec<usize> = (0..n)
                .filter(|&i| mask & (1 << i) != 0)
                .map(|i| indices[i])
                .collect();
            if chosen.windows(2).all(|w| w[1] > w[0] + 1) {
                best = best.max(chosen.len());
            }
        }
        best
    }

    proptest! {
        #[test]
        fn greedy_sparsify_is_maximum(
            gaps in proptest::collection::vec(1usize..3, 0..10),
        ) {
            let mut indices = Vec::new();
            let mut at = 0usize;
            for g in gaps {
                at += g;
                indices.push(at);
            }
            let greedy = greedy_sparsify(&indices);
            prop_assert!(greedy.windows(2).all(|w| w[1] > w[0] + 1));
            prop_assert_eq!(greedy.len(), best_subset_size(&indices));
            prop_assert!(greedy.len() >= sparsify(&indices).len());
        }

        #[test]
        fn utility_covers_half_the_pool(
            symbols in proptest::collection::vec(0u32..4, 0..24),
            k in 0usize..5,
        ) {
            let mut alphabet = crate::text::Alphabet::new();
            for c in ["a", "b", "c", "d"] {
                alphabet.push_input(c);
            }
            let t = Text::new(alphabet, symbols.into_iter().map(Symbol).collect()).unwrap();
            let fps = top_k_pairs(&t, k);
            let (seq, utility) = evenodd(&t, k);
            prop_assert!(2 * utility >= fps.total);
            prop_assert!(utility >= bounds::fk(&t, k).div_ceil(2));
            // Only pairs of original input symbols are ever merged.
            for rule in seq.rules() {
                prop_assert!(t.alphabet().is_input(rule.left));
                prop_assert!(t.alphabet().is_input(rule.right));
            }
            let encoded = seq.apply(&t).unwrap();
            prop_assert_eq!(encoded.len(), t.len() - utility);
            let restored = decode(&encoded, &seq.rules());
            prop_assert_eq!(restored.symbols(), t.symbols());
        }
    }
}
