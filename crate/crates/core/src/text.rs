//! Symbols, alphabets, and immutable texts, plus the merge rules that rewrite
//! them.
//!
//! A text is a sequence of symbol ids over an alphabet. Applying a merge rule
//! `xy -> z` replaces occurrences of the pair `xy` with the fresh symbol `z`
//! and never mutates in place: every operation returns a new [`Text`].

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// A dense integer symbol id. Ids index into an [`Alphabet`].
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub u32);

impl Symbol {
    pub fn id(self) -> u32 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

/// An ordered pair of adjacent symbols.
pub type Pair = (Symbol, Symbol);

/// How a symbol came to exist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymbolOrigin {
    /// Present in the ingested input.
    Input,
    /// Created by merging the recorded pair.
    Merged { left: Symbol, right: Symbol },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphabetEntry {
    pub label: String,
    pub origin: SymbolOrigin,
}

/// A symbol table mapping dense ids to labels and origins. Labels are unique.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Alphabet {
    entries: Vec<AlphabetEntry>,
}

impl Alphabet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Appends an input-origin symbol. Panics if the label is already taken;
    /// ingestion layers are responsible for generating distinct labels.
    pub fn push_input(&mut self, label: impl Into<String>) -> Symbol {
        let label = label.into();
        assert!(
            !self.entries.iter().any(|e| e.label == label),
            "duplicate input label {label:?}"
        );
        self.entries.push(AlphabetEntry {
            label,
            origin: SymbolOrigin::Input,
        });
        Symbol(self.entries.len() as u32 - 1)
    }

    /// Appends a merge-created symbol with a synthesized unique label.
    pub fn push_merged(&mut self, left: Symbol, right: Symbol) -> Symbol {
        let base = format!("<{}{}>", self.label(left), self.label(right));
        let mut label = base.clone();
        let mut n = 1;
        while self.entries.iter().any(|e| e.label == label) {
            n += 1;
            label = format!("{base}~{n}");
        }
        self.entries.push(AlphabetEntry {
            label,
            origin: SymbolOrigin::Merged { left, right },
        });
        Symbol(self.entries.len() as u32 - 1)
    }

    pub fn contains(&self, sym: Symbol) -> bool {
        sym.index() < self.entries.len()
    }

    pub fn label(&self, sym: Symbol) -> &str {
        &self.entries[sym.index()].label
    }

    pub fn origin(&self, sym: Symbol) -> &SymbolOrigin {
        &self.entries[sym.index()].origin
    }

    pub fn is_input(&self, sym: Symbol) -> bool {
        matches!(self.origin(sym), SymbolOrigin::Input)
    }

    pub fn entries(&self) -> &[AlphabetEntry] {
        &self.entries
    }

    pub fn symbol_by_label(&self, label: &str) -> Option<Symbol> {
        self.entries
            .iter()
            .position(|e| e.label == label)
            .map(|i| Symbol(i as u32))
    }

    fn truncate(&mut self, len: usize) {
        self.entries.truncate(len);
    }
}

/// A single merge rule `left right -> out`. `out` must be fresh wherever the
/// rule is applied.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct MergeRule {
    pub left: Symbol,
    pub right: Symbol,
    pub out: Symbol,
}

impl MergeRule {
    pub fn pair(&self) -> Pair {
        (self.left, self.right)
    }
}

/// An ordered list of merge rules applied as full merges (every
/// left-to-right non-overlapping occurrence is replaced).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MergeSequence {
    rules: Vec<MergeRule>,
}

impl MergeSequence {
    pub fn new(rules: Vec<MergeRule>) -> Self {
        Self { rules }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a sequence over `base` from bare pairs, allocating output ids
    /// densely after the base alphabet. This is the usual way to construct a
    /// sequence by hand: outputs of earlier rules may appear in later pairs.
    pub fn from_pairs(base: &Text, pairs: &[Pair]) -> Self {
        let first = base.alphabet.len() as u32;
        let rules = pairs
            .iter()
            .enumerate()
            .map(|(i, &(left, right))| MergeRule {
                left,
                right,
                out: Symbol(first + i as u32),
            })
            .collect();
        Self { rules }
    }

    pub fn rules(&self) -> &[MergeRule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn push(&mut self, rule: MergeRule) {
        self.rules.push(rule);
    }

    /// Applies every rule in order as a full merge.
    pub fn apply(&self, base: &Text) -> Result<Text> {
        let mut cur = base.clone();
        for rule in &self.rules {
            cur = cur.apply_rule(rule)?;
        }
        Ok(cur)
    }

    /// Number of symbols saved: `|base| - |apply(base)|`.
    pub fn utility(&self, base: &Text) -> Result<usize> {
        Ok(base.len() - self.apply(base)?.len())
    }

    /// The equivalent partial sequence: each rule becomes one step listing all
    /// left-to-right non-overlapping occurrence positions at its turn.
    pub fn to_partial(&self, base: &Text) -> Result<PartialSequence> {
        let mut cur = base.clone();
        let mut steps = Vec::with_capacity(self.rules.len());
        for rule in &self.rules {
            let positions = cur.greedy_positions(rule.pair());
            let step = PartialStep {
                rule: *rule,
                positions,
            };
            cur = cur.apply_step(&step)?;
            steps.push(step);
        }
        Ok(PartialSequence { steps })
    }
}

/// One partial-merge step: a rule plus the sorted occurrence positions (in the
/// text the step is applied to) that it actually replaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialStep {
    pub rule: MergeRule,
    pub positions: Vec<usize>,
}

/// An ordered list of partial steps.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PartialSequence {
    steps: Vec<PartialStep>,
}

impl PartialSequence {
    pub fn new(steps: Vec<PartialStep>) -> Self {
        Self { steps }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn steps(&self) -> &[PartialStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn push(&mut self, step: PartialStep) {
        self.steps.push(step);
    }

    pub fn rules(&self) -> Vec<MergeRule> {
        self.steps.iter().map(|s| s.rule).collect()
    }

    /// Builds a partial sequence from per-pair position groups given in
    /// *base-text* coordinates. All groups together must be replaceable at
    /// once: positions are pairwise at distance >= 2 across the whole set.
    /// Output ids are allocated densely after the base alphabet, one rule per
    /// group, in the given group order.
    pub fn from_base_positions(base: &Text, groups: &[(Pair, Vec<usize>)]) -> Result<Self> {
        let mut all: Vec<usize> = Vec::new();
        for (pair, positions) in groups {
            for &p in positions {
                match base.pair_at(p) {
                    Some(q) if q == *pair => {}
                    _ => {
                        return Err(Error::InvalidStep(format!(
                            "base position {p} does not host the pair"
                        )))
                    }
                }
            }
            all.extend_from_slice(positions);
        }
        all.sort_unstable();
        for w in all.windows(2) {
            if w[1] - w[0] < 2 {
                return Err(Error::InvalidStep(format!(
                    "base positions {} and {} overlap",
                    w[0], w[1]
                )));
            }
        }
        // Convert base coordinates to per-step current coordinates: every
        // replacement performed before a position shifts it left by one.
        let mut replaced: Vec<usize> = Vec::new();
        let first = base.alphabet.len() as u32;
        let mut steps = Vec::with_capacity(groups.len());
        for (i, (pair, positions)) in groups.iter().enumerate() {
            let mut sorted = positions.clone();
            sorted.sort_unstable();
            let shifted = sorted
                .iter()
                .map(|&p| p - replaced.iter().filter(|&&r| r < p).count())
                .collect();
            steps.push(PartialStep {
                rule: MergeRule {
                    left: pair.0,
                    right: pair.1,
                    out: Symbol(first + i as u32),
                },
                positions: shifted,
            });
            replaced.extend_from_slice(&sorted);
        }
        Ok(Self { steps })
    }

    pub fn apply(&self, base: &Text) -> Result<Text> {
        let mut cur = base.clone();
        for step in &self.steps {
            cur = cur.apply_step(step)?;
        }
        Ok(cur)
    }

    pub fn utility(&self, base: &Text) -> Result<usize> {
        Ok(base.len() - self.apply(base)?.len())
    }
}

/// An immutable symbol sequence together with its alphabet.
#[derive(Clone, PartialEq, Eq)]
pub struct Text {
    symbols: Vec<Symbol>,
    alphabet: Alphabet,
}

impl fmt::Debug for Text {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Text({:?})", self.render())
    }
}

impl Text {
    pub fn new(alphabet: Alphabet, symbols: Vec<Symbol>) -> Result<Self> {
        if let Some(bad) = symbols.iter().find(|s| !alphabet.contains(**s)) {
            return Err(Error::SymbolOutOfRange {
                id: bad.id(),
                alphabet_len: alphabet.len(),
            });
        }
        Ok(Self { symbols, alphabet })
    }

    /// Byte-level ingestion: the alphabet is all 256 byte values, labelled in
    /// hex, so any byte stream round-trips.
    pub fn from_bytes(data: &[u8]) -> Self {
        let mut alphabet = Alphabet::new();
        for b in 0..=255u32 {
            alphabet.push_input(format!("0x{b:02x}"));
        }
        let symbols = data.iter().map(|&b| Symbol(b as u32)).collect();
        Self { symbols, alphabet }
    }

    /// Codepoint-level ingestion: the alphabet is the distinct codepoints of
    /// the input, in order of first appearance, labelled by the character.
    pub fn from_codepoints(s: &str) -> Self {
        let mut alphabet = Alphabet::new();
        let mut ids: HashMap<char, Symbol> = HashMap::new();
        let mut symbols = Vec::new();
        for ch in s.chars() {
            let sym = *ids
                .entry(ch)
                .or_insert_with(|| alphabet.push_input(ch.to_string()));
            symbols.push(sym);
        }
        Self { symbols, alphabet }
    }

    /// Codepoint ingestion against a fixed alphabet (used when encoding new
    /// input with a trained model). Unknown characters are an error.
    pub fn from_codepoints_in(alphabet: &Alphabet, s: &str) -> Result<Self> {
        let mut symbols = Vec::with_capacity(s.len());
        for ch in s.chars() {
            let sym = alphabet
                .symbol_by_label(&ch.to_string())
                .ok_or_else(|| Error::Format(format!("character {ch:?} not in model alphabet")))?;
            symbols.push(sym);
        }
        Ok(Self {
            symbols,
            alphabet: alphabet.clone(),
        })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn pair_at(&self, i: usize) -> Option<Pair> {
        if i + 1 < self.symbols.len() {
            Some((self.symbols[i], self.symbols[i + 1]))
        } else {
            None
        }
    }

    /// Occurrence count of `pair`, counting overlapping occurrences. In
    /// `aaa` the pair `aa` occurs twice.
    pub fn freq(&self, pair: Pair) -> usize {
        self.pair_stats().get(&pair).map_or(0, |s| s.freq)
    }

    /// Number of occurrences a single full merge of `pair` would replace:
    /// overlaps are resolved left to right, so in `aaa` only one `aa` is
    /// replaceable.
    pub fn replaceable_count(&self, pair: Pair) -> usize {
        self.pair_stats().get(&pair).map_or(0, |s| s.replaceable)
    }

    /// Sorted start positions of every occurrence of `pair`.
    pub fn occurrences(&self, pair: Pair) -> Vec<usize> {
        (0..self.symbols.len().saturating_sub(1))
            .filter(|&i| (self.symbols[i], self.symbols[i + 1]) == pair)
            .collect()
    }

    /// The positions a full merge of `pair` replaces (left-to-right greedy).
    pub fn greedy_positions(&self, pair: Pair) -> Vec<usize> {
        let mut out = Vec::new();
        let mut i = 0;
        while i + 1 < self.symbols.len() {
            if (self.symbols[i], self.symbols[i + 1]) == pair {
                out.push(i);
                i += 2;
            } else {
                i += 1;
            }
        }
        out
    }

    /// One-pass statistics for every pair present in the text.
    pub fn pair_stats(&self) -> HashMap<Pair, PairStats> {
        let mut map: HashMap<Pair, PairStats> = HashMap::new();
        for i in 0..self.symbols.len().saturating_sub(1) {
            let pair = (self.symbols[i], self.symbols[i + 1]);
            let entry = map.entry(pair).or_insert(PairStats {
                freq: 0,
                replaceable: 0,
                first_occurrence: i,
                last_taken: usize::MAX,
            });
            entry.freq += 1;
            // Greedy left-to-right: skip an occurrence that overlaps the
            // previously taken one (only possible for xx pairs).
            if entry.last_taken == usize::MAX || i > entry.last_taken + 1 {
                entry.replaceable += 1;
                entry.last_taken = i;
            }
        }
        map
    }

    fn admit_output(&self, rule: &MergeRule) -> Result<Alphabet> {
        let mut alphabet = self.alphabet.clone();
        let out = rule.out;
        if out.index() == alphabet.len() {
            let created = alphabet.push_merged(rule.left, rule.right);
            debug_assert_eq!(created, out);
            Ok(alphabet)
        } else if out.index() < alphabet.len() {
            // Replaying a rule whose output entry already exists: the entry
            // must record this merge and the symbol must not occur.
            if self.symbols.contains(&out) {
                return Err(Error::FreshnessViolation(out));
            }
            match alphabet.origin(out) {
                SymbolOrigin::Merged { left, right }
                    if (*left, *right) == (rule.left, rule.right) =>
                {
                    Ok(alphabet)
                }
                _ => Err(Error::RuleMismatch { out }),
            }
        } else {
            Err(Error::SymbolOutOfRange {
                id: out.id(),
                alphabet_len: alphabet.len(),
            })
        }
    }

    /// Applies one full merge: every left-to-right non-overlapping occurrence
    /// of the rule's pair becomes the output symbol. Zero occurrences is
    /// permitted and leaves the symbols unchanged (the alphabet still grows).
    pub fn apply_rule(&self, rule: &MergeRule) -> Result<Text> {
        let alphabet = self.admit_output(rule)?;
        let mut symbols = Vec::with_capacity(self.symbols.len());
        let mut i = 0;
        while i < self.symbols.len() {
            if i + 1 < self.symbols.len()
                && (self.symbols[i], self.symbols[i + 1]) == (rule.left, rule.right)
            {
                symbols.push(rule.out);
                i += 2;
            } else {
                symbols.push(self.symbols[i]);
                i += 1;
            }
        }
        Ok(Text { symbols, alphabet })
    }

    /// Applies one partial step: only the listed positions are replaced.
    /// Positions must be sorted, pairwise at distance >= 2, and host the pair.
    pub fn apply_step(&self, step: &PartialStep) -> Result<Text> {
        for w in step.positions.windows(2) {
            if w[1] <= w[0] + 1 {
                return Err(Error::InvalidStep(format!(
                    "positions {} and {} overlap or are unsorted",
                    w[0], w[1]
                )));
            }
        }
        for &p in &step.positions {
            match self.pair_at(p) {
                Some(pair) if pair == step.rule.pair() => {}
                _ => {
                    return Err(Error::InvalidStep(format!(
                        "position {p} does not host the step's pair"
                    )))
                }
            }
        }
        let alphabet = self.admit_output(&step.rule)?;
        let mut symbols = Vec::with_capacity(self.symbols.len());
        let mut next = 0usize;
        let mut i = 0;
        while i < self.symbols.len() {
            if next < step.positions.len() && i == step.positions[next] {
                symbols.push(step.rule.out);
                next += 1;
                i += 2;
            } else {
                symbols.push(self.symbols[i]);
                i += 1;
            }
        }
        Ok(Text { symbols, alphabet })
    }

    /// Renders the text using alphabet labels; single-character labels are
    /// concatenated, otherwise labels are space-separated.
    pub fn render(&self) -> String {
        let all_single = self
            .symbols
            .iter()
            .all(|&s| self.alphabet.label(s).chars().count() == 1);
        let sep = if all_single { "" } else { " " };
        self.symbols
            .iter()
            .map(|&s| self.alphabet.label(s))
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Extracts the original bytes of a byte-level text. All symbols must be
    /// input-origin (id < 256 in byte mode).
    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        self.symbols
            .iter()
            .map(|&s| {
                if self.alphabet.is_input(s) && s.id() < 256 {
                    Ok(s.id() as u8)
                } else {
                    Err(Error::Format(format!(
                        "symbol {s:?} is not an input byte symbol"
                    )))
                }
            })
            .collect()
    }
}

/// Per-pair occurrence statistics from a single scan.
#[derive(Clone, Copy, Debug)]
pub struct PairStats {
    /// Occurrences, overlap-counting.
    pub freq: usize,
    /// Occurrences one full merge replaces (left-to-right non-overlapping).
    pub replaceable: usize,
    /// Index of the leftmost occurrence.
    pub first_occurrence: usize,
    last_taken: usize,
}

/// Inverts a sequence of merges: expands each rule's output symbol back into
/// its pair, in reverse rule order, and drops the rules' alphabet entries.
/// `decode(&seq.apply(s)?, seq.rules()) == s` for any applicable sequence.
pub fn decode(text: &Text, rules: &[MergeRule]) -> Text {
    let mut symbols = text.symbols.clone();
    for rule in rules.iter().rev() {
        let mut expanded = Vec::with_capacity(symbols.len());
        for &s in &symbols {
            if s == rule.out {
                expanded.push(rule.left);
                expanded.push(rule.right);
            } else {
                expanded.push(s);
            }
        }
        symbols = expanded;
    }
    let mut alphabet = text.alphabet.clone();
    // Rule outputs are allocated densely at the tail of the alphabet; trim
    // them so decoding exactly restores the pre-merge text.
    if !rules.is_empty() {
        let min_out = rules.iter().map(|r| r.out.index()).min().unwrap();
        let tail: std::collections::BTreeSet<usize> =
            rules.iter().map(|r| r.out.index()).collect();
        let dense_tail = tail.len() == alphabet.len() - min_out
            && *tail.iter().next_back().unwrap() == alphabet.len() - 1;
        if dense_tail {
            alphabet.truncate(min_out);
        }
    }
    debug_assert!(symbols.iter().all(|s| alphabet.contains(*s)));
    Text { symbols, alphabet }
}
