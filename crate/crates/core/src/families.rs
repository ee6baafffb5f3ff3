//! Generators for three adversarial instance families.
//!
//! Each generator returns the instance together with a reference merge
//! sequence and the values both the greedy trainer and the reference are
//! expected to reach, so harnesses can replay and assert them:
//!
//! * [`family_ratio`] — greedy utility 5t+1 against a reference worth 8t,
//!   driving the utility ratio down toward 0.625.
//! * [`family_length`] — greedy compression stalls at t+2 symbols while the
//!   reference collapses the text to a single symbol.
//! * [`family_inputonly`] — greedy (and optimal) utility 2n−1, while any
//!   strategy restricted to pairs of input symbols is capped at n+k−1.

use crate::error::{Error, Result};
use crate::text::{Alphabet, MergeRule, MergeSequence, PartialSequence, Symbol, Text};

/// Target value for an algorithm on a family instance: either the total
/// number of replaced pairs or the length of the encoded text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expected {
    Utility(usize),
    CompressedLen(usize),
}

/// Reference strategy shipped with an instance.
#[derive(Clone, Debug)]
pub enum Reference {
    Full(MergeSequence),
    Partial(PartialSequence),
}

impl Reference {
    pub fn utility(&self, base: &Text) -> Result<usize> {
        match self {
            Reference::Full(seq) => seq.utility(base),
            Reference::Partial(seq) => seq.utility(base),
        }
    }

    pub fn apply(&self, base: &Text) -> Result<Text> {
        match self {
            Reference::Full(seq) => seq.apply(base),
            Reference::Partial(seq) => seq.apply(base),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FamilyInstance {
    pub text: Text,
    pub k: usize,
    /// What greedy training is expected to achieve.
    pub expected_bpe: Expected,
    pub reference: Reference,
    /// What replaying [`FamilyInstance::reference`] achieves.
    pub expected_reference: Expected,
    /// Ceiling for strategies that only merge pairs of input symbols.
    pub input_only_cap: Option<usize>,
}

/// t copies of `abaacaaba|aca#` (fresh separator per copy) plus a final
/// `aa`. With k = 4 the trailing `aa` makes the double-letter strictly the
/// most replaceable pair, after which greedy training collects 5t+1 while
/// the shipped reference (`ac`, then its output with `a`, then `ab`, then
/// that output with `a`) collects 8t.
pub fn family_ratio(t: usize) -> Result<FamilyInstance> {
    if t < 1 {
        return Err(Error::InvalidParam(format!(
            "family_ratio needs t >= 1, got {t}"
        )));
    }
    let mut alphabet = Alphabet::new();
    let a = alphabet.push_input("a");
    let b = alphabet.push_input("b");
    let c = alphabet.push_input("c");
    let hash = alphabet.push_input("#");
    let mut symbols = Vec::with_capacity(14 * t + 2);
    for copy in 0..t {
        let sep = alphabet.push_input(format!("|{}", copy + 1));
        symbols.extend([a, b, a, a, c, a, a, b, a, sep, a, c, a, hash]);
    }
    symbols.extend([a, a]);
    let base_len = alphabet.len() as u32;
    let text = Text::new(alphabet, symbols).unwrap();
    let x = Symbol(base_len);
    let z = Symbol(base_len + 2);
    let reference = MergeSequence::from_pairs(&text, &[(a, c), (x, a), (a, b), (z, a)]);
    Ok(FamilyInstance {
        text,
        k: 4,
        expected_bpe: Expected::Utility(5 * t + 1),
        reference: Reference::Full(reference),
        expected_reference: Expected::Utility(8 * t),
        input_only_cap: None,
    })
}

/// `x_1 aa y_1 … x_t aa y_t | x_1 a … | x_t a | a y_1 … | a y_t` with
/// k = 8t−1 merges. Greedy training spends its first merge on `aa`, leaving
/// a text it can only shrink to t+2 symbols; the reference merges every
/// `x_i a` and `a y_i` first and then chains the remains down to one symbol.
pub fn family_length(t: usize) -> Result<FamilyInstance> {
    if t <= 2 {
        return Err(Error::InvalidParam(format!(
            "family_length needs t > 2, got {t}"
        )));
    }
    let mut alphabet = Alphabet::new();
    let a = alphabet.push_input("a");
    let xs: Vec<Symbol> = (1..=t)
        .map(|i| alphabet.push_input(format!("x{i}")))
        .collect();
    let ys: Vec<Symbol> = (1..=t)
        .map(|i| alphabet.push_input(format!("y{i}")))
        .collect();
    let mut sep_count = 0usize;
    let mut sep = |alphabet: &mut Alphabet| {
        sep_count += 1;
        alphabet.push_input(format!("|{sep_count}"))
    };
    let mut symbols = Vec::with_capacity(10 * t);
    for i in 0..t {
        symbols.extend([xs[i], a, a, ys[i]]);
    }
    for &x in &xs {
        let s = sep(&mut alphabet);
        symbols.extend([s, x, a]);
    }
    for &y in &ys {
        let s = sep(&mut alphabet);
        symbols.extend([s, a, y]);
    }
    let text = Text::new(alphabet, symbols).unwrap();

    let mut pairs = Vec::with_capacity(8 * t - 1);
    let mut cur = text.clone();
    for &x in &xs {
        pairs.push((x, a));
    }
    for &y in &ys {
        pairs.push((a, y));
    }
    for pair in &pairs {
        let rule = MergeRule {
            left: pair.0,
            right: pair.1,
            out: Symbol(cur.alphabet().len() as u32),
        };
        cur = cur.apply_rule(&rule).unwrap();
    }
    while cur.len() > 1 {
        let pair = cur.pair_at(0).unwrap();
        let rule = MergeRule {
            left: pair.0,
            right: pair.1,
            out: Symbol(cur.alphabet().len() as u32),
        };
        cur = cur.apply_rule(&rule).unwrap();
        pairs.push(pair);
    }
    debug_assert_eq!(pairs.len(), 8 * t - 1);
    let reference = MergeSequence::from_pairs(&text, &pairs);
    Ok(FamilyInstance {
        text,
        k: 8 * t - 1,
        expected_bpe: Expected::CompressedLen(t + 2),
        reference: Reference::Full(reference),
        expected_reference: Expected::CompressedLen(1),
        input_only_cap: None,
    })
}

/// 2n copies of `a` followed by 2(k−1) pairwise distinct symbols, with
/// k = log2(n)+1. Repeatedly merging the doubled run symbol is optimal and
/// collects 2n−1, but only the first of those merges touches a pair of
/// *input* symbols — strategies restricted to such pairs cannot beat
/// n+k−1.
pub fn family_inputonly(n: usize) -> Result<FamilyInstance> {
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::InvalidParam(format!(
            "family_inputonly needs a power of two >= 2, got {n}"
        )));
    }
    let k = n.trailing_zeros() as usize + 1;
    let mut alphabet = Alphabet::new();
    let a = alphabet.push_input("a");
    let tail: Vec<Symbol> = (1..=2 * (k - 1))
        .map(|i| alphabet.push_input(format!("d{i}")))
        .collect();
    let base_len = alphabet.len() as u32;
    let mut symbols = vec![a; 2 * n];
    symbols.extend(tail);
    let text = Text::new(alphabet, symbols).unwrap();

    let mut pairs = vec![(a, a)];
    for i in 0..k - 1 {
        let prev = Symbol(base_len + i as u32);
        pairs.push((prev, prev));
    }
    let reference = MergeSequence::from_pairs(&text, &pairs);
    Ok(FamilyInstance {
        text,
        k,
        expected_bpe: Expected::Utility(2 * n - 1),
        reference: Reference::Full(reference),
        expected_reference: Expected::Utility(2 * n - 1),
        input_only_cap: Some(n + k - 1),
    })
}
