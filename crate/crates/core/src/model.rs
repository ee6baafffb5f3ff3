//! Serialization of trained merge tables.
//!
//! A model file is a JSON object
//! `{"version": 1, "alphabet": [..labels..], "merges": [[left, right, out], ..]}`
//! with an optional `"partial_positions"` array (one position list per merge)
//! for encoders that replace only selected occurrences. The `alphabet` lists
//! the base (input-origin) symbols; merge outputs are numbered densely after
//! it, in application order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::{
    Alphabet, MergeRule, MergeSequence, PartialSequence, PartialStep, Symbol, Text,
};

pub const MODEL_VERSION: u32 = 1;

/// A serializable merge table: base alphabet labels plus ordered merges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeModel {
    pub version: u32,
    pub alphabet: Vec<String>,
    pub merges: Vec<[u32; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partial_positions: Option<Vec<Vec<usize>>>,
}

impl MergeModel {
    /// Captures a full-merge sequence trained over `base`.
    pub fn from_sequence(base: &Alphabet, seq: &MergeSequence) -> Self {
        Self {
            version: MODEL_VERSION,
            alphabet: base.entries().iter().map(|e| e.label.clone()).collect(),
            merges: seq
                .rules()
                .iter()
                .map(|r| [r.left.id(), r.right.id(), r.out.id()])
                .collect(),
            partial_positions: None,
        }
    }

    /// Captures a partial sequence; positions are per-step, in the
    /// coordinates of the text each step was applied to.
    pub fn from_partial(base: &Alphabet, seq: &PartialSequence) -> Self {
        let rules: Vec<MergeRule> = seq.rules();
        Self {
            version: MODEL_VERSION,
            alphabet: base.entries().iter().map(|e| e.label.clone()).collect(),
            merges: rules
                .iter()
                .map(|r| [r.left.id(), r.right.id(), r.out.id()])
                .collect(),
            partial_positions: Some(seq.steps().iter().map(|s| s.positions.clone()).collect()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("model serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let model: MergeModel =
            serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
        model.validate()?;
        Ok(model)
    }

    fn validate(&self) -> Result<()> {
        if self.version != MODEL_VERSION {
            return Err(Error::Format(format!(
                "unsupported model version {}",
                self.version
            )));
        }
        let base = self.alphabet.len() as u32;
        for (i, m) in self.merges.iter().enumerate() {
            let expected_out = base + i as u32;
            if m[2] != expected_out {
                return Err(Error::Format(format!(
                    "merge {i} output {} is not dense (expected {expected_out})",
                    m[2]
                )));
            }
            if m[0] >= expected_out || m[1] >= expected_out {
                return Err(Error::Format(format!(
                    "merge {i} references symbol beyond those defined before it"
                )));
            }
        }
        if let Some(pp) = &self.partial_positions {
            if pp.len() != self.merges.len() {
                return Err(Error::Format(
                    "partial_positions length does not match merges".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn rules(&self) -> Vec<MergeRule> {
        self.merges
            .iter()
            .map(|m| MergeRule {
                left: Symbol(m[0]),
                right: Symbol(m[1]),
                out: Symbol(m[2]),
            })
            .collect()
    }

    /// True when the base alphabet is the byte-level one.
    pub fn is_byte_level(&self) -> bool {
        self.alphabet.len() == 256
            && self
                .alphabet
                .iter()
                .enumerate()
                .all(|(i, l)| *l == format!("0x{i:02x}"))
    }

    /// Rebuilds the base alphabet. Merge outputs get their entries when the
    /// rules are applied.
    pub fn base_alphabet(&self) -> Alphabet {
        let mut alphabet = Alphabet::new();
        for label in &self.alphabet {
            alphabet.push_input(label.clone());
        }
        alphabet
    }

    /// Checks that `text` was ingested over this model's base alphabet.
    pub fn check_compatible(&self, text: &Text) -> Result<()> {
        let labels: Vec<&str> = text.alphabet().entries().iter().map(|e| &*e.label).collect();
        let expected: Vec<&str> = self.alphabet.iter().map(|s| s.as_str()).collect();
        if labels != expected {
            return Err(Error::Format(
                "input alphabet does not match the model alphabet".into(),
            ));
        }
        Ok(())
    }

    /// Encodes `text` with the stored merges. Full-merge models apply every
    /// rule greedily; partial models replay the stored positions and fail if
    /// the input does not host them.
    pub fn encode(&self, text: &Text) -> Result<Text> {
        self.check_compatible(text)?;
        match &self.partial_positions {
            None => MergeSequence::new(self.rules()).apply(text),
            Some(pp) => {
                let steps = self
                    .rules()
                    .into_iter()
                    .zip(pp.iter())
                    .map(|(rule, positions)| PartialStep {
                        rule,
                        positions: positions.clone(),
                    })
                    .collect();
                PartialSequence::new(steps).apply(text)
            }
        }
    }

    /// Decodes a token-id stream produced by [`MergeModel::encode`].
    pub fn decode_tokens(&self, tokens: &[u32]) -> Result<Text> {
        let mut alphabet = self.base_alphabet();
        for rule in self.rules() {
            let created = alphabet.push_merged(rule.left, rule.right);
            debug_assert_eq!(created, rule.out);
        }
        let total = alphabet.len() as u32;
        let symbols = tokens
            .iter()
            .map(|&t| {
                if t < total {
                    Ok(Symbol(t))
                } else {
                    Err(Error::SymbolOutOfRange {
                        id: t,
                        alphabet_len: total as usize,
                    })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let encoded = Text::new(alphabet, symbols)?;
        Ok(crate::text::decode(&encoded, &self.rules()))
    }
}

/// Renders a token stream as decimal ids separated by single spaces.
pub fn tokens_to_string(text: &Text) -> String {
    text.symbols()
        .iter()
        .map(|s| s.id().to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Parses a decimal token stream.
pub fn tokens_from_string(s: &str) -> Result<Vec<u32>> {
    s.split_whitespace()
        .map(|w| {
            w.parse::<u32>()
                .map_err(|_| Error::Format(format!("bad token {w:?}")))
        })
        .collect()
}
