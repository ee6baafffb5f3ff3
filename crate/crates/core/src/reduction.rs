//! Max-cut to pair-encoding reduction on cubic graphs.
//!
//! A cubic graph G with n vertices becomes a text of exactly 121n symbols
//! and a merge budget of k = n+1. Every cut of size c induces a merge
//! sequence of utility exactly 34n + c (one merge per vertex worth 14, then
//! `##` worth c + 20n), and every merge sequence can be repaired into that
//! shape without losing utility — so optimal utility and maximum cut size
//! determine each other. The repairs (`well_form`, `well_form_partial`) and
//! the enumeration oracles here make that correspondence checkable.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::{Alphabet, MergeSequence, Pair, PartialSequence, Symbol, Text};

/// Simple undirected graph in which every vertex has degree exactly three.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl CubicGraph {
    /// Validates degrees, simplicity, and bounds; edges are stored with the
    /// smaller endpoint first, in input order.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut degree = vec![0usize; n];
        let mut seen = HashSet::new();
        let mut normalized = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::NotCubic(format!(
                    "edge ({u}, {v}) references a vertex out of range"
                )));
            }
            if u == v {
                return Err(Error::NotCubic(format!("loop at vertex {u}")));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(Error::NotCubic(format!("duplicate edge {e:?}")));
            }
            degree[u] += 1;
            degree[v] += 1;
            normalized.push(e);
        }
        if let Some(v) = degree.iter().position(|&d| d != 3) {
            return Err(Error::NotCubic(format!(
                "vertex {v} has degree {}, expected 3",
                degree[v]
            )));
        }
        Ok(Self {
            n,
            edges: normalized,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Complete graph on four vertices.
    pub fn k4() -> Self {
        Self::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    /// Complete bipartite graph on two triples.
    pub fn k33() -> Self {
        let edges = (0..3)
            .flat_map(|u| (3..6).map(move |v| (u, v)))
            .collect();
        Self::new(6, edges).unwrap()
    }

    /// Petersen graph: outer five-cycle, inner pentagram, five spokes.
    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Self::new(10, edges).unwrap()
    }

    /// Parses the edge-list format: a "n m" header line followed by m lines
    /// "u v" with 1-indexed vertices.
    pub fn parse_edge_list(input: &str) -> Result<Self> {
        let mut lines = input.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("empty edge list".into()))?;
        let mut head = header.split_whitespace();
        let n: usize = head
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Format("header must be \"n m\"".into()))?;
        let m: usize = head
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Format("header must be \"n m\"".into()))?;
        let mut edges = Vec::with_capacity(m);
        for line in lines {
            let mut it = line.split_whitespace();
            let u: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Format(format!("bad edge line {line:?}")))?;
            let v: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Format(format!("bad edge line {line:?}")))?;
            if u == 0 || v == 0 {
                return Err(Error::Format("vertices are 1-indexed".into()));
            }
            edges.push((u - 1, v - 1));
        }
        if edges.len() != m {
            return Err(Error::Format(format!(
                "header announced {m} edges, found {}",
                edges.len()
            )));
        }
        Self::new(n, edges)
    }

    /// Inverse of [`CubicGraph::parse_edge_list`].
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            out.push_str(&format!("{} {}\n", u + 1, v + 1));
        }
        out
    }

    /// Random cubic graph via the pairing model: three stubs per vertex,
    /// shuffled and paired, rejecting samples with loops or multi-edges.
    pub fn random(n: usize, seed: u64) -> Result<Self> {
        if n < 4 || n % 2 != 0 {
            return Err(Error::InvalidParam(format!(
                "cubic graphs need an even vertex count >= 4, got {n}"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..10_000 {
            let mut stubs: Vec<usize> = (0..n).flat_map(|v| [v, v, v]).collect();
            stubs.shuffle(&mut rng);
            let edges: Vec<(usize, usize)> =
                stubs.chunks(2).map(|c| (c[0], c[1])).collect();
            if let Ok(g) = Self::new(n, edges) {
                return Ok(g);
            }
        }
        Err(Error::NotCubic(format!(
            "failed to sample a simple cubic graph on {n} vertices"
        )))
    }

    fn cut_size(&self, members: &[bool]) -> usize {
        self.edges
            .iter()
            .filter(|&&(u, v)| members[u] != members[v])
            .count()
    }
}

/// A bipartition (S, V \ S) with its crossing-edge count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cut {
    /// `members[v]` is true when vertex v lies in S.
    pub members: Vec<bool>,
    pub size: usize,
}

impl Cut {
    pub fn new(g: &CubicGraph, members: Vec<bool>) -> Self {
        assert_eq!(members.len(), g.n());
        let size = g.cut_size(&members);
        Self { members, size }
    }

    pub fn empty(g: &CubicGraph) -> Self {
        Self::new(g, vec![false; g.n()])
    }
}

/// Which building block a span of the generated text came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SegmentKind {
    /// The 14-symbol block for edge {i, j} (0-indexed vertices).
    Edge { i: usize, j: usize },
    /// One of the four 10-symbol blocks for vertex i.
    VertexCopy { i: usize, copy: usize },
    /// One of the 20n three-symbol padding blocks.
    Padding { index: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    #[serde(flatten)]
    pub kind: SegmentKind,
    pub start: usize,
    pub len: usize,
}

/// A generated pair-encoding instance plus its provenance.
#[derive(Clone, Debug)]
pub struct ReductionInstance {
    pub text: Text,
    pub k: usize,
    pub n: usize,
    pub segments: Vec<Segment>,
    pub graph: CubicGraph,
}

impl ReductionInstance {
    /// The shared `#` symbol.
    pub fn hash_symbol(&self) -> Symbol {
        Symbol(0)
    }

    /// The letter symbol of vertex v (0-indexed).
    pub fn vertex_symbol(&self, v: usize) -> Symbol {
        Symbol(v as u32 + 1)
    }

    /// If `pair` is `#l_v` or `l_v#`, returns (v, chose `#l_v`).
    fn coverage(&self, pair: Pair) -> Option<(usize, bool)> {
        let hash = self.hash_symbol();
        let vertex_of = |s: Symbol| {
            (s.0 >= 1 && s.0 <= self.n as u32).then(|| (s.0 - 1) as usize)
        };
        if pair.0 == hash {
            vertex_of(pair.1).map(|v| (v, true))
        } else if pair.1 == hash {
            vertex_of(pair.0).map(|v| (v, false))
        } else {
            None
        }
    }

    fn hash_pair(&self) -> Pair {
        (self.hash_symbol(), self.hash_symbol())
    }
}

/// Builds the 121n-symbol text: one block per edge, four blocks per vertex,
/// then 20n padding blocks, with a fresh separator symbol per `|`.
pub fn gen_instance(g: &CubicGraph) -> ReductionInstance {
    let n = g.n();
    let mut alphabet = Alphabet::new();
    let hash = alphabet.push_input("#");
    let vertex: Vec<Symbol> = (1..=n)
        .map(|i| alphabet.push_input(format!("l{i}")))
        .collect();
    let mut sep_count = 0usize;
    let mut sep = |alphabet: &mut Alphabet| {
        sep_count += 1;
        alphabet.push_input(format!("|{sep_count}"))
    };
    let mut symbols = Vec::with_capacity(121 * n);
    let mut segments = Vec::new();
    let mut push_segment = |symbols: &mut Vec<Symbol>, kind: SegmentKind, block: Vec<Symbol>| {
        segments.push(Segment {
            kind,
            start: symbols.len(),
            len: block.len(),
        });
        symbols.extend(block);
    };
    for &(i, j) in g.edges() {
        let (li, lj) = (vertex[i], vertex[j]);
        let block = vec![
            hash,
            li,
            hash,
            hash,
            lj,
            hash,
            sep(&mut alphabet),
            hash,
            lj,
            hash,
            hash,
            li,
            hash,
            sep(&mut alphabet),
        ];
        push_segment(&mut symbols, SegmentKind::Edge { i, j }, block);
    }
    for (i, &li) in vertex.iter().enumerate() {
        for copy in 0..4 {
            let block = vec![
                li,
                hash,
                sep(&mut alphabet),
                hash,
                li,
                sep(&mut alphabet),
                li,
                hash,
                li,
                sep(&mut alphabet),
            ];
            push_segment(&mut symbols, SegmentKind::VertexCopy { i, copy }, block);
        }
    }
    for index in 0..20 * n {
        let block = vec![hash, hash, sep(&mut alphabet)];
        push_segment(&mut symbols, SegmentKind::Padding { index }, block);
    }
    debug_assert_eq!(symbols.len(), 121 * n);
    debug_assert_eq!(sep_count, 35 * n);
    ReductionInstance {
        text: Text::new(alphabet, symbols).unwrap(),
        k: n + 1,
        n,
        segments,
        graph: g.clone(),
    }
}

/// One merge per vertex (`#l_v` inside S, `l_v#` outside), then `##` last.
/// Utility is exactly 34n + cut size.
pub fn cut_to_sequence(inst: &ReductionInstance, cut: &Cut) -> MergeSequence {
    let hash = inst.hash_symbol();
    let mut pairs: Vec<Pair> = (0..inst.n)
        .map(|v| {
            let lv = inst.vertex_symbol(v);
            if cut.members[v] {
                (hash, lv)
            } else {
                (lv, hash)
            }
        })
        .collect();
    pairs.push(inst.hash_pair());
    MergeSequence::from_pairs(&inst.text, &pairs)
}

/// True when the sequence merges `##` and exactly one of `#l_v`, `l_v#` per
/// vertex, and nothing else.
pub fn is_well_formed(inst: &ReductionInstance, seq: &MergeSequence) -> bool {
    let mut hash_seen = false;
    let mut covered = vec![false; inst.n];
    for rule in seq.rules() {
        let pair = rule.pair();
        if pair == inst.hash_pair() {
            if hash_seen {
                return false;
            }
            hash_seen = true;
        } else if let Some((v, _)) = inst.coverage(pair) {
            if covered[v] {
                return false;
            }
            covered[v] = true;
        } else {
            return false;
        }
    }
    hash_seen && covered.iter().all(|&c| c)
}

/// Reads the cut off a well-formed sequence: S holds the vertices whose
/// `#l_v` side was merged. The reported size is the true crossing count,
/// which is at least utility − 34n (with equality when `##` is merged last).
pub fn sequence_to_cut(inst: &ReductionInstance, seq: &MergeSequence) -> Result<Cut> {
    if !is_well_formed(inst, seq) {
        return Err(Error::NotWellFormed(
            "sequence is not well-formed; repair it with well_form first".into(),
        ));
    }
    let mut members = vec![false; inst.n];
    for rule in seq.rules() {
        if let Some((v, into_s)) = inst.coverage(rule.pair()) {
            members[v] = into_s;
        }
    }
    Ok(Cut::new(&inst.graph, members))
}

/// Repairs a full merge sequence into a well-formed one of length n+1:
/// keeps the first `##` merge and the first merge per vertex, drops
/// everything else, and appends `l_v#` for vertices left uncovered. Returns
/// well-formed input unchanged; otherwise the output's utility is strictly
/// larger (separator merges gain 1, merges of derived symbols at most 6,
/// and a second merge on a covered vertex at most 10, while each appended
/// merge gains at least 11).
pub fn well_form(inst: &ReductionInstance, seq: &MergeSequence) -> MergeSequence {
    if is_well_formed(inst, seq) {
        return seq.clone();
    }
    let merges_hash = seq.rules().iter().any(|r| r.pair() == inst.hash_pair());
    if !merges_hash {
        // At most 14(n+1) < 34n utility without ##; any well-formed
        // sequence beats it.
        return cut_to_sequence(inst, &Cut::empty(&inst.graph));
    }
    let mut hash_kept = false;
    let mut covered = vec![false; inst.n];
    let mut pairs: Vec<Pair> = Vec::with_capacity(inst.k);
    for rule in seq.rules() {
        let pair = rule.pair();
        if pair == inst.hash_pair() {
            if !hash_kept {
                hash_kept = true;
                pairs.push(pair);
            }
        } else if let Some((v, _)) = inst.coverage(pair) {
            if !covered[v] {
                covered[v] = true;
                pairs.push(pair);
            }
        }
    }
    for (v, covered) in covered.iter().enumerate() {
        if !covered {
            pairs.push((inst.vertex_symbol(v), inst.hash_symbol()));
        }
    }
    MergeSequence::from_pairs(&inst.text, &pairs)
}

/// Repairs a partial sequence into a well-formed *full* sequence of length
/// n+1 with utility at least the input's: coverage choices are read off the
/// input (first side per vertex wins, steps on separators or derived
/// symbols are dropped, duplicate `##` steps collapse), then rebuilt as
/// vertex merges in index order with a full `##` merge last. A fully-merged
/// well-formed input is returned as is.
pub fn well_form_partial(inst: &ReductionInstance, seq: &PartialSequence) -> MergeSequence {
    if let Some(full) = as_full_well_formed(inst, seq) {
        return full;
    }
    let mut members = vec![false; inst.n];
    let mut covered = vec![false; inst.n];
    for step in seq.steps() {
        if step.positions.is_empty() {
            continue;
        }
        if let Some((v, into_s)) = inst.coverage(step.rule.pair()) {
            if !covered[v] {
                covered[v] = true;
                members[v] = into_s;
            }
        }
    }
    cut_to_sequence(inst, &Cut::new(&inst.graph, members))
}

/// Returns the pair sequence as a `MergeSequence` when every step replaces
/// all current occurrences of its pair and the rule set is well-formed.
fn as_full_well_formed(inst: &ReductionInstance, seq: &PartialSequence) -> Option<MergeSequence> {
    let mut cur = inst.text.clone();
    let mut pairs = Vec::with_capacity(seq.len());
    for step in seq.steps() {
        let pair = step.rule.pair();
        if step.positions != cur.occurrences(pair) {
            return None;
        }
        cur = cur.apply_step(step).ok()?;
        pairs.push(pair);
    }
    let full = MergeSequence::from_pairs(&inst.text, &pairs);
    is_well_formed(inst, &full).then_some(full)
}

/// Exact maximum cut by enumerating bipartitions (vertex n−1 pinned
/// outside S). Capped at 20 vertices.
pub fn max_cut_bruteforce(g: &CubicGraph) -> Result<Cut> {
    let n = g.n();
    if n > 20 {
        return Err(Error::SizeCapExceeded(format!(
            "max_cut_bruteforce caps at 20 vertices, got {n}"
        )));
    }
    let mut best: Option<Cut> = None;
    for mask in 0u32..1 << (n - 1) {
        let members: Vec<bool> = (0..n).map(|v| v < n - 1 && mask >> v & 1 == 1).collect();
        let cut = Cut::new(g, members);
        if best.as_ref().map_or(true, |b| cut.size > b.size) {
            best = Some(cut);
        }
    }
    Ok(best.unwrap())
}

/// Maximum utility over all well-formed sequences, measured by replaying
/// every one of the 2^n side choices. Equals 34n + maximum cut size.
pub fn oms_opt_wellformed(inst: &ReductionInstance) -> Result<usize> {
    let n = inst.n;
    if n > 20 {
        return Err(Error::SizeCapExceeded(format!(
            "oms_opt_wellformed caps at 20 vertices, got {n}"
        )));
    }
    let mut best = 0;
    for mask in 0u32..1 << n {
        let members: Vec<bool> = (0..n).map(|v| mask >> v & 1 == 1).collect();
        let cut = Cut::new(&inst.graph, members);
        let seq = cut_to_sequence(inst, &cut);
        best = best.max(seq.utility(&inst.text).unwrap());
    }
    Ok(best)
}
