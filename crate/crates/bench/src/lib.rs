//! Shared fixtures for the criterion benchmarks.

/// Returns a prefix of the bundled English-like corpus, at most `bytes` long.
pub fn corpus(bytes: usize) -> Vec<u8> {
    const DATA: &[u8] = include_bytes!("../../core/tests/data/corpus.txt");
    DATA[..bytes.min(DATA.len())].to_vec()
}
