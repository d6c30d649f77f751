//! Outcome and event label helpers.

/// Decimal label for index `i` of `n`, zero-padded so that lexicographic
/// order matches numeric order.
pub fn index_label(i: usize, n: usize) -> String {
    let width = n.saturating_sub(1).max(1).to_string().len();
    format!("{i:0width$}")
}

/// Labels `0..n` as produced by [`index_label`].
pub fn index_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| index_label(i, n)).collect()
}

const SYMBOLS: &[u8; 36] = b"0123456789abcdefghijklmnopqrstuvwxyz";

/// Largest per-party alphabet that can be written as one character.
pub const MAX_SYMBOLS: usize = SYMBOLS.len();

/// One-character symbol for a per-party input or output value.
pub fn symbol(v: usize) -> char {
    SYMBOLS[v] as char
}

pub fn parse_symbol(c: char) -> Option<usize> {
    SYMBOLS.iter().position(|&s| s as char == c.to_ascii_lowercase())
}

/// Encodes a tuple of per-party values as a string, one character per party.
pub fn encode_string(values: &[usize]) -> String {
    values.iter().map(|&v| symbol(v)).collect()
}

pub fn decode_string(s: &str) -> Option<Vec<usize>> {
    s.chars().map(parse_symbol).collect()
}
