//! Multi-track binary automata: synchronized DFAs over bit-tuples, their
//! boolean algebra and quantifier elimination, and deterministic automata
//! with output (DFAOs).
//!
//! Every track carries one natural number written in base 2, most
//! significant digit first. Tuples are aligned by left-padding the shorter
//! numerals with zeros, so all automata produced here are *zero-robust*:
//! prepending all-zero columns never changes acceptance or output.
//!
//! A symbol of a `k`-track automaton is an integer in `0..2^k`; the digit of
//! track `j` (in sorted track order) is bit `k - 1 - j`. Listing symbols in
//! increasing order is therefore the lexicographic order of digit strings
//! `d1 d2 ... dk`.

mod dfa;
mod dfao;
mod error;
mod partition;
pub mod text;

pub use dfa::{BoolOp, Dfa, ProjectStats};
pub use dfao::{acceptors_to_dfao, Dfao};
pub use error::AutomataError;
pub use text::Symbol;

/// Digit of track `j` in symbol `sym` of a `width`-track alphabet.
#[inline]
pub fn digit(sym: usize, width: usize, j: usize) -> u8 {
    ((sym >> (width - 1 - j)) & 1) as u8
}

/// Encodes a tuple of naturals as a column word of minimal length. Zero is
/// the empty word.
pub fn encode_tuple(values: &[u64]) -> Vec<usize> {
    let width = values.len();
    let len = values
        .iter()
        .map(|&v| 64 - v.leading_zeros() as usize)
        .max()
        .unwrap_or(0);
    (0..len)
        .map(|t| {
            let bit = len - 1 - t;
            values.iter().enumerate().fold(0usize, |acc, (j, &v)| {
                acc | ((((v >> bit) & 1) as usize) << (width - 1 - j))
            })
        })
        .collect()
}

/// Inverse of [`encode_tuple`], tolerating leading zero columns.
pub fn decode_tuple(word: &[usize], width: usize) -> Vec<u64> {
    let mut vals = vec![0u64; width];
    for &sym in word {
        for (j, v) in vals.iter_mut().enumerate() {
            *v = (*v << 1) | digit(sym, width, j) as u64;
        }
    }
    vals
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuple_encoding_pads_to_longest() {
        // (1, 6) -> columns 01, 01, 10 ... i.e. 001 / 110
        assert_eq!(encode_tuple(&[1, 6]), vec![0b01, 0b01, 0b10]);
        assert_eq!(encode_tuple(&[0, 0]), Vec::<usize>::new());
        assert_eq!(decode_tuple(&[0, 0, 0b01, 0b01, 0b10], 2), vec![1, 6]);
    }
}
