//! The two base-2 automatic sequences under study, their DFAOs, and the
//! binary numeral codec.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::automata::Dfao;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SequenceError {
    #[error("unknown sequence `{0}` (expected tm or pf)")]
    Unknown(String),
    #[error("morphism is not prolongable on {0}")]
    NotProlongable(u8),
    #[error("morphism image of {0} is empty or leaves the alphabet")]
    BadImage(u8),
    #[error("DFAO initial state has no 0 self-loop")]
    NotZeroRobust,
}

/// Identifier of a registered sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SequenceId {
    /// Thue–Morse word `0110100110010110...`.
    ThueMorse,
    /// Regular paperfolding word `00100110001101100010...`.
    Paperfolding,
}

impl SequenceId {
    pub fn name(self) -> &'static str {
        match self {
            SequenceId::ThueMorse => "tm",
            SequenceId::Paperfolding => "pf",
        }
    }

    pub fn at(self, i: u64) -> u8 {
        match self {
            SequenceId::ThueMorse => tm_at(i),
            SequenceId::Paperfolding => pf_at(i),
        }
    }

    pub fn dfao(self) -> Dfao<u8> {
        match self {
            SequenceId::ThueMorse => thue_morse_dfao(),
            SequenceId::Paperfolding => paperfolding_dfao(),
        }
    }
}

impl fmt::Display for SequenceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SequenceId {
    type Err = SequenceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tm" => Ok(SequenceId::ThueMorse),
            "pf" => Ok(SequenceId::Paperfolding),
            other => Err(SequenceError::Unknown(other.to_string())),
        }
    }
}

/// Most-significant-first base-2 digits; zero is the empty string.
pub fn to_digits(n: u64) -> Vec<u8> {
    let len = 64 - n.leading_zeros() as usize;
    (0..len).rev().map(|b| ((n >> b) & 1) as u8).collect()
}

/// Decodes most-significant-first digits, ignoring leading zeros.
pub fn from_digits(digits: &[u8]) -> u64 {
    digits.iter().fold(0, |acc, &d| (acc << 1) | d as u64)
}

/// Thue–Morse letter: parity of the number of 1 digits.
pub fn tm_at(i: u64) -> u8 {
    (i.count_ones() & 1) as u8
}

/// Regular paperfolding letter: writing `i + 1 = odd * 2^a`, the letter is 1
/// iff `odd` is 3 mod 4.
pub fn pf_at(i: u64) -> u8 {
    let j = i + 1;
    let odd = j >> j.trailing_zeros();
    (odd % 4 == 3) as u8
}

/// The 2-state parity DFAO for Thue–Morse.
pub fn thue_morse_dfao() -> Dfao<u8> {
    Dfao::from_table(&[[0, 1], [1, 0]], vec![0, 1]).expect("valid table")
}

/// Paperfolding DFAO. The letter of `i` is the digit immediately preceding
/// the last 0 of `(i)_2` (0 when there is none); states remember the last
/// digit read and the current candidate letter.
pub fn paperfolding_dfao() -> Dfao<u8> {
    // state = 2 * last_digit + candidate
    let table: Vec<[u32; 2]> = (0..4u32)
        .map(|s| {
            let (last, cand) = (s >> 1, s & 1);
            let on0 = last; // the new 0 is preceded by `last`; last := 0
            let on1 = 2 | cand;
            [on0, on1]
        })
        .collect();
    Dfao::from_table(&table, vec![0, 1, 0, 1])
        .expect("valid table")
        .minimize()
}

/// Rejects a DFAO whose initial state lacks a 0 self-loop.
pub fn check_sequence_dfao(m: &Dfao<u8>) -> Result<(), SequenceError> {
    if m.step(0, 0) != 0 {
        return Err(SequenceError::NotZeroRobust);
    }
    Ok(())
}

/// A morphism on single-byte letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    images: BTreeMap<u8, Vec<u8>>,
}

impl Morphism {
    pub fn new(images: BTreeMap<u8, Vec<u8>>) -> Result<Self, SequenceError> {
        for (&a, img) in &images {
            if img.is_empty() || img.iter().any(|b| !images.contains_key(b)) {
                return Err(SequenceError::BadImage(a));
            }
        }
        Ok(Morphism { images })
    }

    /// `0 -> 01`, `1 -> 10`.
    pub fn thue_morse() -> Self {
        Morphism::new(BTreeMap::from([(0, vec![0, 1]), (1, vec![1, 0])])).unwrap()
    }

    pub fn image(&self, a: u8) -> Option<&[u8]> {
        self.images.get(&a).map(Vec::as_slice)
    }

    /// Length-`len` prefix of the fixed point starting with `seed`.
    pub fn fixed_point_prefix(&self, seed: u8, len: usize) -> Result<Vec<u8>, SequenceError> {
        let img = self.image(seed).ok_or(SequenceError::NotProlongable(seed))?;
        if img.len() < 2 || img[0] != seed {
            return Err(SequenceError::NotProlongable(seed));
        }
        let mut word = vec![seed];
        while word.len() < len {
            word = word.iter().flat_map(|a| self.images[a].iter().copied()).collect();
        }
        word.truncate(len);
        Ok(word)
    }
}

/// `seq[start], ..., seq[start + len - 1]`.
pub fn window(seq: SequenceId, start: u64, len: u64) -> Vec<u8> {
    (start..start + len).map(|i| seq.at(i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(s: &str) -> Vec<u8> {
        s.bytes().map(|b| b - b'0').collect()
    }

    #[test]
    fn thue_morse_letters() {
        let got: Vec<u8> = (0..8).map(tm_at).collect();
        assert_eq!(got, word("01101001"));
        assert_eq!(tm_at(0), 0);
        assert_eq!(tm_at(1 << 20), 1);
    }

    /// Paperfolding by unfolding: even positions alternate 0, 1, 0, 1, ...
    /// and odd positions repeat the whole word.
    fn pf_unfold(i: u64) -> u8 {
        if i.is_multiple_of(2) {
            ((i / 2) % 2) as u8
        } else {
            pf_unfold(i / 2)
        }
    }

    #[test]
    fn paperfolding_letters() {
        let got: Vec<u8> = (0..20).map(pf_at).collect();
        assert_eq!(got, word("00100110001101100010"));
        assert_eq!(pf_at(0), 0);
        assert_eq!(pf_at(100), pf_unfold(100));
        for i in 0..4096 {
            assert_eq!(pf_at(i), pf_unfold(i), "i = {i}");
        }
    }

    #[test]
    fn dfaos_match_arithmetic() {
        let tm = thue_morse_dfao();
        let pf = paperfolding_dfao();
        for i in 0..1u64 << 16 {
            assert_eq!(*tm.eval(&[i]), tm_at(i));
            assert_eq!(*pf.eval(&[i]), pf_at(i));
        }
    }

    #[test]
    fn shipped_dfaos_are_minimal_and_zero_robust() {
        for m in [thue_morse_dfao(), paperfolding_dfao()] {
            assert!(check_sequence_dfao(&m).is_ok());
            assert_eq!(m.minimize(), m);
        }
        assert_eq!(thue_morse_dfao().num_states(), 2);
        let bad = Dfao::from_table(&[[1, 0], [0, 1]], vec![0u8, 1]).unwrap();
        assert_eq!(check_sequence_dfao(&bad), Err(SequenceError::NotZeroRobust));
    }

    #[test]
    fn fixed_point() {
        let mu = Morphism::thue_morse();
        assert_eq!(mu.fixed_point_prefix(0, 8).unwrap(), word("01101001"));
        assert!(mu.fixed_point_prefix(0, 0).unwrap().is_empty());
        let long = mu.fixed_point_prefix(0, 1 << 16).unwrap();
        for (i, &b) in long.iter().enumerate() {
            assert_eq!(b, tm_at(i as u64));
        }
        assert_eq!(mu.fixed_point_prefix(1, 4).unwrap(), word("1001"));
        let swap = Morphism::new(BTreeMap::from([(0, vec![1]), (1, vec![0])])).unwrap();
        assert_eq!(swap.fixed_point_prefix(0, 3), Err(SequenceError::NotProlongable(0)));
        assert!(Morphism::new(BTreeMap::from([(0, vec![0, 2])])).is_err());
    }

    #[test]
    fn numerals() {
        assert!(to_digits(0).is_empty());
        assert_eq!(to_digits(6), vec![1, 1, 0]);
        assert_eq!(from_digits(&[0, 0, 1, 1, 0]), 6);
        for n in 0..1000 {
            assert_eq!(from_digits(&to_digits(n)), n);
        }
    }

    #[test]
    fn windows() {
        assert_eq!(window(SequenceId::ThueMorse, 0, 8), word("01101001"));
        assert!(window(SequenceId::ThueMorse, 3, 0).is_empty());
        assert_eq!(
            window(SequenceId::ThueMorse, 10, 7),
            (10..17).map(tm_at).collect::<Vec<_>>()
        );
        assert!("rs".parse::<SequenceId>().is_err());
    }
}
