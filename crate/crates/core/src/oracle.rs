//! Brute-force word combinatorics: periods, exponents, critical and circular
//! critical exponents, and the wraparound repetition predicate. Everything
//! here is exact and independent of the automata machinery, which it is used
//! to check.

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use crate::rational::Rational;
use crate::sequences::{window, SequenceId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("the empty word has no exponent")]
    EmptyWord,
    #[error("precondition violated: {0}")]
    Precondition(String),
}

fn nonempty(w: &[u8]) -> Result<(), OracleError> {
    if w.is_empty() {
        Err(OracleError::EmptyWord)
    } else {
        Ok(())
    }
}

/// All periods `p` with `1 <= p <= |w|`, increasing.
pub fn periods(w: &[u8]) -> Result<Vec<usize>, OracleError> {
    nonempty(w)?;
    Ok((1..=w.len())
        .filter(|&p| (0..w.len() - p).all(|i| w[i] == w[i + p]))
        .collect())
}

pub fn least_period(w: &[u8]) -> Result<usize, OracleError> {
    Ok(periods(w)?[0])
}

/// `|w| / p(w)`.
pub fn exponent(w: &[u8]) -> Result<Rational, OracleError> {
    let p = least_period(w)?;
    Ok(Rational::of(w.len() as u64, p as u64))
}

/// Largest `len / p` over repetitions of period `p` in `text` that start
/// before `starts` and are at most `cap` long.
fn best_repetition(text: &[u8], starts: usize, cap: usize) -> Rational {
    let mut best = Rational::ONE;
    let mut run = vec![0usize; text.len() + 1];
    for p in 1..=cap.min(text.len()) {
        // run[j]: number of consecutive i >= j with text[i] == text[i + p]
        run[text.len() - p] = 0;
        for j in (0..text.len() - p).rev() {
            run[j] = if text[j] == text[j + p] { run[j + 1] + 1 } else { 0 };
        }
        let longest = (0..starts.min(text.len() - p + 1))
            .map(|i| (p + run[i]).min(cap))
            .max()
            .unwrap_or(p);
        let e = Rational::of(longest as u64, p as u64);
        if e > best {
            best = e;
        }
    }
    best
}

/// Maximum exponent over nonempty factors of `w`.
pub fn critical_exponent(w: &[u8]) -> Result<Rational, OracleError> {
    nonempty(w)?;
    Ok(best_repetition(w, w.len(), w.len()))
}

/// Maximum exponent over nonempty factors of all conjugates of `w`, computed
/// on the doubled word `ww` with factors of length at most `|w|` starting in
/// the first copy.
pub fn circular_critical_exponent(w: &[u8]) -> Result<Rational, OracleError> {
    nonempty(w)?;
    let doubled: Vec<u8> = w.iter().chain(w.iter()).copied().collect();
    Ok(best_repetition(&doubled, w.len(), w.len()))
}

/// All cyclic shifts of `w`, deduplicated, in shift order.
pub fn conjugates(w: &[u8]) -> Result<Vec<Vec<u8>>, OracleError> {
    nonempty(w)?;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for k in 0..w.len() {
        let c: Vec<u8> = w[k..].iter().chain(&w[..k]).copied().collect();
        if seen.insert(c.clone()) {
            out.push(c);
        }
    }
    Ok(out)
}

/// Wraparound repetition test on the circular word `seq[s..s+n-1]`: does the
/// length-`m` factor starting at absolute position `i` of the doubled word
/// have period `p`? Indices at or past `s + n` wrap back by `n`.
pub fn crep_oracle(seq: SequenceId, i: u64, m: u64, n: u64, p: u64, s: u64) -> Result<bool, OracleError> {
    if p < 1 || m > n || i < s || i >= s + n {
        return Err(OracleError::Precondition(format!(
            "need 1 <= p, m <= n, s <= i < s+n; got i={i} m={m} n={n} p={p} s={s}"
        )));
    }
    let at = |j: u64| {
        let j = if j >= s + n { j - n } else { j };
        seq.at(j)
    };
    // compare positions j and j+p for i <= j < i+m-p, in the doubled word
    Ok((i..(i + m).saturating_sub(p).max(i)).all(|j| at(j) == at(j + p)))
}

/// Least, greatest, and the set of circular critical exponents of the
/// distinct length-`n` windows starting at `0..=scan_bound`.
pub fn length_stats_oracle(
    seq: SequenceId,
    n: u64,
    scan_bound: u64,
) -> Result<(Rational, Rational, BTreeSet<Rational>), OracleError> {
    if n < 1 || scan_bound < n {
        return Err(OracleError::Precondition(format!(
            "need n >= 1 and scan bound >= n; got n={n}, bound={scan_bound}"
        )));
    }
    let mut factors = HashSet::new();
    let mut set = BTreeSet::new();
    for s in 0..=scan_bound {
        let w = window(seq, s, n);
        if factors.insert(w.clone()) {
            set.insert(circular_critical_exponent(&w)?);
        }
    }
    let lo = *set.iter().next().unwrap();
    let hi = *set.iter().next_back().unwrap();
    Ok((lo, hi, set))
}

/// Default window scan bound for length `n`.
pub fn default_scan_bound(n: u64) -> u64 {
    16 * n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: u64, b: u64) -> Rational {
        Rational::of(a, b)
    }

    #[test]
    fn periods_and_exponents() {
        assert_eq!(periods(b"alfalfa").unwrap(), vec![3, 6, 7]);
        assert_eq!(periods(b"a").unwrap(), vec![1]);
        assert_eq!(periods(b"murmur").unwrap(), vec![3, 6]);
        assert_eq!(exponent(b"alfalfa").unwrap(), r(7, 3));
        assert_eq!(exponent(b"x").unwrap(), r(1, 1));
        assert_eq!(exponent(b"entente").unwrap(), r(7, 3));
        assert_eq!(exponent(b"murmur").unwrap(), r(2, 1));
        assert_eq!(periods(b""), Err(OracleError::EmptyWord));
        assert_eq!(exponent(b""), Err(OracleError::EmptyWord));
    }

    #[test]
    fn critical_exponents() {
        assert_eq!(critical_exponent(b"Mississippi").unwrap(), r(7, 3));
        assert_eq!(critical_exponent(b"ab").unwrap(), r(1, 1));
        assert_eq!(circular_critical_exponent(b"amalgam").unwrap(), r(5, 2));
        assert_eq!(circular_critical_exponent(b"a").unwrap(), r(1, 1));
        assert_eq!(circular_critical_exponent(&[0, 1, 1, 0, 1]).unwrap(), r(5, 2));
        assert_eq!(circular_critical_exponent(b""), Err(OracleError::EmptyWord));
    }

    #[test]
    fn conjugate_sets() {
        let c = conjugates(b"ate").unwrap();
        assert_eq!(c, vec![b"ate".to_vec(), b"tea".to_vec(), b"eat".to_vec()]);
        assert_eq!(conjugates(b"aa").unwrap(), vec![b"aa".to_vec()]);
        assert!(conjugates(b"listen").unwrap().contains(&b"enlist".to_vec()));
    }

    #[test]
    fn crep_examples() {
        let tm = SequenceId::ThueMorse;
        // p = n: every comparison range is empty
        for n in 1..6 {
            for m in 0..=n {
                assert!(crep_oracle(tm, 2, m, n, n, 2).unwrap());
            }
        }
        // 01101 read circularly from offset 2 gives 10101
        assert!(crep_oracle(tm, 2, 5, 5, 2, 0).unwrap());
        assert!(!crep_oracle(tm, 0, 5, 5, 2, 0).unwrap());
        assert!(crep_oracle(tm, 0, 0, 5, 0, 0).is_err());
        assert!(crep_oracle(tm, 5, 1, 5, 1, 0).is_err());
    }

    #[test]
    fn length_stats() {
        let tm = SequenceId::ThueMorse;
        let (lo, hi, set) = length_stats_oracle(tm, 7, default_scan_bound(7)).unwrap();
        assert_eq!(set.into_iter().collect::<Vec<_>>(), vec![r(7, 3), r(3, 1), r(7, 2)]);
        assert_eq!((lo, hi), (r(7, 3), r(7, 2)));
        let (lo, hi, set) = length_stats_oracle(tm, 1, 16).unwrap();
        assert_eq!((lo, hi, set.len()), (r(1, 1), r(1, 1), 1));
        assert_eq!(length_stats_oracle(tm, 23, default_scan_bound(23)).unwrap().0, r(17, 7));
        assert!(length_stats_oracle(tm, 0, 10).is_err());
    }
}
