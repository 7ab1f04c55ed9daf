use std::collections::BTreeSet;
use std::fmt;

use crate::automata::Symbol;
use crate::rational::Rational;

fn set(items: &[(u64, u64)]) -> Vec<Rational> {
    items.iter().map(|&(a, b)| Rational::of(a, b)).collect()
}

/// Exponents of prefixes of the Thue–Morse word.
pub fn prefix_exponents() -> Vec<Rational> {
    set(&[(1, 1), (2, 1), (7, 3), (5, 2), (13, 5), (8, 3), (3, 1)])
}

/// Exponents of factors of the Thue–Morse word.
pub fn factor_exponents() -> Vec<Rational> {
    set(&[
        (1, 1),
        (2, 1),
        (7, 3),
        (17, 7),
        (5, 2),
        (13, 5),
        (8, 3),
        (3, 1),
        (10, 3),
        (7, 2),
        (11, 3),
        (4, 1),
    ])
}

/// Least exponents over all factors of one length.
pub fn least_exponents() -> Vec<Rational> {
    set(&[(1, 1), (2, 1), (7, 3), (17, 7), (5, 2)])
}

/// Greatest exponents over all factors of one length.
pub fn greatest_exponents() -> Vec<Rational> {
    set(&[(1, 1), (2, 1), (3, 1), (7, 2), (4, 1)])
}

/// Paperfolding prefix exponents.
pub fn pf_prefix_exponents() -> Vec<Rational> {
    set(&[(1, 1), (2, 1), (7, 3), (3, 1), (10, 3), (4, 1), (13, 3), (5, 1)])
}

/// Paperfolding factor exponents.
pub fn pf_factor_exponents() -> Vec<Rational> {
    set(&[
        (1, 1),
        (2, 1),
        (7, 3),
        (5, 2),
        (8, 3),
        (11, 4),
        (3, 1),
        (10, 3),
        (7, 2),
        (4, 1),
        (13, 3),
        (5, 1),
        (6, 1),
    ])
}

pub fn pf_least_exponents() -> Vec<Rational> {
    set(&[(1, 1), (2, 1), (7, 3), (5, 2), (8, 3), (11, 4), (3, 1)])
}

pub fn pf_greatest_exponents() -> Vec<Rational> {
    set(&[(1, 1), (2, 1), (3, 1), (4, 1), (5, 1), (6, 1)])
}

/// Predicate-name suffix for an exponent: numerator then denominator, so
/// `7/3` gives `73` and `4` gives `41`.
pub fn suffix(r: Rational) -> String {
    format!("{}{}", r.numer(), r.denom())
}

/// A set of exponents drawn from a fixed increasing universe, as a bitmask
/// whose most significant bit is the smallest exponent and whose least
/// significant bit is the largest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AceEncoding(pub u32);

impl AceEncoding {
    pub fn bit(universe: &[Rational], r: Rational) -> Option<u32> {
        let i = universe.iter().position(|&u| u == r)?;
        Some(1 << (universe.len() - 1 - i))
    }

    /// `None` if some member lies outside `universe`.
    pub fn from_set(universe: &[Rational], members: &BTreeSet<Rational>) -> Option<AceEncoding> {
        members
            .iter()
            .try_fold(0, |acc, &r| Some(acc | Self::bit(universe, r)?))
            .map(AceEncoding)
    }

    pub fn to_set(self, universe: &[Rational]) -> BTreeSet<Rational> {
        universe
            .iter()
            .filter(|&&r| Self::bit(universe, r).is_some_and(|b| self.0 & b != 0))
            .copied()
            .collect()
    }
}

impl fmt::Display for AceEncoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Symbol for AceEncoding {
    fn encode(&self) -> String {
        self.0.to_string()
    }
    fn decode(s: &str) -> Option<Self> {
        s.parse().ok().map(AceEncoding)
    }
}
