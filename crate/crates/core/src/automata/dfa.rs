use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use super::partition::{minimize_colored, renumber};
use super::{decode_tuple, digit, encode_tuple, AutomataError};

/// Boolean connective applied by [`Dfa::product`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoolOp {
    And,
    Or,
    Implies,
    Iff,
    Xor,
}

impl BoolOp {
    pub fn apply(self, a: bool, b: bool) -> bool {
        match self {
            BoolOp::And => a && b,
            BoolOp::Or => a || b,
            BoolOp::Implies => !a || b,
            BoolOp::Iff => a == b,
            BoolOp::Xor => a != b,
        }
    }
}

/// Size bookkeeping from a projection.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ProjectStats {
    /// Number of subset states explored before minimization.
    pub subset_states: usize,
}

/// Complete deterministic automaton over bit-tuples, one track per variable.
///
/// Tracks are kept sorted and duplicate-free, state 0 is initial, and
/// automata returned by the public operations are minimal and numbered
/// breadth-first with symbols in increasing order. Two minimal automata
/// with the same tracks and language are therefore structurally identical.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dfa {
    tracks: Vec<String>,
    trans: Vec<u32>,
    accept: Vec<bool>,
}

fn check_tracks(tracks: &[String]) -> Result<(), AutomataError> {
    if tracks.windows(2).any(|w| w[0] >= w[1]) || tracks.iter().any(|t| t.is_empty()) {
        return Err(AutomataError::InvalidTracks(tracks.to_vec()));
    }
    Ok(())
}

/// For every symbol of the `outer` alphabet, the symbol of the `inner`
/// alphabet obtained by keeping only the inner tracks. `inner` must be a
/// subset of `outer`.
fn restriction_map(outer: &[String], inner: &[String]) -> Vec<u32> {
    let pos: Vec<usize> = inner
        .iter()
        .map(|t| outer.iter().position(|o| o == t).expect("inner track present"))
        .collect();
    let (ko, ki) = (outer.len(), inner.len());
    (0..1usize << ko)
        .map(|sym| {
            pos.iter()
                .enumerate()
                .fold(0u32, |acc, (j, &p)| acc | ((digit(sym, ko, p) as u32) << (ki - 1 - j)))
        })
        .collect()
}

impl Dfa {
    /// Assembles an automaton from raw parts, validating shape only.
    pub fn from_parts(tracks: Vec<String>, trans: Vec<u32>, accept: Vec<bool>) -> Result<Self, AutomataError> {
        check_tracks(&tracks)?;
        let nsyms = 1usize << tracks.len();
        if accept.is_empty() {
            return Err(AutomataError::Malformed("no states".into()));
        }
        if trans.len() != accept.len() * nsyms {
            return Err(AutomataError::Malformed(format!(
                "expected {} transitions, found {}",
                accept.len() * nsyms,
                trans.len()
            )));
        }
        if let Some(&t) = trans.iter().find(|&&t| t as usize >= accept.len()) {
            return Err(AutomataError::Malformed(format!("transition to unknown state {t}")));
        }
        Ok(Dfa { tracks, trans, accept })
    }

    /// Explores the automaton whose states are values of `S`, reachable from
    /// `initial`, then minimizes it. `tracks` may be unsorted and may repeat a
    /// name; `step` receives one digit per entry of `tracks`, in that order.
    pub fn build<S, F, A>(tracks: &[&str], initial: S, step: F, accept: A) -> Dfa
    where
        S: Clone + Eq + Hash,
        F: Fn(&S, &[u8]) -> S,
        A: Fn(&S) -> bool,
    {
        let mut sorted: Vec<String> = tracks.iter().map(|t| t.to_string()).collect();
        sorted.sort();
        sorted.dedup();
        let k = sorted.len();
        let nsyms = 1usize << k;
        let pos: Vec<usize> = tracks
            .iter()
            .map(|t| sorted.iter().position(|s| s == t).unwrap())
            .collect();
        let columns: Vec<Vec<u8>> = (0..nsyms)
            .map(|sym| pos.iter().map(|&p| digit(sym, k, p)).collect())
            .collect();

        let mut ids: HashMap<S, u32> = HashMap::new();
        let mut states = vec![initial.clone()];
        ids.insert(initial, 0);
        let mut trans = Vec::new();
        let mut i = 0;
        while i < states.len() {
            for col in &columns {
                let next = step(&states[i], col);
                let id = match ids.entry(next) {
                    Entry::Occupied(e) => *e.get(),
                    Entry::Vacant(e) => {
                        let id = states.len() as u32;
                        states.push(e.key().clone());
                        e.insert(id);
                        id
                    }
                };
                trans.push(id);
            }
            i += 1;
        }
        let acc: Vec<bool> = states.iter().map(&accept).collect();
        Dfa {
            tracks: sorted,
            trans,
            accept: acc,
        }
        .minimize()
    }

    /// Accepts every tuple over `tracks`.
    pub fn universal(tracks: &[&str]) -> Dfa {
        Dfa::build(tracks, (), |_, _| (), |_| true)
    }

    /// Accepts nothing.
    pub fn empty(tracks: &[&str]) -> Dfa {
        Dfa::build(tracks, (), |_, _| (), |_| false)
    }

    pub fn tracks(&self) -> &[String] {
        &self.tracks
    }

    pub fn width(&self) -> usize {
        self.tracks.len()
    }

    pub fn num_symbols(&self) -> usize {
        1 << self.tracks.len()
    }

    pub fn num_states(&self) -> usize {
        self.accept.len()
    }

    /// States from which some accepting state is reachable. For a minimal
    /// automaton this is the state count without the rejecting sink.
    pub fn live_states(&self) -> usize {
        self.live_mask().iter().filter(|&&l| l).count()
    }

    pub fn is_accepting(&self, q: u32) -> bool {
        self.accept[q as usize]
    }

    #[inline]
    pub fn step(&self, q: u32, sym: usize) -> u32 {
        self.trans[q as usize * self.num_symbols() + sym]
    }

    pub fn transitions(&self) -> &[u32] {
        &self.trans
    }

    pub fn run(&self, word: &[usize]) -> u32 {
        word.iter().fold(0, |q, &s| self.step(q, s))
    }

    pub fn accepts_word(&self, word: &[usize]) -> bool {
        self.accept[self.run(word) as usize]
    }

    /// Membership of a tuple given in track order.
    pub fn accepts(&self, values: &[u64]) -> bool {
        assert_eq!(values.len(), self.width(), "tuple arity");
        self.accepts_word(&encode_tuple(values))
    }

    /// Membership with values supplied by track name.
    pub fn accepts_named(&self, values: &[(&str, u64)]) -> Result<bool, AutomataError> {
        let mut tuple = vec![0u64; self.width()];
        for (j, t) in self.tracks.iter().enumerate() {
            tuple[j] = values
                .iter()
                .find(|(n, _)| n == t)
                .map(|&(_, v)| v)
                .ok_or_else(|| AutomataError::UnknownTrack(t.clone()))?;
        }
        Ok(self.accepts(&tuple))
    }

    fn live_mask(&self) -> Vec<bool> {
        let n = self.num_states();
        let nsyms = self.num_symbols();
        let mut rev: Vec<Vec<u32>> = vec![Vec::new(); n];
        for q in 0..n {
            for a in 0..nsyms {
                rev[self.trans[q * nsyms + a] as usize].push(q as u32);
            }
        }
        let mut live = self.accept.clone();
        let mut stack: Vec<u32> = (0..n as u32).filter(|&q| live[q as usize]).collect();
        while let Some(q) = stack.pop() {
            for &p in &rev[q as usize] {
                if !live[p as usize] {
                    live[p as usize] = true;
                    stack.push(p);
                }
            }
        }
        live
    }

    /// Language-equivalent minimal automaton in canonical numbering.
    pub fn minimize(&self) -> Dfa {
        let colors: Vec<u32> = self.accept.iter().map(|&a| a as u32).collect();
        let (trans, colors) = minimize_colored(self.num_symbols(), &self.trans, &colors, 0);
        Dfa {
            tracks: self.tracks.clone(),
            trans,
            accept: colors.into_iter().map(|c| c == 1).collect(),
        }
    }

    pub fn complement(&self) -> Dfa {
        Dfa {
            tracks: self.tracks.clone(),
            trans: self.trans.clone(),
            accept: self.accept.iter().map(|a| !a).collect(),
        }
    }

    /// Synchronized product over the union of both track lists. Each operand
    /// ignores the columns of tracks it lacks.
    pub fn product(&self, other: &Dfa, op: BoolOp) -> Dfa {
        let mut tracks: Vec<String> = self.tracks.iter().chain(other.tracks.iter()).cloned().collect();
        tracks.sort();
        tracks.dedup();
        let nsyms = 1usize << tracks.len();
        let ma = restriction_map(&tracks, &self.tracks);
        let mb = restriction_map(&tracks, &other.tracks);
        let (na, nb) = (self.num_states(), other.num_states());

        let dense = na * nb <= 1 << 22;
        let mut dense_ids = if dense { vec![u32::MAX; na * nb] } else { Vec::new() };
        let mut sparse_ids: HashMap<(u32, u32), u32> = HashMap::new();
        let mut pairs: Vec<(u32, u32)> = vec![(0, 0)];
        if dense {
            dense_ids[0] = 0;
        } else {
            sparse_ids.insert((0, 0), 0);
        }
        let mut trans = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            for sym in 0..nsyms {
                let t = (self.step(p, ma[sym] as usize), other.step(q, mb[sym] as usize));
                let fresh = pairs.len() as u32;
                let id = if dense {
                    let slot = &mut dense_ids[t.0 as usize * nb + t.1 as usize];
                    if *slot == u32::MAX {
                        *slot = fresh;
                    }
                    *slot
                } else {
                    *sparse_ids.entry(t).or_insert(fresh)
                };
                if id == fresh {
                    pairs.push(t);
                }
                trans.push(id);
            }
            i += 1;
        }
        let accept = pairs
            .iter()
            .map(|&(p, q)| op.apply(self.is_accepting(p), other.is_accepting(q)))
            .collect();
        Dfa { tracks, trans, accept }.minimize()
    }

    pub fn and(&self, other: &Dfa) -> Dfa {
        self.product(other, BoolOp::And)
    }

    pub fn or(&self, other: &Dfa) -> Dfa {
        self.product(other, BoolOp::Or)
    }

    /// Existential projection of `track` with leading-zero saturation.
    pub fn project(&self, track: &str) -> Result<Dfa, AutomataError> {
        self.project_limited(track, None).map(|(d, _)| d)
    }

    /// As [`Dfa::project`], failing once the subset construction exceeds
    /// `limit` states.
    pub fn project_limited(&self, track: &str, limit: Option<usize>) -> Result<(Dfa, ProjectStats), AutomataError> {
        let pos = self
            .tracks
            .iter()
            .position(|t| t == track)
            .ok_or_else(|| AutomataError::UnknownTrack(track.to_string()))?;
        let k = self.width();
        let nsyms_old = self.num_symbols();
        let tracks: Vec<String> = self.tracks.iter().filter(|t| *t != track).cloned().collect();
        let nsyms = 1usize << tracks.len();
        let low_mask = (1usize << (k - 1 - pos)) - 1;
        let erased_bit = 1usize << (k - 1 - pos);
        // Old symbols for new symbol s with the erased digit 0 or 1.
        let lift = |s: usize| {
            let base = ((s & !low_mask) << 1) | (s & low_mask);
            (base, base | erased_bit)
        };

        // Dead states never contribute to acceptance; drop them from subsets.
        let live = self.live_mask();
        let dead_index = |q: u32| !live[q as usize];

        // Leading-zero closure of the initial state: the erased track may
        // need more digits than the surviving ones.
        let (z0, z1) = lift(0);
        let mut seen = vec![false; self.num_states()];
        let mut stack = vec![0u32];
        seen[0] = true;
        while let Some(q) = stack.pop() {
            for sym in [z0, z1] {
                let t = self.step(q, sym);
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    stack.push(t);
                }
            }
        }
        let init: Vec<u32> = (0..self.num_states() as u32)
            .filter(|&q| seen[q as usize] && !dead_index(q))
            .collect();

        let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut subsets: Vec<Vec<u32>> = vec![init.clone()];
        ids.insert(init, 0);
        let mut trans: Vec<u32> = Vec::new();
        let mut stamp = vec![0u32; self.num_states()];
        let mut generation = 0u32;
        let mut buf: Vec<u32> = Vec::new();
        let mut i = 0;
        while i < subsets.len() {
            for s in 0..nsyms {
                let (a, b) = lift(s);
                buf.clear();
                generation = generation.wrapping_add(1);
                if generation == 0 {
                    stamp.iter_mut().for_each(|x| *x = 0);
                    generation = 1;
                }
                let tag = generation;
                for &q in &subsets[i] {
                    let base = q as usize * nsyms_old;
                    for t in [self.trans[base + a], self.trans[base + b]] {
                        if stamp[t as usize] != tag && !dead_index(t) {
                            stamp[t as usize] = tag;
                            buf.push(t);
                        }
                    }
                }
                buf.sort_unstable();
                let id = match ids.get(buf.as_slice()) {
                    Some(&id) => id,
                    None => {
                        let id = subsets.len() as u32;
                        if let Some(limit) = limit {
                            if subsets.len() >= limit {
                                return Err(AutomataError::ResourceLimit {
                                    states: subsets.len() + 1,
                                    limit,
                                });
                            }
                        }
                        subsets.push(buf.clone());
                        ids.insert(buf.clone(), id);
                        id
                    }
                };
                trans.push(id);
            }
            i += 1;
        }
        let accept = subsets
            .iter()
            .map(|set| set.iter().any(|&q| self.accept[q as usize]))
            .collect();
        let stats = ProjectStats {
            subset_states: subsets.len(),
        };
        Ok((Dfa { tracks, trans, accept }.minimize(), stats))
    }

    /// Renames tracks; the resulting names must be distinct.
    pub fn rename(&self, from_to: &[(&str, &str)]) -> Result<Dfa, AutomataError> {
        for (from, _) in from_to {
            if !self.tracks.iter().any(|t| t == from) {
                return Err(AutomataError::UnknownTrack(from.to_string()));
            }
        }
        let new_names: Vec<String> = self
            .tracks
            .iter()
            .map(|t| {
                from_to
                    .iter()
                    .find(|(f, _)| f == t)
                    .map_or_else(|| t.clone(), |(_, to)| to.to_string())
            })
            .collect();
        let mut sorted = new_names.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != new_names.len() {
            return Err(AutomataError::InvalidTracks(new_names));
        }
        // Old symbol for each new symbol.
        let k = self.width();
        let old_pos_of_new: Vec<usize> = sorted
            .iter()
            .map(|n| new_names.iter().position(|m| m == n).unwrap())
            .collect();
        let nsyms = self.num_symbols();
        let map: Vec<usize> = (0..nsyms)
            .map(|s| {
                old_pos_of_new.iter().enumerate().fold(0usize, |acc, (j, &op)| {
                    acc | ((digit(s, k, j) as usize) << (k - 1 - op))
                })
            })
            .collect();
        let mut trans = Vec::with_capacity(self.trans.len());
        for q in 0..self.num_states() as u32 {
            for &old in &map {
                trans.push(self.step(q, old));
            }
        }
        let colors: Vec<u32> = self.accept.iter().map(|&a| a as u32).collect();
        let (trans, colors) = renumber(nsyms, &trans, &colors, 0);
        Ok(Dfa {
            tracks: sorted,
            trans,
            accept: colors.into_iter().map(|c| c == 1).collect(),
        })
    }

    /// Language equality modulo leading zero columns. On difference, returns
    /// a shortest distinguishing tuple (in track order).
    pub fn equivalent(&self, other: &Dfa) -> Result<Option<Vec<u64>>, AutomataError> {
        if self.tracks != other.tracks {
            return Err(AutomataError::TrackMismatch {
                left: self.tracks.clone(),
                right: other.tracks.clone(),
            });
        }
        let nsyms = self.num_symbols();
        type Pair = (u32, u32);
        let mut parent: HashMap<Pair, Option<(Pair, usize)>> = HashMap::new();
        let mut queue = VecDeque::new();
        parent.insert((0, 0), None);
        queue.push_back((0u32, 0u32));
        while let Some((p, q)) = queue.pop_front() {
            if self.is_accepting(p) != other.is_accepting(q) {
                let mut word = Vec::new();
                let mut cur = (p, q);
                while let Some(Some((prev, sym))) = parent.get(&cur) {
                    word.push(*sym);
                    cur = *prev;
                }
                word.reverse();
                return Ok(Some(decode_tuple(&word, self.width())));
            }
            for sym in 0..nsyms {
                let t = (self.step(p, sym), other.step(q, sym));
                if let Entry::Vacant(e) = parent.entry(t) {
                    e.insert(Some(((p, q), sym)));
                    queue.push_back(t);
                }
            }
        }
        Ok(None)
    }

    /// Zero-robust iff the minimized automaton loops on the all-zero column
    /// at its initial state.
    pub fn is_zero_robust(&self) -> bool {
        self.minimize().step(0, 0) == 0
    }

    /// The first `count` accepted tuples, ordered by numeral length and then
    /// lexicographically by column word. For one track this is increasing
    /// numeric order. Values are limited to 64-bit naturals.
    pub fn enumerate_accepted(&self, count: usize) -> Vec<Vec<u64>> {
        const MAX_LEN: usize = 64;
        let n = self.num_states();
        let nsyms = self.num_symbols();
        let mut out = Vec::new();
        if count == 0 {
            return out;
        }
        // reach[r][q]: an accepting state is reachable from q in exactly r steps
        let mut reach: Vec<Vec<bool>> = vec![self.accept.clone()];
        for r in 1..=MAX_LEN {
            let prev = &reach[r - 1];
            let cur: Vec<bool> = (0..n)
                .map(|q| (0..nsyms).any(|a| prev[self.trans[q * nsyms + a] as usize]))
                .collect();
            reach.push(cur);
        }
        if self.accept[0] {
            out.push(vec![0; self.width()]);
        }
        if self.width() == 0 {
            return out;
        }
        let mut word = Vec::new();
        for len in 1..=MAX_LEN {
            if out.len() >= count {
                break;
            }
            // first column must be nonzero, otherwise it pads a shorter word
            for first in 1..nsyms {
                let q = self.step(0, first);
                if !reach[len - 1][q as usize] {
                    continue;
                }
                word.clear();
                word.push(first);
                self.dfs_accepted(q, len - 1, &reach, &mut word, &mut out, count);
                if out.len() >= count {
                    break;
                }
            }
        }
        out.truncate(count);
        out
    }

    fn dfs_accepted(
        &self,
        q: u32,
        remaining: usize,
        reach: &[Vec<bool>],
        word: &mut Vec<usize>,
        out: &mut Vec<Vec<u64>>,
        count: usize,
    ) {
        if out.len() >= count {
            return;
        }
        if remaining == 0 {
            out.push(decode_tuple(word, self.width()));
            return;
        }
        for a in 0..self.num_symbols() {
            let t = self.step(q, a);
            if reach[remaining - 1][t as usize] {
                word.push(a);
                self.dfs_accepted(t, remaining - 1, reach, word, out, count);
                word.pop();
                if out.len() >= count {
                    return;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn less(x: &'static str, y: &'static str) -> Dfa {
        // 0 = equal so far, 1 = x < y decided, 2 = x > y decided
        Dfa::build(
            &[x, y],
            0u8,
            |&s, d| match s {
                0 if d[0] < d[1] => 1,
                0 if d[0] > d[1] => 2,
                s => s,
            },
            |&s| s == 1,
        )
    }

    fn equal(x: &'static str, y: &'static str) -> Dfa {
        Dfa::build(&[x, y], true, |&s, d| s && d[0] == d[1], |&s| s)
    }

    fn double(x: &'static str, y: &'static str) -> Dfa {
        // y = x + x, carry tracking
        Dfa::build(
            &[x, x, y],
            Some(0u8),
            |s, d| {
                let c = (*s)? as i32;
                let cin = d[2] as i32 + 2 * c - d[0] as i32 - d[1] as i32;
                (0..=1).contains(&cin).then_some(cin as u8)
            },
            |s| *s == Some(0),
        )
    }

    #[test]
    fn build_is_canonical_and_minimal() {
        let lt = less("x", "y");
        assert_eq!(lt.num_states(), 3);
        assert_eq!(lt.minimize(), lt);
        assert!(lt.accepts(&[1, 2]));
        assert!(!lt.accepts(&[2, 2]));
        assert!(lt.is_zero_robust());
        let flipped = less("y", "x").rename(&[("x", "y"), ("y", "x")]).unwrap();
        assert_eq!(flipped, lt);
    }

    #[test]
    fn product_laws() {
        let l = less("x", "y");
        assert_eq!(l.and(&l), l);
        let none = l.and(&l.complement());
        assert_eq!(none.num_states(), 1);
        assert!(!none.is_accepting(0));
        let chain = less("x", "y").and(&less("y", "z"));
        assert_eq!(chain.tracks(), ["x", "y", "z"]);
        assert!(chain.accepts(&[1, 2, 3]));
        assert!(!chain.accepts(&[1, 3, 2]));
    }

    #[test]
    fn complement_of_equality() {
        let ne = equal("x", "y").complement();
        assert!(ne.accepts(&[3, 5]));
        assert!(!ne.accepts(&[4, 4]));
        assert_eq!(ne.complement().minimize(), equal("x", "y"));
        let all = Dfa::universal(&["x"]);
        assert!(all.complement().enumerate_accepted(3).is_empty());
    }

    #[test]
    fn projection() {
        let p = equal("x", "y").project("x").unwrap();
        assert_eq!(p, Dfa::universal(&["y"]));
        let even = double("x", "y").project("x").unwrap();
        assert!(even.accepts(&[4]));
        assert!(!even.accepts(&[7]));
        assert_eq!(even.enumerate_accepted(4), vec![vec![0], vec![2], vec![4], vec![6]]);
        assert!(matches!(even.project("q"), Err(AutomataError::UnknownTrack(_))));
    }

    #[test]
    fn projection_needs_leading_zero_closure() {
        // x > y and exists x: true for every y, but x may need one more digit.
        let gt = less("y", "x");
        let p = gt.project("x").unwrap();
        assert_eq!(p, Dfa::universal(&["y"]));
        // exists y: y < x  accepts x >= 1
        let q = gt.project("y").unwrap();
        assert!(!q.accepts(&[0]));
        assert!(q.accepts(&[1]));
        // closed formula: forall y exists x: x > y
        let closed = gt.project("x").unwrap().complement().project("y").unwrap().complement();
        assert_eq!(closed.width(), 0);
        assert!(closed.is_accepting(0));
    }

    #[test]
    fn projection_limit() {
        let r = double("x", "y").project_limited("x", Some(1));
        assert!(matches!(r, Err(AutomataError::ResourceLimit { .. })));
    }

    #[test]
    fn equivalence_counterexample() {
        let even = double("x", "y").project("x").unwrap();
        assert_eq!(even.equivalent(&even.minimize()).unwrap(), None);
        let odd = even.complement();
        assert_eq!(even.equivalent(&odd).unwrap(), Some(vec![0]));
        assert!(even.equivalent(&less("x", "y")).is_err());
    }

    #[test]
    fn enumerate_two_tracks_skips_padding() {
        let eq = equal("x", "y");
        assert_eq!(
            eq.enumerate_accepted(4),
            vec![vec![0, 0], vec![1, 1], vec![2, 2], vec![3, 3]]
        );
        let finite = Dfa::build(&["n"], 0u8, |&s, d| (s * 2 + d[0]).min(9), |&s| s == 2 || s == 5);
        assert_eq!(finite.enumerate_accepted(10), vec![vec![2], vec![5]]);
    }

    #[test]
    fn from_parts_validation() {
        assert!(Dfa::from_parts(vec!["b".into(), "a".into()], vec![0; 4], vec![true]).is_err());
        assert!(Dfa::from_parts(vec!["a".into()], vec![0, 1], vec![true]).is_err());
        assert!(Dfa::from_parts(vec!["a".into()], vec![0, 0], vec![true]).is_ok());
    }

    #[test]
    fn live_state_count() {
        let eq = equal("x", "y");
        assert_eq!(eq.num_states(), 2);
        assert_eq!(eq.live_states(), 1);
    }
}
