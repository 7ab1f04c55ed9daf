use std::collections::{HashMap, VecDeque};

use super::partition::{minimize_colored, renumber};
use super::{decode_tuple, encode_tuple, AutomataError, Dfa, Symbol};

/// Deterministic finite automaton with output over base-2 digit tuples.
///
/// An empty track list means a single unnamed input (the usual k-DFAO of an
/// automatic sequence). State 0 is initial. Construction validates shape
/// only; use [`Dfao::minimize`] for the canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfao<O> {
    tracks: Vec<String>,
    trans: Vec<u32>,
    out: Vec<O>,
}

impl<O: Symbol> Dfao<O> {
    pub fn from_parts(tracks: Vec<String>, trans: Vec<u32>, out: Vec<O>) -> Result<Self, AutomataError> {
        if tracks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(AutomataError::InvalidTracks(tracks));
        }
        let nsyms = 1usize << tracks.len().max(1);
        if out.is_empty() || trans.len() != out.len() * nsyms {
            return Err(AutomataError::Malformed(format!(
                "{} states need {} transitions, found {}",
                out.len(),
                out.len() * nsyms,
                trans.len()
            )));
        }
        if trans.iter().any(|&t| t as usize >= out.len()) {
            return Err(AutomataError::Malformed("transition to unknown state".into()));
        }
        Ok(Dfao { tracks, trans, out })
    }

    /// Single-input DFAO from a table `trans[state] = [on 0, on 1]`.
    pub fn from_table(table: &[[u32; 2]], out: Vec<O>) -> Result<Self, AutomataError> {
        Self::from_parts(Vec::new(), table.iter().flatten().copied().collect(), out)
    }

    pub fn tracks(&self) -> &[String] {
        &self.tracks
    }

    pub fn width(&self) -> usize {
        self.tracks.len().max(1)
    }

    pub fn num_symbols(&self) -> usize {
        1 << self.width()
    }

    pub fn num_states(&self) -> usize {
        self.out.len()
    }

    #[inline]
    pub fn step(&self, q: u32, sym: usize) -> u32 {
        self.trans[q as usize * self.num_symbols() + sym]
    }

    pub fn output(&self, q: u32) -> &O {
        &self.out[q as usize]
    }

    pub fn outputs(&self) -> &[O] {
        &self.out
    }

    pub fn run(&self, word: &[usize]) -> u32 {
        word.iter().fold(0, |q, &s| self.step(q, s))
    }

    /// Output on a tuple of naturals, one per input track.
    pub fn eval(&self, values: &[u64]) -> &O {
        assert_eq!(values.len(), self.width(), "tuple arity");
        self.output(self.run(&encode_tuple(values)))
    }

    /// Distinct output values in order of first appearance.
    pub fn distinct_outputs(&self) -> Vec<O> {
        let mut seen = Vec::new();
        for o in &self.out {
            if !seen.contains(o) {
                seen.push(o.clone());
            }
        }
        seen
    }

    /// Leading zeros never change the output.
    pub fn is_zero_robust(&self) -> bool {
        self.minimize().step(0, 0) == 0
    }

    fn color_ids(&self) -> Vec<u32> {
        let mut ids: HashMap<&O, u32> = HashMap::new();
        self.out
            .iter()
            .map(|o| {
                let next = ids.len() as u32;
                *ids.entry(o).or_insert(next)
            })
            .collect()
    }

    fn recolor(&self, trans: Vec<u32>, colors: Vec<u32>) -> Dfao<O> {
        let mut palette: Vec<Option<O>> = Vec::new();
        for (q, &c) in self.color_ids().iter().enumerate() {
            if palette.len() <= c as usize {
                palette.resize(c as usize + 1, None);
            }
            palette[c as usize] = Some(self.out[q].clone());
        }
        Dfao {
            tracks: self.tracks.clone(),
            trans,
            out: colors
                .into_iter()
                .map(|c| palette[c as usize].clone().unwrap())
                .collect(),
        }
    }

    /// Unique minimal equivalent DFAO (partition refinement seeded by output
    /// classes), numbered canonically.
    pub fn minimize(&self) -> Dfao<O> {
        let colors = self.color_ids();
        let (trans, colors) = minimize_colored(self.num_symbols(), &self.trans, &colors, 0);
        self.recolor(trans, colors)
    }

    /// Drops unreachable states and renumbers canonically.
    pub fn trim(&self) -> Dfao<O> {
        let colors = self.color_ids();
        let (trans, colors) = renumber(self.num_symbols(), &self.trans, &colors, 0);
        self.recolor(trans, colors)
    }

    pub fn is_minimal(&self) -> bool {
        self.minimize().num_states() == self.num_states()
    }

    pub fn map_outputs<P: Symbol>(&self, f: impl Fn(&O) -> P) -> Dfao<P> {
        Dfao {
            tracks: self.tracks.clone(),
            trans: self.trans.clone(),
            out: self.out.iter().map(f).collect(),
        }
    }

    /// Reachable cross product of two minimal DFAOs with paired outputs.
    /// The result is minimal without further refinement.
    pub fn cross<P: Symbol>(&self, other: &Dfao<P>) -> Result<Dfao<(O, P)>, AutomataError> {
        if !self.is_minimal() || !other.is_minimal() {
            return Err(AutomataError::NotMinimal);
        }
        self.cross_with(other, |a, b| (a.clone(), b.clone()))
    }

    /// Reachable cross product combining outputs with `f`. Built breadth
    /// first from the pair of initial states, so only reachable pairs exist.
    pub fn cross_with<P: Symbol, R: Symbol>(
        &self,
        other: &Dfao<P>,
        f: impl Fn(&O, &P) -> R,
    ) -> Result<Dfao<R>, AutomataError> {
        if self.width() != other.width() {
            return Err(AutomataError::WidthMismatch(self.width(), other.width()));
        }
        if self.tracks != other.tracks && !self.tracks.is_empty() && !other.tracks.is_empty() {
            return Err(AutomataError::TrackMismatch {
                left: self.tracks.clone(),
                right: other.tracks.clone(),
            });
        }
        let nsyms = self.num_symbols();
        let mut ids: HashMap<(u32, u32), u32> = HashMap::new();
        let mut pairs = vec![(0u32, 0u32)];
        ids.insert((0, 0), 0);
        let mut queue = VecDeque::from([0usize]);
        let mut trans = Vec::new();
        while let Some(i) = queue.pop_front() {
            let (p, q) = pairs[i];
            for sym in 0..nsyms {
                let t = (self.step(p, sym), other.step(q, sym));
                let next = pairs.len() as u32;
                let id = *ids.entry(t).or_insert_with(|| {
                    pairs.push(t);
                    queue.push_back(next as usize);
                    next
                });
                trans.push(id);
            }
        }
        let out = pairs.iter().map(|&(p, q)| f(self.output(p), other.output(q))).collect();
        let tracks = if self.tracks.is_empty() {
            other.tracks.clone()
        } else {
            self.tracks.clone()
        };
        Ok(Dfao { tracks, trans, out })
    }

    /// Shortest input tuple reaching a state whose output satisfies `pred`.
    pub fn find_output(&self, pred: impl Fn(&O) -> bool) -> Option<Vec<u64>> {
        let nsyms = self.num_symbols();
        let mut parent: Vec<Option<(u32, usize)>> = vec![None; self.num_states()];
        let mut seen = vec![false; self.num_states()];
        let mut queue = VecDeque::from([0u32]);
        seen[0] = true;
        while let Some(q) = queue.pop_front() {
            if pred(self.output(q)) {
                let mut word = Vec::new();
                let mut cur = q;
                while let Some((p, sym)) = parent[cur as usize] {
                    word.push(sym);
                    cur = p;
                }
                word.reverse();
                return Some(decode_tuple(&word, self.width()));
            }
            for sym in 0..nsyms {
                let t = self.step(q, sym);
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    parent[t as usize] = Some((q, sym));
                    queue.push_back(t);
                }
            }
        }
        None
    }
}

impl Dfao<bool> {
    /// The characteristic DFAO of a DFA's language.
    pub fn from_dfa(a: &Dfa) -> Dfao<bool> {
        let tracks = a.tracks().to_vec();
        if tracks.is_empty() {
            // a closed formula still reads one (ignored) digit per step
            let out = (0..a.num_states() as u32).map(|q| a.is_accepting(q)).collect();
            let trans = (0..a.num_states() as u32).flat_map(|q| [a.step(q, 0); 2]).collect();
            return Dfao { tracks, trans, out };
        }
        Dfao {
            tracks,
            trans: a.transitions().to_vec(),
            out: (0..a.num_states() as u32).map(|q| a.is_accepting(q)).collect(),
        }
    }
}

/// Combines acceptors whose languages partition a domain into one DFAO
/// returning the label of the accepting acceptor.
///
/// The acceptors are folded by iterated reachable cross product in the given
/// order. Inputs outside `domain` (or accepted by no acceptor when no domain
/// is given) produce `undefined`. Inside the domain exactly one acceptor must
/// accept, otherwise a witness tuple is reported.
pub fn acceptors_to_dfao<L: Symbol>(
    pairs: &[(Dfa, L)],
    domain: Option<&Dfa>,
    undefined: L,
) -> Result<Dfao<L>, AutomataError> {
    let first = pairs
        .first()
        .ok_or_else(|| AutomataError::Malformed("no acceptors".into()))?;
    let tracks = first.0.tracks().to_vec();
    for (a, _) in pairs {
        if a.tracks() != tracks.as_slice() {
            return Err(AutomataError::TrackMismatch {
                left: tracks.clone(),
                right: a.tracks().to_vec(),
            });
        }
    }
    if let Some(d) = domain {
        if d.tracks() != tracks.as_slice() {
            return Err(AutomataError::TrackMismatch {
                left: tracks,
                right: d.tracks().to_vec(),
            });
        }
    }

    let as_dfao = |a: &Dfa| Dfao::from_dfa(&a.minimize());
    let mut acc: Dfao<Vec<bool>> = match domain {
        Some(d) => as_dfao(d).map_outputs(|&b| vec![b]),
        None => Dfao {
            tracks: tracks.clone(),
            trans: vec![0; 1 << tracks.len().max(1)],
            out: vec![vec![true]],
        },
    };
    for (a, _) in pairs {
        acc = acc.cross_with(&as_dfao(a), |v, &b| {
            let mut v = v.clone();
            v.push(b);
            v
        })?;
    }

    let constrained = domain.is_some();
    let mut labels = Vec::with_capacity(acc.num_states());
    for q in 0..acc.num_states() as u32 {
        let v = acc.output(q);
        let in_domain = v[0];
        let hits: Vec<usize> = (0..pairs.len()).filter(|&i| v[i + 1]).collect();
        let label = match (in_domain, hits.len()) {
            (false, _) => undefined.clone(),
            (true, 1) => pairs[hits[0]].1.clone(),
            (true, 0) if !constrained => undefined.clone(),
            (true, k) => {
                let target = v.clone();
                let witness = acc.find_output(|o| *o == target).unwrap_or_default();
                let names: Vec<String> = hits.iter().map(|&i| pairs[i].1.encode()).collect();
                return Err(AutomataError::PartitionViolation {
                    witness,
                    detail: if k == 0 {
                        "no acceptor accepts".to_string()
                    } else {
                        format!("accepted by {}", names.join(", "))
                    },
                });
            }
        };
        labels.push(label);
    }
    Ok(Dfao {
        tracks: acc.tracks.clone(),
        trans: acc.trans.clone(),
        out: labels,
    }
    .minimize())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn thue_morse() -> Dfao<u8> {
        Dfao::from_table(&[[0, 1], [1, 0]], vec![0, 1]).unwrap()
    }

    #[test]
    fn evaluates_msd_first() {
        let tm = thue_morse();
        let got: Vec<u8> = (0..8).map(|i| *tm.eval(&[i])).collect();
        assert_eq!(got, vec![0, 1, 1, 0, 1, 0, 0, 1]);
        assert!(tm.is_zero_robust());
        assert!(tm.is_minimal());
    }

    #[test]
    fn merges_duplicates() {
        // states 1 and 2 behave identically
        let m = Dfao::from_table(&[[0, 1], [2, 0], [1, 0]], vec![0u8, 1, 1]).unwrap();
        let min = m.minimize();
        assert_eq!(min.num_states(), 2);
        assert_eq!(min.minimize(), min);
    }

    #[test]
    fn cross_with_itself_is_diagonal() {
        let tm = thue_morse();
        let c = tm.cross(&tm).unwrap();
        assert_eq!(c.num_states(), 2);
        assert!(c.is_minimal());
        assert_eq!(*c.eval(&[7]), (1, 1));
    }

    #[test]
    fn cross_rejects_non_minimal() {
        let m = Dfao::from_table(&[[0, 1], [2, 0], [1, 0]], vec![0u8, 1, 1]).unwrap();
        assert_eq!(m.cross(&thue_morse()), Err(AutomataError::NotMinimal));
    }

    #[test]
    fn single_acceptor_is_constant() {
        let all = Dfa::universal(&["n"]);
        let d = acceptors_to_dfao(&[(all, 7u8)], None, 0).unwrap();
        assert_eq!(d.num_states(), 1);
        assert_eq!(*d.eval(&[12]), 7);
    }

    #[test]
    fn partition_violation_has_witness() {
        let all = Dfa::universal(&["n"]);
        let odd = Dfa::build(&["n"], false, |_, d| d[0] == 1, |&s| s);
        let err = acceptors_to_dfao(&[(all, 1u8), (odd, 2u8)], None, 0).unwrap_err();
        match err {
            AutomataError::PartitionViolation { witness, .. } => assert_eq!(witness, vec![1]),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn parity_labels() {
        let odd = Dfa::build(&["n"], false, |_, d| d[0] == 1, |&s| s);
        let even = odd.complement();
        let d = acceptors_to_dfao(&[(even, 0u8), (odd, 1u8)], None, 9).unwrap();
        assert_eq!(d.num_states(), 2);
        assert_eq!(*d.eval(&[5]), 1);
        assert_eq!(*d.eval(&[0]), 0);
    }
}
