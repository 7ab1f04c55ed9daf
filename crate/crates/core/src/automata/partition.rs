//! Partition refinement shared by DFA and DFAO minimization, plus the
//! breadth-first canonical renumbering every public automaton goes through.

use std::collections::VecDeque;

/// Refinable partition over `0..n` with in-place marking.
struct Partition {
    elems: Vec<u32>,
    loc: Vec<u32>,
    blk: Vec<u32>,
    start: Vec<u32>,
    end: Vec<u32>,
    marked: Vec<u32>,
    touched: Vec<u32>,
}

impl Partition {
    fn new(colors: &[u32]) -> Self {
        let n = colors.len();
        let mut elems: Vec<u32> = (0..n as u32).collect();
        elems.sort_by_key(|&e| (colors[e as usize], e));
        let mut loc = vec![0u32; n];
        let mut blk = vec![0u32; n];
        let mut start = Vec::new();
        let mut end = Vec::new();
        for (i, &e) in elems.iter().enumerate() {
            loc[e as usize] = i as u32;
            if i == 0 || colors[e as usize] != colors[elems[i - 1] as usize] {
                if i > 0 {
                    end.push(i as u32);
                }
                start.push(i as u32);
            }
            blk[e as usize] = start.len() as u32 - 1;
        }
        if n > 0 {
            end.push(n as u32);
        }
        let nb = start.len();
        Partition {
            elems,
            loc,
            blk,
            start,
            end,
            marked: vec![0; nb],
            touched: Vec::new(),
        }
    }

    fn blocks(&self) -> usize {
        self.start.len()
    }

    fn size(&self, b: u32) -> u32 {
        self.end[b as usize] - self.start[b as usize]
    }

    fn members(&self, b: u32) -> &[u32] {
        &self.elems[self.start[b as usize] as usize..self.end[b as usize] as usize]
    }

    fn mark(&mut self, e: u32) {
        let b = self.blk[e as usize] as usize;
        let i = self.loc[e as usize];
        let m = self.start[b] + self.marked[b];
        if i < m {
            return;
        }
        let other = self.elems[m as usize];
        self.elems.swap(i as usize, m as usize);
        self.loc[e as usize] = m;
        self.loc[other as usize] = i;
        if self.marked[b] == 0 {
            self.touched.push(b as u32);
        }
        self.marked[b] += 1;
    }

    /// Splits every touched block into marked and unmarked parts; returns
    /// `(old, new)` pairs where `new` holds the marked elements.
    fn split(&mut self, out: &mut Vec<(u32, u32)>) {
        out.clear();
        while let Some(b) = self.touched.pop() {
            let bi = b as usize;
            let m = self.marked[bi];
            self.marked[bi] = 0;
            if m == self.end[bi] - self.start[bi] {
                continue;
            }
            let nb = self.start.len() as u32;
            let s = self.start[bi];
            self.start.push(s);
            self.end.push(s + m);
            self.marked.push(0);
            self.start[bi] = s + m;
            for i in s..s + m {
                self.blk[self.elems[i as usize] as usize] = nb;
            }
            out.push((b, nb));
        }
    }
}

/// Coarsest partition of the states of a complete deterministic automaton
/// that respects `colors` and is stable under every symbol (Hopcroft).
/// Returns the block id of every state.
pub(crate) fn coarsest_stable_partition(nsyms: usize, trans: &[u32], colors: &[u32]) -> Vec<u32> {
    let n = colors.len();
    debug_assert_eq!(trans.len(), n * nsyms);
    if n == 0 {
        return Vec::new();
    }

    // Predecessor lists in CSR form, indexed by (symbol, target).
    let mut offs = vec![0u32; nsyms * n + 1];
    for q in 0..n {
        for a in 0..nsyms {
            let t = trans[q * nsyms + a] as usize;
            offs[a * n + t + 1] += 1;
        }
    }
    for i in 1..offs.len() {
        offs[i] += offs[i - 1];
    }
    let mut fill = offs.clone();
    let mut preds = vec![0u32; n * nsyms];
    for q in 0..n {
        for a in 0..nsyms {
            let t = trans[q * nsyms + a] as usize;
            let slot = &mut fill[a * n + t];
            preds[*slot as usize] = q as u32;
            *slot += 1;
        }
    }

    let mut part = Partition::new(colors);
    let mut in_work = vec![true; part.blocks()];
    let mut work: Vec<u32> = (0..part.blocks() as u32).collect();
    if let Some(largest) = (0..part.blocks() as u32).max_by_key(|&b| part.size(b)) {
        in_work[largest as usize] = false;
        work.retain(|&b| b != largest);
    }

    let mut splitter = Vec::new();
    let mut splits = Vec::new();
    while let Some(b) = work.pop() {
        in_work[b as usize] = false;
        splitter.clear();
        splitter.extend_from_slice(part.members(b));
        for a in 0..nsyms {
            for &q in &splitter {
                let idx = a * n + q as usize;
                for k in offs[idx]..offs[idx + 1] {
                    part.mark(preds[k as usize]);
                }
            }
            part.split(&mut splits);
            for &(old, new) in &splits {
                in_work.push(false);
                if in_work[old as usize] {
                    in_work[new as usize] = true;
                    work.push(new);
                } else {
                    let pick = if part.size(new) <= part.size(old) { new } else { old };
                    in_work[pick as usize] = true;
                    work.push(pick);
                }
            }
        }
    }
    part.blk
}

/// Breadth-first renumbering from `initial`, exploring symbols in increasing
/// order. Returns the new id of every old state (`u32::MAX` if unreachable)
/// and the reachable old states in new-id order.
pub(crate) fn bfs_order(nsyms: usize, trans: &[u32], initial: u32) -> (Vec<u32>, Vec<u32>) {
    let n = trans.len() / nsyms.max(1);
    let mut id = vec![u32::MAX; n];
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    id[initial as usize] = 0;
    order.push(initial);
    queue.push_back(initial);
    while let Some(q) = queue.pop_front() {
        for a in 0..nsyms {
            let t = trans[q as usize * nsyms + a];
            if id[t as usize] == u32::MAX {
                id[t as usize] = order.len() as u32;
                order.push(t);
                queue.push_back(t);
            }
        }
    }
    (id, order)
}

/// Minimizes a complete automaton with state colors and returns it in
/// canonical numbering: `(transitions, colors)` with state 0 initial.
pub(crate) fn minimize_colored(nsyms: usize, trans: &[u32], colors: &[u32], initial: u32) -> (Vec<u32>, Vec<u32>) {
    let blk = coarsest_stable_partition(nsyms, trans, colors);
    let nb = blk.iter().copied().max().map_or(0, |m| m as usize + 1);
    let mut qtrans = vec![0u32; nb * nsyms];
    let mut qcolor = vec![0u32; nb];
    for q in 0..colors.len() {
        let b = blk[q] as usize;
        qcolor[b] = colors[q];
        for a in 0..nsyms {
            qtrans[b * nsyms + a] = blk[trans[q * nsyms + a] as usize];
        }
    }
    renumber(nsyms, &qtrans, &qcolor, blk[initial as usize])
}

/// Restricts to reachable states and renumbers canonically.
pub(crate) fn renumber(nsyms: usize, trans: &[u32], colors: &[u32], initial: u32) -> (Vec<u32>, Vec<u32>) {
    let (id, order) = bfs_order(nsyms, trans, initial);
    let mut ntrans = Vec::with_capacity(order.len() * nsyms);
    let mut ncolor = Vec::with_capacity(order.len());
    for &q in &order {
        ncolor.push(colors[q as usize]);
        for a in 0..nsyms {
            ntrans.push(id[trans[q as usize * nsyms + a] as usize]);
        }
    }
    (ntrans, ncolor)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_duplicate_states() {
        // 0 -a-> 1, 0 -b-> 2; 1 and 2 both accept and loop to themselves.
        let trans = [1, 2, 1, 1, 2, 2];
        let colors = [0, 1, 1];
        let (t, c) = minimize_colored(2, &trans, &colors, 0);
        assert_eq!(c, vec![0, 1]);
        assert_eq!(t, vec![1, 1, 1, 1]);
    }

    #[test]
    fn distinguishes_by_distance() {
        // A chain 0 -> 1 -> 2 -> 3 (accepting sink): all four distinct.
        let trans = [1, 2, 3, 3];
        let colors = [0, 0, 0, 1];
        let (t, c) = minimize_colored(1, &trans, &colors, 0);
        assert_eq!(c, vec![0, 0, 0, 1]);
        assert_eq!(t, vec![1, 2, 3, 3]);
    }

    #[test]
    fn drops_unreachable() {
        let trans = [0, 0, 1, 0];
        let colors = [0, 1];
        let (t, c) = minimize_colored(2, &trans, &colors, 0);
        assert_eq!(c, vec![0]);
        assert_eq!(t, vec![0, 0]);
    }
}
