//! Random automata and the algebraic property checks shared by the test
//! targets.

#![allow(dead_code)]

use ccexp::automata::{BoolOp, Dfa, Dfao};
use rand::seq::SliceRandom;
use rand::Rng;

/// Random zero-robust DFA: the initial state loops on the all-zero column.
pub fn random_dfa(rng: &mut impl Rng, tracks: &[&str], max_states: usize) -> Dfa {
    let mut sorted: Vec<String> = tracks.iter().map(|t| t.to_string()).collect();
    sorted.sort();
    let n = rng.gen_range(1..=max_states);
    let nsyms = 1 << sorted.len();
    let mut trans: Vec<u32> = (0..n * nsyms).map(|_| rng.gen_range(0..n as u32)).collect();
    trans[0] = 0;
    let accept = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    Dfa::from_parts(sorted, trans, accept).unwrap()
}

/// The same automaton with states other than 0 renumbered at random.
pub fn shuffle_states(rng: &mut impl Rng, d: &Dfa) -> Dfa {
    let n = d.num_states();
    let mut perm: Vec<u32> = (1..n as u32).collect();
    perm.shuffle(rng);
    perm.insert(0, 0);
    let mut inv = vec![0u32; n];
    for (old, &new) in perm.iter().enumerate() {
        inv[new as usize] = old as u32;
    }
    let nsyms = d.num_symbols();
    let mut trans = Vec::with_capacity(n * nsyms);
    let mut accept = Vec::with_capacity(n);
    for &old in &inv {
        for a in 0..nsyms {
            trans.push(perm[d.step(old, a) as usize]);
        }
        accept.push(d.is_accepting(old));
    }
    Dfa::from_parts(d.tracks().to_vec(), trans, accept).unwrap()
}

/// Random minimal single-input DFAO with outputs in `0..3`.
pub fn random_minimal_dfao(rng: &mut impl Rng, max_states: usize) -> Dfao<u8> {
    loop {
        let n = rng.gen_range(1..=max_states);
        let table: Vec<[u32; 2]> = (0..n)
            .map(|_| [rng.gen_range(0..n as u32), rng.gen_range(0..n as u32)])
            .collect();
        let out = (0..n).map(|_| rng.gen_range(0..3u8)).collect();
        let m = Dfao::from_table(&table, out).unwrap().minimize();
        if m.num_states() > 1 {
            return m;
        }
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Minimization is idempotent, canonical under renumbering, and preserves
/// the language; every operation keeps zero-robustness.
pub fn check_minimize_and_robustness(rng: &mut impl Rng) -> Result<(), String> {
    for _ in 0..200 {
        let d = random_dfa(rng, &["x", "y"], 8);
        let m = d.minimize();
        ensure(m.minimize() == m, || format!("minimize not idempotent on {d:?}"))?;
        ensure(shuffle_states(rng, &d).minimize() == m, || {
            format!("minimize not canonical on {d:?}")
        })?;
        ensure(d.equivalent(&m).unwrap().is_none(), || {
            format!("minimize changed language of {d:?}")
        })?;
        let e = random_dfa(rng, &["y", "z"], 6);
        let results = [
            m.clone(),
            d.complement(),
            d.product(&e, BoolOp::Xor),
            d.project("y").unwrap(),
        ];
        for r in &results {
            ensure(r.is_zero_robust(), || format!("lost zero-robustness: {r:?}"))?;
        }
    }
    Ok(())
}

/// Products, complement and projection agree with set operations on all
/// values below 64.
pub fn check_set_semantics(rng: &mut impl Rng) -> Result<(), String> {
    for _ in 0..20 {
        let a = random_dfa(rng, &["x", "y"], 5);
        let b = random_dfa(rng, &["x", "y"], 5);
        let c = random_dfa(rng, &["x"], 4);
        let ops = [BoolOp::And, BoolOp::Or, BoolOp::Implies, BoolOp::Iff, BoolOp::Xor];
        let products: Vec<Dfa> = ops.iter().map(|&op| a.product(&b, op)).collect();
        let with_c = a.product(&c, BoolOp::And);
        let not_a = a.complement();
        for x in 0..64u64 {
            for y in 0..64u64 {
                let (pa, pb, pc) = (a.accepts(&[x, y]), b.accepts(&[x, y]), c.accepts(&[x]));
                for (op, p) in ops.iter().zip(&products) {
                    ensure(p.accepts(&[x, y]) == op.apply(pa, pb), || {
                        format!("{op:?} at ({x},{y})")
                    })?;
                }
                ensure(with_c.accepts(&[x, y]) == (pa && pc), || {
                    format!("cylindrified and at ({x},{y})")
                })?;
                ensure(not_a.accepts(&[x, y]) != pa, || format!("complement at ({x},{y})"))?;
            }
        }
        // A witness, if any, needs at most |x| + states digits: leading
        // columns only grow the reachable set (zero self-loop at the start).
        let ex = a.project("y").unwrap();
        let bound = 1u64 << (6 + a.num_states());
        for x in 0..64u64 {
            let brute = (0..bound).any(|y| a.accepts(&[x, y]));
            ensure(ex.accepts(&[x]) == brute, || format!("projection at x={x}"))?;
        }
    }
    Ok(())
}

/// Reachable cross products of minimal DFAOs are minimal.
pub fn check_cross_minimality(rng: &mut impl Rng, pairs: usize) -> Result<(), String> {
    for _ in 0..pairs {
        let m1 = random_minimal_dfao(rng, 6);
        let m2 = random_minimal_dfao(rng, 6);
        let c = m1.cross(&m2).map_err(|e| e.to_string())?;
        ensure(c.is_minimal(), || format!("cross of {m1:?} and {m2:?} not minimal"))?;
        for n in 0..256u64 {
            ensure(*c.eval(&[n]) == (*m1.eval(&[n]), *m2.eval(&[n])), || {
                format!("cross value at {n}")
            })?;
        }
    }
    Ok(())
}
