use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::catalog::*;
use super::prover::{Pred, Prover};
use super::TheoremError;
use crate::automata::{Dfa, Dfao, Symbol};
use crate::oracle::{circular_critical_exponent, critical_exponent, default_scan_bound, length_stats_oracle};
use crate::rational::Rational;
use crate::sequences::{window, SequenceId};

pub const TM_THEOREMS: [&str; 10] = [
    "prop1",
    "testpref",
    "testfac",
    "smallfactest",
    "largefactest",
    "dfao_prefix",
    "dfao_factor",
    "dfao_lcce",
    "dfao_gcce",
    "dfao_ace",
];

pub const THEOREMS: [&str; 15] = [
    "prop1",
    "testpref",
    "testfac",
    "smallfactest",
    "largefactest",
    "dfao_prefix",
    "dfao_factor",
    "dfao_lcce",
    "dfao_gcce",
    "dfao_ace",
    "pf_a",
    "pf_b",
    "pf_c",
    "pf_d",
    "pf_e",
];

/// Sequence a theorem is about, or `None` for an unknown name.
pub fn theorem_sequence(name: &str) -> Option<SequenceId> {
    if TM_THEOREMS.contains(&name) {
        Some(SequenceId::ThueMorse)
    } else if THEOREMS.contains(&name) {
        Some(SequenceId::Paperfolding)
    } else {
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    True,
    False,
    /// An automaton was built and passed its checks.
    Built,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::True => "true",
            Outcome::False => "false",
            Outcome::Built => "built",
        })
    }
}

/// Knobs for the oracle spot checks.
#[derive(Clone, Debug)]
pub struct RunOptions {
    pub seed: u64,
    /// Random `(n, s)` samples checked against the factor DFAO.
    pub factor_samples: usize,
    pub factor_max_n: u64,
    pub factor_max_s: u64,
    /// Prefix lengths `1..=prefix_max` checked against the prefix DFAO.
    pub prefix_max: u64,
    /// Lengths `1..=length_max` checked for lcce, gcce and ace.
    pub length_max: u64,
    /// Accepted values listed per predicate.
    pub first_count: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            seed: 1,
            factor_samples: 1000,
            factor_max_n: 512,
            factor_max_s: 4096,
            prefix_max: 500,
            length_max: 128,
            first_count: 20,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TheoremReport {
    pub name: String,
    pub outcome: Outcome,
    /// States of the main automaton.
    pub states: usize,
    /// Extra `key=value` facts for the header line.
    pub info: Vec<(String, String)>,
    pub state_counts: Vec<(String, usize)>,
    /// Predicate name and its first accepted values, already formatted.
    pub first: Vec<(String, String)>,
    pub witness: Option<String>,
    pub elapsed: Duration,
    pub artifacts: Vec<PathBuf>,
}

impl TheoremReport {
    fn new(name: &str) -> Self {
        TheoremReport {
            name: name.to_string(),
            outcome: Outcome::Built,
            states: 0,
            info: Vec::new(),
            state_counts: Vec::new(),
            first: Vec::new(),
            witness: None,
            elapsed: Duration::ZERO,
            artifacts: Vec::new(),
        }
    }

    pub fn verified(&self) -> bool {
        self.outcome != Outcome::False
    }

    pub fn state_count(&self, name: &str) -> Option<usize> {
        self.state_counts.iter().find(|(n, _)| n == name).map(|&(_, k)| k)
    }

    pub fn first_values(&self, pred: &str) -> Option<&str> {
        self.first.iter().find(|(n, _)| n == pred).map(|(_, v)| v.as_str())
    }

    pub fn info(&self, key: &str) -> Option<&str> {
        self.info.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// Text form; without `timing` the elapsed time prints as 0 so output is
    /// reproducible.
    pub fn render(&self, timing: bool) -> String {
        let ms = if timing { self.elapsed.as_millis() } else { 0 };
        let mut out = format!(
            "theorem {} result={} states={} elapsed_ms={ms}",
            self.name, self.outcome, self.states
        );
        for (k, v) in &self.info {
            out.push_str(&format!(" {k}={v}"));
        }
        out.push('\n');
        for (n, k) in &self.state_counts {
            out.push_str(&format!("states {n}: {k}\n"));
        }
        for (p, v) in &self.first {
            out.push_str(&format!("first {p}: {v}\n"));
        }
        if let Some(w) = &self.witness {
            out.push_str(&format!("witness: {w}\n"));
        }
        out
    }
}

impl fmt::Display for TheoremReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(true))
    }
}

/// States excluding a dead sink.
fn states(d: &Dfa) -> usize {
    d.live_states().max(1)
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Runs the named theorem on `prover`, which must be for the theorem's
/// sequence.
pub fn run_theorem(prover: &mut Prover, name: &str, opts: &RunOptions) -> Result<TheoremReport, TheoremError> {
    let seq = theorem_sequence(name).ok_or_else(|| TheoremError::Unknown(name.to_string()))?;
    if seq != prover.sequence() {
        return Err(TheoremError::WrongSequence(name.to_string(), seq.to_string()));
    }
    let start = Instant::now();
    let mut r = TheoremReport::new(name);
    match name {
        "prop1" => prop1(seq, &mut r),
        "testpref" => coverage(prover, Pred::PrefEq, &prefix_exponents(), opts, &mut r)?,
        "testfac" => coverage(prover, Pred::FacEq, &factor_exponents(), opts, &mut r)?,
        "smallfactest" => coverage(prover, Pred::FacSmall, &least_exponents(), opts, &mut r)?,
        "largefactest" => coverage(prover, Pred::FacLarge, &greatest_exponents(), opts, &mut r)?,
        "dfao_prefix" => {
            let m = prover.prefix_dfao(&prefix_exponents())?;
            check_prefix(seq, &m, opts, &mut r)?;
            finish_dfao(prover, &m, &mut r)?;
        }
        "dfao_factor" => {
            let m = prover.factor_dfao(&factor_exponents())?;
            check_factor(seq, &m, opts, &mut r)?;
            finish_dfao(prover, &m, &mut r)?;
        }
        "dfao_lcce" => {
            let m = prover.lcce_dfao(&least_exponents())?;
            check_lengths(seq, &m, opts, &mut r, |lo, _, _| Some(lo))?;
            finish_dfao(prover, &m, &mut r)?;
        }
        "dfao_gcce" => {
            let m = prover.gcce_dfao(&greatest_exponents())?;
            check_lengths(seq, &m, opts, &mut r, |_, hi, _| Some(hi))?;
            finish_dfao(prover, &m, &mut r)?;
        }
        "dfao_ace" => ace(prover, &factor_exponents(), 31, opts, &mut r)?,
        "pf_a" => coverage(prover, Pred::PrefEq, &pf_prefix_exponents(), opts, &mut r)?,
        "pf_b" => coverage(prover, Pred::FacEq, &pf_factor_exponents(), opts, &mut r)?,
        "pf_c" => coverage(prover, Pred::FacSmall, &pf_least_exponents(), opts, &mut r)?,
        "pf_d" => coverage(prover, Pred::FacLarge, &pf_greatest_exponents(), opts, &mut r)?,
        "pf_e" => ace(prover, &pf_factor_exponents(), 16, opts, &mut r)?,
        _ => unreachable!("checked by theorem_sequence"),
    }
    r.elapsed = start.elapsed();
    Ok(r)
}

/// Every distinct factor of length 1..=64 of the length-2048 prefix has
/// critical exponent 1, 3/2 or 2, and exactly 2 from length 4 on.
fn prop1(seq: SequenceId, r: &mut TheoremReport) {
    let allowed = [Rational::ONE, Rational::of(3, 2), Rational::integer(2)];
    let prefix = window(seq, 0, 2048);
    let mut seen = HashSet::new();
    for len in 1..=64usize {
        for w in prefix.windows(len) {
            if !seen.insert(w) {
                continue;
            }
            let e = critical_exponent(w).expect("nonempty");
            if !allowed.contains(&e) || (len >= 4 && e != Rational::integer(2)) {
                r.outcome = Outcome::False;
                r.witness = Some(format!("{} has critical exponent {e}", join(w.iter())));
                return;
            }
        }
    }
    r.outcome = Outcome::True;
    r.states = 0;
    r.info.push(("factors".into(), seen.len().to_string()));
}

/// First occurrence `(n, s)` accepted by a two-track `(n, s)` predicate:
/// least `n`, then least `s`.
fn first_occurrence(fac: &Dfa, faceq: &Dfa) -> Option<(u64, u64)> {
    let n = fac.enumerate_accepted(1).pop()?[0];
    (0..).find(|&s| faceq.accepts(&[n, s])).map(|s| (n, s))
}

/// Evaluates `An (n>=1) => (one of the kind predicates over set holds)`.
fn coverage(
    prover: &mut Prover,
    kind: Pred,
    set: &[Rational],
    opts: &RunOptions,
    r: &mut TheoremReport,
) -> Result<(), TheoremError> {
    let items: Vec<(Pred, Rational)> = set.iter().map(|&x| (kind, x)).collect();
    prover.ensure(&items)?;
    let shown: &[Pred] = match kind {
        Pred::PrefEq => &[Pred::PrefGe, Pred::PrefGt, Pred::PrefEq],
        Pred::FacEq => &[Pred::FacGe, Pred::FacGt, Pred::FacEq],
        Pred::FacSmall => &[Pred::Fac, Pred::FacSmall],
        _ => &[Pred::FacLarge],
    };
    for &x in set {
        for &k in shown {
            let d = prover.predicate(k, x)?;
            r.state_counts.push((k.name(x), states(&d)));
        }
    }
    for &x in set {
        let d = prover.predicate(kind, x)?;
        let values = if kind == Pred::FacEq {
            let fac = prover.predicate(Pred::Fac, x)?;
            first_occurrence(&fac, &d).map_or(String::new(), |(n, s)| format!("({n},{s})"))
        } else {
            join(d.enumerate_accepted(opts.first_count).into_iter().map(|v| v[0]))
        };
        r.first.push((kind.name(x), values));
    }
    let src = Prover::coverage_formula(kind, set);
    let f = prover.parse(&src)?;
    let store = prover.store();
    let closed = store.compile_cached(&f)?;
    r.states = closed.num_states();
    if closed.is_accepting(0) {
        r.outcome = Outcome::True;
    } else {
        r.outcome = Outcome::False;
        if let Some(cx) = store.counterexample(&f)? {
            r.witness = Some(join(cx.into_iter().map(|(v, x)| format!("{v}={x}"))));
        }
    }
    Ok(())
}

fn distinct_defined<O: Symbol>(m: &Dfao<Option<O>>) -> usize {
    m.distinct_outputs().into_iter().filter(Option::is_some).count()
}

fn finish_dfao<O: Symbol>(prover: &Prover, m: &Dfao<Option<O>>, r: &mut TheoremReport) -> Result<(), TheoremError> {
    r.states = m.num_states();
    r.info
        .push(("distinct_outputs".into(), distinct_defined(m).to_string()));
    if let Some(p) = prover.save_dfao(&r.name, m)? {
        r.artifacts.push(p);
    }
    Ok(())
}

fn mismatch(r: &mut TheoremReport, at: String, got: impl fmt::Debug, want: impl fmt::Debug) {
    r.outcome = Outcome::False;
    r.witness = Some(format!("{at}: automaton {got:?}, oracle {want:?}"));
}

fn check_prefix(
    seq: SequenceId,
    m: &Dfao<Option<Rational>>,
    opts: &RunOptions,
    r: &mut TheoremReport,
) -> Result<(), TheoremError> {
    let prefix = window(seq, 0, opts.prefix_max);
    for n in 1..=opts.prefix_max {
        let want = circular_critical_exponent(&prefix[..n as usize])?;
        let got = *m.eval(&[n]);
        if got != Some(want) {
            mismatch(r, format!("n={n}"), got, want);
            return Ok(());
        }
    }
    r.info.push(("checked".into(), opts.prefix_max.to_string()));
    Ok(())
}

fn check_factor(
    seq: SequenceId,
    m: &Dfao<Option<Rational>>,
    opts: &RunOptions,
    r: &mut TheoremReport,
) -> Result<(), TheoremError> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.factor_samples {
        let n = rng.gen_range(1..=opts.factor_max_n);
        let s = rng.gen_range(0..=opts.factor_max_s);
        let want = circular_critical_exponent(&window(seq, s, n))?;
        let got = *m.eval(&[n, s]);
        if got != Some(want) {
            mismatch(r, format!("n={n} s={s}"), got, want);
            return Ok(());
        }
    }
    r.info.push(("checked".into(), opts.factor_samples.to_string()));
    Ok(())
}

fn check_lengths<O: Symbol + fmt::Debug>(
    seq: SequenceId,
    m: &Dfao<Option<O>>,
    opts: &RunOptions,
    r: &mut TheoremReport,
    expect: impl Fn(Rational, Rational, &BTreeSet<Rational>) -> Option<O>,
) -> Result<(), TheoremError> {
    for n in 1..=opts.length_max {
        let (lo, hi, set) = length_stats_oracle(seq, n, default_scan_bound(n))?;
        let want = expect(lo, hi, &set);
        let got = m.eval(&[n]);
        if *got != want {
            mismatch(r, format!("n={n}"), got, want);
            return Ok(());
        }
    }
    r.info.push(("checked".into(), opts.length_max.to_string()));
    Ok(())
}

fn ace(
    prover: &mut Prover,
    set: &[Rational],
    expected_sets: usize,
    opts: &RunOptions,
    r: &mut TheoremReport,
) -> Result<(), TheoremError> {
    let m = prover.ace_dfao(set)?;
    let seq = prover.sequence();
    check_lengths(seq, &m, opts, r, |_, _, s| AceEncoding::from_set(set, s))?;
    finish_dfao(prover, &m, r)?;
    let distinct = distinct_defined(&m);
    if distinct != expected_sets && r.outcome != Outcome::False {
        r.outcome = Outcome::False;
        r.witness = Some(format!("{distinct} distinct sets, expected {expected_sets}"));
    }
    let mut outs: Vec<AceEncoding> = m.distinct_outputs().into_iter().flatten().collect();
    outs.sort();
    r.first.push(("sets".into(), join(outs)));
    Ok(())
}
