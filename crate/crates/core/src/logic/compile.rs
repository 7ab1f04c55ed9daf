use std::collections::BTreeMap;

use sha2::{Digest, Sha256};

use super::ast::{Atom, Formula, Rel, Term};
use super::cache::CompileCache;
use super::LogicError;
use crate::automata::text::dfa_to_text;
use crate::automata::{BoolOp, Dfa};
use crate::sequences::SequenceId;

/// Integer linear form `sum(coef * var) + constant`. Variables with a zero
/// coefficient are kept so that they still become tracks.
#[derive(Clone, Debug, Default)]
struct Linear {
    coef: BTreeMap<String, i64>,
    constant: i64,
}

impl Linear {
    fn var(name: &str) -> Linear {
        Linear {
            coef: BTreeMap::from([(name.to_string(), 1)]),
            constant: 0,
        }
    }

    fn add_scaled(mut self, other: &Linear, k: i64) -> Linear {
        for (v, c) in &other.coef {
            *self.coef.entry(v.clone()).or_insert(0) += k * c;
        }
        self.constant += k * other.constant;
        self
    }

    fn scaled(&self, k: i64) -> Linear {
        Linear::default().add_scaled(self, k)
    }
}

/// Linear form of `t`. Every difference `a - b` inside `t` pushes the
/// condition `a - b >= 0` onto `guards`: an atom whose difference would go
/// negative is false.
fn linearize(t: &Term, guards: &mut Vec<Linear>) -> Linear {
    match t {
        Term::Var(v) => Linear::var(v),
        Term::Const(c) => Linear {
            coef: BTreeMap::new(),
            constant: *c as i64,
        },
        Term::Add(a, b) => {
            let la = linearize(a, guards);
            let lb = linearize(b, guards);
            la.add_scaled(&lb, 1)
        }
        Term::Sub(a, b) => {
            let la = linearize(a, guards);
            let lb = linearize(b, guards);
            let d = la.add_scaled(&lb, -1);
            guards.push(d.clone());
            d
        }
        Term::Scale(c, a) => linearize(a, guards).scaled(*c as i64),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Partial {
    /// Below every value from which the final comparison can still change.
    Low,
    Value(i128),
    High,
}

/// Automaton for `lin rel 0`, reading all tracks most significant digit
/// first. The state is the value of the form on the digits read so far,
/// saturated once it can no longer return towards zero.
fn linear_automaton(lin: &Linear, rel: Rel) -> Dfa {
    let names: Vec<&str> = lin.coef.keys().map(String::as_str).collect();
    let coefs: Vec<i128> = lin.coef.values().map(|&c| c as i128).collect();
    let c0 = lin.constant as i128;
    let pos: i128 = coefs.iter().filter(|&&c| c > 0).sum();
    let neg: i128 = -coefs.iter().filter(|&&c| c < 0).sum::<i128>();
    let hi = neg + c0.abs();
    let lo = -(pos + c0.abs());
    let holds = move |v: i128| match rel {
        Rel::Eq => v == 0,
        Rel::Ne => v != 0,
        Rel::Lt => v < 0,
        Rel::Le => v <= 0,
        Rel::Gt => v > 0,
        Rel::Ge => v >= 0,
    };
    Dfa::build(
        &names,
        Partial::Value(0),
        |s, digits| match *s {
            Partial::Value(v) => {
                let next = 2 * v + coefs.iter().zip(digits).map(|(&c, &d)| c * d as i128).sum::<i128>();
                if next > hi {
                    Partial::High
                } else if next < lo {
                    Partial::Low
                } else {
                    Partial::Value(next)
                }
            }
            other => other,
        },
        |s| match *s {
            Partial::Value(v) => holds(v + c0),
            Partial::High => holds(1),
            Partial::Low => holds(-1),
        },
    )
}

/// `s1[x] = s2[y]`, running both DFAOs side by side. `x` and `y` may be the
/// same variable.
fn sequence_automaton(s1: SequenceId, x: &str, s2: SequenceId, y: &str) -> Dfa {
    let (m1, m2) = (s1.dfao(), s2.dfao());
    Dfa::build(
        &[x, y],
        (0u32, 0u32),
        |&(p, q), d| (m1.step(p, d[0] as usize), m2.step(q, d[1] as usize)),
        |&(p, q)| m1.output(p) == m2.output(q),
    )
}

fn letter_automaton(s: SequenceId, x: &str, letter: u8) -> Dfa {
    let m = s.dfao();
    Dfa::build(
        &[x],
        0u32,
        |&p, d| m.step(p, d[0] as usize),
        |&p| *m.output(p) == letter,
    )
}

/// Named compiled predicates, each with its sorted free-variable signature.
#[derive(Clone, Debug, Default)]
pub struct PredicateStore {
    preds: BTreeMap<String, (Dfa, String)>,
    cache: Option<CompileCache>,
    limit: Option<usize>,
}

impl PredicateStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Reuses compiled definitions from `cache` when their formula and the
    /// predicates they call are unchanged.
    pub fn with_cache(mut self, cache: CompileCache) -> Self {
        self.cache = Some(cache);
        self
    }

    /// Caps the subset construction of every projection at `limit` states.
    pub fn with_limit(mut self, limit: Option<usize>) -> Self {
        self.limit = limit;
        self
    }

    pub fn cache(&self) -> Option<&CompileCache> {
        self.cache.as_ref()
    }

    pub fn get(&self, name: &str) -> Option<&Dfa> {
        self.preds.get(name).map(|(d, _)| d)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.preds.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.preds.keys().map(String::as_str)
    }

    /// Content hash of a stored predicate's serialized automaton.
    pub fn digest(&self, name: &str) -> Option<&str> {
        self.preds.get(name).map(|(_, h)| h.as_str())
    }

    /// Stores an already built automaton under `name`.
    pub fn insert(&mut self, name: &str, dfa: Dfa) -> Result<&Dfa, LogicError> {
        if self.preds.contains_key(name) {
            return Err(LogicError::Duplicate(name.to_string()));
        }
        let digest = hex::encode(Sha256::digest(dfa_to_text(&dfa).as_bytes()));
        let (d, _) = self.preds.entry(name.to_string()).or_insert((dfa, digest));
        Ok(d)
    }

    /// Compiles `f` and stores it under `name`.
    pub fn define(&mut self, name: &str, f: &Formula) -> Result<&Dfa, LogicError> {
        if self.preds.contains_key(name) {
            return Err(LogicError::Duplicate(name.to_string()));
        }
        let dfa = self.compile_cached(f)?;
        self.insert(name, dfa)
    }

    /// Compiles `f`, consulting the cache if one is attached.
    pub fn compile_cached(&self, f: &Formula) -> Result<Dfa, LogicError> {
        let Some(cache) = &self.cache else {
            return self.compiler().compile(f);
        };
        let key = self.cache_key(f)?;
        if let Some(d) = cache.load(&key)? {
            return Ok(d);
        }
        let d = self.compiler().compile(f)?;
        cache.save(&key, &d)?;
        Ok(d)
    }

    fn cache_key(&self, f: &Formula) -> Result<String, LogicError> {
        let mut deps = Vec::new();
        for name in f.calls() {
            let digest = self
                .digest(&name)
                .ok_or_else(|| LogicError::UnknownPredicate(name.clone()))?;
            deps.push((name.clone(), digest.to_string()));
        }
        Ok(CompileCache::key(f, &deps))
    }

    pub fn compiler(&self) -> Compiler<'_> {
        Compiler::new(self).with_limit(self.limit)
    }

    /// Truth value of a closed formula.
    pub fn eval_closed(&self, f: &Formula) -> Result<bool, LogicError> {
        let free = f.free_vars();
        if !free.is_empty() {
            return Err(LogicError::FreeVariables(free.into_iter().collect()));
        }
        let d = self.compile_cached(f)?;
        Ok(d.is_accepting(0))
    }

    /// For a false closed formula `A x1,...,xk body`, the least assignment
    /// (by numeral length, then digit order) falsifying `body`.
    pub fn counterexample(&self, f: &Formula) -> Result<Option<Vec<(String, u64)>>, LogicError> {
        let Formula::Forall(vars, body) = f else {
            return Ok(None);
        };
        let d = self.compile_cached(&Formula::not((**body).clone()))?;
        let Some(values) = d.enumerate_accepted(1).pop() else {
            return Ok(None);
        };
        let mut out: Vec<(String, u64)> = d.tracks().iter().cloned().zip(values).collect();
        for v in vars {
            if !out.iter().any(|(n, _)| n == v) {
                out.push((v.clone(), 0));
            }
        }
        Ok(Some(out))
    }
}

/// Size bookkeeping of one compilation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CompileStats {
    /// Largest minimized intermediate automaton.
    pub max_states: usize,
    /// Largest subset construction performed by a projection.
    pub max_subset_states: usize,
}

/// Translates formulas into minimal automata whose tracks are exactly the
/// formula's free variables.
pub struct Compiler<'a> {
    store: &'a PredicateStore,
    limit: Option<usize>,
    fresh: usize,
    stats: CompileStats,
}

impl<'a> Compiler<'a> {
    pub fn new(store: &'a PredicateStore) -> Self {
        Compiler {
            store,
            limit: None,
            fresh: 0,
            stats: CompileStats::default(),
        }
    }

    pub fn with_limit(mut self, limit: Option<usize>) -> Self {
        self.limit = limit;
        self
    }

    pub fn stats(&self) -> CompileStats {
        self.stats
    }

    fn note(&mut self, d: Dfa) -> Dfa {
        self.stats.max_states = self.stats.max_states.max(d.num_states());
        d
    }

    /// Fresh names start with `#`, which no parsed variable can.
    fn fresh_var(&mut self) -> String {
        let v = format!("#{}", self.fresh);
        self.fresh += 1;
        v
    }

    fn project(&mut self, d: Dfa, var: &str) -> Result<Dfa, LogicError> {
        if !d.tracks().iter().any(|t| t == var) {
            return Ok(d);
        }
        let (d, st) = d.project_limited(var, self.limit)?;
        self.stats.max_subset_states = self.stats.max_subset_states.max(st.subset_states);
        Ok(self.note(d))
    }

    fn and_all(&mut self, mut d: Dfa, others: Vec<Dfa>) -> Dfa {
        for o in others {
            d = d.and(&o);
            d = self.note(d);
        }
        d
    }

    /// Automaton for `var = t` together with the guards of `t`.
    fn bind(&mut self, var: &str, t: &Term) -> Vec<Dfa> {
        let mut guards = Vec::new();
        let lin = linearize(t, &mut guards).add_scaled(&Linear::var(var), -1);
        let mut out = vec![linear_automaton(&lin, Rel::Eq)];
        out.extend(guards.iter().map(|g| linear_automaton(g, Rel::Ge)));
        out
    }

    /// A variable standing for `t`: `t` itself when it is a variable,
    /// otherwise a fresh one with its defining constraints.
    fn term_var(&mut self, t: &Term, fresh: &mut Vec<String>, constraints: &mut Vec<Dfa>) -> String {
        if let Term::Var(v) = t {
            return v.clone();
        }
        let v = self.fresh_var();
        constraints.extend(self.bind(&v, t));
        fresh.push(v.clone());
        v
    }

    fn atom(&mut self, a: &Atom) -> Result<Dfa, LogicError> {
        let mut fresh = Vec::new();
        let mut constraints = Vec::new();
        let core = match a {
            Atom::Compare(l, rel, r) => {
                let mut guards = Vec::new();
                let lin = linearize(l, &mut guards).add_scaled(&linearize(r, &mut guards), -1);
                constraints.extend(guards.iter().map(|g| linear_automaton(g, Rel::Ge)));
                linear_automaton(&lin, *rel)
            }
            Atom::SeqEq(s1, t1, s2, t2) => {
                let x = self.term_var(t1, &mut fresh, &mut constraints);
                let y = self.term_var(t2, &mut fresh, &mut constraints);
                sequence_automaton(*s1, &x, *s2, &y)
            }
            Atom::SeqEqConst(s, t, c) => {
                let x = self.term_var(t, &mut fresh, &mut constraints);
                letter_automaton(*s, &x, *c)
            }
        };
        let mut d = self.and_all(core, constraints);
        for v in &fresh {
            d = self.project(d, v)?;
        }
        Ok(d)
    }

    fn call(&mut self, name: &str, args: &[Term]) -> Result<Dfa, LogicError> {
        let store = self.store;
        let pred = store
            .get(name)
            .ok_or_else(|| LogicError::UnknownPredicate(name.to_string()))?;
        let params = pred.tracks();
        if params.len() != args.len() {
            return Err(LogicError::Arity {
                name: name.to_string(),
                expected: params.len(),
                found: args.len(),
            });
        }
        let mut uses: BTreeMap<&str, usize> = BTreeMap::new();
        for a in args {
            if let Term::Var(v) = a {
                *uses.entry(v).or_insert(0) += 1;
            }
        }
        let mut renames: Vec<(String, String)> = Vec::new();
        let mut fresh = Vec::new();
        let mut constraints = Vec::new();
        for (p, a) in params.iter().zip(args) {
            let target = match a {
                Term::Var(v) if uses[v.as_str()] == 1 => v.clone(),
                _ => {
                    let v = self.fresh_var();
                    constraints.extend(self.bind(&v, a));
                    fresh.push(v.clone());
                    v
                }
            };
            renames.push((p.clone(), target));
        }
        let pairs: Vec<(&str, &str)> = renames.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let renamed = pred.rename(&pairs)?;
        let mut d = self.and_all(renamed, constraints);
        for v in &fresh {
            d = self.project(d, v)?;
        }
        Ok(d)
    }

    fn binary(&mut self, a: &Formula, b: &Formula, op: BoolOp) -> Result<Dfa, LogicError> {
        let da = self.compile(a)?;
        let db = self.compile(b)?;
        let d = da.product(&db, op);
        Ok(self.note(d))
    }

    /// Compiles `f` to a minimal automaton over its sorted free variables.
    pub fn compile(&mut self, f: &Formula) -> Result<Dfa, LogicError> {
        let d = match f {
            Formula::True => Dfa::universal(&[]),
            Formula::False => Dfa::empty(&[]),
            Formula::Atom(a) => self.atom(a)?,
            Formula::Not(x) => self.compile(x)?.complement(),
            Formula::And(a, b) => self.binary(a, b, BoolOp::And)?,
            Formula::Or(a, b) => self.binary(a, b, BoolOp::Or)?,
            Formula::Implies(a, b) => self.binary(a, b, BoolOp::Implies)?,
            Formula::Iff(a, b) => self.binary(a, b, BoolOp::Iff)?,
            Formula::Exists(vars, body) => {
                let mut d = self.compile(body)?;
                for v in vars {
                    d = self.project(d, v)?;
                }
                d
            }
            Formula::Forall(vars, body) => {
                let mut d = self.compile(body)?.complement();
                for v in vars {
                    d = self.project(d, v)?;
                }
                d.complement()
            }
            Formula::Call(name, args) => self.call(name, args)?,
        };
        Ok(self.note(d))
    }
}

/// Compiles a single atom; terms may be arbitrary.
pub fn atom_automaton(a: &Atom) -> Result<Dfa, LogicError> {
    let store = PredicateStore::new();
    Compiler::new(&store).atom(a)
}
