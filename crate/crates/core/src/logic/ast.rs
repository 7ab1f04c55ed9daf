use std::collections::BTreeSet;
use std::fmt;

use crate::sequences::SequenceId;

/// Presburger term over the naturals. Scaling is by literals only.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Const(u64),
    Add(Box<Term>, Box<Term>),
    /// `a - b`, defined only when `a >= b`; an atom mentioning an undefined
    /// difference is false.
    Sub(Box<Term>, Box<Term>),
    Scale(u64, Box<Term>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rel {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    Compare(Term, Rel, Term),
    /// `seq1[t1] = seq2[t2]`
    SeqEq(SequenceId, Term, SequenceId, Term),
    /// `seq[t] = letter`
    SeqEqConst(SequenceId, Term, u8),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Exists(Vec<String>, Box<Formula>),
    Forall(Vec<String>, Box<Formula>),
    Call(String, Vec<Term>),
}

#[allow(clippy::should_implement_trait)]
impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn add(a: Term, b: Term) -> Term {
        Term::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Term, b: Term) -> Term {
        Term::Sub(Box::new(a), Box::new(b))
    }

    pub fn scale(c: u64, t: Term) -> Term {
        Term::Scale(c, Box::new(t))
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) => {}
            Term::Add(a, b) | Term::Sub(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Term::Scale(_, t) => t.collect_vars(out),
        }
    }
}

#[allow(clippy::should_implement_trait)]
impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(vars: &[&str], f: Formula) -> Formula {
        Formula::Exists(vars.iter().map(|v| v.to_string()).collect(), Box::new(f))
    }

    pub fn forall(vars: &[&str], f: Formula) -> Formula {
        Formula::Forall(vars.iter().map(|v| v.to_string()).collect(), Box::new(f))
    }

    pub fn compare(a: Term, rel: Rel, b: Term) -> Formula {
        Formula::Atom(Atom::Compare(a, rel, b))
    }

    /// Free variables, sorted.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(Atom::Compare(a, _, b)) | Formula::Atom(Atom::SeqEq(_, a, _, b)) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Formula::Atom(Atom::SeqEqConst(_, t, _)) => t.collect_vars(out),
            Formula::Not(f) => f.collect_free(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free(out);
                b.collect_free(out);
            }
            Formula::Exists(vs, f) | Formula::Forall(vs, f) => {
                let mut inner = BTreeSet::new();
                f.collect_free(&mut inner);
                for v in vs {
                    inner.remove(v);
                }
                out.extend(inner);
            }
            Formula::Call(_, args) => args.iter().for_each(|t| t.collect_vars(out)),
        }
    }

    /// Names of stored predicates this formula calls, sorted.
    pub fn calls(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_calls(&mut out);
        out
    }

    fn collect_calls(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Call(name, _) => {
                out.insert(name.clone());
            }
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => f.collect_calls(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_calls(out);
                b.collect_calls(out);
            }
            _ => {}
        }
    }

    /// Right-nested disjunction of `parts`; `False` when empty.
    pub fn any(parts: Vec<Formula>) -> Formula {
        parts
            .into_iter()
            .rev()
            .reduce(|acc, f| Formula::or(f, acc))
            .unwrap_or(Formula::False)
    }
}

impl fmt::Display for Rel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rel::Eq => "=",
            Rel::Ne => "!=",
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Gt => ">",
            Rel::Ge => ">=",
        })
    }
}

fn seq_symbol(s: SequenceId) -> &'static str {
    match s {
        SequenceId::ThueMorse => "TM",
        SequenceId::Paperfolding => "PF",
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Const(c) => write!(f, "{c}"),
            Term::Add(a, b) => write!(f, "({a}+{b})"),
            Term::Sub(a, b) => write!(f, "({a}-{b})"),
            Term::Scale(c, t) => write!(f, "{c}*({t})"),
        }
    }
}

/// Fully parenthesized script syntax; parses back to the same formula.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("(0=0)"),
            Formula::False => f.write_str("(0=1)"),
            Formula::Atom(Atom::Compare(a, r, b)) => write!(f, "({a}{r}{b})"),
            Formula::Atom(Atom::SeqEq(s1, a, s2, b)) => {
                write!(f, "({}[{a}]={}[{b}])", seq_symbol(*s1), seq_symbol(*s2))
            }
            Formula::Atom(Atom::SeqEqConst(s, t, c)) => write!(f, "({}[{t}]={c})", seq_symbol(*s)),
            Formula::Not(x) => write!(f, "(~{x})"),
            Formula::And(a, b) => write!(f, "({a}&{b})"),
            Formula::Or(a, b) => write!(f, "({a}|{b})"),
            Formula::Implies(a, b) => write!(f, "({a}=>{b})"),
            Formula::Iff(a, b) => write!(f, "({a}<=>{b})"),
            Formula::Exists(vs, x) => write!(f, "(E {} {x})", vs.join(",")),
            Formula::Forall(vs, x) => write!(f, "(A {} {x})", vs.join(",")),
            Formula::Call(name, args) => {
                let args: Vec<String> = args.iter().map(|a| a.to_string()).collect();
                write!(f, "${name}({})", args.join(","))
            }
        }
    }
}
