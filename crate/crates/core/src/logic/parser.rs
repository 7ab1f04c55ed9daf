//! Parser for the script dialect (`def`/`eval` commands over first-order
//! formulas).
//!
//! ```text
//! def crep "(Aj ((j>=i)&(j+p<s+n)&(j+p<i+m)) => T[j]=T[j+p]) & ...":
//! eval testpref "An (n>=1) => ($prefeq11(n) | $prefeq21(n))":
//! first prefeq73 7:
//! #sequence pf
//! ```
//!
//! Quantifiers `E`/`A` take a comma-separated variable list (the first
//! variable may be glued on, as in `Aj`) and extend as far right as possible.
//! Precedence, loosest first: `<=>`, `=>` (right associative), `|`, `&`, `~`.
//! `T` indexes the current default sequence; `TM` and `PF` name one
//! explicitly.

use thiserror::Error;

use super::ast::{Atom, Formula, Rel, Term};
use crate::sequences::SequenceId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Def {
        name: String,
        formula: Formula,
    },
    Eval {
        name: String,
        formula: Formula,
    },
    /// List the first `count` accepted tuples of a stored predicate.
    First {
        name: String,
        count: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u64),
    Op(&'static str),
}

const OPS: [&str; 19] = [
    "<=>", "=>", "<=", ">=", "!=", "(", ")", "[", "]", ",", "$", "&", "|", "~", "=", "<", ">", "+", "-",
];

fn lex(src: &str, base: usize) -> Result<Vec<(Tok, usize)>, (usize, String)> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), base + start));
        } else if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = src[start..i]
                .parse()
                .map_err(|_| (base + start, "number too large".to_string()))?;
            out.push((Tok::Num(n), base + start));
        } else if c == b'*' {
            out.push((Tok::Op("*"), base + start));
            i += 1;
        } else if let Some(op) = OPS.iter().find(|op| src[i..].starts_with(**op)) {
            out.push((Tok::Op(op), base + start));
            i += op.len();
        } else {
            return Err((base + start, format!("unexpected character {:?}", c as char)));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    end: usize,
    default_seq: SequenceId,
}

type PResult<T> = Result<T, (usize, String)>;

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |&(_, o)| o)
    }

    fn err<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err((self.offset(), msg.into()))
    }

    fn eat(&mut self, op: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Op(o)) if *o == op) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, op: &str) -> PResult<()> {
        if self.eat(op) {
            Ok(())
        } else {
            self.err(format!("expected `{op}`"))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("expected identifier"),
        }
    }

    fn formula(&mut self) -> PResult<Formula> {
        if let Some(q) = self.quantifier()? {
            return Ok(q);
        }
        let lhs = self.implication()?;
        if self.eat("<=>") {
            let rhs = self.formula()?;
            return Ok(Formula::Iff(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn quantifier(&mut self) -> PResult<Option<Formula>> {
        let (kind, glued) = match self.peek() {
            Some(Tok::Ident(s)) if s.starts_with('A') || s.starts_with('E') => (s.as_bytes()[0], s[1..].to_string()),
            _ => return Ok(None),
        };
        self.pos += 1;
        let mut vars = Vec::new();
        if glued.is_empty() {
            vars.push(self.variable()?);
        } else {
            vars.push(glued);
        }
        while self.eat(",") {
            vars.push(self.variable()?);
        }
        let body = Box::new(self.formula()?);
        Ok(Some(if kind == b'A' {
            Formula::Forall(vars, body)
        } else {
            Formula::Exists(vars, body)
        }))
    }

    fn variable(&mut self) -> PResult<String> {
        let v = self.ident()?;
        if !v.starts_with(|c: char| c.is_ascii_lowercase()) {
            return self.err(format!("`{v}` is not a variable name"));
        }
        Ok(v)
    }

    fn implication(&mut self) -> PResult<Formula> {
        let lhs = self.disjunction()?;
        if self.eat("=>") {
            let rhs = match self.quantifier()? {
                Some(q) => q,
                None => self.implication()?,
            };
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut f = self.conjunction()?;
        while self.eat("|") {
            let rhs = match self.quantifier()? {
                Some(q) => q,
                None => self.conjunction()?,
            };
            f = Formula::or(f, rhs);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut f = self.unary()?;
        while self.eat("&") {
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> PResult<Formula> {
        if self.eat("~") {
            return Ok(Formula::not(self.unary()?));
        }
        if let Some(q) = self.quantifier()? {
            return Ok(q);
        }
        self.primary()
    }

    fn primary(&mut self) -> PResult<Formula> {
        if self.eat("$") {
            let name = self.ident()?;
            self.expect("(")?;
            let mut args = Vec::new();
            if !self.eat(")") {
                loop {
                    args.push(self.term()?);
                    if self.eat(")") {
                        break;
                    }
                    self.expect(",")?;
                }
            }
            return Ok(Formula::Call(name, args));
        }
        if matches!(self.peek(), Some(Tok::Op("("))) {
            let save = self.pos;
            match self.atom() {
                Ok(a) => return Ok(a),
                Err(_) => self.pos = save,
            }
            self.expect("(")?;
            let f = self.formula()?;
            self.expect(")")?;
            return Ok(f);
        }
        self.atom()
    }

    fn sequence(&mut self) -> PResult<Option<SequenceId>> {
        let seq = match self.peek() {
            Some(Tok::Ident(s)) if s.starts_with(|c: char| c.is_ascii_uppercase()) => match s.as_str() {
                "T" => self.default_seq,
                "TM" => SequenceId::ThueMorse,
                "PF" => SequenceId::Paperfolding,
                other => return self.err(format!("unknown sequence symbol `{other}`")),
            },
            _ => return Ok(None),
        };
        self.pos += 1;
        Ok(Some(seq))
    }

    fn indexed(&mut self, seq: SequenceId) -> PResult<(SequenceId, Term)> {
        self.expect("[")?;
        let t = self.term()?;
        self.expect("]")?;
        Ok((seq, t))
    }

    fn atom(&mut self) -> PResult<Formula> {
        if let Some(seq) = self.sequence()? {
            let (s1, t1) = self.indexed(seq)?;
            let negate = if self.eat("=") {
                false
            } else if self.eat("!=") {
                true
            } else {
                return self.err("expected `=` or `!=` after sequence index");
            };
            let atom = if let Some(Tok::Num(c)) = self.peek() {
                let c = *c;
                if c > u8::MAX as u64 {
                    return self.err("letter out of range");
                }
                self.pos += 1;
                Atom::SeqEqConst(s1, t1, c as u8)
            } else {
                let Some(seq2) = self.sequence()? else {
                    return self.err("expected a sequence index or letter");
                };
                let (s2, t2) = self.indexed(seq2)?;
                Atom::SeqEq(s1, t1, s2, t2)
            };
            let f = Formula::Atom(atom);
            return Ok(if negate { Formula::not(f) } else { f });
        }
        let lhs = self.term()?;
        let rel = match self.peek() {
            Some(Tok::Op("=")) => Rel::Eq,
            Some(Tok::Op("!=")) => Rel::Ne,
            Some(Tok::Op("<")) => Rel::Lt,
            Some(Tok::Op("<=")) => Rel::Le,
            Some(Tok::Op(">")) => Rel::Gt,
            Some(Tok::Op(">=")) => Rel::Ge,
            _ => return self.err("expected a relation"),
        };
        self.pos += 1;
        let rhs = self.term()?;
        Ok(Formula::compare(lhs, rel, rhs))
    }

    fn term(&mut self) -> PResult<Term> {
        let mut t = self.product()?;
        loop {
            if self.eat("+") {
                t = Term::add(t, self.product()?);
            } else if self.eat("-") {
                t = Term::sub(t, self.product()?);
            } else {
                return Ok(t);
            }
        }
    }

    fn product(&mut self) -> PResult<Term> {
        if let Some(Tok::Num(c)) = self.peek() {
            let c = *c;
            self.pos += 1;
            if self.eat("*") {
                return Ok(Term::scale(c, self.factor()?));
            }
            return Ok(Term::Const(c));
        }
        let f = self.factor()?;
        if self.eat("*") {
            match self.peek() {
                Some(Tok::Num(c)) => {
                    let c = *c;
                    self.pos += 1;
                    return Ok(Term::scale(c, f));
                }
                _ => return self.err("multiplication needs an integer literal"),
            }
        }
        Ok(f)
    }

    fn factor(&mut self) -> PResult<Term> {
        match self.peek() {
            Some(Tok::Num(c)) => {
                let c = *c;
                self.pos += 1;
                Ok(Term::Const(c))
            }
            Some(Tok::Op("(")) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(")")?;
                Ok(t)
            }
            Some(Tok::Ident(_)) => Ok(Term::Var(self.variable()?)),
            _ => self.err("expected a term"),
        }
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map_or(0, |p| p + 1) + 1;
    (line, col)
}

fn parse_formula_at(text: &str, src: &str, base: usize, default_seq: SequenceId) -> Result<Formula, ParseError> {
    let to_err = |(off, msg): (usize, String)| {
        let (line, col) = line_col(text, off);
        ParseError { line, col, msg }
    };
    let toks = lex(src, base).map_err(to_err)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        end: base + src.len(),
        default_seq,
    };
    let f = p.formula().map_err(to_err)?;
    if p.pos != toks.len() {
        return Err(to_err((p.offset(), "unexpected trailing input".to_string())));
    }
    Ok(f)
}

/// Parses a single formula with `T` bound to `default_seq`.
pub fn parse_formula(src: &str, default_seq: SequenceId) -> Result<Formula, ParseError> {
    parse_formula_at(src, src, 0, default_seq)
}

/// Parses a whole script. `#sequence <id>` rebinds `T` for the commands
/// that follow; other lines starting with `#` are comments.
pub fn parse_script(text: &str) -> Result<Vec<Command>, ParseError> {
    let mut cmds = Vec::new();
    let mut seq = SequenceId::ThueMorse;
    let bytes = text.as_bytes();
    let mut i = 0;
    let err = |off: usize, msg: String| {
        let (line, col) = line_col(text, off);
        ParseError { line, col, msg }
    };
    let word_at = |i: usize| {
        let mut j = i;
        while j < bytes.len()
            && !bytes[j].is_ascii_whitespace()
            && bytes[j] != b'"'
            && bytes[j] != b':'
            && bytes[j] != b';'
        {
            j += 1;
        }
        j
    };
    let skip_ws = |mut i: usize| {
        while i < bytes.len() && bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        i
    };
    loop {
        i = skip_ws(i);
        if i >= bytes.len() {
            break;
        }
        if bytes[i] == b'#' {
            let eol = text[i..].find('\n').map_or(text.len(), |p| i + p);
            let line = &text[i..eol];
            if let Some(rest) = line.strip_prefix("#sequence") {
                seq = rest
                    .trim()
                    .parse()
                    .map_err(|e: crate::sequences::SequenceError| err(i, e.to_string()))?;
            }
            i = eol;
            continue;
        }
        let kw_end = word_at(i);
        let kw = &text[i..kw_end];
        let kw_start = i;
        i = skip_ws(kw_end);
        let name_end = word_at(i);
        let name = text[i..name_end].to_string();
        if name.is_empty() || !name.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_') {
            return Err(err(i, "expected a name".into()));
        }
        i = skip_ws(name_end);
        let cmd = match kw {
            "def" | "eval" => {
                if i >= bytes.len() || bytes[i] != b'"' {
                    return Err(err(i, "expected a quoted formula".into()));
                }
                let close = text[i + 1..]
                    .find('"')
                    .map(|p| i + 1 + p)
                    .ok_or_else(|| err(i, "unterminated formula string".into()))?;
                let formula = parse_formula_at(text, &text[i + 1..close], i + 1, seq)?;
                i = close + 1;
                if kw == "def" {
                    Command::Def { name, formula }
                } else {
                    Command::Eval { name, formula }
                }
            }
            "first" => {
                let num_end = word_at(i);
                let count = text[i..num_end]
                    .parse()
                    .map_err(|_| err(i, "expected a count".into()))?;
                i = num_end;
                Command::First { name, count }
            }
            other => return Err(err(kw_start, format!("unknown command `{other}`"))),
        };
        i = skip_ws(i);
        if i < bytes.len() && (bytes[i] == b':' || bytes[i] == b';') {
            i += 1;
        } else {
            return Err(err(i, "expected `:` or `;` after command".into()));
        }
        cmds.push(cmd);
    }
    Ok(cmds)
}
