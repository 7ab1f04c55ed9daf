//! Line-oriented automaton format and Graphviz export.
//!
//! ```text
//! tracks: n s          (or `tracks: -` for a DFAO over a single unnamed input,
//!                       `tracks:` for a DFA with no tracks)
//! kind: dfa            (or `kind: dfao`)
//! state 0 accept       (dfa: accept|reject; dfao: out=<symbol>)
//! ...
//! 0 01 1               (<from> <digits per track> <to>; `-` when there are no digits)
//! ```
//!
//! States appear in canonical id order and transitions in (state, symbol)
//! order. Output is LF-terminated with no trailing whitespace.

use std::fmt::{Debug, Write as _};
use std::hash::Hash;

use super::{digit, AutomataError, Dfa, Dfao};
use crate::rational::Rational;

/// A DFAO output value with a whitespace-free textual form.
pub trait Symbol: Clone + Eq + Hash + Debug {
    fn encode(&self) -> String;
    fn decode(s: &str) -> Option<Self>;
}

macro_rules! int_symbol {
    ($($t:ty),*) => {$(
        impl Symbol for $t {
            fn encode(&self) -> String {
                self.to_string()
            }
            fn decode(s: &str) -> Option<Self> {
                s.parse().ok()
            }
        }
    )*};
}
int_symbol!(u8, u16, u32, u64);

impl Symbol for bool {
    fn encode(&self) -> String {
        (*self as u8).to_string()
    }
    fn decode(s: &str) -> Option<Self> {
        match s {
            "0" => Some(false),
            "1" => Some(true),
            _ => None,
        }
    }
}

/// Any whitespace-free token; used to load outputs of unknown type.
impl Symbol for String {
    fn encode(&self) -> String {
        self.clone()
    }
    fn decode(s: &str) -> Option<Self> {
        (!s.is_empty() && !s.contains(char::is_whitespace)).then(|| s.to_string())
    }
}

impl Symbol for Rational {
    fn encode(&self) -> String {
        self.to_string()
    }
    fn decode(s: &str) -> Option<Self> {
        s.parse().ok()
    }
}

impl<T: Symbol> Symbol for Option<T> {
    fn encode(&self) -> String {
        match self {
            Some(v) => v.encode(),
            None => "undef".to_string(),
        }
    }
    fn decode(s: &str) -> Option<Self> {
        if s == "undef" {
            Some(None)
        } else {
            T::decode(s).map(Some)
        }
    }
}

impl Symbol for Vec<bool> {
    fn encode(&self) -> String {
        self.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
    fn decode(s: &str) -> Option<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect()
    }
}

impl<A: Symbol, B: Symbol> Symbol for (A, B) {
    fn encode(&self) -> String {
        format!("[{},{}]", self.0.encode(), self.1.encode())
    }
    fn decode(s: &str) -> Option<Self> {
        let inner = s.strip_prefix('[')?.strip_suffix(']')?;
        let mut depth = 0i32;
        for (i, c) in inner.char_indices() {
            match c {
                '[' => depth += 1,
                ']' => depth -= 1,
                ',' if depth == 0 => {
                    return Some((A::decode(&inner[..i])?, B::decode(&inner[i + 1..])?));
                }
                _ => {}
            }
        }
        None
    }
}

fn digits_of(sym: usize, width: usize) -> String {
    if width == 0 {
        return "-".to_string();
    }
    (0..width).map(|j| char::from(b'0' + digit(sym, width, j))).collect()
}

fn tracks_line(tracks: &[String]) -> String {
    if tracks.is_empty() {
        "tracks:".to_string()
    } else {
        format!("tracks: {}", tracks.join(" "))
    }
}

pub fn dfa_to_text(a: &Dfa) -> String {
    let mut s = String::new();
    writeln!(s, "{}", tracks_line(a.tracks())).unwrap();
    writeln!(s, "kind: dfa").unwrap();
    for q in 0..a.num_states() as u32 {
        let tag = if a.is_accepting(q) { "accept" } else { "reject" };
        writeln!(s, "state {q} {tag}").unwrap();
    }
    for q in 0..a.num_states() as u32 {
        for sym in 0..a.num_symbols() {
            writeln!(s, "{q} {} {}", digits_of(sym, a.width()), a.step(q, sym)).unwrap();
        }
    }
    s
}

pub fn dfao_to_text<O: Symbol>(m: &Dfao<O>) -> String {
    let mut s = String::new();
    if m.tracks().is_empty() {
        writeln!(s, "tracks: -").unwrap();
    } else {
        writeln!(s, "{}", tracks_line(m.tracks())).unwrap();
    }
    writeln!(s, "kind: dfao").unwrap();
    for q in 0..m.num_states() as u32 {
        writeln!(s, "state {q} out={}", m.output(q).encode()).unwrap();
    }
    for q in 0..m.num_states() as u32 {
        for sym in 0..m.num_symbols() {
            writeln!(s, "{q} {} {}", digits_of(sym, m.width()), m.step(q, sym)).unwrap();
        }
    }
    s
}

struct Parsed {
    tracks: Option<Vec<String>>,
    kind: String,
    states: Vec<String>,
    trans: Vec<u32>,
}

fn parse_common(text: &str) -> Result<Parsed, AutomataError> {
    let bad = |line: usize, msg: &str| AutomataError::Malformed(format!("line {}: {msg}", line + 1));
    let lines: Vec<&str> = text.lines().collect();
    let first = lines.first().ok_or_else(|| bad(0, "empty input"))?;
    let rest = first
        .strip_prefix("tracks:")
        .ok_or_else(|| bad(0, "expected `tracks:`"))?;
    let tracks = match rest.trim() {
        "-" => None,
        r => Some(r.split_whitespace().map(str::to_string).collect::<Vec<_>>()),
    };
    let kind = lines
        .get(1)
        .and_then(|l| l.strip_prefix("kind: "))
        .ok_or_else(|| bad(1, "expected `kind:`"))?
        .to_string();
    let width = tracks.as_ref().map_or(1, |t| t.len());
    let nsyms = 1usize << width;

    let mut states = Vec::new();
    let mut idx = 2;
    while idx < lines.len() && lines[idx].starts_with("state ") {
        let mut parts = lines[idx].split(' ');
        parts.next();
        let id: usize = parts
            .next()
            .and_then(|p| p.parse().ok())
            .ok_or_else(|| bad(idx, "bad state id"))?;
        if id != states.len() {
            return Err(bad(idx, "states out of order"));
        }
        let tag = parts.next().ok_or_else(|| bad(idx, "missing state tag"))?;
        states.push(tag.to_string());
        idx += 1;
    }
    let mut trans = vec![u32::MAX; states.len() * nsyms];
    for (l, line) in lines.iter().enumerate().skip(idx) {
        let parts: Vec<&str> = line.split(' ').collect();
        if parts.len() != 3 {
            return Err(bad(l, "expected `<from> <digits> <to>`"));
        }
        let from: usize = parts[0].parse().map_err(|_| bad(l, "bad source"))?;
        let to: u32 = parts[2].parse().map_err(|_| bad(l, "bad target"))?;
        let sym = if width == 0 {
            if parts[1] != "-" {
                return Err(bad(l, "expected `-` for an empty column"));
            }
            0
        } else {
            if parts[1].len() != width || !parts[1].bytes().all(|b| b == b'0' || b == b'1') {
                return Err(bad(l, "bad digit column"));
            }
            usize::from_str_radix(parts[1], 2).unwrap()
        };
        if from >= states.len() {
            return Err(bad(l, "unknown source state"));
        }
        trans[from * nsyms + sym] = to;
    }
    if trans.contains(&u32::MAX) {
        return Err(AutomataError::Malformed("missing transitions".into()));
    }
    Ok(Parsed {
        tracks,
        kind,
        states,
        trans,
    })
}

pub fn dfa_from_text(text: &str) -> Result<Dfa, AutomataError> {
    let p = parse_common(text)?;
    if p.kind != "dfa" {
        return Err(AutomataError::Malformed(format!("expected kind dfa, found {}", p.kind)));
    }
    let tracks = p
        .tracks
        .ok_or_else(|| AutomataError::Malformed("a dfa needs named tracks".into()))?;
    let accept = p
        .states
        .iter()
        .map(|t| match t.as_str() {
            "accept" => Ok(true),
            "reject" => Ok(false),
            other => Err(AutomataError::Malformed(format!("bad state tag {other}"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Dfa::from_parts(tracks, p.trans, accept)
}

pub fn dfao_from_text<O: Symbol>(text: &str) -> Result<Dfao<O>, AutomataError> {
    let p = parse_common(text)?;
    if p.kind != "dfao" {
        return Err(AutomataError::Malformed(format!(
            "expected kind dfao, found {}",
            p.kind
        )));
    }
    let out = p
        .states
        .iter()
        .map(|t| {
            t.strip_prefix("out=")
                .and_then(O::decode)
                .ok_or_else(|| AutomataError::Malformed(format!("bad output {t}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Dfao::from_parts(p.tracks.unwrap_or_default(), p.trans, out)
}

fn dot_edges(s: &mut String, n: usize, nsyms: usize, width: usize, step: impl Fn(u32, usize) -> u32) {
    for q in 0..n as u32 {
        // group parallel edges into one labeled arc
        let mut targets: Vec<(u32, Vec<String>)> = Vec::new();
        for sym in 0..nsyms {
            let t = step(q, sym);
            let label = digits_of(sym, width);
            match targets.iter_mut().find(|(x, _)| *x == t) {
                Some((_, ls)) => ls.push(label),
                None => targets.push((t, vec![label])),
            }
        }
        for (t, labels) in targets {
            writeln!(s, "  {q} -> {t} [label=\"{}\"];", labels.join(",")).unwrap();
        }
    }
}

pub fn dfa_to_dot(a: &Dfa) -> String {
    let mut s = String::from("digraph dfa {\n  rankdir=LR;\n");
    writeln!(s, "  label=\"tracks: {}\";", a.tracks().join(" ")).unwrap();
    for q in 0..a.num_states() as u32 {
        let shape = if a.is_accepting(q) { "doublecircle" } else { "circle" };
        writeln!(s, "  {q} [shape={shape}];").unwrap();
    }
    dot_edges(&mut s, a.num_states(), a.num_symbols(), a.width(), |q, x| a.step(q, x));
    s.push_str("}\n");
    s
}

pub fn dfao_to_dot<O: Symbol>(m: &Dfao<O>) -> String {
    let mut s = String::from("digraph dfao {\n  rankdir=LR;\n");
    for q in 0..m.num_states() as u32 {
        writeln!(s, "  {q} [shape=circle,label=\"{q}/{}\"];", m.output(q).encode()).unwrap();
    }
    dot_edges(&mut s, m.num_states(), m.num_symbols(), m.width(), |q, x| m.step(q, x));
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dfa_text_is_exact() {
        let eq = Dfa::build(&["x", "y"], true, |&s, d| s && d[0] == d[1], |&s| s);
        let text = dfa_to_text(&eq);
        assert_eq!(
            text,
            "tracks: x y\nkind: dfa\nstate 0 accept\nstate 1 reject\n\
             0 00 0\n0 01 1\n0 10 1\n0 11 0\n1 00 1\n1 01 1\n1 10 1\n1 11 1\n"
        );
        assert_eq!(dfa_from_text(&text).unwrap(), eq);
    }

    #[test]
    fn closed_dfa_round_trip() {
        let t = Dfa::universal(&[]);
        let text = dfa_to_text(&t);
        assert_eq!(text, "tracks:\nkind: dfa\nstate 0 accept\n0 - 0\n");
        assert_eq!(dfa_from_text(&text).unwrap(), t);
    }

    #[test]
    fn symbol_codecs() {
        assert_eq!(Option::<Rational>::decode("undef"), Some(None));
        assert_eq!(Option::<Rational>::decode("7/3"), Some(Some(Rational::of(7, 3))));
        let pair = (Rational::of(5, 2), (true, 3u8));
        assert_eq!(pair.encode(), "[5/2,[1,3]]");
        assert_eq!(<(Rational, (bool, u8))>::decode(&pair.encode()), Some(pair));
    }

    #[test]
    fn rejects_garbage() {
        assert!(dfa_from_text("").is_err());
        assert!(dfa_from_text("tracks: x\nkind: dfa\nstate 0 accept\n0 0 0\n").is_err());
        assert!(dfa_from_text("tracks: x\nkind: dfao\nstate 0 out=1\n0 0 0\n0 1 0\n").is_err());
    }
}
