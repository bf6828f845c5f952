//! Finite CCS with de Bruijn channels: syntax, parser/printer, the
//! labelled transition relation, and the fair-testing pass predicate.
//!
//! Channels of a process over `gamma` are `1..=gamma`; `new.` binds channel
//! `gamma + 1` in its body. Terms are finite (no recursion or replication),
//! so every reachable transition system is finite.

use std::fmt;

use thiserror::Error;

/// A guard of a sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Prefix {
    In(usize),
    Out(usize),
    Tick,
}

/// Edge labels of the CCS alphabet at a fixed channel count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ALabel {
    Id,
    Tick,
    In(usize),
    Out(usize),
}

impl ALabel {
    /// Swaps inputs and outputs.
    pub fn complement(self) -> ALabel {
        match self {
            ALabel::In(a) => ALabel::Out(a),
            ALabel::Out(a) => ALabel::In(a),
            other => other,
        }
    }

    pub fn is_silent(self) -> bool {
        self == ALabel::Id
    }
}

impl fmt::Display for ALabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ALabel::Id => write!(f, "id"),
            ALabel::Tick => write!(f, "tick"),
            ALabel::In(a) => write!(f, "{a}?"),
            ALabel::Out(a) => write!(f, "{a}!"),
        }
    }
}

/// Process bodies; a well-typed body over `gamma` uses channels `<= gamma`,
/// with `Nu` bodies typed over `gamma + 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Sum(Vec<(Prefix, Term)>),
    Par(Box<Term>, Box<Term>),
    Nu(Box<Term>),
}

impl Term {
    pub fn nil() -> Term {
        Term::Sum(vec![])
    }

    /// Number of grammar nodes (each summand's prefix counts one).
    pub fn size(&self) -> usize {
        match self {
            Term::Sum(xs) => 1 + xs.iter().map(|(_, t)| 1 + t.size()).sum::<usize>(),
            Term::Par(p, q) => 1 + p.size() + q.size(),
            Term::Nu(p) => 1 + p.size(),
        }
    }

    fn well_typed(&self, gamma: usize) -> bool {
        match self {
            Term::Sum(xs) => xs.iter().all(|(g, t)| {
                let bound = match g {
                    Prefix::In(a) | Prefix::Out(a) => *a >= 1 && *a <= gamma,
                    Prefix::Tick => true,
                };
                bound && t.well_typed(gamma)
            }),
            Term::Par(p, q) => p.well_typed(gamma) && q.well_typed(gamma),
            Term::Nu(p) => p.well_typed(gamma + 1),
        }
    }
}

/// A process: a channel count and a body well-typed over it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Process {
    pub gamma: usize,
    pub body: Term,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CcsError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("channel {chan} out of range at line {line}, column {col} (known channels: {known})")]
    ChannelOutOfRange {
        chan: usize,
        known: usize,
        line: usize,
        col: usize,
    },
    #[error("ill-typed process")]
    IllTyped,
    #[error("channel counts differ: {0} vs {1}")]
    GammaMismatch(usize, usize),
}

impl Process {
    pub fn new(gamma: usize, body: Term) -> Result<Process, CcsError> {
        if body.well_typed(gamma) {
            Ok(Process { gamma, body })
        } else {
            Err(CcsError::IllTyped)
        }
    }

    pub fn size(&self) -> usize {
        self.body.size()
    }
}

// ---------------------------------------------------------------------
// Parsing and printing
// ---------------------------------------------------------------------

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Num(usize),
    Word(String),
    Punct(char),
    Eof,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.src.get(self.pos).copied()?;
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(b)
    }

    fn skip_ws(&mut self) {
        while let Some(b) = self.src.get(self.pos) {
            if b.is_ascii_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn next(&mut self) -> (Token, usize, usize) {
        self.skip_ws();
        let (line, col) = (self.line, self.col);
        let Some(b) = self.src.get(self.pos).copied() else {
            return (Token::Eof, line, col);
        };
        if b.is_ascii_digit() {
            let mut n = 0usize;
            while let Some(d) = self.src.get(self.pos) {
                if d.is_ascii_digit() {
                    n = n.saturating_mul(10).saturating_add((*d - b'0') as usize);
                    self.bump();
                } else {
                    break;
                }
            }
            (Token::Num(n), line, col)
        } else if b.is_ascii_alphabetic() {
            let mut w = String::new();
            while let Some(d) = self.src.get(self.pos) {
                if d.is_ascii_alphanumeric() {
                    w.push(*d as char);
                    self.bump();
                } else {
                    break;
                }
            }
            (Token::Word(w), line, col)
        } else {
            self.bump();
            (Token::Punct(b as char), line, col)
        }
    }

    fn peek(&mut self) -> Token {
        let save = (self.pos, self.line, self.col);
        let (t, _, _) = self.next();
        (self.pos, self.line, self.col) = save;
        t
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, line: usize, col: usize, msg: &str) -> Result<T, CcsError> {
        Err(CcsError::Syntax {
            line,
            col,
            msg: msg.to_string(),
        })
    }

    fn expect_punct(&mut self, ch: char) -> Result<(), CcsError> {
        let (t, line, col) = self.lex.next();
        if t == Token::Punct(ch) {
            Ok(())
        } else {
            self.err(line, col, &format!("expected `{ch}`, found {t:?}"))
        }
    }

    fn channel(&mut self, n: usize, gamma: usize) -> Result<usize, CcsError> {
        let (line, col) = (self.lex.line, self.lex.col);
        if n < 1 || n > gamma {
            return Err(CcsError::ChannelOutOfRange {
                chan: n,
                known: gamma,
                line,
                col,
            });
        }
        Ok(n)
    }

    /// A whole term; `new.` here extends to the end.
    fn term(&mut self, gamma: usize) -> Result<Term, CcsError> {
        if self.lex.peek() == Token::Word("new".into()) {
            self.lex.next();
            self.expect_punct('.')?;
            return Ok(Term::Nu(Box::new(self.term(gamma + 1)?)));
        }
        let first = self.factor(gamma)?;
        let mut parts = vec![first];
        while self.lex.peek() == Token::Punct('+') {
            self.lex.next();
            parts.push(self.factor(gamma)?);
        }
        if parts.len() == 1 {
            return Ok(parts.pop().expect("one part"));
        }
        let mut summands = Vec::new();
        for p in parts {
            match p {
                Term::Sum(xs) if xs.len() == 1 => summands.extend(xs),
                _ => {
                    return self.err(
                        self.lex.line,
                        self.lex.col,
                        "summands of `+` must be guarded terms",
                    )
                }
            }
        }
        Ok(Term::Sum(summands))
    }

    /// A prefix-level term: `0`, a guarded summand, `new.`, or parentheses
    /// (possibly a parallel composition).
    fn factor(&mut self, gamma: usize) -> Result<Term, CcsError> {
        let (t, line, col) = self.lex.next();
        match t {
            Token::Num(0) => Ok(Term::nil()),
            Token::Num(n) => {
                let a = self.channel(n, gamma)?;
                let (t2, l2, c2) = self.lex.next();
                let prefix = match t2 {
                    Token::Punct('?') => Prefix::In(a),
                    Token::Punct('!') => Prefix::Out(a),
                    other => {
                        return self.err(l2, c2, &format!("expected `?` or `!`, found {other:?}"))
                    }
                };
                self.expect_punct('.')?;
                let cont = self.factor(gamma)?;
                Ok(Term::Sum(vec![(prefix, cont)]))
            }
            Token::Word(w) if w == "tick" => {
                self.expect_punct('.')?;
                let cont = self.factor(gamma)?;
                Ok(Term::Sum(vec![(Prefix::Tick, cont)]))
            }
            Token::Word(w) if w == "new" => {
                self.expect_punct('.')?;
                let body = self.factor(gamma + 1)?;
                Ok(Term::Nu(Box::new(body)))
            }
            Token::Punct('(') => {
                let first = self.term(gamma)?;
                let (t2, l2, c2) = self.lex.next();
                match t2 {
                    Token::Punct(')') => Ok(first),
                    Token::Punct('|') => {
                        let second = self.term(gamma)?;
                        self.expect_punct(')')?;
                        Ok(Term::Par(Box::new(first), Box::new(second)))
                    }
                    other => self.err(l2, c2, &format!("expected `)` or `|`, found {other:?}")),
                }
            }
            other => self.err(line, col, &format!("unexpected {other:?}")),
        }
    }
}

/// Parses `channels N; term`.
pub fn parse_ccs(text: &str) -> Result<Process, CcsError> {
    let mut p = Parser {
        lex: Lexer::new(text),
    };
    let (t, line, col) = p.lex.next();
    if t != Token::Word("channels".into()) {
        return p.err(line, col, "expected `channels N;`");
    }
    let (t, line, col) = p.lex.next();
    let Token::Num(gamma) = t else {
        return p.err(line, col, "expected the channel count");
    };
    p.expect_punct(';')?;
    let body = p.term(gamma)?;
    let (t, line, col) = p.lex.next();
    if t != Token::Eof {
        return p.err(line, col, &format!("trailing input: {t:?}"));
    }
    Process::new(gamma, body)
}

fn print_guard(g: &Prefix) -> String {
    match g {
        Prefix::In(a) => format!("{a}?"),
        Prefix::Out(a) => format!("{a}!"),
        Prefix::Tick => "tick".to_string(),
    }
}

fn print_term(t: &Term) -> String {
    match t {
        Term::Sum(xs) if xs.is_empty() => "0".to_string(),
        Term::Sum(xs) => xs
            .iter()
            .map(|(g, cont)| format!("{}.{}", print_guard(g), print_factor(cont)))
            .collect::<Vec<_>>()
            .join(" + "),
        Term::Par(p, q) => format!("({} | {})", print_term(p), print_term(q)),
        Term::Nu(p) => format!("new. {}", print_factor(p)),
    }
}

fn print_factor(t: &Term) -> String {
    match t {
        Term::Sum(xs) if xs.len() >= 2 => format!("({})", print_term(t)),
        _ => print_term(t),
    }
}

/// Canonical text of a process; `parse_ccs` round-trips it.
pub fn print_ccs(p: &Process) -> String {
    format!("channels {}; {}", p.gamma, print_term(&p.body))
}

impl fmt::Display for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", print_ccs(self))
    }
}

// ---------------------------------------------------------------------
// Transitions
// ---------------------------------------------------------------------

/// Proper transitions of a body: everything except the reflexive identity
/// self-loop (synchronisations are included, with label `Id`).
fn proper_next(t: &Term, gamma: usize) -> Vec<(ALabel, Term)> {
    match t {
        Term::Sum(xs) => xs
            .iter()
            .map(|(g, cont)| {
                let label = match g {
                    Prefix::In(a) => ALabel::In(*a),
                    Prefix::Out(a) => ALabel::Out(*a),
                    Prefix::Tick => ALabel::Tick,
                };
                (label, cont.clone())
            })
            .collect(),
        Term::Par(p, q) => {
            let left = proper_next(p, gamma);
            let right = proper_next(q, gamma);
            let mut out = Vec::new();
            for (l, p2) in &left {
                out.push((*l, Term::Par(Box::new(p2.clone()), q.clone())));
            }
            for (l, q2) in &right {
                out.push((*l, Term::Par(p.clone(), Box::new(q2.clone()))));
            }
            for (l, p2) in &left {
                for (r, q2) in &right {
                    let sync = matches!((l, r), (ALabel::In(a), ALabel::Out(b)) | (ALabel::Out(a), ALabel::In(b)) if a == b);
                    if sync {
                        out.push((
                            ALabel::Id,
                            Term::Par(Box::new(p2.clone()), Box::new(q2.clone())),
                        ));
                    }
                }
            }
            out
        }
        Term::Nu(p) => {
            let bound = gamma + 1;
            proper_next(p, bound)
                .into_iter()
                .filter(|(l, _)| !matches!(l, ALabel::In(a) | ALabel::Out(a) if *a == bound))
                .map(|(l, p2)| (l, Term::Nu(Box::new(p2))))
                .collect()
        }
    }
}

/// All transitions of a process: the identity self-loop first, then the
/// closure of the transition rules, in a fixed order.
pub fn ccs_next(p: &Process) -> Vec<(ALabel, Process)> {
    let mut out = vec![(ALabel::Id, p.clone())];
    out.extend(proper_next(&p.body, p.gamma).into_iter().map(|(l, t)| {
        (
            l,
            Process {
                gamma: p.gamma,
                body: t,
            },
        )
    }));
    out
}

/// Silent-reachable closure of a process (along `Id`-labelled edges).
fn silent_closure(p: &Process) -> Vec<Process> {
    let mut seen = std::collections::BTreeSet::new();
    seen.insert(p.clone());
    let mut order = vec![p.clone()];
    let mut frontier = vec![p.clone()];
    while let Some(q) = frontier.pop() {
        for (l, r) in ccs_next(&q) {
            if l == ALabel::Id && seen.insert(r.clone()) {
                order.push(r.clone());
                frontier.push(r);
            }
        }
    }
    order
}

/// The fair-testing pole: from every silently-reachable state, a tick
/// remains reachable. Computed as a reverse reachability pass over the
/// silent fragment.
pub fn is_bot_ccs(p: &Process) -> bool {
    use std::collections::BTreeMap;
    let states = silent_closure(p);
    let index: BTreeMap<&Process, usize> = states.iter().zip(0..).collect();
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); states.len()];
    let mut good: Vec<bool> = vec![false; states.len()];
    for (i, q) in states.iter().enumerate() {
        for (l, r) in ccs_next(q) {
            match l {
                ALabel::Tick => good[i] = true,
                ALabel::Id => {
                    if let Some(&j) = index.get(&r) {
                        preds[j].push(i);
                    }
                }
                _ => {}
            }
        }
    }
    // Backward closure of the tick-enabled states.
    let mut stack: Vec<usize> = (0..states.len()).filter(|i| good[*i]).collect();
    while let Some(j) = stack.pop() {
        for &i in &preds[j] {
            if !good[i] {
                good[i] = true;
                stack.push(i);
            }
        }
    }
    good.iter().all(|g| *g)
}

/// Whether `p` passes the test `t`: their parallel composition is in the
/// pole.
pub fn passes_ccs(p: &Process, t: &Process) -> Result<bool, CcsError> {
    if p.gamma != t.gamma {
        return Err(CcsError::GammaMismatch(p.gamma, t.gamma));
    }
    Ok(is_bot_ccs(&Process {
        gamma: p.gamma,
        body: Term::Par(Box::new(p.body.clone()), Box::new(t.body.clone())),
    }))
}
