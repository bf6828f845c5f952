//! Process terms over individuals, the injection from CCS, and their
//! transition system over positioned term families.

use std::fmt;

use thiserror::Error;

use crate::ccs::{CcsError, Prefix, Process, Term};
use crate::diagrams::{ChannelId, PlayNet, PlayerId};
use crate::plays::{enumerate_full_moves, BasicMoveClass, MoveDescriptor, PlaysError, Role};

/// Guards of the term calculus: the CCS prefixes plus channel creation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Guard {
    In(usize),
    Out(usize),
    Tick,
    Nu,
}

impl Guard {
    /// The basic move class this guard answers to.
    pub fn class(self) -> BasicMoveClass {
        match self {
            Guard::In(a) => BasicMoveClass::In(a),
            Guard::Out(c) => BasicMoveClass::Out(c),
            Guard::Tick => BasicMoveClass::Tick,
            Guard::Nu => BasicMoveClass::Nu,
        }
    }
}

/// A process term over an arity: a guarded sum or a fork pair. A `Nu`
/// guard's body is typed at arity + 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProcessTerm {
    GuardedSum(Vec<(Guard, ProcessTerm)>),
    ForkPair(Box<ProcessTerm>, Box<ProcessTerm>),
}

impl ProcessTerm {
    pub fn nil() -> ProcessTerm {
        ProcessTerm::GuardedSum(vec![])
    }

    pub fn well_typed(&self, arity: usize) -> bool {
        match self {
            ProcessTerm::GuardedSum(xs) => xs.iter().all(|(g, t)| match g {
                Guard::In(a) | Guard::Out(a) => *a >= 1 && *a <= arity && t.well_typed(arity),
                Guard::Tick => t.well_typed(arity),
                Guard::Nu => t.well_typed(arity + 1),
            }),
            ProcessTerm::ForkPair(l, r) => l.well_typed(arity) && r.well_typed(arity),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            ProcessTerm::GuardedSum(xs) => 1 + xs.iter().map(|(_, t)| 1 + t.size()).sum::<usize>(),
            ProcessTerm::ForkPair(l, r) => 1 + l.size() + r.size(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TermsError {
    #[error(transparent)]
    Plays(#[from] PlaysError),
    #[error("assignment does not type against the position")]
    ArityMismatch,
    #[error("term is outside the image of the CCS injection")]
    NotInCcsImage,
    #[error(transparent)]
    Ccs(#[from] CcsError),
}

/// The injection from CCS: sums map pointwise, `new.` becomes a
/// single-summand `Nu` sum, parallel composition becomes a fork pair.
pub fn theta(p: &Process) -> ProcessTerm {
    theta_term(&p.body)
}

fn theta_term(t: &Term) -> ProcessTerm {
    match t {
        Term::Sum(xs) => ProcessTerm::GuardedSum(
            xs.iter()
                .map(|(g, cont)| {
                    let guard = match g {
                        Prefix::In(a) => Guard::In(*a),
                        Prefix::Out(a) => Guard::Out(*a),
                        Prefix::Tick => Guard::Tick,
                    };
                    (guard, theta_term(cont))
                })
                .collect(),
        ),
        Term::Par(p, q) => ProcessTerm::ForkPair(Box::new(theta_term(p)), Box::new(theta_term(q))),
        Term::Nu(p) => ProcessTerm::GuardedSum(vec![(Guard::Nu, theta_term(p))]),
    }
}

/// Inverse of [`theta`] where defined: a single-summand `Nu` sum maps back
/// to `new.`, other sums must be `Nu`-free.
pub fn theta_inverse(t: &ProcessTerm) -> Result<Term, TermsError> {
    match t {
        ProcessTerm::GuardedSum(xs) => {
            if let [(Guard::Nu, body)] = xs.as_slice() {
                return Ok(Term::Nu(Box::new(theta_inverse(body)?)));
            }
            let summands = xs
                .iter()
                .map(|(g, cont)| {
                    let prefix = match g {
                        Guard::In(a) => Prefix::In(*a),
                        Guard::Out(a) => Prefix::Out(*a),
                        Guard::Tick => Prefix::Tick,
                        Guard::Nu => return Err(TermsError::NotInCcsImage),
                    };
                    Ok((prefix, theta_inverse(cont)?))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Term::Sum(summands))
        }
        ProcessTerm::ForkPair(l, r) => Ok(Term::Par(
            Box::new(theta_inverse(l)?),
            Box::new(theta_inverse(r)?),
        )),
    }
}

/// The local aspect of a full move at a single player: a full fork, one of
/// the unary moves (a synchronisation shows up locally as its output or
/// input side), or the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalMove {
    FullFork,
    Tick,
    Nu,
    In(usize),
    Out(usize),
    Identity,
}

/// One step of a single term under the local aspect of a move.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocalSuccessor {
    One(ProcessTerm),
    Fork(ProcessTerm, ProcessTerm),
}

/// Local transition data: a fork pair answers exactly the full fork,
/// handing its components to the two avatars; a guarded sum answers a
/// matching guard once per matching summand; the identity keeps the term;
/// anything else has no transition.
pub fn term_local_step(t: &ProcessTerm, m: LocalMove) -> Vec<LocalSuccessor> {
    let class = match m {
        LocalMove::Identity => return vec![LocalSuccessor::One(t.clone())],
        LocalMove::FullFork => {
            return match t {
                ProcessTerm::ForkPair(l, r) => {
                    vec![LocalSuccessor::Fork((**l).clone(), (**r).clone())]
                }
                _ => vec![],
            }
        }
        LocalMove::Tick => BasicMoveClass::Tick,
        LocalMove::Nu => BasicMoveClass::Nu,
        LocalMove::In(a) => BasicMoveClass::In(a),
        LocalMove::Out(c) => BasicMoveClass::Out(c),
    };
    match t {
        ProcessTerm::GuardedSum(xs) => xs
            .iter()
            .filter(|(g, _)| g.class() == class)
            .map(|(_, cont)| LocalSuccessor::One(cont.clone()))
            .collect(),
        ProcessTerm::ForkPair(..) => vec![],
    }
}

/// A state of the term transition system: a position and one term per
/// player, indexed by player id.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermState {
    pub position: PlayNet,
    pub terms: Vec<ProcessTerm>,
}

impl TermState {
    pub fn new(position: PlayNet, terms: Vec<ProcessTerm>) -> Result<TermState, TermsError> {
        if !position.is_position() || terms.len() != position.players.len() {
            return Err(TermsError::ArityMismatch);
        }
        for (p, t) in position.player_ids().zip(terms.iter()) {
            if !t.well_typed(position.player(p).arity()) {
                return Err(TermsError::ArityMismatch);
            }
        }
        Ok(TermState { position, terms })
    }

    /// The single-player state of a process: the individual of its channel
    /// count carrying its injected term.
    pub fn of_process(p: &Process) -> TermState {
        TermState {
            position: PlayNet::individual(p.gamma),
            terms: vec![theta(p)],
        }
    }
}

/// An interfaced state: an interface of `k` channels embedded into the
/// position (given by distinct channel images).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InterfacedTermState {
    pub interface: Vec<ChannelId>,
    pub state: TermState,
}

impl InterfacedTermState {
    pub fn of_process(p: &Process) -> InterfacedTermState {
        InterfacedTermState {
            interface: (0..p.gamma as u32).map(ChannelId).collect(),
            state: TermState::of_process(p),
        }
    }
}

/// Steps the involved players of a move. Every choice of a matching
/// summand per acting player yields one successor family; spectators keep
/// their terms. Returns `None` when some involved player cannot answer.
fn step_roles(state: &TermState, roles: &[Role]) -> Vec<Vec<ProcessTerm>> {
    // For a fork, both avatars are fed from the same pair, so resolve the
    // pair once per acting player.
    let mut options: Vec<Vec<ProcessTerm>> = Vec::with_capacity(roles.len());
    for role in roles {
        match role {
            Role::Spectator(p) => options.push(vec![state.terms[p.index()].clone()]),
            Role::Involved { origin, class } => {
                let term = &state.terms[origin.index()];
                let opts: Vec<ProcessTerm> = match class {
                    // Both fork avatars are fed from the same pair.
                    BasicMoveClass::ForkL | BasicMoveClass::ForkR => {
                        match term_local_step(term, LocalMove::FullFork).pop() {
                            Some(LocalSuccessor::Fork(l, r)) => {
                                vec![if *class == BasicMoveClass::ForkL {
                                    l
                                } else {
                                    r
                                }]
                            }
                            _ => vec![],
                        }
                    }
                    c => {
                        let local = match c {
                            BasicMoveClass::Tick => LocalMove::Tick,
                            BasicMoveClass::Nu => LocalMove::Nu,
                            BasicMoveClass::In(a) => LocalMove::In(*a),
                            BasicMoveClass::Out(a) => LocalMove::Out(*a),
                            _ => unreachable!("fork handled above"),
                        };
                        term_local_step(term, local)
                            .into_iter()
                            .map(|s| match s {
                                LocalSuccessor::One(t) => t,
                                LocalSuccessor::Fork(..) => unreachable!("unary class"),
                            })
                            .collect()
                    }
                };
                options.push(opts);
            }
        }
    }
    // Cartesian product over players.
    let mut out: Vec<Vec<ProcessTerm>> = vec![Vec::new()];
    for opts in options {
        if opts.is_empty() {
            return Vec::new();
        }
        let mut next = Vec::with_capacity(out.len() * opts.len());
        for prefix in &out {
            for o in &opts {
                let mut v = prefix.clone();
                v.push(o.clone());
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// All transitions of a term state: for each enumerated full move,
/// spectators keep their terms and acting players step by their matching
/// guards (for a synchronisation, the sender by its output guard and the
/// receiver by its input guard). The identity self-loop is included.
pub fn term_next(state: &TermState) -> Result<Vec<(MoveDescriptor, TermState)>, TermsError> {
    let mut out = Vec::new();
    for descriptor in enumerate_full_moves(&state.position)? {
        match &descriptor.data {
            None => out.push((descriptor, state.clone())),
            Some(data) => {
                for family in step_roles(state, &data.roles) {
                    let succ = TermState {
                        position: data.final_position.clone(),
                        terms: family,
                    };
                    out.push((descriptor.clone(), succ));
                }
            }
        }
    }
    Ok(out)
}

/// Renames the free channels of a term: `map[i]` is the new index of the
/// old free channel `i + 1`; binders are rebased above `new_gamma`.
fn rename_term(t: &Term, map: &[usize], new_gamma: usize) -> Term {
    match t {
        Term::Sum(xs) => Term::Sum(
            xs.iter()
                .map(|(g, cont)| {
                    let g2 = match g {
                        Prefix::In(a) => Prefix::In(map[*a - 1]),
                        Prefix::Out(a) => Prefix::Out(map[*a - 1]),
                        Prefix::Tick => Prefix::Tick,
                    };
                    (g2, rename_term(cont, map, new_gamma))
                })
                .collect(),
        ),
        Term::Par(p, q) => Term::Par(
            Box::new(rename_term(p, map, new_gamma)),
            Box::new(rename_term(q, map, new_gamma)),
        ),
        Term::Nu(p) => {
            let mut inner = map.to_vec();
            inner.push(new_gamma + 1);
            Term::Nu(Box::new(rename_term(p, &inner, new_gamma + 1)))
        }
    }
}

/// Collapses an interfaced state back to a CCS process over the interface:
/// every player's term is mapped back through the injection, its slots are
/// renamed to interface indices or, for private channels, to indices
/// allocated by the unique non-decreasing bijection; the private channels
/// are bound by leading `new.` binders.
pub fn flatten_state(s: &InterfacedTermState) -> Result<Process, TermsError> {
    let gamma = s.interface.len();
    let position = &s.state.position;
    let mut privates: Vec<ChannelId> = position
        .channel_ids()
        .filter(|c| !s.interface.contains(c))
        .collect();
    privates.sort_unstable();
    let total = gamma + privates.len();

    let mut bodies = Vec::new();
    for p in position.player_ids() {
        let raw = theta_inverse(&s.state.terms[p.index()])?;
        let map: Vec<usize> = position
            .player(p)
            .slots
            .iter()
            .map(|slot| {
                if let Some(i) = s.interface.iter().position(|c| c == slot) {
                    i + 1
                } else {
                    let j = privates.binary_search(slot).expect("private channel");
                    gamma + j + 1
                }
            })
            .collect();
        bodies.push(rename_term(&raw, &map, total));
    }
    let mut body = match bodies.pop() {
        None => Term::nil(),
        Some(last) => bodies
            .into_iter()
            .rev()
            .fold(last, |acc, b| Term::Par(Box::new(b), Box::new(acc))),
    };
    for _ in 0..privates.len() {
        body = Term::Nu(Box::new(body));
    }
    Ok(Process::new(gamma, body)?)
}

// ---------------------------------------------------------------------
// Textual term syntax: the CCS grammar with `new` usable as a guard.
// ---------------------------------------------------------------------

fn print_term(t: &ProcessTerm) -> String {
    match t {
        ProcessTerm::GuardedSum(xs) if xs.is_empty() => "0".to_string(),
        ProcessTerm::GuardedSum(xs) => xs
            .iter()
            .map(|(g, cont)| {
                let gs = match g {
                    Guard::In(a) => format!("{a}?"),
                    Guard::Out(a) => format!("{a}!"),
                    Guard::Tick => "tick".to_string(),
                    Guard::Nu => "new".to_string(),
                };
                format!("{gs}.{}", print_factor(cont))
            })
            .collect::<Vec<_>>()
            .join(" + "),
        ProcessTerm::ForkPair(l, r) => format!("({} | {})", print_term(l), print_term(r)),
    }
}

fn print_factor(t: &ProcessTerm) -> String {
    match t {
        ProcessTerm::GuardedSum(xs) if xs.len() >= 2 => format!("({})", print_term(t)),
        _ => print_term(t),
    }
}

/// Prints a term in the sum/fork grammar.
pub fn print_process_term(t: &ProcessTerm) -> String {
    print_term(t)
}

impl fmt::Display for ProcessTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", print_term(self))
    }
}

/// Dumps a state as `player@arity: term` lines in id order.
pub fn print_term_state(s: &TermState) -> String {
    let mut out = String::new();
    for p in s.state_players() {
        out.push_str(&format!(
            "player {}@{}: {}\n",
            p,
            s.position.player(p).arity(),
            print_term(&s.terms[p.index()])
        ));
    }
    out
}

impl TermState {
    fn state_players(&self) -> Vec<PlayerId> {
        self.position.player_ids().collect()
    }
}

/// Parses the term grammar at a given arity: like the CCS grammar, with
/// `new` allowed as a guard inside sums.
pub fn parse_process_term(text: &str, arity: usize) -> Result<ProcessTerm, TermsError> {
    // Reuse the CCS parser by treating `new` uniformly: the CCS grammar
    // already accepts `new.` at prefix positions; sums mixing `new` with
    // other guards are reparsed here.
    let mut parser = TermParser {
        tokens: tokenize(text),
        pos: 0,
    };
    let t = parser.term(arity)?;
    if parser.pos != parser.tokens.len() {
        return Err(TermsError::Ccs(CcsError::Syntax {
            line: 1,
            col: 1,
            msg: "trailing input".to_string(),
        }));
    }
    if !t.well_typed(arity) {
        return Err(TermsError::ArityMismatch);
    }
    Ok(t)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(usize),
    Word(String),
    Punct(char),
}

fn tokenize(text: &str) -> Vec<Tok> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.peek().copied() {
        if c.is_whitespace() {
            chars.next();
        } else if c.is_ascii_digit() {
            let mut n = 0usize;
            while let Some(d) = chars.peek().copied() {
                if d.is_ascii_digit() {
                    n = n
                        .saturating_mul(10)
                        .saturating_add(d.to_digit(10).unwrap() as usize);
                    chars.next();
                } else {
                    break;
                }
            }
            out.push(Tok::Num(n));
        } else if c.is_ascii_alphabetic() {
            let mut w = String::new();
            while let Some(d) = chars.peek().copied() {
                if d.is_ascii_alphanumeric() {
                    w.push(d);
                    chars.next();
                } else {
                    break;
                }
            }
            out.push(Tok::Word(w));
        } else {
            chars.next();
            out.push(Tok::Punct(c));
        }
    }
    out
}

struct TermParser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl TermParser {
    fn syntax<T>(&self, msg: &str) -> Result<T, TermsError> {
        Err(TermsError::Ccs(CcsError::Syntax {
            line: 1,
            col: self.pos + 1,
            msg: msg.to_string(),
        }))
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, p: char) -> Result<(), TermsError> {
        match self.eat() {
            Some(Tok::Punct(c)) if c == p => Ok(()),
            other => self.syntax(&format!("expected `{p}`, found {other:?}")),
        }
    }

    fn term(&mut self, arity: usize) -> Result<ProcessTerm, TermsError> {
        let first = self.factor(arity)?;
        let mut parts = vec![first];
        while self.peek() == Some(&Tok::Punct('+')) {
            self.eat();
            parts.push(self.factor(arity)?);
        }
        if parts.len() == 1 {
            return Ok(parts.pop().expect("one part"));
        }
        let mut summands = Vec::new();
        for p in parts {
            match p {
                ProcessTerm::GuardedSum(xs) if xs.len() == 1 => summands.extend(xs),
                _ => return self.syntax("summands of `+` must be guarded terms"),
            }
        }
        Ok(ProcessTerm::GuardedSum(summands))
    }

    fn factor(&mut self, arity: usize) -> Result<ProcessTerm, TermsError> {
        match self.eat() {
            Some(Tok::Num(0)) => Ok(ProcessTerm::nil()),
            Some(Tok::Num(n)) => {
                let guard = match self.eat() {
                    Some(Tok::Punct('?')) => Guard::In(n),
                    Some(Tok::Punct('!')) => Guard::Out(n),
                    other => return self.syntax(&format!("expected `?` or `!`, found {other:?}")),
                };
                if n < 1 || n > arity {
                    return Err(TermsError::ArityMismatch);
                }
                self.expect('.')?;
                let cont = self.factor(arity)?;
                Ok(ProcessTerm::GuardedSum(vec![(guard, cont)]))
            }
            Some(Tok::Word(w)) if w == "tick" => {
                self.expect('.')?;
                let cont = self.factor(arity)?;
                Ok(ProcessTerm::GuardedSum(vec![(Guard::Tick, cont)]))
            }
            Some(Tok::Word(w)) if w == "new" => {
                self.expect('.')?;
                let cont = self.factor(arity + 1)?;
                Ok(ProcessTerm::GuardedSum(vec![(Guard::Nu, cont)]))
            }
            Some(Tok::Punct('(')) => {
                let first = self.term(arity)?;
                match self.eat() {
                    Some(Tok::Punct(')')) => Ok(first),
                    Some(Tok::Punct('|')) => {
                        let second = self.term(arity)?;
                        self.expect(')')?;
                        Ok(ProcessTerm::ForkPair(Box::new(first), Box::new(second)))
                    }
                    other => self.syntax(&format!("expected `)` or `|`, found {other:?}")),
                }
            }
            other => self.syntax(&format!("unexpected {other:?}")),
        }
    }
}
