//! Seeded random generation of positions, plays, and CCS terms for tests
//! and benchmarks.

use rand::prelude::*;

use crate::ccs::{Prefix, Process, Term};
use crate::diagrams::{ChannelId, PlayNet, Player};
use crate::plays::{compose_plays, enumerate_full_moves, PlayCospan};

/// Bounds for generated hosts and plays.
#[derive(Debug, Clone)]
pub struct SampleParams {
    pub max_players: usize,
    pub max_channels: usize,
    pub max_arity: usize,
    pub max_moves: usize,
}

impl Default for SampleParams {
    fn default() -> Self {
        SampleParams {
            max_players: 6,
            max_channels: 4,
            max_arity: 3,
            max_moves: 5,
        }
    }
}

/// A random position within the given bounds (at least one channel so
/// players can exist).
pub fn random_position<R: Rng>(rng: &mut R, params: &SampleParams) -> PlayNet {
    let channels = rng.gen_range(1..=params.max_channels);
    let players = rng.gen_range(0..=params.max_players);
    let players = (0..players)
        .map(|_| {
            let arity = rng.gen_range(0..=params.max_arity);
            Player {
                slots: (0..arity)
                    .map(|_| ChannelId(rng.gen_range(0..channels) as u32))
                    .collect(),
            }
        })
        .collect();
    PlayNet {
        channels,
        players,
        cells: vec![],
    }
}

/// A random play: a random host position followed by up to `max_moves`
/// random full moves.
pub fn random_play<R: Rng>(rng: &mut R, params: &SampleParams) -> crate::plays::Move {
    let host = random_position(rng, params);
    random_play_from(rng, host, params)
}

/// A random play from a fixed starting position. The result is returned as
/// a [`crate::plays::Move`]-shaped record only for its cospan; its `core`
/// field names the last move's core.
pub fn random_play_from<R: Rng>(
    rng: &mut R,
    host: PlayNet,
    params: &SampleParams,
) -> crate::plays::Move {
    let mut acc = PlayCospan::identity(&host);
    let mut last_core = crate::diagrams::CellId(0);
    let mut spectators = Vec::new();
    let moves = rng.gen_range(0..=params.max_moves);
    for _ in 0..moves {
        let (pos, _) = acc.final_position().expect("final border");
        let descriptors: Vec<_> = enumerate_full_moves(&pos)
            .expect("enumerate")
            .into_iter()
            .filter(|d| !d.is_identity())
            .collect();
        if descriptors.is_empty() {
            break;
        }
        let pick = rng.gen_range(0..descriptors.len());
        let data = descriptors[pick].data.as_ref().expect("non-identity");
        spectators = data.mov.spectators.clone();
        if acc.net.cells.is_empty() && acc.net == pos {
            acc = data.mov.cospan.clone();
        } else {
            acc = compose_plays(&data.mov.cospan, &acc).expect("compose");
        }
        last_core = crate::diagrams::CellId((acc.net.cells.len() - 1) as u32);
    }
    crate::plays::Move {
        cospan: acc,
        core: last_core,
        spectators,
        host_channels: host.channel_ids().collect(),
    }
}

/// A random valid net (the net of a random play).
pub fn random_net<R: Rng>(rng: &mut R, params: &SampleParams) -> PlayNet {
    random_play(rng, params).cospan.net
}

/// The single-element mutation set used by the correctness-criterion
/// tests: deleting one final-border player, deleting one cell, or
/// redirecting one unary target reference to another player of the same
/// arity. Synchronisation cores are exempt from deletion: dropping one
/// leaves its two halves as a genuinely valid blind composition of an
/// output and an input move, which no sound criterion can reject.
pub fn mutations(play: &PlayCospan) -> Vec<(String, PlayCospan)> {
    use crate::diagrams::{Cell, CellId};
    let mut out = Vec::new();
    for i in 0..play.final_players.len() {
        let mut mutant = play.clone();
        let removed = mutant.final_players.remove(i);
        out.push((format!("delete final-border player {removed}"), mutant));
    }
    for k in play.net.cell_ids() {
        if matches!(play.net.cell(k), Cell::Tau { .. }) {
            continue;
        }
        let mut mutant = play.clone();
        let kept: Vec<CellId> = play.net.cell_ids().filter(|j| *j != k).collect();
        mutant.net.cells = kept.iter().map(|j| play.net.cell(*j).clone()).collect();
        for cell in mutant.net.cells.iter_mut() {
            let remap = |r: &mut CellId| {
                if let Some(newi) = kept.iter().position(|j| j == r) {
                    *r = CellId(newi as u32);
                } else {
                    // Dangling on purpose: the deletion must be caught.
                    *r = CellId(u32::MAX);
                }
            };
            match cell {
                Cell::Fork { left, right } => {
                    remap(left);
                    remap(right);
                }
                Cell::Tau { out, input } => {
                    remap(out);
                    remap(input);
                }
                Cell::Unary { .. } => {}
            }
        }
        out.push((format!("delete cell {k}"), mutant));
    }
    for k in play.net.cell_ids() {
        let Cell::Unary { kind, src, tgt } = play.net.cell(k) else {
            continue;
        };
        for other in play.net.player_ids() {
            if other == *tgt || play.net.player(other).arity() != play.net.player(*tgt).arity() {
                continue;
            }
            let mut mutant = play.clone();
            mutant.net.cells[k.index()] = Cell::Unary {
                kind: *kind,
                src: *src,
                tgt: other,
            };
            out.push((
                format!("redirect target of cell {k} to player {other}"),
                mutant,
            ));
        }
    }
    out
}

/// A random finite CCS term of bounded size over `gamma` channels.
pub fn random_process<R: Rng>(rng: &mut R, gamma: usize, size_budget: usize) -> Process {
    let body = random_term(rng, gamma, size_budget);
    Process::new(gamma, body).expect("generated terms are well-typed")
}

fn random_term<R: Rng>(rng: &mut R, gamma: usize, budget: usize) -> Term {
    if budget <= 1 {
        return Term::nil();
    }
    match rng.gen_range(0..10) {
        // Guarded sum with 1-2 summands.
        0..=5 => {
            let summands = if budget >= 5 && rng.gen_bool(0.3) {
                2
            } else {
                1
            };
            let per = (budget - 1) / summands;
            let xs = (0..summands)
                .map(|_| {
                    let guard = match rng.gen_range(0..3) {
                        0 if gamma > 0 => Prefix::In(rng.gen_range(1..=gamma)),
                        1 if gamma > 0 => Prefix::Out(rng.gen_range(1..=gamma)),
                        _ => Prefix::Tick,
                    };
                    (guard, random_term(rng, gamma, per.saturating_sub(1)))
                })
                .collect();
            Term::Sum(xs)
        }
        6..=7 => {
            let left = random_term(rng, gamma, (budget - 1) / 2);
            let right = random_term(rng, gamma, (budget - 1) / 2);
            Term::Par(Box::new(left), Box::new(right))
        }
        _ => Term::Nu(Box::new(random_term(rng, gamma + 1, budget - 1))),
    }
}

/// Exhaustively enumerates the bodies of all processes over `gamma` with
/// size at most `max_size` (size counts grammar nodes; each summand's
/// guard adds one).
pub fn enumerate_terms(gamma: usize, max_size: usize) -> Vec<Term> {
    let mut out = Vec::new();
    enumerate_into(gamma, max_size, &mut out);
    out
}

fn guards(gamma: usize) -> Vec<Prefix> {
    let mut gs = vec![Prefix::Tick];
    for a in 1..=gamma {
        gs.push(Prefix::In(a));
        gs.push(Prefix::Out(a));
    }
    gs
}

fn enumerate_into(gamma: usize, max_size: usize, out: &mut Vec<Term>) {
    // Sums: pick a multiset of (guard, continuation) summands.
    // Size: 1 + sum (1 + |cont|).
    fn sums(gamma: usize, budget: usize) -> Vec<Vec<(Prefix, Term)>> {
        let mut result = vec![vec![]];
        // At least one summand consumes 1 + 1 (guard + nil), so recurse
        // while the budget allows another summand.
        if budget >= 2 {
            for cont_size in 1..=(budget - 1) {
                let mut conts = Vec::new();
                enumerate_sized(gamma, cont_size, &mut conts);
                for g in guards(gamma) {
                    for cont in &conts {
                        for rest in sums(gamma, budget - 1 - cont_size) {
                            let mut v = vec![(g, cont.clone())];
                            v.extend(rest);
                            result.push(v);
                        }
                    }
                }
            }
        }
        result
    }

    fn enumerate_sized(gamma: usize, size: usize, out: &mut Vec<Term>) {
        if size == 0 {
            return;
        }
        // Sums of total size exactly `size`.
        for xs in sums(gamma, size - 1) {
            let t = Term::Sum(xs);
            if t.size() == size {
                out.push(t);
            }
        }
        // Parallel compositions.
        if size >= 3 {
            for left_size in 1..=(size - 2) {
                let right_size = size - 1 - left_size;
                let mut ls = Vec::new();
                enumerate_sized(gamma, left_size, &mut ls);
                let mut rs = Vec::new();
                enumerate_sized(gamma, right_size, &mut rs);
                for l in &ls {
                    for r in &rs {
                        out.push(Term::Par(Box::new(l.clone()), Box::new(r.clone())));
                    }
                }
            }
        }
        // Restrictions.
        if size >= 2 {
            let mut bodies = Vec::new();
            enumerate_sized(gamma + 1, size - 1, &mut bodies);
            for b in bodies {
                out.push(Term::Nu(Box::new(b)));
            }
        }
    }

    for size in 1..=max_size {
        enumerate_sized(gamma, size, out);
    }
}
