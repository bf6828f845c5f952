//! Seeds, moves, play composition, the correctness criterion, decomposition,
//! views, history maps and cartesian restriction.

mod check;
mod dot;
mod restrict;
mod view;

pub use check::{
    causal_graph, check_play, decompose_play, CausalGraph, CausalLabel, Condition, Verdict,
};
pub use dot::{causal_dot, play_dot};
pub use restrict::{history_map, restrict_play, Element, HistoryMap};
pub use view::view_of;

use thiserror::Error;

use crate::ccs::ALabel;
use crate::diagrams::{
    extract_position, pushout, validate_net, Cell, CellId, ChannelId, DiagramError, Embedding,
    PlayNet, Player, PlayerId, UnaryKind, Violation,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlaysError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("net is not well-formed: {0:?}")]
    InvalidNet(Vec<Violation>),
    #[error("cospan is not well-formed: {0}")]
    InvalidCospan(String),
    #[error("borders do not match")]
    BorderMismatch,
    #[error("play rejected: {0}")]
    Rejected(String),
    #[error("index out of range")]
    OutOfRange,
    #[error("channel assignment is not monic")]
    NonMonic,
    #[error("player {0} is not in the final border")]
    NotFinal(PlayerId),
    #[error("restriction image is not closed under attachment maps: {0}")]
    NotStable(String),
}

/// A play presented as a cospan: the net together with its final and
/// initial borders, given as sorted element-id lists (the border positions
/// embed by those images).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlayCospan {
    pub net: PlayNet,
    pub final_channels: Vec<ChannelId>,
    pub final_players: Vec<PlayerId>,
    pub initial_channels: Vec<ChannelId>,
    pub initial_players: Vec<PlayerId>,
}

impl PlayCospan {
    /// The identity play on a position.
    pub fn identity(pos: &PlayNet) -> Self {
        PlayCospan {
            net: pos.clone(),
            final_channels: pos.channel_ids().collect(),
            final_players: pos.player_ids().collect(),
            initial_channels: pos.channel_ids().collect(),
            initial_players: pos.player_ids().collect(),
        }
    }

    pub fn final_position(&self) -> Result<(PlayNet, Embedding), DiagramError> {
        extract_position(&self.net, &self.final_channels, &self.final_players)
    }

    pub fn initial_position(&self) -> Result<(PlayNet, Embedding), DiagramError> {
        extract_position(&self.net, &self.initial_channels, &self.initial_players)
    }

    /// Table-level well-formedness: valid net, sorted in-range borders,
    /// borders extract to positions.
    pub fn validate(&self) -> Result<(), PlaysError> {
        let violations = validate_net(&self.net);
        if !violations.is_empty() {
            return Err(PlaysError::InvalidNet(violations));
        }
        for (name, list) in [
            (
                "final channels",
                self.final_channels
                    .iter()
                    .map(|c| c.index())
                    .collect::<Vec<_>>(),
            ),
            (
                "initial channels",
                self.initial_channels.iter().map(|c| c.index()).collect(),
            ),
        ] {
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(PlaysError::InvalidCospan(format!("{name} not sorted")));
            }
        }
        for (name, list) in [
            (
                "final players",
                self.final_players
                    .iter()
                    .map(|p| p.index())
                    .collect::<Vec<_>>(),
            ),
            (
                "initial players",
                self.initial_players.iter().map(|p| p.index()).collect(),
            ),
        ] {
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(PlaysError::InvalidCospan(format!("{name} not sorted")));
            }
        }
        self.final_position()
            .map_err(|e| PlaysError::InvalidCospan(e.to_string()))?;
        self.initial_position()
            .map_err(|e| PlaysError::InvalidCospan(e.to_string()))?;
        Ok(())
    }
}

/// Isomorphism classes of basic moves from an individual. The arity is
/// carried by context; `In`/`Out` hold the 1-based slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasicMoveClass {
    ForkL,
    ForkR,
    Tick,
    Nu,
    In(usize),
    Out(usize),
}

impl BasicMoveClass {
    /// All basic classes at arity `n`, in canonical order.
    pub fn all(n: usize) -> Vec<BasicMoveClass> {
        let mut v = vec![
            BasicMoveClass::ForkL,
            BasicMoveClass::ForkR,
            BasicMoveClass::Tick,
            BasicMoveClass::Nu,
        ];
        v.extend((1..=n).map(BasicMoveClass::In));
        v.extend((1..=n).map(BasicMoveClass::Out));
        v
    }

    /// Arity of the avatar after the move, for a player of arity `n`.
    pub fn child_arity(self, n: usize) -> usize {
        match self {
            BasicMoveClass::Nu => n + 1,
            _ => n,
        }
    }
}

/// The shapes a seed can take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeedClass {
    /// A basic seed at arity `n`.
    Basic(usize, BasicMoveClass),
    /// The full fork at arity `n`.
    FullFork(usize),
    /// Synchronisation of an `m`-ary sender (slot `c`) with an `n`-ary
    /// receiver (slot `a`).
    Tau {
        n: usize,
        a: usize,
        m: usize,
        c: usize,
    },
}

/// A seed: the local cospan shape of one move, with its unique core.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seed {
    pub class: SeedClass,
    pub cospan: PlayCospan,
    pub core: CellId,
}

/// Builds the canonical representative seed with fresh dense ids.
pub fn make_seed(class: SeedClass) -> Result<Seed, PlaysError> {
    let cid = |i: usize| ChannelId(i as u32);
    let pid = |i: usize| PlayerId(i as u32);
    let all = |k: usize| (0..k as u32).map(ChannelId).collect::<Vec<_>>();
    let (net, final_players, core) = match class {
        SeedClass::Basic(n, b) => {
            let tgt = Player { slots: all(n) };
            let (src, kind, channels) = match b {
                BasicMoveClass::ForkL => (tgt.clone(), UnaryKind::ForkL, n),
                BasicMoveClass::ForkR => (tgt.clone(), UnaryKind::ForkR, n),
                BasicMoveClass::Tick => (tgt.clone(), UnaryKind::Tick, n),
                BasicMoveClass::Nu => (Player { slots: all(n + 1) }, UnaryKind::Nu, n + 1),
                BasicMoveClass::In(a) => {
                    if a < 1 || a > n {
                        return Err(PlaysError::OutOfRange);
                    }
                    (tgt.clone(), UnaryKind::In(a), n)
                }
                BasicMoveClass::Out(c) => {
                    if c < 1 || c > n {
                        return Err(PlaysError::OutOfRange);
                    }
                    (tgt.clone(), UnaryKind::Out(c), n)
                }
            };
            let net = PlayNet {
                channels,
                players: vec![tgt, src],
                cells: vec![Cell::Unary {
                    kind,
                    src: pid(1),
                    tgt: pid(0),
                }],
            };
            (net, vec![pid(1)], CellId(0))
        }
        SeedClass::FullFork(n) => {
            let slots = all(n);
            let net = PlayNet {
                channels: n,
                players: vec![
                    Player {
                        slots: slots.clone(),
                    },
                    Player {
                        slots: slots.clone(),
                    },
                    Player { slots },
                ],
                cells: vec![
                    Cell::Unary {
                        kind: UnaryKind::ForkL,
                        src: pid(1),
                        tgt: pid(0),
                    },
                    Cell::Unary {
                        kind: UnaryKind::ForkR,
                        src: pid(2),
                        tgt: pid(0),
                    },
                    Cell::Fork {
                        left: CellId(0),
                        right: CellId(1),
                    },
                ],
            };
            (net, vec![pid(1), pid(2)], CellId(2))
        }
        SeedClass::Tau { n, a, m, c } => {
            if a < 1 || a > n || c < 1 || c > m {
                return Err(PlaysError::OutOfRange);
            }
            // Sender slots are channels 0..m-1; receiver slots are fresh
            // except the shared synchronisation channel.
            let sender_slots = all(m);
            let mut next = m;
            let receiver_slots: Vec<ChannelId> = (1..=n)
                .map(|j| {
                    if j == a {
                        cid(c - 1)
                    } else {
                        next += 1;
                        cid(next - 1)
                    }
                })
                .collect();
            let net = PlayNet {
                channels: next,
                players: vec![
                    Player {
                        slots: sender_slots.clone(),
                    },
                    Player {
                        slots: receiver_slots.clone(),
                    },
                    Player {
                        slots: sender_slots,
                    },
                    Player {
                        slots: receiver_slots,
                    },
                ],
                cells: vec![
                    Cell::Unary {
                        kind: UnaryKind::Out(c),
                        src: pid(2),
                        tgt: pid(0),
                    },
                    Cell::Unary {
                        kind: UnaryKind::In(a),
                        src: pid(3),
                        tgt: pid(1),
                    },
                    Cell::Tau {
                        out: CellId(0),
                        input: CellId(1),
                    },
                ],
            };
            (net, vec![pid(2), pid(3)], CellId(2))
        }
    };
    let cospan = PlayCospan {
        final_channels: net.channel_ids().collect(),
        final_players,
        initial_channels: net.initial_channels(),
        initial_players: net.initial_players(),
        net,
    };
    Ok(Seed {
        class,
        cospan,
        core,
    })
}

/// A move: a seed glued into a host position, with the gluing record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Move {
    pub cospan: PlayCospan,
    pub core: CellId,
    /// Host players, unchanged across both borders.
    pub spectators: Vec<PlayerId>,
    /// Host channels, as ids in the move's net.
    pub host_channels: Vec<ChannelId>,
}

/// Glues a seed into a host position along a channel assignment from the
/// seed's interface (its initial channels) into the host.
pub fn embed_seed(seed: &Seed, host: &PlayNet, assign: &[ChannelId]) -> Result<Move, PlaysError> {
    if !host.is_position() {
        return Err(PlaysError::InvalidCospan("host must be a position".into()));
    }
    let interface_len = seed.cospan.initial_channels.len();
    if assign.len() != interface_len {
        return Err(PlaysError::OutOfRange);
    }
    let mut seen = vec![false; host.channels];
    for c in assign {
        if c.index() >= host.channels {
            return Err(PlaysError::OutOfRange);
        }
        if std::mem::replace(&mut seen[c.index()], true) {
            return Err(PlaysError::NonMonic);
        }
    }
    let interface = PlayNet {
        channels: interface_len,
        players: vec![],
        cells: vec![],
    };
    let f = Embedding {
        channel_map: seed.cospan.initial_channels.clone(),
        player_map: vec![],
        cell_map: vec![],
    };
    let g = Embedding {
        channel_map: assign.to_vec(),
        player_map: vec![],
        cell_map: vec![],
    };
    let (net, j_seed, j_host) = pushout(&interface, &f, &seed.cospan.net, &g, host)?;

    let sorted = |mut v: Vec<ChannelId>| {
        v.sort_unstable();
        v.dedup();
        v
    };
    let host_channels: Vec<ChannelId> = host.channel_ids().map(|c| j_host.chan(c)).collect();
    let final_channels = sorted(
        seed.cospan
            .final_channels
            .iter()
            .map(|c| j_seed.chan(*c))
            .chain(host_channels.iter().copied())
            .collect(),
    );
    let initial_channels = sorted(
        seed.cospan
            .initial_channels
            .iter()
            .map(|c| j_seed.chan(*c))
            .chain(host_channels.iter().copied())
            .collect(),
    );
    let spectators: Vec<PlayerId> = host.player_ids().map(|p| j_host.player(p)).collect();
    let mut final_players: Vec<PlayerId> = seed
        .cospan
        .final_players
        .iter()
        .map(|p| j_seed.player(*p))
        .chain(spectators.iter().copied())
        .collect();
    final_players.sort_unstable();
    let mut initial_players: Vec<PlayerId> = seed
        .cospan
        .initial_players
        .iter()
        .map(|p| j_seed.player(*p))
        .chain(spectators.iter().copied())
        .collect();
    initial_players.sort_unstable();

    Ok(Move {
        cospan: PlayCospan {
            net,
            final_channels,
            final_players,
            initial_channels,
            initial_players,
        },
        core: j_seed.cell(seed.core),
        spectators,
        host_channels: {
            let mut h = host_channels;
            h.sort_unstable();
            h
        },
    })
}

/// What a full move does, located at a position. Slots are 1-based;
/// `channel` is the channel acted on in the position's net.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MoveAction {
    Identity,
    Fork {
        player: PlayerId,
    },
    Tick {
        player: PlayerId,
    },
    Nu {
        player: PlayerId,
    },
    In {
        player: PlayerId,
        slot: usize,
        channel: ChannelId,
    },
    Out {
        player: PlayerId,
        slot: usize,
        channel: ChannelId,
    },
    Tau {
        out_player: PlayerId,
        out_slot: usize,
        in_player: PlayerId,
        in_slot: usize,
        channel: ChannelId,
    },
}

impl std::fmt::Display for MoveAction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MoveAction::Identity => write!(f, "id"),
            MoveAction::Fork { player } => write!(f, "fork@{player}"),
            MoveAction::Tick { player } => write!(f, "tick@{player}"),
            MoveAction::Nu { player } => write!(f, "nu@{player}"),
            MoveAction::In {
                player, channel, ..
            } => write!(f, "in@{player}(ch{channel})"),
            MoveAction::Out {
                player, channel, ..
            } => write!(f, "out@{player}(ch{channel})"),
            MoveAction::Tau {
                out_player,
                in_player,
                channel,
                ..
            } => {
                write!(f, "tau@{out_player},{in_player}(ch{channel})")
            }
        }
    }
}

/// Role of a final-border player of a move: either an untouched spectator
/// or an avatar of an acting player, tagged with the basic sub-move it
/// performs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Spectator(PlayerId),
    Involved {
        origin: PlayerId,
        class: BasicMoveClass,
    },
}

impl Role {
    pub fn origin(&self) -> PlayerId {
        match self {
            Role::Spectator(p) => *p,
            Role::Involved { origin, .. } => *origin,
        }
    }
}

/// The move data of a non-identity descriptor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveData {
    pub mov: Move,
    /// Canonical extraction of the final border.
    pub final_position: PlayNet,
    /// Indexed by player id of `final_position`.
    pub roles: Vec<Role>,
}

/// A full move or identity at a position, used as an LTS label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveDescriptor {
    pub action: MoveAction,
    pub data: Option<MoveData>,
}

impl MoveDescriptor {
    pub fn is_identity(&self) -> bool {
        self.action == MoveAction::Identity
    }
}

/// Builds the move performing `action` at position `x`. The move's initial
/// border is `x` itself (identity embedding); new elements get fresh ids
/// after `x`'s.
pub fn move_at(x: &PlayNet, action: MoveAction) -> Result<MoveDescriptor, PlaysError> {
    if !x.is_position() {
        return Err(PlaysError::InvalidCospan(
            "moves take place at positions".into(),
        ));
    }
    if action == MoveAction::Identity {
        return Ok(MoveDescriptor { action, data: None });
    }
    let mut net = x.clone();
    let mut consumed: Vec<PlayerId> = Vec::new();
    let mut avatars: Vec<(PlayerId, PlayerId, BasicMoveClass)> = Vec::new();
    let push_player = |net: &mut PlayNet, slots: Vec<ChannelId>| {
        let id = PlayerId(net.players.len() as u32);
        net.players.push(Player { slots });
        id
    };
    let check_player = |p: PlayerId| {
        if p.index() < x.players.len() {
            Ok(())
        } else {
            Err(PlaysError::OutOfRange)
        }
    };
    let core;
    match action {
        MoveAction::Identity => unreachable!(),
        MoveAction::Fork { player } => {
            check_player(player)?;
            let slots = x.player(player).slots.clone();
            let left = push_player(&mut net, slots.clone());
            let right = push_player(&mut net, slots);
            net.cells.push(Cell::Unary {
                kind: UnaryKind::ForkL,
                src: left,
                tgt: player,
            });
            net.cells.push(Cell::Unary {
                kind: UnaryKind::ForkR,
                src: right,
                tgt: player,
            });
            net.cells.push(Cell::Fork {
                left: CellId(0),
                right: CellId(1),
            });
            core = CellId(2);
            consumed.push(player);
            avatars.push((left, player, BasicMoveClass::ForkL));
            avatars.push((right, player, BasicMoveClass::ForkR));
        }
        MoveAction::Tick { player } => {
            check_player(player)?;
            let avatar = push_player(&mut net, x.player(player).slots.clone());
            net.cells.push(Cell::Unary {
                kind: UnaryKind::Tick,
                src: avatar,
                tgt: player,
            });
            core = CellId(0);
            consumed.push(player);
            avatars.push((avatar, player, BasicMoveClass::Tick));
        }
        MoveAction::Nu { player } => {
            check_player(player)?;
            let created = ChannelId(net.channels as u32);
            net.channels += 1;
            let mut slots = x.player(player).slots.clone();
            slots.push(created);
            let avatar = push_player(&mut net, slots);
            net.cells.push(Cell::Unary {
                kind: UnaryKind::Nu,
                src: avatar,
                tgt: player,
            });
            core = CellId(0);
            consumed.push(player);
            avatars.push((avatar, player, BasicMoveClass::Nu));
        }
        MoveAction::In {
            player,
            slot,
            channel,
        }
        | MoveAction::Out {
            player,
            slot,
            channel,
        } => {
            check_player(player)?;
            let p = x.player(player);
            if slot < 1 || slot > p.arity() || p.slots[slot - 1] != channel {
                return Err(PlaysError::OutOfRange);
            }
            let avatar = push_player(&mut net, p.slots.clone());
            let (kind, class) = if matches!(action, MoveAction::In { .. }) {
                (UnaryKind::In(slot), BasicMoveClass::In(slot))
            } else {
                (UnaryKind::Out(slot), BasicMoveClass::Out(slot))
            };
            net.cells.push(Cell::Unary {
                kind,
                src: avatar,
                tgt: player,
            });
            core = CellId(0);
            consumed.push(player);
            avatars.push((avatar, player, class));
        }
        MoveAction::Tau {
            out_player,
            out_slot,
            in_player,
            in_slot,
            channel,
        } => {
            check_player(out_player)?;
            check_player(in_player)?;
            if out_player == in_player {
                return Err(PlaysError::OutOfRange);
            }
            let op = x.player(out_player);
            let ip = x.player(in_player);
            if out_slot < 1
                || out_slot > op.arity()
                || in_slot < 1
                || in_slot > ip.arity()
                || op.slots[out_slot - 1] != channel
                || ip.slots[in_slot - 1] != channel
            {
                return Err(PlaysError::OutOfRange);
            }
            let out_avatar = push_player(&mut net, op.slots.clone());
            let in_avatar = push_player(&mut net, ip.slots.clone());
            net.cells.push(Cell::Unary {
                kind: UnaryKind::Out(out_slot),
                src: out_avatar,
                tgt: out_player,
            });
            net.cells.push(Cell::Unary {
                kind: UnaryKind::In(in_slot),
                src: in_avatar,
                tgt: in_player,
            });
            net.cells.push(Cell::Tau {
                out: CellId(0),
                input: CellId(1),
            });
            core = CellId(2);
            consumed.push(out_player);
            consumed.push(in_player);
            avatars.push((out_avatar, out_player, BasicMoveClass::Out(out_slot)));
            avatars.push((in_avatar, in_player, BasicMoveClass::In(in_slot)));
        }
    }

    let spectators: Vec<PlayerId> = x.player_ids().filter(|p| !consumed.contains(p)).collect();
    let mut final_players: Vec<PlayerId> = spectators
        .iter()
        .copied()
        .chain(avatars.iter().map(|(av, _, _)| *av))
        .collect();
    final_players.sort_unstable();
    let cospan = PlayCospan {
        final_channels: net.channel_ids().collect(),
        final_players: final_players.clone(),
        initial_channels: x.channel_ids().collect(),
        initial_players: x.player_ids().collect(),
        net,
    };
    let (final_position, _) = cospan.final_position()?;
    let roles: Vec<Role> = final_players
        .iter()
        .map(|p| {
            if let Some((_, origin, class)) = avatars.iter().find(|(av, _, _)| av == p) {
                Role::Involved {
                    origin: *origin,
                    class: *class,
                }
            } else {
                Role::Spectator(*p)
            }
        })
        .collect();
    // Every non-identity full move touches at least one player; a move
    // with no involved avatar would make the guard-matching transition
    // cases vacuous.
    assert!(
        roles.iter().any(|r| matches!(r, Role::Involved { .. })),
        "full move without involved players"
    );
    let mov = Move {
        cospan,
        core,
        spectators,
        host_channels: x.channel_ids().collect(),
    };
    Ok(MoveDescriptor {
        action,
        data: Some(MoveData {
            mov,
            final_position,
            roles,
        }),
    })
}

/// Enumerates the identity and every full move at a position, in a fixed
/// deterministic order: identity first, then per player (fork, tick, nu,
/// inputs, outputs), then synchronisations by (sender, sender slot,
/// receiver, receiver slot).
pub fn enumerate_full_moves(x: &PlayNet) -> Result<Vec<MoveDescriptor>, PlaysError> {
    enumerate_moves(x, true)
}

/// Like [`enumerate_full_moves`] but skips the open inputs and outputs,
/// keeping only the closed-world labels (identity, forks, ticks, channel
/// creations, synchronisations).
pub fn enumerate_closed_world_moves(x: &PlayNet) -> Result<Vec<MoveDescriptor>, PlaysError> {
    enumerate_moves(x, false)
}

fn enumerate_moves(x: &PlayNet, with_open: bool) -> Result<Vec<MoveDescriptor>, PlaysError> {
    let mut out = vec![MoveDescriptor {
        action: MoveAction::Identity,
        data: None,
    }];
    for p in x.player_ids() {
        let n = x.player(p).arity();
        out.push(move_at(x, MoveAction::Fork { player: p })?);
        out.push(move_at(x, MoveAction::Tick { player: p })?);
        out.push(move_at(x, MoveAction::Nu { player: p })?);
        if with_open {
            for slot in 1..=n {
                let channel = x.player(p).slots[slot - 1];
                out.push(move_at(
                    x,
                    MoveAction::In {
                        player: p,
                        slot,
                        channel,
                    },
                )?);
            }
            for slot in 1..=n {
                let channel = x.player(p).slots[slot - 1];
                out.push(move_at(
                    x,
                    MoveAction::Out {
                        player: p,
                        slot,
                        channel,
                    },
                )?);
            }
        }
    }
    for sender in x.player_ids() {
        for out_slot in 1..=x.player(sender).arity() {
            let channel = x.player(sender).slots[out_slot - 1];
            for receiver in x.player_ids() {
                if receiver == sender {
                    continue;
                }
                for in_slot in 1..=x.player(receiver).arity() {
                    if x.player(receiver).slots[in_slot - 1] == channel {
                        out.push(move_at(
                            x,
                            MoveAction::Tau {
                                out_player: sender,
                                out_slot,
                                in_player: receiver,
                                in_slot,
                                channel,
                            },
                        )?);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Composes two plays sharing a border: `v` happens first, then `u`.
/// Requires `u`'s initial position and `v`'s final position to match
/// exactly (id-for-id in their canonical extractions).
pub fn compose_plays(u: &PlayCospan, v: &PlayCospan) -> Result<PlayCospan, PlaysError> {
    let (ui, ui_emb) = u.initial_position()?;
    let (vf, vf_emb) = v.final_position()?;
    if ui != vf {
        return Err(PlaysError::BorderMismatch);
    }
    compose_over(u, &ui_emb, v, &vf_emb, &ui)
}

/// Re-gluing helper: like [`compose_plays`] but matches the borders up to
/// isomorphism, searching with [`crate::diagrams::find_iso`].
pub fn compose_plays_upto_iso(u: &PlayCospan, v: &PlayCospan) -> Result<PlayCospan, PlaysError> {
    let (ui, ui_emb) = u.initial_position()?;
    let (vf, vf_emb) = v.final_position()?;
    let Some(iso) = crate::diagrams::find_iso(&ui, &vf) else {
        return Err(PlaysError::BorderMismatch);
    };
    let glue = iso.forward.compose(&vf_emb);
    compose_over(u, &ui_emb, v, &glue, &ui)
}

fn compose_over(
    u: &PlayCospan,
    u_leg: &Embedding,
    v: &PlayCospan,
    v_leg: &Embedding,
    border: &PlayNet,
) -> Result<PlayCospan, PlaysError> {
    let (net, j_v, j_u) = pushout(border, v_leg, &v.net, u_leg, &u.net)?;
    let mut final_channels: Vec<ChannelId> =
        u.final_channels.iter().map(|c| j_u.chan(*c)).collect();
    final_channels.sort_unstable();
    let mut final_players: Vec<PlayerId> = u.final_players.iter().map(|p| j_u.player(*p)).collect();
    final_players.sort_unstable();
    let mut initial_channels: Vec<ChannelId> =
        v.initial_channels.iter().map(|c| j_v.chan(*c)).collect();
    initial_channels.sort_unstable();
    let mut initial_players: Vec<PlayerId> =
        v.initial_players.iter().map(|p| j_v.player(*p)).collect();
    initial_players.sort_unstable();
    Ok(PlayCospan {
        net,
        final_channels,
        final_players,
        initial_channels,
        initial_players,
    })
}

/// Left-to-right composite of moves in temporal order.
pub fn compose_chain(moves: &[Move]) -> Result<PlayCospan, PlaysError> {
    let Some((first, rest)) = moves.split_first() else {
        return Err(PlaysError::InvalidCospan("empty chain".into()));
    };
    let mut acc = first.cospan.clone();
    for m in rest {
        acc = compose_plays(&m.cospan, &acc)?;
    }
    Ok(acc)
}

/// Labels over the one-tick alphabet: every closed-world move is silent
/// except ticks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SigmaLabel {
    Silent,
    Tick,
}

/// Classification of a move descriptor against an optional interface
/// (a list of channels of the underlying position).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MoveClassification {
    pub full: bool,
    pub closed_world: bool,
    pub sigma: SigmaLabel,
    /// Present when the move is observable through the interface: `Id` for
    /// closed-world moves, `Tick` for ticks, `In(i)`/`Out(i)` when the
    /// channel is the `i`-th interface channel. `None` for an input or
    /// output on a channel outside the interface (the edge is excluded
    /// from the interfaced LTS), or when no interface is given.
    pub a_label: Option<ALabel>,
}

/// Classifies a move descriptor. `interface` lists the interface's channel
/// images in the position, 1-based for labelling.
pub fn classify_move(m: &MoveDescriptor, interface: Option<&[ChannelId]>) -> MoveClassification {
    let (closed_world, sigma) = match m.action {
        MoveAction::Identity
        | MoveAction::Fork { .. }
        | MoveAction::Nu { .. }
        | MoveAction::Tau { .. } => (true, SigmaLabel::Silent),
        MoveAction::Tick { .. } => (true, SigmaLabel::Tick),
        MoveAction::In { .. } | MoveAction::Out { .. } => (false, SigmaLabel::Silent),
    };
    let a_label = interface.and_then(|h| match m.action {
        MoveAction::Identity
        | MoveAction::Fork { .. }
        | MoveAction::Nu { .. }
        | MoveAction::Tau { .. } => Some(ALabel::Id),
        MoveAction::Tick { .. } => Some(ALabel::Tick),
        MoveAction::In { channel, .. } => h
            .iter()
            .position(|c| *c == channel)
            .map(|i| ALabel::In(i + 1)),
        MoveAction::Out { channel, .. } => h
            .iter()
            .position(|c| *c == channel)
            .map(|i| ALabel::Out(i + 1)),
    });
    MoveClassification {
        full: true,
        closed_world,
        sigma,
        a_label,
    }
}

/// Serializes a play: a two-line header naming the border element ids,
/// then the net in the canonical element-table format.
pub fn print_play(c: &PlayCospan) -> String {
    let ids = |v: &[u32]| {
        v.iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let chans = |v: &[ChannelId]| ids(&v.iter().map(|c| c.0).collect::<Vec<_>>());
    let players = |v: &[PlayerId]| ids(&v.iter().map(|p| p.0).collect::<Vec<_>>());
    format!(
        "final channels {} players {}\ninitial channels {} players {}\n{}",
        chans(&c.final_channels),
        players(&c.final_players),
        chans(&c.initial_channels),
        players(&c.initial_players),
        crate::diagrams::print_net(&c.net),
    )
}

/// Parses the output of [`print_play`].
pub fn parse_play(text: &str) -> Result<PlayCospan, PlaysError> {
    let mut lines = text.lines();
    let header = |line: Option<&str>, tag: &str| -> Result<(Vec<u32>, Vec<u32>), PlaysError> {
        let line = line.ok_or_else(|| PlaysError::InvalidCospan("missing header".into()))?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.first() != Some(&tag) || tokens.get(1) != Some(&"channels") {
            return Err(PlaysError::InvalidCospan(format!("bad `{tag}` header")));
        }
        let split = tokens
            .iter()
            .position(|t| *t == "players")
            .ok_or_else(|| PlaysError::InvalidCospan(format!("bad `{tag}` header")))?;
        let parse_ids = |ts: &[&str]| {
            ts.iter()
                .map(|t| {
                    t.parse::<u32>()
                        .map_err(|_| PlaysError::InvalidCospan(format!("bad id `{t}`")))
                })
                .collect::<Result<Vec<_>, _>>()
        };
        Ok((
            parse_ids(&tokens[2..split])?,
            parse_ids(&tokens[split + 1..])?,
        ))
    };
    let (fc, fp) = header(lines.next(), "final")?;
    let (ic, ip) = header(lines.next(), "initial")?;
    let rest: String = lines.collect::<Vec<_>>().join("\n");
    let net =
        crate::diagrams::parse_net(&rest).map_err(|e| PlaysError::InvalidCospan(e.to_string()))?;
    let cospan = PlayCospan {
        net,
        final_channels: fc.into_iter().map(ChannelId).collect(),
        final_players: fp.into_iter().map(PlayerId).collect(),
        initial_channels: ic.into_iter().map(ChannelId).collect(),
        initial_players: ip.into_iter().map(PlayerId).collect(),
    };
    cospan.validate()?;
    Ok(cospan)
}

/// A small worked example: a binary fork glued next to a spectator
/// player holding one of the fork's channels and a private one.
pub fn example_fork_move() -> Move {
    let seed = make_seed(SeedClass::FullFork(2)).expect("seed");
    let host = PlayNet {
        channels: 3,
        players: vec![Player {
            slots: vec![ChannelId(1), ChannelId(2)],
        }],
        cells: vec![],
    };
    embed_seed(&seed, &host, &[ChannelId(0), ChannelId(1)]).expect("move")
}

/// The two-fork play obtained by letting the spectator of
/// [`example_fork_move`] fork in turn.
pub fn example_fork_play() -> PlayCospan {
    let first = example_fork_move();
    let (pos, _) = first.cospan.final_position().expect("position");
    let spectator = first
        .spectators
        .first()
        .map(|p| {
            // Index of the spectator in the sorted final border.
            let idx = first
                .cospan
                .final_players
                .iter()
                .position(|q| q == p)
                .expect("in border");
            PlayerId(idx as u32)
        })
        .expect("spectator");
    let second = move_at(&pos, MoveAction::Fork { player: spectator }).expect("fork");
    compose_plays(
        &second.data.as_ref().expect("move").mov.cospan,
        &first.cospan,
    )
    .expect("compose")
}
