//! Finite presheaves over the base category as typed element tables.
//!
//! A [`PlayNet`] stores three tables (channels, players, cells) with dense
//! integer ids. The finitely many generators of the base category and their
//! equations are baked into the table schema: every action of a base morphism
//! is a slot lookup, a source/target reference, or a sub-cell reference, so
//! morphisms of the base never need to be materialised as data.

mod iso;
mod text;

pub use iso::{find_iso, Isomorphism};
pub use text::{parse_net, print_net, TextError};

use std::fmt;

use thiserror::Error;

/// Id of a channel (dimension-0 element) in a net.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChannelId(pub u32);

/// Id of a player (dimension-1 element) in a net.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlayerId(pub u32);

/// Id of a cell (element of dimension 2, 3 or 4) in a net.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellId(pub u32);

impl ChannelId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}
impl PlayerId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}
impl CellId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ChannelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The object tags of the base category, with their indices.
///
/// `Star` and `Player` tag the two low dimensions; the remaining tags name
/// the move objects. Index bounds (`1 <= a <= n`, `1 <= c <= m`) are enforced
/// by [`BaseKind::check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BaseKind {
    Star,
    Player(usize),
    ForkL(usize),
    ForkR(usize),
    Fork(usize),
    Nu(usize),
    Tick(usize),
    /// Input by an `n`-ary player on its `a`-th slot (1-based).
    In {
        n: usize,
        a: usize,
    },
    /// Output by an `m`-ary player on its `c`-th slot (1-based).
    Out {
        m: usize,
        c: usize,
    },
    /// Synchronisation of an output `(m, c)` with an input `(n, a)`.
    Tau {
        n: usize,
        a: usize,
        m: usize,
        c: usize,
    },
}

impl BaseKind {
    /// Dimension of the object: 0 for `Star`, 1 for players, 2 for unary
    /// move objects, 3 for forks, 4 for synchronisations.
    pub fn dimension(self) -> usize {
        match self {
            BaseKind::Star => 0,
            BaseKind::Player(_) => 1,
            BaseKind::ForkL(_)
            | BaseKind::ForkR(_)
            | BaseKind::Nu(_)
            | BaseKind::Tick(_)
            | BaseKind::In { .. }
            | BaseKind::Out { .. } => 2,
            BaseKind::Fork(_) => 3,
            BaseKind::Tau { .. } => 4,
        }
    }

    /// Checks the index bounds.
    pub fn check(self) -> Result<(), DiagramError> {
        let ok = match self {
            BaseKind::In { n, a } => 1 <= a && a <= n,
            BaseKind::Out { m, c } => 1 <= c && c <= m,
            BaseKind::Tau { n, a, m, c } => 1 <= a && a <= n && 1 <= c && c <= m,
            _ => true,
        };
        if ok {
            Ok(())
        } else {
            Err(DiagramError::IndexOutOfRange(self))
        }
    }
}

/// A player: an `n`-ary element holding `n` channel slots.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Player {
    pub slots: Vec<ChannelId>,
}

impl Player {
    pub fn arity(&self) -> usize {
        self.slots.len()
    }
}

/// Kinds of the dimension-2 cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum UnaryKind {
    ForkL,
    ForkR,
    Nu,
    Tick,
    /// `a` is the 1-based slot of the target player.
    In(usize),
    /// `c` is the 1-based slot of the target player.
    Out(usize),
}

/// One cell of a net, i.e. one element of dimension >= 2.
///
/// A unary cell attaches to its source player (the avatar after the move)
/// and target player (before the move). A fork references its two unary
/// halves, a synchronisation references its output and input halves; their
/// players are reached through those references.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cell {
    Unary {
        kind: UnaryKind,
        src: PlayerId,
        tgt: PlayerId,
    },
    Fork {
        left: CellId,
        right: CellId,
    },
    Tau {
        out: CellId,
        input: CellId,
    },
}

impl Cell {
    pub fn dimension(&self) -> usize {
        match self {
            Cell::Unary { .. } => 2,
            Cell::Fork { .. } => 3,
            Cell::Tau { .. } => 4,
        }
    }

    /// Sub-cell references (empty for unary cells).
    pub fn subs(&self) -> Vec<CellId> {
        match self {
            Cell::Unary { .. } => vec![],
            Cell::Fork { left, right } => vec![*left, *right],
            Cell::Tau { out, input } => vec![*out, *input],
        }
    }

    /// Rank used to order cell kinds in the canonical serialization.
    pub fn kind_rank(&self) -> usize {
        match self {
            Cell::Unary {
                kind: UnaryKind::ForkL,
                ..
            } => 0,
            Cell::Unary {
                kind: UnaryKind::ForkR,
                ..
            } => 1,
            Cell::Fork { .. } => 2,
            Cell::Unary {
                kind: UnaryKind::Nu,
                ..
            } => 3,
            Cell::Unary {
                kind: UnaryKind::Tick,
                ..
            } => 4,
            Cell::Unary {
                kind: UnaryKind::In(_),
                ..
            } => 5,
            Cell::Unary {
                kind: UnaryKind::Out(_),
                ..
            } => 6,
            Cell::Tau { .. } => 7,
        }
    }
}

/// A finite presheaf over the base category, as element tables.
///
/// Channels are just a count (their ids are `0..channels`); players and
/// cells carry their attachment data. All ids are dense per table.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlayNet {
    pub channels: usize,
    pub players: Vec<Player>,
    pub cells: Vec<Cell>,
}

/// One violated invariant, naming the offending element and clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub element: String,
    pub clause: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.element, self.clause)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("index out of range in {0:?}")]
    IndexOutOfRange(BaseKind),
    #[error("invalid net: {0}")]
    InvalidNet(Violation),
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),
    #[error("not a position: net has cells")]
    NotAPosition,
    #[error("not an interface: position has players")]
    NotAnInterface,
}

impl PlayNet {
    pub fn empty() -> Self {
        PlayNet::default()
    }

    /// The position with one `n`-ary player and `n` distinct channels;
    /// the "typical player" (an individual).
    pub fn individual(n: usize) -> Self {
        PlayNet {
            channels: n,
            players: vec![Player {
                slots: (0..n as u32).map(ChannelId).collect(),
            }],
            cells: vec![],
        }
    }

    pub fn channel_ids(&self) -> impl Iterator<Item = ChannelId> {
        (0..self.channels as u32).map(ChannelId)
    }

    pub fn player_ids(&self) -> impl Iterator<Item = PlayerId> {
        (0..self.players.len() as u32).map(PlayerId)
    }

    pub fn cell_ids(&self) -> impl Iterator<Item = CellId> {
        (0..self.cells.len() as u32).map(CellId)
    }

    pub fn player(&self, p: PlayerId) -> &Player {
        &self.players[p.index()]
    }

    pub fn cell(&self, k: CellId) -> &Cell {
        &self.cells[k.index()]
    }

    pub fn is_position(&self) -> bool {
        self.cells.is_empty()
    }

    /// The kind tag of a cell, reconstructing the indices from its players.
    pub fn cell_kind(&self, k: CellId) -> BaseKind {
        match self.cell(k) {
            Cell::Unary { kind, tgt, .. } => {
                let n = self.player(*tgt).arity();
                match kind {
                    UnaryKind::ForkL => BaseKind::ForkL(n),
                    UnaryKind::ForkR => BaseKind::ForkR(n),
                    UnaryKind::Nu => BaseKind::Nu(n),
                    UnaryKind::Tick => BaseKind::Tick(n),
                    UnaryKind::In(a) => BaseKind::In { n, a: *a },
                    UnaryKind::Out(c) => BaseKind::Out { m: n, c: *c },
                }
            }
            Cell::Fork { left, .. } => match self.cell(*left) {
                Cell::Unary { tgt, .. } => BaseKind::Fork(self.player(*tgt).arity()),
                _ => BaseKind::Fork(0),
            },
            Cell::Tau { out, input } => {
                let (m, c) = match self.cell(*out) {
                    Cell::Unary {
                        kind: UnaryKind::Out(c),
                        tgt,
                        ..
                    } => (self.player(*tgt).arity(), *c),
                    _ => (0, 0),
                };
                let (n, a) = match self.cell(*input) {
                    Cell::Unary {
                        kind: UnaryKind::In(a),
                        tgt,
                        ..
                    } => (self.player(*tgt).arity(), *a),
                    _ => (0, 0),
                };
                BaseKind::Tau { n, a, m, c }
            }
        }
    }

    /// Source players of a cell: the avatars present after the move.
    pub fn cell_sources(&self, k: CellId) -> Vec<PlayerId> {
        match self.cell(k) {
            Cell::Unary { src, .. } => vec![*src],
            Cell::Fork { left, right }
            | Cell::Tau {
                out: left,
                input: right,
            } => {
                let mut v = self.cell_sources(*left);
                v.extend(self.cell_sources(*right));
                v
            }
        }
    }

    /// Target players of a cell: the players consumed by the move.
    pub fn cell_targets(&self, k: CellId) -> Vec<PlayerId> {
        match self.cell(k) {
            Cell::Unary { tgt, .. } => vec![*tgt],
            Cell::Fork { left, .. } => self.cell_targets(*left),
            Cell::Tau { out, input } => {
                let mut v = self.cell_targets(*out);
                v.extend(self.cell_targets(*input));
                v
            }
        }
    }

    /// The channel created by a cell, if any (only `Nu` cells create one:
    /// the last slot of their source player).
    pub fn cell_created(&self, k: CellId) -> Option<ChannelId> {
        match self.cell(k) {
            Cell::Unary {
                kind: UnaryKind::Nu,
                src,
                ..
            } => self.player(*src).slots.last().copied(),
            _ => None,
        }
    }

    /// Ids of cells referenced by no higher cell; one per move of a play.
    pub fn cores(&self) -> Vec<CellId> {
        let mut referenced = vec![false; self.cells.len()];
        for cell in &self.cells {
            for s in cell.subs() {
                if s.index() < referenced.len() {
                    referenced[s.index()] = true;
                }
            }
        }
        self.cell_ids().filter(|k| !referenced[k.index()]).collect()
    }

    /// Players that are no cell's source: they exist already in the initial
    /// position.
    pub fn initial_players(&self) -> Vec<PlayerId> {
        let mut is_src = vec![false; self.players.len()];
        for cell in &self.cells {
            if let Cell::Unary { src, .. } = cell {
                is_src[src.index()] = true;
            }
        }
        self.player_ids().filter(|p| !is_src[p.index()]).collect()
    }

    /// Players that are no cell's target: they survive to the final
    /// position.
    pub fn final_players(&self) -> Vec<PlayerId> {
        let mut is_tgt = vec![false; self.players.len()];
        for cell in &self.cells {
            if let Cell::Unary { tgt, .. } = cell {
                is_tgt[tgt.index()] = true;
            }
        }
        self.player_ids().filter(|p| !is_tgt[p.index()]).collect()
    }

    /// Channels created by no cell.
    pub fn initial_channels(&self) -> Vec<ChannelId> {
        let mut created = vec![false; self.channels];
        for k in self.cell_ids() {
            if let Some(c) = self.cell_created(k) {
                created[c.index()] = true;
            }
        }
        self.channel_ids().filter(|c| !created[c.index()]).collect()
    }
}

/// Checks every table invariant and equation; an empty list means the net
/// is a well-formed presheaf.
pub fn validate_net(net: &PlayNet) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |element: String, clause: &str| {
        out.push(Violation {
            element,
            clause: clause.to_string(),
        })
    };

    for (i, p) in net.players.iter().enumerate() {
        for (l, c) in p.slots.iter().enumerate() {
            if c.index() >= net.channels {
                push(
                    format!("player {i}"),
                    &format!("slot {} references missing channel {c}", l + 1),
                );
            }
        }
    }

    let cell_ok = |k: &CellId| k.index() < net.cells.len();
    let player_ok = |p: &PlayerId| p.index() < net.players.len();

    for (i, cell) in net.cells.iter().enumerate() {
        match cell {
            Cell::Unary { kind, src, tgt } => {
                if !player_ok(src) || !player_ok(tgt) {
                    push(
                        format!("cell {i}"),
                        "source or target references a missing player",
                    );
                    continue;
                }
                let s = net.player(*src);
                let t = net.player(*tgt);
                let n = t.arity();
                let expect_src_arity = if *kind == UnaryKind::Nu { n + 1 } else { n };
                if s.arity() != expect_src_arity {
                    push(
                        format!("cell {i}"),
                        &format!("source arity {} does not match target arity {n}", s.arity()),
                    );
                    continue;
                }
                if s.slots[..n] != t.slots[..] {
                    push(
                        format!("cell {i}"),
                        "source and target slots disagree on shared channels",
                    );
                }
                match kind {
                    UnaryKind::In(a) if !(1 <= *a && *a <= n) => {
                        push(format!("cell {i}"), "input slot index out of range");
                    }
                    UnaryKind::Out(c) if !(1 <= *c && *c <= n) => {
                        push(format!("cell {i}"), "output slot index out of range");
                    }
                    _ => {}
                }
            }
            Cell::Fork { left, right } => {
                if !cell_ok(left) || !cell_ok(right) {
                    push(format!("cell {i}"), "fork references a missing cell");
                    continue;
                }
                match (net.cell(*left), net.cell(*right)) {
                    (
                        Cell::Unary {
                            kind: UnaryKind::ForkL,
                            tgt: lt,
                            ..
                        },
                        Cell::Unary {
                            kind: UnaryKind::ForkR,
                            tgt: rt,
                            ..
                        },
                    ) => {
                        if lt != rt {
                            push(
                                format!("cell {i}"),
                                "fork halves have different target players",
                            );
                        }
                    }
                    _ => push(
                        format!("cell {i}"),
                        "fork must reference a left and a right half",
                    ),
                }
            }
            Cell::Tau { out, input } => {
                if !cell_ok(out) || !cell_ok(input) {
                    push(format!("cell {i}"), "tau references a missing cell");
                    continue;
                }
                match (net.cell(*out), net.cell(*input)) {
                    (
                        Cell::Unary {
                            kind: UnaryKind::Out(c),
                            tgt: ot,
                            ..
                        },
                        Cell::Unary {
                            kind: UnaryKind::In(a),
                            tgt: it,
                            ..
                        },
                    ) => {
                        let op = net.player(*ot);
                        let ip = net.player(*it);
                        if *c < 1 || *c > op.arity() || *a < 1 || *a > ip.arity() {
                            push(format!("cell {i}"), "tau slot indices out of range");
                        } else if op.slots[*c - 1] != ip.slots[*a - 1] {
                            push(
                                format!("cell {i}"),
                                "tau equation: output target slot and input target slot name different channels",
                            );
                        }
                    }
                    _ => push(
                        format!("cell {i}"),
                        "tau must reference an output and an input half",
                    ),
                }
            }
        }
    }

    // A sub-cell belongs to exactly one parent.
    let mut parents = vec![0usize; net.cells.len()];
    for cell in &net.cells {
        for s in cell.subs() {
            if s.index() < parents.len() {
                parents[s.index()] += 1;
            }
        }
    }
    for (i, n) in parents.iter().enumerate() {
        if *n > 1 {
            push(
                format!("cell {i}"),
                "referenced by more than one parent cell",
            );
        }
    }

    out
}

/// A monomorphism of nets: injective maps per table commuting with all
/// attachment maps.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Embedding {
    pub channel_map: Vec<ChannelId>,
    pub player_map: Vec<PlayerId>,
    pub cell_map: Vec<CellId>,
}

impl Embedding {
    pub fn identity(net: &PlayNet) -> Self {
        Embedding {
            channel_map: net.channel_ids().collect(),
            player_map: net.player_ids().collect(),
            cell_map: net.cell_ids().collect(),
        }
    }

    pub fn chan(&self, c: ChannelId) -> ChannelId {
        self.channel_map[c.index()]
    }

    pub fn player(&self, p: PlayerId) -> PlayerId {
        self.player_map[p.index()]
    }

    pub fn cell(&self, k: CellId) -> CellId {
        self.cell_map[k.index()]
    }

    /// `self` then `other`.
    pub fn compose(&self, other: &Embedding) -> Embedding {
        Embedding {
            channel_map: self.channel_map.iter().map(|c| other.chan(*c)).collect(),
            player_map: self.player_map.iter().map(|p| other.player(*p)).collect(),
            cell_map: self.cell_map.iter().map(|k| other.cell(*k)).collect(),
        }
    }

    /// Checks injectivity and commutation with attachment maps.
    pub fn validate(&self, src: &PlayNet, dst: &PlayNet) -> Result<(), DiagramError> {
        let err = |m: String| Err(DiagramError::InvalidEmbedding(m));
        if self.channel_map.len() != src.channels
            || self.player_map.len() != src.players.len()
            || self.cell_map.len() != src.cells.len()
        {
            return err("map lengths do not match the source tables".into());
        }
        let mut seen = vec![false; dst.channels];
        for c in &self.channel_map {
            if c.index() >= dst.channels {
                return err(format!("channel {c} missing in codomain"));
            }
            if std::mem::replace(&mut seen[c.index()], true) {
                return err("channel map not injective".into());
            }
        }
        let mut seen = vec![false; dst.players.len()];
        for (i, p) in self.player_map.iter().enumerate() {
            if p.index() >= dst.players.len() {
                return err(format!("player {p} missing in codomain"));
            }
            if std::mem::replace(&mut seen[p.index()], true) {
                return err("player map not injective".into());
            }
            let a = &src.players[i];
            let b = dst.player(*p);
            if a.arity() != b.arity() {
                return err(format!("player {i} changes arity"));
            }
            for (l, c) in a.slots.iter().enumerate() {
                if self.chan(*c) != b.slots[l] {
                    return err(format!("player {i} does not commute with slot {}", l + 1));
                }
            }
        }
        let mut seen = vec![false; dst.cells.len()];
        for (i, k) in self.cell_map.iter().enumerate() {
            if k.index() >= dst.cells.len() {
                return err(format!("cell {k} missing in codomain"));
            }
            if std::mem::replace(&mut seen[k.index()], true) {
                return err("cell map not injective".into());
            }
            let a = &src.cells[i];
            let b = dst.cell(*k);
            match (a, b) {
                (
                    Cell::Unary {
                        kind: ka,
                        src: sa,
                        tgt: ta,
                    },
                    Cell::Unary {
                        kind: kb,
                        src: sb,
                        tgt: tb,
                    },
                ) => {
                    if ka != kb || self.player(*sa) != *sb || self.player(*ta) != *tb {
                        return err(format!("cell {i} does not commute with its attachments"));
                    }
                }
                (
                    Cell::Fork {
                        left: la,
                        right: ra,
                    },
                    Cell::Fork {
                        left: lb,
                        right: rb,
                    },
                ) => {
                    if self.cell(*la) != *lb || self.cell(*ra) != *rb {
                        return err(format!("cell {i} does not commute with its halves"));
                    }
                }
                (Cell::Tau { out: oa, input: ia }, Cell::Tau { out: ob, input: ib }) => {
                    if self.cell(*oa) != *ob || self.cell(*ia) != *ib {
                        return err(format!("cell {i} does not commute with its halves"));
                    }
                }
                _ => return err(format!("cell {i} changes kind")),
            }
        }
        Ok(())
    }
}

/// Pushout of two embeddings out of a common net.
///
/// The result is the disjoint union of `b` and `c` quotiented by
/// `f(x) = g(x)`; representatives are renumbered with `b`'s elements first,
/// then the unidentified elements of `c`, preserving relative order, so
/// equal inputs give identical outputs.
pub fn pushout(
    shared: &PlayNet,
    f: &Embedding,
    b: &PlayNet,
    g: &Embedding,
    c: &PlayNet,
) -> Result<(PlayNet, Embedding, Embedding), DiagramError> {
    f.validate(shared, b)?;
    g.validate(shared, c)?;

    // Channels of c identified with a channel of b.
    let mut chan_hit: Vec<Option<ChannelId>> = vec![None; c.channels];
    for i in shared.channel_ids() {
        chan_hit[g.chan(i).index()] = Some(f.chan(i));
    }
    let mut player_hit: Vec<Option<PlayerId>> = vec![None; c.players.len()];
    for i in shared.player_ids() {
        player_hit[g.player(i).index()] = Some(f.player(i));
    }
    let mut cell_hit: Vec<Option<CellId>> = vec![None; c.cells.len()];
    for i in shared.cell_ids() {
        cell_hit[g.cell(i).index()] = Some(f.cell(i));
    }

    let mut jb = Embedding {
        channel_map: b.channel_ids().collect(),
        player_map: b.player_ids().collect(),
        cell_map: b.cell_ids().collect(),
    };

    let mut jc_chan = vec![ChannelId(0); c.channels];
    let mut channels = b.channels;
    for i in c.channel_ids() {
        jc_chan[i.index()] = match chan_hit[i.index()] {
            Some(x) => x,
            None => {
                let id = ChannelId(channels as u32);
                channels += 1;
                id
            }
        };
    }

    let mut players = b.players.clone();
    let mut jc_player = vec![PlayerId(0); c.players.len()];
    for i in c.player_ids() {
        jc_player[i.index()] = match player_hit[i.index()] {
            Some(x) => x,
            None => {
                let id = PlayerId(players.len() as u32);
                players.push(Player {
                    slots: c
                        .player(i)
                        .slots
                        .iter()
                        .map(|s| jc_chan[s.index()])
                        .collect(),
                });
                id
            }
        };
    }

    let mut cells = b.cells.clone();
    let mut jc_cell = vec![CellId(0); c.cells.len()];
    // Two passes so sub-cell references resolve regardless of id order.
    for i in c.cell_ids() {
        if let Some(x) = cell_hit[i.index()] {
            jc_cell[i.index()] = x;
        } else {
            jc_cell[i.index()] = CellId(cells.len() as u32);
            cells.push(c.cell(i).clone()); // placeholder, remapped below
        }
    }
    for i in c.cell_ids() {
        if cell_hit[i.index()].is_some() {
            continue;
        }
        let remapped = match c.cell(i) {
            Cell::Unary { kind, src, tgt } => Cell::Unary {
                kind: *kind,
                src: jc_player[src.index()],
                tgt: jc_player[tgt.index()],
            },
            Cell::Fork { left, right } => Cell::Fork {
                left: jc_cell[left.index()],
                right: jc_cell[right.index()],
            },
            Cell::Tau { out, input } => Cell::Tau {
                out: jc_cell[out.index()],
                input: jc_cell[input.index()],
            },
        };
        cells[jc_cell[i.index()].index()] = remapped;
    }

    let result = PlayNet {
        channels,
        players,
        cells,
    };
    jb.channel_map.truncate(b.channels);
    let jc = Embedding {
        channel_map: jc_chan,
        player_map: jc_player,
        cell_map: jc_cell,
    };
    Ok((result, jb, jc))
}

/// Pullback of two embeddings into a common net: the sub-net of pairs with
/// matching images, with its two projections.
pub fn pullback(
    f: &Embedding,
    b: &PlayNet,
    g: &Embedding,
    c: &PlayNet,
    d: &PlayNet,
) -> Result<(PlayNet, Embedding, Embedding), DiagramError> {
    f.validate(b, d)?;
    g.validate(c, d)?;

    // Invert g on its image.
    let mut inv_chan: Vec<Option<ChannelId>> = vec![None; d.channels];
    for i in c.channel_ids() {
        inv_chan[g.chan(i).index()] = Some(i);
    }
    let mut inv_player: Vec<Option<PlayerId>> = vec![None; d.players.len()];
    for i in c.player_ids() {
        inv_player[g.player(i).index()] = Some(i);
    }
    let mut inv_cell: Vec<Option<CellId>> = vec![None; d.cells.len()];
    for i in c.cell_ids() {
        inv_cell[g.cell(i).index()] = Some(i);
    }

    let mut pb_chan = Vec::new();
    let mut pc_chan = Vec::new();
    let mut chan_new: Vec<Option<ChannelId>> = vec![None; b.channels];
    for i in b.channel_ids() {
        if let Some(j) = inv_chan[f.chan(i).index()] {
            chan_new[i.index()] = Some(ChannelId(pb_chan.len() as u32));
            pb_chan.push(i);
            pc_chan.push(j);
        }
    }
    let mut players = Vec::new();
    let mut pb_player = Vec::new();
    let mut pc_player = Vec::new();
    let mut player_new: Vec<Option<PlayerId>> = vec![None; b.players.len()];
    for i in b.player_ids() {
        if let Some(j) = inv_player[f.player(i).index()] {
            player_new[i.index()] = Some(PlayerId(players.len() as u32));
            players.push(Player {
                slots: b
                    .player(i)
                    .slots
                    .iter()
                    .map(|s| chan_new[s.index()].expect("slot of matched player must match"))
                    .collect(),
            });
            pb_player.push(i);
            pc_player.push(j);
        }
    }
    let mut pb_cell = Vec::new();
    let mut pc_cell = Vec::new();
    let mut cell_new: Vec<Option<CellId>> = vec![None; b.cells.len()];
    for i in b.cell_ids() {
        if let Some(j) = inv_cell[f.cell(i).index()] {
            cell_new[i.index()] = Some(CellId(pb_cell.len() as u32));
            pb_cell.push(i);
            pc_cell.push(j);
        }
    }
    let mut cells = Vec::new();
    for i in &pb_cell {
        let remapped = match b.cell(*i) {
            Cell::Unary { kind, src, tgt } => Cell::Unary {
                kind: *kind,
                src: player_new[src.index()].expect("player of matched cell must match"),
                tgt: player_new[tgt.index()].expect("player of matched cell must match"),
            },
            Cell::Fork { left, right } => Cell::Fork {
                left: cell_new[left.index()].expect("half of matched cell must match"),
                right: cell_new[right.index()].expect("half of matched cell must match"),
            },
            Cell::Tau { out, input } => Cell::Tau {
                out: cell_new[out.index()].expect("half of matched cell must match"),
                input: cell_new[input.index()].expect("half of matched cell must match"),
            },
        };
        cells.push(remapped);
    }

    let a = PlayNet {
        channels: pb_chan.len(),
        players,
        cells,
    };
    let pb = Embedding {
        channel_map: pb_chan,
        player_map: pb_player,
        cell_map: pb_cell,
    };
    let pc = Embedding {
        channel_map: pc_chan,
        player_map: pc_player,
        cell_map: pc_cell,
    };
    Ok((a, pb, pc))
}

/// One entry per player of a position, in stable id order.
pub fn player_list(x: &PlayNet) -> Vec<(usize, PlayerId)> {
    x.player_ids().map(|p| (x.player(p).arity(), p)).collect()
}

/// Extracts the sub-position induced by the given channel and player ids
/// (which must be sorted ascending), renumbering monotonically.
///
/// Returns the position together with the embedding back into `net`.
pub fn extract_position(
    net: &PlayNet,
    channels: &[ChannelId],
    players: &[PlayerId],
) -> Result<(PlayNet, Embedding), DiagramError> {
    let mut chan_new: Vec<Option<ChannelId>> = vec![None; net.channels];
    for (new, c) in channels.iter().enumerate() {
        if c.index() >= net.channels {
            return Err(DiagramError::InvalidEmbedding(format!(
                "channel {c} missing"
            )));
        }
        chan_new[c.index()] = Some(ChannelId(new as u32));
    }
    let mut ps = Vec::new();
    for p in players {
        if p.index() >= net.players.len() {
            return Err(DiagramError::InvalidEmbedding(format!(
                "player {p} missing"
            )));
        }
        let slots = net
            .player(*p)
            .slots
            .iter()
            .map(|s| {
                chan_new[s.index()].ok_or_else(|| {
                    DiagramError::InvalidEmbedding(format!(
                        "player {p} uses channel {s} outside the sub-position"
                    ))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        ps.push(Player { slots });
    }
    let pos = PlayNet {
        channels: channels.len(),
        players: ps,
        cells: vec![],
    };
    let emb = Embedding {
        channel_map: channels.to_vec(),
        player_map: players.to_vec(),
        cell_map: vec![],
    };
    Ok((pos, emb))
}

/// Extracts the sub-net induced by the given element ids (each list sorted
/// ascending), renumbering monotonically. The lists must be closed under
/// the attachment maps.
pub fn extract_subnet(
    net: &PlayNet,
    channels: &[ChannelId],
    players: &[PlayerId],
    cells: &[CellId],
) -> Result<(PlayNet, Embedding), DiagramError> {
    let missing = |what: &str| DiagramError::InvalidEmbedding(format!("{what} not in the sub-net"));
    let mut chan_new: Vec<Option<ChannelId>> = vec![None; net.channels];
    for (new, c) in channels.iter().enumerate() {
        chan_new[c.index()] = Some(ChannelId(new as u32));
    }
    let mut player_new: Vec<Option<PlayerId>> = vec![None; net.players.len()];
    for (new, p) in players.iter().enumerate() {
        player_new[p.index()] = Some(PlayerId(new as u32));
    }
    let mut cell_new: Vec<Option<CellId>> = vec![None; net.cells.len()];
    for (new, k) in cells.iter().enumerate() {
        cell_new[k.index()] = Some(CellId(new as u32));
    }
    let mut ps = Vec::new();
    for p in players {
        let slots = net
            .player(*p)
            .slots
            .iter()
            .map(|s| chan_new[s.index()].ok_or_else(|| missing("slot channel")))
            .collect::<Result<Vec<_>, _>>()?;
        ps.push(Player { slots });
    }
    let mut cs = Vec::new();
    for k in cells {
        let cell = match net.cell(*k) {
            Cell::Unary { kind, src, tgt } => Cell::Unary {
                kind: *kind,
                src: player_new[src.index()].ok_or_else(|| missing("source player"))?,
                tgt: player_new[tgt.index()].ok_or_else(|| missing("target player"))?,
            },
            Cell::Fork { left, right } => Cell::Fork {
                left: cell_new[left.index()].ok_or_else(|| missing("fork half"))?,
                right: cell_new[right.index()].ok_or_else(|| missing("fork half"))?,
            },
            Cell::Tau { out, input } => Cell::Tau {
                out: cell_new[out.index()].ok_or_else(|| missing("tau half"))?,
                input: cell_new[input.index()].ok_or_else(|| missing("tau half"))?,
            },
        };
        cs.push(cell);
    }
    let sub = PlayNet {
        channels: channels.len(),
        players: ps,
        cells: cs,
    };
    let emb = Embedding {
        channel_map: channels.to_vec(),
        player_map: players.to_vec(),
        cell_map: cells.to_vec(),
    };
    Ok((sub, emb))
}
