//! Causal graphs, the play correctness criterion and decomposition into
//! moves.

use std::collections::BTreeSet;
use std::fmt;

use crate::diagrams::{extract_subnet, Cell, CellId, ChannelId, PlayNet, PlayerId, UnaryKind};

use super::{Move, PlayCospan, PlaysError};

/// Vertex label of a causal graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CausalLabel {
    Channel,
    Player,
    Core,
}

/// The dependency graph of a net: channels, players and cores, with edges
/// from each core's source avatars into it, from each core to its targets,
/// from players to their channels, and from created channels to their
/// creating core. Arrows point backwards in time.
#[derive(Debug, Clone)]
pub struct CausalGraph {
    /// Vertices are numbered channels first, then players, then cores.
    pub labels: Vec<CausalLabel>,
    pub edges: BTreeSet<(usize, usize)>,
    pub cores: Vec<CellId>,
    channels: usize,
    players: usize,
}

impl CausalGraph {
    pub fn channel_vertex(&self, c: ChannelId) -> usize {
        c.index()
    }
    pub fn player_vertex(&self, p: PlayerId) -> usize {
        self.channels + p.index()
    }
    pub fn core_vertex(&self, core_idx: usize) -> usize {
        self.channels + self.players + core_idx
    }
    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn successors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.range((v, 0)..(v + 1, 0)).map(|(_, t)| *t)
    }

    pub fn is_acyclic(&self) -> Option<Vec<usize>> {
        // Kahn's algorithm; returns a vertex on a cycle if one exists.
        let n = self.vertex_count();
        let mut indeg = vec![0usize; n];
        for (_, t) in &self.edges {
            indeg[*t] += 1;
        }
        let mut queue: Vec<usize> = (0..n).filter(|v| indeg[*v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = queue.pop() {
            seen += 1;
            for t in self.successors(v) {
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    queue.push(t);
                }
            }
        }
        if seen == n {
            None
        } else {
            Some((0..n).filter(|v| indeg[*v] > 0).collect())
        }
    }
}

/// Builds the causal graph of a net. The net must be table-valid.
pub fn causal_graph(net: &PlayNet) -> Result<CausalGraph, PlaysError> {
    let violations = crate::diagrams::validate_net(net);
    if !violations.is_empty() {
        return Err(PlaysError::InvalidNet(violations));
    }
    let cores = net.cores();
    let mut labels = Vec::new();
    labels.extend(std::iter::repeat_n(CausalLabel::Channel, net.channels));
    labels.extend(std::iter::repeat_n(CausalLabel::Player, net.players.len()));
    labels.extend(std::iter::repeat_n(CausalLabel::Core, cores.len()));
    let mut g = CausalGraph {
        labels,
        edges: BTreeSet::new(),
        cores: cores.clone(),
        channels: net.channels,
        players: net.players.len(),
    };
    for p in net.player_ids() {
        for s in &net.player(p).slots {
            g.edges.insert((g.player_vertex(p), g.channel_vertex(*s)));
        }
    }
    for (i, core) in cores.iter().enumerate() {
        let cv = g.core_vertex(i);
        for s in net.cell_sources(*core) {
            g.edges.insert((g.player_vertex(s), cv));
        }
        for t in net.cell_targets(*core) {
            g.edges.insert((cv, g.player_vertex(t)));
        }
        if let Some(ch) = net.cell_created(*core) {
            g.edges.insert((g.channel_vertex(ch), cv));
        }
    }
    Ok(g)
}

/// The four conditions of the correctness criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    LocalInjectivity,
    InitialBorder,
    FinalBorder,
    Causality,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::LocalInjectivity => "i",
            Condition::InitialBorder => "ii",
            Condition::FinalBorder => "iii",
            Condition::Causality => "iv",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject {
        condition: Condition,
        witness: String,
    },
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

fn reject(condition: Condition, witness: String) -> Verdict {
    Verdict::Reject { condition, witness }
}

/// Local 1-injectivity of one core: the non-channel elements of its seed
/// map injectively, and a created channel stays distinct from the
/// interface channels.
fn core_injectivity(net: &PlayNet, core: CellId) -> Option<String> {
    match net.cell(core) {
        Cell::Unary { kind, src, tgt } => {
            if src == tgt {
                return Some(format!("cell {core}: source and target players coincide"));
            }
            if *kind == UnaryKind::Nu {
                let created = net.player(*src).slots.last().copied()?;
                if net.player(*tgt).slots.contains(&created) {
                    return Some(format!(
                        "cell {core}: created channel {created} is already known to the target"
                    ));
                }
            }
            None
        }
        Cell::Fork { left, right } => {
            let mut players = net.cell_sources(core);
            players.extend(net.cell_targets(core));
            let distinct: BTreeSet<_> = players.iter().collect();
            if distinct.len() != players.len() {
                return Some(format!("cell {core}: fork players coincide"));
            }
            for half in [left, right] {
                if let Some(w) = core_injectivity(net, *half) {
                    return Some(w);
                }
            }
            None
        }
        Cell::Tau { out, input } => {
            let mut players = net.cell_sources(core);
            players.extend(net.cell_targets(core));
            let distinct: BTreeSet<_> = players.iter().collect();
            if distinct.len() != players.len() {
                return Some(format!("cell {core}: synchronisation players coincide"));
            }
            for half in [out, input] {
                if let Some(w) = core_injectivity(net, *half) {
                    return Some(w);
                }
            }
            None
        }
    }
}

/// Decides whether a cospan is a play: (i) local 1-injectivity, (ii) the
/// initial border holds precisely the initial players and channels,
/// (iii) the final border holds all channels plus precisely the final
/// players, (iv) the causal graph is linear and acyclic. Rejections name
/// the first failing condition with a witness.
pub fn check_play(c: &PlayCospan) -> Result<Verdict, PlaysError> {
    c.validate()?;
    let net = &c.net;

    // (i)
    for core in net.cores() {
        if let Some(witness) = core_injectivity(net, core) {
            return Ok(reject(Condition::LocalInjectivity, witness));
        }
    }

    // (ii)
    let initial_players: Vec<PlayerId> = net.initial_players();
    if initial_players != c.initial_players {
        return Ok(reject(
            Condition::InitialBorder,
            format!(
                "initial border players {:?} differ from the initial players {:?}",
                c.initial_players, initial_players
            ),
        ));
    }
    let initial_channels: Vec<ChannelId> = net.initial_channels();
    if initial_channels != c.initial_channels {
        return Ok(reject(
            Condition::InitialBorder,
            format!(
                "initial border channels {:?} differ from the initial channels {:?}",
                c.initial_channels, initial_channels
            ),
        ));
    }

    // (iii)
    let all_channels: Vec<ChannelId> = net.channel_ids().collect();
    if c.final_channels != all_channels {
        return Ok(reject(
            Condition::FinalBorder,
            format!("final border misses channels: has {:?}", c.final_channels),
        ));
    }
    let final_players: Vec<PlayerId> = net.final_players();
    if final_players != c.final_players {
        return Ok(reject(
            Condition::FinalBorder,
            format!(
                "final border players {:?} differ from the final players {:?}",
                c.final_players, final_players
            ),
        ));
    }

    // (iv)
    let g = causal_graph(net)?;
    // Source-linearity: each player or channel has at most one out-edge to
    // a core.
    for v in 0..g.vertex_count() {
        if matches!(g.labels[v], CausalLabel::Core) {
            continue;
        }
        let succs: Vec<usize> = g
            .successors(v)
            .filter(|t| matches!(g.labels[*t], CausalLabel::Core))
            .collect();
        if succs.len() > 1 {
            return Ok(reject(
                Condition::Causality,
                format!("source-linearity: vertex {v} feeds cores {:?}", succs),
            ));
        }
    }
    // Target-linearity: each player is the target of at most one core.
    let mut target_of: Vec<Vec<usize>> = vec![Vec::new(); g.vertex_count()];
    for (s, t) in &g.edges {
        if matches!(g.labels[*s], CausalLabel::Core) && matches!(g.labels[*t], CausalLabel::Player)
        {
            target_of[*t].push(*s);
        }
    }
    for (v, srcs) in target_of.iter().enumerate() {
        if srcs.len() > 1 {
            return Ok(reject(
                Condition::Causality,
                format!(
                    "target-linearity: player vertex {v} targeted by cores {:?}",
                    srcs
                ),
            ));
        }
    }
    if let Some(cycle) = g.is_acyclic() {
        return Ok(reject(
            Condition::Causality,
            format!("cycle through vertices {:?}", cycle),
        ));
    }

    Ok(Verdict::Accept)
}

/// Splits an accepted play into its list of moves, temporally ordered.
/// Repeatedly picks the maximal core (no causal path to another core,
/// least id among ties), extracts its move at the current initial border,
/// and removes its past. The left-to-right composite of the result is
/// isomorphic to the input, and its length is the input's core count.
pub fn decompose_play(c: &PlayCospan) -> Result<Vec<Move>, PlaysError> {
    match check_play(c)? {
        Verdict::Accept => {}
        Verdict::Reject { condition, witness } => {
            return Err(PlaysError::Rejected(format!(
                "condition ({condition}): {witness}"
            )))
        }
    }
    let mut stage = c.clone();
    let mut moves = Vec::new();
    loop {
        let cores = stage.net.cores();
        if cores.is_empty() {
            break;
        }
        let g = causal_graph(&stage.net)?;
        // Maximal = no path to any other core.
        let maximal = {
            let n = g.vertex_count();
            // reach_core[v]: some path from v hits a core.
            let mut reach_core = vec![false; n];
            let mut changed = true;
            while changed {
                changed = false;
                for (s, t) in &g.edges {
                    let hit = reach_core[*t] || matches!(g.labels[*t], CausalLabel::Core);
                    if hit && !reach_core[*s] {
                        reach_core[*s] = true;
                        changed = true;
                    }
                }
            }
            let mut maximal: Vec<usize> = (0..cores.len())
                .filter(|i| {
                    let v = g.core_vertex(*i);
                    // The core's own vertex was marked via its out-edges if
                    // it reaches another core.
                    !g.successors(v).any(|t| reach_core[t])
                })
                .collect();
            maximal.sort_by_key(|i| g.cores[*i]);
            maximal
        };
        let core = g.cores[*maximal.first().ok_or_else(|| {
            PlaysError::InvalidCospan("acyclic graph must have a maximal core".into())
        })?];

        // The move containing `core` at the current initial border.
        let group = {
            let mut v = vec![core];
            v.extend(stage.net.cell(core).subs());
            v.sort_unstable();
            v
        };
        let created = stage.net.cell_created(core);
        let sources = stage.net.cell_sources(core);
        let targets = stage.net.cell_targets(core);

        let mut move_channels = stage.initial_channels.clone();
        move_channels.extend(created);
        move_channels.sort_unstable();
        let mut move_players = stage.initial_players.clone();
        move_players.extend(sources.iter().copied());
        move_players.sort_unstable();
        let (move_net, emb) = extract_subnet(&stage.net, &move_channels, &move_players, &group)?;
        let inv_player = |p: PlayerId| {
            PlayerId(
                emb.player_map
                    .iter()
                    .position(|q| *q == p)
                    .expect("in move") as u32,
            )
        };
        let inv_chan = |ch: ChannelId| {
            ChannelId(
                emb.channel_map
                    .iter()
                    .position(|d| *d == ch)
                    .expect("in move") as u32,
            )
        };
        let mut m_final_players: Vec<PlayerId> = stage
            .initial_players
            .iter()
            .filter(|p| !targets.contains(p))
            .chain(sources.iter())
            .map(|p| inv_player(*p))
            .collect();
        m_final_players.sort_unstable();
        let m_initial_players: Vec<PlayerId> = stage
            .initial_players
            .iter()
            .map(|p| inv_player(*p))
            .collect();
        let m_initial_channels: Vec<ChannelId> = stage
            .initial_channels
            .iter()
            .map(|ch| inv_chan(*ch))
            .collect();
        let spectators: Vec<PlayerId> = stage
            .initial_players
            .iter()
            .filter(|p| !targets.contains(p))
            .map(|p| inv_player(*p))
            .collect();
        let mov = Move {
            core: CellId(
                group
                    .iter()
                    .position(|k| *k == core)
                    .expect("core in group") as u32,
            ),
            cospan: PlayCospan {
                final_channels: move_net.channel_ids().collect(),
                final_players: m_final_players,
                initial_channels: m_initial_channels,
                initial_players: m_initial_players,
                net: move_net,
            },
            spectators,
            host_channels: stage
                .initial_channels
                .iter()
                .map(|ch| inv_chan(*ch))
                .collect(),
        };

        // The remaining stage: drop the core's cells and target players.
        let rest_channels: Vec<ChannelId> = stage.net.channel_ids().collect();
        let rest_players: Vec<PlayerId> = stage
            .net
            .player_ids()
            .filter(|p| !targets.contains(p))
            .collect();
        let rest_cells: Vec<CellId> = stage
            .net
            .cell_ids()
            .filter(|k| !group.contains(k))
            .collect();
        let (rest_net, rest_emb) =
            extract_subnet(&stage.net, &rest_channels, &rest_players, &rest_cells)?;
        let rinv_player = |p: PlayerId| {
            PlayerId(
                rest_emb
                    .player_map
                    .iter()
                    .position(|q| *q == p)
                    .expect("in rest") as u32,
            )
        };
        let rinv_chan = |ch: ChannelId| {
            ChannelId(
                rest_emb
                    .channel_map
                    .iter()
                    .position(|d| *d == ch)
                    .expect("in rest") as u32,
            )
        };
        let mut new_initial_channels = stage.initial_channels.clone();
        new_initial_channels.extend(created);
        new_initial_channels.sort_unstable();
        let mut new_initial_players: Vec<PlayerId> = stage
            .initial_players
            .iter()
            .filter(|p| !targets.contains(p))
            .chain(sources.iter())
            .copied()
            .collect();
        new_initial_players.sort_unstable();
        stage = PlayCospan {
            final_channels: stage
                .final_channels
                .iter()
                .map(|ch| rinv_chan(*ch))
                .collect(),
            final_players: stage
                .final_players
                .iter()
                .map(|p| rinv_player(*p))
                .collect(),
            initial_channels: new_initial_channels
                .iter()
                .map(|ch| rinv_chan(*ch))
                .collect(),
            initial_players: new_initial_players
                .iter()
                .map(|p| rinv_player(*p))
                .collect(),
            net: rest_net,
        };
        moves.push(mov);
    }
    Ok(moves)
}
