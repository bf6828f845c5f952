//! History maps and cartesian restriction of plays along position maps
//! into the initial border.

use std::collections::BTreeSet;

use crate::diagrams::{extract_subnet, Cell, CellId, ChannelId, Embedding, PlayNet, PlayerId};

use super::{check_play, PlayCospan, PlaysError, Verdict};

/// An element of a net, as tracked by the history map. Synchronisation
/// cells are not part of the element set the history is defined on; they
/// are recovered by horn filling during restriction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Channel(ChannelId),
    Player(PlayerId),
    Cell(CellId),
}

/// The history of a play: every element of the net (synchronisation cells
/// excepted) is sent to its initial-border ancestor — the identity on
/// initial channels and players, the creating player's lineage otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HistoryMap {
    /// Per channel: an initial channel or an initial player.
    pub channels: Vec<Element>,
    /// Per player: an initial player.
    pub players: Vec<Element>,
    /// Per cell: an initial player, or `None` for synchronisation cells.
    pub cells: Vec<Option<Element>>,
}

impl HistoryMap {
    pub fn of(&self, el: Element) -> Option<Element> {
        match el {
            Element::Channel(c) => Some(self.channels[c.index()]),
            Element::Player(p) => Some(self.players[p.index()]),
            Element::Cell(k) => self.cells[k.index()],
        }
    }
}

/// Computes the history map of an accepted play by iterating the one-step
/// ancestor map to its fixpoint: initial elements stay fixed, a created
/// player or channel steps to its creating cell, a unary cell to its
/// target player, a fork to its halves' shared target.
pub fn history_map(c: &PlayCospan) -> Result<HistoryMap, PlaysError> {
    match check_play(c)? {
        Verdict::Accept => {}
        Verdict::Reject { condition, witness } => {
            return Err(PlaysError::Rejected(format!(
                "condition ({condition}): {witness}"
            )))
        }
    }
    let net = &c.net;
    let initial_channels: BTreeSet<ChannelId> = c.initial_channels.iter().copied().collect();
    let initial_players: BTreeSet<PlayerId> = c.initial_players.iter().copied().collect();

    // creator[p] = unary cell with source p; creator_chan[ch] = nu cell.
    let mut creator: Vec<Option<CellId>> = vec![None; net.players.len()];
    let mut creator_chan: Vec<Option<CellId>> = vec![None; net.channels];
    for k in net.cell_ids() {
        if let Cell::Unary { src, .. } = net.cell(k) {
            creator[src.index()] = Some(k);
        }
        if let Some(ch) = net.cell_created(k) {
            creator_chan[ch.index()] = Some(k);
        }
    }

    fn resolve(
        el: Element,
        net: &PlayNet,
        initial_channels: &BTreeSet<ChannelId>,
        initial_players: &BTreeSet<PlayerId>,
        creator: &[Option<CellId>],
        creator_chan: &[Option<CellId>],
    ) -> Element {
        let mut cur = el;
        loop {
            cur = match cur {
                Element::Channel(c) => {
                    if initial_channels.contains(&c) {
                        return Element::Channel(c);
                    }
                    Element::Cell(creator_chan[c.index()].expect("non-initial channel is created"))
                }
                Element::Player(p) => {
                    if initial_players.contains(&p) {
                        return Element::Player(p);
                    }
                    Element::Cell(creator[p.index()].expect("non-initial player is created"))
                }
                Element::Cell(k) => match net.cell(k) {
                    Cell::Unary { tgt, .. } => Element::Player(*tgt),
                    Cell::Fork { left, .. } => match net.cell(*left) {
                        Cell::Unary { tgt, .. } => Element::Player(*tgt),
                        _ => unreachable!("fork half is unary"),
                    },
                    Cell::Tau { .. } => {
                        unreachable!("synchronisation cells are outside the element set")
                    }
                },
            };
        }
    }

    let channels = net
        .channel_ids()
        .map(|ch| {
            resolve(
                Element::Channel(ch),
                net,
                &initial_channels,
                &initial_players,
                &creator,
                &creator_chan,
            )
        })
        .collect();
    let players = net
        .player_ids()
        .map(|p| {
            resolve(
                Element::Player(p),
                net,
                &initial_channels,
                &initial_players,
                &creator,
                &creator_chan,
            )
        })
        .collect();
    let cells = net
        .cell_ids()
        .map(|k| match net.cell(k) {
            Cell::Tau { .. } => None,
            _ => Some(resolve(
                Element::Cell(k),
                net,
                &initial_channels,
                &initial_players,
                &creator,
                &creator_chan,
            )),
        })
        .collect();
    Ok(HistoryMap {
        channels,
        players,
        cells,
    })
}

/// Cartesian restriction of a play along a sub-position of its initial
/// border, given by (sorted) channel and player ids of the net lying in
/// the border. Pulls the element set back along the history, then closes
/// under synchronisation cells whose two halves both survived (horn
/// filling, one pass). Returns the restricted play and its embedding into
/// the original net.
pub fn restrict_play(
    c: &PlayCospan,
    sub_channels: &[ChannelId],
    sub_players: &[PlayerId],
) -> Result<(PlayCospan, Embedding), PlaysError> {
    if sub_channels.windows(2).any(|w| w[0] >= w[1]) || sub_players.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(PlaysError::InvalidCospan(
            "sub-position ids must be sorted".into(),
        ));
    }
    for ch in sub_channels {
        if !c.initial_channels.contains(ch) {
            return Err(PlaysError::InvalidCospan(format!(
                "channel {ch} is not in the initial border"
            )));
        }
    }
    for p in sub_players {
        if !c.initial_players.contains(p) {
            return Err(PlaysError::InvalidCospan(format!(
                "player {p} is not in the initial border"
            )));
        }
    }
    // Players come with their channels.
    for p in sub_players {
        for s in &c.net.player(*p).slots {
            if !sub_channels.contains(s) {
                return Err(PlaysError::InvalidCospan(format!(
                    "player {p} needs channel {s} in the sub-position"
                )));
            }
        }
    }
    let h = history_map(c)?;
    let net = &c.net;
    let in_image = |el: Element| match el {
        Element::Channel(ch) => sub_channels.contains(&ch),
        Element::Player(p) => sub_players.contains(&p),
        Element::Cell(_) => false,
    };
    let keep = |el: Element| h.of(el).map(in_image).unwrap_or(false);

    let kept_channels: Vec<ChannelId> = net
        .channel_ids()
        .filter(|ch| keep(Element::Channel(*ch)))
        .collect();
    let kept_players: Vec<PlayerId> = net
        .player_ids()
        .filter(|p| keep(Element::Player(*p)))
        .collect();
    let mut kept_cells: Vec<CellId> = net
        .cell_ids()
        .filter(|k| !matches!(net.cell(*k), Cell::Tau { .. }) && keep(Element::Cell(*k)))
        .collect();
    // Horn filling: a synchronisation survives iff both its halves do.
    let half_kept = |k: &CellId| kept_cells.binary_search(k).is_ok();
    let horns: Vec<CellId> = net
        .cell_ids()
        .filter(|k| match net.cell(*k) {
            Cell::Tau { out, input } => half_kept(out) && half_kept(input),
            _ => false,
        })
        .collect();
    kept_cells.extend(horns);
    kept_cells.sort_unstable();

    // Stability of the pulled-back set under the attachment maps.
    for p in &kept_players {
        for s in &net.player(*p).slots {
            if !kept_channels.contains(s) {
                return Err(PlaysError::NotStable(format!(
                    "player {p} lost channel {s}"
                )));
            }
        }
    }
    for k in &kept_cells {
        if let Cell::Unary { src, tgt, .. } = net.cell(*k) {
            if !kept_players.contains(src) || !kept_players.contains(tgt) {
                return Err(PlaysError::NotStable(format!("cell {k} lost a player")));
            }
        }
        for sub in net.cell(*k).subs() {
            if kept_cells.binary_search(&sub).is_err() {
                return Err(PlaysError::NotStable(format!("cell {k} lost half {sub}")));
            }
        }
    }

    let (sub_net, emb) = extract_subnet(net, &kept_channels, &kept_players, &kept_cells)?;
    let inv_player =
        |p: PlayerId| PlayerId(emb.player_map.iter().position(|q| *q == p).expect("kept") as u32);
    let inv_chan = |ch: ChannelId| {
        ChannelId(emb.channel_map.iter().position(|d| *d == ch).expect("kept") as u32)
    };
    let final_players: Vec<PlayerId> = c
        .final_players
        .iter()
        .filter(|p| kept_players.contains(p))
        .map(|p| inv_player(*p))
        .collect();
    let cospan = PlayCospan {
        final_channels: sub_net.channel_ids().collect(),
        final_players,
        initial_channels: sub_channels.iter().map(|ch| inv_chan(*ch)).collect(),
        initial_players: sub_players.iter().map(|p| inv_player(*p)).collect(),
        net: sub_net,
    };
    Ok((cospan, emb))
}
