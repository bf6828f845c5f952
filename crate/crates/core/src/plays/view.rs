//! View extraction: what a single player has seen of a play.

use crate::diagrams::{extract_subnet, Cell, CellId, ChannelId, PlayerId};

use super::{check_play, PlayCospan, PlaysError, Verdict};

/// Walks the causal chain of a final-border player `y` backwards: while
/// the current player is some cell's source avatar, the cell is the basic
/// sub-move seen on that side (a fork contributes its left or right half,
/// a synchronisation its output or input half), and the walk continues
/// from the cell's target. Returns the chain as a play from `y`'s
/// individual together with the initial player reached.
pub fn view_of(c: &PlayCospan, y: PlayerId) -> Result<(PlayCospan, PlayerId), PlaysError> {
    match check_play(c)? {
        Verdict::Accept => {}
        Verdict::Reject { condition, witness } => {
            return Err(PlaysError::Rejected(format!(
                "condition ({condition}): {witness}"
            )))
        }
    }
    if !c.final_players.contains(&y) {
        return Err(PlaysError::NotFinal(y));
    }
    let net = &c.net;
    let mut chain = vec![y];
    let mut steps: Vec<CellId> = Vec::new();
    let mut current = y;
    loop {
        let step = net.cell_ids().find(|k| match net.cell(*k) {
            Cell::Unary { src, .. } => *src == current,
            _ => false,
        });
        match step {
            None => break,
            Some(k) => {
                let Cell::Unary { tgt, .. } = net.cell(k) else {
                    unreachable!()
                };
                steps.push(k);
                current = *tgt;
                chain.push(current);
            }
        }
    }
    let origin = current;

    let mut channels: Vec<ChannelId> = chain
        .iter()
        .flat_map(|p| net.player(*p).slots.iter().copied())
        .collect();
    channels.sort_unstable();
    channels.dedup();
    let mut players = chain.clone();
    players.sort_unstable();
    let mut cells = steps.clone();
    cells.sort_unstable();
    let (view_net, emb) = extract_subnet(net, &channels, &players, &cells)?;
    let inv_player = |p: PlayerId| {
        PlayerId(
            emb.player_map
                .iter()
                .position(|q| *q == p)
                .expect("in view") as u32,
        )
    };
    let cospan = PlayCospan {
        final_channels: view_net.channel_ids().collect(),
        final_players: vec![inv_player(y)],
        initial_channels: view_net.initial_channels(),
        initial_players: vec![inv_player(origin)],
        net: view_net,
    };
    Ok((cospan, origin))
}
