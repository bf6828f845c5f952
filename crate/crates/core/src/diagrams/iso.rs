//! Backtracking isomorphism search between nets.
//!
//! Nets in scope have at most a few hundred elements, so a candidate-pruning
//! backtracker ordered by (dimension descending, degree descending) is
//! enough; no canonical forms are computed. Mapping a core forces its
//! sub-cells and their players, which in turn force channels along slots.

use super::{Cell, ChannelId, Embedding, PlayNet, PlayerId};

/// An invertible pair of embeddings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isomorphism {
    pub forward: Embedding,
    pub backward: Embedding,
}

#[derive(Default)]
struct Trail {
    chans: Vec<(ChannelId, ChannelId)>,
    players: Vec<(PlayerId, PlayerId)>,
    cells: Vec<(usize, usize)>,
}

struct Search<'a> {
    a: &'a PlayNet,
    b: &'a PlayNet,
    chan_ab: Vec<Option<ChannelId>>,
    chan_ba: Vec<Option<ChannelId>>,
    player_ab: Vec<Option<PlayerId>>,
    player_ba: Vec<Option<PlayerId>>,
    cell_ab: Vec<Option<usize>>,
    cell_ba: Vec<Option<usize>>,
}

impl<'a> Search<'a> {
    fn rollback(&mut self, trail: &Trail) {
        for (x, y) in &trail.chans {
            self.chan_ab[x.index()] = None;
            self.chan_ba[y.index()] = None;
        }
        for (x, y) in &trail.players {
            self.player_ab[x.index()] = None;
            self.player_ba[y.index()] = None;
        }
        for (i, j) in &trail.cells {
            self.cell_ab[*i] = None;
            self.cell_ba[*j] = None;
        }
    }

    fn assign_chan(&mut self, x: ChannelId, y: ChannelId, trail: &mut Trail) -> bool {
        match (self.chan_ab[x.index()], self.chan_ba[y.index()]) {
            (Some(y2), _) => y2 == y,
            (None, Some(_)) => false,
            (None, None) => {
                self.chan_ab[x.index()] = Some(y);
                self.chan_ba[y.index()] = Some(x);
                trail.chans.push((x, y));
                true
            }
        }
    }

    /// Maps player x to y and their slots pointwise.
    fn assign_player(&mut self, x: PlayerId, y: PlayerId, trail: &mut Trail) -> bool {
        match (self.player_ab[x.index()], self.player_ba[y.index()]) {
            (Some(y2), _) => return y2 == y,
            (None, Some(_)) => return false,
            (None, None) => {}
        }
        let px = self.a.player(x);
        let py = self.b.player(y);
        if px.arity() != py.arity() {
            return false;
        }
        self.player_ab[x.index()] = Some(y);
        self.player_ba[y.index()] = Some(x);
        trail.players.push((x, y));
        for (cx, cy) in px.slots.iter().zip(py.slots.iter()) {
            if !self.assign_chan(*cx, *cy, trail) {
                return false;
            }
        }
        true
    }

    /// Maps cell i to cell j, forcing sub-cells and incident players.
    fn assign_cell(&mut self, i: usize, j: usize, trail: &mut Trail) -> bool {
        match (self.cell_ab[i], self.cell_ba[j]) {
            (Some(j2), _) => return j2 == j,
            (None, Some(_)) => return false,
            (None, None) => {}
        }
        self.cell_ab[i] = Some(j);
        self.cell_ba[j] = Some(i);
        trail.cells.push((i, j));
        match (&self.a.cells[i], &self.b.cells[j]) {
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
                *ka == *kb
                    && self.assign_player(*sa, *sb, trail)
                    && self.assign_player(*ta, *tb, trail)
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
                self.assign_cell(la.index(), lb.index(), trail)
                    && self.assign_cell(ra.index(), rb.index(), trail)
            }
            (Cell::Tau { out: oa, input: ia }, Cell::Tau { out: ob, input: ib }) => {
                self.assign_cell(oa.index(), ob.index(), trail)
                    && self.assign_cell(ia.index(), ib.index(), trail)
            }
            _ => false,
        }
    }

    fn match_cells(&mut self, order: &[usize], player_order: &[PlayerId]) -> bool {
        let Some((&i, rest)) = order.split_first() else {
            return self.match_players(player_order);
        };
        if let Some(j) = self.cell_ab[i] {
            // Already forced by a previously matched parent.
            let _ = j;
            return self.match_cells(rest, player_order);
        }
        for j in 0..self.b.cells.len() {
            if self.cell_ba[j].is_some() {
                continue;
            }
            let mut trail = Trail::default();
            if self.assign_cell(i, j, &mut trail) && self.match_cells(rest, player_order) {
                return true;
            }
            self.rollback(&trail);
        }
        false
    }

    fn match_players(&mut self, order: &[PlayerId]) -> bool {
        let Some((&x, rest)) = order.split_first() else {
            return self.match_free_channels();
        };
        if self.player_ab[x.index()].is_some() {
            return self.match_players(rest);
        }
        for y in self.b.player_ids() {
            if self.player_ba[y.index()].is_some() {
                continue;
            }
            let mut trail = Trail::default();
            if self.assign_player(x, y, &mut trail) && self.match_players(rest) {
                return true;
            }
            self.rollback(&trail);
        }
        false
    }

    /// Channels touching no mapped player pair arbitrarily; only the
    /// counts must agree.
    fn match_free_channels(&mut self) -> bool {
        let free_a: Vec<_> = self
            .a
            .channel_ids()
            .filter(|c| self.chan_ab[c.index()].is_none())
            .collect();
        let free_b: Vec<_> = self
            .b
            .channel_ids()
            .filter(|c| self.chan_ba[c.index()].is_none())
            .collect();
        if free_a.len() != free_b.len() {
            return false;
        }
        for (x, y) in free_a.iter().zip(free_b.iter()) {
            self.chan_ab[x.index()] = Some(*y);
            self.chan_ba[y.index()] = Some(*x);
        }
        true
    }
}

/// Searches for an isomorphism between two nets; `None` if there is none.
/// Deterministic for fixed inputs.
pub fn find_iso(a: &PlayNet, b: &PlayNet) -> Option<Isomorphism> {
    if a.channels != b.channels
        || a.players.len() != b.players.len()
        || a.cells.len() != b.cells.len()
    {
        return None;
    }
    // Quick profile check: kinds and arities must agree as multisets.
    let mut ka: Vec<_> = a.cell_ids().map(|k| a.cell_kind(k)).collect();
    let mut kb: Vec<_> = b.cell_ids().map(|k| b.cell_kind(k)).collect();
    ka.sort();
    kb.sort();
    if ka != kb {
        return None;
    }
    let mut arities_a: Vec<_> = a.players.iter().map(|p| p.arity()).collect();
    let mut arities_b: Vec<_> = b.players.iter().map(|p| p.arity()).collect();
    arities_a.sort_unstable();
    arities_b.sort_unstable();
    if arities_a != arities_b {
        return None;
    }

    // Cells by dimension descending (cores force their sub-cells), then
    // players by degree descending.
    let mut cell_order: Vec<usize> = (0..a.cells.len()).collect();
    cell_order.sort_by_key(|i| (std::cmp::Reverse(a.cells[*i].dimension()), *i));
    let mut degree = vec![0usize; a.players.len()];
    for cell in &a.cells {
        if let Cell::Unary { src, tgt, .. } = cell {
            degree[src.index()] += 1;
            degree[tgt.index()] += 1;
        }
    }
    let mut player_order: Vec<PlayerId> = a.player_ids().collect();
    player_order.sort_by_key(|p| (std::cmp::Reverse(degree[p.index()]), p.index()));

    let mut search = Search {
        a,
        b,
        chan_ab: vec![None; a.channels],
        chan_ba: vec![None; b.channels],
        player_ab: vec![None; a.players.len()],
        player_ba: vec![None; b.players.len()],
        cell_ab: vec![None; a.cells.len()],
        cell_ba: vec![None; b.cells.len()],
    };
    if !search.match_cells(&cell_order, &player_order) {
        return None;
    }
    let cell_id = |k: &Option<usize>| super::CellId(k.expect("total") as u32);
    let forward = Embedding {
        channel_map: search.chan_ab.iter().map(|c| c.expect("total")).collect(),
        player_map: search.player_ab.iter().map(|p| p.expect("total")).collect(),
        cell_map: search.cell_ab.iter().map(cell_id).collect(),
    };
    let backward = Embedding {
        channel_map: search.chan_ba.iter().map(|c| c.expect("total")).collect(),
        player_map: search.player_ba.iter().map(|p| p.expect("total")).collect(),
        cell_map: search.cell_ba.iter().map(cell_id).collect(),
    };
    debug_assert!(forward.validate(a, b).is_ok());
    debug_assert!(backward.validate(b, a).is_ok());
    Some(Isomorphism { forward, backward })
}
