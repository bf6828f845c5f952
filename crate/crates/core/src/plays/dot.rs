//! DOT rendering: channels as circles, players as points, cells and cores
//! as triangles, following the usual string-diagram drawings.

use std::fmt::Write;

use crate::diagrams::{Cell, PlayNet};

use super::{CausalGraph, CausalLabel, PlayCospan};

/// Renders a play: the net as an undirected graph, the two borders as
/// clusters of proxy nodes linked to their images by dashed edges.
pub fn play_dot(c: &PlayCospan) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "graph play {{");
    for ch in c.net.channel_ids() {
        let _ = writeln!(s, "  c{ch} [shape=circle, label=\"{ch}\"];");
    }
    for p in c.net.player_ids() {
        let _ = writeln!(s, "  p{p} [shape=point, label=\"{p}\"];");
    }
    for k in c.net.cell_ids() {
        let _ = writeln!(
            s,
            "  k{k} [shape=triangle, label=\"{:?}\"];",
            c.net.cell_kind(k)
        );
    }
    for p in c.net.player_ids() {
        for ch in &c.net.player(p).slots {
            let _ = writeln!(s, "  p{p} -- c{ch};");
        }
    }
    for k in c.net.cell_ids() {
        match c.net.cell(k) {
            Cell::Unary { src, tgt, .. } => {
                let _ = writeln!(s, "  p{tgt} -- k{k};");
                let _ = writeln!(s, "  k{k} -- p{src};");
            }
            Cell::Fork { left, right }
            | Cell::Tau {
                out: left,
                input: right,
            } => {
                let _ = writeln!(s, "  k{k} -- k{left};");
                let _ = writeln!(s, "  k{k} -- k{right};");
            }
        }
    }
    for (cluster, chans, players) in [
        ("final", &c.final_channels, &c.final_players),
        ("initial", &c.initial_channels, &c.initial_players),
    ] {
        let _ = writeln!(s, "  subgraph cluster_{cluster} {{");
        let _ = writeln!(s, "    label=\"{cluster}\";");
        for (i, _) in chans.iter().enumerate() {
            let _ = writeln!(s, "    {cluster}_c{i} [shape=circle, label=\"{i}\"];");
        }
        for (i, _) in players.iter().enumerate() {
            let _ = writeln!(s, "    {cluster}_p{i} [shape=point, label=\"{i}\"];");
        }
        let _ = writeln!(s, "  }}");
        for (i, ch) in chans.iter().enumerate() {
            let _ = writeln!(s, "  {cluster}_c{i} -- c{ch} [style=dashed];");
        }
        for (i, p) in players.iter().enumerate() {
            let _ = writeln!(s, "  {cluster}_p{i} -- p{p} [style=dashed];");
        }
    }
    let _ = writeln!(s, "}}");
    s
}

/// Renders a causal graph as a digraph, shaped by vertex label.
pub fn causal_dot(net: &PlayNet, g: &CausalGraph) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "digraph causal {{");
    for (v, label) in g.labels.iter().enumerate() {
        let shape = match label {
            CausalLabel::Channel => "circle",
            CausalLabel::Player => "point",
            CausalLabel::Core => "triangle",
        };
        let name = match label {
            CausalLabel::Core => {
                let idx = v - net.channels - net.players.len();
                format!("{:?}", net.cell_kind(g.cores[idx]))
            }
            _ => format!("{v}"),
        };
        let _ = writeln!(s, "  v{v} [shape={shape}, label=\"{name}\"];");
    }
    for (a, b) in &g.edges {
        let _ = writeln!(s, "  v{a} -> v{b};");
    }
    let _ = writeln!(s, "}}");
    s
}
