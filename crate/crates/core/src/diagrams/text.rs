//! Canonical line-oriented serialization of nets.
//!
//! One element per line, `kind id attachments...`; tables in fixed order:
//! channels, players grouped by arity, cells grouped by kind tag, ids
//! ascending within each group. Round-trips bit-exactly.

use thiserror::Error;

use super::{validate_net, Cell, CellId, ChannelId, PlayNet, Player, PlayerId, UnaryKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TextError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("net ids are not dense")]
    NonDenseIds,
    #[error("net is not well-formed: {0}")]
    Invalid(String),
}

pub fn print_net(net: &PlayNet) -> String {
    let mut out = String::new();
    for c in net.channel_ids() {
        out.push_str(&format!("chan {c}\n"));
    }
    let mut players: Vec<PlayerId> = net.player_ids().collect();
    players.sort_by_key(|p| (net.player(*p).arity(), p.index()));
    for p in players {
        out.push_str(&format!("player {p}"));
        for s in &net.player(p).slots {
            out.push_str(&format!(" {s}"));
        }
        out.push('\n');
    }
    let mut cells: Vec<CellId> = net.cell_ids().collect();
    cells.sort_by_key(|k| (net.cell(*k).kind_rank(), k.index()));
    for k in cells {
        match net.cell(k) {
            Cell::Unary { kind, src, tgt } => match kind {
                UnaryKind::ForkL => out.push_str(&format!("forkl {k} {src} {tgt}\n")),
                UnaryKind::ForkR => out.push_str(&format!("forkr {k} {src} {tgt}\n")),
                UnaryKind::Nu => out.push_str(&format!("nu {k} {src} {tgt}\n")),
                UnaryKind::Tick => out.push_str(&format!("tick {k} {src} {tgt}\n")),
                UnaryKind::In(a) => out.push_str(&format!("in {k} {a} {src} {tgt}\n")),
                UnaryKind::Out(c) => out.push_str(&format!("out {k} {c} {src} {tgt}\n")),
            },
            Cell::Fork { left, right } => out.push_str(&format!("fork {k} {left} {right}\n")),
            Cell::Tau { out: o, input } => out.push_str(&format!("tau {k} {o} {input}\n")),
        }
    }
    out
}

fn field(tokens: &[&str], i: usize, line: usize) -> Result<usize, TextError> {
    tokens
        .get(i)
        .and_then(|t| t.parse::<usize>().ok())
        .ok_or(TextError::Parse {
            line,
            msg: format!("expected a number in field {i}"),
        })
}

/// Parses the output of [`print_net`]. Lines may appear in any order; ids
/// must be dense per table.
pub fn parse_net(text: &str) -> Result<PlayNet, TextError> {
    let mut channels: Vec<usize> = Vec::new();
    let mut players: Vec<(usize, Player)> = Vec::new();
    let mut cells: Vec<(usize, Cell)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        let parse_err = |msg: &str| TextError::Parse {
            line,
            msg: msg.to_string(),
        };
        match tokens[0] {
            "chan" => channels.push(field(&tokens, 1, line)?),
            "player" => {
                let id = field(&tokens, 1, line)?;
                let slots = (2..tokens.len())
                    .map(|i| field(&tokens, i, line).map(|v| ChannelId(v as u32)))
                    .collect::<Result<Vec<_>, _>>()?;
                players.push((id, Player { slots }));
            }
            "forkl" | "forkr" | "nu" | "tick" => {
                let id = field(&tokens, 1, line)?;
                let src = PlayerId(field(&tokens, 2, line)? as u32);
                let tgt = PlayerId(field(&tokens, 3, line)? as u32);
                let kind = match tokens[0] {
                    "forkl" => UnaryKind::ForkL,
                    "forkr" => UnaryKind::ForkR,
                    "nu" => UnaryKind::Nu,
                    _ => UnaryKind::Tick,
                };
                cells.push((id, Cell::Unary { kind, src, tgt }));
            }
            "in" | "out" => {
                let id = field(&tokens, 1, line)?;
                let slot = field(&tokens, 2, line)?;
                let src = PlayerId(field(&tokens, 3, line)? as u32);
                let tgt = PlayerId(field(&tokens, 4, line)? as u32);
                let kind = if tokens[0] == "in" {
                    UnaryKind::In(slot)
                } else {
                    UnaryKind::Out(slot)
                };
                cells.push((id, Cell::Unary { kind, src, tgt }));
            }
            "fork" => {
                let id = field(&tokens, 1, line)?;
                let left = CellId(field(&tokens, 2, line)? as u32);
                let right = CellId(field(&tokens, 3, line)? as u32);
                cells.push((id, Cell::Fork { left, right }));
            }
            "tau" => {
                let id = field(&tokens, 1, line)?;
                let out = CellId(field(&tokens, 2, line)? as u32);
                let input = CellId(field(&tokens, 3, line)? as u32);
                cells.push((id, Cell::Tau { out, input }));
            }
            other => return Err(parse_err(&format!("unknown element kind `{other}`"))),
        }
    }

    let mut chan_sorted = channels.clone();
    chan_sorted.sort_unstable();
    if chan_sorted.iter().enumerate().any(|(i, c)| i != *c) {
        return Err(TextError::NonDenseIds);
    }
    let mut net = PlayNet {
        channels: channels.len(),
        players: vec![Player { slots: vec![] }; players.len()],
        cells: vec![
            Cell::Unary {
                kind: UnaryKind::Tick,
                src: PlayerId(0),
                tgt: PlayerId(0)
            };
            cells.len()
        ],
    };
    let nplayers = players.len();
    let mut seen = vec![false; nplayers];
    for (id, p) in players {
        if id >= nplayers || std::mem::replace(&mut seen[id], true) {
            return Err(TextError::NonDenseIds);
        }
        net.players[id] = p;
    }
    let ncells = cells.len();
    let mut seen = vec![false; ncells];
    for (id, c) in cells {
        if id >= ncells || std::mem::replace(&mut seen[id], true) {
            return Err(TextError::NonDenseIds);
        }
        net.cells[id] = c;
    }
    let violations = validate_net(&net);
    if let Some(v) = violations.first() {
        return Err(TextError::Invalid(v.to_string()));
    }
    Ok(net)
}
