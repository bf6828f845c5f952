//! Command-line front end: parsing, LTS exploration, play checking,
//! translation, equivalence checking and DOT rendering.
//!
//! Exit codes: 0 on success, 1 when a check yields `distinguished` or
//! `reject`, 2 on usage or parse errors.

use std::fmt::Write as _;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ccspg_core::ccs::{ccs_next, parse_ccs, print_ccs, Process};
use ccspg_core::equiv::{ccs_lts, fair_eq_ccs, full_abstraction_report, LtsView};
use ccspg_core::plays::{
    causal_dot, causal_graph, check_play, decompose_play, parse_play, play_dot, print_play,
    PlayCospan, Verdict as PlayVerdict,
};
use ccspg_core::strategies::{
    parse_strategy_term, print_strategy_term, strat_next, StrategyState, StrategyTerm,
    DEFAULT_STATE_CAP,
};
use ccspg_core::terms::{parse_process_term, print_process_term, term_next, TermState};
use ccspg_core::{theta, translate};

#[derive(Parser)]
#[command(
    name = "ccspg",
    version,
    about = "Plays, strategies and fair testing for finite CCS"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Side {
    Ccs,
    Terms,
    Strategies,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum RenderWhat {
    Causal,
    Play,
    Lts,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an input and reprint it canonically.
    Parse { file: String },
    /// Explore a labelled transition system and print its states and edges.
    Lts {
        #[arg(long, value_enum, default_value = "ccs")]
        side: Side,
        /// Bound on the number of proper steps from the root.
        #[arg(long)]
        depth: Option<usize>,
        file: String,
    },
    /// Run the play correctness criterion on a `.play` file.
    CheckPlay { file: String },
    /// Split an accepted play into its moves.
    Decompose { file: String },
    /// Translate a CCS process into its strategy term.
    Translate { file: String },
    /// Compare two processes under fair testing.
    Fair {
        #[arg(long)]
        depth: Option<usize>,
        left: String,
        right: String,
    },
    /// Run both fair-testing checkers over a shared test pool and report
    /// their agreement.
    Abstract {
        #[arg(long)]
        depth: Option<usize>,
        left: String,
        right: String,
    },
    /// Emit DOT for a causal graph, a play, or a transition system.
    Render {
        #[arg(long, value_enum)]
        what: RenderWhat,
        file: String,
    },
}

fn state_cap() -> usize {
    std::env::var("CCSPG_MAX_STATES")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_STATE_CAP)
}

/// Reads an argument as a file when the path exists, otherwise treats the
/// argument itself as inline source text.
fn source(arg: &str) -> Result<(String, Option<String>), String> {
    let path = Path::new(arg);
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{arg}: {e}"))?;
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .map(|s| s.to_string());
        Ok((text, ext))
    } else {
        Ok((arg.to_string(), None))
    }
}

fn load_process(arg: &str) -> Result<Process, String> {
    let (text, _) = source(arg)?;
    parse_ccs(&text).map_err(|e| e.to_string())
}

fn load_play(arg: &str) -> Result<PlayCospan, String> {
    let (text, _) = source(arg)?;
    parse_play(&text).map_err(|e| e.to_string())
}

/// Splits a `channels N; body` header from term and strategy files.
fn split_header(text: &str) -> Result<(usize, &str), String> {
    let rest = text.trim_start();
    let rest = rest
        .strip_prefix("channels")
        .ok_or_else(|| "expected a `channels N;` header".to_string())?;
    let (num, body) = rest
        .split_once(';')
        .ok_or_else(|| "expected `;` after the channel count".to_string())?;
    let n: usize = num
        .trim()
        .parse()
        .map_err(|_| "bad channel count".to_string())?;
    Ok((n, body))
}

fn run() -> Result<ExitCode, String> {
    let cli = Cli::parse();
    let cap = state_cap();
    match cli.command {
        Command::Parse { file } => {
            let (text, ext) = source(&file)?;
            match ext.as_deref() {
                Some("play") => {
                    let play = parse_play(&text).map_err(|e| e.to_string())?;
                    print!("{}", print_play(&play));
                }
                Some("term") => {
                    let (n, body) = split_header(&text)?;
                    let t = parse_process_term(body, n).map_err(|e| e.to_string())?;
                    println!("channels {n}; {}", print_process_term(&t));
                }
                Some("strat") => {
                    let (n, body) = split_header(&text)?;
                    let s = parse_strategy_term(body, n).map_err(|e| e.to_string())?;
                    println!("channels {n}; {}", print_strategy_term(&s));
                }
                _ => {
                    let p = parse_ccs(&text).map_err(|e| e.to_string())?;
                    println!("{}", print_ccs(&p));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Lts { side, depth, file } => {
            let out = match side {
                Side::Ccs => {
                    let p = load_process(&file)?;
                    lts_listing(
                        p,
                        |q| Ok::<_, String>(ccs_next(q)),
                        print_ccs,
                        |l| l.to_string(),
                        depth,
                        cap,
                    )?
                }
                Side::Terms => {
                    let p = load_process(&file)?;
                    let root = TermState::of_process(&p);
                    lts_listing(
                        root,
                        |s| term_next(s).map_err(|e| e.to_string()),
                        |s| {
                            let terms: Vec<String> =
                                s.terms.iter().map(print_process_term).collect();
                            format!(
                                "{} players: {}",
                                s.position.players.len(),
                                terms.join(" || ")
                            )
                        },
                        |d| d.action.to_string(),
                        depth,
                        cap,
                    )?
                }
                Side::Strategies => {
                    let p = load_process(&file)?;
                    let root = StrategyState::of_process(&p);
                    lts_listing(
                        root,
                        |s| strat_next(s).map_err(|e| e.to_string()),
                        |s| {
                            let strats: Vec<String> = s
                                .strategies
                                .iter()
                                .map(|d| print_strategy_term(&StrategyTerm::singleton(d.clone())))
                                .collect();
                            format!(
                                "{} players: {}",
                                s.position.players.len(),
                                strats.join(" || ")
                            )
                        },
                        |d| d.action.to_string(),
                        depth,
                        cap,
                    )?
                }
            };
            print!("{out}");
            Ok(ExitCode::SUCCESS)
        }
        Command::CheckPlay { file } => {
            let play = load_play(&file)?;
            match check_play(&play).map_err(|e| e.to_string())? {
                PlayVerdict::Accept => {
                    println!("accept");
                    Ok(ExitCode::SUCCESS)
                }
                PlayVerdict::Reject { condition, witness } => {
                    println!("reject ({condition}): {witness}");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Decompose { file } => {
            let play = load_play(&file)?;
            match check_play(&play).map_err(|e| e.to_string())? {
                PlayVerdict::Accept => {}
                PlayVerdict::Reject { condition, witness } => {
                    println!("reject ({condition}): {witness}");
                    return Ok(ExitCode::from(1));
                }
            }
            let moves = decompose_play(&play).map_err(|e| e.to_string())?;
            println!("# {} moves", moves.len());
            for (i, m) in moves.iter().enumerate() {
                println!("# move {} of {}", i + 1, moves.len());
                print!("{}", print_play(&m.cospan));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Translate { file } => {
            let p = load_process(&file)?;
            let strategy = translate(&theta(&p), p.gamma);
            println!(
                "channels {}; {}",
                p.gamma,
                print_strategy_term(&StrategyTerm::singleton(strategy))
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Fair { depth, left, right } => {
            let p = load_process(&left)?;
            let q = load_process(&right)?;
            let verdict = fair_eq_ccs(&p, &q, depth, cap).map_err(|e| e.to_string())?;
            println!("{verdict}");
            Ok(if verdict.is_equivalent() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Abstract { depth, left, right } => {
            let p = load_process(&left)?;
            let q = load_process(&right)?;
            let report = full_abstraction_report(&p, &q, depth, cap).map_err(|e| e.to_string())?;
            print!("{report}");
            if !report.agree {
                Ok(ExitCode::from(2))
            } else if report.ccs.is_equivalent() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
        Command::Render { what, file } => {
            match what {
                RenderWhat::Play => {
                    let play = load_play(&file)?;
                    print!("{}", play_dot(&play));
                }
                RenderWhat::Causal => {
                    let play = load_play(&file)?;
                    let g = causal_graph(&play.net).map_err(|e| e.to_string())?;
                    print!("{}", causal_dot(&play.net, &g));
                }
                RenderWhat::Lts => {
                    let p = load_process(&file)?;
                    let (g, root) = ccs_lts(&p, cap).map_err(|e| e.to_string())?;
                    print!("{}", lts_dot(&g, root));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Bounded breadth-first listing of a transition system.
fn lts_listing<S, D, E>(
    root: S,
    mut next: impl FnMut(&S) -> Result<Vec<(D, S)>, E>,
    show_state: impl Fn(&S) -> String,
    show_label: impl Fn(&D) -> String,
    depth: Option<usize>,
    cap: usize,
) -> Result<String, String>
where
    S: Clone + Ord,
    E: ToString,
{
    use std::collections::BTreeMap;
    let mut index: BTreeMap<S, usize> = BTreeMap::new();
    let mut states = vec![(root.clone(), 0usize)];
    index.insert(root, 0);
    let mut lines_states = Vec::new();
    let mut lines_edges = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let (current, level) = states[i].clone();
        lines_states.push(format!("state {i}: {}", show_state(&current)));
        if depth.map(|d| level < d).unwrap_or(true) {
            for (label, succ) in next(&current).map_err(|e| e.to_string())? {
                if succ == current {
                    continue;
                }
                let j = match index.get(&succ) {
                    Some(&j) => j,
                    None => {
                        let j = states.len();
                        if j >= cap {
                            return Err(format!("state cap of {cap} exceeded"));
                        }
                        index.insert(succ.clone(), j);
                        states.push((succ, level + 1));
                        j
                    }
                };
                lines_edges.push(format!("edge {i} {} {j}", show_label(&label)));
            }
        }
        i += 1;
    }
    let mut out = String::new();
    for l in lines_states {
        let _ = writeln!(out, "{l}");
    }
    for l in lines_edges {
        let _ = writeln!(out, "{l}");
    }
    Ok(out)
}

fn lts_dot(g: &LtsView<ccspg_core::ALabel>, root: usize) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "digraph lts {{");
    for v in 0..g.vertex_count() {
        let shape = if v == root { "doublecircle" } else { "circle" };
        let _ = writeln!(s, "  s{v} [shape={shape}, label=\"{v}\"];");
    }
    for (v, edges) in g.adj.iter().enumerate() {
        for (l, w) in edges {
            let _ = writeln!(s, "  s{v} -> s{w} [label=\"{l}\"];");
        }
    }
    let _ = writeln!(s, "}}");
    s
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
