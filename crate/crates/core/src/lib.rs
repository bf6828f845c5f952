//! A game model of finite CCS: string-diagram plays over typed element
//! tables with a decidable correctness criterion, the strategy and process
//! term calculi with their transition systems, translations from CCS, and
//! fair-testing equivalence checked on the process side and the semantic
//! side.
//!
//! ```
//! use ccspg_core::{fair_eq_ccs, full_abstraction_report, parse_ccs};
//! use ccspg_core::strategies::DEFAULT_STATE_CAP;
//!
//! // The two classic machines: branching after the handshake vs before.
//! let late = parse_ccs("channels 3; 1?.(2?.0 + 3?.0)").unwrap();
//! let early = parse_ccs("channels 3; 1?.2?.0 + 1?.3?.0").unwrap();
//!
//! let verdict = fair_eq_ccs(&late, &early, None, DEFAULT_STATE_CAP).unwrap();
//! assert!(!verdict.is_equivalent());
//!
//! // Both checkers agree, test tree by test tree.
//! let report = full_abstraction_report(&late, &early, None, DEFAULT_STATE_CAP).unwrap();
//! assert!(report.agree);
//! ```

pub mod ccs;
pub mod diagrams;
pub mod equiv;
pub mod plays;
pub mod sampling;
pub mod strategies;
pub mod terms;

pub use ccs::{ccs_next, is_bot_ccs, parse_ccs, passes_ccs, print_ccs, ALabel, Prefix, Process};
pub use diagrams::{
    find_iso, parse_net, print_net, pullback, pushout, validate_net, CellId, ChannelId, Embedding,
    PlayNet, Player, PlayerId,
};
pub use equiv::{
    bot_sigma, failures_of, fair_eq_ccs, fair_eq_semantic, fl, full_abstraction_report,
    strong_bisim_check, weak_bisim_check, ATree, Failure, LtsView, Side, Verdict,
};
pub use plays::{
    causal_graph, check_play, classify_move, compose_plays, decompose_play, embed_seed,
    enumerate_full_moves, history_map, make_seed, move_at, restrict_play, view_of, BasicMoveClass,
    CausalGraph, Move, MoveAction, MoveDescriptor, PlayCospan, Seed, SeedClass, SigmaLabel,
};
pub use strategies::{
    amalgamate, is_bot_strat, residual, semantic_passes, strat_next, translate, DefiniteStrategy,
    InterfacedStrategyState, StrategyState, StrategyTerm, DEFAULT_STATE_CAP,
};
pub use terms::{
    flatten_state, term_local_step, term_next, theta, InterfacedTermState, ProcessTerm, TermState,
};
