//! Generic pole and bisimulation checkers over finite labelled transition
//! graphs, failures and test trees, and the fair-testing harness run on
//! both the process side and the semantic side.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::ccs::{ccs_next, passes_ccs, ALabel, CcsError, Prefix, Process, Term};
use crate::plays::{classify_move, PlaysError, SigmaLabel};
use crate::strategies::{semantic_passes, strat_next, InterfacedStrategyState, StratError};
use crate::terms::{term_next, InterfacedTermState, TermsError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EquivError {
    #[error(transparent)]
    Ccs(#[from] CcsError),
    #[error(transparent)]
    Terms(#[from] TermsError),
    #[error(transparent)]
    Strat(#[from] StratError),
    #[error(transparent)]
    Plays(#[from] PlaysError),
    #[error("state-space bound of {0} states exceeded")]
    StateCapExceeded(usize),
    #[error("tree label {0} outside the channel range {1}")]
    LabelOutOfRange(usize, usize),
}

/// Labels that distinguish silent (identity) edges and tick witnesses.
pub trait PoleLabel: Clone + Eq + Ord {
    fn is_silent(&self) -> bool;
    fn is_tick(&self) -> bool;
}

impl PoleLabel for SigmaLabel {
    fn is_silent(&self) -> bool {
        *self == SigmaLabel::Silent
    }
    fn is_tick(&self) -> bool {
        *self == SigmaLabel::Tick
    }
}

impl PoleLabel for ALabel {
    fn is_silent(&self) -> bool {
        *self == ALabel::Id
    }
    fn is_tick(&self) -> bool {
        *self == ALabel::Tick
    }
}

/// A finite rooted transition graph with labelled edges. The reflexive
/// identity edge at each vertex is implicit; stored edges are the proper
/// transitions (which may also carry the identity label, e.g. for
/// synchronisations).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LtsView<L> {
    pub adj: Vec<Vec<(L, usize)>>,
}

impl<L> LtsView<L> {
    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }
}

/// Explores an on-the-fly transition system into an [`LtsView`], dropping
/// exact identity self-loops (they stay implicit). Returns the view and
/// the root's vertex.
pub fn explore<S, L, E>(
    root: S,
    mut step: impl FnMut(&S) -> Result<Vec<(L, S)>, E>,
    cap: usize,
) -> Result<(LtsView<L>, usize, Vec<S>), ExploreError<E>>
where
    S: Clone + Ord,
    L: PoleLabel,
{
    let mut index: BTreeMap<S, usize> = BTreeMap::new();
    let mut states = vec![root.clone()];
    index.insert(root, 0);
    let mut adj: Vec<Vec<(L, usize)>> = vec![Vec::new()];
    let mut i = 0;
    while i < states.len() {
        let current = states[i].clone();
        for (l, next) in step(&current).map_err(ExploreError::Step)? {
            if l.is_silent() && next == current {
                continue;
            }
            let j = match index.get(&next) {
                Some(&j) => j,
                None => {
                    let j = states.len();
                    if j >= cap {
                        return Err(ExploreError::CapExceeded(cap));
                    }
                    index.insert(next.clone(), j);
                    states.push(next);
                    adj.push(Vec::new());
                    j
                }
            };
            adj[i].push((l, j));
        }
        i += 1;
    }
    Ok((LtsView { adj }, 0, states))
}

#[derive(Debug, Error)]
pub enum ExploreError<E> {
    #[error("state-space bound of {0} states exceeded")]
    CapExceeded(usize),
    #[error(transparent)]
    Step(E),
}

/// The pole of a vertex: every vertex reachable by silent edges can still
/// reach a tick through silent edges.
pub fn bot_sigma<L: PoleLabel>(g: &LtsView<L>, v: usize) -> bool {
    let n = g.vertex_count();
    let mut reach = vec![false; n];
    let mut stack = vec![v];
    reach[v] = true;
    while let Some(x) = stack.pop() {
        for (l, y) in &g.adj[x] {
            if l.is_silent() && !reach[*y] {
                reach[*y] = true;
                stack.push(*y);
            }
        }
    }
    // Backward closure over silent edges of the tick-enabled set.
    let mut good: Vec<bool> = (0..n)
        .map(|x| g.adj[x].iter().any(|(l, _)| l.is_tick()))
        .collect();
    let mut changed = true;
    while changed {
        changed = false;
        for x in 0..n {
            if !good[x] && g.adj[x].iter().any(|(l, y)| l.is_silent() && good[*y]) {
                good[x] = true;
                changed = true;
            }
        }
    }
    (0..n).filter(|x| reach[*x]).all(|x| good[x])
}

/// Greatest strong bisimulation between two graphs containing the given
/// pair, by fixpoint refinement of the full relation; `None` if the pair
/// falls out.
pub fn strong_bisim_check<L: Clone + Eq>(
    g1: &LtsView<L>,
    g2: &LtsView<L>,
    v1: usize,
    v2: usize,
    silent: impl Fn(&L) -> bool,
) -> Option<Vec<(usize, usize)>> {
    let n1 = g1.vertex_count();
    let n2 = g2.vertex_count();
    let mut related = vec![vec![true; n2]; n1];
    let mut changed = true;
    while changed {
        changed = false;
        for x in 0..n1 {
            for y in 0..n2 {
                if !related[x][y] {
                    continue;
                }
                // An edge is answered by an explicit edge with the same
                // label, or by the partner's implicit identity self-loop
                // when the label is silent.
                let forward = g1.adj[x].iter().all(|(l, x2)| {
                    let explicit = g2.adj[y].iter().any(|(m, y2)| m == l && related[*x2][*y2]);
                    explicit || (silent(l) && related[*x2][y])
                });
                let backward = g2.adj[y].iter().all(|(l, y2)| {
                    let explicit = g1.adj[x].iter().any(|(m, x2)| m == l && related[*x2][*y2]);
                    explicit || (silent(l) && related[x][*y2])
                });
                if !(forward && backward) {
                    related[x][y] = false;
                    changed = true;
                }
            }
        }
    }
    if related[v1][v2] {
        let mut pairs = Vec::new();
        for (x, row) in related.iter().enumerate() {
            for (y, r) in row.iter().enumerate() {
                if *r {
                    pairs.push((x, y));
                }
            }
        }
        Some(pairs)
    } else {
        None
    }
}

/// Weak saturation: edges `x --l--> y` for every path whose identity-free
/// label word is `(l)`, plus silent edges for every silent path.
fn saturate(g: &LtsView<ALabel>) -> LtsView<ALabel> {
    let n = g.vertex_count();
    let mut silent_reach: Vec<BTreeSet<usize>> = Vec::with_capacity(n);
    for v in 0..n {
        let mut reach = BTreeSet::new();
        reach.insert(v);
        let mut stack = vec![v];
        while let Some(x) = stack.pop() {
            for (l, y) in &g.adj[x] {
                if *l == ALabel::Id && reach.insert(*y) {
                    stack.push(*y);
                }
            }
        }
        silent_reach.push(reach);
    }
    let mut adj: Vec<Vec<(ALabel, usize)>> = vec![Vec::new(); n];
    for v in 0..n {
        let mut out: BTreeSet<(ALabel, usize)> = BTreeSet::new();
        for &m in &silent_reach[v] {
            // Silent weak edges.
            if m != v {
                out.insert((ALabel::Id, m));
            }
            for (l, y) in &g.adj[m] {
                if *l == ALabel::Id {
                    continue;
                }
                for &z in &silent_reach[*y] {
                    out.insert((*l, z));
                }
            }
        }
        adj[v] = out.into_iter().collect();
    }
    LtsView { adj }
}

/// Greatest weak bisimulation over the CCS alphabet, by saturation then
/// strong refinement.
pub fn weak_bisim_check(
    g1: &LtsView<ALabel>,
    g2: &LtsView<ALabel>,
    v1: usize,
    v2: usize,
) -> Option<Vec<(usize, usize)>> {
    let s1 = saturate(g1);
    let s2 = saturate(g2);
    strong_bisim_check(&s1, &s2, v1, v2, |l| *l == ALabel::Id)
}

// ---------------------------------------------------------------------
// Failures and test trees
// ---------------------------------------------------------------------

/// A failure: a loud tick-free path together with a set of loud
/// continuation words available at its endpoint.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Failure {
    pub path: Vec<ALabel>,
    pub continuations: BTreeSet<Vec<ALabel>>,
}

/// A test tree over the CCS alphabet: no edge is silent.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ATree(pub Vec<(ALabel, ATree)>);

impl ATree {
    pub fn leaf() -> ATree {
        ATree(vec![])
    }

    pub fn depth(&self) -> usize {
        self.0.iter().map(|(_, t)| 1 + t.depth()).max().unwrap_or(0)
    }
}

impl fmt::Display for ATree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(l, t)| {
                if t.0.is_empty() {
                    format!("{l}.0")
                } else {
                    format!("{l}.({t})")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// All loud continuation words of bounded length from a vertex: the
/// identity-free label words of arbitrary paths.
fn loud_words(g: &LtsView<ALabel>, v: usize, depth: usize) -> BTreeSet<Vec<ALabel>> {
    let mut words = BTreeSet::new();
    let mut visited: BTreeSet<(usize, Vec<ALabel>)> = BTreeSet::new();
    let mut stack = vec![(v, Vec::new())];
    while let Some((x, word)) = stack.pop() {
        if !visited.insert((x, word.clone())) {
            continue;
        }
        words.insert(word.clone());
        for (l, y) in &g.adj[x] {
            if *l == ALabel::Id {
                stack.push((*y, word.clone()));
            } else if word.len() < depth {
                let mut w = word.clone();
                w.push(*l);
                stack.push((*y, w));
            }
        }
    }
    words
}

/// All failures realizable from a vertex at the given depth: one per
/// reachable endpoint of each loud tick-free identity-free word of length
/// at most `depth`, paired with the endpoint's loud words.
pub fn failures_of(g: &LtsView<ALabel>, v: usize, depth: usize) -> BTreeSet<Failure> {
    let mut out = BTreeSet::new();
    let mut visited: BTreeSet<(usize, Vec<ALabel>)> = BTreeSet::new();
    let mut stack = vec![(v, Vec::new())];
    while let Some((x, path)) = stack.pop() {
        if !visited.insert((x, path.clone())) {
            continue;
        }
        out.insert(Failure {
            path: path.clone(),
            continuations: loud_words(g, x, depth),
        });
        for (l, y) in &g.adj[x] {
            match l {
                ALabel::Id => stack.push((*y, path.clone())),
                ALabel::Tick => {}
                _ if path.len() < depth => {
                    let mut p = path.clone();
                    p.push(*l);
                    stack.push((*y, p));
                }
                _ => {}
            }
        }
    }
    out
}

/// Builds a test tree from a failure: each path step offers the action
/// plus an immediate tick escape, and at the endpoint the continuation set
/// unfolds edge by edge.
pub fn fl(failure: &Failure) -> ATree {
    fn of_set(l: &BTreeSet<Vec<ALabel>>) -> ATree {
        let mut heads: Vec<ALabel> = l.iter().filter_map(|w| w.first().copied()).collect();
        heads.sort_unstable();
        heads.dedup();
        ATree(
            heads
                .into_iter()
                .map(|e| {
                    let rest: BTreeSet<Vec<ALabel>> = l
                        .iter()
                        .filter(|w| w.first() == Some(&e))
                        .map(|w| w[1..].to_vec())
                        .collect();
                    (e, of_set(&rest))
                })
                .collect(),
        )
    }
    fn of_path(path: &[ALabel], l: &BTreeSet<Vec<ALabel>>) -> ATree {
        match path.split_first() {
            None => of_set(l),
            Some((e, rest)) => ATree(vec![(*e, of_path(rest, l)), (ALabel::Tick, ATree::leaf())]),
        }
    }
    of_path(&failure.path, &failure.continuations)
}

/// The CCS process with the same tree shape.
pub fn atree_as_process(t: &ATree, gamma: usize) -> Result<Process, EquivError> {
    fn term(t: &ATree, gamma: usize) -> Result<Term, EquivError> {
        let summands =
            t.0.iter()
                .map(|(l, sub)| {
                    let prefix = match l {
                        ALabel::In(a) => {
                            if *a < 1 || *a > gamma {
                                return Err(EquivError::LabelOutOfRange(*a, gamma));
                            }
                            Prefix::In(*a)
                        }
                        ALabel::Out(a) => {
                            if *a < 1 || *a > gamma {
                                return Err(EquivError::LabelOutOfRange(*a, gamma));
                            }
                            Prefix::Out(*a)
                        }
                        ALabel::Tick => Prefix::Tick,
                        ALabel::Id => return Err(EquivError::LabelOutOfRange(0, gamma)),
                    };
                    Ok((prefix, term(sub, gamma)?))
                })
                .collect::<Result<Vec<_>, _>>()?;
        Ok(Term::Sum(summands))
    }
    Ok(Process::new(gamma, term(t, gamma)?)?)
}

/// Which side of an equivalence check fails the distinguishing test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// The outcome of a fair-testing comparison. Equivalence is always
/// depth-indexed: the tree pool exhausts the failures of both sides up to
/// the recorded depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    EquivalentAtDepth(usize),
    Distinguished { witness: ATree, failing: Side },
}

impl Verdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Verdict::EquivalentAtDepth(_))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::EquivalentAtDepth(d) => write!(f, "equivalent-at-depth {d}"),
            Verdict::Distinguished { witness, failing } => write!(
                f,
                "distinguished (fails {}): {witness}",
                match failing {
                    Side::Left => "left",
                    Side::Right => "right",
                }
            ),
        }
    }
}

/// Longest loud identity-free word realizable in the graph, bounded by the
/// vertex count (our finite-term systems are loud-acyclic).
fn longest_loud(g: &LtsView<ALabel>) -> usize {
    let bound = g.vertex_count();
    let mut best = 0;
    let mut visited: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut stack: Vec<(usize, usize)> = (0..g.vertex_count()).map(|v| (v, 0)).collect();
    while let Some((x, len)) = stack.pop() {
        if len > best {
            best = len;
        }
        if len >= bound {
            continue;
        }
        if !visited.insert((x, len)) {
            continue;
        }
        for (l, y) in &g.adj[x] {
            if *l == ALabel::Id {
                stack.push((*y, len));
            } else {
                stack.push((*y, len + 1));
            }
        }
    }
    best
}

fn complement_word(w: &[ALabel]) -> Vec<ALabel> {
    w.iter().map(|l| l.complement()).collect()
}

/// The candidate test pool for a pair of failure sets: for each failure,
/// the complemented tree, plus a variant whose continuations are
/// complemented and terminated by an explicit tick (the handshake a test
/// performs before agreeing to tick).
fn candidate_trees(failures: &BTreeSet<Failure>) -> BTreeSet<ATree> {
    let mut pool = BTreeSet::new();
    for f in failures {
        let complemented = Failure {
            path: complement_word(&f.path),
            continuations: f.continuations.iter().map(|w| complement_word(w)).collect(),
        };
        pool.insert(fl(&complemented));
        let mut ticked: BTreeSet<Vec<ALabel>> = BTreeSet::new();
        ticked.insert(Vec::new());
        for w in &f.continuations {
            if w.is_empty() || w.contains(&ALabel::Tick) {
                continue;
            }
            let mut t = complement_word(w);
            t.push(ALabel::Tick);
            ticked.insert(t);
        }
        pool.insert(fl(&Failure {
            path: complemented.path,
            continuations: ticked,
        }));
    }
    pool
}

/// Explores the CCS transition system of a process.
pub fn ccs_lts(p: &Process, cap: usize) -> Result<(LtsView<ALabel>, usize), EquivError> {
    let (g, root, _) =
        explore(p.clone(), |q| Ok::<_, EquivError>(ccs_next(q)), cap).map_err(flatten_explore)?;
    Ok((g, root))
}

/// Explores the interfaced term transition system over the CCS alphabet:
/// only moves observable through the interface are kept.
pub fn term_lts_interfaced(
    s: &InterfacedTermState,
    cap: usize,
) -> Result<(LtsView<ALabel>, usize), EquivError> {
    let interface = s.interface.clone();
    let (g, root, _) = explore(
        s.state.clone(),
        move |state| {
            let mut out = Vec::new();
            for (d, succ) in term_next(state)? {
                if let Some(label) = classify_move(&d, Some(&interface)).a_label {
                    out.push((label, succ));
                }
            }
            Ok::<_, EquivError>(out)
        },
        cap,
    )
    .map_err(flatten_explore)?;
    Ok((g, root))
}

/// Explores the interfaced strategy transition system over the CCS
/// alphabet.
pub fn strat_lts_interfaced(
    s: &InterfacedStrategyState,
    cap: usize,
) -> Result<(LtsView<ALabel>, usize), EquivError> {
    let interface = s.interface.clone();
    let (g, root, _) = explore(
        s.state.clone(),
        move |state| {
            let mut out = Vec::new();
            for (d, succ) in strat_next(state)? {
                if let Some(label) = classify_move(&d, Some(&interface)).a_label {
                    out.push((label, succ));
                }
            }
            Ok::<_, EquivError>(out)
        },
        cap,
    )
    .map_err(flatten_explore)?;
    Ok((g, root))
}

fn flatten_explore(e: ExploreError<EquivError>) -> EquivError {
    match e {
        ExploreError::CapExceeded(c) => EquivError::StateCapExceeded(c),
        ExploreError::Step(e) => e,
    }
}

/// Fair-testing comparison of two processes through the candidate tree
/// pool built from both failure sets, at the given depth (default: one
/// past the longest loud path of either side).
pub fn fair_eq_ccs(
    p: &Process,
    q: &Process,
    depth: Option<usize>,
    cap: usize,
) -> Result<Verdict, EquivError> {
    if p.gamma != q.gamma {
        return Err(EquivError::Ccs(CcsError::GammaMismatch(p.gamma, q.gamma)));
    }
    let (gp, rp) = ccs_lts(p, cap)?;
    let (gq, rq) = ccs_lts(q, cap)?;
    let depth = depth.unwrap_or_else(|| longest_loud(&gp).max(longest_loud(&gq)) + 1);
    let mut failures = failures_of(&gp, rp, depth);
    failures.extend(failures_of(&gq, rq, depth));
    for tree in candidate_trees(&failures) {
        let test = atree_as_process(&tree, p.gamma)?;
        let pass_p = passes_ccs(p, &test)?;
        let pass_q = passes_ccs(q, &test)?;
        if pass_p != pass_q {
            return Ok(Verdict::Distinguished {
                witness: tree,
                failing: if pass_p { Side::Right } else { Side::Left },
            });
        }
    }
    Ok(Verdict::EquivalentAtDepth(depth))
}

/// The interfaced test state of a tree: a fresh single player holding the
/// translated tree process, sharing exactly the interface channels.
pub fn tree_test_state(
    tree: &ATree,
    interface_len: usize,
) -> Result<InterfacedStrategyState, EquivError> {
    let process = atree_as_process(tree, interface_len)?;
    Ok(InterfacedStrategyState::of_process(&process))
}

/// Fair-testing comparison of two interfaced strategy states by the same
/// tree-pool scheme, with verdicts decided by the semantic pole.
pub fn fair_eq_semantic(
    s1: &InterfacedStrategyState,
    s2: &InterfacedStrategyState,
    depth: Option<usize>,
    cap: usize,
) -> Result<Verdict, EquivError> {
    if s1.interface.len() != s2.interface.len() {
        return Err(EquivError::Strat(StratError::InterfaceMismatch));
    }
    let k = s1.interface.len();
    let (g1, r1) = strat_lts_interfaced(s1, cap)?;
    let (g2, r2) = strat_lts_interfaced(s2, cap)?;
    let depth = depth.unwrap_or_else(|| longest_loud(&g1).max(longest_loud(&g2)) + 1);
    let mut failures = failures_of(&g1, r1, depth);
    failures.extend(failures_of(&g2, r2, depth));
    for tree in candidate_trees(&failures) {
        let test = tree_test_state(&tree, k)?;
        let pass_1 = semantic_passes(s1, &test, cap)?;
        let pass_2 = semantic_passes(s2, &test, cap)?;
        if pass_1 != pass_2 {
            return Ok(Verdict::Distinguished {
                witness: tree,
                failing: if pass_1 { Side::Right } else { Side::Left },
            });
        }
    }
    Ok(Verdict::EquivalentAtDepth(depth))
}

/// One candidate tree with the pass results on both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeLine {
    pub tree: ATree,
    pub ccs_left: bool,
    pub ccs_right: bool,
    pub semantic_left: bool,
    pub semantic_right: bool,
}

impl TreeLine {
    pub fn ccs_distinguishes(&self) -> bool {
        self.ccs_left != self.ccs_right
    }
    pub fn semantic_distinguishes(&self) -> bool {
        self.semantic_left != self.semantic_right
    }
}

/// The full-abstraction report: both checkers run over one shared tree
/// pool, tree by tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractionReport {
    pub depth: usize,
    pub lines: Vec<TreeLine>,
    pub ccs: Verdict,
    pub semantic: Verdict,
    pub agree: bool,
}

impl fmt::Display for AbstractionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in &self.lines {
            writeln!(
                f,
                "tree {} : ccs {}/{} semantic {}/{} -> {}",
                line.tree,
                if line.ccs_left { "pass" } else { "fail" },
                if line.ccs_right { "pass" } else { "fail" },
                if line.semantic_left { "pass" } else { "fail" },
                if line.semantic_right { "pass" } else { "fail" },
                if line.ccs_distinguishes() == line.semantic_distinguishes() {
                    "agree"
                } else {
                    "disagree"
                }
            )?;
        }
        writeln!(f, "ccs: {}", self.ccs)?;
        writeln!(f, "semantic: {}", self.semantic)?;
        writeln!(f, "{}", if self.agree { "AGREE" } else { "DISAGREE" })
    }
}

/// Runs the process-side and semantic-side checkers over the same tree
/// pool (built from the process-side failures) and reports tree-by-tree
/// agreement.
pub fn full_abstraction_report(
    p: &Process,
    q: &Process,
    depth: Option<usize>,
    cap: usize,
) -> Result<AbstractionReport, EquivError> {
    if p.gamma != q.gamma {
        return Err(EquivError::Ccs(CcsError::GammaMismatch(p.gamma, q.gamma)));
    }
    let s1 = InterfacedStrategyState::of_process(p);
    let s2 = InterfacedStrategyState::of_process(q);
    let (gp, rp) = ccs_lts(p, cap)?;
    let (gq, rq) = ccs_lts(q, cap)?;
    let depth = depth.unwrap_or_else(|| longest_loud(&gp).max(longest_loud(&gq)) + 1);
    let mut failures = failures_of(&gp, rp, depth);
    failures.extend(failures_of(&gq, rq, depth));
    let mut lines = Vec::new();
    let mut ccs_verdict = None;
    let mut semantic_verdict = None;
    let mut agree = true;
    for tree in candidate_trees(&failures) {
        let test = atree_as_process(&tree, p.gamma)?;
        let test_state = tree_test_state(&tree, p.gamma)?;
        let line = TreeLine {
            ccs_left: passes_ccs(p, &test)?,
            ccs_right: passes_ccs(q, &test)?,
            semantic_left: semantic_passes(&s1, &test_state, cap)?,
            semantic_right: semantic_passes(&s2, &test_state, cap)?,
            tree: tree.clone(),
        };
        if line.ccs_distinguishes() && ccs_verdict.is_none() {
            ccs_verdict = Some(Verdict::Distinguished {
                witness: tree.clone(),
                failing: if line.ccs_left {
                    Side::Right
                } else {
                    Side::Left
                },
            });
        }
        if line.semantic_distinguishes() && semantic_verdict.is_none() {
            semantic_verdict = Some(Verdict::Distinguished {
                witness: tree.clone(),
                failing: if line.semantic_left {
                    Side::Right
                } else {
                    Side::Left
                },
            });
        }
        if line.ccs_distinguishes() != line.semantic_distinguishes() {
            agree = false;
        }
        lines.push(line);
    }
    Ok(AbstractionReport {
        depth,
        lines,
        ccs: ccs_verdict.unwrap_or(Verdict::EquivalentAtDepth(depth)),
        semantic: semantic_verdict.unwrap_or(Verdict::EquivalentAtDepth(depth)),
        agree,
    })
}

/// Drives an interfaced term state over `A`, for weak-bisimilarity checks
/// against the plain process semantics.
pub fn process_vs_term_state_weak_bisim(p: &Process, cap: usize) -> Result<bool, EquivError> {
    let (g1, r1) = ccs_lts(p, cap)?;
    let s = InterfacedTermState::of_process(p);
    let (g2, r2) = term_lts_interfaced(&s, cap)?;
    Ok(weak_bisim_check(&g1, &g2, r1, r2).is_some())
}

#[cfg(test)]
mod tests;
