//! One-counter nets, their configurations, normalisation and the product
//! control graph of a Spoiler/Duplicator pair.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::Vec2;

/// Fresh action carrying a delta-0 self-loop on every ordinary state.
pub const ELL: &str = "__ell";
/// Fresh Duplicator sink reached when no real reply exists.
pub const BOT: &str = "__bot";
/// Identifiers with this prefix are reserved for generated states and actions.
pub const RESERVED_PREFIX: &str = "__";

pub type StateId = usize;
pub type ActionId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub src: StateId,
    pub action: ActionId,
    pub delta: i8,
    pub dst: StateId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Player {
    Spoiler,
    Duplicator,
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::Spoiler => f.write_str("Spoiler"),
            Player::Duplicator => f.write_str("Duplicator"),
        }
    }
}

/// A configuration `q n` of a net.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Config {
    pub state: StateId,
    pub counter: u64,
}

impl Config {
    pub fn new(state: StateId, counter: u64) -> Self {
        Config { state, counter }
    }
}

/// A one-counter net: finite control with counter updates in {-1, 0, +1} and no zero test.
#[derive(Debug, Clone)]
pub struct Ocn {
    name: String,
    states: Vec<String>,
    actions: Vec<String>,
    transitions: Vec<Transition>,
    state_index: HashMap<String, StateId>,
    action_index: HashMap<String, ActionId>,
    out: Vec<Vec<usize>>,
    by_action: Vec<Vec<Vec<usize>>>,
}

impl PartialEq for Ocn {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.states == other.states
            && self.actions == other.actions
            && self.transitions == other.transitions
    }
}

impl Eq for Ocn {}

impl Ocn {
    /// Builds a net from user-facing identifiers. Reserved identifiers are rejected.
    pub fn new<S: AsRef<str>>(
        name: &str,
        states: &[S],
        actions: &[S],
        transitions: &[(S, S, i64, S)],
    ) -> Result<Ocn> {
        Self::build(name, states, actions, transitions, false)
    }

    /// Like [`Ocn::new`] but admits reserved identifiers; used for generated nets.
    pub fn new_internal<S: AsRef<str>>(
        name: &str,
        states: &[S],
        actions: &[S],
        transitions: &[(S, S, i64, S)],
    ) -> Result<Ocn> {
        Self::build(name, states, actions, transitions, true)
    }

    fn build<S: AsRef<str>>(
        name: &str,
        states: &[S],
        actions: &[S],
        transitions: &[(S, S, i64, S)],
        allow_reserved: bool,
    ) -> Result<Ocn> {
        let states: Vec<String> = states.iter().map(|s| s.as_ref().to_owned()).collect();
        let actions: Vec<String> = actions.iter().map(|s| s.as_ref().to_owned()).collect();
        let state_index = index_of(&states, allow_reserved)?;
        let action_index = index_of(&actions, allow_reserved)?;
        let mut ts = Vec::with_capacity(transitions.len());
        for (src, act, delta, dst) in transitions {
            let src = *state_index
                .get(src.as_ref())
                .ok_or_else(|| Error::UnknownState(src.as_ref().to_owned()))?;
            let dst = *state_index
                .get(dst.as_ref())
                .ok_or_else(|| Error::UnknownState(dst.as_ref().to_owned()))?;
            let action = *action_index
                .get(act.as_ref())
                .ok_or_else(|| Error::UnknownAction(act.as_ref().to_owned()))?;
            if !(-1..=1).contains(delta) {
                return Err(Error::InvalidDelta(*delta));
            }
            ts.push(Transition {
                src,
                action,
                delta: *delta as i8,
                dst,
            });
        }
        Ok(Self::from_parts(name.to_owned(), states, actions, ts))
    }

    fn from_parts(
        name: String,
        states: Vec<String>,
        actions: Vec<String>,
        transitions: Vec<Transition>,
    ) -> Ocn {
        let mut seen = BTreeSet::new();
        let transitions: Vec<Transition> =
            transitions.into_iter().filter(|t| seen.insert(*t)).collect();
        let state_index = states.iter().cloned().zip(0..).collect();
        let action_index = actions.iter().cloned().zip(0..).collect();
        let mut out = vec![Vec::new(); states.len()];
        let mut by_action = vec![vec![Vec::new(); actions.len()]; states.len()];
        for (i, t) in transitions.iter().enumerate() {
            out[t.src].push(i);
            by_action[t.src][t.action].push(i);
        }
        Ocn {
            name,
            states,
            actions,
            transitions,
            state_index,
            action_index,
            out,
            by_action,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn transition(&self, i: usize) -> Transition {
        self.transitions[i]
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.state_index.get(name).copied()
    }

    pub fn action_id(&self, name: &str) -> Option<ActionId> {
        self.action_index.get(name).copied()
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q]
    }

    pub fn action_name(&self, a: ActionId) -> &str {
        &self.actions[a]
    }

    /// Indices of transitions leaving `q`.
    pub fn outgoing(&self, q: StateId) -> &[usize] {
        &self.out[q]
    }

    /// Indices of `a`-transitions leaving `q`.
    pub fn outgoing_on(&self, q: StateId, a: ActionId) -> &[usize] {
        &self.by_action[q][a]
    }

    /// All enabled strong steps from `c`.
    pub fn steps(&self, c: Config) -> Result<Vec<(ActionId, Config)>> {
        if c.state >= self.states.len() {
            return Err(Error::UnknownState(format!("#{}", c.state)));
        }
        Ok(self.out[c.state]
            .iter()
            .map(|&i| self.transitions[i])
            .filter_map(|t| {
                let m = c.counter as i64 + t.delta as i64;
                (m >= 0).then(|| (t.action, Config::new(t.dst, m as u64)))
            })
            .collect())
    }

    /// Returns a copy whose action list is `actions` (a superset of the current one).
    pub fn with_alphabet(&self, actions: &[String]) -> Result<Ocn> {
        let index: HashMap<&str, usize> =
            actions.iter().enumerate().map(|(i, a)| (a.as_str(), i)).collect();
        let mut ts = Vec::with_capacity(self.transitions.len());
        for t in &self.transitions {
            let name = &self.actions[t.action];
            let action = *index
                .get(name.as_str())
                .ok_or_else(|| Error::UnknownAction(name.clone()))?;
            ts.push(Transition { action, ..*t });
        }
        Ok(Ocn::from_parts(
            self.name.clone(),
            self.states.clone(),
            actions.to_vec(),
            ts,
        ))
    }

    /// Appends states, actions and transitions; used by the net constructions.
    pub(crate) fn extended(
        &self,
        name: &str,
        extra_states: &[String],
        extra_actions: &[String],
        extra: impl IntoIterator<Item = Transition>,
    ) -> Ocn {
        let mut states = self.states.clone();
        states.extend(extra_states.iter().cloned());
        let mut actions = self.actions.clone();
        actions.extend(extra_actions.iter().cloned());
        let mut ts = self.transitions.clone();
        ts.extend(extra);
        Ocn::from_parts(name.to_owned(), states, actions, ts)
    }
}

fn index_of(ids: &[String], allow_reserved: bool) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(ids.len());
    for (i, id) in ids.iter().enumerate() {
        if !allow_reserved && id.starts_with(RESERVED_PREFIX) {
            return Err(Error::ReservedIdentifier(id.clone()));
        }
        if index.insert(id.clone(), i).is_some() {
            return Err(Error::DuplicateIdentifier(id.clone()));
        }
    }
    Ok(index)
}

/// Shared alphabet of both nets (Spoiler's order first), extended by the `ell` action.
fn joint_alphabet(a: &Ocn, b: &Ocn) -> Vec<String> {
    let mut out: Vec<String> = a.actions().to_vec();
    for x in b.actions() {
        if !out.contains(x) {
            out.push(x.clone());
        }
    }
    if !out.iter().any(|x| x == ELL) {
        out.push(ELL.to_owned());
    }
    out
}

/// Brings a Spoiler/Duplicator pair into normal form.
///
/// Both nets gain a delta-0 `ell` loop on every ordinary state, so Spoiler is
/// never stuck. Duplicator gains the sink `bot`, which decrements on every
/// action, and every missing `(q', a)` reply becomes `(q', a, -1, bot)`.
/// Both nets end up over the union of the two alphabets. Applying the
/// construction to its own output changes nothing.
pub fn normalize_pair(spoiler: &Ocn, duplicator: &Ocn) -> Result<(Ocn, Ocn)> {
    let alphabet = joint_alphabet(spoiler, duplicator);
    let spoiler = spoiler.with_alphabet(&alphabet)?;
    let duplicator = duplicator.with_alphabet(&alphabet)?;
    let ell = alphabet.iter().position(|x| x == ELL).expect("ell present");

    let loops = (0..spoiler.state_count()).map(|q| Transition {
        src: q,
        action: ell,
        delta: 0,
        dst: q,
    });
    let spoiler = spoiler.extended(spoiler.name(), &[], &[], loops.collect::<Vec<_>>());

    let mut extra_states = Vec::new();
    let bot = match duplicator.state_id(BOT) {
        Some(b) => b,
        None => {
            extra_states.push(BOT.to_owned());
            duplicator.state_count()
        }
    };
    let mut extra = Vec::new();
    for q in 0..duplicator.state_count() {
        if q == bot {
            continue;
        }
        extra.push(Transition {
            src: q,
            action: ell,
            delta: 0,
            dst: q,
        });
        for a in 0..alphabet.len() {
            if a != ell && duplicator.outgoing_on(q, a).is_empty() {
                extra.push(Transition {
                    src: q,
                    action: a,
                    delta: -1,
                    dst: bot,
                });
            }
        }
    }
    for a in 0..alphabet.len() {
        extra.push(Transition {
            src: bot,
            action: a,
            delta: -1,
            dst: bot,
        });
    }
    let duplicator = duplicator.extended(duplicator.name(), &extra_states, &[], extra);
    Ok((spoiler, duplicator))
}

/// Checks both normal-form conditions.
pub fn is_normalized(spoiler: &Ocn, duplicator: &Ocn) -> bool {
    let spoiler_ok = (0..spoiler.state_count()).all(|q| {
        spoiler
            .outgoing(q)
            .iter()
            .any(|&i| spoiler.transition(i).delta >= 0)
    });
    let complete = (0..duplicator.state_count()).all(|q| {
        (0..duplicator.actions().len()).all(|a| !duplicator.outgoing_on(q, a).is_empty())
    });
    spoiler_ok && complete && spoiler.actions() == duplicator.actions()
}

/// An edge `(p,p') --a,d,d'--> (q,q')` of the product control graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProductEdge {
    pub src: usize,
    pub action: ActionId,
    pub d: i8,
    pub d_dup: i8,
    pub dst: usize,
    pub spoiler_rule: usize,
    pub dup_rule: usize,
}

impl ProductEdge {
    pub fn effect(&self) -> Vec2 {
        Vec2::new(self.d as i64, self.d_dup as i64)
    }
}

/// A Spoiler transition rule available at a product node, with the product
/// edges of all same-action Duplicator replies.
#[derive(Debug, Clone)]
pub struct RuleMove {
    pub spoiler_rule: usize,
    pub replies: Vec<usize>,
}

/// The synchronised control graph of a Spoiler/Duplicator pair.
#[derive(Debug, Clone)]
pub struct ProductGraph {
    spoiler: Ocn,
    duplicator: Ocn,
    edges: Vec<ProductEdge>,
    out: Vec<Vec<usize>>,
    moves: Vec<Vec<RuleMove>>,
}

/// Builds the product graph. Both nets must share one alphabet.
pub fn build_product(spoiler: &Ocn, duplicator: &Ocn) -> Result<ProductGraph> {
    let a: BTreeSet<&String> = spoiler.actions().iter().collect();
    let b: BTreeSet<&String> = duplicator.actions().iter().collect();
    if a != b {
        let diff: Vec<&str> = a.symmetric_difference(&b).map(|s| s.as_str()).collect();
        return Err(Error::AlphabetMismatch(diff.join(", ")));
    }
    let duplicator = duplicator.with_alphabet(spoiler.actions())?;
    let width = duplicator.state_count();
    let nodes = spoiler.state_count() * width;
    let mut edges = Vec::new();
    let mut out = vec![Vec::new(); nodes];
    let mut moves = vec![Vec::new(); nodes];
    for p in 0..spoiler.state_count() {
        for p2 in 0..width {
            let src = p * width + p2;
            for &si in spoiler.outgoing(p) {
                let t = spoiler.transition(si);
                let mut replies = Vec::new();
                for &di in duplicator.outgoing_on(p2, t.action) {
                    let u = duplicator.transition(di);
                    let e = ProductEdge {
                        src,
                        action: t.action,
                        d: t.delta,
                        d_dup: u.delta,
                        dst: t.dst * width + u.dst,
                        spoiler_rule: si,
                        dup_rule: di,
                    };
                    replies.push(edges.len());
                    out[src].push(edges.len());
                    edges.push(e);
                }
                moves[src].push(RuleMove {
                    spoiler_rule: si,
                    replies,
                });
            }
        }
    }
    Ok(ProductGraph {
        spoiler: spoiler.clone(),
        duplicator,
        edges,
        out,
        moves,
    })
}

impl ProductGraph {
    pub fn spoiler(&self) -> &Ocn {
        &self.spoiler
    }

    pub fn duplicator(&self) -> &Ocn {
        &self.duplicator
    }

    /// `K = |Q x Q'|`
    pub fn node_count(&self) -> usize {
        self.out.len()
    }

    pub fn node(&self, q: StateId, q_dup: StateId) -> usize {
        q * self.duplicator.state_count() + q_dup
    }

    pub fn node_pair(&self, node: usize) -> (StateId, StateId) {
        let w = self.duplicator.state_count();
        (node / w, node % w)
    }

    pub fn node_label(&self, node: usize) -> String {
        let (q, q2) = self.node_pair(node);
        format!(
            "({},{})",
            self.spoiler.state_name(q),
            self.duplicator.state_name(q2)
        )
    }

    pub fn edges(&self) -> &[ProductEdge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &ProductEdge {
        &self.edges[i]
    }

    pub fn out_edges(&self, node: usize) -> &[usize] {
        &self.out[node]
    }

    pub fn moves(&self, node: usize) -> &[RuleMove] {
        &self.moves[node]
    }

    /// Nodes reachable from `start` (including it).
    pub fn reachable_from(&self, start: usize) -> Vec<bool> {
        self.reachable_from_all(std::iter::once(start))
    }

    pub fn reachable_from_all(&self, starts: impl IntoIterator<Item = usize>) -> Vec<bool> {
        let mut seen = vec![false; self.node_count()];
        let mut stack: Vec<usize> = starts.into_iter().collect();
        for &s in &stack {
            seen[s] = true;
        }
        while let Some(v) = stack.pop() {
            for &e in &self.out[v] {
                let w = self.edges[e].dst;
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }
}

/// One step of a product path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathStep {
    pub edge: usize,
    pub dst: usize,
    pub effect: Vec2,
}

/// A path in the product graph with its cumulative effect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductPath {
    start: usize,
    steps: Vec<PathStep>,
    effect: Vec2,
}

impl ProductPath {
    pub fn empty(start: usize) -> Self {
        ProductPath {
            start,
            steps: Vec::new(),
            effect: Vec2::ZERO,
        }
    }

    /// Builds a path from edge indices, checking that consecutive edges meet.
    pub fn from_edges(g: &ProductGraph, start: usize, edges: &[usize]) -> Result<Self> {
        let mut p = ProductPath::empty(start);
        for &e in edges {
            let edge = g.edge(e);
            if edge.src != p.end() {
                return Err(Error::Internal(format!(
                    "edge {e} does not start at node {}",
                    p.end()
                )));
            }
            p.push(PathStep {
                edge: e,
                dst: edge.dst,
                effect: edge.effect(),
            });
        }
        Ok(p)
    }

    pub fn push(&mut self, step: PathStep) {
        self.effect = self.effect + step.effect;
        self.steps.push(step);
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn end(&self) -> usize {
        self.steps.last().map_or(self.start, |s| s.dst)
    }

    pub fn steps(&self) -> &[PathStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn effect(&self) -> Vec2 {
        self.effect
    }

    /// Node sequence, starting node first.
    pub fn nodes(&self) -> Vec<usize> {
        std::iter::once(self.start)
            .chain(self.steps.iter().map(|s| s.dst))
            .collect()
    }

    /// Concatenation; `other` must start where `self` ends.
    pub fn concat(&self, other: &ProductPath) -> ProductPath {
        assert_eq!(self.end(), other.start, "paths do not meet");
        let mut p = self.clone();
        for &s in &other.steps {
            p.push(s);
        }
        p
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LassoSplit {
    pub prefix: ProductPath,
    pub cycle: ProductPath,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NotALasso;

/// Splits a lasso at the first occurrence of its final node.
pub fn lasso_split(path: &ProductPath) -> std::result::Result<LassoSplit, NotALasso> {
    let nodes = path.nodes();
    let k = nodes.len() - 1;
    if k == 0 {
        return Err(NotALasso);
    }
    // strict prefixes must be acyclic
    let mut seen = BTreeSet::new();
    for &v in &nodes[..k] {
        if !seen.insert(v) {
            return Err(NotALasso);
        }
    }
    let i = nodes[..k]
        .iter()
        .position(|&v| v == nodes[k])
        .ok_or(NotALasso)?;
    let mut prefix = ProductPath::empty(path.start);
    for &s in &path.steps[..i] {
        prefix.push(s);
    }
    let mut cycle = ProductPath::empty(nodes[i]);
    for &s in &path.steps[i..] {
        cycle.push(s);
    }
    Ok(LassoSplit { prefix, cycle })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphParameters {
    /// Size of the largest strongly connected component.
    pub scc: usize,
    /// Upper bound on the length of the longest acyclic path.
    pub acyc_bound: usize,
}

/// Strongly connected components of the product graph restricted to `within`.
/// Components are returned in reverse topological order.
pub fn strongly_connected_components(g: &ProductGraph, within: &[bool]) -> Vec<Vec<usize>> {
    let n = g.node_count();
    let succ = |v: usize| {
        g.out_edges(v)
            .iter()
            .map(move |&e| g.edge(e).dst)
            .filter(|&w| within[w])
    };
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut next = 0;
    for root in (0..n).filter(|&v| within[v]) {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, Vec<usize>, usize)> = Vec::new();
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        call.push((root, succ(root).collect(), 0));
        while let Some((v, ws, pos)) = call.last_mut() {
            let v = *v;
            if *pos < ws.len() {
                let w = ws[*pos];
                *pos += 1;
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, succ(w).collect(), 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some((parent, _, _)) = call.last() {
                    low[*parent] = low[*parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

/// `scc` and an upper bound on `acyc` for the whole graph.
pub fn graph_parameters(g: &ProductGraph) -> GraphParameters {
    graph_parameters_within(g, &vec![true; g.node_count()])
}

/// As [`graph_parameters`], restricted to the nodes flagged in `within`.
///
/// The acyclic bound is the heaviest path through the condensation DAG where
/// each component weighs its node count, minus one.
pub fn graph_parameters_within(g: &ProductGraph, within: &[bool]) -> GraphParameters {
    let comps = strongly_connected_components(g, within);
    if comps.is_empty() {
        return GraphParameters {
            scc: 0,
            acyc_bound: 0,
        };
    }
    let mut comp_of = vec![usize::MAX; g.node_count()];
    for (i, c) in comps.iter().enumerate() {
        for &v in c {
            comp_of[v] = i;
        }
    }
    // reverse topological order: successors of component i have smaller index
    let mut best = vec![0usize; comps.len()];
    for (i, c) in comps.iter().enumerate() {
        let mut tail = 0;
        for &v in c {
            for &e in g.out_edges(v) {
                let w = g.edge(e).dst;
                if within[w] && comp_of[w] != i {
                    tail = tail.max(best[comp_of[w]]);
                }
            }
        }
        best[i] = c.len() + tail;
    }
    GraphParameters {
        scc: comps.iter().map(Vec::len).max().unwrap_or(0),
        acyc_bound: best.iter().copied().max().unwrap_or(1) - 1,
    }
}
