//! The symbolic game on the product control graph that locates belt
//! directions, plus the derived belt constants.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::geometry::{self, is_behind, Slope, Vec2};
use crate::net::{
    graph_parameters_within, strongly_connected_components, GraphParameters, Player, ProductGraph,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseVerdict {
    DuplicatorWinsNow,
    SpoilerWinsNow,
    Continue(Slope),
}

/// Evaluates the cycle effect of a completed lasso against the phase slope.
pub fn evaluate_lasso(cycle_effect: Vec2, slope: Slope) -> PhaseVerdict {
    if !is_behind(cycle_effect, slope) {
        PhaseVerdict::DuplicatorWinsNow
    } else {
        match Slope::from_vec(cycle_effect) {
            Some(s) => PhaseVerdict::Continue(s),
            None => PhaseVerdict::SpoilerWinsNow,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlopeGameResult {
    pub winner: Player,
    /// Phases along the deepest branch of the winning strategy found; the
    /// first winning choice is kept, so this bounds the optimum from above.
    pub segment_depth: usize,
}

impl SlopeGameResult {
    fn new(winner: Player, segment_depth: usize) -> Self {
        SlopeGameResult {
            winner,
            segment_depth,
        }
    }
}

/// In-phase position: current node plus every visited node with the effect
/// accumulated since that visit.
type PhaseKey = (Slope, u32, Vec<(u32, i32, i32)>);

/// Memoised exhaustive solver; one instance per product graph.
pub struct SlopeGameSolver<'g> {
    g: &'g ProductGraph,
    phases: HashMap<(usize, Slope), (SlopeGameResult, usize)>,
    positions: HashMap<PhaseKey, SlopeGameResult>,
    max_chain: usize,
}

impl<'g> SlopeGameSolver<'g> {
    pub fn new(g: &'g ProductGraph) -> Self {
        SlopeGameSolver {
            g,
            phases: HashMap::new(),
            positions: HashMap::new(),
            max_chain: 0,
        }
    }

    pub fn graph(&self) -> &ProductGraph {
        self.g
    }

    /// Longest chain of phases seen on any explored branch so far.
    pub fn max_phase_chain(&self) -> usize {
        self.max_chain
    }

    /// Winner and segment depth of the game from `(node, slope)`.
    pub fn solve(&mut self, node: usize, slope: Slope) -> Result<SlopeGameResult> {
        Ok(self.phase(node, slope.canonical())?.0)
    }

    /// Returns the result and the length of the longest phase chain below it.
    fn phase(&mut self, node: usize, slope: Slope) -> Result<(SlopeGameResult, usize)> {
        if let Some(&r) = self.phases.get(&(node, slope)) {
            return Ok(r);
        }
        let mut chain = 1;
        let visited = vec![(node as u32, 0, 0)];
        let result = self.spoiler_turn(slope, node, visited, &mut chain)?;
        self.max_chain = self.max_chain.max(chain);
        self.phases.insert((node, slope), (result, chain));
        Ok((result, chain))
    }

    fn spoiler_turn(
        &mut self,
        slope: Slope,
        node: usize,
        visited: Vec<(u32, i32, i32)>,
        chain: &mut usize,
    ) -> Result<SlopeGameResult> {
        let mut sorted = visited.clone();
        sorted.sort_unstable();
        let key = (slope, node as u32, sorted);
        if let Some(&r) = self.positions.get(&key) {
            return Ok(r);
        }
        let g = self.g;
        let mut worst_duplicator = 0;
        let mut result = None;
        for mv in g.moves(node) {
            if mv.replies.is_empty() {
                return Err(Error::Internal(format!(
                    "no Duplicator reply at {} for rule {}",
                    g.node_label(node),
                    mv.spoiler_rule
                )));
            }
            // replies closing a lasso are cheap, try them first
            let mut replies = mv.replies.clone();
            replies.sort_by_key(|&e| !visited.iter().any(|v| v.0 as usize == g.edge(e).dst));
            let mut duplicator_wins = None;
            let mut worst_spoiler = 0;
            for e in replies {
                let edge = g.edge(e);
                let (dx, dy) = (edge.d as i32, edge.d_dup as i32);
                let dst = edge.dst as u32;
                let r = if let Some(&(_, rx, ry)) = visited.iter().find(|v| v.0 == dst) {
                    let effect = Vec2::new((rx + dx) as i64, (ry + dy) as i64);
                    match evaluate_lasso(effect, slope) {
                        PhaseVerdict::DuplicatorWinsNow => {
                            SlopeGameResult::new(Player::Duplicator, 1)
                        }
                        PhaseVerdict::SpoilerWinsNow => SlopeGameResult::new(Player::Spoiler, 1),
                        PhaseVerdict::Continue(next) => {
                            let (r, sub) = self.phase(edge.dst, next.canonical())?;
                            *chain = (*chain).max(sub + 1);
                            SlopeGameResult::new(r.winner, r.segment_depth + 1)
                        }
                    }
                } else {
                    let mut next: Vec<(u32, i32, i32)> = visited
                        .iter()
                        .map(|&(v, x, y)| (v, x + dx, y + dy))
                        .collect();
                    next.push((dst, 0, 0));
                    self.spoiler_turn(slope, edge.dst, next, chain)?
                };
                match r.winner {
                    Player::Duplicator => {
                        duplicator_wins = Some(r.segment_depth);
                        break;
                    }
                    Player::Spoiler => worst_spoiler = worst_spoiler.max(r.segment_depth),
                }
            }
            match duplicator_wins {
                Some(d) => worst_duplicator = worst_duplicator.max(d),
                None => {
                    result = Some(SlopeGameResult::new(Player::Spoiler, worst_spoiler));
                    break;
                }
            }
        }
        // a stuck Spoiler loses at once
        let result =
            result.unwrap_or_else(|| SlopeGameResult::new(Player::Duplicator, worst_duplicator.max(1)));
        self.positions.insert(key, result);
        Ok(result)
    }
}

/// Convenience wrapper around a fresh [`SlopeGameSolver`].
pub fn solve_slope_game(g: &ProductGraph, node: usize, slope: Slope) -> Result<SlopeGameResult> {
    SlopeGameSolver::new(g).solve(node, slope)
}

/// Work bound for the exact closed-walk enumeration; larger components fall
/// back to all directions of bounded height.
const WALK_BUDGET: usize = 20_000_000;

/// Non-zero effects of closed walks no longer than their strongly connected
/// component, together with their opposites.
///
/// Returns `None` when a component is too large to enumerate within budget.
pub fn cycle_effect_candidates(g: &ProductGraph) -> Option<BTreeSet<Vec2>> {
    cycle_effects_within(g, &vec![true; g.node_count()])
}

pub fn cycle_effects_within(g: &ProductGraph, within: &[bool]) -> Option<BTreeSet<Vec2>> {
    let comps = strongly_connected_components(g, within);
    let mut out = BTreeSet::new();
    let mut comp_of = vec![usize::MAX; g.node_count()];
    for (ci, comp) in comps.iter().enumerate() {
        for &v in comp {
            comp_of[v] = ci;
        }
    }
    for (ci, comp) in comps.iter().enumerate() {
        let s = comp.len();
        let side = 2 * s + 1;
        if s.pow(3).saturating_mul(side * side) > WALK_BUDGET {
            return None;
        }
        let local: HashMap<usize, usize> = comp.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges: Vec<(usize, usize, i64, i64)> = comp
            .iter()
            .flat_map(|&v| g.out_edges(v).iter().map(move |&e| (v, e)))
            .filter(|&(_, e)| comp_of[g.edge(e).dst] == ci)
            .map(|(v, e)| {
                let edge = g.edge(e);
                (local[&v], local[&edge.dst], edge.d as i64, edge.d_dup as i64)
            })
            .collect();
        let cell = |i: usize, x: i64, y: i64| {
            (i * side + (x + s as i64) as usize) * side + (y + s as i64) as usize
        };
        for anchor in 0..s {
            let mut cur = vec![false; s * side * side];
            cur[cell(anchor, 0, 0)] = true;
            for _ in 0..s {
                let mut next = vec![false; s * side * side];
                for &(a, b, dx, dy) in &edges {
                    for x in -(s as i64)..=s as i64 {
                        for y in -(s as i64)..=s as i64 {
                            if !cur[cell(a, x, y)] {
                                continue;
                            }
                            let (nx, ny) = (x + dx, y + dy);
                            if nx.abs() <= s as i64 && ny.abs() <= s as i64 {
                                next[cell(b, nx, ny)] = true;
                            }
                        }
                    }
                }
                for x in -(s as i64)..=s as i64 {
                    for y in -(s as i64)..=s as i64 {
                        if next[cell(anchor, x, y)] && (x, y) != (0, 0) {
                            out.insert(Vec2::new(x, y));
                            out.insert(Vec2::new(-x, -y));
                        }
                    }
                }
                cur = next;
            }
        }
    }
    Some(out)
}

/// Boundary slope of one pair together with the segment depths of the
/// optimal strategies just below and just above it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Boundary {
    pub slope: Slope,
    /// Spoiler's depth on slopes slightly less steep; absent for `(1,0)`.
    pub depth_below: Option<usize>,
    /// Duplicator's depth on slopes slightly steeper; absent for `(0,1)`.
    pub depth_above: Option<usize>,
}

/// Candidate representatives for the pairs reachable from `within`.
pub fn representatives_within(g: &ProductGraph, within: &[bool]) -> Vec<Slope> {
    match cycle_effects_within(g, within) {
        Some(v) => geometry::interval_representatives(&v),
        None => {
            let params = graph_parameters_within(g, within);
            geometry::with_mediants(&geometry::farey_directions(params.scc as i64))
        }
    }
}

/// Locates the boundary slope of `node` among `reps`, which must be sorted
/// by steepness with rays at even positions.
pub fn boundary_among(
    solver: &mut SlopeGameSolver<'_>,
    node: usize,
    reps: &[Slope],
) -> Result<Boundary> {
    let mut cache: HashMap<usize, SlopeGameResult> = HashMap::new();
    let mut at = |i: usize, solver: &mut SlopeGameSolver<'_>| -> Result<SlopeGameResult> {
        if let Some(&r) = cache.get(&i) {
            return Ok(r);
        }
        let r = solver.solve(node, reps[i])?;
        cache.insert(i, r);
        Ok(r)
    };
    // first representative won by Duplicator; the winner is monotone in steepness
    let first = if reps.len() <= 16 {
        let mut f = reps.len();
        for i in 0..reps.len() {
            if at(i, solver)?.winner == Player::Duplicator {
                f = i;
                break;
            }
        }
        f
    } else {
        let (mut lo, mut hi) = (0, reps.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if at(mid, solver)?.winner == Player::Duplicator {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        lo
    };
    let idx = if first == reps.len() {
        reps.len() - 1
    } else if first % 2 == 0 {
        first
    } else {
        first - 1
    };
    let depth_below = if idx > 0 {
        Some(at(idx - 1, solver)?.segment_depth)
    } else {
        None
    };
    let depth_above = if idx + 1 < reps.len() {
        Some(at(idx + 1, solver)?.segment_depth)
    } else {
        None
    };
    Ok(Boundary {
        slope: reps[idx],
        depth_below,
        depth_above,
    })
}

/// Boundary slope of `node`: Spoiler wins every strictly less steep slope and
/// Duplicator every strictly steeper one.
pub fn boundary_slope(g: &ProductGraph, node: usize) -> Result<Slope> {
    let within = g.reachable_from(node);
    let reps = representatives_within(g, &within);
    let mut solver = SlopeGameSolver::new(g);
    Ok(boundary_among(&mut solver, node, &reps)?.slope)
}

/// `min(K (K+1)^2, (scc+1)^2 scc + acyc)` for the given size parameters.
pub fn belt_constant_from(k: usize, params: GraphParameters) -> u64 {
    let k = k as u64;
    let scc = params.scc as u64;
    let by_phases = k * (k + 1) * (k + 1);
    let by_components = (scc + 1) * (scc + 1) * scc + params.acyc_bound as u64;
    by_phases.min(by_components)
}

/// Belt constant of the whole product graph.
pub fn belt_constant(g: &ProductGraph) -> u64 {
    belt_constant_within(g, &vec![true; g.node_count()])
}

/// Belt constant of the subgraph flagged in `within`; `K` counts its nodes.
pub fn belt_constant_within(g: &ProductGraph, within: &[bool]) -> u64 {
    let k = within.iter().filter(|&&b| b).count();
    belt_constant_from(k, graph_parameters_within(g, within))
}
