//! Bounded Spoiler attractor: the rounds Spoiler needs to make Duplicator
//! stuck, computed backwards over a box of counter values.

use std::collections::VecDeque;

use crate::net::{build_product, Config, Ocn, ProductGraph};

const BLOCKED: u16 = u16::MAX;

/// Ranks of Spoiler wins over `[0, bound]^2` for a set of product nodes
/// closed under successors. Plays leaving the box count as Duplicator wins,
/// so every rank is a genuine upper bound on Spoiler's rounds to win.
#[derive(Debug, Clone)]
pub struct SpoilerAttractor {
    bound: u64,
    slot: Vec<Option<usize>>,
    rank: Vec<u32>,
    cap: u32,
}

impl SpoilerAttractor {
    /// `nodes[v]` selects the product nodes to rank; ranks above `cap` are dropped.
    pub fn compute(g: &ProductGraph, nodes: &[bool], bound: u64, cap: u32) -> SpoilerAttractor {
        let side = bound as usize + 1;
        let plane = side * side;
        let mut slot = vec![None; g.node_count()];
        let mut members = Vec::new();
        for v in 0..g.node_count() {
            if nodes[v] {
                slot[v] = Some(members.len());
                members.push(v);
            }
        }
        let width = members.iter().map(|&v| g.moves(v).len()).max().unwrap_or(0);
        let sp = g.spoiler();
        let mut count = vec![BLOCKED; members.len() * plane * width];
        let mut rank = vec![0u32; members.len() * plane];
        let mut queue = VecDeque::new();

        for (si, &v) in members.iter().enumerate() {
            for (mi, mv) in g.moves(v).iter().enumerate() {
                let d = sp.transition(mv.spoiler_rule).delta as i64;
                for n in 0..side as i64 {
                    let m = n + d;
                    if m < 0 || m > bound as i64 {
                        continue;
                    }
                    for n2 in 0..side as i64 {
                        let mut enabled = 0u16;
                        let mut escapes = false;
                        for &e in &mv.replies {
                            let m2 = n2 + g.edge(e).d_dup as i64;
                            if m2 < 0 {
                                continue;
                            }
                            if m2 > bound as i64 {
                                escapes = true;
                            }
                            enabled += 1;
                        }
                        let pos = si * plane + n as usize * side + n2 as usize;
                        if escapes {
                            continue;
                        }
                        count[pos * width + mi] = enabled;
                        if enabled == 0 && rank[pos] == 0 {
                            rank[pos] = 1;
                            queue.push_back(pos);
                        }
                    }
                }
            }
        }

        // incoming edges per node: (source slot, move index, d, d')
        let mut incoming: Vec<Vec<(usize, usize, i64, i64)>> = vec![Vec::new(); members.len()];
        for (si, &v) in members.iter().enumerate() {
            for (mi, mv) in g.moves(v).iter().enumerate() {
                for &e in &mv.replies {
                    let edge = g.edge(e);
                    if let Some(ti) = slot[edge.dst] {
                        incoming[ti].push((si, mi, edge.d as i64, edge.d_dup as i64));
                    }
                }
            }
        }

        while let Some(pos) = queue.pop_front() {
            let r = rank[pos];
            if r >= cap {
                continue;
            }
            let ti = pos / plane;
            let n = ((pos % plane) / side) as i64;
            let n2 = (pos % side) as i64;
            for &(si, mi, d, d2) in &incoming[ti] {
                let (pn, pn2) = (n - d, n2 - d2);
                if pn < 0 || pn2 < 0 || pn > bound as i64 || pn2 > bound as i64 {
                    continue;
                }
                let src = si * plane + pn as usize * side + pn2 as usize;
                let c = &mut count[src * width + mi];
                if *c == BLOCKED || *c == 0 {
                    continue;
                }
                *c -= 1;
                if *c == 0 && rank[src] == 0 {
                    rank[src] = r + 1;
                    queue.push_back(src);
                }
            }
        }

        SpoilerAttractor {
            bound,
            slot,
            rank,
            cap,
        }
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    /// Rounds Spoiler needs from the position, if within the cap and the box.
    pub fn rank(&self, node: usize, n: u64, n2: u64) -> Option<u32> {
        let si = self.slot.get(node).copied().flatten()?;
        if n > self.bound || n2 > self.bound {
            return None;
        }
        let side = self.bound as usize + 1;
        let r = self.rank[si * side * side + n as usize * side + n2 as usize];
        (r > 0 && r <= self.cap).then_some(r)
    }

    /// Whether Spoiler wins within `depth` rounds. Exact when
    /// `max(n, n') + depth <= bound` and `depth <= cap`.
    pub fn wins_within(&self, node: usize, n: u64, n2: u64, depth: u32) -> bool {
        self.rank(node, n, n2).is_some_and(|r| r <= depth)
    }
}

/// Whether Spoiler forces Duplicator to be stuck within `depth` rounds.
/// The nets must be normalised.
pub fn spoiler_bounded_win(
    spoiler: &Ocn,
    duplicator: &Ocn,
    position: (Config, Config),
    depth: u32,
) -> crate::Result<bool> {
    let g = build_product(spoiler, duplicator)?;
    let (left, right) = position;
    let node = g.node(left.state, right.state);
    let within = g.reachable_from(node);
    let bound = left.counter.max(right.counter) + depth as u64;
    let a = SpoilerAttractor::compute(&g, &within, bound, depth);
    Ok(a.wins_within(node, left.counter, right.counter, depth))
}
