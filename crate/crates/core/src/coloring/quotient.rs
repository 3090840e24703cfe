//! Finite quotient of the simulation game inside the belts and its greatest
//! fixpoint.

use std::collections::VecDeque;

use super::periodic::{PairColoring, PeriodicColoring};
use super::{Band, BeltSystem, Zone};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
struct Layout {
    band: Band,
    /// Highest stored level, `rect(j + k)`.
    top: i64,
    /// Per level: first `across` value and offset into the variable array.
    rows: Vec<(i64, i64, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cell {
    Win,
    Lose,
    Var(usize),
}

/// Largest `(j, k)`-ultimately-periodic simulation inside the belts.
///
/// Points beyond `rect(j)` are identified with their translates by
/// `k * slope`, so the relation is described by the finitely many points up
/// to `rect(j + k)`. Everything outside the belts is fixed by the trivial
/// zones. The result is contained in the simulation preorder.
#[derive(Debug, Clone)]
pub struct QuotientSolution {
    pub j: i64,
    pub k: i64,
    layouts: Vec<Option<Layout>>,
    points: Vec<(usize, i64, i64)>,
    value: Vec<bool>,
}

impl QuotientSolution {
    pub fn variable_count(&self) -> usize {
        self.value.len()
    }

    pub fn band(&self, node: usize) -> Option<&Band> {
        self.layouts.get(node)?.as_ref().map(|l| &l.band)
    }

    fn index(&self, node: usize, n: i64, n2: i64) -> Result<Cell> {
        let layout = self.layouts[node]
            .as_ref()
            .ok_or_else(|| Error::Internal(format!("no belt for product node {node}")))?;
        index_in(layout, self.k, node, n, n2)
    }

    /// Whether the relation holds at `(n, n')` for the product node.
    pub fn contains(&self, node: usize, n: i64, n2: i64) -> Result<bool> {
        Ok(match self.index(node, n, n2)? {
            Cell::Win => true,
            Cell::Lose => false,
            Cell::Var(i) => self.value[i],
        })
    }

    /// Every stored belt point with its product node and value.
    pub fn stored(&self) -> impl Iterator<Item = (usize, i64, i64, bool)> + '_ {
        self.points
            .iter()
            .zip(&self.value)
            .map(|(&(v, n, n2), &b)| (v, n, n2, b))
    }

    /// Splits the stored points into the initial, aperiodic and periodic blocks.
    pub fn to_coloring(&self, system: &BeltSystem) -> PeriodicColoring {
        let mut pairs = Vec::new();
        for (node, layout) in self.layouts.iter().enumerate() {
            let Some(layout) = layout else { continue };
            let band = layout.band;
            let mut pc = PairColoring {
                pair: band.belt.pair,
                slope: band.belt.slope,
                c: band.belt.c,
                bound: band.belt.bound,
                j: self.j as u64,
                k: self.k as u64,
                init: Vec::new(),
                aper: Vec::new(),
                per: Vec::new(),
            };
            for (level, &(lo, hi, offset)) in layout.rows.iter().enumerate() {
                let level = level as i64;
                for x in lo..=hi {
                    if !self.value[offset + (x - lo) as usize] {
                        continue;
                    }
                    let (n, n2) = band.point(level, x);
                    let p = (n as u64, n2 as u64);
                    if level <= band.base {
                        pc.init.push(p);
                    } else if level <= band.rect_level(self.j) {
                        pc.aper.push(p);
                    } else {
                        pc.per.push(p);
                    }
                }
            }
            let _ = node;
            pairs.push(pc);
        }
        PeriodicColoring {
            l0: (system.l0.0 as u64, system.l0.1 as u64),
            pairs,
        }
    }
}

fn index_in(layout: &Layout, k: i64, node: usize, n: i64, n2: i64) -> Result<Cell> {
    let band = &layout.band;
    match band.belt.zone(n, n2) {
        Zone::Above => return Ok(Cell::Win),
        Zone::Below => return Ok(Cell::Lose),
        Zone::Inside => {}
    }
    let (mut n, mut n2) = (n, n2);
    let level = band.level(n, n2);
    if level > layout.top {
        let period = k * band.step;
        let m = (level - layout.top + period - 1) / period;
        let (sx, sy) = band.shift();
        n -= m * k * sx;
        n2 -= m * k * sy;
    }
    let level = band.level(n, n2);
    let x = band.across(n, n2);
    match layout.rows.get(level as usize) {
        Some(&(lo, hi, offset)) if level >= 0 && lo <= x && x <= hi => {
            Ok(Cell::Var(offset + (x - lo) as usize))
        }
        _ => Err(Error::Internal(format!(
            "belt point ({n},{n2}) of node {node} falls outside the stored window"
        ))),
    }
}

/// Solves the quotient game for the given `j` and `k` (`k >= 1`).
pub fn solve_quotient(system: &BeltSystem, j: i64, k: i64) -> Result<QuotientSolution> {
    if k < 1 || j < 0 {
        return Err(Error::Internal(format!("invalid period parameters j={j}, k={k}")));
    }
    let g = &system.graph;
    let mut layouts = vec![None; g.node_count()];
    let mut points = Vec::new();
    for node in system.nodes() {
        let band = system.bands[node].expect("band for every belt");
        let top = band.rect_level(j + k);
        let mut rows = Vec::with_capacity(top as usize + 1);
        for level in 0..=top {
            let (lo, hi) = band.row(level);
            rows.push((lo, hi, points.len()));
            for x in lo..=hi {
                let (n, n2) = band.point(level, x);
                points.push((node, n, n2));
            }
        }
        layouts[node] = Some(Layout { band, top, rows });
    }

    let total = points.len();
    let mut count: Vec<u32> = Vec::new();
    let mut owner: Vec<u32> = Vec::new();
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut removed = vec![false; total];
    let mut queue = VecDeque::new();
    let mut targets = Vec::new();

    for (var, &(node, n, n2)) in points.iter().enumerate() {
        let layout = layouts[node].as_ref().expect("layout");
        let band = layout.band;
        let level = band.level(n, n2);
        let mut positions = vec![(n, n2)];
        // the first periodic rows also stand for their translates, whose
        // neighbours below fall into the periodic block instead of rect(j)
        if level > band.rect_level(j) && level <= band.rect_level(j) + 1 {
            let (sx, sy) = band.shift();
            positions.push((n + k * sx, n2 + k * sy));
        }
        'positions: for (pn, pn2) in positions {
            for mv in g.moves(node) {
                let d = g.spoiler().transition(mv.spoiler_rule).delta as i64;
                if pn + d < 0 {
                    continue;
                }
                targets.clear();
                let mut answered = false;
                for &e in &mv.replies {
                    let edge = g.edge(e);
                    let m2 = pn2 + edge.d_dup as i64;
                    if m2 < 0 {
                        continue;
                    }
                    let target = layouts[edge.dst].as_ref().ok_or_else(|| {
                        Error::Internal(format!("successor node {} has no belt", edge.dst))
                    })?;
                    match index_in(target, k, edge.dst, pn + d, m2)? {
                        Cell::Win => {
                            answered = true;
                            break;
                        }
                        Cell::Lose => {}
                        Cell::Var(t) => targets.push(t as u32),
                    }
                }
                if answered {
                    continue;
                }
                targets.sort_unstable();
                targets.dedup();
                if targets.is_empty() {
                    if !removed[var] {
                        removed[var] = true;
                        queue.push_back(var);
                    }
                    break 'positions;
                }
                let id = count.len() as u32;
                count.push(targets.len() as u32);
                owner.push(var as u32);
                edges.extend(targets.iter().map(|&t| (t, id)));
            }
        }
    }

    // reverse adjacency in compressed form
    let mut start = vec![0u32; total + 1];
    for &(t, _) in &edges {
        start[t as usize + 1] += 1;
    }
    for i in 0..total {
        start[i + 1] += start[i];
    }
    let mut fill = start.clone();
    let mut rev = vec![0u32; edges.len()];
    for &(t, m) in &edges {
        rev[fill[t as usize] as usize] = m;
        fill[t as usize] += 1;
    }
    drop(edges);

    while let Some(y) = queue.pop_front() {
        for &m in &rev[start[y] as usize..start[y + 1] as usize] {
            let c = &mut count[m as usize];
            *c -= 1;
            if *c == 0 {
                let x = owner[m as usize] as usize;
                if !removed[x] {
                    removed[x] = true;
                    queue.push_back(x);
                }
            }
        }
    }

    Ok(QuotientSolution {
        j,
        k,
        layouts,
        points,
        value: removed.into_iter().map(|r| !r).collect(),
    })
}
