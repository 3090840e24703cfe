//! Strong simulation: belts, the periodic colouring inside them, and the
//! decision procedure built on top.

mod attractor;
mod cross_section;
mod decide;
mod export;
mod periodic;
mod quotient;
mod verify;

pub use attractor::{spoiler_bounded_win, SpoilerAttractor};
pub use cross_section::{cross_section, find_equal_cross_sections, CrossSection, EqualSections};
pub use decide::{decide_strong, Certified, Stage, StrongOptions, StrongSolver, Verdict};
pub use export::{write_coloring_json, ColoringDocument, PairDocument};
pub use periodic::{Expanded, PairColoring, PeriodicColoring};
pub use quotient::{solve_quotient, Cell, QuotientSolution};
pub use verify::{verify_coloring, VerificationReport};

use std::collections::HashSet;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Slope;
use crate::net::{
    build_product, graph_parameters_within, normalize_pair, Ocn, ProductGraph, StateId,
};
use crate::slope_game::{
    belt_constant_within, boundary_among, representatives_within, SlopeGameSolver,
};

/// Belt of one state pair: the strip of width `c` around `slope`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Belt {
    pub pair: (StateId, StateId),
    pub slope: Slope,
    /// Width used by the engine.
    pub c: u64,
    /// The general constant `min(K (K+1)^2, (scc+1)^2 scc + acyc)`.
    pub bound: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Zone {
    Above,
    Inside,
    Below,
}

impl Belt {
    /// `rho * n' - rho' * n` against the half width `c (rho + rho')`.
    pub fn zone(&self, n: i64, n2: i64) -> Zone {
        let s = self.slope;
        let d = s.rho() * n2 - s.rho_prime() * n;
        let w = self.half_width();
        if d > w {
            Zone::Above
        } else if d < -w {
            Zone::Below
        } else {
            Zone::Inside
        }
    }

    pub fn zone_big(&self, n: &BigInt, n2: &BigInt) -> Zone {
        let s = self.slope;
        let d = BigInt::from(s.rho()) * n2 - BigInt::from(s.rho_prime()) * n;
        let w = BigInt::from(self.half_width());
        if d > w {
            Zone::Above
        } else if d < -w {
            Zone::Below
        } else {
            Zone::Inside
        }
    }

    pub fn half_width(&self) -> i64 {
        self.c as i64 * (self.slope.rho() + self.slope.rho_prime())
    }

    pub fn is_vertical(&self) -> bool {
        self.slope.is_vertical()
    }
}

/// Border of the initial rectangle through which a belt leaves it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    /// The belt passes above the corner; rows are indexed by `n'`.
    Top,
    /// The belt passes below the corner; rows are indexed by `n`.
    Right,
}

/// Row structure of a belt relative to the initial rectangle.
///
/// A row is the set of belt points at one level. Beyond the rectangle every
/// row is a translate of the previous `step` rows by the slope, and
/// `rect(j)` holds exactly the levels up to `base + j * step`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Band {
    pub belt: Belt,
    pub exit: Exit,
    pub base: i64,
    pub step: i64,
}

impl Band {
    pub fn new(belt: Belt, l0: (i64, i64)) -> Result<Band> {
        let exit = match belt.zone(l0.0, l0.1) {
            Zone::Below => Exit::Top,
            Zone::Above => Exit::Right,
            Zone::Inside => {
                return Err(Error::Internal(format!(
                    "corner {:?} lies in the belt of {:?}",
                    l0, belt.pair
                )))
            }
        };
        let s = belt.slope;
        Ok(match exit {
            Exit::Top => Band {
                belt,
                exit,
                base: l0.1,
                step: s.rho_prime(),
            },
            Exit::Right => Band {
                belt,
                exit,
                base: l0.0,
                step: s.rho(),
            },
        })
    }

    pub fn level(&self, n: i64, n2: i64) -> i64 {
        match self.exit {
            Exit::Top => n2,
            Exit::Right => n,
        }
    }

    pub fn across(&self, n: i64, n2: i64) -> i64 {
        match self.exit {
            Exit::Top => n,
            Exit::Right => n2,
        }
    }

    pub fn point(&self, level: i64, across: i64) -> (i64, i64) {
        match self.exit {
            Exit::Top => (across, level),
            Exit::Right => (level, across),
        }
    }

    /// Inclusive range of `across` values of belt points at `level`; may be empty.
    pub fn row(&self, level: i64) -> (i64, i64) {
        let s = self.belt.slope;
        let w = self.belt.half_width();
        let (num, den) = match self.exit {
            Exit::Top => (s.rho() * level, s.rho_prime()),
            Exit::Right => (s.rho_prime() * level, s.rho()),
        };
        let lo = (num - w).div_euclid(den) + i64::from((num - w).rem_euclid(den) != 0);
        let hi = (num + w).div_euclid(den);
        (lo.max(0), hi)
    }

    /// Highest level inside `rect(j)`.
    pub fn rect_level(&self, j: i64) -> i64 {
        self.base + j * self.step
    }

    /// Translation by one slope vector.
    pub fn shift(&self) -> (i64, i64) {
        (self.belt.slope.rho(), self.belt.slope.rho_prime())
    }
}

/// Normalised nets with belts for every pair reachable from the queried ones.
#[derive(Debug, Clone)]
pub struct BeltSystem {
    pub spoiler: Ocn,
    pub duplicator: Ocn,
    pub graph: ProductGraph,
    /// Belt per product node; `None` outside the reachable part.
    pub belts: Vec<Option<Belt>>,
    /// Pairs of original states the system was built for.
    pub roots: Vec<(StateId, StateId)>,
    pub l0: (i64, i64),
    pub bands: Vec<Option<Band>>,
    /// Longest phase chain met while solving slope games.
    pub max_phase_chain: usize,
    /// Longest lasso in the reachable part of the product.
    pub lasso: u64,
}

impl BeltSystem {
    /// Builds belts for all pairs of original states.
    pub fn new(spoiler: &Ocn, duplicator: &Ocn) -> Result<BeltSystem> {
        let pairs: Vec<(StateId, StateId)> = (0..spoiler.state_count())
            .flat_map(|q| (0..duplicator.state_count()).map(move |q2| (q, q2)))
            .collect();
        Self::for_pairs(spoiler, duplicator, &pairs)
    }

    /// Builds belts for the pairs reachable from `roots` (original state ids).
    pub fn for_pairs(
        spoiler: &Ocn,
        duplicator: &Ocn,
        roots: &[(StateId, StateId)],
    ) -> Result<BeltSystem> {
        let (sp, du) = normalize_pair(spoiler, duplicator)?;
        let graph = build_product(&sp, &du)?;
        for &(q, q2) in roots {
            if q >= sp.state_count() || q2 >= du.state_count() {
                return Err(Error::UnknownState(format!("pair ({q},{q2})")));
            }
        }
        let root_nodes: Vec<usize> = roots.iter().map(|&(q, q2)| graph.node(q, q2)).collect();
        let within = graph.reachable_from_all(root_nodes.iter().copied());
        let reps = representatives_within(&graph, &within);
        let nodes: Vec<usize> = (0..graph.node_count()).filter(|&v| within[v]).collect();

        let computed: Vec<Result<(usize, Belt, usize)>> = nodes
            .par_iter()
            .map(|&v| {
                let mut solver = SlopeGameSolver::new(&graph);
                let b = boundary_among(&mut solver, v, &reps)?;
                let reach = graph.reachable_from(v);
                let bound = belt_constant_within(&graph, &reach);
                let lasso = graph_parameters_within(&graph, &reach).acyc_bound as u64 + 1;
                let depth = b.depth_below.unwrap_or(0).max(b.depth_above.unwrap_or(0)) as u64;
                let c = bound.min(lasso * depth.max(1));
                let belt = Belt {
                    pair: graph.node_pair(v),
                    slope: b.slope.canonical(),
                    c,
                    bound,
                };
                Ok((v, belt, solver.max_phase_chain()))
            })
            .collect();
        let mut belts = vec![None; graph.node_count()];
        let mut max_phase_chain = 0;
        for r in computed {
            let (v, belt, chain) = r?;
            belts[v] = Some(belt);
            max_phase_chain = max_phase_chain.max(chain);
        }
        let all: Vec<Belt> = belts.iter().flatten().copied().collect();
        let (l0, l02) = initial_rectangle(&all)?;
        let l0 = (l0 as i64, l02 as i64);
        let lasso = graph_parameters_within(&graph, &within).acyc_bound as u64 + 1;
        let bands = belts
            .iter()
            .map(|b| b.map(|b| Band::new(b, l0)).transpose())
            .collect::<Result<Vec<_>>>()?;
        Ok(BeltSystem {
            spoiler: sp,
            duplicator: du,
            graph,
            belts,
            roots: roots.to_vec(),
            l0,
            bands,
            max_phase_chain,
            lasso,
        })
    }

    pub fn belt(&self, q: StateId, q2: StateId) -> Option<&Belt> {
        self.belts[self.graph.node(q, q2)].as_ref()
    }

    pub fn band_of_node(&self, node: usize) -> Option<&Band> {
        self.bands[node].as_ref()
    }

    /// Product nodes that carry a belt.
    pub fn nodes(&self) -> Vec<usize> {
        (0..self.belts.len()).filter(|&v| self.belts[v].is_some()).collect()
    }

    /// Largest counter at a belt point up to `rect(j)` over all bands.
    pub fn extent(&self, j: i64) -> u64 {
        self.bands
            .iter()
            .flatten()
            .map(|b| {
                let top = b.rect_level(j);
                top.max(b.row(top).1) as u64
            })
            .max()
            .unwrap_or(0)
    }

    /// Largest belt width in use.
    pub fn max_c(&self) -> u64 {
        self.belts.iter().flatten().map(|b| b.c).max().unwrap_or(0)
    }
}

/// Corner `(l0, l0')` of the initial rectangle.
///
/// Non-parallel belts, each widened by one step in every direction, meet only
/// strictly inside the rectangle; the corner lies in no belt; and from the
/// border where a belt leaves the rectangle onwards its rows are complete
/// translates of each other.
pub fn initial_rectangle(belts: &[Belt]) -> Result<(u64, u64)> {
    let mut kinds: Vec<(Slope, i64)> = Vec::new();
    let mut seen = HashSet::new();
    for b in belts {
        let key = (b.slope.canonical(), b.half_width());
        if seen.insert(key) {
            kinds.push(key);
        }
    }
    let (mut min_n, mut min_n2) = (0i64, 0i64);
    for (i, &(s1, w1)) in kinds.iter().enumerate() {
        for &(s2, w2) in &kinds[i + 1..] {
            let det = s1.rho() * s2.rho_prime() - s1.rho_prime() * s2.rho();
            if det == 0 {
                continue;
            }
            let w1 = w1 + s1.rho() + s1.rho_prime();
            let w2 = w2 + s2.rho() + s2.rho_prime();
            for e1 in [-w1, w1] {
                for e2 in [-w2, w2] {
                    let mut num_n = e1 * s2.rho() - s1.rho() * e2;
                    let mut num_n2 = s2.rho_prime() * e1 - s1.rho_prime() * e2;
                    let mut den = det;
                    if den < 0 {
                        num_n = -num_n;
                        num_n2 = -num_n2;
                        den = -den;
                    }
                    min_n = min_n.max(num_n.div_euclid(den) + 1);
                    min_n2 = min_n2.max(num_n2.div_euclid(den) + 1);
                }
            }
        }
    }
    let ok = |l0: i64, l02: i64| {
        kinds.iter().all(|&(s, w)| {
            let d = s.rho() * l02 - s.rho_prime() * l0;
            // rows clipped at zero repeat only if the clipping is constant
            if d < -w {
                s.rho() == 0 || s.rho() * l02 >= w
            } else if d > w {
                s.rho_prime() == 0 || s.rho_prime() * l0 >= w
            } else {
                false
            }
        })
    };
    const LIMIT: i64 = 1 << 20;
    for sum in (min_n + min_n2)..LIMIT {
        for l0 in min_n..=(sum - min_n2) {
            let l02 = sum - l0;
            if ok(l0, l02) {
                return Ok((l0 as u64, l02 as u64));
            }
        }
    }
    Err(Error::Internal("no initial rectangle found".into()))
}

/// A state pair with two counter values.
pub type Point = (StateId, StateId, u64, u64);
