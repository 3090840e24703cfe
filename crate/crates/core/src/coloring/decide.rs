//! Escalating decision procedure for strong simulation.

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use serde::Serialize;

use super::periodic::{Expanded, PeriodicColoring};
use super::verify::{split_window, verify_coloring};
use super::{solve_quotient, BeltSystem, QuotientSolution, SpoilerAttractor, Zone};
use crate::error::{Error, Result};
use crate::net::{Config, Ocn, StateId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    True,
    False,
    Undecided,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }
}

/// Resource limits and the start of the escalation schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StrongOptions {
    /// First `j`; `None` starts at 1.
    pub j0: Option<u64>,
    /// Largest `j` tried.
    pub max_rect: u64,
    /// Largest `k` tried.
    pub max_period: u64,
    /// Largest number of rounds granted to Spoiler searches.
    pub max_depth: u32,
}

impl Default for StrongOptions {
    fn default() -> Self {
        StrongOptions {
            j0: None,
            max_rect: 1 << 12,
            max_period: 840,
            max_depth: 1 << 14,
        }
    }
}

/// Parameters of one escalation stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stage {
    pub j: u64,
    pub k: u64,
    pub depth: u32,
}

/// A colouring whose positive points form a simulation and whose negative
/// points up to `rect(j + 2k)` are confirmed Spoiler wins.
#[derive(Debug, Clone)]
pub struct Certified {
    pub coloring: PeriodicColoring,
    pub expanded: Expanded,
    pub stage: Stage,
}

/// Caches belts, quotient solutions and Spoiler ranks for one pair of nets.
pub struct StrongSolver {
    system: BeltSystem,
    options: StrongOptions,
    quotient: Option<QuotientSolution>,
    attractor: Option<SpoilerAttractor>,
    certified: Option<Certified>,
}

fn lcm_prefix(i: u32) -> u64 {
    // 1, 2, 6, 12, 60, 60, 420, 840, ...: every period up to i+1 divides it
    let mut l: u64 = 1;
    for m in 1..=(i as u64 + 1) {
        l = num_integer::lcm(l, m);
    }
    l
}

impl StrongSolver {
    /// Solver for all pairs of original states.
    pub fn new(spoiler: &Ocn, duplicator: &Ocn, options: StrongOptions) -> Result<StrongSolver> {
        Ok(Self::with_system(BeltSystem::new(spoiler, duplicator)?, options))
    }

    /// Solver for the pairs reachable from `roots`.
    pub fn for_pairs(
        spoiler: &Ocn,
        duplicator: &Ocn,
        roots: &[(StateId, StateId)],
        options: StrongOptions,
    ) -> Result<StrongSolver> {
        Ok(Self::with_system(
            BeltSystem::for_pairs(spoiler, duplicator, roots)?,
            options,
        ))
    }

    pub fn with_system(system: BeltSystem, options: StrongOptions) -> StrongSolver {
        StrongSolver {
            system,
            options,
            quotient: None,
            attractor: None,
            certified: None,
        }
    }

    pub fn system(&self) -> &BeltSystem {
        &self.system
    }

    pub fn certified(&self) -> Option<&Certified> {
        self.certified.as_ref()
    }

    /// Stage `i` of the schedule, or `None` once a limit is exceeded.
    ///
    /// The Spoiler depth doubles per stage and is never less than the
    /// depth needed to run down every counter in the certified window along
    /// the longest lasso.
    pub fn stage(&self, i: u32) -> Option<Stage> {
        let j = self.options.j0.unwrap_or(1).max(1).checked_shl(i)?;
        let k = lcm_prefix(i);
        let base = (self.system.l0.0.max(self.system.l0.1) as u64 + self.system.max_c()).max(1);
        if j > self.options.max_rect || k > self.options.max_period {
            return None;
        }
        let window = self.run_down(self.system.extent((j + 2 * k) as i64));
        let depth = base.checked_shl(i)?.max(window);
        let depth = depth.min(self.options.max_depth as u64) as u32;
        Some(Stage { j, k, depth })
    }

    fn run_down(&self, counter: u64) -> u64 {
        (counter + 1).saturating_mul(self.system.lasso)
    }

    fn quotient(&mut self, j: u64, k: u64) -> Result<&QuotientSolution> {
        let fresh = match &self.quotient {
            Some(q) => q.j != j as i64 || q.k != k as i64,
            None => true,
        };
        if fresh {
            let sol = solve_quotient(&self.system, j as i64, k as i64)?;
            let pc = sol.to_coloring(&self.system);
            let ex = Expanded::new(&pc)?;
            let (bad, _) = split_window(&self.system.spoiler, &self.system.duplicator, &pc, &ex)?;
            if let Some(p) = bad.first() {
                return Err(Error::Internal(format!(
                    "quotient relation violates the simulation condition at {p:?}"
                )));
            }
            self.quotient = Some(sol);
        }
        Ok(self.quotient.as_ref().expect("quotient present"))
    }

    fn attractor(&mut self, bound: u64, cap: u32) -> &SpoilerAttractor {
        let fresh = match &self.attractor {
            Some(a) => a.bound() < bound || a.cap() < cap,
            None => true,
        };
        if fresh {
            let nodes: Vec<bool> = self.system.belts.iter().map(Option::is_some).collect();
            self.attractor = Some(SpoilerAttractor::compute(
                &self.system.graph,
                &nodes,
                bound,
                cap,
            ));
        }
        self.attractor.as_ref().expect("attractor present")
    }

    /// Decides `q n` simulated by `q' n'` (original state ids).
    pub fn query(&mut self, q: StateId, q2: StateId, n: u64, n2: u64) -> Result<Verdict> {
        self.query_big(q, q2, &BigUint::from(n), &BigUint::from(n2))
    }

    /// As [`StrongSolver::query`] for counters of any magnitude.
    pub fn query_big(
        &mut self,
        q: StateId,
        q2: StateId,
        n: &BigUint,
        n2: &BigUint,
    ) -> Result<Verdict> {
        let node = self.system.graph.node(q, q2);
        let belt = *self.system.belts[node].as_ref().ok_or_else(|| {
            Error::Internal(format!("pair ({q},{q2}) was not prepared"))
        })?;
        match belt.zone_big(&BigInt::from(n.clone()), &BigInt::from(n2.clone())) {
            Zone::Above => return Ok(Verdict::True),
            Zone::Below => return Ok(Verdict::False),
            Zone::Inside => {}
        }
        let point = match (n.to_u64(), n2.to_u64()) {
            (Some(a), Some(b)) if a < 1 << 40 && b < 1 << 40 => Some((a, b)),
            _ => None,
        };
        let Some((n, n2)) = point else {
            return self.query_far(node, n, n2);
        };
        if let Some(c) = &self.certified {
            let band = c.expanded.band((q, q2)).expect("certified pair");
            let top = band.rect_level((c.stage.j + 2 * c.stage.k) as i64);
            if band.level(n as i64, n2 as i64) <= top {
                let inside = c.expanded.contains((q, q2), n as i64, n2 as i64);
                return Ok(Verdict::from_bool(inside == Some(true)));
            }
        }
        let mut i = 0;
        while let Some(stage) = self.stage(i) {
            if self.quotient(stage.j, stage.k)?.contains(node, n as i64, n2 as i64)? {
                return Ok(Verdict::True);
            }
            let depth = stage
                .depth
                .max(self.run_down(n.max(n2)).min(self.options.max_depth as u64) as u32);
            let bound = n.max(n2) + depth as u64;
            if self.attractor(bound, depth).wins_within(node, n, n2, depth) {
                return Ok(Verdict::False);
            }
            i += 1;
        }
        Ok(Verdict::Undecided)
    }

    /// Belt point beyond machine range: reduce along the slope. Membership
    /// is read off the quotient; a `d`-round Spoiler win is decided at a
    /// translate whose moved coordinates stay at least `d`, since no counter
    /// can reach zero within `d` rounds at either point.
    fn query_far(&mut self, node: usize, n: &BigUint, n2: &BigUint) -> Result<Verdict> {
        let mut i = 0;
        while let Some(stage) = self.stage(i) {
            let sol = self.quotient(stage.j, stage.k)?;
            let band = *sol.band(node).expect("band");
            let (sx, sy) = band.shift();
            let level = BigInt::from(if band.exit == super::Exit::Top { n2.clone() } else { n.clone() });
            let top = BigInt::from(band.rect_level((stage.j + stage.k) as i64));
            let period = BigInt::from(stage.k as i64 * band.step);
            let m: BigInt = (&level - &top + &period - 1) / &period;
            let shift = m * BigInt::from(stage.k as i64);
            let rn: BigInt = BigInt::from(n.clone()) - &shift * BigInt::from(sx);
            let rn2: BigInt = BigInt::from(n2.clone()) - &shift * BigInt::from(sy);
            let (Some(a), Some(b)) = (rn.to_i64(), rn2.to_i64()) else {
                return Err(Error::Internal("far point did not reduce".into()));
            };
            if sol.contains(node, a, b)? {
                return Ok(Verdict::True);
            }
            let d = stage.depth as i64;
            let lift = |x: i64, s: i64| if s == 0 || x >= d { 0 } else { (d - x + s - 1) / s };
            let t = lift(a, sx).max(lift(b, sy));
            let (a, b) = ((a + t * sx) as u64, (b + t * sy) as u64);
            let bound = a.max(b) + stage.depth as u64;
            if self.attractor(bound, stage.depth).wins_within(node, a, b, stage.depth) {
                return Ok(Verdict::False);
            }
            i += 1;
        }
        Ok(Verdict::Undecided)
    }

    /// Escalates until the colouring of every prepared pair is certified on
    /// the window up to `rect(j + 2k)`.
    pub fn certify(&mut self) -> Result<Option<&Certified>> {
        if self.certified.is_some() {
            return Ok(self.certified.as_ref());
        }
        let mut i = 0;
        while let Some(stage) = self.stage(i) {
            self.quotient(stage.j, stage.k)?;
            let pc = self
                .quotient
                .as_ref()
                .expect("quotient present")
                .to_coloring(&self.system);
            let report =
                verify_coloring(&self.system.spoiler, &self.system.duplicator, &pc, stage.depth)?;
            if report.is_clean() {
                let expanded = Expanded::new(&pc)?;
                self.certified = Some(Certified {
                    coloring: pc,
                    expanded,
                    stage,
                });
                return Ok(self.certified.as_ref());
            }
            i += 1;
        }
        Ok(None)
    }
}

/// Decides `left` simulated by `right` for one pair of configurations.
pub fn decide_strong(
    spoiler: &Ocn,
    duplicator: &Ocn,
    left: Config,
    right: Config,
    options: StrongOptions,
) -> Result<Verdict> {
    let mut solver =
        StrongSolver::for_pairs(spoiler, duplicator, &[(left.state, right.state)], options)?;
    solver.query(left.state, right.state, left.counter, right.counter)
}
