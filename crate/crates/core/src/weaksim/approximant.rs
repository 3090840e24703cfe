//! Approximant net pairs and the sufficiency table.

use std::cmp::Ordering;
use std::path::PathBuf;

use num_bigint::BigUint;
use serde::Serialize;

use super::reduce::ANY;
use super::{reduce_weak_to_strong, OmegaDelta, Reduction};
use crate::coloring::{StrongOptions, StrongSolver, Verdict};
use crate::error::{Error, Result};
use crate::format::print_net;
use crate::net::{Config, Ocn, StateId};

const IDLE: &str = "__idle";
const TEST: &str = "__e";
const WIN: &str = "__win";

fn enter(t: &str) -> String {
    format!("__omega_{t}")
}

fn jumped(t: &str) -> String {
    format!("__jumped_{t}")
}

fn gadget(q: &str, t: &str, i: usize) -> String {
    format!("__test_{q}_{t}_{i}")
}

fn gadget_won(q: &str, t: &str) -> String {
    format!("__test_{q}_{t}_won")
}

/// Least Spoiler counter that beats an omega-jump, or `Omega` if none does.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suff {
    Finite(u64),
    Omega,
}

impl PartialOrd for Suff {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Suff {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Suff::Finite(a), Suff::Finite(b)) => a.cmp(b),
            (Suff::Finite(_), Suff::Omega) => Ordering::Less,
            (Suff::Omega, Suff::Finite(_)) => Ordering::Greater,
            (Suff::Omega, Suff::Omega) => Ordering::Equal,
        }
    }
}

/// Number of states of the test gadget for `suff`.
pub fn gadget_states(suff: Suff) -> usize {
    match suff {
        Suff::Finite(s) => s as usize + 2,
        Suff::Omega => 1,
    }
}

/// Rows of suff values per pair of original states; row `i` (from 0)
/// belongs to approximant level `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuffTable {
    pub spoiler_states: usize,
    pub duplicator_states: usize,
    pub rows: Vec<Vec<Suff>>,
}

impl SuffTable {
    pub fn new(spoiler_states: usize, duplicator_states: usize) -> SuffTable {
        SuffTable {
            spoiler_states,
            duplicator_states,
            rows: vec![vec![Suff::Omega; spoiler_states * duplicator_states]],
        }
    }

    pub fn get(&self, level: usize, q: StateId, t: StateId) -> Suff {
        self.rows[level - 1][q * self.duplicator_states + t]
    }

    pub fn last(&self) -> &[Suff] {
        self.rows.last().expect("at least one row")
    }

    pub fn levels(&self) -> usize {
        self.rows.len()
    }

    /// Appends a row; rows may only decrease.
    pub fn push(&mut self, row: Vec<Suff>) -> Result<()> {
        if row.len() != self.spoiler_states * self.duplicator_states {
            return Err(Error::Internal("suff row of wrong length".into()));
        }
        if row.iter().zip(self.last()).any(|(new, old)| new > old) {
            return Err(Error::Internal(format!(
                "suff row {} increases",
                self.rows.len() + 1
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn converged(&self) -> bool {
        let n = self.rows.len();
        n >= 2 && self.rows[n - 1] == self.rows[n - 2]
    }
}

/// One approximant pair: Spoiler net with test gadgets and Duplicator net
/// with omega-jumps cut off.
#[derive(Debug, Clone)]
pub struct ApproximantNets {
    pub level: usize,
    pub spoiler: Ocn,
    pub duplicator: Ocn,
}

type Named = (String, String, i64, String);

fn build_ocn(name: &str, states: &[String], actions: &[String], ts: &[Named]) -> Result<Ocn> {
    let states: Vec<&str> = states.iter().map(String::as_str).collect();
    let actions: Vec<&str> = actions.iter().map(String::as_str).collect();
    let ts: Vec<(&str, &str, i64, &str)> = ts
        .iter()
        .map(|(a, b, d, c)| (a.as_str(), b.as_str(), *d, c.as_str()))
        .collect();
    Ocn::new_internal(name, &states, &actions, &ts)
}

/// Builds the approximant pair for `row`.
///
/// An omega-jump of Duplicator to `t` ends in a state that answers only the
/// announcement of `t`, after which Spoiler, in the waiting copy of `q`,
/// enters a test that it wins exactly from counter `suff(q, t)` on.
pub fn build_approximant(red: &Reduction, row: &[Suff], level: usize) -> Result<ApproximantNets> {
    let sp = &red.spoiler;
    let du = &red.duplicator;
    let originals2: Vec<&str> = (0..red.duplicator_states).map(|t| du.state_name(t)).collect();
    let mut actions: Vec<String> = sp.actions().to_vec();
    for a in du.actions() {
        if !actions.contains(a) {
            actions.push(a.clone());
        }
    }
    let enters: Vec<String> = originals2.iter().map(|t| enter(t)).collect();
    actions.extend(enters.iter().cloned());
    actions.push(TEST.to_owned());
    actions.push(WIN.to_owned());

    // Spoiler
    let mut states: Vec<String> = sp.states().to_vec();
    let mut ts: Vec<Named> = sp
        .transitions()
        .iter()
        .map(|t| {
            (
                sp.state_name(t.src).to_owned(),
                sp.action_name(t.action).to_owned(),
                t.delta as i64,
                sp.state_name(t.dst).to_owned(),
            )
        })
        .collect();
    for q in 0..red.spoiler_states {
        let qn = sp.state_name(q);
        let waiting = red.compressed.then(|| super::reduce::after(qn));
        for (t, tn) in originals2.iter().enumerate() {
            let suff = row[q * red.duplicator_states + t];
            let g0 = gadget(qn, tn, 0);
            match suff {
                Suff::Omega => {
                    states.push(g0.clone());
                    ts.push((g0.clone(), TEST.to_owned(), 0, g0.clone()));
                }
                Suff::Finite(s) => {
                    let s = s as usize;
                    for i in 0..=s {
                        states.push(gadget(qn, tn, i));
                    }
                    for i in 0..s {
                        ts.push((gadget(qn, tn, i), TEST.to_owned(), -1, gadget(qn, tn, i + 1)));
                    }
                    states.push(gadget_won(qn, tn));
                    ts.push((gadget(qn, tn, s), WIN.to_owned(), 0, gadget_won(qn, tn)));
                }
            }
            if let Some(w) = &waiting {
                ts.push((w.clone(), enter(tn), 0, g0));
            }
        }
    }
    let spoiler = build_ocn(sp.name(), &states, &actions, &ts)?;

    // Duplicator
    let mut states: Vec<String> = du.states().to_vec();
    let any = du.state_id(ANY);
    let mut ts: Vec<Named> = Vec::new();
    let mut jumps = vec![false; red.duplicator_states];
    for t in du.transitions() {
        let src = du.state_name(t.src).to_owned();
        let a = du.action_name(t.action).to_owned();
        match t.delta {
            OmegaDelta::Step(d) => ts.push((src, a, d as i64, du.state_name(t.dst).to_owned())),
            OmegaDelta::Omega => {
                let target = red
                    .ready_target(t.dst)
                    .ok_or_else(|| Error::Internal("omega-jump to a non-ready state".into()))?;
                jumps[target] = true;
                ts.push((src, a, 0, jumped(originals2[target])));
            }
        }
    }
    if let Some(any) = any {
        let any = du.state_name(any).to_owned();
        for s in du.states() {
            for e in &enters {
                ts.push((s.clone(), e.clone(), 0, any.clone()));
            }
        }
        for x in [TEST, WIN] {
            ts.push((any.clone(), x.to_owned(), 0, any.clone()));
        }
        if jumps.iter().any(|&j| j) {
            states.push(IDLE.to_owned());
            ts.push((IDLE.to_owned(), TEST.to_owned(), 0, IDLE.to_owned()));
        }
        for (t, tn) in originals2.iter().enumerate() {
            if !jumps[t] {
                continue;
            }
            let f = jumped(tn);
            states.push(f.clone());
            for x in &actions {
                let dst = if *x == enters[t] { IDLE } else { any.as_str() };
                ts.push((f.clone(), x.clone(), 0, dst.to_owned()));
            }
        }
    }
    let duplicator = build_ocn(du.name(), &states, &actions, &ts)?;
    Ok(ApproximantNets {
        level,
        spoiler,
        duplicator,
    })
}

/// Suff value of the original pair `(q, t)` from a certified solver on an
/// approximant pair.
///
/// Pairs whose belt is not vertical are won by Spoiler at every Duplicator
/// counter once its own counter is large enough, so no finite counter beats
/// an arbitrarily high Duplicator. For a vertical belt the value is read at
/// a Duplicator counter above the certified window.
pub fn compute_suff(solver: &StrongSolver, q: StateId, t: StateId) -> Result<Suff> {
    let cert = solver
        .certified()
        .ok_or_else(|| Error::Internal("solver not certified".into()))?;
    let system = solver.system();
    let node = system.graph.node(q, t);
    let belt = system
        .belts[node]
        .ok_or_else(|| Error::Internal(format!("no belt for pair ({q},{t})")))?;
    if !belt.is_vertical() {
        return Ok(Suff::Omega);
    }
    let band = system
        .band_of_node(node)
        .ok_or_else(|| Error::Internal("no band".into()))?;
    let stage = cert.stage;
    let n2 = band.rect_level((stage.j + 2 * stage.k) as i64);
    for n in 0..=belt.c {
        match cert.expanded.contains((q, t), n as i64, n2) {
            Some(false) => return Ok(Suff::Finite(n)),
            Some(true) => {}
            None => return Err(Error::Internal(format!("pair ({q},{t}) not described"))),
        }
    }
    Ok(Suff::Finite(belt.c + 1))
}

#[derive(Debug, Clone, Default)]
pub struct WeakOptions {
    pub strong: StrongOptions,
    /// Directory receiving the approximant nets of every level.
    pub dump_dir: Option<PathBuf>,
}

/// Runs the approximant sequence to its fixpoint and answers queries on
/// the final pair.
pub struct WeakSolver {
    reduction: Reduction,
    table: SuffTable,
    nets: ApproximantNets,
    solver: StrongSolver,
}

impl WeakSolver {
    /// Weak simulation of `n` by `n2` with internal action `tau`.
    ///
    /// Fails with [`Error::Undecided`] when an approximant pair cannot be
    /// certified within the limits.
    pub fn new(n: &Ocn, n2: &Ocn, tau: &str, options: &WeakOptions) -> Result<WeakSolver> {
        let reduction = reduce_weak_to_strong(n, n2, tau)?;
        let pairs: Vec<(StateId, StateId)> = (0..reduction.spoiler_states)
            .flat_map(|q| (0..reduction.duplicator_states).map(move |t| (q, t)))
            .collect();
        let mut table = SuffTable::new(reduction.spoiler_states, reduction.duplicator_states);
        let limit = pairs.len() + 2;
        loop {
            let level = table.levels();
            let nets = build_approximant(&reduction, table.last(), level)?;
            if let Some(dir) = &options.dump_dir {
                dump(dir, &nets)?;
            }
            let mut solver =
                StrongSolver::for_pairs(&nets.spoiler, &nets.duplicator, &pairs, options.strong)?;
            if !reduction.duplicator.has_omega() {
                return Ok(WeakSolver {
                    reduction,
                    table,
                    nets,
                    solver,
                });
            }
            if solver.certify()?.is_none() {
                return Err(Error::Undecided(format!(
                    "approximant level {level} not certified within limits"
                )));
            }
            let row = pairs
                .iter()
                .map(|&(q, t)| compute_suff(&solver, q, t))
                .collect::<Result<Vec<_>>>()?;
            table.push(row)?;
            if table.converged() {
                return Ok(WeakSolver {
                    reduction,
                    table,
                    nets,
                    solver,
                });
            }
            if table.levels() > limit {
                return Err(Error::Internal("suff table did not converge".into()));
            }
        }
    }

    pub fn reduction(&self) -> &Reduction {
        &self.reduction
    }

    pub fn table(&self) -> &SuffTable {
        &self.table
    }

    /// The approximant pair queries are answered on.
    pub fn nets(&self) -> &ApproximantNets {
        &self.nets
    }

    pub fn strong(&self) -> &StrongSolver {
        &self.solver
    }

    pub fn strong_mut(&mut self) -> &mut StrongSolver {
        &mut self.solver
    }

    pub fn query(&mut self, q: StateId, t: StateId, n: u64, n2: u64) -> Result<Verdict> {
        self.solver.query(q, t, n, n2)
    }

    pub fn query_big(&mut self, q: StateId, t: StateId, n: &BigUint, n2: &BigUint) -> Result<Verdict> {
        self.solver.query_big(q, t, n, n2)
    }
}

fn dump(dir: &std::path::Path, nets: &ApproximantNets) -> Result<()> {
    let io = |e: std::io::Error| Error::Internal(format!("{}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(io)?;
    let l = nets.level;
    std::fs::write(dir.join(format!("level{l}_spoiler.ocn")), print_net(&nets.spoiler)).map_err(io)?;
    std::fs::write(dir.join(format!("level{l}_duplicator.ocn")), print_net(&nets.duplicator))
        .map_err(io)?;
    Ok(())
}

/// Decides `left` weakly simulated by `right`.
pub fn decide_weak(
    n: &Ocn,
    n2: &Ocn,
    tau: &str,
    left: Config,
    right: Config,
    options: &WeakOptions,
) -> Result<Verdict> {
    match WeakSolver::new(n, n2, tau, options) {
        Ok(mut s) => s.query(left.state, right.state, left.counter, right.counter),
        Err(Error::Undecided(_)) => Ok(Verdict::Undecided),
        Err(e) => Err(e),
    }
}
