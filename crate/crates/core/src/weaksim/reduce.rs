//! Compression of Duplicator's weak steps into an omega-net.

use std::collections::{HashMap, HashSet, VecDeque};

use super::OmegaNet;
use crate::error::Result;
use crate::net::{ActionId, Ocn, StateId};

pub(crate) const PAUSE: &str = "__hash";
pub(crate) const ANY: &str = "__any";

pub(crate) fn sync(t: &str) -> String {
    format!("__sync_{t}")
}

pub(crate) fn after(q: &str) -> String {
    format!("__after_{q}")
}

pub(crate) fn ready(t: &str) -> String {
    format!("__ready_{t}")
}

/// What one weak step can achieve towards a target state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Gain {
    Finite(i64),
    Omega,
}

/// A Pareto-optimal weak step: from any counter `n >= dip` Duplicator can
/// reach `target` with counter `n + gain` (or any counter, for omega).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepOption {
    pub target: StateId,
    pub dip: u64,
    pub gain: Gain,
}

impl StepOption {
    /// Unit counter changes realising the option; `None` is the final omega step.
    pub fn deltas(&self) -> Vec<Option<i8>> {
        let b = self.dip as usize;
        let mut out = vec![Some(-1); b];
        match self.gain {
            Gain::Finite(e) => out.extend(std::iter::repeat_n(Some(1), (b as i64 + e) as usize)),
            Gain::Omega => out.push(None),
        }
        if out.is_empty() {
            out.push(Some(0));
        }
        out
    }
}

/// Pareto options of the weak step `tau* a tau*` (or `tau*` when `action`
/// is `tau`) from state `p` of `net`.
///
/// Walks without a positive cycle never gain more than the number of
/// layered nodes, and removing non-positive cycles never deepens a dip, so
/// budgets up to twice that number cover every option.
pub fn weak_step_options(net: &Ocn, p: StateId, action: ActionId, tau: Option<ActionId>) -> Vec<StepOption> {
    let nq = net.state_count();
    let is_tau = Some(action) == tau;
    let layers = if is_tau { 1 } else { 2 };
    let nodes = layers * nq;
    let mut edges: Vec<Vec<(usize, i64)>> = vec![Vec::new(); nodes];
    for t in net.transitions() {
        let d = t.delta as i64;
        if Some(t.action) == tau {
            for l in 0..layers {
                edges[l * nq + t.src].push((l * nq + t.dst, d));
            }
        } else if t.action == action && !is_tau {
            edges[t.src].push((nq + t.dst, d));
        }
    }
    // which layered nodes reach which
    let reach: Vec<Vec<bool>> = (0..nodes)
        .map(|s| {
            let mut seen = vec![false; nodes];
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &(w, _) in &edges[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            seen
        })
        .collect();
    let first_target = (layers - 1) * nq;
    let mut best: Vec<Option<Gain>> = vec![None; nq];
    let mut out = Vec::new();
    for b in 0..=(2 * nodes as u64) {
        let cap = b as i64 + nodes as i64;
        let mut seen: HashSet<(usize, i64)> = HashSet::new();
        let mut overflow = vec![false; nodes];
        let mut queue = VecDeque::from([(p, b as i64)]);
        seen.insert((p, b as i64));
        while let Some((v, c)) = queue.pop_front() {
            for &(w, d) in &edges[v] {
                let c2 = c + d;
                if c2 < 0 {
                    continue;
                }
                if c2 > cap {
                    overflow[w] = true;
                } else if seen.insert((w, c2)) {
                    queue.push_back((w, c2));
                }
            }
        }
        let mut top: Vec<Option<i64>> = vec![None; nq];
        for &(v, c) in &seen {
            if v >= first_target {
                let t = v - first_target;
                top[t] = Some(top[t].map_or(c, |m| m.max(c)));
            }
        }
        for t in 0..nq {
            let target = first_target + t;
            let gain = if (0..nodes).any(|v| overflow[v] && reach[v][target]) {
                Some(Gain::Omega)
            } else {
                top[t].map(|m| Gain::Finite(m - b as i64))
            };
            if let Some(g) = gain {
                if best[t].is_none_or(|old| g > old) {
                    best[t] = Some(g);
                    out.push(StepOption {
                        target: t,
                        dip: b,
                        gain: g,
                    });
                }
            }
        }
    }
    out.sort_by_key(|o| (o.target, o.dip));
    out
}

/// Spoiler net and Duplicator omega-net whose strong simulation on original
/// state pairs is the weak simulation of the inputs.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub spoiler: Ocn,
    pub duplicator: OmegaNet,
    /// Original states keep their ids `0..spoiler_states` and
    /// `0..duplicator_states`.
    pub spoiler_states: usize,
    pub duplicator_states: usize,
    /// Whether weak steps were compressed into chains; otherwise the
    /// inputs are returned unchanged.
    pub compressed: bool,
}

impl Reduction {
    /// Original Duplicator state whose ready state is `s`, if any.
    pub(crate) fn ready_target(&self, s: StateId) -> Option<StateId> {
        let name = self.duplicator.state_name(s);
        (0..self.duplicator_states).find(|&t| ready(self.duplicator.state_name(t)) == name)
    }
}

/// Builds the reduction for Spoiler net `n` and Duplicator net `n2`, with
/// `tau` the internal action.
///
/// Without tau-transitions in `n2` the nets are kept, except that a Spoiler
/// tau-step is answered by staying put. Otherwise every Spoiler step
/// `p -a,d-> q` leads to a waiting copy of `q` in which Spoiler repeats the
/// pause action while Duplicator walks a chain of unit steps realising one
/// Pareto option of its weak step; Spoiler then announces the state
/// Duplicator reached and both continue from there. Announcing wrongly, or
/// before the chain is finished, hands Duplicator a state that answers
/// everything.
pub fn reduce_weak_to_strong(n: &Ocn, n2: &Ocn, tau: &str) -> Result<Reduction> {
    let mut alphabet: Vec<String> = n.actions().to_vec();
    for a in n2.actions() {
        if !alphabet.contains(a) {
            alphabet.push(a.clone());
        }
    }
    let tau2 = n2.action_id(tau);
    let has_tau2 = tau2.is_some_and(|t| n2.transitions().iter().any(|x| x.action == t));
    let spoiler_tau = n
        .action_id(tau)
        .is_some_and(|t| n.transitions().iter().any(|x| x.action == t));

    if !has_tau2 {
        let mut ts: Vec<(String, String, Option<i64>, String)> = n2
            .transitions()
            .iter()
            .map(|t| {
                (
                    n2.state_name(t.src).to_owned(),
                    n2.action_name(t.action).to_owned(),
                    Some(t.delta as i64),
                    n2.state_name(t.dst).to_owned(),
                )
            })
            .collect();
        let mut actions = n2.actions().to_vec();
        if spoiler_tau {
            if !actions.iter().any(|a| a == tau) {
                actions.push(tau.to_owned());
            }
            for s in n2.states() {
                ts.push((s.clone(), tau.to_owned(), Some(0), s.clone()));
            }
        }
        return Ok(Reduction {
            spoiler: n.clone(),
            duplicator: OmegaNet::new(n2.name(), n2.states(), &actions, &ts)?,
            spoiler_states: n.state_count(),
            duplicator_states: n2.state_count(),
            compressed: false,
        });
    }

    let originals2: Vec<String> = n2.states().to_vec();
    let mut actions = alphabet.clone();
    actions.push(PAUSE.to_owned());
    actions.extend(originals2.iter().map(|t| sync(t)));

    // Spoiler side
    let mut sp_states: Vec<String> = n.states().to_vec();
    sp_states.extend(n.states().iter().map(|q| after(q)));
    let mut sp_ts: Vec<(String, String, i64, String)> = Vec::new();
    for t in n.transitions() {
        sp_ts.push((
            n.state_name(t.src).to_owned(),
            n.action_name(t.action).to_owned(),
            t.delta as i64,
            after(n.state_name(t.dst)),
        ));
    }
    for q in n.states() {
        sp_ts.push((after(q), PAUSE.to_owned(), 0, after(q)));
        for t in &originals2 {
            sp_ts.push((after(q), sync(t), 0, q.clone()));
        }
    }
    let sp_states_ref: Vec<&str> = sp_states.iter().map(String::as_str).collect();
    let actions_ref: Vec<&str> = actions.iter().map(String::as_str).collect();
    let sp_ts_ref: Vec<(&str, &str, i64, &str)> = sp_ts
        .iter()
        .map(|(a, b, d, c)| (a.as_str(), b.as_str(), *d, c.as_str()))
        .collect();
    let spoiler = Ocn::new_internal(n.name(), &sp_states_ref, &actions_ref, &sp_ts_ref)?;

    // Duplicator side
    let mut du_states: Vec<String> = originals2.clone();
    du_states.extend(originals2.iter().map(|t| ready(t)));
    du_states.push(ANY.to_owned());
    let mut du_ts: Vec<(String, String, Option<i64>, String)> = Vec::new();
    let mut chains: HashMap<(Vec<Option<i8>>, StateId), String> = HashMap::new();
    for p in 0..n2.state_count() {
        for a in &alphabet {
            let Some(aid) = n2.action_id(a) else { continue };
            for opt in weak_step_options(n2, p, aid, tau2) {
                let deltas = opt.deltas();
                let next = chain_state(&deltas[1..], opt.target, &originals2, &mut chains, &mut du_states, &mut du_ts);
                du_ts.push((originals2[p].clone(), a.clone(), deltas[0].map(i64::from), next));
            }
        }
    }
    for (i, t) in originals2.iter().enumerate() {
        let r = ready(t);
        du_ts.push((r.clone(), PAUSE.to_owned(), Some(0), r.clone()));
        for (j, s) in originals2.iter().enumerate() {
            let dst = if i == j { t.clone() } else { ANY.to_owned() };
            du_ts.push((r.clone(), sync(s), Some(0), dst));
        }
    }
    for x in &actions {
        du_ts.push((ANY.to_owned(), x.clone(), Some(0), ANY.to_owned()));
    }
    let duplicator = OmegaNet::new(n2.name(), &du_states, &actions, &du_ts)?;
    Ok(Reduction {
        spoiler,
        duplicator,
        spoiler_states: n.state_count(),
        duplicator_states: n2.state_count(),
        compressed: true,
    })
}

/// Chain state performing `rest` on the pause action and ending in the
/// ready state of `target`; shared between options with equal suffixes.
fn chain_state(
    rest: &[Option<i8>],
    target: StateId,
    originals: &[String],
    chains: &mut HashMap<(Vec<Option<i8>>, StateId), String>,
    states: &mut Vec<String>,
    ts: &mut Vec<(String, String, Option<i64>, String)>,
) -> String {
    if rest.is_empty() {
        return ready(&originals[target]);
    }
    if let Some(s) = chains.get(&(rest.to_vec(), target)) {
        return s.clone();
    }
    let next = chain_state(&rest[1..], target, originals, chains, states, ts);
    let name = format!("__step_{}", chains.len());
    chains.insert((rest.to_vec(), target), name.clone());
    states.push(name.clone());
    ts.push((name.clone(), PAUSE.to_owned(), rest[0].map(i64::from), next));
    for s in originals {
        ts.push((name.clone(), sync(s), Some(0), ANY.to_owned()));
    }
    name
}
