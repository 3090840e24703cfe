//! Weak simulation through omega-abstraction and a sequence of approximant
//! net pairs decided by the strong machinery.

mod approximant;
mod reduce;

pub use approximant::{
    build_approximant, compute_suff, decide_weak, gadget_states, ApproximantNets, Suff, SuffTable,
    WeakOptions, WeakSolver,
};
pub use reduce::{reduce_weak_to_strong, weak_step_options, Reduction, StepOption};

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::net::{ActionId, Ocn, StateId};

/// Counter change of an omega-net transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OmegaDelta {
    Step(i8),
    /// Any strictly larger counter.
    Omega,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OmegaTransition {
    pub src: StateId,
    pub action: ActionId,
    pub delta: OmegaDelta,
    pub dst: StateId,
}

/// A one-counter net whose transitions may also raise the counter arbitrarily.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaNet {
    name: String,
    states: Vec<String>,
    actions: Vec<String>,
    transitions: Vec<OmegaTransition>,
}

impl OmegaNet {
    /// Builds a net from names; `None` as delta stands for omega.
    pub fn new(
        name: &str,
        states: &[String],
        actions: &[String],
        transitions: &[(String, String, Option<i64>, String)],
    ) -> Result<OmegaNet> {
        let sid: HashMap<&str, usize> =
            states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let aid: HashMap<&str, usize> =
            actions.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        if sid.len() != states.len() || aid.len() != actions.len() {
            return Err(Error::DuplicateIdentifier(name.to_owned()));
        }
        let mut ts = Vec::with_capacity(transitions.len());
        for (src, a, d, dst) in transitions {
            let delta = match d {
                None => OmegaDelta::Omega,
                Some(d @ -1..=1) => OmegaDelta::Step(*d as i8),
                Some(d) => return Err(Error::InvalidDelta(*d)),
            };
            ts.push(OmegaTransition {
                src: *sid.get(src.as_str()).ok_or_else(|| Error::UnknownState(src.clone()))?,
                action: *aid.get(a.as_str()).ok_or_else(|| Error::UnknownAction(a.clone()))?,
                delta,
                dst: *sid.get(dst.as_str()).ok_or_else(|| Error::UnknownState(dst.clone()))?,
            });
        }
        ts.sort_unstable();
        ts.dedup();
        Ok(OmegaNet {
            name: name.to_owned(),
            states: states.to_vec(),
            actions: actions.to_vec(),
            transitions: ts,
        })
    }

    /// The same net with no omega-transitions.
    pub fn from_ocn(net: &Ocn) -> OmegaNet {
        OmegaNet {
            name: net.name().to_owned(),
            states: net.states().to_vec(),
            actions: net.actions().to_vec(),
            transitions: net
                .transitions()
                .iter()
                .map(|t| OmegaTransition {
                    src: t.src,
                    action: t.action,
                    delta: OmegaDelta::Step(t.delta),
                    dst: t.dst,
                })
                .collect(),
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

    pub fn transitions(&self) -> &[OmegaTransition] {
        &self.transitions
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    pub fn action_name(&self, a: ActionId) -> &str {
        &self.actions[a]
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q]
    }

    pub fn has_omega(&self) -> bool {
        self.transitions.iter().any(|t| t.delta == OmegaDelta::Omega)
    }

    /// The ordinary net, if no transition is an omega-transition.
    pub fn to_ocn(&self) -> Option<Result<Ocn>> {
        if self.has_omega() {
            return None;
        }
        let ts: Vec<(&str, &str, i64, &str)> = self
            .transitions
            .iter()
            .map(|t| {
                let OmegaDelta::Step(d) = t.delta else { unreachable!() };
                (
                    self.states[t.src].as_str(),
                    self.actions[t.action].as_str(),
                    d as i64,
                    self.states[t.dst].as_str(),
                )
            })
            .collect();
        let states: Vec<&str> = self.states.iter().map(String::as_str).collect();
        let actions: Vec<&str> = self.actions.iter().map(String::as_str).collect();
        Some(Ocn::new_internal(&self.name, &states, &actions, &ts))
    }
}
