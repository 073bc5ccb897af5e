//! The state machine induced by a closed parallel event system: reachable
//! configurations, interned actions (label, event, domain), and the
//! per-action step relation, with run/execution/reachability on top.

use crate::model::{
    eval, state_universe, Config, Env, Model, State, Value,
};
use crate::semantics::{ActKind, Label, Stepper};
use crate::syntax::model_digest;
use crate::Caps;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MachineError {
    #[error("model has no policy block")]
    NoPolicy,
    #[error("configuration space exceeded the cap of {cap}")]
    TooManyConfigs { cap: usize },
    #[error("dom_evt evaluated to '{value}', which is not a declared domain")]
    DomainOutOfRange { value: String },
    #[error("program step at core '{core}' with no current event")]
    NoCurrentEvent { core: String },
    #[error(transparent)]
    Step(#[from] crate::semantics::StepError),
    #[error(transparent)]
    Eval(#[from] crate::model::EvalError),
    #[error(transparent)]
    Enumerate(#[from] crate::semantics::EnumerateError),
}

impl MachineError {
    /// True for resource-cap exhaustion (CLI exit code 3).
    pub fn is_resource_cap(&self) -> bool {
        matches!(
            self,
            MachineError::TooManyConfigs { .. }
                | MachineError::Eval(crate::model::EvalError::UniverseTooLarge { .. })
                | MachineError::Enumerate(crate::semantics::EnumerateError::TooMany { .. })
        )
    }
}

/// An action: transition label plus the event it belongs to and the domain
/// that triggers it. Interned so equal triples are the same action.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Action {
    pub label: Label,
    pub ev: u32,
    pub dom: String,
}

/// The state machine: reachable configuration closure, action alphabet, and
/// per-action step relation. Immutable after build.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Machine {
    pub digest: String,
    pub configs: Vec<Config>,
    pub actions: Vec<Action>,
    /// Per action, the set of (source, target) configuration ids.
    pub step: Vec<BTreeSet<(u32, u32)>>,
    pub c0: u32,
    #[serde(skip)]
    index: BTreeMap<Config, u32>,
}

impl Machine {
    /// Rebuild the configuration index; needed after deserializing.
    pub fn reindex(&mut self) {
        self.index = self
            .configs
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i as u32))
            .collect();
    }

    pub fn config_id(&self, c: &Config) -> Option<u32> {
        self.index.get(c).copied()
    }

    pub fn action_id(&self, a: &Action) -> Option<u32> {
        self.actions.iter().position(|x| x == a).map(|i| i as u32)
    }

    pub fn action_display(&self, model: &Model, a: u32) -> String {
        let act = &self.actions[a as usize];
        format!(
            "{}/{}/{}",
            act.label.display(model),
            model.event(act.ev).name,
            act.dom
        )
    }

    /// Fold of the per-action relations, composing from the right as the
    /// recursion prescribes: an empty sequence is the identity.
    pub fn run(&self, actions: &[u32]) -> BTreeSet<(u32, u32)> {
        match actions.split_first() {
            None => (0..self.configs.len() as u32).map(|i| (i, i)).collect(),
            Some((a, rest)) => {
                let tail = self.run(rest);
                compose(&self.step[*a as usize], &tail)
            }
        }
    }

    /// Image of a configuration under a sequence of actions; empty when the
    /// sequence is not executable from it. Computed by forward image, which
    /// agrees with domain-restricting `run`.
    pub fn execution(&self, c: u32, actions: &[u32]) -> BTreeSet<u32> {
        let mut cur: BTreeSet<u32> = BTreeSet::new();
        cur.insert(c);
        for a in actions {
            let rel = &self.step[*a as usize];
            let mut next = BTreeSet::new();
            for (s, t) in rel {
                if cur.contains(s) {
                    next.insert(*t);
                }
            }
            cur = next;
            if cur.is_empty() {
                break;
            }
        }
        cur
    }

    /// Membership in the reachable closure.
    pub fn reachable(&self, c: &Config) -> bool {
        self.config_id(c).is_some()
    }

    /// Successor map of one action, keyed by source.
    pub fn succs_of(&self, a: u32) -> BTreeMap<u32, Vec<u32>> {
        let mut out: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for (s, t) in &self.step[a as usize] {
            out.entry(*s).or_default().push(*t);
        }
        out
    }

    /// Line-oriented graph dump: nodes with state digests, edges labeled
    /// label/event/domain.
    pub fn emit_graph(&self, model: &Model) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "machine {}", self.digest);
        for (i, c) in self.configs.iter().enumerate() {
            let _ = writeln!(
                out,
                "node {} {} {}",
                i,
                state_digest(&c.state),
                model.show_ectx(&c.ectx)
            );
        }
        for (a, rel) in self.step.iter().enumerate() {
            for (s, t) in rel {
                let _ = writeln!(out, "edge {} {} {}", s, t, self.action_display(model, a as u32));
            }
        }
        out
    }
}

fn compose(r1: &BTreeSet<(u32, u32)>, r2: &BTreeSet<(u32, u32)>) -> BTreeSet<(u32, u32)> {
    let mut by_src: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for (a, b) in r2 {
        by_src.entry(*a).or_default().push(*b);
    }
    let mut out = BTreeSet::new();
    for (a, b) in r1 {
        if let Some(ts) = by_src.get(b) {
            for t in ts {
                out.insert((*a, *t));
            }
        }
    }
    out
}

fn state_digest(s: &State) -> String {
    use sha2::{Digest, Sha256};
    let mut h = Sha256::new();
    h.update(format!("{s:?}").as_bytes());
    let d = h.finalize();
    let mut out = String::new();
    for b in &d[..6] {
        let _ = write!(out, "{b:02x}");
    }
    out
}

/// Evaluate the event-domain expression at a state, core, and event.
pub fn dom_of(model: &Model, state: &State, core: u32, ev: u32) -> Result<String, MachineError> {
    let policy = model.policy.as_ref().ok_or(MachineError::NoPolicy)?;
    let (kvar, evar, expr) = &policy.dom_evt;
    let mut bindings = BTreeMap::new();
    bindings.insert(kvar.clone(), Value::Sym(model.cores[core as usize].clone()));
    bindings.insert(evar.clone(), Value::Sym(model.event(ev).name.clone()));
    let env = Env::closed(model, state).with_bindings(bindings);
    match eval(expr, &env)? {
        Value::Sym(d) => {
            if policy.domains.contains(&d) {
                Ok(d)
            } else {
                Err(MachineError::DomainOutOfRange { value: d })
            }
        }
        other => Err(MachineError::DomainOutOfRange {
            value: other.to_string(),
        }),
    }
}

/// Build the machine from a validated model by fixpoint over the step
/// relation from the initial configuration.
pub fn build_machine(model: &Model, caps: &Caps) -> Result<Machine, MachineError> {
    let policy = model.policy.as_ref().ok_or(MachineError::NoPolicy)?;
    let _ = policy;
    let universe = Arc::new(state_universe(model, caps.max_universe)?);
    let fuel = caps.fuel_for(universe.len());
    let stepper = Stepper::new(model, universe, fuel);

    let c0 = model.initial_config()?;
    let mut configs: Vec<Config> = vec![c0.clone()];
    let mut ids: BTreeMap<Config, u32> = BTreeMap::new();
    ids.insert(c0, 0);

    let mut actions: Vec<Action> = Vec::new();
    let mut action_ids: BTreeMap<Action, u32> = BTreeMap::new();
    let mut step: Vec<BTreeSet<(u32, u32)>> = Vec::new();

    let mut frontier: Vec<u32> = vec![0];
    while let Some(src) = frontier.pop() {
        let cfg = configs[src as usize].clone();
        for (label, next) in stepper.step_config(&cfg)? {
            let (core, ev) = match label {
                Label::Act { kind, at: Some(k) } => {
                    let ev = match kind {
                        ActKind::Occur(e) => e,
                        ActKind::Prog => cfg.ectx.0[k as usize].ok_or_else(|| {
                            MachineError::NoCurrentEvent {
                                core: model.cores[k as usize].clone(),
                            }
                        })?,
                    };
                    (k, ev)
                }
                _ => unreachable!("parallel steps always carry a core"),
            };
            let dom = dom_of(model, &cfg.state, core, ev)?;
            let action = Action { label, ev, dom };
            let aid = *action_ids.entry(action.clone()).or_insert_with(|| {
                actions.push(action);
                step.push(BTreeSet::new());
                (actions.len() - 1) as u32
            });
            let dst = match ids.get(&next) {
                Some(i) => *i,
                None => {
                    if configs.len() >= caps.max_configs {
                        return Err(MachineError::TooManyConfigs {
                            cap: caps.max_configs,
                        });
                    }
                    let id = configs.len() as u32;
                    configs.push(next.clone());
                    ids.insert(next, id);
                    frontier.push(id);
                    id
                }
            };
            step[aid as usize].insert((src, dst));
        }
    }

    let mut machine = Machine {
        digest: model_digest(model),
        configs,
        actions,
        step,
        c0: 0,
        index: BTreeMap::new(),
    };
    machine.reindex();
    Ok(machine)
}
