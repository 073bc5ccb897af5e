//! Decomposition checks on computations: simulation equality, serialization
//! of event-system computations into per-event segments, and the conjoin
//! relation between a parallel computation and its per-core projections.

use super::{Computation, Label, Stepper};
use crate::model::{Config, EventSpec, Spec};
use std::collections::{BTreeMap, BTreeSet};

/// Simulation equality: same length, and pointwise equal states, event
/// contexts, and transition labels. Residual specifications are not
/// compared.
pub fn sim_equal(a: &Computation, b: &Computation) -> bool {
    a.len() == b.len()
        && a.steps == b.steps
        && a.configs
            .iter()
            .zip(b.configs.iter())
            .all(|(x, y)| x.state == y.state && x.ectx == y.ectx)
}

/// Advance the set of candidate residual event specs across one step of the
/// enclosing computation.
fn match_step(
    stepper: &Stepper,
    specs: &BTreeSet<EventSpec>,
    label: &Label,
    cur: &Config,
    next: &Config,
) -> BTreeSet<EventSpec> {
    let mut out = BTreeSet::new();
    match label {
        // An environment step is available from any event configuration and
        // may move to any state and context without touching the spec.
        Label::Env => return specs.clone(),
        Label::Act { at: None, .. } => return out,
        Label::Act { at: Some(core), .. } => {
            for spec in specs {
                let succs = match stepper.step_event(spec, *core, &cur.state, &cur.ectx) {
                    Ok(s) => s,
                    Err(_) => continue,
                };
                for (l, cfg) in succs {
                    if l == *label && cfg.state == next.state && cfg.ectx == next.ectx {
                        if let Spec::Event(e) = cfg.spec {
                            out.insert(e);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Does the computation split into consecutive segments, each simulation
/// equal to a computation of some member of `evs`? Segments overlap at cut
/// configurations and each consumes at least one step.
pub fn check_serialization(stepper: &Stepper, comp: &Computation, evs: &BTreeSet<u32>) -> bool {
    let n = comp.len();
    if n == 1 {
        // A one-element computation is a serialization of one one-element
        // event computation.
        return !evs.is_empty();
    }
    let last = n - 1;
    let mut reachable = vec![false; n];
    reachable[0] = true;
    for i in 0..last {
        if !reachable[i] {
            continue;
        }
        for ev in evs {
            let mut specs: BTreeSet<EventSpec> = BTreeSet::new();
            specs.insert(EventSpec::Basic(*ev));
            let mut m = i;
            while m < last && !specs.is_empty() {
                specs = match_step(
                    stepper,
                    &specs,
                    &comp.steps[m],
                    &comp.configs[m],
                    &comp.configs[m + 1],
                );
                m += 1;
                if !specs.is_empty() {
                    reachable[m] = true;
                }
            }
        }
        if reachable[last] {
            return true;
        }
    }
    reachable[last]
}

/// Project a parallel computation onto its per-core component computations;
/// the result conjoins with the input by construction.
pub fn decompose_parallel(comp: &Computation) -> Option<BTreeMap<usize, Computation>> {
    let ncores = match &comp.configs[0].spec {
        Spec::Par(ps) => ps.0.len(),
        _ => return None,
    };
    let mut parts: BTreeMap<usize, Computation> = BTreeMap::new();
    for core in 0..ncores {
        let configs: Vec<Config> = comp
            .configs
            .iter()
            .map(|c| match &c.spec {
                Spec::Par(ps) => Config {
                    spec: Spec::Sys(ps.0[core].clone()),
                    state: c.state.clone(),
                    ectx: c.ectx.clone(),
                },
                _ => unreachable!(),
            })
            .collect();
        let steps: Vec<Label> = comp
            .steps
            .iter()
            .map(|l| match l.core() {
                Some(c) if c as usize == core => *l,
                _ => Label::Env,
            })
            .collect();
        parts.insert(core, Computation { configs, steps });
    }
    Some(parts)
}

/// The conjoin relation: equal lengths, pointwise state and context
/// agreement, per-core spec projection agreement, and every step either an
/// environment step everywhere or an action at exactly one core with
/// environment steps elsewhere.
pub fn check_conjoin(comp: &Computation, parts: &BTreeMap<usize, Computation>) -> bool {
    let ncores = match &comp.configs[0].spec {
        Spec::Par(ps) => ps.0.len(),
        _ => return false,
    };
    if parts.len() != ncores || (0..ncores).any(|c| !parts.contains_key(&c)) {
        return false;
    }
    // Clause 1: equal lengths.
    if parts.values().any(|p| p.len() != comp.len()) {
        return false;
    }
    // Clauses 2 and 3: pointwise state/context agreement and spec
    // projection.
    for (core, part) in parts {
        for (j, pc) in part.configs.iter().enumerate() {
            let cj = &comp.configs[j];
            if pc.state != cj.state || pc.ectx != cj.ectx {
                return false;
            }
            let proj = match &cj.spec {
                Spec::Par(ps) => &ps.0[*core],
                _ => return false,
            };
            match &pc.spec {
                Spec::Sys(sys) if sys == proj => {}
                _ => return false,
            }
        }
    }
    // Clause 4: step shape.
    for (j, label) in comp.steps.iter().enumerate() {
        match label {
            Label::Env => {
                if parts.values().any(|p| !p.steps[j].is_env()) {
                    return false;
                }
            }
            Label::Act { at: Some(core), .. } => {
                let core = *core as usize;
                for (c, p) in parts {
                    if *c == core {
                        if p.steps[j] != *label {
                            return false;
                        }
                    } else if !p.steps[j].is_env() {
                        return false;
                    }
                }
            }
            Label::Act { at: None, .. } => return false,
        }
    }
    true
}
