//! Bounded semantic validity: enumerate computations including environment
//! steps constrained by the rely, and test the assumption-to-commitment
//! containment directly.

use super::{RgCond, StateRel};
use crate::model::{Config, EventCtx, Model, Spec, State, Universe};
use crate::semantics::{Label, StepError, Stepper};
use crate::verdict::{Verdict, Witness};
use std::collections::HashMap;
use std::sync::Arc;
use thiserror::Error;

/// The four syntactic levels a specification node can sit at; the
/// commitment's final-state clause applies only to the first two.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecLevel {
    Program,
    Event,
    EventSystem,
    Parallel,
}

impl SpecLevel {
    pub fn of(spec: &Spec) -> SpecLevel {
        match spec {
            Spec::Prog(_) => SpecLevel::Program,
            Spec::Event(_) => SpecLevel::Event,
            Spec::Sys(_) => SpecLevel::EventSystem,
            Spec::Par(_) => SpecLevel::Parallel,
        }
    }
}

#[derive(Debug, Error)]
pub enum SemanticError {
    #[error("semantic enumeration exceeded the cap of {cap} nodes")]
    Explosion { cap: usize },
    #[error(transparent)]
    Step(#[from] StepError),
}

fn is_terminal(spec: &Spec, level: SpecLevel) -> bool {
    match level {
        SpecLevel::Program => matches!(spec, Spec::Prog(crate::model::Program::None)),
        SpecLevel::Event => matches!(spec, Spec::Event(e) if e.is_done()),
        _ => false,
    }
}

/// Bounded check that every computation of `spec` from the precondition,
/// under environment steps drawn from the rely, keeps its action steps in
/// the guarantee and lands terminated states in the postcondition.
///
/// Environment steps change the state within the rely and leave the event
/// context unchanged; this is the one place that choice is made.
pub fn semantic_validity(
    model: &Model,
    universe: &Arc<Universe>,
    spec: &Spec,
    rg: &RgCond,
    max_len: usize,
    cap: usize,
    fuel: u64,
) -> Result<Verdict, SemanticError> {
    let t0 = std::time::Instant::now();
    assert!(max_len >= 1);
    let stepper = Stepper::new(model, Arc::clone(universe), fuel);
    let level = SpecLevel::of(spec);
    let x0 = EventCtx::bottom(model.cores.len());
    let sid = |s: &State| universe.id_of(s).expect("state in universe");

    // Rely image per state id.
    let rely_img = |rel: &StateRel, from: u32| -> Vec<u32> { rel.image(from).collect() };

    let mut verdict = Verdict::pass("semantic-validity").with_bound(max_len);
    let mut visited: HashMap<Config, usize> = HashMap::new();
    let mut work: Vec<(Config, usize)> = Vec::new();
    let mut nodes = 0usize;

    for s0 in rg.pre.0.iter().rev() {
        let c = Config {
            spec: spec.clone(),
            state: universe.state(*s0).clone(),
            ectx: x0.clone(),
        };
        work.push((c, max_len - 1));
    }

    while let Some((cfg, budget)) = work.pop() {
        match visited.get(&cfg) {
            Some(b) if *b >= budget => continue,
            _ => {}
        }
        visited.insert(cfg.clone(), budget);
        nodes += 1;
        if nodes > cap {
            return Err(SemanticError::Explosion { cap });
        }

        let here = sid(&cfg.state);
        if is_terminal(&cfg.spec, level) && !rg.post.contains(here) {
            verdict.holds = false;
            verdict.witness = Some(Witness::Trace {
                detail: format!(
                    "terminated in state {} outside the postcondition",
                    model.show_state(&cfg.state)
                ),
                steps: vec![format!("state id {here}")],
            });
            break;
        }
        verdict.checked += 1;

        if budget == 0 {
            continue;
        }

        // Action steps must lie in the guarantee.
        for (label, next) in stepper.step_config(&cfg)? {
            debug_assert!(matches!(label, Label::Act { .. }));
            let there = sid(&next.state);
            if !rg.guar.contains(here, there) {
                verdict.holds = false;
                verdict.witness = Some(Witness::Trace {
                    detail: format!(
                        "action step ({} -> {}) outside the guarantee",
                        model.show_state(&cfg.state),
                        model.show_state(&next.state)
                    ),
                    steps: vec![label.display(model)],
                });
                break;
            }
            work.push((next, budget - 1));
        }
        if !verdict.holds {
            break;
        }

        // Environment steps: rely image, same spec, same event context.
        for there in rely_img(&rg.rely, here) {
            let next = Config {
                spec: cfg.spec.clone(),
                state: universe.state(there).clone(),
                ectx: cfg.ectx.clone(),
            };
            work.push((next, budget - 1));
        }
    }

    verdict.millis = t0.elapsed().as_millis();
    Ok(verdict)
}
