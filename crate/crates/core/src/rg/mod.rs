//! Rely-guarantee machinery: extensional specifications over the enumerated
//! state universe, stability, the assumption/commitment membership tests,
//! the proof-outline checker, and the bounded semantic validity oracle.

mod outline;
mod semantic;

pub use outline::{
    check_outline, event_outline, gamma_of_model, holds_at, model_outline, program_outline,
    system_outline, Outline, OutlineError, OutlineNode,
};
pub use semantic::{semantic_validity, SemanticError, SpecLevel};

use crate::model::{
    eval_bexp, eval_rel_pair, Expr, Model, State, Universe,
};
use crate::semantics::{Computation, Label};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RgError {
    #[error(transparent)]
    Eval(#[from] crate::model::EvalError),
}

/// Extensional state set over universe-state ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSet(pub BTreeSet<u32>);

impl StateSet {
    pub fn universal(universe: &Universe) -> StateSet {
        StateSet((0..universe.len() as u32).collect())
    }

    pub fn empty() -> StateSet {
        StateSet(BTreeSet::new())
    }

    pub fn singleton(id: u32) -> StateSet {
        StateSet(std::iter::once(id).collect())
    }

    pub fn contains(&self, id: u32) -> bool {
        self.0.contains(&id)
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn intersect(&self, other: &StateSet) -> StateSet {
        StateSet(self.0.intersection(&other.0).copied().collect())
    }

    pub fn complement(&self, universe: &Universe) -> StateSet {
        StateSet(
            (0..universe.len() as u32)
                .filter(|i| !self.0.contains(i))
                .collect(),
        )
    }
}

/// Extensional state relation over universe-state ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateRel(pub BTreeSet<(u32, u32)>);

impl StateRel {
    pub fn identity(universe: &Universe) -> StateRel {
        StateRel((0..universe.len() as u32).map(|i| (i, i)).collect())
    }

    pub fn universal(universe: &Universe) -> StateRel {
        let n = universe.len() as u32;
        StateRel(
            (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .collect(),
        )
    }

    pub fn empty() -> StateRel {
        StateRel(BTreeSet::new())
    }

    pub fn contains(&self, a: u32, b: u32) -> bool {
        self.0.contains(&(a, b))
    }

    pub fn is_subset(&self, other: &StateRel) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_reflexive(&self, universe: &Universe) -> bool {
        (0..universe.len() as u32).all(|i| self.0.contains(&(i, i)))
    }

    pub fn image(&self, from: u32) -> impl Iterator<Item = u32> + '_ {
        self.0
            .range((from, 0)..=(from, u32::MAX))
            .map(|(_, t)| *t)
    }
}

/// An extensional rely-guarantee quadruple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgCond {
    pub pre: StateSet,
    pub rely: StateRel,
    pub guar: StateRel,
    pub post: StateSet,
}

impl RgCond {
    /// The relaxed top specification: a singleton precondition, empty rely,
    /// and universal guarantee/postcondition.
    pub fn top_from(universe: &Universe, s0: u32) -> RgCond {
        RgCond {
            pre: StateSet::singleton(s0),
            rely: StateRel::empty(),
            guar: StateRel::universal(universe),
            post: StateSet::universal(universe),
        }
    }
}

/// Evaluate a boolean state expression into an extensional set.
pub fn extensional_set(
    model: &Model,
    universe: &Universe,
    e: &Expr,
) -> Result<StateSet, RgError> {
    let mut out = BTreeSet::new();
    let empty = BTreeMap::new();
    for (i, s) in universe.states.iter().enumerate() {
        if eval_bexp(model, s, &empty, e)? {
            out.insert(i as u32);
        }
    }
    Ok(StateSet(out))
}

/// Evaluate a relational expression into an extensional relation.
pub fn extensional_rel(
    model: &Model,
    universe: &Universe,
    e: &Expr,
) -> Result<StateRel, RgError> {
    let mut out = BTreeSet::new();
    for (i, si) in universe.states.iter().enumerate() {
        for (j, sj) in universe.states.iter().enumerate() {
            if eval_rel_pair(model, si, sj, e)? {
                out.insert((i as u32, j as u32));
            }
        }
    }
    Ok(StateRel(out))
}

/// Extensionalize a syntactic quadruple.
pub fn extensional_quad(
    model: &Model,
    universe: &Universe,
    q: &crate::model::RgQuad,
) -> Result<RgCond, RgError> {
    Ok(RgCond {
        pre: extensional_set(model, universe, &q.pre)?,
        rely: extensional_rel(model, universe, &q.rely)?,
        guar: extensional_rel(model, universe, &q.guar)?,
        post: extensional_set(model, universe, &q.post)?,
    })
}

/// Stability: the set is closed under the relation.
pub fn stable(set: &StateSet, rel: &StateRel) -> bool {
    rel.0
        .iter()
        .all(|(a, b)| !set.contains(*a) || set.contains(*b))
}

/// First witness of instability, for premise reports.
pub fn stable_witness(set: &StateSet, rel: &StateRel) -> Option<(u32, u32)> {
    rel.0
        .iter()
        .find(|(a, b)| set.contains(*a) && !set.contains(*b))
        .copied()
}

/// Assumption membership: the initial state satisfies the precondition and
/// every environment step lies in the rely.
pub fn in_assumption(
    universe: &Universe,
    comp: &Computation,
    pre: &StateSet,
    rely: &StateRel,
) -> bool {
    let sid = |s: &State| universe.id_of(s).expect("state in universe");
    if !pre.contains(sid(&comp.configs[0].state)) {
        return false;
    }
    comp.steps.iter().enumerate().all(|(i, l)| {
        !l.is_env()
            || rely.contains(
                sid(&comp.configs[i].state),
                sid(&comp.configs[i + 1].state),
            )
    })
}

/// Commitment membership: every action step lies in the guarantee, and at
/// program/event level a terminated final configuration satisfies the
/// postcondition. System levels release the final-state condition.
pub fn in_commitment(
    universe: &Universe,
    comp: &Computation,
    guar: &StateRel,
    post: &StateSet,
    level: SpecLevel,
) -> bool {
    let sid = |s: &State| universe.id_of(s).expect("state in universe");
    for (i, l) in comp.steps.iter().enumerate() {
        if matches!(l, Label::Act { .. })
            && !guar.contains(
                sid(&comp.configs[i].state),
                sid(&comp.configs[i + 1].state),
            )
        {
            return false;
        }
    }
    let last = comp.last();
    let terminated = match level {
        SpecLevel::Program => matches!(
            &last.spec,
            crate::model::Spec::Prog(crate::model::Program::None)
        ),
        SpecLevel::Event => matches!(
            &last.spec,
            crate::model::Spec::Event(e) if e.is_done()
        ),
        SpecLevel::EventSystem | SpecLevel::Parallel => false,
    };
    if terminated && !post.contains(sid(&last.state)) {
        return false;
    }
    true
}
