//! Proof outlines and the rule-premise checker. An outline mirrors the
//! specification tree; every node carries its claimed quadruple, and
//! rule-specific annotations (sequence mid-conditions, loop invariants,
//! per-member and per-core quadruples) become explicit child conditions at
//! construction time. The checker decides every premise by enumeration and
//! reports the first failure in pre-order with its node path.

use super::{
    extensional_quad, extensional_rel, extensional_set, stable_witness, RgCond, RgError, StateRel,
    StateSet,
};
use crate::model::{
    enumerate_ty, eval_bexp, subst_expr, subst_program, Assign, EventSys, Expr, Model, Program,
    Universe, Value,
};
use crate::semantics::{apply_assigns, StepError, Stepper};
use crate::verdict::{Verdict, Witness};
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OutlineError {
    #[error("{path}: missing {what} annotation")]
    MissingAnnotation { path: String, what: String },
    #[error("{path}: residual construct cannot be annotated")]
    Residual { path: String },
    #[error("missing rely-guarantee spec for {name}")]
    MissingRgSpec { name: String },
    #[error(transparent)]
    Rg(#[from] RgError),
    #[error(transparent)]
    Step(#[from] StepError),
}

/// A proof-outline node. Child outlines carry the conditions the rule
/// premises demand; the checker re-verifies the linkage.
#[derive(Debug, Clone)]
pub enum OutlineNode {
    Basic {
        assigns: Vec<Assign>,
    },
    Seq {
        first: Box<Outline>,
        second: Box<Outline>,
    },
    Cond {
        guard: StateSet,
        then_branch: Box<Outline>,
        else_branch: Box<Outline>,
    },
    While {
        guard: StateSet,
        invariant: StateSet,
        body: Box<Outline>,
    },
    Await {
        guard: StateSet,
        body: Program,
    },
    Nondt {
        rel: StateRel,
    },
    AnonyEvt {
        body: Box<Outline>,
    },
    BasicEvt {
        event: u32,
    },
    EvtSeq {
        head: Box<Outline>,
        rest: Box<Outline>,
    },
    EvtSet {
        members: Vec<(u32, Box<Outline>)>,
    },
    Conseq {
        inner: Box<Outline>,
    },
    Par {
        members: Vec<(u32, Box<Outline>)>,
    },
}

#[derive(Debug, Clone)]
pub struct Outline {
    pub rg: RgCond,
    pub node: OutlineNode,
}

impl Outline {
    pub fn new(rg: RgCond, node: OutlineNode) -> Outline {
        Outline { rg, node }
    }
}

fn set_of(model: &Model, universe: &Universe, e: &Expr) -> Result<StateSet, OutlineError> {
    Ok(extensional_set(model, universe, e)?)
}

/// Build a program outline under a given quadruple, consuming the inline
/// mid-condition and invariant annotations.
pub fn program_outline(
    model: &Model,
    universe: &Universe,
    program: &Program,
    rg: RgCond,
    path: &str,
) -> Result<Outline, OutlineError> {
    let node = match program {
        Program::None => {
            return Err(OutlineError::Residual {
                path: path.to_string(),
            })
        }
        Program::Basic(assigns) => OutlineNode::Basic {
            assigns: assigns.clone(),
        },
        Program::Seq(p1, p2, mid) => {
            let mid = mid.as_ref().ok_or_else(|| OutlineError::MissingAnnotation {
                path: path.to_string(),
                what: "sequence mid-condition".into(),
            })?;
            let m = set_of(model, universe, mid)?;
            let first = program_outline(
                model,
                universe,
                p1,
                RgCond {
                    pre: rg.pre.clone(),
                    rely: rg.rely.clone(),
                    guar: rg.guar.clone(),
                    post: m.clone(),
                },
                &format!("{path}/seq.first"),
            )?;
            let second = program_outline(
                model,
                universe,
                p2,
                RgCond {
                    pre: m,
                    rely: rg.rely.clone(),
                    guar: rg.guar.clone(),
                    post: rg.post.clone(),
                },
                &format!("{path}/seq.second"),
            )?;
            OutlineNode::Seq {
                first: Box::new(first),
                second: Box::new(second),
            }
        }
        Program::Cond(b, p1, p2) => {
            let guard = set_of(model, universe, b)?;
            let then_branch = program_outline(
                model,
                universe,
                p1,
                RgCond {
                    pre: rg.pre.intersect(&guard),
                    rely: rg.rely.clone(),
                    guar: rg.guar.clone(),
                    post: rg.post.clone(),
                },
                &format!("{path}/cond.then"),
            )?;
            let else_branch = program_outline(
                model,
                universe,
                p2,
                RgCond {
                    pre: rg.pre.intersect(&guard.complement(universe)),
                    rely: rg.rely.clone(),
                    guar: rg.guar.clone(),
                    post: rg.post.clone(),
                },
                &format!("{path}/cond.else"),
            )?;
            OutlineNode::Cond {
                guard,
                then_branch: Box::new(then_branch),
                else_branch: Box::new(else_branch),
            }
        }
        Program::While(b, body, inv) => {
            let inv = inv.as_ref().ok_or_else(|| OutlineError::MissingAnnotation {
                path: path.to_string(),
                what: "loop invariant".into(),
            })?;
            let guard = set_of(model, universe, b)?;
            let invariant = set_of(model, universe, inv)?;
            let body = program_outline(
                model,
                universe,
                body,
                RgCond {
                    pre: invariant.intersect(&guard),
                    rely: rg.rely.clone(),
                    guar: rg.guar.clone(),
                    post: invariant.clone(),
                },
                &format!("{path}/while.body"),
            )?;
            OutlineNode::While {
                guard,
                invariant,
                body: Box::new(body),
            }
        }
        Program::Await(b, body) => OutlineNode::Await {
            guard: set_of(model, universe, b)?,
            body: (**body).clone(),
        },
        Program::Nondt(r) => OutlineNode::Nondt {
            rel: extensional_rel(model, universe, r)?,
        },
    };
    Ok(Outline::new(rg, node))
}

/// Outline for a declared event at a quadruple: a basic-event node whose
/// per-valuation body outlines are constructed during checking.
pub fn event_outline(event: u32, rg: RgCond) -> Outline {
    Outline::new(rg, OutlineNode::BasicEvt { event })
}

/// Outline for an event system at a quadruple, taking per-event quadruples
/// from the given Gamma map and mid-conditions from the system annotations.
pub fn system_outline(
    model: &Model,
    universe: &Universe,
    sys: &EventSys,
    rg: RgCond,
    gamma: &BTreeMap<u32, RgCond>,
    path: &str,
) -> Result<Outline, OutlineError> {
    match sys {
        EventSys::Set(members) => {
            let mut outlines = Vec::new();
            for m in members {
                let quad = gamma.get(m).ok_or_else(|| OutlineError::MissingRgSpec {
                    name: model.event(*m).name.clone(),
                })?;
                outlines.push((*m, Box::new(event_outline(*m, quad.clone()))));
            }
            Ok(Outline::new(rg, OutlineNode::EvtSet { members: outlines }))
        }
        EventSys::Seq(head, mid, rest) => {
            let ev = match head {
                crate::model::EventSpec::Basic(i) => *i,
                crate::model::EventSpec::Anony(_) => {
                    return Err(OutlineError::Residual {
                        path: path.to_string(),
                    })
                }
            };
            let mid = mid.as_ref().ok_or_else(|| OutlineError::MissingAnnotation {
                path: path.to_string(),
                what: "event-sequence mid-condition".into(),
            })?;
            let m = set_of(model, universe, mid)?;
            let head_outline = event_outline(
                ev,
                RgCond {
                    pre: rg.pre.clone(),
                    rely: rg.rely.clone(),
                    guar: rg.guar.clone(),
                    post: m.clone(),
                },
            );
            let rest_outline = system_outline(
                model,
                universe,
                rest,
                RgCond {
                    pre: m,
                    rely: rg.rely.clone(),
                    guar: rg.guar.clone(),
                    post: rg.post.clone(),
                },
                gamma,
                &format!("{path}/evtseq.rest"),
            )?;
            Ok(Outline::new(
                rg,
                OutlineNode::EvtSeq {
                    head: Box::new(head_outline),
                    rest: Box::new(rest_outline),
                },
            ))
        }
    }
}

/// The Gamma map of a model, extensionalized: per-event quadruples from the
/// annotation block, keyed by event index.
pub fn gamma_of_model(
    model: &Model,
    universe: &Universe,
) -> Result<BTreeMap<u32, RgCond>, OutlineError> {
    let mut gamma = BTreeMap::new();
    for (name, quad) in &model.rgspec.events {
        if let Some(idx) = model.event_index(name) {
            gamma.insert(idx as u32, extensional_quad(model, universe, quad)?);
        }
    }
    Ok(gamma)
}

/// Whole-model outline: a parallel node at `top`, per-core system outlines
/// at the declared per-core quadruples.
pub fn model_outline(
    model: &Model,
    universe: &Universe,
    top: RgCond,
) -> Result<Outline, OutlineError> {
    let gamma = gamma_of_model(model, universe)?;
    let mut members = Vec::new();
    for (core, sys) in model.systems.iter().enumerate() {
        let core_name = &model.cores[core];
        let quad = model
            .rgspec
            .systems
            .get(core_name)
            .ok_or_else(|| OutlineError::MissingRgSpec {
                name: format!("system on {core_name}"),
            })?;
        let rg = extensional_quad(model, universe, quad)?;
        let outline = system_outline(
            model,
            universe,
            sys,
            rg,
            &gamma,
            &format!("par/{core_name}"),
        )?;
        members.push((core as u32, Box::new(outline)));
    }
    Ok(Outline::new(top, OutlineNode::Par { members }))
}

struct Checker<'a> {
    model: &'a Model,
    universe: &'a Arc<Universe>,
    stepper: Stepper<'a>,
    saw_while: bool,
}

type CheckResult = Result<Option<Witness>, OutlineError>;

impl<'a> Checker<'a> {
    fn fail(&self, path: &str, premise: &str, detail: String) -> CheckResult {
        Ok(Some(Witness::Premise {
            path: path.to_string(),
            premise: premise.to_string(),
            detail,
        }))
    }

    fn check_stable(&self, path: &str, premise: &str, set: &StateSet, rel: &StateRel) -> CheckResult {
        match stable_witness(set, rel) {
            None => Ok(None),
            Some((a, b)) => self.fail(
                path,
                premise,
                format!(
                    "rely step {} -> {} leaves the set",
                    self.model.show_state(self.universe.state(a)),
                    self.model.show_state(self.universe.state(b))
                ),
            ),
        }
    }

    fn check_linkage(&self, path: &str, parent: &RgCond, child: &Outline, expect: &RgCond) -> CheckResult {
        let _ = parent;
        if child.rg != *expect {
            return self.fail(
                path,
                "shape",
                "child quadruple does not match the rule's premise shape".into(),
            );
        }
        Ok(None)
    }

    fn check(&mut self, outline: &Outline, path: &str) -> CheckResult {
        let rg = &outline.rg;
        match &outline.node {
            OutlineNode::Basic { assigns } => {
                // pre is contained in the preimage of post under the
                // transformer.
                for s in &rg.pre.0 {
                    let s2 = apply_assigns(self.model, assigns, self.universe.state(*s))?;
                    let t = self.universe.id_of(&s2).expect("state in universe");
                    if !rg.guar.contains(*s, t) {
                        return self.fail(
                            path,
                            "basic.effect-in-guar",
                            format!(
                                "effect pair from {} is outside the guarantee",
                                self.model.show_state(self.universe.state(*s))
                            ),
                        );
                    }
                    if !rg.guar.contains(*s, *s) {
                        return self.fail(
                            path,
                            "basic.effect-in-guar",
                            format!(
                                "stutter pair at {} is outside the guarantee",
                                self.model.show_state(self.universe.state(*s))
                            ),
                        );
                    }
                    if !rg.post.contains(t) {
                        return self.fail(
                            path,
                            "basic.pre-establishes-post",
                            format!(
                                "transformer sends {} outside the postcondition",
                                self.model.show_state(self.universe.state(*s))
                            ),
                        );
                    }
                }
                if let Some(w) = self.check_stable(path, "basic.stable-pre", &rg.pre, &rg.rely)? {
                    return Ok(Some(w));
                }
                if let Some(w) = self.check_stable(path, "basic.stable-post", &rg.post, &rg.rely)? {
                    return Ok(Some(w));
                }
                Ok(None)
            }
            OutlineNode::Seq { first, second } => {
                let expect_first = RgCond {
                    pre: rg.pre.clone(),
                    rely: rg.rely.clone(),
                    guar: rg.guar.clone(),
                    post: first.rg.post.clone(),
                };
                if let Some(w) = self.check_linkage(path, rg, first, &expect_first)? {
                    return Ok(Some(w));
                }
                let expect_second = RgCond {
                    pre: first.rg.post.clone(),
                    rely: rg.rely.clone(),
                    guar: rg.guar.clone(),
                    post: rg.post.clone(),
                };
                if let Some(w) = self.check_linkage(path, rg, second, &expect_second)? {
                    return Ok(Some(w));
                }
                if let Some(w) = self.check(first, &format!("{path}/seq.first"))? {
                    return Ok(Some(w));
                }
                self.check(second, &format!("{path}/seq.second"))
            }
            OutlineNode::Cond {
                guard,
                then_branch,
                else_branch,
            } => {
                if let Some(w) = self.check_stable(path, "cond.stable-pre", &rg.pre, &rg.rely)? {
                    return Ok(Some(w));
                }
                if !rg.guar.is_reflexive(self.universe) {
                    return self.fail(path, "cond.guar-reflexive", "guarantee is not reflexive".into());
                }
                let expect_then = RgCond {
                    pre: rg.pre.intersect(guard),
                    rely: rg.rely.clone(),
                    guar: rg.guar.clone(),
                    post: rg.post.clone(),
                };
                if let Some(w) = self.check_linkage(path, rg, then_branch, &expect_then)? {
                    return Ok(Some(w));
                }
                let expect_else = RgCond {
                    pre: rg.pre.intersect(&guard.complement(self.universe)),
                    rely: rg.rely.clone(),
                    guar: rg.guar.clone(),
                    post: rg.post.clone(),
                };
                if let Some(w) = self.check_linkage(path, rg, else_branch, &expect_else)? {
                    return Ok(Some(w));
                }
                if let Some(w) = self.check(then_branch, &format!("{path}/cond.then"))? {
                    return Ok(Some(w));
                }
                self.check(else_branch, &format!("{path}/cond.else"))
            }
            OutlineNode::While {
                guard,
                invariant,
                body,
            } => {
                self.saw_while = true;
                if !rg.pre.is_subset(invariant) {
                    return self.fail(
                        path,
                        "while.pre-implies-inv",
                        "precondition is not contained in the invariant".into(),
                    );
                }
                if !invariant
                    .intersect(&guard.complement(self.universe))
                    .is_subset(&rg.post)
                {
                    return self.fail(
                        path,
                        "while.exit-implies-post",
                        "invariant and negated guard do not establish the postcondition".into(),
                    );
                }
                if let Some(w) = self.check_stable(path, "while.stable-inv", invariant, &rg.rely)? {
                    return Ok(Some(w));
                }
                if let Some(w) = self.check_stable(path, "while.stable-post", &rg.post, &rg.rely)? {
                    return Ok(Some(w));
                }
                if !rg.guar.is_reflexive(self.universe) {
                    return self.fail(path, "while.guar-reflexive", "guarantee is not reflexive".into());
                }
                let expect_body = RgCond {
                    pre: invariant.intersect(guard),
                    rely: rg.rely.clone(),
                    guar: rg.guar.clone(),
                    post: invariant.clone(),
                };
                if let Some(w) = self.check_linkage(path, rg, body, &expect_body)? {
                    return Ok(Some(w));
                }
                self.check(body, &format!("{path}/while.body"))
            }
            OutlineNode::Await { guard, body } => {
                // Discharged semantically: every terminating atomic run from
                // pre-and-guard states ends in the postcondition with the
                // whole step inside the guarantee.
                for s in rg.pre.intersect(guard).0.iter() {
                    let ends = self.stepper.step_program(
                        &Program::Await(Expr::lit_bool(true), Box::new(body.clone())),
                        self.universe.state(*s),
                        &crate::model::EventCtx::bottom(self.model.cores.len()),
                    )?;
                    for (_, cfg) in ends {
                        let t = self.universe.id_of(&cfg.state).expect("state in universe");
                        if !rg.post.contains(t) {
                            return self.fail(
                                path,
                                "await.body-establishes-post",
                                format!(
                                    "atomic run from {} ends outside the postcondition",
                                    self.model.show_state(self.universe.state(*s))
                                ),
                            );
                        }
                        if !rg.guar.contains(*s, t) {
                            return self.fail(
                                path,
                                "await.effect-in-guar",
                                format!(
                                    "atomic run from {} steps outside the guarantee",
                                    self.model.show_state(self.universe.state(*s))
                                ),
                            );
                        }
                    }
                }
                if let Some(w) = self.check_stable(path, "await.stable-pre", &rg.pre, &rg.rely)? {
                    return Ok(Some(w));
                }
                self.check_stable(path, "await.stable-post", &rg.post, &rg.rely)
            }
            OutlineNode::Nondt { rel } => {
                for s in &rg.pre.0 {
                    let mut any = false;
                    for t in rel.image(*s) {
                        any = true;
                        if !rg.guar.contains(*s, t) {
                            return self.fail(
                                path,
                                "nondt.effect-in-guar",
                                format!(
                                    "relation pair from {} is outside the guarantee",
                                    self.model.show_state(self.universe.state(*s))
                                ),
                            );
                        }
                        if !rg.post.contains(t) {
                            return self.fail(
                                path,
                                "nondt.pre-establishes-post",
                                format!(
                                    "relation sends {} outside the postcondition",
                                    self.model.show_state(self.universe.state(*s))
                                ),
                            );
                        }
                    }
                    if !any {
                        return self.fail(
                            path,
                            "nondt.enabled",
                            format!(
                                "relation is not enabled at {}",
                                self.model.show_state(self.universe.state(*s))
                            ),
                        );
                    }
                }
                if let Some(w) = self.check_stable(path, "nondt.stable-pre", &rg.pre, &rg.rely)? {
                    return Ok(Some(w));
                }
                self.check_stable(path, "nondt.stable-post", &rg.post, &rg.rely)
            }
            OutlineNode::AnonyEvt { body } => {
                if let Some(w) = self.check_linkage(path, rg, body, rg)? {
                    return Ok(Some(w));
                }
                self.check(body, &format!("{path}/anonyevt.body"))
            }
            OutlineNode::BasicEvt { event } => {
                if let Some(w) = self.check_stable(path, "basicevt.stable-pre", &rg.pre, &rg.rely)? {
                    return Ok(Some(w));
                }
                if !rg.guar.is_reflexive(self.universe) {
                    return self.fail(
                        path,
                        "basicevt.guar-reflexive",
                        "guarantee is not reflexive".into(),
                    );
                }
                let def = self.model.event(*event).clone();
                let domains: Vec<Vec<Value>> = def
                    .params
                    .iter()
                    .map(|(_, ty)| enumerate_ty(self.model, ty))
                    .collect();
                let mut valuations: Vec<Vec<Value>> = vec![vec![]];
                for d in &domains {
                    let mut next = Vec::new();
                    for v in &valuations {
                        for x in d {
                            let mut v2 = v.clone();
                            v2.push(x.clone());
                            next.push(v2);
                        }
                    }
                    valuations = next;
                }
                for valuation in valuations {
                    for core in 0..self.model.cores.len() {
                        let mut guard = def.guard.clone();
                        let mut body = def.body.clone();
                        for ((name, _), v) in def.params.iter().zip(valuation.iter()) {
                            guard = subst_expr(&guard, name, v);
                            body = subst_program(&body, name, v);
                        }
                        if let Some(kv) = &def.kvar {
                            let core_sym = Value::Sym(self.model.cores[core].clone());
                            guard = subst_expr(&guard, kv, &core_sym);
                            body = subst_program(&body, kv, &core_sym);
                        }
                        let guard_set = set_of(self.model, self.universe, &guard)?;
                        let body_rg = RgCond {
                            pre: rg.pre.intersect(&guard_set),
                            rely: rg.rely.clone(),
                            guar: rg.guar.clone(),
                            post: rg.post.clone(),
                        };
                        let vals: Vec<String> =
                            valuation.iter().map(|v| v.to_string()).collect();
                        let sub_path = format!(
                            "{path}/{}({})@{}",
                            def.name,
                            vals.join(","),
                            self.model.cores[core]
                        );
                        let body_outline =
                            program_outline(self.model, self.universe, &body, body_rg, &sub_path)?;
                        if let Some(w) = self.check(&body_outline, &sub_path)? {
                            return Ok(Some(w));
                        }
                    }
                }
                Ok(None)
            }
            OutlineNode::EvtSeq { head, rest } => {
                let expect_head = RgCond {
                    pre: rg.pre.clone(),
                    rely: rg.rely.clone(),
                    guar: rg.guar.clone(),
                    post: head.rg.post.clone(),
                };
                if let Some(w) = self.check_linkage(path, rg, head, &expect_head)? {
                    return Ok(Some(w));
                }
                let expect_rest = RgCond {
                    pre: head.rg.post.clone(),
                    rely: rg.rely.clone(),
                    guar: rg.guar.clone(),
                    post: rg.post.clone(),
                };
                if let Some(w) = self.check_linkage(path, rg, rest, &expect_rest)? {
                    return Ok(Some(w));
                }
                if let Some(w) = self.check(head, &format!("{path}/evtseq.head"))? {
                    return Ok(Some(w));
                }
                self.check(rest, &format!("{path}/evtseq.rest"))
            }
            OutlineNode::EvtSet { members } => {
                // Premise 1: each member event derivable at its quadruple.
                for (ev, m) in members {
                    let name = &self.model.event(*ev).name;
                    if let Some(w) = self.check(m, &format!("{path}/evtset.{name}"))? {
                        return Ok(Some(w));
                    }
                }
                // Premises 2-5: set-level inclusions.
                for (ev, m) in members {
                    let name = &self.model.event(*ev).name;
                    if !rg.pre.is_subset(&m.rg.pre) {
                        return self.fail(
                            path,
                            "evtset.pre-implies-member-pre",
                            format!("set precondition not contained in {name}'s"),
                        );
                    }
                    if !rg.rely.is_subset(&m.rg.rely) {
                        return self.fail(
                            path,
                            "evtset.rely-implies-member-rely",
                            format!("set rely not contained in {name}'s"),
                        );
                    }
                    if !m.rg.guar.is_subset(&rg.guar) {
                        return self.fail(
                            path,
                            "evtset.member-guar-implies-guar",
                            format!("{name}'s guarantee exceeds the set's"),
                        );
                    }
                    if !m.rg.post.is_subset(&rg.post) {
                        return self.fail(
                            path,
                            "evtset.member-post-implies-post",
                            format!("{name}'s postcondition exceeds the set's"),
                        );
                    }
                }
                // Premise 6: every member's postcondition re-establishes
                // every member's precondition.
                for (ev_i, m_i) in members {
                    for (ev_j, m_j) in members {
                        if !m_i.rg.post.is_subset(&m_j.rg.pre) {
                            return self.fail(
                                path,
                                "evtset.post-implies-pre",
                                format!(
                                    "{}'s postcondition does not establish {}'s precondition",
                                    self.model.event(*ev_i).name,
                                    self.model.event(*ev_j).name
                                ),
                            );
                        }
                    }
                }
                // Premises 7-8.
                if let Some(w) = self.check_stable(path, "evtset.stable-pre", &rg.pre, &rg.rely)? {
                    return Ok(Some(w));
                }
                if !rg.guar.is_reflexive(self.universe) {
                    return self.fail(
                        path,
                        "evtset.guar-reflexive",
                        "guarantee is not reflexive".into(),
                    );
                }
                Ok(None)
            }
            OutlineNode::Conseq { inner } => {
                if !rg.pre.is_subset(&inner.rg.pre) {
                    return self.fail(path, "conseq.pre", "precondition does not strengthen".into());
                }
                if !rg.rely.is_subset(&inner.rg.rely) {
                    return self.fail(path, "conseq.rely", "rely does not strengthen".into());
                }
                if !inner.rg.guar.is_subset(&rg.guar) {
                    return self.fail(path, "conseq.guar", "guarantee does not weaken".into());
                }
                if !inner.rg.post.is_subset(&rg.post) {
                    return self.fail(path, "conseq.post", "postcondition does not weaken".into());
                }
                self.check(inner, &format!("{path}/conseq.inner"))
            }
            OutlineNode::Par { members } => {
                for (core, m) in members {
                    let name = &self.model.cores[*core as usize];
                    if let Some(w) = self.check(m, &format!("{path}/par.{name}"))? {
                        return Ok(Some(w));
                    }
                }
                for (core, m) in members {
                    let name = &self.model.cores[*core as usize];
                    if !rg.pre.is_subset(&m.rg.pre) {
                        return self.fail(
                            path,
                            "par.pre-implies-member-pre",
                            format!("parallel precondition not contained in {name}'s"),
                        );
                    }
                    if !rg.rely.is_subset(&m.rg.rely) {
                        return self.fail(
                            path,
                            "par.rely-implies-member-rely",
                            format!("parallel rely not contained in {name}'s"),
                        );
                    }
                    if !m.rg.guar.is_subset(&rg.guar) {
                        return self.fail(
                            path,
                            "par.member-guar-implies-guar",
                            format!("{name}'s guarantee exceeds the parallel one"),
                        );
                    }
                    if !m.rg.post.is_subset(&rg.post) {
                        return self.fail(
                            path,
                            "par.member-post-implies-post",
                            format!("{name}'s postcondition exceeds the parallel one"),
                        );
                    }
                }
                for (c1, m1) in members {
                    for (c2, m2) in members {
                        if c1 == c2 {
                            continue;
                        }
                        if !m1.rg.guar.is_subset(&m2.rg.rely) {
                            return self.fail(
                                path,
                                "par.cross-guar-rely",
                                format!(
                                    "guarantee of {} is not contained in the rely of {}",
                                    self.model.cores[*c1 as usize], self.model.cores[*c2 as usize]
                                ),
                            );
                        }
                    }
                }
                Ok(None)
            }
        }
    }
}

/// Check every rule premise of an outline by enumeration; the verdict names
/// the first failing premise and node path in pre-order.
pub fn check_outline(
    model: &Model,
    universe: &Arc<Universe>,
    outline: &Outline,
    fuel: u64,
) -> Result<Verdict, OutlineError> {
    let t0 = std::time::Instant::now();
    let mut checker = Checker {
        model,
        universe,
        stepper: Stepper::new(model, Arc::clone(universe), fuel),
        saw_while: false,
    };
    let result = checker.check(outline, "outline")?;
    let mut verdict = match result {
        None => Verdict::pass("proof-outline"),
        Some(w) => Verdict::fail("proof-outline", w),
    };
    if checker.saw_while {
        verdict = verdict.note(
            "loop rule uses the invariant-annotated reading: body is checked against the invariant",
        );
    }
    verdict.millis = t0.elapsed().as_millis();
    Ok(verdict)
}

/// Helper used in tests: check whether a boolean expression holds in a
/// specific universe state.
pub fn holds_at(model: &Model, universe: &Universe, e: &Expr, id: u32) -> Result<bool, RgError> {
    Ok(eval_bexp(
        model,
        universe.state(id),
        &BTreeMap::new(),
        e,
    )?)
}
