//! The step relations at the four syntactic levels. Each function returns
//! exactly the successors licensed by the transition rules, sorted by the
//! documented total order (label kind, core, event name, then target state).

use super::{ActKind, Label};
use crate::model::validate::value_in_ty;
use crate::model::{
    eval, subst_program, Config, Env, EventCtx, EventSpec, EventSys, Model, ParSys, Program, Spec,
    State, Universe, Value,
};
use crate::syntax::fmt_expr;
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

/// All parameter valuations in declared order; a parameterless event has
/// exactly one (empty) valuation.
fn valuations(domains: &[Vec<Value>]) -> Vec<Vec<Value>> {
    let mut out: Vec<Vec<Value>> = vec![vec![]];
    for d in domains {
        let mut next = Vec::with_capacity(out.len() * d.len());
        for v in &out {
            for x in d {
                let mut v2 = v.clone();
                v2.push(x.clone());
                next.push(v2);
            }
        }
        out = next;
    }
    out
}

#[derive(Debug, Clone, Error)]
pub enum StepError {
    #[error("await divergence: atomic body of AWAIT {guard} exceeded fuel {fuel}")]
    AwaitDivergence { guard: String, fuel: u64 },
    #[error("assignment writes {value} outside the declared domain of '{var}'")]
    OutOfDomain { var: String, value: String },
    #[error("conflicting parallel assignments to '{var}' key {key}")]
    ConflictingAssign { var: String, key: String },
    #[error("evaluation failed: {0}")]
    Eval(#[from] crate::model::EvalError),
}

/// Interpreter for a fixed model. Holds the enumerated state universe (for
/// nondeterministic relations) and the await fuel.
pub struct Stepper<'m> {
    pub model: &'m Model,
    pub universe: Arc<Universe>,
    pub fuel: u64,
}

type Succs = Vec<(Label, Config)>;

/// Apply a parallel assignment to a state: evaluate all right-hand sides and
/// keys first, then write, rejecting conflicting writes and values outside
/// the declared domains.
pub fn apply_assigns(
    model: &Model,
    assigns: &[crate::model::Assign],
    s: &State,
) -> Result<State, StepError> {
    let env = Env::closed(model, s);
    let mut writes: Vec<(usize, Option<Value>, Value)> = Vec::new();
    for a in assigns {
        let idx = model.var_index(&a.var).expect("validated");
        let key = match &a.key {
            Some(k) => Some(eval(k, &env)?),
            None => None,
        };
        let val = eval(&a.rhs, &env)?;
        writes.push((idx, key, val));
    }
    let mut out = s.clone();
    let mut seen: BTreeMap<(usize, Option<Value>), ()> = BTreeMap::new();
    for (idx, key, val) in writes {
        if seen.insert((idx, key.clone()), ()).is_some() {
            return Err(StepError::ConflictingAssign {
                var: model.vars[idx].name.clone(),
                key: key.map(|k| k.to_string()).unwrap_or_default(),
            });
        }
        match key {
            None => out.0[idx] = val,
            Some(Value::Sym(k)) => match &mut out.0[idx] {
                Value::Map(m) => {
                    m.insert(k, val);
                }
                _ => unreachable!("validated map assignment"),
            },
            Some(_) => unreachable!("validated map key"),
        }
    }
    for (i, v) in model.vars.iter().enumerate() {
        if !value_in_ty(model, &out.0[i], &v.ty) {
            return Err(StepError::OutOfDomain {
                var: v.name.clone(),
                value: out.0[i].to_string(),
            });
        }
    }
    Ok(out)
}

impl<'m> Stepper<'m> {
    pub fn new(model: &'m Model, universe: Arc<Universe>, fuel: u64) -> Stepper<'m> {
        Stepper {
            model,
            universe,
            fuel,
        }
    }

    fn apply_basic(&self, assigns: &[crate::model::Assign], s: &State) -> Result<State, StepError> {
        apply_assigns(self.model, assigns, s)
    }

    /// All terminating atomic runs of a program from `s`, used by the await
    /// rule. Fuel-bounded depth-first search over program steps only.
    fn atomic_runs(&self, p: &Program, s: &State, x: &EventCtx) -> Result<Vec<State>, StepError> {
        let mut out = Vec::new();
        let mut stack = vec![(p.clone(), s.clone())];
        let mut budget = self.fuel;
        while let Some((p, s)) = stack.pop() {
            if budget == 0 {
                return Err(StepError::AwaitDivergence {
                    guard: "<inner>".into(),
                    fuel: self.fuel,
                });
            }
            budget -= 1;
            for (_, cfg) in self.step_program(&p, &s, x)? {
                match cfg.spec {
                    Spec::Prog(Program::None) => out.push(cfg.state),
                    Spec::Prog(p2) => stack.push((p2, cfg.state)),
                    _ => unreachable!(),
                }
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Program-level step relation. Program actions carry no core and never
    /// change the event context.
    pub fn step_program(
        &self,
        p: &Program,
        s: &State,
        x: &EventCtx,
    ) -> Result<Succs, StepError> {
        let label = Label::Act {
            kind: ActKind::Prog,
            at: None,
        };
        let mk = |p2: Program, s2: State| (label, Config {
            spec: Spec::Prog(p2),
            state: s2,
            ectx: x.clone(),
        });
        let mut out: Succs = Vec::new();
        match p {
            Program::None => {}
            Program::Basic(assigns) => {
                let s2 = self.apply_basic(assigns, s)?;
                out.push(mk(Program::None, s2));
            }
            Program::Seq(p1, p2, mid) => {
                for (_, cfg) in self.step_program(p1, s, x)? {
                    let (p1p, s2) = match cfg.spec {
                        Spec::Prog(q) => (q, cfg.state),
                        _ => unreachable!(),
                    };
                    if p1p == Program::None {
                        out.push(mk((**p2).clone(), s2));
                    } else {
                        out.push(mk(
                            Program::Seq(Box::new(p1p), p2.clone(), mid.clone()),
                            s2,
                        ));
                    }
                }
            }
            Program::Cond(b, p1, p2) => {
                let env = Env::closed(self.model, s);
                let holds = matches!(eval(b, &env)?, Value::Bool(true));
                let branch = if holds { p1 } else { p2 };
                out.push(mk((**branch).clone(), s.clone()));
            }
            Program::While(b, body, inv) => {
                let env = Env::closed(self.model, s);
                let holds = matches!(eval(b, &env)?, Value::Bool(true));
                if holds {
                    out.push(mk(
                        Program::Seq(
                            body.clone(),
                            Box::new(Program::While(b.clone(), body.clone(), inv.clone())),
                            None,
                        ),
                        s.clone(),
                    ));
                } else {
                    out.push(mk(Program::None, s.clone()));
                }
            }
            Program::Await(b, body) => {
                let env = Env::closed(self.model, s);
                if matches!(eval(b, &env)?, Value::Bool(true)) {
                    let ends = self.atomic_runs(body, s, x).map_err(|e| match e {
                        StepError::AwaitDivergence { fuel, .. } => StepError::AwaitDivergence {
                            guard: fmt_expr(b),
                            fuel,
                        },
                        other => other,
                    })?;
                    for s2 in ends {
                        out.push(mk(Program::None, s2));
                    }
                }
            }
            Program::Nondt(r) => {
                for s2 in crate::model::eval_rel(self.model, &self.universe, s, r)? {
                    out.push(mk(Program::None, s2));
                }
            }
        }
        sort_successors(self.model, &mut out);
        Ok(out)
    }

    /// Event-level step relation at a given core.
    pub fn step_event(
        &self,
        ev: &EventSpec,
        core: u32,
        s: &State,
        x: &EventCtx,
    ) -> Result<Succs, StepError> {
        let mut out: Succs = Vec::new();
        match ev {
            EventSpec::Anony(p) => {
                for (_, cfg) in self.step_program(p, s, x)? {
                    let (p2, s2) = match cfg.spec {
                        Spec::Prog(q) => (q, cfg.state),
                        _ => unreachable!(),
                    };
                    out.push((
                        Label::prog_at(core),
                        Config {
                            spec: Spec::Event(EventSpec::Anony(p2)),
                            state: s2,
                            ectx: x.clone(),
                        },
                    ));
                }
            }
            EventSpec::Basic(idx) => {
                let def = self.model.event(*idx);
                let domains: Vec<Vec<Value>> = def
                    .params
                    .iter()
                    .map(|(_, ty)| crate::model::enumerate_ty(self.model, ty))
                    .collect();
                let core_name = self.model.cores[core as usize].clone();
                for valuation in valuations(&domains) {
                    let mut bindings: BTreeMap<String, Value> = BTreeMap::new();
                    for ((name, _), v) in def.params.iter().zip(valuation.iter()) {
                        bindings.insert(name.clone(), v.clone());
                    }
                    if let Some(kv) = &def.kvar {
                        bindings.insert(kv.clone(), Value::Sym(core_name.clone()));
                    }
                    let env = Env::closed(self.model, s).with_bindings(bindings.clone());
                    if !matches!(eval(&def.guard, &env)?, Value::Bool(true)) {
                        continue;
                    }
                    // Substitute the valuation into the body so the residual
                    // is closed.
                    let mut body = def.body.clone();
                    for (name, v) in &bindings {
                        body = subst_program(&body, name, v);
                    }
                    out.push((
                        Label::occur_at(*idx, core),
                        Config {
                            spec: Spec::Event(EventSpec::Anony(body)),
                            state: s.clone(),
                            ectx: x.with(core as usize, *idx),
                        },
                    ));
                }
            }
        }
        sort_successors(self.model, &mut out);
        out.dedup();
        Ok(out)
    }

    /// Event-system-level step relation at a given core.
    pub fn step_evtsys(
        &self,
        sys: &EventSys,
        core: u32,
        s: &State,
        x: &EventCtx,
    ) -> Result<Succs, StepError> {
        let mut out: Succs = Vec::new();
        match sys {
            EventSys::Set(members) => {
                for m in members {
                    for (label, cfg) in self.step_event(&EventSpec::Basic(*m), core, s, x)? {
                        let residual = match cfg.spec {
                            Spec::Event(e) => e,
                            _ => unreachable!(),
                        };
                        out.push((
                            label,
                            Config {
                                spec: Spec::Sys(EventSys::Seq(
                                    residual,
                                    None,
                                    Box::new(sys.clone()),
                                )),
                                state: cfg.state,
                                ectx: cfg.ectx,
                            },
                        ));
                    }
                }
            }
            EventSys::Seq(head, mid, rest) => {
                for (label, cfg) in self.step_event(head, core, s, x)? {
                    let residual = match cfg.spec {
                        Spec::Event(e) => e,
                        _ => unreachable!(),
                    };
                    let spec = if residual.is_done() {
                        Spec::Sys((**rest).clone())
                    } else {
                        Spec::Sys(EventSys::Seq(residual, mid.clone(), rest.clone()))
                    };
                    out.push((
                        label,
                        Config {
                            spec,
                            state: cfg.state,
                            ectx: cfg.ectx,
                        },
                    ));
                }
            }
        }
        sort_successors(self.model, &mut out);
        out.dedup();
        Ok(out)
    }

    /// Parallel-level step relation: the union over cores of the lifted
    /// event-system steps.
    pub fn step_par(&self, ps: &ParSys, s: &State, x: &EventCtx) -> Result<Succs, StepError> {
        let mut out: Succs = Vec::new();
        for (core, sys) in ps.0.iter().enumerate() {
            for (label, cfg) in self.step_evtsys(sys, core as u32, s, x)? {
                let inner = match cfg.spec {
                    Spec::Sys(sys2) => sys2,
                    _ => unreachable!(),
                };
                let mut ps2 = ps.clone();
                ps2.0[core] = inner;
                out.push((
                    label,
                    Config {
                        spec: Spec::Par(ps2),
                        state: cfg.state,
                        ectx: cfg.ectx,
                    },
                ));
            }
        }
        sort_successors(self.model, &mut out);
        out.dedup();
        Ok(out)
    }

    /// Step a configuration at whichever level its specification sits.
    /// Events and event systems step at every core, matching the rules in
    /// which the core is free.
    pub fn step_config(&self, c: &Config) -> Result<Succs, StepError> {
        let mut out = match &c.spec {
            Spec::Prog(p) => self.step_program(p, &c.state, &c.ectx)?,
            Spec::Event(e) => {
                let mut all = Vec::new();
                for core in 0..self.model.cores.len() {
                    all.extend(self.step_event(e, core as u32, &c.state, &c.ectx)?);
                }
                all
            }
            Spec::Sys(sys) => {
                let mut all = Vec::new();
                for core in 0..self.model.cores.len() {
                    all.extend(self.step_evtsys(sys, core as u32, &c.state, &c.ectx)?);
                }
                all
            }
            Spec::Par(ps) => self.step_par(ps, &c.state, &c.ectx)?,
        };
        sort_successors(self.model, &mut out);
        out.dedup();
        Ok(out)
    }
}

/// Sort successors by (label kind, core, event name, target state, full
/// configuration), the documented enumeration order.
pub fn sort_successors(model: &Model, succs: &mut [(Label, Config)]) {
    succs.sort_by(|(l1, c1), (l2, c2)| {
        l1.cmp_in(l2, model)
            .then_with(|| c1.state.cmp(&c2.state))
            .then_with(|| c1.ectx.cmp(&c2.ectx))
            .then_with(|| c1.spec.cmp(&c2.spec))
    });
}
