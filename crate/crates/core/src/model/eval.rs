//! Expression evaluation and state-universe enumeration.
//!
//! Evaluation is total on validated models: any error raised here signals a
//! model that escaped static validation, not a property of the checked
//! system.

use super::{enumerate_ty, ty_size, Expr, Model, State, Value};
use super::expr::{ArithOp, CmpOp};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("unbound name '{0}'")]
    Unbound(String),
    #[error("type mismatch at {0}")]
    TypeMismatch(String),
    #[error("map key '{key}' not present")]
    MissingKey { key: String },
    #[error("primed variable '{0}' outside a relation")]
    PrimeOutsideRelation(String),
    #[error("unknown carrier '{0}' in quantifier")]
    UnknownCarrier(String),
    #[error("state universe of {size} states exceeds the cap of {cap} (model too large)")]
    UniverseTooLarge { size: u128, cap: u128 },
}

/// Evaluation environment: a state, optional extra bindings (event
/// parameters, context variables, quantifier variables), and an optional
/// post-state bound to primed variables.
pub struct Env<'a> {
    pub model: &'a Model,
    pub state: &'a State,
    pub primed: Option<&'a State>,
    pub bindings: BTreeMap<String, Value>,
}

impl<'a> Env<'a> {
    pub fn closed(model: &'a Model, state: &'a State) -> Env<'a> {
        Env {
            model,
            state,
            primed: None,
            bindings: BTreeMap::new(),
        }
    }

    pub fn rel(model: &'a Model, state: &'a State, primed: &'a State) -> Env<'a> {
        Env {
            model,
            state,
            primed: Some(primed),
            bindings: BTreeMap::new(),
        }
    }

    pub fn with_bindings(mut self, bindings: BTreeMap<String, Value>) -> Env<'a> {
        self.bindings = bindings;
        self
    }

    fn lookup(&self, name: &str) -> Result<Value, EvalError> {
        if let Some(v) = self.bindings.get(name) {
            return Ok(v.clone());
        }
        if let Some(idx) = self.model.var_index(name) {
            if idx < self.state.0.len() {
                return Ok(self.state.0[idx].clone());
            }
        }
        // Fall back to symbol-literal resolution: carrier members, policy
        // domains, core labels, and event names all denote themselves.
        if self.model.carriers.iter().any(|c| c.members.iter().any(|m| m == name))
            || self
                .model
                .policy
                .as_ref()
                .is_some_and(|p| p.domains.iter().any(|d| d == name))
            || self.model.cores.iter().any(|c| c == name)
            || self.model.events.iter().any(|e| e.name == name)
        {
            return Ok(Value::Sym(name.to_string()));
        }
        Err(EvalError::Unbound(name.to_string()))
    }
}

pub fn eval(e: &Expr, env: &Env) -> Result<Value, EvalError> {
    match e {
        Expr::Lit(v) => Ok(v.clone()),
        Expr::Var(n) => env.lookup(n),
        Expr::Prime(n) => {
            let post = env
                .primed
                .ok_or_else(|| EvalError::PrimeOutsideRelation(n.clone()))?;
            let idx = env
                .model
                .var_index(n)
                .ok_or_else(|| EvalError::Unbound(n.clone()))?;
            Ok(post.0[idx].clone())
        }
        Expr::MapGet(m, k) => {
            let mv = eval(m, env)?;
            let kv = eval(k, env)?;
            match (mv, kv) {
                (Value::Map(map), Value::Sym(s)) => map
                    .get(&s)
                    .cloned()
                    .ok_or(EvalError::MissingKey { key: s }),
                _ => Err(EvalError::TypeMismatch("map lookup".into())),
            }
        }
        Expr::MapSet(m, k, v) => {
            let mv = eval(m, env)?;
            let kv = eval(k, env)?;
            let vv = eval(v, env)?;
            match (mv, kv) {
                (Value::Map(mut map), Value::Sym(s)) => {
                    if !map.contains_key(&s) {
                        return Err(EvalError::MissingKey { key: s });
                    }
                    map.insert(s, vv);
                    Ok(Value::Map(map))
                }
                _ => Err(EvalError::TypeMismatch("map update".into())),
            }
        }
        Expr::MapLit(entries) => {
            let mut map = BTreeMap::new();
            for (k, v) in entries {
                map.insert(k.clone(), eval(v, env)?);
            }
            Ok(Value::Map(map))
        }
        Expr::Ite(c, t, f) => {
            if eval_bool(c, env)? {
                eval(t, env)
            } else {
                eval(f, env)
            }
        }
        Expr::Arith(op, a, b) => {
            let (a, b) = (eval_int(a, env)?, eval_int(b, env)?);
            Ok(Value::Int(match op {
                ArithOp::Add => a + b,
                ArithOp::Sub => a - b,
                ArithOp::Mul => a * b,
            }))
        }
        Expr::Cmp(op, a, b) => {
            let (av, bv) = (eval(a, env)?, eval(b, env)?);
            let r = match op {
                CmpOp::Eq => av == bv,
                CmpOp::Ne => av != bv,
                _ => {
                    let (ai, bi) = match (av, bv) {
                        (Value::Int(a), Value::Int(b)) => (a, b),
                        _ => return Err(EvalError::TypeMismatch("ordered comparison".into())),
                    };
                    match op {
                        CmpOp::Lt => ai < bi,
                        CmpOp::Le => ai <= bi,
                        CmpOp::Gt => ai > bi,
                        CmpOp::Ge => ai >= bi,
                        _ => unreachable!(),
                    }
                }
            };
            Ok(Value::Bool(r))
        }
        Expr::Not(a) => Ok(Value::Bool(!eval_bool(a, env)?)),
        Expr::And(a, b) => Ok(Value::Bool(eval_bool(a, env)? && eval_bool(b, env)?)),
        Expr::Or(a, b) => Ok(Value::Bool(eval_bool(a, env)? || eval_bool(b, env)?)),
        Expr::Implies(a, b) => Ok(Value::Bool(!eval_bool(a, env)? || eval_bool(b, env)?)),
        Expr::Forall(x, c, body) => {
            let members = carrier_members(env.model, c)?;
            for m in members {
                let mut env2 = Env {
                    model: env.model,
                    state: env.state,
                    primed: env.primed,
                    bindings: env.bindings.clone(),
                };
                env2.bindings.insert(x.clone(), Value::Sym(m));
                if !eval_bool(body, &env2)? {
                    return Ok(Value::Bool(false));
                }
            }
            Ok(Value::Bool(true))
        }
        Expr::Exists(x, c, body) => {
            let members = carrier_members(env.model, c)?;
            for m in members {
                let mut env2 = Env {
                    model: env.model,
                    state: env.state,
                    primed: env.primed,
                    bindings: env.bindings.clone(),
                };
                env2.bindings.insert(x.clone(), Value::Sym(m));
                if eval_bool(body, &env2)? {
                    return Ok(Value::Bool(true));
                }
            }
            Ok(Value::Bool(false))
        }
    }
}

fn carrier_members(model: &Model, name: &str) -> Result<Vec<String>, EvalError> {
    model
        .carrier(name)
        .map(|c| c.members.clone())
        .ok_or_else(|| EvalError::UnknownCarrier(name.to_string()))
}

fn eval_bool(e: &Expr, env: &Env) -> Result<bool, EvalError> {
    match eval(e, env)? {
        Value::Bool(b) => Ok(b),
        _ => Err(EvalError::TypeMismatch("expected boolean".into())),
    }
}

fn eval_int(e: &Expr, env: &Env) -> Result<i64, EvalError> {
    match eval(e, env)? {
        Value::Int(i) => Ok(i),
        _ => Err(EvalError::TypeMismatch("expected integer".into())),
    }
}

/// Truth value of a boolean expression under a state and extra bindings.
pub fn eval_bexp(
    model: &Model,
    state: &State,
    bindings: &BTreeMap<String, Value>,
    b: &Expr,
) -> Result<bool, EvalError> {
    let env = Env::closed(model, state).with_bindings(bindings.clone());
    eval_bool(b, &env)
}

/// Truth value of a relational expression on a pair of states.
pub fn eval_rel_pair(
    model: &Model,
    s: &State,
    s2: &State,
    r: &Expr,
) -> Result<bool, EvalError> {
    let env = Env::rel(model, s, s2);
    eval_bool(r, &env)
}

/// The set of post-states related to `s` by the relational expression `r`,
/// computed by enumerating the declared state universe.
pub fn eval_rel(
    model: &Model,
    universe: &Universe,
    s: &State,
    r: &Expr,
) -> Result<Vec<State>, EvalError> {
    let mut out = Vec::new();
    for s2 in &universe.states {
        if eval_rel_pair(model, s, s2, r)? {
            out.push(s2.clone());
        }
    }
    Ok(out)
}

/// The enumerated state universe of a model, with interning.
#[derive(Debug, Clone)]
pub struct Universe {
    pub states: Vec<State>,
    index: BTreeMap<State, u32>,
}

impl Universe {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn id_of(&self, s: &State) -> Option<u32> {
        self.index.get(s).copied()
    }

    pub fn state(&self, id: u32) -> &State {
        &self.states[id as usize]
    }
}

/// Size of the declared universe: the product of per-variable domain sizes.
pub fn universe_size(model: &Model) -> u128 {
    model
        .vars
        .iter()
        .map(|v| ty_size(model, &v.ty))
        .product()
}

/// Enumerate all well-typed states. Enumeration is an odometer over the
/// declared variable order, each domain in its canonical order. Errors out
/// when the declared universe exceeds `cap`.
pub fn state_universe(model: &Model, cap: u128) -> Result<Universe, EvalError> {
    let size = universe_size(model);
    if size > cap {
        return Err(EvalError::UniverseTooLarge { size, cap });
    }
    let domains: Vec<Vec<Value>> = model
        .vars
        .iter()
        .map(|v| enumerate_ty(model, &v.ty))
        .collect();
    let mut states: Vec<State> = vec![State(vec![])];
    for dom in &domains {
        let mut next = Vec::with_capacity(states.len() * dom.len());
        for st in &states {
            for v in dom {
                let mut s2 = st.clone();
                s2.0.push(v.clone());
                next.push(s2);
            }
        }
        states = next;
    }
    let index = states
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i as u32))
        .collect();
    Ok(Universe { states, index })
}
