//! Core model types: finite-domain values and states, the four-level
//! specification syntax (programs, events, event systems, parallel event
//! systems), and the declaration blocks that make up a model.

mod expr;
mod eval;
pub mod validate;

pub use expr::{subst_expr, subst_program, ArithOp, CmpOp, Expr};
pub use eval::{eval, eval_bexp, eval_rel, state_universe, Env, EvalError, Universe};
pub use validate::{validate, ValidateError};
pub use eval::{eval_rel_pair, universe_size};

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// A symbol: member of an enum carrier, a core label, or an event name.
pub type Sym = String;

/// A runtime value. Every value inhabits a declared finite domain, so the
/// whole value space of a model is enumerable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Value {
    Bool(bool),
    Int(i64),
    Sym(Sym),
    /// Total map from the members of an enum carrier to values.
    Map(BTreeMap<Sym, Value>),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Int(i) => write!(f, "{i}"),
            Value::Sym(s) => write!(f, "{s}"),
            Value::Map(m) => {
                write!(f, "{{")?;
                for (i, (k, v)) in m.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{k}: {v}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

/// Declared type of a variable or event parameter.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Ty {
    Bool,
    Int { lo: i64, hi: i64 },
    /// Member of the named carrier.
    Sym(String),
    /// Total map from the key carrier's members to values of the value type.
    Map { key: String, val: Box<Ty> },
}

/// A state: one value per declared variable, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct State(pub Vec<Value>);

impl State {
    pub fn get(&self, idx: usize) -> &Value {
        &self.0[idx]
    }
}

/// Event context: per core, the currently executing event (by index into
/// `Model::events`), or `None` before any event has occurred on that core.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EventCtx(pub Vec<Option<u32>>);

impl EventCtx {
    pub fn bottom(ncores: usize) -> Self {
        EventCtx(vec![None; ncores])
    }

    pub fn with(&self, core: usize, ev: u32) -> Self {
        let mut v = self.0.clone();
        v[core] = Some(ev);
        EventCtx(v)
    }
}

/// One target of a parallel assignment: `var := rhs` or `var[key] := rhs`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Assign {
    pub var: String,
    pub key: Option<Expr>,
    pub rhs: Expr,
}

/// Program syntax. `None` marks a terminated program and appears only as a
/// residual of execution, never in source models.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Program {
    None,
    /// Atomic state transformer: a (possibly empty) parallel assignment.
    /// The empty list is SKIP.
    Basic(Vec<Assign>),
    /// Sequential composition, with an optional mid-condition annotation used
    /// only by the proof-outline checker.
    Seq(Box<Program>, Box<Program>, Option<Expr>),
    Cond(Expr, Box<Program>, Box<Program>),
    /// While loop with an optional invariant annotation.
    While(Expr, Box<Program>, Option<Expr>),
    Await(Expr, Box<Program>),
    /// Nondeterministic transition constrained by a state relation over
    /// current and primed variables.
    Nondt(Expr),
}

impl Program {
    pub fn skip() -> Self {
        Program::Basic(vec![])
    }

    pub fn seq(a: Program, b: Program) -> Self {
        Program::Seq(Box::new(a), Box::new(b), None)
    }
}

/// An event occurring in a configuration: either a declared (basic) event,
/// referenced by index into `Model::events`, or an anonymous event wrapping
/// the residual body of an occurred event.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EventSpec {
    Basic(u32),
    Anony(Program),
}

impl EventSpec {
    /// The finished-event marker.
    pub fn is_done(&self) -> bool {
        matches!(self, EventSpec::Anony(Program::None))
    }
}

/// Event system: an event sequence or a nonempty event set. Set members are
/// always declared events; a sequence head may be an anonymous residual.
/// The optional expression on `Seq` is the mid-condition annotation for the
/// proof-outline checker.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EventSys {
    Seq(EventSpec, Option<Expr>, Box<EventSys>),
    Set(Vec<u32>),
}

/// Parallel event system: one event system per core, in core order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ParSys(pub Vec<EventSys>);

/// The specification component of a configuration, at any of the four
/// syntactic levels.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Spec {
    Prog(Program),
    Event(EventSpec),
    Sys(EventSys),
    Par(ParSys),
}

/// A configuration: specification, state, and event context.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Config {
    pub spec: Spec,
    pub state: State,
    pub ectx: EventCtx,
}

/// Declared enum carrier.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CarrierDecl {
    pub name: String,
    pub members: Vec<Sym>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarDecl {
    pub name: String,
    pub ty: Ty,
}

/// A declared event: named, parameterized, with a guard and a body. The
/// optional `kvar` binds the execution-context label inside guard and body.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventDef {
    pub name: String,
    pub params: Vec<(String, Ty)>,
    pub kvar: Option<String>,
    pub guard: Expr,
    pub body: Program,
}

/// Security policy block: domains, interference relation, the event-domain
/// expression, per-domain observation expressions, and optional per-domain
/// declared view equivalences.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolicyDecl {
    pub domains: Vec<Sym>,
    pub interf: Vec<(Sym, Sym)>,
    /// (core variable, event variable, expression).
    pub dom_evt: (String, String, Expr),
    pub obs: BTreeMap<Sym, Expr>,
    /// Optional separately declared equivalences (relational expressions).
    pub vpeq: BTreeMap<Sym, Expr>,
}

/// A syntactic rely-guarantee quadruple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RgQuad {
    pub pre: Expr,
    pub rely: Expr,
    pub guar: Expr,
    pub post: Expr,
}

/// Rely-guarantee annotation block: per-event quadruples (the Gamma map) and
/// per-core system-level quadruples.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RgSpecDecl {
    pub events: BTreeMap<String, RgQuad>,
    pub systems: BTreeMap<String, RgQuad>,
}

/// A complete model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Model {
    pub name: String,
    pub carriers: Vec<CarrierDecl>,
    pub cores: Vec<String>,
    pub vars: Vec<VarDecl>,
    pub init: Vec<(String, Expr)>,
    pub events: Vec<EventDef>,
    /// One event system per core, parallel composition in core order.
    pub systems: Vec<EventSys>,
    pub policy: Option<PolicyDecl>,
    pub rgspec: RgSpecDecl,
}

impl Model {
    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn core_index(&self, name: &str) -> Option<usize> {
        self.cores.iter().position(|c| c == name)
    }

    pub fn event_index(&self, name: &str) -> Option<usize> {
        self.events.iter().position(|e| e.name == name)
    }

    pub fn event(&self, idx: u32) -> &EventDef {
        &self.events[idx as usize]
    }

    pub fn carrier(&self, name: &str) -> Option<&CarrierDecl> {
        self.carriers.iter().find(|c| c.name == name)
    }

    /// The initial state. Only valid on validated models.
    pub fn initial_state(&self) -> Result<State, EvalError> {
        let empty = State(vec![]);
        let env = Env::closed(self, &empty);
        let mut vals: BTreeMap<String, Value> = BTreeMap::new();
        for (name, e) in &self.init {
            vals.insert(name.clone(), eval(e, &env)?);
        }
        Ok(State(
            self.vars
                .iter()
                .map(|v| vals.get(&v.name).cloned().expect("validated init"))
                .collect(),
        ))
    }

    pub fn initial_config(&self) -> Result<Config, EvalError> {
        Ok(Config {
            spec: Spec::Par(ParSys(self.systems.clone())),
            state: self.initial_state()?,
            ectx: EventCtx::bottom(self.cores.len()),
        })
    }

    /// All events of an event system, per the recursive union over sequence
    /// heads and set members.
    pub fn evts_of_sys(&self, sys: &EventSys) -> BTreeSet<EventSpec> {
        match sys {
            EventSys::Set(evs) => evs.iter().map(|i| EventSpec::Basic(*i)).collect(),
            EventSys::Seq(head, _, rest) => {
                let mut s = self.evts_of_sys(rest);
                s.insert(head.clone());
                s
            }
        }
    }

    /// All events of the parallel composition: the union over cores.
    pub fn evts_of_par(&self, ps: &ParSys) -> BTreeSet<EventSpec> {
        ps.0.iter().flat_map(|s| self.evts_of_sys(s)).collect()
    }

    /// All events of the model's own parallel composition.
    pub fn evts(&self) -> BTreeSet<EventSpec> {
        self.systems.iter().flat_map(|s| self.evts_of_sys(s)).collect()
    }

    /// Names of the declared events reachable from the parallel composition.
    pub fn evt_names(&self) -> BTreeSet<String> {
        self.evts()
            .into_iter()
            .filter_map(|e| match e {
                EventSpec::Basic(i) => Some(self.event(i).name.clone()),
                EventSpec::Anony(_) => None,
            })
            .collect()
    }

    /// Pretty name for a state, for reports and witnesses.
    pub fn show_state(&self, s: &State) -> String {
        let mut out = String::from("{");
        for (i, v) in self.vars.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            out.push_str(&format!("{}: {}", v.name, s.0[i]));
        }
        out.push('}');
        out
    }

    pub fn show_ectx(&self, x: &EventCtx) -> String {
        let mut out = String::from("[");
        for (i, c) in self.cores.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            match x.0[i] {
                Some(e) => out.push_str(&format!("{c}: {}", self.event(e).name)),
                None => out.push_str(&format!("{c}: _")),
            }
        }
        out.push(']');
        out
    }
}

/// Enumerate all values of a type. Carrier members enumerate in declaration
/// order, ints ascending, bools false then true.
pub fn enumerate_ty(model: &Model, ty: &Ty) -> Vec<Value> {
    match ty {
        Ty::Bool => vec![Value::Bool(false), Value::Bool(true)],
        Ty::Int { lo, hi } => (*lo..=*hi).map(Value::Int).collect(),
        Ty::Sym(c) => model
            .carrier(c)
            .map(|c| c.members.iter().cloned().map(Value::Sym).collect())
            .unwrap_or_default(),
        Ty::Map { key, val } => {
            let keys: Vec<Sym> = model
                .carrier(key)
                .map(|c| c.members.clone())
                .unwrap_or_default();
            let vals = enumerate_ty(model, val);
            let mut out: Vec<BTreeMap<Sym, Value>> = vec![BTreeMap::new()];
            for k in &keys {
                let mut next = Vec::with_capacity(out.len() * vals.len());
                for m in &out {
                    for v in &vals {
                        let mut m2 = m.clone();
                        m2.insert(k.clone(), v.clone());
                        next.push(m2);
                    }
                }
                out = next;
            }
            out.into_iter().map(Value::Map).collect()
        }
    }
}

/// Number of values of a type, without enumerating them.
pub fn ty_size(model: &Model, ty: &Ty) -> u128 {
    match ty {
        Ty::Bool => 2,
        Ty::Int { lo, hi } => {
            if hi < lo {
                0
            } else {
                (hi - lo) as u128 + 1
            }
        }
        Ty::Sym(c) => model.carrier(c).map(|c| c.members.len() as u128).unwrap_or(0),
        Ty::Map { key, val } => {
            let nk = model.carrier(key).map(|c| c.members.len() as u32).unwrap_or(0);
            ty_size(model, val).saturating_pow(nk)
        }
    }
}
