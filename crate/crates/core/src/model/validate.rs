//! Static validation: name resolution, typing, and the structural invariants
//! a model must satisfy before any semantic operation runs. Everything that
//! can go wrong in an expression is rejected here, so evaluation never fails
//! at check time.

use super::{CarrierDecl, EventSpec, EventSys, Expr, Model, Program, Ty, Value};
use super::expr::CmpOp;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Where in the model a validation error was found; the parser maps sites
/// back to source positions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Site {
    Model,
    Carrier(String),
    Var(String),
    Init(String),
    Event(String),
    System(String),
    Policy,
    RgEvent(String),
    RgSystem(String),
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Site::Model => write!(f, "model"),
            Site::Carrier(n) => write!(f, "carrier {n}"),
            Site::Var(n) => write!(f, "var {n}"),
            Site::Init(n) => write!(f, "init of {n}"),
            Site::Event(n) => write!(f, "event {n}"),
            Site::System(n) => write!(f, "event system on {n}"),
            Site::Policy => write!(f, "policy"),
            Site::RgEvent(n) => write!(f, "rg spec of event {n}"),
            Site::RgSystem(n) => write!(f, "rg spec of system on {n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidateError {
    pub site: Site,
    pub msg: String,
}

impl fmt::Display for ValidateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.site, self.msg)
    }
}

impl std::error::Error for ValidateError {}

/// Checking type: symbols are tracked as the set of values an expression can
/// take, which keeps carrier overlap (one symbol in several carriers) precise.
#[derive(Debug, Clone, PartialEq, Eq)]
enum T {
    Bool,
    Int,
    Syms(BTreeSet<String>),
    Map { key: String, val: Box<T> },
}

impl fmt::Display for T {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            T::Bool => write!(f, "bool"),
            T::Int => write!(f, "int"),
            T::Syms(_) => write!(f, "symbol"),
            T::Map { key, .. } => write!(f, "map over {key}"),
        }
    }
}

struct Ctx<'a> {
    model: &'a Model,
    symbols: BTreeSet<String>,
    errors: Vec<ValidateError>,
}

struct Scope {
    bindings: BTreeMap<String, T>,
    allow_prime: bool,
    allow_state: bool,
}

impl Scope {
    fn state() -> Scope {
        Scope {
            bindings: BTreeMap::new(),
            allow_prime: false,
            allow_state: true,
        }
    }

    fn relational() -> Scope {
        Scope {
            bindings: BTreeMap::new(),
            allow_prime: true,
            allow_state: true,
        }
    }

    fn closed() -> Scope {
        Scope {
            bindings: BTreeMap::new(),
            allow_prime: false,
            allow_state: false,
        }
    }

    fn bind(mut self, name: &str, t: T) -> Scope {
        self.bindings.insert(name.to_string(), t);
        self
    }
}

impl<'a> Ctx<'a> {
    fn err(&mut self, site: Site, msg: impl Into<String>) {
        self.errors.push(ValidateError {
            site,
            msg: msg.into(),
        });
    }

    fn carrier_members(&self, name: &str) -> Option<BTreeSet<String>> {
        self.model
            .carrier(name)
            .map(|c| c.members.iter().cloned().collect())
    }

    fn ty_to_t(&mut self, site: &Site, ty: &Ty) -> T {
        match ty {
            Ty::Bool => T::Bool,
            Ty::Int { lo, hi } => {
                if hi < lo {
                    self.err(site.clone(), format!("empty int range {lo}..{hi}"));
                }
                T::Int
            }
            Ty::Sym(c) => match self.carrier_members(c) {
                Some(m) => {
                    if m.is_empty() {
                        self.err(site.clone(), format!("carrier {c} is empty"));
                    }
                    T::Syms(m)
                }
                None => {
                    self.err(site.clone(), format!("unknown carrier '{c}'"));
                    T::Syms(BTreeSet::new())
                }
            },
            Ty::Map { key, val } => {
                if self.carrier_members(key).is_none() {
                    self.err(site.clone(), format!("unknown key carrier '{key}'"));
                }
                T::Map {
                    key: key.clone(),
                    val: Box::new(self.ty_to_t(site, val)),
                }
            }
        }
    }

    fn join(&mut self, site: &Site, a: T, b: T) -> T {
        match (a, b) {
            (T::Bool, T::Bool) => T::Bool,
            (T::Int, T::Int) => T::Int,
            (T::Syms(x), T::Syms(y)) => T::Syms(x.union(&y).cloned().collect()),
            (T::Map { key: k1, val: v1 }, T::Map { key: k2, val: v2 }) if k1 == k2 => T::Map {
                key: k1,
                val: Box::new(self.join(site, *v1, *v2)),
            },
            (a, b) => {
                self.err(site.clone(), format!("incompatible types {a} and {b}"));
                a
            }
        }
    }

    /// Is `a` usable where `b` is expected?
    fn fits(a: &T, b: &T) -> bool {
        match (a, b) {
            (T::Bool, T::Bool) | (T::Int, T::Int) => true,
            (T::Syms(x), T::Syms(y)) => x.is_subset(y),
            (T::Map { key: k1, val: v1 }, T::Map { key: k2, val: v2 }) => {
                k1 == k2 && Self::fits(v1, v2)
            }
            _ => false,
        }
    }

    fn type_value(&mut self, site: &Site, v: &Value) -> T {
        match v {
            Value::Bool(_) => T::Bool,
            Value::Int(_) => T::Int,
            Value::Sym(s) => {
                if !self.symbols.contains(s) {
                    self.err(site.clone(), format!("unknown symbol '{s}'"));
                }
                T::Syms(std::iter::once(s.clone()).collect())
            }
            Value::Map(m) => {
                let keys: BTreeSet<String> = m.keys().cloned().collect();
                let carrier = self.infer_map_carrier(site, &keys);
                let mut vt: Option<T> = None;
                for v in m.values() {
                    let t = self.type_value(site, v);
                    vt = Some(match vt {
                        None => t,
                        Some(prev) => self.join(site, prev, t),
                    });
                }
                T::Map {
                    key: carrier,
                    val: Box::new(vt.unwrap_or(T::Bool)),
                }
            }
        }
    }

    fn infer_map_carrier(&mut self, site: &Site, keys: &BTreeSet<String>) -> String {
        let matches: Vec<&CarrierDecl> = self
            .model
            .carriers
            .iter()
            .filter(|c| {
                let m: BTreeSet<String> = c.members.iter().cloned().collect();
                m == *keys
            })
            .collect();
        match matches.len() {
            1 => matches[0].name.clone(),
            0 => {
                self.err(
                    site.clone(),
                    "map literal keys do not cover exactly one declared carrier".to_string(),
                );
                String::new()
            }
            _ => {
                self.err(
                    site.clone(),
                    "map literal keys match more than one carrier".to_string(),
                );
                matches[0].name.clone()
            }
        }
    }

    fn type_expr(&mut self, site: &Site, scope: &Scope, e: &Expr) -> T {
        match e {
            Expr::Lit(v) => self.type_value(site, v),
            Expr::Var(n) => {
                if let Some(t) = scope.bindings.get(n) {
                    return t.clone();
                }
                if let Some(idx) = self.model.var_index(n) {
                    if !scope.allow_state {
                        self.err(site.clone(), format!("state variable '{n}' not allowed here"));
                    }
                    let ty = self.model.vars[idx].ty.clone();
                    return self.ty_to_t(site, &ty);
                }
                if self.symbols.contains(n) {
                    return T::Syms(std::iter::once(n.clone()).collect());
                }
                self.err(site.clone(), format!("unbound name '{n}'"));
                T::Bool
            }
            Expr::Prime(n) => {
                if !scope.allow_prime {
                    self.err(
                        site.clone(),
                        format!("primed variable '{n}' outside a relation"),
                    );
                }
                match self.model.var_index(n) {
                    Some(idx) => {
                        let ty = self.model.vars[idx].ty.clone();
                        self.ty_to_t(site, &ty)
                    }
                    None => {
                        self.err(site.clone(), format!("unknown state variable '{n}'"));
                        T::Bool
                    }
                }
            }
            Expr::MapGet(m, k) => {
                let mt = self.type_expr(site, scope, m);
                let kt = self.type_expr(site, scope, k);
                match mt {
                    T::Map { key, val } => {
                        self.check_key(site, &key, &kt);
                        *val
                    }
                    other => {
                        self.err(site.clone(), format!("lookup on non-map of type {other}"));
                        T::Bool
                    }
                }
            }
            Expr::MapSet(m, k, v) => {
                let mt = self.type_expr(site, scope, m);
                let kt = self.type_expr(site, scope, k);
                let vt = self.type_expr(site, scope, v);
                match mt {
                    T::Map { key, val } => {
                        self.check_key(site, &key, &kt);
                        if !Self::fits(&vt, &val) {
                            self.err(site.clone(), format!("map update value has type {vt}, expected {val}"));
                        }
                        T::Map { key, val }
                    }
                    other => {
                        self.err(site.clone(), format!("update on non-map of type {other}"));
                        other
                    }
                }
            }
            Expr::MapLit(entries) => {
                let keys: BTreeSet<String> = entries.iter().map(|(k, _)| k.clone()).collect();
                if keys.len() != entries.len() {
                    self.err(site.clone(), "duplicate key in map literal".to_string());
                }
                let carrier = self.infer_map_carrier(site, &keys);
                let mut vt: Option<T> = None;
                for (_, v) in entries {
                    let t = self.type_expr(site, scope, v);
                    vt = Some(match vt {
                        None => t,
                        Some(prev) => self.join(site, prev, t),
                    });
                }
                T::Map {
                    key: carrier,
                    val: Box::new(vt.unwrap_or(T::Bool)),
                }
            }
            Expr::Ite(c, t, f) => {
                self.expect_bool(site, scope, c);
                let tt = self.type_expr(site, scope, t);
                let ft = self.type_expr(site, scope, f);
                self.join(site, tt, ft)
            }
            Expr::Arith(_, a, b) => {
                for x in [a, b] {
                    let t = self.type_expr(site, scope, x);
                    if t != T::Int {
                        self.err(site.clone(), format!("arithmetic on non-int of type {t}"));
                    }
                }
                T::Int
            }
            Expr::Cmp(op, a, b) => {
                let at = self.type_expr(site, scope, a);
                let bt = self.type_expr(site, scope, b);
                match op {
                    CmpOp::Eq | CmpOp::Ne => {
                        let ok = matches!(
                            (&at, &bt),
                            (T::Bool, T::Bool)
                                | (T::Int, T::Int)
                                | (T::Syms(_), T::Syms(_))
                        ) || matches!((&at, &bt), (T::Map { key: k1, .. }, T::Map { key: k2, .. }) if k1 == k2);
                        if !ok {
                            self.err(site.clone(), format!("cannot compare {at} with {bt}"));
                        }
                    }
                    _ => {
                        if at != T::Int || bt != T::Int {
                            self.err(site.clone(), "ordered comparison on non-ints".to_string());
                        }
                    }
                }
                T::Bool
            }
            Expr::Not(a) => {
                self.expect_bool(site, scope, a);
                T::Bool
            }
            Expr::And(a, b) | Expr::Or(a, b) | Expr::Implies(a, b) => {
                self.expect_bool(site, scope, a);
                self.expect_bool(site, scope, b);
                T::Bool
            }
            Expr::Forall(x, c, body) | Expr::Exists(x, c, body) => {
                let members = match self.carrier_members(c) {
                    Some(m) => m,
                    None => {
                        self.err(site.clone(), format!("unknown carrier '{c}' in quantifier"));
                        BTreeSet::new()
                    }
                };
                if scope.bindings.contains_key(x)
                    || self.model.var_index(x).is_some()
                    || self.symbols.contains(x)
                {
                    self.err(site.clone(), format!("quantifier variable '{x}' shadows another name"));
                }
                let inner = Scope {
                    bindings: {
                        let mut b = scope.bindings.clone();
                        b.insert(x.clone(), T::Syms(members));
                        b
                    },
                    allow_prime: scope.allow_prime,
                    allow_state: scope.allow_state,
                };
                self.expect_bool(site, &inner, body);
                T::Bool
            }
        }
    }

    fn check_key(&mut self, site: &Site, carrier: &str, kt: &T) {
        if carrier.is_empty() {
            return; // earlier error
        }
        let members = self.carrier_members(carrier).unwrap_or_default();
        match kt {
            T::Syms(s) => {
                if !s.is_subset(&members) {
                    self.err(
                        site.clone(),
                        format!("map key may fall outside carrier {carrier}"),
                    );
                }
            }
            other => self.err(site.clone(), format!("map key has type {other}, expected a {carrier} member")),
        }
    }

    fn expect_bool(&mut self, site: &Site, scope: &Scope, e: &Expr) {
        let t = self.type_expr(site, scope, e);
        if t != T::Bool {
            self.err(site.clone(), format!("expected boolean, found {t}"));
        }
    }

    fn check_program(&mut self, site: &Site, scope: &Scope, p: &Program) {
        match p {
            Program::None => {
                self.err(site.clone(), "terminated-program marker in source model".to_string())
            }
            Program::Basic(assigns) => {
                let mut whole: BTreeSet<&str> = BTreeSet::new();
                let mut keyed: BTreeSet<&str> = BTreeSet::new();
                for a in assigns {
                    let vt = match self.model.var_index(&a.var) {
                        Some(idx) => {
                            let ty = self.model.vars[idx].ty.clone();
                            self.ty_to_t(site, &ty)
                        }
                        None => {
                            self.err(site.clone(), format!("assignment to unknown variable '{}'", a.var));
                            continue;
                        }
                    };
                    match &a.key {
                        None => {
                            if !whole.insert(a.var.as_str()) || keyed.contains(a.var.as_str()) {
                                self.err(site.clone(), format!("conflicting assignments to '{}'", a.var));
                            }
                            let rt = self.type_expr(site, scope, &a.rhs);
                            if !Self::fits(&rt, &vt) {
                                self.err(
                                    site.clone(),
                                    format!("assignment to '{}' has type {rt}, expected {vt}", a.var),
                                );
                            }
                        }
                        Some(k) => {
                            if whole.contains(a.var.as_str()) {
                                self.err(site.clone(), format!("conflicting assignments to '{}'", a.var));
                            }
                            keyed.insert(a.var.as_str());
                            match vt {
                                T::Map { key, val } => {
                                    let kt = self.type_expr(site, scope, k);
                                    self.check_key(site, &key, &kt);
                                    let rt = self.type_expr(site, scope, &a.rhs);
                                    if !Self::fits(&rt, &val) {
                                        self.err(
                                            site.clone(),
                                            format!("entry assignment to '{}' has type {rt}, expected {val}", a.var),
                                        );
                                    }
                                }
                                other => self.err(
                                    site.clone(),
                                    format!("entry assignment to non-map '{}' of type {other}", a.var),
                                ),
                            }
                        }
                    }
                }
            }
            Program::Seq(a, b, mid) => {
                self.check_program(site, scope, a);
                self.check_program(site, scope, b);
                if let Some(m) = mid {
                    self.expect_bool(site, scope, m);
                }
            }
            Program::Cond(b, p1, p2) => {
                self.expect_bool(site, scope, b);
                self.check_program(site, scope, p1);
                self.check_program(site, scope, p2);
            }
            Program::While(b, body, inv) => {
                self.expect_bool(site, scope, b);
                self.check_program(site, scope, body);
                if let Some(i) = inv {
                    self.expect_bool(site, scope, i);
                }
            }
            Program::Await(b, body) => {
                self.expect_bool(site, scope, b);
                self.check_program(site, scope, body);
            }
            Program::Nondt(r) => {
                let rel_scope = Scope {
                    bindings: scope.bindings.clone(),
                    allow_prime: true,
                    allow_state: true,
                };
                self.expect_bool(site, &rel_scope, r);
            }
        }
    }

    fn check_system(&mut self, core: &str, sys: &EventSys) {
        let site = Site::System(core.to_string());
        match sys {
            EventSys::Set(members) => {
                if members.is_empty() {
                    self.err(site.clone(), "empty event set".to_string());
                }
                let mut seen = BTreeSet::new();
                for m in members {
                    if *m as usize >= self.model.events.len() {
                        self.err(site.clone(), format!("event index {m} out of range"));
                    } else if !seen.insert(*m) {
                        self.err(
                            site.clone(),
                            format!("duplicate event '{}' in event set", self.model.event(*m).name),
                        );
                    }
                }
            }
            EventSys::Seq(head, mid, rest) => {
                match head {
                    EventSpec::Basic(i) => {
                        if *i as usize >= self.model.events.len() {
                            self.err(site.clone(), format!("event index {i} out of range"));
                        }
                    }
                    EventSpec::Anony(_) => {
                        self.err(site.clone(), "anonymous event in source model".to_string())
                    }
                }
                if let Some(m) = mid {
                    self.expect_bool(&site, &Scope::state(), m);
                }
                self.check_system(core, rest);
            }
        }
    }
}

fn is_value_in_ty(model: &Model, v: &Value, ty: &Ty) -> bool {
    match (v, ty) {
        (Value::Bool(_), Ty::Bool) => true,
        (Value::Int(i), Ty::Int { lo, hi }) => lo <= i && i <= hi,
        (Value::Sym(s), Ty::Sym(c)) => model
            .carrier(c)
            .map(|c| c.members.iter().any(|m| m == s))
            .unwrap_or(false),
        (Value::Map(m), Ty::Map { key, val }) => {
            let Some(kc) = model.carrier(key) else {
                return false;
            };
            let keys: BTreeSet<&String> = m.keys().collect();
            let members: BTreeSet<&String> = kc.members.iter().collect();
            keys == members && m.values().all(|v| is_value_in_ty(model, v, val))
        }
        _ => false,
    }
}

/// Check whether a value inhabits a declared type; used for init values and
/// runtime assignment range checks.
pub fn value_in_ty(model: &Model, v: &Value, ty: &Ty) -> bool {
    is_value_in_ty(model, v, ty)
}

/// Validate a model, collecting all errors.
pub fn validate(model: &Model) -> Result<(), Vec<ValidateError>> {
    let mut symbols: BTreeSet<String> = BTreeSet::new();
    let mut errors: Vec<ValidateError> = Vec::new();

    // Carriers: unique names, nonempty, members unique within a carrier.
    {
        let mut names = BTreeSet::new();
        for c in &model.carriers {
            if !names.insert(c.name.clone()) {
                errors.push(ValidateError {
                    site: Site::Carrier(c.name.clone()),
                    msg: "duplicate carrier name".into(),
                });
            }
            if c.members.is_empty() {
                errors.push(ValidateError {
                    site: Site::Carrier(c.name.clone()),
                    msg: "carrier has no members".into(),
                });
            }
            let mut mem = BTreeSet::new();
            for m in &c.members {
                if !mem.insert(m.clone()) {
                    errors.push(ValidateError {
                        site: Site::Carrier(c.name.clone()),
                        msg: format!("duplicate member '{m}'"),
                    });
                }
                symbols.insert(m.clone());
            }
        }
    }

    // Policy domains are symbols too (they may or may not be carrier members).
    if let Some(p) = &model.policy {
        for d in &p.domains {
            symbols.insert(d.clone());
        }
    }

    // Cores and event names join the symbol space but must be fresh.
    for c in &model.cores {
        if !symbols.insert(c.clone()) {
            errors.push(ValidateError {
                site: Site::Model,
                msg: format!("core label '{c}' collides with another symbol"),
            });
        }
    }
    if model.cores.is_empty() {
        errors.push(ValidateError {
            site: Site::Model,
            msg: "no cores declared".into(),
        });
    }
    {
        let mut seen = BTreeSet::new();
        for e in &model.events {
            if !seen.insert(e.name.clone()) {
                errors.push(ValidateError {
                    site: Site::Event(e.name.clone()),
                    msg: "duplicate event name".into(),
                });
            }
            if !symbols.insert(e.name.clone()) {
                errors.push(ValidateError {
                    site: Site::Event(e.name.clone()),
                    msg: "event name collides with another symbol".into(),
                });
            }
        }
    }

    let mut ctx = Ctx {
        model,
        symbols,
        errors,
    };

    // Variables: unique names, no collision with symbols, valid types.
    {
        let mut seen = BTreeSet::new();
        for v in &model.vars {
            let site = Site::Var(v.name.clone());
            if !seen.insert(v.name.clone()) {
                ctx.err(site.clone(), "duplicate variable name");
            }
            if ctx.symbols.contains(&v.name) {
                ctx.err(site.clone(), "variable name collides with a symbol");
            }
            ctx.ty_to_t(&site, &v.ty);
        }
    }

    // Init: every variable exactly once, closed well-typed expressions whose
    // values inhabit the declared domains.
    {
        let mut covered = BTreeSet::new();
        for (name, e) in &model.init {
            let site = Site::Init(name.clone());
            match model.var_index(name) {
                None => ctx.err(site.clone(), "init of undeclared variable"),
                Some(idx) => {
                    if !covered.insert(name.clone()) {
                        ctx.err(site.clone(), "variable initialized twice");
                    }
                    let t = ctx.type_expr(&site, &Scope::closed(), e);
                    let ty = model.vars[idx].ty.clone();
                    let expect = ctx.ty_to_t(&site, &ty);
                    if !Ctx::fits(&t, &expect) {
                        ctx.err(site.clone(), format!("init value has type {t}, expected {expect}"));
                    }
                }
            }
        }
        for v in &model.vars {
            if !covered.contains(&v.name) {
                ctx.err(Site::Init(v.name.clone()), "variable not initialized");
            }
        }
        if ctx.errors.is_empty() {
            // Only meaningful once everything typechecks.
            if let Ok(s0) = model.initial_state() {
                for (i, v) in model.vars.iter().enumerate() {
                    if !is_value_in_ty(model, &s0.0[i], &v.ty) {
                        ctx.err(
                            Site::Init(v.name.clone()),
                            format!("initial value {} outside declared domain", s0.0[i]),
                        );
                    }
                }
            }
        }
    }

    // Events.
    for ev in &model.events {
        let site = Site::Event(ev.name.clone());
        let mut scope = Scope::state();
        let mut pnames = BTreeSet::new();
        for (p, ty) in &ev.params {
            if matches!(ty, Ty::Map { .. }) {
                ctx.err(site.clone(), format!("map-typed parameter '{p}'"));
            }
            if !pnames.insert(p.clone())
                || model.var_index(p).is_some()
                || ctx.symbols.contains(p)
            {
                ctx.err(site.clone(), format!("parameter '{p}' shadows another name"));
            }
            let t = ctx.ty_to_t(&site, ty);
            scope = scope.bind(p, t);
        }
        if let Some(k) = &ev.kvar {
            if pnames.contains(k) || model.var_index(k).is_some() || ctx.symbols.contains(k) {
                ctx.err(site.clone(), format!("context variable '{k}' shadows another name"));
            }
            let cores: BTreeSet<String> = model.cores.iter().cloned().collect();
            scope = scope.bind(k, T::Syms(cores));
        }
        ctx.expect_bool(&site, &scope, &ev.guard);
        ctx.check_program(&site, &scope, &ev.body);
    }

    // Systems: one per core.
    if model.systems.len() != model.cores.len() {
        ctx.err(
            Site::Model,
            format!(
                "{} event systems declared for {} cores",
                model.systems.len(),
                model.cores.len()
            ),
        );
    }
    for (i, sys) in model.systems.iter().enumerate() {
        let core = model
            .cores
            .get(i)
            .cloned()
            .unwrap_or_else(|| format!("#{i}"));
        ctx.check_system(&core, sys);
    }

    // Policy.
    if let Some(p) = &model.policy {
        let site = Site::Policy;
        if p.domains.is_empty() {
            ctx.err(site.clone(), "no security domains declared");
        }
        let domset: BTreeSet<String> = p.domains.iter().cloned().collect();
        if domset.len() != p.domains.len() {
            ctx.err(site.clone(), "duplicate security domain");
        }
        for (a, b) in &p.interf {
            if !domset.contains(a) || !domset.contains(b) {
                ctx.err(site.clone(), format!("interference pair ({a} ~> {b}) over undeclared domains"));
            }
        }
        for d in &p.domains {
            if !p.interf.iter().any(|(a, b)| a == d && b == d) {
                ctx.err(
                    site.clone(),
                    format!("interference relation is not reflexive: missing {d} ~> {d}"),
                );
            }
        }
        // dom_evt: binds the core variable and the event variable.
        {
            let (kvar, evar, e) = &p.dom_evt;
            let cores: BTreeSet<String> = model.cores.iter().cloned().collect();
            let evs: BTreeSet<String> = model.events.iter().map(|e| e.name.clone()).collect();
            if kvar == evar {
                ctx.err(site.clone(), "dom_evt binds the same name twice");
            }
            let scope = Scope::state().bind(kvar, T::Syms(cores)).bind(evar, T::Syms(evs));
            let t = ctx.type_expr(&site, &scope, e);
            if !matches!(t, T::Syms(_)) {
                ctx.err(site.clone(), format!("dom_evt expression has type {t}, expected a domain symbol"));
            }
        }
        for d in p.obs.keys() {
            if !domset.contains(d) {
                ctx.err(site.clone(), format!("observation for undeclared domain '{d}'"));
            }
        }
        for d in &p.domains {
            match p.obs.get(d) {
                None => ctx.err(site.clone(), format!("no observation declared for domain '{d}'")),
                Some(e) => {
                    ctx.type_expr(&site, &Scope::state(), e);
                }
            }
        }
        for (d, r) in &p.vpeq {
            if !domset.contains(d) {
                ctx.err(site.clone(), format!("view equivalence for undeclared domain '{d}'"));
            }
            ctx.expect_bool(&site, &Scope::relational(), r);
        }
    }

    // Rely-guarantee annotations.
    for (name, quad) in &model.rgspec.events {
        let site = Site::RgEvent(name.clone());
        if model.event_index(name).is_none() {
            ctx.err(site.clone(), "rg spec for undeclared event");
        }
        ctx.expect_bool(&site, &Scope::state(), &quad.pre);
        ctx.expect_bool(&site, &Scope::relational(), &quad.rely);
        ctx.expect_bool(&site, &Scope::relational(), &quad.guar);
        ctx.expect_bool(&site, &Scope::state(), &quad.post);
    }
    for (core, quad) in &model.rgspec.systems {
        let site = Site::RgSystem(core.clone());
        if model.core_index(core).is_none() {
            ctx.err(site.clone(), "rg spec for undeclared core");
        }
        ctx.expect_bool(&site, &Scope::state(), &quad.pre);
        ctx.expect_bool(&site, &Scope::relational(), &quad.rely);
        ctx.expect_bool(&site, &Scope::relational(), &quad.guar);
        ctx.expect_bool(&site, &Scope::state(), &quad.post);
    }

    if ctx.errors.is_empty() {
        Ok(())
    } else {
        Err(ctx.errors)
    }
}
