//! Shared test support: a small model-building DSL, the hand-stepped golden
//! corpus, random model and outline generators, and naive reference oracles.

#![allow(dead_code)]

pub mod gen;
pub mod golden;
pub mod naive;
pub mod outlines;

use picore::model::{
    validate, CarrierDecl, EventDef, EventSys, Expr, Model, PolicyDecl, Program, RgQuad,
    RgSpecDecl, Ty, VarDecl,
};
use std::collections::BTreeMap;

/// Builder for small models used across the test suites.
pub struct MB {
    model: Model,
}

impl MB {
    pub fn new(name: &str) -> MB {
        MB {
            model: Model {
                name: name.to_string(),
                carriers: vec![],
                cores: vec![],
                vars: vec![],
                init: vec![],
                events: vec![],
                systems: vec![],
                policy: None,
                rgspec: RgSpecDecl::default(),
            },
        }
    }

    pub fn carrier(mut self, name: &str, members: &[&str]) -> Self {
        self.model.carriers.push(CarrierDecl {
            name: name.into(),
            members: members.iter().map(|m| m.to_string()).collect(),
        });
        self
    }

    pub fn cores(mut self, n: usize) -> Self {
        self.model.cores = (0..n).map(|i| format!("c{i}")).collect();
        self
    }

    pub fn bool_var(mut self, name: &str, init: bool) -> Self {
        self.model.vars.push(VarDecl {
            name: name.into(),
            ty: Ty::Bool,
        });
        self.model.init.push((name.into(), Expr::lit_bool(init)));
        self
    }

    pub fn int_var(mut self, name: &str, lo: i64, hi: i64, init: i64) -> Self {
        self.model.vars.push(VarDecl {
            name: name.into(),
            ty: Ty::Int { lo, hi },
        });
        self.model.init.push((name.into(), Expr::lit_int(init)));
        self
    }

    pub fn sym_var(mut self, name: &str, carrier: &str, init: &str) -> Self {
        self.model.vars.push(VarDecl {
            name: name.into(),
            ty: Ty::Sym(carrier.into()),
        });
        self.model.init.push((name.into(), Expr::sym(init)));
        self
    }

    pub fn event(mut self, name: &str, guard: Expr, body: Program) -> Self {
        self.model.events.push(EventDef {
            name: name.into(),
            params: vec![],
            kvar: None,
            guard,
            body,
        });
        self
    }

    pub fn event_p(
        mut self,
        name: &str,
        params: &[(&str, Ty)],
        guard: Expr,
        body: Program,
    ) -> Self {
        self.model.events.push(EventDef {
            name: name.into(),
            params: params.iter().map(|(n, t)| (n.to_string(), t.clone())).collect(),
            kvar: None,
            guard,
            body,
        });
        self
    }

    /// One event system per core, in order.
    pub fn systems(mut self, systems: Vec<EventSys>) -> Self {
        self.model.systems = systems;
        self
    }

    /// Every core runs the same event set.
    pub fn all_cores_run(mut self, events: &[&str]) -> Self {
        let idxs: Vec<u32> = events
            .iter()
            .map(|n| self.model.event_index(n).expect("declared event") as u32)
            .collect();
        self.model.systems = self
            .model
            .cores
            .iter()
            .map(|_| EventSys::Set(idxs.clone()))
            .collect();
        self
    }

    pub fn policy(
        mut self,
        domains: &[&str],
        extra_edges: &[(&str, &str)],
        dom_evt: Expr,
        obs: Vec<(&str, Expr)>,
    ) -> Self {
        let mut interf: Vec<(String, String)> = domains
            .iter()
            .map(|d| (d.to_string(), d.to_string()))
            .collect();
        for (a, b) in extra_edges {
            let e = (a.to_string(), b.to_string());
            if !interf.contains(&e) {
                interf.push(e);
            }
        }
        self.model.policy = Some(PolicyDecl {
            domains: domains.iter().map(|d| d.to_string()).collect(),
            interf,
            dom_evt: ("k".into(), "e".into(), dom_evt),
            obs: obs.into_iter().map(|(d, e)| (d.to_string(), e)).collect(),
            vpeq: BTreeMap::new(),
        });
        self
    }

    pub fn vpeq(mut self, domain: &str, rel: Expr) -> Self {
        self.model
            .policy
            .as_mut()
            .expect("policy first")
            .vpeq
            .insert(domain.into(), rel);
        self
    }

    pub fn rg_event(mut self, name: &str, pre: Expr, rely: Expr, guar: Expr, post: Expr) -> Self {
        self.model.rgspec.events.insert(
            name.into(),
            RgQuad {
                pre,
                rely,
                guar,
                post,
            },
        );
        self
    }

    pub fn rg_system(mut self, core: &str, pre: Expr, rely: Expr, guar: Expr, post: Expr) -> Self {
        self.model.rgspec.systems.insert(
            core.into(),
            RgQuad {
                pre,
                rely,
                guar,
                post,
            },
        );
        self
    }

    pub fn build(self) -> Model {
        if let Err(errors) = validate(&self.model) {
            for e in &errors {
                eprintln!("builder validation: {e}");
            }
            panic!("test model '{}' failed validation", self.model.name);
        }
        self.model
    }

    /// Access without validation, for negative tests.
    pub fn build_unchecked(self) -> Model {
        self.model
    }
}

/// A dom_evt expression mapping every event to one constant domain, by
/// declaration order.
pub fn const_dom_evt(events_to_domains: &[(&str, &str)]) -> Expr {
    let (_, last) = events_to_domains.last().expect("nonempty");
    let mut acc = Expr::sym(*last);
    for (ev, d) in events_to_domains.iter().rev().skip(1) {
        acc = Expr::ite(
            Expr::eq(Expr::var("e"), Expr::sym(*ev)),
            Expr::sym(*d),
            acc,
        );
    }
    acc
}

/// Identity relation over the given state variables.
pub fn identity_rel(vars: &[&str]) -> Expr {
    Expr::conj(
        vars.iter()
            .map(|v| Expr::eq(Expr::Prime(v.to_string()), Expr::var(*v)))
            .collect(),
    )
}
