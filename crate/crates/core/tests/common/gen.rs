//! Seeded random model generation for the property suites. Three flavors:
//! no-op models (every event stutters), owner-aligned writers (each event
//! writes only variables its domain observes), and unconstrained writers.

use super::{const_dom_evt, identity_rel, MB};
use picore::model::{Expr, Model, Program, Ty};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    /// All bodies are SKIP; identity guarantees hold.
    Noop,
    /// Events write literals into variables owned by their own domain.
    OwnerAligned,
    /// Events may write anything; usually insecure.
    Free,
}

pub struct GenParams {
    pub flavor: Flavor,
    pub max_cores: usize,
    pub max_events: usize,
    pub max_vars: usize,
    /// Generate rely-guarantee annotations (identity or effect-shaped
    /// guarantees for no-op / owner-aligned models, universal otherwise).
    pub with_rg: bool,
    /// Make some events' domains state-dependent, so one syntactic step
    /// interns into several actions.
    pub dynamic_dom: bool,
    /// Declare a coarsened view equivalence for one domain instead of
    /// deriving it from the observation.
    pub declared_vpeq: bool,
}

impl GenParams {
    pub fn small(flavor: Flavor) -> GenParams {
        GenParams {
            flavor,
            max_cores: 2,
            max_events: 3,
            max_vars: 3,
            with_rg: false,
            dynamic_dom: false,
            declared_vpeq: false,
        }
    }
}

fn var_ty(rng: &mut ChaCha8Rng) -> (Ty, Expr) {
    match rng.gen_range(0..3) {
        0 => (Ty::Bool, Expr::lit_bool(false)),
        1 => (Ty::Int { lo: 0, hi: 2 }, Expr::lit_int(0)),
        _ => (Ty::Sym("C".into()), Expr::sym("ca")),
    }
}

fn literal_of(rng: &mut ChaCha8Rng, ty: &Ty) -> Expr {
    match ty {
        Ty::Bool => Expr::lit_bool(rng.gen_bool(0.5)),
        Ty::Int { lo, hi } => Expr::lit_int(rng.gen_range(*lo..=*hi)),
        Ty::Sym(_) => Expr::sym(["ca", "cb", "cc"][rng.gen_range(0..3)]),
        Ty::Map { .. } => unreachable!("no map vars in generated models"),
    }
}

fn asg(var: &str, e: Expr) -> Program {
    Program::Basic(vec![picore::model::Assign {
        var: var.into(),
        key: None,
        rhs: e,
    }])
}

/// A small guard over the given variables (possibly `true`).
fn guard_of(rng: &mut ChaCha8Rng, vars: &[(String, Ty)]) -> Expr {
    if vars.is_empty() || rng.gen_bool(0.4) {
        return Expr::lit_bool(true);
    }
    let (v, ty) = &vars[rng.gen_range(0..vars.len())];
    let lit = literal_of(rng, ty);
    if rng.gen_bool(0.5) {
        Expr::eq(Expr::var(v), lit)
    } else {
        Expr::or(Expr::ne(Expr::var(v), lit), Expr::lit_bool(false))
    }
}

/// A body writing literals into the given variables, wrapped in a random
/// composite shape.
fn body_of(rng: &mut ChaCha8Rng, writable: &[(String, Ty)], all: &[(String, Ty)]) -> Program {
    if writable.is_empty() {
        return Program::skip();
    }
    let write = |rng: &mut ChaCha8Rng| {
        let (v, ty) = &writable[rng.gen_range(0..writable.len())];
        let lit = literal_of(rng, ty);
        asg(v, lit)
    };
    match rng.gen_range(0..5) {
        0 => write(rng),
        1 => Program::Seq(
            Box::new(write(rng)),
            Box::new(write(rng)),
            Some(Expr::lit_bool(true)),
        ),
        2 => {
            let g = guard_of(rng, all);
            Program::Cond(g, Box::new(write(rng)), Box::new(Program::skip()))
        }
        3 => {
            // A nondeterministic pick between two literals, framing the
            // other variables explicitly so the relation is exact.
            let (v, ty) = &writable[rng.gen_range(0..writable.len())];
            let l1 = literal_of(rng, ty);
            let l2 = literal_of(rng, ty);
            let mut conj: Vec<Expr> = all
                .iter()
                .filter(|(n, _)| n != v)
                .map(|(n, _)| Expr::eq(Expr::Prime(n.clone()), Expr::var(n)))
                .collect();
            conj.push(Expr::or(
                Expr::eq(Expr::Prime(v.clone()), l1),
                Expr::eq(Expr::Prime(v.clone()), l2),
            ));
            Program::Nondt(Expr::conj(conj))
        }
        _ => {
            let g = guard_of(rng, all);
            Program::Await(g, Box::new(write(rng)))
        }
    }
}

/// Generate one random validated model with a policy.
pub fn random_model(rng: &mut ChaCha8Rng, p: &GenParams) -> Model {
    let ncores = rng.gen_range(1..=p.max_cores);
    let nvars = rng.gen_range(1..=p.max_vars);
    let nevents = rng.gen_range(1..=p.max_events);
    let ndomains = rng.gen_range(2..=3usize);
    let domains: Vec<String> = (0..ndomains).map(|i| format!("d{i}")).collect();

    let mut mb = MB::new("generated").carrier("C", &["ca", "cb", "cc"]).cores(ncores);
    let mut vars: Vec<(String, Ty)> = Vec::new();
    for i in 0..nvars {
        let name = format!("v{i}");
        let (ty, init) = var_ty(rng);
        vars.push((name.clone(), ty.clone()));
        mb = match ty {
            Ty::Bool => mb.bool_var(&name, false),
            Ty::Int { lo, hi } => {
                let _ = (lo, hi);
                mb.int_var(&name, 0, 2, 0)
            }
            Ty::Sym(_) => mb.sym_var(&name, "C", "ca"),
            Ty::Map { .. } => unreachable!(),
        };
        let _ = init;
    }

    // Assign each variable an owning domain; used by observations and the
    // owner-aligned flavor.
    let owner: Vec<usize> = (0..nvars).map(|_| rng.gen_range(0..ndomains)).collect();

    let mut event_domains: Vec<(String, String)> = Vec::new();
    for i in 0..nevents {
        let name = format!("E{i}");
        let edom = rng.gen_range(0..ndomains);
        let writable: Vec<(String, Ty)> = match p.flavor {
            Flavor::Noop => vec![],
            Flavor::OwnerAligned => vars
                .iter()
                .enumerate()
                .filter(|(vi, _)| owner[*vi] == edom)
                .map(|(_, v)| v.clone())
                .collect(),
            Flavor::Free => vars.clone(),
        };
        let mut guard = guard_of(rng, &vars);
        let mut body = body_of(rng, &writable, &vars);
        // Sometimes parameterize the event over the shared carrier: the
        // guard constrains the parameter and the body may store it.
        let writable_sym: Vec<&(String, Ty)> = writable
            .iter()
            .filter(|(_, ty)| matches!(ty, Ty::Sym(_)))
            .collect();
        let params: &[(&str, Ty)] = if p.flavor != Flavor::Noop && rng.gen_bool(0.4) {
            guard = Expr::and(guard, Expr::ne(Expr::var("prm"), Expr::sym("cc")));
            if let Some((v, _)) = writable_sym.first() {
                body = Program::seq(body, asg(v, Expr::var("prm")));
            }
            &[("prm", Ty::Sym(String::new()))]
        } else {
            &[]
        };
        if params.is_empty() {
            mb = mb.event(&name, guard, body);
        } else {
            mb = mb.event_p(&name, &[("prm", Ty::Sym("C".into()))], guard, body);
        }
        event_domains.push((name, domains[edom].clone()));
    }

    // Per-core systems: either a set of all events or an initialization
    // sequence in front.
    let all_events: Vec<&str> = event_domains.iter().map(|(n, _)| n.as_str()).collect();
    mb = mb.all_cores_run(&all_events);

    // Observation: each domain sees an integer encoding of the variables it
    // owns; domains owning nothing observe a constant.
    let obs: Vec<(String, Expr)> = domains
        .iter()
        .enumerate()
        .map(|(di, d)| {
            let owned: Vec<usize> = (0..nvars).filter(|v| owner[*v] == di).collect();
            let expr = if owned.is_empty() {
                Expr::lit_bool(true)
            } else {
                let mut acc = Expr::lit_int(0);
                for v in owned {
                    let (name, ty) = &vars[v];
                    let idx = match ty {
                        Ty::Bool => Expr::ite(Expr::var(name), Expr::lit_int(1), Expr::lit_int(0)),
                        Ty::Int { .. } => Expr::var(name),
                        Ty::Sym(_) => Expr::ite(
                            Expr::eq(Expr::var(name), Expr::sym("ca")),
                            Expr::lit_int(0),
                            Expr::ite(
                                Expr::eq(Expr::var(name), Expr::sym("cb")),
                                Expr::lit_int(1),
                                Expr::lit_int(2),
                            ),
                        ),
                        Ty::Map { .. } => unreachable!(),
                    };
                    acc = Expr::Arith(
                        picore::model::ArithOp::Add,
                        Box::new(Expr::Arith(
                            picore::model::ArithOp::Mul,
                            Box::new(acc),
                            Box::new(Expr::lit_int(4)),
                        )),
                        Box::new(idx),
                    );
                }
                acc
            };
            (d.clone(), expr)
        })
        .collect();

    // Interference: reflexive plus random extra edges.
    let mut edges: Vec<(String, String)> = Vec::new();
    for a in &domains {
        for b in &domains {
            if a != b && rng.gen_bool(0.4) {
                edges.push((a.clone(), b.clone()));
            }
        }
    }

    let dom_pairs: Vec<(&str, &str)> = event_domains
        .iter()
        .map(|(e, d)| (e.as_str(), d.as_str()))
        .collect();
    let dom_evt = if p.dynamic_dom && !vars.is_empty() {
        // The first event runs as one of two domains depending on a state
        // variable; the rest keep their static assignment.
        let (vname, vty) = &vars[0];
        let test = match vty {
            Ty::Bool => Expr::var(vname),
            Ty::Int { .. } => Expr::eq(Expr::var(vname), Expr::lit_int(0)),
            Ty::Sym(_) => Expr::eq(Expr::var(vname), Expr::sym("ca")),
            Ty::Map { .. } => unreachable!(),
        };
        Expr::ite(
            Expr::eq(Expr::var("e"), Expr::sym("E0")),
            Expr::ite(test, Expr::sym(&domains[0]), Expr::sym(&domains[1])),
            const_dom_evt(&dom_pairs),
        )
    } else {
        const_dom_evt(&dom_pairs)
    };
    let edge_refs: Vec<(&str, &str)> = edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let dom_refs: Vec<&str> = domains.iter().map(|d| d.as_str()).collect();
    let obs_refs: Vec<(&str, Expr)> = obs.iter().map(|(d, e)| (d.as_str(), e.clone())).collect();
    mb = mb.policy(&dom_refs, &edge_refs, dom_evt, obs_refs);

    if p.declared_vpeq {
        // Coarsen one domain's view to "equal or both observe nothing
        // surprising": here simply the total relation, with an observation
        // that is constant so consistency still holds, or the exact
        // observation equality written out, depending on a coin.
        let d0 = &domains[0];
        if rng.gen_bool(0.5) {
            // Exact equality of the observed encoding: same partition as
            // the derived one, written as a relation.
            let own: Vec<usize> = (0..nvars).filter(|v| owner[*v] == 0).collect();
            let rel = Expr::conj(
                own.iter()
                    .map(|v| {
                        let (name, _) = &vars[*v];
                        Expr::eq(Expr::Prime(name.clone()), Expr::var(name))
                    })
                    .collect(),
            );
            mb = mb.vpeq(d0, rel);
        } else {
            // A finer partition: full-state equality.
            let rel = Expr::conj(
                vars.iter()
                    .map(|(name, _)| Expr::eq(Expr::Prime(name.clone()), Expr::var(name)))
                    .collect(),
            );
            mb = mb.vpeq(d0, rel);
        }
    }

    if p.with_rg {
        let var_names: Vec<&str> = vars.iter().map(|(n, _)| n.as_str()).collect();
        let id = identity_rel(&var_names);
        let univ_rel = Expr::lit_bool(true);
        let top = Expr::lit_bool(true);
        for (name, _) in &event_domains {
            match p.flavor {
                Flavor::Noop => {
                    mb = mb.rg_event(name, top.clone(), id.clone(), id.clone(), top.clone());
                }
                _ => {
                    mb = mb.rg_event(
                        name,
                        top.clone(),
                        univ_rel.clone(),
                        univ_rel.clone(),
                        top.clone(),
                    );
                }
            }
        }
        for core in 0..ncores {
            let core_name = format!("c{core}");
            match p.flavor {
                Flavor::Noop => {
                    mb = mb.rg_system(&core_name, top.clone(), id.clone(), id.clone(), top.clone());
                }
                _ => {
                    mb = mb.rg_system(
                        &core_name,
                        top.clone(),
                        univ_rel.clone(),
                        univ_rel.clone(),
                        top.clone(),
                    );
                }
            }
        }
    }

    mb.build()
}

/// Owner-aligned models with effect-shaped per-event guarantees: the
/// guarantee is the identity or a write of the event's own variables,
/// expressed syntactically, so the event-level unwinding conditions have
/// non-trivial passing instances.
pub fn random_model_tight_rg(rng: &mut ChaCha8Rng, max_cores: usize) -> Model {
    let ncores = rng.gen_range(1..=max_cores);
    let nvars = rng.gen_range(1..=2usize);
    let nevents = rng.gen_range(1..=2usize);
    let ndomains = 2usize;
    let domains: Vec<String> = (0..ndomains).map(|i| format!("d{i}")).collect();

    let mut mb = MB::new("generated_tight").cores(ncores);
    let mut vars: Vec<String> = Vec::new();
    for i in 0..nvars {
        let name = format!("v{i}");
        mb = mb.int_var(&name, 0, 2, 0);
        vars.push(name);
    }
    let owner: Vec<usize> = (0..nvars).map(|_| rng.gen_range(0..ndomains)).collect();

    let mut event_domains: Vec<(String, String)> = Vec::new();
    let mut event_writes: Vec<Option<(String, i64)>> = Vec::new();
    for i in 0..nevents {
        let name = format!("E{i}");
        let edom = rng.gen_range(0..ndomains);
        let owned: Vec<usize> = (0..nvars).filter(|v| owner[*v] == edom).collect();
        let write = if owned.is_empty() || rng.gen_bool(0.3) {
            None
        } else {
            let v = owned[rng.gen_range(0..owned.len())];
            Some((vars[v].clone(), rng.gen_range(0..=2i64)))
        };
        let body = match &write {
            None => Program::skip(),
            Some((v, lit)) => asg(v, Expr::lit_int(*lit)),
        };
        mb = mb.event(&name, Expr::lit_bool(true), body);
        event_domains.push((name, domains[edom].clone()));
        event_writes.push(write);
    }
    let all_events: Vec<&str> = event_domains.iter().map(|(n, _)| n.as_str()).collect();
    mb = mb.all_cores_run(&all_events);

    let obs: Vec<(String, Expr)> = domains
        .iter()
        .enumerate()
        .map(|(di, d)| {
            let owned: Vec<usize> = (0..nvars).filter(|v| owner[*v] == di).collect();
            let expr = if owned.is_empty() {
                Expr::lit_bool(true)
            } else {
                let mut acc = Expr::lit_int(0);
                for v in owned {
                    acc = Expr::Arith(
                        picore::model::ArithOp::Add,
                        Box::new(Expr::Arith(
                            picore::model::ArithOp::Mul,
                            Box::new(acc),
                            Box::new(Expr::lit_int(3)),
                        )),
                        Box::new(Expr::var(&vars[v])),
                    );
                }
                acc
            };
            (d.clone(), expr)
        })
        .collect();

    let mut edges: Vec<(String, String)> = Vec::new();
    for a in &domains {
        for b in &domains {
            if a != b && rng.gen_bool(0.5) {
                edges.push((a.clone(), b.clone()));
            }
        }
    }
    let dom_pairs: Vec<(&str, &str)> = event_domains
        .iter()
        .map(|(e, d)| (e.as_str(), d.as_str()))
        .collect();
    let dom_evt = const_dom_evt(&dom_pairs);
    let edge_refs: Vec<(&str, &str)> = edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let dom_refs: Vec<&str> = domains.iter().map(|d| d.as_str()).collect();
    let obs_refs: Vec<(&str, Expr)> = obs.iter().map(|(d, e)| (d.as_str(), e.clone())).collect();
    mb = mb.policy(&dom_refs, &edge_refs, dom_evt, obs_refs);

    // Effect-shaped guarantees: identity, or "writes exactly this literal
    // into this variable, framing the rest". Every rely and the per-core
    // system guarantees are the union of all event guarantees, which closes
    // the cross rely/guarantee premises of the parallel rule.
    let var_refs: Vec<&str> = vars.iter().map(|v| v.as_str()).collect();
    let id = identity_rel(&var_refs);
    let top = Expr::lit_bool(true);
    let mut guars: Vec<Expr> = Vec::new();
    for write in &event_writes {
        let guar = match write {
            None => id.clone(),
            Some((v, lit)) => {
                let mut frame: Vec<Expr> = vars
                    .iter()
                    .filter(|n| *n != v)
                    .map(|n| Expr::eq(Expr::Prime(n.clone()), Expr::var(n)))
                    .collect();
                frame.push(Expr::or(
                    Expr::eq(Expr::Prime(v.clone()), Expr::var(v)),
                    Expr::eq(Expr::Prime(v.clone()), Expr::lit_int(*lit)),
                ));
                Expr::conj(frame)
            }
        };
        guars.push(guar);
    }
    let all_guar = Expr::disj(guars.iter().cloned().chain(std::iter::once(id)).collect());
    for ((name, _), guar) in event_domains.iter().zip(guars.iter()) {
        mb = mb.rg_event(name, top.clone(), all_guar.clone(), guar.clone(), top.clone());
    }
    for core in 0..ncores {
        mb = mb.rg_system(
            &format!("c{core}"),
            top.clone(),
            all_guar.clone(),
            all_guar.clone(),
            top.clone(),
        );
    }
    mb.build()
}
