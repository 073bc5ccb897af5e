//! Built-in multicore separation-kernel case study: partitions deployed on
//! per-core schedulers, sampling-channel IPC, the inter-partition flow
//! policy, per-domain observations, and the rely-guarantee annotations that
//! drive the certification pipeline. The generator is parameterized over
//! core count, deployment, channels, and the message carrier.

use crate::eventucs::{certify, CertifyError};
use crate::model::{
    eval, CarrierDecl, Env, EventDef, EventSys, Expr, Model, PolicyDecl, Program, RgQuad,
    RgSpecDecl, State, Ty, Value, VarDecl,
};
use crate::verdict::CertificationReport;
use crate::Caps;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ArincError {
    #[error("at least one core is required")]
    NoCores,
    #[error("core {0} has no partition deployed on it")]
    EmptyCore(usize),
    #[error("partition '{0}' is deployed on no core")]
    UndeployedPartition(String),
    #[error("partition '{0}' is deployed on core {1}, which does not exist")]
    BadDeployment(String, usize),
    #[error("duplicate partition '{0}'")]
    DuplicatePartition(String),
    #[error("channel '{0}' references unknown partition '{1}'")]
    UnknownPartition(String, String),
    #[error("channel '{0}' has no destination partitions")]
    NoDestinations(String),
    #[error("channel '{0}' sends from '{1}' to itself")]
    SelfChannel(String, String),
    #[error("duplicate channel '{0}'")]
    DuplicateChannel(String),
    #[error("at least one writable message value is required")]
    NoMessages,
    #[error("this mutation needs at least two cores")]
    MutationNeedsTwoCores,
}

/// Kernel configuration parameters. Cores are named `c0..`, schedulers
/// `S0..` with the core-to-scheduler bijection positional.
#[derive(Debug, Clone)]
pub struct ArincParams {
    pub cores: usize,
    /// Partition name and the set of cores it may execute on.
    pub partitions: Vec<(String, BTreeSet<usize>)>,
    /// Channel name, source partition, destination partitions.
    pub channels: Vec<(String, String, BTreeSet<String>)>,
    /// Number of writable message values (`M1..Mn`); the empty marker is
    /// added on top.
    pub messages: usize,
}

impl Default for ArincParams {
    fn default() -> Self {
        ArincParams {
            cores: 2,
            partitions: vec![
                ("P1".into(), std::iter::once(0).collect()),
                ("P2".into(), std::iter::once(1).collect()),
            ],
            channels: vec![(
                "ch1".into(),
                "P1".into(),
                std::iter::once("P2".to_string()).collect(),
            )],
            messages: 1,
        }
    }
}

/// The three documented mutations used to demonstrate failing premises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    /// Drop the channel's interference edge but keep the write event.
    DropPolicyEdge,
    /// Replace the write event's guarantee with the identity relation.
    WeakenWriteGuar,
    /// Make the first core's scheduler also write the next core's slot.
    CrossCoreSchedule,
}

struct Names {
    cores: Vec<String>,
    scheds: Vec<String>,
    parts: Vec<String>,
    /// Per partition, the cores it runs on.
    deploy: BTreeMap<String, BTreeSet<usize>>,
    /// Channel name -> (source partition, destinations).
    channels: BTreeMap<String, (String, BTreeSet<String>)>,
    chan_order: Vec<String>,
    msgs: Vec<String>,
    /// Port name -> (owner partition, channel, is_source).
    ports: BTreeMap<String, (String, String, bool)>,
    port_order: Vec<String>,
}

impl Names {
    fn build(p: &ArincParams) -> Result<Names, ArincError> {
        if p.cores == 0 {
            return Err(ArincError::NoCores);
        }
        if p.messages == 0 {
            return Err(ArincError::NoMessages);
        }
        let cores: Vec<String> = (0..p.cores).map(|i| format!("c{i}")).collect();
        let scheds: Vec<String> = (0..p.cores).map(|i| format!("S{i}")).collect();
        let mut parts = Vec::new();
        let mut deploy = BTreeMap::new();
        for (name, on) in &p.partitions {
            if deploy.contains_key(name) {
                return Err(ArincError::DuplicatePartition(name.clone()));
            }
            if on.is_empty() {
                return Err(ArincError::UndeployedPartition(name.clone()));
            }
            for c in on {
                if *c >= p.cores {
                    return Err(ArincError::BadDeployment(name.clone(), *c));
                }
            }
            parts.push(name.clone());
            deploy.insert(name.clone(), on.clone());
        }
        for core in 0..p.cores {
            if !deploy.values().any(|on| on.contains(&core)) {
                return Err(ArincError::EmptyCore(core));
            }
        }
        let mut channels = BTreeMap::new();
        let mut chan_order = Vec::new();
        let mut ports = BTreeMap::new();
        let mut port_order = Vec::new();
        for (ch, src, dests) in &p.channels {
            if channels.contains_key(ch) {
                return Err(ArincError::DuplicateChannel(ch.clone()));
            }
            if !deploy.contains_key(src) {
                return Err(ArincError::UnknownPartition(ch.clone(), src.clone()));
            }
            if dests.is_empty() {
                return Err(ArincError::NoDestinations(ch.clone()));
            }
            for d in dests {
                if !deploy.contains_key(d) {
                    return Err(ArincError::UnknownPartition(ch.clone(), d.clone()));
                }
                if d == src {
                    return Err(ArincError::SelfChannel(ch.clone(), src.clone()));
                }
            }
            channels.insert(ch.clone(), (src.clone(), dests.clone()));
            chan_order.push(ch.clone());
            let sp = format!("pt_{ch}_src");
            ports.insert(sp.clone(), (src.clone(), ch.clone(), true));
            port_order.push(sp);
            for d in dests {
                let dp = format!("pt_{ch}_{d}");
                ports.insert(dp.clone(), (d.clone(), ch.clone(), false));
                port_order.push(dp);
            }
        }
        let msgs: Vec<String> = std::iter::once("NoMsg".to_string())
            .chain((1..=p.messages).map(|i| format!("M{i}")))
            .collect();
        Ok(Names {
            cores,
            scheds,
            parts,
            deploy,
            channels,
            chan_order,
            msgs,
            ports,
            port_order,
        })
    }

    fn parts_on(&self, core: usize) -> Vec<String> {
        self.parts
            .iter()
            .filter(|p| self.deploy[*p].contains(&core))
            .cloned()
            .collect()
    }

    /// Channels a partition receives from, via its destination ports.
    fn dest_channels(&self, part: &str) -> Vec<String> {
        self.chan_order
            .iter()
            .filter(|ch| self.channels[*ch].1.contains(part))
            .cloned()
            .collect()
    }

    /// Channels writable from a core: their source partition is deployable
    /// there.
    fn writable_channels(&self, core: usize) -> Vec<String> {
        self.chan_order
            .iter()
            .filter(|ch| self.deploy[&self.channels[*ch].0].contains(&core))
            .cloned()
            .collect()
    }
}

fn cur_at(sched: &str) -> Expr {
    Expr::get(Expr::var("cur"), Expr::sym(sched))
}

fn cur_at_primed(sched: &str) -> Expr {
    Expr::get(Expr::Prime("cur".into()), Expr::sym(sched))
}

fn schan_at(ch: &str) -> Expr {
    Expr::get(Expr::var("schan"), Expr::sym(ch))
}

fn schan_at_primed(ch: &str) -> Expr {
    Expr::get(Expr::Prime("schan".into()), Expr::sym(ch))
}

/// Deployment invariant: every scheduler's current partition is deployable
/// on its core.
fn deployment_invariant(n: &Names, primed: bool) -> Expr {
    Expr::conj(
        (0..n.cores.len())
            .map(|k| {
                let at = if primed {
                    cur_at_primed(&n.scheds[k])
                } else {
                    cur_at(&n.scheds[k])
                };
                Expr::disj(
                    n.parts_on(k)
                        .iter()
                        .map(|p| Expr::eq(at.clone(), Expr::sym(p)))
                        .collect(),
                )
            })
            .collect(),
    )
}

/// The per-core rely: the environment preserves this core's slot and the
/// deployment invariant.
fn rely_of(n: &Names, core: usize) -> Expr {
    Expr::and(
        Expr::eq(cur_at_primed(&n.scheds[core]), cur_at(&n.scheds[core])),
        Expr::implies(deployment_invariant(n, false), deployment_invariant(n, true)),
    )
}

fn identity_rel(n: &Names) -> Expr {
    let cur_same = Expr::eq(Expr::Prime("cur".into()), Expr::var("cur"));
    if n.chan_order.is_empty() {
        cur_same
    } else {
        Expr::and(
            cur_same,
            Expr::eq(Expr::Prime("schan".into()), Expr::var("schan")),
        )
    }
}

fn schan_unchanged(n: &Names) -> Option<Expr> {
    if n.chan_order.is_empty() {
        None
    } else {
        Some(Expr::eq(Expr::Prime("schan".into()), Expr::var("schan")))
    }
}

/// Other cores' scheduler slots are preserved.
fn others_preserved(n: &Names, core: usize) -> Vec<Expr> {
    (0..n.cores.len())
        .filter(|j| *j != core)
        .map(|j| Expr::eq(cur_at_primed(&n.scheds[j]), cur_at(&n.scheds[j])))
        .collect()
}

fn schedule_guar(n: &Names, core: usize) -> Expr {
    let own = &n.scheds[core];
    let on_core = |primed: bool| {
        Expr::disj(
            n.parts_on(core)
                .iter()
                .map(|p| {
                    Expr::eq(
                        if primed { cur_at_primed(own) } else { cur_at(own) },
                        Expr::sym(p),
                    )
                })
                .collect(),
        )
    };
    let mut conj = others_preserved(n, core);
    if let Some(e) = schan_unchanged(n) {
        conj.push(e);
    }
    conj.push(Expr::or(
        Expr::eq(cur_at_primed(own), cur_at(own)),
        Expr::and(on_core(false), on_core(true)),
    ));
    Expr::conj(conj)
}

fn write_guar(n: &Names, core: usize) -> Expr {
    let cur_same = Expr::eq(Expr::Prime("cur".into()), Expr::var("cur"));
    let writable = n.writable_channels(core);
    if writable.is_empty() {
        return identity_rel(n);
    }
    let mut write_shapes = Vec::new();
    for ch in &writable {
        let owner = n.channels[ch].0.clone();
        let mut conj = vec![
            Expr::eq(cur_at(&n.scheds[core]), Expr::sym(&owner)),
            Expr::ne(schan_at_primed(ch), Expr::sym("NoMsg")),
        ];
        for other in &n.chan_order {
            if other != ch {
                conj.push(Expr::eq(schan_at_primed(other), schan_at(other)));
            }
        }
        write_shapes.push(Expr::conj(conj));
    }
    Expr::and(
        cur_same,
        Expr::or(
            schan_unchanged(n).expect("channels exist"),
            Expr::disj(write_shapes),
        ),
    )
}

/// The per-core system-level guarantee used by the parallel rule.
fn core_guar(n: &Names, core: usize) -> Expr {
    let mut conj = others_preserved(n, core);
    conj.push(Expr::implies(
        deployment_invariant(n, false),
        deployment_invariant(n, true),
    ));
    Expr::conj(conj)
}

fn event_name(base: &str, core: usize) -> String {
    format!("{base}_c{core}")
}

/// Generate the case-study model.
pub fn build_arinc_model(params: &ArincParams) -> Result<Model, ArincError> {
    let n = Names::build(params)?;
    let has_chans = !n.chan_order.is_empty();

    let mut carriers = vec![
        CarrierDecl {
            name: "Part".into(),
            members: n.parts.clone(),
        },
        CarrierDecl {
            name: "Sched".into(),
            members: n.scheds.clone(),
        },
    ];
    if has_chans {
        carriers.push(CarrierDecl {
            name: "Chan".into(),
            members: n.chan_order.clone(),
        });
        carriers.push(CarrierDecl {
            name: "Port".into(),
            members: n.port_order.clone(),
        });
        carriers.push(CarrierDecl {
            name: "Msg".into(),
            members: n.msgs.clone(),
        });
    }

    let mut vars = vec![VarDecl {
        name: "cur".into(),
        ty: Ty::Map {
            key: "Sched".into(),
            val: Box::new(Ty::Sym("Part".into())),
        },
    }];
    if has_chans {
        vars.push(VarDecl {
            name: "schan".into(),
            ty: Ty::Map {
                key: "Chan".into(),
                val: Box::new(Ty::Sym("Msg".into())),
            },
        });
    }

    let mut init = vec![(
        "cur".to_string(),
        Expr::MapLit(
            (0..n.cores.len())
                .map(|k| {
                    let first = n.parts_on(k).first().cloned().expect("validated deployment");
                    (n.scheds[k].clone(), Expr::sym(first))
                })
                .collect(),
        ),
    )];
    if has_chans {
        init.push((
            "schan".to_string(),
            Expr::MapLit(
                n.chan_order
                    .iter()
                    .map(|ch| (ch.clone(), Expr::sym("NoMsg")))
                    .collect(),
            ),
        ));
    }

    // Events, specialized per core: the execution context is baked into the
    // event text, so the per-event guarantees can be core-tight.
    let mut events: Vec<EventDef> = Vec::new();
    for core in 0..n.cores.len() {
        events.push(EventDef {
            name: event_name("Core_Init", core),
            params: vec![],
            kvar: None,
            guard: Expr::lit_bool(true),
            body: Program::skip(),
        });
        let own = n.scheds[core].clone();
        let sched_rel = {
            let pick = Expr::Exists(
                "p".into(),
                "Part".into(),
                Box::new(Expr::and(
                    Expr::disj(
                        n.parts_on(core)
                            .iter()
                            .map(|p| Expr::eq(Expr::var("p"), Expr::sym(p)))
                            .collect(),
                    ),
                    Expr::eq(
                        Expr::Prime("cur".into()),
                        Expr::set(Expr::var("cur"), Expr::sym(&own), Expr::var("p")),
                    ),
                )),
            );
            match schan_unchanged(&n) {
                Some(e) => Expr::and(e, pick),
                None => pick,
            }
        };
        events.push(EventDef {
            name: event_name("Schedule", core),
            params: vec![],
            kvar: None,
            guard: Expr::lit_bool(true),
            body: Program::Nondt(sched_rel),
        });
        if has_chans {
            let src_ports: Vec<String> = n
                .port_order
                .iter()
                .filter(|p| n.ports[*p].2)
                .cloned()
                .collect();
            let dest_ports: Vec<String> = n
                .port_order
                .iter()
                .filter(|p| !n.ports[*p].2)
                .cloned()
                .collect();
            let owner_of = |ports: &[String]| -> Expr {
                // Nested conditional mapping a port to its owner.
                let mut it = ports.iter().rev();
                let last = it.next().expect("nonempty ports");
                let mut acc = Expr::sym(&n.ports[last].0);
                for p in it {
                    acc = Expr::ite(
                        Expr::eq(Expr::var("pt"), Expr::sym(p)),
                        Expr::sym(&n.ports[p].0),
                        acc,
                    );
                }
                acc
            };
            let chan_of_src = {
                let mut it = src_ports.iter().rev();
                let last = it.next().expect("nonempty src ports");
                let mut acc = Expr::sym(&n.ports[last].1);
                for p in it {
                    acc = Expr::ite(
                        Expr::eq(Expr::var("pt"), Expr::sym(p)),
                        Expr::sym(&n.ports[p].1),
                        acc,
                    );
                }
                acc
            };
            let is_src = Expr::disj(
                src_ports
                    .iter()
                    .map(|p| Expr::eq(Expr::var("pt"), Expr::sym(p)))
                    .collect(),
            );
            let is_dest = Expr::disj(
                dest_ports
                    .iter()
                    .map(|p| Expr::eq(Expr::var("pt"), Expr::sym(p)))
                    .collect(),
            );
            events.push(EventDef {
                name: event_name("Write_Sampling_Message", core),
                params: vec![
                    ("pt".into(), Ty::Sym("Port".into())),
                    ("m".into(), Ty::Sym("Msg".into())),
                ],
                kvar: None,
                guard: Expr::conj(vec![
                    is_src,
                    Expr::eq(owner_of(&n.port_order), cur_at(&own)),
                    Expr::ne(Expr::var("m"), Expr::sym("NoMsg")),
                ]),
                body: Program::Basic(vec![crate::model::Assign {
                    var: "schan".into(),
                    key: Some(chan_of_src),
                    rhs: Expr::var("m"),
                }]),
            });
            events.push(EventDef {
                name: event_name("Read_Sampling_Message", core),
                params: vec![("pt".into(), Ty::Sym("Port".into()))],
                kvar: None,
                guard: Expr::and(is_dest, Expr::eq(owner_of(&n.port_order), cur_at(&own))),
                body: Program::skip(),
            });
        }
    }

    // Per-core event systems: initialization, then the repeating set.
    let mut systems = Vec::new();
    {
        let model_stub_names: Vec<String> = events.iter().map(|e| e.name.clone()).collect();
        let idx = |name: String| -> u32 {
            model_stub_names.iter().position(|n| *n == name).unwrap() as u32
        };
        for core in 0..n.cores.len() {
            let mut members = vec![idx(event_name("Schedule", core))];
            if has_chans {
                members.push(idx(event_name("Write_Sampling_Message", core)));
                members.push(idx(event_name("Read_Sampling_Message", core)));
            }
            systems.push(EventSys::Seq(
                crate::model::EventSpec::Basic(idx(event_name("Core_Init", core))),
                Some(deployment_invariant(&n, false)),
                Box::new(EventSys::Set(members)),
            ));
        }
    }

    // Policy: domains are the partitions plus one scheduler per core.
    let domains: Vec<String> = n.parts.iter().chain(n.scheds.iter()).cloned().collect();
    let mut interf: Vec<(String, String)> = Vec::new();
    for d in &domains {
        interf.push((d.clone(), d.clone()));
    }
    for core in 0..n.cores.len() {
        for p in n.parts_on(core) {
            interf.push((n.scheds[core].clone(), p.clone()));
        }
    }
    for ch in &n.chan_order {
        let (src, dests) = &n.channels[ch];
        for d in dests {
            let edge = (src.clone(), d.clone());
            if !interf.contains(&edge) {
                interf.push(edge);
            }
        }
    }

    // dom_evt: keyed on the event name; writes and reads run as the current
    // partition of their core, scheduling and initialization as the
    // scheduler domain.
    let dom_evt_expr = {
        let mut groups: Vec<(Vec<String>, Expr)> = Vec::new();
        for core in 0..n.cores.len() {
            if has_chans {
                groups.push((
                    vec![
                        event_name("Write_Sampling_Message", core),
                        event_name("Read_Sampling_Message", core),
                    ],
                    cur_at(&n.scheds[core]),
                ));
            }
            groups.push((
                vec![
                    event_name("Schedule", core),
                    event_name("Core_Init", core),
                ],
                Expr::sym(&n.scheds[core]),
            ));
        }
        let (_, last_expr) = groups.last().cloned().expect("at least one core");
        let mut acc = last_expr;
        for (names, expr) in groups.iter().rev().skip(1) {
            let cond = Expr::disj(
                names
                    .iter()
                    .map(|e| Expr::eq(Expr::var("e"), Expr::sym(e)))
                    .collect(),
            );
            acc = Expr::ite(cond, expr.clone(), acc);
        }
        acc
    };

    let mut obs: BTreeMap<String, Expr> = BTreeMap::new();
    for (k, s) in n.scheds.iter().enumerate() {
        let _ = k;
        obs.insert(s.clone(), cur_at(s));
    }
    for p in &n.parts {
        let dests = n.dest_channels(p);
        let e = if dests.is_empty() || !has_chans {
            Expr::lit_bool(true)
        } else {
            Expr::MapLit(
                n.chan_order
                    .iter()
                    .map(|ch| {
                        let v = if dests.contains(ch) {
                            schan_at(ch)
                        } else {
                            Expr::sym("NoMsg")
                        };
                        (ch.clone(), v)
                    })
                    .collect(),
            )
        };
        obs.insert(p.clone(), e);
    }

    let policy = PolicyDecl {
        domains,
        interf,
        dom_evt: ("k".into(), "e".into(), dom_evt_expr),
        obs,
        vpeq: BTreeMap::new(),
    };

    // Rely-guarantee annotations: per-event quadruples plus the per-core
    // system quadruples used by the parallel rule.
    let inv = deployment_invariant(&n, false);
    let mut rgspec = RgSpecDecl::default();
    for core in 0..n.cores.len() {
        let rely = rely_of(&n, core);
        rgspec.events.insert(
            event_name("Core_Init", core),
            RgQuad {
                pre: inv.clone(),
                rely: rely.clone(),
                guar: identity_rel(&n),
                post: inv.clone(),
            },
        );
        rgspec.events.insert(
            event_name("Schedule", core),
            RgQuad {
                pre: inv.clone(),
                rely: rely.clone(),
                guar: schedule_guar(&n, core),
                post: inv.clone(),
            },
        );
        if has_chans {
            rgspec.events.insert(
                event_name("Write_Sampling_Message", core),
                RgQuad {
                    pre: inv.clone(),
                    rely: rely.clone(),
                    guar: write_guar(&n, core),
                    post: inv.clone(),
                },
            );
            rgspec.events.insert(
                event_name("Read_Sampling_Message", core),
                RgQuad {
                    pre: inv.clone(),
                    rely: rely.clone(),
                    guar: identity_rel(&n),
                    post: inv.clone(),
                },
            );
        }
        rgspec.systems.insert(
            n.cores[core].clone(),
            RgQuad {
                pre: inv.clone(),
                rely: rely.clone(),
                guar: core_guar(&n, core),
                post: Expr::lit_bool(true),
            },
        );
    }

    let model = Model {
        name: "separation_kernel".into(),
        carriers,
        cores: n.cores.clone(),
        vars,
        init,
        events,
        systems,
        policy: Some(policy),
        rgspec,
    };
    Ok(model)
}

/// Generate a mutated instance that fails certification at a predictable
/// premise.
pub fn build_mutated(params: &ArincParams, mutation: Mutation) -> Result<Model, ArincError> {
    let n = Names::build(params)?;
    let mut model = build_arinc_model(params)?;
    match mutation {
        Mutation::DropPolicyEdge => {
            // Remove the channel edges from the interference relation; the
            // write event remains, so its guarantee pairs become visible to
            // domains its actor may no longer interfere with.
            let policy = model.policy.as_mut().expect("generated policy");
            policy.interf.retain(|(a, b)| {
                !n.chan_order.iter().any(|ch| {
                    let (src, dests) = &n.channels[ch];
                    a == src && dests.contains(b)
                })
            });
        }
        Mutation::WeakenWriteGuar => {
            // The write event's guarantee no longer contains its effect.
            for core in 0..n.cores.len() {
                if let Some(q) = model
                    .rgspec
                    .events
                    .get_mut(&event_name("Write_Sampling_Message", core))
                {
                    q.guar = identity_rel(&n);
                }
            }
        }
        Mutation::CrossCoreSchedule => {
            if n.cores.len() < 2 {
                return Err(ArincError::MutationNeedsTwoCores);
            }
            // The first core's scheduler also overwrites the second core's
            // slot with its own pick; its guarantee still promises to leave
            // other cores alone.
            let own = n.scheds[0].clone();
            let other = n.scheds[1].clone();
            let pick = Expr::Exists(
                "p".into(),
                "Part".into(),
                Box::new(Expr::and(
                    Expr::disj(
                        n.parts_on(0)
                            .iter()
                            .map(|p| Expr::eq(Expr::var("p"), Expr::sym(p)))
                            .collect(),
                    ),
                    Expr::eq(
                        Expr::Prime("cur".into()),
                        Expr::set(
                            Expr::set(Expr::var("cur"), Expr::sym(&own), Expr::var("p")),
                            Expr::sym(&other),
                            Expr::var("p"),
                        ),
                    ),
                )),
            );
            let rel = match schan_unchanged(&n) {
                Some(e) => Expr::and(e, pick),
                None => pick,
            };
            let name = event_name("Schedule", 0);
            for ev in &mut model.events {
                if ev.name == name {
                    ev.body = Program::Nondt(rel.clone());
                }
            }
        }
    }
    Ok(model)
}

/// Evaluate a domain's observation of a state.
pub fn observation(
    model: &Model,
    state: &State,
    domain: &str,
) -> Result<Value, crate::model::EvalError> {
    let policy = model.policy.as_ref().expect("policy");
    let e = policy.obs.get(domain).expect("declared domain");
    let env = Env::closed(model, state);
    eval(e, &env)
}

/// Build the instance and drive the full certification pipeline with the
/// bounded-oracle cross-check.
pub fn run_case_study(
    params: &ArincParams,
    k: usize,
    caps: &Caps,
) -> Result<CertificationReport, CaseStudyError> {
    let model = build_arinc_model(params)?;
    Ok(certify(&model, caps, Some(k))?)
}

#[derive(Debug, Error)]
pub enum CaseStudyError {
    #[error(transparent)]
    Arinc(#[from] ArincError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
}
