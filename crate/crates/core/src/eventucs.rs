//! Event-level unwinding conditions over per-event guarantee conditions, and
//! the compositional certification pipeline that combines them with the
//! proof-outline checks and the observation-consistency condition.

use crate::ifs::{check_oc, oracle_noninfluence, oracle_nonleakage, PolicyCtx};
use crate::machine::{build_machine, dom_of, Machine};
use crate::model::{EventSpec, Model};
use crate::rg::{
    check_outline, event_outline, gamma_of_model, model_outline, RgCond, StateRel,
};
use crate::verdict::{CertificationReport, Verdict, Witness};
use crate::Caps;
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error("missing rely-guarantee spec for event '{0}'")]
    MissingGamma(String),
    #[error(transparent)]
    Policy(#[from] crate::ifs::PolicyError),
    #[error(transparent)]
    Machine(#[from] crate::machine::MachineError),
    #[error(transparent)]
    Outline(#[from] crate::rg::OutlineError),
    #[error(transparent)]
    Oracle(#[from] crate::ifs::OracleError),
}

/// Per-event guarantee conditions, total on the events of the parallel
/// composition.
pub struct GammaMap {
    pub quads: BTreeMap<u32, RgCond>,
}

impl GammaMap {
    /// Extract the Gamma map from a model's annotation block, requiring
    /// totality on the composed events.
    pub fn from_model(
        model: &Model,
        universe: &Arc<crate::model::Universe>,
    ) -> Result<GammaMap, CertifyError> {
        let quads = gamma_of_model(model, universe)?;
        for ev in model.evts() {
            if let EventSpec::Basic(i) = ev {
                if !quads.contains_key(&i) {
                    return Err(CertifyError::MissingGamma(model.event(i).name.clone()));
                }
            }
        }
        Ok(GammaMap { quads })
    }

    pub fn guar_of(&self, ev: u32) -> &StateRel {
        &self.quads[&ev].guar
    }
}

/// Locally respects on events: a guarantee pair of an event whose domain may
/// not interfere with the observer is invisible to the observer. Quantified
/// over the full state universe and all cores.
pub fn check_lre(model: &Model, policy: &PolicyCtx, gamma: &GammaMap) -> Verdict {
    let t0 = std::time::Instant::now();
    let mut checked = 0u64;
    let mut events: Vec<u32> = model
        .evts()
        .into_iter()
        .filter_map(|e| match e {
            EventSpec::Basic(i) => Some(i),
            EventSpec::Anony(_) => None,
        })
        .collect();
    events.sort_by_key(|i| model.event(*i).name.clone());
    for ev in events {
        let name = model.event(ev).name.clone();
        let guar = gamma.guar_of(ev);
        for d in &policy.domains {
            for core in 0..model.cores.len() as u32 {
                for (s1, s2) in &guar.0 {
                    let dom = match dom_of(model, policy.universe.state(*s1), core, ev) {
                        Ok(d) => d,
                        Err(_) => continue,
                    };
                    if policy.interferes(&dom, d) {
                        continue;
                    }
                    checked += 1;
                    if !policy.vpeq_ids(d, *s1, *s2) {
                        let mut v = Verdict::fail(
                            "locally-respects-events",
                            Witness::EventStep {
                                event: name.clone(),
                                domain: d.clone(),
                                s1: *s1,
                                s2: *s2,
                                s1_text: model.show_state(policy.universe.state(*s1)),
                                s2_text: model.show_state(policy.universe.state(*s2)),
                                detail: format!(
                                    "guarantee pair visible to {d} although {dom} does not interfere with it"
                                ),
                            },
                        );
                        v.checked = checked;
                        v.millis = t0.elapsed().as_millis();
                        return v;
                    }
                }
            }
        }
    }
    let mut v = Verdict::pass("locally-respects-events");
    v.checked = checked;
    v.millis = t0.elapsed().as_millis();
    v
}

/// Step consistency on events: over the full universe, whenever two states
/// agree for the observer (and for the event's domain when it interferes),
/// any two guarantee pairs leaving them land in states the observer cannot
/// tell apart. The event's domain is evaluated at the first source state,
/// with the core universally quantified.
pub fn check_sce(model: &Model, policy: &PolicyCtx, gamma: &GammaMap) -> Verdict {
    let t0 = std::time::Instant::now();
    let mut checked = 0u64;
    let mut events: Vec<u32> = model
        .evts()
        .into_iter()
        .filter_map(|e| match e {
            EventSpec::Basic(i) => Some(i),
            EventSpec::Anony(_) => None,
        })
        .collect();
    events.sort_by_key(|i| model.event(*i).name.clone());
    for ev in events {
        let name = model.event(ev).name.clone();
        let guar = gamma.guar_of(ev);
        // Group guarantee pairs by source for the quadratic pass.
        let mut by_src: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for (a, b) in &guar.0 {
            by_src.entry(*a).or_default().push(*b);
        }
        for d in &policy.domains {
            for core in 0..model.cores.len() as u32 {
                for (s1, t1s) in &by_src {
                    let dom = match dom_of(model, policy.universe.state(*s1), core, ev) {
                        Ok(d) => d,
                        Err(_) => continue,
                    };
                    for (s2, t2s) in &by_src {
                        if !policy.vpeq_ids(d, *s1, *s2) {
                            continue;
                        }
                        if policy.interferes(&dom, d) && !policy.vpeq_ids(&dom, *s1, *s2) {
                            continue;
                        }
                        for t1 in t1s {
                            for t2 in t2s {
                                checked += 1;
                                if !policy.vpeq_ids(d, *t1, *t2) {
                                    let mut v = Verdict::fail(
                                        "step-consistent-events",
                                        Witness::EventStep {
                                            event: name.clone(),
                                            domain: d.clone(),
                                            s1: *s1,
                                            s2: *s2,
                                            s1_text: model
                                                .show_state(policy.universe.state(*s1)),
                                            s2_text: model
                                                .show_state(policy.universe.state(*s2)),
                                            detail: format!(
                                                "guarantee pairs reach {} and {}, distinguishable by {d}",
                                                model.show_state(policy.universe.state(*t1)),
                                                model.show_state(policy.universe.state(*t2))
                                            ),
                                        },
                                    );
                                    v.checked = checked;
                                    v.millis = t0.elapsed().as_millis();
                                    return v;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let mut v = Verdict::pass("step-consistent-events");
    v.checked = checked;
    v.millis = t0.elapsed().as_millis();
    v
}

/// Are all composed events declared (no anonymous residuals in source)?
fn check_all_basic(model: &Model) -> Verdict {
    for ev in model.evts() {
        if let EventSpec::Anony(_) = ev {
            return Verdict::fail(
                "all-events-basic",
                Witness::Premise {
                    path: "model".into(),
                    premise: "all-events-basic".into(),
                    detail: "an anonymous event appears inated source composition".into(),
                },
            );
        }
    }
    Verdict::pass("all-events-basic")
}

/// Run the compositional certification pipeline: every premise is checked
/// and reported separately; the conclusion flags the security properties as
/// certified by composition when all premises hold. Optionally cross-check
/// against the bounded oracles.
pub fn certify(
    model: &Model,
    caps: &Caps,
    oracle_k: Option<usize>,
) -> Result<CertificationReport, CertifyError> {
    let policy = PolicyCtx::build(model, caps)?;
    let universe = Arc::clone(&policy.universe);
    let fuel = caps.fuel_for(universe.len());
    let gamma = GammaMap::from_model(model, &universe)?;

    let mut premises: Vec<(String, Verdict)> = Vec::new();

    // (1) all events of the composition are declared events. When this
    // fails the machine-dependent premises are not evaluable (program steps
    // can run with no current event), so they are reported failed rather
    // than erroring.
    let basic_ok = {
        let v = check_all_basic(model);
        let ok = v.holds;
        premises.push(("all-events-basic".into(), v));
        ok
    };

    // (2) every composed event satisfies its Gamma quadruple.
    {
        let mut verdict = Verdict::pass("events-satisfy-gamma");
        let mut events: Vec<u32> = model
            .evts()
            .into_iter()
            .filter_map(|e| match e {
                EventSpec::Basic(i) => Some(i),
                EventSpec::Anony(_) => None,
            })
            .collect();
        events.sort_by_key(|i| model.event(*i).name.clone());
        for ev in events {
            let outline = event_outline(ev, gamma.quads[&ev].clone());
            let v = check_outline(model, &universe, &outline, fuel)?;
            if !v.holds {
                verdict = Verdict::fail("events-satisfy-gamma", v.witness.clone().unwrap())
                    .note(format!("event {}", model.event(ev).name));
                break;
            }
        }
        premises.push(("events-satisfy-gamma".into(), verdict));
    }

    // (3) the closed system satisfies the relaxed top specification.
    {
        let s0 = model
            .initial_state()
            .map_err(crate::machine::MachineError::from)?;
        let s0_id = universe.id_of(&s0).expect("initial state in universe");
        let top = RgCond::top_from(&universe, s0_id);
        let verdict = match model_outline(model, &universe, top) {
            Ok(outline) => check_outline(model, &universe, &outline, fuel)?,
            Err(e) => Verdict::fail(
                "system-satisfies-top",
                Witness::Premise {
                    path: "par".into(),
                    premise: "outline-construction".into(),
                    detail: e.to_string(),
                },
            ),
        };
        premises.push((
            "system-satisfies-top".into(),
            Verdict {
                property: "system-satisfies-top".into(),
                ..verdict
            },
        ));
    }

    // (4)-(6): observation consistency over the machine, then the two
    // event-level unwinding conditions over the universe.
    let mach = if basic_ok {
        Some(build_machine(model, caps)?)
    } else {
        None
    };
    match &mach {
        Some(m) => premises.push(("observation-consistent".into(), check_oc(m, &policy))),
        None => premises.push((
            "observation-consistent".into(),
            Verdict::fail(
                "observation-consistent",
                Witness::Premise {
                    path: "machine".into(),
                    premise: "observation-consistent".into(),
                    detail: "not evaluated: the composition contains anonymous events".into(),
                },
            ),
        )),
    }
    premises.push((
        "locally-respects-events".into(),
        check_lre(model, &policy, &gamma),
    ));
    premises.push((
        "step-consistent-events".into(),
        check_sce(model, &policy, &gamma),
    ));

    let certified = premises.iter().all(|(_, v)| v.holds);

    let (oracle_noninf, oracle_nonleak) = match (oracle_k, &mach) {
        (Some(k), Some(m)) => {
            let ni = oracle_noninfluence(m, &policy, model, k, caps.max_sequences)?;
            let nl = oracle_nonleakage(m, &policy, model, k, caps.max_sequences)?;
            (Some(ni), Some(nl))
        }
        _ => (None, None),
    };

    Ok(CertificationReport {
        premises,
        certified,
        oracle_noninfluence: oracle_noninf,
        oracle_nonleakage: oracle_nonleak,
    })
}

/// Build the machine and policy context a caller needs alongside `certify`.
pub fn machine_and_policy(
    model: &Model,
    caps: &Caps,
) -> Result<(Machine, PolicyCtx), CertifyError> {
    let policy = PolicyCtx::build(model, caps)?;
    let mach = build_machine(model, caps)?;
    Ok((mach, policy))
}
