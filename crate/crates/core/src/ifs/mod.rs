//! Security policy machinery and the small-step unwinding-condition
//! checkers: observation consistency, locally-respects, and step
//! consistency, quantified over the reachable configuration closure.

mod oracle;

pub use oracle::{
    oracle_noninfluence, oracle_noninterference_r, oracle_nonleakage, sequence_count, IfsProp,
    OracleError,
};

use crate::machine::{Action, Machine};
use crate::model::{
    eval, eval_rel_pair, state_universe, Env, Model, State, Universe, Value,
};
use crate::verdict::{Verdict, Witness};
use crate::Caps;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PolicyError {
    #[error("model has no policy block")]
    NoPolicy,
    #[error("declared view equivalence for domain '{domain}' is not {violated}")]
    NotEquivalence { domain: String, violated: String },
    #[error(transparent)]
    Eval(#[from] crate::model::EvalError),
}

/// Extensional policy context over the enumerated state universe: per-domain
/// observation classes and view-partition classes, plus the interference
/// relation.
pub struct PolicyCtx {
    pub domains: Vec<String>,
    pub interf: BTreeSet<(String, String)>,
    pub universe: Arc<Universe>,
    /// Per domain: universe-state id -> observation class id.
    ob_class: BTreeMap<String, Vec<u32>>,
    /// Observation display values, per domain per class id.
    ob_repr: BTreeMap<String, Vec<String>>,
    /// Per domain: universe-state id -> view-partition class id. Equal to
    /// the observation classes unless a separate equivalence was declared.
    vp_class: BTreeMap<String, Vec<u32>>,
}

impl PolicyCtx {
    /// Build the extensional context: evaluate observations over the whole
    /// universe, and when a view equivalence is declared separately, verify
    /// it is an equivalence relation and partition by it.
    pub fn build(model: &Model, caps: &Caps) -> Result<PolicyCtx, PolicyError> {
        let policy = model.policy.as_ref().ok_or(PolicyError::NoPolicy)?;
        let universe = Arc::new(state_universe(model, caps.max_universe)?);
        let n = universe.len();

        let mut ob_class = BTreeMap::new();
        let mut ob_repr = BTreeMap::new();
        let mut vp_class = BTreeMap::new();

        for d in &policy.domains {
            let obs_expr = policy.obs.get(d).expect("validated policy");
            let mut class_of_value: BTreeMap<Value, u32> = BTreeMap::new();
            let mut classes = vec![0u32; n];
            let mut reprs: Vec<String> = Vec::new();
            for (i, s) in universe.states.iter().enumerate() {
                let env = Env::closed(model, s);
                let v = eval(obs_expr, &env)?;
                let id = match class_of_value.get(&v) {
                    Some(id) => *id,
                    None => {
                        let id = class_of_value.len() as u32;
                        reprs.push(v.to_string());
                        class_of_value.insert(v, id);
                        id
                    }
                };
                classes[i] = id;
            }
            ob_class.insert(d.clone(), classes);
            ob_repr.insert(d.clone(), reprs);
        }

        for d in &policy.domains {
            match policy.vpeq.get(d) {
                None => {
                    vp_class.insert(d.clone(), ob_class[d].clone());
                }
                Some(rel) => {
                    // Decide the declared relation over the universe and
                    // check it is an equivalence.
                    let mut holds = vec![vec![false; n]; n];
                    for (i, si) in universe.states.iter().enumerate() {
                        for (j, sj) in universe.states.iter().enumerate() {
                            holds[i][j] = eval_rel_pair(model, si, sj, rel)?;
                        }
                    }
                    for (i, row) in holds.iter().enumerate() {
                        if !row[i] {
                            return Err(PolicyError::NotEquivalence {
                                domain: d.clone(),
                                violated: "reflexive".into(),
                            });
                        }
                        for (j, h) in row.iter().enumerate() {
                            if *h != holds[j][i] {
                                return Err(PolicyError::NotEquivalence {
                                    domain: d.clone(),
                                    violated: "symmetric".into(),
                                });
                            }
                        }
                    }
                    for row_i in &holds {
                        for (j, h) in row_i.iter().enumerate() {
                            if !h {
                                continue;
                            }
                            for (k, h2) in holds[j].iter().enumerate() {
                                if *h2 && !row_i[k] {
                                    return Err(PolicyError::NotEquivalence {
                                        domain: d.clone(),
                                        violated: "transitive".into(),
                                    });
                                }
                            }
                        }
                    }
                    let mut classes = vec![u32::MAX; n];
                    let mut next = 0u32;
                    for i in 0..n {
                        if classes[i] != u32::MAX {
                            continue;
                        }
                        for j in i..n {
                            if holds[i][j] {
                                classes[j] = next;
                            }
                        }
                        next += 1;
                    }
                    vp_class.insert(d.clone(), classes);
                }
            }
        }

        Ok(PolicyCtx {
            domains: policy.domains.clone(),
            interf: policy.interf.iter().cloned().collect(),
            universe,
            ob_class,
            ob_repr,
            vp_class,
        })
    }

    pub fn interferes(&self, a: &str, b: &str) -> bool {
        self.interf.contains(&(a.to_string(), b.to_string()))
    }

    pub fn state_id(&self, s: &State) -> u32 {
        self.universe.id_of(s).expect("state in declared universe")
    }

    /// View-partition equivalence on universe-state ids.
    pub fn vpeq_ids(&self, d: &str, s1: u32, s2: u32) -> bool {
        let c = &self.vp_class[d];
        c[s1 as usize] == c[s2 as usize]
    }

    pub fn vpeq(&self, d: &str, s1: &State, s2: &State) -> bool {
        self.vpeq_ids(d, self.state_id(s1), self.state_id(s2))
    }

    /// Per-domain view-partition class vector over universe-state ids.
    pub fn vp_class_vec(&self, d: &str) -> &[u32] {
        &self.vp_class[d]
    }

    /// Observation class of a universe-state id.
    pub fn ob_class_of(&self, d: &str, s: u32) -> u32 {
        self.ob_class[d][s as usize]
    }

    pub fn ob_display(&self, d: &str, class: u32) -> String {
        self.ob_repr[d][class as usize].clone()
    }
}

/// Ids of the distinct states appearing in the machine's reachable closure,
/// with one representative configuration id each.
fn reachable_states(policy: &PolicyCtx, mach: &Machine) -> Vec<(u32, u32)> {
    let mut seen: BTreeMap<u32, u32> = BTreeMap::new();
    for (i, c) in mach.configs.iter().enumerate() {
        let sid = policy.state_id(&c.state);
        seen.entry(sid).or_insert(i as u32);
    }
    seen.into_iter().collect()
}

/// Observation consistency: view-equivalent configurations look equal to the
/// observing domain. Quantified over the reachable closure.
pub fn check_oc(mach: &Machine, policy: &PolicyCtx) -> Verdict {
    let t0 = std::time::Instant::now();
    let states = reachable_states(policy, mach);
    let mut checked = 0u64;
    for d in &policy.domains {
        for (s1, c1) in &states {
            for (s2, c2) in &states {
                checked += 1;
                if policy.vpeq_ids(d, *s1, *s2)
                    && policy.ob_class_of(d, *s1) != policy.ob_class_of(d, *s2)
                {
                    let mut v = Verdict::fail(
                        "observation-consistent",
                        Witness::ObsPair {
                            domain: d.clone(),
                            c1: *c1,
                            c2: *c2,
                            c1_text: format!("state {s1}"),
                            c2_text: format!("state {s2}"),
                            ob1: policy.ob_display(d, policy.ob_class_of(d, *s1)),
                            ob2: policy.ob_display(d, policy.ob_class_of(d, *s2)),
                        },
                    );
                    v.checked = checked;
                    v.millis = t0.elapsed().as_millis();
                    return v;
                }
            }
        }
    }
    let mut v = Verdict::pass("observation-consistent");
    v.checked = checked;
    v.millis = t0.elapsed().as_millis();
    v
}

/// Locally respects: a step of an action whose domain may not interfere with
/// `d` is invisible to `d`.
pub fn check_lr(mach: &Machine, policy: &PolicyCtx, model: &Model) -> Verdict {
    let t0 = std::time::Instant::now();
    let mut checked = 0u64;
    for (aid, action) in mach.actions.iter().enumerate() {
        for d in &policy.domains {
            if policy.interferes(&action.dom, d) {
                continue;
            }
            for (src, dst) in &mach.step[aid] {
                checked += 1;
                let s1 = policy.state_id(&mach.configs[*src as usize].state);
                let s2 = policy.state_id(&mach.configs[*dst as usize].state);
                if !policy.vpeq_ids(d, s1, s2) {
                    let mut v = Verdict::fail(
                        "locally-respects",
                        Witness::LrStep {
                            action: aid as u32,
                            action_text: mach.action_display(model, aid as u32),
                            domain: d.clone(),
                            c: *src,
                            c_next: *dst,
                            c_text: model.show_state(&mach.configs[*src as usize].state),
                            c_next_text: model.show_state(&mach.configs[*dst as usize].state),
                        },
                    );
                    v.checked = checked;
                    v.millis = t0.elapsed().as_millis();
                    return v;
                }
            }
        }
    }
    let mut v = Verdict::pass("locally-respects");
    v.checked = checked;
    v.millis = t0.elapsed().as_millis();
    v
}

/// Step consistency: from premise-equivalent reachable configurations, the
/// same action leads to configurations the observer cannot tell apart.
pub fn check_sc(mach: &Machine, policy: &PolicyCtx, model: &Model) -> Verdict {
    let t0 = std::time::Instant::now();
    let mut checked = 0u64;
    for (aid, action) in mach.actions.iter().enumerate() {
        let succs = mach.succs_of(aid as u32);
        let sources: Vec<u32> = succs.keys().copied().collect();
        for d in &policy.domains {
            let premise_needs_da = policy.interferes(&action.dom, d);
            for &c1 in &sources {
                let s1 = policy.state_id(&mach.configs[c1 as usize].state);
                for &c2 in &sources {
                    let s2 = policy.state_id(&mach.configs[c2 as usize].state);
                    if !policy.vpeq_ids(d, s1, s2) {
                        continue;
                    }
                    if premise_needs_da && !policy.vpeq_ids(&action.dom, s1, s2) {
                        continue;
                    }
                    for &t1 in &succs[&c1] {
                        for &t2 in &succs[&c2] {
                            checked += 1;
                            let u1 = policy.state_id(&mach.configs[t1 as usize].state);
                            let u2 = policy.state_id(&mach.configs[t2 as usize].state);
                            if !policy.vpeq_ids(d, u1, u2) {
                                let mut v = Verdict::fail(
                                    "step-consistent",
                                    Witness::ScPair {
                                        action: aid as u32,
                                        action_text: mach.action_display(model, aid as u32),
                                        domain: d.clone(),
                                        c1,
                                        c2,
                                        c1_next: t1,
                                        c2_next: t2,
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
    let mut v = Verdict::pass("step-consistent");
    v.checked = checked;
    v.millis = t0.elapsed().as_millis();
    v
}

/// The permitted-influencer computation for intransitive policies: the base
/// case is the observer alone; each prepended action joins when its domain
/// interferes with a member of the suffix's sources.
pub fn sources(actions: &[&Action], policy: &PolicyCtx, d: &str) -> BTreeSet<String> {
    match actions.split_first() {
        None => std::iter::once(d.to_string()).collect(),
        Some((a, rest)) => {
            let mut out = sources(rest, policy, d);
            if out.iter().any(|v| policy.interferes(&a.dom, v)) {
                out.insert(a.dom.clone());
            }
            out
        }
    }
}

/// Delete the actions whose domain is not a permitted influencer of the
/// observer along the sequence. The result is a subsequence.
pub fn ipurge<'a>(actions: &[&'a Action], policy: &PolicyCtx, d: &str) -> Vec<&'a Action> {
    match actions.split_first() {
        None => vec![],
        Some((a, rest)) => {
            let src = sources(actions, policy, d);
            if src.contains(&a.dom) {
                let mut out = vec![*a];
                out.extend(ipurge(rest, policy, d));
                out
            } else {
                ipurge(rest, policy, d)
            }
        }
    }
}

/// Index-based wrappers used by the oracles.
pub fn sources_ids(mach: &Machine, policy: &PolicyCtx, seq: &[u32], d: &str) -> BTreeSet<String> {
    let refs: Vec<&Action> = seq.iter().map(|a| &mach.actions[*a as usize]).collect();
    sources(&refs, policy, d)
}

pub fn ipurge_ids(mach: &Machine, policy: &PolicyCtx, seq: &[u32], d: &str) -> Vec<u32> {
    let refs: Vec<&Action> = seq.iter().map(|a| &mach.actions[*a as usize]).collect();
    let purged = ipurge(&refs, policy, d);
    purged
        .into_iter()
        .map(|a| mach.action_id(a).expect("action interned"))
        .collect()
}
