//! Bounded brute-force oracles for the three security properties. All three
//! quantify over action sequences up to a length bound; the quadratic
//! configuration-pair quantification is collapsed per sources-set into
//! view-partition classes, which decides exactly the same property.

use super::{ipurge_ids, sources_ids, PolicyCtx};
use crate::machine::Machine;
use crate::model::Model;
use crate::verdict::{Verdict, Witness};
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IfsProp {
    Noninfluence,
    Nonleakage,
    NoninterferenceR,
}

impl IfsProp {
    pub fn name(&self) -> &'static str {
        match self {
            IfsProp::Noninfluence => "noninfluence",
            IfsProp::Nonleakage => "nonleakage",
            IfsProp::NoninterferenceR => "noninterference-r",
        }
    }
}

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("{total} action sequences at bound {k} exceed the cap of {cap}")]
    TooManySequences { total: u128, k: usize, cap: usize },
}

/// Number of sequences of length <= k over an alphabet; the printed cost
/// estimate uses the same number.
pub fn sequence_count(alphabet: usize, k: usize) -> u128 {
    let mut total: u128 = 0;
    let mut pow: u128 = 1;
    for _ in 0..=k {
        total = total.saturating_add(pow);
        pow = pow.saturating_mul(alphabet as u128);
    }
    total
}

/// Per-config image sets along a fixed action sequence.
type Img = Vec<Vec<u32>>;

struct Ctx<'a> {
    mach: &'a Machine,
    policy: &'a PolicyCtx,
    model: &'a Model,
    /// [action][source config] -> target configs, sorted.
    succ: Vec<Vec<Vec<u32>>>,
    /// [domain index][config] -> observation class of its state.
    ob: Vec<Vec<u32>>,
    /// [domain index][config] -> view-partition class of its state.
    vp: Vec<Vec<u32>>,
}

impl<'a> Ctx<'a> {
    fn new(mach: &'a Machine, policy: &'a PolicyCtx, model: &'a Model) -> Ctx<'a> {
        let n = mach.configs.len();
        let mut succ = Vec::with_capacity(mach.actions.len());
        for rel in &mach.step {
            let mut by_src: Vec<Vec<u32>> = vec![Vec::new(); n];
            for (s, t) in rel {
                by_src[*s as usize].push(*t);
            }
            succ.push(by_src);
        }
        let state_ids: Vec<u32> = mach
            .configs
            .iter()
            .map(|c| policy.state_id(&c.state))
            .collect();
        let ob = policy
            .domains
            .iter()
            .map(|d| state_ids.iter().map(|s| policy.ob_class_of(d, *s)).collect())
            .collect();
        let vp = policy
            .domains
            .iter()
            .map(|d| {
                let classes = policy.vp_class_vec(d);
                state_ids.iter().map(|s| classes[*s as usize]).collect()
            })
            .collect();
        Ctx {
            mach,
            policy,
            model,
            succ,
            ob,
            vp,
        }
    }

    fn identity_img(&self) -> Img {
        (0..self.mach.configs.len() as u32).map(|c| vec![c]).collect()
    }

    fn extend_img(&self, img: &Img, action: u32) -> Img {
        let succ = &self.succ[action as usize];
        img.iter()
            .map(|set| {
                let mut out: Vec<u32> = set
                    .iter()
                    .flat_map(|c| succ[*c as usize].iter().copied())
                    .collect();
                out.sort_unstable();
                out.dedup();
                out
            })
            .collect()
    }

    fn img_of(&self, cache: &mut HashMap<Vec<u32>, Rc<Img>>, seq: &[u32]) -> Rc<Img> {
        if let Some(img) = cache.get(seq) {
            return img.clone();
        }
        let img = if seq.is_empty() {
            Rc::new(self.identity_img())
        } else {
            let prefix = &seq[..seq.len() - 1];
            let base = self.img_of(cache, prefix);
            Rc::new(self.extend_img(&base, seq[seq.len() - 1]))
        };
        cache.insert(seq.to_vec(), img.clone());
        img
    }

    fn ob_set(&self, dom: usize, set: &[u32]) -> BTreeSet<u32> {
        set.iter().map(|c| self.ob[dom][*c as usize]).collect()
    }

    fn dom_index(&self, d: &str) -> usize {
        self.policy.domains.iter().position(|x| x == d).unwrap()
    }
}

struct BranchOut {
    fail: Option<(Vec<u32>, usize, Witness)>,
    vacuous: u64,
    checked: u64,
}

impl BranchOut {
    fn empty() -> BranchOut {
        BranchOut {
            fail: None,
            vacuous: 0,
            checked: 0,
        }
    }

    fn merge(mut self, other: BranchOut) -> BranchOut {
        self.vacuous += other.vacuous;
        self.checked += other.checked;
        self.fail = match (self.fail, other.fail) {
            (None, f) | (f, None) => f,
            (Some(a), Some(b)) => {
                if (&a.0, a.1) <= (&b.0, b.1) {
                    Some(a)
                } else {
                    Some(b)
                }
            }
        };
        self
    }
}

fn seq_text(ctx: &Ctx, seq: &[u32]) -> String {
    let parts: Vec<String> = seq
        .iter()
        .map(|a| ctx.mach.action_display(ctx.model, *a))
        .collect();
    format!("[{}]", parts.join(", "))
}

/// Check one (sequence, domain) instance; returns the witness on failure.
fn check_instance(
    ctx: &Ctx,
    prop: IfsProp,
    seq: &[u32],
    img: &Img,
    dom: &str,
    cache: &mut HashMap<Vec<u32>, Rc<Img>>,
    out: &mut BranchOut,
) -> Option<Witness> {
    let d = ctx.dom_index(dom);
    match prop {
        IfsProp::NoninterferenceR => {
            let purged = ipurge_ids(ctx.mach, ctx.policy, seq, dom);
            let img_p = ctx.img_of(cache, &purged);
            for c in 0..img.len() {
                let a = ctx.ob_set(d, &img[c]);
                let b = ctx.ob_set(d, &img_p[c]);
                if a.is_empty() || b.is_empty() {
                    out.vacuous += 1;
                    continue;
                }
                out.checked += 1;
                let union: BTreeSet<u32> = a.union(&b).copied().collect();
                if union.len() > 1 {
                    let v1 = *a.iter().next().unwrap();
                    let v2 = *b.iter().find(|x| **x != v1).unwrap_or_else(|| {
                        a.iter().find(|x| **x != v1).unwrap()
                    });
                    return Some(Witness::IfsSeq {
                        property: prop.name().into(),
                        domain: dom.into(),
                        seq: seq.to_vec(),
                        seq_text: seq_text(ctx, seq),
                        purged: purged.clone(),
                        purged_text: seq_text(ctx, &purged),
                        c1: c as u32,
                        c2: c as u32,
                        ob1: ctx.policy.ob_display(dom, v1),
                        ob2: ctx.policy.ob_display(dom, v2),
                    });
                }
            }
            None
        }
        IfsProp::Noninfluence | IfsProp::Nonleakage => {
            let src = sources_ids(ctx.mach, ctx.policy, seq, dom);
            let src_idx: Vec<usize> = src.iter().map(|s| ctx.dom_index(s)).collect();
            let (purged, img_p) = if prop == IfsProp::Noninfluence {
                let purged = ipurge_ids(ctx.mach, ctx.policy, seq, dom);
                let img_p = ctx.img_of(cache, &purged);
                (purged, img_p)
            } else {
                (seq.to_vec(), ctx.img_of(cache, seq))
            };
            // Group configurations into sources-equivalence classes.
            let mut classes: BTreeMap<Vec<u32>, Vec<u32>> = BTreeMap::new();
            for c in 0..img.len() {
                let key: Vec<u32> = src_idx.iter().map(|di| ctx.vp[*di][c]).collect();
                classes.entry(key).or_default().push(c as u32);
            }
            for members in classes.values() {
                let nas: Vec<(u32, BTreeSet<u32>)> = members
                    .iter()
                    .map(|c| (*c, ctx.ob_set(d, &img[*c as usize])))
                    .filter(|(_, s)| !s.is_empty())
                    .collect();
                let nbs: Vec<(u32, BTreeSet<u32>)> = members
                    .iter()
                    .map(|c| (*c, ctx.ob_set(d, &img_p[*c as usize])))
                    .filter(|(_, s)| !s.is_empty())
                    .collect();
                if nas.is_empty() || nbs.is_empty() {
                    out.vacuous += 1;
                    continue;
                }
                out.checked += 1;
                // All pairs (A_i, B_j) must satisfy: union is a singleton.
                // Equivalent: every nonempty projection is the same
                // singleton.
                let ok = nas
                    .iter()
                    .chain(nbs.iter())
                    .all(|(_, s)| s.len() == 1 && s == &nas[0].1);
                if !ok {
                    // Reconstruct the first offending pair in id order.
                    for (c1, a) in &nas {
                        for (c2, b) in &nbs {
                            let union: BTreeSet<u32> = a.union(b).copied().collect();
                            if union.len() > 1 {
                                let v1 = *a.iter().next().unwrap();
                                let v2 = *union.iter().find(|x| **x != v1).unwrap();
                                return Some(Witness::IfsSeq {
                                    property: prop.name().into(),
                                    domain: dom.into(),
                                    seq: seq.to_vec(),
                                    seq_text: seq_text(ctx, seq),
                                    purged: purged.clone(),
                                    purged_text: seq_text(ctx, &purged),
                                    c1: *c1,
                                    c2: *c2,
                                    ob1: ctx.policy.ob_display(dom, v1),
                                    ob2: ctx.policy.ob_display(dom, v2),
                                });
                            }
                        }
                    }
                }
            }
            None
        }
    }
}

/// Depth-first enumeration of sequence extensions under one subtree.
fn dfs(
    ctx: &Ctx,
    prop: IfsProp,
    k: usize,
    seq: &mut Vec<u32>,
    img: &Img,
    cache: &mut HashMap<Vec<u32>, Rc<Img>>,
    out: &mut BranchOut,
) {
    for dom in ctx.policy.domains.clone() {
        if let Some(w) = check_instance(ctx, prop, seq, img, &dom, cache, out) {
            let di = ctx.dom_index(&dom);
            let candidate = (seq.clone(), di, w);
            let better = match &out.fail {
                None => true,
                Some((s, d, _)) => (&candidate.0, candidate.1) < (s, *d),
            };
            if better {
                out.fail = Some(candidate);
            }
            // The first failure in this subtree is minimal by construction
            // (pre-order), so stop descending.
            return;
        }
    }
    if seq.len() == k {
        return;
    }
    for a in 0..ctx.mach.actions.len() as u32 {
        let img2 = ctx.extend_img(img, a);
        seq.push(a);
        dfs(ctx, prop, k, seq, &img2, cache, out);
        seq.pop();
        if out.fail.is_some() {
            return;
        }
    }
}

fn run_oracle(
    mach: &Machine,
    policy: &PolicyCtx,
    model: &Model,
    k: usize,
    max_sequences: usize,
    prop: IfsProp,
) -> Result<Verdict, OracleError> {
    let t0 = std::time::Instant::now();
    let total = sequence_count(mach.actions.len(), k);
    if total > max_sequences as u128 {
        return Err(OracleError::TooManySequences {
            total,
            k,
            cap: max_sequences,
        });
    }
    let ctx = Ctx::new(mach, policy, model);

    // The empty sequence first, then one parallel branch per first action.
    let mut root = BranchOut::empty();
    let mut root_cache: HashMap<Vec<u32>, Rc<Img>> = HashMap::new();
    let id_img = ctx.identity_img();
    for dom in policy.domains.clone() {
        if let Some(w) = check_instance(&ctx, prop, &[], &id_img, &dom, &mut root_cache, &mut root)
        {
            let di = ctx.dom_index(&dom);
            root.fail = Some((vec![], di, w));
            break;
        }
    }

    let branch_results: Vec<BranchOut> = if root.fail.is_some() || k == 0 {
        vec![]
    } else {
        (0..mach.actions.len() as u32)
            .into_par_iter()
            .map(|a| {
                let mut out = BranchOut::empty();
                let mut cache: HashMap<Vec<u32>, Rc<Img>> = HashMap::new();
                let img = ctx.extend_img(&ctx.identity_img(), a);
                let mut seq = vec![a];
                dfs(&ctx, prop, k, &mut seq, &img, &mut cache, &mut out);
                out
            })
            .collect()
    };

    let merged = branch_results.into_iter().fold(root, BranchOut::merge);

    let mut verdict = match merged.fail {
        None => Verdict::pass(prop.name()),
        Some((_, _, w)) => Verdict::fail(prop.name(), w),
    };
    verdict.bound = Some(k);
    verdict.vacuous = merged.vacuous;
    verdict.checked = merged.checked;
    verdict.millis = t0.elapsed().as_millis();
    Ok(verdict)
}

pub fn oracle_noninfluence(
    mach: &Machine,
    policy: &PolicyCtx,
    model: &Model,
    k: usize,
    max_sequences: usize,
) -> Result<Verdict, OracleError> {
    run_oracle(mach, policy, model, k, max_sequences, IfsProp::Noninfluence)
}

pub fn oracle_nonleakage(
    mach: &Machine,
    policy: &PolicyCtx,
    model: &Model,
    k: usize,
    max_sequences: usize,
) -> Result<Verdict, OracleError> {
    run_oracle(mach, policy, model, k, max_sequences, IfsProp::Nonleakage)
}

pub fn oracle_noninterference_r(
    mach: &Machine,
    policy: &PolicyCtx,
    model: &Model,
    k: usize,
    max_sequences: usize,
) -> Result<Verdict, OracleError> {
    run_oracle(
        mach,
        policy,
        model,
        k,
        max_sequences,
        IfsProp::NoninterferenceR,
    )
}
