//! Naive reference implementations of the bounded security oracles: direct
//! quantification over reachable configuration pairs and all action
//! sequences, with no class deduplication and no image sharing. Used to
//! cross-check the optimized oracles.

use picore::arinc::observation;
use picore::ifs::{ipurge_ids, sources_ids, PolicyCtx};
use picore::machine::Machine;
use picore::model::Model;

fn all_seqs(nactions: usize, k: usize) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = vec![vec![]];
    let mut frontier: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..k {
        let mut next = Vec::new();
        for seq in &frontier {
            for a in 0..nactions as u32 {
                let mut s2 = seq.clone();
                s2.push(a);
                next.push(s2);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn ob_eq(model: &Model, mach: &Machine, d: &str, c1: u32, c2: u32) -> bool {
    let o1 = observation(model, &mach.configs[c1 as usize].state, d).expect("obs");
    let o2 = observation(model, &mach.configs[c2 as usize].state, d).expect("obs");
    o1 == o2
}

/// All-pairs observational equivalence of two execution sets; vacuously true
/// when either is empty.
fn sets_equiv(model: &Model, mach: &Machine, d: &str, a: &[u32], b: &[u32]) -> bool {
    a.iter()
        .all(|x| b.iter().all(|y| ob_eq(model, mach, d, *x, *y)))
}

fn sources_equiv(
    policy: &PolicyCtx,
    mach: &Machine,
    src: &std::collections::BTreeSet<String>,
    c1: u32,
    c2: u32,
) -> bool {
    let s1 = policy.state_id(&mach.configs[c1 as usize].state);
    let s2 = policy.state_id(&mach.configs[c2 as usize].state);
    src.iter().all(|d| policy.vpeq_ids(d, s1, s2))
}

pub fn naive_noninfluence(model: &Model, mach: &Machine, policy: &PolicyCtx, k: usize) -> bool {
    let n = mach.configs.len() as u32;
    for seq in all_seqs(mach.actions.len(), k) {
        for d in &policy.domains {
            let src = sources_ids(mach, policy, &seq, d);
            let purged = ipurge_ids(mach, policy, &seq, d);
            for c1 in 0..n {
                for c2 in 0..n {
                    if !sources_equiv(policy, mach, &src, c1, c2) {
                        continue;
                    }
                    let e1: Vec<u32> = mach.execution(c1, &seq).into_iter().collect();
                    let e2: Vec<u32> = mach.execution(c2, &purged).into_iter().collect();
                    if !sets_equiv(model, mach, d, &e1, &e2) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

pub fn naive_nonleakage(model: &Model, mach: &Machine, policy: &PolicyCtx, k: usize) -> bool {
    let n = mach.configs.len() as u32;
    for seq in all_seqs(mach.actions.len(), k) {
        for d in &policy.domains {
            let src = sources_ids(mach, policy, &seq, d);
            for c1 in 0..n {
                for c2 in 0..n {
                    if !sources_equiv(policy, mach, &src, c1, c2) {
                        continue;
                    }
                    let e1: Vec<u32> = mach.execution(c1, &seq).into_iter().collect();
                    let e2: Vec<u32> = mach.execution(c2, &seq).into_iter().collect();
                    if !sets_equiv(model, mach, d, &e1, &e2) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

pub fn naive_noninterference_r(
    model: &Model,
    mach: &Machine,
    policy: &PolicyCtx,
    k: usize,
) -> bool {
    let n = mach.configs.len() as u32;
    for seq in all_seqs(mach.actions.len(), k) {
        for d in &policy.domains {
            let purged = ipurge_ids(mach, policy, &seq, d);
            for c in 0..n {
                let e1: Vec<u32> = mach.execution(c, &seq).into_iter().collect();
                let e2: Vec<u32> = mach.execution(c, &purged).into_iter().collect();
                if !sets_equiv(model, mach, d, &e1, &e2) {
                    return false;
                }
            }
        }
    }
    true
}
