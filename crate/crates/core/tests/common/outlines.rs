//! Random sound proof outlines (constructed bottom-up from weakest
//! preconditions, so every rule premise holds) and a catalog of deliberately
//! broken outlines, each failing at one intended premise.

use super::MB;
use picore::model::{state_universe, Expr, Model, Program, Universe};
use picore::rg::{Outline, OutlineNode, RgCond, StateRel, StateSet};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::sync::Arc;

/// Number of states in the outline universe (one int variable 0..N-1).
const N: u32 = 6;

pub struct OutlineCase {
    pub model: Model,
    pub universe: Arc<Universe>,
    pub outline: Outline,
    pub program: Program,
}

/// The shared single-variable model for program-level outlines.
pub fn outline_model() -> Model {
    MB::new("outline_host")
        .cores(1)
        .int_var("x", 0, N as i64 - 1, 0)
        .event("Stop", Expr::lit_bool(false), Program::skip())
        .all_cores_run(&["Stop"])
        .build()
}

fn set(ids: impl IntoIterator<Item = u32>) -> StateSet {
    StateSet(ids.into_iter().collect())
}

fn univ() -> StateSet {
    set(0..N)
}

fn id_rel() -> StateRel {
    StateRel((0..N).map(|i| (i, i)).collect())
}

/// Largest subset of `p` closed under `r`.
fn stabilize(p: &StateSet, r: &StateRel) -> StateSet {
    let mut cur = p.0.clone();
    loop {
        let bad: BTreeSet<u32> = cur
            .iter()
            .filter(|s| r.0.iter().any(|(a, b)| a == *s && !cur.contains(b)))
            .copied()
            .collect();
        if bad.is_empty() {
            return StateSet(cur);
        }
        for b in bad {
            cur.remove(&b);
        }
    }
}

/// Guard expression for a state set over the single variable.
fn set_expr(s: &StateSet) -> Expr {
    Expr::disj(
        s.0.iter()
            .map(|i| Expr::eq(Expr::var("x"), Expr::lit_int(*i as i64)))
            .collect(),
    )
}

fn rel_expr(r: &StateRel) -> Expr {
    Expr::disj(
        r.0.iter()
            .map(|(a, b)| {
                Expr::and(
                    Expr::eq(Expr::var("x"), Expr::lit_int(*a as i64)),
                    Expr::eq(Expr::Prime("x".into()), Expr::lit_int(*b as i64)),
                )
            })
            .collect(),
    )
}

fn asg_lit(v: i64) -> Program {
    Program::Basic(vec![picore::model::Assign {
        var: "x".into(),
        key: None,
        rhs: Expr::lit_int(v),
    }])
}

/// Program skeletons over the single variable.
#[derive(Clone)]
enum Sk {
    /// x := literal, or skip.
    Basic(Option<u32>),
    /// Total nondeterministic relation.
    Nondt(StateRel),
    Seq(Box<Sk>, Box<Sk>),
    Cond(StateSet, Box<Sk>, Box<Sk>),
    While(StateSet, Box<Sk>),
    /// Await over a chain of literal assignments.
    Await(StateSet, Vec<u32>),
}

fn gen_sk(rng: &mut ChaCha8Rng, depth: usize, branchy: bool) -> Sk {
    let leaf = depth == 0 || rng.gen_bool(0.4);
    if leaf {
        match rng.gen_range(0..3) {
            0 => Sk::Basic(if rng.gen_bool(0.7) {
                Some(rng.gen_range(0..N))
            } else {
                None
            }),
            1 => {
                // Random relation, made total by filling in stutters.
                let mut pairs: BTreeSet<(u32, u32)> = BTreeSet::new();
                for s in 0..N {
                    let outs = rng.gen_range(1..=2);
                    for _ in 0..outs {
                        pairs.insert((s, rng.gen_range(0..N)));
                    }
                }
                Sk::Nondt(StateRel(pairs))
            }
            _ => {
                let guard = set((0..N).filter(|_| rng.gen_bool(0.6)));
                let chain: Vec<u32> = (0..rng.gen_range(1..=2))
                    .map(|_| rng.gen_range(0..N))
                    .collect();
                Sk::Await(guard, chain)
            }
        }
    } else {
        match rng.gen_range(0..if branchy { 3 } else { 1 }) {
            0 => Sk::Seq(
                Box::new(gen_sk(rng, depth - 1, branchy)),
                Box::new(gen_sk(rng, depth - 1, branchy)),
            ),
            1 => Sk::Cond(
                set((0..N).filter(|_| rng.gen_bool(0.5))),
                Box::new(gen_sk(rng, depth - 1, branchy)),
                Box::new(gen_sk(rng, depth - 1, branchy)),
            ),
            _ => Sk::While(
                set((0..N).filter(|_| rng.gen_bool(0.4))),
                Box::new(gen_sk(rng, depth - 1, false)),
            ),
        }
    }
}

/// All effect pairs the skeleton can take, from any state.
fn effects(sk: &Sk) -> BTreeSet<(u32, u32)> {
    match sk {
        Sk::Basic(None) => (0..N).map(|s| (s, s)).collect(),
        Sk::Basic(Some(v)) => (0..N).map(|s| (s, *v)).collect(),
        Sk::Nondt(r) => r.0.clone(),
        Sk::Seq(a, b) | Sk::Cond(_, a, b) => {
            let mut out = effects(a);
            out.extend(effects(b));
            out
        }
        Sk::While(_, body) => effects(body),
        Sk::Await(guard, chain) => {
            let end = chain.last().copied();
            guard
                .0
                .iter()
                .map(|s| (*s, end.unwrap_or(*s)))
                .collect()
        }
    }
}

/// Rule-level weakest precondition against a stable target, recording the
/// mid-conditions and invariants chosen along the way.
fn wp(sk: &Sk, q: &StateSet, r: &StateRel, anns: &mut Vec<StateSet>) -> StateSet {
    match sk {
        Sk::Basic(f) => {
            let pre = set((0..N).filter(|s| {
                let t = f.unwrap_or(*s);
                q.contains(t)
            }));
            stabilize(&pre, r)
        }
        Sk::Nondt(rel) => {
            let pre = set((0..N).filter(|s| {
                let outs: Vec<u32> = rel.image(*s).collect();
                !outs.is_empty() && outs.iter().all(|t| q.contains(*t))
            }));
            stabilize(&pre, r)
        }
        Sk::Seq(a, b) => {
            let m = stabilize(&wp(b, q, r, anns), r);
            let pre = wp(a, &m, r, anns);
            anns.push(m);
            pre
        }
        Sk::Cond(guard, a, b) => {
            let wa = wp(a, q, r, anns);
            let wb = wp(b, q, r, anns);
            let pre = set((0..N).filter(|s| {
                if guard.contains(*s) {
                    wa.contains(*s)
                } else {
                    wb.contains(*s)
                }
            }));
            stabilize(&pre, r)
        }
        Sk::While(guard, body) => {
            // Greatest invariant: iterate down from the stabilized target
            // closure, then record the body annotations for the converged
            // invariant.
            let mut inv = stabilize(&univ(), r);
            loop {
                let mut scratch = Vec::new();
                let body_wp = wp(body, &inv, r, &mut scratch);
                let next = set(inv.0.iter().copied().filter(|s| {
                    (!guard.contains(*s) || body_wp.contains(*s))
                        && (guard.contains(*s) || q.contains(*s))
                }));
                let next = stabilize(&next, r);
                if next == inv {
                    break;
                }
                inv = next;
            }
            let _ = wp(body, &inv, r, anns);
            anns.push(inv.clone());
            inv
        }
        Sk::Await(guard, chain) => {
            let end = chain.last().copied();
            let pre = set((0..N).filter(|s| {
                !guard.contains(*s) || q.contains(end.unwrap_or(*s))
            }));
            stabilize(&pre, r)
        }
    }
}

/// Build the program and the outline with derived child conditions; `anns`
/// is consumed in the same order `wp` pushed.
fn build(
    sk: &Sk,
    rg: RgCond,
    anns: &mut std::vec::IntoIter<StateSet>,
) -> (Program, Outline) {
    match sk {
        Sk::Basic(f) => {
            let prog = match f {
                None => Program::skip(),
                Some(v) => asg_lit(*v as i64),
            };
            let assigns = match &prog {
                Program::Basic(a) => a.clone(),
                _ => unreachable!(),
            };
            (prog, Outline::new(rg, OutlineNode::Basic { assigns }))
        }
        Sk::Nondt(rel) => {
            let prog = Program::Nondt(rel_expr(rel));
            (prog, Outline::new(rg, OutlineNode::Nondt { rel: rel.clone() }))
        }
        Sk::Seq(a, b) => {
            let m = anns.next().expect("mid recorded");
            let (pa, oa) = build(
                a,
                RgCond {
                    pre: rg.pre.clone(),
                    rely: rg.rely.clone(),
                    guar: rg.guar.clone(),
                    post: m.clone(),
                },
                anns,
            );
            let (pb, ob) = build(
                b,
                RgCond {
                    pre: m.clone(),
                    rely: rg.rely.clone(),
                    guar: rg.guar.clone(),
                    post: rg.post.clone(),
                },
                anns,
            );
            (
                Program::Seq(Box::new(pa), Box::new(pb), Some(set_expr(&m))),
                Outline::new(
                    rg,
                    OutlineNode::Seq {
                        first: Box::new(oa),
                        second: Box::new(ob),
                    },
                ),
            )
        }
        Sk::Cond(guard, a, b) => {
            let (pa, oa) = build(
                a,
                RgCond {
                    pre: rg.pre.intersect(guard),
                    rely: rg.rely.clone(),
                    guar: rg.guar.clone(),
                    post: rg.post.clone(),
                },
                anns,
            );
            let not_guard = set((0..N).filter(|s| !guard.contains(*s)));
            let (pb, ob) = build(
                b,
                RgCond {
                    pre: rg.pre.intersect(&not_guard),
                    rely: rg.rely.clone(),
                    guar: rg.guar.clone(),
                    post: rg.post.clone(),
                },
                anns,
            );
            (
                Program::Cond(set_expr(guard), Box::new(pa), Box::new(pb)),
                Outline::new(
                    rg,
                    OutlineNode::Cond {
                        guard: guard.clone(),
                        then_branch: Box::new(oa),
                        else_branch: Box::new(ob),
                    },
                ),
            )
        }
        Sk::While(guard, body) => {
            let inv = anns.next().expect("invariant recorded");
            let (pb, ob) = build(
                body,
                RgCond {
                    pre: inv.intersect(guard),
                    rely: rg.rely.clone(),
                    guar: rg.guar.clone(),
                    post: inv.clone(),
                },
                anns,
            );
            (
                Program::While(set_expr(guard), Box::new(pb), Some(set_expr(&inv))),
                Outline::new(
                    rg,
                    OutlineNode::While {
                        guard: guard.clone(),
                        invariant: inv,
                        body: Box::new(ob),
                    },
                ),
            )
        }
        Sk::Await(guard, chain) => {
            let mut body = asg_lit(chain[0] as i64);
            for v in &chain[1..] {
                body = Program::seq(body, asg_lit(*v as i64));
            }
            let prog = Program::Await(set_expr(guard), Box::new(body.clone()));
            (
                prog,
                Outline::new(
                    rg,
                    OutlineNode::Await {
                        guard: guard.clone(),
                        body,
                    },
                ),
            )
        }
    }
}

/// One random sound outline over the shared model.
pub fn random_sound_outline(rng: &mut ChaCha8Rng) -> OutlineCase {
    let model = outline_model();
    let universe = Arc::new(state_universe(&model, 1_000_000).expect("universe"));

    // Two corpora: identity rely with branching constructs, and nontrivial
    // relies over straight-line skeletons (where stability really bites).
    let branchy = rng.gen_bool(0.6);
    let rely = if branchy {
        id_rel()
    } else {
        let mut pairs = id_rel().0;
        for _ in 0..rng.gen_range(1..=3) {
            pairs.insert((rng.gen_range(0..N), rng.gen_range(0..N)));
        }
        StateRel(pairs)
    };
    let depth = rng.gen_range(1..=3);
    let sk = gen_sk(rng, depth, branchy);

    let mut guar_pairs = effects(&sk);
    guar_pairs.extend((0..N).map(|s| (s, s)));
    for _ in 0..rng.gen_range(0..4) {
        guar_pairs.insert((rng.gen_range(0..N), rng.gen_range(0..N)));
    }
    let guar = StateRel(guar_pairs);

    let post0 = set((0..N).filter(|_| rng.gen_bool(0.7)));
    let post = stabilize(&post0, &rely);
    let mut anns = Vec::new();
    let pre = wp(&sk, &post, &rely, &mut anns);
    let rg = RgCond {
        pre,
        rely,
        guar,
        post,
    };
    let (program, outline) = build(&sk, rg, &mut order_anns(&sk, anns).into_iter());
    OutlineCase {
        model,
        universe,
        outline,
        program,
    }
}

/// `wp` records annotations in evaluation order (Seq: tail mid after both
/// subtree recursions; While: invariant after the fixpoint); `build` needs
/// them in its own traversal order. Replay the structure to rearrange.
fn order_anns(sk: &Sk, recorded: Vec<StateSet>) -> Vec<StateSet> {
    // Reconstruct the order `wp` pushed: left-to-right post-ish order.
    // `build` consumes: Seq -> own mid, then first subtree, then second;
    // While -> own inv, then body. Walk both orders.
    fn wp_order(sk: &Sk, out: &mut Vec<*const Sk>) {
        match sk {
            Sk::Basic(_) | Sk::Nondt(_) | Sk::Await(..) => {}
            Sk::Seq(a, b) => {
                // wp(b) runs first, then wp(a), then pushes the mid.
                wp_order(b, out);
                wp_order(a, out);
                out.push(sk as *const Sk);
            }
            Sk::Cond(_, a, b) => {
                wp_order(a, out);
                wp_order(b, out);
            }
            Sk::While(_, body) => {
                // Body annotations recorded after the fixpoint, then the
                // invariant itself.
                wp_order(body, out);
                out.push(sk as *const Sk);
            }
        }
    }
    fn build_order(sk: &Sk, out: &mut Vec<*const Sk>) {
        match sk {
            Sk::Basic(_) | Sk::Nondt(_) | Sk::Await(..) => {}
            Sk::Seq(a, b) => {
                out.push(sk as *const Sk);
                build_order(a, out);
                build_order(b, out);
            }
            Sk::Cond(_, a, b) => {
                build_order(a, out);
                build_order(b, out);
            }
            Sk::While(_, body) => {
                out.push(sk as *const Sk);
                build_order(body, out);
            }
        }
    }
    let mut wp_nodes = Vec::new();
    wp_order(sk, &mut wp_nodes);
    assert_eq!(wp_nodes.len(), recorded.len(), "annotation bookkeeping");
    let mut by_node: std::collections::HashMap<*const Sk, StateSet> = wp_nodes
        .into_iter()
        .zip(recorded)
        .collect();
    let mut build_nodes = Vec::new();
    build_order(sk, &mut build_nodes);
    build_nodes
        .into_iter()
        .map(|n| by_node.remove(&n).expect("annotation per node"))
        .collect()
}

/// A deliberately broken outline with the premise it must fail at.
pub struct BrokenCase {
    pub name: &'static str,
    pub expect_premise: &'static str,
    pub model: Model,
    pub universe: Arc<Universe>,
    pub outline: Outline,
}

fn base_rg() -> RgCond {
    RgCond {
        pre: univ(),
        rely: id_rel(),
        guar: StateRel((0..N).flat_map(|i| (0..N).map(move |j| (i, j))).collect()),
        post: univ(),
    }
}

fn basic_node(v: i64) -> OutlineNode {
    OutlineNode::Basic {
        assigns: vec![picore::model::Assign {
            var: "x".into(),
            key: None,
            rhs: Expr::lit_int(v),
        }],
    }
}

/// A model with two parameterless skip events, for the event-level cases.
fn event_model() -> Model {
    MB::new("outline_events")
        .cores(2)
        .int_var("x", 0, N as i64 - 1, 0)
        .event("E0", Expr::lit_bool(true), Program::skip())
        .event("E1", Expr::lit_bool(true), Program::skip())
        .all_cores_run(&["E0", "E1"])
        .build()
}

pub fn broken_outlines() -> Vec<BrokenCase> {
    let model = outline_model();
    let universe = Arc::new(state_universe(&model, 1_000_000).expect("universe"));
    let emodel = event_model();
    let euniverse = Arc::new(state_universe(&emodel, 1_000_000).expect("universe"));
    let mut out: Vec<BrokenCase> = Vec::new();

    let push = |name: &'static str,
                    premise: &'static str,
                    which: u8,
                    outline: Outline,
                    out: &mut Vec<BrokenCase>| {
        let (m, u) = if which == 0 {
            (model.clone(), Arc::clone(&universe))
        } else {
            (emodel.clone(), Arc::clone(&euniverse))
        };
        out.push(BrokenCase {
            name,
            expect_premise: premise,
            model: m,
            universe: u,
            outline,
        });
    };

    // Basic rule.
    {
        let mut rg = base_rg();
        rg.post = set([0u32]);
        push(
            "basic wrong post",
            "basic.pre-establishes-post",
            0,
            Outline::new(rg, basic_node(1)),
            &mut out,
        );

        let mut rg = base_rg();
        rg.guar = id_rel();
        push(
            "basic effect outside guarantee",
            "basic.effect-in-guar",
            0,
            Outline::new(rg, basic_node(1)),
            &mut out,
        );

        let mut rg = base_rg();
        // Effect pairs only, no stutters.
        rg.guar = StateRel((0..N).map(|s| (s, 1)).collect());
        push(
            "basic stutter outside guarantee",
            "basic.effect-in-guar",
            0,
            Outline::new(rg, basic_node(1)),
            &mut out,
        );

        let mut rg = base_rg();
        rg.pre = set([0u32]);
        rg.rely = StateRel(std::iter::once((0u32, 1u32)).chain((0..N).map(|i| (i, i))).collect());
        push(
            "basic unstable pre",
            "basic.stable-pre",
            0,
            Outline::new(rg, basic_node(1)),
            &mut out,
        );

        let mut rg = base_rg();
        rg.post = set([1u32]);
        rg.rely = StateRel(std::iter::once((1u32, 2u32)).chain((0..N).map(|i| (i, i))).collect());
        push(
            "basic unstable post",
            "basic.stable-post",
            0,
            Outline::new(rg, basic_node(1)),
            &mut out,
        );
    }

    // Seq linkage shape.
    {
        let rg = base_rg();
        let mut first_rg = rg.clone();
        first_rg.pre = set([0u32]); // parent pre is UNIV: mismatch
        let first = Outline::new(first_rg, basic_node(1));
        let second = Outline::new(rg.clone(), basic_node(2));
        push(
            "seq child shape mismatch",
            "shape",
            0,
            Outline::new(
                rg,
                OutlineNode::Seq {
                    first: Box::new(first),
                    second: Box::new(second),
                },
            ),
            &mut out,
        );
    }

    // Cond rule.
    {
        let mut rg = base_rg();
        rg.pre = set([0u32]);
        rg.rely = StateRel(std::iter::once((0u32, 1u32)).chain((0..N).map(|i| (i, i))).collect());
        let guard = set([0u32, 1]);
        let then_branch = Outline::new(
            RgCond {
                pre: rg.pre.intersect(&guard),
                rely: rg.rely.clone(),
                guar: rg.guar.clone(),
                post: rg.post.clone(),
            },
            basic_node(1),
        );
        let not_guard = set((0..N).filter(|s| !guard.contains(*s)));
        let else_branch = Outline::new(
            RgCond {
                pre: rg.pre.intersect(&not_guard),
                rely: rg.rely.clone(),
                guar: rg.guar.clone(),
                post: rg.post.clone(),
            },
            basic_node(2),
        );
        push(
            "cond unstable pre",
            "cond.stable-pre",
            0,
            Outline::new(
                rg,
                OutlineNode::Cond {
                    guard,
                    then_branch: Box::new(then_branch),
                    else_branch: Box::new(else_branch),
                },
            ),
            &mut out,
        );

        let mut rg = base_rg();
        rg.guar = StateRel((1..N).map(|i| (i, i)).collect()); // missing (0,0)
        let guard = univ();
        let then_branch = Outline::new(
            RgCond {
                pre: rg.pre.intersect(&guard),
                rely: rg.rely.clone(),
                guar: rg.guar.clone(),
                post: rg.post.clone(),
            },
            basic_node(1),
        );
        let else_branch = Outline::new(
            RgCond {
                pre: StateSet::empty(),
                rely: rg.rely.clone(),
                guar: rg.guar.clone(),
                post: rg.post.clone(),
            },
            basic_node(2),
        );
        push(
            "cond non-reflexive guarantee",
            "cond.guar-reflexive",
            0,
            Outline::new(
                rg,
                OutlineNode::Cond {
                    guard,
                    then_branch: Box::new(then_branch),
                    else_branch: Box::new(else_branch),
                },
            ),
            &mut out,
        );
    }

    // While rule.
    {
        let mk_while = |rg: RgCond, guard: StateSet, inv: StateSet| {
            let body = Outline::new(
                RgCond {
                    pre: inv.intersect(&guard),
                    rely: rg.rely.clone(),
                    guar: rg.guar.clone(),
                    post: inv.clone(),
                },
                basic_node(0),
            );
            Outline::new(
                rg,
                OutlineNode::While {
                    guard,
                    invariant: inv,
                    body: Box::new(body),
                },
            )
        };
        // Body sets x := 0; invariant {0,1}; guard {1}.
        let guard = set([1u32]);
        let inv = set([0u32, 1]);

        let mut rg = base_rg();
        rg.pre = univ(); // not contained in inv
        rg.post = univ();
        push(
            "while pre not in invariant",
            "while.pre-implies-inv",
            0,
            mk_while(rg, guard.clone(), inv.clone()),
            &mut out,
        );

        let mut rg = base_rg();
        rg.pre = set([0u32]);
        rg.post = set([5u32]); // inv minus guard = {0} not in post
        push(
            "while exit misses post",
            "while.exit-implies-post",
            0,
            mk_while(rg, guard.clone(), inv.clone()),
            &mut out,
        );

        let mut rg = base_rg();
        rg.pre = set([0u32]);
        rg.rely = StateRel(std::iter::once((1u32, 2u32)).chain((0..N).map(|i| (i, i))).collect());
        push(
            "while unstable invariant",
            "while.stable-inv",
            0,
            mk_while(rg, guard.clone(), inv.clone()),
            &mut out,
        );

        let mut rg = base_rg();
        rg.pre = set([0u32]);
        rg.guar = StateRel((0..N).map(|s| (s, 0)).collect()); // irreflexive at 1..
        push(
            "while non-reflexive guarantee",
            "while.guar-reflexive",
            0,
            mk_while(rg, guard, inv),
            &mut out,
        );
    }

    // Await rule: guard {0}, body x := 3.
    {
        let mk_await = |rg: RgCond| {
            Outline::new(
                rg,
                OutlineNode::Await {
                    guard: set([0u32]),
                    body: asg_lit(3),
                },
            )
        };
        let mut rg = base_rg();
        rg.post = set([1u32]);
        push(
            "await body misses post",
            "await.body-establishes-post",
            0,
            mk_await(rg),
            &mut out,
        );

        let mut rg = base_rg();
        rg.guar = id_rel();
        push(
            "await effect outside guarantee",
            "await.effect-in-guar",
            0,
            mk_await(rg),
            &mut out,
        );

        let mut rg = base_rg();
        rg.pre = set([3u32]);
        rg.rely = StateRel(std::iter::once((3u32, 4u32)).chain((0..N).map(|i| (i, i))).collect());
        push(
            "await unstable pre",
            "await.stable-pre",
            0,
            mk_await(rg),
            &mut out,
        );
    }

    // Nondt rule.
    {
        let mk = |rg: RgCond, rel: StateRel| Outline::new(rg, OutlineNode::Nondt { rel });
        let total: StateRel = StateRel((0..N).map(|s| (s, 0)).collect());

        let mut rg = base_rg();
        rg.pre = univ();
        let partial = StateRel((1..N).map(|s| (s, 0)).collect()); // disabled at 0
        push("nondt disabled", "nondt.enabled", 0, mk(rg, partial), &mut out);

        let mut rg = base_rg();
        rg.post = set([1u32]);
        push(
            "nondt wrong post",
            "nondt.pre-establishes-post",
            0,
            mk(rg, total.clone()),
            &mut out,
        );

        let mut rg = base_rg();
        rg.guar = id_rel();
        push(
            "nondt effect outside guarantee",
            "nondt.effect-in-guar",
            0,
            mk(rg, total.clone()),
            &mut out,
        );

        let mut rg = base_rg();
        rg.post = set([0u32]);
        rg.rely = StateRel(std::iter::once((0u32, 1u32)).chain((0..N).map(|i| (i, i))).collect());
        push(
            "nondt unstable post",
            "nondt.stable-post",
            0,
            mk(rg, total),
            &mut out,
        );
    }

    // Basic-event rule (on the event model).
    {
        let en = emodel.event_index("E0").unwrap() as u32;
        let mut rg = base_rg();
        rg.pre = set([0u32]);
        rg.rely = StateRel(std::iter::once((0u32, 1u32)).chain((0..N).map(|i| (i, i))).collect());
        push(
            "event unstable pre",
            "basicevt.stable-pre",
            1,
            Outline::new(rg, OutlineNode::BasicEvt { event: en }),
            &mut out,
        );

        let mut rg = base_rg();
        rg.guar = StateRel((1..N).map(|i| (i, i)).collect());
        push(
            "event non-reflexive guarantee",
            "basicevt.guar-reflexive",
            1,
            Outline::new(rg, OutlineNode::BasicEvt { event: en }),
            &mut out,
        );
    }

    // Event-set rule: two skip events with quadruples that individually
    // pass, then one set-level premise broken at a time.
    {
        let e0 = emodel.event_index("E0").unwrap() as u32;
        let e1 = emodel.event_index("E1").unwrap() as u32;
        let member = |pre: StateSet, rely: StateRel, guar: StateRel, post: StateSet| {
            Outline::new(
                RgCond {
                    pre,
                    rely,
                    guar,
                    post,
                },
                OutlineNode::BasicEvt { event: e0 },
            )
        };
        let member1 = |pre: StateSet, post: StateSet| {
            Outline::new(
                RgCond {
                    pre,
                    rely: id_rel(),
                    guar: id_rel(),
                    post,
                },
                OutlineNode::BasicEvt { event: e1 },
            )
        };
        let mk_set = |rg: RgCond, m0: Outline, m1: Outline| {
            Outline::new(
                rg,
                OutlineNode::EvtSet {
                    members: vec![(e0, Box::new(m0)), (e1, Box::new(m1))],
                },
            )
        };
        let set_rg = RgCond {
            pre: univ(),
            rely: id_rel(),
            guar: id_rel(),
            post: univ(),
        };

        push(
            "set pre not in member pre",
            "evtset.pre-implies-member-pre",
            1,
            mk_set(
                set_rg.clone(),
                member(set([0u32]), id_rel(), id_rel(), univ()),
                member1(univ(), univ()),
            ),
            &mut out,
        );

        push(
            "set rely not in member rely",
            "evtset.rely-implies-member-rely",
            1,
            mk_set(
                RgCond {
                    rely: StateRel(
                        std::iter::once((0u32, 1u32)).chain((0..N).map(|i| (i, i))).collect(),
                    ),
                    ..set_rg.clone()
                },
                member(univ(), id_rel(), id_rel(), univ()),
                member1(univ(), univ()),
            ),
            &mut out,
        );

        push(
            "member guarantee exceeds set",
            "evtset.member-guar-implies-guar",
            1,
            mk_set(
                set_rg.clone(),
                member(
                    univ(),
                    id_rel(),
                    StateRel(
                        std::iter::once((0u32, 1u32)).chain((0..N).map(|i| (i, i))).collect(),
                    ),
                    univ(),
                ),
                member1(univ(), univ()),
            ),
            &mut out,
        );

        push(
            "member post exceeds set",
            "evtset.member-post-implies-post",
            1,
            mk_set(
                RgCond {
                    post: set([0u32]),
                    ..set_rg.clone()
                },
                member(univ(), id_rel(), id_rel(), univ()),
                member1(univ(), univ()),
            ),
            &mut out,
        );

        // E0's postcondition misses E1's precondition; everything earlier
        // in the premise order passes.
        push(
            "member post misses member pre",
            "evtset.post-implies-pre",
            1,
            mk_set(
                RgCond {
                    pre: set([0u32]),
                    ..set_rg.clone()
                },
                member(set([0u32, 1]), id_rel(), id_rel(), set([0u32, 1])),
                member1(set([0u32]), set([0u32])),
            ),
            &mut out,
        );

        // Both members tolerate the wider rely, so the set-level stability
        // premise is the first to fail.
        let wide = StateRel(
            std::iter::once((0u32, 1u32)).chain((0..N).map(|i| (i, i))).collect(),
        );
        push(
            "set unstable pre",
            "evtset.stable-pre",
            1,
            mk_set(
                RgCond {
                    pre: set([0u32]),
                    rely: wide.clone(),
                    ..set_rg.clone()
                },
                member(univ(), wide.clone(), id_rel(), univ()),
                Outline::new(
                    RgCond {
                        pre: univ(),
                        rely: wide,
                        guar: id_rel(),
                        post: univ(),
                    },
                    OutlineNode::BasicEvt { event: e1 },
                ),
            ),
            &mut out,
        );
    }

    // Anonymous-event wrapper whose body claims a different quadruple.
    {
        let rg = base_rg();
        let mut body_rg = rg.clone();
        body_rg.pre = set([0u32]);
        let body = Outline::new(body_rg, basic_node(1));
        push(
            "anonyevt child shape mismatch",
            "shape",
            0,
            Outline::new(
                rg,
                OutlineNode::AnonyEvt {
                    body: Box::new(body),
                },
            ),
            &mut out,
        );
    }

    // Consequence rule: each inclusion broken in turn.
    {
        let inner_rg = RgCond {
            pre: set([0u32, 1]),
            rely: id_rel(),
            guar: StateRel((0..N).flat_map(|i| (0..N).map(move |j| (i, j))).collect()),
            post: univ(),
        };
        let inner = || Outline::new(inner_rg.clone(), basic_node(1));
        let conseq = |rg: RgCond| {
            Outline::new(
                rg,
                OutlineNode::Conseq {
                    inner: Box::new(inner()),
                },
            )
        };
        push(
            "conseq precondition",
            "conseq.pre",
            0,
            conseq(RgCond {
                pre: univ(),
                ..inner_rg.clone()
            }),
            &mut out,
        );
        push(
            "conseq rely",
            "conseq.rely",
            0,
            conseq(RgCond {
                pre: set([0u32]),
                rely: StateRel(
                    std::iter::once((4u32, 5u32)).chain((0..N).map(|i| (i, i))).collect(),
                ),
                ..inner_rg.clone()
            }),
            &mut out,
        );
        push(
            "conseq guarantee",
            "conseq.guar",
            0,
            conseq(RgCond {
                pre: set([0u32]),
                guar: id_rel(),
                ..inner_rg.clone()
            }),
            &mut out,
        );
        push(
            "conseq postcondition",
            "conseq.post",
            0,
            conseq(RgCond {
                pre: set([0u32]),
                post: set([1u32, 2]),
                ..inner_rg.clone()
            }),
            &mut out,
        );
    }

    // Parallel rule: member systems that pass, then the parallel premises.
    {
        let e0 = emodel.event_index("E0").unwrap() as u32;
        let sys_outline = |pre: StateSet, rely: StateRel, guar: StateRel| {
            let member = Outline::new(
                RgCond {
                    pre: pre.clone(),
                    rely: rely.clone(),
                    guar: guar.clone(),
                    post: pre.clone(),
                },
                OutlineNode::BasicEvt { event: e0 },
            );
            Outline::new(
                RgCond {
                    pre,
                    rely,
                    guar,
                    post: univ(),
                },
                OutlineNode::EvtSet {
                    members: vec![(e0, Box::new(member))],
                },
            )
        };
        let par = |rg: RgCond, m0: Outline, m1: Outline| {
            Outline::new(
                rg,
                OutlineNode::Par {
                    members: vec![(0, Box::new(m0)), (1, Box::new(m1))],
                },
            )
        };
        let top = RgCond {
            pre: set([0u32]),
            rely: StateRel::empty(),
            guar: StateRel((0..N).flat_map(|i| (0..N).map(move |j| (i, j))).collect()),
            post: univ(),
        };

        push(
            "parallel pre not in member pre",
            "par.pre-implies-member-pre",
            1,
            par(
                top.clone(),
                sys_outline(set([1u32]), id_rel(), id_rel()),
                sys_outline(univ(), id_rel(), id_rel()),
            ),
            &mut out,
        );

        // Core 0 guarantees a write core 1's rely does not tolerate.
        let wide = StateRel(
            std::iter::once((0u32, 1u32)).chain((0..N).map(|i| (i, i))).collect(),
        );
        push(
            "cross guarantee not in rely",
            "par.cross-guar-rely",
            1,
            par(
                top,
                sys_outline(univ(), wide.clone(), wide.clone()),
                sys_outline(univ(), id_rel(), id_rel()),
            ),
            &mut out,
        );
    }

    out
}
