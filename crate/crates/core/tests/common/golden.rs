//! The hand-stepped golden corpus: one micro-model per transition rule,
//! with the exact expected successor set worked out by hand.

use super::MB;
use picore::model::{
    state_universe, Config, EventCtx, EventSpec, EventSys, Expr, Model, ParSys, Program, Spec,
    State, Value,
};
use picore::semantics::{Label, Stepper};
use picore::Caps;
use std::sync::Arc;

pub struct GoldenCase {
    pub name: &'static str,
    pub model: Model,
    pub config: Config,
    pub expect: Vec<(Label, Config)>,
}

fn int_state(vals: &[i64]) -> State {
    State(vals.iter().map(|v| Value::Int(*v)).collect())
}

/// A model with a single int variable `x` in 0..3 and no events.
fn x_model() -> Model {
    MB::new("m_x").cores(1).int_var("x", 0, 3, 0).systems_noop()
}

trait NoopSys {
    fn systems_noop(self) -> Model;
}

impl NoopSys for MB {
    /// Some golden cases only exercise program-level steps; they still need
    /// a well-formed model, so give every core a trivially blocked system.
    fn systems_noop(self) -> Model {
        let b = self.event("Blocked", Expr::lit_bool(false), Program::skip());
        b.all_cores_run(&["Blocked"]).build()
    }
}

fn prog_cfg(p: Program, s: State, ncores: usize) -> Config {
    Config {
        spec: Spec::Prog(p),
        state: s,
        ectx: EventCtx::bottom(ncores),
    }
}

fn c_none() -> Label {
    Label::Act {
        kind: picore::semantics::ActKind::Prog,
        at: None,
    }
}

fn asg(var: &str, e: Expr) -> Program {
    Program::Basic(vec![picore::model::Assign {
        var: var.into(),
        key: None,
        rhs: e,
    }])
}

fn x_plus_1() -> Program {
    asg(
        "x",
        Expr::Arith(
            picore::model::ArithOp::Add,
            Box::new(Expr::var("x")),
            Box::new(Expr::lit_int(1)),
        ),
    )
}

pub fn golden_cases() -> Vec<GoldenCase> {
    let mut out = Vec::new();

    // Basic: the transformer applies in one step and the程序 terminates.
    {
        let model = x_model();
        let config = prog_cfg(x_plus_1(), int_state(&[0]), 1);
        let expect = vec![(
            c_none(),
            prog_cfg(Program::None, int_state(&[1]), 1),
        )];
        out.push(GoldenCase {
            name: "basic",
            model,
            config,
            expect,
        });
    }

    // Seq1: the first component finishes, control passes to the second.
    {
        let model = x_model();
        let p = Program::seq(asg("x", Expr::lit_int(1)), asg("x", Expr::lit_int(2)));
        let config = prog_cfg(p, int_state(&[0]), 1);
        let expect = vec![(
            c_none(),
            prog_cfg(asg("x", Expr::lit_int(2)), int_state(&[1]), 1),
        )];
        out.push(GoldenCase {
            name: "seq1",
            model,
            config,
            expect,
        });
    }

    // Seq2: the first component steps but does not finish.
    {
        let model = x_model();
        let inner = Program::seq(asg("x", Expr::lit_int(1)), asg("x", Expr::lit_int(2)));
        let p = Program::seq(inner, asg("x", Expr::lit_int(3)));
        let config = prog_cfg(p, int_state(&[0]), 1);
        let expect = vec![(
            c_none(),
            prog_cfg(
                Program::seq(asg("x", Expr::lit_int(2)), asg("x", Expr::lit_int(3))),
                int_state(&[1]),
                1,
            ),
        )];
        out.push(GoldenCase {
            name: "seq2",
            model,
            config,
            expect,
        });
    }

    // CondT / CondF: guard evaluation picks the branch without changing the
    // state.
    {
        let model = x_model();
        let p = Program::Cond(
            Expr::eq(Expr::var("x"), Expr::lit_int(0)),
            Box::new(asg("x", Expr::lit_int(1))),
            Box::new(asg("x", Expr::lit_int(2))),
        );
        let config = prog_cfg(p.clone(), int_state(&[0]), 1);
        let expect = vec![(
            c_none(),
            prog_cfg(asg("x", Expr::lit_int(1)), int_state(&[0]), 1),
        )];
        out.push(GoldenCase {
            name: "cond_true",
            model: model.clone(),
            config,
            expect,
        });
        let config = prog_cfg(p, int_state(&[3]), 1);
        let expect = vec![(
            c_none(),
            prog_cfg(asg("x", Expr::lit_int(2)), int_state(&[3]), 1),
        )];
        out.push(GoldenCase {
            name: "cond_false",
            model,
            config,
            expect,
        });
    }

    // WhileT: unfold into body followed by the loop again.
    {
        let model = x_model();
        let guard = Expr::Cmp(
            picore::model::CmpOp::Lt,
            Box::new(Expr::var("x")),
            Box::new(Expr::lit_int(2)),
        );
        let w = Program::While(guard.clone(), Box::new(x_plus_1()), None);
        let config = prog_cfg(w.clone(), int_state(&[0]), 1);
        let expect = vec![(
            c_none(),
            prog_cfg(Program::seq(x_plus_1(), w.clone()), int_state(&[0]), 1),
        )];
        out.push(GoldenCase {
            name: "while_true",
            model: model.clone(),
            config,
            expect,
        });
        // WhileF: the loop terminates when the guard fails.
        let config = prog_cfg(w, int_state(&[2]), 1);
        let expect = vec![(c_none(), prog_cfg(Program::None, int_state(&[2]), 1))];
        out.push(GoldenCase {
            name: "while_false",
            model,
            config,
            expect,
        });
    }

    // Await: the body runs atomically to completion; the intermediate state
    // never appears.
    {
        let model = MB::new("m_lock")
            .cores(1)
            .int_var("lock", 0, 1, 0)
            .systems_noop();
        let body = Program::seq(asg("lock", Expr::lit_int(1)), asg("lock", Expr::lit_int(0)));
        let aw = Program::Await(
            Expr::eq(Expr::var("lock"), Expr::lit_int(0)),
            Box::new(body),
        );
        let config = prog_cfg(aw.clone(), int_state(&[0]), 1);
        let expect = vec![(c_none(), prog_cfg(Program::None, int_state(&[0]), 1))];
        out.push(GoldenCase {
            name: "await_atomic",
            model: model.clone(),
            config,
            expect,
        });
        // Blocked await: no rule applies when the guard fails.
        let config = prog_cfg(aw, int_state(&[1]), 1);
        out.push(GoldenCase {
            name: "await_blocked",
            model,
            config,
            expect: vec![],
        });
    }

    // Nondt: one successor per related post-state.
    {
        let model = x_model();
        let rel = Expr::or(
            Expr::eq(
                Expr::Prime("x".into()),
                Expr::Arith(
                    picore::model::ArithOp::Add,
                    Box::new(Expr::var("x")),
                    Box::new(Expr::lit_int(1)),
                ),
            ),
            Expr::eq(Expr::Prime("x".into()), Expr::var("x")),
        );
        let config = prog_cfg(Program::Nondt(rel), int_state(&[1]), 1);
        let expect = vec![
            (c_none(), prog_cfg(Program::None, int_state(&[1]), 1)),
            (c_none(), prog_cfg(Program::None, int_state(&[2]), 1)),
        ];
        out.push(GoldenCase {
            name: "nondt",
            model,
            config,
            expect,
        });
    }

    // AnonyEvt: program steps lift to the event level at every core.
    {
        let model = MB::new("m_anony")
            .cores(2)
            .int_var("x", 0, 3, 0)
            .event("Blocked", Expr::lit_bool(false), Program::skip())
            .all_cores_run(&["Blocked"])
            .build();
        let config = Config {
            spec: Spec::Event(EventSpec::Anony(asg("x", Expr::lit_int(1)))),
            state: int_state(&[0]),
            ectx: EventCtx::bottom(2),
        };
        let mk = |_core: u32| Config {
            spec: Spec::Event(EventSpec::Anony(Program::None)),
            state: int_state(&[1]),
            ectx: EventCtx::bottom(2),
        };
        let expect = vec![
            (Label::prog_at(0), mk(0)),
            (Label::prog_at(1), mk(1)),
        ];
        out.push(GoldenCase {
            name: "anonyevt",
            model,
            config,
            expect,
        });
    }

    // BasicEvt: the occurrence binds the event into the context and leaves
    // the state unchanged; the residual is the anonymous body.
    {
        let model = MB::new("m_occ")
            .cores(2)
            .int_var("lock", 0, 1, 0)
            .event(
                "Acquire",
                Expr::eq(Expr::var("lock"), Expr::lit_int(0)),
                Program::seq(asg("lock", Expr::lit_int(1)), asg("lock", Expr::lit_int(0))),
            )
            .all_cores_run(&["Acquire"])
            .build();
        let acquire = model.event_index("Acquire").unwrap() as u32;
        let config = Config {
            spec: Spec::Event(EventSpec::Basic(acquire)),
            state: int_state(&[0]),
            ectx: EventCtx::bottom(2),
        };
        let body = Program::seq(asg("lock", Expr::lit_int(1)), asg("lock", Expr::lit_int(0)));
        let expect = vec![
            (
                Label::occur_at(acquire, 0),
                Config {
                    spec: Spec::Event(EventSpec::Anony(body.clone())),
                    state: int_state(&[0]),
                    ectx: EventCtx::bottom(2).with(0, acquire),
                },
            ),
            (
                Label::occur_at(acquire, 1),
                Config {
                    spec: Spec::Event(EventSpec::Anony(body.clone())),
                    state: int_state(&[0]),
                    ectx: EventCtx::bottom(2).with(1, acquire),
                },
            ),
        ];
        out.push(GoldenCase {
            name: "basicevt",
            model: model.clone(),
            config,
            expect,
        });
        // Unsatisfiable guard: no occurrence.
        let config = Config {
            spec: Spec::Event(EventSpec::Basic(acquire)),
            state: int_state(&[1]),
            ectx: EventCtx::bottom(2),
        };
        out.push(GoldenCase {
            name: "basicevt_blocked",
            model,
            config,
            expect: vec![],
        });
    }

    // EvtSet: occurrence of an enabled member turns into a sequence whose
    // tail is the original set (re-entry).
    {
        let model = MB::new("m_set")
            .cores(1)
            .int_var("x", 0, 3, 0)
            .event("Inc", Expr::lit_bool(true), x_plus_1())
            .all_cores_run(&["Inc"])
            .build();
        let inc = model.event_index("Inc").unwrap() as u32;
        let set = EventSys::Set(vec![inc]);
        let config = Config {
            spec: Spec::Sys(set.clone()),
            state: int_state(&[0]),
            ectx: EventCtx::bottom(1),
        };
        let expect = vec![(
            Label::occur_at(inc, 0),
            Config {
                spec: Spec::Sys(EventSys::Seq(
                    EventSpec::Anony(x_plus_1()),
                    None,
                    Box::new(set.clone()),
                )),
                state: int_state(&[0]),
                ectx: EventCtx::bottom(1).with(0, inc),
            },
        )];
        out.push(GoldenCase {
            name: "evtset",
            model: model.clone(),
            config,
            expect,
        });

        // EvtSeq1: the head event steps without finishing.
        let two_step = Program::seq(asg("x", Expr::lit_int(1)), asg("x", Expr::lit_int(2)));
        let model2 = MB::new("m_seq1")
            .cores(1)
            .int_var("x", 0, 3, 0)
            .event("Two", Expr::lit_bool(true), two_step.clone())
            .event("Inc", Expr::lit_bool(true), x_plus_1())
            .systems(vec![EventSys::Seq(
                EventSpec::Basic(0),
                None,
                Box::new(EventSys::Set(vec![1])),
            )])
            .build();
        let config = Config {
            spec: Spec::Sys(EventSys::Seq(
                EventSpec::Basic(0),
                None,
                Box::new(EventSys::Set(vec![1])),
            )),
            state: int_state(&[0]),
            ectx: EventCtx::bottom(1),
        };
        let expect = vec![(
            Label::occur_at(0, 0),
            Config {
                spec: Spec::Sys(EventSys::Seq(
                    EventSpec::Anony(two_step.clone()),
                    None,
                    Box::new(EventSys::Set(vec![1])),
                )),
                state: int_state(&[0]),
                ectx: EventCtx::bottom(1).with(0, 0),
            },
        )];
        out.push(GoldenCase {
            name: "evtseq1",
            model: model2.clone(),
            config,
            expect,
        });

        // EvtSeq2: the completing step hands control to the tail system.
        let config = Config {
            spec: Spec::Sys(EventSys::Seq(
                EventSpec::Anony(asg("x", Expr::lit_int(2))),
                None,
                Box::new(EventSys::Set(vec![1])),
            )),
            state: int_state(&[1]),
            ectx: EventCtx::bottom(1).with(0, 0),
        };
        let expect = vec![(
            Label::prog_at(0),
            Config {
                spec: Spec::Sys(EventSys::Set(vec![1])),
                state: int_state(&[2]),
                ectx: EventCtx::bottom(1).with(0, 0),
            },
        )];
        out.push(GoldenCase {
            name: "evtseq2_handoff",
            model: model2,
            config,
            expect,
        });
    }

    // Par: the successor set is the disjoint union of the per-core lifted
    // steps.
    {
        let model = MB::new("m_par")
            .cores(2)
            .int_var("x", 0, 3, 0)
            .event("Inc", Expr::lit_bool(true), x_plus_1())
            .all_cores_run(&["Inc"])
            .build();
        let inc = model.event_index("Inc").unwrap() as u32;
        let set = EventSys::Set(vec![inc]);
        let ps = ParSys(vec![set.clone(), set.clone()]);
        let config = Config {
            spec: Spec::Par(ps.clone()),
            state: int_state(&[0]),
            ectx: EventCtx::bottom(2),
        };
        let seq_residual = EventSys::Seq(
            EventSpec::Anony(x_plus_1()),
            None,
            Box::new(set.clone()),
        );
        let expect = vec![
            (
                Label::occur_at(inc, 0),
                Config {
                    spec: Spec::Par(ParSys(vec![seq_residual.clone(), set.clone()])),
                    state: int_state(&[0]),
                    ectx: EventCtx::bottom(2).with(0, inc),
                },
            ),
            (
                Label::occur_at(inc, 1),
                Config {
                    spec: Spec::Par(ParSys(vec![set.clone(), seq_residual.clone()])),
                    state: int_state(&[0]),
                    ectx: EventCtx::bottom(2).with(1, inc),
                },
            ),
        ];
        out.push(GoldenCase {
            name: "par_interleave",
            model: model.clone(),
            config,
            expect,
        });

        // All systems blocked: no parallel step.
        let model_blocked = MB::new("m_par_blocked")
            .cores(2)
            .int_var("x", 0, 3, 0)
            .event("Never", Expr::lit_bool(false), Program::skip())
            .all_cores_run(&["Never"])
            .build();
        let config = model_blocked.initial_config().unwrap();
        out.push(GoldenCase {
            name: "par_blocked",
            model: model_blocked,
            config,
            expect: vec![],
        });
    }

    out
}

/// Run every golden case; returns the failures.
pub fn run_golden() -> Vec<String> {
    let mut failures = Vec::new();
    for case in golden_cases() {
        let caps = Caps::default();
        let universe =
            Arc::new(state_universe(&case.model, caps.max_universe).expect("universe"));
        let stepper = Stepper::new(&case.model, universe, 1000);
        match stepper.step_config(&case.config) {
            Err(e) => failures.push(format!("{}: step error {e}", case.name)),
            Ok(got) => {
                if got != case.expect {
                    failures.push(format!(
                        "{}: got {} successors, expected {}",
                        case.name,
                        got.len(),
                        case.expect.len()
                    ));
                }
            }
        }
    }
    failures
}
