//! Small-step operational semantics: transition labels, computations, the
//! per-level step relations, bounded enumeration, and the decomposition
//! checks (simulation equality, serialization, conjoin).

mod step;
mod enumerate;
mod decompose;

pub use step::{apply_assigns, sort_successors, StepError, Stepper};
pub use enumerate::{enumerate_computations, enumerate_from, EnumerateError};
pub use decompose::{check_conjoin, check_serialization, decompose_parallel, sim_equal};

use crate::model::{Config, Model};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// The kind of an action transition: an anonymous program step, or the
/// occurrence of a declared event (by index).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ActKind {
    Prog,
    Occur(u32),
}

/// Transition label: an action (optionally located at a core) or an
/// environment transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Label {
    Act {
        kind: ActKind,
        /// The core the action runs on; `None` for bare program-level steps.
        at: Option<u32>,
    },
    Env,
}

impl Label {
    pub fn prog_at(core: u32) -> Label {
        Label::Act {
            kind: ActKind::Prog,
            at: Some(core),
        }
    }

    pub fn occur_at(ev: u32, core: u32) -> Label {
        Label::Act {
            kind: ActKind::Occur(ev),
            at: Some(core),
        }
    }

    pub fn is_env(&self) -> bool {
        matches!(self, Label::Env)
    }

    pub fn core(&self) -> Option<u32> {
        match self {
            Label::Act { at, .. } => *at,
            Label::Env => None,
        }
    }

    /// Total order used for deterministic successor enumeration: program
    /// actions before occurrences, then core, then event name; environment
    /// labels last. Needs the model to order events by name.
    pub fn cmp_in(&self, other: &Label, model: &Model) -> Ordering {
        fn rank(l: &Label) -> u8 {
            match l {
                Label::Act {
                    kind: ActKind::Prog,
                    ..
                } => 0,
                Label::Act {
                    kind: ActKind::Occur(_),
                    ..
                } => 1,
                Label::Env => 2,
            }
        }
        rank(self).cmp(&rank(other)).then_with(|| match (self, other) {
            (Label::Act { kind: k1, at: a1 }, Label::Act { kind: k2, at: a2 }) => {
                a1.cmp(a2).then_with(|| match (k1, k2) {
                    (ActKind::Occur(e1), ActKind::Occur(e2)) => model
                        .event(*e1)
                        .name
                        .cmp(&model.event(*e2).name),
                    _ => Ordering::Equal,
                })
            }
            _ => Ordering::Equal,
        })
    }

    pub fn display(&self, model: &Model) -> String {
        match self {
            Label::Env => "env".to_string(),
            Label::Act { kind, at } => {
                let k = match kind {
                    ActKind::Prog => "c".to_string(),
                    ActKind::Occur(e) => model.event(*e).name.clone(),
                };
                match at {
                    Some(c) => format!("{k}@{}", model.cores[*c as usize]),
                    None => k,
                }
            }
        }
    }
}

/// A computation: a nonempty sequence of configurations with one label per
/// step. Environment steps never change the specification component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Computation {
    pub configs: Vec<Config>,
    pub steps: Vec<Label>,
}

impl Computation {
    pub fn singleton(c: Config) -> Computation {
        Computation {
            configs: vec![c],
            steps: vec![],
        }
    }

    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> &Config {
        &self.configs[0]
    }

    pub fn last(&self) -> &Config {
        self.configs.last().unwrap()
    }

    pub fn extended(&self, label: Label, next: Config) -> Computation {
        let mut c = self.clone();
        c.configs.push(next);
        c.steps.push(label);
        c
    }

    /// Structural well-formedness: lengths agree and Env steps preserve the
    /// specification.
    pub fn well_formed(&self) -> bool {
        self.configs.len() == self.steps.len() + 1
            && self
                .steps
                .iter()
                .enumerate()
                .all(|(i, l)| !l.is_env() || self.configs[i].spec == self.configs[i + 1].spec)
    }
}
