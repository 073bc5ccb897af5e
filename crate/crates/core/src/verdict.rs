//! Structured pass/fail reports. A failing verdict always carries the first
//! counterexample witness in the documented enumeration order, with enough
//! identifiers for an independent re-check.

use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// Counterexample payload. Display strings are for humans; the ids refer to
/// machine configurations, actions, or universe states.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub enum Witness {
    /// Two states a domain tells apart where it should not (or vice versa).
    ObsPair {
        domain: String,
        c1: u32,
        c2: u32,
        c1_text: String,
        c2_text: String,
        ob1: String,
        ob2: String,
    },
    /// A step visible to a domain its actor may not interfere with.
    LrStep {
        action: u32,
        action_text: String,
        domain: String,
        c: u32,
        c_next: u32,
        c_text: String,
        c_next_text: String,
    },
    /// Two premise-equivalent configurations whose successors diverge.
    ScPair {
        action: u32,
        action_text: String,
        domain: String,
        c1: u32,
        c2: u32,
        c1_next: u32,
        c2_next: u32,
    },
    /// A bounded security-property violation: sequence, its purged form, the
    /// start configurations, and the distinguishing observations.
    IfsSeq {
        property: String,
        domain: String,
        seq: Vec<u32>,
        seq_text: String,
        purged: Vec<u32>,
        purged_text: String,
        c1: u32,
        c2: u32,
        ob1: String,
        ob2: String,
    },
    /// A failing proof-outline premise, by node path and premise id.
    Premise {
        path: String,
        premise: String,
        detail: String,
    },
    /// An event-level unwinding-condition violation over a guarantee pair.
    EventStep {
        event: String,
        domain: String,
        s1: u32,
        s2: u32,
        s1_text: String,
        s2_text: String,
        detail: String,
    },
    /// Free-form witness for semantic-validity failures.
    Trace {
        detail: String,
        steps: Vec<String>,
    },
}

/// Outcome of one check: property name, verdict, optional witness, and
/// counters describing how much of the quantification was vacuous.
#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub property: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    /// Conclusions that held vacuously because an execution set was empty.
    pub vacuous: u64,
    /// Conclusions actually checked.
    pub checked: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub millis: u128,
}

impl Verdict {
    pub fn pass(property: impl Into<String>) -> Verdict {
        Verdict {
            property: property.into(),
            holds: true,
            bound: None,
            witness: None,
            vacuous: 0,
            checked: 0,
            notes: vec![],
            millis: 0,
        }
    }

    pub fn fail(property: impl Into<String>, witness: Witness) -> Verdict {
        Verdict {
            property: property.into(),
            holds: false,
            bound: None,
            witness: Some(witness),
            vacuous: 0,
            checked: 0,
            notes: vec![],
            millis: 0,
        }
    }

    pub fn with_bound(mut self, k: usize) -> Verdict {
        self.bound = Some(k);
        self
    }

    pub fn note(mut self, n: impl Into<String>) -> Verdict {
        self.notes.push(n.into());
        self
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.holds { "holds" } else { "FAILS" };
        write!(f, "{}: {status}", self.property)?;
        if let Some(k) = self.bound {
            write!(f, " (bound {k})")?;
        }
        if self.vacuous > 0 {
            write!(
                f,
                " [{} vacuous of {}]",
                self.vacuous,
                self.vacuous + self.checked
            )?;
        }
        if let Some(w) = &self.witness {
            write!(f, "\n  witness: {w:?}")?;
        }
        for n in &self.notes {
            write!(f, "\n  note: {n}")?;
        }
        Ok(())
    }
}

/// Report for the compositional certification pipeline: one verdict per
/// premise, the conclusion, and the optional bounded-oracle cross-check.
#[derive(Debug, Clone, Serialize)]
pub struct CertificationReport {
    pub premises: Vec<(String, Verdict)>,
    pub certified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_noninfluence: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_nonleakage: Option<Verdict>,
}

impl CertificationReport {
    pub fn premise(&self, name: &str) -> Option<&Verdict> {
        self.premises
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v)
    }
}

/// Top-level run report emitted by the command line.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub tool_version: String,
    pub model_digest: String,
    pub subcommand: String,
    pub parameters: BTreeMap<String, String>,
    pub verdicts: Vec<Verdict>,
    pub wall_ms: u128,
}
