//! Bounded enumeration of closed computations (action steps only).
//! Enumeration is depth-first in the documented successor order, so the
//! output order is deterministic: a computation precedes its extensions.

use super::{Computation, StepError, Stepper};
use crate::model::{Config, EventCtx, ParSys, Spec, State};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EnumerateError {
    #[error("computation count exceeded the cap of {cap}")]
    TooMany { cap: usize },
    #[error(transparent)]
    Step(#[from] StepError),
}

/// All closed computations of length (number of configurations) at most
/// `max_len` starting from `from`, in depth-first enumeration order.
pub fn enumerate_from(
    stepper: &Stepper,
    from: Config,
    max_len: usize,
    cap: usize,
) -> Result<Vec<Computation>, EnumerateError> {
    assert!(max_len >= 1, "max_len must be at least 1");
    let mut out = Vec::new();
    let mut stack = vec![Computation::singleton(from)];
    while let Some(comp) = stack.pop() {
        if out.len() >= cap {
            return Err(EnumerateError::TooMany { cap });
        }
        if comp.len() < max_len {
            let succs = stepper.step_config(comp.last())?;
            // Push in reverse so the depth-first order follows the
            // documented successor order.
            for (label, cfg) in succs.into_iter().rev() {
                stack.push(comp.extended(label, cfg));
            }
        }
        out.push(comp);
    }
    // Depth-first emission above yields prefix order already, but pushing
    // the parent before its children means the parent appears first; the
    // stack discipline emits parent, then children in order.
    Ok(out)
}

/// All closed computations of a parallel event system from an initial state
/// and event context.
pub fn enumerate_computations(
    stepper: &Stepper,
    ps: &ParSys,
    s0: &State,
    x0: &EventCtx,
    max_len: usize,
    cap: usize,
) -> Result<Vec<Computation>, EnumerateError> {
    enumerate_from(
        stepper,
        Config {
            spec: Spec::Par(ps.clone()),
            state: s0.clone(),
            ectx: x0.clone(),
        },
        max_len,
        cap,
    )
}
